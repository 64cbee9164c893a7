"""UVM-style methodology layer: components, phases, ConfigDB, TLM and sequences."""

from ..sim import ClockCycles, FallingEdge, RisingEdge, Timer
from .base import (
    TOP_NAME,
    ConfigDb,
    glob_match,
    uvm_agent,
    uvm_component,
    uvm_env,
    uvm_factory,
    uvm_monitor,
    uvm_object,
    uvm_scoreboard,
    uvm_test,
)
from .context import (
    FIFO_DEBUG,
    PYUVM_DEBUG,
    ConfigDB,
    RunContext,
    current,
    get_sim,
    parse_log_level,
    top,
)
from .errors import ConfigDbError, FactoryError, ProtocolError, TestRegistryError, UVMError
from .runner import TestResult, get_test, registered_tests, run_test, test
from .sequences import (
    uvm_driver,
    uvm_seq_item_export,
    uvm_seq_item_port,
    uvm_sequence,
    uvm_sequence_item,
    uvm_sequencer,
)
from .tlm import (
    Queue,
    QueueEmpty,
    QueueFull,
    uvm_analysis_export,
    uvm_analysis_port,
    uvm_get_port,
    uvm_put_port,
    uvm_subscriber,
    uvm_tlm_analysis_fifo,
    uvm_tlm_fifo,
)
