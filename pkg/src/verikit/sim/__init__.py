"""Clocked discrete-event simulation kernel."""

from .kernel import (
    ClockCycles,
    ConfigurationError,
    DeadlockError,
    Event,
    FallingEdge,
    Join,
    Park,
    RealSignal,
    RisingEdge,
    Signal,
    SimulationError,
    Simulator,
    Task,
    Timer,
    Trigger,
    get_int,
)
from .logic import LogicConversionError, LogicValue

__all__ = [
    "ClockCycles", "ConfigurationError", "DeadlockError", "Event", "FallingEdge",
    "Join", "LogicConversionError", "LogicValue", "Park", "RealSignal",
    "RisingEdge", "Signal", "SimulationError", "Simulator", "Task", "Timer",
    "Trigger", "get_int",
]
