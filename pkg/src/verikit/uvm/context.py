"""Per-run state shared by every component: kernel, ConfigDB, objections, coverage."""

import contextlib
import logging

from ..crv import Rng, derive_seed
from ..fcov import CoverageDb
from ..sim import Simulator
from .errors import UVMError

PYUVM_DEBUG = 4
FIFO_DEBUG = 5
logging.addLevelName(PYUVM_DEBUG, "PYUVM_DEBUG")
logging.addLevelName(FIFO_DEBUG, "FIFO_DEBUG")

LOG_ROOT = "verikit.tb"

LOG_LEVELS = {
    "PYUVM_DEBUG": PYUVM_DEBUG,
    "FIFO_DEBUG": FIFO_DEBUG,
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}


def parse_log_level(text):
    if isinstance(text, int):
        return text
    text = str(text).strip().upper()
    if text.isdigit():
        return int(text)
    try:
        return LOG_LEVELS[text]
    except KeyError:
        raise ValueError(f"unknown log level {text!r}") from None


class SimLogFormatter(logging.Formatter):
    """``<time ns> <LEVEL> <component.path> <message>``"""

    def format(self, record):
        t = getattr(record, "sim_time", "-")
        path = getattr(record, "path", record.name)
        return f"{t} {record.levelname} {path} {record.getMessage()}"


class _Recorder(logging.Handler):
    def __init__(self):
        super().__init__(logging.NOTSET)
        self.counts = {}
        self.lines = []
        self.setFormatter(SimLogFormatter())

    def emit(self, record):
        self.counts[record.levelname] = self.counts.get(record.levelname, 0) + 1
        self.lines.append(self.format(record))


class Objection:
    """Reference count gating the end of the run phase."""

    def __init__(self, sim):
        self.sim = sim
        self.count = 0
        self.ever_raised = False
        self.active = False

    def raise_(self):
        if not self.active:
            raise UVMError("raise_objection outside the run phase")
        self.count += 1
        self.ever_raised = True

    def drop(self):
        if not self.active:
            raise UVMError("drop_objection outside the run phase")
        if self.count == 0:
            raise UVMError("drop_objection with no objection raised")
        self.count -= 1
        if self.count == 0:
            self.sim.stop()


class RunContext:
    def __init__(self, seed=0, sim=None, log_level=logging.INFO, test_name="", transactions=0):
        from .base import ConfigDb
        self.seed = seed
        self.sim = sim if sim is not None else Simulator()
        self.config_db = ConfigDb()
        self.objection = Objection(self.sim)
        self.coverage = CoverageDb(test=test_name, seed=str(seed), transactions=transactions)
        self.log_level = log_level
        self.top = None
        self.recorder = _Recorder()
        self.phase_trace = []
        self._item_rng = None

    def rng(self, path):
        return Rng(derive_seed(self.seed, path))

    def item_rng(self):
        if self._item_rng is None:
            self._item_rng = self.rng("<items>")
        return self._item_rng


_current = None


def current():
    """Active run context; a default one is created on first use."""
    global _current
    if _current is None:
        _current = RunContext()
    return _current


@contextlib.contextmanager
def activate(ctx):
    global _current
    prev = _current
    _current = ctx
    logger = logging.getLogger(LOG_ROOT)
    logger.propagate = False
    prev_level = logger.level
    logger.setLevel(ctx.log_level)
    logger.addHandler(ctx.recorder)
    try:
        yield ctx
    finally:
        logger.removeHandler(ctx.recorder)
        logger.setLevel(prev_level)
        _current = prev


def reset():
    """Discard the default context (mainly for tests)."""
    global _current
    _current = None


def ConfigDB():
    return current().config_db


def top():
    """Design model of the active run (the analog of a simulator's top module)."""
    return current().top


def get_sim():
    return current().sim
