"""Sequence items, sequences, the sequencer and the driver-side item port."""

from collections import deque

from ..crv import RandObj
from ..sim import Event, Park
from . import context
from .base import uvm_component, uvm_object
from .errors import ProtocolError, UVMError
from .tlm import Queue


class uvm_sequence_item(uvm_object, RandObj):
    def __init__(self, name="item"):
        super().__init__(name)
        self._done = None

    def randomize(self, rng=None, policy=None):
        """Randomize from ``rng`` or, when omitted, the run's shared item stream."""
        return super().randomize(rng if rng is not None else context.current().item_rng(), policy)

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return all(getattr(self, n) == getattr(other, n) for n in self.rand_fields())

    __hash__ = object.__hash__

    def __str__(self):
        fields = " ".join(f"{n}: {getattr(self, n)}" for n in self.rand_fields())
        return f"{self.get_name()} : {fields}"


class uvm_seq_item_export:
    """Driver-facing side of a sequencer."""

    def __init__(self, sequencer):
        self.sequencer = sequencer


class uvm_sequencer(uvm_component):
    """Arbitrates sequences in arrival order and hands items to one driver."""

    def __init__(self, name, parent):
        super().__init__(name, parent)
        self.seq_item_export = uvm_seq_item_export(self)
        self._requests = Queue(0)
        self._grant_waiters = deque()
        self._grant_tickets = deque()
        self._owner = None
        self._granted_item = None

    async def _acquire(self, sequence, item):
        if self._owner is sequence or any(seq is sequence for seq, _ in self._grant_tickets):
            raise ProtocolError(f"start_item({item.get_name()!r}) before the previous item finished")
        if self._owner is None:
            self._owner, self._granted_item = sequence, item
            return
        # ownership is handed over in _release so a late arrival cannot jump ahead
        self._grant_tickets.append((sequence, item))
        await Park(self._grant_waiters, f"{self.get_full_name()} grant")

    def _release(self):
        self._owner = self._granted_item = None
        if self._grant_waiters:
            task = self._grant_waiters.popleft()
            self._owner, self._granted_item = self._grant_tickets.popleft()
            task.sim._schedule(task)

    async def _send(self, sequence, item):
        if self._owner is not sequence or self._granted_item is not item:
            raise ProtocolError(f"finish_item({item.get_name()!r}) without a matching start_item")
        item._done = Event(f"{item.get_name()} done")
        self._requests.put_nowait(item)
        await item._done.wait()
        self._release()


class uvm_seq_item_port(uvm_component):
    def __init__(self, name, parent):
        super().__init__(name, parent)
        self._export = None
        self._outstanding = None

    def connect(self, export):
        if not isinstance(export, uvm_seq_item_export):
            raise UVMError(f"{self.get_full_name()} must connect to a sequencer's seq_item_export")
        self._export = export

    def _seqr(self):
        if self._export is None:
            raise UVMError(f"{self.get_full_name()} is not connected")
        return self._export.sequencer

    async def get_next_item(self):
        if self._outstanding is not None:
            raise ProtocolError("get_next_item called twice without item_done")
        seqr = self._seqr()
        self._outstanding = True  # claims the slot while blocked
        item = await seqr._requests.get()
        self._outstanding = item
        return item

    def item_done(self, rsp=None):
        item = self._outstanding
        if item is None or item is True:
            raise ProtocolError("item_done without an outstanding item")
        self._outstanding = None
        item._done.set(rsp)


class uvm_driver(uvm_component):
    def __init__(self, name, parent):
        super().__init__(name, parent)
        self.seq_item_port = uvm_seq_item_port("seq_item_port", self)


class uvm_sequence(uvm_object):
    def __init__(self, name="seq"):
        super().__init__(name)
        self.sequencer = None
        self._rng = None

    @property
    def rng(self):
        """Stream derived from the run seed and ``<sequencer path>.<sequence name>``."""
        if self._rng is None:
            base = self.sequencer.get_full_name() if self.sequencer is not None else ""
            self._rng = context.current().rng(f"{base}.{self.get_name()}")
        return self._rng

    async def start(self, sequencer):
        if sequencer is None:
            raise UVMError(f"sequence {self.get_name()!r} started without a sequencer")
        self.sequencer = sequencer
        await self.body()

    async def body(self):
        pass

    async def start_item(self, item):
        await self.sequencer._acquire(self, item)

    async def finish_item(self, item):
        await self.sequencer._send(self, item)
