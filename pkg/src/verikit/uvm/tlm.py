"""Queues, analysis ports and TLM FIFOs."""

from collections import deque

from ..sim import Park
from .base import uvm_component
from .context import FIFO_DEBUG
from .errors import UVMError


class QueueEmpty(Exception):
    pass


class QueueFull(Exception):
    pass


class Queue:
    """FIFO usable from kernel tasks.  ``maxsize=0`` means unbounded."""

    def __init__(self, maxsize=0):
        if maxsize < 0:
            raise ValueError("maxsize must be >= 0")
        self.maxsize = maxsize
        self._items = deque()
        self._getters = deque()
        self._putters = deque()

    def qsize(self):
        return len(self._items)

    def empty(self):
        return not self._items

    def full(self):
        return self.maxsize > 0 and len(self._items) >= self.maxsize

    @staticmethod
    def _wake_one(waiters):
        if waiters:
            task = waiters.popleft()
            task.sim._schedule(task)

    def put_nowait(self, item):
        if self.full():
            raise QueueFull()
        self._items.append(item)
        self._wake_one(self._getters)

    async def put(self, item):
        while self.full():
            await Park(self._putters, "Queue.put")
        self.put_nowait(item)

    def get_nowait(self):
        if not self._items:
            raise QueueEmpty()
        item = self._items.popleft()
        self._wake_one(self._putters)
        return item

    async def get(self):
        while not self._items:
            await Park(self._getters, "Queue.get")
        return self.get_nowait()

    def peek_nowait(self):
        if not self._items:
            raise QueueEmpty()
        return self._items[0]

    def __len__(self):
        return len(self._items)


# --------------------------------------------------------------------------
# Analysis ports
# --------------------------------------------------------------------------

class uvm_analysis_export:
    """Anything with a ``write(item)`` method can subscribe to an analysis port."""

    def write(self, item):
        raise NotImplementedError


class uvm_analysis_port(uvm_component):
    def __init__(self, name, parent):
        super().__init__(name, parent)
        self.subscribers = []

    def connect(self, export):
        if not callable(getattr(export, "write", None)):
            raise UVMError(f"{self.get_full_name()}: {export!r} has no write() method")
        self.subscribers.append(export)

    def write(self, item):
        for sub in self.subscribers:
            sub.write(item)


class uvm_subscriber(uvm_component):
    """Component whose ``analysis_export`` forwards to its own ``write``."""

    def __init__(self, name, parent):
        super().__init__(name, parent)
        self.analysis_export = self

    def write(self, item):
        raise NotImplementedError


# --------------------------------------------------------------------------
# FIFOs and get/put ports
# --------------------------------------------------------------------------

class _FifoGetExport:
    def __init__(self, fifo):
        self.fifo = fifo

    async def get(self):
        return await self.fifo.queue.get()

    def try_get(self):
        try:
            return True, self.fifo.queue.get_nowait()
        except QueueEmpty:
            return False, None

    def can_get(self):
        return not self.fifo.queue.empty()

    def try_peek(self):
        try:
            return True, self.fifo.queue.peek_nowait()
        except QueueEmpty:
            return False, None


class _FifoPutExport:
    def __init__(self, fifo):
        self.fifo = fifo

    async def put(self, item):
        await self.fifo.queue.put(item)

    def try_put(self, item):
        try:
            self.fifo.queue.put_nowait(item)
            return True
        except QueueFull:
            return False

    def can_put(self):
        return not self.fifo.queue.full()


class _FifoAnalysisExport(uvm_analysis_export):
    def __init__(self, fifo):
        self.fifo = fifo

    def write(self, item):
        self.fifo.queue.put_nowait(item)
        self.fifo.logger.log(FIFO_DEBUG, "received %r", item)


class uvm_tlm_fifo(uvm_component):
    def __init__(self, name, parent, maxsize=1):
        super().__init__(name, parent)
        self.queue = Queue(maxsize)
        self.get_export = _FifoGetExport(self)
        self.put_export = _FifoPutExport(self)

    def size(self):
        return self.queue.qsize()

    def is_empty(self):
        return self.queue.empty()

    def flush(self):
        while not self.queue.empty():
            self.queue.get_nowait()


class uvm_tlm_analysis_fifo(uvm_tlm_fifo):
    """Unbounded FIFO fed through ``analysis_export``; never drops items."""

    def __init__(self, name, parent):
        super().__init__(name, parent, maxsize=0)
        self.analysis_export = _FifoAnalysisExport(self)


class _Port(uvm_component):
    def __init__(self, name, parent):
        super().__init__(name, parent)
        self.export = None

    def connect(self, export):
        self.export = export

    def _bound(self):
        if self.export is None:
            raise UVMError(f"{self.get_full_name()} is not connected")
        return self.export


class uvm_get_port(_Port):
    async def get(self):
        return await self._bound().get()

    def try_get(self):
        return self._bound().try_get()

    def can_get(self):
        return self._bound().can_get()


class uvm_put_port(_Port):
    async def put(self, item):
        await self._bound().put(item)

    def try_put(self, item):
        return self._bound().try_put(item)

    def can_put(self):
        return self._bound().can_put()
