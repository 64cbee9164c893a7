"""Deterministic clocked cooperative-task scheduler.

Tasks are ``async`` coroutines that suspend by awaiting triggers.  Time is
an integer count of nanoseconds.  At each time step the kernel runs delta
cycles: every task readied in the same delta runs in ascending task-id
(registration) order, and anything those tasks wake runs in the next delta.
Time only advances once no task is ready.
"""

import heapq
import itertools
from collections import deque

from .logic import LogicValue


class SimulationError(RuntimeError):
    pass


class ConfigurationError(SimulationError):
    pass


class DeadlockError(SimulationError):
    def __init__(self, now, blocked):
        self.now = now
        self.blocked = blocked
        lines = [f"  task {t.id} {t.name!r} waiting on {t.waiting_on!r}" for t in blocked]
        super().__init__(f"deadlock at t={now}ns, {len(blocked)} blocked task(s):\n" + "\n".join(lines))


# --------------------------------------------------------------------------
# Signals
# --------------------------------------------------------------------------

class Signal:
    """Named fixed-width 4-state wire.

    Writes are visible to later reads immediately.  Width-1 signals notify
    tasks waiting on their rising (0->1) and falling (1->0) edges; X->0 and
    X->1 transitions are not edges.
    """

    __slots__ = ("name", "width", "sim", "_bits", "_xmask", "_zmask", "_full",
                 "_rise", "_fall", "_watchers")

    def __init__(self, name, width=1, sim=None, init=None):
        if width < 1:
            raise ValueError("signal width must be positive")
        self.name = name
        self.width = width
        self.sim = sim
        self._full = (1 << width) - 1
        self._bits = 0
        self._xmask = self._full
        self._zmask = 0
        self._rise = []
        self._fall = []
        self._watchers = []
        if init is not None:
            self.value = init

    @property
    def value(self):
        return LogicValue(self._bits, self.width, self._xmask, self._zmask)

    @value.setter
    def value(self, v):
        if isinstance(v, int):
            if v < 0:
                if v < -(1 << (self.width - 1)):
                    raise ValueError(f"{self.name}: {v} does not fit in {self.width} bits")
                v &= self._full
            elif v > self._full:
                raise ValueError(f"{self.name}: {v:#x} does not fit in {self.width} bits")
            xm = zm = 0
        else:
            if isinstance(v, str):
                v = LogicValue.from_str(v)
            if not isinstance(v, LogicValue):
                raise TypeError(f"{self.name}: cannot assign {type(v).__name__}")
            if v.width != self.width:
                raise ValueError(f"{self.name}: width {v.width} written to {self.width}-bit signal")
            v, xm, zm = v.bits, v.xmask, v.zmask
        old, oldx, oldz = self._bits, self._xmask, self._zmask
        if v == old and xm == oldx and zm == oldz:
            return
        self._bits, self._xmask, self._zmask = v, xm, zm
        if self.width == 1 and not (xm or zm or oldx or oldz):
            waiters = self._rise if v else self._fall
            if waiters:
                self.sim._wake_all(waiters)
                waiters.clear()
        for fn in self._watchers:
            fn(self)

    def get_int(self):
        if self._xmask or self._zmask:
            return int(self.value)  # raises LogicConversionError
        return self._bits

    def get_signed(self):
        v = self.get_int()
        return v - (1 << self.width) if v >> (self.width - 1) else v

    @property
    def is_resolvable(self):
        return not (self._xmask or self._zmask)

    def on_change(self, fn):
        """Call ``fn(signal)`` synchronously after every value change."""
        self._watchers.append(fn)

    def __int__(self):
        return self.get_int()

    def __repr__(self):
        return f"Signal({self.name!r}, width={self.width}, value={self.value.binstr})"


class RealSignal:
    """Real-valued signal (e.g. an analog input sampled by a model)."""

    __slots__ = ("name", "sim", "_value", "_watchers")
    width = None

    def __init__(self, name, sim=None, init=0.0):
        self.name = name
        self.sim = sim
        self._value = float(init)
        self._watchers = []

    @property
    def value(self):
        return self._value

    @value.setter
    def value(self, v):
        v = float(v)
        if v != self._value:
            self._value = v
            for fn in self._watchers:
                fn(self)

    def on_change(self, fn):
        self._watchers.append(fn)

    def __float__(self):
        return self._value

    def __repr__(self):
        return f"RealSignal({self.name!r}, value={self._value})"


def get_int(signal):
    """Integer value of a fully resolved signal."""
    return signal.get_int()


# --------------------------------------------------------------------------
# Triggers
# --------------------------------------------------------------------------

class Trigger:
    """Something a task can await.  Subclasses implement ``_prime``."""

    def _prime(self, sim, task):
        raise NotImplementedError

    def __await__(self):
        return (yield self)


def _resolve(sim, signal):
    if isinstance(signal, str):
        try:
            return sim.signals[signal]
        except KeyError:
            raise SimulationError(f"no signal named {signal!r}") from None
    if not isinstance(signal, Signal):
        raise SimulationError(f"cannot wait on {signal!r}")
    if signal.sim is not sim:
        raise SimulationError(f"signal {signal.name!r} is not part of this simulation")
    return signal


class RisingEdge(Trigger):
    __slots__ = ("signal",)

    def __init__(self, signal):
        if isinstance(signal, Signal) and signal.width != 1:
            raise SimulationError(f"edge trigger on {signal.width}-bit signal {signal.name!r}")
        self.signal = signal

    def _prime(self, sim, task):
        sig = _resolve(sim, self.signal)
        if sig.width != 1:
            raise SimulationError(f"edge trigger on {sig.width}-bit signal {sig.name!r}")
        sig._rise.append(task)

    def __repr__(self):
        return f"RisingEdge({getattr(self.signal, 'name', self.signal)})"


class FallingEdge(RisingEdge):
    __slots__ = ()

    def _prime(self, sim, task):
        sig = _resolve(sim, self.signal)
        if sig.width != 1:
            raise SimulationError(f"edge trigger on {sig.width}-bit signal {sig.name!r}")
        sig._fall.append(task)

    def __repr__(self):
        return f"FallingEdge({getattr(self.signal, 'name', self.signal)})"


class ClockCycles:
    """Resume after ``n`` rising (or falling) edges of ``signal``."""

    def __init__(self, signal, n, rising=True):
        if n < 1:
            raise ValueError("ClockCycles needs n >= 1")
        self.signal = signal
        self.n = n
        self.edge = RisingEdge(signal) if rising else FallingEdge(signal)

    def __await__(self):
        for _ in range(self.n):
            yield self.edge
        return self


class Timer(Trigger):
    __slots__ = ("delay",)

    def __init__(self, delay):
        if delay < 0:
            raise ValueError("negative timer delay")
        self.delay = int(delay)

    def _prime(self, sim, task):
        sim._at(sim.now + self.delay, task)

    def __repr__(self):
        return f"Timer({self.delay})"


class Park(Trigger):
    """Block until some owner pops the task from ``waiters`` and wakes it."""

    __slots__ = ("waiters", "label")

    def __init__(self, waiters, label="queue"):
        self.waiters = waiters
        self.label = label

    def _prime(self, sim, task):
        self.waiters.append(task)

    def __repr__(self):
        return f"Park({self.label})"


class Event:
    """One-shot flag tasks can wait for; ``set`` wakes every waiter."""

    def __init__(self, name="event"):
        self.name = name
        self.is_set = False
        self.data = None
        self._waiters = deque()

    def set(self, data=None):
        self.is_set = True
        self.data = data
        while self._waiters:
            task = self._waiters.popleft()
            task.sim._schedule(task)

    def clear(self):
        self.is_set = False

    async def wait(self):
        if not self.is_set:
            await Park(self._waiters, self.name)
        return self.data


class Join(Trigger):
    __slots__ = ("task",)

    def __init__(self, task):
        self.task = task

    def _prime(self, sim, task):
        if self.task.done:
            sim._schedule(task)
        else:
            self.task._joiners.append(task)

    def __await__(self):
        yield self
        return self.task.result


# --------------------------------------------------------------------------
# Tasks and the scheduler
# --------------------------------------------------------------------------

class Task:
    __slots__ = ("id", "name", "sim", "_coro", "done", "result", "waiting_on", "_joiners")

    def __init__(self, sim, tid, coro, name):
        self.sim = sim
        self.id = tid
        self.name = name
        self._coro = coro
        self.done = False
        self.result = None
        self.waiting_on = None
        self._joiners = []

    def join(self):
        return Join(self)

    def kill(self):
        if not self.done:
            self._coro.close()
            self.sim._finish(self, None)

    def __repr__(self):
        state = "done" if self.done else f"waiting on {self.waiting_on!r}"
        return f"<Task {self.id} {self.name!r} {state}>"


def _task_id(entry):
    return entry.id


class Simulator:
    """Single-executor event loop with integer nanosecond time."""

    def __init__(self, trace=False):
        self.now = 0
        self.signals = {}
        self.trace = [] if trace else None
        self._ready = []
        self._timers = []
        self._timer_seq = itertools.count()
        self._ids = itertools.count()
        self._live = {}
        self._stop = False
        self.current = None

    # -- signals ----------------------------------------------------------
    def signal(self, name, width=1, init=None):
        if name in self.signals:
            raise ConfigurationError(f"duplicate signal {name!r}")
        sig = Signal(name, width, self, init)
        self.signals[name] = sig
        return sig

    def real_signal(self, name, init=0.0):
        if name in self.signals:
            raise ConfigurationError(f"duplicate signal {name!r}")
        sig = RealSignal(name, self, init)
        self.signals[name] = sig
        return sig

    # -- tasks ------------------------------------------------------------
    def spawn(self, coro, name=None):
        """Register ``coro`` as a task runnable in the current delta cycle."""
        tid = next(self._ids)
        task = Task(self, tid, coro, name or getattr(coro, "__qualname__", f"task{tid}"))
        self._live[tid] = task
        task.waiting_on = "start"
        self._ready.append(task)
        return task

    start_soon = spawn

    def start_clock(self, signal, period=10):
        """Toggle a 1-bit ``signal`` forever; low at start, first rise at period/2."""
        if isinstance(signal, str):
            signal = _resolve(self, signal)
        if signal.width != 1:
            raise ConfigurationError(f"clock signal {signal.name!r} must be 1 bit wide")
        if period < 2 or period % 2:
            raise ConfigurationError(f"clock period must be even and >= 2, got {period}")
        half = period // 2
        signal.value = 0

        async def clock():
            while True:
                await Timer(half)
                signal.value = 1
                await Timer(half)
                signal.value = 0

        return self.spawn(clock(), f"clock({signal.name})")

    def stop(self):
        """End the current ``run`` once the running task yields."""
        self._stop = True

    @property
    def live_tasks(self):
        return list(self._live.values())

    # -- internals --------------------------------------------------------
    def _schedule(self, task):
        self._ready.append(task)

    def _wake_all(self, tasks):
        self._ready.extend(tasks)

    def _at(self, when, task):
        heapq.heappush(self._timers, (when, next(self._timer_seq), task))

    def _finish(self, task, result):
        task.done = True
        task.result = result
        task.waiting_on = None
        self._live.pop(task.id, None)
        for j in task._joiners:
            self._schedule(j)
        task._joiners.clear()

    def _step(self, task):
        if task.done:
            return
        if self.trace is not None:
            self.trace.append((self.now, task.id))
        self.current = task
        try:
            trig = task._coro.send(None)
        except StopIteration as stop:
            self._finish(task, stop.value)
            return
        except BaseException:
            self._finish(task, None)
            raise
        finally:
            self.current = None
        task.waiting_on = trig
        try:
            trig._prime(self, task)
        except BaseException:
            task._coro.close()
            self._finish(task, None)
            raise

    def run(self, until=None):
        """Run until quiescent, stopped, or ``until`` ns; returns the final time."""
        if not self._live:
            raise SimulationError("nothing to run: no live tasks")
        if until is not None and until < self.now:
            raise ValueError(f"until={until} is before now={self.now}")
        self._stop = False
        timers = self._timers
        while True:
            while self._ready:
                batch = self._ready
                self._ready = []
                if len(batch) > 1:
                    batch.sort(key=_task_id)
                for i, task in enumerate(batch):
                    self._step(task)
                    if self._stop:
                        # leftover work stays queued for a later run()
                        self._ready = batch[i + 1:] + self._ready
                        return self.now
            if not timers:
                if self._live:
                    raise DeadlockError(self.now, sorted(self._live.values(), key=_task_id))
                return self.now
            when = timers[0][0]
            if until is not None and when > until:
                self.now = until
                return self.now
            self.now = when
            while timers and timers[0][0] == when:
                self._ready.append(heapq.heappop(timers)[2])
