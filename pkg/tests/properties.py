"""Randomized property suites for the methodology layer.

Each suite is a hypothesis test with at least 1000 examples; test_acceptance
runs them under criterion 7.
"""

import collections
import fnmatch

from hypothesis import HealthCheck, given, settings, strategies as st

from verikit.crv import rand_uint8_t
from verikit.sim import Simulator, Timer
from verikit.uvm import (
    ConfigDb,
    ConfigDbError,
    ProtocolError,
    Queue,
    get_sim,
    run_test,
    uvm_component,
    uvm_driver,
    uvm_get_port,
    uvm_sequence,
    uvm_sequence_item,
    uvm_sequencer,
    uvm_test,
    uvm_tlm_analysis_fifo,
)

CALLS = collections.Counter()
CASES = settings(max_examples=1000, deadline=None, database=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])

# ------------------------------------------------------------------ phase order

shapes = st.recursive(st.just(()), lambda kids: st.lists(kids, max_size=3).map(tuple), max_leaves=12)


class Node(uvm_component):
    def __init__(self, name, parent, shape=()):
        super().__init__(name, parent)
        self.shape = shape

    def build_phase(self):
        for i, sub in enumerate(self.shape):
            Node(f"n{i}", self, sub)

    async def run_phase(self):
        await Timer(1)


def _preorder(path, shape):
    yield path
    for i, sub in enumerate(shape):
        yield from _preorder(f"{path}.n{i}", sub)


def _postorder(path, shape):
    for i, sub in enumerate(shape):
        yield from _postorder(f"{path}.n{i}", sub)
    yield path


@CASES
@given(shapes)
def phase_order(shape):
    CALLS["phase_order"] += 1
    class T(uvm_test):
        def build_phase(self):
            Node("root", self, shape)

    res = run_test(T, 0)
    assert res.passed, res.failures
    trace = res.phase_trace
    by_phase = {}
    for ph, name, _ in trace:
        by_phase.setdefault(ph, []).append(name)
    pre = ["uvm_test_top"] + list(_preorder("uvm_test_top.root", shape))
    post = list(_postorder("uvm_test_top.root", shape)) + ["uvm_test_top"]
    assert by_phase["build"] == pre
    assert by_phase["connect"] == post
    assert by_phase["check"] == post
    first = {}
    for i, (ph, name, _) in enumerate(trace):
        first.setdefault((ph, name), i)
    for name in pre:
        order = [first[(ph, name)] for ph in ("build", "connect", "run", "check") if (ph, name) in first]
        assert order == sorted(order)
        assert len(order) == (4 if name != "uvm_test_top" else 3)


# ------------------------------------------------------------------ ConfigDB

segments = st.sampled_from(["top", "env", "agent", "drv", "mon"])
paths = st.lists(segments, min_size=1, max_size=4).map(".".join)
globs = st.one_of(
    paths,
    st.just("*"),
    paths.map(lambda p: p + ".*"),
    paths.map(lambda p: "*." + p),
    st.tuples(paths, paths).map(lambda t: f"{t[0]}*{t[1]}"),
)
keys = st.sampled_from(["BFM", "SEQR", "N"])


@CASES
@given(st.lists(st.tuples(globs, keys, st.integers()), max_size=8), paths, keys)
def config_db_shadowing(entries, query, key):
    CALLS["config_db_shadowing"] += 1
    db = ConfigDb()
    for glob, k, v in entries:
        db.set(None, glob, k, v)
    expected = [v for glob, k, v in entries if k == key and fnmatch.fnmatchcase(query, glob)]
    try:
        got = db.get(None, query, key)
    except ConfigDbError:
        assert not expected
    else:
        assert expected and got == expected[-1]


# ------------------------------------------------------------------ objections

@CASES
@given(
    st.integers(1, 50),
    st.lists(st.lists(st.integers(0, 20), min_size=1, max_size=3), max_size=3),
    st.lists(st.tuples(st.integers(0, 49), st.integers(1, 50)), max_size=3),
    st.integers(0, 3),
)
def objection_gating(hold0, early, late, background):
    CALLS["objection_gating"] += 1
    late = [(g % hold0, h) for g, h in late]
    ends = [hold0]

    class Early(uvm_component):
        def __init__(self, name, parent, waits):
            super().__init__(name, parent)
            self.waits = waits

        async def run_phase(self):
            self.raise_objection()
            for w in self.waits:
                await Timer(w)
            self.drop_objection()

    class Late(uvm_component):
        def __init__(self, name, parent, gap, hold):
            super().__init__(name, parent)
            self.gap, self.hold = gap, hold

        async def run_phase(self):
            await Timer(self.gap)
            self.raise_objection()
            await Timer(self.hold)
            self.drop_objection()

    class Chatter(uvm_component):
        async def run_phase(self):
            while True:
                await Timer(7)

    class T(uvm_test):
        def build_phase(self):
            Early("e0", self, [hold0])
            for i, waits in enumerate(early):
                Early(f"e{i + 1}", self, waits)
            for i, (g, h) in enumerate(late):
                Late(f"l{i}", self, g, h)
            for i in range(background):
                Chatter(f"c{i}", self)

    ends += [sum(w) for w in early] + [g + h for g, h in late]
    res = run_test(T, 0, watchdog=10_000)
    assert res.passed, res.failures
    assert res.sim_time == max(ends)


# ------------------------------------------------------------------ FIFO order

@CASES
@given(
    st.lists(st.integers(), max_size=30),
    st.integers(0, 3),
    st.lists(st.integers(0, 3), min_size=1, max_size=5),
    st.lists(st.integers(0, 3), min_size=1, max_size=5),
)
def fifo_order(items, maxsize, put_gaps, get_gaps):
    CALLS["fifo_order"] += 1
    sim = Simulator()
    q = Queue(maxsize)
    top = uvm_component("top")
    afifo = uvm_tlm_analysis_fifo("afifo", top)
    port = uvm_get_port("port", top)
    port.connect(afifo.get_export)
    got_q, got_f = [], []

    async def producer():
        for i, it in enumerate(items):
            await Timer(put_gaps[i % len(put_gaps)])
            await q.put(it)
            afifo.analysis_export.write(it)

    async def consumer():
        for i in range(len(items)):
            await Timer(get_gaps[i % len(get_gaps)])
            got_q.append(await q.get())
            got_f.append(await port.get())

    sim.spawn(producer())
    sim.spawn(consumer())
    sim.run()
    assert got_q == items and got_f == items
    assert q.empty() and not port.can_get()


# ------------------------------------------------------------------ handshake

class Tx(uvm_sequence_item):
    v = rand_uint8_t()


def _first_violation(ops, opener, closer):
    holding = False
    for i, op in enumerate(ops):
        if (op == opener) == holding:
            return i
        holding = not holding
    return None


def _handshake(driver_cls, seq_cls):
    class T(uvm_test):
        def build_phase(self):
            self.seqr = uvm_sequencer("seqr", self)
            self.drv = driver_cls("drv", self)

        def connect_phase(self):
            self.drv.seq_item_port.connect(self.seqr.seq_item_export)

        async def run_phase(self):
            self.raise_objection()
            seq = seq_cls("seq")
            get_sim().start_soon(seq.start(self.seqr), "seq")
            await self.drv.finished.wait()
            self.drop_objection()

    return T


@CASES
@given(st.lists(st.sampled_from(["get", "done"]), max_size=12))
def driver_protocol(ops):
    CALLS["driver_protocol"] += 1
    from verikit.sim import Event
    outcome = {}

    class Feeder(uvm_sequence):
        async def body(self):
            while True:
                tx = Tx("tx")
                await self.start_item(tx)
                await self.finish_item(tx)

    class ScriptedDriver(uvm_driver):
        def build_phase(self):
            self.finished = Event("finished")

        async def run_phase(self):
            port = self.seq_item_port
            try:
                for i, op in enumerate(ops):
                    outcome["at"] = i
                    if op == "get":
                        await port.get_next_item()
                    else:
                        port.item_done()
                outcome["at"] = None
            except ProtocolError:
                pass
            self.finished.set()

    res = run_test(_handshake(ScriptedDriver, Feeder), 0, watchdog=1000)
    assert res.passed, res.failures
    assert outcome["at"] == _first_violation(ops, "get", "done")


@CASES
@given(st.lists(st.sampled_from(["start", "finish"]), max_size=12))
def sequence_protocol(ops):
    CALLS["sequence_protocol"] += 1
    from verikit.sim import Event
    outcome = {}

    class ScriptedSeq(uvm_sequence):
        async def body(self):
            tx = Tx("tx")
            try:
                for i, op in enumerate(ops):
                    outcome["at"] = i
                    if op == "start":
                        tx = Tx(f"tx{i}")
                        await self.start_item(tx)
                    else:
                        await self.finish_item(tx)
                outcome["at"] = None
            except ProtocolError:
                pass
            done.set()

    done = Event("done")

    class Sink(uvm_driver):
        def build_phase(self):
            self.finished = done

        async def run_phase(self):
            while True:
                await self.seq_item_port.get_next_item()
                self.seq_item_port.item_done()

    res = run_test(_handshake(Sink, ScriptedSeq), 0, watchdog=1000)
    assert res.passed, res.failures
    assert outcome["at"] == _first_violation(ops, "start", "finish")


SUITES = {
    "phase_order": phase_order,
    "config_db_shadowing": config_db_shadowing,
    "objection_gating": objection_gating,
    "fifo_order": fifo_order,
    "driver_protocol": driver_protocol,
    "sequence_protocol": sequence_protocol,
}
