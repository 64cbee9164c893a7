import logging

import pytest

from verikit.sim import Timer
from verikit.uvm import (
    FIFO_DEBUG,
    PYUVM_DEBUG,
    ConfigDb,
    ConfigDbError,
    FactoryError,
    TestRegistryError,
    UVMError,
    get_test,
    registered_tests,
    run_test,
    test as register_test,
    uvm_component,
    uvm_env,
    uvm_factory,
    uvm_test,
)
from verikit.uvm.context import parse_log_level
import verikit.tb  # noqa: F401  (registers bundled tests)


class Leaf(uvm_component):
    pass


class TwoLeafEnv(uvm_env):
    def build_phase(self):
        self.driver = Leaf("driver", self)
        self.monitor = Leaf("monitor", self)


def test_create_builds_paths():
    top = uvm_test("uvm_test_top")
    env = TwoLeafEnv.create("env", top)
    assert env.get_full_name() == "uvm_test_top.env"
    assert top.get_child("env") is env


def test_duplicate_sibling_rejected():
    top = uvm_test("uvm_test_top")
    Leaf("driver", top)
    with pytest.raises(UVMError):
        Leaf("driver", top)


def test_unknown_kind_is_factory_error():
    with pytest.raises(FactoryError):
        uvm_factory().create_component_by_name("NoSuchKind", "x", None)


def test_type_override():
    class Base(uvm_component):
        pass

    class Special(Base):
        pass

    f = uvm_factory()
    try:
        f.set_type_override_by_type(Base, Special)
        assert type(Base.create("b", None)) is Special
    finally:
        f.clear_overrides()


def test_inst_override_by_path():
    class Plain(uvm_component):
        pass

    class Fancy(Plain):
        pass

    f = uvm_factory()
    top = uvm_test("uvm_test_top")
    try:
        f.set_inst_override_by_name("Plain", "Fancy", "uvm_test_top.b*")
        assert type(Plain.create("a", top)) is Plain
        assert type(Plain.create("b1", top)) is Fancy
    finally:
        f.clear_overrides()


def test_config_db_get_after_set_star():
    db = ConfigDb()
    top = uvm_test("uvm_test_top")
    drv = Leaf("driver", TwoLeafEnv("env", top))
    handle = object()
    db.set(None, "*", "BFM", handle)
    assert db.get(drv, "", "BFM") is handle


def test_config_db_miss_names_path_and_key():
    db = ConfigDb()
    top = uvm_test("uvm_test_top")
    with pytest.raises(ConfigDbError) as info:
        db.get(top, "", "SEQR")
    assert "SEQR" in str(info.value) and "uvm_test_top" in str(info.value)


def test_config_db_shadowing():
    db = ConfigDb()
    top = uvm_test("uvm_test_top")
    env = uvm_env("env", top)
    inside, outside = Leaf("drv", env), Leaf("other", top)
    db.set(None, "*", "K", 1)
    db.set(None, "*.env.*", "K", 2)
    assert db.get(inside, "", "K") == 2
    assert db.get(outside, "", "K") == 1


def test_config_db_empty_key():
    with pytest.raises(ConfigDbError):
        ConfigDb().set(None, "*", "", 1)


def test_log_levels_below_debug():
    assert PYUVM_DEBUG == 4 and FIFO_DEBUG == 5
    assert PYUVM_DEBUG < FIFO_DEBUG < logging.DEBUG
    assert parse_log_level("fifo_debug") == 5
    with pytest.raises(ValueError):
        parse_log_level("LOUD")


def _phase_hierarchy():
    class Env(uvm_env):
        def build_phase(self):
            self.driver = Leaf("driver", self)
            self.monitor = Leaf("monitor", self)

    class T(uvm_test):
        def build_phase(self):
            self.env = Env("env", self)

    return T


def test_build_top_down_connect_bottom_up():
    res = run_test(_phase_hierarchy(), 0)
    assert res.passed
    short = lambda p: p.rsplit(".", 1)[-1]
    build = [short(n) for ph, n, _ in res.phase_trace if ph == "build"]
    connect = [short(n) for ph, n, _ in res.phase_trace if ph == "connect"]
    check = [short(n) for ph, n, _ in res.phase_trace if ph == "check"]
    assert build == ["uvm_test_top", "env", "driver", "monitor"]
    assert connect == ["driver", "monitor", "env", "uvm_test_top"]
    assert check == connect


def test_objections_gate_the_run_phase():
    class T(uvm_test):
        async def run_phase(self):
            self.raise_objection()
            self.raise_objection()
            await Timer(10)
            self.drop_objection()
            await Timer(10)
            self.drop_objection()

    res = run_test(T, 0)
    assert res.passed and res.sim_time == 20


def test_drop_below_zero_fails():
    class T(uvm_test):
        async def run_phase(self):
            self.drop_objection()

    res = run_test(T, 0)
    assert not res.passed
    assert "no objection" in res.failures[0]


def test_objection_outside_run_phase():
    class T(uvm_test):
        def build_phase(self):
            self.raise_objection()

    res = run_test(T, 0)
    assert not res.passed


def test_watchdog_times_out():
    class T(uvm_test):
        async def run_phase(self):
            self.raise_objection()
            while True:
                await Timer(100)

    res = run_test(T, 0, watchdog=1000)
    assert not res.passed
    assert "watchdog" in res.failures[0]
    assert res.sim_time == 1000


def test_run_phase_ends_without_objections():
    class T(uvm_test):
        async def run_phase(self):
            while True:
                await Timer(1)

    res = run_test(T, 0)
    assert res.passed and res.sim_time == 0


def test_exception_in_phase_fails_test():
    class T(uvm_test):
        def check_phase(self):
            assert False, "boom"

    res = run_test(T, 0)
    assert not res.passed and "boom" in res.failures[0]


def test_error_log_fails_test():
    class T(uvm_test):
        def report_phase(self):
            self.logger.error("bad thing")

    res = run_test(T, 0)
    assert not res.passed
    assert res.log_counts["ERROR"] == 1


def test_log_format_and_threshold():
    class T(uvm_test):
        async def run_phase(self):
            self.raise_objection()
            await Timer(7)
            self.logger.info("hello")
            self.logger.log(FIFO_DEBUG, "hidden")
            self.drop_objection()

    res = run_test(T, 0, log_level="INFO")
    assert res.log == ["7 INFO uvm_test_top hello"]
    res = run_test(T, 0, log_level="FIFO_DEBUG")
    assert "7 FIFO_DEBUG uvm_test_top hidden" in res.log


def test_unknown_test_lists_registered():
    with pytest.raises(TestRegistryError) as info:
        get_test("nope")
    assert "alu.base" in str(info.value)


def test_registry_idempotent_and_duplicate():
    class A(uvm_test):
        pass

    class B(uvm_test):
        pass

    from verikit.uvm import runner
    try:
        register_test("tmp.dup")(A)
        register_test("tmp.dup")(A)
        with pytest.raises(TestRegistryError):
            register_test("tmp.dup")(B)
        assert "tmp.dup" in registered_tests()
    finally:
        runner._registry.pop("tmp.dup", None)


def test_component_rng_depends_on_seed_and_path():
    draws = {}

    class T(uvm_test):
        def build_phase(self):
            self.a = Leaf("a", self)
            self.b = Leaf("b", self)

        def final_phase(self):
            draws[self.seed_tag] = (self.a.rng.next_u64(), self.b.rng.next_u64())

    T.seed_tag = 1
    run_test(T, 1)
    T.seed_tag = "1again"
    run_test(T, 1)
    T.seed_tag = 2
    run_test(T, 2)
    assert draws[1] == draws["1again"]
    assert draws[1][0] != draws[1][1]
    assert draws[1] != draws[2]
