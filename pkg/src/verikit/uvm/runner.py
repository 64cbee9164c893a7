"""Test registry and the phase engine behind ``run_test``."""

import logging
import traceback
from dataclasses import dataclass, field

from ..fcov import CoverageDb, write_coverage_db
from ..sim import SimulationError, Timer
from . import context
from .base import TOP_NAME, uvm_component, uvm_factory
from .errors import TestRegistryError

DEFAULT_WATCHDOG_NS = 10**9

_registry = {}


def test(name):
    """Class decorator registering a uvm_test subclass under ``name``."""
    def deco(cls):
        prev = _registry.get(name)
        if prev is not None and prev is not cls:
            raise TestRegistryError(f"test name {name!r} already registered to {prev.__name__}")
        _registry[name] = cls
        cls.test_name = name
        return cls
    return deco


def registered_tests():
    return sorted(_registry)


def get_test(name):
    try:
        return _registry[name]
    except KeyError:
        known = ", ".join(registered_tests()) or "<none>"
        raise TestRegistryError(f"unknown test {name!r}; registered tests: {known}") from None


@dataclass
class TestResult:
    __test__ = False  # not a pytest class

    name: str
    seed: int
    passed: bool = True
    failures: list = field(default_factory=list)
    log_counts: dict = field(default_factory=dict)
    log: list = field(default_factory=list)
    coverage: CoverageDb = None
    sim_time: int = 0
    transactions: int = 0
    phase_trace: list = field(default_factory=list)


def _build(comp, trace, now):
    comp.build_phase()
    trace.append(("build", comp.get_full_name(), now))
    for child in comp.get_children():
        _build(child, trace, now)


def _post_order(comp):
    for child in comp.get_children():
        yield from _post_order(child)
    yield comp


def _has_run_phase(comp):
    return type(comp).run_phase is not uvm_component.run_phase


def _describe(exc):
    tb = traceback.extract_tb(exc.__traceback__)
    where = f" ({tb[-1].filename.rsplit('/', 1)[-1]}:{tb[-1].lineno})" if tb else ""
    return f"{type(exc).__name__}: {exc}{where}"


def run_test(test_or_name, seed=0, *, watchdog=DEFAULT_WATCHDOG_NS, log_level=logging.INFO,
             transactions=None, cov_out=None, sim=None):
    """Build, connect, run, check, report and finalize one test.

    ``transactions`` is published under the ConfigDB key ``TRANSACTIONS``.
    """
    cls = get_test(test_or_name) if isinstance(test_or_name, str) else test_or_name
    name = getattr(cls, "test_name", cls.__name__)
    if transactions is None:
        transactions = getattr(cls, "default_transactions", 0)
    uvm_factory().clear_overrides()
    ctx = context.RunContext(seed, sim, context.parse_log_level(log_level), name, transactions)
    res = TestResult(name, seed, coverage=ctx.coverage, transactions=transactions,
                     phase_trace=ctx.phase_trace)
    sim = ctx.sim
    trace = ctx.phase_trace

    def fail(msg):
        res.failures.append(msg)

    with context.activate(ctx):
        ctx.config_db.set(None, "*", "TRANSACTIONS", transactions)
        top = None
        try:
            dut_model = getattr(cls, "dut_model", None)
            if dut_model is not None:
                ctx.top = dut_model(sim)
            top = cls(TOP_NAME, None)
            _build(top, trace, sim.now)
            for comp in _post_order(top):
                comp.connect_phase()
                trace.append(("connect", comp.get_full_name(), sim.now))
        except Exception as exc:
            fail(f"build/connect: {_describe(exc)}")
            for task in sim.live_tasks:
                task.kill()

        if not res.failures:
            _run_phase(ctx, top, watchdog, fail)
            for comp in _post_order(top):
                try:
                    comp.check_phase()
                except Exception as exc:
                    fail(f"check {comp.get_full_name()}: {_describe(exc)}")
                trace.append(("check", comp.get_full_name(), sim.now))
            for comp in _post_order(top):
                try:
                    comp.report_phase()
                except Exception as exc:
                    fail(f"report {comp.get_full_name()}: {_describe(exc)}")
            for comp in top.walk():
                try:
                    comp.final_phase()
                except Exception as exc:
                    fail(f"final {comp.get_full_name()}: {_describe(exc)}")

        errors = ctx.recorder.counts.get("ERROR", 0) + ctx.recorder.counts.get("CRITICAL", 0)
        if errors:
            fail(f"{errors} error message(s) logged")
        if cov_out is not None:
            write_coverage_db(ctx.coverage, cov_out)

    res.passed = not res.failures
    res.log_counts = dict(ctx.recorder.counts)
    res.log = list(ctx.recorder.lines)
    res.sim_time = sim.now
    return res


def _run_phase(ctx, top, watchdog, fail):
    sim = ctx.sim
    trace = ctx.phase_trace
    objection = ctx.objection

    def wrap(comp):
        async def body():
            trace.append(("run", comp.get_full_name(), sim.now))
            await comp.run_phase()
        return body()

    async def controller():
        # run bodies raise their objections before their first await
        await Timer(0)
        if not objection.ever_raised:
            sim.stop()

    objection.active = True
    try:
        for comp in top.walk():
            if _has_run_phase(comp):
                sim.spawn(wrap(comp), f"{comp.get_full_name()}.run_phase")
        sim.spawn(controller(), "objection_controller")
        start = sim.now
        sim.run(until=start + watchdog)
        if objection.count > 0:
            fail(f"watchdog: objections still raised after {watchdog} ns (count={objection.count})")
    except SimulationError as exc:
        fail(f"run: {exc}")
    except Exception as exc:
        fail(f"run: {_describe(exc)}")
    finally:
        objection.active = False
        for task in sim.live_tasks:
            task.kill()
