"""ADC testbench: register bus ops, conversions and an independent timeline predictor.

Analog values travel through the testbench as integer millivolts so that
coverage bins and items stay integral.
"""

import math
from fractions import Fraction

from ..crv import RandField, bit_t, rand_bit_t, rand_uint8_t
from ..duts import AdcDut, adc_quantize
from ..duts.adc import CYCLES_PER_SAMPLE, OVERSAMPLING, REG_MASKS, REG_TRIGGER
from ..fcov import Bin, Covergroup, Coverpoint
from ..uvm import test, uvm_sequence, uvm_sequence_item
from .common import BaseBfm, BaseEnv, BaseTest, Scoreboard

MV_MIN, MV_MAX = -10000, 10000
DATA_BINS = [(0, 50), (51, 101), (102, 152), (153, 203), (204, 255)]
ANA_BINS = [(-10000, -6001), (-6000, -2001), (-2000, 1999), (2000, 5999), (6000, 10000)]
OUT_FIELDS = ("data_out", "digital_out", "start_out", "busy_out", "eoc_out", "err_out")


def adc_cg_1():
    cg = Covergroup("adc.cg_1")
    cg.add_coverpoint(Coverpoint("en_in", [Bin.value(0), Bin.value(1)]))
    cg.add_coverpoint(Coverpoint("rw_in", [Bin.value(0), Bin.value(1)]))
    cg.add_coverpoint(Coverpoint("addr_in", [Bin.value(0), Bin.value(1), Bin.value(2),
                                             Bin.range(3, 127), Bin.range(128, 255)]))
    cg.add_coverpoint(Coverpoint("data_in", [Bin.range(lo, hi) for lo, hi in DATA_BINS]))
    cg.add_coverpoint(Coverpoint("ana_in", [Bin.range(lo, hi) for lo, hi in ANA_BINS]))
    return cg


def adc_cg_2():
    cg = Covergroup("adc.cg_2")
    for name in ("start_out", "busy_out", "eoc_out", "err_out"):
        cg.add_coverpoint(Coverpoint(name, [Bin.value(0), Bin.value(1)]))
    return cg


class AdcItem(uvm_sequence_item):
    """One bus cycle: a register op when ``en`` is 1, otherwise idle."""

    en = bit_t(1, default=1)
    rw = rand_bit_t(1)
    addr = rand_uint8_t()
    data = rand_uint8_t()
    ana_mv = RandField(16, signed=True, ranges=[(MV_MIN, MV_MAX)])

    def __str__(self):
        if not self.en:
            return f"{self.get_name()} : idle ana: {self.ana_mv} mV"
        kind = "write" if self.rw else "read"
        return f"{self.get_name()} : {kind} addr: {self.addr:#04x} data: {self.data:#04x} ana: {self.ana_mv} mV"


class AdcSeqBase(uvm_sequence):
    """Helpers issuing one item per clock cycle; the analog level is held between items."""

    def __init__(self, name="seq", transactions=1000):
        super().__init__(name)
        self.transactions = transactions
        self.sent = 0
        self.mv = 0

    async def send(self, en, rw=0, addr=0, data=0, mv=None):
        if mv is not None:
            self.mv = mv
        item = AdcItem("item")
        await self.start_item(item)
        item.en, item.rw, item.addr, item.data, item.ana_mv = en, rw, addr, data, self.mv
        await self.finish_item(item)
        self.sent += 1

    async def read(self, addr, mv=None):
        await self.send(1, 0, addr, 0, mv)

    async def write(self, addr, data, mv=None):
        await self.send(1, 1, addr, data, mv)

    async def idle(self, cycles=1, mv=None):
        for _ in range(cycles):
            await self.send(0, mv=mv)

    async def trigger(self, mv=None, data=1):
        await self.write(REG_TRIGGER, data | 1, mv)

    def rand_mv(self):
        return self.rng.randint(MV_MIN, MV_MAX)

    async def random_cycle(self, trigger_weight=1, bad_addr_weight=1, idle_weight=1):
        """One random cycle mixing register ops, triggers, bad addresses and idles."""
        rng = self.rng
        mv = self.rand_mv()
        choice = rng.below(3 + trigger_weight + bad_addr_weight + idle_weight)
        if choice < 3:
            item = AdcItem("item").randomize(rng)
            await self.send(1, item.rw, rng.below(3), item.data, mv)
        elif choice < 3 + trigger_weight:
            await self.trigger(mv, rng.below(256))
        elif choice < 3 + trigger_weight + bad_addr_weight:
            await self.send(1, rng.below(2), rng.randint(3, 255), rng.below(256), mv)
        else:
            await self.idle(1, mv)

    async def fill(self, **weights):
        while self.sent < self.transactions:
            await self.random_cycle(**weights)


class AdcRegSeq(AdcSeqBase):
    """Reset values, RW/RO masking and unmapped addresses, then random register traffic."""

    async def body(self):
        for addr in (0, 1, 2):
            await self.read(addr)
        for addr in (0, 1):
            await self.write(addr, 0xFF)
            await self.read(addr)
            await self.write(addr, 0x00)
            await self.read(addr)
        await self.write(2, 0xFE)  # bit 0 clear: stored, no conversion
        await self.read(2)
        for addr in (3, 127, 128, 255):
            await self.read(addr)
            await self.write(addr, 0xA5)
        await self.fill(trigger_weight=1, bad_addr_weight=1, idle_weight=1)


class AdcConvSeq(AdcSeqBase):
    """Known voltages at every oversampling factor, then random conversions."""

    KNOWN_MV = (-10000, -5000, 0, 2500, 10000)

    async def body(self):
        for code, n in enumerate(OVERSAMPLING):
            await self.write(1, code)
            for mv in self.KNOWN_MV + (self.rand_mv(), self.rand_mv()):
                await self.trigger(mv)
                await self.idle(CYCLES_PER_SAMPLE * n + 2)
        while self.sent < self.transactions:
            n = OVERSAMPLING[self.rng.below(4)]
            await self.write(1, OVERSAMPLING.index(n))
            await self.trigger(self.rand_mv())
            for _ in range(CYCLES_PER_SAMPLE * n + 1):
                await self.idle(1, self.rand_mv())
            await self.read(1)


class AdcStressSeq(AdcSeqBase):
    """Random interleaving with frequent triggers, many of them while busy."""

    async def body(self):
        await self.fill(trigger_weight=3, bad_addr_weight=1, idle_weight=2)


class AdcBfm(BaseBfm):
    def __init__(self, dut=None):
        super().__init__(dut)
        self.ana_mv = 0

    def initialization(self):
        d = self.dut
        d.en_in.value = 0
        d.rw_in.value = 0
        d.addr_in.value = 0
        d.data_in.value = 0
        d.analog_in.value = 0.0
        self.ana_mv = 0

    def drive(self, item):
        d = self.dut
        d.en_in.value = item.en
        if item.en:
            d.rw_in.value = item.rw
            d.addr_in.value = item.addr
            d.data_in.value = item.data
        self.ana_mv = item.ana_mv
        d.analog_in.value = item.ana_mv / 1000

    def idle(self):
        self.dut.en_in.value = 0

    def sample_inp(self):
        d = self.dut
        return (d.en_in.get_int(), d.rw_in.get_int(), d.addr_in.get_int(),
                d.data_in.get_int(), self.ana_mv)

    def sample_out(self):
        d = self.dut
        return (d.data_out.get_int(), d.digital_out.get_int(), d.start_out.get_int(),
                d.busy_out.get_int(), d.eoc_out.get_int(), d.err_out.get_int())


def predict_outputs(inps):
    """Expected output tuple for every monitored cycle.

    Input tuple ``k`` takes effect in output tuple ``k + 1``.  A conversion
    accepted at input ``k`` with factor ``N`` samples inputs ``k, k+4, ...``,
    holds busy for outputs ``k+1 .. k+4N`` and pulses eoc at ``k+1+4N``.
    """
    n = len(inps)
    horizon = n + 1
    busy = [0] * horizon
    start = [0] * horizon
    eoc = [0] * horizon
    err = [0] * horizon
    data_out = [None] * horizon
    results = {}  # output index -> digital value
    regs = {addr: 0 for addr in REG_MASKS}
    data_out[0] = 0
    for k, (en, rw, addr, data, _) in enumerate(inps):
        if not en:
            continue
        j = k + 1
        if addr not in REG_MASKS:
            err[j] = 1
            if not rw:
                data_out[j] = 0
            continue
        if not rw:
            data_out[j] = regs[addr]
            continue
        regs[addr] = data & REG_MASKS[addr]
        if addr != REG_TRIGGER or not data & 1:
            continue
        if busy[k]:
            err[j] = 1
            continue
        factor = OVERSAMPLING[regs[1]]
        span = CYCLES_PER_SAMPLE * factor
        start[j] = 1
        for t in range(j, min(j + span, horizon)):
            busy[t] = 1
        done = j + span
        if done < horizon:
            eoc[done] = 1
            codes = [adc_quantize(inps[k + CYCLES_PER_SAMPLE * i][4] / 1000) for i in range(factor)]
            results[done] = math.floor(Fraction(sum(codes), factor) + Fraction(1, 2))
    expected = []
    held_data = held_digital = 0
    for j in range(n):
        if data_out[j] is not None:
            held_data = data_out[j]
        if j in results:
            held_digital = results[j]
        expected.append((held_data, held_digital, start[j], busy[j], eoc[j], err[j]))
    return expected


class AdcScoreboard(Scoreboard):
    def build_phase(self):
        super().build_phase()
        self.conversions = 0

    def compare(self, inps, outs):
        expected = predict_outputs(inps)
        for j, (exp, got) in enumerate(zip(expected, outs)):
            self.checked += 1
            if exp[4]:
                self.conversions += 1
            if exp != got:
                diffs = ", ".join(f"{f}={g} (expected {e})"
                                  for f, e, g in zip(OUT_FIELDS, exp, got) if e != g)
                self.error(f"cycle {j}: {diffs}")
        self.logger.debug("%d conversions checked", self.conversions)


class AdcEnv(BaseEnv):
    scoreboard_cls = AdcScoreboard
    inp_covergroup = staticmethod(adc_cg_1)
    out_covergroup = staticmethod(adc_cg_2)

    @staticmethod
    def inp_to_sample(datum):
        en, rw, addr, data, mv = datum
        return {"en_in": en, "rw_in": rw, "addr_in": addr, "data_in": data, "ana_in": mv}

    @staticmethod
    def out_to_sample(datum):
        return {"start_out": datum[2], "busy_out": datum[3], "eoc_out": datum[4], "err_out": datum[5]}


class AdcTestBase(BaseTest):
    default_transactions = 1000
    bfm_cls = AdcBfm
    env_cls = AdcEnv
    dut_model = AdcDut
    seq_cls = AdcSeqBase

    def make_sequence(self, transactions):
        return self.seq_cls("seq", transactions)


@test("adc.feature_reg")
class TestFeatureReg(AdcTestBase):
    seq_cls = AdcRegSeq


@test("adc.feature_adc")
class TestFeatureAdc(AdcTestBase):
    seq_cls = AdcConvSeq
    drain_cycles = CYCLES_PER_SAMPLE * 8 + 3


@test("adc.stress")
class TestStressAdc(AdcTestBase):
    seq_cls = AdcStressSeq
