"""ALU testbench: bin-weighted operands, golden-model scoreboard with one cycle of latency."""

from ..crv import SamplingPolicy, rand_bit_t, rand_int32_t
from ..duts import AluDut, AluOp, alu_eval
from ..fcov import Bin, Covergroup, Coverpoint
from ..uvm import test, uvm_sequence, uvm_sequence_item
from .common import BaseBfm, BaseEnv, BaseTest, Scoreboard

A_BINS = [
    (-2147483648, -1768769053), (-1768769052, -866), (-865, 866),
    (867, 1300000000), (1300000001, 2147483647),
]
# the first two ranges overlap on -1654895902..-1654895901; kept as tabulated
B_BINS = [
    (-2147483648, -1654895901), (-1654895902, -989), (-988, 0),
    (1, 1928710300), (1928710301, 2147483647),
]
LATENCY = 1


def alu_covergroup():
    cg = Covergroup("alu.cg_1")
    cg.add_coverpoint(Coverpoint("a", [Bin.range(lo, hi) for lo, hi in A_BINS]))
    cg.add_coverpoint(Coverpoint("b", [Bin.range(lo, hi) for lo, hi in B_BINS]))
    cg.add_coverpoint(Coverpoint("op", [Bin.value(int(o), o.name) for o in AluOp]))
    cg.add_cross("aXb", "a", "b")
    cg.add_cross("bXop", "b", "op")
    cg.add_cross("aXop", "a", "op")
    cg.add_cross("aXbXop", "a", "b", "op")
    return cg


class AluSeqItem(uvm_sequence_item):
    a = rand_int32_t(ranges=A_BINS, policy=SamplingPolicy.UNIFORM_RANGES)
    b = rand_int32_t(ranges=B_BINS, policy=SamplingPolicy.UNIFORM_RANGES)
    op = rand_bit_t(3)

    def __str__(self):
        return f"{self.get_name()} : a: {self.a} b: {self.b} op: {AluOp(self.op).name}"


class AluSeq(uvm_sequence):
    def __init__(self, name="seq", transactions=30000, constraints=None):
        super().__init__(name)
        self.transactions = transactions
        self.constraints = constraints or {}

    async def body(self):
        for _ in range(self.transactions):
            tr = AluSeqItem("tr")
            for field, ranges in self.constraints.items():
                tr.constrain(field, ranges)
            await self.start_item(tr)
            tr.randomize(self.rng)
            await self.finish_item(tr)


class AluBfm(BaseBfm):
    def initialization(self):
        self.dut.a.value = 0
        self.dut.b.value = 0
        self.dut.op.value = 0

    def drive(self, item):
        self.dut.a.value = item.a
        self.dut.b.value = item.b
        self.dut.op.value = item.op

    def sample_inp(self):
        d = self.dut
        return (d.a.get_signed(), d.b.get_signed(), d.op.get_int())

    def sample_out(self):
        return (self.dut.r.get_int(),)


class AluScoreboard(Scoreboard):
    def compare(self, inps, outs):
        for k in range(len(inps) - LATENCY):
            a, b, op = inps[k]
            (r,) = outs[k + LATENCY]
            expected = alu_eval(a, b, op)
            self.checked += 1
            if r != expected:
                self.error(f"cycle {k}: {AluOp(op).name}({a}, {b}) gave {r:#010x}, "
                           f"expected {expected:#010x}")


class AluEnv(BaseEnv):
    scoreboard_cls = AluScoreboard
    inp_covergroup = staticmethod(alu_covergroup)

    @staticmethod
    def inp_to_sample(datum):
        return {"a": datum[0], "b": datum[1], "op": datum[2]}


@test("alu.base")
class BaseTestAlu(BaseTest):
    default_transactions = 30000
    bfm_cls = AluBfm
    env_cls = AluEnv
    dut_model = AluDut
    constraints = None

    def make_sequence(self, transactions):
        return AluSeq("seq", transactions, self.constraints)
