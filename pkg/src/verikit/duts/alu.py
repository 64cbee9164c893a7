"""32-bit ALU with a registered result (one cycle of latency)."""

import enum

from ..sim import FallingEdge, RisingEdge

MASK32 = 0xFFFFFFFF


class AluOp(enum.IntEnum):
    ADD = 0
    SUB = 1
    NOT = 2
    AND = 3
    OR = 4
    XOR = 5
    NAND = 6
    NOR = 7


def alu_eval(a, b, op):
    """Unsigned 32-bit result; ``a``/``b`` may be given signed or unsigned."""
    a &= MASK32
    b &= MASK32
    if op == 0:
        return (a + b) & MASK32
    if op == 1:
        return (a - b) & MASK32
    if op == 2:
        return ~a & MASK32
    if op == 3:
        return a & b
    if op == 4:
        return a | b
    if op == 5:
        return a ^ b
    if op == 6:
        return ~(a & b) & MASK32
    if op == 7:
        return ~(a | b) & MASK32
    raise ValueError(f"op {op} is not a 3-bit opcode")


class AluDut:
    """Inputs are latched on the falling edge; ``r`` updates on the next rising edge."""

    def __init__(self, sim, clk_period=10):
        self.sim = sim
        self.clk = sim.signal("clk", 1)
        self.a = sim.signal("a", 32)
        self.b = sim.signal("b", 32)
        self.op = sim.signal("op", 3)
        self.r = sim.signal("r", 32, init=0)
        sim.start_clock(self.clk, clk_period)
        sim.spawn(self._proc(), "alu")

    async def _proc(self):
        a, b, op, r = self.a, self.b, self.op, self.r
        fall = FallingEdge(self.clk)
        rise = RisingEdge(self.clk)
        pending = None
        while True:
            await fall
            if a.is_resolvable and b.is_resolvable and op.is_resolvable:
                pending = alu_eval(a.get_int(), b.get_int(), op.get_int())
            else:
                pending = None
            await rise
            if pending is None:
                r.value = "X" * 32
            else:
                r.value = pending
