"""16-bit oversampling ADC with an 8-bit register bus.

Registers: Dummy@0 (read-only), Config@1 (bits[1:0] oversampling code),
Trigger@2 (bit 0 starts a conversion).  Every sample takes four clock cycles.
"""

import math

from ..sim import FallingEdge, RisingEdge

V_MIN = -10.0
V_MAX = 10.0
FULL_SCALE = 65535
CYCLES_PER_SAMPLE = 4
OVERSAMPLING = (1, 2, 4, 8)

REG_DUMMY = 0
REG_CONFIG = 1
REG_TRIGGER = 2
REG_MASKS = {REG_DUMMY: 0x00, REG_CONFIG: 0x03, REG_TRIGGER: 0x01}


def adc_quantize(v):
    """round((clamp(v) + 10) / 20 * 65535), rounding halves up."""
    v = min(max(float(v), V_MIN), V_MAX)
    return math.floor((v - V_MIN) / (V_MAX - V_MIN) * FULL_SCALE + 0.5)


def oversample_mean(codes):
    """Mean of integer sample codes, rounded half-up."""
    n = len(codes)
    return (sum(codes) + n // 2) // n


def adc_convert(samples):
    """Digital output for a sequence of analog samples (one per oversampling step)."""
    return oversample_mean([adc_quantize(v) for v in samples])


class AdcRegisters:
    def __init__(self):
        self.regs = {a: 0 for a in REG_MASKS}

    def read(self, addr):
        return self.regs.get(addr, 0)

    def write(self, addr, data):
        if addr in self.regs:
            self.regs[addr] = data & REG_MASKS[addr]

    @property
    def factor(self):
        return OVERSAMPLING[self.regs[REG_CONFIG]]


class AdcDut:
    """Bus inputs and ``analog_in`` are latched on the falling edge and acted on
    at the following rising edge, so outputs trail inputs by one cycle.

    ``noise_sigma`` (volts) adds Gaussian noise to every sample, drawn from
    ``noise_rng``.
    """

    def __init__(self, sim, clk_period=10, noise_sigma=0.0, noise_rng=None):
        self.sim = sim
        s = sim.signal
        self.clk = s("clk", 1)
        self.en_in = s("en_in", 1)
        self.rw_in = s("rw_in", 1)
        self.addr_in = s("addr_in", 8)
        self.data_in = s("data_in", 8)
        self.analog_in = sim.real_signal("analog_in", 0.0)
        self.data_out = s("data_out", 8, init=0)
        self.digital_out = s("digital_out", 16, init=0)
        self.start_out = s("start_out", 1, init=0)
        self.busy_out = s("busy_out", 1, init=0)
        self.eoc_out = s("eoc_out", 1, init=0)
        self.err_out = s("err_out", 1, init=0)
        self.regs = AdcRegisters()
        if noise_sigma and noise_rng is None:
            raise ValueError("noise_sigma needs a noise_rng")
        self.noise_sigma = noise_sigma
        self.noise_rng = noise_rng
        sim.start_clock(self.clk, clk_period)
        sim.spawn(self._proc(), "adc")

    def _sample(self, v):
        if self.noise_sigma:
            v += self.noise_rng.gauss(0.0, self.noise_sigma)
        return adc_quantize(v)

    def _latch(self):
        if not self.en_in.is_resolvable or not self.en_in.get_int():
            return None
        return (self.rw_in.get_int(), self.addr_in.get_int(), self.data_in.get_int())

    async def _proc(self):
        fall = FallingEdge(self.clk)
        rise = RisingEdge(self.clk)
        busy = False
        phase = total = n = 0
        while True:
            await fall
            op = self._latch()
            ana = self.analog_in.value
            await rise
            was_busy = busy
            self.start_out.value = 0
            self.eoc_out.value = 0
            self.err_out.value = 0
            if busy:
                phase += 1
                if phase == CYCLES_PER_SAMPLE * n:
                    busy = False
                    self.busy_out.value = 0
                    self.eoc_out.value = 1
                    self.digital_out.value = (total + n // 2) // n
                elif phase % CYCLES_PER_SAMPLE == 0:
                    total += self._sample(ana)
            if op is None:
                continue
            rw, addr, data = op
            if addr not in REG_MASKS:
                self.err_out.value = 1
                if not rw:
                    self.data_out.value = 0
            elif not rw:
                self.data_out.value = self.regs.read(addr)
            else:
                self.regs.write(addr, data)
                if addr == REG_TRIGGER and data & 1:
                    if was_busy:
                        self.err_out.value = 1
                    else:
                        n = self.regs.factor
                        busy = True
                        phase = 0
                        total = self._sample(ana)
                        self.start_out.value = 1
                        self.busy_out.value = 1
