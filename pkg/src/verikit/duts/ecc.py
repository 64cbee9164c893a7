"""SECDED ECC: positional Hamming code plus an overall parity bit.

Codeword positions run from 1 to ``m + dw``.  Hamming bits sit at the
power-of-two positions, data bits fill the remaining positions in ascending
order (data bit 0 at position 3).  Check bit ``i < m`` covers position
``2**i``; check bit ``m`` is the even parity of all data and Hamming bits.
"""

from collections import namedtuple

DecodeResult = namedtuple("DecodeResult", "dataout chkout err_detect err_multpl")


def _parity(x):
    return x.bit_count() & 1


def hamming_bits(dw):
    """Smallest m with 2**m >= m + dw + 1."""
    if dw < 1:
        raise ValueError("data width must be positive")
    m = 1
    while (1 << m) < m + dw + 1:
        m += 1
    return m


class EccCodec:
    def __init__(self, dw=32):
        self.dw = dw
        self.m = hamming_bits(dw)
        self.cw = self.m + 1
        self.n = self.m + dw
        self.data_pos = [p for p in range(1, self.n + 1) if p & (p - 1)]
        self._data_index = {p: j for j, p in enumerate(self.data_pos)}
        # data mask covered by each Hamming bit
        self._masks = [sum(1 << j for j, p in enumerate(self.data_pos) if p >> i & 1)
                       for i in range(self.m)]
        self._dmask = (1 << dw) - 1
        self._hmask = (1 << self.m) - 1
        self._cmask = (1 << self.cw) - 1

    def _hamming(self, data):
        h = 0
        for i, mask in enumerate(self._masks):
            if (data & mask).bit_count() & 1:
                h |= 1 << i
        return h

    def encode(self, data):
        """Check bits (``cw`` wide) for ``data``."""
        if not 0 <= data <= self._dmask:
            raise ValueError(f"data {data:#x} does not fit in {self.dw} bits")
        h = self._hamming(data)
        return h | (_parity(data) ^ _parity(h)) << self.m

    def decode(self, data, chk, correct_n=0):
        if not 0 <= data <= self._dmask or not 0 <= chk <= self._cmask:
            raise ValueError("decode input out of range")
        s = self._hamming(data) ^ (chk & self._hmask)
        p = _parity(data) ^ _parity(chk)
        if not p:
            if s == 0:
                return DecodeResult(data, chk, 0, 0)
            return DecodeResult(data, chk, 1, 1)
        if correct_n:
            return DecodeResult(data, chk, 1, 0)
        if s == 0:
            return DecodeResult(data, chk ^ (1 << self.m), 1, 0)
        if not s & (s - 1):
            return DecodeResult(data, chk ^ s, 1, 0)
        j = self._data_index.get(s)
        if j is None:
            # syndrome points past the codeword: at least three flips
            return DecodeResult(data, chk, 1, 1)
        return DecodeResult(data ^ (1 << j), chk, 1, 0)

    def codeword(self, data, chk):
        """Concatenate ``{data, chk}`` (check bits in the low bits)."""
        return data << self.cw | chk

    def split(self, word):
        return word >> self.cw, word & self._cmask


PORTS = ("gen", "correct_n", "datain", "chkin", "dataout", "chkout", "err_detect", "err_multpl")


class EccCore:
    """Combinational encoder/decoder instance with prefixed port signals.

    ``gen=1`` generates check bits for ``datain``; ``gen=0`` decodes
    ``{datain, chkin}``.  Any unresolved input drives every output to X.
    """

    def __init__(self, sim, prefix, codec):
        self.codec = codec
        self.prefix = prefix
        dw, cw = codec.dw, codec.cw
        widths = dict(gen=1, correct_n=1, datain=dw, chkin=cw, dataout=dw, chkout=cw,
                      err_detect=1, err_multpl=1)
        for port in PORTS:
            setattr(self, port, sim.signal(prefix + port, widths[port]))
        for port in ("gen", "correct_n", "datain", "chkin"):
            getattr(self, port).on_change(self._eval)

    def _eval(self, _sig=None):
        ins = (self.gen, self.correct_n, self.datain, self.chkin)
        if not self.gen.is_resolvable:
            self._drive_x()
            return
        gen = self.gen.get_int()
        needed = (self.datain,) if gen else ins
        if not all(s.is_resolvable for s in needed):
            self._drive_x()
            return
        data = self.datain.get_int()
        if gen:
            self.dataout.value = data
            self.chkout.value = self.codec.encode(data)
            self.err_detect.value = 0
            self.err_multpl.value = 0
        else:
            r = self.codec.decode(data, self.chkin.get_int(), self.correct_n.get_int())
            self.dataout.value = r.dataout
            self.chkout.value = r.chkout
            self.err_detect.value = r.err_detect
            self.err_multpl.value = r.err_multpl

    def _drive_x(self):
        for port in ("dataout", "chkout", "err_detect", "err_multpl"):
            sig = getattr(self, port)
            sig.value = "X" * sig.width


class EccDut:
    """Separate encoder (``enc_*``) and decoder (``dec_*``) instances plus ``clk``."""

    def __init__(self, sim, dw=32, clk_period=10):
        self.sim = sim
        self.codec = EccCodec(dw)
        self.clk = sim.signal("clk", 1)
        self.enc = EccCore(sim, "enc_", self.codec)
        self.dec = EccCore(sim, "dec_", self.codec)
        for core in (self.enc, self.dec):
            for port in PORTS:
                setattr(self, core.prefix + port, getattr(core, port))
        sim.start_clock(self.clk, clk_period)
