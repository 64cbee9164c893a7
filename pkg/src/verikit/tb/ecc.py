"""SECDED ECC testbench: encoder and decoder relayed by the BFM with injected bit flips."""

from ..crv import bit_t, pick_flip_indices, rand_uint32_t
from ..duts import EccDut
from ..fcov import Bin, Covergroup, Coverpoint
from ..uvm import test, uvm_sequence, uvm_sequence_item
from .common import BaseBfm, BaseEnv, BaseTest, Scoreboard

DATA_OUT_BINS = [
    (0, 2975706), (2975707, 10295960), (10295961, 56784980), (56784981, 130000000),
    (130000001, 789394219), (789394220, 1248579698), (1248579699, 2000000000),
    (2000000001, 2147483647),
]
CHKOUT_BINS = [(0, 23), (24, 89), (90, 127)]
FLIP_MIX = (0.25, 0.50, 0.25)


def ecc_covergroup():
    cg = Covergroup("ecc.cg_1")
    cg.add_coverpoint(Coverpoint("data_out", [Bin.range(lo, hi) for lo, hi in DATA_OUT_BINS]))
    cg.add_coverpoint(Coverpoint("chkout", [Bin.range(lo, hi) for lo, hi in CHKOUT_BINS]))
    cg.add_coverpoint(Coverpoint("err_detect", [Bin.value(0), Bin.value(1)]))
    cg.add_coverpoint(Coverpoint("err_multpl", [Bin.value(0), Bin.value(1)]))
    cg.add_cross("err_detectXerr_multpl", "err_detect", "err_multpl")
    return cg


class EccSeqItem(uvm_sequence_item):
    datain = rand_uint32_t()
    correct_n = bit_t(1)
    chkin = bit_t(7)

    def __str__(self):
        return (f"{self.get_name()} : datain: {self.datain:#010x} "
                f"chkin: {self.chkin:#04x} correct_n: {self.correct_n}")


class EccSeq(uvm_sequence):
    def __init__(self, name="seq", transactions=30000):
        super().__init__(name)
        self.transactions = transactions

    async def body(self):
        for _ in range(self.transactions):
            in_tr = EccSeqItem("in_tr")
            await self.start_item(in_tr)
            in_tr.randomize(self.rng)
            await self.finish_item(in_tr)


def choose_flip_count(rng, mix=FLIP_MIX):
    u = rng.random()
    acc = 0.0
    for count, p in enumerate(mix):
        acc += p
        if u < acc:
            return count
    return len(mix) - 1


class EccBfm(BaseBfm):
    """Drives the encoder, then relays ``{dataout, chkout}`` with flips to the decoder."""

    def __init__(self, dut=None, flip_mix=FLIP_MIX):
        if abs(sum(flip_mix) - 1.0) > 1e-9 or len(flip_mix) != 3:
            raise ValueError("flip_mix must give probabilities for 0, 1 and 2 flips")
        super().__init__(dut)
        self.flip_mix = flip_mix
        self.codec = self.dut.codec
        self.flips = 0
        self.correct_n = 0

    def initialization(self):
        d = self.dut
        d.enc_gen.value = 1
        d.enc_correct_n.value = 0
        d.enc_chkin.value = 0
        d.enc_datain.value = 0
        d.dec_gen.value = 0
        d.dec_correct_n.value = 0
        self.flips = 0
        self._relay(())

    def drive(self, item):
        self.correct_n = item.correct_n
        self.dut.dec_correct_n.value = item.correct_n
        self.dut.enc_datain.value = item.datain
        item.chkin = self.dut.enc_chkout.get_int()
        self.gen_random_index()

    def gen_random_index(self):
        self.flips = choose_flip_count(self.rng, self.flip_mix)
        width = self.codec.dw + self.codec.cw
        self._relay(pick_flip_indices(width, self.flips, self.rng))

    def _relay(self, indices):
        # bit i < dw is data bit i; the rest are check bits
        dw = self.codec.dw
        data = self.dut.enc_dataout.get_int()
        chk = self.dut.enc_chkout.get_int()
        for i in indices:
            if i < dw:
                data ^= 1 << i
            else:
                chk ^= 1 << (i - dw)
        self.dut.dec_datain.value = data
        self.dut.dec_chkin.value = chk

    def sample_inp(self):
        d = self.dut
        return (d.enc_datain.get_int(), d.enc_chkout.get_int(), self.flips, self.correct_n)

    def sample_out(self):
        d = self.dut
        return (d.dec_err_detect.get_int(), d.dec_err_multpl.get_int(),
                d.dec_dataout.get_int(), d.dec_chkout.get_int())


class EccScoreboard(Scoreboard):
    """Combinational relay: input tuple k pairs with output tuple k."""

    def compare(self, inps, outs):
        passed = 0
        log = self.logger
        for k, (inp, out) in enumerate(zip(inps, outs)):
            enc_datain, _, flips, correct_n = inp
            err_det, err_multpl, dec_dataout, _ = out
            self.checked += 1
            if dec_dataout != enc_datain:
                log.debug("Test: Failed! Decoded data mismatched!! Multiple bit flips exist!!! "
                          "Expected: %d, Actual: %d", enc_datain, dec_dataout)
            if flips <= 1:
                ok = (err_det, err_multpl) == (flips, 0)
                if not correct_n:
                    ok = ok and dec_dataout == enc_datain
            else:
                ok = (err_det, err_multpl) == (1, 1)
            if ok:
                passed += 1
            else:
                self.error(f"cycle {k}: {flips} flip(s) gave flags ({err_det}, {err_multpl}), "
                           f"data {dec_dataout:#x} (sent {enc_datain:#x})")
        log.debug("%d of %d cycles checked clean", passed, len(inps))


class EccEnv(BaseEnv):
    scoreboard_cls = EccScoreboard
    out_covergroup = staticmethod(ecc_covergroup)

    @staticmethod
    def out_to_sample(datum):
        err_det, err_multpl, dataout, chkout = datum
        return {"data_out": dataout, "chkout": chkout,
                "err_detect": err_det, "err_multpl": err_multpl}


@test("ecc.base")
class BaseTestEcc(BaseTest):
    default_transactions = 30000
    bfm_cls = EccBfm
    env_cls = EccEnv
    dut_model = EccDut

    def make_sequence(self, transactions):
        return EccSeq("seq", transactions)
