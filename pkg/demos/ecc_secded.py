"""Walk through the SECDED codec, then run the ECC testbench and print its coverage.

    python3 demos/ecc_secded.py
"""

from verikit.cli import format_report
from verikit.crv import derive_seed
from verikit.duts import EccCodec
from verikit.uvm import run_test


def show_codec():
    codec = EccCodec(32)
    word = 0xCAFEF00D
    chk = codec.encode(word)
    print(f"DW=32 needs CW={codec.cw} check bits; encode({word:#010x}) -> {chk:#04x}")

    # codewords keep the check bits in the low positions
    data_bit = lambda j: 1 << (codec.cw + j)
    check_bit = lambda j: 1 << j
    cases = [
        ("clean", 0),
        ("data bit 3 flipped", data_bit(3)),
        ("check bit 0 flipped", check_bit(0)),
        ("data bits 3, 20 flipped", data_bit(3) | data_bit(20)),
    ]
    full = codec.codeword(word, chk)
    for label, mask in cases:
        data, rx_chk = codec.split(full ^ mask)
        r = codec.decode(data, rx_chk, correct_n=0)
        print(f"  {label:<24} dataout={r.dataout:#010x} err_detect={r.err_detect} err_multpl={r.err_multpl}")

    data, rx_chk = codec.split(full ^ data_bit(3))
    r = codec.decode(data, rx_chk, correct_n=1)
    print(f"  same single flip with correct_n=1 leaves the data alone: {r.dataout:#010x}")


def run_bench(transactions=5000):
    res = run_test("ecc.base", derive_seed(1, "ecc.base"), transactions=transactions)
    print(f"\necc.base with {transactions} transactions: {'PASS' if res.passed else 'FAIL'}")
    print(format_report(res.coverage))
    print("\nThe decoder can never say 'multiple errors' without also saying 'error',")
    print("so the cross bin err_detect=0/err_multpl=1 stays empty by construction.")


if __name__ == "__main__":
    show_codec()
    run_bench()
