import pytest
from hypothesis import given, strategies as st

from verikit.sim import LogicConversionError, LogicValue


def test_from_str_msb_first():
    v = LogicValue.from_str("0101")
    assert v.width == 4
    assert int(v) == 5
    assert v.binstr == "0101"


def test_x_and_z_refuse_integer_conversion():
    for text in ("01X1", "Z000", "XXXX"):
        v = LogicValue.from_str(text)
        assert not v.is_resolvable
        with pytest.raises(LogicConversionError):
            int(v)


def test_unknown_renders_all_x():
    assert LogicValue.unknown(3).binstr == "XXX"


def test_negative_int_is_twos_complement():
    v = LogicValue(-1, 8)
    assert int(v) == 0xFF
    assert v.signed_integer == -1


def test_equality_against_int_and_str():
    v = LogicValue(6, 4)
    assert v == 6
    assert v == "0110"
    assert v != LogicValue.from_str("011X")


def test_bit_indexing_lsb_zero():
    v = LogicValue.from_str("10Z1")
    assert v[0] == "1"
    assert v[1] == "Z"
    assert v[3] == "1"


@given(st.integers(1, 64).flatmap(lambda w: st.tuples(st.just(w), st.integers(0, 2**w - 1))))
def test_binstr_round_trip(wv):
    w, v = wv
    lv = LogicValue(v, w)
    assert LogicValue.from_str(lv.binstr) == lv
    assert int(lv) == v
