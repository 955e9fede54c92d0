import pytest

from fragsleuth.corpus.chunks import Fragment
from fragsleuth.randtest.bits import bits_from_bytes, bits_from_fragment, bits_from_string
from fragsleuth.randtest.templates import aperiodic_templates


@pytest.mark.parametrize(
    "byte,expected",
    [
        (0x00, [0] * 8),
        (0x80, [1, 0, 0, 0, 0, 0, 0, 0]),
        (0xA5, [1, 0, 1, 0, 0, 1, 0, 1]),
    ],
)
def test_msb_first_unpack(byte, expected):
    seq = bits_from_bytes(bytes([byte]))
    assert seq.n == 8
    assert seq.bits.tolist() == expected


def test_fragment_bit_length():
    frag = Fragment(bytes(4096), "gzip", ("p", 0))
    seq = bits_from_fragment(frag)
    assert seq.n == 32768


def test_bits_from_string():
    seq = bits_from_string("10 11\n01")
    assert seq.bits.tolist() == [1, 0, 1, 1, 0, 1]
    with pytest.raises(ValueError):
        bits_from_string("10121")
    with pytest.raises(ValueError):
        bits_from_string("  ")


def test_unpack_definition_matches_shift_formula():
    data = bytes([0x3C, 0xF0, 0x01])
    bits = bits_from_bytes(data).bits
    for k in range(len(data) * 8):
        assert bits[k] == (data[k // 8] >> (7 - (k % 8))) & 1


# counts of aperiodic (bifix-free) binary strings by length
@pytest.mark.parametrize("m,count", [(2, 2), (3, 4), (4, 6), (5, 12), (6, 20), (7, 40), (8, 74), (9, 148)])
def test_template_counts(m, count):
    assert len(aperiodic_templates(m)) == count


def test_templates_are_aperiodic_and_sorted():
    templates = aperiodic_templates(9)
    assert list(templates) == sorted(templates)
    for value in templates:
        bits = [(value >> (8 - k)) & 1 for k in range(9)]
        for shift in range(1, 9):
            assert bits[: 9 - shift] != bits[shift:], f"template {value:09b} overlaps at {shift}"


def test_all_ones_and_all_zeros_excluded():
    templates = set(aperiodic_templates(9))
    assert 0 not in templates
    assert 511 not in templates
