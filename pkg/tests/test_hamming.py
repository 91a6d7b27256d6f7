import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lutcode.hamming import (
    Outcome,
    baseline_code,
    canonical_columns,
    correct,
    delta,
    t_rows,
)
from lutcode.lut import BinaryLut, DecoderMatrix, flip_bits, gf2_row_times_ht


@pytest.mark.parametrize("p, expected", [(3, 3), (4, 3), (1, 2), (2, 3), (11, 4), (12, 5)])
def test_delta(p, expected):
    assert delta(p) == expected


def test_delta_matches_search_definition():
    for p in range(1, 100):
        s = next(s for s in itertools.count(1) if 2**s >= p + s + 1)
        assert delta(p) == s


@pytest.mark.parametrize("c, expected", [(3, 2), (6, 3), (1, 1), (7, 3), (8, 4)])
def test_t_rows(c, expected):
    assert t_rows(c) == expected


def test_canonical_columns_sec4():
    assert canonical_columns(3) == [3, 5, 6, 1, 2, 4]


def test_baseline_sec4(sec4_data, sec4_H):
    result = baseline_code(sec4_data)
    assert result.k == 3
    assert result.H == sec4_H
    assert [row[3:] for row in result.coded.bits] == [(0, 1, 1), (0, 1, 1), (0, 0, 0), (0, 0, 0)]
    assert result.coded.to_strings() == ["001011", "110011", "111000", "111000"]


@pytest.mark.parametrize("p", [1, 2, 3, 4, 7])
def test_baseline_zero_row(p):
    result = baseline_code(BinaryLut(((0,) * p,)))
    assert result.coded.bits == ((0,) * (p + delta(p)),)


def test_baseline_parity_unique_by_enumeration():
    result = baseline_code(BinaryLut(((1, 0, 0),)))
    H = result.H
    ok = [x for x in itertools.product((0, 1), repeat=3)
          if not any(gf2_row_times_ht((1, 0, 0) + x, H))]
    assert len(ok) == 1
    assert result.coded.bits[0] == (1, 0, 0) + ok[0]


def test_correct_codeword(sec4_H):
    assert correct((0, 0, 1, 0, 1, 1), sec4_H).tag is Outcome.NO_ERROR


def test_correct_single_flip(sec4_H):
    out = correct((0, 0, 0, 0, 1, 1), sec4_H)
    assert out.tag is Outcome.CORRECTED
    assert out.position == 2  # third bit from the left
    assert out.corrected_row == (0, 0, 1, 0, 1, 1)


def test_correct_sec5(sec5_H):
    assert correct((1, 1, 1), sec5_H).tag is Outcome.NO_ERROR


def test_correct_uncorrectable():
    H = DecoderMatrix.from_column_ints([1, 2], 2)
    out = correct((1, 1), H)
    assert out.tag is Outcome.UNCORRECTABLE
    assert out.corrected_row is None


def test_correct_dimension_mismatch(sec4_H):
    with pytest.raises(ValueError):
        correct((0, 1, 1), sec4_H)


binary_luts = st.integers(1, 6).flatmap(
    lambda p: st.lists(st.tuples(*[st.integers(0, 1)] * p), min_size=1, max_size=8)
).map(lambda rows: BinaryLut(tuple(rows)))


@settings(max_examples=60, deadline=None)
@given(binary_luts)
def test_baseline_properties(data):
    result = baseline_code(data)
    H = result.H
    c = result.coded.width
    rows = result.coded.bits
    for row in rows:
        assert not any(gf2_row_times_ht(row, H))
        for j in range(c):
            out = correct(flip_bits(row, [j]), H)
            assert (out.tag, out.position, out.corrected_row) == (Outcome.CORRECTED, j, row)
        for j, jj in itertools.combinations(range(c), 2):
            out = correct(flip_bits(row, [j, jj]), H)
            assert out.tag is Outcome.UNCORRECTABLE or out.corrected_row != row
    for a, b in itertools.combinations(rows, 2):
        dist = sum(x != y for x, y in zip(a, b))
        assert dist == 0 or dist >= 3
