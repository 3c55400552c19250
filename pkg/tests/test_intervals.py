from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiledual import oracles
from tiledual.intervals import (
    EMPTY,
    Interval,
    IntervalSet,
    as_rational,
    difference,
    hull,
    interval_set,
    intersect,
    measure,
    normalize,
    overlap_measure,
    translate,
    union,
)

from strategies import interval_sets, rationals

F = Fraction


class TestNormalize:
    def test_adjacent_merge(self):
        assert normalize([(0, 1), (1, 2)]) == interval_set((0, 2))

    def test_identity(self):
        assert normalize([(0, 1)]).intervals == (Interval(F(0), F(1)),)

    def test_overlapping_union(self):
        assert normalize([("1/2", 1), (0, "3/4")]) == interval_set((0, 1))

    def test_rejects_empty_interval(self):
        with pytest.raises(ValueError):
            Interval(F(1), F(1))

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            as_rational(0.5)


class TestMeasureAndTranslate:
    @pytest.mark.parametrize("s, m", [
        (interval_set((0, 1)), 1),
        (EMPTY, 0),
        (interval_set((0, "1/2"), ("3/2", 2)), 1),
    ])
    def test_measure(self, s, m):
        assert measure(s) == m

    def test_translate(self):
        assert translate(interval_set((0, 1)), 2) == interval_set((2, 3))
        assert translate(interval_set((0, 1)), 0) == interval_set((0, 1))
        got = translate(interval_set((0, "1/2"), ("3/2", 2)), F(-3, 2))
        assert got == interval_set(("-3/2", -1), (0, "1/2"))


class TestSetOps:
    def test_examples(self):
        assert intersect(interval_set((0, 1)), interval_set(("1/2", 2))) == interval_set(("1/2", 1))
        assert difference(interval_set((0, 1)), interval_set((0, 1))) == EMPTY
        assert union(interval_set((0, "1/4")), interval_set(("1/4", "1/2"))) == interval_set((0, "1/2"))

    def test_overlap_examples(self):
        assert overlap_measure(interval_set((0, 1)), interval_set((1, 2))) == 0
        assert overlap_measure(interval_set((0, 1)), interval_set(("1/2", "3/2"))) == F(1, 2)
        s = interval_set((0, "3/4"), (1, "5/4"))
        assert overlap_measure(s, translate(s, 1)) == F(1, 4)
        # bitmap cross-check at 1/64
        N = 64
        a = oracles.raster(s, F(-2), F(4), N)
        b = oracles.raster(translate(s, 1), F(-2), F(4), N)
        assert F(int((a & b).sum()), N) == F(1, 4)

    def test_json_round_trip(self):
        s = interval_set((0, "1/2"), ("3/2", 2))
        assert s.to_json() == [["0", "1/2"], ["3/2", "2"]]
        assert IntervalSet.from_json(s.to_json()) == s

    def test_json_error_names_interval(self):
        with pytest.raises(ValueError, match="#1"):
            IntervalSet.from_json([["0", "1"], ["2", "1"]])


@settings(max_examples=200, deadline=None)
@given(interval_sets(), interval_sets())
def test_inclusion_exclusion(a, b):
    assert measure(union(a, b)) + measure(intersect(a, b)) == measure(a) + measure(b)


@settings(max_examples=200, deadline=None)
@given(interval_sets(), interval_sets())
def test_difference_partitions(a, b):
    d = difference(a, b)
    assert measure(intersect(d, b)) == 0
    assert union(d, intersect(a, b)) == a


@settings(max_examples=200, deadline=None)
@given(interval_sets(), rationals())
def test_translate_preserves_measure(s, t):
    assert measure(translate(s, t)) == measure(s)
    assert translate(translate(s, t), -t) == s


@settings(max_examples=200, deadline=None)
@given(interval_sets())
def test_canonical_form(s):
    ivs = s.intervals
    assert all(a.hi < b.lo for a, b in zip(ivs, ivs[1:]))
    assert normalize(list(reversed(ivs))) == s
    if s:
        assert hull(s).length >= measure(s)


@settings(max_examples=150, deadline=None)
@given(interval_sets(), interval_sets(), st.sampled_from(["|", "&", "-"]))
def test_matches_raster(a, b, op):
    got = {"|": a | b, "&": a & b, "-": a - b}[op]
    N = oracles.grid_resolution(a, b)
    lo, hi = F(-7), F(7)
    ra, rb = oracles.raster(a, lo, hi, N), oracles.raster(b, lo, hi, N)
    want = {"|": ra | rb, "&": ra & rb, "-": ra & ~rb}[op]
    assert (oracles.raster(got, lo, hi, N) == want).all()
