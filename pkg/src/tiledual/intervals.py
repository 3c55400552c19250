"""Exact set algebra on finite unions of half-open rational intervals.

Every set is kept in canonical form: a sorted tuple of disjoint,
non-adjacent ``[lo, hi)`` intervals with :class:`fractions.Fraction`
endpoints. Two sets are equal exactly when their canonical forms are.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string to a Fraction.

    Floats are rejected: they would silently smuggle binary rounding into
    what is supposed to be exact arithmetic.
    """
    if isinstance(value, bool):
        raise TypeError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {value!r}: {exc}") from None
    raise TypeError(f"not a rational: {value!r} ({type(value).__name__})")


def rational_to_str(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True, order=True)
class Interval:
    """The half-open interval ``[lo, hi)``; never empty."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"malformed interval [{self.lo}, {self.hi}): need lo < hi")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def to_json(self) -> list[str]:
        return [rational_to_str(self.lo), rational_to_str(self.hi)]

    def __repr__(self):
        return f"[{self.lo},{self.hi})"


class IntervalSet:
    """Canonical finite union of half-open intervals.

    Construct through :func:`normalize` (or ``IntervalSet(raw)``, which
    normalizes). Instances are immutable and hashable.
    """

    __slots__ = ("_intervals",)

    def __init__(self, raw: Iterable[Interval | Sequence[RationalLike]] = ()):
        items = [iv if isinstance(iv, Interval) else Interval(*iv) for iv in raw]
        object.__setattr__(self, "_intervals", _merge(items))

    @classmethod
    def _from_canonical(cls, intervals: tuple[Interval, ...]) -> "IntervalSet":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_intervals", intervals)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("IntervalSet is immutable")

    @property
    def intervals(self) -> tuple[Interval, ...]:
        return self._intervals

    def __iter__(self):
        return iter(self._intervals)

    def __len__(self):
        return len(self._intervals)

    def __bool__(self):
        return bool(self._intervals)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._intervals == other._intervals

    def __hash__(self):
        return hash(self._intervals)

    def __repr__(self):
        return "IntervalSet(" + ",".join(repr(iv) for iv in self._intervals) + ")"

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __sub__(self, other):
        return difference(self, other)

    @property
    def measure(self) -> Fraction:
        return measure(self)

    @property
    def lo(self) -> Fraction:
        if not self._intervals:
            raise ValueError("empty set has no lower bound")
        return self._intervals[0].lo

    @property
    def hi(self) -> Fraction:
        if not self._intervals:
            raise ValueError("empty set has no upper bound")
        return self._intervals[-1].hi

    def endpoints(self) -> list[Fraction]:
        out = []
        for iv in self._intervals:
            out.extend((iv.lo, iv.hi))
        return out

    def common_denominator(self) -> int:
        """Least common multiple of all endpoint denominators (1 if empty)."""
        return lcm(1, *(q.denominator for q in self.endpoints()))

    def contains(self, other: "IntervalSet") -> bool:
        return not difference(other, self)

    def to_json(self) -> list[list[str]]:
        return [iv.to_json() for iv in self._intervals]

    @classmethod
    def from_json(cls, data) -> "IntervalSet":
        if not isinstance(data, list):
            raise ValueError(f"interval set must be a list of [lo, hi] pairs, got {type(data).__name__}")
        raw = []
        for idx, pair in enumerate(data):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValueError(f"interval #{idx}: expected a two-element array, got {pair!r}")
            try:
                raw.append(Interval(as_rational(pair[0]), as_rational(pair[1])))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"interval #{idx}: {exc}") from None
        return cls(raw)


EMPTY = IntervalSet._from_canonical(())


def _merge(items: list[Interval]) -> tuple[Interval, ...]:
    if not items:
        return ()
    items = sorted(items)
    out = []
    lo, hi = items[0].lo, items[0].hi
    for iv in items[1:]:
        # adjacent ([a,b) followed by [b,c)) merges as well as overlapping
        if iv.lo <= hi:
            if iv.hi > hi:
                hi = iv.hi
        else:
            out.append(Interval(lo, hi))
            lo, hi = iv.lo, iv.hi
    out.append(Interval(lo, hi))
    return tuple(out)


def normalize(raw: Iterable[Interval | Sequence[RationalLike]]) -> IntervalSet:
    """Canonical sorted, merged union of ``raw``.

    >>> normalize([Interval(Fraction(1, 2), 1), Interval(0, Fraction(3, 4))])
    IntervalSet([0,1))
    """
    return IntervalSet(raw)


def interval_set(*pairs: Sequence[RationalLike]) -> IntervalSet:
    """Shorthand: ``interval_set((0, "1/2"), ("3/2", 2))``."""
    return IntervalSet(Interval(as_rational(a), as_rational(b)) for a, b in pairs)


def measure(s: IntervalSet) -> Fraction:
    return sum((iv.length for iv in s.intervals), Fraction(0))


def translate(s: IntervalSet, t: RationalLike) -> IntervalSet:
    t = as_rational(t)
    if t == 0:
        return s
    return IntervalSet._from_canonical(tuple(Interval(iv.lo + t, iv.hi + t) for iv in s.intervals))


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    if not a:
        return b
    if not b:
        return a
    return IntervalSet._from_canonical(_merge(list(a.intervals) + list(b.intervals)))


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    out = []
    xs, ys = a.intervals, b.intervals
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i].lo, ys[j].lo)
        hi = min(xs[i].hi, ys[j].hi)
        if lo < hi:
            out.append(Interval(lo, hi))
        if xs[i].hi < ys[j].hi:
            i += 1
        else:
            j += 1
    # pieces of canonical inputs are disjoint and non-adjacent
    return IntervalSet._from_canonical(tuple(out))


def difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    out = []
    ys = b.intervals
    j = 0
    for iv in a.intervals:
        lo = iv.lo
        while j < len(ys) and ys[j].hi <= lo:
            j += 1
        k = j
        while k < len(ys) and ys[k].lo < iv.hi:
            if ys[k].lo > lo:
                out.append(Interval(lo, ys[k].lo))
            lo = max(lo, ys[k].hi)
            if lo >= iv.hi:
                break
            k += 1
        if lo < iv.hi:
            out.append(Interval(lo, iv.hi))
    return IntervalSet._from_canonical(tuple(out))


def overlap_measure(a: IntervalSet, b: IntervalSet) -> Fraction:
    """Measure of ``a & b``; zero iff the sets are disjoint up to a null set."""
    return measure(intersect(a, b))


def hull(s: IntervalSet) -> Interval:
    return Interval(s.lo, s.hi)
