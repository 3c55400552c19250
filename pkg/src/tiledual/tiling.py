"""Exact tiling checks for p-periodic unions of intervals.

A set that tiles the line by ``{0, 1, ..., p-1}`` is automatically
p-periodic, ``omega = base + pZ`` with ``base = omega & [0, p)``. That
periodicity reduces every question about the unbounded set to the single
window ``[0, p)``, where it becomes a finite computation in exact
rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .intervals import (
    EMPTY,
    Interval,
    IntervalSet,
    RationalLike,
    as_rational,
    difference,
    intersect,
    measure,
    overlap_measure,
    translate,
    union,
)


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


UNIT = IntervalSet([Interval(0, 1)])


@dataclass(frozen=True)
class PeriodicSet:
    """``base + pZ`` for a base contained in ``[0, p)``."""

    p: int
    base: IntervalSet

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise TypeError(f"period must be an integer, got {self.p!r}")
        if self.p < 2:
            raise ValueError(f"period must be >= 2, got {self.p}")
        if not isinstance(self.base, IntervalSet):
            object.__setattr__(self, "base", IntervalSet(self.base))
        if self.base and (self.base.lo < 0 or self.base.hi > self.p):
            raise PreconditionError(
                f"base {self.base!r} is not contained in [0, {self.p})"
            )

    @property
    def period_window(self) -> IntervalSet:
        return IntervalSet([Interval(0, self.p)])

    def window(self, lo: RationalLike, hi: RationalLike) -> IntervalSet:
        """Exact ``omega & [lo, hi)``."""
        lo, hi = as_rational(lo), as_rational(hi)
        if not lo < hi or not self.base:
            return EMPTY
        box = IntervalSet([Interval(lo, hi)])
        k_lo = math.floor(lo / self.p)
        k_hi = math.ceil(hi / self.p)
        copies = [translate(self.base, self.p * k) for k in range(k_lo, k_hi)]
        out = EMPTY
        for c in copies:
            out = union(out, intersect(c, box))
        return out

    def contains(self, s: IntervalSet) -> bool:
        if not s:
            return True
        return not difference(s, self.window(s.lo, s.hi))

    def to_json(self) -> dict:
        return {"p": self.p, "base": self.base.to_json()}

    @classmethod
    def from_json(cls, data) -> "PeriodicSet":
        if not isinstance(data, dict):
            raise ValueError(f"periodic set must be a JSON object, got {type(data).__name__}")
        for key in ("p", "base"):
            if key not in data:
                raise ValueError(f"periodic set: missing field {key!r}")
        p = data["p"]
        if isinstance(p, bool) or not isinstance(p, int):
            raise ValueError(f"field 'p': expected an integer, got {p!r}")
        try:
            base = IntervalSet.from_json(data["base"])
        except ValueError as exc:
            raise ValueError(f"field 'base': {exc}") from None
        try:
            return cls(p, base)
        except (TypeError, ValueError) as exc:
            raise ValueError(str(exc)) from None


@dataclass(frozen=True)
class FiniteShifts:
    shifts: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_rational(s) for s in self.shifts)
        if len(set(vals)) != len(vals):
            raise ValueError("finite shift list has repeated entries")
        object.__setattr__(self, "shifts", vals)


@dataclass(frozen=True)
class LatticeShifts:
    step: Fraction

    def __post_init__(self):
        step = as_rational(self.step)
        if step <= 0:
            raise ValueError(f"lattice step must be positive, got {step}")
        object.__setattr__(self, "step", step)


TranslationSet = Union[FiniteShifts, LatticeShifts]


@dataclass(frozen=True)
class Overlap:
    shift_a: Fraction
    shift_b: Fraction
    measure: Fraction

    def to_json(self) -> dict:
        return {
            "kind": "overlap",
            "shifts": [str(self.shift_a), str(self.shift_b)],
            "measure": str(self.measure),
        }


@dataclass(frozen=True)
class Uncovered:
    residue: IntervalSet

    def to_json(self) -> dict:
        return {
            "kind": "uncovered",
            "residue": self.residue.to_json(),
            "measure": str(measure(self.residue)),
        }


@dataclass(frozen=True)
class TilingReport:
    verdict: bool
    violation: Optional[Union[Overlap, Uncovered]] = None

    def __post_init__(self):
        if self.verdict != (self.violation is None):
            raise ValueError("verdict must be true exactly when no violation is recorded")

    def __bool__(self):
        return self.verdict

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "violation": None if self.violation is None else self.violation.to_json(),
        }


@dataclass(frozen=True)
class CongruenceDecomposition:
    """Pieces ``I_k = (s & [k, k+1)) - k`` of a set folded into ``[0, 1)``."""

    pieces: dict[int, IntervalSet] = field(default_factory=dict)

    def folded(self) -> IntervalSet:
        out = EMPTY
        for piece in self.pieces.values():
            out = union(out, piece)
        return out

    def to_json(self) -> dict:
        return {str(k): v.to_json() for k, v in sorted(self.pieces.items())}


def _enumerate_shifts(tile: IntervalSet, shifts: TranslationSet, target: IntervalSet) -> list[Fraction]:
    if isinstance(shifts, FiniteShifts):
        return sorted(shifts.shifts)
    if not tile or not target:
        return []
    # tile + s meets [target.lo, target.hi) only if tile.lo + s < target.hi and tile.hi + s > target.lo
    k_lo = math.floor((target.lo - tile.hi) / shifts.step)
    k_hi = math.ceil((target.hi - tile.lo) / shifts.step)
    return [shifts.step * k for k in range(k_lo, k_hi + 1)]


def tiles_window(tile: IntervalSet, shifts: TranslationSet, target: IntervalSet) -> TilingReport:
    """Do the translates ``tile + s`` partition ``target`` exactly?

    Translates are clipped to ``target``. For a lattice every shift whose
    translate meets the target is enumerated, so the answer is exact for
    the window; whether the pattern continues outside it is not examined.
    """
    covered = EMPTY
    placed: list[tuple[Fraction, IntervalSet]] = []
    for s in _enumerate_shifts(tile, shifts, target):
        piece = intersect(translate(tile, s), target)
        if not piece:
            continue
        if overlap_measure(covered, piece) > 0:
            for prev_s, prev in placed:
                m = overlap_measure(prev, piece)
                if m > 0:
                    return TilingReport(False, Overlap(prev_s, s, m))
        covered = union(covered, piece)
        placed.append((s, piece))
    residue = difference(target, covered)
    if residue:
        return TilingReport(False, Uncovered(residue))
    return TilingReport(True)


def tiles_by_residues(omega: PeriodicSet) -> TilingReport:
    """Exact test that ``omega`` tiles the line by ``{0, ..., p-1}``.

    The family ``base + j + pk`` is invariant under shifts by p, so it
    partitions the line iff it partitions the window ``[0, p)``. Only
    ``k in {-1, 0}`` can reach that window.
    """
    p = omega.p
    shifts = [Fraction(j + p * k) for j in range(p) for k in (-1, 0)]
    return tiles_window(omega.base, FiniteShifts(tuple(shifts)), omega.period_window)


def fundamental_domain(omega: PeriodicSet) -> IntervalSet:
    base = omega.base
    if base and (base.lo < 0 or base.hi > omega.p):
        raise PreconditionError(f"base {base!r} is not contained in [0, {omega.p})")
    return base


def congruence_mod_one(s: IntervalSet) -> tuple[CongruenceDecomposition, bool]:
    """Fold ``s`` into ``[0, 1)`` by integer shifts.

    Returns the pieces ``I_k`` (only non-empty ones) and whether they
    partition ``[0, 1)`` exactly, i.e. whether ``s`` is congruent to the
    unit interval modulo Z.
    """
    pieces: dict[int, IntervalSet] = {}
    if s:
        for k in range(math.floor(s.lo), math.ceil(s.hi)):
            chunk = intersect(s, IntervalSet([Interval(k, k + 1)]))
            if chunk:
                pieces[k] = translate(chunk, -k)
    decomposition = CongruenceDecomposition(pieces)
    folded = decomposition.folded()
    disjoint = measure(folded) == sum((measure(v) for v in pieces.values()), Fraction(0))
    return decomposition, disjoint and folded == UNIT


def build_omega_n(omega0: IntervalSet, p: int, n: int) -> IntervalSet:
    """``omega0 + p{-n, ..., n}``: the first ``2n + 1`` periods of the set."""
    if n < 0:
        raise PreconditionError(f"n must be >= 0, got {n}")
    if p < 1:
        raise PreconditionError(f"p must be positive, got {p}")
    if omega0 and (omega0.lo < 0 or omega0.hi > p):
        raise PreconditionError(f"{omega0!r} is not contained in [0, {p})")
    out = EMPTY
    for l in range(-n, n + 1):
        out = union(out, translate(omega0, p * l))
    return out


def translate_disjointness(omega: PeriodicSet, j: int) -> Fraction:
    """Exact measure of ``omega & (omega + j)`` over one period."""
    p = omega.p
    here = omega.base
    shifted = translate(omega.window(-j, p - j), j)
    return overlap_measure(here, shifted)


def complete_to_tile(omega: PeriodicSet) -> tuple[IntervalSet, PeriodicSet]:
    """Fill the holes of a set whose residue translates are disjoint.

    Returns ``(R, omega_tilde)`` where ``R`` is the part of ``[0, 1)`` not
    reached by ``base + Z`` and ``omega_tilde = (base | R) + pZ``.
    Inputs whose translates by some ``j`` in ``1..p-1`` overlap are refused.
    """
    for j in range(1, omega.p):
        m = translate_disjointness(omega, j)
        if m > 0:
            raise PreconditionError(
                f"omega & (omega + {j}) has measure {m}; translates must be disjoint to complete"
            )
    base = omega.base
    decomposition, _ = congruence_mod_one(base)
    residue = difference(UNIT, decomposition.folded())
    tilde = PeriodicSet(omega.p, union(base, residue))
    report = tiles_by_residues(tilde)
    if not report.verdict:
        raise AssertionError(f"completion failed to tile: {report.violation}")
    if not tilde.base.contains(base):
        raise AssertionError("completion does not contain the input base")
    return residue, tilde
