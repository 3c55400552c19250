"""Closed-form Fourier transforms and certified lattice sums.

Transforms follow ``f^(t) = int f(x) exp(-2 pi i x t) dx``. Everything
here is float64; exact rationals only enter as interval endpoints.

Lattice sums ``sum_k F(u + k)`` over all integers are truncated to
``|k| <= K`` and paired with an analytic bound on the discarded tail.
For step functions with rational jumps the truncated sum is evaluated
in time independent of ``K``: the numerator of ``|f^|^2`` is periodic
in ``k`` with period equal to the common denominator of the jump
points, and each residue class contributes a difference of trigamma
values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np
from scipy.special import polygamma

from .intervals import Interval, IntervalSet, RationalLike, as_rational, measure
from .tiling import PeriodicSet

K_MAX = 10_000_000
TWO_PI = 2.0 * math.pi

# fast residue-class evaluation is used up to this common denominator
_RESIDUE_Q_MAX = 4096
_CHUNK = 1 << 20


class TruncationError(RuntimeError):
    """The requested tail tolerance needs more than ``K_MAX`` terms."""


@dataclass(frozen=True)
class LatticeSumResult:
    value: Union[float, complex]
    truncation_K: int
    tail_bound: float

    @property
    def interval(self) -> tuple[float, float]:
        v = self.value.real if isinstance(self.value, complex) else self.value
        return v - self.tail_bound, v + self.tail_bound

    def to_json(self) -> dict:
        value = self.value
        if isinstance(value, complex):
            value = [value.real, value.imag]
        return {"value": value, "K": self.truncation_K, "tail_bound": self.tail_bound}


@dataclass(frozen=True)
class SampledFunction:
    grid: tuple[Fraction, ...]
    values: tuple[complex, ...]
    tails: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values differ in length")
        if self.tails and len(self.tails) != len(self.values):
            raise ValueError("grid and tails differ in length")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")

    def to_csv_rows(self) -> list[tuple[str, str, str]]:
        rows = []
        tails = self.tails or (0.0,) * len(self.values)
        for t, v, b in zip(self.grid, self.values, tails):
            v = complex(v)
            shown = repr(v.real) if v.imag == 0 else f"{v.real!r}{v.imag:+.17g}j"
            rows.append((repr(float(t)), shown, repr(float(b))))
        return rows


class StepFunction:
    """Finite linear combination of indicators of rational intervals.

    Stored canonically as disjoint pieces with nonzero coefficients.
    Its transform has the closed form ``D(t) / (2 pi i t)`` with
    ``D(t) = sum_j J_j exp(-2 pi i x_j t)`` over the jump points.
    """

    __slots__ = ("pieces", "_jumps")

    def __init__(self, pieces: Iterable[tuple[Union[Interval, IntervalSet], complex]] = ()):
        flat: list[tuple[Interval, complex]] = []
        for where, c in pieces:
            ivs = where.intervals if isinstance(where, IntervalSet) else (where,)
            flat.extend((iv, complex(c)) for iv in ivs)
        self.pieces = _canonical_pieces(flat)
        self._jumps = _jumps(self.pieces)

    @classmethod
    def indicator(cls, s: IntervalSet, coefficient: complex = 1.0) -> "StepFunction":
        return cls([(s, coefficient)])

    @property
    def support(self) -> IntervalSet:
        return IntervalSet(iv for iv, _ in self.pieces)

    @property
    def jumps(self) -> list[tuple[Fraction, complex]]:
        return list(self._jumps)

    def is_zero(self) -> bool:
        return not self.pieces

    def norm_sq(self) -> float:
        """``int |f|^2``."""
        return float(sum(abs(c) ** 2 * float(iv.length) for iv, c in self.pieces))

    def variation(self) -> float:
        """Total jump size; ``|f^(t)| <= variation / (2 pi |t|)``."""
        return float(sum(abs(J) for _, J in self._jumps))

    def common_denominator(self) -> int:
        return math.lcm(1, *(x.denominator for x, _ in self._jumps))

    def transform(self, t):
        """Vectorized ``f^(t)``; numerically stable through ``t = 0``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for iv, c in self.pieces:
            w = float(iv.length)
            mid = float((iv.lo + iv.hi) / 2)
            out += c * w * np.sinc(w * t) * np.exp(-1j * TWO_PI * mid * t)
        return out if out.ndim else complex(out)

    def to_json(self) -> dict:
        return {
            "kind": "step",
            "pieces": [[iv.to_json(), _complex_json(c)] for iv, c in self.pieces],
        }

    def __eq__(self, other):
        return isinstance(other, StepFunction) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        return f"StepFunction({list(self.pieces)!r})"


def _complex_json(c: complex):
    return c.real if c.imag == 0 else [c.real, c.imag]


def _canonical_pieces(flat: list[tuple[Interval, complex]]) -> tuple[tuple[Interval, complex], ...]:
    if not flat:
        return ()
    cuts = sorted({x for iv, _ in flat for x in (iv.lo, iv.hi)})
    out: list[tuple[Interval, complex]] = []
    for a, b in zip(cuts, cuts[1:]):
        c = sum((coef for iv, coef in flat if iv.lo <= a and b <= iv.hi), 0j)
        if c == 0:
            continue
        if out and out[-1][0].hi == a and out[-1][1] == c:
            out[-1] = (Interval(out[-1][0].lo, b), c)
        else:
            out.append((Interval(a, b), c))
    return tuple(out)


def _jumps(pieces) -> tuple[tuple[Fraction, complex], ...]:
    acc: dict[Fraction, complex] = {}
    for iv, c in pieces:
        acc[iv.lo] = acc.get(iv.lo, 0j) + c
        acc[iv.hi] = acc.get(iv.hi, 0j) - c
    return tuple((x, J) for x, J in sorted(acc.items()) if J != 0)


# ---------------------------------------------------------------------------
# closed forms


def ft_indicator(s: IntervalSet, t):
    """Transform of the indicator of ``s`` at ``t`` (scalar or array).

    Each interval contributes ``w sinc(w t) exp(-2 pi i c t)`` with width
    ``w`` and midpoint ``c``, which equals
    ``(exp(-2 pi i lo t) - exp(-2 pi i hi t)) / (2 pi i t)`` and is exact
    at ``t = 0``, where the transform is the measure of ``s``.
    """
    return StepFunction.indicator(s).transform(t)


def _reduced_phase(p: int, t) -> np.ndarray:
    """``p t`` reduced to ``[-1/2, 1/2]``; exact when ``t`` is a Fraction."""
    if isinstance(t, Fraction):
        x = p * t
        x -= round(x)
        return np.asarray(float(x))
    pt = p * np.asarray(t, dtype=float)
    return pt - np.round(pt)


def dirac_comb_ft(p: int, n: int, t):
    """``sum_{l=-n}^{n} exp(-2 pi i p l t)``, the transform of the comb on ``p{-n..n}``.

    The sum is real: it is the Dirichlet kernel
    ``sin(pi p (2n+1) t) / sin(pi p t)``. Since ``2n+1`` is odd the kernel
    has period 1 in ``p t``, so the phase is reduced first; near the
    removable singularity the cosine sum is used instead.
    """
    if p < 1 or n < 0:
        raise ValueError(f"need p >= 1 and n >= 0, got p={p}, n={n}")
    x = _reduced_phase(p, t)
    den = np.sin(np.pi * x)
    near = np.abs(den) < 1e-8
    safe = np.where(near, 1.0, den)
    out = np.sin(np.pi * (2 * n + 1) * x) / safe
    if np.any(near):
        l = np.arange(1, n + 1)
        direct = 1.0 + 2.0 * np.sum(np.cos(TWO_PI * np.multiply.outer(x, l)), axis=-1)
        out = np.where(near, direct, out)
    return float(out) if out.ndim == 0 else out


def comb_plancherel_check(p: int, n: int, t: float) -> float:
    """``sum_{j=-n}^{n} |comb^(t + j / (p(2n+1)))|^2``; identically ``(2n+1)^2``."""
    j = np.arange(-n, n + 1)
    vals = dirac_comb_ft(p, n, t + j / (p * (2 * n + 1)))
    return float(np.sum(np.asarray(vals) ** 2))


def periodic_ft_coefficients(omega: PeriodicSet, k_range: int) -> list[complex]:
    """Atom weights ``(1/p) chi_base^(k/p)`` for ``k = -k_range .. k_range``.

    The transform of the p-periodic indicator, as a distribution, is
    ``sum_k w_k delta_{k/p}`` with these weights.
    """
    if k_range < 0:
        raise ValueError("k_range must be >= 0")
    p = omega.p
    k = np.arange(-k_range, k_range + 1)
    vals = np.atleast_1d(ft_indicator(omega.base, k / p)) / p
    return [complex(v) for v in vals]


# ---------------------------------------------------------------------------
# lattice sums


def _trigamma_tail(C: float, u: float, K: int) -> float:
    """``C * sum_{|k| > K} 1/(u + k)^2`` for ``|u| < K + 1``."""
    if C == 0.0:
        return 0.0
    return float(C * (polygamma(1, K + 1 + u) + polygamma(1, K + 1 - u)))


def _choose_K(consts: Sequence[float], us: Sequence[float], tol: float, k_max: int = K_MAX) -> int:
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = sum(consts)
    if total == 0.0:
        return 0
    umax = max(abs(u) for u in us)
    K = max(1, math.ceil(2.0 * total / tol + umax))
    while sum(_trigamma_tail(c, u, K) for c, u in zip(consts, us)) > tol:
        K = math.ceil(K * 1.1) + 1
        if K > k_max:
            break
    if K > k_max:
        raise TruncationError(
            f"tail tolerance {tol:g} needs K > {k_max} (decay constant {total:g})"
        )
    return K


def _center(t: float) -> float:
    return float(t - round(t))


def cross_energy(f: StepFunction, g: StepFunction, u: float, K: int, method: str = "auto") -> complex:
    """``sum_{|k| <= K} f^(u + k) * conj(g^(u + k))``.

    ``method`` is ``"residue"`` (time independent of K), ``"direct"`` or
    ``"auto"``.
    """
    if f.is_zero() or g.is_zero():
        return 0j
    Q = math.lcm(f.common_denominator(), g.common_denominator())
    if method == "auto":
        method = "residue" if Q <= _RESIDUE_Q_MAX and Q < 2 * K + 1 else "direct"
    if method == "direct":
        return _direct_cross(f, g, u, -K, K)
    if method != "residue":
        raise ValueError(f"unknown method {method!r}")
    return _residue_cross(f, g, u, K, Q)


def _direct_cross(f: StepFunction, g: StepFunction, u: float, k_lo: int, k_hi: int) -> complex:
    total = 0j
    for start in range(k_lo, k_hi + 1, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, k_hi + 1), dtype=float)
        t = u + k
        fv = f.transform(t)
        gv = fv if g is f else g.transform(t)
        total += complex(np.sum(fv * np.conj(gv)))
    return total


def _jump_numerator(f: StepFunction, u: float, Q: int) -> np.ndarray:
    """``D_f(u + r)`` for ``r = 0 .. Q-1``, with exact phase reduction."""
    r = np.arange(Q)
    out = np.zeros(Q, dtype=complex)
    for x, J in f.jumps:
        # x * r mod 1 computed in integers
        frac = ((x.numerator % x.denominator) * r % x.denominator) / x.denominator
        out += J * np.exp(-1j * TWO_PI * (float(x) * u + frac))
    return out


def _residue_cross(f: StepFunction, g: StepFunction, u: float, K: int, Q: int) -> complex:
    H = 2
    kc = -int(round(u))
    c_lo, c_hi = max(-K, kc - H), min(K, kc + H)
    total = _direct_cross(f, g, u, c_lo, c_hi) if c_lo <= c_hi else 0j

    Df = _jump_numerator(f, u, Q)
    Dg = Df if g is f else _jump_numerator(g, u, Q)
    numer = Df * np.conj(Dg) / (4.0 * math.pi ** 2)

    r = np.arange(Q)
    # right side: k = k_start + Q m for k > c_hi, k <= K
    first = max(c_hi + 1, -K)
    k_start = first + (r - first) % Q
    count = np.where(k_start <= K, (K - k_start) // Q + 1, 0)
    b = (u + k_start) / Q
    right = np.where(count > 0, polygamma(1, b) - polygamma(1, b + count), 0.0)
    # left side: k = k_end - Q m for k < c_lo, k >= -K
    last = min(c_lo - 1, K)
    k_end = last - (last - r) % Q
    count = np.where(k_end >= -K, (k_end + K) // Q + 1, 0)
    b = (-u - k_end) / Q
    left = np.where(count > 0, polygamma(1, b) - polygamma(1, b + count), 0.0)

    total += complex(np.sum(numer * (right + left)) / Q ** 2)
    return total


def lattice_energy(f: StepFunction, u: float, K: int, method: str = "auto") -> float:
    """``sum_{|k| <= K} |f^(u + k)|^2``."""
    return cross_energy(f, f, u, K, method).real


def plancherel_sum(
    s: IntervalSet,
    spectrum_offsets: Sequence[RationalLike],
    t: float,
    tol: float,
    method: str = "auto",
    k_max: int = K_MAX,
) -> LatticeSumResult:
    """Truncated ``sum over offsets o and integers k of |chi_s^(t + o + k)|^2``.

    With ``m`` intervals in ``s``, ``|chi_s^(t)| <= m / (pi |t|)``; K is the
    smallest value (up to a 10% step) for which the summed tail of that
    majorant is at most ``tol``. Each offset's sum is centred on the
    integer nearest ``t + o``; over all of Z this is the same series.
    """
    offsets = [as_rational(o) for o in spectrum_offsets]
    f = StepFunction.indicator(s)
    m = len(s)
    C = m * m / math.pi ** 2
    us = [_center(t + float(o)) for o in offsets]
    K = _choose_K([C] * len(us), us, tol, k_max)
    value = sum(lattice_energy(f, u, K, method) for u in us)
    tail = sum(_trigamma_tail(C, u, K) for u in us)
    return LatticeSumResult(float(value), K, tail)


def achievable_tolerance(s: IntervalSet, n_offsets: int, k_max: int = K_MAX) -> float:
    """Smallest tail tolerance ``plancherel_sum`` can certify for ``s`` within ``k_max`` terms."""
    C = n_offsets * len(s) ** 2 / math.pi ** 2
    # tail <= C * (psi1(K+1+u) + psi1(K+1-u)) <= 2C / (K + 1/2 - |u|)
    return 2.0 * C / (k_max - 1.0) * 1.01


def achievable_step_tolerance(f: StepFunction, g: Optional[StepFunction] = None, n_offsets: int = 1, k_max: int = K_MAX) -> float:
    g = f if g is None else g
    C = n_offsets * f.variation() * g.variation() / (4.0 * math.pi ** 2)
    return 2.0 * C / (k_max - 1.0) * 1.01


def step_plancherel_sum(
    f: StepFunction,
    g: Optional[StepFunction],
    t: float,
    tol: float,
    offsets: Sequence[RationalLike] = (0,),
    k_max: int = K_MAX,
) -> LatticeSumResult:
    """Truncated ``sum_o Per(f^ conj(g^))(t + o)`` with a certified tail.

    ``g=None`` means ``g = f``; the result is then real.
    """
    same = g is None
    g = f if same else g
    C = f.variation() * g.variation() / (4.0 * math.pi ** 2)
    us = [_center(t + float(as_rational(o))) for o in offsets]
    K = _choose_K([C] * len(us), us, tol, k_max)
    value = sum(cross_energy(f, g, u, K) for u in us)
    tail = sum(_trigamma_tail(C, u, K) for u in us)
    if same:
        value = float(value.real)
    return LatticeSumResult(value, K, tail)


def periodization(
    f: Callable,
    t: float,
    tol: float,
    decay: Optional[float] = None,
) -> LatticeSumResult:
    """``Per(f)(t) = sum_k f(t + k)`` for a vectorized ``f`` with ``|f(x)| <= decay / (1 + x^2)``.

    The summation window is centred on the integer nearest ``t``; the
    discarded tail is at most ``2 decay arctan(1 / (K - 1/2))``.
    """
    if decay is None:
        raise ValueError("a decay constant C with |f(x)| <= C/(1+x^2) is required")
    if not isinstance(decay, Real) or not math.isfinite(decay) or decay < 0:
        raise ValueError(f"invalid decay constant {decay!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if decay == 0:
        return LatticeSumResult(0.0, 0, 0.0)
    K = max(1, math.ceil(2.0 * decay / tol + 0.5))
    if K > K_MAX:
        raise TruncationError(f"tail tolerance {tol:g} needs K > {K_MAX} (decay constant {decay:g})")
    tail = 2.0 * decay * math.atan(1.0 / (K - 0.5))
    kc = -round(t)
    total = 0j
    for start in range(kc - K, kc + K + 1, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, kc + K + 1), dtype=float)
        total += complex(np.sum(np.asarray(f(t + k), dtype=complex)))
    value = total.real if total.imag == 0 else total
    return LatticeSumResult(value, K, tail)


def energy_decay_constant(f: StepFunction, g: Optional[StepFunction] = None) -> float:
    """A constant ``C`` with ``|f^(x) conj(g^(x))| <= C / (1 + x^2)`` for all x."""
    g = f if g is None else g
    Mf = sum(abs(c) * float(iv.length) for iv, c in f.pieces)
    Mg = sum(abs(c) * float(iv.length) for iv, c in g.pieces)
    return Mf * Mg + f.variation() * g.variation() / (4.0 * math.pi ** 2)


def sweep_plancherel(s: IntervalSet, offsets: Sequence[RationalLike], grid: Sequence[Fraction], tol: float) -> SampledFunction:
    results = [plancherel_sum(s, offsets, float(t), tol) for t in grid]
    return SampledFunction(
        tuple(grid),
        tuple(complex(r.value) for r in results),
        tuple(r.tail_bound for r in results),
    )


def sweep_comb(p: int, n: int, grid: Sequence[Fraction]) -> SampledFunction:
    return SampledFunction(
        tuple(grid),
        tuple(complex(comb_plancherel_check(p, n, float(t))) for t in grid),
        tuple(0.0 for _ in grid),
    )
