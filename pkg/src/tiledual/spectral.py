"""Spectral side: the band measure ``p Leb`` on ``[-1/2p, 1/2p] + Z``.

The exact tiling test is ground truth. The checks here are numerical
corroboration: Plancherel sums for the finite spectra of the blocks ``base + p{-n..n}``,
Riemann-sum and quadrature forms of the isometry onto the band
measure, surjectivity witnesses built from compactly supported bumps,
and the ``1/p`` periodicity of periodized cross-spectra.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from scipy import integrate
from scipy.special import polygamma, roots_legendre

from . import fourier
from .fourier import StepFunction, ft_indicator
from .intervals import EMPTY, Interval, IntervalSet, RationalLike, as_rational, intersect, measure
from .tiling import (
    PeriodicSet,
    PreconditionError,
    TilingReport,
    build_omega_n,
    congruence_mod_one,
    tiles_by_residues,
    translate_disjointness,
)

# atoms of the periodic indicator checked by the integer-frequency gate
GATE_RANGE = 8


class GateError(PreconditionError):
    """The base has nonzero transform at some nonzero integer (or mass != 1)."""


@dataclass(frozen=True)
class BumpFunction:
    """``amplitude * exp(-1 / (1 - s^2))`` with ``s = (t - center) / halfwidth``, zero for ``|s| >= 1``.

    The default amplitude ``e`` makes the peak value 1.
    """

    center: Fraction
    halfwidth: Fraction
    amplitude: float = math.e

    def __post_init__(self):
        object.__setattr__(self, "center", as_rational(self.center))
        object.__setattr__(self, "halfwidth", as_rational(self.halfwidth))
        if self.halfwidth <= 0:
            raise ValueError(f"halfwidth must be positive, got {self.halfwidth}")

    @property
    def support(self) -> Interval:
        return Interval(self.center - self.halfwidth, self.center + self.halfwidth)

    def __call__(self, t):
        s = (np.asarray(t, dtype=float) - float(self.center)) / float(self.halfwidth)
        inside = np.abs(s) < 1.0
        q = np.where(inside, 1.0 - s * s, 1.0)
        out = np.where(inside, self.amplitude * np.exp(-1.0 / q), 0.0)
        return out if out.ndim else float(out)

    def _profile(self, y):
        # centred copy, y = t - center
        s = np.asarray(y, dtype=float) / float(self.halfwidth)
        inside = np.abs(s) < 1.0
        q = np.where(inside, 1.0 - s * s, 1.0)
        return np.where(inside, self.amplitude * np.exp(-1.0 / q), 0.0)

    def second_derivative_l1(self) -> float:
        """``int |b''|``; bounds the transform by ``value / (4 pi^2 t^2)``."""
        h = float(self.halfwidth)

        def d2(y):
            s = y / h
            q = 1.0 - s * s
            if q <= 0:
                return 0.0
            e = self.amplitude * math.exp(-1.0 / q)
            # d/ds of exp(-1/(1-s^2)) = -2s/q^2 * e
            g1 = -2.0 * s / q ** 2
            g1p = -2.0 / q ** 2 - 8.0 * s * s / q ** 3
            return e * (g1 * g1 + g1p) / h ** 2

        val, _ = integrate.quad(lambda y: abs(d2(y)), -h, h, limit=200, epsabs=1e-13)
        return val

    def centred_transform(self, t) -> np.ndarray:
        """``int b(c + y) cos(2 pi y t) dy``: the transform without its ``exp(-2 pi i c t)`` phase.

        Gauss-Legendre on the support. The bump is flat to all orders at
        its ends, so the rule converges fast once the node count resolves
        the oscillation; it is sized from the largest ``|t|`` requested.
        """
        h = float(self.halfwidth)
        ts = np.asarray(t, dtype=float)
        flat = np.abs(ts.ravel())
        tmax = float(flat.max()) if flat.size else 0.0
        y, w = _gauss_nodes(_node_count(h, tmax))
        y = h * y
        wb = h * w * self._profile(y)
        out = np.empty(flat.shape)
        for start in range(0, flat.size, 256):
            block = flat[start:start + 256]
            out[start:start + 256] = np.cos(2.0 * math.pi * np.multiply.outer(block, y)) @ wb
        return out.reshape(ts.shape) if ts.ndim else out.reshape(())

    def quad_transform(self, t: float) -> float:
        """Adaptive-quadrature reference for ``centred_transform``."""
        h = float(self.halfwidth)
        w = 2.0 * math.pi * abs(t)
        if w == 0.0:
            val, _ = integrate.quad(self._profile, -h, h, epsabs=1e-15, epsrel=1e-13, limit=200)
        else:
            val, _ = integrate.quad(self._profile, -h, h, weight="cos", wvar=w, epsabs=1e-15, epsrel=1e-12, limit=400)
        return val

    def to_json(self) -> dict:
        return {
            "kind": "bump",
            "center": str(self.center),
            "halfwidth": str(self.halfwidth),
            "amplitude": self.amplitude,
        }


@lru_cache(maxsize=32)
def _gauss_nodes(n: int):
    return roots_legendre(n)


def _node_count(h: float, tmax: float) -> int:
    # about 12 nodes per oscillation over the support, rounded up to a multiple of 64
    n = 128 + 24 * math.ceil(2.0 * h * tmax)
    return 64 * math.ceil(n / 64)


TestFunction = Union[StepFunction, BumpFunction]


def test_function_from_json(data) -> TestFunction:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("test function must be an object with a 'kind' field")
    kind = data["kind"]
    if kind == "indicator":
        return StepFunction.indicator(IntervalSet.from_json(data.get("set", [])), _coef(data.get("coefficient", 1.0)))
    if kind == "step":
        pieces = []
        for idx, item in enumerate(data.get("pieces", [])):
            if not isinstance(item, list) or len(item) != 2:
                raise ValueError(f"step piece #{idx}: expected [[lo, hi], coefficient]")
            pieces.append((IntervalSet.from_json([item[0]]), _coef(item[1])))
        return StepFunction(pieces)
    if kind == "bump":
        return BumpFunction(
            as_rational(data["center"]),
            as_rational(data["halfwidth"]),
            float(data.get("amplitude", math.e)),
        )
    raise ValueError(f"unknown test function kind {kind!r}")


def _coef(value) -> complex:
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise ValueError(f"bad coefficient {value!r}")


@dataclass(frozen=True)
class SpectrumLattice:
    """The spectrum ``offsets + Z``."""

    p: int
    n: int
    offsets: tuple[Fraction, ...]

    def __post_init__(self):
        offs = tuple(as_rational(o) for o in self.offsets)
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError("offsets must be strictly increasing")
        object.__setattr__(self, "offsets", offs)

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "offsets": [str(o) for o in self.offsets]}


def spectrum_lambda_n(p: int, n: int) -> SpectrumLattice:
    """Offsets ``j / (p(2n+1))``, ``|j| <= n``, of the finite spectrum (plus Z); ``p = 1`` gives plain Z."""
    if p < 1 or n < 0:
        raise ValueError(f"need p >= 1 and n >= 0, got p={p}, n={n}")
    d = p * (2 * n + 1)
    return SpectrumLattice(p, n, tuple(Fraction(j, d) for j in range(-n, n + 1)))


@dataclass
class CheckReport:
    name: str
    passed: bool
    worst_deviation: float
    margin: float
    parameters: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return _jsonable(asdict(self))


@dataclass
class IsometryReport:
    lhs: float
    riemann_values: list[tuple[int, float]]
    band_integral: float
    residual: float
    n0: int = 0
    truncation_K: int = 0
    tail_bound: float = 0.0
    quadrature_error: float = 0.0
    parameters: dict = field(default_factory=dict)

    @property
    def riemann_errors(self) -> list[tuple[int, float]]:
        return [(n, abs(v - self.lhs)) for n, v in self.riemann_values]

    def to_json(self) -> dict:
        out = _jsonable(asdict(self))
        out["riemann_errors"] = [[n, e] for n, e in self.riemann_errors]
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


# ---------------------------------------------------------------------------
# finite spectra


def verify_finite_spectrum(
    s: IntervalSet,
    spec: SpectrumLattice,
    t_samples: int,
    tol: float,
    seed: int = 0,
    k_max: int = fourier.K_MAX,
) -> CheckReport:
    """Sample the Plancherel criterion ``sum_{lambda} |chi_s^(t + lambda)|^2 = |s|^2``.

    ``t`` is drawn uniformly from ``[0, 1)`` with a seeded generator. A
    sample passes when the truncated sum is within ``tol + tail_bound``
    of ``|s|^2``, which is ``(2n+1)^2`` for the block ``base + p{-n..n}`` of a tiling set.
    """
    rng = np.random.default_rng(seed)
    ts = rng.random(t_samples)
    target = float(measure(s)) ** 2
    worst = 0.0
    worst_t = None
    passed = True
    max_K = 0
    max_tail = 0.0
    for t in ts:
        res = fourier.plancherel_sum(s, spec.offsets, float(t), tol, k_max=k_max)
        dev = abs(res.value - target)
        if dev > tol + res.tail_bound:
            passed = False
        if dev >= worst:
            worst, worst_t = dev, float(t)
        max_K = max(max_K, res.truncation_K)
        max_tail = max(max_tail, res.tail_bound)
    return CheckReport(
        name="finite_spectrum",
        passed=passed,
        worst_deviation=worst,
        margin=tol + max_tail,
        parameters={
            "n": spec.n,
            "p": spec.p,
            "offsets": [str(o) for o in spec.offsets],
            "t_samples": t_samples,
            "tol": tol,
            "seed": seed,
            "k_max": k_max,
        },
        details={"target": target, "worst_t": worst_t, "K": max_K, "tail_bound": max_tail},
    )


# ---------------------------------------------------------------------------
# isometry


def _periods_touched(support: IntervalSet, p: int) -> int:
    """Smallest n with ``support`` inside the periods ``-n .. n``."""
    if not support:
        return 0
    k_lo = math.floor(support.lo / p)
    k_hi = math.ceil(support.hi / p) - 1
    return max(abs(k_lo), abs(k_hi))


def _require_inside(omega: PeriodicSet, support: IntervalSet):
    if not support:
        return
    outside = support - omega.window(support.lo, support.hi)
    if outside:
        raise PreconditionError(
            f"test function has mass outside omega on {outside!r} (measure {measure(outside)})"
        )


def isometry_check(
    omega: PeriodicSet,
    f_spec: TestFunction,
    n_max: int,
    tol: float,
) -> IsometryReport:
    """Compare ``int_omega |f|^2`` with ``p int_band |f^|^2``.

    Two routes to the right side are reported: Riemann sums over the
    finite spectra for ``n = n0 .. n_max`` (``n0`` the first n with
    ``supp f`` inside ``base + p{-n..n}``), and adaptive quadrature of the
    periodized ``|f^|^2`` over ``[-1/2p, 1/2p]``. ``residual`` is
    ``|lhs - band_integral|``.
    """
    if isinstance(f_spec, BumpFunction):
        return _isometry_bump(omega, f_spec, n_max, tol)
    f = f_spec
    p = omega.p
    support = f.support
    _require_inside(omega, support)
    n0 = _periods_touched(support, p)
    if n0 > n_max:
        raise PreconditionError(f"f needs n >= {n0} periods but n_max = {n_max}")
    lhs = f.norm_sq()
    params = {"p": p, "n_max": n_max, "tol": tol, "f": f.to_json()}
    if f.is_zero():
        return IsometryReport(0.0, [(n, 0.0) for n in range(n0, n_max + 1)], 0.0, 0.0, n0, parameters=params)

    riemann = []
    for n in range(n0, n_max + 1):
        d = p * (2 * n + 1)
        vals = [fourier.step_plancherel_sum(f, None, j / d, tol) for j in range(-n, n + 1)]
        riemann.append((n, sum(v.value for v in vals) / (2 * n + 1)))

    C = f.variation() ** 2 / (4.0 * math.pi ** 2)
    K = fourier._choose_K([C], [0.5], tol)
    # the majorant's tail is largest at |u| = 1/2, so this bounds every band point
    tail = fourier._trigamma_tail(C, 0.5, K)
    half = 1.0 / (2 * p)
    integral, qerr = integrate.quad(
        lambda t: fourier.lattice_energy(f, t, K), -half, half, epsabs=1e-12, epsrel=1e-12, limit=200
    )
    band = p * integral
    return IsometryReport(
        lhs=lhs,
        riemann_values=riemann,
        band_integral=band,
        residual=abs(lhs - band),
        n0=n0,
        truncation_K=K,
        tail_bound=tail,
        quadrature_error=p * qerr,
        parameters=params,
    )


def _isometry_bump(omega: PeriodicSet, b: BumpFunction, n_max: int, tol: float) -> IsometryReport:
    p = omega.p
    support = IntervalSet([b.support])
    _require_inside(omega, support)
    n0 = _periods_touched(support, p)
    if n0 > n_max:
        raise PreconditionError(f"f needs n >= {n0} periods but n_max = {n_max}")
    h = float(b.halfwidth)
    lhs, _ = integrate.quad(lambda y: b._profile(y) ** 2, -h, h, epsabs=1e-15, epsrel=1e-13, limit=200)

    # |f^(t)| <= min(||b||_1, ||b''||_1 / (4 pi^2 t^2))
    A = b.second_derivative_l1() / (4.0 * math.pi ** 2)
    K = 1
    while A * A * float(polygamma(3, K + 0.5) + polygamma(3, K + 1.5)) / 6.0 > tol:
        K += 1
    tail = A * A * float(polygamma(3, K + 0.5) + polygamma(3, K + 1.5)) / 6.0

    ks = np.arange(-K, K + 1)

    def per(t):
        return float(np.sum(b.centred_transform(t + ks) ** 2))

    riemann = []
    for n in range(n0, n_max + 1):
        d = p * (2 * n + 1)
        riemann.append((n, sum(per(j / d) for j in range(-n, n + 1)) / (2 * n + 1)))

    half = 1.0 / (2 * p)
    nodes, weights = np.polynomial.legendre.leggauss(48)
    ts = half * nodes
    band = p * half * float(np.sum(weights * np.array([per(t) for t in ts])))
    return IsometryReport(
        lhs=lhs,
        riemann_values=riemann,
        band_integral=band,
        residual=abs(lhs - band),
        n0=n0,
        truncation_K=K,
        tail_bound=tail,
        parameters={"p": p, "n_max": n_max, "tol": tol, "f": b.to_json()},
    )


def find_isometry_defect(
    omega: PeriodicSet,
    threshold: float,
    tol: float = 1e-6,
    tries: int = 64,
    seed: int = 0,
) -> Optional[tuple[StepFunction, IsometryReport]]:
    """Search indicators ``chi_E``, ``E`` inside omega, for an isometry defect above ``threshold``.

    Candidates in order: the base, each of its intervals, then random
    rational subsets of the base and of its first translate.
    """
    for f in _candidate_family(omega, tries, seed):
        report = isometry_check(omega, f, _periods_touched(f.support, omega.p), tol)
        if report.residual > threshold:
            return f, report
    return None


def _candidate_family(omega: PeriodicSet, tries: int, seed: int):
    base = omega.base
    if not base:
        return
    yield StepFunction.indicator(base)
    for iv in base:
        yield StepFunction.indicator(IntervalSet([iv]))
    rng = np.random.default_rng(seed)
    den = 4 * base.common_denominator()
    region = omega.window(0, 2 * omega.p)
    for _ in range(tries):
        cells = []
        for iv in region:
            a, b = int(iv.lo * den), int(iv.hi * den)
            for c in range(a, b):
                if rng.random() < 0.5:
                    cells.append(Interval(Fraction(c, den), Fraction(c + 1, den)))
        if cells:
            yield StepFunction.indicator(IntervalSet(cells))


# ---------------------------------------------------------------------------
# surjectivity


def integer_atoms(base: IntervalSet, k_range: int = GATE_RANGE) -> tuple[float, float]:
    """``(|chi^(0) - 1|, max_{1<=|k|<=k_range} |chi^(k)|)`` for the base."""
    k = np.arange(1, k_range + 1)
    vals = np.abs(np.concatenate([np.atleast_1d(ft_indicator(base, k)), np.atleast_1d(ft_indicator(base, -k))]))
    return abs(complex(ft_indicator(base, 0.0)) - 1.0), float(vals.max()) if vals.size else 0.0


def witness_residual(omega: PeriodicSet, g: BumpFunction, k0: int, grid_points: int, window: int = GATE_RANGE) -> tuple[float, dict]:
    """``max |f^ - g|`` on the band set for the witness whose transform is ``sum_k chi^(k/p) g(t - k/p)``.

    Samples ``grid_points`` points on each band interval around
    ``k0 + m`` for ``|m| <= window``. Since ``g`` sits inside one band
    interval of width ``1/p``, at most one shift ``k/p`` lands on a given
    ``t`` and the series is a single term.
    """
    p = omega.p
    half = 1.0 / (2 * p)
    c, h = float(g.center), float(g.halfwidth)
    worst = 0.0
    worst_t = None
    per_band = {}
    for m in range(k0 - window, k0 + window + 1):
        t = np.linspace(m - half, m + half, grid_points)
        k = np.round(p * (t - c))
        shifted = t - k / p
        coeff = np.where(np.abs(shifted - c) < h, ft_indicator(omega.base, k / p), 0.0)
        fhat = coeff * g(shifted)
        err = np.abs(fhat - g(t))
        i = int(np.argmax(err))
        per_band[str(m)] = float(err[i])
        if err[i] >= worst:
            worst, worst_t = float(err[i]), float(t[i])
    return worst, {"worst_t": worst_t, "per_band": per_band, "window": window}


def surjectivity_witness(
    omega: PeriodicSet,
    g: BumpFunction,
    k0: int,
    grid_points: int,
    tol: float = 1e-6,
) -> CheckReport:
    """Check that the band restriction of the witness transform is ``g``.

    The witness is ``p chi_omega phi`` with ``phi`` the inverse transform
    of ``g``; its transform is ``sum_k chi_base^(k/p) g(t - k/p)``. Only
    the terms with ``k`` a multiple of ``p`` survive on the band, and those
    vanish except ``k = 0`` when the base has integer transforms ``delta_0``,
    which is checked first.

    Passing for a finite set of bumps shows those bumps are in the range;
    it does not by itself certify that the range is dense.
    """
    if not tiles_by_residues(omega).verdict:
        raise PreconditionError("surjectivity witness needs a set that tiles by {0..p-1}")
    p = omega.p
    half = Fraction(1, 2 * p)
    sup = g.support
    if not (sup.lo > k0 - half and sup.hi < k0 + half):
        raise PreconditionError(
            f"bump support ({sup.lo}, {sup.hi}) is not strictly inside [{k0 - half}, {k0 + half}]"
        )
    mass_err, atom = integer_atoms(omega.base)
    if mass_err >= 1e-10 or atom >= 1e-10:
        raise GateError(
            f"base transform at integers is not delta_0 (|chi^(0)-1| = {mass_err:.3g}, max |chi^(k)| = {atom:.3g})"
        )
    worst, details = witness_residual(omega, g, k0, grid_points)
    details.update({"mass_error": mass_err, "max_integer_atom": atom})
    return CheckReport(
        name="surjectivity",
        passed=worst < tol,
        worst_deviation=worst,
        margin=tol,
        parameters={"p": p, "k0": k0, "grid_points": grid_points, "g": g.to_json(), "tol": tol},
        details=details,
    )


# ---------------------------------------------------------------------------
# periodicity and orthogonality


def periodization_period_check(
    omega: PeriodicSet,
    f_spec: StepFunction,
    g_spec: Optional[StepFunction],
    t_samples: int,
    tol: float = 1e-6,
    seed: int = 0,
) -> CheckReport:
    """Sample ``|Per(f^ conj g^)(t + 1/p) - Per(f^ conj g^)(t)|``.

    For a set that tiles by ``{0..p-1}`` this vanishes for every ``f, g``
    supported in omega. ``g_spec=None`` means ``g = f``.
    """
    _require_inside(omega, f_spec.support)
    if g_spec is not None:
        _require_inside(omega, g_spec.support)
    p = omega.p
    rng = np.random.default_rng(seed)
    ts = rng.random(t_samples)
    worst, worst_t, passed, max_tail = 0.0, None, True, 0.0
    for t in ts:
        a = fourier.step_plancherel_sum(f_spec, g_spec, float(t), tol)
        b = fourier.step_plancherel_sum(f_spec, g_spec, float(t) + 1.0 / p, tol)
        dev = abs(a.value - b.value)
        bound = tol + a.tail_bound + b.tail_bound
        max_tail = max(max_tail, a.tail_bound, b.tail_bound)
        if dev >= bound:
            passed = False
        if dev >= worst:
            worst, worst_t = dev, float(t)
    return CheckReport(
        name="periodization_period",
        passed=passed,
        worst_deviation=worst,
        margin=tol + 2 * max_tail,
        parameters={
            "p": p,
            "t_samples": t_samples,
            "tol": tol,
            "seed": seed,
            "f": f_spec.to_json(),
            "g": None if g_spec is None else g_spec.to_json(),
        },
        details={"worst_t": worst_t},
    )


def orthogonality_check(omega: PeriodicSet, j: int) -> Fraction:
    """``<chi_E, T_j chi_(E-j)>`` for ``E = omega & (omega + j)``, i.e. ``|omega & (omega + j)|`` per period."""
    return translate_disjointness(omega, j)


# ---------------------------------------------------------------------------
# verdict


@dataclass(frozen=True)
class Thresholds:
    """Pass thresholds of the diagnostic battery and the parameters it runs with.

    Thresholds for numeric residuals sit two orders of magnitude above
    what tiling sets produce and well below the smallest defect seen on
    the bundled non-tiling corpus.
    """

    spectrum: float = 1e-3
    isometry: float = 1e-3
    periodicity: float = 1e-3
    integer_atoms: float = 1e-8
    surjectivity: float = 1e-5
    orthogonality: Fraction = Fraction(0)
    spectrum_tol: float = 1e-4
    numeric_tol: float = 1e-6
    n_max: int = 2
    t_samples: int = 16
    grid_points: int = 65
    seed: int = 0
    k_max: int = fourier.K_MAX

    def to_json(self) -> dict:
        return _jsonable(asdict(self))


@dataclass
class Diagnostic:
    name: str
    residual: float
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass
class Verdict:
    tiling_verdict: bool
    spectral_diagnostics: list[Diagnostic]
    consistent: bool
    tiling_report: Optional[TilingReport] = None
    parameters: dict = field(default_factory=dict)

    @property
    def spectral_verdict(self) -> bool:
        return all(d.passed for d in self.spectral_diagnostics)

    def to_json(self) -> dict:
        return {
            "tiling_verdict": self.tiling_verdict,
            "tiling_report": None if self.tiling_report is None else self.tiling_report.to_json(),
            "spectral_verdict": self.spectral_verdict,
            "consistent": self.consistent,
            "spectral_diagnostics": [_jsonable(asdict(d)) for d in self.spectral_diagnostics],
            "parameters": _jsonable(self.parameters),
        }


def canonical_family(omega: PeriodicSet) -> list[StepFunction]:
    """Indicators used by the battery: the base, its intervals, its unit-interval pieces."""
    base = omega.base
    if not base:
        return []
    family = [StepFunction.indicator(base)]
    family += [StepFunction.indicator(IntervalSet([iv])) for iv in base]
    decomposition, _ = congruence_mod_one(base)
    for k, piece in decomposition.pieces.items():
        f = StepFunction.indicator(IntervalSet([(iv.lo + k, iv.hi + k) for iv in piece]))
        if f not in family:
            family.append(f)
    return family


def _diag(name, residual, threshold, **details) -> Diagnostic:
    return Diagnostic(name, float(residual), float(threshold), bool(residual <= threshold), details)


def duality_verdict(omega: PeriodicSet, config: Thresholds = Thresholds()) -> Verdict:
    """Run the exact tiling test and the spectral battery; report whether they agree.

    ``consistent`` is ``tiling_verdict == (every diagnostic passed)``.
    """
    tiling = tiles_by_residues(omega)
    p = omega.p
    diags: list[Diagnostic] = []

    overlaps = {j: orthogonality_check(omega, j) for j in range(1, p)}
    worst_j = max(overlaps, key=lambda j: overlaps[j])
    diags.append(_diag(
        "orthogonality",
        overlaps[worst_j],
        config.orthogonality,
        per_shift={str(j): str(m) for j, m in overlaps.items()},
    ))

    base = omega.base
    worst, worst_n = 0.0, 0
    runs = {}
    for n in range(config.n_max + 1):
        s = build_omega_n(base, p, n)
        spec = spectrum_lambda_n(p, n)
        # sets with many intervals cannot reach the configured tail within K_MAX terms
        tol = max(config.spectrum_tol, fourier.achievable_tolerance(s, len(spec.offsets), config.k_max))
        rep = verify_finite_spectrum(s, spec, config.t_samples, tol, config.seed, config.k_max)
        runs[str(n)] = {"worst_deviation": rep.worst_deviation, "K": rep.details["K"], "tol": tol}
        if rep.worst_deviation >= worst:
            worst, worst_n = rep.worst_deviation, n
    diags.append(_diag("finite_spectrum", worst, config.spectrum, worst_n=worst_n, per_n=runs))

    family = canonical_family(omega)
    # functions with large jumps cannot reach numeric_tol within k_max terms
    tols = [max(config.numeric_tol, fourier.achievable_step_tolerance(f, k_max=config.k_max)) for f in family]

    iso_worst, per = 0.0, []
    for f, tol in zip(family, tols):
        rep = isometry_check(omega, f, _periods_touched(f.support, p), tol)
        per.append(rep.residual)
        iso_worst = max(iso_worst, rep.residual)
    diags.append(_diag("isometry", iso_worst, config.isometry, per_function=per, tol=tols))

    per_worst, per = 0.0, []
    for f, tol in zip(family, tols):
        rep = periodization_period_check(omega, f, None, config.t_samples, tol, config.seed)
        per.append(rep.worst_deviation)
        per_worst = max(per_worst, rep.worst_deviation)
    diags.append(_diag("periodization_period", per_worst, config.periodicity, per_function=per, tol=tols))

    mass_err, atom = integer_atoms(base)
    diags.append(_diag("integer_atoms", max(mass_err, atom), config.integer_atoms, mass_error=mass_err, max_atom=atom))

    g = BumpFunction(0, Fraction(1, 4 * p))
    surj, details = witness_residual(omega, g, 0, config.grid_points)
    diags.append(_diag("surjectivity", surj, config.surjectivity, worst_t=details["worst_t"]))

    consistent = tiling.verdict == all(d.passed for d in diags)
    return Verdict(
        tiling_verdict=tiling.verdict,
        spectral_diagnostics=diags,
        consistent=consistent,
        tiling_report=tiling,
        parameters={"omega": omega.to_json(), "thresholds": config.to_json()},
    )
