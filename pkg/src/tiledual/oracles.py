"""Brute-force reference computations.

These deliberately avoid the exact interval algebra and the closed-form
transforms so that they can be used to cross-check them: sets become
bitmaps on the grid ``(1/N)Z`` and Fourier transforms become adaptive
quadrature.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy import integrate

from .intervals import IntervalSet


def raster(s: IntervalSet, lo: Fraction, hi: Fraction, N: int) -> np.ndarray:
    """Bitmap of ``s`` on the cells ``[i/N, (i+1)/N)`` covering ``[lo, hi)``.

    All endpoints of ``s`` and of the window must lie on ``(1/N)Z``.
    """
    start, stop = _cell(lo, N), _cell(hi, N)
    bits = np.zeros(stop - start, dtype=bool)
    for iv in s:
        a = max(_cell(iv.lo, N), start)
        b = min(_cell(iv.hi, N), stop)
        if a < b:
            bits[a - start:b - start] = True
    return bits


def _cell(x: Fraction, N: int) -> int:
    scaled = Fraction(x) * N
    if scaled.denominator != 1:
        raise ValueError(f"{x} is not on the grid (1/{N})Z")
    return scaled.numerator


def grid_resolution(*sets: IntervalSet, extra: Iterable[Fraction] = ()) -> int:
    dens = [q.denominator for s in sets for q in s.endpoints()]
    dens += [Fraction(q).denominator for q in extra]
    return math.lcm(1, *dens)


def raster_coverage(tile: IntervalSet, shifts: Iterable[Fraction], lo: Fraction, hi: Fraction, N: int) -> np.ndarray:
    """Number of translates ``tile + s`` covering each grid cell of ``[lo, hi)``."""
    count = np.zeros(_cell(hi, N) - _cell(lo, N), dtype=np.int64)
    for s in shifts:
        count += raster(_shift(tile, s), lo, hi, N)
    return count


def _shift(s: IntervalSet, t: Fraction) -> IntervalSet:
    return IntervalSet([(iv.lo + t, iv.hi + t) for iv in s])


def raster_tiles_by_residues(p: int, base: IntervalSet) -> bool:
    """Bitset version of the residue tiling test on one period window."""
    N = grid_resolution(base)
    shifts = [Fraction(j + p * k) for j in range(p) for k in (-1, 0)]
    cover = raster_coverage(base, shifts, Fraction(0), Fraction(p), N)
    return bool(np.all(cover == 1))


def quad_ft_indicator(s: IntervalSet, t: float) -> complex:
    """Adaptive quadrature of ``int_s exp(-2 pi i x t) dx``."""
    re = im = 0.0
    w = 2.0 * math.pi * t
    for iv in s:
        a, b = float(iv.lo), float(iv.hi)
        if w == 0.0:
            re += b - a
            continue
        # QAWO handles the oscillatory weight directly
        c, _ = integrate.quad(lambda x: 1.0, a, b, weight="cos", wvar=w, epsabs=1e-14, epsrel=1e-13, limit=200)
        sn, _ = integrate.quad(lambda x: 1.0, a, b, weight="sin", wvar=w, epsabs=1e-14, epsrel=1e-13, limit=200)
        re += c
        im -= sn
    return complex(re, im)


def direct_lattice_energy(fhat, u: float, K: int) -> float:
    """``sum_{|k| <= K} |fhat(u + k)|**2`` by plain vectorized summation."""
    k = np.arange(-K, K + 1, dtype=float)
    vals = fhat(u + k)
    return float(np.sum(np.abs(vals) ** 2))


def autocorrelation_band_integral(s: IntervalSet, p: int) -> float:
    """``p * int_{[-1/2p, 1/2p] + Z} |chi_s^(t)|^2 dt`` via Poisson summation.

    ``Per(|chi_s^|^2)`` is the trigonometric polynomial with coefficients
    ``|s & (s + m)|``, so the band integral is a finite exact sum.
    """
    if not s:
        return 0.0
    span = s.hi - s.lo
    total = 0.0
    for m in range(-math.ceil(span), math.ceil(span) + 1):
        ac = _overlap(s, m)
        if ac == 0:
            continue
        if m == 0:
            total += float(ac)
        else:
            total += p * float(ac) * math.sin(math.pi * m / p) / (math.pi * m)
    return total


def _overlap(s: IntervalSet, m: int) -> Fraction:
    total = Fraction(0)
    for a in s:
        for b in s:
            lo = max(a.lo, b.lo + m)
            hi = min(a.hi, b.hi + m)
            if lo < hi:
                total += hi - lo
    return total
