import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiledual import fourier, oracles
from tiledual.fourier import (
    StepFunction,
    TruncationError,
    comb_plancherel_check,
    cross_energy,
    dirac_comb_ft,
    ft_indicator,
    lattice_energy,
    periodic_ft_coefficients,
    periodization,
    plancherel_sum,
    step_plancherel_sum,
)
from tiledual.intervals import interval_set, measure
from tiledual.tiling import PeriodicSet

from strategies import interval_sets

F = Fraction
UNIT = interval_set((0, 1))
SPLIT = interval_set((0, "1/2"), ("3/2", 2))


class TestFtIndicator:
    def test_value_at_zero(self):
        assert ft_indicator(UNIT, 0.0) == 1 + 0j

    @pytest.mark.parametrize("k", [-3, -1, 1, 2, 7])
    def test_integer_zeros(self, k):
        assert abs(ft_indicator(UNIT, float(k))) < 1e-15

    def test_half(self):
        got = ft_indicator(UNIT, 0.5)
        assert got == pytest.approx(-2j / math.pi, abs=1e-15)
        assert got == pytest.approx(oracles.quad_ft_indicator(UNIT, 0.5), abs=1e-12)

    def test_matches_jump_formula(self):
        s = interval_set(("-1/3", "1/2"), (2, "9/4"))
        t = np.linspace(0.1, 7.3, 50)
        jumps = sum(np.exp(-2j * np.pi * float(iv.lo) * t) - np.exp(-2j * np.pi * float(iv.hi) * t) for iv in s)
        assert np.allclose(ft_indicator(s, t), jumps / (2j * np.pi * t), atol=1e-13)

    @settings(max_examples=100, deadline=None)
    @given(interval_sets(), st.floats(-20, 20))
    def test_conjugate_symmetry_and_bound(self, s, t):
        a, b = ft_indicator(s, t), ft_indicator(s, -t)
        assert abs(a - b.conjugate()) < 1e-12
        assert abs(a) <= float(measure(s)) + 1e-12


class TestDiracComb:
    def test_examples(self):
        assert dirac_comb_ft(2, 1, 0.0) == pytest.approx(3)
        assert dirac_comb_ft(2, 1, 0.5) == pytest.approx(3)
        assert abs(dirac_comb_ft(2, 1, F(1, 6))) < 1e-14
        # 1 + 2 cos(2 pi / 3) term by term
        assert abs(1 + 2 * math.cos(2 * math.pi * 2 * (1 / 6))) < 1e-14

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from([1, 2, 3, 5]), st.integers(0, 10), st.floats(-50, 50))
    def test_period_and_direct_sum(self, p, n, t):
        direct = sum(np.exp(-2j * np.pi * p * l * t) for l in range(-n, n + 1))
        assert dirac_comb_ft(p, n, t) == pytest.approx(direct.real, abs=1e-9 * (2 * n + 1))
        assert dirac_comb_ft(p, n, t + 1 / p) == pytest.approx(dirac_comb_ft(p, n, t), abs=1e-9 * (2 * n + 1))

    def test_near_singularity(self):
        assert dirac_comb_ft(3, 4, 1e-12) == pytest.approx(9, abs=1e-9)

    @pytest.mark.parametrize("p, n, t, want", [(2, 1, 0.0, 9), (3, 0, 0.77, 1), (2, 2, 0.123, 25)])
    def test_comb_identity(self, p, n, t, want):
        assert comb_plancherel_check(p, n, t) == pytest.approx(want, rel=1e-12)


class TestPlancherel:
    def test_unit(self):
        r = plancherel_sum(UNIT, [0], 0.3, 1e-6)
        assert abs(r.value - 1) <= 1e-6 + r.tail_bound
        assert r.tail_bound <= 1e-6

    @pytest.mark.parametrize("t", [0.0, 0.17, 0.5, 2.71])
    def test_split_base(self, t):
        r = plancherel_sum(SPLIT, [0], t, 1e-6)
        assert abs(r.value - 1) <= 1e-6 + r.tail_bound

    def test_non_spectral_defect(self):
        # Poisson: sum_k |chi^(k)|^2 = |s| = 3/4, so the gap to 9/16 is exactly 3/16
        r = plancherel_sum(interval_set((0, "3/4")), [0], 0.0, 1e-6)
        assert abs(r.value - 9 / 16) == pytest.approx(3 / 16, abs=2e-6)
        brute = oracles.direct_lattice_energy(lambda x: ft_indicator(interval_set((0, "3/4")), x), 0.0, 10**5)
        assert brute == pytest.approx(r.value, abs=5e-6)

    @settings(max_examples=30, deadline=None)
    @given(interval_sets(max_size=3, lo=-2, hi=2), st.floats(-1, 1))
    def test_interval_contains_refinement(self, s, t):
        r = plancherel_sum(s, [0], t, 1e-4)
        lo, hi = r.interval
        finer = lattice_energy(StepFunction.indicator(s), fourier._center(t), 2 * r.truncation_K)
        assert lo - 1e-12 <= finer <= hi + 1e-12

    @settings(max_examples=30, deadline=None)
    @given(interval_sets(max_size=3, lo=-2, hi=2), st.floats(-1, 1))
    def test_poisson_oracle(self, s, t):
        # Per(|chi^|^2)(t) = sum_m |s & (s+m)| e^{2 pi i m t}
        r = plancherel_sum(s, [0], t, 1e-6)
        span = math.ceil(s.hi - s.lo) if s else 0
        exact = sum(float(oracles._overlap(s, m)) * math.cos(2 * math.pi * m * t) for m in range(-span, span + 1))
        assert abs(r.value - exact) <= 1e-6 + r.tail_bound + 1e-9

    def test_truncation_error(self):
        with pytest.raises(TruncationError):
            plancherel_sum(UNIT, [0], 0.1, 1e-12)


class TestLatticeSums:
    @settings(max_examples=40, deadline=None)
    @given(interval_sets(max_size=3, lo=-2, hi=2), interval_sets(max_size=3, lo=-2, hi=2), st.floats(-0.5, 0.5))
    def test_residue_matches_direct(self, a, b, u):
        f, g = StepFunction.indicator(a), StepFunction([(b, 2 - 1j)])
        fast = cross_energy(f, g, u, 3000, method="residue")
        slow = cross_energy(f, g, u, 3000, method="direct")
        assert abs(fast - slow) < 1e-10

    def test_direct_oracle(self):
        f = StepFunction.indicator(SPLIT)
        got = lattice_energy(f, 0.2, 5000)
        want = oracles.direct_lattice_energy(f.transform, 0.2, 5000)
        assert got == pytest.approx(want, abs=1e-12)

    def test_cross_sum_is_complex(self):
        f = StepFunction.indicator(interval_set((0, "1/2")))
        g = StepFunction.indicator(interval_set(("1/2", 1)))
        r = step_plancherel_sum(f, g, 0.25, 1e-6)
        assert isinstance(r.value, complex)
        # f and g have disjoint support inside one period of Z: sum is zero
        assert abs(r.value) <= 1e-6 + r.tail_bound


class TestPeriodization:
    def test_unit(self):
        fhat = lambda x: np.abs(ft_indicator(UNIT, x)) ** 2
        C = fourier.energy_decay_constant(StepFunction.indicator(UNIT))
        r = periodization(fhat, 0.25, 1e-5, C)
        assert abs(r.value - 1) <= 1e-5 + r.tail_bound

    def test_zero(self):
        assert periodization(lambda x: 0 * x, 0.4, 1e-6, 0.0).value == 0

    def test_missing_decay(self):
        with pytest.raises(ValueError):
            periodization(lambda x: x, 0.1, 1e-6)

    def test_period_on_tiling_set(self):
        # [0,1)+2Z tiles by {0,1}; Per(|chi_[0,1/2)^|^2) then has period 1/2
        f = StepFunction.indicator(interval_set((0, "1/2")))
        C = fourier.energy_decay_constant(f)
        fhat = lambda x: np.abs(f.transform(x)) ** 2
        a = periodization(fhat, 0.1, 1e-5, C)
        b = periodization(fhat, 0.6, 1e-5, C)
        assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound + 2e-5


class TestCoefficients:
    def test_examples(self):
        c = periodic_ft_coefficients(PeriodicSet(2, UNIT), 2)
        assert c[2] == pytest.approx(0.5)
        assert abs(c[4]) < 1e-15
        assert c[3] == pytest.approx(-1j / math.pi, abs=1e-15)
        assert c[3] == pytest.approx(oracles.quad_ft_indicator(UNIT, 0.5) / 2, abs=1e-12)


def test_sweep_rows():
    grid = [F(i, 5) for i in range(5)]
    rows = fourier.sweep_comb(2, 1, grid).to_csv_rows()
    assert [float(v) for _, v, _ in rows] == pytest.approx([9.0] * 5)
