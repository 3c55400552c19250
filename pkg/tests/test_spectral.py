import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiledual import corpus, oracles, spectral
from tiledual.fourier import StepFunction
from tiledual.intervals import IntervalSet, interval_set
from tiledual.spectral import (
    BumpFunction,
    PreconditionError,
    Thresholds,
    duality_verdict,
    find_isometry_defect,
    integer_atoms,
    isometry_check,
    orthogonality_check,
    periodization_period_check,
    spectrum_lambda_n,
    surjectivity_witness,
    verify_finite_spectrum,
)
from tiledual.tiling import PeriodicSet, build_omega_n

F = Fraction
UNIT = interval_set((0, 1))
UNIT_SET = PeriodicSet(2, UNIT)
SPLIT_SET = PeriodicSet(2, interval_set((0, "1/2"), ("3/2", 2)))
BAD_SET = PeriodicSet(2, interval_set((0, "3/4"), (1, "5/4")))


class TestSpectrumLattice:
    def test_offsets(self):
        assert spectrum_lambda_n(2, 0).offsets == (F(0),)
        assert spectrum_lambda_n(2, 1).offsets == (F(-1, 6), F(0), F(1, 6))
        assert spectrum_lambda_n(3, 2).offsets == tuple(F(j, 15) for j in range(-2, 3))


class TestFiniteSpectrum:
    def test_omega_one(self):
        s = build_omega_n(UNIT, 2, 1)
        rep = verify_finite_spectrum(s, spectrum_lambda_n(2, 1), 16, 1e-6)
        assert rep.details["target"] == 9
        assert rep.passed and rep.worst_deviation < 1e-5

    def test_integers_are_spectrum_of_unit(self):
        rep = verify_finite_spectrum(UNIT, spectrum_lambda_n(1, 0), 16, 1e-6)
        assert rep.passed and rep.worst_deviation < 1e-5

    def test_not_a_spectrum(self):
        rep = verify_finite_spectrum(interval_set((0, "3/4")), spectrum_lambda_n(1, 0), 16, 1e-6)
        assert not rep.passed
        # Poisson: Per(|chi^|^2) is the constant 3/4, so every sample misses 9/16 by 3/16
        assert rep.worst_deviation == pytest.approx(3 / 16, abs=2e-6)

    def test_seeded(self):
        a = verify_finite_spectrum(UNIT, spectrum_lambda_n(1, 0), 8, 1e-5, seed=3)
        b = verify_finite_spectrum(UNIT, spectrum_lambda_n(1, 0), 8, 1e-5, seed=3)
        assert a == b


class TestIsometry:
    def test_unit(self):
        rep = isometry_check(UNIT_SET, StepFunction.indicator(UNIT), 8, 1e-6)
        assert rep.lhs == 1
        assert rep.residual < 1e-4
        assert abs(rep.band_integral - 1) < 1e-4
        assert all(e < 1e-3 for _, e in rep.riemann_errors)

    def test_zero_function(self):
        rep = isometry_check(SPLIT_SET, StepFunction(), 2, 1e-6)
        assert rep.lhs == 0 and rep.residual == 0

    def test_outside_support_refused(self):
        with pytest.raises(PreconditionError):
            isometry_check(UNIT_SET, StepFunction.indicator(interval_set(("1/2", "3/2"))), 2, 1e-6)

    def test_sub_interval_shows_no_defect(self):
        # chi_[0,3/4) has no translates by Z inside the set, so the defect stays hidden
        rep = isometry_check(BAD_SET, StepFunction.indicator(interval_set((0, "3/4"))), 2, 1e-6)
        assert rep.residual < 1e-5

    def test_defect_on_non_tiling_set(self):
        found = find_isometry_defect(BAD_SET, 0.01)
        assert found is not None
        f, rep = found
        assert f == StepFunction.indicator(BAD_SET.base)
        # autocorrelation oracle: band integral 1 + 1/pi
        assert rep.band_integral == pytest.approx(1 + 1 / math.pi, abs=1e-5)
        assert rep.residual == pytest.approx(1 / math.pi, abs=1e-5)

    @pytest.mark.parametrize(
        "om", [om for om in corpus.tiling_corpus()[:8] + corpus.nontiling_corpus()[:8] if om.base], ids=repr
    )
    def test_band_integral_matches_poisson_oracle(self, om):
        f = StepFunction.indicator(om.base)
        rep = isometry_check(om, f, spectral._periods_touched(f.support, om.p), 1e-6)
        assert rep.band_integral == pytest.approx(oracles.autocorrelation_band_integral(om.base, om.p), abs=1e-5)

    def test_bump(self):
        b = BumpFunction(F(1, 2), F(1, 4))
        rep = isometry_check(UNIT_SET, b, 2, 1e-7)
        assert rep.residual < 1e-8
        assert rep.riemann_errors[-1][1] < 1e-8


class TestSurjectivity:
    def test_unit(self):
        rep = surjectivity_witness(UNIT_SET, BumpFunction(0, F(1, 8)), 0, 65)
        assert rep.passed and rep.worst_deviation < 1e-6

    def test_split(self):
        mass, atom = integer_atoms(SPLIT_SET.base, 2)
        assert mass < 1e-10 and atom < 1e-10
        rep = surjectivity_witness(SPLIT_SET, BumpFunction(0, F(1, 8)), 0, 65, tol=1e-5)
        assert rep.passed and rep.worst_deviation < 1e-5

    def test_straddling_band_edge(self):
        with pytest.raises(PreconditionError):
            surjectivity_witness(UNIT_SET, BumpFunction(F(1, 4), F(1, 8)), 0, 65)

    def test_needs_tiling(self):
        with pytest.raises(PreconditionError):
            surjectivity_witness(BAD_SET, BumpFunction(0, F(1, 8)), 0, 65)

    def test_atoms_of_non_congruent_base(self):
        _, atom = integer_atoms(interval_set((0, "3/4")))
        assert atom > 0.1

    @settings(max_examples=20, deadline=None)
    @given(st.integers(-3, 3), st.sampled_from([F(1, 16), F(1, 10), F(1, 5)]), st.sampled_from([F(-1, 40), F(0), F(1, 40)]))
    def test_random_bumps(self, k0, h, shift):
        g = BumpFunction(k0 + shift, h)
        rep = surjectivity_witness(SPLIT_SET, g, k0, 65, tol=1e-5)
        assert rep.worst_deviation < 1e-5


class TestPeriodicity:
    def test_unit(self):
        f = StepFunction.indicator(UNIT)
        rep = periodization_period_check(UNIT_SET, f, f, 16, 1e-6)
        assert rep.worst_deviation < 1e-5

    def test_zero(self):
        rep = periodization_period_check(UNIT_SET, StepFunction(), None, 8)
        assert rep.worst_deviation == 0

    def test_non_tiling_gap(self):
        # Per(|chi_[0,3/4)^|^2) is the constant 3/4: no gap for that f
        small = periodization_period_check(BAD_SET, StepFunction.indicator(interval_set((0, "3/4"))), None, 64)
        assert small.worst_deviation < 1e-5
        # the whole base gives Per = 1 + (1/2) cos(2 pi t): the half-period gap is |cos 2 pi t|
        rep = periodization_period_check(BAD_SET, StepFunction.indicator(BAD_SET.base), None, 64)
        assert 0.9 < rep.worst_deviation <= 1 + 1e-5


class TestOrthogonality:
    def test_examples(self):
        assert orthogonality_check(UNIT_SET, 1) == 0
        assert orthogonality_check(UNIT_SET, 3) == 0
        assert orthogonality_check(BAD_SET, 1) == F(1, 2)


class TestVerdict:
    def test_unit(self):
        v = duality_verdict(UNIT_SET)
        assert v.tiling_verdict and v.spectral_verdict and v.consistent

    def test_non_tiling(self):
        v = duality_verdict(BAD_SET)
        assert not v.tiling_verdict and not v.spectral_verdict and v.consistent
        failed = {d.name for d in v.spectral_diagnostics if not d.passed}
        assert {"orthogonality", "isometry", "finite_spectrum"} <= failed

    def test_three_pieces(self):
        om = PeriodicSet(3, interval_set((0, "1/3"), ("4/3", "5/3"), ("8/3", 3)))
        v = duality_verdict(om)
        assert v.tiling_verdict and v.consistent
        assert oracles.raster_tiles_by_residues(3, om.base)

    def test_json(self):
        js = duality_verdict(UNIT_SET, Thresholds(n_max=1)).to_json()
        assert js["consistent"] is True
        assert {d["name"] for d in js["spectral_diagnostics"]} == {
            "orthogonality", "finite_spectrum", "isometry", "periodization_period", "integer_atoms", "surjectivity",
        }


def test_descriptor_parsing():
    f = spectral.test_function_from_json({"kind": "indicator", "set": [["0", "1/2"]]})
    assert f == StepFunction.indicator(interval_set((0, "1/2")))
    b = spectral.test_function_from_json({"kind": "bump", "center": "0", "halfwidth": "1/8"})
    assert b == BumpFunction(0, F(1, 8))
    with pytest.raises((KeyError, ValueError, TypeError)):
        spectral.test_function_from_json({"kind": "gauss"})


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("h", [F(1, 4), F(1, 16)])
def test_bump_transform_matches_quad(h):
    b = BumpFunction(F(1, 3), h)
    ts = np.array([0.0, 0.3, 1.7, 5.5, 20.25, 80.1, 300.3])
    got = b.centred_transform(ts)
    want = [b.quad_transform(t) for t in ts]
    assert np.max(np.abs(got - want)) < 1e-12
