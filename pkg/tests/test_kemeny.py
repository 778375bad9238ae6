import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kemeny_mrp import (
    constancy_equivalence,
    constancy_test,
    fundamental_matrix,
    group_inverse,
    kemeny_closed,
    kemeny_constant_dtmc,
    kemeny_from_mfpt,
    make_spec,
    mfpt_direct,
    parametric_ginverse,
    stationary_profile,
)
from kemeny_mrp.kemeny import WHICH
from strategies import mrp_specs, positive_chains


def _mixing(spec):
    return kemeny_from_mfpt(mfpt_direct(spec), stationary_profile(spec))


def test_mrp2(mrp2):
    rep = _mixing(mrp2)
    lam = 10 / 3
    np.testing.assert_allclose(rep.k1, [6, 26 / 3], rtol=1e-12)
    np.testing.assert_allclose(rep.k2c, [3.2, 3.2], rtol=1e-12)
    np.testing.assert_allclose(rep.k3, rep.k1 / lam, rtol=1e-12)
    np.testing.assert_allclose(rep.k1c, rep.k1 - lam, rtol=1e-12)
    np.testing.assert_allclose(rep.k2c, rep.k2 - mrp2.mu, rtol=1e-12)
    np.testing.assert_allclose(rep.k3c, rep.k3 - 1, rtol=1e-12)
    assert rep.constant == {"1": False, "2": False, "3": False, "1c": False, "2c": True, "3c": False}
    assert rep.constants["2c"] == pytest.approx(3.2, rel=1e-12)
    assert rep.constants["1"] is None
    assert not rep.mu_constant


def test_vector_aliases(mrp2):
    rep = _mixing(mrp2)
    assert rep.vector("2°") is rep.k2c
    with pytest.raises(ValueError):
        rep.vector("4")


def test_constancy_test_is_relative():
    assert constancy_test([1e6, 1e6 + 1e-3])[0]
    assert not constancy_test([1.0, 1.0 + 1e-6])[0]
    ok, spread = constancy_test([2.0, 2.0])
    assert ok and spread == 0.0


def _ginverses(spec, prof):
    return {
        "Z": fundamental_matrix(spec.chain, prof.pi),
        "A#": group_inverse(spec.chain, prof.pi),
        "G~(u=e)": parametric_ginverse(spec.chain, spec.mu),
        "G~(u=pi)": parametric_ginverse(spec.chain, spec.mu, prof.pi),
        "general": parametric_ginverse(spec.chain, np.ones(spec.m), np.linspace(1.0, 3.0, spec.m)),
    }


@pytest.mark.parametrize("which", WHICH)
def test_closed_forms_mrp2(mrp2, which):
    prof = stationary_profile(mrp2)
    expected = _mixing(mrp2).vector(which)
    for name, g in _ginverses(mrp2, prof).items():
        got = kemeny_closed(mrp2, g, which, prof)
        np.testing.assert_allclose(got, expected, rtol=1e-12, err_msg=name)


@settings(max_examples=40, deadline=None)
@given(mrp_specs() | mrp_specs(full=True))
def test_closed_forms_match_mixing(spec):
    prof = stationary_profile(spec)
    rep = kemeny_from_mfpt(mfpt_direct(spec), prof)
    for name, g in _ginverses(spec, prof).items():
        for which in WHICH:
            expected = rep.vector(which)
            got = kemeny_closed(spec, g, which, prof)
            scale = max(1.0, np.abs(expected).max())
            assert np.abs(got - expected).max() <= 1e-8 * scale, (name, which)


class TestPrintedFormsThatNeedCorrection:
    """Two closed forms are easy to mistype; pin both the wrong and right versions."""

    def test_k2c_with_gtilde_subtracts_reciprocal(self, mrp2):
        g = parametric_ginverse(mrp2.chain, mrp2.mu).g
        ue = 2.0
        plus = 1 / ue + np.diag(g) @ mrp2.mu
        minus = np.diag(g) @ mrp2.mu - 1 / ue
        assert minus == pytest.approx(3.2, rel=1e-12)
        assert plus == pytest.approx(4.2, rel=1e-12)

    def test_k3c_keeps_g_terms_outside_the_scaling(self, mrp2):
        prof = stationary_profile(mrp2)
        g = fundamental_matrix(mrp2.chain, prof.pi).g
        mu, pi, lam = mrp2.mu, prof.pi, prof.lam
        e = np.ones(2)
        head = g @ mu - np.trace(np.outer(g @ mu, pi)) * e
        all_scaled = (head - g @ e + np.trace(g) * e) / lam
        outside = head / lam - g @ e + np.trace(g) * e
        expected = _mixing(mrp2).k3c
        np.testing.assert_allclose(outside, expected, rtol=1e-12)
        assert np.abs(all_scaled - expected).max() > 0.1

    def test_k1_general_form_keeps_lambda_e(self, mrp2):
        prof = stationary_profile(mrp2)
        g = parametric_ginverse(mrp2.chain, [1.0, 2.0], [3.0, 1.0]).g
        mu, pi, lam = mrp2.mu, prof.pi, prof.lam
        e = np.ones(2)
        k1 = g @ mu - (pi @ g @ mu) * e + lam * e - lam * g @ e + lam * np.trace(g) * e
        np.testing.assert_allclose(k1, [6, 26 / 3], rtol=1e-12)


class TestConstancy:
    @settings(max_examples=60, deadline=None)
    @given(mrp_specs(), st.booleans())
    def test_iff_mu_constant(self, spec, flatten):
        if flatten:
            spec = make_spec(spec.chain, mu=np.full(spec.m, float(spec.mu[0])))
        verdict = constancy_equivalence(spec)
        assert verdict.consistent
        assert verdict.k2c_constant
        assert verdict.residual <= 1e-9
        if flatten:
            assert verdict.mu_constant and verdict.k1_constant

    def test_one_state(self):
        verdict = constancy_equivalence(make_spec([[1.0]], mu=[2.0]))
        assert verdict.consistent and verdict.mu_constant


class TestDtmcCollapse:
    @settings(max_examples=60, deadline=None)
    @given(positive_chains())
    def test_all_equal_trace(self, chain):
        spec = make_spec(chain)
        prof = stationary_profile(spec)
        rep = kemeny_from_mfpt(mfpt_direct(spec), prof)
        trz = kemeny_constant_dtmc(chain)
        tra = float(np.trace(group_inverse(chain, prof.pi).g))
        for which in ("1", "2", "3"):
            assert rep.constant[which]
            assert rep.constants[which] == pytest.approx(trz, rel=1e-9)
        assert rep.constants["1c"] == pytest.approx(trz - 1, rel=1e-9)
        assert trz == pytest.approx(1 + tra, rel=1e-12)
        assert kemeny_constant_dtmc(chain, "eigen") == pytest.approx(trz, rel=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(positive_chains(), st.floats(0.1, 10.0))
    def test_constant_mu(self, chain, c):
        spec = make_spec(chain, mu=np.full(chain.m, c))
        prof = stationary_profile(spec)
        rep = kemeny_from_mfpt(mfpt_direct(spec), prof)
        tra = float(np.trace(group_inverse(chain, prof.pi).g))
        assert rep.constants["1c"] == pytest.approx(c * tra, rel=1e-9)
        assert rep.constants["3c"] == pytest.approx(tra, rel=1e-9)

    def test_bad_route(self, mrp2):
        with pytest.raises(ValueError):
            kemeny_constant_dtmc(mrp2.chain, "power")
