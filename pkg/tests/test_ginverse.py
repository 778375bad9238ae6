import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kemeny_mrp import (
    eigen_spectrum,
    fundamental_matrix,
    group_inverse,
    parametric_ginverse,
    solve_dense,
    stationary_embedded,
    validate_chain,
    verify_ginverse,
)
from kemeny_mrp.ctmc import embedded_chain
from kemeny_mrp.errors import DegenerateU, RouteMismatch, Singular
from kemeny_mrp.ginverse import generator_h, kemeny_from_spectrum
from oracles import series_fundamental
from strategies import generators, mrp_specs, positive_chains

EX1 = validate_chain([[0.5, 0.5], [0.25, 0.75]])


class TestSolveDense:
    def test_solves(self):
        a = np.array([[4.0, 1.0], [2.0, 3.0]])
        assert solve_dense(a, [1.0, 2.0]) == pytest.approx(np.linalg.solve(a, [1.0, 2.0]))

    def test_matrix_rhs(self):
        a = np.array([[2.0, 0.0], [1.0, 1.0]])
        np.testing.assert_allclose(solve_dense(a, np.eye(2)) @ a, np.eye(2), atol=1e-15)

    @pytest.mark.parametrize("a", [np.zeros((2, 2)), [[1.0, 2.0], [2.0, 4.0]], [[1.0, 1.0], [1.0, 1.0 + 1e-15]]])
    def test_singular(self, a):
        with pytest.raises(Singular):
            solve_dense(a, [1.0, 1.0])

    def test_singular_i_minus_p(self):
        with pytest.raises(Singular):
            solve_dense(np.eye(2) - EX1.p, [1.0, 0.0])


class TestFundamental:
    def test_mrp2(self):
        pi = stationary_embedded(EX1)
        z = fundamental_matrix(EX1, pi)
        # Z = [I - P + e pi^T]^{-1} worked by hand for P = [[1/2,1/2],[1/4,3/4]]
        np.testing.assert_allclose(z.g, [[11 / 9, -2 / 9], [-1 / 9, 10 / 9]], atol=1e-14)
        a = group_inverse(EX1, pi)
        np.testing.assert_allclose(a.g, [[8 / 9, -8 / 9], [-4 / 9, 4 / 9]], atol=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(positive_chains())
    def test_matches_series(self, chain):
        pi = stationary_embedded(chain)
        z = fundamental_matrix(chain, pi)
        np.testing.assert_allclose(z.g, series_fundamental(chain.p, pi), atol=1e-10)
        e = np.ones(chain.m)
        assert np.abs(z.g @ e - e).max() <= 1e-10
        assert np.abs(pi @ z.g - pi).max() <= 1e-10
        assert verify_ginverse(z, chain) <= 1e-9

    @settings(max_examples=50, deadline=None)
    @given(positive_chains())
    def test_group_inverse_conditions(self, chain):
        pi = stationary_embedded(chain)
        a = group_inverse(chain, pi).g
        ip = np.eye(chain.m) - chain.p
        assert np.abs(ip @ a @ ip - ip).max() <= 1e-9
        assert np.abs(a @ ip @ a - a).max() <= 1e-9
        assert np.abs(a @ ip - ip @ a).max() <= 1e-9
        assert np.abs(a.sum(axis=1)).max() <= 1e-9
        assert np.abs(pi @ a).max() <= 1e-9


class TestParametric:
    @settings(max_examples=50, deadline=None)
    @given(mrp_specs(), st.sampled_from(["e", "pi", "random"]))
    def test_is_ginverse(self, spec, which):
        pi = stationary_embedded(spec.chain)
        u = {"e": None, "pi": pi, "random": np.linspace(0.5, 2.0, spec.m)}[which]
        g = parametric_ginverse(spec.chain, spec.mu, u)
        assert verify_ginverse(g, spec.chain) <= 1e-9
        # with t = mu, G~ mu = e / u^T e
        ue = float(np.sum(g.u))
        assert np.abs(g.g @ spec.mu - np.ones(spec.m) / ue).max() <= 1e-9

    def test_degenerate_u(self):
        with pytest.raises(DegenerateU):
            parametric_ginverse(EX1, [1.0, 1.0], [1.0, -1.0])

    def test_t_orthogonal_to_pi_is_singular(self):
        # pi = (1/3, 2/3) so t = (2, -1) has pi^T t = 0
        with pytest.raises(Singular):
            parametric_ginverse(EX1, [2.0, -1.0])

    def test_route_mismatch(self):
        g = parametric_ginverse(EX1, [1.0, 1.0])
        with pytest.raises(RouteMismatch):
            verify_ginverse(g, validate_chain([[0.1, 0.9], [0.9, 0.1]]))


class TestGeneratorH:
    @settings(max_examples=50, deadline=None)
    @given(generators())
    def test_is_ginverse_of_q(self, gen):
        h = generator_h(gen.q, embedded_chain(gen))
        assert verify_ginverse(h) <= 1e-9
        # H Q_d is then a g-inverse of I - P
        ip = np.eye(gen.m) - embedded_chain(gen)
        hqd = h.of_i_minus_p()
        assert np.abs(ip @ hqd @ ip - ip).max() <= 1e-9

    def test_degenerate_u(self, ctmc2_gen):
        with pytest.raises(DegenerateU):
            generator_h(ctmc2_gen.q, embedded_chain(ctmc2_gen), [1.0, -1.0])


class TestSpectrum:
    def test_mrp2(self):
        vals = eigen_spectrum(EX1)
        assert vals[0] == pytest.approx(1.0)
        assert vals[1] == pytest.approx(0.25)
        assert kemeny_from_spectrum(vals) == pytest.approx(1 + 1 / 0.75, rel=1e-14)

    def test_ordering_and_complex_pairs(self):
        cycle = validate_chain(np.roll(np.eye(3), 1, axis=1))
        vals = eigen_spectrum(cycle)
        assert vals[0] == pytest.approx(1.0)
        assert vals[1].imag > 0 > vals[2].imag
        # 1 + 2 Re(1 / (1 - w)) with w a primitive cube root of unity
        assert kemeny_from_spectrum(vals) == pytest.approx(2.0, abs=1e-12)

    def test_imaginary_residue_warns(self):
        with pytest.warns(RuntimeWarning):
            kemeny_from_spectrum([1.0, 0.5j])

    @settings(max_examples=50, deadline=None)
    @given(positive_chains())
    def test_trace_and_kemeny(self, chain):
        vals = eigen_spectrum(chain)
        assert abs(sum(vals) - np.trace(chain.p)) <= 1e-9
        pi = stationary_embedded(chain)
        trz = np.trace(fundamental_matrix(chain, pi).g)
        assert kemeny_from_spectrum(vals) == pytest.approx(trz, rel=1e-8)
