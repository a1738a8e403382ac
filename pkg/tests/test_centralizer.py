import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxhyp.ball import IsometryMatrix, identity
from cxhyp.centralizer import (
    centralizer_element_from,
    commutes,
    elliptic_centralizer_test,
    heisenberg_centralizer_test,
    hyperbolic_centralizer_test,
    shared_fixed_points,
)
from cxhyp.classify import Kind, classify
from cxhyp.errors import FormMismatch, NotCommuting, NotElliptic, NotHyperbolic
from cxhyp.heisenberg import HeisenbergTranslation
from cxhyp.linalg import norm
from cxhyp.sampling import (
    commuting_hyperbolic_pair,
    elliptic_pair,
    heisenberg_pair,
    hyperbolic_pair,
    random_elliptic,
    random_unitary,
    regular_elliptic_vs_other,
)
from cxhyp.siegel import SiegelForm, SiegelStabilizerElement, stabilizer_build, to_ball

from conftest import sqrt2_hyperbolic

seeds = st.integers(0, 2**32 - 1)
VERTICAL = HeisenbergTranslation(1, [0], 1j)
UNIT = HeisenbergTranslation(1, [1], 0.5)
BOOST = IsometryMatrix.of(np.array([[1.25, 0, 0.75], [0, 1, 0], [0.75, 0, 1.25]]))


def rotation(psi: float) -> IsometryMatrix:
    return IsometryMatrix.of(np.diag([1, np.exp(1j * psi), 1]))


def siegel_rotation(u) -> IsometryMatrix:
    k = np.asarray(u).shape[0]
    return stabilizer_build(SiegelStabilizerElement(1, u, np.zeros(k), 0))


class TestCommutes:
    def test_with_itself(self, hyp):
        assert commutes(hyp, hyp).commutator_norm == 0

    def test_with_identity(self, hyp):
        ev = commutes(identity(2), hyp)
        assert ev.commutator_norm == 0 and ev.verdict

    def test_vertical_translation_and_rotations(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            assert commutes(VERTICAL.matrix(), siegel_rotation(random_unitary(rng, 1))).verdict
        h3 = HeisenbergTranslation.vertical(1, 2.0, 4)
        assert commutes(h3.matrix(), siegel_rotation(random_unitary(rng, 3))).verdict

    def test_models_must_match(self, hyp):
        with pytest.raises(FormMismatch):
            commutes(hyp, VERTICAL.matrix())


class TestEllipticCentralizer:
    def test_block_diagonal_rotations(self):
        t = IsometryMatrix.of(np.diag([np.exp(1j * np.sqrt(2) * np.pi), 1, 1]))
        ev = elliptic_centralizer_test(rotation(0.4), t)
        assert ev.verdict and ev.oracle

    def test_regular_elliptic_rejects_hyperbolic(self):
        t = IsometryMatrix.of(np.diag([np.exp(0.5j), np.exp(1.5j), 1]))
        ev = elliptic_centralizer_test(sqrt2_hyperbolic(), t)
        assert not ev.verdict and ev.commutator_norm > 1e-3

    def test_element_itself(self):
        t = random_elliptic(np.random.default_rng(1), 3)
        assert elliptic_centralizer_test(t, t).verdict

    def test_requires_elliptic(self, hyp):
        with pytest.raises(NotElliptic):
            elliptic_centralizer_test(hyp, hyp)

    @settings(max_examples=60, deadline=None)
    @given(seeds, st.integers(1, 5))
    def test_agrees_with_oracle(self, seed, n):
        s, t = elliptic_pair(np.random.default_rng(seed), n)
        assert elliptic_centralizer_test(s, t).agrees


class TestHyperbolicCentralizer:
    def test_boost_along_the_same_axis(self, hyp):
        ev = hyperbolic_centralizer_test(BOOST, hyp)
        assert ev.verdict and ev.commutator_norm <= 1e-10
        assert BOOST.residual <= 1e-12

    def test_rotation_of_the_complement(self, hyp):
        ev = hyperbolic_centralizer_test(rotation(1.1), hyp)
        assert ev.verdict and ev.commutator_norm == 0

    def test_parabolic_at_one_endpoint(self, hyp):
        s = to_ball(UNIT.matrix())
        assert classify(s).kind is Kind.PARABOLIC
        ev = hyperbolic_centralizer_test(s, hyp)
        assert not ev.verdict and not ev.oracle

    def test_requires_hyperbolic(self):
        with pytest.raises(NotHyperbolic):
            hyperbolic_centralizer_test(identity(2), identity(2))

    @settings(max_examples=60, deadline=None)
    @given(seeds, st.integers(1, 5))
    def test_agrees_with_oracle(self, seed, n):
        s, t = hyperbolic_pair(np.random.default_rng(seed), n)
        assert hyperbolic_centralizer_test(s, t).agrees


class TestHeisenbergCentralizer:
    def test_vertical_and_rotation(self):
        ev = heisenberg_centralizer_test(siegel_rotation([[np.exp(0.8j)]]), VERTICAL)
        assert ev.verdict and ev.oracle

    def test_vertical_and_dilation(self):
        d = stabilizer_build(SiegelStabilizerElement(2, np.eye(1), [0], 0))
        ev = heisenberg_centralizer_test(d, VERTICAL)
        assert not ev.verdict and ev.commutator_norm > 0

    def test_parallel_translations(self):
        s = HeisenbergTranslation(1, [2], 2).matrix()
        ev = heisenberg_centralizer_test(s, UNIT)
        assert ev.verdict and ev.commutator_norm <= 1e-15

    def test_non_stabilizer_is_reported(self):
        swap = IsometryMatrix.of(np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]]), SiegelForm(2))
        ev = heisenberg_centralizer_test(swap, VERTICAL)
        assert not ev.verdict and ev.structural_checks == [("fixes-infinity", False)]

    @settings(max_examples=60, deadline=None)
    @given(seeds, st.integers(1, 5))
    def test_agrees_with_oracle(self, seed, n):
        s, h = heisenberg_pair(np.random.default_rng(seed), n)
        assert heisenberg_centralizer_test(s, h).agrees


class TestSharedFixedPoints:
    def test_powers(self, hyp):
        assert shared_fixed_points(hyp, hyp.power(2))
        assert shared_fixed_points(hyp, hyp.inverse())

    def test_boost(self, hyp):
        assert shared_fixed_points(hyp, BOOST)

    def test_non_commuting(self, hyp):
        other = IsometryMatrix.of(np.array([[np.sqrt(2), 0, 1j], [0, 1, 0], [-1j, 0, np.sqrt(2)]]))
        with pytest.raises(NotCommuting):
            shared_fixed_points(hyp, other)

    @settings(max_examples=60, deadline=None)
    @given(seeds, st.integers(1, 5))
    def test_commuting_hyperbolics_share_endpoints(self, seed, n):
        s, t = commuting_hyperbolic_pair(np.random.default_rng(seed), n)
        assert shared_fixed_points(s, t)


class TestCentralizerElementFrom:
    def test_builds_a_commuting_member(self, hyp):
        s = centralizer_element_from(hyp, 2.0, 0.3)
        assert s.residual <= 1e-9
        assert commutes(s, hyp).verdict
        assert np.isclose(classify(s).spectral_radius, 2.0)

    def test_unit_scale_is_elliptic(self, hyp):
        s = centralizer_element_from(hyp, 1.0, 0.0)
        assert norm(s.m - np.eye(3)) <= 1e-12

    def test_bad_scale(self, hyp):
        with pytest.raises(ValueError):
            centralizer_element_from(hyp, -1.0, 0.0)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 5))
def test_regular_elliptic_commutes_only_with_elliptic(seed, n):
    s, t = regular_elliptic_vs_other(np.random.default_rng(seed), n)
    assert not commutes(s, t).verdict
