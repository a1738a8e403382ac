import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxhyp.errors import InvalidTranslation, NotStabilizer, OutsideDomain
from cxhyp.heisenberg import (
    HeisenbergTranslation,
    conjugacy_decide,
    isotropic,
    k_decompose,
    translate_point,
    translation_from_matrix,
)
from cxhyp.linalg import norm, spectral_groups
from cxhyp.sampling import complex_normal, random_phase, random_translation
from cxhyp.siegel import SiegelStabilizerElement, affine_action, stabilizer_build

seeds = st.integers(0, 2**32 - 1)
E = np.array([1.0, 0.0])
VERTICAL = HeisenbergTranslation(1, [0], 1j)
UNIT = HeisenbergTranslation(1, [1], 0.5)


def commutator(a, b):
    return norm(a.m @ b.m - b.m @ a.m)


class TestTranslation:
    def test_real_part_is_pinned(self):
        with pytest.raises(InvalidTranslation):
            HeisenbergTranslation(1, [1], 1j)

    def test_zero_translation_rejected(self):
        with pytest.raises(InvalidTranslation):
            HeisenbergTranslation(1, [0], 0)

    def test_parse_round_trip(self):
        h = random_translation(np.random.default_rng(4), 4)
        back = translation_from_matrix(h.matrix())
        assert np.isclose(back.lam, h.lam) and np.isclose(back.s, h.s)
        assert np.allclose(back.a_prime, h.a_prime)

    def test_parse_rejects_rotation_part(self):
        el = SiegelStabilizerElement(1, [[1j]], [0], 1j)
        with pytest.raises(NotStabilizer):
            translation_from_matrix(stabilizer_build(el))

    def test_singleton_spectrum(self):
        groups = spectral_groups(UNIT.matrix().m)
        assert len(groups) == 1 and abs(groups[0].value - 1) < 1e-9


class TestTranslatePoint:
    def test_vertical_on_e(self):
        assert np.allclose(translate_point(VERTICAL, E), [1 + 1j, 0])

    def test_unit_horizontal_on_e(self):
        assert np.allclose(translate_point(UNIT, E), [1.5, 1])

    def test_outside(self):
        with pytest.raises(OutsideDomain):
            translate_point(UNIT, [0, 3])

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(2, 6))
    def test_matches_affine_action_when_lambda_is_one(self, seed, n):
        rng = np.random.default_rng(seed)
        h = random_translation(rng, n, lam=1)
        x = complex_normal(rng, n)
        x[0] = 0.5 * norm(x[1:]) ** 2 + abs(x[0].real) + 1j * x[0].imag
        assert norm(translate_point(h, x) - affine_action(h.element(), x)) <= 1e-9 * max(1, norm(x))


class TestConjugacy:
    def test_vertical_same_sign(self):
        v = conjugacy_decide(VERTICAL, HeisenbergTranslation(1, [0], 2j))
        assert v.conjugate
        assert np.isclose(v.conjugator.m[0, 0], np.sqrt(2))
        assert v.residual <= 1e-8

    def test_vertical_opposite_sign(self):
        assert not conjugacy_decide(VERTICAL, HeisenbergTranslation(1, [0], -1j)).conjugate

    def test_horizontal(self):
        h2 = HeisenbergTranslation(1, [2], 2)
        v = conjugacy_decide(UNIT, h2)
        assert v.conjugate
        r = v.conjugator
        assert norm(r.m @ UNIT.matrix().m @ r.inverse().m - h2.matrix().m) <= 1e-8 * norm(h2.matrix().m)

    def test_vertical_vs_horizontal(self):
        assert not conjugacy_decide(VERTICAL, UNIT).conjugate

    def test_different_eigenvalue(self):
        assert not conjugacy_decide(VERTICAL, HeisenbergTranslation(-1, [0], 1j)).conjugate

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(2, 7))
    def test_non_vertical_pairs_are_conjugate(self, seed, n):
        rng = np.random.default_rng(seed)
        lam = random_phase(rng)
        h1 = random_translation(rng, n, lam=lam)
        h2 = random_translation(rng, n, lam=lam)
        v = conjugacy_decide(h1, h2)
        assert v.conjugate and v.residual <= 1e-8 * norm(h2.matrix().m)

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(1, 6))
    def test_vertical_dichotomy(self, seed, n):
        rng = np.random.default_rng(seed)
        lam = random_phase(rng)
        h1 = random_translation(rng, n, vertical=True, lam=lam)
        h2 = random_translation(rng, n, vertical=True, lam=lam)
        assert conjugacy_decide(h1, h2).conjugate == (h1.s.imag * h2.s.imag > 0)


class TestKDecompose:
    def test_vertical(self):
        k = k_decompose(VERTICAL)
        assert len(k.k_basis) == 2 and k.minpoly_degree == 2

    def test_horizontal(self):
        k = k_decompose(UNIT)
        assert len(k.k_basis) == 3 and k.minpoly_degree == 3

    def test_kernel_is_the_e_axis(self):
        for h in (VERTICAL, UNIT):
            kernel = k_decompose(h).kernel
            assert kernel.shape[1] == 1
            v = kernel[:, 0] / kernel[0, 0]
            assert norm(v - np.eye(3)[0]) <= 1e-12

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(2, 7), st.booleans())
    def test_degree_three_iff_horizontal_part(self, seed, n, vertical):
        h = random_translation(np.random.default_rng(seed), n, vertical=vertical)
        k = k_decompose(h)
        assert (k.minpoly_degree == 3) == (not h.is_vertical)
        assert np.linalg.matrix_rank(k.kernel, tol=1e-9) == 1
        assert k.dagger_residual <= 1e-9
        assert len(k.k_basis) + len(k.k_dagger_basis) == n + 1


class TestIsotropic:
    def test_orthogonal(self):
        h1 = HeisenbergTranslation.horizontal(1, [1, 0])
        h2 = HeisenbergTranslation.horizontal(1, [0, 1])
        assert isotropic(h1, h2)
        assert commutator(h1.matrix(), h2.matrix()) <= 1e-12

    def test_imaginary_product(self):
        h1 = HeisenbergTranslation.horizontal(1, [1, 0])
        h2 = HeisenbergTranslation.horizontal(1, [1j, 0])
        assert not isotropic(h1, h2)
        assert commutator(h1.matrix(), h2.matrix()) > 1

    def test_real_multiple(self):
        h1 = HeisenbergTranslation.horizontal(1, [1, 0])
        h2 = HeisenbergTranslation.horizontal(1, [2, 0])
        assert isotropic(h1, h2)

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(2, 6), st.booleans())
    def test_isotropic_iff_commute(self, seed, n, force_real):
        rng = np.random.default_rng(seed)
        h1 = random_translation(rng, n)
        if force_real:
            h2 = HeisenbergTranslation.horizontal(random_phase(rng), rng.normal() * h1.a_prime, rng.normal())
        else:
            h2 = random_translation(rng, n)
        comm = commutator(h1.matrix(), h2.matrix()) <= 1e-9 * norm(h1.matrix().m) * norm(h2.matrix().m)
        assert isotropic(h1, h2) == comm

