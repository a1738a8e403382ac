import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxhyp.ball import BallForm, form_A
from cxhyp.errors import DimensionMismatch, Singular
from cxhyp.linalg import adjoint, eig, eigvals, gram, multiset_distance, norm, solve, spectral_groups
from cxhyp.tolerances import tol

from conftest import SQRT2

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, max_dim=8, square=True):
    rows = draw(st.integers(1, max_dim))
    cols = rows if square else draw(st.integers(1, max_dim))
    re = draw(st.lists(finite, min_size=rows * cols, max_size=rows * cols))
    im = draw(st.lists(finite, min_size=rows * cols, max_size=rows * cols))
    return (np.array(re) + 1j * np.array(im)).reshape(rows, cols)


def random_matrix(seed: int, n: int) -> np.ndarray:
    r = np.random.default_rng(seed)
    return r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))


class TestAdjoint:
    def test_identity(self):
        assert np.array_equal(adjoint(np.eye(3)), np.eye(3))

    def test_real_nilpotent(self):
        assert np.array_equal(adjoint([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]]))

    def test_one_by_one(self):
        assert adjoint([[1j]])[0, 0] == -1j

    @given(complex_matrices(square=False))
    def test_involution_is_exact(self, m):
        assert np.array_equal(adjoint(adjoint(m)), m)


class TestEig:
    def test_diagonal(self):
        res = eig(np.diag([2, 0.5, 1]))
        assert np.allclose(res.eigenvalues, [2, 1, 0.5])

    def test_sqrt2_block_against_lapack(self):
        m = np.array([[SQRT2, 0, 1], [0, 1, 0], [1, 0, SQRT2]])
        ours = eig(m).eigenvalues
        assert multiset_distance(ours, np.linalg.eigvals(m)) < 1e-13
        assert multiset_distance(ours, [SQRT2 + 1, SQRT2 - 1, 1]) < 1e-13

    def test_rotation_orders_ties_by_imaginary_part(self):
        res = eig(np.array([[0, 1], [-1, 0]]))
        assert np.allclose(res.eigenvalues, [1j, -1j])

    def test_ordering_by_descending_modulus(self):
        vals = eigvals(random_matrix(3, 6))
        mods = np.abs(vals)
        assert np.all(np.diff(mods) <= 1e-12)

    def test_eigenvectors_are_unit(self):
        res = eig(random_matrix(4, 5))
        for v in res.eigenvectors:
            assert abs(np.linalg.norm(v) - 1) < 1e-12

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_residuals_within_eig_tol(self, seed, n):
        m = random_matrix(seed, n)
        res = eig(m)
        assert len(res.eigenvalues) == n
        assert max(res.residuals) <= tol().eig_tol * norm(m)
        assert multiset_distance(res.eigenvalues, np.linalg.eigvals(m)) < 1e-9 * norm(m)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_hermitian_spectrum_is_real(self, seed, n):
        m = random_matrix(seed, n)
        h = m + adjoint(m)
        assert np.max(np.abs(eigvals(h).imag)) <= tol().eig_tol * norm(h)

    def test_dimension_cap(self, monkeypatch):
        monkeypatch.setenv("CXHYP_MAX_DIM", "3")
        with pytest.raises(DimensionMismatch):
            eig(np.eye(5))

    def test_jordan_block_is_one_cluster(self):
        j = np.eye(3) + np.diag([1, 1], 1)
        res = eig(j)
        assert res.clusters == [[0, 1, 2]] or len(res.clusters[0]) == 3
        groups = spectral_groups(j)
        assert len(groups) == 1
        assert groups[0].multiplicity == 3 and groups[0].geometric == 1
        assert abs(groups[0].value - 1) < 1e-12

    def test_repeated_semisimple_eigenvalue(self):
        q, _ = np.linalg.qr(random_matrix(9, 4))
        m = q @ np.diag([2, 2, 1j, -1]) @ adjoint(q)
        groups = {round(g.value.real, 6) + 1j * round(g.value.imag, 6): g for g in spectral_groups(m)}
        assert groups[2].geometric == 2
        space = groups[2].eigenspace
        assert norm(m @ space - 2 * space) < 1e-10


class TestSolve:
    def test_identity(self):
        assert np.allclose(solve(np.eye(2), [3, 4j]), [3, 4j])

    def test_scaled_identity(self):
        assert np.allclose(solve([[2, 0], [0, 2]], [2, 2]), [1, 1])

    def test_sqrt2_system(self):
        x = solve([[SQRT2, 1], [1, SQRT2]], [SQRT2 + 1, SQRT2 + 1])
        assert np.allclose(x, [1, 1], atol=1e-14)

    def test_singular(self):
        with pytest.raises(Singular):
            solve([[1, 2], [2, 4]], [1, 1])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_recovers_x_for_well_conditioned(self, seed, n):
        r = np.random.default_rng(seed)
        q1, _ = np.linalg.qr(random_matrix(seed, n))
        q2, _ = np.linalg.qr(random_matrix(seed + 1, n))
        m = q1 @ np.diag(r.uniform(1, 2, size=n)) @ q2
        x = r.normal(size=n) + 1j * r.normal(size=n)
        assert norm(solve(m, m @ x) - x) <= tol().solve_tol * norm(x)


class TestGram:
    def test_time_like_axis(self):
        assert np.allclose(gram(form_A, [[0, 1]]), [[-1]])

    def test_space_like_axis(self):
        assert np.allclose(gram(form_A, [[1, 0]]), [[1]])

    def test_light_like_pair(self):
        g = gram(form_A, [[1, 0, 1], [-1, 0, 1]])
        assert np.allclose(g, [[0, -2], [-2, 0]])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            gram(form_A, [[1, 0], [1, 0, 0]])

    def test_form_method_agrees(self):
        r = np.random.default_rng(1)
        basis = r.normal(size=(4, 2)) + 1j * r.normal(size=(4, 2))
        via_callable = gram(BallForm(3), [basis[:, 0], basis[:, 1]])
        assert np.allclose(via_callable, BallForm(3).gram(basis))
        g = BallForm(3).coefficient_matrix(basis)
        x, y = r.normal(size=2), r.normal(size=2)
        assert np.isclose(np.conj(y) @ g @ x, form_A(basis @ x, basis @ y))


def test_multiset_distance():
    assert multiset_distance([1, 2j], [2j, 1]) == 0
    assert multiset_distance([1], [1, 2]) == float("inf")
    assert np.isclose(multiset_distance([0, 1], [1.5, 0]), 0.5)
