import numpy as np
import pytest
from hypothesis import given, seed, strategies as st

from canrel.linalg import (
    Subspace,
    check_symplectic,
    darboux_basis,
    direct_sum,
    embed_planes,
    intersect,
    null_space,
    omega_complement,
    orthogonal_complement,
    orthonormalize,
    principal_sines,
    projector_distance,
    random_symplectic,
    rotation,
    standard_j,
    subspace_sum,
    symplectic_inverse,
    unitary_to_symplectic,
)

ORTHO_TOL = 1e-12
DIST_TOL = 1e-12

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 3)


def test_standard_j_is_antisymmetric_and_squares_to_minus_one():
    for n in (1, 2, 3):
        j = standard_j(n)
        assert np.array_equal(j.T, -j)
        assert np.array_equal(j @ j, -np.eye(2 * n))


def test_orthonormalize_drops_dependent_columns():
    a = np.array([[1.0, 2.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    s = orthonormalize(a)
    assert s.rank == 2
    assert np.allclose(s.basis.T @ s.basis, np.eye(2), atol=ORTHO_TOL)


def test_zero_columns_give_zero_subspace():
    assert orthonormalize(np.zeros((4, 2))).rank == 0
    assert orthonormalize(np.zeros((4, 0))).rank == 0


@pytest.mark.parametrize("t", [0.0, 1e-9, 1e-3, 0.4, 1.2, np.pi / 2])
def test_principal_sine_of_tilted_line(t):
    # closed form: the angle between e1 and cos(t) e1 + sin(t) e2 is t
    s1 = orthonormalize(np.array([[1.0], [0.0], [0.0]]))
    s2 = orthonormalize(np.array([[np.cos(t)], [np.sin(t)], [0.0]]))
    assert np.isclose(principal_sines(s1, s2)[0], np.sin(t), rtol=1e-10, atol=1e-15)
    assert np.isclose(projector_distance(s1, s2), np.sin(t), rtol=1e-10, atol=1e-15)


def test_projector_distance_rank_mismatch_is_one():
    assert projector_distance(Subspace.zero(3), orthonormalize(np.eye(3)[:, :1])) == 1.0


def test_ambient_mismatch_raises():
    with pytest.raises(ValueError):
        projector_distance(Subspace.zero(3), Subspace.zero(4))


def test_null_space_of_rank_deficient_matrix():
    a = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
    z = null_space(a)
    assert z.shape == (3, 2)
    assert np.allclose(a @ z, 0, atol=1e-14)


@seed(1)
@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_grassmann_formula(sd, p, q):
    rng = np.random.default_rng(sd)
    d = 6
    shared = rng.standard_normal((d, min(p, q, 2) - 1)) if min(p, q) > 1 else np.zeros((d, 0))
    s1 = orthonormalize(np.hstack([shared, rng.standard_normal((d, p - shared.shape[1]))]))
    s2 = orthonormalize(np.hstack([shared, rng.standard_normal((d, q - shared.shape[1]))]))
    total = subspace_sum(s1, s2).rank + intersect(s1, s2, 1e-8).rank
    assert total == s1.rank + s2.rank


@seed(2)
@given(seeds, st.integers(0, 6))
def test_orthogonal_complement_is_complementary(sd, r):
    rng = np.random.default_rng(sd)
    s = orthonormalize(rng.standard_normal((6, r)))
    c = orthogonal_complement(s)
    assert c.rank == 6 - s.rank
    assert np.allclose(s.basis.T @ c.basis, 0, atol=ORTHO_TOL)


@seed(3)
@given(seeds, dims)
def test_random_symplectic_preserves_form(sd, n):
    m = random_symplectic(n, sd)
    assert check_symplectic(m) < 1e-12 * max(1, np.linalg.norm(m) ** 2)
    assert np.allclose(symplectic_inverse(m) @ m, np.eye(2 * n), atol=1e-10)


@seed(4)
@given(seeds, dims)
def test_lagrangian_is_its_own_omega_complement(sd, n):
    m = random_symplectic(n, sd)
    lag = orthonormalize(m[:, :n])
    assert projector_distance(omega_complement(lag, standard_j(n)), lag) < 1e-10


@seed(5)
@given(seeds, st.integers(0, 4))
def test_double_omega_complement(sd, r):
    rng = np.random.default_rng(sd)
    j = standard_j(2)
    s = orthonormalize(rng.standard_normal((4, r)))
    assert projector_distance(omega_complement(omega_complement(s, j), j), s) < 1e-10


def test_direct_sum_and_embedding_agree():
    a, b = rotation(0.3), rotation(-1.1)
    assert np.allclose(direct_sum(a, b), embed_planes({0: a, 1: b}, 2))
    assert check_symplectic(direct_sum(a, b)) < 1e-15


def test_unitary_realification_is_symplectic(rng):
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    assert check_symplectic(unitary_to_symplectic(q)) < 1e-12


def test_darboux_basis_on_coordinate_planes_is_standard():
    eye = np.eye(6)
    s = orthonormalize(eye[:, [2, 5]])
    b = darboux_basis(s)
    assert np.allclose(b, eye[:, [2, 5]])


@seed(6)
@given(seeds)
def test_darboux_basis_is_symplectic(sd):
    m = random_symplectic(3, sd, 1.0)
    s = orthonormalize(m[:, [0, 1, 3, 4]])
    b = darboux_basis(s)
    assert np.allclose(b.T @ standard_j(3) @ b, standard_j(2), atol=1e-9)
    assert projector_distance(orthonormalize(b), s) < 1e-9


def test_darboux_basis_rejects_isotropic_subspace():
    with pytest.raises(ValueError):
        darboux_basis(orthonormalize(np.eye(4)[:, [0, 1]]))
