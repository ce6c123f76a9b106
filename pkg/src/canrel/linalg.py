"""Dense linear algebra on small symplectic spaces.

Subspaces are carried as orthonormal column bases obtained from an SVD, so
that two constructions of the same subspace compare equal through their
orthogonal projectors regardless of the spanning set they started from.

Coordinates follow the Darboux convention ``(e_1..e_n, f_1..f_n)`` with
``omega(u, v) = u^T J v`` and ``J = [[0, I], [-I, 0]]``.  The twisted form on
``V x V-bar`` is ``diag(J, -J)`` with the source coordinates first.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

RANK_TOL = 1e-9


def standard_j(n: int) -> np.ndarray:
    """The 2n x 2n matrix of the standard symplectic form."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class SymplecticSpace:
    """``(R^{2n}, omega)`` in Darboux coordinates."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"half-dimension must be positive, got {self.n}")

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def form(self) -> np.ndarray:
        return standard_j(self.n)

    def omega(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return u.T @ self.form @ v


@dataclass(frozen=True)
class TwistedSpace:
    """``V x V-bar`` carrying ``pi_1^* omega - pi_2^* omega``."""

    base: SymplecticSpace

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def dim(self) -> int:
        return 4 * self.base.n

    @property
    def form(self) -> np.ndarray:
        j = self.base.form
        z = np.zeros_like(j)
        return np.block([[j, z], [z, -j]])


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of ``R^d`` held as an orthonormal basis.

    Build through :func:`orthonormalize` rather than directly; the
    constructor does not re-orthonormalize.
    """

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise ValueError(
                f"basis shape {b.shape} does not match ambient dimension {self.ambient_dim}"
            )
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def contains(self, v: np.ndarray, tol: float = 1e-8) -> bool:
        v = np.asarray(v, dtype=float)
        scale = max(np.linalg.norm(v), 1.0)
        return bool(np.linalg.norm(v - self.projector @ v) <= tol * scale)

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, rank={self.rank})"

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim))


def orthonormalize(columns, tol: float = RANK_TOL) -> Subspace:
    """Span of the given columns as a :class:`Subspace`.

    Singular directions whose singular value falls below ``tol`` times the
    largest singular value (or ``tol`` itself when every column is zero) are
    discarded.
    """
    a = np.asarray(columns, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    d = a.shape[0]
    if a.shape[1] == 0:
        return Subspace.zero(d)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    cutoff = tol * (s[0] if s[0] > 0 else 1.0)
    r = int(np.sum(s > cutoff))
    return Subspace(d, _canonical_signs(u[:, :r]))


def _canonical_signs(q: np.ndarray) -> np.ndarray:
    # deterministic sign per column; the span is unaffected
    q = q.copy()
    for j in range(q.shape[1]):
        i = np.argmax(np.abs(q[:, j]))
        if q[i, j] < 0:
            q[:, j] = -q[:, j]
    return q


def null_space(a: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the null space of ``a`` with a relative cutoff."""
    a = np.asarray(a, dtype=float)
    m, k = a.shape
    if k == 0:
        return np.zeros((0, 0))
    if m == 0:
        return np.eye(k)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if s.size and s[0] > 0 else 1.0
    r = int(np.sum(s > tol * smax))
    return vt[r:].T.conj()


def _check_same_ambient(s1: Subspace, s2: Subspace):
    if s1.ambient_dim != s2.ambient_dim:
        raise ValueError(
            f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )


def principal_sines(s1: Subspace, s2: Subspace) -> np.ndarray:
    """Sines of the principal angles between ``s1`` and ``s2`` (ascending).

    Computed from the component of the smaller basis orthogonal to the larger
    subspace, which keeps small angles accurate.
    """
    _check_same_ambient(s1, s2)
    if s1.rank < s2.rank:
        s1, s2 = s2, s1
    if s2.rank == 0:
        return np.zeros(0)
    resid = s2.basis - s1.basis @ (s1.basis.T @ s2.basis)
    s = np.linalg.svd(resid, compute_uv=False)
    return np.sort(np.clip(s, 0.0, 1.0))


def intersect(s1: Subspace, s2: Subspace, tol: float = RANK_TOL) -> Subspace:
    """``s1 ∩ s2``: directions of the smaller subspace whose principal sine is below ``tol``."""
    _check_same_ambient(s1, s2)
    if s1.rank < s2.rank:
        s1, s2 = s2, s1
    if s2.rank == 0:
        return Subspace.zero(s1.ambient_dim)
    resid = s2.basis - s1.basis @ (s1.basis.T @ s2.basis)
    _, s, vt = np.linalg.svd(resid, full_matrices=True)
    s_full = np.zeros(s2.rank)
    s_full[: s.size] = s
    keep = s_full < tol
    if not np.any(keep):
        return Subspace.zero(s1.ambient_dim)
    vecs = s2.basis @ vt[keep].T
    # project onto s1 as well, so that the result sits symmetrically between both
    vecs = 0.5 * (vecs + s1.basis @ (s1.basis.T @ vecs))
    return orthonormalize(vecs, tol=0.5)


def subspace_sum(s1: Subspace, s2: Subspace, tol: float = RANK_TOL) -> Subspace:
    _check_same_ambient(s1, s2)
    return orthonormalize(np.hstack([s1.basis, s2.basis]), tol=tol)


def orthogonal_complement(s: Subspace, within: Subspace | None = None) -> Subspace:
    """Euclidean orthogonal complement of ``s``, optionally inside ``within``."""
    d = s.ambient_dim
    if within is None:
        within = Subspace.full(d)
    _check_same_ambient(s, within)
    resid = within.basis - s.basis @ (s.basis.T @ within.basis)
    target = within.rank - s.rank
    if target <= 0:
        return Subspace.zero(d)
    u, _, _ = np.linalg.svd(resid, full_matrices=False)
    return Subspace(d, _canonical_signs(u[:, :target]))


def omega_complement(s: Subspace, form: np.ndarray) -> Subspace:
    """``S^omega = {v : omega(v, s) = 0 for all s in S}``.

    ``form`` is the Gram matrix of a nondegenerate antisymmetric form (``J`` or
    the twisted ``diag(J, -J)``), or any object with a ``form`` attribute.
    """
    form = getattr(form, "form", form)
    if form.shape[0] != s.ambient_dim:
        raise ValueError("form and subspace dimensions differ")
    if s.rank == 0:
        return Subspace.full(s.ambient_dim)
    # omega(v, s) = v^T F s, so S^omega is the Euclidean complement of F S
    return orthogonal_complement(orthonormalize(form @ s.basis, tol=0.5))


def projector_distance(s1: Subspace, s2: Subspace) -> float:
    """Operator-norm distance ``||P1 - P2||_2`` between orthogonal projectors."""
    _check_same_ambient(s1, s2)
    if s1.rank != s2.rank:
        return 1.0
    if s1.rank == 0:
        return 0.0
    return float(np.linalg.norm(s1.projector - s2.projector, 2))


def check_symplectic(m: np.ndarray, space: SymplecticSpace | None = None) -> float:
    """Frobenius residual ``||M^T J M - J||_F``."""
    m = np.asarray(m, dtype=float)
    if m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError(f"expected a square even-dimensional matrix, got {m.shape}")
    n = m.shape[0] // 2 if space is None else space.n
    if m.shape[0] != 2 * n:
        raise ValueError("matrix does not match the symplectic space")
    j = standard_j(n)
    return float(np.linalg.norm(m.T @ j @ m - j))


def symplectic_inverse(m: np.ndarray) -> np.ndarray:
    """``M^{-1} = -J M^T J`` for symplectic ``M``."""
    j = standard_j(m.shape[0] // 2)
    return -j @ m.T @ j


def random_symmetric(dim: int, rng: np.random.Generator, scale: float = 2.0) -> np.ndarray:
    """Gaussian symmetric matrix rescaled to spectral norm at most ``scale``."""
    g = rng.standard_normal((dim, dim))
    s = 0.5 * (g + g.T)
    nrm = np.linalg.norm(s, 2)
    if nrm > scale:
        s *= scale / nrm
    return s


def random_symplectic(space: SymplecticSpace | int, seed=None, scale: float = 2.0) -> np.ndarray:
    """``exp(J S)`` for a random symmetric ``S`` with ``||S||_2 <= scale``.

    ``seed`` may be an integer or a ``numpy.random.Generator``.
    """
    n = space if isinstance(space, int) else space.n
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    s = random_symmetric(2 * n, rng, scale)
    return expm(standard_j(n) @ s)


def rotation(theta: float) -> np.ndarray:
    """The 2x2 rotation ``R(theta)``; as a map of ``(e, f)`` it is ``e^{i theta}`` on ``C``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def embed_planes(blocks: dict[int, np.ndarray], n: int) -> np.ndarray:
    """Symplectic matrix acting as ``blocks[j]`` (2x2, basis ``(e_j, f_j)``) and identity elsewhere."""
    m = np.eye(2 * n)
    for j, b in blocks.items():
        idx = [j, n + j]
        m[np.ix_(idx, idx)] = b
    return m


def direct_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Symplectic direct sum in Darboux layout ``(e_a, e_b, f_a, f_b)``."""
    na, nb = a.shape[0] // 2, b.shape[0] // 2
    n = na + nb
    out = np.zeros((2 * n, 2 * n), dtype=np.result_type(a, b))
    ia = list(range(na)) + list(range(n, n + na))
    ib = list(range(na, n)) + list(range(n + na, 2 * n))
    out[np.ix_(ia, ia)] = a
    out[np.ix_(ib, ib)] = b
    return out


def unitary_to_symplectic(u: np.ndarray) -> np.ndarray:
    """Real form ``[[X, -Y], [Y, X]]`` of ``U = X + iY``."""
    x, y = u.real, u.imag
    return np.block([[x, -y], [y, x]])


def darboux_basis(s: Subspace, form: np.ndarray | None = None, tol: float = 1e-10) -> np.ndarray:
    """Symplectic basis ``[e_1..e_m, f_1..f_m]`` of a symplectic subspace of ``R^{2n}``.

    Runs symplectic Gram-Schmidt over the orthogonal projections of the
    standard Darboux vectors, always taking the longest remaining candidate
    and pairing it with the candidate of largest ``|omega|``.  When ``s`` is
    spanned by coordinate planes the standard vectors come back unchanged.

    Raises ``ValueError`` if ``s`` is not symplectic.
    """
    d = s.ambient_dim
    j = standard_j(d // 2) if form is None else form
    if s.rank % 2:
        raise ValueError("odd-dimensional subspace cannot be symplectic")
    m = s.rank // 2
    if m == 0:
        return np.zeros((d, 0))
    n = d // 2
    order = [i for pair in zip(range(n), range(n, 2 * n)) for i in pair]
    cands = (s.projector @ np.eye(d))[:, order]
    es, fs = [], []
    for _ in range(m):
        norms = np.linalg.norm(cands, axis=0)
        iu = int(np.argmax(np.round(norms, 12)))
        u = cands[:, iu] / norms[iu]
        w = u @ j @ cands
        iv = int(np.argmax(np.round(np.abs(w), 12)))
        if abs(w[iv]) < tol:
            raise ValueError("subspace is not symplectic (degenerate restricted form)")
        e = u
        f = cands[:, iv] / (e @ j @ cands[:, iv])
        es.append(e)
        fs.append(f)
        # omega-project the remaining candidates off span(e, f)
        cands = cands + np.outer(e, f @ j @ cands) - np.outer(f, e @ j @ cands)
        cands[:, [iu, iv]] = 0.0
        cands[np.abs(cands) < 1e-15] = 0.0
    return np.column_stack(es + fs)
