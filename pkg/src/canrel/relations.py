"""Linear canonical relations: Lagrangian subspaces of ``V x V-bar``.

A relation is stored as an orthonormal ``4n x 2n`` basis ``[X; Y]`` whose top
block ``X`` holds source coordinates and bottom block ``Y`` target coordinates.
Everything here treats relations as immutable values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    ConstraintViolation,
    DegenerateResult,
    ExceptionalInput,
    IllConditioned,
    NotLagrangian,
    NotSymplectic,
)
from .linalg import (
    RANK_TOL,
    Subspace,
    SymplecticSpace,
    TwistedSpace,
    check_symplectic,
    darboux_basis,
    intersect,
    null_space,
    omega_complement,
    orthogonal_complement,
    orthonormalize,
    principal_sines,
    projector_distance,
    standard_j,
    subspace_sum,
    symplectic_inverse,
)

LAGRANGIAN_TOL = 1e-8
SYMPLECTIC_TOL = 1e-7

# callables notified of every relation handed out by this module
# (see canrel.hygiene); empty unless a monitor is active
observers: list = []


def announce(rel: "LinearRelation") -> "LinearRelation":
    for fn in observers:
        fn(rel)
    return rel


@dataclass(frozen=True)
class DistinguishedSubspaces:
    kernel: Subspace
    halo: Subspace
    domain: Subspace
    range: Subspace


@dataclass(frozen=True)
class PairInvariants:
    """Complete invariants ``(kappa, r, k, n)`` of the isotropic pair ``(ker L, halo L)``."""

    kappa: int
    r: int
    k: int
    n: int

    def admissible(self) -> bool:
        return 0 <= self.r <= self.kappa <= self.k <= self.n and 0 <= self.kappa - self.r <= self.n - self.k

    def as_dict(self) -> dict:
        return {"kappa": self.kappa, "r": self.r, "k": self.k, "n": self.n}


@dataclass(frozen=True, eq=False)
class LinearRelation:
    """A Lagrangian subspace of ``(V x V-bar, omega~)``.

    Use :meth:`from_columns` to build one from an arbitrary spanning set; it
    orthonormalizes and checks the rank and the isotropy residual.
    """

    space: TwistedSpace
    subspace: Subspace
    tol: float = field(default=RANK_TOL, compare=False)

    @classmethod
    def from_columns(cls, columns, n: int | None = None, tol: float = RANK_TOL,
                     check: bool = True) -> "LinearRelation":
        cols = np.asarray(columns, dtype=float)
        if n is None:
            n = cols.shape[0] // 4
        space = TwistedSpace(SymplecticSpace(n))
        if cols.shape[0] != space.dim:
            raise ValueError(f"expected {space.dim} rows, got {cols.shape[0]}")
        sub = orthonormalize(cols, tol=tol)
        rel = cls(space, sub, tol)
        if check:
            rel.validate()
            announce(rel)
        return rel

    def validate(self):
        n = self.space.n
        if self.subspace.rank != 2 * n:
            raise NotLagrangian(f"rank {self.subspace.rank} != 2n = {2 * n}")
        res = self.lagrangian_residual
        if res >= LAGRANGIAN_TOL:
            raise NotLagrangian(f"isotropy residual {res:.3e} exceeds {LAGRANGIAN_TOL:g}")

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def basis(self) -> np.ndarray:
        return self.subspace.basis

    @property
    def source_block(self) -> np.ndarray:
        return self.basis[: 2 * self.n]

    @property
    def target_block(self) -> np.ndarray:
        return self.basis[2 * self.n:]

    @property
    def lagrangian_residual(self) -> float:
        b = self.basis
        return float(np.linalg.norm(b.T @ self.space.form @ b))

    @cached_property
    def distinguished(self) -> DistinguishedSubspaces:
        # cached_property on a frozen dataclass writes to __dict__ directly;
        # the computation is pure so a racing double-initialization is harmless
        return distinguished(self)

    @cached_property
    def invariants(self) -> PairInvariants:
        return invariants(self)

    def distance(self, other: "LinearRelation") -> float:
        return projector_distance(self.subspace, other.subspace)

    def __repr__(self):
        return f"LinearRelation(n={self.n})"


def _space(n: int) -> SymplecticSpace:
    return SymplecticSpace(n)


def from_graph(a: np.ndarray, space: SymplecticSpace | None = None,
               tol: float = SYMPLECTIC_TOL) -> LinearRelation:
    """``Gr(A) = {(v, Av)}``."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0] // 2 if space is None else space.n
    res = check_symplectic(a)
    scale = max(1.0, np.linalg.norm(a) ** 2)
    if res >= tol * scale:
        raise NotSymplectic(f"symplectic residual {res:.3e} exceeds tolerance")
    return LinearRelation.from_columns(np.vstack([np.eye(2 * n), a]), n)


def identity_relation(space: SymplecticSpace | int) -> LinearRelation:
    """The diagonal ``Delta_V``."""
    n = space if isinstance(space, int) else space.n
    return from_graph(np.eye(2 * n))


def product_relation(l1: Subspace, l2: Subspace) -> LinearRelation:
    """``L1 x {0} ⊕ {0} x L2`` for Lagrangian ``L1, L2 <= V``."""
    d = l1.ambient_dim
    n = d // 2
    top = np.hstack([l1.basis, np.zeros((d, l2.rank))])
    bot = np.hstack([np.zeros((d, l1.rank)), l2.basis])
    return LinearRelation.from_columns(np.vstack([top, bot]), n)


def act(m: np.ndarray, nmat: np.ndarray, rel: LinearRelation) -> LinearRelation:
    """``(M x N) . L = {(Mx, Ny) : (x, y) in L}``."""
    x, y = rel.source_block, rel.target_block
    return LinearRelation.from_columns(np.vstack([m @ x, nmat @ y]), rel.n, tol=rel.tol)


def distinguished(rel: LinearRelation) -> DistinguishedSubspaces:
    """Kernel, halo, domain and range of a relation.

    ``kernel = X null(Y)``, ``halo = Y null(X)``, ``domain = col X``,
    ``range = col Y``.
    """
    x, y, tol = rel.source_block, rel.target_block, rel.tol
    d = 2 * rel.n
    ny = null_space(y, tol)
    nx = null_space(x, tol)
    kernel = orthonormalize(x @ ny, 0.5) if ny.size else Subspace.zero(d)
    halo = orthonormalize(y @ nx, 0.5) if nx.size else Subspace.zero(d)
    domain = orthonormalize(x, tol)
    rng = orthonormalize(y, tol)
    return DistinguishedSubspaces(kernel, halo, domain, rng)


def invariants(rel: LinearRelation, strict: bool = True) -> PairInvariants:
    """``(kappa, r, k, n) = (dim(dom ∩ halo), dim(ker ∩ halo), dim ker, n)``."""
    ds = rel.distinguished
    kappa = intersect(ds.domain, ds.halo, _intersection_tol(rel)).rank
    r = intersect(ds.kernel, ds.halo, _intersection_tol(rel)).rank
    inv = PairInvariants(kappa, r, ds.kernel.rank, rel.n)
    if strict and (not inv.admissible() or ds.kernel.rank != ds.halo.rank):
        raise ConstraintViolation(
            f"invariants {inv.as_dict()} (dim halo {ds.halo.rank}) are inadmissible"
        )
    return inv


def _intersection_tol(rel: LinearRelation) -> float:
    # principal sines of computed subspaces carry the accumulated basis error
    return max(1e2 * rel.tol, 1e-7)


def exceptional_margin(rel: LinearRelation) -> float:
    """Smallest principal sine between ``dom L`` and ``halo L``; 1 for a trivial halo."""
    ds = rel.distinguished
    if ds.halo.rank == 0:
        return 1.0
    return float(principal_sines(ds.domain, ds.halo)[0])


def in_exceptional_set(rel: LinearRelation) -> tuple[bool, float]:
    """Membership in ``H = {kappa >= 1}`` and the conditioning margin (0 for members)."""
    member = rel.invariants.kappa >= 1
    return member, 0.0 if member else exceptional_margin(rel)


def compose(rel: LinearRelation, rel_p: LinearRelation, tol: float | None = None) -> LinearRelation:
    """Set-theoretic composition ``L ∘ L'`` with ``L'`` applied first.

    Pairs ``(x, z)`` with ``(x, y) in L'`` and ``(y, z) in L``; coefficient pairs
    come from the null space of ``[Y' | -X'']``.
    """
    if rel.n != rel_p.n:
        raise ValueError("relations live over different spaces")
    tol = rel.tol if tol is None else tol
    n = rel.n
    x1, y1 = rel_p.source_block, rel_p.target_block
    x2, y2 = rel.source_block, rel.target_block
    k = null_space(np.hstack([y1, -x2]), tol)
    c1, c2 = k[: 2 * n], k[2 * n:]
    cols = np.vstack([x1 @ c1, y2 @ c2])
    out = LinearRelation.from_columns(cols, n, tol=tol, check=False)
    if out.subspace.rank != 2 * n:
        raise DegenerateResult(f"composition has numerical rank {out.subspace.rank}, expected {2 * n}")
    if out.lagrangian_residual >= LAGRANGIAN_TOL:
        # the inputs are nearly non-transversal and the null space lost accuracy
        raise DegenerateResult(f"composition lost isotropy (residual {out.lagrangian_residual:.2e})")
    return announce(out)


def reverse(rel: LinearRelation) -> LinearRelation:
    """``L^r = {(w, v) : (v, w) in L}``."""
    return LinearRelation.from_columns(
        np.vstack([rel.target_block, rel.source_block]), rel.n, tol=rel.tol
    )


def power(rel: LinearRelation, i: int) -> LinearRelation:
    """``L^i``; ``L^0 = Delta_V`` and ``L^{-i} = (L^r)^i``.

    For ``|i| >= 2`` the relation must lie outside ``H``.
    """
    if i == 0:
        out = identity_relation(rel.n)
        return announce(LinearRelation(out.space, out.subspace, rel.tol))
    if abs(i) >= 2 and rel.invariants.kappa >= 1:
        raise ExceptionalInput(f"power {i} requested for a relation in H (kappa={rel.invariants.kappa})")
    base = rel if i > 0 else reverse(rel)
    out = base
    # binary powering keeps the number of compositions logarithmic
    acc = None
    m = abs(i)
    while m:
        if m & 1:
            acc = out if acc is None else compose(out, acc)
        m >>= 1
        if m:
            out = compose(out, out)
    return acc


@dataclass(frozen=True)
class RelationDecomposition:
    """``L = ker × {0} ⊕ {0} × halo ⊕ Gr(phi)`` over ``V = V_s ⊕ V_g``.

    ``phi`` is expressed in the Darboux basis ``vg_basis`` (columns
    ``e_1..e_m, f_1..f_m`` of ``V_g``).
    """

    kernel: Subspace
    halo: Subspace
    v_s: Subspace
    v_g: Subspace
    vg_basis: np.ndarray = field(repr=False)
    phi: np.ndarray
    graph_unique: bool = True

    def reconstruct(self) -> LinearRelation:
        d = self.kernel.ambient_dim
        n = d // 2
        blocks = [
            np.vstack([self.kernel.basis, np.zeros((d, self.kernel.rank))]),
            np.vstack([np.zeros((d, self.halo.rank)), self.halo.basis]),
            np.vstack([self.vg_basis, self.vg_basis @ self.phi]),
        ]
        return LinearRelation.from_columns(np.hstack(blocks), n)


def _graph_part(rel: LinearRelation, vg: Subspace, wb: np.ndarray, halo: Subspace,
                cond_limit: float = 1e8) -> np.ndarray:
    """Matrix of the map ``v -> w (mod halo)`` on ``V_g`` in the Darboux basis ``wb``."""
    x, y = rel.source_block, rel.target_block
    c, *_ = np.linalg.lstsq(x, wb, rcond=rel.tol)
    resid = np.linalg.norm(x @ c - wb)
    if resid > 1e-6 * max(1.0, np.linalg.norm(wb)):
        raise DegenerateResult(f"graph subspace is not inside the domain (residual {resid:.2e})")
    w = y @ c
    split = np.hstack([halo.basis, wb])
    cond = np.linalg.cond(split) if split.size else 1.0
    if cond > cond_limit:
        raise IllConditioned(f"halo / V_g splitting has condition number {cond:.2e}")
    coef, *_ = np.linalg.lstsq(split, w, rcond=None)
    return coef[halo.rank:]


def decompose(rel: LinearRelation) -> RelationDecomposition:
    """Unique singular ⊕ graph splitting of a relation outside ``H``."""
    inv = rel.invariants
    if inv.kappa >= 1:
        raise ExceptionalInput(f"relation lies in H (kappa={inv.kappa}); use extended_graph_part")
    ds = rel.distinguished
    tol = _intersection_tol(rel)
    v_s = subspace_sum(ds.kernel, ds.halo, tol=tol) if ds.kernel.rank else Subspace.zero(2 * rel.n)
    v_g = intersect(ds.domain, ds.range, tol) if inv.k else ds.domain
    if v_g.rank != 2 * (inv.n - inv.k):
        raise DegenerateResult(f"dim(dom ∩ ran) = {v_g.rank}, expected {2 * (inv.n - inv.k)}")
    wb = darboux_basis(v_g)
    phi = _graph_part(rel, v_g, wb, ds.halo)
    return RelationDecomposition(ds.kernel, ds.halo, v_s, v_g, wb, phi, True)


def extended_graph_part(rel: LinearRelation) -> RelationDecomposition | None:
    """Graph part of a relation in ``H`` when the reduced space is large enough.

    With ``L1 = dom``, ``L2 = ran`` and ``R = (L1^ω + L2^ω) ∩ (L1 ∩ L2)``, a graph
    part exists when ``dim R <= r``.  ``V_g`` is taken to be the Euclidean
    orthogonal complement of ``R`` inside ``L1 ∩ L2``; another complement gives
    a conjugate ``phi`` but not the same matrix.  Returns ``None`` when the
    condition fails or the chosen complement is not symplectic.
    """
    inv = rel.invariants
    if inv.kappa == 0:
        return decompose(rel)
    ds = rel.distinguished
    tol = _intersection_tol(rel)
    both = intersect(ds.domain, ds.range, tol)
    red = intersect(subspace_sum(ds.kernel, ds.halo, tol=tol), both, tol)
    if red.rank > inv.r:
        return None
    v_g = orthogonal_complement(red, within=both)
    if v_g.rank != 2 * (inv.n - inv.k):
        return None
    try:
        wb = darboux_basis(v_g)
    except ValueError:
        return None
    if v_g.rank and intersect(v_g, ds.halo, tol).rank:
        return None
    try:
        phi = _graph_part(rel, v_g, wb, ds.halo)
    except (DegenerateResult, IllConditioned):
        return None
    v_s = subspace_sum(ds.kernel, ds.halo, tol=tol)
    return RelationDecomposition(ds.kernel, ds.halo, v_s, v_g, wb, phi, False)


def reduced_condition_dim(rel: LinearRelation) -> int:
    """``dim((L1^ω + L2^ω) ∩ (L1 ∩ L2))`` for ``L1 = dom L``, ``L2 = ran L``."""
    ds = rel.distinguished
    tol = _intersection_tol(rel)
    both = intersect(ds.domain, ds.range, tol)
    return intersect(subspace_sum(ds.kernel, ds.halo, tol=tol), both, tol).rank


def duality_residual(rel: LinearRelation) -> float:
    """``max(d(dom, ker^ω), d(ran, halo^ω))``; zero for a genuine Lagrangian relation."""
    ds = rel.distinguished
    j = standard_j(rel.n)
    return max(
        projector_distance(ds.domain, omega_complement(ds.kernel, j)),
        projector_distance(ds.range, omega_complement(ds.halo, j)),
    )


def graph_matrix(rel: LinearRelation) -> np.ndarray:
    """The symplectic ``A`` with ``rel = Gr(A)``; requires an invertible source block."""
    x, y = rel.source_block, rel.target_block
    if np.linalg.cond(x) > 1e12:
        raise DegenerateResult("relation is not a graph (singular source block)")
    return np.linalg.solve(x.T, y.T).T


__all__ = [
    "DistinguishedSubspaces",
    "LinearRelation",
    "PairInvariants",
    "RelationDecomposition",
    "act",
    "compose",
    "decompose",
    "distinguished",
    "duality_residual",
    "exceptional_margin",
    "extended_graph_part",
    "from_graph",
    "graph_matrix",
    "identity_relation",
    "in_exceptional_set",
    "invariants",
    "power",
    "product_relation",
    "reduced_condition_dim",
    "reverse",
    "symplectic_inverse",
]
