"""Eigenvalue classification of symplectic matrices and the circle maps rho, rho^2, rho-hat.

Conventions
-----------
With ``omega(u, v) = u^T J v`` the Krein form on a complex eigenspace is the
Hermitian matrix ``K_ab = -i omega(z_a, conj(z_b))``.  For the rotation
``R(theta)`` the eigenvalue ``e^{i theta}`` is Krein-positive, so ``rho``
restricted to ``U(n)`` is the complex determinant of ``X + iY``.

``rho(A) = (-1)^{m^-/2} prod lambda^{m^+(lambda)}`` over all elliptic
eigenvalues, i.e. the Krein-positive member of each conjugate pair.  ``rho^2``
is evaluated independently as ``prod lambda^{sig(lambda)}`` over every
eigenvalue cluster in both half-planes, ``sig`` being the Krein signature.
Off the unit circle the Krein form vanishes, so near-circle quadruples and
eigenvalues misplaced by rounding contribute trivially instead of needing a
hard threshold.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ExceptionalInput, NonSemisimpleElliptic, NotSymplectic
from .linalg import Subspace, check_symplectic, orthonormalize, standard_j
from .relations import LinearRelation, decompose, exceptional_margin

ELLIPTIC_TOL = 1e-8       # ||lambda| - 1| below this labels a cluster elliptic
REAL_TOL = 1e-8           # |Im lambda| <= REAL_TOL (1 + |lambda|) labels it real
CLUSTER_TOL = 1e-6        # eigenvalues closer than this form one cluster
KREIN_TOL = 1e-8          # generalized Krein eigenvalues below this count as null
SEMISIMPLE_TOL = 1e-6     # reciprocal condition of a cluster's eigenvector basis
MARGIN_WARN = 1e-6


class ConditioningWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SpectralEntry:
    """One symplectic eigenvalue group ``{lambda, 1/lambda, conj, 1/conj}``.

    ``lam`` is the representative in the closed upper half unit disc.
    """

    lam: complex
    kind: str
    algebraic_multiplicity: int
    m_plus: int = 0
    m_minus_krein: int = 0
    real_eigenspace: Subspace | None = field(default=None, repr=False)


@dataclass(frozen=True)
class SpectralClassification:
    entries: list[SpectralEntry]
    m_minus: int
    eigenvalues: np.ndarray = field(repr=False)
    # (unit representative, positive count, negative count) per cluster, both half-planes
    krein_clusters: list[tuple[complex, int, int]] = field(repr=False, default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def elliptic(self) -> list[SpectralEntry]:
        return [e for e in self.entries if e.kind == "elliptic"]

    @property
    def elliptic_count(self) -> int:
        """Number of Krein-definite eigenvalues (with multiplicity) on ``S^1 \\ {±1}``."""
        return sum(p + q for _, p, q in self.krein_clusters)


def _representative(lam: np.ndarray) -> np.ndarray:
    rep = np.where(np.abs(lam) > 1, 1 / lam, lam)
    return np.where(rep.imag < 0, rep.conj(), rep)


def _clusters(values: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage clusters of complex values at relative distance ``tol``."""
    order = np.argsort(values.real + 1e-3 * values.imag, kind="stable")
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(len(values)):
        for b in range(a + 1, len(values)):
            i, j = order[a], order[b]
            if abs(values[i] - values[j]) <= tol * (1 + abs(values[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in order:
        groups.setdefault(find(i), []).append(int(i))
    return list(groups.values())


def krein_inertia(z: np.ndarray, j: np.ndarray, tol: float = KREIN_TOL) -> tuple[int, int, int]:
    """(positive, negative, null) counts of the Krein form on ``span(z)``.

    Generalized eigenvalues of ``K = -i Z^T J conj(Z)`` relative to the Gram
    matrix ``Z^H Z``, so the counts do not depend on how ``z`` is scaled.
    """
    k = -1j * (z.T @ j @ z.conj())
    k = 0.5 * (k + k.conj().T)
    g = z.conj().T @ z
    g = 0.5 * (g + g.conj().T)
    mu = scipy.linalg.eigh(k, g, eigvals_only=True)
    return int(np.sum(mu > tol)), int(np.sum(mu < -tol)), int(np.sum(np.abs(mu) <= tol))


def _real_span(vecs: np.ndarray) -> Subspace:
    return orthonormalize(np.hstack([vecs.real, vecs.imag]), tol=1e-6)


def _symplectic_residual(a: np.ndarray, form: np.ndarray | None = None) -> float:
    if form is None:
        res = check_symplectic(a)
    else:
        res = float(np.linalg.norm(a.T @ form @ a - form))
    return res / max(1.0, np.linalg.norm(a) ** 2)


def classify_spectrum(a: np.ndarray, check: bool = True, eigenspaces: bool = True,
                      form: np.ndarray | None = None) -> SpectralClassification:
    """Group the spectrum of a symplectic matrix and attach Krein data.

    Parameters
    ----------
    a : ndarray
        Square matrix preserving ``form``.
    check : bool
        Verify the symplectic residual first.
    eigenspaces : bool
        Also group eigenvalues into quadruples with real invariant subspaces.
    form : ndarray, optional
        Nondegenerate antisymmetric form; the standard ``J`` by default.

    Raises
    ------
    NotSymplectic
        If the relative residual ``||A^T J A - J|| / ||A||^2`` exceeds 1e-7.
    NonSemisimpleElliptic
        If an elliptic cluster's eigenvectors are numerically dependent.
    """
    a = np.asarray(a, dtype=float)
    dim = a.shape[0]
    if dim == 0:
        return SpectralClassification([], 0, np.zeros(0, dtype=complex))
    if check and _symplectic_residual(a, form) > 1e-7:
        raise NotSymplectic(f"relative symplectic residual {_symplectic_residual(a, form):.2e}")
    j = standard_j(dim // 2) if form is None else form
    lam, vec = scipy.linalg.eig(a)
    vec = vec / np.linalg.norm(vec, axis=0)
    notes: list[str] = []

    is_real = np.abs(lam.imag) <= REAL_TOL * (1 + np.abs(lam))
    m_minus = int(np.sum(is_real & (lam.real < 0)))

    # Krein data on every non-real cluster, each half-plane on its own
    krein: list[tuple[complex, int, int]] = []
    upper_krein: dict[int, tuple[int, int, int]] = {}
    nonreal = np.flatnonzero(~is_real)
    for grp in _clusters(lam[nonreal], CLUSTER_TOL):
        idx = nonreal[grp]
        z = vec[:, idx]
        p, q, nul = krein_inertia(z, j)
        centre = lam[idx].mean()
        unit = centre / abs(centre)
        if p + q and len(idx) > 1:
            s = np.linalg.svd(z, compute_uv=False)
            if s[-1] / s[0] < SEMISIMPLE_TOL and abs(abs(centre) - 1) < 1e-4:
                raise NonSemisimpleElliptic(
                    f"elliptic eigenvalue {centre:.6g} has a defective eigenspace"
                )
        krein.append((complex(unit), p, q))
        if centre.imag > 0:
            for i in idx:
                upper_krein[int(i)] = (p, q, len(idx))

    entries: list[SpectralEntry] = []
    if eigenspaces:
        reps = _representative(lam)
        for grp in _clusters(reps, CLUSTER_TOL):
            idx = np.asarray(grp)
            rep = complex(reps[idx].mean())
            space = _real_span(vec[:, idx])
            mult = len(idx)
            if abs(rep.imag) <= REAL_TOL * (1 + abs(rep)):
                rep = complex(rep.real, 0.0)
                kind = "unit-exceptional" if abs(abs(rep.real) - 1) < ELLIPTIC_TOL else "real-hyperbolic"
                entries.append(SpectralEntry(rep, kind, mult, real_eigenspace=space))
                continue
            upper = [int(i) for i in idx if lam[i].imag > 0]
            seen, p_tot, q_tot = set(), 0, 0
            for i in upper:
                p, q, key = upper_krein.get(i, (0, 0, 0))
                cl = tuple(sorted(k for k in upper if upper_krein.get(k) == upper_krein.get(i)))
                if cl not in seen:
                    seen.add(cl)
                    p_tot, q_tot = p_tot + p, q_tot + q
            on_circle = np.max(np.abs(np.abs(lam[idx]) - 1)) < ELLIPTIC_TOL
            if p_tot + q_tot and not on_circle:
                notes.append(f"eigenvalue group at {rep:.6g} is Krein-definite but off the circle by "
                             f"{np.max(np.abs(np.abs(lam[idx]) - 1)):.1e}; treated as elliptic")
            if p_tot + q_tot:
                unit = rep / abs(rep)
                ell = p_tot + q_tot
                entries.append(SpectralEntry(unit, "elliptic", 2 * ell, p_tot, q_tot, space))
                if mult > 2 * ell:
                    entries.append(SpectralEntry(rep, "quadruple", mult - 2 * ell))
            else:
                entries.append(SpectralEntry(rep, "quadruple", mult, real_eigenspace=space))
    if m_minus % 2:
        notes.append(f"odd count {m_minus} of negative real eigenvalues")
    return SpectralClassification(entries, m_minus, lam, krein, notes)


def rho(a: np.ndarray, form: np.ndarray | None = None, check: bool = True) -> complex:
    """``rho(A) = (-1)^{m^-/2} prod lambda^{m^+(lambda)}`` (Krein-positive representatives)."""
    cls = classify_spectrum(a, check=check, eigenspaces=False, form=form)
    val = complex((-1) ** (cls.m_minus // 2))
    for unit, p, q in cls.krein_clusters:
        if unit.imag > 0:
            val *= unit ** (p - q)
    return val / abs(val)


def rho_squared(a: np.ndarray, form: np.ndarray | None = None, check: bool = True) -> complex:
    """``rho(A)^2`` as a product over every elliptic cluster of ``lambda^{sig}``.

    Uses neither the sign factor nor a choice of representative per pair.
    """
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 1 + 0j
    cls = classify_spectrum(a, check=check, eigenspaces=False, form=form)
    val = 1 + 0j
    for unit, p, q in cls.krein_clusters:
        val *= unit ** (p - q)
    return val / abs(val)


def rho_hat(rel: LinearRelation, warn: bool = True) -> complex:
    """Continuous extension of ``rho^2`` to relations outside ``H``: ``rho^2`` of the graph part."""
    if rel.invariants.kappa >= 1:
        raise ExceptionalInput(f"rho-hat is undefined on H (kappa={rel.invariants.kappa})")
    if warn and rel.invariants.k:
        margin = exceptional_margin(rel)
        if margin < MARGIN_WARN:
            warnings.warn(f"relation is within {margin:.1e} of H", ConditioningWarning, stacklevel=2)
    dec = decompose(rel)
    if dec.phi.size == 0:
        return 1 + 0j
    return rho_squared(dec.phi)


def rho_hat_power_identity(rel: LinearRelation, l: int) -> tuple[complex, complex]:
    """``(rho_hat(L^l), rho_hat(L)^l)`` for ``l >= 0``."""
    from .relations import power

    if l < 0:
        raise ValueError("only non-negative powers are covered")
    return rho_hat(power(rel, l)), rho_hat(rel) ** l


def angle(z: complex) -> float:
    """Argument in ``[-pi, pi)``."""
    t = float(np.angle(z))
    return -np.pi if t >= np.pi else t
