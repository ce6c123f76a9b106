"""Paths of relations, angle lifting of rho / rho-hat, and the indices Delta and Delta-hat.

A path is described by a :class:`PathSpec`.  Parametric kinds are evaluated on
demand and refined by bisection until consecutive samples differ in angle by
less than ``pi/2``; sample lists are checked against the same bound and never
interpolated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, ExceptionalPoint, RefinementExhausted, Undersampled
from .linalg import rotation, standard_j
from .relations import (
    LinearRelation,
    act,
    exceptional_margin,
    from_graph,
    power,
)
from .spectral import angle, rho, rho_hat

STEP_LIMIT = np.pi / 2
DEFAULT_GRID = 64
DEFAULT_DEPTH = 24

@dataclass(frozen=True)
class PathSpec:
    """A path ``[t0, t1] -> Lambda_{2n} \\ H`` or a list of samples.

    Build instances with the class methods rather than by hand; ``params``
    holds the kind-specific data.
    """

    kind: str
    n: int
    params: dict = field(default_factory=dict, repr=False)
    t0: float = 0.0
    t1: float = 1.0

    @classmethod
    def exp(cls, s: np.ndarray, base: np.ndarray | None = None, t0: float = 0.0, t1: float = 1.0) -> "PathSpec":
        """``t -> Gr(base @ expm(t J S))``; ``base`` defaults to the identity."""
        s = np.asarray(s, dtype=float)
        n = s.shape[0] // 2
        return cls("exp", n, {"S": s, "base": None if base is None else np.asarray(base, float)}, t0, t1)

    @classmethod
    def rotation_loop(cls, n: int, w: int, plane: int = 0) -> "PathSpec":
        """``t -> Gr(R(2 pi w t))`` on the plane ``(e_plane, f_plane)``, identity elsewhere."""
        return cls("rotation_loop", n, {"w": int(w), "plane": int(plane)})

    @classmethod
    def samples(cls, items: Sequence) -> "PathSpec":
        """Ordered samples: relations, or symplectic matrices (taken as graphs)."""
        items = list(items)
        if not items:
            raise ValueError("empty sample list")
        first = items[0]
        n = first.n if isinstance(first, LinearRelation) else np.asarray(first).shape[0] // 2
        ts = np.linspace(0.0, 1.0, len(items)) if len(items) > 1 else np.zeros(1)
        return cls("samples", n, {"items": items, "ts": ts})

    @classmethod
    def blowup(cls, n: int, k: int, phi0: np.ndarray | None = None, m: np.ndarray | None = None,
               nmat: np.ndarray | None = None, s_end: float = 0.0,
               phi_generator: np.ndarray | None = None) -> "PathSpec":
        """``(M x N)`` applied to singular blocks on the first ``k`` planes plus ``Gr(phi0(t))``.

        Plane ``j < k`` carries ``span{(e_j, s e_j), (s f_j, f_j)}`` with
        ``s(t) = 1 + (s_end - 1) t``: the graph of ``diag(s, 1/s)`` while
        ``s != 0`` and the transversal pair ``span{(e_j, 0), (0, f_j)}`` at
        ``s = 0``.  ``s_end = 0`` is the blowup with rate ``1/(1 - t)`` and
        limit at ``t = 1``; ``s_end = -1`` crosses the stratum at ``t = 1/2``
        and ends on a graph.  The remaining planes carry
        ``phi0 @ expm(t J phi_generator)``.
        """
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
        g = 2 * (n - k)
        phi0 = np.eye(g) if phi0 is None else np.asarray(phi0, float)
        if phi0.shape != (g, g):
            raise ValueError(f"phi0 must be {g}x{g}")
        m = np.eye(2 * n) if m is None else np.asarray(m, float)
        nmat = np.eye(2 * n) if nmat is None else np.asarray(nmat, float)
        gen = None if phi_generator is None else np.asarray(phi_generator, float)
        return cls("blowup", n, {"k": k, "phi0": phi0, "M": m, "N": nmat, "s_end": float(s_end),
                                 "phi_generator": gen})

    def power(self, l: int) -> "PathSpec":
        """Pointwise relation power ``t -> gamma(t)^l``."""
        return PathSpec("power", self.n, {"base": self, "l": int(l)}, self.t0, self.t1)

    def reversed(self) -> "PathSpec":
        return PathSpec("reversed", self.n, {"base": self}, self.t0, self.t1)

    def then(self, other: "PathSpec") -> "PathSpec":
        """Concatenation, each half reparametrized to half of ``[0, 1]``."""
        if other.n != self.n:
            raise ValueError("paths live over different spaces")
        return PathSpec("concat", self.n, {"first": self, "second": other})

    @property
    def is_graph_path(self) -> bool:
        if self.kind in ("exp", "rotation_loop"):
            return True
        if self.kind == "samples":
            return not isinstance(self.params["items"][0], LinearRelation)
        if self.kind in ("power", "reversed"):
            return self.params["base"].is_graph_path
        if self.kind == "concat":
            return self.params["first"].is_graph_path and self.params["second"].is_graph_path
        return False


@dataclass(frozen=True)
class AngleTrace:
    """Lifted angle ``theta(t)`` of a unit-complex function sampled along a path."""

    ts: np.ndarray
    angles: np.ndarray
    values: np.ndarray
    refinement_depth: int = 0

    @property
    def index(self) -> float:
        return float((self.angles[-1] - self.angles[0]) / (2 * np.pi))

    def check(self, tol: float = 1e-9) -> bool:
        steps_ok = bool(np.all(np.abs(np.diff(self.angles)) < STEP_LIMIT))
        return steps_ok and bool(np.all(np.abs(np.exp(1j * self.angles) - self.values) < tol))


def _local(p: PathSpec, t: float) -> float:
    return (t - p.t0) / (p.t1 - p.t0) if p.t1 != p.t0 else 0.0


def matrix_at(p: PathSpec, t: float) -> np.ndarray:
    """The symplectic matrix of a graph path at ``t``."""
    if p.kind == "exp":
        a = expm(t * standard_j(p.n) @ p.params["S"])
        return a if p.params["base"] is None else p.params["base"] @ a
    if p.kind == "rotation_loop":
        m = np.eye(2 * p.n)
        i = [p.params["plane"], p.n + p.params["plane"]]
        m[np.ix_(i, i)] = rotation(2 * np.pi * p.params["w"] * _local(p, t))
        return m
    if p.kind == "power":
        return np.linalg.matrix_power(matrix_at(p.params["base"], t), p.params["l"])
    if p.kind == "reversed":
        b = p.params["base"]
        return matrix_at(b, b.t0 + b.t1 - t)
    if p.kind == "concat":
        return _concat_eval(p, t, matrix_at)
    raise ValueError(f"path kind {p.kind!r} is not a parametric graph path")


def _concat_eval(p: PathSpec, t: float, fn):
    u = _local(p, t)
    first, second = p.params["first"], p.params["second"]
    if u <= 0.5:
        return fn(first, first.t0 + 2 * u * (first.t1 - first.t0))
    return fn(second, second.t0 + (2 * u - 1) * (second.t1 - second.t0))


def _blowup_relation(params: dict, n: int, u: float) -> LinearRelation:
    k = params["k"]
    s = 1.0 + (params["s_end"] - 1.0) * u
    eye = np.eye(2 * n)
    cols = []
    for j in range(k):
        e, f = eye[:, j], eye[:, n + j]
        cols.append(np.r_[e, s * e])
        cols.append(np.r_[s * f, f])
    g = n - k
    if g:
        phi = params["phi0"]
        if params["phi_generator"] is not None:
            phi = phi @ expm(u * standard_j(g) @ params["phi_generator"])
        idx = list(range(k, n)) + list(range(n + k, 2 * n))
        sub = eye[:, idx]
        cols.extend(np.r_[sub[:, c], sub @ phi[:, c]] for c in range(2 * g))
    rel = LinearRelation.from_columns(np.column_stack(cols), n)
    return act(params["M"], params["N"], rel)


def evaluate_path(p: PathSpec, t: float, check: bool = True) -> LinearRelation:
    """The relation at parameter ``t``.

    Raises
    ------
    ExceptionalPoint
        If the relation lies in ``H``.
    """
    if p.kind == "samples":
        raise ValueError("sample-list paths cannot be evaluated between samples")
    if not (min(p.t0, p.t1) - 1e-12 <= t <= max(p.t0, p.t1) + 1e-12):
        raise ValueError(f"t={t} outside [{p.t0}, {p.t1}]")
    if p.kind in ("exp", "rotation_loop"):
        rel = from_graph(matrix_at(p, t))
    elif p.kind == "blowup":
        rel = _blowup_relation(p.params, p.n, _local(p, t))
    elif p.kind == "power":
        base = p.params["base"]
        rel = power(evaluate_path(base, t, check), p.params["l"])
    elif p.kind == "reversed":
        b = p.params["base"]
        rel = evaluate_path(b, b.t0 + b.t1 - t, check)
    elif p.kind == "concat":
        rel = _concat_eval(p, t, lambda q, s: evaluate_path(q, s, check))
    else:
        raise ValueError(f"unknown path kind {p.kind!r}")
    if check and rel.invariants.kappa >= 1:
        raise ExceptionalPoint(f"path meets H at t={t:.6g} (kappa={rel.invariants.kappa})")
    return rel


def _step(a: complex, b: complex) -> float:
    return float(np.angle(b * np.conj(a)))


def _assemble(ts: list, vals: list, depth: int) -> AngleTrace:
    vals_arr = np.asarray(vals, dtype=complex)
    steps = np.array([_step(vals_arr[i], vals_arr[i + 1]) for i in range(len(vals_arr) - 1)])
    angles = angle(vals_arr[0]) + np.concatenate([[0.0], np.cumsum(steps)])
    return AngleTrace(np.asarray(ts, dtype=float), angles, vals_arr, depth)


def lift_function(fn: Callable[[float], complex], t0: float, t1: float, grid: int = DEFAULT_GRID,
                  max_depth: int = DEFAULT_DEPTH, on_exhausted: Callable[[float], str] | None = None) -> AngleTrace:
    """Lift a continuous unit-complex function with bisection until every step is below ``pi/2``."""
    ts = np.linspace(t0, t1, max(grid, 2))
    out_t, out_v = [ts[0]], [fn(ts[0])]
    deepest = 0

    def segment(a, b, va, vb, depth):
        nonlocal deepest
        if abs(_step(va, vb)) < STEP_LIMIT:
            out_t.append(b)
            out_v.append(vb)
            return
        if depth >= max_depth:
            extra = on_exhausted(0.5 * (a + b)) if on_exhausted else ""
            raise RefinementExhausted(
                f"angle jump persists on [{a:.6g}, {b:.6g}] after {max_depth} bisections{extra}"
            )
        mid = 0.5 * (a + b)
        vm = fn(mid)
        deepest = max(deepest, depth + 1)
        segment(a, mid, va, vm, depth + 1)
        segment(mid, b, vm, vb, depth + 1)

    for a, b in zip(ts[:-1], ts[1:]):
        segment(a, b, out_v[-1], fn(b), 0)
    return _assemble(out_t, out_v, deepest)


def _margin_note(p: PathSpec):
    def note(t):
        try:
            return f"; margin to H at t={t:.6g} is {exceptional_margin(evaluate_path(p, t, check=False)):.2e}"
        except DomainError:
            return ""
    return note


def lift_angle(p: PathSpec, grid: int = DEFAULT_GRID, max_depth: int = DEFAULT_DEPTH) -> AngleTrace:
    """Lift of ``rho-hat`` along a path, with ``theta(t0)`` in ``[-pi, pi)``.

    Raises
    ------
    Undersampled
        A sample list has consecutive values at least ``pi/2`` apart.
    RefinementExhausted
        Bisection reached ``max_depth`` without resolving an angle jump.
    """
    if p.kind == "samples":
        items = p.params["items"]
        rels = [x if isinstance(x, LinearRelation) else from_graph(x) for x in items]
        vals = []
        for i, rel in enumerate(rels):
            if rel.invariants.kappa >= 1:
                raise ExceptionalPoint(f"sample {i} lies in H")
            vals.append(rho_hat(rel, warn=False))
        for i in range(len(vals) - 1):
            if abs(_step(vals[i], vals[i + 1])) >= STEP_LIMIT:
                raise Undersampled(f"samples {i} and {i + 1} differ in angle by "
                                   f"{abs(_step(vals[i], vals[i + 1])):.3f} >= pi/2")
        return _assemble(list(p.params["ts"]), vals, 0)
    fn = lambda t: rho_hat(evaluate_path(p, t), warn=False)  # noqa: E731
    return lift_function(fn, p.t0, p.t1, grid, max_depth, _margin_note(p))


def lift_rho(p: PathSpec, grid: int = DEFAULT_GRID, max_depth: int = DEFAULT_DEPTH) -> AngleTrace:
    """Lift of ``rho`` (not its square) along a path of symplectic matrices."""
    if not p.is_graph_path:
        raise ValueError("the mean index needs a path of symplectic matrices")
    if p.kind == "samples":
        vals = [rho(np.asarray(a, float)) for a in p.params["items"]]
        for i in range(len(vals) - 1):
            if abs(_step(vals[i], vals[i + 1])) >= STEP_LIMIT:
                raise Undersampled(f"samples {i} and {i + 1} differ in angle by >= pi/2")
        return _assemble(list(p.params["ts"]), vals, 0)
    return lift_function(lambda t: rho(matrix_at(p, t)), p.t0, p.t1, grid, max_depth)


def mean_index(p: PathSpec, grid: int = DEFAULT_GRID, max_depth: int = DEFAULT_DEPTH) -> float:
    """``Delta(gamma) = (theta(1) - theta(0)) / 2 pi`` for the lift of ``rho``."""
    return lift_rho(p, grid, max_depth).index


def extended_mean_index(p: PathSpec, grid: int = DEFAULT_GRID, max_depth: int = DEFAULT_DEPTH) -> float:
    """``Delta-hat(gamma)`` from the lift of ``rho-hat``."""
    return lift_angle(p, grid, max_depth).index


def index_homogeneity(p: PathSpec, l: int, grid: int = DEFAULT_GRID,
                      max_depth: int = DEFAULT_DEPTH) -> tuple[float, float]:
    """``(Delta-hat(gamma^l), l * Delta-hat(gamma))`` for ``l >= 0``."""
    if l < 0:
        raise ValueError("homogeneity is only claimed for non-negative powers")
    if l == 0:
        # gamma^0 is the constant path at the diagonal
        return 0.0, 0.0
    return extended_mean_index(p.power(l), grid, max_depth), l * extended_mean_index(p, grid, max_depth)


def constant_path(rel: LinearRelation, count: int = 3) -> PathSpec:
    return PathSpec.samples([rel] * count)


__all__ = [
    "AngleTrace",
    "PathSpec",
    "constant_path",
    "evaluate_path",
    "extended_mean_index",
    "index_homogeneity",
    "lift_angle",
    "lift_function",
    "lift_rho",
    "matrix_at",
    "mean_index",
]
