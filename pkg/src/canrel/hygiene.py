"""Numerical hygiene checks on relations and their distinguished subspaces.

:class:`HygieneMonitor` subscribes to every relation the library hands out
while it is active and keeps running worst-case values of each check, so a
long computation can be audited without storing the objects themselves.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import relations
from .linalg import intersect, omega_complement, projector_distance, standard_j, subspace_sum

# thresholds per check; Grassmann defects are integers and must be zero
LIMITS = {
    "orthonormality": 1e-10,
    "lagrangian_residual": 1e-8,
    "rank_defect": 0,
    "duality": 1e-8,
    "double_complement": 1e-9,
    "grassmann_defect": 0,
}


def relation_checks(rel: relations.LinearRelation) -> dict[str, float]:
    """Worst value of every hygiene check on one relation."""
    b = rel.basis
    n = rel.n
    j = standard_j(n)
    ds = rel.distinguished
    spaces = (ds.kernel, ds.halo, ds.domain, ds.range)
    ortho = max(float(np.max(np.abs(s.basis.T @ s.basis - np.eye(s.rank)), initial=0.0)) for s in spaces)
    ortho = max(ortho, float(np.max(np.abs(b.T @ b - np.eye(b.shape[1])), initial=0.0)))
    dc = max(projector_distance(omega_complement(omega_complement(s, j), j), s) for s in spaces)
    tol = relations._intersection_tol(rel)
    grass = 0
    for s1, s2 in ((ds.domain, ds.halo), (ds.kernel, ds.halo), (ds.domain, ds.range)):
        total = subspace_sum(s1, s2, tol).rank + intersect(s1, s2, tol).rank
        grass = max(grass, abs(total - s1.rank - s2.rank))
    return {
        "orthonormality": ortho,
        "lagrangian_residual": rel.lagrangian_residual,
        "rank_defect": abs(rel.subspace.rank - 2 * n),
        "duality": relations.duality_residual(rel),
        "double_complement": dc,
        "grassmann_defect": grass,
    }


@dataclass
class HygieneMonitor:
    """Context manager collecting worst-case hygiene values over every relation created."""

    worst: dict[str, float] = field(default_factory=lambda: {k: 0.0 for k in LIMITS})
    count: int = 0
    failures: list[tuple[str, float]] = field(default_factory=list)
    max_failures: int = 20

    def observe(self, rel):
        self.count += 1
        for key, val in relation_checks(rel).items():
            self.worst[key] = max(self.worst[key], val)
            if val > LIMITS[key] and len(self.failures) < self.max_failures:
                self.failures.append((key, float(val)))

    def __enter__(self):
        relations.observers.append(self.observe)
        return self

    def __exit__(self, *exc):
        relations.observers.remove(self.observe)
        return False

    @property
    def passed(self) -> bool:
        return all(self.worst[k] <= LIMITS[k] for k in LIMITS)
