"""Error of Gr(A_r^{-1}) o Gr(A_r) against the diagonal as the blowup r grows.

The composed relation is conditioned like r^2, so the distance to the
diagonal grows like eps * r^2 until the composition loses isotropy.

    python scripts/composition_conditioning.py [max_exponent]
"""
import sys

import numpy as np

from canrel.errors import DomainError
from canrel.lab import SEQUENCE_SCALE
from canrel.linalg import random_symplectic, symplectic_inverse
from canrel.relations import compose, from_graph, identity_relation


def main(max_exp: int = 20, seed: int = 0):
    m = random_symplectic(1, seed, SEQUENCE_SCALE)
    minv = symplectic_inverse(m)
    delta = identity_relation(1)
    print("i,r,distance_to_diagonal,eps_r2")
    for i in range(1, max_exp + 1):
        r = 2.0 ** i
        a = m @ np.diag([1 / r, r]) @ minv
        ainv = m @ np.diag([r, 1 / r]) @ minv
        try:
            d = f"{compose(from_graph(ainv), from_graph(a)).distance(delta):.3e}"
        except DomainError as exc:
            d = type(exc).__name__
        print(f"{i},{r:.0f},{d},{np.finfo(float).eps * r * r:.3e}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:2]))
