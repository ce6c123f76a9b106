"""Write small JSON inputs for the CLI into a directory (default ``example_inputs/``).

    python scripts/make_example_files.py [outdir]
"""
import sys
from pathlib import Path

import numpy as np

from canrel.formats import dump_json, encode_matrix, encode_relation
from canrel.lab import converse_relation, normal_form
from canrel.linalg import random_symmetric, random_symplectic, rotation


def main(outdir: str = "example_inputs"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(0)
    files = {
        "converse.json": encode_relation(converse_relation()),
        "identity.json": encode_matrix(np.eye(4)),
        "normal_form.json": encode_relation(normal_form(2, 1, rotation(0.5))),
        "graph.json": encode_relation(normal_form(2, 0, random_symplectic(2, rng, 1.0))),
        "rotation_loop.json": {"kind": "rotation_loop", "n": 1, "w": 1},
        "exp_path.json": {"kind": "exp", "n": 2, "S": encode_matrix(random_symmetric(4, rng, 3.0) + 6 * np.eye(4))},
        "blowup_path.json": {
            "kind": "blowup", "n": 2, "k": 1, "s_end": -1.0,
            "phi0": encode_matrix(rotation(0.4)),
            "M": encode_matrix(random_symplectic(2, rng, 0.5)),
            "N": encode_matrix(random_symplectic(2, rng, 0.5)),
            "phi_generator": encode_matrix(3.0 * np.eye(2)),
        },
    }
    for name, obj in files.items():
        dump_json(obj, out / name)
        print(out / name)


if __name__ == "__main__":
    main(*sys.argv[1:2])
