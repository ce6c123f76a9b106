"""JSON encodings for matrices, subspaces, relations and paths.

Matrices are ``{"rows": r, "cols": c, "data": [[...], ...]}`` (row-major),
subspaces ``{"ambient": d, "basis": <matrix>}``, relations
``{"n": n, "basis": <4n x 2n matrix, source rows first>}``.  Floats are
written with ``repr`` precision so every value re-parses exactly.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .index import PathSpec
from .linalg import RANK_TOL, Subspace
from .relations import LinearRelation


class FormatError(ValueError):
    """Malformed input file."""


def encode_matrix(m: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=float)) if np.asarray(m).size else np.zeros(np.shape(m))
    rows, cols = m.shape if m.ndim == 2 else (0, 0)
    return {"rows": int(rows), "cols": int(cols), "data": [[float(x) for x in row] for row in m]}


def decode_matrix(obj) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = np.asarray(obj["data"], dtype=float).reshape(rows, cols)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix encoding: {exc}") from exc
    if not np.all(np.isfinite(data)):
        raise FormatError("matrix contains non-finite entries")
    return data


def encode_subspace(s: Subspace) -> dict:
    return {"ambient": s.ambient_dim, "basis": encode_matrix(s.basis)}


def decode_subspace(obj) -> Subspace:
    from .linalg import orthonormalize

    try:
        d = int(obj["ambient"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad subspace encoding: {exc}") from exc
    b = decode_matrix(obj["basis"])
    return orthonormalize(b) if b.size else Subspace.zero(d)


def encode_relation(rel: LinearRelation) -> dict:
    return {"n": rel.n, "basis": encode_matrix(rel.basis)}


def decode_relation(obj, tol: float = RANK_TOL) -> LinearRelation:
    try:
        n = int(obj["n"])
        basis = decode_matrix(obj["basis"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad relation encoding: {exc}") from exc
    if basis.shape != (4 * n, 2 * n):
        raise FormatError(f"relation basis must be {4 * n}x{2 * n}, got {basis.shape[0]}x{basis.shape[1]}")
    return LinearRelation.from_columns(basis, n, tol=tol)


def is_relation(obj) -> bool:
    return isinstance(obj, dict) and "basis" in obj and "n" in obj


def is_matrix(obj) -> bool:
    return isinstance(obj, dict) and {"rows", "cols", "data"} <= set(obj)


def decode_path(obj, tol: float = RANK_TOL) -> PathSpec:
    """Path JSON: kinds ``exp``, ``rotation_loop``, ``samples`` and ``blowup``."""
    try:
        kind = obj["kind"]
        if kind == "exp":
            base = decode_matrix(obj["base"]) if "base" in obj else None
            return PathSpec.exp(decode_matrix(obj["S"]), base, float(obj.get("t0", 0.0)), float(obj.get("t1", 1.0)))
        if kind == "rotation_loop":
            return PathSpec.rotation_loop(int(obj["n"]), int(obj["w"]), int(obj.get("plane", 0)))
        if kind == "samples":
            items = obj["relations"]
            decoded = [decode_matrix(x) if is_matrix(x) else decode_relation(x, tol) for x in items]
            return PathSpec.samples(decoded)
        if kind == "blowup":
            m = decode_matrix(obj["M"]) if "M" in obj else None
            nmat = decode_matrix(obj["N"]) if "N" in obj else None
            k = int(obj["k"])
            n = int(obj["n"]) if "n" in obj else (m.shape[0] // 2 if m is not None else None)
            phi0 = decode_matrix(obj["phi0"]) if "phi0" in obj else None
            if n is None:
                n = k + (phi0.shape[0] // 2 if phi0 is not None else 0)
            gen = decode_matrix(obj["phi_generator"]) if "phi_generator" in obj else None
            return PathSpec.blowup(n, k, phi0, m, nmat, float(obj.get("s_end", 0.0)), gen)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad path encoding: missing or malformed {exc}") from exc
    raise FormatError(f"unknown path kind {obj.get('kind')!r}")


def load_json(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def dump_json(obj, path: str | Path | None = None) -> str:
    text = json.dumps(obj, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
