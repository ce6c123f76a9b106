"""Acceptance criteria 1-12 at their stated tolerances.

Each ``criterion_*`` function runs one criterion and returns ``(passed,
detail)``; the tests assert on it and record a PASS/FAIL line that the
terminal summary prints.  Criterion 12 audits every relation created by
criteria 1-11 (re-running them under a monitor if they have not run yet).
"""
import time

import numpy as np
import pytest

from canrel.hygiene import LIMITS, HygieneMonitor
from canrel.index import PathSpec, extended_mean_index, mean_index
from canrel.lab import (
    PRINTED_SWAP,
    codimension_proxy,
    converse_relation,
    random_relation,
    scenario_composition_discontinuity,
    scenario_continuity_sweep,
    scenario_hyperbolicity,
    scenario_squared_example,
)
from canrel.linalg import (
    direct_sum,
    projector_distance,
    random_symmetric,
    random_symplectic,
    symplectic_inverse,
    unitary_to_symplectic,
)
from canrel.relations import extended_graph_part, from_graph, power
from canrel.spectral import rho, rho_hat, rho_squared

RESULTS: dict[int, tuple[bool, str]] = {}
MONITOR = HygieneMonitor()


def _unitary(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _matrix_power(a, l):
    return np.linalg.matrix_power(a, l) if l >= 0 else np.linalg.matrix_power(symplectic_inverse(a), -l)


def criterion_1():
    worst = 0.0
    for i in range(500):
        n = 1 + i % 3
        a = random_symplectic(n, 1000 + i)
        worst = max(worst, abs(rho_hat(from_graph(a)) - rho_squared(a)))
    return worst < 1e-9, f"max |rho_hat(Gr A) - rho^2(A)| = {worst:.2e} over 500 matrices"


def criterion_2():
    worst, windings = 0.0, set()
    for i in range(100):
        rng = np.random.default_rng(2000 + i)
        n = 1 + i % 3
        # a positive shift makes the path wind several times
        s = random_symmetric(2 * n, rng, 3.0) + rng.uniform(0, 12) * np.eye(2 * n)
        p = PathSpec.exp(s)
        delta = mean_index(p)
        worst = max(worst, abs(extended_mean_index(p) - 2 * delta))
        windings.add(int(np.floor(abs(delta))))
    return worst < 1e-6, f"max |Delta_hat - 2 Delta| = {worst:.2e} over 100 paths (|Delta| floors {sorted(windings)})"


def _homogeneity_paths():
    paths = []
    for i in range(25):
        rng = np.random.default_rng(3000 + i)
        n = 1 + i % 3
        paths.append(PathSpec.exp(random_symmetric(2 * n, rng, 3.0)))
    for i in range(25):
        rng = np.random.default_rng(3100 + i)
        n = 2 + i % 2
        k = 1 + i % (n - 1) if n > 2 else 1
        # crosses the stratum k at t = 1/2; both endpoints are graphs
        paths.append(PathSpec.blowup(
            n, k, phi0=random_symplectic(n - k, rng, 1.0), m=random_symplectic(n, rng, 0.5),
            nmat=random_symplectic(n, rng, 0.5), s_end=-1.0,
            phi_generator=random_symmetric(2 * (n - k), rng, 4.0)))
    return paths


def criterion_3():
    worst = 0.0
    for p in _homogeneity_paths():
        base = extended_mean_index(p)
        for l in range(1, 5):
            worst = max(worst, abs(extended_mean_index(p.power(l)) - l * base))
    # l = 0 is the constant path at the diagonal: both sides vanish
    return worst < 1e-6, f"max |Delta_hat(g^l) - l Delta_hat(g)| = {worst:.2e} over 50 paths, l = 0..4"


def criterion_4():
    det_err = 0.0
    for i in range(200):
        rng = np.random.default_rng(4000 + i)
        u = _unitary(1 + i % 3, rng)
        det_err = max(det_err, abs(rho(unitary_to_symplectic(u)) - np.linalg.det(u)))
    conj, dsum, hyp, pw = 0.0, 0.0, 0.0, 0.0
    for i in range(200):
        rng = np.random.default_rng(4500 + i)
        n = 1 + i % 3
        a = random_symplectic(n, rng)
        m = random_symplectic(n, rng, 1.0)
        conj = max(conj, abs(rho(m @ a @ symplectic_inverse(m)) - rho(a)))
        b = random_symplectic(1 + (i + 1) % 2, rng)
        dsum = max(dsum, abs(rho(direct_sum(a, b)) - rho(a) * rho(b)))
        lam = rng.uniform(1.5, 4.0, n) * rng.choice([-1.0, 1.0], n)
        h = np.diag(np.r_[lam, 1 / lam])
        hyp = max(hyp, abs(rho(h) - (-1.0) ** int(np.sum(lam < 0))))
        for l in range(-2, 5):
            pw = max(pw, abs(rho(_matrix_power(a, l)) - rho(a) ** l))
    ok = det_err < 1e-8 and max(conj, dsum, hyp, pw) < 1e-7
    return ok, (f"det {det_err:.1e}, conjugation {conj:.1e}, direct sum {dsum:.1e}, "
                f"hyperbolic sign {hyp:.1e}, powers {pw:.1e}")


def criterion_5():
    ok, worst = True, 0.0
    for n in (1, 2, 3):
        rep = scenario_squared_example(n, ks=(2, 10, 10_000))
        for row in rep.artifacts:
            ok &= row["rho_A"] == 1 and row["rho_B"] == -1 and row["rho2_A"] == 1 and row["rho2_B"] == 1
            ratio = max(row["dist_A"], row["dist_B"]) * row["k"] / 2
            worst = max(worst, ratio)
        ok &= rep.passed
    return bool(ok and worst < 1), f"rho values exact; max distance / (2/k) = {worst:.3f}"


def criterion_6():
    rel = converse_relation()
    inv = rel.invariants
    dec = extended_graph_part(rel)
    inv_ok = (inv.kappa, inv.r, inv.k, inv.n) == (1, 1, 2, 3)
    if dec is None:
        return False, f"invariants {inv.as_dict()}; no extended graph part"
    err = float(np.max(np.abs(dec.phi - PRINTED_SWAP)))
    detail = (f"invariants {inv.as_dict()}; phi = {np.round(dec.phi, 12).tolist()}, "
              f"entrywise error vs [[0,1],[1,0]] = {err:.2e} (det phi = {np.linalg.det(dec.phi):.0f})")
    return inv_ok and err < 1e-12, detail


def criterion_7():
    ok, worst_step, min_lim, worst_l1 = True, 0.0, 1.0, 0.0
    for n in (1, 2):
        for sd in (None, 0, 1, 2, 3):
            rep = scenario_composition_discontinuity(n, sd)
            m = rep.metrics
            ok &= rep.passed
            worst_step = max(worst_step, m["max_step_dist_identity"])
            min_lim = min(min_lim, m["limit_dist_identity"])
            worst_l1 = max(worst_l1, m["limit_dist_L1xL1"])
    ok &= worst_step < 1e-8 and min_lim > 0.5 and worst_l1 < 1e-8
    return bool(ok), (f"steps r = 2..2^8: max d(K'oK, Delta) = {worst_step:.1e}; "
                      f"limits: min d(., Delta) = {min_lim:.3f}, max d(., L1xL1) = {worst_l1:.1e}")


def criterion_8():
    bad = []
    for n in (1, 2, 3):
        for sd in range(20):
            rep = scenario_hyperbolicity(n, None, sd, steps=14, onset=6)
            if rep.metrics["elliptic_after_onset"]:
                bad.append((n, sd))
    return not bad, f"60 sequences, elliptic eigenvalues at r >= 2^6 in {len(bad)} {bad[:5]}"


def criterion_9():
    worst_rho, worst_gap, dims_ok, count = 0.0, 0.0, True, 0
    for n in (2, 3):
        for k in range(1, n):
            for sd in range(20):
                rep, probe = scenario_continuity_sweep(n, k, sd, steps=20, onset=6)
                worst_rho = max(worst_rho, probe.steps[-1].rho2_error)
                worst_gap = max(worst_gap, max(s.eigenvalue_gap for s in probe.steps))
                dims_ok &= all(s.dim_es == 2 * k for s in probe.steps)
                count += 1
    ok = worst_rho < 1e-4 and worst_gap < 1e-8 and dims_ok
    return bool(ok), (f"{count} sequences: max |rho^2(A_i) - rho_hat(L)| at 2^20 = {worst_rho:.1e}, "
                      f"max beta/phi eigenvalue gap = {worst_gap:.1e}, dim E_s = 2k: {dims_ok}")


def criterion_10():
    worst, in_h = 0.0, 0
    for i in range(100):
        n = 1 + i % 3
        k = (i // 3) % (n + 1)
        rel = random_relation(n, k, 10_000 + i)
        ds = rel.distinguished
        for e in range(-3, 6):
            p = power(rel, e)
            in_h += p.invariants.kappa >= 1
            if e == 0:
                continue  # L^0 is the diagonal, whose domain is all of V
            dom, ran = (ds.domain, ds.range) if e > 0 else (ds.range, ds.domain)
            dp = p.distinguished
            worst = max(worst, projector_distance(dp.domain, dom), projector_distance(dp.range, ran))
    return worst < 1e-8 and in_h == 0, f"max dom/ran distance {worst:.1e}; powers in H: {in_h}"


def criterion_11():
    rep = codimension_proxy(n_max=3, draws=10_000, paths=1_000, points=1_000, seed=0)
    m = rep.metrics
    return rep.passed, (f"statistical check, not a dimension computation: {m['draws_in_H']} of "
                        f"{m['draws']} draws in H (min margin {m['min_draw_margin']:.1e}); "
                        f"min path margin {m['min_path_margin']:.2e} over {m['paths']} paths x "
                        f"{m['points_per_path']} points (closest approach {m['closest_approach']:.1e})")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def _record(number, fn):
    t0 = time.perf_counter()
    with MONITOR:
        passed, detail = fn()
    RESULTS[number] = (bool(passed), f"{detail} [{time.perf_counter() - t0:.1f}s]")
    return passed, detail


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number):
    passed, detail = _record(number, CRITERIA[number - 1])
    assert passed, detail


def test_criterion_12_hygiene():
    global MONITOR
    if len([k for k in RESULTS if k <= 11]) < 11:
        # run in isolation: audit a fresh pass over criteria 1-11
        MONITOR = HygieneMonitor()
        for number, fn in enumerate(CRITERIA, start=1):
            if number not in RESULTS:
                _record(number, fn)
    worst = ", ".join(f"{k} {v:.1e}" if isinstance(v, float) else f"{k} {v}" for k, v in MONITOR.worst.items())
    detail = f"{MONITOR.count} relations audited; worst: {worst}"
    RESULTS[12] = (MONITOR.passed, detail)
    assert MONITOR.passed, f"{detail}; limits {LIMITS}; first failures {MONITOR.failures[:5]}"
