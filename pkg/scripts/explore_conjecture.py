#!/usr/bin/env python3
"""Numerical exploration of F = F^S for the W_N^(1) class.

For a symmetric target, F^S is the supremum over the symmetric members of the
class (brute-force oracle); F is estimated by a local search over arbitrary
invertible local operators ``A_1 (x) ... (x) A_N`` applied to ``|D_N^(1)>``.
The search is heuristic: a positive gap would be a counterexample, while a
zero gap is only evidence. Nothing here asserts the equality.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np
from scipy.optimize import minimize

from symfid.symfid_opt import brute_force_sym_fidelity
from symfid.symstate import dicke, random_sym_state, sym_to_dense


def _ops(v: np.ndarray, n: int) -> np.ndarray:
    m = v.reshape(n, 2, 2, 2)
    return m[..., 0] + 1j * m[..., 1]


def general_fidelity(target: np.ndarray, seed_state: np.ndarray, n: int, v: np.ndarray) -> float:
    psi = seed_state
    for i, a in enumerate(_ops(v, n)):
        psi = np.einsum("ab,xby->xay", a, psi.reshape(2**i, 2, -1)).reshape(-1)
    norm_sq = np.vdot(psi, psi).real
    if norm_sq < 1e-300:
        return 0.0
    return abs(np.vdot(target, psi)) ** 2 / norm_sq


def max_general_fidelity(target, n: int, starts: int, rng: np.random.Generator) -> float:
    """Local search over ``A_1, ..., A_N``.

    Half the starts perturb the best single-``A`` (symmetric) point found
    first, so the search begins at the symmetric value and probes whether
    non-symmetric moves improve it; the rest are random.
    """
    t = sym_to_dense(target).amps
    w = sym_to_dense(dicke(n, 1)).amps
    eye = np.array([1, 0, 0, 0, 0, 0, 1, 0], dtype=float)

    def neg(v):
        return -general_fidelity(t, w, n, v)

    best_sym, best_v = 0.0, np.tile(eye, n)
    for _ in range(4 * starts):
        res = minimize(lambda a: neg(np.tile(a, n)), eye + 0.5 * rng.standard_normal(8), method="BFGS")
        if -res.fun > best_sym:
            best_sym, best_v = -res.fun, np.tile(res.x, n)
    best = best_sym
    for i in range(starts):
        if i % 2 == 0:
            v0 = best_v + 0.05 * rng.standard_normal(8 * n)
        else:
            v0 = np.tile(eye, n) + 0.5 * rng.standard_normal(8 * n)
        res = minimize(neg, v0, method="BFGS", options={"gtol": 1e-10})
        best = max(best, -res.fun)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--random-targets", type=int, default=3)
    ap.add_argument("--starts", type=int, default=8)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", help="CSV path (default: standard output)")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    rows = []
    for n in range(3, args.n_max + 1):
        targets = [(f"D{k}", dicke(n, k)) for k in range(2, n // 2 + 2)]
        targets += [(f"random{r}", random_sym_state(n, rng)) for r in range(args.random_targets)]
        for label, target in targets:
            t0 = time.perf_counter()
            fs = brute_force_sym_fidelity(target, n, 1)
            f = max_general_fidelity(target, n, args.starts, rng)
            rows.append((n, label, fs, f, f - fs, time.perf_counter() - t0))
            print(f"# n={n} {label}: F^S={fs:.9f} F~={f:.9f} gap={f - fs:+.2e}", file=sys.stderr)

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["N", "target", "fs_symmetric", "f_general_search", "gap", "seconds"])
    for r in rows:
        writer.writerow([r[0], r[1]] + [format(v, ".12g") for v in r[2:]])
    if args.out:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
