"""Acceptance criteria 1-9, each at its stated tolerance and runtime budget.

Run ``python3 tests/test_acceptance.py`` for a one-line verdict per criterion,
or ``pytest tests/test_acceptance.py -v -s`` to see the same lines under pytest.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass

import numpy as np
import pytest

from symfid.counterexample import (
    dicke1_split,
    fidelity_to_dicke1,
    g_operators,
    inverse_image_numeric,
    inverse_image_state,
    proportionality_constant,
    psi_eps_split,
    psi_N_k,
)
from symfid.localops import apply_local
from symfid.lu_opt import lu_equality_check
from symfid.symfid_opt import (
    ObjectiveParams,
    brute_force_sym_fidelity,
    closed_form_k0,
    closed_form_k1,
    limit_k1,
    max_sym_fidelity,
    objective_f_dn1,
    objective_general,
)
from symfid.symstate import dicke, overlap, sym_to_dense

TABLE_I = {(4, 2): 0.5, (5, 2): 0.477, (6, 2): 0.465, (6, 3): 0.4, (7, 2): 0.457,
           (7, 3): 0.383, (8, 2): 0.451, (8, 3): 0.372, (8, 4): 0.344}
LIMITS = {2: 0.422, 3: 0.322, 4: 0.271, 5: 0.238, 6: 0.215, 7: 0.197, 8: 0.183}
CE_PAIRS = [(n, k) for n in range(4, 9) for k in range(2, n // 2 + 1)]


@dataclass
class Verdict:
    ok: bool
    detail: str
    seconds: float = 0.0
    budget: float | None = None

    @property
    def passed(self) -> bool:
        return self.ok and (self.budget is None or self.seconds < self.budget)


def criterion_1() -> Verdict:
    worst_pub = worst_cross = 0.0
    for (n, k), published in TABLE_I.items():
        closed = closed_form_k1(n, k)
        numeric = max_sym_fidelity(n, k, 1).value
        worst_pub = max(worst_pub, abs(closed - published), abs(numeric - published))
        worst_cross = max(worst_cross, abs(closed - numeric))
    return Verdict(worst_pub <= 5e-4, f"max |F - table| = {worst_pub:.2e}, max |closed - numeric| = {worst_cross:.2e}", budget=10)


def criterion_2() -> Verdict:
    worst_lim = worst_big = 0.0
    for k, published in LIMITS.items():
        lim = limit_k1(k)
        worst_lim = max(worst_lim, abs(lim - published))
        worst_big = max(worst_big, abs(closed_form_k1(10_000, k) - lim))
    ok = worst_lim <= 5e-4 and worst_big <= 5e-3
    return Verdict(ok, f"max |limit - list| = {worst_lim:.2e}, max |F(10^4) - limit| = {worst_big:.2e}", budget=5)


def criterion_3() -> Verdict:
    anchor = None
    decreasing = True
    for n in range(4, 101):
        series = [max_sym_fidelity(n, 1, k).value for k in range(2, n // 2 + 1)]
        decreasing &= all(b < a for a, b in zip(series, series[1:]))
        if n == 100:
            anchor = series[0]
    ok = 0.62 <= anchor <= 0.64 and decreasing
    return Verdict(ok, f"F^S(N=100, k=2) = {anchor:.5f}, k-series decreasing for all N: {decreasing}", budget=120)


def criterion_4() -> Verdict:
    worst = 1.0
    below_one = True
    for n, k in CE_PAIRS:
        f = fidelity_to_dicke1(n, k, 1e-3)
        dense = overlap(dicke(n, 1), psi_N_k(n, k, 1e-3)).fidelity
        below_one &= f < 1 and dense < 1
        worst = min(worst, f, dense)
    ok = below_one and worst > 1 - 1e-5
    return Verdict(ok, f"min F at eps=1e-3 = {worst:.10f}, all strictly < 1: {below_one}", budget=5)


def criterion_5() -> Verdict:
    worst_state = worst_const = 0.0
    for n, k in CE_PAIRS:
        for eps in (1.0, 0.1, 0.01):
            image = apply_local(g_operators(n, k, eps), sym_to_dense(dicke(n, k))).amps
            unnorm = (dicke1_split(n) + psi_eps_split(n, k, eps)).to_dense().amps
            a = image / np.linalg.norm(image)
            b = unnorm / np.linalg.norm(unnorm)
            phase = np.vdot(b, a)
            phase /= abs(phase)
            worst_state = max(worst_state, float(np.abs(a - phase * b).max()))
            fitted = np.vdot(unnorm, image) / np.vdot(unnorm, unnorm)
            worst_const = max(worst_const, abs(fitted - proportionality_constant(n, k, eps)))
    ok = worst_state <= 1e-10 and worst_const <= 1e-12
    return Verdict(ok, f"max state deviation = {worst_state:.2e}, max constant deviation = {worst_const:.2e}")


def criterion_6() -> Verdict:
    quarter = overlap(dicke(4, 2), inverse_image_state(4, 2)).fidelity
    zero = max(overlap(dicke(n, k), inverse_image_state(n, k)).fidelity for n, k in [(5, 2), (6, 2), (6, 3)])
    worst_mod = 0.0
    for n, k in [(4, 2), (5, 2), (6, 2), (6, 3)]:
        mod = abs(overlap(inverse_image_numeric(n, k, 0.1), inverse_image_numeric(n, k, 0.7)).value)
        worst_mod = max(worst_mod, abs(mod - 1))
    ok = abs(quarter - 1 / 14) <= 1e-10 and zero < 1e-12 and worst_mod <= 1e-10
    return Verdict(ok, f"F(4,2) - 1/14 = {quarter - 1 / 14:.1e}, max zero-case F = {zero:.1e}, max |mod - 1| = {worst_mod:.1e}")


def criterion_7() -> Verdict:
    worst = 0.0
    for n in range(2, 7):
        worst = max(worst, max(abs(r.gap) for r in lu_equality_check(n, 20, 20, seed=42)))
    return Verdict(worst <= 1e-6, f"max |gap| over n=2..6, 20 trials each = {worst:.2e}", budget=120)


def criterion_8() -> Verdict:
    worst_oracle = worst_k0 = 0.0
    cases = 0
    for n in range(1, 9):
        for k in range(n + 1):
            for kp in range(n + 1):
                if k == kp:
                    continue
                formula = max_sym_fidelity(n, k, kp).value
                worst_oracle = max(worst_oracle, abs(formula - brute_force_sym_fidelity(dicke(n, k), n, kp)))
                if kp == 0:
                    worst_k0 = max(worst_k0, abs(formula - closed_form_k0(n, k)))
                cases += 1
    ok = worst_oracle <= 1e-5 and worst_k0 <= 1e-5
    return Verdict(ok, f"{cases} cases, max |formula - oracle| = {worst_oracle:.2e}, kp=0 vs closed form = {worst_k0:.2e}", budget=300)


def criterion_9() -> Verdict:
    rng = np.random.default_rng(9)
    worst = 0.0
    for n in range(4, 13):
        for k in range(2, n // 2 + 1):
            for _ in range(100):
                p = ObjectiveParams(rng.uniform(), rng.uniform(), rng.uniform(-1, 1))
                worst = max(worst, abs(objective_f_dn1(n, k, p) - objective_general(n, 1, k, p)))
    return Verdict(worst <= 1e-10, f"max |f_dn1 form - general form| = {worst:.2e}")


CRITERIA = {
    1: ("tabulated k=1 values", criterion_1),
    2: ("large-N limit list", criterion_2),
    3: ("N=100 anchor and k ordering", criterion_3),
    4: ("counterexample fidelity limit", criterion_4),
    5: ("structural identity and constant", criterion_5),
    6: ("inverse-image state", criterion_6),
    7: ("LU equality", criterion_7),
    8: ("oracle equivalence", criterion_8),
    9: ("formula cross-check", criterion_9),
}


def evaluate(number: int) -> Verdict:
    _, fn = CRITERIA[number]
    start = time.perf_counter()
    verdict = fn()
    verdict.seconds = time.perf_counter() - start
    return verdict


def report(number: int, verdict: Verdict) -> str:
    name, _ = CRITERIA[number]
    budget = "" if verdict.budget is None else f" / budget {verdict.budget:g} s"
    status = "PASS" if verdict.passed else "FAIL"
    return f"[{status}] criterion {number} ({name}): {verdict.detail} [{verdict.seconds:.1f} s{budget}]"


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    verdict = evaluate(number)
    line = report(number, verdict)
    print(line)
    assert verdict.passed, line


if __name__ == "__main__":
    failed = 0
    for number in sorted(CRITERIA):
        v = evaluate(number)
        print(report(number, v), flush=True)
        failed += not v.passed
    sys.exit(1 if failed else 0)
