"""Maximal overlap of two symmetric states under local unitaries.

Two searches are compared: independent ``U_1 (x) ... (x) U_N`` and a single
``U^{(x) N}``. Only ``|<psi|...|phi>|`` matters, so each ``U_i`` is taken in
SU(2) and written as ``[[a, -conj(b)], [b, conj(a)]]`` with
``q = (Re a, Im a, Re b, Im b)`` a real unit 4-vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from symfid.errors import DomainError
from symfid.localops import LocalOperator, apply_local
from symfid.symstate import SymState, family_coeffs, random_sym_state, sym_to_dense

MAX_DENSE_LU = 14
MAX_SWEEPS = 5000
SWEEP_TOL = 1e-14
DEFAULT_RESTARTS = 20
POOL_SIZE = 4096
SCREEN_FACTOR = 16
SCREEN_SWEEPS = 20


@dataclass(frozen=True, eq=False)
class SpinorParam:
    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.shape != (4,):
            raise DomainError(f"spinor parameter needs 4 reals, got shape {q.shape}")
        if abs(np.linalg.norm(q) - 1.0) > 1e-12:
            raise DomainError(f"spinor parameter must have unit norm, got {np.linalg.norm(q)}")
        object.__setattr__(self, "q", q)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "SpinorParam":
        q = rng.standard_normal(4)
        return cls(q / np.linalg.norm(q))


@dataclass(frozen=True)
class LuResult:
    value_independent: float
    value_symmetric: float
    restarts: int
    seed: int
    gap: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "gap", self.value_independent - self.value_symmetric)


def _su2(q: np.ndarray) -> np.ndarray:
    a = q[0] + 1j * q[1]
    b = q[2] + 1j * q[3]
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def su2_from_param(p: SpinorParam) -> LocalOperator:
    return LocalOperator(_su2(p.q))


def _check_pair(psi: SymState, phi: SymState) -> None:
    if psi.n != phi.n:
        raise DomainError(f"qubit counts differ: {psi.n} vs {phi.n}")


def local_overlap(psi: SymState, phi: SymState, ops: Sequence[LocalOperator]) -> complex:
    """``<psi| ops[0] (x) ... (x) ops[n-1] |phi>`` on dense vectors."""
    _check_pair(psi, phi)
    image = apply_local(ops, sym_to_dense(phi))
    return complex(np.vdot(sym_to_dense(psi).amps, image.amps))


def _su2_batch(q: np.ndarray) -> np.ndarray:
    a = q[..., 0] + 1j * q[..., 1]
    b = q[..., 2] + 1j * q[..., 3]
    return np.stack([np.stack([a, -np.conj(b)], -1), np.stack([b, np.conj(a)], -1)], -2)


def _apply_site_batch(u: np.ndarray, vec: np.ndarray, site: int) -> np.ndarray:
    nb = vec.shape[0]
    return np.einsum("bij,bxjy->bxiy", u, vec.reshape(nb, 2**site, 2, -1)).reshape(nb, -1)


@dataclass
class AlternatingRun:
    """Batch of alternating runs; ``history[b, s]`` is run b's value after sweep s."""

    values: np.ndarray
    params: np.ndarray
    history: np.ndarray
    sweeps: np.ndarray

    @property
    def value(self) -> float:
        return float(self.values.max())


def alternating_maximize(
    psi: SymState,
    phi: SymState,
    init: np.ndarray,
    max_sweeps: int = MAX_SWEEPS,
) -> AlternatingRun:
    """Exact per-site updates cycled until a full sweep gains less than ``SWEEP_TOL``.

    With all sites but one fixed the overlap is real-linear in that site's
    ``q``, so the best unit ``q`` is the leading right singular vector of a
    2x4 real matrix and the local optimum is the squared singular value.
    ``init`` has shape ``(n, 4)`` for one run or ``(batch, n, 4)`` for several
    runs advanced together; each run stops independently.
    """
    _check_pair(psi, phi)
    n = psi.n
    if n > MAX_DENSE_LU:
        raise DomainError(f"independent optimization is limited to n <= {MAX_DENSE_LU}, got {n}")
    q = np.array(init, dtype=float)
    if q.ndim == 2:
        q = q[None]
    if q.shape[1:] != (n, 4):
        raise DomainError(f"initial parameters need shape (batch, {n}, 4), got {q.shape}")
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    nb = q.shape[0]
    bra = sym_to_dense(psi).amps.conj()
    ops = _su2_batch(q)
    chi = np.broadcast_to(sym_to_dense(phi).amps, (nb, 2**n)).copy()
    for site in range(n):
        chi = _apply_site_batch(ops[:, site], chi, site)
    values = np.zeros(nb)
    sweeps = np.zeros(nb, dtype=int)
    history = np.full((nb, max_sweeps), np.nan)
    active = np.arange(nb)
    for sweep in range(max_sweeps):
        for site in range(n):
            shape = (2**site, 2, 2 ** (n - site - 1))
            # SU(2) inverse is the adjoint
            rest = _apply_site_batch(np.conj(np.swapaxes(ops[active, site], -1, -2)), chi[active], site)
            env = np.einsum("xay,bxcy->bac", bra.reshape(shape), rest.reshape((len(active),) + shape))
            v = np.stack(
                [
                    env[:, 0, 0] + env[:, 1, 1],
                    1j * (env[:, 0, 0] - env[:, 1, 1]),
                    env[:, 1, 0] - env[:, 0, 1],
                    1j * (env[:, 1, 0] + env[:, 0, 1]),
                ],
                axis=-1,
            )
            _, sv, vt = np.linalg.svd(np.stack([v.real, v.imag], axis=1))
            q[active, site] = vt[:, 0]
            ops[active, site] = _su2_batch(vt[:, 0])
            chi[active] = _apply_site_batch(ops[active, site], rest, site)
            values[active] = sv[:, 0] ** 2
        history[active, sweep] = values[active]
        sweeps[active] = sweep + 1
        if sweep > 0:
            gain = history[active, sweep] - history[active, sweep - 1]
            active = active[gain >= np.maximum(SWEEP_TOL, 1e-12 * values[active])]
            if active.size == 0:
                break
    return AlternatingRun(values, q, history[:, : sweeps.max()], sweeps)


def _random_spinors(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    q = rng.standard_normal(shape + (4,))
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def max_overlap_independent(
    psi: SymState, phi: SymState, restarts: int = DEFAULT_RESTARTS, seed: int = 42
) -> float:
    """``sup |<psi|U_1 (x) ... (x) U_N|phi>|^2`` over independent SU(2) factors.

    ``SCREEN_FACTOR * restarts`` seeded random starts get ``SCREEN_SWEEPS``
    sweeps; the best ``restarts`` of them are run to convergence.
    """
    _check_pair(psi, phi)
    rng = np.random.default_rng(seed)
    pool = _random_spinors(rng, (SCREEN_FACTOR * restarts, psi.n))
    screened = alternating_maximize(psi, phi, pool, max_sweeps=SCREEN_SWEEPS)
    keep = np.argsort(-screened.values, kind="stable")[:restarts]
    return alternating_maximize(psi, phi, screened.params[keep]).value


def symmetric_unitary_power(q: np.ndarray, n: int) -> np.ndarray:
    """Dicke-basis matrix of ``U(q)^{(x) n}``.

    Column k is built from ``(a + b t)^(n-k) (-conj(b) + conj(a) t)^k``: entry m is
    its ``t^m`` coefficient times ``sqrt(C(n,k) / C(n,m))``.
    """
    u = _su2(q)
    p0 = [np.ones(1, dtype=complex)]
    p1 = [np.ones(1, dtype=complex)]
    for _ in range(n):
        p0.append(np.convolve(p0[-1], u[:, 0]))
        p1.append(np.convolve(p1[-1], u[:, 1]))
    row = np.array([math.comb(n, m) for m in range(n + 1)], dtype=float)
    out = np.empty((n + 1, n + 1), dtype=complex)
    for k in range(n + 1):
        out[:, k] = np.convolve(p0[n - k], p1[k]) * np.sqrt(row[k] / row)
    return out


def symmetric_overlap(psi: SymState, phi: SymState, q: np.ndarray) -> complex:
    """``<psi|U(q)^{(x) n}|phi>`` evaluated in the Dicke basis."""
    _check_pair(psi, phi)
    return complex(np.vdot(psi.coeffs, symmetric_unitary_power(q, psi.n) @ phi.coeffs))


def _q_from_angles(v: np.ndarray) -> np.ndarray:
    # a = cos(v0) e^{i v1}, b = sin(v0) e^{i v2}
    c, s = math.cos(v[0]), math.sin(v[0])
    return np.array([c * math.cos(v[1]), c * math.sin(v[1]), s * math.cos(v[2]), s * math.sin(v[2])])


def _angles_from_q(q: np.ndarray) -> np.ndarray:
    a = complex(q[0], q[1])
    b = complex(q[2], q[3])
    return np.array([math.atan2(abs(b), abs(a)), np.angle(a), np.angle(b)])


def _symmetric_fidelity_batch(psi: SymState, phi: SymState, qs: np.ndarray) -> np.ndarray:
    """``|<psi|U(q)^{(x) n}|phi>|^2`` for each row of ``qs``."""
    n = psi.n
    a = qs[:, 0] + 1j * qs[:, 1]
    b = qs[:, 2] + 1j * qs[:, 3]
    col0 = np.stack([a, b], axis=-1)
    col1 = np.stack([-np.conj(b), np.conj(a)], axis=-1)
    amp = np.zeros(len(qs), dtype=complex)
    for k, phik in enumerate(phi.coeffs):
        if phik != 0:
            image = family_coeffs(n, k, col1, col0) / math.sqrt(math.comb(n, k))
            amp += phik * (image @ np.conj(psi.coeffs))
    return np.abs(amp) ** 2


def max_overlap_symmetric(
    psi: SymState, phi: SymState, restarts: int = DEFAULT_RESTARTS, seed: int = 42, pool: int = POOL_SIZE
) -> float:
    """``sup_U |<psi|U^{(x) N}|phi>|^2`` over SU(2).

    A seeded pool of random spinors is scored in one batch; the best
    ``restarts`` of them seed Nelder-Mead runs in the angle chart
    ``a = cos(t) e^{i u}``, ``b = sin(t) e^{i w}``.
    """
    _check_pair(psi, phi)
    rng = np.random.default_rng(seed)
    cand = rng.standard_normal((max(pool, restarts), 4))
    cand /= np.linalg.norm(cand, axis=1, keepdims=True)
    scores = _symmetric_fidelity_batch(psi, phi, cand)
    starts = cand[np.argsort(-scores, kind="stable")[:restarts]]

    def neg(v):
        return -abs(symmetric_overlap(psi, phi, _q_from_angles(v))) ** 2

    best = float(scores.max())
    for q in starts:
        res = minimize(neg, _angles_from_q(q), method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
        best = max(best, -float(res.fun))
    return best


def lu_equality_check(
    n: int, trials: int, restarts: int = DEFAULT_RESTARTS, seed: int = 42
) -> list[LuResult]:
    """Compare both maximizations on random symmetric pairs.

    Trial ``t`` draws its states from ``default_rng([seed, t])`` so results do
    not depend on evaluation order.
    """
    if n < 1 or trials < 1 or restarts < 1:
        raise DomainError(f"need n, trials, restarts >= 1, got {n}, {trials}, {restarts}")
    out = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        psi = random_sym_state(n, rng)
        phi = random_sym_state(n, rng)
        opt_seed = int(rng.integers(2**31))
        out.append(
            LuResult(
                max_overlap_independent(psi, phi, restarts, opt_seed),
                max_overlap_symmetric(psi, phi, restarts, opt_seed),
                restarts,
                seed,
            )
        )
    return out
