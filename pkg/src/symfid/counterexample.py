"""Non-symmetric W_N^(k) states approaching |D_N^(1)>.

The family is ``g(eps) |D_N^(k)>`` with ``g(eps) = A(eps)^{(x)(N-1)} (x) B_{N,k}(eps)``.
Its image decomposes as ``|D_N^(1)> + |psi_eps>`` (up to scale), where
``|psi_eps>`` lives on ``|D_{N-1}^(m)> (x) |b>`` with the last qubit split off.
That split basis is kept as its own representation so the construction works
beyond the dense size limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from symfid.binom import binom
from symfid.errors import DegenerateError, DomainError
from symfid.localops import LocalOperator, a_matrix, apply_local, b_matrix
from symfid.symstate import (
    ZERO_NORM,
    DenseState,
    SymState,
    dicke,
    overlap,
    sym_to_dense,
)


@dataclass(frozen=True)
class CoeffTriple:
    a: float
    b: float
    c: float
    j: int


@dataclass(frozen=True, eq=False)
class SplitState:
    """State ``sum_m on0[m] |D_{n-1}^(m)>|0> + on1[m] |D_{n-1}^(m)>|1>``."""

    n: int
    on0: np.ndarray
    on1: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.on0, self.on0).real + np.vdot(self.on1, self.on1).real))

    def __add__(self, other: "SplitState") -> "SplitState":
        return SplitState(self.n, self.on0 + other.on0, self.on1 + other.on1)

    def scaled(self, factor: complex) -> "SplitState":
        return SplitState(self.n, factor * self.on0, factor * self.on1)

    def vdot(self, other: "SplitState") -> complex:
        return complex(np.vdot(self.on0, other.on0) + np.vdot(self.on1, other.on1))

    def to_dense(self) -> DenseState:
        zero = np.array([1.0, 0.0])
        one = np.array([0.0, 1.0])
        head0 = sym_to_dense(SymState(self.n - 1, self.on0)).amps
        head1 = sym_to_dense(SymState(self.n - 1, self.on1)).amps
        amps = np.kron(head0, zero) + np.kron(head1, one)
        return DenseState(self.n, amps, self.norm)


def dicke1_split(n: int) -> SplitState:
    """``|D_n^(1)> = (|D_{n-1}^(0)>|1> + sqrt(n-1) |D_{n-1}^(1)>|0>) / sqrt(n)``."""
    on0 = np.zeros(n, dtype=complex)
    on1 = np.zeros(n, dtype=complex)
    on0[1] = math.sqrt((n - 1) / n)
    on1[0] = 1 / math.sqrt(n)
    return SplitState(n, on0, on1)


def _check_nk(n: int, k: int) -> None:
    if n < 4 or not 2 <= k <= n - 2:
        raise DomainError(f"need n >= 4 and 2 <= k <= n - 2, got n={n}, k={k}")


def coeff_triple(n: int, k: int, j: int) -> CoeffTriple:
    _check_nk(n, k)
    if not 1 <= j <= n - k:
        raise DomainError(f"need 1 <= j <= n - k = {n - k}, got j={j}")
    return _triple(n, k, j)


def _triple(n: int, k: int, j: int) -> CoeffTriple:
    # valid for j = 0 as well; the j = 0 term reproduces |D_n^(1)>
    a = binom(n - j - 1, k - 1) / binom(n - 2, k - 1) * math.sqrt(binom(n - 1, j) / n)
    b = (n - j - k) * math.sqrt((j + 1) / (n - j - 1))
    c = ((j - k) - n * (j - 1)) / (n - 1)
    return CoeffTriple(a, b, c, j)


def g_operators(n: int, k: int, eps: float) -> list[LocalOperator]:
    """``A(eps)`` on the first n-1 qubits, ``B_{n,k}(eps)`` on the last one."""
    return [a_matrix(eps)] * (n - 1) + [b_matrix(n, k, eps)]


def psi_eps_split(n: int, k: int, eps: float) -> SplitState:
    _check_nk(n, k)
    on0 = np.zeros(n, dtype=complex)
    on1 = np.zeros(n, dtype=complex)
    for j in range(1, n - k + 1):
        t = _triple(n, k, j)
        w = (-eps) ** j * t.a
        on0[j + 1] += w * t.b
        on1[j] += w * t.c
    return SplitState(n, on0, on1)


def psi_eps(n: int, k: int, eps: float) -> DenseState:
    """Unnormalized correction state; zero at ``eps = 0``."""
    return psi_eps_split(n, k, eps).to_dense()


def psi_N_k_split(n: int, k: int, eps: float) -> SplitState:
    if abs(eps) <= ZERO_NORM:
        raise DegenerateError("g_{N,k}(0) annihilates |D_N^(k)>; the state is undefined at eps = 0")
    s = dicke1_split(n) + psi_eps_split(n, k, eps)
    return s.scaled(1 / s.norm)


def psi_N_k(n: int, k: int, eps: float) -> DenseState:
    """Normalized ``(|D_N^(1)> + |psi_eps>) / sqrt(1 + ||psi_eps||^2)``."""
    return psi_N_k_split(n, k, eps).to_dense()


def proportionality_constant(n: int, k: int, eps: float) -> float:
    """Scale between ``g(eps)|D_N^(k)>`` and ``|D_N^(1)> + |psi_eps>``."""
    alpha_n = binom(n, k) / n
    alpha_n1 = binom(n - 1, k) / (n - 1)
    return eps * alpha_n1 / math.sqrt(alpha_n)


def fidelity_to_dicke1(n: int, k: int, eps: float) -> float:
    s = psi_N_k_split(n, k, eps)
    return abs(dicke1_split(n).vdot(s)) ** 2


@dataclass(frozen=True)
class SweepPoint:
    eps: float
    fidelity: float
    residual_norm: float


@dataclass(frozen=True)
class EpsSweep:
    n: int
    k: int
    records: list[SweepPoint] = field(default_factory=list)


def eps_sweep(n: int, k: int, eps_min: float, eps_max: float, points: int) -> EpsSweep:
    """Fidelity of ``psi_N_k(eps)`` with ``|D_N^(1)>`` on a log-spaced grid, sorted by eps."""
    if not 0 < eps_min < eps_max:
        raise DomainError(f"need 0 < eps_min < eps_max, got {eps_min}, {eps_max}")
    if points < 2:
        raise DomainError(f"need at least 2 points, got {points}")
    records = [
        SweepPoint(float(e), fidelity_to_dicke1(n, k, e), psi_eps_split(n, k, e).norm)
        for e in np.geomspace(eps_min, eps_max, points)
    ]
    return EpsSweep(n, k, sorted(records, key=lambda r: r.eps))


def leading_loss_coefficient(n: int, k: int) -> float:
    """``C`` in ``||psi_eps||^2 = C eps^2 + O(eps^4)``: the j = 1 term."""
    t = _triple(n, k, 1)
    return t.a**2 * (t.b**2 + t.c**2)


def generalized_target_sweep(
    h: Sequence[LocalOperator], n: int, k: int, eps: float
) -> tuple[DenseState, DenseState, float]:
    """Move both ``|D_N^(1)>`` and ``psi_N_k(eps)`` by the invertible local operation ``h``.

    Returns ``(target, state, fidelity)`` with both states normalized.
    """
    if len(h) != n:
        raise DomainError(f"need {n} operators, got {len(h)}")
    if not all(op.invertible for op in h):
        raise DomainError("every local operator in h must be invertible")
    target = apply_local(h, sym_to_dense(dicke(n, 1))).normalized()
    state = apply_local(h, psi_N_k(n, k, eps)).normalized()
    return target, state, overlap(target, state).fidelity


def inverse_image_numeric(n: int, k: int, eps: float) -> DenseState:
    """Normalized ``g(eps)^{-1} |D_N^(1)>`` computed by matrix inversion."""
    inv = [op.inverse() for op in g_operators(n, k, eps)]
    return apply_local(inv, sym_to_dense(dicke(n, 1))).normalized()


def inverse_image_state(n: int, k: int, check_eps: Sequence[float] = (0.1, 0.7)) -> DenseState:
    """Closed form of ``g(eps)^{-1}|D_N^(1)>``, which does not depend on eps.

    ``(n-2)k |1..1> + (n-3)(n-k) |1..1,0>
    - |D_{n-1}^(n-2)> (x) [(n-2)(n-k)/sqrt(n-1) |0> + sqrt(n-1) k |1>]``,
    normalized. The result is checked against the inverted operators at each
    of ``check_eps``.
    """
    _check_nk(n, k)
    dim = 2**n
    amps = np.zeros(dim, dtype=complex)
    amps[dim - 1] += (n - 2) * k
    amps[dim - 2] += (n - 3) * (n - k)
    head = sym_to_dense(dicke(n - 1, n - 2)).amps
    tail = np.array([(n - 2) * (n - k) / math.sqrt(n - 1), math.sqrt(n - 1) * k])
    amps -= np.kron(head, tail)
    state = DenseState.from_amps(amps)
    for e in check_eps:
        mod = abs(overlap(state, inverse_image_numeric(n, k, e)).value)
        if abs(mod - 1.0) > 1e-10:
            raise ArithmeticError(f"closed form disagrees with g^-1|D_N^(1)> at eps={e}: |<.|.>|={mod}")
    return state
