"""Symmetric N-qubit states in the Dicke basis and as dense statevectors.

Dense index convention: qubit 0 is the most significant bit, so the
computational basis state ``|b_0 b_1 ... b_{n-1}>`` sits at index
``sum(b_i << (n - 1 - i))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from symfid.binom import binom, binom_row
from symfid.errors import CapacityError, DegenerateError, DomainError

MAX_DENSE_QUBITS = 24
ZERO_NORM = 1e-300
NORM_TOL = 1e-12


def _normalize(vec: np.ndarray) -> tuple[np.ndarray, float]:
    norm = float(np.linalg.norm(vec))
    if norm < ZERO_NORM:
        raise DegenerateError("state has zero norm and cannot be normalized")
    return vec / norm, norm


@dataclass(frozen=True)
class Qubit:
    """Single-qubit pure state ``a0|0> + a1|1>``."""

    a0: complex
    a1: complex

    @classmethod
    def from_bloch(cls, x: float, phi: float = 0.0) -> "Qubit":
        """``sqrt(1 - x^2)|0> + x e^{i phi}|1>`` for ``x`` in [0, 1]."""
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"x must lie in [0, 1], got {x}")
        return cls(complex(np.sqrt(1.0 - x * x)), complex(x * np.exp(1j * phi)))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=complex)

    def normalized(self) -> "Qubit":
        v, _ = _normalize(self.vector)
        return Qubit(complex(v[0]), complex(v[1]))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(abs(self.a0) ** 2 + abs(self.a1) ** 2 - 1.0) <= tol


ZERO = Qubit(1.0, 0.0)
ONE = Qubit(0.0, 1.0)
PLUS = Qubit(2**-0.5, 2**-0.5)


@dataclass(frozen=True, eq=False)
class SymState:
    """Permutation-symmetric state; ``coeffs[k]`` is the amplitude on ``|D_n^(k)>``.

    ``norm`` holds the norm the coefficients had before normalization (or the
    norm of an intentionally unnormalized image, see ``normalized``).
    """

    n: int
    coeffs: np.ndarray
    norm: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"qubit count must be >= 1, got {self.n}")
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.n + 1,):
            raise DomainError(f"expected {self.n + 1} Dicke coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex]) -> "SymState":
        """Normalize raw Dicke coefficients, recording their original norm."""
        c = np.asarray(coeffs, dtype=complex)
        v, norm = _normalize(c)
        return cls(len(c) - 1, v, norm)

    @property
    def is_normalized(self) -> bool:
        return abs(np.vdot(self.coeffs, self.coeffs).real - 1.0) <= NORM_TOL

    def normalized(self) -> "SymState":
        v, norm = _normalize(self.coeffs)
        return SymState(self.n, v, norm)


@dataclass(frozen=True, eq=False)
class DenseState:
    """Full ``2**n`` statevector, qubit 0 most significant."""

    n: int
    amps: np.ndarray
    norm: float = 1.0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DENSE_QUBITS:
            raise CapacityError(f"dense states support 1..{MAX_DENSE_QUBITS} qubits, got {self.n}")
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (2**self.n,):
            raise DomainError(f"expected {2**self.n} amplitudes, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @classmethod
    def from_amps(cls, amps: Sequence[complex]) -> "DenseState":
        a = np.asarray(amps, dtype=complex)
        n = int(round(np.log2(len(a))))
        v, norm = _normalize(a)
        return cls(n, v, norm)

    @property
    def is_normalized(self) -> bool:
        return abs(np.vdot(self.amps, self.amps).real - 1.0) <= NORM_TOL

    def normalized(self) -> "DenseState":
        v, norm = _normalize(self.amps)
        return DenseState(self.n, v, norm)

    def permute(self, perm: Sequence[int]) -> "DenseState":
        """Relabel qubits: qubit ``i`` of the result is qubit ``perm[i]`` of ``self``."""
        if sorted(perm) != list(range(self.n)):
            raise DomainError(f"{perm} is not a permutation of {self.n} qubits")
        t = self.amps.reshape((2,) * self.n).transpose(perm)
        return DenseState(self.n, t.reshape(-1), self.norm)


State = Union[SymState, DenseState]


@dataclass(frozen=True)
class OverlapValue:
    value: complex
    fidelity: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "fidelity", float(abs(self.value) ** 2))


@lru_cache(maxsize=None)
def hamming_weights(n: int) -> np.ndarray:
    """Number of ones in each dense index of an ``n``-qubit register."""
    idx = np.arange(2**n)
    w = np.zeros(2**n, dtype=np.int64)
    for b in range(n):
        w += (idx >> b) & 1
    w.setflags(write=False)
    return w


def dicke(n: int, k: int) -> SymState:
    if n < 1:
        raise DomainError(f"qubit count must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise DomainError(f"excitation number must satisfy 0 <= k <= n, got k={k}, n={n}")
    c = np.zeros(n + 1, dtype=complex)
    c[k] = 1.0
    return SymState(n, c)


def sym_to_dense(s: SymState) -> DenseState:
    """Expand a symmetric state: each weight-k bitstring gets ``coeffs[k] / sqrt(C(n, k))``."""
    if s.n > MAX_DENSE_QUBITS:
        raise CapacityError(f"dense states support at most {MAX_DENSE_QUBITS} qubits, got {s.n}")
    scale = s.coeffs / np.sqrt(binom_row(s.n))
    return DenseState(s.n, scale[hamming_weights(s.n)], s.norm)


def dense_to_sym(d: DenseState, atol: float = 1e-10) -> SymState:
    """Project back to the Dicke basis; raises if ``d`` is not permutation symmetric."""
    w = hamming_weights(d.n)
    coeffs = np.array([d.amps[w == k].sum() for k in range(d.n + 1)]) / np.sqrt(binom_row(d.n))
    back = sym_to_dense(SymState(d.n, coeffs))
    if np.max(np.abs(back.amps - d.amps)) > atol:
        raise DomainError("dense state is not permutation symmetric")
    return SymState(d.n, coeffs, d.norm)


def overlap(a: State, b: State) -> OverlapValue:
    """``<a|b>`` and its squared modulus; states are used as stored (no renormalization)."""
    if a.n != b.n:
        raise DomainError(f"qubit counts differ: {a.n} vs {b.n}")
    if isinstance(a, SymState) and isinstance(b, SymState):
        return OverlapValue(complex(np.vdot(a.coeffs, b.coeffs)))
    da = sym_to_dense(a) if isinstance(a, SymState) else a
    db = sym_to_dense(b) if isinstance(b, SymState) else b
    return OverlapValue(complex(np.vdot(da.amps, db.amps)))


def _check_qubit(q: Qubit) -> None:
    if not q.is_normalized():
        raise DomainError(f"single-qubit state {q} is not normalized")


def product_state(qs: Sequence[Qubit]) -> DenseState:
    if len(qs) < 1:
        raise DomainError("need at least one qubit")
    amps = np.ones(1, dtype=complex)
    for q in qs:
        _check_qubit(q)
        amps = np.kron(amps, q.vector)
    return DenseState(len(qs), amps)


def family_coeffs(n: int, kp: int, eps: np.ndarray, epsp: np.ndarray) -> np.ndarray:
    """Dicke coefficients of the unnormalized sum over placements of ``kp`` copies of
    ``eps`` and ``n - kp`` copies of ``epsp``.

    ``eps`` and ``epsp`` are arrays of shape ``(..., 2)``; the result has shape
    ``(..., n + 1)``. The amplitude of a weight-m bitstring is the coefficient of
    ``t^m`` in ``C(n, kp) (e0 + e1 t)^kp (e0' + e1' t)^(n - kp)`` divided by
    ``C(n, m)``.
    """
    eps = np.asarray(eps, dtype=complex)
    epsp = np.asarray(epsp, dtype=complex)
    shape = np.broadcast_shapes(eps.shape[:-1], epsp.shape[:-1])
    poly = np.zeros(shape + (n + 1,), dtype=complex)
    poly[..., 0] = 1.0
    for step in range(n):
        q = eps if step < kp else epsp
        shifted = np.zeros_like(poly)
        shifted[..., 1:] = poly[..., :-1]
        poly = q[..., 0:1] * poly + q[..., 1:2] * shifted
    row = binom_row(n)
    return binom(n, kp) * poly / np.sqrt(row)


def family_norm_sq(n: int, kp: int, eps: Qubit, epsp: Qubit) -> float:
    """Squared norm of the unnormalized family sum, i.e. ``1 / N^2`` in closed form:
    ``C(n, kp) * sum_j C(kp, j) C(n - kp, j) |<eps|epsp>|^(2j)``.
    """
    s = abs(np.vdot(eps.vector, epsp.vector)) ** 2
    return binom(n, kp) * sum(binom(kp, j) * binom(n - kp, j) * s**j for j in range(kp + 1))


def symmetric_family_sym(n: int, kp: int, eps: Qubit, epsp: Qubit) -> SymState:
    """Normalized symmetric state with ``kp`` qubits in ``eps`` and the rest in ``epsp``."""
    if not 0 <= kp <= n:
        raise DomainError(f"need 0 <= kp <= n, got kp={kp}, n={n}")
    _check_qubit(eps)
    _check_qubit(epsp)
    if abs(np.vdot(eps.vector, epsp.vector)) >= 1.0 - 1e-9:
        raise DegenerateError("the two single-qubit states must be distinct")
    return SymState.from_coeffs(family_coeffs(n, kp, eps.vector, epsp.vector))


def symmetric_family_state(n: int, kp: int, eps: Qubit, epsp: Qubit) -> DenseState:
    return sym_to_dense(symmetric_family_sym(n, kp, eps, epsp))


def random_sym_state(n: int, rng: np.random.Generator) -> SymState:
    """Independent standard complex Gaussian Dicke coefficients, normalized."""
    z = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    return SymState.from_coeffs(z)
