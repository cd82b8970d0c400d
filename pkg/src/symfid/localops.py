"""Single-qubit operators and their tensor-product action on states."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from symfid.binom import binom, binom_row
from symfid.errors import DomainError
from symfid.symstate import DenseState, SymState, family_coeffs

INVERTIBLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """2x2 complex matrix acting on one qubit."""

    entries: np.ndarray
    det: complex = field(init=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"local operator must be 2x2, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "det", complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]))

    @property
    def invertible(self) -> bool:
        return abs(self.det) > INVERTIBLE_TOL

    def __matmul__(self, other: "LocalOperator") -> "LocalOperator":
        return LocalOperator(self.entries @ other.entries)

    def inverse(self) -> "LocalOperator":
        if not self.invertible:
            raise DomainError("operator is singular")
        return LocalOperator(np.linalg.inv(self.entries))

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.entries @ np.asarray(v, dtype=complex)


IDENTITY = LocalOperator(np.eye(2))


def a_matrix(eps: float) -> LocalOperator:
    return LocalOperator([[1.0, 1.0], [-eps, 0.0]])


def b_matrix(n: int, k: int, eps: float) -> LocalOperator:
    if n < 3 or not 1 <= k <= n - 1:
        raise DomainError(f"B operator needs n >= 3 and 1 <= k <= n - 1, got n={n}, k={k}")
    r = 1.0 - n / k
    return LocalOperator([[1.0, r], [eps, (n - 2) / (n - 1) * r * eps]])


def apply_local(ops: Sequence[LocalOperator], s: DenseState) -> DenseState:
    """Apply ``ops[0] (x) ops[1] (x) ...`` to ``s``; the image is left unnormalized.

    The returned state's ``norm`` is the norm of the image; call ``.normalized()``
    for the unit vector.
    """
    if len(ops) != s.n:
        raise DomainError(f"need {s.n} operators, got {len(ops)}")
    psi = np.array(s.amps)
    for i, op in enumerate(ops):
        psi = np.einsum("ab,xby->xay", op.entries, psi.reshape(2**i, 2, -1)).reshape(-1)
    return DenseState(s.n, psi, float(np.linalg.norm(psi)))


def symmetric_power(op: LocalOperator, n: int) -> np.ndarray:
    """Dicke-basis matrix of ``op^{(x) n}`` restricted to the symmetric subspace.

    Column k holds the coefficients of ``(m00 + m10 t)^(n-k) (m01 + m11 t)^k``,
    rescaled from the unnormalized to the normalized Dicke basis.
    """
    m = op.entries
    cols = [family_coeffs(n, k, m[:, 1], m[:, 0]) / np.sqrt(binom(n, k)) for k in range(n + 1)]
    return np.stack(cols, axis=1)


def apply_sym(op: LocalOperator, s: SymState) -> SymState:
    """``op^{(x) n}`` applied to a symmetric state; unnormalized, with its norm recorded."""
    c = symmetric_power(op, s.n) @ s.coeffs
    return SymState(s.n, c, float(np.linalg.norm(c)))


def apply_A_tensor_sym(eps: float, s: SymState) -> SymState:
    """``A(eps)^{(x) n}`` on a symmetric state via its closed Dicke-basis action.

    ``A^{(x) n} |u_n^(k)> = C(n,k) sum_j (-eps)^j C(n-k, j) / sqrt(C(n, j)) |D_n^(j)>``
    with ``|u_n^(k)> = sqrt(C(n,k)) |D_n^(k)>``.
    """
    n = s.n
    row = binom_row(n)
    out = np.zeros(n + 1, dtype=complex)
    for k, ck in enumerate(s.coeffs):
        if ck == 0:
            continue
        j = np.arange(n - k + 1)
        terms = row[k] * (-eps) ** j * binom_row(n - k) / np.sqrt(row[j])
        out[: n - k + 1] += ck / np.sqrt(row[k]) * terms
    return SymState(n, out, float(np.linalg.norm(out)))
