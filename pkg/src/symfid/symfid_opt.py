"""Fidelity between Dicke states and the symmetric members of W_N^(k') classes.

A symmetric state of the W_N^(k') class is a normalized sum over placements of
``k'`` qubits in ``|e>`` and ``N - k'`` qubits in ``|e'> != |e>``. With
``|e> = sqrt(1-x'^2)|0> + x' e^{i phi'}|1>`` and ``|e'> = sqrt(1-x^2)|0> + x e^{i phi}|1>``
its fidelity with ``|D_N^(k)>`` depends only on ``x``, ``x'`` and
``y = cos(phi - phi')``; ``objective_general`` evaluates it and
``max_sym_fidelity`` takes the supremum over the box.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.ndimage import maximum_filter
from scipy.optimize import minimize

from symfid.binom import EXACT_LIMIT, binom, log_binom
from symfid.errors import DegenerateError, DomainError
from symfid.symstate import Qubit, SymState, family_coeffs, overlap, symmetric_family_state

DENOM_FLOOR = 1e-300
GRID_SHAPE = (65, 65, 33)
N_STARTS = 5
PARAM_TOL = 1e-10
MAX_SIMPLEX_ITER = 4000
FUN_TOL = 1e-12


@dataclass(frozen=True)
class ObjectiveParams:
    x: float
    xp: float
    y: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.xp <= 1.0):
            raise DomainError(f"x and xp must lie in [0, 1], got {self.x}, {self.xp}")
        if not -1.0 <= self.y <= 1.0:
            raise DomainError(f"y must lie in [-1, 1], got {self.y}")


@dataclass(frozen=True)
class OptResult:
    value: float
    argmax: ObjectiveParams
    iterations: int
    converged: bool
    restarts_used: int
    skipped_points: int = 0


def _check_indices(n: int, k: int, kp: int) -> None:
    if n < 1 or not (0 <= k <= n and 0 <= kp <= n):
        raise DomainError(f"need 0 <= k, kp <= n, got n={n}, k={k}, kp={kp}")


def _check_box(x: float, xp: float) -> None:
    if not (0.0 <= x <= 1.0 and 0.0 <= xp <= 1.0):
        raise DomainError(f"x and xp must lie in [0, 1], got {x}, {xp}")


def _pow(base: float, expo: float) -> float:
    return 1.0 if expo == 0 else base**expo


def c_coeffs(n: int, k: int, kp: int, x: float, xp: float) -> np.ndarray:
    """``c_j = C(k,j) C(n-k,kp-j) x^(k-j) (1-x^2)^((n-kp-k+j)/2) xp^j (1-xp^2)^((kp-j)/2)``."""
    _check_indices(n, k, kp)
    _check_box(x, xp)
    sx, sxp = math.sqrt(1.0 - x * x), math.sqrt(1.0 - xp * xp)
    out = np.zeros(kp + 1)
    for j in range(kp + 1):
        b = binom(k, j) * binom(n - k, kp - j)
        if b == 0.0:
            continue
        out[j] = b * _pow(x, k - j) * _pow(sx, n - kp - k + j) * _pow(xp, j) * _pow(sxp, kp - j)
    return out


@dataclass(frozen=True)
class _Prepared:
    n: int
    k: int
    kp: int
    js: tuple[int, ...]  # support of c_j
    log_cbinom: tuple[float, ...]  # log C(k,j) C(n-k,kp-j) on the support
    log_den: tuple[float, ...]  # log C(kp,j) C(n-kp,j), j = 0..kp
    log_prefactor: float  # log C(n,k) / C(n,kp)
    cbinom: tuple[float, ...]  # C(k,j) C(n-k,kp-j) on the support
    exponents: tuple[tuple[int, int, int, int], ...]  # powers of x, sqrt(1-x^2), xp, sqrt(1-xp^2)
    prefactor: float

    @property
    def den_shift(self) -> float:
        return max(self.log_den)

    @property
    def den_scaled(self) -> tuple[float, ...]:
        """Denominator coefficients divided by the largest one, highest degree first."""
        m = self.den_shift
        return tuple(math.exp(v - m) for v in reversed(self.log_den))

    @property
    def log_mode(self) -> bool:
        return self.n > EXACT_LIMIT


def _log_denominator(p: _Prepared, s: float) -> float:
    shift = p.den_shift
    if shift < 600.0:
        acc = 0.0
        for coef in _den_coeffs(p):
            acc = acc * s + coef
        return shift + math.log(acc)
    ls = _log_or_ninf(s)
    logs = [lb + (j * ls if j else 0.0) for j, lb in enumerate(p.log_den)]
    m = max(logs)
    return m + math.log(sum(math.exp(v - m) for v in logs))


@lru_cache(maxsize=4096)
def _den_coeffs(p: _Prepared) -> tuple[float, ...]:
    return p.den_scaled


@lru_cache(maxsize=4096)
def _prepare(n: int, k: int, kp: int) -> _Prepared:
    _check_indices(n, k, kp)
    if k == kp:
        raise DomainError("k and kp must differ: the fidelity is taken across distinct classes")
    # contiguous: max(0, kp - n + k) <= j <= min(k, kp)
    js = tuple(j for j in range(kp + 1) if j <= k and kp - j <= n - k)
    return _Prepared(
        n,
        k,
        kp,
        js,
        tuple(log_binom(k, j) + log_binom(n - k, kp - j) for j in js),
        tuple(log_binom(kp, j) + log_binom(n - kp, j) for j in range(kp + 1)),
        log_binom(n, k) - log_binom(n, kp),
        tuple(binom(k, j) * binom(n - k, kp - j) for j in js),
        tuple((k - j, n - kp - k + j, j, kp - j) for j in js),
        binom(n, k) / binom(n, kp),
    )


def _overlap_sq(x: float, sx: float, xp: float, sxp: float, y: float) -> float:
    """``|<e|e'>|^2 = x^2 x'^2 + (1-x^2)(1-x'^2) + 2 y x x' sqrt((1-x^2)(1-x'^2))``.

    ``sx`` and ``sxp`` are ``sqrt(1-x^2)`` and ``sqrt(1-x'^2)``.
    """
    a, b = x * xp, sx * sxp
    return a * a + b * b + 2 * y * a * b


def _log_or_ninf(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


def _log_c(p: _Prepared, x: float, sx: float, xp: float, sxp: float) -> list[float]:
    lx, lxp = _log_or_ninf(x), _log_or_ninf(xp)
    lsx, lsxp = _log_or_ninf(sx), _log_or_ninf(sxp)
    out = []
    for lb, (ex, esx, exp_, esxp) in zip(p.log_cbinom, p.exponents):
        # 0 * log(0) counts as 0
        out.append(
            lb
            + (ex * lx if ex else 0.0)
            + (esx * lsx if esx else 0.0)
            + (exp_ * lxp if exp_ else 0.0)
            + (esxp * lsxp if esxp else 0.0)
        )
    return out


def _c_direct(p: _Prepared, x: float, sx: float, xp: float, sxp: float) -> list[float]:
    # float ** 0 is 1, including 0.0 ** 0
    return [b * x**ex * sx**esx * xp**exp_ * sxp**esxp for b, (ex, esx, exp_, esxp) in zip(p.cbinom, p.exponents)]


def _phase(y: float) -> complex:
    """``e^{i theta}`` with ``theta = arccos(y)``, y clamped to [-1, 1]."""
    y = min(1.0, max(-1.0, y))
    return complex(y, math.sqrt(1.0 - y * y))


def _chebyshev_numerator(c: list[float], y: float) -> float:
    """``sum_j (2 - delta_j0) [sum_{j'>=j} c_j' c_{j'-j}] T_j(y)``.

    The double sum is ``|sum_j c_j e^{i j theta}|^2`` with ``y = cos theta``;
    that form costs O(kp) and is evaluated by Horner's rule over the
    contiguous support of ``c``.
    """
    w = _phase(y)
    z = 0j
    for cj in reversed(c):
        z = z * w + cj
    return z.real * z.real + z.imag * z.imag


def _evaluate(p: _Prepared, x: float, xp: float, y: float) -> float:
    return _evaluate_full(p, x, math.sqrt(1.0 - x * x), xp, math.sqrt(1.0 - xp * xp), y)


def _evaluate_full(p: _Prepared, x: float, sx: float, xp: float, sxp: float, y: float) -> float:
    s = _overlap_sq(x, sx, xp, sxp, y)
    if not p.log_mode:
        den = math.exp(_log_denominator(p, s))
        if den < DENOM_FLOOR:
            raise DegenerateError(f"vanishing denominator at x={x}, xp={xp}, y={y}")
        return p.prefactor * _chebyshev_numerator(_c_direct(p, x, sx, xp, sxp), y) / den
    logc = _log_c(p, x, sx, xp, sxp)
    top = max(logc)
    if top == -math.inf:
        return 0.0
    num = _chebyshev_numerator([math.exp(lc - top) for lc in logc], y)
    if num <= 0.0:
        return 0.0
    return math.exp(p.log_prefactor + 2 * top + math.log(num) - _log_denominator(p, s))


def objective_general(n: int, k: int, kp: int, p: ObjectiveParams) -> float:
    """Fidelity of ``|D_n^(k)>`` with the symmetric W_n^(kp) state at ``p``.

    ``C(n,k)/C(n,kp) * sum_j (2-d_j0) [sum_j' c_j' c_(j'-j)] T_j(y)
    / sum_j C(kp,j) C(n-kp,j) s^j`` where ``s`` is the squared overlap of the
    two single-qubit states. Evaluated in the log domain for ``n > 60``.
    """
    return _evaluate(_prepare(n, k, kp), p.x, p.xp, p.y)


def objective_f_dn1(n: int, k: int, p: ObjectiveParams) -> float:
    """``N C(N,k) f(x, x', y)``: fidelity of ``|D_N^(1)>`` with the symmetric W_N^(k) state."""
    if n < 4 or not 2 <= k <= n // 2:
        raise DomainError(f"need n >= 4 and 2 <= k <= n/2, got n={n}, k={k}")
    x, xp, y = p.x, p.xp, p.y
    sx2, sxp2 = 1 - x * x, 1 - xp * xp
    kt = k / n
    bracket = (
        (1 - kt) ** 2 * x * x * sxp2
        + kt**2 * xp * xp * sx2
        + 2 * kt * (1 - kt) * y * x * xp * math.sqrt(sx2) * math.sqrt(sxp2)
    )
    if bracket <= 0.0:
        return 0.0
    s = x * x * xp * xp + sx2 * sxp2 + 2 * y * x * xp * math.sqrt(sx2 * sxp2)
    ls = _log_or_ninf(s)
    logs = [log_binom(k, j) + log_binom(n - k, j) + (j * ls if j else 0.0) for j in range(k + 1)]
    m = max(logs)
    log_den = m + math.log(sum(math.exp(v - m) for v in logs))
    log_num = math.log(n) + log_binom(n, k) + math.log(bracket)
    for expo, base in ((n - k - 1, sx2), (k - 1, sxp2)):
        if expo:
            if base <= 0.0:
                return 0.0
            log_num += expo * math.log(base)
    return math.exp(log_num - log_den)


def objective_grid(n: int, k: int, kp: int, x, xp, y) -> np.ndarray:
    """Vectorized ``objective_general`` over broadcastable arrays.

    The single-qubit factors are computed on the ``(x, xp)`` broadcast only; the
    ``y`` axis enters through the Chebyshev terms and the denominator.
    """
    p = _prepare(n, k, kp)
    x, xp, y = (np.asarray(a, dtype=float) for a in (x, xp, y))
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = {"x": np.log(x), "sx": 0.5 * np.log1p(-x * x), "xp": np.log(xp), "sxp": 0.5 * np.log1p(-xp * xp)}
        logc = []
        for j, lb in zip(p.js, p.log_cbinom):
            acc = np.zeros(np.broadcast_shapes(x.shape, xp.shape)) + lb
            for expo, key in ((k - j, "x"), (n - kp - k + j, "sx"), (j, "xp"), (kp - j, "sxp")):
                if expo:
                    acc = acc + expo * logs[key]
            logc.append(acc)
        logc = np.stack(logc)
        top = logc.max(axis=0)
        scaled = np.exp(logc - np.where(np.isfinite(top), top, 0.0))
    theta = np.arccos(np.clip(y, -1.0, 1.0))
    pos = {j: i for i, j in enumerate(p.js)}
    num = 0.0
    for lag in range(p.js[-1] - p.js[0] + 1):
        acc = sum(scaled[pos[j]] * scaled[pos[j - lag]] for j in p.js if j - lag in pos)
        num = num + (1.0 if lag == 0 else 2.0) * acc * np.cos(lag * theta)
    num = np.maximum(num, 0.0)
    sx2, sxp2 = 1 - x * x, 1 - xp * xp
    s = np.clip(x * x * xp * xp + sx2 * sxp2 + 2 * y * (x * xp * np.sqrt(sx2 * sxp2)), 0.0, 1.0)
    if p.den_shift < 600.0:
        coefs = _den_coeffs(p)
        den = np.full(s.shape, coefs[0])
        for coef in coefs[1:]:
            den *= s
            den += coef
        log_den = p.den_shift + np.log(den)
    else:
        with np.errstate(divide="ignore"):
            ls = np.log(s)
        terms = np.stack([lb + (j * ls if j else 0.0 * ls) for j, lb in enumerate(p.log_den)])
        m = terms.max(axis=0)
        log_den = m + np.log(np.exp(terms - m).sum(axis=0))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(p.log_prefactor + 2 * top + np.log(num) - log_den)
    return np.where(np.isfinite(top) & (num > 0), out, 0.0)


def _top_indices(flat: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` largest entries, ties broken by smallest index."""
    count = min(count, flat.size)
    cut = np.partition(flat, flat.size - count)[flat.size - count]
    cand = np.flatnonzero(flat >= cut)
    return cand[np.lexsort((cand, -flat[cand]))][:count]


def _from_angles(v: np.ndarray) -> tuple[float, float, float]:
    return abs(math.sin(v[0])), abs(math.sin(v[1])), math.cos(v[2])


def max_sym_fidelity(
    n: int,
    k: int,
    kp: int,
    grid: tuple[int, int, int] = GRID_SHAPE,
    starts: int = N_STARTS,
    tol: float = PARAM_TOL,
) -> OptResult:
    """Supremum of ``objective_general`` over ``[0,1]^2 x [-1,1]``.

    A coarse grid is scanned first; the best ``starts`` grid points seed a
    Nelder-Mead refinement in angle coordinates ``x = |sin u|``,
    ``x' = |sin u'|``, ``y = cos v`` so the box boundary is reachable without
    constraints. Fully deterministic.
    """
    prep = _prepare(n, k, kp)
    # uniform in angle: resolves the narrow peaks near x, x' = 0 or 1 at large n
    gx = np.sin(np.linspace(0.0, math.pi / 2, grid[0]))
    gxp = np.sin(np.linspace(0.0, math.pi / 2, grid[1]))
    gy = np.cos(np.linspace(math.pi, 0.0, grid[2]))
    gx[-1] = gxp[-1] = 1.0
    vals = objective_grid(n, k, kp, gx[:, None, None], gxp[None, :, None], gy[None, None, :])
    finite = np.isfinite(vals)
    skipped = int((~finite).sum())
    flat = np.where(finite, vals, -np.inf).ravel()
    # C order among ties: smallest (x, xp, y) first
    order = _top_indices(flat, starts)

    def neg(v):
        u, up, t = v.tolist()
        try:
            return -_evaluate_full(prep, abs(math.sin(u)), abs(math.cos(u)), abs(math.sin(up)), abs(math.cos(up)), math.cos(t))
        except DegenerateError:
            return math.inf

    candidates = []
    iterations = 0
    for idx in order:
        i, j, l = np.unravel_index(idx, vals.shape)
        v0 = np.array([math.asin(gx[i]), math.asin(gxp[j]), math.acos(gy[l])])
        res = minimize(
            neg,
            v0,
            method="Nelder-Mead",
            options={"xatol": tol, "fatol": FUN_TOL, "maxiter": MAX_SIMPLEX_ITER, "initial_simplex": _simplex(v0)},
        )
        iterations += int(res.nit)
        x, xp, y = _from_angles(res.x)
        candidates.append((-float(res.fun), (x, xp, y), bool(res.success)))
        # where the objective is flat in y, the tie-break below settles on y = -1
        flat_y = -neg(np.array([res.x[0], res.x[1], math.pi]))
        candidates.append((flat_y, (x, xp, -1.0), bool(res.success)))
        candidates.append((float(flat[idx]), (float(gx[i]), float(gxp[j]), float(gy[l])), True))

    best_val = max(c[0] for c in candidates)
    ties = [c for c in candidates if c[0] >= best_val - 1e-13]
    value, (x, xp, y), ok = min(ties, key=lambda c: c[1])
    if kp >= 2 and abs(y + 1.0) > 1e-6:
        warnings.warn(f"optimum for (n={n}, k={k}, kp={kp}) found at y={y:.9f}, not y=-1", stacklevel=2)
    return OptResult(
        value=value,
        argmax=ObjectiveParams(min(x, 1.0), min(xp, 1.0), max(-1.0, min(1.0, y))),
        iterations=iterations,
        converged=all(c[2] for c in candidates),
        restarts_used=len(order),
        skipped_points=skipped,
    )


def _simplex(v0: np.ndarray, step: float = 0.05) -> np.ndarray:
    pts = [v0]
    for i in range(len(v0)):
        e = np.zeros_like(v0)
        e[i] = step
        pts.append(v0 + e)
    return np.array(pts)


def closed_form_k0(n: int, k: int) -> float:
    """Best product-state fidelity of ``|D_n^(k)>``: ``C(n,k) (k/n)^k (1-k/n)^(n-k)``."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    kt = k / n
    logv = log_binom(n, k)
    for expo, base in ((k, kt), (n - k, 1 - kt)):
        if expo:
            logv += expo * math.log(base)
    return math.exp(logv)


def closed_form_k1(n: int, k: int) -> float:
    """Symmetric W_n^(1) fidelity of ``|D_n^(k)>``.

    ``C(n,k) r^(k-1) (1-r)^(n-k-1) [k/n + (1 - 2k/n) r]`` with
    ``r = k/n - sqrt((k/n)(1-k/n)/(n-1))``; log domain throughout.
    """
    if n < 2 or not 1 <= k <= n - 1:
        raise DomainError(f"need n >= 2 and 1 <= k <= n - 1, got n={n}, k={k}")
    kt = k / n
    kr = kt - math.sqrt(kt * (1 - kt) / (n - 1))
    logv = log_binom(n, k) + math.log(kt + (1 - 2 * kt) * kr)
    for expo, base in ((k - 1, kr), (n - k - 1, 1 - kr)):
        if expo:
            logv += expo * math.log(base)
    return math.exp(logv)


def limit_k1(k: int) -> float:
    """Large-n limit of ``closed_form_k1(n, k)`` at fixed ``k``."""
    if k < 2:
        raise DomainError(f"limit requires k >= 2, got {k}")
    r = math.sqrt(k)
    return math.exp(r - k) * (k - r) ** k * (2 * r - 1) / (r - 1) / math.factorial(k)


def _bloch(theta: float, phi: float) -> Qubit:
    return Qubit(complex(math.cos(theta)), complex(math.sin(theta) * np.exp(1j * phi)))


def brute_force_sym_fidelity(
    target: SymState, n: int, kp: int, grid_density: int = 16, starts: int = 8
) -> float:
    """Best fidelity of ``target`` with symmetric family states, by direct search.

    Scans ``(theta, phi, theta', phi')`` for the two single-qubit states on a
    ``grid_density^4`` grid, building each family state from scratch as a
    symmetrized product, then refines the ``starts`` highest local maxima of
    the grid with Nelder-Mead. The reported value is re-evaluated on the dense statevector.
    Independent of the closed objective in ``objective_general``.
    """
    if target.n != n:
        raise DomainError(f"target has {target.n} qubits, expected {n}")
    if n > 12:
        raise DomainError(f"brute force is limited to n <= 12, got {n}")
    if not 0 <= kp <= n:
        raise DomainError(f"need 0 <= kp <= n, got kp={kp}")
    t = target.normalized().coeffs
    th = np.linspace(0.0, math.pi / 2, grid_density)
    ph = np.linspace(0.0, 2 * math.pi, grid_density, endpoint=False)
    T, P, T2, P2 = np.meshgrid(th, ph, th, ph, indexing="ij")
    eps = np.stack([np.cos(T), np.sin(T) * np.exp(1j * P)], axis=-1)
    epsp = np.stack([np.cos(T2), np.sin(T2) * np.exp(1j * P2)], axis=-1)
    vals = _family_fidelity(t, n, kp, eps, epsp)
    # refine distinct grid peaks (phases wrap) rather than neighbours of one peak
    peaks = vals >= maximum_filter(vals, size=3, mode=("nearest", "wrap", "nearest", "wrap"))
    vals = np.where(peaks, vals, -np.inf).ravel()
    order = np.argsort(-vals, kind="stable")[:starts]
    grid_pts = np.stack([T.ravel(), P.ravel(), T2.ravel(), P2.ravel()], axis=1)

    def neg(v):
        e = np.array([math.cos(v[0]), math.sin(v[0]) * np.exp(1j * v[1])])
        ep = np.array([math.cos(v[2]), math.sin(v[2]) * np.exp(1j * v[3])])
        return -float(_family_fidelity(t, n, kp, e, ep))

    best, best_v = -1.0, None
    for idx in order:
        res = minimize(neg, grid_pts[idx], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": FUN_TOL, "maxiter": 8000})
        if -res.fun > best:
            best, best_v = -float(res.fun), res.x
    try:
        state = symmetric_family_state(n, kp, _bloch(best_v[0], best_v[1]), _bloch(best_v[2], best_v[3]))
        return overlap(target.normalized(), state).fidelity
    except DegenerateError:
        # optimum sits on the product-state boundary of the family
        return best


def _family_fidelity(target: np.ndarray, n: int, kp: int, eps: np.ndarray, epsp: np.ndarray) -> np.ndarray:
    c = family_coeffs(n, kp, eps, epsp)
    norm2 = np.sum(np.abs(c) ** 2, axis=-1)
    amp = c @ np.conj(target)
    return np.abs(amp) ** 2 / norm2
