"""Monic matrix-valued orthogonal polynomials, norms and recurrence coefficients.

Polynomials are stored as coefficient lists ``[P^n_0, ..., P^n_n]`` (lowest
degree first) with ``P^n_n = I``; orthogonality is with respect to
``<P, Q> = int P(x) W(x) Q(x)^* dmu(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import IllConditionedError, InvalidArgument, ResourceLimitError
from .linalg import adjoint, hermitize
from .measure import (
    GammaSequence,
    MatrixWeight,
    SAFETY_NODES,
    inner_product,
    moments,
    monomial,
    polyval,
    quadrature_rule,
)

DEFAULT_DEGREE = 6
MAX_DEGREE = 20
COND_CAP = 1e12


@dataclass(frozen=True, eq=False)
class MopData:
    """Monic polynomials ``P_0..P_{n_max}`` with norms and recurrence data.

    ``recurrence_B[n]`` is ``B_n`` for ``n < n_max``; ``recurrence_C[n]`` is
    ``C_n`` for ``1 <= n < n_max`` (index 0 holds a zero matrix).
    """

    max_degree: int
    coefficients: list
    norms: list
    recurrence_B: list
    recurrence_C: list
    moments: list = field(default_factory=list)
    hankel_conditions: list = field(default_factory=list)

    def poly(self, n: int) -> list:
        return self.coefficients[n]


def _solve_monic(M: list, n: int, cond_cap: float):
    """Coefficients of ``P_n`` from the block Hankel system on ``M_0..M_{2n-1}``."""
    N = M[0].shape[0]
    if n == 0:
        return [np.eye(N, dtype=complex)], 1.0
    H = np.block([[M[k + m] for m in range(n)] for k in range(n)])
    R = np.hstack([M[n + m] for m in range(n)])
    # symmetric diagonal scaling improves the solve without changing the solution
    d = 1.0 / np.sqrt(np.real(np.diag(H)))
    Hs = H * d[:, None] * d[None, :]
    cond = float(np.linalg.cond(Hs))
    if not np.isfinite(cond) or cond > cond_cap:
        raise IllConditionedError(
            f"block Hankel matrix of order {n} has condition number {cond:.3e} > {cond_cap:.1e}"
        )
    # X H = -R  <=>  (Hs)^T (X D)^T = -(R D)^T
    Xs = -np.linalg.solve(Hs.T, (R * d[None, :]).T).T
    X = Xs * d[None, :]
    coeffs = [X[:, k * N:(k + 1) * N] for k in range(n)] + [np.eye(N, dtype=complex)]
    return coeffs, cond


def monic_mops(w: MatrixWeight, n_max: int = DEFAULT_DEGREE, cond_cap: float = COND_CAP) -> MopData:
    """Monic orthogonal polynomials up to degree ``n_max`` via block Hankel solves."""
    n_max = int(n_max)
    if n_max < 0:
        raise InvalidArgument("n_max must be non-negative")
    if n_max > MAX_DEGREE:
        raise ResourceLimitError(f"degree {n_max} exceeds the cap {MAX_DEGREE}")
    M = moments(w, 2 * n_max + 1)
    coeffs, norms, conds = [], [], []
    for n in range(n_max + 1):
        P, cond = _solve_monic(M, n, cond_cap)
        coeffs.append(P)
        conds.append(cond)
        norms.append(hermitize(sum(P[k] @ M[k + n] for k in range(n + 1))))
    return _finish(n_max, coeffs, norms, M, conds)


def _finish(n_max, coeffs, norms, M, conds) -> MopData:
    N = coeffs[0][0].shape[0]
    B, C = [], [np.zeros((N, N), complex)]
    for n in range(n_max):
        prev = coeffs[n][n - 1] if n >= 1 else np.zeros((N, N), complex)
        B.append(prev - coeffs[n + 1][n])
    for n in range(1, n_max):
        C.append(norms[n] @ np.linalg.inv(norms[n - 1]))
    return MopData(n_max, coeffs, norms, B, C, M, conds)


def gram_schmidt_mops(w: MatrixWeight, n_max: int) -> MopData:
    """Same polynomials by Gram-Schmidt on quadrature (independent of moments)."""
    N = w.dimension
    x, wt = quadrature_rule(w.base, w.poly_degree + 2 * n_max + 2 * SAFETY_NODES)
    Ws = w.at(x)

    def ip(Px, Qx):
        return np.einsum("i,ijk->jk", wt, Px @ Ws @ adjoint(Qx))

    coeffs, values, norms = [], [], []
    for n in range(n_max + 1):
        P = monomial(n, N)
        for _ in range(2):
            Px = polyval(P, x)
            for k in range(n):
                c = ip(Px, values[k]) @ np.linalg.inv(norms[k])
                for j, pk in enumerate(coeffs[k]):
                    P[j] = P[j] - c @ pk
            P[n] = np.eye(N, dtype=complex)
        Px = polyval(P, x)
        coeffs.append(P)
        values.append(Px)
        norms.append(hermitize(ip(Px, Px)))
    return _finish(n_max, coeffs, norms, [], [])


def coefficient_difference(a: MopData, b: MopData, n_max: int | None = None) -> float:
    """Max entry difference between polynomial coefficients, relative to ``max(1, |coef|)``."""
    n_max = min(a.max_degree, b.max_degree) if n_max is None else n_max
    worst = 0.0
    for n in range(n_max + 1):
        for pa, pb in zip(a.coefficients[n], b.coefficients[n]):
            scale = max(1.0, np.abs(pa).max())
            worst = max(worst, float(np.abs(pa - pb).max() / scale))
    return worst


# ---------------------------------------------------------------------------
# identities


def _times_x(P: list) -> list:
    return [np.zeros_like(P[0])] + list(P)


def _pad(P: list, length: int) -> list:
    return list(P) + [np.zeros_like(P[0])] * (length - len(P))


def recurrence_residual(mops: MopData) -> float:
    """Max over ``n < n_max`` of the coefficientwise residual of
    ``x P_n - P_{n+1} - B_n P_n - C_n P_{n-1}``, relative to ``max(1, ||P_{n+1}||)``."""
    worst = 0.0
    for n in range(mops.max_degree):
        L = n + 2
        lhs = _pad(_times_x(mops.coefficients[n]), L)
        nxt = _pad(mops.coefficients[n + 1], L)
        cur = _pad(mops.coefficients[n], L)
        prv = _pad(mops.coefficients[n - 1], L) if n >= 1 else [np.zeros_like(cur[0])] * L
        Cn = mops.recurrence_C[n] if n >= 1 else np.zeros_like(cur[0])
        scale = max(1.0, max(np.linalg.norm(c) for c in nxt))
        for k in range(L):
            r = lhs[k] - nxt[k] - mops.recurrence_B[n] @ cur[k] - Cn @ prv[k]
            worst = max(worst, float(np.linalg.norm(r)) / scale)
    return worst


def recurrence_C_from_coefficients(mops: MopData, n: int) -> np.ndarray:
    """``C_n`` from the ``x^{n-1}`` coefficient of the recurrence."""
    P = mops.coefficients
    N = P[0][0].shape[0]
    lower = P[n][n - 2] if n >= 2 else np.zeros((N, N), complex)
    return lower - P[n + 1][n - 1] - mops.recurrence_B[n] @ P[n][n - 1]


def norm_ratio_consistency(mops: MopData) -> float:
    """Max relative gap between ``H_n H_{n-1}^{-1}`` and the coefficient-derived ``C_n``."""
    worst = 0.0
    for n in range(1, mops.max_degree):
        Cn = mops.recurrence_C[n]
        alt = recurrence_C_from_coefficients(mops, n)
        worst = max(worst, float(np.linalg.norm(Cn - alt) / max(np.linalg.norm(Cn), 1e-300)))
    return worst


def orthogonality_residual(w: MatrixWeight, mops: MopData) -> float:
    """Max of ``||<P_n, x^m I>|| / ||H_n||`` over ``m < n <= n_max``."""
    N = w.dimension
    worst = 0.0
    for n in range(1, mops.max_degree + 1):
        Hn = np.linalg.norm(mops.norms[n])
        for m in range(n):
            r = np.linalg.norm(inner_product(w, mops.coefficients[n], monomial(m, N)))
            worst = max(worst, float(r / Hn))
    return worst


@dataclass(frozen=True)
class SymmetryIdentityReport:
    """Max relative residuals of the identities satisfied by ``T`` in the symmetry space."""

    symmetric_operator: float
    polynomials: float
    norms: float
    moments: float
    recurrence_B: float
    recurrence_C: float

    def as_dict(self) -> dict:
        return {
            "symmetric_operator": self.symmetric_operator,
            "polynomials": self.polynomials,
            "norms": self.norms,
            "moments": self.moments,
            "recurrence_B": self.recurrence_B,
            "recurrence_C": self.recurrence_C,
        }

    def max(self) -> float:
        return max(self.as_dict().values())


def _rel(R: np.ndarray, T: np.ndarray, X: np.ndarray) -> float:
    scale = np.linalg.norm(T) * np.linalg.norm(X)
    return float(np.linalg.norm(R) / scale) if scale > 0 else float(np.linalg.norm(R))


def verify_symmetry_identities(w: MatrixWeight, mops: MopData, basis: Sequence[np.ndarray],
                          n_max: int | None = None) -> SymmetryIdentityReport:
    """Residuals, relative to ``||T|| ||X||``, of

    * ``<x^j T, x^k I> = <x^j I, x^k T>`` for ``j, k <= n_max``,
    * ``T P^n_k = P^n_k T``,
    * ``T H_n = H_n T^*`` and ``T M_n = M_n T^*``,
    * ``T B_n = B_n T`` and ``T C_n = C_n T``.
    """
    n_max = mops.max_degree if n_max is None else min(n_max, mops.max_degree)
    N = w.dimension
    M = mops.moments if len(mops.moments) > n_max else moments(w, n_max + 1)
    r = dict.fromkeys(("op", "P", "H", "M", "B", "C"), 0.0)
    for T in basis:
        T = np.asarray(T, complex)
        Th = adjoint(T)
        for j in range(n_max + 1):
            for k in range(n_max + 1):
                left = inner_product(w, [c @ T for c in monomial(j, N)], monomial(k, N))
                right = inner_product(w, monomial(j, N), [c @ T for c in monomial(k, N)])
                r["op"] = max(r["op"], _rel(left - right, T, left))
        for n in range(n_max + 1):
            for Pk in mops.coefficients[n]:
                r["P"] = max(r["P"], _rel(T @ Pk - Pk @ T, T, Pk))
            Hn = mops.norms[n]
            r["H"] = max(r["H"], _rel(T @ Hn - Hn @ Th, T, Hn))
            r["M"] = max(r["M"], _rel(T @ M[n] - M[n] @ Th, T, M[n]))
            if n < mops.max_degree:
                Bn = mops.recurrence_B[n]
                r["B"] = max(r["B"], _rel(T @ Bn - Bn @ T, T, Bn))
            if 1 <= n < mops.max_degree:
                Cn = mops.recurrence_C[n]
                r["C"] = max(r["C"], _rel(T @ Cn - Cn @ T, T, Cn))
    return SymmetryIdentityReport(r["op"], r["P"], r["H"], r["M"], r["B"], r["C"])


# ---------------------------------------------------------------------------
# gamma sequences


def gamma_from_mops(mops: MopData) -> GammaSequence:
    N = mops.norms[0].shape[0]
    return GammaSequence(N, "norms", tuple(mops.norms))


def gamma_from_moments(w: MatrixWeight, count: int) -> GammaSequence:
    """Even moments ``(M_0, M_2, ..., M_{2(count-1)})``."""
    M = moments(w, 2 * count - 1)
    return GammaSequence(w.dimension, "moments-even", tuple(M[2 * k] for k in range(count)))
