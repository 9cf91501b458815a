"""Example weight families and the special functions they need.

* ``nonunitary_2x2_weight``: a 2x2 weight on [0, 1] that reduces only through a
  non-unitary congruence, with reference matrices for regression tests.
* ``gegenbauer_weight``: the matrix Gegenbauer weight of size 2*ell+1, with
  closed-form squared norms of its monic orthogonal polynomials.
* ``q_norms_closed``: squared norms of a q-analogue family (only the norms
  are available, so it is analysed through gamma sequences).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument
from .measure import GammaSequence, GegenbauerMeasure, LebesgueInterval, MatrixWeight

SQRT6 = math.sqrt(6.0)


# ---------------------------------------------------------------------------
# special functions


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)``."""
    if int(n) != n or n < 0:
        raise InvalidArgument(f"Pochhammer order must be a non-negative integer, got {n}")
    out = 1.0
    for k in range(int(n)):
        out *= a + k
    return out


def q_pochhammer(a, q: float, n: int) -> float:
    """``(a; q)_n = prod_{k<n} (1 - a q^k)``.

    ``a`` may be a sequence, giving the product form ``(a1, a2, ...; q)_n``.
    """
    if int(n) != n or n < 0:
        raise InvalidArgument(f"q-Pochhammer order must be a non-negative integer, got {n}")
    if isinstance(a, Iterable):
        out = 1.0
        for ai in a:
            out *= q_pochhammer(ai, q, n)
        return out
    out = 1.0
    for k in range(int(n)):
        out *= 1.0 - a * q**k
    return out


def gegenbauer_poly(nu: float, n: int, x):
    """``C_n^{(nu)}(x)`` by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n):
        # (k+1) C_{k+1} = 2 (k+nu) x C_k - (k+2nu-1) C_{k-1}
        prev, cur = cur, (2.0 * (k + nu) * x * cur - (k + 2 * nu - 1) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def gegenbauer_coefficients(nu: float, n: int) -> np.ndarray:
    """Monomial coefficients (lowest first) of ``C_n^{(nu)}``."""
    prev = np.zeros(n + 1)
    cur = np.zeros(n + 1)
    cur[0] = 1.0
    for k in range(n):
        shifted = np.concatenate([[0.0], cur[:-1]])
        prev, cur = cur, (2.0 * (k + nu) * shifted - (k + 2 * nu - 1) * prev) / (k + 1)
    return cur


def flip_matrix(n: int) -> np.ndarray:
    """The involution ``J: e_j -> e_{n-1-j}``."""
    return np.eye(n, dtype=complex)[::-1].copy()


# ---------------------------------------------------------------------------
# matrix Gegenbauer weight


@dataclass(frozen=True)
class GegenbauerParams:
    ell: float
    nu: float

    def __post_init__(self):
        two_ell = 2 * self.ell
        if two_ell < 0 or abs(two_ell - round(two_ell)) > 1e-12:
            raise InvalidArgument(f"ell must be a non-negative half-integer, got {self.ell}")
        if not self.nu > 0:
            raise InvalidArgument(f"nu must be positive, got {self.nu}")

    @property
    def two_ell(self) -> int:
        return int(round(2 * self.ell))

    @property
    def size(self) -> int:
        return self.two_ell + 1


def gegenbauer_alpha(params: GegenbauerParams, t: int, m: int, n: int) -> float:
    """Coefficient of ``C^{(nu)}_{m+n-2t}`` in entry ``(m, n)``, ``n >= m``."""
    L = params.two_ell
    nu = params.nu
    if not (n >= m and max(0, n + m - L) <= t <= m and n <= L):
        raise InvalidArgument(f"alpha index out of range: t={t}, m={m}, n={n}, 2ell={L}")
    f = math.factorial
    val = (-1) ** m * f(n) * f(m) * f(m + n - 2 * t)
    val /= f(t) * pochhammer(2 * nu, m + n - 2 * t) * pochhammer(nu, n + m - t)
    val *= pochhammer(nu, n - t) * pochhammer(nu, m - t) / (f(n - t) * f(m - t))
    val *= (n + m - 2 * t + nu) / (n + m - t + nu)
    val *= f(L - m) * pochhammer(n - L, m - t) * pochhammer(-L - nu, t) * (L + nu) / f(L)
    return val


def _gegenbauer_terms(params: GegenbauerParams):
    """Yield ``(m, n, t, alpha)`` for the upper triangle ``n >= m``."""
    L = params.two_ell
    for m in range(L + 1):
        for n in range(m, L + 1):
            for t in range(max(0, n + m - L), m + 1):
                yield m, n, t, gegenbauer_alpha(params, t, m, n)


def gegenbauer_weight(ell: float, nu: float) -> MatrixWeight:
    """Matrix Gegenbauer weight of size ``2 ell + 1`` on ``(1-x^2)^(nu-1/2) dx``."""
    params = GegenbauerParams(float(ell), float(nu))
    N = params.size
    deg = 2 * params.two_ell
    terms = list(_gegenbauer_terms(params))

    def func(x: float) -> np.ndarray:
        W = np.zeros((N, N), complex)
        for m, n, t, a in terms:
            W[m, n] += a * gegenbauer_poly(params.nu, m + n - 2 * t, x)
        return np.triu(W) + np.triu(W, 1).T

    coeffs = np.zeros((deg + 1, N, N))
    for m, n, t, a in terms:
        k = m + n - 2 * t
        coeffs[: k + 1, m, n] += a * gegenbauer_coefficients(params.nu, k)
    coeffs = coeffs + np.transpose(np.triu(np.ones((N, N)), 1)[None] * coeffs, (0, 2, 1))
    coeffs = tuple(c.astype(complex) for c in coeffs)
    return MatrixWeight(
        N, func, deg, GegenbauerMeasure(params.nu),
        name=f"gegenbauer({float(ell)!r}, {float(nu)!r})",
        coefficients=coeffs,
        descriptor={"builtin": {"name": "gegenbauer", "params": {"ell": float(ell), "nu": float(nu)}}},
    )


def gegenbauer_norms_closed(ell: float, nu: float, n: int) -> np.ndarray:
    """Closed-form squared norm ``H_n`` of the monic matrix Gegenbauer polynomials."""
    params = GegenbauerParams(float(ell), float(nu))
    L, nu = params.two_ell, params.nu
    ell = L / 2
    p = pochhammer
    f = math.factorial
    pre = math.exp(0.5 * math.log(math.pi) + math.lgamma(nu + 0.5) - math.lgamma(nu + 1.0))
    pre *= nu * (L + nu + n) / (nu + n)
    diag = []
    for k in range(L + 1):
        v = f(n) * p(ell + 0.5 + nu, n) * p(L + nu, n)
        v /= p(nu + k, n) * p(L + 2 * nu + n, n) * p(L + nu - k, n)
        v *= f(k) * p(ell + nu, n) * f(L - k) * p(n + nu + 1, L)
        v /= p(L + nu + 1, n) * f(L) * p(n + nu + 1, k) * p(n + nu + 1, L - k)
        diag.append(pre * v)
    return np.diag(np.array(diag, dtype=complex))


def gegenbauer_norm_sequence(ell: float, nu: float, count: int) -> GammaSequence:
    N = GegenbauerParams(float(ell), float(nu)).size
    return GammaSequence(N, "norms", tuple(gegenbauer_norms_closed(ell, nu, k) for k in range(count)))


# ---------------------------------------------------------------------------
# q-analogue: squared norms only


@dataclass(frozen=True)
class QParams:
    ell: float
    q: float

    def __post_init__(self):
        two_ell = 2 * self.ell
        if two_ell < 0 or abs(two_ell - round(two_ell)) > 1e-12:
            raise InvalidArgument(f"ell must be a non-negative half-integer, got {self.ell}")
        if not 0 < self.q < 1:
            raise InvalidArgument(f"q must lie in (0, 1), got {self.q}")


def q_norms_closed(ell: float, q: float, n: int) -> np.ndarray:
    """Closed-form squared norm ``H_n`` of the q-analogue family (diagonal)."""
    params = QParams(float(ell), float(q))
    L = int(round(2 * params.ell))
    q = params.q
    qp = q_pochhammer
    num = q ** (-L) * 2.0 ** (-2 * n) * qp((q**2, q ** (2 * L + 4)), q**2, n) ** 2
    num *= (1 - q ** (2 * L + 2)) ** 2
    diag = []
    for i in range(L + 1):
        den = qp((q ** (2 * i + 2), q ** (2 * L - 2 * i + 2)), q**2, n) ** 2
        den *= (1 - q ** (2 * n + 2 * i + 2)) * (1 - q ** (2 * L - 2 * i + 2 * n + 2))
        diag.append(num / den)
    return np.diag(np.array(diag, dtype=complex))


def q_norm_sequence(ell: float, q: float, count: int) -> GammaSequence:
    N = int(round(2 * ell)) + 1
    return GammaSequence(N, "norms", tuple(q_norms_closed(ell, q, k) for k in range(count)))


# ---------------------------------------------------------------------------
# 2x2 weight on [0, 1]

# W(x) = L diag(x^2, x) L^*
_L41 = np.array([[1.0, SQRT6 / 3], [0.0, 1.0]])


@dataclass(frozen=True)
class NonUnitaryReference:
    """Printed reference data for :func:`nonunitary_2x2_weight`."""

    M0: np.ndarray
    S: np.ndarray
    sym_element: np.ndarray
    E_seed: np.ndarray
    F_seed: np.ndarray
    G_seed: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    dim_sym: int = 2
    dim_commutant: int = 1
    dim_sym_M0: int = 4
    dim_commutant_M0: int = 2
    dim_sym_normalized: int = 2

    @staticmethod
    def normalized_weight(x: float) -> np.ndarray:
        """Printed ``S^{-1} W(x) S^{-1}``."""
        r = SQRT6
        a = (33 + 12 * r) * x**2 + (28 - 8 * r) * x
        b = -(6 + 9 * r) * x**2 + (4 + 6 * r) * x
        d = (42 - 12 * r) * x**2 + (22 + 8 * r) * x
        return np.array([[a, b], [b, d]], dtype=complex) / 25


def nonunitary_2x2_reference() -> NonUnitaryReference:
    r = SQRT6
    return NonUnitaryReference(
        M0=np.array([[2 / 3, r / 6], [r / 6, 1 / 2]], dtype=complex),
        S=np.array([[r + 9, 3 * r - 3], [3 * r - 3, 1.5 * r + 6]], dtype=complex) / 15,
        sym_element=np.array([[1, -r / 3], [0, 0]], dtype=complex),
        E_seed=np.array([[r / 6, 1], [1, 0]], dtype=complex),
        # printed with -sqrt(3)/6; only -sqrt(6)/3 reproduces the printed F
        F_seed=np.array([[1, -r / 3], [0, 0]], dtype=complex),
        G_seed=np.array([[1, -2 * r / 3], [r / 2, -1]], dtype=complex),
        E=np.array([[r / 6, 1], [1, 0]], dtype=complex),
        F=np.array([[11 + 4 * r, -(2 + 3 * r)], [-(2 + 3 * r), 14 - 4 * r]], dtype=complex) / 25,
        G=np.array([[0, -1j], [1j, 0]], dtype=complex),
    )


def nonunitary_2x2_weight() -> MatrixWeight:
    """``L diag(x^2, x) L^*`` on Lebesgue ``[0, 1]``."""
    C1 = _L41 @ np.diag([0.0, 1.0]) @ _L41.T
    C2 = _L41 @ np.diag([1.0, 0.0]) @ _L41.T
    return MatrixWeight.from_coefficients(
        (np.zeros((2, 2)), C1, C2), LebesgueInterval(0.0, 1.0),
        name="tirao-variant", descriptor={"builtin": {"name": "tirao-variant", "params": {}}},
    )


def example_weights() -> list[MatrixWeight]:
    """Every weight used by the property suites."""
    out = [nonunitary_2x2_weight()]
    for ell in (0.5, 1.0, 1.5, 2.0):
        for nu in (0.5, 1.0, 2.3):
            out.append(gegenbauer_weight(ell, nu))
    return out
