"""Matrix-valued measures ``Theta(X) = int_X W(x) dmu(x)`` and their moments.

All integrals are computed by Gauss quadrature sized so that polynomial
integrands are integrated exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy import integrate
from scipy.linalg import eigh_tridiagonal

from .errors import InvalidArgument, RejectedInput, ResourceLimitError
from .linalg import adjoint, as_cmatrix, hermitize, is_hermitian, require_positive_definite

QUADRATURE_CAP = 2000
SAFETY_NODES = 2


# ---------------------------------------------------------------------------
# scalar base measures


@dataclass(frozen=True)
class LebesgueInterval:
    a: float = 0.0
    b: float = 1.0
    kind = "lebesgue"

    def __post_init__(self):
        if not self.a < self.b:
            raise InvalidArgument(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    def total_mass(self) -> float:
        return self.b - self.a

    def density(self, x):
        return np.ones_like(np.asarray(x, dtype=float))

    def params(self) -> dict:
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class GegenbauerMeasure:
    """``(1 - x^2)^(nu - 1/2) dx`` on ``[-1, 1]``."""

    nu: float
    kind = "gegenbauer"

    def __post_init__(self):
        if not self.nu > 0:
            raise InvalidArgument(f"Gegenbauer parameter must be positive, got {self.nu}")

    @property
    def support(self) -> tuple[float, float]:
        return (-1.0, 1.0)

    def total_mass(self) -> float:
        # Beta(1/2, nu + 1/2)
        nu = self.nu
        return math.exp(0.5 * math.log(math.pi) + math.lgamma(nu + 0.5) - math.lgamma(nu + 1.0))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return (1.0 - x * x) ** (self.nu - 0.5)

    def params(self) -> dict:
        return {"nu": self.nu}


@dataclass(frozen=True)
class DiscreteAtoms:
    points: tuple
    masses: tuple
    kind = "atoms"

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        ms = tuple(float(m) for m in self.masses)
        if len(pts) == 0 or len(pts) != len(ms):
            raise InvalidArgument("atoms need equally many points and masses (at least one)")
        if any(not m > 0 for m in ms):
            raise InvalidArgument("atom masses must be strictly positive")
        if len(set(pts)) != len(pts):
            raise InvalidArgument("atom points must be distinct")
        order = np.argsort(pts)
        object.__setattr__(self, "points", tuple(pts[i] for i in order))
        object.__setattr__(self, "masses", tuple(ms[i] for i in order))

    @property
    def support(self) -> tuple[float, float]:
        return (self.points[0], self.points[-1])

    def total_mass(self) -> float:
        return float(sum(self.masses))

    def params(self) -> dict:
        return {"points": list(self.points), "masses": list(self.masses)}


BaseMeasure = Union[LebesgueInterval, GegenbauerMeasure, DiscreteAtoms]


def golub_welsch(alpha: np.ndarray, beta: np.ndarray, mass: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule from monic recurrence coefficients.

    ``alpha[k]`` are the diagonal entries, ``beta[k]`` (k >= 1) the squared
    off-diagonals of the Jacobi matrix; ``mass`` is the total measure.
    """
    m = len(alpha)
    if m == 1:
        return np.array([alpha[0]], dtype=float), np.array([mass], dtype=float)
    x, V = eigh_tridiagonal(np.asarray(alpha, float), np.sqrt(np.asarray(beta[1:m], float)))
    w = mass * V[0, :] ** 2
    return x, w


def _gegenbauer_recurrence(nu: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(m, dtype=float)
    beta = np.zeros(m)
    kk = k[1:]
    beta[1:] = kk * (kk + 2 * nu - 1) / (4 * (kk + nu) * (kk + nu - 1))
    return np.zeros(m), beta


def quadrature_rule(base: BaseMeasure, degree_exact: int, cap: int = QUADRATURE_CAP):
    """Nodes and positive weights integrating polynomials of degree <= ``degree_exact``."""
    degree_exact = int(degree_exact)
    if degree_exact < 0:
        raise InvalidArgument("degree_exact must be non-negative")
    if degree_exact > cap:
        raise ResourceLimitError(f"requested exactness {degree_exact} exceeds cap {cap}")
    if isinstance(base, DiscreteAtoms):
        return np.array(base.points), np.array(base.masses)
    m = (degree_exact + 2) // 2
    if isinstance(base, LebesgueInterval):
        alpha, beta = _gegenbauer_recurrence(0.5, m)
        t, w = golub_welsch(alpha, beta, 2.0)
        half = 0.5 * (base.b - base.a)
        return 0.5 * (base.a + base.b) + half * t, half * w
    if isinstance(base, GegenbauerMeasure):
        alpha, beta = _gegenbauer_recurrence(base.nu, m)
        return golub_welsch(alpha, beta, base.total_mass())
    raise InvalidArgument(f"unsupported base measure {base!r}")


def interior_nodes(base: BaseMeasure, count: int) -> np.ndarray:
    """``count`` Chebyshev points strictly inside the support (atoms for discrete bases)."""
    if isinstance(base, DiscreteAtoms):
        return np.array(base.points)
    a, b = base.support
    k = np.arange(count)
    t = np.cos((2 * k + 1) * np.pi / (2 * count))[::-1]
    return 0.5 * (a + b) + 0.5 * (b - a) * t


# ---------------------------------------------------------------------------
# matrix polynomials: sequences of coefficient matrices, lowest degree first


def polyval(coeffs: Sequence[np.ndarray], x) -> np.ndarray:
    """Evaluate ``sum_k x^k C_k``; a vector ``x`` gives a stack ``(m, N, N)``."""
    coeffs = [np.asarray(c, dtype=complex) for c in coeffs]
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    out = np.zeros((xs.size,) + coeffs[0].shape, dtype=complex)
    for c in reversed(coeffs):
        out = out * xs[:, None, None] + c
    return out[0] if scalar else out


def monomial(k: int, n: int) -> list[np.ndarray]:
    """The matrix polynomial ``x^k I_n``."""
    return [np.zeros((n, n), complex)] * k + [np.eye(n, dtype=complex)]


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True, eq=False)
class MatrixWeight:
    """An ``N x N`` polynomial weight ``W`` together with its base measure.

    ``func`` evaluates ``W`` at a scalar point.  ``coefficients`` (if known)
    gives ``W(x) = sum_k x^k C_k`` and is used for exact transformations and
    serialization; it is reconstructed by interpolation when absent.
    """

    dimension: int
    func: Callable[[float], np.ndarray]
    poly_degree: int
    base: BaseMeasure
    name: str = "custom"
    coefficients: tuple | None = None
    descriptor: dict | None = field(default=None, compare=False)

    def __call__(self, x: float) -> np.ndarray:
        return np.asarray(self.func(float(x)), dtype=complex)

    def at(self, xs) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if self.coefficients is not None:
            return polyval(self.coefficients, xs)
        return np.array([self(x) for x in xs])

    @classmethod
    def from_coefficients(cls, coeffs, base: BaseMeasure, name: str = "custom", descriptor=None):
        coeffs = tuple(as_cmatrix(c) for c in coeffs)
        n = coeffs[0].shape[0]
        for c in coeffs:
            if c.shape != (n, n):
                raise InvalidArgument("coefficient matrices must share one square shape")
        # trailing zero coefficients do not raise the degree
        deg = len(coeffs) - 1
        while deg > 0 and not np.any(coeffs[deg]):
            deg -= 1
        coeffs = coeffs[: deg + 1]
        return cls(n, lambda x, c=coeffs: polyval(c, x), deg, base, name, coeffs, descriptor)

    def monomial_coefficients(self) -> tuple:
        if self.coefficients is not None:
            return self.coefficients
        d = self.poly_degree
        if isinstance(self.base, DiscreteAtoms):
            a, b = -1.0, 1.0
        else:
            a, b = self.base.support
        t = np.cos(np.arange(d + 1) * np.pi / max(d, 1)) if d else np.zeros(1)
        xs = 0.5 * (a + b) + 0.5 * (b - a) * t
        V = np.vander(xs, d + 1, increasing=True)
        vals = np.array([self(x) for x in xs]).reshape(d + 1, -1)
        C = np.linalg.solve(V, vals)
        return tuple(C.reshape(d + 1, self.dimension, self.dimension))

    def transformed(self, M, name: str | None = None) -> "MatrixWeight":
        """The weight ``x -> M W(x) M^*`` (``M`` may be rectangular)."""
        M = as_cmatrix(M)
        if M.shape[1] != self.dimension:
            raise InvalidArgument("transform does not match weight dimension")
        coeffs = tuple(M @ c @ M.conj().T for c in self.monomial_coefficients())
        return MatrixWeight.from_coefficients(coeffs, self.base, name or f"{self.name}|transformed")

    def restricted(self, indices: Sequence[int], name: str | None = None) -> "MatrixWeight":
        idx = list(indices)
        P = np.eye(self.dimension, dtype=complex)[idx]
        return self.transformed(P, name or f"{self.name}|block{idx}")

    def check_nodes(self, xs) -> np.ndarray:
        """Evaluate at ``xs`` and verify Hermitian, positive semi-definite values."""
        Ws = self.at(xs)
        for x, W in zip(np.atleast_1d(xs), Ws):
            if not is_hermitian(W, 1e-10):
                raise RejectedInput(f"weight is not Hermitian at x={x:.6g}")
            lam = np.linalg.eigvalsh(hermitize(W))
            if lam[0] < -1e-12 * max(1.0, abs(lam[-1])):
                raise RejectedInput(f"weight is not positive semi-definite at x={x:.6g}")
        return Ws


def validate_weight(w: MatrixWeight, extra_degree: int = 0) -> None:
    nodes, _ = quadrature_rule(w.base, w.poly_degree + extra_degree + 2 * SAFETY_NODES)
    w.check_nodes(nodes)
    require_positive_definite(moment(w, 0), "zeroth moment")


# ---------------------------------------------------------------------------
# integrals


def _rule_for(w: MatrixWeight, extra_degree: int):
    return quadrature_rule(w.base, w.poly_degree + extra_degree + 2 * SAFETY_NODES)


def moment(w: MatrixWeight, n: int) -> np.ndarray:
    """``M_n = int x^n W(x) dmu(x)``."""
    if int(n) != n or n < 0:
        raise InvalidArgument(f"moment order must be a non-negative integer, got {n}")
    x, wt = _rule_for(w, int(n))
    Ws = w.at(x)
    M = np.einsum("i,ijk->jk", wt * x ** int(n), Ws)
    return hermitize(M)


def moments(w: MatrixWeight, count: int) -> list[np.ndarray]:
    """``[M_0, ..., M_{count-1}]`` from one shared quadrature rule."""
    x, wt = _rule_for(w, max(count - 1, 0))
    Ws = w.at(x)
    return [hermitize(np.einsum("i,ijk->jk", wt * x**k, Ws)) for k in range(count)]


def inner_product(w: MatrixWeight, P: Sequence, Q: Sequence) -> np.ndarray:
    """``<P, Q> = int P(x) W(x) Q(x)^* dmu(x)`` for matrix polynomials ``P``, ``Q``."""
    P = [as_cmatrix(c) for c in P]
    Q = [as_cmatrix(c) for c in Q]
    n = w.dimension
    for c in P + Q:
        if c.shape != (n, n):
            raise InvalidArgument(f"polynomial coefficient of shape {c.shape} does not match N={n}")
    x, wt = _rule_for(w, len(P) - 1 + len(Q) - 1)
    Px = polyval(P, x)
    Qx = polyval(Q, x)
    Ws = w.at(x)
    return np.einsum("i,ijk->jk", wt, Px @ Ws @ adjoint(Qx))


def theta_of(w: MatrixWeight, lo: float, hi: float) -> np.ndarray:
    """``Theta([lo, hi])``, the interval clipped to the support."""
    n = w.dimension
    if isinstance(w.base, DiscreteAtoms):
        out = np.zeros((n, n), complex)
        for p, m in zip(w.base.points, w.base.masses):
            if lo <= p <= hi:
                out += m * w(p)
        return out
    a, b = w.base.support
    lo, hi = max(lo, a), min(hi, b)
    if not lo < hi:
        return np.zeros((n, n), complex)
    if isinstance(w.base, LebesgueInterval) or (lo == a and hi == b):
        if lo == a and hi == b:
            x, wt = _rule_for(w, 0)
        else:
            x, wt = quadrature_rule(LebesgueInterval(lo, hi), w.poly_degree + 2 * SAFETY_NODES)
        return hermitize(np.einsum("i,ijk->jk", wt, w.at(x)))
    return _theta_gegenbauer(w, lo, hi)


def _theta_gegenbauer(w: MatrixWeight, lo: float, hi: float) -> np.ndarray:
    # scalar moments of (1-x)^(nu-1/2)(1+x)^(nu-1/2) on [lo, hi]; endpoint
    # singularities at -1 or 1 are handled by QUADPACK's algebraic weight
    e = w.base.nu - 0.5
    at_left, at_right = lo == -1.0, hi == 1.0
    wvar = (e if at_left else 0.0, e if at_right else 0.0)

    def smooth(x):
        f = 1.0
        if not at_left:
            f *= (1.0 + x) ** e
        if not at_right:
            f *= (1.0 - x) ** e
        return f

    coeffs = w.monomial_coefficients()
    out = np.zeros((w.dimension, w.dimension), complex)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for k, C in enumerate(coeffs):
            if not np.any(C):
                continue
            kw = {"weight": "alg", "wvar": wvar} if wvar != (0.0, 0.0) else {}
            mk, _ = integrate.quad(lambda x: x**k * smooth(x), lo, hi, epsabs=1e-15,
                                   epsrel=1e-13, limit=200, **kw)
            out += mk * C
    return hermitize(out)


# ---------------------------------------------------------------------------
# positive definite sequences


@dataclass(frozen=True, eq=False)
class GammaSequence:
    """Finite list of strictly positive definite ``N x N`` matrices."""

    dimension: int
    label: str
    matrices: tuple

    def __post_init__(self):
        if self.label not in ("moments-even", "norms", "custom"):
            raise InvalidArgument(f"unknown gamma-sequence label {self.label!r}")
        mats = tuple(as_cmatrix(G) for G in self.matrices)
        for k, G in enumerate(mats):
            if G.shape != (self.dimension, self.dimension):
                raise InvalidArgument(f"member {k} has shape {G.shape}")
            require_positive_definite(G, f"{self.label} member {k}")
        object.__setattr__(self, "matrices", mats)

    def __len__(self) -> int:
        return len(self.matrices)

    def __getitem__(self, k: int) -> np.ndarray:
        return self.matrices[k]
