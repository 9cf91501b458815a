"""Symmetry spaces, commutant algebras and the *-invariance criterion.

For a weight ``W`` the two objects of interest are

* the real space ``{T : T W(x) = W(x) T^*}`` (the *symmetry space*), whose
  non-scalar elements signal that the measure splits into smaller blocks;
* the commutant ``{T : T W(x) = W(x) T}``, a complex *-algebra whose Hermitian
  part gives reductions by unitary matrices.

The symmetry space equals the Hermitian part of the commutant exactly when it
is closed under taking adjoints.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import InconsistentResultError, InvalidArgument, RejectedInput
from .linalg import (
    KERNEL_TOL,
    adjoint,
    assemble,
    canonical_basis,
    constraint_residual,
    from_real,
    is_hermitian,
    nullspace_rows,
    orthonormal_rows,
    real_kernel_basis,
    span_contains,
    span_residual,
    to_real,
)
from .measure import DiscreteAtoms, GammaSequence, MatrixWeight, interior_nodes

logger = logging.getLogger(__name__)

SPAN_TOL = 1e-8
VERIFY_NODES = 5
VERIFY_SEED = 20160123


@dataclass(frozen=True, eq=False)
class SymSpace:
    """A real-linear subspace of ``M_N(C)`` with an orthonormal real basis.

    ``relation`` records how the space was defined: ``"adjoint"`` for
    ``T G = G T^*`` spaces, ``"commute"`` for commutants, ``"hermitian"`` for
    Hermitian parts and ``None`` for anything else.
    """

    dimension: int
    basis: np.ndarray
    field: str = "real"
    relation: str | None = None
    provenance: str = ""
    tol: float = KERNEL_TOL
    tolerance_sensitive: bool = False

    @property
    def real_dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def complex_dim(self) -> int:
        if self.field != "complex":
            raise InvalidArgument("complex dimension is only defined for complex spaces")
        return self.real_dim // 2

    @property
    def rows(self) -> np.ndarray:
        return to_real(self.basis) if self.real_dim else np.zeros((0, 2 * self.dimension**2))

    def contains(self, M, tol: float = SPAN_TOL) -> bool:
        return span_contains(self.basis, M, tol)

    def residual(self, M) -> float:
        return span_residual(self.basis, M)

    def adjoint_space(self) -> "SymSpace":
        rows = orthonormal_rows(to_real(adjoint(self.basis))) if self.real_dim else self.rows
        return replace(self, basis=from_real(canonical_basis(rows), self.dimension),
                       relation=None, provenance=f"adjoint of ({self.provenance})")

    def conjugated(self, S) -> "SymSpace":
        """The space ``S^{-1} X S``."""
        S = np.asarray(S, complex)
        Si = np.linalg.inv(S)
        mats = Si @ self.basis @ S
        rows = orthonormal_rows(to_real(mats))
        return replace(self, basis=from_real(canonical_basis(rows), self.dimension),
                       provenance=f"S^-1 ({self.provenance}) S")


def space_from_matrices(mats: Sequence[np.ndarray], field: str = "real", provenance: str = "") -> SymSpace:
    """Real span of explicit matrices."""
    mats = np.asarray(mats, dtype=complex)
    n = mats.shape[-1]
    if field == "complex":
        mats = np.concatenate([mats, 1j * mats])
    rows = orthonormal_rows(to_real(mats))
    return SymSpace(n, from_real(canonical_basis(rows), n), field, None, provenance)


# ---------------------------------------------------------------------------
# spaces attached to a weight


def weight_nodes(w: MatrixWeight, sampling: int | None = None) -> np.ndarray:
    """Nodes at which the pointwise relations are imposed.

    For continuous base measures: ``sampling`` Chebyshev points (default
    ``poly_degree + 1``) with nodes where ``W`` is singular dropped.  A matrix
    polynomial identity of degree ``d`` holding at ``d + 1`` points holds
    identically.  For atoms every atom is used.
    """
    if isinstance(w.base, DiscreteAtoms):
        return np.array(w.base.points)
    need = w.poly_degree + 1
    if sampling is None:
        sampling = need
    if sampling < need:
        raise InvalidArgument(f"sampling {sampling} is below poly_degree + 1 = {need}")
    xs = interior_nodes(w.base, sampling)
    Ws = w.check_nodes(xs)
    keep = []
    for x, W in zip(xs, Ws):
        lam = np.linalg.eigvalsh(0.5 * (W + W.conj().T))
        if lam[-1] > 0 and lam[0] > 1e-12 * lam[-1]:
            keep.append(x)
    if len(keep) < need:
        raise RejectedInput(
            f"only {len(keep)} of {sampling} nodes have W strictly positive definite; need {need}"
        )
    return np.array(keep)


def _kernel_space(constraints, relation: str, tol: float, provenance: str, check_pd: bool) -> SymSpace:
    sys = assemble(constraints, relation, check_pd=check_pd)
    basis = real_kernel_basis(sys, tol)
    tight = real_kernel_basis(sys, tol / 10)
    sensitive = tight.shape[0] != basis.shape[0]
    if sensitive:
        logger.warning("%s: dimension changes from %d to %d under a 10x tighter tolerance",
                       provenance, basis.shape[0], tight.shape[0])
    field = "complex" if relation == "commute" else "real"
    return SymSpace(sys.dimension, basis, field, relation, provenance, tol, sensitive)


def _verify_extra_nodes(w: MatrixWeight, space: SymSpace, relation: str, seed: int = VERIFY_SEED) -> None:
    if isinstance(w.base, DiscreteAtoms) or space.real_dim == 0:
        return
    a, b = w.base.support
    rng = np.random.default_rng(seed)
    xs = a + (b - a) * rng.uniform(0.05, 0.95, VERIFY_NODES)
    for x in xs:
        W = w(x)
        scale = np.linalg.norm(W)
        for T in space.basis:
            r = np.linalg.norm(constraint_residual(T, W, relation))
            if r > 1e-7 * scale:
                raise InconsistentResultError(
                    f"relation fails at x={x:.6g} (residual {r:.2e}); "
                    f"is poly_degree={w.poly_degree} correct?"
                )


def sym_space_of_weight(w: MatrixWeight, sampling: int | None = None, tol: float = KERNEL_TOL) -> SymSpace:
    """Real space of ``T`` with ``T W(x) = W(x) T^*`` almost everywhere."""
    xs = weight_nodes(w, sampling)
    space = _kernel_space(w.at(xs), "adjoint", tol, f"symmetry space of {w.name}", check_pd=False)
    _verify_extra_nodes(w, space, "adjoint")
    return space


def commutant_of_weight(w: MatrixWeight, sampling: int | None = None, tol: float = KERNEL_TOL) -> SymSpace:
    """Complex algebra of ``T`` with ``T W(x) = W(x) T``."""
    xs = weight_nodes(w, sampling)
    space = _kernel_space(w.at(xs), "commute", tol, f"commutant of {w.name}", check_pd=False)
    _verify_extra_nodes(w, space, "commute")
    _check_algebra(space)
    return space


def _check_algebra(A: SymSpace, tol: float = SPAN_TOL) -> None:
    for T in A.basis:
        if not A.contains(adjoint(T), tol):
            raise InconsistentResultError("commutant basis is not closed under adjoints")
        if not A.contains(1j * T, tol):
            raise InconsistentResultError("commutant basis is not closed under multiplication by i")
    for T in A.basis:
        for U in A.basis:
            if not A.contains(T @ U, tol * (1 + np.linalg.norm(T) * np.linalg.norm(U))):
                raise InconsistentResultError("commutant basis is not closed under products")


def hermitian_part(A: SymSpace, tol: float = SPAN_TOL) -> SymSpace:
    """Real space of Hermitian elements of an adjoint-closed complex space."""
    if A.field != "complex":
        raise InvalidArgument("hermitian_part expects a complex space")
    for T in A.basis:
        if not A.contains(adjoint(T), tol):
            raise InvalidArgument("space is not closed under adjoints; kernel tolerance may be too loose")
    herm = 0.5 * (A.basis + adjoint(A.basis))
    rows = orthonormal_rows(to_real(herm), 1e-8)
    out = SymSpace(A.dimension, from_real(canonical_basis(rows), A.dimension), "real", "hermitian",
                   f"Hermitian part of ({A.provenance})", A.tol, A.tolerance_sensitive)
    if out.real_dim != A.complex_dim:
        raise InconsistentResultError(
            f"Hermitian part has real dimension {out.real_dim}, expected {A.complex_dim}"
        )
    return out


def gamma_sym_space(gammas: GammaSequence, indices: Iterable[int], tol: float = KERNEL_TOL) -> SymSpace:
    """``{T : T G_n = G_n T^* for n in indices}``."""
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise InvalidArgument("index set must be non-empty")
    if idx[0] < 0 or idx[-1] >= len(gammas):
        raise InvalidArgument(f"indices {idx} out of range for a sequence of length {len(gammas)}")
    return _kernel_space([gammas[i] for i in idx], "adjoint", tol,
                         f"{gammas.label} symmetry space over {idx}", check_pd=True)


def gamma_commutant(gammas: GammaSequence, indices: Iterable[int], tol: float = KERNEL_TOL) -> SymSpace:
    """``{T : T G_n = G_n T for n in indices}``."""
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise InvalidArgument("index set must be non-empty")
    if idx[0] < 0 or idx[-1] >= len(gammas):
        raise InvalidArgument(f"indices {idx} out of range for a sequence of length {len(gammas)}")
    return _kernel_space([gammas[i] for i in idx], "commute", tol,
                         f"{gammas.label} commutant over {idx}", check_pd=True)


# ---------------------------------------------------------------------------
# criteria


def star_invariant(space: SymSpace, tol: float = SPAN_TOL) -> bool:
    """Whether the adjoint of every basis element lies in the span.

    For a symmetry space a positive answer forces every element to be
    Hermitian; that consequence is checked rather than assumed.
    """
    ok = all(space.contains(adjoint(T), tol) for T in space.basis)
    if ok and space.relation == "adjoint":
        for T in space.basis:
            if np.linalg.norm(T - adjoint(T)) > tol * (1 + np.linalg.norm(T)) * 10:
                raise InconsistentResultError(
                    f"*-invariant symmetry space has a non-Hermitian element ({space.provenance})"
                )
    return ok


def intersection(a: SymSpace, b: SymSpace, tol: float = KERNEL_TOL) -> SymSpace:
    """Intersection of two real spans, as the kernel of stacked complement projectors."""
    if a.dimension != b.dimension:
        raise InvalidArgument("spaces have different matrix sizes")
    m = 2 * a.dimension**2
    Pa = np.eye(m) - a.rows.T @ a.rows
    Pb = np.eye(m) - b.rows.T @ b.rows
    null = nullspace_rows(np.vstack([Pa, Pb]), tol)
    # the stack always has singular values 0 or >= ~1 relative to its max
    return SymSpace(a.dimension, from_real(canonical_basis(null), a.dimension), "real", None,
                    f"({a.provenance}) & ({b.provenance})", tol)


def _skew_rows(n: int) -> np.ndarray:
    """Orthonormal real coordinates of the skew-Hermitian matrices."""
    mats = []
    for i in range(n):
        E = np.zeros((n, n), complex)
        E[i, i] = 1j
        mats.append(E)
        for j in range(i + 1, n):
            E = np.zeros((n, n), complex)
            E[i, j], E[j, i] = 1, -1
            mats.append(E / np.sqrt(2))
            E = np.zeros((n, n), complex)
            E[i, j], E[j, i] = 1j, 1j
            mats.append(E / np.sqrt(2))
    return to_real(np.array(mats))


def skew_hermitian_space(n: int) -> SymSpace:
    return SymSpace(n, from_real(_skew_rows(n), n), "real", None, "skew-Hermitian matrices")


def skew_hermitian_content(space: SymSpace, tol: float = KERNEL_TOL) -> float:
    """Largest norm of a skew-Hermitian element in the unit ball of the span.

    Computed from the numerical intersection of the span with the
    skew-Hermitian matrices; zero when the intersection is trivial.
    """
    if space.real_dim == 0:
        return 0.0
    inter = intersection(space, skew_hermitian_space(space.dimension), tol)
    if inter.real_dim == 0:
        return 0.0
    K = _skew_rows(space.dimension)
    return float(max(np.linalg.norm(K @ v) for v in inter.rows))


def skew_hermitian_overlap(space: SymSpace) -> float:
    """Cosine of the smallest principal angle between the span and the skew-Hermitian matrices.

    Equals the largest skew-Hermitian component of a unit element of the span;
    it is positive for any span containing non-Hermitian elements, and 1 exactly
    when the span meets the skew-Hermitian matrices.
    """
    if space.real_dim == 0:
        return 0.0
    s = np.linalg.svd(space.rows @ _skew_rows(space.dimension).T, compute_uv=False)
    return float(s[0])


# ---------------------------------------------------------------------------
# verdict


IRREDUCIBLE = "irreducible"
UNITARY_ONLY = "unitarily-reducible-only"
NON_UNITARY = "non-unitarily-reducible"


@dataclass(frozen=True, eq=False)
class ReducibilityReport:
    sym: SymSpace
    commutant: SymSpace
    herm: SymSpace
    star_invariant: bool
    classification: str
    tolerance_sensitive: bool = False

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.sym.real_dim, self.commutant.complex_dim, self.herm.real_dim)


def classify(sym: SymSpace, star: bool) -> str:
    if sym.real_dim <= 1:
        return IRREDUCIBLE
    return UNITARY_ONLY if star else NON_UNITARY


def verdict(w: MatrixWeight, tol: float = KERNEL_TOL, span_tol: float = SPAN_TOL) -> ReducibilityReport:
    sym = sym_space_of_weight(w, tol=tol)
    A = commutant_of_weight(w, tol=tol)
    Ah = hermitian_part(A, span_tol)
    star = star_invariant(sym, span_tol)
    sensitive = sym.tolerance_sensitive or A.tolerance_sensitive
    if star and sym.real_dim != Ah.real_dim:
        # near the kernel cut the two systems may disagree; only that case is tolerated
        if not sensitive:
            raise InconsistentResultError(
                f"symmetry space is *-invariant but has dimension {sym.real_dim} != {Ah.real_dim}"
            )
        logger.warning("symmetry space and Hermitian commutant disagree in dimension (%d vs %d) "
                       "near the kernel tolerance", sym.real_dim, Ah.real_dim)
    return ReducibilityReport(sym, A, Ah, star, classify(sym, star), sensitive)
