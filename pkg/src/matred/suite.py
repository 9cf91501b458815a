"""Named numerical property checks, each paired with the tolerance it is judged against."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import commutant as cm
from .examples import flip_matrix, gegenbauer_norms_closed
from .linalg import adjoint, span_residual
from .measure import GammaSequence, MatrixWeight, moment
from .mop import (
    coefficient_difference,
    gamma_from_moments,
    gamma_from_mops,
    gram_schmidt_mops,
    monic_mops,
    norm_ratio_consistency,
    orthogonality_residual,
    recurrence_residual,
    verify_symmetry_identities,
)
from .reduction import NONE, extract_blocks, full_reduce, normalize

IDENTITY_TOL = 1e-9
ORACLE_TOL = 1e-8
MOP_DEGREE = 5


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)

    def as_dict(self) -> dict:
        return {"name": self.name, "value": float(self.value), "tolerance": self.tolerance,
                "passed": self.passed}


def _flag(ok: bool) -> float:
    return 0.0 if ok else 1.0


def mutual_containment(a: cm.SymSpace, b: cm.SymSpace) -> float:
    """Largest distance of a basis element of either space from the other span."""
    r = [span_residual(b.basis, T) for T in a.basis] + [span_residual(a.basis, T) for T in b.basis]
    return float(max(r, default=0.0))


def diag_antidiag_leak(space: cm.SymSpace) -> float:
    """Largest entry of a basis element off the diagonal and antidiagonal."""
    N = space.dimension
    i, j = np.indices((N, N))
    mask = (i != j) & (i + j != N - 1)
    return float(max((np.abs(T[mask]).max(initial=0.0) for T in space.basis), default=0.0))


def consecutive_gamma_checks(gammas: GammaSequence, prefix: str, tol: float = cm.KERNEL_TOL,
                             span_tol: float = cm.SPAN_TOL, count: int | None = None) -> list[Check]:
    """For index pairs ``{n, n+1}`` of diagonal palindromic norms.

    The space is *-invariant, supported on diagonal and antidiagonal, contains
    ``I`` and ``J``, and consists of the real diagonal matrices plus the
    Hermitian antidiagonal ones: real dimension ``N + 2 floor(N/2)``.
    """
    N = gammas.dimension
    J = flip_matrix(N)
    expected_dim = N + 2 * (N // 2)
    checks = []
    last = len(gammas) - 2 if count is None else min(count, len(gammas) - 2)
    for n in range(last + 1):
        sp = cm.gamma_sym_space(gammas, [n, n + 1], tol)
        herm = max((np.abs(T - adjoint(T)).max() for T in sp.basis), default=0.0)
        tag = f"{prefix}[{n},{n + 1}]"
        checks += [
            Check(f"{tag}.star_invariant", _flag(cm.star_invariant(sp, span_tol)), 0.0),
            Check(f"{tag}.hermitian_basis", float(herm), IDENTITY_TOL),
            Check(f"{tag}.real_dim_gap", abs(sp.real_dim - expected_dim), 0.0),
            Check(f"{tag}.contains_I_J", max(sp.residual(np.eye(N)), sp.residual(J)), span_tol),
            Check(f"{tag}.diag_antidiag_support", diag_antidiag_leak(sp), IDENTITY_TOL),
        ]
    return checks


def weight_suite(w: MatrixWeight, degree: int = 4, tol: float = cm.KERNEL_TOL,
                 span_tol: float = cm.SPAN_TOL, seed: int = 0) -> tuple[list[Check], bool]:
    """Full property suite for one weight; returns checks and the tolerance-sensitivity flag."""
    rep = cm.verdict(w, tol, span_tol)
    sym, Ah = rep.sym, rep.herm
    checks: list[Check] = []

    # symmetry space meets the skew-Hermitian matrices trivially
    checks.append(Check("sym.skew_hermitian_content", cm.skew_hermitian_content(sym, tol), IDENTITY_TOL))
    # sym & adjoint(sym) coincides with the Hermitian part of the commutant
    inter = cm.intersection(sym, sym.adjoint_space(), tol)
    checks.append(Check("sym_cap_adjoint.dim_gap", abs(inter.real_dim - Ah.real_dim), 0.0))
    checks.append(Check("sym_cap_adjoint.equals_hermitian_commutant", mutual_containment(inter, Ah), span_tol))
    checks.append(Check("star_invariant_iff_equal",
                        _flag(rep.star_invariant == (mutual_containment(sym, Ah) <= span_tol
                                                     and sym.real_dim == Ah.real_dim)), 0.0))

    # polynomial side
    n_mop = max(MOP_DEGREE, degree + 1)
    mops = monic_mops(w, n_mop)
    gs = gram_schmidt_mops(w, n_mop)
    lem = verify_symmetry_identities(w, mops, sym.basis, degree)
    for key, val in lem.as_dict().items():
        checks.append(Check(f"symmetry_identities.{key}", val, IDENTITY_TOL))
    checks.append(Check("mop.hankel_vs_gram_schmidt", coefficient_difference(mops, gs, MOP_DEGREE), ORACLE_TOL))
    checks.append(Check("mop.recurrence_residual", recurrence_residual(mops), IDENTITY_TOL))
    checks.append(Check("mop.norm_ratio_vs_recurrence_C", norm_ratio_consistency(mops), IDENTITY_TOL))
    checks.append(Check("mop.orthogonality", orthogonality_residual(w, mops), IDENTITY_TOL))

    # gamma-sequence spaces contain the symmetry space; a *-invariant one certifies sym = A_h
    norms = gamma_from_mops(mops)
    evens = gamma_from_moments(w, 3)
    for gam, label in ((norms, "norms"), (evens, "even_moments")):
        sp = cm.gamma_sym_space(gam, range(len(gam)), tol)
        checks.append(Check(f"containment.{label}", max((sp.residual(T) for T in sym.basis), default=0.0),
                            span_tol))
    implication_ok = True
    for n in range(len(norms) - 1):
        sp = cm.gamma_sym_space(norms, [n, n + 1], tol)
        if cm.star_invariant(sp, span_tol):
            implication_ok &= rep.star_invariant and sym.real_dim == Ah.real_dim
    checks.append(Check("gamma_certificate_implies_equality", _flag(implication_ok), 0.0))

    # S^{-1} T S lies in the symmetry space of the normalized weight and is Hermitian there
    S, wn = normalize(w)
    symn = cm.sym_space_of_weight(wn, tol=tol)
    Si = np.linalg.inv(S)
    eq = max((symn.residual(Si @ T @ S) for T in sym.basis), default=0.0)
    checks.append(Check("normalized.conjugation_equivariance", eq, span_tol))
    checks.append(Check("normalized.star_invariant", _flag(cm.star_invariant(symn, span_tol)), 0.0))
    checks.append(Check("normalized.dim_matches", abs(symn.real_dim - sym.real_dim), 0.0))

    # reduction
    red = full_reduce(w, seed, tol, span_tol)
    scale = max(np.linalg.norm(W) for W in w.at(np.linspace(*support_interior(w), 7)))
    checks.append(Check("reduction.offblock_residual", red.residual, 1e-8 * max(scale, 1.0)))
    if red.mode != NONE:
        sub = [full_reduce(b, seed, tol, span_tol).mode for b in extract_blocks(w, red)]
        checks.append(Check("reduction.blocks_irreducible", float(sum(m != NONE for m in sub)), 0.0))

    # closed-form oracles for the matrix Gegenbauer family
    desc = (w.descriptor or {}).get("builtin", {})
    if desc.get("name") == "gegenbauer":
        ell, nu = desc["params"]["ell"], desc["params"]["nu"]
        rel = max(np.abs(mops.norms[n] - gegenbauer_norms_closed(ell, nu, n)).max()
                  / np.abs(gegenbauer_norms_closed(ell, nu, n)).max() for n in range(degree + 1))
        checks.append(Check("gegenbauer.closed_form_norms", float(rel), ORACLE_TOL))
        J = flip_matrix(w.dimension)
        checks.append(Check("gegenbauer.flip_in_commutant", rep.commutant.residual(J), span_tol))
        closed = GammaSequence(w.dimension, "norms",
                               tuple(gegenbauer_norms_closed(ell, nu, n) for n in range(degree + 2)))
        checks += consecutive_gamma_checks(closed, "gegenbauer.norm_pairs", tol, span_tol, degree)

    return checks, rep.tolerance_sensitive


def gamma_suite(gammas: GammaSequence, tol: float = cm.KERNEL_TOL,
                span_tol: float = cm.SPAN_TOL) -> list[Check]:
    checks = consecutive_gamma_checks(gammas, "norm_pairs", tol, span_tol)
    # on each discrete measure the symmetry space meets its adjoint in the Hermitian commutant
    for n in range(len(gammas) - 1):
        sp = cm.gamma_sym_space(gammas, [n, n + 1], tol)
        Ah = cm.hermitian_part(cm.gamma_commutant(gammas, [n, n + 1], tol), span_tol)
        inter = cm.intersection(sp, sp.adjoint_space(), tol)
        checks.append(Check(f"norm_pairs[{n},{n + 1}].sym_cap_adjoint_equals_hermitian_commutant",
                            mutual_containment(inter, Ah) + abs(inter.real_dim - Ah.real_dim), span_tol))
    return checks


def support_interior(w: MatrixWeight):
    a, b = w.base.support
    if a == b:
        return a, b
    pad = 1e-3 * (b - a)
    return a + pad, b - pad
