"""Explicit reducing matrices.

A non-scalar Hermitian element of the commutant splits ``C^N`` into
orthogonal eigenspaces, each invariant under the weight; conjugating by the
eigenvector matrix block-diagonalizes ``W``.  When the symmetry space is
larger than the Hermitian part of the commutant, the weight is first
normalized by ``S = M_0^{1/2}``, after which the two spaces coincide.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .commutant import (
    KERNEL_TOL,
    SPAN_TOL,
    SymSpace,
    commutant_of_weight,
    hermitian_part,
    star_invariant,
    sym_space_of_weight,
)
from .errors import InvalidArgument
from .linalg import hermitian_eig, hermitian_sqrt, offblock_norm
from .measure import DiscreteAtoms, MatrixWeight, interior_nodes, moment

logger = logging.getLogger(__name__)

UNITARY = "unitary"
NORMALIZED_UNITARY = "normalized-unitary"
NONE = "none"

DEFAULT_SEED = 0
GAP_FACTOR = 1e-6
MAX_RETRIES = 8
TEST_NODES = 20


@dataclass(frozen=True, eq=False)
class ReductionResult:
    """``transform @ W(x) @ transform^*`` is block diagonal w.r.t. ``partition``."""

    transform: np.ndarray
    partition: list
    block_sizes: list
    residual: float
    mode: str
    seed: int | None = None
    eigenvalues: np.ndarray | None = None
    S: np.ndarray | None = None
    diagnostic: str = ""


def probe_nodes(w: MatrixWeight, count: int = TEST_NODES) -> np.ndarray:
    if isinstance(w.base, DiscreteAtoms):
        return np.array(w.base.points)
    return interior_nodes(w.base, count)


def _identity_result(w: MatrixWeight, diagnostic: str) -> ReductionResult:
    N = w.dimension
    return ReductionResult(np.eye(N, dtype=complex), [list(range(N))], [N], 0.0, NONE,
                           diagnostic=diagnostic)


def group_eigenvalues(lam: np.ndarray, gap_tol: float) -> list[list[int]]:
    """Split ascending eigenvalues wherever consecutive gaps reach ``gap_tol``."""
    groups = [[0]]
    for k in range(1, lam.size):
        if lam[k] - lam[k - 1] < gap_tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def _generic_element(Ah: SymSpace, rng: np.random.Generator) -> np.ndarray:
    N = Ah.dimension
    c = rng.standard_normal(Ah.real_dim)
    T = np.einsum("k,kij->ij", c, Ah.basis)
    T = T - np.trace(T).real / N * np.eye(N)
    return 0.5 * (T + T.conj().T)


def unitary_reduce(w: MatrixWeight, Ah: SymSpace, seed: int = DEFAULT_SEED,
                   gap_tol: float | None = None) -> ReductionResult:
    """Block-diagonalize ``W`` with the eigenvectors of a generic element of ``Ah``.

    Coefficients of the generic element come from ``numpy.random.default_rng(seed)``;
    a fresh seed (``seed + 1``, ...) is tried when some eigenvalue gap is
    ambiguous, i.e. within a factor 100 above the grouping threshold.
    """
    N = w.dimension
    if Ah.dimension != N:
        raise InvalidArgument("Hermitian space does not match the weight dimension")
    if Ah.real_dim <= 1:
        return _identity_result(w, "Hermitian part of the commutant is scalar")
    for attempt in range(MAX_RETRIES):
        s = seed + attempt
        T = _generic_element(Ah, np.random.default_rng(s))
        lam, U = hermitian_eig(T)
        spread = lam[-1] - lam[0]
        if spread <= 1e-12 * max(1.0, np.abs(lam).max()):
            continue
        tol = GAP_FACTOR * spread if gap_tol is None else gap_tol
        gaps = np.diff(lam)
        if np.any((gaps >= tol) & (gaps < 100 * tol)):
            logger.info("seed %d gives an ambiguous eigenvalue gap; retrying", s)
            continue
        groups = group_eigenvalues(lam, tol)
        break
    else:
        return _identity_result(w, "no generic element with well separated eigenvalues found")
    if len(groups) == 1:
        return _identity_result(w, "generic element has a single eigenvalue cluster")

    M0 = moment(w, 0)
    blocks = []
    for g in groups:
        V = U[:, g]
        tr = round(float(np.trace(V.conj().T @ M0 @ V).real), 10)
        blocks.append((-len(g), tr, g))
    blocks.sort(key=lambda b: (b[0], b[1]))
    order = [i for _, _, g in blocks for i in g]
    sizes = [len(g) for _, _, g in blocks]
    partition, start = [], 0
    for s_ in sizes:
        partition.append(list(range(start, start + s_)))
        start += s_
    M = U[:, order].conj().T
    result = ReductionResult(M, partition, sizes, 0.0, UNITARY, s, lam[order])
    return replace(result, residual=verify_block_structure(w, result))


def normalize(w: MatrixWeight) -> tuple[np.ndarray, MatrixWeight]:
    """``S = M_0^{1/2}`` and the weight ``S^{-1} W S^{-1}`` whose zeroth moment is ``I``."""
    S = hermitian_sqrt(moment(w, 0))
    Si = np.linalg.inv(S)
    Si = 0.5 * (Si + Si.conj().T)
    return S, w.transformed(Si, name=f"{w.name}|normalized")


def full_reduce(w: MatrixWeight, seed: int = DEFAULT_SEED, tol: float = KERNEL_TOL,
                span_tol: float = SPAN_TOL, gap_tol: float | None = None) -> ReductionResult:
    """Finest reduction reachable through Hermitian commutant elements.

    Uses a unitary directly when the symmetry space is *-invariant, and the
    normalized weight otherwise.
    """
    sym = sym_space_of_weight(w, tol=tol)
    if sym.real_dim <= 1:
        return _identity_result(w, "symmetry space is scalar: irreducible")
    if star_invariant(sym, span_tol):
        Ah = hermitian_part(commutant_of_weight(w, tol=tol), span_tol)
        return unitary_reduce(w, Ah, seed, gap_tol)
    S, wn = normalize(w)
    Ah = hermitian_part(commutant_of_weight(wn, tol=tol), span_tol)
    inner = unitary_reduce(wn, Ah, seed, gap_tol)
    if inner.mode == NONE:
        return inner
    Si = np.linalg.inv(S)
    M = inner.transform @ Si
    result = replace(inner, transform=M, mode=NORMALIZED_UNITARY, S=S)
    return replace(result, residual=verify_block_structure(w, result))


def verify_block_structure(w: MatrixWeight, result: ReductionResult, nodes=None) -> float:
    """Max off-block norm of ``M W(x) M^*`` over test nodes, and of ``M M_0 M^*``."""
    xs = probe_nodes(w) if nodes is None else np.atleast_1d(nodes)
    M = result.transform
    worst = max(offblock_norm(M @ W @ M.conj().T, result.partition) for W in w.at(xs))
    M0 = moment(w, 0)
    return float(max(worst, offblock_norm(M @ M0 @ M.conj().T, result.partition)))


def extract_blocks(w: MatrixWeight, result: ReductionResult) -> list[MatrixWeight]:
    """The diagonal blocks of ``M W M^*`` as weights of their own."""
    wt = w.transformed(result.transform, name=f"{w.name}|reduced")
    return [wt.restricted(g, name=f"{w.name}|block{k}") for k, g in enumerate(result.partition)]
