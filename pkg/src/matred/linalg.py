"""Dense complex matrix primitives.

Matrices are plain ``numpy`` complex arrays.  Real-linear subspaces of
``M_N(C)`` are handled through the real parametrization

    vec(T) = (Re T.ravel(), Im T.ravel())  in  R^(2 N^2),

which lets maps such as ``T -> T G - G T^*`` (real-linear but not
complex-linear) be written as ordinary real matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument, RejectedInput

HERM_TOL = 1e-12
PD_TOL = 1e-12
KERNEL_TOL = 1e-9

# Coordinates whose magnitude falls below this are treated as zero when
# fixing the sign of a basis vector.
_SIGN_EPS = 1e-10


def as_cmatrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise InvalidArgument(f"expected a 2-d matrix, got shape {A.shape}")
    return A


def adjoint(M: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(M, -1, -2))


def is_hermitian(M, herm_tol: float = HERM_TOL) -> bool:
    M = as_cmatrix(M)
    if M.shape[0] != M.shape[1]:
        return False
    scale = 1.0 + (np.abs(M).max() if M.size else 0.0)
    return bool(np.abs(M - M.conj().T).max() <= herm_tol * scale)


def hermitize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + adjoint(M))


def is_positive_definite(M, pd_tol: float = PD_TOL) -> bool:
    """Eigenvalue test: ``min(lam) > pd_tol * max(1, max(lam))``."""
    M = as_cmatrix(M)
    if not is_hermitian(M):
        return False
    lam = np.linalg.eigvalsh(hermitize(M))
    return bool(lam[0] > pd_tol * max(1.0, lam[-1]))


def require_positive_definite(M, what: str = "matrix", pd_tol: float = PD_TOL) -> np.ndarray:
    M = as_cmatrix(M)
    if not is_hermitian(M):
        raise RejectedInput(f"{what} is not Hermitian")
    lam = np.linalg.eigvalsh(hermitize(M))
    if not lam[0] > pd_tol * max(1.0, lam[-1]):
        raise RejectedInput(
            f"{what} is not strictly positive definite (min eigenvalue {lam[0]:.3e})"
        )
    return M


# ---------------------------------------------------------------------------
# real parametrization


def to_real(T: np.ndarray) -> np.ndarray:
    """Real coordinates of one matrix (or a stack of matrices along axis 0)."""
    T = np.asarray(T, dtype=complex)
    if T.ndim == 2:
        return np.concatenate([T.real.ravel(), T.imag.ravel()])
    flat = T.reshape(T.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def from_real(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`to_real`; accepts a vector or a stack of row vectors."""
    v = np.asarray(v, dtype=float)
    nn = n * n
    if v.ndim == 1:
        return (v[:nn] + 1j * v[nn:]).reshape(n, n)
    return (v[:, :nn] + 1j * v[:, nn:]).reshape(v.shape[0], n, n)


def real_unit_basis(n: int) -> np.ndarray:
    """The ``2 n^2`` matrices whose real coordinates are the standard unit vectors."""
    return from_real(np.eye(2 * n * n), n)


def orthonormal_rows(V: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) for the row span of ``V``."""
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if V.shape[0] == 0:
        return V.reshape(0, V.shape[1])
    _, s, vt = np.linalg.svd(V, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((0, V.shape[1]))
    rank = int(np.sum(s > tol * s[0]))
    return vt[:rank]


def canonical_basis(Q: np.ndarray) -> np.ndarray:
    """Canonical orthonormal basis of the row span of the orthonormal rows ``Q``.

    Coordinates are visited in order; each one's projection onto the span,
    minus what is already covered, is kept if it is not negligible.  The result
    depends only on the subspace, not on the rotation returned by the SVD.
    The first non-negligible coordinate of every vector is made positive.
    """
    d, m = Q.shape
    if d == 0:
        return Q.copy()
    chosen: list[np.ndarray] = []
    for j in range(m):
        v = Q.T @ Q[:, j]
        for c in chosen:
            v = v - (c @ v) * c
        for c in chosen:
            v = v - (c @ v) * c
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            chosen.append(v / nv)
            if len(chosen) == d:
                break
    B = np.array(chosen)
    for k in range(B.shape[0]):
        nz = np.flatnonzero(np.abs(B[k]) > _SIGN_EPS)
        if nz.size and B[k, nz[0]] < 0:
            B[k] = -B[k]
    return B


# ---------------------------------------------------------------------------
# kernel of T -> T G - G T^*  (or T G - G T)


@dataclass(frozen=True)
class RealLinearSystem:
    """Stacked real-linear constraints on an unknown ``T`` in ``M_N(C)``.

    ``relation`` is ``"adjoint"`` for ``T G = G T^*`` and ``"commute"`` for
    ``T G = G T``.  Each constraint block is scaled by ``1/||G||_F``, which
    leaves the kernel unchanged but keeps blocks of very different size
    comparable under a relative rank cut.
    """

    dimension: int
    constraints: tuple
    relation: str = "adjoint"
    matrix: np.ndarray = field(repr=False, default=None)


def constraint_residual(T: np.ndarray, G: np.ndarray, relation: str = "adjoint") -> np.ndarray:
    if relation == "adjoint":
        return T @ G - G @ adjoint(T)
    if relation == "commute":
        return T @ G - G @ T
    raise InvalidArgument(f"unknown relation {relation!r}")


def assemble(constraints: Iterable, relation: str = "adjoint", check_pd: bool = True) -> RealLinearSystem:
    """Build the real coefficient matrix of shape ``(2 N^2 k, 2 N^2)``."""
    mats = [as_cmatrix(G) for G in constraints]
    if not mats:
        raise InvalidArgument("at least one constraint matrix is required")
    n = mats[0].shape[0]
    for i, G in enumerate(mats):
        if G.shape != (n, n):
            raise InvalidArgument(f"constraint {i} has shape {G.shape}, expected {(n, n)}")
        if check_pd:
            require_positive_definite(G, f"constraint matrix {i}")
    if relation not in ("adjoint", "commute"):
        raise InvalidArgument(f"unknown relation {relation!r}")
    units = real_unit_basis(n)
    unitsH = adjoint(units)
    blocks = []
    for G in mats:
        scale = np.linalg.norm(G)
        if scale == 0.0:
            continue
        Gs = G / scale
        other = unitsH if relation == "adjoint" else units
        images = units @ Gs - Gs @ other
        blocks.append(to_real(images).T)
    matrix = np.vstack(blocks) if blocks else np.zeros((0, 2 * n * n))
    return RealLinearSystem(n, tuple(mats), relation, matrix)


def nullspace_rows(A: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal rows spanning the numerical nullspace of ``A``."""
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(ncols)
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return np.eye(ncols)
    rank = int(np.sum(s > tol * smax))
    return vt[rank:]


def real_kernel_basis(sys: RealLinearSystem, tol: float = KERNEL_TOL) -> np.ndarray:
    """Real basis of ``{T : T G = G T^* for every constraint G}``.

    Returns an array of shape ``(d, N, N)`` whose real coordinates are
    orthonormal; ``d`` is the real dimension of the solution space.
    """
    if not 0.0 < tol < 1.0:
        raise InvalidArgument(f"tol must lie in (0, 1), got {tol}")
    null = nullspace_rows(sys.matrix, tol)
    return from_real(canonical_basis(null), sys.dimension)


# ---------------------------------------------------------------------------
# Hermitian spectral tools


def hermitian_eig(M) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and a unitary eigenvector matrix of Hermitian ``M``.

    The phase of every eigenvector is fixed so that its largest-magnitude
    component is real and positive.
    """
    M = as_cmatrix(M)
    if not is_hermitian(M):
        raise InvalidArgument("hermitian_eig needs a Hermitian matrix")
    lam, U = np.linalg.eigh(hermitize(M))
    for k in range(U.shape[1]):
        col = U[:, k]
        j = int(np.argmax(np.abs(col) - 1e-12 * np.arange(col.size)))
        ph = col[j] / abs(col[j])
        U[:, k] = col / ph
    return lam, U


def hermitian_sqrt(M, pd_tol: float = PD_TOL) -> np.ndarray:
    """The positive definite square root of a positive definite matrix."""
    M = require_positive_definite(M, "matrix", pd_tol)
    lam, U = np.linalg.eigh(hermitize(M))
    S = (U * np.sqrt(lam)) @ U.conj().T
    return hermitize(S)


# ---------------------------------------------------------------------------
# spans and block structure


def _basis_rows(space) -> np.ndarray:
    """Orthonormal real rows; a plain stack of matrices is orthonormalized first."""
    raw = not hasattr(space, "basis")
    basis = np.asarray(getattr(space, "basis", space), dtype=complex)
    if basis.ndim == 2:
        basis = basis[None]
    if not basis.shape[0]:
        return np.zeros((0, 2 * basis.shape[-1] ** 2))
    rows = to_real(basis)
    return orthonormal_rows(rows) if raw else rows


def span_residual(space, M) -> float:
    """Distance of ``M`` (real coordinates) from the real span of ``space``."""
    M = as_cmatrix(M)
    B = _basis_rows(space)
    v = to_real(M)
    if B.shape[1] != v.size:
        raise InvalidArgument(
            f"matrix of shape {M.shape} does not match space of real dimension {B.shape[1]}"
        )
    return float(np.linalg.norm(v - B.T @ (B @ v)))


def span_contains(space, M, tol: float = 1e-8) -> bool:
    M = as_cmatrix(M)
    return span_residual(space, M) <= tol * (1.0 + np.linalg.norm(M))


def validate_partition(partition: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    groups = [[int(i) for i in g] for g in partition]
    flat = [i for g in groups for i in g]
    if any(len(g) == 0 for g in groups):
        raise InvalidArgument("partition contains an empty group")
    if sorted(flat) != list(range(n)):
        raise InvalidArgument(f"partition {groups} is not a disjoint cover of 0..{n - 1}")
    return groups


def block_mask(partition: Sequence[Sequence[int]], n: int) -> np.ndarray:
    groups = validate_partition(partition, n)
    label = np.empty(n, dtype=int)
    for k, g in enumerate(groups):
        label[g] = k
    return label[:, None] != label[None, :]


def offblock_norm(M, partition: Sequence[Sequence[int]]) -> float:
    """Frobenius norm of the entries of ``M`` linking different groups."""
    M = as_cmatrix(M)
    if M.shape[0] != M.shape[1]:
        raise InvalidArgument("offblock_norm needs a square matrix")
    mask = block_mask(partition, M.shape[0])
    return float(np.linalg.norm(M[mask]))
