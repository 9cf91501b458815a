import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matred import commutant as cm
from matred.examples import example_weights, flip_matrix, gegenbauer_weight
from matred.linalg import offblock_norm
from matred.measure import LebesgueInterval, MatrixWeight, moment
from matred.reduction import (
    NONE,
    NORMALIZED_UNITARY,
    UNITARY,
    ReductionResult,
    extract_blocks,
    full_reduce,
    group_eigenvalues,
    normalize,
    unitary_reduce,
    verify_block_structure,
)

from weights import random_block_weight, random_invertible, random_unitary

GEGENBAUER = [w for w in example_weights() if w.name.startswith("gegenbauer")]
seeds = st.integers(0, 2**31 - 1)


def herm_part(w):
    return cm.hermitian_part(cm.commutant_of_weight(w))


def max_weight_norm(w, count=20):
    from matred.reduction import probe_nodes
    return max(np.linalg.norm(W) for W in w.at(probe_nodes(w, count)))


# --- unitary reduction -------------------------------------------------------


def test_gegenbauer_three_splits_two_one(geg11):
    r = unitary_reduce(geg11, herm_part(geg11))
    assert r.mode == UNITARY and r.block_sizes == [2, 1]
    assert r.residual < 1e-10
    # the blocks are the eigenspaces of J
    JM = r.transform @ flip_matrix(3) @ r.transform.conj().T
    assert offblock_norm(JM, r.partition) < 1e-12


def test_gegenbauer_four_splits_two_two():
    w = gegenbauer_weight(1.5, 1.0)
    r = unitary_reduce(w, herm_part(w))
    assert r.block_sizes == [2, 2] and r.residual < 1e-10 * max_weight_norm(w)


def test_scalar_hermitian_part_gives_none(w2x2):
    r = unitary_reduce(w2x2, herm_part(w2x2))
    assert r.mode == NONE and np.array_equal(r.transform, np.eye(2))


def test_group_eigenvalues():
    assert group_eigenvalues(np.array([0.0, 1e-9, 1.0, 2.0]), 1e-6) == [[0, 1], [2], [3]]


def test_explicit_gap_tolerance(geg11):
    # a threshold above the eigenvalue spread merges everything
    r = full_reduce(geg11, gap_tol=1e3)
    assert r.mode == NONE


# --- normalization -----------------------------------------------------------


def test_normalize_two_by_two(w2x2, ref2x2):
    S, wn = normalize(w2x2)
    assert np.abs(S - ref2x2.S).max() < 1e-10
    assert np.abs(wn(0.5) - ref2x2.normalized_weight(0.5)).max() < 1e-10
    assert np.abs(moment(wn, 0) - np.eye(2)).max() < 1e-10


def test_normalize_trivial_cases():
    w = MatrixWeight.from_coefficients([np.eye(2)], LebesgueInterval())
    S, _ = normalize(w)
    assert np.allclose(S, np.eye(2), atol=1e-14)
    w = MatrixWeight.from_coefficients([3.0 * np.eye(2)], LebesgueInterval())
    S, _ = normalize(w)
    assert np.allclose(S, np.sqrt(3) * np.eye(2), atol=1e-14)


# --- full pipeline -----------------------------------------------------------


def test_full_reduce_two_by_two(w2x2):
    r = full_reduce(w2x2)
    assert r.mode == NORMALIZED_UNITARY and r.block_sizes == [1, 1]
    M0 = moment(w2x2, 0)
    assert np.abs(r.transform @ M0 @ r.transform.conj().T - np.eye(2)).max() < 1e-9
    assert r.residual < 1e-8 * max_weight_norm(w2x2)


def test_full_reduce_gegenbauer(geg11):
    r = full_reduce(geg11)
    assert r.mode == UNITARY and r.block_sizes == [2, 1]


def test_full_reduce_scalar():
    w = MatrixWeight.from_coefficients([np.ones((1, 1)), np.ones((1, 1))], LebesgueInterval())
    assert full_reduce(w).mode == NONE


@pytest.mark.parametrize("w", GEGENBAUER, ids=lambda w: w.name)
def test_unitary_invariants(w):
    r = full_reduce(w)
    N = w.dimension
    assert r.mode == UNITARY
    assert np.abs(r.transform @ r.transform.conj().T - np.eye(N)).max() < 1e-10
    assert r.block_sizes == [(N + 1) // 2, N // 2]
    assert sum(r.block_sizes) == N
    assert sorted(i for g in r.partition for i in g) == list(range(N))
    assert r.residual <= 1e-8 * max_weight_norm(w)
    # block sizes are the multiplicities of the eigenvalues of the chosen element
    lam = r.eigenvalues
    mult = [len(g) for g in group_eigenvalues(np.sort(lam), 1e-6 * (lam.max() - lam.min()))]
    assert sorted(mult) == sorted(r.block_sizes)


@pytest.mark.parametrize("w", example_weights(), ids=lambda w: w.name)
def test_blocks_are_irreducible(w):
    r = full_reduce(w)
    for b in extract_blocks(w, r):
        assert full_reduce(b).mode == NONE


def test_reduction_is_deterministic(geg11):
    a, b = full_reduce(geg11, seed=3), full_reduce(geg11, seed=3)
    assert np.array_equal(a.transform, b.transform) and a.partition == b.partition


# --- block verification ------------------------------------------------------


def test_verify_block_structure_examples(geg11):
    r = unitary_reduce(geg11, herm_part(geg11))
    assert verify_block_structure(geg11, r) < 1e-10
    ident = ReductionResult(np.eye(3), [[0, 1, 2]], [3], 0.0, NONE)
    assert verify_block_structure(geg11, ident) == 0
    wrong = ReductionResult(np.eye(3), [[0], [1, 2]], [1, 2], 0.0, UNITARY)
    assert verify_block_structure(geg11, wrong, nodes=[0.3]) > 0.01


# --- properties on random weights with hidden blocks -------------------------


@given(seeds, st.sampled_from([(1, 1), (2, 1), (2, 2), (1, 1, 1), (3, 1)]))
def test_recovers_hidden_unitary_blocks(seed, sizes):
    rng = np.random.default_rng(seed)
    w = random_block_weight(rng, sizes).transformed(random_unitary(rng, sum(sizes)))
    r = full_reduce(w)
    assert r.mode == UNITARY
    assert sorted(r.block_sizes) == sorted(sizes)
    assert r.residual <= 1e-8 * max_weight_norm(w)


@given(seeds, st.sampled_from([(1, 1), (2, 1), (2, 2)]))
def test_recovers_hidden_non_unitary_blocks(seed, sizes):
    rng = np.random.default_rng(seed)
    w = random_block_weight(rng, sizes).transformed(random_invertible(rng, sum(sizes)))
    r = full_reduce(w)
    assert r.mode == NORMALIZED_UNITARY
    assert sorted(r.block_sizes) == sorted(sizes)
    assert r.residual <= 1e-8 * max_weight_norm(w)
    M0 = moment(w, 0)
    assert np.abs(r.transform @ M0 @ r.transform.conj().T - np.eye(w.dimension)).max() < 1e-9


@given(seeds)
def test_structure_invariant_under_unitary_conjugation(seed):
    rng = np.random.default_rng(seed)
    w = [gegenbauer_weight(1, 1.0), gegenbauer_weight(1.5, 2.3)][seed % 2]
    U = random_unitary(rng, w.dimension)
    a, b = full_reduce(w), full_reduce(w.transformed(U))
    assert a.mode == b.mode and sorted(a.block_sizes) == sorted(b.block_sizes)
