import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matred import commutant as cm
from matred.errors import InvalidArgument
from matred.examples import example_weights, flip_matrix, gegenbauer_norm_sequence, gegenbauer_weight
from matred.linalg import adjoint, span_contains
from matred.measure import GammaSequence, LebesgueInterval, MatrixWeight
from matred.suite import mutual_containment

from conftest import SQRT6
from test_linalg import brute_force_kernel_dim
from weights import random_block_weight, random_invertible, random_unitary

EXAMPLES = example_weights()
seeds = st.integers(0, 2**31 - 1)


def span_of(*mats):
    return cm.space_from_matrices([np.asarray(M, complex) for M in mats])


# --- symmetry space and commutant of weights ---------------------------------


def test_two_by_two_symmetry_space(w2x2, ref2x2):
    sym = cm.sym_space_of_weight(w2x2)
    assert sym.real_dim == 2
    assert mutual_containment(sym, span_of(np.eye(2), ref2x2.sym_element)) < 1e-10


def test_non_proportional_diagonal_weight():
    w = MatrixWeight.from_coefficients([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], LebesgueInterval())
    sym = cm.sym_space_of_weight(w)
    assert sym.real_dim == 2
    assert mutual_containment(sym, span_of(np.diag([1.0, 0]), np.diag([0, 1.0]))) < 1e-10


def test_gegenbauer_symmetry_space(geg11):
    sym = cm.sym_space_of_weight(geg11)
    assert sym.real_dim == 2
    assert mutual_containment(sym, span_of(np.eye(3), flip_matrix(3))) < 1e-10


def test_two_by_two_commutant_is_scalar(w2x2):
    A = cm.commutant_of_weight(w2x2)
    assert A.complex_dim == 1 and A.contains(np.eye(2)) and A.contains(1j * np.eye(2))


@pytest.mark.parametrize("ell", [0.5, 1.0, 1.5, 2.0])
def test_gegenbauer_commutant(ell):
    A = cm.commutant_of_weight(gegenbauer_weight(ell, 1.0))
    assert A.complex_dim == 2 and A.contains(flip_matrix(A.dimension))


def test_scalar_multiple_of_identity_has_full_commutant():
    w = MatrixWeight.from_coefficients([np.eye(3), 2 * np.eye(3)], LebesgueInterval())
    assert cm.commutant_of_weight(w).complex_dim == 9


def test_sampling_below_degree_rejected(geg11):
    with pytest.raises(InvalidArgument):
        cm.sym_space_of_weight(geg11, sampling=geg11.poly_degree)


@pytest.mark.parametrize("w", EXAMPLES, ids=lambda w: w.name)
def test_dimension_independent_of_sampling(w):
    base = cm.sym_space_of_weight(w)
    more = cm.sym_space_of_weight(w, sampling=w.poly_degree + 4)
    assert base.real_dim == more.real_dim
    assert mutual_containment(base, more) < 1e-8


@pytest.mark.parametrize("w", EXAMPLES[:6], ids=lambda w: w.name)
def test_symmetry_dimension_matches_brute_force(w):
    from matred.commutant import weight_nodes
    Ws = list(w.at(weight_nodes(w)))
    assert cm.sym_space_of_weight(w).real_dim == brute_force_kernel_dim(Ws)
    assert cm.commutant_of_weight(w).real_dim == brute_force_kernel_dim(Ws, "commute")


@pytest.mark.parametrize("w", EXAMPLES, ids=lambda w: w.name)
def test_identity_always_in_space(w):
    assert cm.sym_space_of_weight(w).contains(np.eye(w.dimension))


# --- Hermitian part ----------------------------------------------------------


def test_hermitian_part_examples(geg11):
    full = cm.space_from_matrices([np.eye(2), np.diag([1.0, 0]), np.array([[0, 1], [0, 0]]),
                                   np.array([[0, 0], [1, 0]])], field="complex")
    assert cm.hermitian_part(full).real_dim == 4
    scalar = cm.space_from_matrices([np.eye(2)], field="complex")
    Ah = cm.hermitian_part(scalar)
    assert Ah.real_dim == 1 and Ah.contains(np.eye(2))
    Ah = cm.hermitian_part(cm.commutant_of_weight(geg11))
    assert Ah.real_dim == 2 and mutual_containment(Ah, span_of(np.eye(3), flip_matrix(3))) < 1e-10
    assert all(np.allclose(T, adjoint(T), atol=1e-12) for T in Ah.basis)


def test_hermitian_part_rejects_non_adjoint_closed():
    A = cm.space_from_matrices([np.eye(2), np.array([[0, 1], [0, 0]])], field="complex")
    with pytest.raises(InvalidArgument):
        cm.hermitian_part(A)


# --- gamma spaces ------------------------------------------------------------


def test_norm_pair_space_is_diagonal_plus_hermitian_antidiagonal():
    # T_ij vanishes unless j = i or j = 2l - i; diagonal entries are real and the
    # antidiagonal pairs are conjugate, so the real dimension is N + 2 floor(N/2)
    seq = gegenbauer_norm_sequence(1, 1.0, 3)
    sp = cm.gamma_sym_space(seq, [0, 1])
    assert sp.real_dim == 5 == brute_force_kernel_dim([seq[0], seq[1]])
    assert cm.star_invariant(sp)
    assert all(np.allclose(T, adjoint(T), atol=1e-12) for T in sp.basis)
    assert sp.contains(np.eye(3)) and sp.contains(flip_matrix(3))
    i, j = np.indices((3, 3))
    off = (i != j) & (i + j != 2)
    assert max(np.abs(T[off]).max() for T in sp.basis) < 1e-12


def test_m0_gamma_space(ref2x2):
    sp = cm.gamma_sym_space(GammaSequence(2, "moments-even", (ref2x2.M0,)), [0])
    assert sp.real_dim == 4
    for M in (np.eye(2), ref2x2.E_seed, ref2x2.F_seed, 1j * ref2x2.G_seed):
        assert sp.contains(M)


def test_identity_gamma_space_is_hermitian_matrices():
    sp = cm.gamma_sym_space(GammaSequence(3, "custom", (np.eye(3),)), [0])
    assert sp.real_dim == 9 and all(np.allclose(T, adjoint(T)) for T in sp.basis)


def test_gamma_index_errors():
    seq = GammaSequence(2, "custom", (np.eye(2),))
    with pytest.raises(InvalidArgument):
        cm.gamma_sym_space(seq, [])
    with pytest.raises(InvalidArgument):
        cm.gamma_sym_space(seq, [1])


@given(seeds, st.integers(1, 3))
def test_gamma_dimension_monotone(seed, n):
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(4):
        X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        mats.append(X @ X.conj().T + np.eye(n))
    seq = GammaSequence(n, "custom", tuple(mats))
    I = sorted(set(rng.integers(0, 4, 2).tolist()))
    J = sorted(set(I) | set(rng.integers(0, 4, 2).tolist()))
    assert cm.gamma_sym_space(seq, J).real_dim <= cm.gamma_sym_space(seq, I).real_dim


# --- *-invariance and skew content -------------------------------------------


def test_star_invariance_examples(w2x2, geg11):
    from matred.reduction import normalize
    assert not cm.star_invariant(cm.sym_space_of_weight(w2x2))
    assert cm.star_invariant(cm.sym_space_of_weight(normalize(w2x2)[1]))
    assert cm.star_invariant(cm.hermitian_part(cm.commutant_of_weight(geg11)))


def test_skew_content_examples(w2x2, ref2x2):
    assert cm.skew_hermitian_content(cm.sym_space_of_weight(w2x2)) < 1e-9
    assert cm.skew_hermitian_content(span_of(1j * np.eye(2))) == pytest.approx(1.0)
    # the M0 space holds non-Hermitian elements but meets the skew-Hermitian
    # matrices only in 0; its principal-angle overlap is large
    sp = cm.gamma_sym_space(GammaSequence(2, "moments-even", (ref2x2.M0,)), [0])
    assert cm.skew_hermitian_content(sp) < 1e-9
    assert cm.skew_hermitian_overlap(sp) > 0.5
    assert cm.skew_hermitian_overlap(span_of(1j * np.eye(2))) == pytest.approx(1.0)


# --- verdicts ----------------------------------------------------------------


def test_verdict_examples(w2x2, geg11):
    v = cm.verdict(w2x2)
    assert (v.classification, v.dims) == (cm.NON_UNITARY, (2, 1, 1))
    v = cm.verdict(geg11)
    assert (v.classification, v.dims) == (cm.UNITARY_ONLY, (2, 2, 2))
    w = MatrixWeight.from_coefficients([np.ones((1, 1)), np.ones((1, 1))], LebesgueInterval())
    assert cm.verdict(w).classification == cm.IRREDUCIBLE


@pytest.mark.parametrize("w", EXAMPLES, ids=lambda w: w.name)
def test_intersection_with_adjoint_is_hermitian_commutant(w):
    v = cm.verdict(w)
    inter = cm.intersection(v.sym, v.sym.adjoint_space())
    assert inter.real_dim == v.herm.real_dim
    assert mutual_containment(inter, v.herm) < 1e-8
    assert cm.skew_hermitian_content(v.sym) < 1e-9


@pytest.mark.parametrize("w", EXAMPLES, ids=lambda w: w.name)
def test_normalization_equivariance(w):
    from matred.reduction import normalize
    sym = cm.sym_space_of_weight(w)
    S, wn = normalize(w)
    symn = cm.sym_space_of_weight(wn)
    conj = sym.conjugated(S)
    assert conj.real_dim == symn.real_dim and mutual_containment(conj, symn) < 1e-8
    assert cm.star_invariant(symn)


@given(seeds, st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 2), (1, 1, 1)]))
def test_congruence_invariance(seed, sizes):
    # T -> M T M^-1 maps the symmetry space of W onto that of M W M^*
    rng = np.random.default_rng(seed)
    w = random_block_weight(rng, sizes)
    M = random_invertible(rng, w.dimension)
    sym = cm.sym_space_of_weight(w)
    symM = cm.sym_space_of_weight(w.transformed(M))
    assert sym.real_dim == symM.real_dim == len(sizes)
    Mi = np.linalg.inv(M)
    assert all(symM.residual(M @ T @ Mi) < 1e-7 * np.linalg.norm(M @ T @ Mi) for T in sym.basis)


@given(seeds, st.sampled_from([(1, 1), (2, 1), (2, 2)]))
def test_classification_of_hidden_block_structure(seed, sizes):
    rng = np.random.default_rng(seed)
    w = random_block_weight(rng, sizes)
    U = random_unitary(rng, w.dimension)
    assert cm.verdict(w.transformed(U)).classification == cm.UNITARY_ONLY
    M = random_invertible(rng, w.dimension)
    v = cm.verdict(w.transformed(M))
    assert v.classification == cm.NON_UNITARY and v.dims[0] == len(sizes)
