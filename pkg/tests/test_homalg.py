import pytest
from hypothesis import given, settings, strategies as st

from shelfcohom.homalg import (
    QQ,
    ZZ,
    AbelianGroupPresentation,
    Coefficients,
    ComplexError,
    IntegerLattice,
    LimitError,
    SparseIntMatrix,
    dense_matmul,
    determinant,
    homology,
    is_prime,
    lattice_membership,
    lattices_equal,
    rank,
    smith_normal_form,
)

from oracles import det_fraction, invariant_factors, rank_mod_p, rank_q


def matrices(max_r=7, max_c=7, lo=-6, hi=6):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def sparse_matrices():
    # mostly zeros and units, like coboundary matrices; large enough to take the sparse path
    return st.integers(65, 90).flatmap(
        lambda r: st.integers(20, 40).flatmap(
            lambda c: st.lists(
                st.tuples(st.integers(0, r - 1), st.integers(0, c - 1), st.sampled_from([-2, -1, 1, 1, 2, 3])),
                max_size=3 * c,
            ).map(lambda t: SparseIntMatrix.from_triplets(r, c, t))
        )
    )


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_snf_matches_sympy(dense):
    M = SparseIntMatrix.from_dense(dense)
    assert smith_normal_form(M).invariant_factors == invariant_factors(dense)


@settings(max_examples=40, deadline=None)
@given(sparse_matrices())
def test_sparse_snf_matches_sympy(M):
    assert smith_normal_form(M).invariant_factors == invariant_factors(M.to_dense())


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_snf_transforms(dense):
    M = SparseIntMatrix.from_dense(dense)
    f = smith_normal_form(M, transforms=True)
    D = dense_matmul(dense_matmul(f.U, dense), f.V)
    r, c = len(dense), len(dense[0])
    expect = [[(f.invariant_factors[i] if i == j and i < len(f.invariant_factors) else 0) for j in range(c)]
              for i in range(r)]
    assert D == expect
    assert abs(determinant(SparseIntMatrix.from_dense(f.U))) == 1
    assert abs(determinant(SparseIntMatrix.from_dense(f.V))) == 1
    fs = f.invariant_factors
    assert all(b % a == 0 for a, b in zip(fs, fs[1:]))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_over_fields(dense, p):
    M = SparseIntMatrix.from_dense(dense)
    assert rank(M) == rank_q(dense)
    assert rank(M, p) == rank_mod_p(dense, p)
    # rank mod p is the number of invariant factors prime to p
    assert rank(M, p) == sum(1 for d in invariant_factors(dense) if d % p)


@settings(max_examples=30, deadline=None)
@given(sparse_matrices(), st.sampled_from([2, 3]))
def test_sparse_rank(M, p):
    dense = M.to_dense()
    assert rank(M) == rank_q(dense)
    assert rank(M, p) == rank_mod_p(dense, p)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_determinant(dense):
    assert determinant(SparseIntMatrix.from_dense(dense)) == det_fraction(dense)


@settings(max_examples=60, deadline=None)
@given(matrices(6, 5, -4, 4), st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_lattice_membership(dense, x):
    M = SparseIntMatrix.from_dense(dense)
    x = x[: M.cols]
    v = M.matvec(x)
    sol = lattice_membership(v, M)
    assert sol is not None and M.matvec(sol) == v


def test_lattice_nonmember():
    M = SparseIntMatrix.from_dense([[2, 0], [0, 3]])
    assert lattice_membership([1, 0], M) is None
    assert lattice_membership([4, -3], M) == [2, -1]
    L = IntegerLattice(2)
    L.add([2, 0])
    L.add([0, 3])
    assert L.contains([6, 9]) and not L.contains([3, 0]) and L.rank == 2


def test_lattices_equal():
    A = SparseIntMatrix.from_dense([[1, 1], [0, 1]])
    B = SparseIntMatrix.from_dense([[1, 0], [0, 1]])
    C = SparseIntMatrix.from_dense([[2, 0], [0, 1]])
    assert lattices_equal(A, B) and not lattices_equal(B, C)


def test_sparse_ops():
    M = SparseIntMatrix.from_triplets(2, 3, [(0, 1, 2), (1, 2, -1), (0, 1, 3), (1, 0, 0)])
    assert M.to_dense() == [[0, 5, 0], [0, 0, -1]]
    assert M.nnz == 2
    assert M.transpose().to_dense() == [[0, 0], [5, 0], [0, -1]]
    assert SparseIntMatrix.from_text(M.to_text()) == M
    assert (M @ M.transpose()).to_dense() == [[25, 0], [0, 1]]
    assert M.hstack(M).cols == 6 and M.vstack(M).rows == 4
    assert M.select_columns([2]).to_dense() == [[0], [-1]]
    assert M.matvec([1, 1, 1]) == [5, -1]


def test_presentation():
    g = AbelianGroupPresentation(1, (2, 6))
    assert g.to_json() == {"free_rank": 1, "torsion": [2, 6]}
    with pytest.raises(ValueError):
        AbelianGroupPresentation(0, (2, 3))
    with pytest.raises(ValueError):
        AbelianGroupPresentation(0, (1,))


def test_homology_of_small_complex():
    # Z --2--> Z --0--> 0 : H = Z/2 at the middle
    d1 = SparseIntMatrix.from_dense([[2]])
    d2 = SparseIntMatrix(0, 1)
    h = homology(d2, d1, ZZ)
    assert h.H == AbelianGroupPresentation(0, (2,))
    assert homology(d2, d1, QQ).H.free_rank == 0
    assert homology(d2, d1, Coefficients.parse("F2")).H.free_rank == 1
    with pytest.raises(ComplexError):
        homology(SparseIntMatrix.from_dense([[1]]), d1)


def test_coefficients():
    assert Coefficients.parse("F7").p == 7
    assert is_prime(2_147_483_647) and not is_prime(91)
    for bad in ("F4", "R", "F"):
        with pytest.raises(ValueError):
            Coefficients.parse(bad)
    with pytest.raises(ValueError, match="inverse of 3"):
        ZZ.coerce(__import__("fractions").Fraction(1, 3))
    assert Coefficients.parse("F5").coerce(__import__("fractions").Fraction(1, 3)) == 2


def test_limits():
    with pytest.raises(LimitError):
        smith_normal_form(SparseIntMatrix(10, 10), max_cells=50)
