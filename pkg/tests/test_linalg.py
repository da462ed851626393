import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockcoh.field import GF, is_irreducible, least_irreducible
from blockcoh.linalg import FieldMatrix, Subspace, intersect, nullspace, rank, rref, span_dim

FIELDS = [GF(2), GF(3), GF(2, 2)]
SIZES = [(1, 1), (3, 5), (8, 8), (17, 9), (32, 40), (64, 64)]
SMALL_FIELDS = [(p, m) for p in (2, 3, 5, 7, 11, 13) for m in range(1, 9) if p ** m <= 256]


def _random(field, shape, rng, density=None):
    A = rng.integers(0, field.q, shape)
    if density is not None:
        A[rng.random(shape) > density] = 0
    return A


@pytest.mark.parametrize("field", FIELDS, ids=lambda F: F.name)
@pytest.mark.parametrize("shape", SIZES)
def test_rank_of_transpose(field, shape):
    rng = np.random.default_rng(shape[0] * 100 + shape[1] + field.q)
    for _ in range(200):
        A = _random(field, shape, rng, density=rng.choice([0.1, 0.5, 1.0]))
        assert rank(FieldMatrix.from_dense(field, A)) == rank(FieldMatrix.from_dense(field, A.T))


@pytest.mark.parametrize("field", FIELDS, ids=lambda F: F.name)
@pytest.mark.parametrize("shape", SIZES)
def test_engines_agree(field, shape):
    rng = np.random.default_rng(7 * shape[0] + shape[1] + field.q)
    for _ in range(40):
        M = FieldMatrix.from_dense(field, _random(field, shape, rng, density=0.3))
        R, piv = rref(M, "dense")
        for method in ("sparse", "blocked"):
            R2, piv2 = rref(M, method)
            assert piv2 == piv
            assert np.array_equal(R2, R)
            assert rank(M, method) == len(piv)


@pytest.mark.parametrize("field", FIELDS, ids=lambda F: F.name)
def test_nullspace_is_kernel(field):
    rng = np.random.default_rng(3)
    for _ in range(50):
        A = _random(field, (rng.integers(1, 20), rng.integers(1, 20)), rng, density=0.4)
        M = FieldMatrix.from_dense(field, A)
        K = nullspace(M)
        assert len(K) + rank(M) == A.shape[1]
        if len(K):
            assert not field.matmul(A, K.T).any()


def test_rref_shape_and_pivots():
    F = GF(3)
    R, piv = rref(FieldMatrix.from_dense(F, [[0, 2, 1], [0, 1, 2], [1, 0, 0]]))
    assert piv == [0, 1]
    assert np.array_equal(R, [[1, 0, 0], [0, 1, 2]])


def test_subspace_membership_and_coordinates():
    F = GF(5)
    S = Subspace(F, [[1, 2, 0, 1], [0, 1, 1, 1]])
    v = F.add(F.scale(3, S.basis[0]), F.scale(4, S.basis[1]))
    assert S.contains(v)
    assert list(S.coordinates(v)) == [3, 4]
    assert not S.contains([0, 0, 0, 1])
    assert S.contains_subspace(Subspace(F, [v]))


def test_intersection_dimension():
    F = GF(2)
    A = Subspace(F, np.eye(4, dtype=np.int64)[:3])
    B = Subspace(F, np.eye(4, dtype=np.int64)[1:])
    C = intersect(F, A, B)
    assert C.dim == 2
    assert span_dim(F, np.vstack([A.basis, B.basis])) == 4


def test_sparse_triplets_match_dense():
    F = GF(2, 2)
    rng = np.random.default_rng(11)
    A = _random(F, (30, 25), rng, density=0.2)
    r, c = np.nonzero(A)
    M = FieldMatrix.from_triplets(F, A.shape, r, c, A[r, c])
    assert np.array_equal(M.to_dense(), A)
    assert rank(M) == rank(FieldMatrix.from_dense(F, A))


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_modulus_is_least_irreducible(p, m):
    F = GF(p, m)
    assert list(F.modulus) == list(least_irreducible(p, m))
    assert is_irreducible(F.modulus, p)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_field_axioms(pm, data):
    F = GF(*pm)
    el = st.integers(0, F.q - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, b) == F.add(b, a) and F.mul(a, b) == F.mul(b, a)
    assert F.add(a, F.neg(a)) == 0 and F.sub(a, b) == F.add(a, F.neg(b))
    assert F.mul(a, 1) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,m", [(2, 8), (3, 5), (5, 3), (7, 2)])
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(p, m):
    F = GF(p, m)
    nonzero = np.arange(1, F.q)
    assert np.all(F.power(nonzero, F.q - 1) == 1)
    orders = set()
    for a in range(1, F.q):
        x, k = a, 1
        while x != 1:
            x, k = F.mul(x, a), k + 1
        orders.add(k)
    assert F.q - 1 in orders


def test_matmul_matches_naive():
    rng = np.random.default_rng(5)
    for F in (GF(7), GF(3, 2)):
        A, B = _random(F, (6, 9), rng), _random(F, (9, 4), rng)
        naive = np.zeros((6, 4), dtype=np.int64)
        for i in range(6):
            for j in range(4):
                acc = 0
                for k in range(9):
                    acc = F.add(acc, F.mul(int(A[i, k]), int(B[k, j])))
                naive[i, j] = acc
        assert np.array_equal(F.matmul(A, B), naive)


def test_bad_field_rejected():
    with pytest.raises(ValueError):
        GF(4)
