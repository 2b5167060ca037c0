"""Dense linear algebra: rank/kernel, Kronecker products, blow-ups,
unipotent Jordan types."""

import random

import numpy as np
import pytest

from linorbits.errors import DimensionTooLarge, NonUnipotent, ShapeMismatch
from linorbits.field import GF
from linorbits.matrix import (
    Matrix,
    RelativeExtension,
    blowup,
    blowup_semilinear,
    jordan_type_unipotent,
    kronecker,
    mat_kernel,
    mat_rank,
)


def rank_reverse_pivots(field, arr):
    """Independent rank oracle: eliminate scanning columns right-to-left and
    rows bottom-up."""
    A = arr.astype(np.int64).copy()
    m, n = A.shape
    r = 0
    for col in range(n - 1, -1, -1):
        if r == m:
            break
        rows = [i for i in range(m - 1 - r, -1, -1) if A[i, col]]
        if not rows:
            continue
        pivot = rows[0]
        tgt = m - 1 - r
        A[[tgt, pivot]] = A[[pivot, tgt]]
        inv = field.inv(int(A[tgt, col]))
        A[tgt] = field.mul_arr(A[tgt], np.int64(inv))
        for i in range(m):
            if i != tgt and A[i, col]:
                A[i] = field.sub_arr(A[i], field.mul_arr(np.int64(int(A[i, col])), A[tgt]))
        r += 1
    return r


def rand_matrix(field, rows, cols, rng):
    return Matrix(field, [[rng.randrange(field.q) for _ in range(cols)] for _ in range(rows)])


def rand_invertible(field, n, rng):
    while True:
        M = rand_matrix(field, n, n, rng)
        if M.is_invertible():
            return M


def test_rank_kernel_trivial_cases():
    F3 = GF(3)
    assert mat_rank(Matrix.identity(F3, 5)) == 5
    assert mat_kernel(Matrix.identity(F3, 5)).rows == 0
    Z = Matrix.zero(F3, 3, 3)
    assert mat_rank(Z) == 0
    assert mat_kernel(Z).rows == 3


def test_rank_duplicate_rows_against_independent_elimination():
    F2 = GF(2)
    rng = random.Random(7)
    for _ in range(50):
        rows = [[rng.randrange(2) for _ in range(6)] for _ in range(6)]
        rows[rng.randrange(6)] = list(rows[rng.randrange(6)])
        M = Matrix(F2, rows)
        r = mat_rank(M)
        assert r <= 5 or len({tuple(x) for x in rows}) == 6
        assert r == rank_reverse_pivots(F2, M.arr)


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1)])
def test_rank_equals_rank_of_transpose(p, a):
    F = GF(p, a)
    rng = random.Random(11)
    for _ in range(25):
        M = rand_matrix(F, rng.randrange(1, 7), rng.randrange(1, 7), rng)
        assert mat_rank(M) == mat_rank(M.transpose())
        assert mat_rank(M) == rank_reverse_pivots(F, M.arr)


def test_kernel_vectors_annihilate():
    F = GF(3, 2)
    rng = random.Random(3)
    for _ in range(20):
        M = rand_matrix(F, 5, 4, rng)
        K = mat_kernel(M)
        assert K.rows == 5 - mat_rank(M)
        if K.rows:
            assert (K @ M).is_zero()


def test_kronecker_identity_and_multiplicativity():
    F3 = GF(3)
    assert kronecker(Matrix.identity(F3, 2), Matrix.identity(F3, 3)) == Matrix.identity(F3, 6)
    rng = random.Random(5)
    for _ in range(10):
        A, C = (rand_matrix(F3, 2, 2, rng) for _ in range(2))
        B, D = (rand_matrix(F3, 3, 3, rng) for _ in range(2))
        assert kronecker(A, B) @ kronecker(C, D) == kronecker(A @ C, B @ D)


def test_kronecker_row_action_convention():
    # (u (x) w)(A (x) B) = uA (x) wB in the i-major basis
    F3 = GF(3)
    rng = random.Random(9)
    A = rand_matrix(F3, 2, 2, rng)
    B = rand_matrix(F3, 3, 3, rng)
    u = np.array([1, 2], dtype=np.int64)
    w = np.array([2, 0, 1], dtype=np.int64)
    uw = F3.mul_arr(u[:, None], w[None, :]).reshape(-1)
    lhs = F3.matmul(uw[None, :], kronecker(A, B).arr)[0]
    uA = F3.matmul(u[None, :], A.arr)[0]
    wB = F3.matmul(w[None, :], B.arr)[0]
    rhs = F3.mul_arr(uA[:, None], wB[None, :]).reshape(-1)
    assert np.array_equal(lhs, rhs)


def test_j2_tensor_j2_over_gf2():
    F2 = GF(2)
    J2 = Matrix.jordan_block(F2, 2)
    assert jordan_type_unipotent(kronecker(J2, J2)).blocks == (2, 2)


def test_blowup_scalar_is_companion_action():
    F4 = GF(2, 2)
    omega = 2  # the class of x
    B = blowup(Matrix(F4, [[omega]]))
    assert B.arr.tolist() == [[0, 1], [1, 1]]


def test_blowup_is_ring_homomorphism():
    F9 = GF(3, 2)
    rng = random.Random(1)
    for _ in range(10):
        A = rand_invertible(F9, 2, rng)
        B = rand_invertible(F9, 2, rng)
        assert blowup(A @ B) == blowup(A) @ blowup(B)
        assert blowup(A.add(B)) == blowup(A).add(blowup(B))


def test_blowup_preserves_order_80_element():
    """A Singer element of GL_2(9) of order 80 blows up to a GL_4(3) element
    of order 80, checked by repeated squaring against the identity."""
    F9 = GF(3, 2)
    gen = None
    for c0 in range(1, 9):
        for c1 in range(9):
            # companion matrix of x^2 - c1 x - c0
            M = Matrix(F9, [[0, 1], [c0, c1]])
            if not M.is_invertible():
                continue
            if M.order(cap=100) == 80:
                gen = M
                break
        if gen:
            break
    assert gen is not None
    B = blowup(gen)
    assert B.field == GF(3) and B.shape == (4, 4)
    assert B.order(cap=200) == 80
    # independent oracle: repeated squaring
    assert (B ** 80).is_identity()
    assert not (B ** 40).is_identity()
    assert not (B ** 16).is_identity()


def test_blowup_preserves_invertibility_and_fixed_space():
    F4 = GF(2, 2)
    rng = random.Random(2)
    for _ in range(10):
        M = rand_invertible(F4, 3, rng)
        B = blowup(M)
        assert B.is_invertible()
        assert B.order(cap=10**4) == M.order(cap=10**4)
        fixed_small = M.sub(Matrix.identity(F4, 3)).left_kernel().rows
        fixed_big = B.sub(Matrix.identity(GF(2), 6)).left_kernel().rows
        assert fixed_big == 2 * fixed_small


def test_blowup_semilinear_composition():
    """(sigma_M)^2 with sigma_M : v -> frob(v) M equals the linear map
    frob(M) M, and the full Frobenius power a is the identity twist."""
    F4 = GF(2, 2)
    rng = random.Random(4)
    M = rand_invertible(F4, 2, rng)
    s = blowup_semilinear(M, 1)
    frobM = Matrix(F4, F4.frob_arr(M.arr))
    assert s @ s == blowup(frobM @ M)
    assert blowup_semilinear(M, 2) == blowup(M)


def test_jordan_type_identity_and_cycle():
    for p in (2, 3, 5):
        F = GF(p)
        assert jordan_type_unipotent(Matrix.identity(F, 4)).blocks == (1, 1, 1, 1)
        cyc = Matrix.permutation(F, [(i + 1) % p for i in range(p)])
        assert jordan_type_unipotent(cyc).blocks == (p,)


def test_jordan_type_tensor_cycle_shift():
    # cyclic shift of 3 tensor factors of dimension 2 over GF(3): [1^2, 3^2]
    from linorbits.jordan import tensor_shift_matrix

    g = tensor_shift_matrix(2, 3)
    assert jordan_type_unipotent(g).blocks == (3, 3, 1, 1)


def test_jordan_type_conjugation_invariant():
    F3 = GF(3)
    rng = random.Random(6)
    g = Matrix.jordan_block(F3, 3)
    g = kronecker(g, Matrix.identity(F3, 2))
    base = jordan_type_unipotent(g)
    for _ in range(5):
        h = rand_invertible(F3, 6, rng)
        assert jordan_type_unipotent(h.inverse() @ g @ h) == base


def test_jordan_type_rejects_non_unipotent():
    F3 = GF(3)
    with pytest.raises(NonUnipotent):
        jordan_type_unipotent(Matrix.diagonal(F3, [2, 1]))


def test_dimension_cap():
    with pytest.raises(DimensionTooLarge):
        Matrix.identity(GF(2), 65)
    assert Matrix.identity(GF(2), 65, max_dim=128).rows == 65


def test_field_mismatch():
    with pytest.raises(ShapeMismatch):
        Matrix.identity(GF(2), 2) @ Matrix.identity(GF(2), 3)


def test_relative_extension_mult_and_frobenius():
    small, big = GF(2, 2), GF(2, 4)
    rel = RelativeExtension(small, big)
    # multiplication matrices form a field: additive and multiplicative
    for xi in range(1, 16):
        for eta in range(1, 16):
            assert rel.mult_matrix(big.mul(xi, eta)) == rel.mult_matrix(xi) @ rel.mult_matrix(eta)
    T = rel.frobenius_matrix()
    assert T @ T == Matrix.identity(small, 2)
    # frobenius semilinearity over the subfield: T conjugates mult(xi) to mult(xi^q)
    for xi in range(1, 16):
        assert T @ rel.mult_matrix(xi) @ T == rel.mult_matrix(big.frobenius(xi, 2))
