"""Constructions: semilinear one-dimensional groups, wreath products,
tensor machinery, extraspecial groups and lifts."""

import random

import numpy as np
import pytest

from linorbits.errors import NoLift, ShapeMismatch
from linorbits.field import GF
from linorbits.matrix import Matrix, blowup, kronecker
from linorbits.matgroup import (
    MatGroup,
    is_irreducible,
    is_p_exceptional,
    mulclose,
    spin,
)
from linorbits.permgroup import PermGroup, load_perm_group, orbit_of_point
from linorbits.constructions import (
    ExtraspecialFrame,
    ExtraspecialSpec,
    GammaL1Spec,
    WreathSpec,
    c4_pair_group,
    c4_pair_expected_sizes,
    deleted_permutation_module,
    extraspecial,
    gamma_l1,
    gamma_l1_expected_sizes,
    lift_outer,
    perm_matrix_group,
    singer_element,
    tensor_product_group,
    tensor_weight,
    wreath,
)

F2, F3, F4 = GF(2), GF(3), GF(2, 2)


# -- gamma_l1 -------------------------------------------------------------------


@pytest.mark.parametrize("p,d,s,j,count,size", [
    (2, 4, 2, 1, 3, 5),
    (3, 3, 1, 2, 1, 26),
    (3, 3, 1, 1, 2, 13),
])
def test_gamma_l1_examples(p, d, s, j, count, size):
    spec = GammaL1Spec(p, d, s, j)
    G = gamma_l1(spec)
    assert G.field == GF(p) and G.dim == d
    part = G.orbit_partition()
    assert part.sizes == gamma_l1_expected_sizes(spec) == {1: 1, size: count}


def test_gamma_l1_invalid_spec():
    with pytest.raises(ValueError):
        GammaL1Spec(2, 3, 1, 1)  # 3 is not 2^k * 1 with k >= 1
    with pytest.raises(ValueError):
        GammaL1Spec(2, 4, 2, 2)  # 2 does not divide 2^2 - 1


def test_gamma_l1_full_frobenius_flag():
    # adjoining the full Frobenius at (2,4,2,1) merges two of the three
    # 5-orbits into a 10-orbit, losing 2-exceptionality
    G = gamma_l1(GammaL1Spec(2, 4, 2, 1, include_full_frobenius=True))
    assert G.orbit_partition().sizes == {1: 1, 5: 1, 10: 1}


# -- wreath --------------------------------------------------------------------


def gl22():
    return MatGroup(F2, 2, [Matrix(F2, [[0, 1], [1, 0]]), Matrix(F2, [[1, 1], [0, 1]])],
                    label="GL2(2)")


def test_wreath_weight_one_orbit_formula():
    D10 = load_perm_group("D10")
    G = wreath(WreathSpec(gl22(), D10))  # builder post-check asserts k = 1 case
    v = np.zeros(10, dtype=np.int64)
    v[0] = 1
    assert len(G.orbit_of_vector(v)) == 3 * 5


def test_wreath_full_orbit_formula_against_bfs():
    """Orbit of a vector supported on a k-set has size |V1#|^k * delta."""
    D10 = load_perm_group("D10")
    G = wreath(WreathSpec(gl22(), D10))
    gens = D10.gen_arrays()
    # support {0, 1}: delta = orbit of the 2-set {0,1} under D10
    sets = {frozenset([0, 1])}
    frontier = [frozenset([0, 1])]
    while frontier:
        new = []
        for s in frontier:
            for g in gens:
                img = frozenset(int(g[i]) for i in s)
                if img not in sets:
                    sets.add(img)
                    new.append(img)
        frontier = new
    delta = len(sets)
    v = np.zeros(10, dtype=np.int64)
    v[0] = 1
    v[2] = 1  # blocks 0 and 1
    assert len(G.orbit_of_vector(v)) == 3**2 * delta


def test_wreath_trivial_top():
    top = PermGroup(1, ((0,),), label="1")
    G = wreath(WreathSpec(gl22(), top))
    assert G.orbit_partition().sizes == gl22().orbit_partition().sizes


def test_wreath_2_exceptional_example():
    G = wreath(WreathSpec(gl22(), load_perm_group("D10")))
    assert is_p_exceptional(G, 2).is_exceptional


# -- tensor products ------------------------------------------------------------


def test_tensor_trivial():
    triv = MatGroup(F3, 2, [Matrix.identity(F3, 2)])
    G = tensor_product_group(triv, triv)
    assert G.group_order() == 1


def test_tensor_swap_needs_square():
    A = MatGroup(F3, 2, [Matrix.identity(F3, 2)])
    B = MatGroup(F3, 3, [Matrix.identity(F3, 3)])
    with pytest.raises(ShapeMismatch):
        tensor_product_group(A, B, with_swap=True)


def test_tensor_weight_basics():
    assert tensor_weight(F3, np.zeros(9, dtype=np.int64), 3, 3).k == 0
    u = np.array([1, 2, 0], dtype=np.int64)
    w = np.array([0, 1, 1], dtype=np.int64)
    v = F3.mul_arr(u[:, None], w[None, :]).reshape(-1)
    res = tensor_weight(F3, v, 3, 3)
    assert res.k == 1
    assert res.U0.rows == 1 and res.W0.rows == 1
    # supports span the factors of the simple tensor
    assert np.array_equal(res.U0.arr[0], F3.mul_arr(np.int64(F3.inv(1)), u))
    assert res.W0.arr[0].tolist() == [0, 1, 1]


def test_tensor_weight_invariance_under_product_action_and_swap():
    rng = random.Random(0)

    def rand_inv(n):
        while True:
            M = Matrix(F3, [[rng.randrange(3) for _ in range(n)] for _ in range(n)])
            if M.is_invertible():
                return M

    for _ in range(20):
        v = np.array([rng.randrange(3) for _ in range(9)], dtype=np.int64)
        k = tensor_weight(F3, v, 3, 3).k
        A, B = rand_inv(3), rand_inv(3)
        img = F3.matmul(v[None, :], kronecker(A, B).arr)[0]
        assert tensor_weight(F3, img, 3, 3).k == k
        swapped = v.reshape(3, 3).T.reshape(-1)
        assert tensor_weight(F3, swapped, 3, 3).k == k
        assert k <= 3


def test_c4_pair_profiles_and_reducibility():
    for q in (2, 4):
        G = c4_pair_group(q)
        part = G.orbit_partition()
        assert part.sizes == c4_pair_expected_sizes(q)
        # the two orbits of size q^2-1 are the nonzero vectors of invariant
        # GF(q)-subspaces U1, U2 with U1 cap U2 = 0
        small = [int(r) for r, s in zip(part.reps, part.rep_sizes)
                 if s == q**2 - 1]
        spaces = []
        for rep in small:
            orbit = G.orbit_of_index(rep)
            W = spin(G, G.decode(rep))
            assert W.rows == 2  # 2-dimensional over GF(q)
            members = {G.encode(v) for v in
                       (G.field.matmul(_coeffs(G.field, 2), W.arr))}
            assert members == set(int(x) for x in orbit) | {0}
            spaces.append(members)
        assert spaces[0] & spaces[1] == {0}
        assert not is_irreducible(G)


def _coeffs(field, k):
    out = np.zeros((field.q**k, k), dtype=np.int64)
    idx = np.arange(field.q**k, dtype=np.int64)
    for i in range(k):
        out[:, i] = idx % field.q
        idx //= field.q
    return out


def test_c4_pair_odd_q_rejected():
    with pytest.raises(ValueError):
        c4_pair_group(3)


# -- extraspecial groups -----------------------------------------------------------


def test_extraspecial_3_1_over_gf4():
    R = extraspecial(ExtraspecialSpec(3, 1, "odd_exponent_r", 4))
    els = mulclose(R.generators)
    assert len(els) == 27
    assert all((g ** 3).is_identity() for g in els)  # exponent 3
    assert is_irreducible(R)


def test_extraspecial_minus_order_32():
    R = extraspecial(ExtraspecialSpec(2, 2, "minus", 3))
    assert R.dim == 4 and R.field == F3
    assert len(mulclose(R.generators)) == 32


def test_extraspecial_sym4circ():
    R = extraspecial(ExtraspecialSpec(2, 1, "sym_4circ", 5))
    assert len(mulclose(R.generators)) == 16


def test_extraspecial_congruence_checks():
    with pytest.raises(ValueError):
        ExtraspecialSpec(3, 1, "odd_exponent_r", 5)  # 5 != 1 mod 3
    with pytest.raises(ValueError):
        ExtraspecialSpec(2, 1, "sym_4circ", 3)  # 3 != 1 mod 4
    with pytest.raises(ValueError):
        ExtraspecialSpec(2, 1, "plus", 4)  # q must be odd


# -- lift_outer ---------------------------------------------------------------------


def test_lift_identity_is_scalar():
    R = extraspecial(ExtraspecialSpec(2, 2, "minus", 3))
    g = lift_outer(R, list(R.generators))
    assert g.is_scalar()


def test_lift_inner_automorphism_is_scalar_multiple():
    R = extraspecial(ExtraspecialSpec(2, 2, "minus", 3))
    els = mulclose(R.generators)
    h = els[7]
    images = [h @ X @ h.inverse() for X in R.generators]
    g = lift_outer(R, images)
    # g must agree with h up to scalar
    ratio = g @ h.inverse()
    assert ratio.is_scalar()


def test_lift_exists_for_all_gl32_diagonal_actions():
    from linorbits.catalog import _plus_diag_auto

    R = extraspecial(ExtraspecialSpec(2, 3, "plus", 3))
    frame = ExtraspecialFrame(R)
    rng = random.Random(0)
    A1 = Matrix(F2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    A2 = Matrix(F2, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    samples = [A1, A2]
    cur = A1
    for _ in range(6):
        cur = cur @ (A1 if rng.random() < 0.5 else A2)
        samples.append(cur)
    for A in samples:
        g = lift_outer(R, frame.alpha_images(_plus_diag_auto(A).arr))
        assert g.is_invertible()


def test_lift_no_solution_raises():
    # mapping X to an element with the wrong commutator relations has no
    # intertwiner
    R = extraspecial(ExtraspecialSpec(2, 2, "minus", 3))
    X1, Z1, X2, Z2 = R.generators
    with pytest.raises(NoLift):
        lift_outer(R, [X1, Z1, X2, X2 @ Z2 @ X1])


# -- deleted permutation modules ------------------------------------------------------


def test_deleted_dimension_rule():
    from linorbits.permgroup import symmetric_group

    for c, p, dim in [(5, 2, 4), (6, 2, 4), (7, 2, 6), (5, 3, 4), (6, 3, 4), (9, 3, 7)]:
        D = deleted_permutation_module(symmetric_group(c), p)
        assert D.dim == dim, (c, p)


def test_deleted_a7_profile():
    D = deleted_permutation_module(
        PermGroup.from_cycles(7, [[[0, 1, 2]], [list(range(7))]], label="A7"), 2)
    assert D.orbit_partition().sizes == {1: 1, 7: 1, 21: 1, 35: 1}


# -- singer / frobenius helpers --------------------------------------------------------


def test_singer_element_order():
    C = singer_element(2, 3)
    assert C.order() == 7
    assert spin(MatGroup(F2, 3, [C]), np.array([1, 0, 0])).rows == 3
