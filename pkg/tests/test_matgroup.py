"""Matrix groups: orbit partitions, orders, p-exceptionality, spinning,
meataxe splits, O^{p'} and fixed-point covers."""

import random

import numpy as np
import pytest

from linorbits.errors import GroupTooLarge, SpaceTooLarge
from linorbits.field import GF
from linorbits.matrix import Matrix, blowup
from linorbits.matgroup import (
    BAD_ORBIT,
    MatGroup,
    ORDER_NOT_DIVISIBLE_BY_P,
    P_EXCEPTIONAL,
    element_of_order_p,
    is_half_transitive,
    is_irreducible,
    is_p_exceptional,
    is_semiregular_nonzero,
    is_transitive_nonzero,
    mulclose,
    p_residual,
    spin,
    split_constituent,
    verify_fixed_point_cover,
    with_scalars,
)
from linorbits.permgroup import alternating_group, load_perm_group
from linorbits.constructions import (
    deleted_permutation_module,
    perm_matrix_group,
    sl2_order120_pair,
)

F2, F3 = GF(2), GF(3)


def gl22():
    return MatGroup(F2, 2, [Matrix(F2, [[0, 1], [1, 0]]), Matrix(F2, [[1, 1], [0, 1]])],
                    label="GL2(2)")


def gl32():
    return MatGroup(F2, 3, [Matrix(F2, [[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
                            Matrix(F2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])],
                    label="GL3(2)")


def sl23():
    return MatGroup(F3, 2, [Matrix(F3, [[1, 1], [0, 1]]), Matrix(F3, [[1, 0], [1, 1]])],
                    label="SL2(3)")


def test_identity_group_has_singleton_orbits():
    G = MatGroup(F3, 2, [Matrix.identity(F3, 2)])
    part = G.orbit_partition()
    assert part.sizes == {1: 9}
    assert G.group_order() == 1


def test_sl23_transitive_on_nonzero():
    part = sl23().orbit_partition()
    assert part.sizes == {1: 1, 8: 1}


def test_orbit_sum_conservation_and_zero_singleton():
    for G in [gl22(), gl32(), sl23()]:
        part = G.orbit_partition()
        assert int(part.rep_sizes.sum()) == G.space_size
        assert part.reps[0] == 0 and part.rep_sizes[0] == 1


def test_group_order_examples():
    assert sl23().group_order() == 24 == len(mulclose(sl23().generators))
    assert gl32().group_order() == 168


def test_group_order_sl25_in_gl29():
    F9 = GF(3, 2)
    a, b = sl2_order120_pair(0)
    G = MatGroup(F9, 2, [a, b], label="SL2(5)<SL2(9)")
    assert G.group_order() == 120
    assert len(mulclose(G.generators, cap=10**4)) == 120


def test_chain_order_equals_enumeration_on_catalog_smalls():
    from linorbits.catalog import build_entry

    for name in ["X312_2_GL3_4", "X2m14_minus_A4_GL4_3", "TI72S3_GL9_2",
                 "C4pair_q2", "Torus_frobenius_GL4_2"]:
        G = build_entry(name)
        assert G.group_order() == len(mulclose(G.generators, cap=10**5)), name


def test_is_p_exceptional_gl22():
    v = is_p_exceptional(gl22(), 2)
    assert v.status == P_EXCEPTIONAL and v.witness is None


def test_is_p_exceptional_deleted_a5():
    G = deleted_permutation_module(alternating_group(5), 2)
    v = is_p_exceptional(G, 2)
    assert v.status == BAD_ORBIT
    rep, size = v.witness
    assert size == 10 and size % 2 == 0
    # witness reproducible by re-running the orbit
    assert len(G.orbit_of_index(rep)) == size


def test_is_p_exceptional_requires_characteristic():
    with pytest.raises(ValueError):
        is_p_exceptional(sl23(), 2)


def test_order_not_divisible_status():
    # <diag(2)> over GF(3), order 2, p = 3
    G = MatGroup(F3, 1, [Matrix(F3, [[2]])])
    assert is_p_exceptional(G, 3).status == ORDER_NOT_DIVISIBLE_BY_P


def test_transitivity_predicates():
    assert is_transitive_nonzero(gl32())
    assert is_half_transitive(gl32())
    G = MatGroup(F3, 4, [blowup(m) for m in sl2_order120_pair(0)], label="SL2(5)")
    assert is_half_transitive(G) and not is_transitive_nonzero(G)
    assert not is_semiregular_nonzero(G)
    triv = MatGroup(F3, 2, [Matrix.identity(F3, 2)])
    assert is_semiregular_nonzero(triv)


def test_spin_zero_and_irreducible():
    G = gl32()
    assert spin(G, np.zeros(3, dtype=np.int64)).rows == 0
    for idx in range(1, 8):
        assert spin(G, G.decode(idx)).rows == 3


def test_spin_weight_vector_in_a7_perm_module():
    A7 = alternating_group(7)
    G = perm_matrix_group(A7, F2)
    v = np.array([1, 1, 0, 0, 0, 0, 0], dtype=np.int64)
    assert spin(G, v).rows == 6


def test_spin_dimension_constant_on_orbits():
    G = deleted_permutation_module(alternating_group(5), 2)
    rng = random.Random(0)
    part = G.orbit_partition()
    for rep, size in zip(part.reps, part.rep_sizes):
        if rep == 0:
            continue
        d0 = spin(G, G.decode(int(rep))).rows
        orbit = G.orbit_of_index(int(rep))
        for idx in rng.sample([int(x) for x in orbit], min(4, len(orbit))):
            assert spin(G, G.decode(idx)).rows == d0


def test_is_irreducible_scalars_false():
    G = MatGroup(F3, 2, [Matrix.diagonal(F3, [2, 2])])
    assert not is_irreducible(G)


def test_is_irreducible_diagonal_sum_false():
    g1, g2 = gl22().generators
    def diag(g):
        arr = np.zeros((4, 4), dtype=np.int64)
        arr[:2, :2] = g.arr
        arr[2:, 2:] = g.arr
        return Matrix(F2, arr)
    G = MatGroup(F2, 4, [diag(g1), diag(g2)])
    assert not is_irreducible(G)


def test_split_a7_deleted_is_irreducible():
    D = deleted_permutation_module(alternating_group(7), 2)
    result = split_constituent(D, seed=0)
    assert result.irreducible
    assert is_irreducible(D)


def test_split_m23_dimensions_and_closure():
    D = deleted_permutation_module(load_perm_group("M23"), 2)
    assert D.dim == 22
    res = split_constituent(D, seed=0)
    assert not res.irreducible
    assert res.sub.dim + res.quot.dim == 22
    assert res.sub.dim == 11
    # well-defined actions: images of a product equal products of images
    from linorbits.matgroup import quotient_action, restrict_action

    g1, g2 = D.generators
    prod = MatGroup(D.field, D.dim, [g1 @ g2])
    assert restrict_action(prod, res.submodule).generators[0] == \
        res.sub.generators[0] @ res.sub.generators[1]
    assert quotient_action(prod, res.submodule).generators[0] == \
        res.quot.generators[0] @ res.quot.generators[1]


def test_split_m11_gives_5_dim_constituents():
    D = deleted_permutation_module(load_perm_group("M11_12"), 3)
    res = split_constituent(D, seed=0)
    assert not res.irreducible
    assert {res.sub.dim, res.quot.dim} == {5}


def test_split_seed_determinism():
    D = deleted_permutation_module(load_perm_group("M23"), 2)
    r1 = split_constituent(D, seed=0)
    r2 = split_constituent(D, seed=0)
    assert r1.submodule == r2.submodule


def test_p_residual_of_p_prime_group_is_trivial():
    G = MatGroup(F3, 1, [Matrix(F3, [[2]])])  # order 2, p = 3
    R = p_residual(G, 3)
    assert len(mulclose(R.generators)) == 1


def test_p_residual_gl22_at_3_is_a3():
    R = p_residual(gl22(), 3)
    els = mulclose(R.generators)
    assert len(els) == 3
    assert all(g.order() in (1, 3) for g in els)


def test_p_residual_torus_frobenius_is_2_exceptional():
    from linorbits.catalog import build_entry

    G = build_entry("Torus_frobenius_GL4_2")
    assert is_p_exceptional(G, 2).status == P_EXCEPTIONAL
    R = p_residual(G, 2)
    assert is_p_exceptional(R, 2).status == P_EXCEPTIONAL


def test_p_residual_cap():
    with pytest.raises(GroupTooLarge):
        p_residual(gl32(), 2, max_elements=10)


def test_fixed_point_cover_transitive_group():
    G = gl32()
    t = element_of_order_p(G, 2)
    assert verify_fixed_point_cover(G, 2, t)


def test_fixed_point_cover_m11():
    from linorbits.catalog import build_entry

    G = build_entry("M11_GL5_3")
    t = element_of_order_p(G, 3)
    assert verify_fixed_point_cover(G, 3, t)


def test_fixed_point_cover_is_not_sufficient_for_exceptionality():
    # Every orbit of the A5 deleted module has even-order stabilizer (A4 and
    # S3), so the involution class covers all of V even though the group is
    # not 2-exceptional: the cover is necessary, not sufficient.  Verified
    # against full element enumeration.
    G = deleted_permutation_module(alternating_group(5), 2)
    t = element_of_order_p(G, 2)
    assert t.order() == 2
    assert verify_fixed_point_cover(G, 2, t)
    els = mulclose(G.generators)
    cls = {g.inverse() @ t @ g for g in els}
    for idx in range(1, G.space_size):
        v = G.decode(idx)
        assert any(
            np.array_equal(G.field.matmul(v[None, :], u.arr)[0], v) for u in cls
        )
    assert is_p_exceptional(G, 2).status == BAD_ORBIT


def test_fixed_point_cover_false_case():
    # order-2 cyclic group with a one-dimensional fixed space: the vectors
    # outside ker(t - I) are uncovered
    G = MatGroup(F2, 2, [Matrix(F2, [[1, 1], [0, 1]])])
    t = G.generators[0]
    assert not verify_fixed_point_cover(G, 2, t)


def test_space_too_large():
    G = gl32()
    with pytest.raises(SpaceTooLarge):
        G.orbit_partition(max_vectors=4)


def test_with_scalars_status_equivalence_examples():
    for G in [gl22(), sl23(), gl32()]:
        p = G.field.p
        s1 = is_p_exceptional(G, p).status
        s2 = is_p_exceptional(with_scalars(G), p).status
        assert s1 == s2


def test_generators_must_be_invertible():
    with pytest.raises(ValueError):
        MatGroup(F3, 2, [Matrix.zero(F3, 2, 2)])
