"""The named-example catalog: construction recipes, expected orbit profiles
with their citations, and the verification driver.

Entries live as JSON files under data/catalog/, one per entry; builders
here turn a recipe into a concrete matrix group.  Verification recomputes
the exact orbit multiset and compares bit-for-bit.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

from .errors import MismatchedProfile, UnknownEntry
from .field import GF
from .matgroup import (
    DEFAULT_MAX_VECTORS,
    MatGroup,
    is_half_transitive,
    is_irreducible,
    is_p_exceptional,
    is_transitive_nonzero,
    split_constituent,
    with_scalars,
)
from .matrix import Matrix, blowup, blowup_semilinear
from .constructions import (
    ExtraspecialFrame,
    ExtraspecialSpec,
    GammaL1Spec,
    WreathSpec,
    c4_pair_group,
    deleted_permutation_module,
    dickson_kernel_generators,
    extraspecial,
    frobenius_element,
    gamma_l1,
    lift_outer,
    singer_element,
    sl2_order120_pair,
    tensor_product_group,
    wreath,
)
from .matgroup import mulclose
from .permgroup import PermGroup, load_perm_group


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    citation: str
    p: int
    builder: str
    params: dict
    expected_orbit_sizes: dict[int, int]
    mode: str = "exact"  # exact | split_select | split_both
    expected_order: int | None = None
    expected_irreducible: bool | None = None
    sibling_profile: dict[int, int] | None = None
    with_scalars: bool = False
    normal_in: str | None = None
    notes: str = ""


@dataclass
class VerifyReport:
    name: str
    passed: bool
    expected_sizes: dict[int, int]
    computed_sizes: dict[int, int]
    order: int | None
    verdict_status: str | None
    irreducible: bool | None
    half_transitive: bool | None
    transitive: bool | None
    elapsed_ms: float
    messages: list[str] = dc_field(default_factory=list)


# -- builders ----------------------------------------------------------------


def _build_deleted(params, seed):
    if "perm" in params:
        H = load_perm_group(params["perm"])
    else:
        from .permgroup import alternating_group, symmetric_group

        fam = alternating_group if params["perm_family"] == "A" else symmetric_group
        H = fam(params["n"])
    return deleted_permutation_module(H, params["module_p"])


def _build_deleted_split(params, seed):
    D = _build_deleted(params, seed)
    return split_constituent(D, seed=seed)


def _build_gamma_l1(params, seed):
    return gamma_l1(GammaL1Spec(params["p"], params["d"], params["s"], params["j"]))


def _build_c4_pair(params, seed):
    return c4_pair_group(params["q"])


def _build_sl25(params, seed):
    a, b = sl2_order120_pair(seed)
    F3 = GF(3)
    gens = [blowup(a), blowup(b)]
    if params.get("adjoin_neg", True):
        gens.append(Matrix.identity(F3, 4).scale(F3.neg(1)))
    return MatGroup(F3, 4, gens, label=params.get("label", "SL2(5).Z"))


def _build_torus_frobenius(params, seed):
    F4 = GF(2, 2)
    gens = [
        blowup(Matrix.diagonal(F4, [F4.generator, 1])),
        blowup(Matrix.diagonal(F4, [1, F4.generator])),
        blowup_semilinear(Matrix.identity(F4, 2), 1),
    ]
    return MatGroup(GF(2), 4, gens, label="torus.frobenius<GammaL2(4)")


def _build_wreath_gl22_d10(params, seed):
    F2 = GF(2)
    GL22 = MatGroup(
        F2, 2,
        [Matrix(F2, [[0, 1], [1, 0]]), Matrix(F2, [[1, 1], [0, 1]])],
        label="GL2(2)",
    )
    D10 = load_perm_group("D10")
    return wreath(WreathSpec(GL22, D10))


def _build_tensor_7sq(params, seed):
    F2 = GF(2)
    C = singer_element(2, 3)
    t = frobenius_element(2, 3)
    singer = MatGroup(F2, 3, [C], label="C7")
    if params["top"] == "S3":
        return tensor_product_group(singer, singer, with_swap=True,
                                    extra_pairs=[(t, t.inverse())],
                                    label="7^2.S3")
    norm = MatGroup(F2, 3, [C, t], label="7:3")
    return tensor_product_group(norm, norm, with_swap=True, label="(7.3)^2.2")


def _build_x312(params, seed):
    F4 = GF(2, 2)
    F2 = GF(2)
    R = extraspecial(ExtraspecialSpec(3, 1, "odd_exponent_r", 4))
    X, Z = R.generators
    iota = lift_outer(R, [X.inverse(), Z.inverse()])
    variant = params["variant"]
    if variant == "2":
        return MatGroup(F4, 3, [X, Z, iota], label="3^{1+2}.2")
    c = lift_outer(R, [X @ Z, Z])
    if variant == "6":
        return MatGroup(F4, 3, [X, Z, c, iota], label="3^{1+2}.6")
    # semilinear variants live in the GF(2) blow-up
    BX, BZ, Bc, Biota = (blowup(M) for M in (X, Z, c, iota))
    Rb = MatGroup(F2, 6, [BX, BZ])
    sigma = lift_outer(Rb, [BX, blowup(Z.inverse())])
    if variant == "S3a":
        return MatGroup(F2, 6, [BX, BZ, Bc, sigma], label="3^{1+2}.S3a")
    if variant == "S3b":
        return MatGroup(F2, 6, [BX, BZ, Bc, sigma @ Biota], label="3^{1+2}.S3b")
    if variant == "D12":
        return MatGroup(F2, 6, [BX, BZ, Bc, sigma, Biota], label="3^{1+2}.D12")
    raise ValueError(f"unknown x312 variant {variant}")


def _build_x2m14_minus(params, seed):
    R = extraspecial(ExtraspecialSpec(2, 2, "minus", 3))
    frame = ExtraspecialFrame(R)
    stab_gens, stab_els, orbit_len, _ = frame.orthogonal_stabilizer_of_singular()
    assert orbit_len * len(stab_els) == 120  # O4-(2)
    if params["top"] == "S4":
        tops = stab_gens
        label = "2^{1+4}-.S4"
    else:
        tops, _ = dickson_kernel_generators(stab_els)
        label = "2^{1+4}-.A4"
    lifts = [lift_outer(R, frame.alpha_images(t.arr)) for t in tops]
    return MatGroup(R.field, R.dim, list(R.generators) + lifts, label=label)


def _build_x2m16_minus(params, seed):
    R = extraspecial(ExtraspecialSpec(2, 3, "minus", 3))
    frame = ExtraspecialFrame(R)
    stab_gens, stab_els, orbit_len, _ = frame.orthogonal_stabilizer_of_singular()
    assert orbit_len * len(stab_els) == 51840  # O6-(2)
    if params["top"] == "24S5":
        tops = stab_gens
        label = "2^{1+6}-.2^4.S5"
    else:
        tops, _ = dickson_kernel_generators(stab_els)
        label = "2^{1+6}-.2^4.A5"
    lifts = [lift_outer(R, frame.alpha_images(t.arr)) for t in tops]
    return MatGroup(R.field, R.dim, list(R.generators) + lifts, label=label)


def _plus_diag_auto(A: Matrix) -> Matrix:
    """diag(A, A^-T) on the interleaved hyperbolic basis of R/Z for the
    plus-type 2^(1+6): s-coordinates at even positions, t at odd."""
    F2 = GF(2)
    AinvT = A.inverse().transpose()
    out = np.zeros((6, 6), dtype=np.int64)
    out[0::2, 0::2] = A.arr
    out[1::2, 1::2] = AinvT.arr
    return Matrix(F2, out)


def _plus_shear_auto(S) -> Matrix:
    """Unipotent block e_(2i) -> e_(2i) + sum_j S[i,j] e_(2j+1) for an
    alternating S; preserves the plus-type form."""
    out = np.eye(6, dtype=np.int64)
    S = np.asarray(S)
    for i in range(3):
        for j in range(3):
            out[2 * i, 2 * j + 1] = S[i, j]
    return Matrix(GF(2), out)


def _plus_shear_gens():
    return [
        _plus_shear_auto([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
        _plus_shear_auto([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
        _plus_shear_auto([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
    ]


def _twisted_l32_complement():
    """Generators of the non-split complement class of L3(2) inside the
    monomial-normalizer image 2^3:L3(2) of the plus-type 2^(1+6).

    The two complement classes (H^1 of the natural module is nonzero) are
    told apart structurally: the split, diagonal class stabilizes the
    even-coordinate totally singular space, the twisted class does not.
    """
    F2 = GF(2)
    dA1 = _plus_diag_auto(Matrix(F2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
    dA2 = _plus_diag_auto(Matrix(F2, [[0, 0, 1], [1, 0, 0], [0, 1, 0]]))
    group = mulclose([dA1, dA2] + _plus_shear_gens(), cap=3000)
    assert len(group) == 1344
    shears = set(mulclose(_plus_shear_gens(), cap=16))
    u = next(g for g in group if g.order(cap=10) == 7)

    def stabilizes_even_space(gens):
        return all(not g.arr[0::2, 1::2].any() for g in gens)

    for t in group:
        if t.order(cap=10) != 3:
            continue
        try:
            H = mulclose([u, t], cap=200)
        except Exception:
            continue
        if len(H) == 168 and len(set(H) & shears) == 1:
            if not stabilizes_even_space([u, t]):
                return [u, t]
    raise AssertionError("twisted L3(2) complement not found")


def _build_x2m16_plus(params, seed):
    R = extraspecial(ExtraspecialSpec(2, 3, "plus", 3))
    frame = ExtraspecialFrame(R)
    F2 = GF(2)
    top = params["top"]
    if top == "L32":
        tops = _twisted_l32_complement()
        label = "2^{1+6}+.L3(2)"
    elif top == "23L32":
        dA1 = _plus_diag_auto(Matrix(F2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
        dA2 = _plus_diag_auto(Matrix(F2, [[0, 0, 1], [1, 0, 0], [0, 1, 0]]))
        tops = [dA1, dA2] + _plus_shear_gens()
        label = "2^{1+6}+.2^3.L3(2)"
    elif top == "2373":
        Aw = singer_element(2, 3)
        Af = frobenius_element(2, 3)
        tops = [_plus_diag_auto(Aw), _plus_diag_auto(Af)] + _plus_shear_gens()
        label = "2^{1+6}+.2^3.7.3"
    else:
        raise ValueError(f"unknown plus-type top {top}")
    lifts = [lift_outer(R, frame.alpha_images(t.arr)) for t in tops]
    return MatGroup(R.field, R.dim, list(R.generators) + lifts, label=label)


BUILDERS = {
    "deleted": _build_deleted,
    "deleted_split": _build_deleted_split,
    "gamma_l1": _build_gamma_l1,
    "c4_pair": _build_c4_pair,
    "sl25": _build_sl25,
    "torus_frobenius": _build_torus_frobenius,
    "wreath_gl22_d10": _build_wreath_gl22_d10,
    "tensor_7sq": _build_tensor_7sq,
    "x312": _build_x312,
    "x2m14_minus": _build_x2m14_minus,
    "x2m16_minus": _build_x2m16_minus,
    "x2m16_plus": _build_x2m16_plus,
}


# -- registry ------------------------------------------------------------------


def _parse_sizes(doc) -> dict[int, int]:
    return {int(k): int(v) for k, v in doc.items()}


def _load_registry() -> dict[str, CatalogEntry]:
    out = {}
    root = resources.files("linorbits") / "data" / "catalog"
    for path in sorted(root.iterdir(), key=lambda p: p.name):
        if not path.name.endswith(".json"):
            continue
        doc = json.loads(path.read_text())
        entry = CatalogEntry(
            name=doc["name"],
            citation=doc["citation"],
            p=int(doc["p"]),
            builder=doc["builder"],
            params=doc.get("params", {}),
            expected_orbit_sizes=_parse_sizes(doc["expected_orbit_sizes"]),
            mode=doc.get("mode", "exact"),
            expected_order=doc.get("expected_order"),
            expected_irreducible=doc.get("expected_irreducible"),
            sibling_profile=(
                _parse_sizes(doc["sibling_profile"])
                if doc.get("sibling_profile") else None
            ),
            with_scalars=doc.get("with_scalars", False),
            normal_in=doc.get("normal_in"),
            notes=doc.get("notes", ""),
        )
        out[entry.name] = entry
    return out


_REGISTRY: dict[str, CatalogEntry] | None = None


def registry() -> dict[str, CatalogEntry]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _load_registry()
    return _REGISTRY


def entry_names() -> list[str]:
    return sorted(registry())


def catalog(name: str) -> CatalogEntry:
    try:
        return registry()[name]
    except KeyError:
        raise UnknownEntry(name) from None


def build_entry(name: str, seed: int = 0) -> MatGroup:
    """Build the entry's group; for split entries, the constituent whose
    orbit profile is the expected one."""
    entry = catalog(name)
    built = BUILDERS[entry.builder](entry.params, seed)
    if entry.mode == "exact":
        return built
    groups = [built.sub, built.quot]
    if entry.with_scalars:
        groups = [with_scalars(G) for G in groups]
    if entry.mode == "split_both":
        return groups[0]
    for G in groups:
        if G.orbit_partition().sizes == entry.expected_orbit_sizes:
            return G
    raise MismatchedProfile(
        name, entry.expected_orbit_sizes,
        [G.orbit_partition().sizes for G in groups],
    )


def catalog_verify(name: str, seed: int = 0,
                   max_vectors: int = DEFAULT_MAX_VECTORS) -> VerifyReport:
    entry = catalog(name)
    start = time.perf_counter()
    messages: list[str] = []
    passed = True

    def check(cond, msg):
        nonlocal passed
        if not cond:
            passed = False
            messages.append(msg)

    built = BUILDERS[entry.builder](entry.params, seed)
    computed: dict[int, int] = {}
    main_group: MatGroup | None = None

    if entry.mode == "exact":
        main_group = built
        computed = main_group.orbit_partition(max_vectors).sizes
        check(computed == entry.expected_orbit_sizes,
              f"profile mismatch: {computed} != {entry.expected_orbit_sizes}")
    else:
        check(not built.irreducible, "module did not split")
        groups = [built.sub, built.quot]
        if entry.with_scalars:
            groups = [with_scalars(G) for G in groups]
        profiles = [G.orbit_partition(max_vectors).sizes for G in groups]
        if entry.mode == "split_both":
            for prof in profiles:
                check(prof == entry.expected_orbit_sizes,
                      f"constituent profile {prof} != {entry.expected_orbit_sizes}")
            main_group = groups[0]
            computed = profiles[0]
        else:  # split_select
            matching = [i for i, prof in enumerate(profiles)
                        if prof == entry.expected_orbit_sizes]
            check(len(matching) == 1,
                  f"expected exactly one constituent with profile "
                  f"{entry.expected_orbit_sizes}, found {len(matching)}")
            if matching:
                main_group = groups[matching[0]]
                computed = profiles[matching[0]]
                sibling = profiles[1 - matching[0]]
                check(any(s % entry.p == 0 for s in sibling),
                      f"sibling profile {sibling} has no p-divisible orbit")
                if entry.sibling_profile is not None:
                    check(sibling == entry.sibling_profile,
                          f"sibling profile {sibling} != recorded "
                          f"{entry.sibling_profile}")

    order = verdict_status = irreducible = half_tr = transitive = None
    if main_group is not None:
        order = main_group.group_order(max_vectors)
        if entry.expected_order is not None:
            check(order == entry.expected_order,
                  f"order {order} != expected {entry.expected_order}")
        for size in computed:
            check(order % size == 0, f"orbit size {size} does not divide order {order}")
        verdict = is_p_exceptional(main_group, entry.p, max_vectors)
        verdict_status = verdict.status
        check(verdict.is_exceptional,
              f"verdict {verdict.status}, witness {verdict.witness}")
        irreducible = is_irreducible(main_group, max_vectors)
        if entry.expected_irreducible is not None:
            check(irreducible == entry.expected_irreducible,
                  f"irreducible={irreducible} != expected "
                  f"{entry.expected_irreducible}")
        half_tr = is_half_transitive(main_group, max_vectors)
        transitive = is_transitive_nonzero(main_group, max_vectors)

    elapsed = (time.perf_counter() - start) * 1000.0
    return VerifyReport(
        name=name,
        passed=passed,
        expected_sizes=entry.expected_orbit_sizes,
        computed_sizes=computed,
        order=order,
        verdict_status=verdict_status,
        irreducible=irreducible,
        half_transitive=half_tr,
        transitive=transitive,
        elapsed_ms=elapsed,
        messages=messages,
    )


def catalog_verify_all(seed: int = 0,
                       max_vectors: int = DEFAULT_MAX_VECTORS) -> list[VerifyReport]:
    return [catalog_verify(name, seed=seed, max_vectors=max_vectors)
            for name in entry_names()]
