"""Finite matrix groups given by generators: exact orbit partitions of the
full vector space, stabilizer-chain order, p-exceptionality and transitivity
predicates, submodule spinning and a minimal meataxe split.

A vector over GF(q)^d is identified with the integer sum(coord_i * q^i)
(little-endian).  Orbit enumeration visits indices in ascending order, so
orbit representatives are always the least index in their orbit and reports
are byte-identical across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import GroupTooLarge, ShapeMismatch, SpaceTooLarge
from .field import Field, GF
from .matrix import Matrix, blowup, blowup_semilinear, echelon
from .permgroup import StabilizerChain, orbit_reps_and_sizes

DEFAULT_MAX_VECTORS = 2**22
DEFAULT_MAX_ELEMENTS = 10**6

P_EXCEPTIONAL = "P_EXCEPTIONAL"
ORDER_NOT_DIVISIBLE_BY_P = "ORDER_NOT_DIVISIBLE_BY_P"
BAD_ORBIT = "BAD_ORBIT"


@dataclass(frozen=True)
class OrbitPartition:
    """Exact multiset of orbit sizes on all q^d vectors.

    reps[i] is the least vector index of orbit i (strictly increasing);
    rep_sizes[i] the orbit's size.
    """

    total: int
    reps: np.ndarray
    rep_sizes: np.ndarray

    @property
    def sizes(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.rep_sizes:
            out[int(s)] = out.get(int(s), 0) + 1
        return out

    def nonzero_sizes(self) -> list[int]:
        """Orbit sizes with the zero-vector singleton removed, ascending."""
        out = [int(s) for r, s in zip(self.reps, self.rep_sizes) if r != 0]
        return sorted(out)

    def orbit_count(self) -> int:
        return len(self.reps)


@dataclass(frozen=True)
class PexcVerdict:
    status: str
    witness: tuple[int, int] | None = None  # (representative index, orbit size)

    @property
    def is_exceptional(self) -> bool:
        return self.status == P_EXCEPTIONAL


class MatGroup:
    """A matrix group over GF(p^a) given by invertible generators."""

    def __init__(self, field: Field, dim: int, generators, label: str | None = None):
        generators = tuple(generators)
        if not generators:
            raise ValueError("generator list must be nonempty")
        for g in generators:
            if g.field != field:
                raise ShapeMismatch("generator field mismatch")
            if g.shape != (dim, dim):
                raise ShapeMismatch(f"generator shape {g.shape} != ({dim},{dim})")
            if not g.is_invertible():
                raise ValueError("generators must be invertible")
        self.field = field
        self.dim = dim
        self.generators = generators
        self.label = label
        self._cache: dict = {}

    def __repr__(self):
        tag = self.label or f"{len(self.generators)} gens"
        return f"MatGroup({self.field}, dim={self.dim}, {tag})"

    @property
    def space_size(self) -> int:
        return self.field.q**self.dim

    # -- vector indexing ---------------------------------------------------

    def _check_space(self, max_vectors: int):
        if self.space_size > max_vectors:
            raise SpaceTooLarge(
                f"q^d = {self.space_size} exceeds max_vectors={max_vectors}; "
                "raise it with --max-vectors"
            )

    def decode(self, index: int) -> np.ndarray:
        q = self.field.q
        out = np.zeros(self.dim, dtype=np.int64)
        for i in range(self.dim):
            out[i] = index % q
            index //= q
        return out

    def encode(self, v) -> int:
        q = self.field.q
        out = 0
        for i, c in enumerate(np.asarray(v, dtype=np.int64)):
            out += int(c) * q**i
        return out

    def _all_coords(self) -> np.ndarray:
        key = "coords"
        if key not in self._cache:
            n = self.space_size
            q = self.field.q
            coords = np.zeros((n, self.dim), dtype=np.int64)
            idx = np.arange(n, dtype=np.int64)
            for i in range(self.dim):
                coords[:, i] = idx % q
                idx //= q
            self._cache[key] = coords
        return self._cache[key]

    def index_permutations(self, max_vectors: int = DEFAULT_MAX_VECTORS):
        """One index-permutation array per generator."""
        self._check_space(max_vectors)
        key = "perms"
        if key not in self._cache:
            coords = self._all_coords()
            weights = np.array(
                [self.field.q**i for i in range(self.dim)], dtype=np.int64
            )
            perms = []
            for g in self.generators:
                imgs = self.field.matmul(coords, g.arr)
                perms.append(imgs @ weights)
            self._cache[key] = perms
        return self._cache[key]

    # -- orbits --------------------------------------------------------------

    def orbit_partition(self, max_vectors: int = DEFAULT_MAX_VECTORS) -> OrbitPartition:
        self._check_space(max_vectors)
        if "partition" not in self._cache:
            perms = self.index_permutations(max_vectors)
            reps, sizes = orbit_reps_and_sizes(perms, self.space_size)
            self._cache["partition"] = OrbitPartition(
                total=self.space_size, reps=reps, rep_sizes=sizes
            )
            part = self._cache["partition"]
            assert int(part.rep_sizes.sum()) == self.space_size
            assert part.reps[0] == 0 and part.rep_sizes[0] == 1  # zero vector
        return self._cache["partition"]

    def orbit_of_index(self, index: int,
                       max_vectors: int = DEFAULT_MAX_VECTORS) -> np.ndarray:
        """Sorted orbit of one vector index."""
        self._check_space(max_vectors)
        perms = self.index_permutations(max_vectors)
        seen = np.zeros(self.space_size, dtype=bool)
        seen[index] = True
        frontier = np.array([index], dtype=np.int64)
        count = 1
        while frontier.size:
            nxt = np.unique(np.concatenate([p[frontier] for p in perms]))
            new = nxt[~seen[nxt]]
            seen[new] = True
            count += len(new)
            frontier = new
        return np.nonzero(seen)[0]

    def orbit_of_vector(self, v, max_vectors: int = DEFAULT_MAX_VECTORS) -> np.ndarray:
        return self.orbit_of_index(self.encode(v), max_vectors)

    # -- order ----------------------------------------------------------------

    def group_order(self, max_vectors: int = DEFAULT_MAX_VECTORS) -> int:
        """Order via a stabilizer chain on the permutation action on vector
        indices, base points greedily the moved point with the largest orbit."""
        if "order" not in self._cache:
            perms = self.index_permutations(max_vectors)
            chain = StabilizerChain(perms, self.space_size, base_rule="largest_orbit")
            self._cache["order"] = chain.order
        return self._cache["order"]

    def order_divisible_by(self, p: int,
                           max_vectors: int = DEFAULT_MAX_VECTORS) -> bool:
        if "order" in self._cache:
            return self._cache["order"] % p == 0
        for g in self.generators:
            if g.order() % p == 0:
                return True
        return self.group_order(max_vectors) % p == 0

    def enumerate_elements(self, max_elements: int = DEFAULT_MAX_ELEMENTS):
        """All elements by breadth-first closure, in discovery order."""
        key = ("elements", )
        if key not in self._cache:
            self._cache[key] = mulclose(self.generators, max_elements)
        elif len(self._cache[key]) > max_elements:
            raise GroupTooLarge(f"group exceeds max_elements={max_elements}")
        return self._cache[key]


def mulclose(gens, cap: int = DEFAULT_MAX_ELEMENTS) -> list[Matrix]:
    """Breadth-first closure of a generator list, deterministic order."""
    els: dict[Matrix, None] = {}
    ident = Matrix.identity(gens[0].field, gens[0].rows, max_dim=gens[0].rows)
    els[ident] = None
    frontier = [ident]
    while frontier:
        new = []
        for b in frontier:
            for a in gens:
                c = b @ a
                if c not in els:
                    els[c] = None
                    new.append(c)
                    if len(els) > cap:
                        raise GroupTooLarge(f"closure exceeds cap {cap}")
        frontier = new
    return list(els)


# -- predicates ---------------------------------------------------------------


def is_p_exceptional(G: MatGroup, p: int,
                     max_vectors: int = DEFAULT_MAX_VECTORS) -> PexcVerdict:
    """Tri-state p-exceptionality verdict.

    Requires p to be the characteristic of G's field.  For extension fields
    the predicate is definitionally about the GF(p) blow-up; orbits and order
    agree with the GF(q) action on the same underlying vector set, and the
    little-endian index of a vector is identical in both encodings, so the
    computation runs directly on the given representation.
    """
    if p != G.field.p:
        raise ValueError(
            f"p={p} must be the characteristic {G.field.p} of the acting field"
        )
    part = G.orbit_partition(max_vectors)
    bad = [(int(r), int(s)) for r, s in zip(part.reps, part.rep_sizes) if s % p == 0]
    if bad:
        return PexcVerdict(status=BAD_ORBIT, witness=bad[0])
    if not G.order_divisible_by(p, max_vectors):
        return PexcVerdict(status=ORDER_NOT_DIVISIBLE_BY_P)
    return PexcVerdict(status=P_EXCEPTIONAL)


def is_half_transitive(G: MatGroup,
                       max_vectors: int = DEFAULT_MAX_VECTORS) -> bool:
    """All orbits on nonzero vectors share one size."""
    sizes = G.orbit_partition(max_vectors).nonzero_sizes()
    return len(set(sizes)) == 1


def is_transitive_nonzero(G: MatGroup,
                          max_vectors: int = DEFAULT_MAX_VECTORS) -> bool:
    sizes = G.orbit_partition(max_vectors).nonzero_sizes()
    return len(sizes) == 1


def is_semiregular_nonzero(G: MatGroup,
                           max_vectors: int = DEFAULT_MAX_VECTORS) -> bool:
    """Every nonzero orbit has size equal to the group order (free action)."""
    sizes = set(G.orbit_partition(max_vectors).nonzero_sizes())
    return sizes == {G.group_order(max_vectors)}


# -- spinning and irreducibility ------------------------------------------------


def _reduce_against(field: Field, v: np.ndarray, basis: list[np.ndarray],
                    pivots: list[int]) -> np.ndarray:
    v = v.copy()
    for row, piv in zip(basis, pivots):
        c = int(v[piv])
        if c:
            v = field.sub_arr(v, field.mul_arr(np.int64(c), row))
    return v


def spin(G: MatGroup, v) -> Matrix:
    """Least G-invariant subspace containing v, as a canonical reduced
    echelon basis (possibly with zero rows removed)."""
    f = G.field
    v = np.asarray(v, dtype=np.int64)
    basis: list[np.ndarray] = []
    pivots: list[int] = []

    def insert(w):
        w = _reduce_against(f, w, basis, pivots)
        nz = np.nonzero(w)[0]
        if len(nz) == 0:
            return None
        piv = int(nz[0])
        w = f.mul_arr(np.int64(f.inv(int(w[piv]))), w)
        # back-reduce existing rows against the new one
        for i, row in enumerate(basis):
            c = int(row[piv])
            if c:
                basis[i] = f.sub_arr(row, f.mul_arr(np.int64(c), w))
        basis.append(w)
        pivots.append(piv)
        return w

    queue = []
    first = insert(v)
    if first is not None:
        queue.append(first)
    while queue:
        u = queue.pop(0)
        for g in G.generators:
            w = f.matmul(u[None, :], g.arr)[0]
            added = insert(w)
            if added is not None:
                queue.append(added)
    if not basis:
        return Matrix(f, np.zeros((0, G.dim), dtype=np.int64))
    order = np.argsort(pivots)
    arr = np.stack([basis[i] for i in order])
    return Matrix(f, arr, max_dim=max(arr.shape))


def is_irreducible(G: MatGroup, max_vectors: int = DEFAULT_MAX_VECTORS) -> bool:
    """True iff spin(v) is the full space for a representative of every
    nonzero orbit (spin dimension is constant on orbits)."""
    part = G.orbit_partition(max_vectors)
    for r in part.reps:
        if r == 0:
            continue
        if spin(G, G.decode(int(r))).rows < G.dim:
            return False
    return True


# -- restriction / quotient ------------------------------------------------------


def restrict_action(G: MatGroup, W: Matrix, label=None) -> MatGroup:
    """Action of G on the invariant subspace W (rows = echelon basis)."""
    f = G.field
    E, piv, _ = echelon(f, W.arr)
    k = len(piv)
    B = E[:k]
    gens = []
    for g in G.generators:
        img = f.matmul(B, g.arr)
        coeff = img[:, piv]
        if not np.array_equal(f.matmul(coeff, B), img):
            raise ValueError("subspace is not invariant")
        gens.append(Matrix(f, coeff, max_dim=max(k, 1)))
    return MatGroup(f, k, gens, label=label or (G.label and G.label + "|sub"))


def quotient_action(G: MatGroup, W: Matrix, label=None) -> MatGroup:
    """Action of G on V/W for an invariant subspace W."""
    f = G.field
    E, piv, _ = echelon(f, W.arr)
    k = len(piv)
    B = E[:k]
    comp = [j for j in range(G.dim) if j not in piv]

    def project(rows):
        red = rows.copy()
        if k:
            red = f.sub_arr(red, f.matmul(red[:, piv], B))
        return red[:, comp]

    gens = []
    for g in G.generators:
        img = g.arr[comp, :]
        gens.append(Matrix(f, project(img), max_dim=max(len(comp), 1)))
    return MatGroup(f, len(comp), gens, label=label or (G.label and G.label + "|quot"))


@dataclass(frozen=True)
class SplitResult:
    irreducible: bool
    sub: MatGroup | None = None
    quot: MatGroup | None = None
    submodule: Matrix | None = None


def split_constituent(G: MatGroup, seed: int = 0, max_tries: int = 200,
                      max_vectors: int = DEFAULT_MAX_VECTORS) -> SplitResult:
    """Minimal meataxe step: random group-algebra elements, kernel spinning,
    exhaustive spin fallback.

    Deterministic for a fixed seed.  Returns either a proper invariant
    subspace with the induced sub/quotient actions, or an irreducibility
    certificate from the exhaustive spin test.
    """
    f = G.field
    rng = random.Random(seed)

    def random_word() -> np.ndarray:
        length = rng.randint(1, 8)
        m = G.generators[rng.randrange(len(G.generators))].arr
        for _ in range(length - 1):
            m = f.matmul(m, G.generators[rng.randrange(len(G.generators))].arr)
        return m

    def try_split(W: Matrix) -> SplitResult | None:
        if 0 < W.rows < G.dim:
            return SplitResult(
                irreducible=False,
                sub=restrict_action(G, W),
                quot=quotient_action(G, W),
                submodule=W,
            )
        return None

    for _ in range(max_tries):
        terms = rng.randint(1, 3)
        theta = np.zeros((G.dim, G.dim), dtype=np.int64)
        for _ in range(terms):
            c = rng.randrange(1, f.q)
            theta = f.add_arr(theta, f.mul_arr(np.int64(c), random_word()))
        if rng.random() < 0.5:
            c = rng.randrange(1, f.q)
            theta = f.add_arr(theta, c * np.eye(G.dim, dtype=np.int64) % f.q)
        ker = Matrix(f, theta, max_dim=G.dim).left_kernel()
        if not 0 < ker.rows < G.dim:
            continue
        for i in range(ker.rows):
            result = try_split(spin(G, ker.arr[i]))
            if result is not None:
                return result

    # exhaustive fallback: spin one representative of every nonzero orbit
    part = G.orbit_partition(max_vectors)
    for r in part.reps:
        if r == 0:
            continue
        result = try_split(spin(G, G.decode(int(r))))
        if result is not None:
            return result
    return SplitResult(irreducible=True)


# -- O^{p'} and fixed-point covers ------------------------------------------------


def p_residual(G: MatGroup, p: int,
               max_elements: int = DEFAULT_MAX_ELEMENTS) -> MatGroup:
    """Subgroup generated by all elements of p-power order (= O^{p'}(G)),
    with a greedily reduced generating set."""
    els = G.enumerate_elements(max_elements)
    ident = Matrix.identity(G.field, G.dim, max_dim=G.dim)
    p_elements = []
    for g in els:
        if g.is_identity():
            continue
        n = 1
        acc = g
        while not acc.is_identity():
            acc = acc @ g
            n += 1
        # n = order of g; keep p-elements
        while n % p == 0:
            n //= p
        if n == 1:
            p_elements.append(g)
    if not p_elements:
        return MatGroup(G.field, G.dim, (ident,), label=(G.label or "") + "|O^p'")
    gens: list[Matrix] = []
    known = {ident}
    for g in p_elements:
        if g not in known:
            gens.append(g)
            known = set(mulclose(gens, max_elements))
    return MatGroup(G.field, G.dim, gens, label=(G.label or "") + "|O^p'")


def element_of_order_p(G: MatGroup, p: int,
                       max_elements: int = DEFAULT_MAX_ELEMENTS) -> Matrix:
    """Some element of order exactly p, deterministically (generators first,
    then closure order)."""
    for g in G.generators:
        n = g.order()
        if n % p == 0:
            return g ** (n // p)
    for g in G.enumerate_elements(max_elements):
        if g.is_identity():
            continue
        n = g.order()
        if n % p == 0:
            return g ** (n // p)
    raise ValueError(f"group has no element of order {p}")


def conjugacy_class(G: MatGroup, t: Matrix,
                    cap: int = DEFAULT_MAX_ELEMENTS) -> list[Matrix]:
    """Closure of {t} under conjugation by the generators."""
    inv_gens = [(g, g.inverse()) for g in G.generators]
    cls = {t: None}
    frontier = [t]
    while frontier:
        new = []
        for x in frontier:
            for g, gi in inv_gens:
                y = gi @ x @ g
                if y not in cls:
                    cls[y] = None
                    new.append(y)
                    if len(cls) > cap:
                        raise GroupTooLarge(f"conjugacy class exceeds cap {cap}")
        frontier = new
    return list(cls)


def verify_fixed_point_cover(G: MatGroup, p: int, t: Matrix,
                             max_elements: int = DEFAULT_MAX_ELEMENTS,
                             max_vectors: int = DEFAULT_MAX_VECTORS) -> bool:
    """True iff every nonzero vector is fixed by some conjugate of t,
    i.e. lies in ker(t^g - I) for some g."""
    if t.order() != p:
        raise ValueError("t must have order exactly p")
    G._check_space(max_vectors)
    n = G.space_size
    f = G.field
    covered = np.zeros(n, dtype=bool)
    covered[0] = True
    weights = np.array([f.q**i for i in range(G.dim)], dtype=np.int64)
    for u in conjugacy_class(G, t, cap=max_elements):
        ident = Matrix.identity(f, G.dim, max_dim=G.dim)
        fixed = u.sub(ident).left_kernel()
        k = fixed.rows
        if k == 0:
            continue
        count = f.q**k
        coeffs = np.zeros((count, k), dtype=np.int64)
        idx = np.arange(count, dtype=np.int64)
        for i in range(k):
            coeffs[:, i] = idx % f.q
            idx //= f.q
        vecs = f.matmul(coeffs, fixed.arr)
        covered[vecs @ weights] = True
        if covered.all():
            return True
    return bool(covered.all())


# -- helpers used across constructions ---------------------------------------


def scalar_matrices(field: Field, dim: int) -> list[Matrix]:
    """Generators of the scalar group of GL_dim(q) (empty for q = 2)."""
    if field.q == 2:
        return []
    return [Matrix.identity(field, dim, max_dim=dim).scale(field.generator)]


def with_scalars(G: MatGroup) -> MatGroup:
    extra = scalar_matrices(G.field, G.dim)
    if not extra:
        return G
    return MatGroup(G.field, G.dim, G.generators + tuple(extra),
                    label=(G.label or "G") + "+Z")


def blowup_group(G: MatGroup, label=None) -> MatGroup:
    """Blow a GF(p^a) matrix group up to GF(p) in dimension a*d."""
    if G.field.a == 1:
        return G
    gens = [blowup(g, max_dim=max(64, G.dim * G.field.a)) for g in G.generators]
    return MatGroup(GF(G.field.p), G.dim * G.field.a, gens,
                    label=label or (G.label and G.label + "@GF(p)"))
