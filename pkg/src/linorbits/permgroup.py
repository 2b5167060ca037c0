"""Permutation groups on n points: stabilizer-chain orders, orbits on
k-subsets, and the p-concealment predicates.

Permutations are image arrays: p[i] is the image of point i.  Products
apply left-to-right, compose(p, q)[i] = q[p[i]], matching the right-action
convention used for vectors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

from .errors import ParseError, TooManySubsets

DEFAULT_MAX_SUBSETS = 2**24


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Apply p, then q."""
    return q[p]


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def is_identity(p: np.ndarray) -> bool:
    return bool(np.array_equal(p, np.arange(len(p), dtype=p.dtype)))


def perm_from_cycles(n: int, cycles) -> np.ndarray:
    p = np.arange(n, dtype=np.int64)
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:]):
            p[a] = b
        if cyc:
            p[cyc[-1]] = cyc[0]
    return p


def orbit_of_point(perms, start: int) -> np.ndarray:
    """Sorted orbit of one point under the given image arrays."""
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for g in perms:
            for w in frontier:
                img = int(g[w])
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return np.array(sorted(seen), dtype=np.int64)


def orbit_reps_and_sizes(perms, n: int):
    """Partition {0..n-1} into orbits by ascending BFS.

    Returns (reps, sizes) as int64 arrays; reps[i] is the least point of
    orbit i and the reps are strictly increasing.
    """
    visited = np.zeros(n, dtype=bool)
    reps = []
    sizes = []
    start = 0
    while start < n:
        if visited[start]:
            start += 1
            continue
        visited[start] = True
        frontier = np.array([start], dtype=np.int64)
        size = 1
        while frontier.size:
            imgs = np.concatenate([g[frontier] for g in perms]) if perms else frontier[:0]
            imgs = np.unique(imgs)
            new = imgs[~visited[imgs]]
            visited[new] = True
            size += len(new)
            frontier = new
        reps.append(start)
        sizes.append(size)
        start += 1
    return np.array(reps, dtype=np.int64), np.array(sizes, dtype=np.int64)


# -- stabilizer chains -------------------------------------------------------


class _Level:
    __slots__ = ("beta", "gens", "parent", "genidx", "orbit_list", "_tcache", "_cache_ok")

    def __init__(self, beta: int, degree: int, cache_entries: int):
        self.beta = beta
        self.gens: list[np.ndarray] = []
        self.parent = np.full(degree, -1, dtype=np.int64)
        self.genidx = np.full(degree, -1, dtype=np.int64)
        self.orbit_list: list[int] = []
        self._tcache: dict[int, np.ndarray] = {}
        self._cache_ok = cache_entries

    def recompute_orbit(self):
        self.parent.fill(-1)
        self.genidx.fill(-1)
        self._tcache.clear()
        self.parent[self.beta] = self.beta
        self.orbit_list = [self.beta]
        queue = [self.beta]
        qi = 0
        while qi < len(queue):
            w = queue[qi]
            qi += 1
            for gi, g in enumerate(self.gens):
                img = int(g[w])
                if self.parent[img] == -1:
                    self.parent[img] = w
                    self.genidx[img] = gi
                    self.orbit_list.append(img)
                    queue.append(img)

    def in_orbit(self, w: int) -> bool:
        return self.parent[w] != -1

    def transversal(self, w: int) -> np.ndarray:
        """Permutation mapping beta to w, composed along the BFS tree."""
        if w == self.beta:
            return np.arange(len(self.parent), dtype=np.int64)
        cached = self._tcache.get(w)
        if cached is not None:
            return cached
        path = []
        x = w
        while x != self.beta:
            path.append(int(self.genidx[x]))
            x = int(self.parent[x])
        t = self.gens[path[-1]]
        for gi in reversed(path[:-1]):
            t = compose(t, self.gens[gi])
        if len(self._tcache) < self._cache_ok:
            self._tcache[w] = t
        return t


class StabilizerChain:
    """Deterministic Schreier-Sims stabilizer chain.

    base_rule 'ascending' takes the least moved point at each level;
    'largest_orbit' greedily takes the moved point with the largest orbit
    under the level's generators at creation time (ties to the least point).
    """

    def __init__(self, gens, degree: int, base_rule: str = "ascending",
                 cache_limit: int = 3 * 10**7):
        self.degree = degree
        self.base_rule = base_rule
        self._cache_entries = max(1, cache_limit // max(degree, 1))
        self.levels: list[_Level] = []
        gens = [np.asarray(g, dtype=np.int64) for g in gens]
        nontrivial = [g for g in gens if not is_identity(g)]
        if nontrivial:
            self._new_level(nontrivial)
            self._schreier_sims()

    # base-point selection

    def _choose_base(self, gens) -> int:
        if self.base_rule == "ascending":
            idx = np.arange(self.degree, dtype=np.int64)
            moved = self.degree
            for g in gens:
                nz = np.nonzero(g != idx)[0]
                if len(nz):
                    moved = min(moved, int(nz[0]))
            return moved
        # greedy: least point of the largest orbit at creation time
        reps, sizes = orbit_reps_and_sizes(gens, self.degree)
        best_point, best_size = None, 0
        for rep, size in zip(reps, sizes):
            if size > 1 and size > best_size:
                best_point, best_size = int(rep), int(size)
        assert best_point is not None, "no moved point"
        return best_point

    def _new_level(self, gens):
        beta = self._choose_base(gens)
        lvl = _Level(beta, self.degree, self._cache_entries)
        lvl.gens.extend(gens)
        lvl.recompute_orbit()
        self.levels.append(lvl)

    def _sift_from(self, g: np.ndarray, start: int):
        """Reduce g through levels >= start; returns (residue|None, level)."""
        for j in range(start, len(self.levels)):
            lvl = self.levels[j]
            w = int(g[lvl.beta])
            if w == lvl.beta:
                continue
            if not lvl.in_orbit(w):
                return g, j
            g = compose(g, inverse(lvl.transversal(w)))
        if is_identity(g):
            return None, len(self.levels)
        return g, len(self.levels)

    def _schreier_sims(self):
        # Invariant: levels deeper than i are complete.  levels[t].gens holds
        # every strong generator fixing the first t base points, so each
        # level's orbit is the orbit under its full stabilizer.
        i = len(self.levels) - 1
        while i >= 0:
            lvl = self.levels[i]
            restart = False
            for w in list(lvl.orbit_list):
                uw = lvl.transversal(w)
                for g in lvl.gens:
                    w2 = int(g[w])
                    u2 = lvl.transversal(w2)
                    sgen = compose(compose(uw, g), inverse(u2))
                    if is_identity(sgen):
                        continue
                    res, j = self._sift_from(sgen, i + 1)
                    if res is None:
                        continue
                    for t in range(i + 1, min(j + 1, len(self.levels))):
                        self.levels[t].gens.append(res)
                        self.levels[t].recompute_orbit()
                    if j == len(self.levels):
                        self._new_level([res])
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

    @property
    def order(self) -> int:
        out = 1
        for lvl in self.levels:
            out *= len(lvl.orbit_list)
        return out

    @property
    def base(self) -> list[int]:
        return [lvl.beta for lvl in self.levels]

    def contains(self, g) -> bool:
        g = np.asarray(g, dtype=np.int64)
        res, _ = self._sift_from(g, 0)
        return res is None


# -- permutation groups -------------------------------------------------------


@dataclass(frozen=True)
class PermGroup:
    """Permutation group on {0..n-1} given by generator image arrays."""

    degree: int
    generators: tuple[tuple[int, ...], ...]
    label: str | None = None
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.generators:
            raise ValueError("generator list must be nonempty")
        gens = []
        for g in self.generators:
            arr = tuple(int(x) for x in g)
            if sorted(arr) != list(range(self.degree)):
                raise ValueError(f"not a bijection on 0..{self.degree - 1}: {g}")
            gens.append(arr)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def from_cycles(cls, n: int, cycle_gens, label=None) -> "PermGroup":
        gens = tuple(tuple(perm_from_cycles(n, cyc).tolist()) for cyc in cycle_gens)
        return cls(n, gens, label)

    def gen_arrays(self) -> list[np.ndarray]:
        return [np.array(g, dtype=np.int64) for g in self.generators]

    def chain(self) -> StabilizerChain:
        if "chain" not in self._cache:
            self._cache["chain"] = StabilizerChain(self.gen_arrays(), self.degree,
                                                   base_rule="ascending")
        return self._cache["chain"]

    def order(self) -> int:
        return self.chain().order

    def point_orbits(self):
        return orbit_reps_and_sizes(self.gen_arrays(), self.degree)


def perm_order(H: PermGroup) -> int:
    """Exact order via the deterministic stabilizer chain."""
    if H.degree > 64:
        raise ValueError("perm_order supports degree <= 64")
    return H.order()


# -- orbits on k-subsets -----------------------------------------------------


@dataclass(frozen=True)
class SubsetOrbitReport:
    n: int
    p: int
    order: int
    levels: dict[int, dict[int, int]]  # k -> {orbit size: multiplicity}
    concealed: bool
    witness: tuple[tuple[int, ...], int] | None  # (sorted subset, orbit size)

    def level_total(self, k: int) -> int:
        return sum(s * m for s, m in self.levels[k].items())


def _subset_images(subs: np.ndarray, perm: np.ndarray) -> np.ndarray:
    out = np.zeros_like(subs)
    for i, img in enumerate(perm):
        out |= ((subs >> i) & 1) << int(img)
    return out


def _popcounts(values: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(values)
    for i in range(n):
        out += (values >> i) & 1
    return out


def subset_orbits(H: PermGroup, p: int,
                  max_subsets: int = DEFAULT_MAX_SUBSETS) -> SubsetOrbitReport:
    """Orbit sizes on every level of the power set, plus the p-concealment
    verdict: order divisible by p and no subset orbit of size divisible by p.

    Witness subsets are reproducible: the orbit scan runs in ascending order
    of the n-bit characteristic-vector encoding.
    """
    n = H.degree
    gens = H.gen_arrays()
    levels: dict[int, dict[int, int]] = {k: {} for k in range(n + 1)}
    witness = None

    if 2**n <= max_subsets:
        total = 2**n
        images = [_subset_images(np.arange(total, dtype=np.int64), g) for g in gens]
        visited = np.zeros(total, dtype=bool)
        ks = _popcounts(np.arange(total, dtype=np.int64), n)
        for start in range(total):
            if visited[start]:
                continue
            visited[start] = True
            frontier = np.array([start], dtype=np.int64)
            size = 1
            while frontier.size:
                nxt = np.unique(np.concatenate([im[frontier] for im in images]))
                new = nxt[~visited[nxt]]
                visited[new] = True
                size += len(new)
                frontier = new
            k = int(ks[start])
            levels[k][size] = levels[k].get(size, 0) + 1
            if witness is None and size % p == 0:
                pts = tuple(i for i in range(n) if (start >> i) & 1)
                witness = (pts, size)
    else:
        for k in range(n + 1):
            if math.comb(n, k) > max_subsets:
                raise TooManySubsets(
                    f"C({n},{k}) exceeds max_subsets={max_subsets}"
                )
            subs = _k_subsets(n, k)
            index = {int(s): i for i, s in enumerate(subs)}
            img_sub = [np.array([index[int(x)] for x in _subset_images(subs, g)],
                                dtype=np.int64) for g in gens]
            visited = np.zeros(len(subs), dtype=bool)
            for si in range(len(subs)):
                if visited[si]:
                    continue
                visited[si] = True
                frontier = np.array([si], dtype=np.int64)
                size = 1
                while frontier.size:
                    nxt = np.unique(np.concatenate([im[frontier] for im in img_sub]))
                    new = nxt[~visited[nxt]]
                    visited[new] = True
                    size += len(new)
                    frontier = new
                levels[k][size] = levels[k].get(size, 0) + 1
                if witness is None and size % p == 0:
                    s = int(subs[si])
                    pts = tuple(i for i in range(n) if (s >> i) & 1)
                    witness = (pts, size)

    order = H.order()
    concealed = (order % p == 0) and witness is None
    return SubsetOrbitReport(n=n, p=p, order=order, levels=levels,
                             concealed=concealed, witness=witness)


def _k_subsets(n: int, k: int) -> np.ndarray:
    """All k-subsets of {0..n-1} as ascending bitmask encodings."""
    if k == 0:
        return np.array([0], dtype=np.int64)
    out = []
    v = (1 << k) - 1
    top = 1 << n
    while v < top:
        out.append(v)
        # Gosper's hack
        c = v & -v
        r = v + c
        v = (((r ^ v) >> 2) // c) | r
    return np.array(out, dtype=np.int64)


# -- binomial valuations and the A_n/S_n fast path ----------------------------


def binom_p_valuation(n: int, k: int, p: int) -> int:
    """v_p(C(n,k)) as the number of carries when adding k and n-k in base p."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    a, b = k, n - k
    carries = carry = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def an_concealed_predicate(n: int, p: int, alternating: bool = False) -> bool:
    """Closed-form p-concealment test for the symmetric/alternating family:
    true iff n = a*p^s - 1 with s >= 1, 1 <= a <= p-1 and (a, s) != (1, 1).

    With alternating=True the (n, p) = (3, 2) case is excluded, where the
    group order is not divisible by p.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    m = n + 1
    s = 0
    while m % p == 0:
        m //= p
        s += 1
    a = m
    ok = s >= 1 and 1 <= a <= p - 1 and (a, s) != (1, 1)
    if alternating and (n, p) == (3, 2):
        ok = False
    return ok


# -- standard generator constructions -----------------------------------------


def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, ((0,),), label="S1")
    if n == 2:
        return PermGroup(2, ((1, 0),), label="S2")
    return PermGroup.from_cycles(n, [[[0, 1]], [list(range(n))]], label=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        raise ValueError("alternating group needs n >= 3")
    if n == 3:
        return PermGroup.from_cycles(3, [[[0, 1, 2]]], label="A3")
    long_cycle = list(range(n)) if n % 2 == 1 else list(range(1, n))
    return PermGroup.from_cycles(n, [[[0, 1, 2]], [long_cycle]], label=f"A{n}")


# -- stored generator data -----------------------------------------------------


def load_perm_group(name: str) -> PermGroup:
    """Load stored generators from data/perms/<name>.json and assert the
    recorded order via the stabilizer chain."""
    try:
        text = (resources.files("linorbits") / "data" / "perms" / f"{name}.json").read_text()
    except FileNotFoundError as exc:
        raise ParseError(f"no stored permutation data for {name!r}") from exc
    doc = json.loads(text)
    H = PermGroup(doc["degree"], tuple(tuple(g) for g in doc["generators"]),
                  label=doc.get("label", name))
    expected = int(doc["order"])
    got = H.order()
    if got != expected:
        raise ParseError(
            f"stored generators for {name}: order {got} != recorded {expected}"
        )
    return H
