"""Group constructions: one-dimensional semilinear groups, wreath products,
tensor-decomposition groups, deleted permutation modules, and extraspecial
groups with outer actions lifted by solving intertwining systems.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import NoLift, ShapeMismatch
from .field import Field, GF
from .matgroup import (
    MatGroup,
    mulclose,
    quotient_action,
    restrict_action,
    scalar_matrices,
)
from .matrix import (
    Matrix,
    RelativeExtension,
    blowup,
    blowup_semilinear,
    echelon,
    kronecker,
)
from .permgroup import PermGroup


def perm_matrix_group(H: PermGroup, field: Field, label=None) -> MatGroup:
    gens = [Matrix.permutation(field, g) for g in H.gen_arrays()]
    return MatGroup(field, H.degree, gens, label=label or H.label)


# -- one-dimensional semilinear groups ----------------------------------------


@dataclass(frozen=True)
class GammaL1Spec:
    """Subgroup of the semilinear group of GF(p^d) generated by a power of
    the multiplication map and a power of the Frobenius, viewed over GF(p)."""

    p: int
    d: int
    s: int
    j: int
    include_full_frobenius: bool = False

    def __post_init__(self):
        if self.d % self.s != 0:
            raise ValueError("s must divide d")
        k = self.d // self.s
        while k % self.p == 0:
            k //= self.p
        if k != 1 or self.d == self.s:
            raise ValueError("need d = p^k * s with k >= 1")
        if (self.p**self.s - 1) % self.j != 0:
            raise ValueError("j must divide p^s - 1")


def gamma_l1(spec: GammaL1Spec) -> MatGroup:
    """The group <multiplication by w^((p^s-1)/j), frobenius^s> on GF(p^d),
    blown up to GL_d(p)."""
    p, d, s, j = spec.p, spec.d, spec.s, spec.j
    big = GF(p, d)
    c = (p**s - 1) // j
    mult = Matrix(big, [[big.pow(big.generator, c)]])
    gens = [blowup(mult), blowup_semilinear(Matrix(big, [[1]]), s)]
    if spec.include_full_frobenius:
        gens.append(blowup_semilinear(Matrix(big, [[1]]), 1))
    label = f"GammaL1(p={p},d={d},s={s},j={j})"
    return MatGroup(GF(p), d, gens, label=label)


def gamma_l1_expected_sizes(spec: GammaL1Spec) -> dict[int, int]:
    """Closed-form nonzero orbit profile: (p^s-1)/j orbits of length
    j*(p^d-1)/(p^s-1), plus the zero singleton."""
    p, d, s, j = spec.p, spec.d, spec.s, spec.j
    count = (p**s - 1) // j
    size = j * (p**d - 1) // (p**s - 1)
    out = {1: 1}
    out[size] = out.get(size, 0) + count
    return out


# -- wreath products -----------------------------------------------------------


@dataclass(frozen=True)
class WreathSpec:
    inner: MatGroup
    top: PermGroup


def wreath(spec: WreathSpec, cap: int = 64, check: bool = True) -> MatGroup:
    """Full wreath product acting on V_1^n: inner generators in the first
    block, top generators permuting blocks.

    When the inner group is transitive on nonzero vectors (and small enough
    to check), the orbit of a weight-one vector is asserted to have size
    |V_1^#| * (top point-orbit length), the k = 1 case of the product
    formula.
    """
    inner, top = spec.inner, spec.top
    f = inner.field
    d1, n = inner.dim, top.degree
    d = d1 * n
    if d > cap:
        raise ShapeMismatch(f"wreath dimension {d} exceeds cap {cap}")
    gens = []
    for g in inner.generators:
        arr = np.eye(d, dtype=np.int64)
        arr[:d1, :d1] = g.arr
        gens.append(Matrix(f, arr, max_dim=d))
    for sigma in top.gen_arrays():
        arr = np.zeros((d, d), dtype=np.int64)
        for i in range(n):
            tgt = int(sigma[i])
            arr[i * d1 : (i + 1) * d1, tgt * d1 : (tgt + 1) * d1] = np.eye(
                d1, dtype=np.int64
            )
        gens.append(Matrix(f, arr, max_dim=d))
    name = f"({inner.label or 'G1'}) wr ({top.label or 'H'})"
    G = MatGroup(f, d, gens, label=name)
    if check and inner.space_size <= 4096:
        inner_sizes = inner.orbit_partition().nonzero_sizes()
        if len(set(inner_sizes)) == 1 and inner_sizes[0] == inner.space_size - 1:
            from .permgroup import orbit_of_point

            v = np.zeros(d, dtype=np.int64)
            v[:d1] = inner.decode(1)
            delta = len(orbit_of_point(top.gen_arrays(), 0))
            got = len(G.orbit_of_vector(v))
            expected = (inner.space_size - 1) * delta
            assert got == expected, (
                f"wreath weight-1 orbit {got} != |V1#|*delta = {expected}"
            )
    return G


# -- tensor products -------------------------------------------------------------


def tensor_product_group(A: MatGroup, B: MatGroup, with_swap: bool = False,
                         extra_pairs=(), label=None) -> MatGroup:
    """Group on U (x) W generated by {a (x) I}, {I (x) b}, optional factor
    swap (square case only) and any extra (X, Y) -> X (x) Y pairs."""
    if A.field != B.field:
        raise ShapeMismatch("tensor factors must share a field")
    f = A.field
    dU, dW = A.dim, B.dim
    IU = Matrix.identity(f, dU, max_dim=dU)
    IW = Matrix.identity(f, dW, max_dim=dW)
    gens = [kronecker(a, IW) for a in A.generators]
    gens += [kronecker(IU, b) for b in B.generators]
    for X, Y in extra_pairs:
        gens.append(kronecker(X, Y))
    if with_swap:
        if dU != dW:
            raise ShapeMismatch("swap needs equal tensor factor dimensions")
        arr = np.zeros((dU * dW, dU * dW), dtype=np.int64)
        for i in range(dU):
            for jj in range(dW):
                arr[i * dW + jj, jj * dU + i] = 1
        gens.append(Matrix(f, arr, max_dim=dU * dW))
    return MatGroup(f, dU * dW, gens, label=label)


@dataclass(frozen=True)
class TensorWeightResult:
    k: int
    U0: Matrix  # echelon basis of the left tensor-factor support
    W0: Matrix  # echelon basis of the right tensor-factor support


def tensor_weight(field: Field, v, dimU: int, dimW: int) -> TensorWeightResult:
    """Weight of a vector of U (x) W: the rank of its dimU x dimW coefficient
    matrix.  The supports are the column and row spaces, each of dimension
    equal to the weight."""
    v = np.asarray(v, dtype=np.int64)
    if v.size != dimU * dimW:
        raise ShapeMismatch("vector length must be dimU*dimW")
    C = Matrix(field, v.reshape(dimU, dimW), max_dim=max(dimU, dimW, 1))
    U0 = C.transpose().row_space()
    W0 = C.row_space()
    k = W0.rows
    assert U0.rows == k
    return TensorWeightResult(k=k, U0=U0, W0=W0)


def c4_pair_group(q: int) -> MatGroup:
    """The reducible 2-exceptional tensor-pair group in dimension 4 over
    GF(q), q even: field multiplications of order q+1 on both factors of
    GF(q^2) (x) GF(q^2), the simultaneous field-automorphism involution,
    and the scalars."""
    if q < 2 or q & (q - 1):
        raise ValueError("q must be a power of 2")
    e = q.bit_length() - 1
    small = GF(2, e)
    big = GF(2, 2 * e)
    rel = RelativeExtension(small, big)
    omega = big.pow(big.generator, q - 1)  # order q+1
    A = rel.mult_matrix(omega)
    T = rel.frobenius_matrix()
    I2 = Matrix.identity(small, 2)
    gens = [kronecker(A, I2), kronecker(I2, A), kronecker(T, T)]
    gens += scalar_matrices(small, 4)
    return MatGroup(small, 4, gens, label=f"C4pair(q={q})")


def c4_pair_expected_sizes(q: int) -> dict[int, int]:
    out = {1: 1, q**2 - 1: 2}
    big = (q**2 - 1) * (q + 1)
    if q > 2:
        out[big] = q - 1
    else:
        out[big] = out.get(big, 0) + (q - 1)
    return out


# -- extraspecial and symplectic-type groups -------------------------------------


@dataclass(frozen=True)
class ExtraspecialSpec:
    r: int
    m: int
    variant: str  # odd_exponent_r | sym_4circ | plus | minus
    q: int

    def __post_init__(self):
        if self.variant not in ("odd_exponent_r", "sym_4circ", "plus", "minus"):
            raise ValueError(f"unknown variant {self.variant}")
        if self.variant == "odd_exponent_r":
            if self.r == 2:
                raise ValueError("odd_exponent_r needs an odd prime r")
            if (self.q - 1) % self.r != 0:
                raise ValueError("need q = 1 mod r")
        else:
            if self.r != 2:
                raise ValueError("2-group variants need r = 2")
            if self.variant == "sym_4circ" and (self.q - 1) % 4 != 0:
                raise ValueError("need q = 1 mod 4")
            if self.q % 2 == 0:
                raise ValueError("need q odd")

    @property
    def expected_order(self) -> int:
        base = self.r ** (1 + 2 * self.m)
        return base * 2 if self.variant == "sym_4circ" else base


def _kron_at(field: Field, mats: list[Matrix]) -> Matrix:
    out = mats[0]
    for M in mats[1:]:
        out = kronecker(out, M)
    return out


def extraspecial(spec: ExtraspecialSpec) -> MatGroup:
    """The r-group of symplectic type acting irreducibly in dimension r^m.

    Odd r: tensor factors <shift, diag(1, z, ..., z^(r-1))> with z of order
    r.  r = 2: tensor factors from the dihedral pair, with exactly one
    quaternion factor for minus type and i*I adjoined for symplectic type.
    The group order is verified by closure enumeration.
    """
    f = GF(*_field_params(spec.q))
    r, m = spec.r, spec.m
    gens: list[Matrix] = []
    if spec.variant == "odd_exponent_r":
        zeta = f.pow(f.generator, (f.q - 1) // r)
        X = Matrix.permutation(f, [(i + 1) % r for i in range(r)])
        Z = Matrix.diagonal(f, [f.pow(zeta, i) for i in range(r)])
        factors = [(X, Z)] * m
    else:
        neg1 = f.neg(1)
        D = (Matrix(f, [[0, 1], [1, 0]]), Matrix(f, [[1, 0], [0, neg1]]))
        Q = (Matrix(f, [[0, 1], [neg1, 0]]), Matrix(f, [[1, 1], [1, neg1]]))
        factors = [D] * m
        if spec.variant == "minus":
            factors[-1] = Q
    dim = r**m
    ident = Matrix.identity(f, r)
    for pos, (X, Z) in enumerate(factors):
        row = [ident] * m
        row[pos] = X
        gens.append(_kron_at(f, row))
        row[pos] = Z
        gens.append(_kron_at(f, row))
    if spec.variant == "sym_4circ":
        i4 = f.pow(f.generator, (f.q - 1) // 4)
        gens.append(Matrix.identity(f, dim, max_dim=dim).scale(i4))
    R = MatGroup(f, dim, gens, label=f"{r}^(1+{2*m}) {spec.variant}")
    got = len(mulclose(R.generators, cap=4 * spec.expected_order))
    if got != spec.expected_order:
        raise AssertionError(
            f"extraspecial order {got} != expected {spec.expected_order}"
        )
    return R


def _field_params(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            a = 0
            qq = q
            while qq % p == 0:
                qq //= p
                a += 1
            if qq != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, a
    raise ValueError(f"{q} is not a prime power")


# -- lifting outer actions ---------------------------------------------------------


def lift_outer(R: MatGroup, alpha_images: list[Matrix],
               scalars_cap: int = 2**13, check_membership: bool = True) -> Matrix:
    """Solve g * X_i = alpha(X_i) * g over the field for an invertible g.

    By Schur's lemma any nonzero solution is invertible (up to the choice of
    a scalar) when R acts irreducibly, so the first invertible kernel vector
    is returned; NoLift is raised when only singular solutions exist.
    """
    f = R.field
    d = R.dim
    if len(alpha_images) != len(R.generators):
        raise ValueError("one alpha image per generator")
    if check_membership and R.space_size <= 2**16:
        members = set(mulclose(
            list(R.generators) + scalar_matrices(f, d), cap=scalars_cap))
        for Y in alpha_images:
            if Y not in members:
                raise ValueError("alpha image is not in R * scalars")
    blocks = []
    for X, Y in zip(R.generators, alpha_images):
        E = np.zeros((d, d, d, d), dtype=np.int64)
        for u in range(d):
            E[u, :, u, :] = X.arr
        T2 = np.zeros((d, d, d, d), dtype=np.int64)
        for v in range(d):
            T2[:, v, :, v] = Y.arr.T
        blocks.append(f.sub_arr(E, T2).reshape(d * d, d * d))
    system = Matrix(f, np.concatenate(blocks, axis=1), max_dim=d * d * len(blocks))
    ker = system.left_kernel()
    for i in range(ker.rows):
        g = Matrix(f, ker.arr[i].reshape(d, d), max_dim=d)
        if g.is_invertible():
            return g
    # small kernels over small fields: scan nonzero combinations
    if 0 < ker.rows <= 2 and f.q <= 9:
        for coeffs in _nonzero_tuples(f.q, ker.rows):
            vec = np.zeros(d * d, dtype=np.int64)
            for c, row in zip(coeffs, ker.arr):
                vec = f.add_arr(vec, f.mul_arr(np.int64(c), row))
            g = Matrix(f, vec.reshape(d, d), max_dim=d)
            if g.is_invertible():
                return g
    raise NoLift("no invertible intertwiner for the requested action")


def _nonzero_tuples(q, k):
    if k == 1:
        for c in range(1, q):
            yield (c,)
    else:
        for c0 in range(q):
            for rest in _nonzero_tuples(q, k - 1):
                if c0 or any(rest):
                    yield (c0,) + rest


# -- quadratic form machinery on R/Z for r = 2 --------------------------------------


class ExtraspecialFrame:
    """The F_2 symplectic/quadratic geometry on R/Z(R) for an extraspecial
    2-group given by its standard generators, plus canonical preimages."""

    def __init__(self, R: MatGroup):
        self.R = R
        f = R.field
        self.nbits = len(R.generators)
        self.minus_ident = Matrix.identity(f, R.dim, max_dim=R.dim).scale(f.neg(1))
        n = self.nbits
        B = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for jj in range(i + 1, n):
                gi, gj = R.generators[i], R.generators[jj]
                if gi @ gj != gj @ gi:
                    B[i, jj] = B[jj, i] = 1
        self.B = B

    def preimage(self, bits) -> Matrix:
        """Canonical preimage: ascending product of generators on set bits."""
        out = Matrix.identity(self.R.field, self.R.dim, max_dim=self.R.dim)
        for i, b in enumerate(bits):
            if b:
                out = out @ self.R.generators[i]
        return out

    def quad(self, bits) -> int:
        w2 = self.preimage(bits) ** 2
        if w2.is_identity():
            return 0
        if w2 == self.minus_ident:
            return 1
        raise AssertionError("square of preimage is not central +-I")

    def vectors(self):
        n = self.nbits
        for x in range(1, 2**n):
            yield np.array([(x >> i) & 1 for i in range(n)], dtype=np.int64)

    def singular_vectors(self):
        return [v for v in self.vectors() if self.quad(v) == 0]

    def nonsingular_vectors(self):
        return [v for v in self.vectors() if self.quad(v) == 1]

    def transvections(self) -> list[np.ndarray]:
        """x -> x + B(x,v)v for nonsingular v; these preserve the form and
        generate the orthogonal group."""
        out = []
        for v in self.nonsingular_vectors():
            T = (np.eye(self.nbits, dtype=np.int64) + np.outer(self.B @ v, v)) % 2
            out.append(T)
        return out

    def orthogonal_stabilizer_of_singular(self):
        """Generators (as F_2 matrices) of the stabilizer of the least
        singular vector in the full orthogonal group, via Schreier
        generators along the orbit of that vector."""
        F2 = GF(2)
        n = self.nbits
        gens = [Matrix(F2, T) for T in self.transvections()]
        singular = self.singular_vectors()
        v0 = singular[0]
        key0 = tuple(int(x) for x in v0)
        ident = Matrix.identity(F2, n)
        transversal = {key0: ident}
        queue = [v0]
        while queue:
            w = queue.pop(0)
            uw = transversal[tuple(int(x) for x in w)]
            for g in gens:
                img = (w @ g.arr) % 2
                k = tuple(int(x) for x in img)
                if k not in transversal:
                    transversal[k] = uw @ g
                    queue.append(img)
        orbit_len = len(transversal)
        schreier: dict[Matrix, None] = {}
        for k, uw in transversal.items():
            w = np.array(k, dtype=np.int64)
            for g in gens:
                img = tuple(int(x) for x in (w @ g.arr) % 2)
                s = uw @ g @ transversal[img].inverse()
                if not s.is_identity():
                    schreier[s] = None
        stab_gens, stab_elements = _greedy_generators(list(schreier))
        return stab_gens, stab_elements, orbit_len, v0

    def alpha_images(self, auto: np.ndarray) -> list[Matrix]:
        """Canonical preimages of the images of the generators under an
        F_2 automorphism of R/Z (rows of auto are the images)."""
        return [self.preimage(auto[i] % 2) for i in range(self.nbits)]


def _greedy_generators(candidates: list[Matrix]):
    """Deterministic small generating set for the group generated by the
    candidate list, together with the full element list."""
    candidates = sorted(candidates, key=lambda M: M.arr.tobytes())
    gens: list[Matrix] = []
    closure: set[Matrix] = set()
    elements: list[Matrix] = []
    for g in candidates:
        if closure and g in closure:
            continue
        gens.append(g)
        elements = mulclose(gens, cap=10**6)
        closure = set(elements)
    return gens, elements


def dickson_invariant(g: Matrix) -> int:
    """Dickson invariant of an orthogonal matrix over F_2:
    rank(g - I) mod 2."""
    ident = Matrix.identity(g.field, g.rows, max_dim=g.rows)
    return g.sub(ident).rank() % 2


def dickson_kernel_generators(elements: list[Matrix]):
    """Generators of the index-2 subgroup of Dickson invariant 0."""
    kernel = [g for g in elements if dickson_invariant(g) == 0]
    gens, elems = _greedy_generators(kernel)
    if len(elems) != len(kernel):
        raise AssertionError("Dickson-0 subset is not closed")
    return gens, elems


# -- deleted permutation modules -------------------------------------------------


def deleted_permutation_module(H: PermGroup, p: int, label=None) -> MatGroup:
    """S/(S cap T) for the coordinate-permutation action on GF(p)^c, built
    structurally: restrict to the zero-sum subspace, then quotient by the
    all-ones line when p divides c."""
    f = GF(p)
    c = H.degree
    full = perm_matrix_group(H, f)
    B = np.zeros((c - 1, c), dtype=np.int64)
    for i in range(c - 1):
        B[i, i] = 1
        B[i, i + 1] = f.neg(1)
    name = label or f"deleted({H.label or 'H'},p={p})"
    sub = restrict_action(full, Matrix(f, B), label=name)
    if c % p != 0:
        return MatGroup(f, sub.dim, sub.generators, label=name)
    # express the all-ones vector in the echelon basis of S and quotient
    E, piv, _ = echelon(f, B)
    ones = np.ones(c, dtype=np.int64)
    coeff = ones[piv]
    assert np.array_equal(f.matmul(coeff[None, :], E[: len(piv)])[0], ones)
    quot = quotient_action(sub, Matrix(f, coeff[None, :]), label=name)
    return MatGroup(f, quot.dim, quot.generators, label=name)


# -- specific building blocks used by the catalog ---------------------------------


def singer_element(p: int, d: int) -> Matrix:
    """Multiplication by a generator of GF(p^d)^* as a d x d matrix over
    GF(p): a cyclic (Singer) element of order p^d - 1."""
    big = GF(p, d)
    return blowup(Matrix(big, [[big.generator]]))


def frobenius_element(p: int, d: int, power: int = 1) -> Matrix:
    """The Frobenius x -> x^(p^power) of GF(p^d) as a d x d matrix over GF(p)."""
    big = GF(p, d)
    return blowup_semilinear(Matrix(big, [[1]]), power)


def sl2_order120_pair(seed: int = 0) -> tuple[Matrix, Matrix]:
    """A generating pair for a copy of the 120-element subgroup of SL_2(9)
    containing -I, found by seeded closure search over order-5/order-4
    element pairs."""
    F9 = GF(3, 2)
    w = F9.generator
    t1 = Matrix(F9, [[1, 1], [0, 1]])
    t2 = Matrix(F9, [[1, 0], [w, 1]])
    t3 = Matrix(F9, [[1, 0], [1, 1]])
    sl29 = mulclose([t1, t2, t3], cap=1000)
    assert len(sl29) == 720, f"SL2(9) enumeration gave {len(sl29)}"
    by_order: dict[int, list[Matrix]] = {4: [], 5: []}
    for g in sl29:
        try:
            n = g.order(cap=100)
        except Exception:
            continue
        if n in by_order:
            by_order[n].append(g)
    neg = Matrix.identity(F9, 2).scale(F9.neg(1))
    rng = random.Random(seed)
    fives = by_order[5]
    fours = by_order[4]
    for _ in range(10000):
        a = fives[rng.randrange(len(fives))]
        b = fours[rng.randrange(len(fours))]
        try:
            H = mulclose([a, b], cap=240)
        except Exception:
            continue
        if len(H) == 120 and neg in H:
            return a, b
    raise AssertionError("no order-120 subgroup found")
