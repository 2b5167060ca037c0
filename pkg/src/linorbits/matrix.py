"""Dense matrices over GF(p^a): elimination, Kronecker products, base-field
blow-ups and unipotent Jordan types.

Row-vector convention throughout: vectors act on the left, v -> v*M, so a
group acts on row vectors by right multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionTooLarge,
    FieldMismatch,
    GroupTooLarge,
    NonUnipotent,
    ShapeMismatch,
)
from .field import Field, GF, check_same_field

#: Default cap on matrix dimensions.  The largest matrices the catalog needs
#: are 22x22 base changes; anything bigger is almost certainly a mistake,
#: but callers may pass max_dim explicitly (the 243-dim tensor-shift check
#: does).
DIM_CAP = 64


class Matrix:
    """Immutable dense matrix of integer-encoded field elements."""

    __slots__ = ("field", "arr", "_hash")

    def __init__(self, field: Field, data, max_dim: int = DIM_CAP):
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ShapeMismatch("matrix data must be two-dimensional")
        if max(arr.shape) > max_dim:
            raise DimensionTooLarge(
                f"dimension {max(arr.shape)} exceeds cap {max_dim}; pass max_dim to override"
            )
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError("entries must be valid field encodings")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "arr", arr)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, field: Field, n: int, max_dim: int = DIM_CAP) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64), max_dim=max_dim)

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def diagonal(cls, field: Field, entries) -> "Matrix":
        return cls(field, np.diag(np.asarray(entries, dtype=np.int64)))

    @classmethod
    def permutation(cls, field: Field, images, max_dim: int = DIM_CAP) -> "Matrix":
        """Permutation matrix sending e_i to e_images[i] (row convention)."""
        n = len(images)
        arr = np.zeros((n, n), dtype=np.int64)
        arr[np.arange(n), np.asarray(images)] = 1
        return cls(field, arr, max_dim=max_dim)

    @classmethod
    def jordan_block(cls, field: Field, size: int, max_dim: int = DIM_CAP) -> "Matrix":
        arr = np.eye(size, dtype=np.int64)
        for i in range(size - 1):
            arr[i, i + 1] = 1
        return cls(field, arr, max_dim=max_dim)

    # -- basic protocol ----------------------------------------------------

    @property
    def rows(self) -> int:
        return self.arr.shape[0]

    @property
    def cols(self) -> int:
        return self.arr.shape[1]

    @property
    def shape(self):
        return self.arr.shape

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.arr.shape == other.arr.shape
            and bool(np.array_equal(self.arr, other.arr))
        )

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.field, self.arr.shape, self.arr.tobytes()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Matrix({self.field}, {self.arr.tolist()})"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        check_same_field(self.field, other.field)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        out = self.field.matmul(self.arr, other.arr)
        return Matrix(self.field, out, max_dim=max(out.shape, default=1))

    __mul__ = __matmul__

    def __pow__(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeMismatch("only square matrices can be powered")
        if e < 0:
            return self.inverse() ** (-e)
        result = Matrix.identity(self.field, self.rows, max_dim=self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.arr.T, max_dim=max(self.arr.shape, default=1))

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.field, self.field.mul_arr(self.arr, np.int64(c)),
                      max_dim=max(self.arr.shape, default=1))

    def add(self, other: "Matrix") -> "Matrix":
        check_same_field(self.field, other.field)
        if self.shape != other.shape:
            raise ShapeMismatch("shape mismatch in addition")
        return Matrix(self.field, self.field.add_arr(self.arr, other.arr),
                      max_dim=max(self.arr.shape, default=1))

    def sub(self, other: "Matrix") -> "Matrix":
        check_same_field(self.field, other.field)
        return Matrix(self.field, self.field.sub_arr(self.arr, other.arr),
                      max_dim=max(self.arr.shape, default=1))

    def is_identity(self) -> bool:
        return self.rows == self.cols and bool(
            np.array_equal(self.arr, np.eye(self.rows, dtype=np.int64))
        )

    def is_zero(self) -> bool:
        return not self.arr.any()

    def is_scalar(self) -> bool:
        if self.rows != self.cols:
            return False
        d = self.arr[0, 0]
        return bool(np.array_equal(self.arr, d * np.eye(self.rows, dtype=np.int64)))

    def to_list(self):
        return [int(x) for x in self.arr.reshape(-1)]

    # -- elimination-based operations ---------------------------------------

    def rank(self) -> int:
        return len(echelon(self.field, self.arr)[1])

    def left_kernel(self) -> "Matrix":
        """Canonical echelon basis of {v : v M = 0} (row vectors)."""
        E, piv, R = echelon(self.field, self.arr, record=True)
        zero_rows = [i for i in range(self.rows) if not E[i].any()]
        if not zero_rows:
            return Matrix(self.field, np.zeros((0, self.rows), dtype=np.int64))
        K = R[zero_rows]
        KE, _, _ = echelon(self.field, K)
        return Matrix(self.field, KE[: len(zero_rows)],
                      max_dim=max(KE.shape, default=1))

    def row_space(self) -> "Matrix":
        """Canonical reduced-echelon basis of the row space."""
        E, piv, _ = echelon(self.field, self.arr)
        return Matrix(self.field, E[: len(piv)], max_dim=max(self.arr.shape, default=1))

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeMismatch("only square matrices are invertible")
        E, piv, R = echelon(self.field, self.arr, record=True)
        if len(piv) != self.rows:
            raise ValueError("matrix is singular")
        return Matrix(self.field, R, max_dim=self.rows)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def order(self, cap: int = 10**6) -> int:
        """Multiplicative order, by iterated multiplication."""
        acc = self
        n = 1
        ident = Matrix.identity(self.field, self.rows, max_dim=self.rows)
        while not acc.is_identity():
            acc = acc @ self
            n += 1
            if n > cap:
                raise GroupTooLarge(f"element order exceeds cap {cap}")
        return n


def echelon(field: Field, A: np.ndarray, record: bool = False):
    """Reduced row echelon form.

    Returns (E, pivots, R) with R the row-operation recorder (R @ A = E)
    when record is set, else R is None.  Pivot search scans rows top-down,
    columns left-right, so the output is deterministic.
    """
    A = A.astype(np.int64).copy()
    m, n = A.shape
    R = np.eye(m, dtype=np.int64) if record else None
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, col])[0]
        if len(nz) == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
            if record:
                R[[r, pr]] = R[[pr, r]]
        inv = field.inv(int(A[r, col]))
        if inv != 1:
            A[r] = field.mul_arr(A[r], np.int64(inv))
            if record:
                R[r] = field.mul_arr(R[r], np.int64(inv))
        others = np.nonzero(A[:, col])[0]
        others = others[others != r]
        if len(others):
            f = A[others, col]
            A[others] = field.sub_arr(A[others], field.mul_arr(f[:, None], A[r][None, :]))
            if record:
                R[others] = field.sub_arr(R[others], field.mul_arr(f[:, None], R[r][None, :]))
        pivots.append(col)
        r += 1
    return A, pivots, R


def mat_rank(M: Matrix) -> int:
    return M.rank()


def mat_kernel(M: Matrix) -> Matrix:
    return M.left_kernel()


def kronecker(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product in the i-major basis u_i (x) w_j, so that
    (u (x) w)(A (x) B) = uA (x) wB."""
    check_same_field(A.field, B.field)
    f = A.field
    ra, ca = A.shape
    rb, cb = B.shape
    out = f.mul_arr(A.arr[:, None, :, None], B.arr[None, :, None, :])
    out = out.reshape(ra * rb, ca * cb)
    return Matrix(f, out, max_dim=max(out.shape, default=1))


def vec_mat(field: Field, v: np.ndarray, M: Matrix) -> np.ndarray:
    """Row vector times matrix."""
    return field.matmul(np.asarray(v, dtype=np.int64)[None, :], M.arr)[0]


# -- blow-ups to the prime field ------------------------------------------


def _regular_rep_rows(field: Field, e: int) -> np.ndarray:
    """a x a matrix over GF(p) of multiplication by e on the power basis."""
    a = field.a
    out = np.zeros((a, a), dtype=np.int64)
    for j in range(a):
        prod = field.mul(field.p**j, e)  # x^j * e
        out[j] = field.digits(prod)
    return out


def _frobenius_block(field: Field) -> np.ndarray:
    a = field.a
    out = np.zeros((a, a), dtype=np.int64)
    for j in range(a):
        out[j] = field.digits(field.frobenius(field.p**j))
    return out


def blowup(M: Matrix, max_dim: int = DIM_CAP) -> Matrix:
    """Replace every GF(p^a) entry by its a x a regular representation,
    giving the same linear map on GF(p)^(a*d) in the flattened basis."""
    f = M.field
    if f.a == 1:
        return M
    a = f.a
    base = GF(f.p)
    out = np.zeros((M.rows * a, M.cols * a), dtype=np.int64)
    for i in range(M.rows):
        for k in range(M.cols):
            e = int(M.arr[i, k])
            if e:
                out[a * i : a * i + a, a * k : a * k + a] = _regular_rep_rows(f, e)
    return Matrix(base, out, max_dim=max(max_dim, out.shape[0]))


def blowup_semilinear(M: Matrix, frob_power: int = 1, max_dim: int = DIM_CAP) -> Matrix:
    """GF(p)-matrix of the semilinear map v -> frobenius^f(v) * M."""
    f = M.field
    if f.a == 1:
        return M
    a = f.a
    base = GF(f.p)
    phi = _frobenius_block(f)
    blk = np.zeros((M.rows * a, M.rows * a), dtype=np.int64)
    for i in range(M.rows):
        blk[a * i : a * i + a, a * i : a * i + a] = phi
    lin = blowup(M, max_dim=max_dim)
    acc = np.eye(M.rows * a, dtype=np.int64)
    for _ in range(frob_power % a):
        acc = (acc @ blk) % f.p
    out = (acc @ lin.arr) % f.p
    return Matrix(base, out, max_dim=max(max_dim, out.shape[0]))


# -- relative extensions ----------------------------------------------------


class RelativeExtension:
    """GF(p^(2a)) viewed as a 2-dimensional space over GF(p^a).

    Provides the 2x2 subfield matrices of multiplication maps and of the
    relative Frobenius x -> x^(p^a), which is GF(p^a)-linear.
    """

    def __init__(self, small: Field, big: Field):
        if big.p != small.p or big.a != 2 * small.a:
            raise FieldMismatch("big field must be a quadratic extension of small")
        self.small = small
        self.big = big
        p, a = small.p, small.a
        # least root of the small field's polynomial inside the big field
        lam = None
        for x in big.elements():
            acc = 0
            xp = 1
            for c in small.poly:
                acc = big.add(acc, big.mul(c % p, xp))
                xp = big.mul(xp, x)
            if acc == 0:
                lam = x
                break
        assert lam is not None
        self.lam = lam
        emb = {}
        for e in small.elements():
            acc = 0
            lp = 1
            for c in small.digits(e):
                acc = big.add(acc, big.mul(c, lp))
                lp = big.mul(lp, lam)
            emb[e] = acc
        self.embed = emb
        self.unembed = {v: k for k, v in emb.items()}
        sub = set(emb.values())
        theta = next(x for x in big.elements() if x not in sub)
        self.theta = theta
        # GF(p)-coordinates of the basis lam^i * theta^k
        rows = []
        for k in (0, 1):
            tk = theta if k else 1
            for i in range(a):
                elem = big.mul(big.pow(lam, i), tk)
                rows.append(big.digits(elem))
        Mb = np.array(rows, dtype=np.int64)
        E, piv, R = echelon(GF(p), Mb, record=True)
        assert len(piv) == 2 * a, "basis extraction failed"
        # solve coords * Mb = digits: coords = digits * Mb^{-1}
        self._Mb_inv = Matrix(GF(p), Mb).inverse().arr

    def decompose(self, x: int) -> tuple[int, int]:
        """x = c0 + c1*theta with c0, c1 in the small field."""
        p, a = self.small.p, self.small.a
        digits = np.array(self.big.digits(x), dtype=np.int64)
        coords = (digits[None, :] @ self._Mb_inv) % p
        c0 = self.small.from_digits(coords[0, :a])
        c1 = self.small.from_digits(coords[0, a:])
        return c0, c1

    def mult_matrix(self, xi: int) -> Matrix:
        """2x2 small-field matrix of y -> y*xi on the basis {1, theta}."""
        r0 = self.decompose(xi)
        r1 = self.decompose(self.big.mul(self.theta, xi))
        return Matrix(self.small, [list(r0), list(r1)])

    def frobenius_matrix(self) -> Matrix:
        """2x2 small-field matrix of x -> x^(p^a)."""
        r1 = self.decompose(self.big.frobenius(self.theta, self.small.a))
        return Matrix(self.small, [[1, 0], list(r1)])


# -- unipotent Jordan types --------------------------------------------------


@dataclass(frozen=True)
class JordanType:
    """Multiset of Jordan block sizes, stored descending."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, reverse=True)))
        if any(b < 1 for b in self.blocks):
            raise ValueError("block sizes must be >= 1")

    @property
    def dimension(self) -> int:
        return sum(self.blocks)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for b in self.blocks:
            out[b] = out.get(b, 0) + 1
        return out

    def __str__(self):
        mults = self.multiplicities()
        return "[" + ", ".join(
            f"{s}^{m}" if m > 1 else f"{s}" for s, m in sorted(mults.items(), reverse=True)
        ) + "]"


def jordan_type_unipotent(g: Matrix) -> JordanType:
    """Jordan type of a unipotent matrix from the ranks of (g-I)^k."""
    if g.rows != g.cols:
        raise ShapeMismatch("need a square matrix")
    d = g.rows
    f = g.field
    N = g.sub(Matrix.identity(f, d, max_dim=d))
    ranks = [d]
    power = N
    for _ in range(d):
        r = power.rank()
        ranks.append(r)
        if r == 0:
            break
        power = power @ N
    if ranks[-1] != 0:
        raise NonUnipotent("(g - I)^dim is nonzero")
    while len(ranks) < d + 2:
        ranks.append(0)
    blocks = []
    for s in range(1, d + 1):
        mult = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        blocks.extend([s] * mult)
    jt = JordanType(tuple(blocks))
    assert jt.dimension == d
    return jt
