"""Exact arithmetic in GF(p^a) with integer-encoded elements.

An element is the integer whose base-p digits are its coefficients on the
power basis 1, x, ..., x^(a-1) of GF(p)[x]/(poly).  The reduction polynomial
is deterministic: the monic irreducible of degree a whose non-leading
coefficient vector, read as a base-p integer, is least.  That pins the
encoding down across runs (and matches the usual tables: x^2+1 for GF(9),
x^3+x+1 for GF(8)).
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import DivisionByZero, FieldMismatch

_ADD_TABLE_MAX_Q = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (inputs stay below 2^32 here)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- polynomial helpers over GF(p); a polynomial is a tuple of ascending
#    coefficients with no trailing zeros (except the zero polynomial = ()).


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul(f, g, p):
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _poly_trim(out)


def _poly_mod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p)
    while len(f) - 1 >= dg and f:
        if f[-1] == 0:
            f.pop()
            continue
        coef = (f[-1] * inv_lead) % p
        shift = len(f) - 1 - dg
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * b) % p
        f = list(_poly_trim(f))
    return _poly_trim(f)


def _poly_is_irreducible(f, p):
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in range(p**d):
            g = _digits(low, p, d) + (1,)
            if not _poly_mod(f, g, p):
                return False
    return True


def _digits(n, p, width):
    out = []
    for _ in range(width):
        out.append(n % p)
        n //= p
    return tuple(out)


def least_irreducible_poly(p: int, a: int) -> tuple[int, ...]:
    """Least monic irreducible of degree a, ordered by the base-p integer
    encoding of the non-leading coefficients."""
    if a == 1:
        return (0, 1)
    for low in range(p**a):
        f = _digits(low, p, a) + (1,)
        if _poly_is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """GF(p^a) with cached exp/log (and small addition) tables.

    Instances are immutable; all methods are safe to call concurrently.
    """

    def __init__(self, p: int, a: int = 1, poly: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if a < 1:
            raise ValueError("extension degree must be >= 1")
        if poly is None:
            poly = least_irreducible_poly(p, a)
        else:
            poly = tuple(int(c) % p for c in poly)
            if len(poly) != a + 1 or poly[-1] != 1:
                raise ValueError("poly must be monic of degree a, ascending coefficients")
            if not _poly_is_irreducible(poly, p):
                raise ValueError(f"poly {poly} is reducible over GF({p})")
        self.p = p
        self.a = a
        self.q = p**a
        self.poly = poly
        self._pow_p = np.array([p**i for i in range(a)], dtype=np.int64)
        self._build_tables()

    # -- construction of exp/log/frobenius tables ------------------------

    def _mul_slow(self, x: int, y: int) -> int:
        f = _poly_mul(_digits(x, self.p, self.a), _digits(y, self.p, self.a), self.p)
        f = _poly_mod(f, self.poly, self.p)
        return sum(c * self.p**i for i, c in enumerate(f))

    def _build_tables(self):
        p, a, q = self.p, self.a, self.q
        # multiplicative generator: least element of order q-1
        fac = factorize(q - 1) if q > 2 else {}
        gen = 1
        for cand in range(2, q):
            if all(self._pow_slow(cand, (q - 1) // f) != 1 for f in fac):
                gen = cand
                break
        self.generator = gen if q > 2 else 1
        exp = np.zeros(2 * (q - 1) if q > 2 else 2, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = self._mul_slow(v, self.generator)
        if q > 2:
            exp[q - 1 :] = exp[: q - 1]
        else:
            exp[:] = 1
            log[1] = 0
        self._exp = exp
        self._log = log
        frob = np.zeros(q, dtype=np.int64)
        for x in range(q):
            frob[x] = self._pow_slow(x, p)
        self._frob = frob
        if a > 1 and q <= _ADD_TABLE_MAX_Q:
            xs = np.arange(q, dtype=np.int64)
            self._add_table = self._add_digitwise(xs[:, None], xs[None, :])
        else:
            self._add_table = None
        neg = np.zeros(q, dtype=np.int64)
        for x in range(q):
            neg[x] = self._neg_scalar(x)
        self._neg = neg

    def _pow_slow(self, x, e):
        r = 1
        b = x
        while e:
            if e & 1:
                r = self._mul_slow(r, b)
            b = self._mul_slow(b, b)
            e >>= 1
        return r

    def _add_digitwise(self, x, y):
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        xx = np.asarray(x).copy()
        yy = np.asarray(y).copy()
        for i in range(self.a):
            out += ((xx + yy) % self.p) * self.p**i
            xx //= self.p
            yy //= self.p
        return out

    def _neg_scalar(self, x):
        out = 0
        for i in range(self.a):
            out += ((self.p - x % self.p) % self.p) * self.p**i
            x //= self.p
        return out

    # -- scalar operations ------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.a == 1:
            return (x + y) % self.p
        if self.p == 2:
            return x ^ y
        return int(self._add_digitwise(np.int64(x), np.int64(y)))

    def sub(self, x: int, y: int) -> int:
        return self.add(x, int(self._neg[y]))

    def neg(self, x: int) -> int:
        return int(self._neg[x])

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self._exp[self._log[x] + self._log[y]])

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero("cannot invert 0")
        return int(self._exp[(self.q - 1) - self._log[x]])

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("cannot invert 0")
            return 0
        if self.q == 2:
            return 1
        return int(self._exp[(self._log[x] * e) % (self.q - 1)])

    def frobenius(self, x: int, k: int = 1) -> int:
        for _ in range(k % self.a):
            x = int(self._frob[x])
        return x

    def order_of(self, x: int) -> int:
        """Multiplicative order of a nonzero element."""
        if x == 0:
            raise DivisionByZero("0 has no multiplicative order")
        n = self.q - 1
        k = int(self._log[x])
        import math

        return n // math.gcd(n, k) if n else 1

    def elements(self) -> range:
        return range(self.q)

    def digits(self, x: int) -> tuple[int, ...]:
        return _digits(x, self.p, self.a)

    def from_digits(self, ds) -> int:
        return int(sum(int(c) % self.p * self.p**i for i, c in enumerate(ds)))

    # -- vectorised operations (int64 numpy arrays of encodings) ----------

    def add_arr(self, x, y):
        if self.a == 1:
            return (x + y) % self.p
        if self.p == 2:
            return np.bitwise_xor(x, y)
        if self._add_table is not None:
            return self._add_table[x, y]
        return self._add_digitwise(x, y)

    def neg_arr(self, x):
        return self._neg[x]

    def sub_arr(self, x, y):
        return self.add_arr(x, self._neg[y])

    def mul_arr(self, x, y):
        if self.a == 1:
            return (x * y) % self.p
        x = np.asarray(x)
        y = np.asarray(y)
        out = self._exp[self._log[x] + self._log[y]]
        return np.where((x == 0) | (y == 0), 0, out)

    def frob_arr(self, x, k: int = 1):
        out = np.asarray(x)
        for _ in range(k % self.a):
            out = self._frob[out]
        return out

    def matmul(self, A, B):
        """Matrix product of integer-encoded arrays (shapes (m,k),(k,n))."""
        if self.a == 1:
            return (A.astype(np.int64) @ B.astype(np.int64)) % self.p
        m, k = A.shape
        n = B.shape[1]
        out = np.zeros((m, n), dtype=np.int64)
        for t in range(k):
            out = self.add_arr(out, self.mul_arr(A[:, t : t + 1], B[t : t + 1, :]))
        return out

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.a == other.a
            and self.poly == other.poly
        )

    def __hash__(self):
        return hash((self.p, self.a, self.poly))

    def __repr__(self):
        return f"GF({self.p}^{self.a})" if self.a > 1 else f"GF({self.p})"


@functools.lru_cache(maxsize=None)
def GF(p: int, a: int = 1) -> Field:
    """Cached field with the canonical reduction polynomial."""
    return Field(p, a)


def check_same_field(x: Field, y: Field):
    if x != y:
        raise FieldMismatch(f"fields differ: {x} vs {y}")
