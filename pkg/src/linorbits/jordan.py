"""Closed-form Jordan types for tensor products of unipotent blocks in
characteristic p, and the shape of a cyclic tensor-factor shift, both
cross-validated against direct matrix computation in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import GF, is_prime
from .matrix import Matrix, JordanType


@dataclass(frozen=True)
class TensorShape:
    m: int  # factor dimension
    t: int  # number of factors
    p: int  # characteristic

    def __post_init__(self):
        if self.m < 2 or self.t < 2:
            raise ValueError("need m >= 2 and t >= 2")


def jordan_tensor(a: int, b: int, p: int) -> JordanType:
    """Jordan type of J_a (x) J_b for unipotent blocks in characteristic p.

    For a + b <= p the blocks are J_(a+b-1), J_(a+b-3), ..., J_(b-a+1);
    for a + b > p they are J_p^(a+b-p) followed by J_(2p-a-b-1) down to
    J_(b-a+1) in steps of two.  Only 1 <= a, b <= p is supported: a block
    of size above p does not decompose blockwise, so the range is rejected
    rather than extrapolated.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} must be prime")
    if a > b:
        a, b = b, a
    if a < 1:
        raise ValueError("block sizes must be >= 1")
    if b > p:
        raise ValueError(
            f"unsupported range: J_{b} with b > p = {p} has order p^2 and no "
            "blockwise tensor decomposition"
        )
    if a + b <= p:
        blocks = list(range(b - a + 1, a + b, 2))
    else:
        blocks = [p] * (a + b - p)
        blocks += list(range(b - a + 1, 2 * p - a - b, 2))
    jt = JordanType(tuple(blocks))
    assert jt.dimension == a * b
    return jt


def cyclic_tensor_shape(m: int, p: int) -> JordanType:
    """Jordan type of the order-p permutation of p tensor factors of
    dimension m: m fixed basis vectors and (m^p - m)/p free p-cycles."""
    if m < 2:
        raise ValueError("need m >= 2")
    if not is_prime(p):
        raise ValueError(f"p={p} must be prime")
    b = (m**p - m) // p
    return JordanType((1,) * m + (p,) * b)


def tensor_shift_matrix(m: int, p: int, max_dim: int = 256) -> Matrix:
    """The m^p-dimensional permutation matrix over GF(p) cycling the tensor
    positions of V_1 (x) ... (x) V_p."""
    n = m**p
    images = np.zeros(n, dtype=np.int64)
    for idx in range(n):
        digits = []
        t = idx
        for _ in range(p):
            digits.append(t % m)
            t //= m
        rotated = digits[1:] + digits[:1]
        out = 0
        for d in reversed(rotated):
            out = out * m + d
        images[idx] = out
    return Matrix.permutation(GF(p), images, max_dim=max(max_dim, n))


def kappa_bound(m: int, p: int) -> Fraction:
    """Upper bound 1/p + (1 - 1/p)/m^(p-1) for the fixed-space ratio of the
    cyclic tensor-factor shift."""
    if m < 2:
        raise ValueError("need m >= 2")
    return Fraction(1, p) + (1 - Fraction(1, p)) / m ** (p - 1)


def kappa_of_shift_tensor_block(m: int, p: int, k: int) -> Fraction:
    """Exact fixed-space ratio of (shift on m^p) (x) J_k: the shift has type
    (J_1^m, J_p^b) and tensoring with J_k gives (J_k^m, J_p^(bk)), so the
    ratio is (m + bk) / (k (m + bp))."""
    if not 1 <= k <= p:
        raise ValueError("need 1 <= k <= p")
    b = (m**p - m) // p
    return Fraction(m + b * k, k * (m + b * p))
