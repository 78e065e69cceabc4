"""Dense vectors of cyclotomic scalars sharing one conductor and one denominator.

Row ``r`` of ``num`` holds the power-basis numerators of the r-th entry; the
entry itself is ``num[r] / den`` in Q(zeta_L).  Numerators are Python ints in
object arrays so nothing can overflow; hot loops convert to int64 when a bound
check allows it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

import numpy as np

from .scalars import CycloScalar, _power_table, euler_phi, from_numerators, lcm, to_numerators

INT64_SAFE = 2**62


@lru_cache(maxsize=None)
def promotion_matrix(L: int, M: int) -> np.ndarray:
    """phi(L) x phi(M) integer matrix embedding Q(zeta_L) into Q(zeta_M)."""
    step = M // L
    table = _power_table(M, step * euler_phi(L))
    return np.array([table[k * step] for k in range(euler_phi(L))], dtype=object)


@lru_cache(maxsize=None)
def reduction_table(L: int, upto: int) -> np.ndarray:
    return np.array(_power_table(L, upto), dtype=object)


def max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(max(abs(int(arr.max())), abs(int(arr.min()))))


def exact_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Integer matrix product, in int64 when that cannot overflow."""
    inner = A.shape[-1]
    if inner == 0:
        return np.zeros(A.shape[:-1] + B.shape[1:], dtype=object)
    bound = max_abs(A) * max_abs(B) * inner
    if bound < INT64_SAFE:
        return (A.astype(np.int64) @ B.astype(np.int64)).astype(object)
    return A.astype(object) @ B.astype(object)


class CycloVector:
    __slots__ = ("L", "num", "den")

    def __init__(self, L: int, num: np.ndarray, den: int = 1):
        self.L = L
        self.num = num
        self.den = int(den)

    # construction ---------------------------------------------------------
    @classmethod
    def zeros(cls, n: int, L: int = 1) -> "CycloVector":
        return cls(L, np.zeros((n, euler_phi(L)), dtype=object), 1)

    @classmethod
    def from_scalars(cls, values: Sequence, L: int | None = None) -> "CycloVector":
        vals = [v if isinstance(v, CycloScalar) else CycloScalar.rational(v) for v in values]
        M = 1 if L is None else L
        for v in vals:
            M = lcm(M, v.conductor)
        rows, den = to_numerators(vals, M)
        num = np.array(rows, dtype=object).reshape(len(vals), euler_phi(M))
        return cls(M, num, den).normalized()

    @classmethod
    def constant(cls, n: int, value, L: int = 1) -> "CycloVector":
        c = value if isinstance(value, CycloScalar) else CycloScalar.rational(value)
        M = lcm(L, c.conductor)
        rows, den = to_numerators([c], M)
        num = np.tile(np.array(rows[0], dtype=object), (n, 1))
        return cls(M, num, den)

    # bookkeeping ----------------------------------------------------------
    def __len__(self):
        return self.num.shape[0]

    def normalized(self) -> "CycloVector":
        g = self.den
        if g != 1:
            for v in self.num.flat:
                if v:
                    g = gcd(g, int(v))
                    if g == 1:
                        break
        if g == 1:
            return self
        return CycloVector(self.L, self.num // g, self.den // g)

    def promote(self, M: int) -> "CycloVector":
        if M == self.L:
            return self
        if M % self.L:
            raise ValueError(f"conductor {self.L} does not divide {M}")
        return CycloVector(M, exact_matmul(self.num, promotion_matrix(self.L, M)), self.den)

    def _align(self, other: "CycloVector"):
        M = lcm(self.L, other.L)
        a, b = self.promote(M), other.promote(M)
        D = lcm(a.den, b.den)
        return M, a.num * (D // a.den), b.num * (D // b.den), D

    def __getitem__(self, i: int) -> CycloScalar:
        return from_numerators(self.L, self.num[i], self.den)

    def scalars(self) -> list[CycloScalar]:
        return [self[i] for i in range(len(self))]

    def take(self, idx) -> "CycloVector":
        return CycloVector(self.L, self.num[np.asarray(idx, dtype=np.int64)], self.den)

    # linear structure -----------------------------------------------------
    def __add__(self, other: "CycloVector") -> "CycloVector":
        M, a, b, D = self._align(other)
        return CycloVector(M, a + b, D).normalized()

    def __sub__(self, other: "CycloVector") -> "CycloVector":
        M, a, b, D = self._align(other)
        return CycloVector(M, a - b, D).normalized()

    def __neg__(self):
        return CycloVector(self.L, -self.num, self.den)

    def scale(self, c) -> "CycloVector":
        """Multiply every entry by one scalar (rational or cyclotomic)."""
        if not isinstance(c, CycloScalar):
            c = Fraction(c)
            return CycloVector(self.L, self.num * c.numerator, self.den * c.denominator).normalized()
        M = lcm(self.L, c.conductor)
        base = self.promote(M)
        rows, cden = to_numerators([c], M)
        cvec = CycloVector(M, np.array(rows, dtype=object), cden)
        return base.mul(CycloVector(M, np.tile(cvec.num[0], (len(self), 1)), cden))

    def mul(self, other: "CycloVector") -> "CycloVector":
        """Entrywise product."""
        M, a, b, D = self._align(other)
        phi = a.shape[1]
        full = np.zeros((a.shape[0], 2 * phi - 1), dtype=object)
        for k in range(phi):
            col = a[:, k]
            if not col.any():
                continue
            for l in range(phi):
                full[:, k + l] += col * b[:, l]
        red = exact_matmul(full, reduction_table(M, 2 * phi - 1))
        return CycloVector(M, red, D * D).normalized()

    def total(self) -> CycloScalar:
        return from_numerators(self.L, self.num.sum(axis=0) if len(self) else np.zeros(euler_phi(self.L), dtype=object), self.den)

    def dot(self, other: "CycloVector") -> CycloScalar:
        """``sum_r self[r] * other[r]`` without conjugation."""
        if len(self) != len(other):
            raise ValueError("length mismatch")
        M, a, b, D = self._align(other)
        phi = a.shape[1]
        gram = exact_matmul(a.T, b)
        full = np.zeros(2 * phi - 1, dtype=object)
        for k in range(phi):
            for l in range(phi):
                full[k + l] += gram[k, l]
        red = exact_matmul(full.reshape(1, -1), reduction_table(M, 2 * phi - 1))[0]
        return CycloScalar(M, tuple(Fraction(int(v), D * D) for v in red), _reduced=True)

    def scatter(self, idx, n: int) -> "CycloVector":
        """Vector of length n whose entry t sums the entries r with idx[r] = t."""
        out = np.zeros((n, self.num.shape[1]), dtype=object)
        np.add.at(out, np.asarray(idx, dtype=np.int64), self.num)
        return CycloVector(self.L, out, self.den)

    def conjugate(self) -> "CycloVector":
        phi = euler_phi(self.L)
        table = reduction_table(self.L, self.L)
        perm = np.array([table[(-k) % self.L] for k in range(phi)], dtype=object)
        return CycloVector(self.L, exact_matmul(self.num, perm), self.den)

    def is_zero(self) -> bool:
        return not any(v for v in self.num.flat)

    def __eq__(self, other):
        if not isinstance(other, CycloVector):
            return NotImplemented
        if len(self) != len(other):
            return False
        _, a, b, _ = self._align(other)
        return bool(np.all(a == b))

    __hash__ = None

    def __repr__(self):
        return f"CycloVector(L={self.L}, n={len(self)})"
