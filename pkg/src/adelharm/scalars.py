"""Exact arithmetic in cyclotomic fields Q(zeta_L).

A :class:`CycloScalar` is a polynomial in ``x = zeta_L`` of degree below
``phi(L)``, reduced modulo the L-th cyclotomic polynomial.  Scalars with
different conductors are compared and combined after embedding both into
``Q(zeta_lcm)`` via ``zeta_L -> zeta_M^(M/L)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    # exact division of integer polynomials, low-to-high coefficients, den monic
    num = list(num)
    dn = len(den) - 1
    q = [0] * (len(num) - dn)
    for k in range(len(q) - 1, -1, -1):
        coef = num[k + dn]
        q[k] = coef
        if coef:
            for i, d in enumerate(den):
                num[k + i] -= coef * d
    if any(num):
        raise ArithmeticError("polynomial division is not exact")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(L: int) -> tuple[int, ...]:
    """Integer coefficients (lowest degree first) of the L-th cyclotomic polynomial."""
    if L < 1:
        raise ValueError(f"conductor must be positive, got {L}")
    poly = [-1] + [0] * (L - 1) + [1]
    for d in _divisors(L):
        if d < L:
            poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(L: int, upto: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coefficient vectors of x^k mod Phi_L for 0 <= k < upto."""
    phi = cyclotomic_poly(L)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(upto):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def reduction_matrix(L: int) -> np.ndarray:
    """Integer matrix R (L x phi(L)) with row k the reduction of x^k."""
    return np.array(_power_table(L, L), dtype=object)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot interpret {v!r} as a rational number")


class QmodZ:
    """An element of Q/Z, stored as the representative in [0, 1)."""

    __slots__ = ("value",)

    def __init__(self, value=0):
        v = _as_fraction(value.value if isinstance(value, QmodZ) else value)
        self.value = v - (v.numerator // v.denominator)

    def __add__(self, other):
        return QmodZ(self.value + QmodZ(other).value)

    __radd__ = __add__

    def __neg__(self):
        return QmodZ(-self.value)

    def __sub__(self, other):
        return QmodZ(self.value - QmodZ(other).value)

    def __mul__(self, k: int):
        return QmodZ(self.value * int(k))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (QmodZ, int, Fraction)):
            return self.value == QmodZ(other).value
        return NotImplemented

    def __hash__(self):
        return hash(("QmodZ", self.value))

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __repr__(self):
        return f"QmodZ({self.value})"

    def __str__(self):
        return str(self.value)


class CycloScalar:
    """Exact element of Q(zeta_L) in the power basis modulo Phi_L.

    >>> root_of_unity(Fraction(1, 4), 4) ** 2 == -1
    True
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Sequence = (), *, _reduced: bool = False):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        if _reduced:
            self.coeffs = tuple(coeffs)
        else:
            self.coeffs = _reduce_coeffs([_as_fraction(c) for c in coeffs], conductor)

    # construction ---------------------------------------------------------
    @classmethod
    def rational(cls, value, conductor: int = 1) -> "CycloScalar":
        deg = euler_phi(conductor)
        return cls(conductor, (_as_fraction(value),) + (Fraction(0),) * (deg - 1), _reduced=True)

    @classmethod
    def zero(cls, conductor: int = 1) -> "CycloScalar":
        return cls.rational(0, conductor)

    @classmethod
    def one(cls, conductor: int = 1) -> "CycloScalar":
        return cls.rational(1, conductor)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    # conductor handling ---------------------------------------------------
    def promote(self, M: int) -> "CycloScalar":
        """Embed into Q(zeta_M); requires L | M."""
        L = self.conductor
        if M == L:
            return self
        if M % L:
            raise ConductorMismatch(f"conductor {L} does not divide {M}")
        step = M // L
        poly = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for k, c in enumerate(self.coeffs):
            poly[k * step] = c
        return CycloScalar(M, poly)

    def _coerce(self, other) -> tuple["CycloScalar", "CycloScalar"] | None:
        if isinstance(other, CycloScalar):
            M = lcm(self.conductor, other.conductor)
            return self.promote(M), other.promote(M)
        if isinstance(other, (int, Fraction, np.integer)):
            return self, CycloScalar.rational(other, self.conductor)
        return None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloScalar(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(self.conductor, tuple(-c for c in self.coeffs), _reduced=True)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloScalar(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)), _reduced=True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            f = _as_fraction(other)
            return CycloScalar(self.conductor, tuple(c * f for c in self.coeffs), _reduced=True)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloScalar(a.conductor, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            f = _as_fraction(other)
            if f == 0:
                raise ZeroDivisionError("division of a cyclotomic scalar by zero")
            return CycloScalar(self.conductor, tuple(c / f for c in self.coeffs), _reduced=True)
        if isinstance(other, CycloScalar) and other.is_rational():
            return self / other.coeffs[0]
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = CycloScalar.one(self.conductor)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "CycloScalar":
        """Complex conjugation, x -> x^(L-1)."""
        L = self.conductor
        poly = [Fraction(0)] * L
        for k, c in enumerate(self.coeffs):
            poly[(-k) % L] += c
        return CycloScalar(L, poly)

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self):
        # the normalized trace does not depend on the conductor chosen
        return hash(self.normalized_trace())

    def normalized_trace(self) -> Fraction:
        L = self.conductor
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                m = L // gcd(k, L)
                total += c * Fraction(mobius(m), euler_phi(m))
        return total

    # output ---------------------------------------------------------------
    def minimal(self) -> "CycloScalar":
        """The same number written over the smallest conductor that contains it."""
        L = self.conductor
        for M in _divisors(L):
            if M == L:
                break
            if M % 4 == 2:
                continue
            c = _descend(self.coeffs, M, L)
            if c is not None:
                return CycloScalar(M, c, _reduced=True)
        return self

    def to_text(self) -> str:
        """Canonical text form ``cyclo(L)[c0, c1, ...]`` over the minimal conductor."""
        m = self.minimal()
        return f"cyclo({m.conductor})[" + ", ".join(str(c) for c in m.coeffs) + "]"

    def __repr__(self):
        return self.to_text()

    def __complex__(self):
        z = np.exp(2j * np.pi / self.conductor)
        return complex(sum(float(c) * z**k for k, c in enumerate(self.coeffs)))

    def approx(self) -> complex:
        """Floating-point value, for display only."""
        return complex(self)


@lru_cache(maxsize=None)
def _descent_data(M: int, L: int):
    """Pivot rows of the promotion Q(zeta_M) -> Q(zeta_L), solved once per pair."""
    step = L // M
    table = _power_table(L, step * euler_phi(M))
    cols = [table[k * step] for k in range(euler_phi(M))]
    n, m = euler_phi(L), len(cols)
    # augmented rows of P^T (n x m) | identity, eliminated over Q
    rows = [[Fraction(cols[j][i]) for j in range(m)] + [Fraction(int(i == t)) for t in range(n)] for i in range(n)]
    piv_rows = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_rows.append(r)
        r += 1
    left = [row[m:] for row in rows[:m]]
    return tuple(tuple(cols[j]) for j in range(m)), tuple(tuple(row) for row in left)


def _descend(coeffs, M: int, L: int):
    cols, left = _descent_data(M, L)
    c = [sum(q * v for q, v in zip(row, coeffs) if v) for row in left]
    n = len(coeffs)
    back = [sum(c[j] * cols[j][i] for j in range(len(c)) if c[j]) for i in range(n)]
    if any(b != v for b, v in zip(back, coeffs)):
        return None
    return tuple(Fraction(x) for x in c)


class ConductorMismatch(ValueError):
    """A root of unity was requested in a field that does not contain it."""


def _reduce_coeffs(poly: list[Fraction], L: int) -> tuple[Fraction, ...]:
    deg = euler_phi(L)
    if len(poly) <= deg:
        return tuple(poly) + (Fraction(0),) * (deg - len(poly))
    table = _power_table(L, len(poly))
    out = [Fraction(0)] * deg
    for k, c in enumerate(poly):
        if c:
            for i, t in enumerate(table[k]):
                if t:
                    out[i] += c * t
    return tuple(out)


def reduce(poly: Sequence, L: int) -> CycloScalar:
    """Canonical remainder of a rational polynomial (lowest degree first) mod Phi_L."""
    return CycloScalar(L, [_as_fraction(c) for c in poly])


@lru_cache(maxsize=None)
def _root_cached(k: int, L: int) -> CycloScalar:
    poly = [Fraction(0)] * (k + 1)
    poly[k] = Fraction(1)
    return CycloScalar(L, poly)


def root_of_unity(q, L: int) -> CycloScalar:
    """``exp(2 pi i q)`` for ``q`` in Q/Z, as an element of Q(zeta_L)."""
    q = q if isinstance(q, QmodZ) else QmodZ(q)
    if L % q.denominator:
        raise ConductorMismatch(f"denominator {q.denominator} does not divide conductor {L}")
    return _root_cached(int(q.value * L), L)


def from_numerators(L: int, numerators: Iterable, denominator: int) -> CycloScalar:
    """Build a reduced scalar from integer numerators over one denominator."""
    return CycloScalar(L, tuple(Fraction(int(n), int(denominator)) for n in numerators), _reduced=True)


def common_conductor(values: Iterable[CycloScalar], base: int = 1) -> int:
    L = base
    for v in values:
        L = lcm(L, v.conductor)
    return L


def to_numerators(values: Sequence[CycloScalar], L: int) -> tuple[list[list[int]], int]:
    """Integer numerator rows and one common denominator for scalars promoted to L."""
    promoted = [v.promote(L) for v in values]
    den = 1
    for v in promoted:
        for c in v.coeffs:
            den = lcm(den, c.denominator)
    rows = [[int(c.numerator * (den // c.denominator)) for c in v.coeffs] for v in promoted]
    return rows, den


_TEXT = re.compile(r"^\s*cyclo\((\d+)\)\[(.*)\]\s*$")


def parse_scalar(text) -> CycloScalar:
    """Parse ``cyclo(L)[...]``, an integer, or a rational ``p/q``."""
    if isinstance(text, CycloScalar):
        return text
    if isinstance(text, (int, Fraction)):
        return CycloScalar.rational(text)
    if isinstance(text, float):
        raise TypeError("floating-point scalars are not accepted; use 'p/q' strings")
    m = _TEXT.match(str(text))
    if m:
        L = int(m.group(1))
        body = m.group(2).strip()
        coeffs = [Fraction(part.strip()) for part in body.split(",")] if body else []
        if len(coeffs) != euler_phi(L):
            raise ValueError(f"cyclo({L}) needs {euler_phi(L)} coefficients, got {len(coeffs)}")
        return CycloScalar(L, coeffs)
    return CycloScalar.rational(Fraction(str(text).strip()))
