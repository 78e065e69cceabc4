"""Independent reference computations used by the tests.

Everything here works with plain Python sets, complex floats and direct
enumeration, sharing no code paths with the exact implementation beyond the
element ordering convention.
"""

import cmath
import itertools
from fractions import Fraction
from math import prod

TOL = 1e-9


def elements(orders):
    return list(itertools.product(*[range(m) for m in orders]))


def add(x, y, orders):
    return tuple((a + b) % m for a, b, m in zip(x, y, orders))


def span(gens, orders):
    """Subgroup generated by gens, by closure."""
    zero = tuple(0 for _ in orders)
    S = {zero}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = add(x, g, orders)
            if y not in S:
                S.add(y)
                frontier.append(y)
    return S


def pair(a, chi, orders):
    return sum(Fraction(x * c, m) for x, c, m in zip(a, chi, orders)) % 1


def perp(S, orders):
    return {chi for chi in elements(orders) if all(pair(s, chi, orders) == 0 for s in S)}


def e(q):
    return cmath.exp(2j * cmath.pi * float(q))


def fourier(values, orders, sign=-1, normalize=True):
    """values: dict element -> complex."""
    els = elements(orders)
    n = prod(orders)
    out = {}
    for chi in els:
        acc = sum(values.get(a, 0) * e(sign * pair(a, chi, orders)) for a in els)
        out[chi] = acc / n if normalize else acc
    return out


def close(x, y, tol=TOL):
    return abs(complex(x) - complex(y)) < tol


def graded_keys_below(components, z):
    """Keys in the total filtration F_tot(z) of a graded model.

    F(z1) <= F_tot(z) <= F(z1 + 1) with the rest of z indexing the quotient
    F(z1 + 1)/F(z1), so every coordinate but the last is shifted by one before
    the lexicographic comparison.
    """
    def shifted(k):
        return tuple(v - 1 for v in k[:-1]) + tuple(k[-1:])

    return [k for k in sorted(components) if shifted(tuple(k)) <= tuple(z)]


def coordinate_subgroup(components, keys):
    """Element set of the coordinate subgroup for the given keys, in ambient coordinates."""
    orders, slots = [], {}
    for k in sorted(components):
        slots[k] = list(range(len(orders), len(orders) + len(components[k])))
        orders.extend(components[k])
    free = {i for k in keys for i in slots[k]}
    return {x for x in elements(orders) if all(x[i] == 0 for i in range(len(orders)) if i not in free)}, orders


def poisson_sides(components, cut, terms):
    """Both sides of Poisson summation in complex floats, from element sets.

    terms: list of (complex coeff, a, z).  D is the span of the components
    with key >= cut; K^ = D^perp; the transform of 1_{a+F(z)} is
    e(chi(a)) |D ∩ F(z)| / |K^ ∩ F^(z)| on F(z)^perp.
    """
    keys = [k for k in sorted(components) if tuple(k) >= tuple(cut)]
    D, orders = coordinate_subgroup(components, keys)
    Khat = perp(D, orders)
    lhs = 0j
    rhs = 0j
    for c, a, z in terms:
        F, _ = coordinate_subgroup(components, graded_keys_below(components, z))
        coset = {add(a, x, orders) for x in F}
        lhs += c * len(D & coset)
        Fh = perp(F, orders)
        W = Khat & Fh
        factor = len(D & F) / len(W)
        rhs += sum(c * factor * e(pair(a, chi, orders)) for chi in W)
    return lhs, rhs
