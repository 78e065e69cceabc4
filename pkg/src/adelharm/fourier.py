"""Fourier transforms on finite abelian groups with exact cyclotomic values.

    F f(alpha)  = 1/|A| sum_a f(a) exp(-2 pi i alpha(a))
    F' f(alpha) =       sum_a f(a) exp(+2 pi i alpha(a))

The tilde variants agree with these at level 0.  All sums are done as integer
matrix products: the pairing matrix picks, for each character, which power of
zeta_L multiplies each row of numerators, and a final product with the
reduction table brings the result back modulo Phi_L.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .cyclovec import CycloVector, exact_matmul, max_abs, reduction_table
from .finab import FinAbGroup, GroupError, GroupHom, double_dual_iso, dual_group, dual_hom, pairing_matrix
from .funcspace import FnOnGroup, pair_fn, pullback, pushforward, translate
from .scalars import euler_phi, lcm, root_of_unity

TRANSFORMS = ("F", "F_prime", "F_tilde", "F_tilde_prime")

_CHUNK_CELLS = 1 << 22


def _raw_transform(A: FinAbGroup, vecs: Sequence[CycloVector], sign: int) -> list[CycloVector]:
    """``sum_a v(a) zeta^(sign * L * alpha(a))`` for each vector, on the dual group."""
    L = A.exponent
    for v in vecs:
        L = lcm(L, v.L)
    phi = euler_phi(L)
    proms = [v.promote(L) for v in vecs]
    B = len(proms)
    N = np.concatenate([p.num for p in proms], axis=1) if B else np.zeros((A.order, 0), dtype=object)
    K = pairing_matrix(A, L)  # rows a, cols alpha (symmetric in the standard coordinates)
    if sign < 0:
        K = np.mod(-K, L)
    K = K.T  # rows alpha
    n = A.order
    use64 = max_abs(N) * n < 2**62
    Nw = N.astype(np.int64) if use64 else N
    R = reduction_table(L, 2 * L)
    T = np.stack([R[t : t + phi] for t in range(L)])  # T[t, k] = x^(t+k) reduced
    T = T.reshape(L * phi, phi)
    chunk = max(1, _CHUNK_CELLS // max(1, L * n))
    outs = []
    steps = np.arange(L, dtype=np.int64)
    for start in range(0, n, chunk):
        Kc = K[start : start + chunk]
        onehot = (Kc[:, None, :] == steps[None, :, None])
        if use64:
            C = onehot.astype(np.int64) @ Nw
        else:
            C = onehot.astype(object) @ Nw
        c = Kc.shape[0]
        C = C.reshape(c, L, B, phi).transpose(0, 2, 1, 3).reshape(c * B, L * phi)
        outs.append(exact_matmul(C.astype(object), T).reshape(c, B, phi))
    full = np.concatenate(outs, axis=0) if outs else np.zeros((0, B, phi), dtype=object)
    return [CycloVector(L, full[:, b, :].copy(), proms[b].den) for b in range(B)]


def _check_which(which: str):
    if which not in TRANSFORMS:
        raise ValueError(f"unknown transform {which!r}; expected one of {', '.join(TRANSFORMS)}")


def fourier_batch(fs: Sequence[FnOnGroup], which: str = "F") -> list[FnOnGroup]:
    """Transform several functions on one group in a single pass."""
    _check_which(which)
    if not fs:
        return []
    A = fs[0].parent
    for f in fs:
        if f.parent != A:
            raise GroupError("batched functions must share a group")
    sign = -1 if which in ("F", "F_tilde") else 1
    raws = _raw_transform(A, [f.vec for f in fs], sign)
    Ahat = dual_group(A)
    out = []
    for r in raws:
        if sign < 0:
            r = CycloVector(r.L, r.num, r.den * A.order)
        out.append(FnOnGroup(Ahat, r.normalized()))
    return out


def fourier(f: FnOnGroup, which: str = "F") -> FnOnGroup:
    return fourier_batch([f], which)[0]


def fourier_F(f: FnOnGroup) -> FnOnGroup:
    return fourier(f, "F")


def fourier_Fprime(f: FnOnGroup) -> FnOnGroup:
    return fourier(f, "F_prime")


fourier_Ftilde = fourier_F
fourier_Ftilde_prime = fourier_Fprime


def fourier_direct(f: FnOnGroup, which: str = "F") -> FnOnGroup:
    """Term-by-term evaluation of the defining sum; slow, used as an oracle."""
    _check_which(which)
    from .finab import pairing0

    A = f.parent
    Ahat = dual_group(A)
    sign = -1 if which in ("F", "F_tilde") else 1
    vals = f.values
    out = []
    for alpha in Ahat.elements():
        acc = 0
        for a, v in zip(A.elements(), vals):
            if v:
                acc = v * root_of_unity(pairing0(a, alpha) * sign, A.exponent) + acc
        if sign < 0:
            acc = acc / A.order if acc != 0 else acc
        out.append(acc)
    return FnOnGroup.from_values(Ahat, out)


def inverse_transform(which: str) -> str:
    """The transform undoing ``which`` (after the double-dual identification)."""
    return {"F": "F_tilde_prime", "F_prime": "F_tilde", "F_tilde": "F_prime", "F_tilde_prime": "F"}[which]


def to_double_dual(A: FinAbGroup, g: FnOnGroup) -> FnOnGroup:
    """Read a function on the double dual as a function on A via delta."""
    return pullback(double_dual_iso(A), g)


def inversion_holds(f: FnOnGroup, which: str = "F") -> bool:
    back = fourier(fourier(f, which), inverse_transform(which))
    return to_double_dual(f.parent, back) == f


def inversion_batch(fs: Sequence[FnOnGroup], which: str = "F") -> list[bool]:
    if not fs:
        return []
    A = fs[0].parent
    back = fourier_batch(fourier_batch(fs, which), inverse_transform(which))
    return [to_double_dual(A, g) == f for f, g in zip(fs, back)]


def plancherel_holds(f: FnOnGroup, g: FnOnGroup) -> bool:
    """``<f, g> = <F f, F' g>`` and the tilde version."""
    lhs = pair_fn(f, g)
    return lhs == pair_fn(fourier_F(f), fourier_Fprime(g)) and lhs == pair_fn(fourier(f, "F_tilde"), fourier(g, "F_tilde_prime"))


def functoriality_holds(phi: GroupHom, f: FnOnGroup) -> bool:
    """``F(phi^* f) = (phi^)_* (F f)`` for ``phi: A -> B`` and f on B."""
    return fourier_F(pullback(phi, f)) == pushforward(dual_hom(phi), fourier_F(f))


def modulation_holds(a, f: FnOnGroup) -> bool:
    """``F(t_a f)(alpha) = exp(-2 pi i alpha(a)) F f(alpha)``."""
    from .finab import pairing0

    A = f.parent
    Ahat = dual_group(A)
    a = A.element(a) if not hasattr(a, "parent") else a
    lhs = fourier_F(translate(a, f))
    phases = FnOnGroup.from_values(Ahat, [root_of_unity(-pairing0(a, alpha).value, A.exponent) for alpha in Ahat.elements()])
    return lhs == phases * fourier_F(f)
