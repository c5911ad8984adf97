"""Exact p-adic valuations of integers and rationals.

Valuations are plain Python ints; the valuation of zero is ``INF``
(``math.inf``), which already behaves correctly under ``+`` and ``min``.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf

# deterministic Miller-Rabin witnesses, valid for n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        raise ValueError(f"primality of {n} cannot be decided deterministically")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Prime(int):
    """An ``int`` that is known to be prime."""

    def __new__(cls, p):
        if isinstance(p, Prime):
            return p
        if isinstance(p, bool) or not isinstance(p, int):
            raise TypeError(f"prime must be an integer, got {p!r}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return super().__new__(cls, p)


def vp(z: int, p: int):
    """Largest ``s`` with ``p**s | z``; ``INF`` for ``z == 0``."""
    if z == 0:
        return INF
    z = abs(z)
    if p == 2:
        return (z & -z).bit_length() - 1
    s = 0
    # strip large powers first so huge valuations cost O(log s) divisions
    pk, k = p, 1
    while True:
        q, r = divmod(z, pk)
        if r:
            if k == 1:
                return s
            pk, k = p, 1
            continue
        z = q
        s += k
        pk, k = pk * pk, 2 * k


def vp_rational(num: int, den: int, p: int):
    """Signed valuation ``vp(num) - vp(den)``."""
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if num == 0:
        return INF
    return vp(num, p) - vp(den, p)


def vp_fraction(q: Fraction, p: int):
    return vp_rational(q.numerator, q.denominator, p)


def unit_part(z: int, p: int) -> int:
    """``z / p**vp(z)``, keeping the sign. Zero maps to zero."""
    if z == 0:
        return 0
    return z // p ** vp(z, p)
