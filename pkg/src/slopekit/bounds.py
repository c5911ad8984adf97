"""Piecewise-linear lower bounds for Newton polygons and their critical slopes.

Given the shape ``a_1 >= ... >= a_t`` of ``L/K`` and ``b_i = n - a_i``:

* ``B`` is the convex function with ``B(0) = 0`` and slope ``b_i`` on
  ``[i-1, i]`` (slope ``n`` past ``t``);
* ``T(x) = M + B(x - 1)`` with ``M = ceil(n/2)`` and ``T = M`` on ``[0, 1]``;
* ``c = inf_{x >= 1} T(x)/x`` is the critical slope below which slope
  multiplicities only depend on ``L/K``.

Everything here is exact (``Fraction``); the only floating-point routine is
``closed_form_c``, which evaluates an asymptotic estimate for reporting.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .linalg import QuotientShape
from .rational import fmt_q
from .valuation import INF


@dataclass(frozen=True)
class SigmaProfile:
    d: int
    h: int
    n: int
    sigma: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.sigma)


def sigma_profile(d: int, h: int, n: int) -> SigmaProfile:
    """Multiplicities ``sigma_i = (i^d - (i-1)^d) h`` for ``i = 1..n``."""
    if d < 1 or h < 1 or n < 1:
        raise ValueError("d, h and n must all be >= 1")
    return SigmaProfile(d, h, n, tuple((i**d - (i - 1) ** d) * h for i in range(1, n + 1)))


def shape_from_profile(profile: SigmaProfile, t: int) -> QuotientShape:
    """``sigma_1`` copies of ``n``, ``sigma_2`` of ``n-1``, ..., zero-padded to rank ``t``."""
    if t < profile.total:
        raise ValueError(f"rank t={t} is smaller than sum(sigma)={profile.total}")
    a = []
    for i, s in enumerate(profile.sigma, start=1):
        a.extend([profile.n - i + 1] * s)
    a.extend([0] * (t - len(a)))
    return QuotientShape(profile.n, tuple(a))


@dataclass(frozen=True)
class PiecewiseBound:
    """Convex piecewise-linear function on ``[0, inf)``.

    ``slopes[i]`` holds on ``[breakpoints[i], breakpoints[i+1]]``; the last
    slope extends to infinity. Consecutive pieces with equal slope are merged.
    """

    breakpoints: tuple[Fraction, ...]
    slopes: tuple[int, ...]
    initial: Fraction = Fraction(0)

    def __post_init__(self):
        bps = [Fraction(x) for x in self.breakpoints]
        slopes = [int(s) for s in self.slopes]
        if len(bps) != len(slopes) or not bps:
            raise ValueError("need one slope per breakpoint")
        if bps[0] != 0:
            raise ValueError("first breakpoint must be 0")
        if any(x >= y for x, y in zip(bps, bps[1:])):
            raise ValueError("breakpoints must strictly increase")
        if any(s > u for s, u in zip(slopes, slopes[1:])):
            raise ValueError(f"slopes must weakly increase (convexity): {slopes}")
        mb, ms = [bps[0]], [slopes[0]]
        for x, s in zip(bps[1:], slopes[1:]):
            if s != ms[-1]:
                mb.append(x)
                ms.append(s)
        object.__setattr__(self, "breakpoints", tuple(mb))
        object.__setattr__(self, "slopes", tuple(ms))
        object.__setattr__(self, "initial", Fraction(self.initial))

    @property
    def terminal_slope(self) -> int:
        return self.slopes[-1]

    def values(self) -> list[Fraction]:
        vals = [self.initial]
        for i in range(1, len(self.breakpoints)):
            vals.append(vals[-1] + self.slopes[i - 1] * (self.breakpoints[i] - self.breakpoints[i - 1]))
        return vals

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if x < 0:
            raise ValueError("bound is defined on [0, inf)")
        value = self.initial
        bps = self.breakpoints
        for i, s in enumerate(self.slopes):
            end = bps[i + 1] if i + 1 < len(bps) else None
            if end is None or x <= end:
                return value + s * (x - bps[i])
            value += s * (end - bps[i])
        raise AssertionError("unreachable")

    def table(self) -> list[tuple[Fraction, Fraction, int]]:
        """``(breakpoint, value, outgoing slope)`` triples."""
        return list(zip(self.breakpoints, self.values(), self.slopes))

    def to_json(self) -> str:
        rows = [[fmt_q(x), fmt_q(v), fmt_q(s)] for x, v, s in self.table()]
        return json.dumps({"breakpoints": rows})


def B_function(shape: QuotientShape) -> PiecewiseBound:
    b = shape.b
    return PiecewiseBound(tuple(range(len(b) + 1)), b + (shape.n,))


def ceil_half(n: int) -> int:
    return (n + 1) // 2


def T_function(shape: QuotientShape) -> PiecewiseBound:
    B = B_function(shape)
    bps = (Fraction(0),) + tuple(1 + x for x in B.breakpoints)
    return PiecewiseBound(bps, (0,) + B.slopes, initial=ceil_half(shape.n))


def critical_slope_c(shape: QuotientShape) -> Fraction:
    """Exact ``inf_{x >= 1} T(x)/x``.

    ``T(x)/x`` is monotone on each linear piece, so the infimum is taken at
    ``x = 1``, at a breakpoint, or as the limit ``n`` along the final ray.
    """
    T = T_function(shape)
    candidates = [T(1)]
    candidates += [v / x for x, v in zip(T.breakpoints, T.values()) if x > 1]
    candidates.append(Fraction(T.terminal_slope))
    return min(candidates)


class ClosedForm(NamedTuple):
    c1: float
    c1_term: float
    n: int
    c: float
    stationary_x: float
    q_min_x: float
    q_min: float


def Q_value(x: float, d: int, h: int) -> float:
    """``(d/(d+1)) (x/h)^((d+1)/d) - x``."""
    return d / (d + 1) * (x / h) ** ((d + 1) / d) - x


def closed_form_c(d: int, h: int, n: int) -> ClosedForm:
    """Asymptotic estimate ``min(c1 n^(1/(d+1)), n)`` for reporting.

    Also returns the stationary point ``h (M (d+1))^(d/(d+1))`` of
    ``(M + Q(x))/x`` and the minimum ``-h^(d+1)/(d+1)`` of ``Q`` itself,
    attained at ``x = h^(d+1)``.
    """
    if d < 1 or h < 1 or n < 1:
        raise ValueError("d, h and n must all be >= 1")
    M = ceil_half(n)
    c1 = (1 / (d + 1)) ** (d / (d + 1)) * (1 / h ** (d / (d + 1)) + 1)
    term = c1 * n ** (1 / (d + 1))
    return ClosedForm(
        c1=c1,
        c1_term=term,
        n=n,
        c=min(term, n),
        stationary_x=h * (M * (d + 1)) ** (d / (d + 1)),
        q_min_x=float(h ** (d + 1)),
        q_min=Q_value(h ** (d + 1), d, h),
    )


def Q_below(x, value, d: int, h: int) -> bool:
    """Exact test of ``Q(x) < value`` for rational ``x >= 0``.

    ``Q(x) < v`` iff ``(x/h)^(d+1) < ((d+1)(v + x)/d)^d`` when ``v + x >= 0``.
    """
    x = Fraction(x)
    rhs = Fraction(d + 1, d) * (Fraction(value) + x)
    if rhs < 0:
        return False
    return (x / h) ** (d + 1) < rhs**d


def n_alpha(alpha, d: int, h: int, max_n: int = 1000) -> int:
    """Smallest ``n >= 1`` with ``alpha < c`` for the profile ``(d, h, n)``.

    The shape uses rank ``sum(sigma) + 1``. Raises ``OverflowError`` past
    ``max_n``.
    """
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    for n in range(1, max_n + 1):
        prof = sigma_profile(d, h, n)
        if alpha < critical_slope_c(shape_from_profile(prof, prof.total + 1)):
            return n
    raise OverflowError(f"no n <= {max_n} with alpha={alpha} < c")


def iq_bound_paper(m: int, alpha) -> int:
    """``floor(3 m (alpha+1)^2 / 2) * m``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    alpha = Fraction(alpha)
    return math.floor(Fraction(3 * m) * (alpha + 1) ** 2 / 2) * m


def iq_lower_bound(m: int, n: int) -> PiecewiseBound:
    """Slope ``r`` on ``[r^2 m, (r+1)^2 m]`` for ``r < n``, slope ``n`` past ``n^2 m``."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    return PiecewiseBound(tuple(r * r * m for r in range(n + 1)), tuple(range(n + 1)))


def max_chord_above(bound: PiecewiseBound, alpha):
    """Longest ``x2 - x1`` such that the slope-``alpha`` line through
    ``(x1, bound(x1))`` stays on or above ``bound`` over ``[x1, x2]``.

    Returns ``INF`` when the terminal slope is ``<= alpha``.
    """
    alpha = Fraction(alpha)
    if bound.terminal_slope <= alpha:
        return INF
    bps = bound.breakpoints
    vals = bound.values()
    g = [v - alpha * x for x, v in zip(bps, vals)]
    best = Fraction(0)
    for start in range(len(bps)):
        level = g[start]
        end = None
        for i in range(start, len(bps)):
            rise = bound.slopes[i] - alpha
            nxt = bps[i + 1] if i + 1 < len(bps) else None
            if rise > 0:
                cross = bps[i] + (level - g[i]) / rise
                if nxt is None or cross <= nxt:
                    end = cross
                    break
        best = max(best, end - bps[start])
    return best


def chord_findings(ms: Sequence[int], alphas: Sequence) -> tuple[list[dict], list[dict]]:
    """Compare the exact chord bound against ``iq_bound_paper``.

    Returns ``(rows, findings)``: one row per ``(m, alpha)`` and a finding for
    every pair where the exact chord exceeds the closed-form bound.
    """
    rows, findings = [], []
    for m in ms:
        for alpha in alphas:
            alpha = Fraction(alpha)
            chord = stable_chord(m, alpha)
            closed = iq_bound_paper(m, alpha)
            row = {"m": m, "alpha": fmt_q(alpha), "chord": fmt_q(chord), "closed_form": closed}
            rows.append(row)
            if chord > closed:
                findings.append(
                    dict(
                        row,
                        kind="closed-form-bound-violated",
                        detail=(
                            "exact slope-alpha projection under the weight-independent "
                            "lower bound exceeds floor(3m(alpha+1)^2/2)*m"
                        ),
                    )
                )
    return rows, findings


def stable_chord(m: int, alpha) -> Fraction:
    """``max_chord_above`` for the ``iq_lower_bound`` family, taking ``n`` large
    enough that the answer no longer depends on it."""
    alpha = Fraction(alpha)
    n = math.floor(alpha) + 1
    while True:
        chord = max_chord_above(iq_lower_bound(m, n), alpha)
        # the family agrees for all larger n on [0, n^2 m]
        if chord <= n * n * m:
            return chord
        n += 1
