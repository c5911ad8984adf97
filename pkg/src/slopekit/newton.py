"""Newton polygons of characteristic polynomials.

Orientation: coefficients ``d_0 = 1, d_1, ..., d_t`` of ``det(X*I - A)`` are
plotted at ``(s, vp(d_s))``. With this descending-power indexing the slope of
a segment equals the valuation of the corresponding roots (for the
ascending-power convention it would be the negative of the slope).
Trailing zero coefficients are roots equal to zero; they are reported as
``kernel_multiplicity`` instead of an infinite slope.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .valuation import Prime, vp

# number of polygons whose slope conservation law has been checked
conservation_checks = 0


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple[tuple[int, int], ...]
    vertices: tuple[tuple[int, int], ...]
    degree: int
    kernel_multiplicity: int
    segments: tuple[tuple[Fraction, int], ...] = field(init=False)

    def __post_init__(self):
        segs = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            segs.append((Fraction(y1 - y0, x1 - x0), x1 - x0))
        object.__setattr__(self, "segments", tuple(segs))
        self._check()

    def _check(self):
        global conservation_checks
        slopes = [s for s, _ in self.segments]
        if any(a >= b for a, b in zip(slopes, slopes[1:])):
            raise AssertionError(f"segment slopes not strictly increasing: {slopes}")
        finite = sum(length for _, length in self.segments)
        if finite + self.kernel_multiplicity != self.degree:
            raise AssertionError("segment lengths do not add up to the degree")
        total = sum(s * length for s, length in self.segments)
        last_x, last_v = self.vertices[-1]
        first_v = self.vertices[0][1]
        if total != last_v - first_v:
            raise AssertionError(
                f"conservation failed: sum slope*length = {total}, valuation drop {last_v - first_v}"
            )
        conservation_checks += 1

    @property
    def last_index(self) -> int:
        return self.vertices[-1][0]

    def value_at(self, x) -> Fraction:
        """Height of the polygon over ``x`` (``0 <= x <= last_index``)."""
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= x <= x1:
                return y0 + Fraction(y1 - y0, x1 - x0) * (x - x0)
        if x == self.vertices[0][0]:
            return Fraction(self.vertices[0][1])
        raise ValueError(f"{x} outside polygon domain")

    def points_csv(self) -> str:
        return _csv(self.points)

    def vertices_csv(self) -> str:
        return _csv(self.vertices)


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "valuation"])
    w.writerows(rows)
    return buf.getvalue()


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Monotone-chain lower hull; points must have distinct x, sorted by x.

    Collinear middle points are dropped, so consecutive slopes strictly
    increase.
    """
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


def newton_polygon(coeffs: Sequence[int], p: int) -> NewtonPolygon:
    p = Prime(p)
    if not coeffs or coeffs[0] == 0:
        raise ValueError("leading coefficient d_0 must be nonzero")
    t = len(coeffs) - 1
    points = tuple((i, vp(c, p)) for i, c in enumerate(coeffs) if c != 0)
    t_star = points[-1][0]
    return NewtonPolygon(
        points=points,
        vertices=tuple(lower_hull(points)),
        degree=t,
        kernel_multiplicity=t - t_star,
    )


def slope_multiplicities(poly: NewtonPolygon) -> dict[Fraction, int]:
    counts = Counter()
    for slope, length in poly.segments:
        counts[slope] += length
    return dict(counts)


def count_slope(poly: NewtonPolygon, alpha) -> int:
    alpha = Fraction(alpha)
    return sum(length for slope, length in poly.segments if slope == alpha)
