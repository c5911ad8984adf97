"""Exact integer matrices, characteristic polynomials and p-local Smith forms."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .kernels import berkowitz
from .valuation import INF, Prime, vp


@dataclass(frozen=True)
class IntegerMatrix:
    """Square matrix of arbitrary-precision integers, stored row-major."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        t = len(rows)
        if t == 0:
            raise ValueError("matrix must have dimension >= 1")
        if any(len(row) != t for row in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntegerMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, t: int) -> "IntegerMatrix":
        return cls.diag([1] * t)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntegerMatrix":
        t = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(t)) for i in range(t)))

    @classmethod
    def zeros(cls, t: int) -> "IntegerMatrix":
        return cls(((0,) * t,) * t)

    @property
    def t(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        cols = list(zip(*other.rows))
        return IntegerMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows)
        )

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(tuple(zip(*self.rows)))

    def principal(self, k: int) -> "IntegerMatrix":
        """Leading ``k x k`` block."""
        return IntegerMatrix(tuple(row[:k] for row in self.rows[:k]))

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    # file format: {"t": int, "entries": [[str, ...], ...]}
    def to_json(self) -> str:
        doc = {"t": self.t, "entries": [[str(x) for x in row] for row in self.rows]}
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "IntegerMatrix":
        doc = json.loads(text)
        try:
            t = doc["t"]
            entries = doc["entries"]
        except (TypeError, KeyError) as exc:
            raise ValueError(f"malformed matrix document: missing {exc}") from None
        if not isinstance(t, int) or isinstance(t, bool) or t < 1:
            raise ValueError(f"malformed matrix document: bad t={t!r}")
        if not isinstance(entries, list) or len(entries) != t:
            raise ValueError(f"malformed matrix document: expected {t} rows")
        rows = []
        for row in entries:
            if not isinstance(row, list) or len(row) != t:
                raise ValueError(f"malformed matrix document: expected rows of length {t}")
            try:
                rows.append(tuple(int(str(x), 10) for x in row))
            except ValueError:
                raise ValueError(f"malformed matrix document: non-integer entry in {row!r}") from None
        return cls(tuple(rows))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "IntegerMatrix":
        with open(path) as fh:
            return cls.from_json(fh.read())


def char_poly(A: IntegerMatrix) -> list[int]:
    """Coefficients ``[d_0, ..., d_t]`` of ``det(X*I - A)``, with ``d_0 = 1``.

    Uses the division-free Berkowitz recursion (compiled kernel when
    available).
    """
    rows = A.rows if isinstance(A, IntegerMatrix) else A
    return berkowitz([list(r) for r in rows])


@dataclass(frozen=True)
class QuotientShape:
    """Exponents ``a`` with ``L/K = (+) O/p^{a_i}``, weakly decreasing, ``a_1 <= n``."""

    n: int
    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        if self.n < 0:
            raise ValueError("depth n must be nonnegative")
        if any(x < 0 for x in a):
            raise ValueError(f"negative exponent in {a}")
        if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
            raise ValueError(f"exponents must be weakly decreasing: {a}")
        if a and a[0] > self.n:
            raise ValueError(f"exponent {a[0]} exceeds depth n={self.n}")

    @property
    def t(self) -> int:
        return len(self.a)

    @property
    def b(self) -> tuple[int, ...]:
        return tuple(self.n - x for x in self.a)

    def padded(self, t: int) -> "QuotientShape":
        if t < self.t:
            raise ValueError(f"cannot pad shape of rank {self.t} down to {t}")
        return QuotientShape(self.n, self.a + (0,) * (t - self.t))

    def __str__(self):
        return ",".join(map(str, self.a))


def _strip_unit_content(row: list[int], start: int, p: int) -> None:
    """Divide ``row[start:]`` by the p-prime part of its content, in place."""
    g = 0
    for x in row[start:]:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return
    if g <= 1:
        return
    g //= p ** vp(g, p)
    if g > 1:
        for j in range(start, len(row)):
            row[j] //= g


def snf_p_exponents(A, p: int) -> list:
    """p-adic valuations of the elementary divisors of ``A``, weakly decreasing.

    ``A`` may be an ``IntegerMatrix`` or any rectangular list of rows. The
    result has ``min(rows, cols)`` entries; missing rank shows up as ``INF``.
    Elimination is done over the integers localised at ``p``: only row and
    column operations invertible over Z_(p) are used.
    """
    p = Prime(p)
    rows = A.rows if isinstance(A, IntegerMatrix) else A
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    r = min(nr, nc)
    exps = []
    for s in range(r):
        best = None
        for i in range(s, nr):
            row = m[i]
            for j in range(s, nc):
                x = row[j]
                if x:
                    v = vp(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            exps.extend([INF] * (r - s))
            break
        v, pi, pj = best
        m[s], m[pi] = m[pi], m[s]
        if pj != s:
            for row in m:
                row[s], row[pj] = row[pj], row[s]
        pivot = m[s][s]
        scale = p ** v
        unit = pivot // scale
        prow = m[s]
        # clear column s below the pivot
        for i in range(s + 1, nr):
            row = m[i]
            e = row[s]
            if e:
                f = e // scale
                for j in range(s, nc):
                    row[j] = unit * row[j] - f * prow[j]
                _strip_unit_content(row, s + 1, p)
        # clear row s to the right; rows below have zero in column s
        for j in range(s + 1, nc):
            prow[j] = 0
        exps.append(v)
    return sorted(exps, reverse=True)


def quotient_shape(K_in_L, p: int, n: int) -> QuotientShape:
    """Shape of ``L/K`` where the columns of ``K_in_L`` span ``K`` inside ``L``."""
    rows = K_in_L.rows if isinstance(K_in_L, IntegerMatrix) else K_in_L
    t = len(rows)
    exps = snf_p_exponents(rows, p)
    exps = exps + [INF] * (t - len(exps))
    if exps and exps[0] == INF:
        raise ValueError("sublattice does not have full rank; quotient is infinite")
    if exps and exps[0] > n:
        raise ValueError(f"elementary divisor exponent {exps[0]} exceeds n={n}")
    return QuotientShape(n, tuple(exps[:t]))
