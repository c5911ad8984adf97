"""Symmetric powers and their tensor products with the 2x2 matrix action.

A degree-``k`` homogeneous polynomial is stored as ``c_0, ..., c_k`` with
``c_i`` the coefficient of ``x^i y^(k-i)``. A matrix ``[[a, b], [c, d]]``
acts by substitution,

    (gamma . f)(x, y) = det(gamma)^twist * f(a x + c y, b x + d y),

which is ``f(v @ gamma)`` for the row vector ``v = (x, y)``. This is a
left action: ``act(g1 @ g2, f) == act(g1, act(g2, f))``.

The filtration ``W^n_k`` is the degree-``k`` part of the ideal ``(p, x)^n``:
the coefficient of ``x^i y^(k-i)`` must be divisible by ``p^max(n-i, 0)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .linalg import IntegerMatrix
from .valuation import Prime, vp


class PreconditionError(ValueError):
    """Input violates the hypothesis of a check (as opposed to the check failing)."""


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def hecke(cls, p: int, u: int = 0) -> "Mat2":
        """The coset representative ``[[p, u], [0, 1]]``."""
        return cls(p, u, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def in_semigroup(self, p: int) -> bool:
        """``c = 0 mod p`` and ``d = 1 mod p``."""
        return self.c % p == 0 and (self.d - 1) % p == 0

    def first_column_vanishes(self, p: int) -> bool:
        return self.a % p == 0 and self.c % p == 0


def _polymul(f: Sequence[int], g: Sequence[int]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class HomogPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a degree-k polynomial needs k+1 coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def k(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def monomial(cls, k: int, i: int, coeff: int = 1) -> "HomogPoly":
        """``coeff * x^i y^(k-i)``."""
        c = [0] * (k + 1)
        c[i] = coeff
        return cls(tuple(c))

    @classmethod
    def zero(cls, k: int) -> "HomogPoly":
        return cls((0,) * (k + 1))

    def _same_degree(self, other):
        if other.k != self.k:
            raise ValueError(f"degree mismatch: {self.k} vs {other.k}")

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._same_degree(other)
        return HomogPoly(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        self._same_degree(other)
        return HomogPoly(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, HomogPoly):
            return HomogPoly(tuple(_polymul(self.coeffs, other.coeffs)))
        return HomogPoly(tuple(other * c for c in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "HomogPoly":
        result = [1]
        base = list(self.coeffs)
        while e:
            if e & 1:
                result = _polymul(result, base)
            e >>= 1
            if e:
                base = _polymul(base, base)
        return HomogPoly(tuple(result))

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def sym_matrix(gamma: Mat2, k: int) -> list[list[int]]:
    """Matrix of ``f -> f(a x + c y, b x + d y)`` on degree ``k`` (no twist).

    Column ``i`` holds the image of ``x^i y^(k-i)``.
    """
    lin_x = [gamma.c, gamma.a]  # a x + c y, indexed by power of x
    lin_y = [gamma.d, gamma.b]  # b x + d y
    px, py = [[1]], [[1]]
    for _ in range(k):
        px.append(_polymul(px[-1], lin_x))
        py.append(_polymul(py[-1], lin_y))
    cols = [_polymul(px[i], py[k - i]) for i in range(k + 1)]
    return [[cols[i][j] for i in range(k + 1)] for j in range(k + 1)]


def act(gamma: Mat2, f: HomogPoly, twist: int = 0) -> HomogPoly:
    """``det(gamma)^twist * f(a x + c y, b x + d y)``."""
    S = sym_matrix(gamma, f.k)
    scale = gamma.det**twist
    return HomogPoly(tuple(scale * sum(s * c for s, c in zip(row, f.coeffs)) for row in S))


class TensorPolynomial:
    """Element of ``S_{k_1} (x) ... (x) S_{k_d}`` twisted by ``det^det_twist``.

    ``coeffs[i_1, ..., i_d]`` is the coefficient of the tensor of monomials
    ``x^{i_j} y^{k_j - i_j}``; stored densely as a numpy object array.
    """

    def __init__(self, coeffs, det_twist: int = 0):
        arr = np.array(coeffs, dtype=object)
        if arr.ndim == 0:
            raise ValueError("need at least one tensor factor")
        if det_twist < 0:
            raise ValueError("det_twist must be nonnegative")
        self.coeffs = arr
        self.det_twist = int(det_twist)

    @classmethod
    def zeros(cls, degrees: Sequence[int], det_twist: int = 0) -> "TensorPolynomial":
        arr = np.empty(tuple(k + 1 for k in degrees), dtype=object)
        arr.fill(0)
        return cls(arr, det_twist)

    @classmethod
    def from_factors(cls, factors: Sequence[HomogPoly], det_twist: int = 0) -> "TensorPolynomial":
        arrays = [np.array(f.coeffs, dtype=object) for f in factors]
        return cls(reduce(np.multiply.outer, arrays), det_twist)

    @classmethod
    def from_homog(cls, f: HomogPoly, det_twist: int = 0) -> "TensorPolynomial":
        return cls(np.array(f.coeffs, dtype=object), det_twist)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(s - 1 for s in self.coeffs.shape)

    @property
    def arity(self) -> int:
        return self.coeffs.ndim

    def items(self):
        return np.ndenumerate(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TensorPolynomial):
            return NotImplemented
        return (
            self.det_twist == other.det_twist
            and self.coeffs.shape == other.coeffs.shape
            and bool(np.all(self.coeffs == other.coeffs))
        )

    def __sub__(self, other: "TensorPolynomial") -> "TensorPolynomial":
        if self.degrees != other.degrees:
            raise ValueError("degree mismatch")
        return TensorPolynomial(self.coeffs - other.coeffs, self.det_twist)

    def __add__(self, other: "TensorPolynomial") -> "TensorPolynomial":
        if self.degrees != other.degrees:
            raise ValueError("degree mismatch")
        return TensorPolynomial(self.coeffs + other.coeffs, self.det_twist)

    def scale(self, s: int) -> "TensorPolynomial":
        return TensorPolynomial(self.coeffs * s, self.det_twist)

    def is_zero(self) -> bool:
        return not any(int(x) for x in self.coeffs.flat)

    def __repr__(self):
        return f"TensorPolynomial(degrees={self.degrees}, det_twist={self.det_twist})"

    # file format: {"degrees": [...], "det_twist": int, "coeffs": [str, ...]} (row-major)
    def to_json(self) -> str:
        doc = {
            "degrees": list(self.degrees),
            "det_twist": self.det_twist,
            "coeffs": [str(int(x)) for x in self.coeffs.flat],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "TensorPolynomial":
        doc = json.loads(text)
        degrees = [int(k) for k in doc["degrees"]]
        flat = [int(str(x)) for x in doc["coeffs"]]
        shape = tuple(k + 1 for k in degrees)
        if len(flat) != int(np.prod(shape)):
            raise ValueError(f"expected {int(np.prod(shape))} coefficients, got {len(flat)}")
        arr = np.empty(len(flat), dtype=object)
        arr[:] = flat
        return cls(arr.reshape(shape), int(doc.get("det_twist", 0)))


def tensor_act(gamma, F: TensorPolynomial) -> TensorPolynomial:
    """Apply ``gamma`` to every factor and multiply by ``det(gamma)^det_twist``.

    ``gamma`` may also be a sequence with one matrix per factor (e.g. a
    matrix and its conjugate); that form carries no determinant twist, so
    ``F.det_twist`` must be 0.
    """
    if isinstance(gamma, Mat2):
        gammas = [gamma] * F.arity
        scale = gamma.det**F.det_twist
    else:
        gammas = list(gamma)
        if len(gammas) != F.arity:
            raise ValueError(f"need {F.arity} matrices, got {len(gammas)}")
        if F.det_twist:
            raise ValueError("per-factor matrices are only supported with det_twist = 0")
        scale = 1
    out = F.coeffs
    for axis, (g, k) in enumerate(zip(gammas, F.degrees)):
        S = np.array(sym_matrix(g, k), dtype=object)
        out = np.moveaxis(np.tensordot(S, out, axes=([1], [axis])), 0, axis)
    if scale != 1:
        out = out * scale
    return TensorPolynomial(out, F.det_twist)


def w_exponent(i: int, n: int) -> int:
    """Power of ``p`` required at ``x^i y^(k-i)`` in ``(p, x)^n``."""
    return max(n - i, 0)


def w_basis(k: int, n: int, p: int) -> IntegerMatrix:
    """Diagonal basis of ``W^n_k`` in the monomial basis of ``S_k``."""
    p = Prime(p)
    return IntegerMatrix.diag([p ** w_exponent(i, n) for i in range(k + 1)])


def w_membership(f: HomogPoly, n: int, p: int) -> bool:
    return all(vp(c, p) >= w_exponent(i, n) for i, c in enumerate(f.coeffs))


def tensor_w_exponents(degrees: Sequence[int], n: int) -> np.ndarray:
    """Required power of ``p`` at each multi-index: ``min_j max(n - i_j, 0)``."""
    out = np.zeros(tuple(k + 1 for k in degrees), dtype=int)
    for idx in itertools.product(*(range(k + 1) for k in degrees)):
        out[idx] = min(w_exponent(i, n) for i in idx)
    return out


def tensor_w_membership(F: TensorPolynomial, n: int, p: int) -> bool:
    req = tensor_w_exponents(F.degrees, n)
    return all(vp(int(c), p) >= req[idx] for idx, c in F.items())


def tensor_w_generators(degrees: Sequence[int], n: int, p: int, copies: int = 1) -> list[list[int]]:
    """Generator matrix (columns) of ``sum_j L (x) .. (x) W^n_{k_j} (x) .. (x) L``.

    Built summand by summand from the generators of each factor's ``W`` and
    the full lattices of the other factors; ``copies`` stacks that many
    orthogonal copies (block diagonal). Rows index monomials.
    """
    p = Prime(p)
    index = list(itertools.product(*(range(k + 1) for k in degrees)))
    dim = len(index)
    cols = []
    for c in range(copies):
        for j in range(len(degrees)):
            for row, idx in enumerate(index):
                col = [0] * (dim * copies)
                col[c * dim + row] = p ** w_exponent(idx[j], n)
                cols.append(col)
    return [list(r) for r in zip(*cols)]


def phi_map(F: TensorPolynomial, n: int, i0: int, p: int) -> TensorPolynomial:
    """Multiply factor ``i0`` (1-based) by ``y^(p^(n-1))``."""
    if not 1 <= i0 <= F.arity:
        raise ValueError(f"factor index {i0} out of range 1..{F.arity}")
    if n < 1:
        raise ValueError("depth n must be >= 1")
    e = Prime(p) ** (n - 1)
    degrees = list(F.degrees)
    degrees[i0 - 1] += e
    out = TensorPolynomial.zeros(degrees, F.det_twist)
    # multiplying by y^e keeps the x-exponent, so the old block sits at the start
    out.coeffs[tuple(slice(0, s) for s in F.coeffs.shape)] = F.coeffs
    return out


def phi_equivariance_defect(F: TensorPolynomial, gamma: Mat2, n: int, i0: int, p: int) -> TensorPolynomial:
    """``phi(gamma F) - gamma phi(F)``; lies in ``W^n`` when ``gamma`` is in the semigroup."""
    if not gamma.in_semigroup(p):
        raise PreconditionError(f"{gamma} is not in the semigroup c = 0, d = 1 mod {p}")
    return phi_map(tensor_act(gamma, F), n, i0, p) - tensor_act(gamma, phi_map(F, n, i0, p))


def frobenius_difference(b: int, d: int, n: int, p: int) -> HomogPoly:
    """``y^(p^(n-1)) - (b x + d y)^(p^(n-1))``."""
    e = Prime(p) ** (n - 1)
    return HomogPoly.monomial(e, 0) - HomogPoly((d, b)) ** e


def frobenius_identity_check(b: int, d: int, n: int, p: int) -> bool:
    """Whether ``y^(p^(n-1)) - (b x + d y)^(p^(n-1))`` lies in ``(p, x)^n``."""
    if (d - 1) % p:
        raise PreconditionError(f"d={d} is not 1 mod {p}")
    return w_membership(frobenius_difference(b, d, n, p), n, p)


def power_congruence_check(f: HomogPoly, f_prime: HomogPoly, n: int, s: int, p: int) -> bool:
    """If ``f - f'`` is in ``W^n_k``, whether ``f^(p^s) - f'^(p^s)`` is in ``W^n_{p^s k}``."""
    p = Prime(p)
    if f.k != f_prime.k:
        raise PreconditionError("f and f' must have the same degree")
    if not w_membership(f - f_prime, n, p):
        raise PreconditionError("f - f' is not in W^n")
    e = p**s
    return w_membership(f**e - f_prime**e, n, p)


def hecke_divisibility_check(gamma: Mat2, F: TensorPolynomial, n: int, p: int) -> bool:
    """Whether ``gamma . F`` is divisible by ``p^(n + det_twist * vp(det gamma))``.

    Requires ``a = c = 0 mod p`` and ``F`` in the tensor ``W^n``.
    """
    p = Prime(p)
    if not gamma.first_column_vanishes(p):
        raise PreconditionError(f"{gamma} does not have a = c = 0 mod {p}")
    if not tensor_w_membership(F, n, p):
        raise PreconditionError("F is not in W^n")
    image = tensor_act(gamma, F)
    if image.is_zero():
        return True
    # det = 0 with a positive twist already gave a zero image above
    need = n + (F.det_twist * vp(gamma.det, p) if F.det_twist else 0)
    return all(vp(int(c), p) >= need for c in image.coeffs.flat)
