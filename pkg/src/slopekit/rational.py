"""Exact rationals as ``"num/den"`` strings."""

from fractions import Fraction

from .valuation import INF


def fmt_q(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(text: str):
    text = str(text).strip()
    if text in ("inf", "Infinity"):
        return INF
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))
