"""Slow, obviously-correct reference implementations used only by tests."""

from fractions import Fraction
from itertools import combinations
from math import gcd


def vp_loop(z, p):
    if z == 0:
        return None
    k = 0
    while z % p == 0:
        z //= p
        k += 1
    return k


def det_fraction(rows):
    """Determinant by Gaussian elimination over Q."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for j in range(c, n):
                m[r][j] -= f * m[c][j]
    assert det.denominator == 1
    return int(det)


def char_poly_minors(rows):
    """``d_s = (-1)^s * sum of s x s principal minors``."""
    t = len(rows)
    out = [1]
    for s in range(1, t + 1):
        total = 0
        for S in combinations(range(t), s):
            total += det_fraction([[rows[i][j] for j in S] for i in S])
        out.append((-1) ** s * total)
    return out


def snf_exponents_minors(rows, p):
    """Elementary-divisor valuations from determinantal divisors (gcd of k x k minors)."""
    nr, nc = len(rows), len(rows[0])
    r = min(nr, nc)
    partial = [0]
    for k in range(1, r + 1):
        g = 0
        for R in combinations(range(nr), k):
            for C in combinations(range(nc), k):
                g = gcd(g, det_fraction([[rows[i][j] for j in C] for i in R]))
        if g == 0:
            break
        partial.append(vp_loop(g, p))
    exps = [partial[k] - partial[k - 1] for k in range(1, len(partial))]
    exps += [float("inf")] * (r - len(exps))
    return sorted(exps, reverse=True)


def lower_envelope(points):
    """Height of the lower convex hull at each integer x, by brute force over pairs."""
    xs = [x for x, _ in points]
    out = {}
    for x in range(xs[0], xs[-1] + 1):
        best = None
        for (x0, y0) in points:
            for (x1, y1) in points:
                if x0 <= x <= x1 and x0 < x1:
                    v = Fraction(y0) + Fraction(y1 - y0, x1 - x0) * (x - x0)
                elif x0 == x1 == x:
                    v = Fraction(y0)
                else:
                    continue
                best = v if best is None else min(best, v)
        out[x] = best
    return out


def T_direct(a, n, x):
    """``T`` at an integer ``x`` straight from the definition."""
    b = [n - ai for ai in a]
    M = (n + 1) // 2
    if x <= 1:
        return M
    s = x - 1
    return M + sum(b[:s]) + n * max(0, s - len(b))


def c_enumerate(a, n, horizon=None):
    """``min T(x)/x`` over integers ``1 <= x <= horizon``, and the terminal slope ``n``.

    ``T`` is linear between integers, so integer points are enough.
    """
    horizon = horizon or len(a) + 3
    M = (n + 1) // 2
    best = Fraction(n)
    total = 0  # B(x - 1)
    for x in range(1, horizon + 1):
        if x >= 2:
            i = x - 2
            total += n - a[i] if i < len(a) else n
        best = min(best, Fraction(M + total, x))
    return best


def n_alpha_enumerate(alpha, d, h, max_n=200):
    for n in range(1, max_n + 1):
        a = []
        for i in range(1, n + 1):
            a += [n - i + 1] * ((i**d - (i - 1) ** d) * h)
        a.append(0)
        if Fraction(alpha) < c_enumerate(a, n):
            return n
    raise AssertionError("not found")


def chord_scan(m, alpha, n, step=Fraction(1, 2)):
    """Longest chord by scanning a fine grid of left endpoints and walking right."""
    bps = [r * r * m for r in range(n + 1)]

    def f(x):
        v = Fraction(0)
        for r in range(n + 1):
            lo = bps[r]
            hi = bps[r + 1] if r < n else None
            if x <= lo:
                break
            seg = (min(x, hi) if hi is not None else x) - lo
            v += r * seg
        return v

    best = Fraction(0)
    x1 = Fraction(0)
    top = bps[-1]
    while x1 <= top:
        y1 = f(x1)
        x2 = x1
        while f(x2 + step) <= y1 + alpha * (x2 + step - x1):
            x2 += step
        best = max(best, x2 - x1)
        x1 += step
    return best


def expand_substitution(coeffs, a, b, c, d):
    """``f(a x + c y, b x + d y)`` for ``f = sum c_i x^i y^(k-i)``, via explicit binomials."""
    from math import comb

    k = len(coeffs) - 1
    out = [0] * (k + 1)
    for i, ci in enumerate(coeffs):
        if not ci:
            continue
        # (a x + c y)^i (b x + d y)^(k-i)
        for r in range(i + 1):
            t1 = comb(i, r) * a**r * c ** (i - r)
            for s in range(k - i + 1):
                t2 = comb(k - i, s) * b**s * d ** (k - i - s)
                out[r + s] += ci * t1 * t2
    return out
