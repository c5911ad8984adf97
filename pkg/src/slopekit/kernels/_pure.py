"""Pure-Python Berkowitz recursion (reference and fallback)."""

from operator import mul


def berkowitz(rows):
    """Coefficients ``[1, c_1, ..., c_t]`` of ``det(X*I - A)``.

    ``rows`` is a square list of lists of ints. Division free, so every
    intermediate value is an exact integer.
    """
    t = len(rows)
    poly = [1]
    for k in range(t):
        # A_k is the leading k x k block; C = A[0:k, k], R = A[k, 0:k]
        head = [row[:k] for row in rows[:k]]
        r = rows[k][:k]
        v = [rows[i][k] for i in range(k)]
        q = [1, -rows[k][k]]
        for j in range(k):
            q.append(-sum(map(mul, r, v)))
            if j < k - 1:
                v = [sum(map(mul, hrow, v)) for hrow in head]
        # Toeplitz product: new[i] = sum_j q[i - j] * poly[j]
        new = []
        for i in range(k + 2):
            lo = max(0, i - k - 1)
            new.append(sum(q[i - j] * poly[j] for j in range(lo, min(i, k) + 1)))
        poly = new
    return poly
