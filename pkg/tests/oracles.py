"""Small independent reference computations used as test oracles.

None of these call into dgmorita's linear algebra.
"""

from fractions import Fraction
from itertools import combinations, product
from math import gcd


def det(rows):
    """Exact determinant by fraction-valued elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return out


def determinantal_factors(A):
    """Invariant factors of an integer matrix as ratios of gcds of k-minors."""
    rows, cols = len(A), len(A[0]) if A else 0
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, int(abs(det([[A[r][c] for c in cs] for r in rs]))))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[i] // divisors[i - 1] for i in range(1, len(divisors)))


def rank_mod_p(A, p):
    m = [[x % p for x in r] for r in A]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def solvable_mod_p(A, b, p):
    """Brute force over all vectors (few unknowns only)."""
    n = len(A[0])
    for x in product(range(p), repeat=n):
        if all(sum(a * v for a, v in zip(row, x)) % p == bb % p for row, bb in zip(A, b)):
            return True
    return False


def betti_mod_p(degrees, d, p):
    """Homology dimensions of a complex over F_p from ranks of differential blocks."""
    out = {}
    for n in sorted(set(degrees)):
        ix = [i for i, t in enumerate(degrees) if t == n]
        below = [i for i, t in enumerate(degrees) if t == n - 1]
        above = [i for i, t in enumerate(degrees) if t == n + 1]
        dn = [[d[r][c] for c in ix] for r in below]
        dn1 = [[d[r][c] for c in above] for r in ix]
        rk_out = rank_mod_p(dn, p) if below and ix else 0
        rk_in = rank_mod_p(dn1, p) if ix and above else 0
        h = len(ix) - rk_out - rk_in
        if h:
            out[n] = h
    return out
