"""Small exact linear algebra over the rationals.

Everything here works on plain lists/tuples of ``int`` or ``Fraction``.
The matrices involved are tiny (at most a dozen columns), so simple
Gaussian elimination is all we need.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Number = int | Fraction
Vector = Sequence[Number]
Matrix = Sequence[Vector]


def dot(u: Vector, v: Vector) -> Number:
    return sum(a * b for a, b in zip(u, v))


def row_echelon(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _integer_rank(rows: list[list[int]]) -> int:
    """Fraction-free elimination on integer rows."""
    rows = [r for r in rows if any(r)]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r]
        for i in range(r + 1, len(rows)):
            q = rows[i][c]
            if q:
                row = [p[c] * a - q * b for a, b in zip(rows[i], p)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                rows[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(rows):
            break
    return r


def rank(rows: Matrix) -> int:
    if all(isinstance(x, int) for row in rows for x in row):
        return _integer_rank([list(row) for row in rows])
    return _integer_rank([list(primitive(row)) for row in rows])


def in_span(vector: Vector, rows: Matrix) -> bool:
    """Exact membership test ``vector ∈ span(rows)``."""
    if all(x == 0 for x in vector):
        return True
    if not rows:
        return False
    return rank(list(rows) + [vector]) == rank(rows)


def independent_rows(rows: Matrix) -> list[int]:
    """Indices of a greedy maximal linearly independent subset of ``rows``."""
    chosen: list[int] = []
    basis: list[tuple[int, list[int]]] = []  # (pivot column, reduced integer row)
    for i, r in enumerate(rows):
        v = list(primitive(r))
        for c, b in basis:
            if v[c]:
                f, p = v[c], b[c]
                v = [p * x - f * y for x, y in zip(v, b)]
        c = next((k for k, x in enumerate(v) if x), None)
        if c is not None:
            g = 0
            for x in v:
                g = gcd(g, x)
            basis.append((c, [x // g for x in v]))
            chosen.append(i)
    return chosen


def solve(a: Matrix, b: Vector) -> list[Fraction] | None:
    """Solve the square system ``a x = b``; None when singular."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    echelon, pivots = row_echelon(aug)
    if pivots != list(range(n)):
        return None
    return [echelon[i][n] for i in range(n)]


def inverse(a: Matrix) -> list[list[Fraction]] | None:
    n = len(a)
    aug = [list(a[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    echelon, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)) or len(echelon) < n:
        return None
    return [row[n:] for row in echelon]


def _bareiss(m: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(m)
    sign, prev = 1, 1
    for c in range(n - 1):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        p = m[c][c]
        for i in range(c + 1, n):
            row, f = m[i], m[i][c]
            for j in range(c + 1, n):
                row[j] = (row[j] * p - f * m[c][j]) // prev
        prev = p
    return sign * m[n - 1][n - 1] if n else 1


def det(a: Matrix) -> Fraction:
    if all(isinstance(x, int) for r in a for x in r):
        return Fraction(_bareiss([list(r) for r in a]))
    m = [[Fraction(x) for x in r] for r in a]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def nullspace(rows: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : r·x = 0 for r in rows}``."""
    echelon, pivots = row_echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(echelon, pivots):
            v[p] = -r[f]
        basis.append(v)
    return basis


def common_denominator(values) -> int:
    lcm = 1
    for x in values:
        d = x.denominator
        lcm = lcm * d // gcd(lcm, d)
    return lcm


def primitive(v: Vector) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    fr = [Fraction(x) for x in v]
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def elementary_divisors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (Smith normal form diagonal)."""
    m = [list(map(int, r)) for r in matrix]
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    out = []
    t = 0
    while t < min(rows, cols):
        # choose the smallest nonzero entry of the remaining block as pivot
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        m[t], m[i] = m[i], m[t]
        for r in m:
            r[t], r[j] = r[j], r[t]
        done = False
        while not done:
            done = True
            p = m[t][t]
            for i in range(t + 1, rows):
                q = m[i][t] // p
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                if m[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = m[t][j] // p
                if q:
                    for r in m:
                        r[j] -= q * r[t]
                if m[t][j]:
                    done = False
            if not done:
                # move the smallest nonzero remainder into the pivot position
                cands = [(abs(m[i][t]), i, t) for i in range(t + 1, rows) if m[i][t]]
                cands += [(abs(m[t][j]), t, j) for j in range(t + 1, cols) if m[t][j]]
                _, i, j = min(cands)
                if j == t:
                    m[t], m[i] = m[i], m[t]
                else:
                    for r in m:
                        r[t], r[j] = r[j], r[t]
                continue
            # divisibility condition of the Smith form
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if m[i][j] % p),
                None,
            )
            if bad is not None:
                m[t] = [a + b for a, b in zip(m[t], m[bad[0]])]
                done = False
        out.append(abs(m[t][t]))
        t += 1
    return out
