"""
Exact integer linear algebra on Z^d.

Vectors are tuples of Python ints and matrices are tuples of row tuples, so
everything here is immutable and safe to share. Determinants and inverses go
through sympy's DomainMatrix over ZZ; nothing is ever converted to float.
"""
import logging
import random
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import DimensionMismatchError, ToricError, ZeroVectorError

logger = logging.getLogger(__name__)

LatticeVector = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]


def _as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def _domain_matrix(rows: Sequence[Sequence[int]]) -> DomainMatrix:
    return DomainMatrix.from_list([[int(x) for x in row] for row in rows], ZZ)


def primitivize(v: Sequence[int]) -> LatticeVector:
    """Return the primitive lattice vector on the ray spanned by v."""
    g = gcd(*v) if len(v) else 0
    if g == 0:
        raise ZeroVectorError("zero vector has no primitive generator")
    return tuple(int(x) // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return len(v) > 0 and gcd(*v) == 1


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatchError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    cols = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int]) -> LatticeVector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise DimensionMismatchError("determinant needs a square matrix")
    if n == 0:
        return 1
    return int(_domain_matrix(rows).det())


def integer_inverse(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Inverse of a unimodular matrix; it is integral exactly in that case."""
    if not rows:
        return ()
    if any(len(row) != len(rows) for row in rows):
        raise DimensionMismatchError("inverse needs a square matrix")
    adjugate, det = _domain_matrix(rows).adj_det()
    det = int(det)
    if det not in (1, -1):
        raise ToricError(f"matrix is not unimodular (det = {det})")
    # A^{-1} = adj(A) / det(A) and det(A) = 1/det(A) here
    return tuple(tuple(int(x) * det for x in row) for row in adjugate.to_list())


def is_unimodular_basis(vs: Sequence[Sequence[int]]) -> bool:
    if not vs:
        return True
    d = len(vs[0])
    if any(len(v) != d for v in vs):
        raise DimensionMismatchError("basis vectors have mixed ranks")
    if len(vs) != d:
        raise DimensionMismatchError(f"expected {d} vectors for a basis of Z^{d}, got {len(vs)}")
    return abs(determinant(vs)) == 1


def _swap_rows(m: List[List[int]], i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: List[List[int]], i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m: List[List[int]], target: int, source: int, factor: int) -> None:
    m[target] = [x + factor * y for x, y in zip(m[target], m[source])]


def _add_col(m: List[List[int]], target: int, source: int, factor: int) -> None:
    for row in m:
        row[target] += factor * row[source]


def _smallest_entry(s: List[List[int]], rows: range, cols: range) -> Optional[Tuple[int, int]]:
    best = None
    for i in rows:
        for j in cols:
            if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(a: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Return (U, S, V) with U·A·V = S, U and V unimodular, S diagonal with
    s_1 | s_2 | ... and all s_i >= 0. Pivots are the smallest nonzero entry
    in absolute value, ties broken by (row, column).
    """
    if not a or not a[0]:
        raise DimensionMismatchError("smith_normal_form needs a nonempty matrix")
    m, n = len(a), len(a[0])
    if any(len(row) != n for row in a):
        raise DimensionMismatchError("matrix rows have different lengths")

    s = [list(map(int, row)) for row in a]
    u = [list(row) for row in identity(m)]
    v = [list(row) for row in identity(n)]

    for t in range(min(m, n)):
        pivot = _smallest_entry(s, range(t, m), range(t, n))
        if pivot is None:
            break
        while True:
            i, j = pivot
            if i != t:
                _swap_rows(s, t, i)
                _swap_rows(u, t, i)
            if j != t:
                _swap_cols(s, t, j)
                _swap_cols(v, t, j)
            p = s[t][t]
            for i in range(t + 1, m):
                q = s[i][t] // p
                if q:
                    _add_row(s, i, t, -q)
                    _add_row(u, i, t, -q)
            for j in range(t + 1, n):
                q = s[t][j] // p
                if q:
                    _add_col(s, j, t, -q)
                    _add_col(v, j, t, -q)

            leftover = _smallest_entry(s, range(t + 1, m), range(t, t + 1)) or \
                _smallest_entry(s, range(t, t + 1), range(t + 1, n))
            if leftover is not None:
                # a remainder smaller than the pivot survived; it becomes the pivot
                pivot = _smallest_entry(s, range(t, m), range(t, t + 1)) or (t, t)
                row_best = _smallest_entry(s, range(t, t + 1), range(t, n))
                if row_best and abs(s[row_best[0]][row_best[1]]) < abs(s[pivot[0]][pivot[1]]):
                    pivot = row_best
                continue

            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % p),
                None,
            )
            if bad is None:
                break
            # divisibility fails: pull the offending row into row t and reduce again
            _add_row(s, t, bad, 1)
            _add_row(u, t, bad, 1)
            pivot = (t, t)

        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]

    return _as_matrix(u), _as_matrix(s), _as_matrix(v)


def random_unimodular(rank: int, bound: int = 5, rng: Optional[random.Random] = None,
                      steps: Optional[int] = None) -> IntMatrix:
    """Random matrix in GL(rank, Z) with every entry bounded by `bound` in absolute value."""
    rng = rng or random.Random()
    g = [list(row) for row in identity(rank)]
    if rank == 0:
        return ()
    perm = list(range(rank))
    rng.shuffle(perm)
    g = [list(g[i]) for i in perm]
    for i in range(rank):
        if rng.random() < 0.5:
            g[i] = [-x for x in g[i]]
    if rank == 1:
        return _as_matrix(g)

    for _ in range(steps if steps is not None else 4 * rank):
        i, j = rng.sample(range(rank), 2)
        factor = rng.choice((-2, -1, 1, 2))
        candidate = [x + factor * y for x, y in zip(g[i], g[j])]
        if max(abs(x) for x in candidate) <= bound:
            g[i] = candidate
    return _as_matrix(g)
