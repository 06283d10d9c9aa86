"""Exact Gaussian elimination over any field with +, -, *, inverse.

Works uniformly for Fraction, MultiQuadElem, and ComplexMQ scalars. Matrices
are lists of row lists. Nothing here is numeric; pivoting is on the first
nonzero entry, which is safe because arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational

from .multiquad import ComplexMQ, MultiQuadElem


def _is_zero(x) -> bool:
    if isinstance(x, (MultiQuadElem, ComplexMQ)):
        return x.is_zero()
    return x == 0


def _inv(x):
    if isinstance(x, (MultiQuadElem, ComplexMQ)):
        return x.inv()
    return Fraction(1) / Fraction(x)


def rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form. Returns (rref rows, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if not _is_zero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pinv = _inv(m[r][c])
        m[r] = [pinv * x for x in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_exact(rows: list[list]) -> int:
    """Rank of an exact matrix; empty matrices have rank 0."""
    return len(rref(rows)[0])


def right_nullspace(rows: list[list], ncols: int | None = None) -> list[list]:
    """Basis of {x : M x = 0}, one vector per free column, in column order.

    Each basis vector has a 1 in its free column and 0 in the other free
    columns, so the result is canonical given the input row space.
    """
    if rows:
        ncols = len(rows[0])
    if ncols is None:
        raise ValueError("ncols required for an empty matrix")
    red, pivots = rref(rows)
    one = _one_like(rows[0][0]) if rows else Fraction(1)
    zero = one - one
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def _one_like(x):
    if isinstance(x, MultiQuadElem):
        return MultiQuadElem.one()
    if isinstance(x, ComplexMQ):
        return ComplexMQ(1)
    return Fraction(1)


def solve_exact(rows: list[list], rhs: list):
    """One solution of M x = b, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    ncols = len(rows[0]) if rows else 0
    if ncols in pivots:
        return None
    one = _one_like(rows[0][0]) if rows else Fraction(1)
    zero = one - one
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def primitive_integer_covector(v: list[Fraction]) -> list[int]:
    """Scale a rational covector to coprime integers, first nonzero positive."""
    fracs = [Fraction(x) for x in v]
    if all(f == 0 for f in fracs):
        raise ValueError("zero covector has no primitive form")
    from math import lcm

    denom = lcm(*[f.denominator for f in fracs])
    ints = [int(f * denom) for f in fracs]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    ints = [a // g for a in ints]
    lead = next(a for a in ints if a != 0)
    if lead < 0:
        ints = [-a for a in ints]
    return ints


def is_rational_matrix(rows: list[list]) -> bool:
    for r in rows:
        for x in r:
            if isinstance(x, MultiQuadElem):
                if not x.is_rational():
                    return False
            elif isinstance(x, ComplexMQ):
                if not (x.im.is_zero() and x.re.is_rational()):
                    return False
            elif not isinstance(x, Rational):
                return False
    return True
