"""Exact linear algebra over the rationals.

Gaussian elimination on sparse dict rows (column index -> Fraction).
Sizes in this package stay in the hundreds of unknowns, so a
straightforward pivoting scheme with exact arithmetic is plenty; the
point is determinism and exactness, not asymptotics.

Columns are eliminated in increasing index order so reduced bases are
canonical: ``nullspace`` returns the reduced-echelon basis (one vector
per free column, pivot entries back-substituted).
"""

from __future__ import annotations

from fractions import Fraction

Q = Fraction


def _reduce_row(row, pivots):
    """Reduce ``row`` (dict, mutated) against the pivot rows."""
    while row:
        c = min(row)
        piv = pivots.get(c)
        if piv is None:
            return c
        f = row[c]
        for cc, vv in piv.items():
            s = row.get(cc, Q(0)) - f * vv
            if s:
                row[cc] = s
            else:
                row.pop(cc, None)
    return None


def echelon(rows):
    """Forward-eliminate; returns dict pivot_col -> normalized row."""
    pivots = {}
    for r in rows:
        row = dict(r)
        c = _reduce_row(row, pivots)
        if c is not None:
            inv = 1 / row[c]
            pivots[c] = {cc: vv * inv for cc, vv in row.items()}
    return pivots


def _back_substitute(pivots):
    """Turn an echelon pivot family into reduced echelon form."""
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for c2 in sorted(pivots):
            if c2 <= c:
                continue
            f = row.get(c2)
            if f and c2 in pivots:
                for cc, vv in pivots[c2].items():
                    s = row.get(cc, Q(0)) - f * vv
                    if s:
                        row[cc] = s
                    else:
                        row.pop(cc, None)
    return pivots


def rank(rows):
    return len(echelon(rows))


def nullspace(rows, ncols):
    """Canonical basis of {x : A x = 0}; vectors are dicts col -> Fraction.

    Each basis vector has entry 1 at its free column and is supported on
    that column plus pivot columns (reduced echelon convention).
    """
    pivots = _back_substitute(echelon(rows))
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        vec = {f: Q(1)}
        for c, row in pivots.items():
            v = row.get(f)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def solve(rows, rhs, ncols):
    """One exact solution of A x = b, or None if inconsistent.

    ``rows`` are dicts over columns 0..ncols-1, ``rhs`` a list of
    Fractions aligned with ``rows``.  Free variables are set to zero.
    """
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[ncols] = as_rhs(b)
        aug.append(row)
    pivots = _back_substitute(echelon(aug))
    if ncols in pivots:
        return None
    sol = {}
    for c, row in pivots.items():
        v = row.get(ncols)
        if v:
            # reduced form: row reads x_c + sum(free) = rhs, free vars -> 0
            sol[c] = v
    return sol


def as_rhs(b):
    if isinstance(b, (int, Fraction)):
        return Fraction(b)
    raise TypeError("exact arithmetic only")


def in_span(basis, target, ncols):
    """Whether ``target`` lies in the span of ``basis`` (all dict vectors)."""
    rows = [{} for _ in range(ncols)]
    for j, vec in enumerate(basis):
        for c, v in vec.items():
            rows[c][j] = v
    rhs = [target.get(c, Q(0)) for c in range(ncols)]
    return solve(rows, rhs, len(basis)) is not None


def span_dim(vectors):
    """Dimension of the span of dict vectors."""
    return rank(vectors)
