"""Sparse multivariate polynomials over the rationals.

Every scalar in this package is a ``fractions.Fraction``; floating point
is banned project-wide.  ``Poly`` is a sparse exponent-dict polynomial in
a fixed number of variables.  The two-variable case (base coordinates
y1, y2 of the plane) is the common one and gets convenience constructors
under the ``YPoly`` alias; the flat symplectic module uses 2n variables.

Polynomials are immutable by convention: no method mutates ``terms``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

Q = Fraction


def as_q(x) -> Fraction:
    """Coerce an int to Fraction; reject floats (exactness guard)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("exact arithmetic only: got %r" % type(x).__name__)


class Poly:
    """Polynomial over Q in ``nvars`` variables, keyed by exponent tuples."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                c = as_q(c)
                if c:
                    e = tuple(exps)
                    if len(e) != nvars:
                        raise ValueError("exponent tuple has wrong length")
                    clean[e] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(nvars):
        return Poly(nvars)

    @staticmethod
    def const(nvars, c):
        return Poly(nvars, {(0,) * nvars: as_q(c)})

    @staticmethod
    def variable(nvars, i):
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Q(1)})

    @staticmethod
    def monomial(exps, c=1):
        return Poly(len(exps), {tuple(exps): as_q(c)})

    # -- queries ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant: %s" % self)
        return self.terms.get((0,) * self.nvars, Q(0))

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coeff(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Q(0))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, Q(0)) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = t
        return out

    def __neg__(self):
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, Q(0)) + c1 * c2
                if s:
                    t[e] = s
                else:
                    del t[e]
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = t
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Poly.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c):
        c = as_q(c)
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = {} if not c else {e: c * v for e, v in self.terms.items()}
        return out

    def diff(self, i):
        """Partial derivative with respect to variable ``i`` (0-based)."""
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = t
        return out

    def eval(self, point):
        """Evaluate at a rational point (tuple of Fractions/ints)."""
        total = Q(0)
        pt = [as_q(p) for p in point]
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                v *= x ** k
            total += v
        return total

    # -- comparisons / rendering --------------------------------------

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return "Poly(%s)" % str(self)

    def __str__(self):
        if not self.terms:
            return "0"
        names = ["y%d" % (i + 1) for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=deglex_key):
            c = self.terms[e]
            mono = "*".join(
                (names[i] if k == 1 else "%s^%d" % (names[i], k))
                for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (c, mono))
        return " + ".join(parts).replace("+ -", "- ")


def deglex_key(exps):
    """Degree-lexicographic sort key for exponent tuples."""
    return (sum(exps), exps)


def binom(n, k) -> Fraction:
    return Q(comb(n, k))


# -- the two-variable base ring ---------------------------------------

YPoly = Poly  # rank-2 base polynomials; constructors below fix nvars=2


def y_zero():
    return Poly.zero(2)


def y_const(c):
    return Poly.const(2, c)


def y_var(a):
    """The coordinate y^a for a in {1, 2}."""
    if a not in (1, 2):
        raise ValueError("coordinate index must be 1 or 2")
    return Poly.variable(2, a - 1)


def y_monomial(d1, d2, c=1):
    return Poly.monomial((d1, d2), c)
