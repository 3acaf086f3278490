"""Polynomial symplectic spinor fields.

A field is a polynomial in the base coordinates y1, y2 tensored with a
polynomial in the Fock variable x, carrying a projective weight tag.
Weights are bookkeeping in the flat trivialization (they never change a
component value) but they gate which operators may act and govern all
weight-dependent operator coefficients elsewhere in the package.

The x-degree parity splits a field into its two irreducible halves
(even = plus part, odd = minus part); the Weyl generators are parity-odd
in this grading.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, Q, as_q
from .weyl import WeylElem, fock_apply

W_MINUS_3_4 = Q(-3, 4)
W_MINUS_9_4 = Q(-9, 4)


class SpinorField:
    """terms: dict (d1, d2, m) -> Fraction, (y-multidegree, x-degree)."""

    __slots__ = ("terms", "weight")

    def __init__(self, terms=None, weight=Q(0)):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = as_q(c)
                if c:
                    clean[(int(key[0]), int(key[1]), int(key[2]))] = c
        self.terms = clean
        self.weight = as_q(weight)

    @staticmethod
    def zero(weight=Q(0)):
        return SpinorField(weight=weight)

    @staticmethod
    def monomial(d1, d2, m, c=1, weight=Q(0)):
        return SpinorField({(d1, d2, m): c}, weight)

    @staticmethod
    def from_polys(ypoly: Poly, xpoly: Poly, weight=Q(0)):
        t = {}
        for (d1, d2), cy in ypoly.terms.items():
            for (m,), cx in xpoly.terms.items():
                t[(d1, d2, m)] = cy * cx
        return SpinorField(t, weight)

    def is_zero(self):
        return not self.terms

    def ydeg(self):
        return max((d1 + d2 for d1, d2, _ in self.terms), default=-1)

    def xdeg(self):
        return max((m for _, _, m in self.terms), default=-1)

    def __add__(self, other):
        if self.weight != other.weight:
            raise ValueError("weight mismatch: %s vs %s" % (self.weight, other.weight))
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, Q(0)) + c
            if s:
                t[k] = s
            else:
                del t[k]
        out = SpinorField.__new__(SpinorField)
        out.terms = t
        out.weight = self.weight
        return out

    def __neg__(self):
        out = SpinorField.__new__(SpinorField)
        out.terms = {k: -c for k, c in self.terms.items()}
        out.weight = self.weight
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_q(c)
        out = SpinorField.__new__(SpinorField)
        out.terms = {} if not c else {k: c * v for k, v in self.terms.items()}
        out.weight = self.weight
        return out

    def with_weight(self, weight):
        out = SpinorField.__new__(SpinorField)
        out.terms = dict(self.terms)
        out.weight = as_q(weight)
        return out

    def mul_ypoly(self, p: Poly):
        t = {}
        for (d1, d2, m), c in self.terms.items():
            for (e1, e2), v in p.terms.items():
                key = (d1 + e1, d2 + e2, m)
                s = t.get(key, Q(0)) + c * v
                if s:
                    t[key] = s
                else:
                    del t[key]
        out = SpinorField.__new__(SpinorField)
        out.terms = t
        out.weight = self.weight
        return out

    def diff_y(self, a):
        """Partial derivative in y^a, a in {1, 2}."""
        pos = a - 1
        t = {}
        for key, c in self.terms.items():
            if key[pos]:
                new = list(key)
                new[pos] -= 1
                t[tuple(new)] = c * key[pos]
        out = SpinorField.__new__(SpinorField)
        out.terms = t
        out.weight = self.weight
        return out

    def weyl_act(self, w: WeylElem):
        """Fiberwise Weyl action (g1 = 2 d/dx, g2 = x) on the x variable."""
        t = {}
        for (i, j), cw in w.terms.items():
            for (d1, d2, m), c in self.terms.items():
                if m < j:
                    continue
                f = Q(2 ** j)
                for r in range(j):
                    f *= m - r
                key = (d1, d2, m - j + i)
                s = t.get(key, Q(0)) + cw * c * f
                if s:
                    t[key] = s
                else:
                    del t[key]
        out = SpinorField.__new__(SpinorField)
        out.terms = t
        out.weight = self.weight
        return out

    def parity_part(self, parity):
        """Projection onto even (0) or odd (1) x-degree."""
        out = SpinorField.__new__(SpinorField)
        out.terms = {k: c for k, c in self.terms.items() if k[2] % 2 == parity}
        out.weight = self.weight
        return out

    def ypoly_at_xdeg(self, m) -> Poly:
        return Poly(2, {(d1, d2): c for (d1, d2, mm), c in self.terms.items() if mm == m})

    def __eq__(self, other):
        return (isinstance(other, SpinorField) and self.terms == other.terms
                and self.weight == other.weight)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.weight, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: (k[0] + k[1] + k[2], k)):
            d1, d2, m = key
            c = self.terms[key]
            mono = "".join(
                (nm if e == 1 else "%s^%d" % (nm, e))
                for nm, e in (("y1", d1), ("y2", d2), ("x", m)) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s %s" % (c, mono))
        return " + ".join(parts).replace("+ -", "- ")
