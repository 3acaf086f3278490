"""The symplectic Clifford (Weyl) algebra on the plane, in normal order.

Generators g1, g2 satisfy  g_a g_b - g_b g_a = 2 w_ab  with w_12 = 1.
An element is stored by its normal form: coefficients of the monomials
g2^i g1^j (all g2 factors to the left of all g1 factors).  Two elements
are equal iff their normal forms coincide, which makes operator equality
decidable throughout the package.

The polynomial (Fock) model realizes g1 as 2*d/dx and g2 as
multiplication by x on Q[x]; the commutator [2 d/dx, x] = 2 matches
2 w_12 over the rationals with no irrational normalizers.

Index gymnastics use the conventions
    w_12 = w^12 = 1,   w^{ja} w_{jb} = delta^a_b,
    raise with the first upper slot:  v^a = w^{ab} v_b,
    lower with the second lower slot: v_a = w_{ba} v^b,
so g^1 = g2, g^2 = -g1 and g^a g_a = -2.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .poly import Poly, Q, as_q

# -- the symplectic form ----------------------------------------------

OMEGA_LOWER = ((Q(0), Q(1)), (Q(-1), Q(0)))   # w_ab, 1-based indices shifted
OMEGA_UPPER = ((Q(0), Q(1)), (Q(-1), Q(0)))   # w^ab


def omega_lower(a, b) -> Fraction:
    return OMEGA_LOWER[a - 1][b - 1]


def omega_upper(a, b) -> Fraction:
    return OMEGA_UPPER[a - 1][b - 1]


def raise_index(vec_lower):
    """(v_1, v_2) -> (v^1, v^2) with v^a = w^{ab} v_b."""
    v1, v2 = vec_lower
    return (v2, -v1)


def lower_index(vec_upper):
    """(v^1, v^2) -> (v_1, v_2) with v_a = w_{ba} v^b."""
    v1, v2 = vec_upper
    return (-v2, v1)


# -- Weyl algebra elements --------------------------------------------

class WeylElem:
    """Normal-ordered element: terms maps (i, j) -> coefficient of g2^i g1^j."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = as_q(c)
                if c:
                    clean[(int(key[0]), int(key[1]))] = c
        self.terms = clean

    @staticmethod
    def zero():
        return WeylElem()

    @staticmethod
    def one():
        return WeylElem({(0, 0): 1})

    @staticmethod
    def monomial(i, j, c=1):
        return WeylElem({(i, j): c})

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    def parity(self):
        """0 for even, 1 for odd; None if mixed or zero."""
        ps = {(i + j) % 2 for i, j in self.terms}
        if len(ps) == 1:
            return ps.pop()
        return None

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, Q(0)) + c
            if s:
                t[k] = s
            else:
                del t[k]
        out = WeylElem.__new__(WeylElem)
        out.terms = t
        return out

    def __neg__(self):
        out = WeylElem.__new__(WeylElem)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_q(c)
        out = WeylElem.__new__(WeylElem)
        out.terms = {} if not c else {k: c * v for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, WeylElem):
            return weyl_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, WeylElem) and self.terms == other.terms

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda k: (k[0] + k[1], k)):
            c = self.terms[(i, j)]
            mono = ""
            if i:
                mono += "g2" if i == 1 else "g2^%d" % i
            if j:
                mono += ("" if not mono else " ") + ("g1" if j == 1 else "g1^%d" % j)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s %s" % (c, mono))
        return " + ".join(parts).replace("+ -", "- ")


G1 = WeylElem.monomial(0, 1)
G2 = WeylElem.monomial(1, 0)
W_ONE = WeylElem.one()


@lru_cache(maxsize=None)
def _reorder(j, i):
    """g1^j g2^i in normal order: tuple of ((i', j'), coeff).

    Uses [g1, g2] = 2:  g1^j g2^i = sum_k k! C(j,k) C(i,k) 2^k g2^{i-k} g1^{j-k}.
    """
    out = []
    for k in range(min(i, j) + 1):
        c = Q(factorial(k) * comb(j, k) * comb(i, k) * 2 ** k)
        out.append(((i - k, j - k), c))
    return tuple(out)


def weyl_mul(a: WeylElem, b: WeylElem) -> WeylElem:
    """Normal-ordered product; associative and bilinear."""
    t = {}
    for (i1, j1), c1 in a.terms.items():
        for (i2, j2), c2 in b.terms.items():
            c = c1 * c2
            for (im, jm), f in _reorder(j1, i2):
                key = (i1 + im, jm + j2)
                s = t.get(key, Q(0)) + c * f
                if s:
                    t[key] = s
                else:
                    del t[key]
    out = WeylElem.__new__(WeylElem)
    out.terms = t
    return out


def weyl_product(factors):
    acc = W_ONE
    for f in factors:
        acc = weyl_mul(acc, f)
    return acc


def gamma_lower(a) -> WeylElem:
    """The generator g_a for a in {1, 2}."""
    if a == 1:
        return G1
    if a == 2:
        return G2
    raise ValueError("index label must be 1 or 2")


def gamma_raise(a) -> WeylElem:
    """g^a = w^{ab} g_b; concretely g^1 = g2 and g^2 = -g1."""
    if a == 1:
        return G2
    if a == 2:
        return -G1
    raise ValueError("index label must be 1 or 2")


# -- polynomial (Fock) model ------------------------------------------

def x_poly(coeffs) -> Poly:
    """Build an x-polynomial from a sequence of coefficients by degree."""
    return Poly(1, {(m,): c for m, c in enumerate(coeffs)})


def x_monomial(m, c=1) -> Poly:
    return Poly.monomial((m,), c)


def fock_apply(a: WeylElem, p: Poly) -> Poly:
    """Apply a Weyl element to Q[x]: g1 acts as 2 d/dx, g2 as x*.

    Extended multiplicatively over normal-ordered terms, so g2^i g1^j
    sends x^m to 2^j m(m-1)...(m-j+1) x^{m-j+i}.
    """
    if p.nvars != 1:
        raise ValueError("Fock space is Q[x] (one variable)")
    t = {}
    for (i, j), c in a.terms.items():
        for (m,), v in p.terms.items():
            if m < j:
                continue
            f = Q(2 ** j)
            for r in range(j):
                f *= m - r
            key = (m - j + i,)
            s = t.get(key, Q(0)) + c * v * f
            if s:
                t[key] = s
            else:
                del t[key]
    return Poly(1, t)


# -- symmetrized monomials and the symmetric basis ---------------------

@lru_cache(maxsize=None)
def sym_gamma_monomial(p, q) -> WeylElem:
    """Full symmetrization of p copies of g2 and q copies of g1.

    Recursion averages over the choice of first factor; the result is
    normal-ordered.  These form a basis (the symmetric basis), with
    Sym(p, q) = g2^p g1^q + lower-degree terms.
    """
    if p < 0 or q < 0:
        raise ValueError("negative multiplicity")
    if p + q == 0:
        return W_ONE
    acc = WeylElem.zero()
    n = p + q
    if p:
        acc = acc + weyl_mul(G2, sym_gamma_monomial(p - 1, q)).scale(Q(p, n))
    if q:
        acc = acc + weyl_mul(G1, sym_gamma_monomial(p, q - 1)).scale(Q(q, n))
    return acc


def to_symmetric_basis(w: WeylElem):
    """Expand w = sum c_{p,q} Sym(p, q); returns dict (p, q) -> Fraction.

    Downward induction on degree: the top normal-form coefficients of w
    and of its symmetric-basis expansion agree degree by degree.
    """
    w = WeylElem(dict(w.terms))
    out = {}
    while w.terms:
        d = w.degree()
        layer = [(i, j) for (i, j) in w.terms if i + j == d]
        for (i, j) in layer:
            c = w.terms[(i, j)]
            out[(i, j)] = c
            w = w - sym_gamma_monomial(i, j).scale(c)
    return out


def from_symmetric_basis(coeffs) -> WeylElem:
    acc = WeylElem.zero()
    for (p, q), c in coeffs.items():
        acc = acc + sym_gamma_monomial(p, q).scale(c)
    return acc


def symmetrized_raised_product(indices) -> WeylElem:
    """g^{(a_1} ... g^{a_j)}: symmetrized product of raised generators."""
    idx = tuple(indices)
    if not idx:
        return W_ONE
    acc = WeylElem.zero()
    total = Q(0)
    for perm in itertools.permutations(idx):
        acc = acc + weyl_product([gamma_raise(a) for a in perm])
        total += 1
    return acc.scale(1 / total)


def symmetrized_gamma_commutator(j):
    """Check the commutator of g^a with a symmetrized j-fold product.

    For every tuple (a, a_1..a_j) in {1,2}^{j+1} verifies

        g^a g^{(a_1}..g^{a_j)} - g^{(a_1}..g^{a_j)} g^a
            = 2j w^{a(a_1} g^{a_2}..g^{a_j)}

    as a normal-form identity.  Returns (True, None) or (False, tuple).
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    for a in (1, 2):
        ga = gamma_raise(a)
        for rest in itertools.product((1, 2), repeat=j):
            sym = symmetrized_raised_product(rest)
            lhs = weyl_mul(ga, sym) - weyl_mul(sym, ga)
            # symmetrize w^{a a_s} g^{rest minus s} over the j slots
            rhs = WeylElem.zero()
            for s in range(j):
                w = omega_upper(a, rest[s])
                if w:
                    tail = rest[:s] + rest[s + 1:]
                    rhs = rhs + symmetrized_raised_product(tail).scale(w)
            rhs = rhs.scale(Q(2 * j, j))  # 2j * average over the j slots
            if lhs != rhs:
                return False, (a,) + rest
    return True, None
