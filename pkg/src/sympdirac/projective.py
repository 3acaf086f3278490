"""Flat projective structure on the plane.

Scale changes are parametrized by a one-form Upsilon; the transformed
covariant derivative acts on densities, vectors, covectors and spinor
fields by the standard projective rules, with the spinor rule

    hat-nabla_a phi = nabla_a phi + (w + 1/4) Upsilon_a phi
                      - 1/4 g_a (Upsilon_s g^s) phi      on S(w).

The first BGG operator on symmetric k-tensors is realized in the flat
scale with all indices lowered by the symplectic form: the full
symmetrization of (k+1) derivatives, a rank-(2k+1) symmetric tensor.
Its polynomial solution spaces have dimension (k+1)^3.

The last section treats the first-order-symmetry symbol system on flat
R^{2n} (n >= 2): sym(grad grad v) = 0 together with the vanishing of
the trace-free part of the raised curl, its prolongation connection,
and the differential splitting onto parallel sections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from . import linalg
from .diffop import DiffOp, compose
from .poly import Poly, Q, as_q, deglex_key
from .spinor import SpinorField
from .weyl import (WeylElem, gamma_lower, gamma_raise, lower_index,
                   omega_lower, omega_upper)


# -- scale changes ------------------------------------------------------

class Upsilon:
    """A one-form (U_1, U_2) with polynomial components.

    When generated from a potential g via U_a = d_a g the form is closed;
    that generator form is what the invariance tests use, but the
    algebraic transformation rules make sense for any one-form.
    """

    __slots__ = ("components",)

    def __init__(self, u1: Poly, u2: Poly):
        self.components = (u1, u2)

    @staticmethod
    def from_potential(g: Poly) -> "Upsilon":
        return Upsilon(g.diff(0), g.diff(1))

    @staticmethod
    def constant(c1, c2) -> "Upsilon":
        return Upsilon(Poly.const(2, c1), Poly.const(2, c2))

    @staticmethod
    def zero() -> "Upsilon":
        return Upsilon(Poly.zero(2), Poly.zero(2))

    def __getitem__(self, a) -> Poly:
        return self.components[a - 1]

    def is_closed(self):
        return self[1].diff(1) == self[2].diff(0)

    def is_zero(self):
        return self[1].is_zero() and self[2].is_zero()


def hat_derivative(upsilon: Upsilon, kind: str, obj, w=Q(0), a=1):
    """nabla-hat_a of a density, vector, covector or spinor of weight w.

    Densities: d_a + w U_a.  Vectors: add U_a V^b + (U_c V^c) delta_a^b.
    Covectors: subtract U_a m_b + U_b m_a.  Spinors follow the weighted
    rule quoted in the module docstring.  Vectors/covectors may carry an
    extra density weight w on top of their tensor type.
    """
    u = upsilon
    w = as_q(w)
    if kind == "density":
        return obj.diff(a - 1) + (u[a] * obj).scale(w)
    if kind == "vector":
        v1, v2 = obj
        trace = u[1] * v1 + u[2] * v2
        r1 = v1.diff(a - 1) + u[a] * v1 + (u[a] * v1).scale(w)
        r2 = v2.diff(a - 1) + u[a] * v2 + (u[a] * v2).scale(w)
        if a == 1:
            r1 = r1 + trace
        else:
            r2 = r2 + trace
        return (r1, r2)
    if kind == "covector":
        m1, m2 = obj
        ma = m1 if a == 1 else m2
        r1 = m1.diff(a - 1) - u[a] * m1 - u[1] * ma + (u[a] * m1).scale(w)
        r2 = m2.diff(a - 1) - u[a] * m2 - u[2] * ma + (u[a] * m2).scale(w)
        return (r1, r2)
    if kind == "spinor":
        phi = obj
        w = phi.weight
        out = phi.diff_y(a)
        out = out + phi.mul_ypoly(u[a]).scale(w + Q(1, 4))
        # - 1/4 g_a (U_s g^s) phi
        corr = SpinorField.zero(phi.weight)
        for s in (1, 2):
            if u[s].is_zero():
                continue
            from .weyl import weyl_mul
            g = weyl_mul(gamma_lower(a), gamma_raise(s))
            corr = corr + phi.weyl_act(g).mul_ypoly(u[s])
        return out - corr.scale(Q(1, 4))
    raise ValueError("unsupported object kind: %r" % kind)


def spinor_hat_correction(upsilon: Upsilon, w, a) -> DiffOp:
    """The zero-order operator nabla-hat_a - nabla_a on S(w)."""
    u = upsilon
    out = DiffOp.from_poly(u[a]).scale(as_q(w) + Q(1, 4))
    for s in (1, 2):
        if u[s].is_zero():
            continue
        from .weyl import weyl_mul
        g = weyl_mul(gamma_lower(a), gamma_raise(s))
        out = out - DiffOp.from_weyl(g).left_mul_poly(u[s]).scale(Q(1, 4))
    return out


def dirac_invariance_defect(upsilon: Upsilon, w) -> DiffOp:
    """g^a nabla-hat_a - g^a nabla_a as a zero-order operator on S(w).

    Equals (w + 3/4) U_s g^s id; in particular zero exactly at w = -3/4.
    The engine assembles it from the transformation rule, not from the
    closed form, so comparing the two is a real check.
    """
    acc = DiffOp.zero()
    for a in (1, 2):
        acc = acc + compose(DiffOp.from_weyl(gamma_raise(a)),
                            spinor_hat_correction(upsilon, w, a))
    return acc


def upsilon_gamma(upsilon: Upsilon) -> DiffOp:
    """U_s g^s as a zero-order operator."""
    acc = DiffOp.zero()
    for s in (1, 2):
        acc = acc + DiffOp.from_weyl(gamma_raise(s)).left_mul_poly(upsilon[s])
    return acc


# -- Schouten tensor ------------------------------------------------------

@dataclass
class Schouten:
    """Symmetric 2-tensor P_ab of base polynomials; flat scale has P = 0."""

    p11: Poly
    p12: Poly
    p22: Poly

    @staticmethod
    def zero():
        z = Poly.zero(2)
        return Schouten(z, z, z)

    def __getitem__(self, ab):
        a, b = ab
        if (a, b) in ((1, 1),):
            return self.p11
        if (a, b) in ((1, 2), (2, 1)):
            return self.p12
        return self.p22

    def is_zero(self):
        return self.p11.is_zero() and self.p12.is_zero() and self.p22.is_zero()


def schouten_hat(upsilon: Upsilon) -> Schouten:
    """Schouten tensor of the Upsilon-changed scale, from the flat scale.

    P-hat_ab = -d_a U_b + U_a U_b; requires a potential-generated (closed)
    Upsilon so the result is symmetric.
    """
    if not upsilon.is_closed():
        raise ValueError("schouten_hat needs a closed (potential-generated) Upsilon")
    u = upsilon
    return Schouten(
        -u[1].diff(0) + u[1] * u[1],
        -u[2].diff(0) + u[1] * u[2],
        -u[2].diff(1) + u[2] * u[2],
    )


# -- symmetric tensor fields and the BGG operators -------------------------

def multisets(k):
    """Sorted index multisets over {1, 2} of length k."""
    return [tuple([1] * (k - i) + [2] * i) for i in range(k + 1)]


def arrangements(ms) -> Fraction:
    ones = sum(1 for a in ms if a == 1)
    return Q(comb(len(ms), ones))


class SymTensorField:
    """Symmetric rank-k tensor with polynomial entries and a weight tag."""

    __slots__ = ("rank", "entries", "weight")

    def __init__(self, rank, entries=None, weight=Q(0)):
        self.rank = rank
        self.weight = as_q(weight)
        clean = {}
        if entries:
            for ms, p in entries.items():
                key = tuple(sorted(ms))
                if len(key) != rank:
                    raise ValueError("index multiset has wrong length")
                if not isinstance(p, Poly):
                    p = Poly.const(2, p)
                if not p.is_zero():
                    clean[key] = clean.get(key, Poly.zero(2)) + p
        self.entries = {k: p for k, p in clean.items() if not p.is_zero()}

    @staticmethod
    def zero(rank, weight=Q(0)):
        return SymTensorField(rank, None, weight)

    def __getitem__(self, ms) -> Poly:
        return self.entries.get(tuple(sorted(ms)), Poly.zero(2))

    def is_zero(self):
        return not self.entries

    def __add__(self, other):
        if self.rank != other.rank or self.weight != other.weight:
            raise ValueError("rank/weight mismatch")
        e = dict(self.entries)
        for k, p in other.entries.items():
            s = e.get(k, Poly.zero(2)) + p
            if s.is_zero():
                e.pop(k, None)
            else:
                e[k] = s
        return SymTensorField(self.rank, e, self.weight)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return SymTensorField(self.rank, {k: p.scale(c) for k, p in self.entries.items()},
                              self.weight)

    def __eq__(self, other):
        return (isinstance(other, SymTensorField) and self.rank == other.rank
                and self.entries == other.entries)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        if not self.entries:
            return "SymTensor(rank=%d, 0)" % self.rank
        inner = ", ".join("%s: %s" % (ms, p) for ms, p in sorted(self.entries.items()))
        return "SymTensor(rank=%d, {%s})" % (self.rank, inner)

    def degree(self):
        return max((p.degree() for p in self.entries.values()), default=-1)


def vector_field(p1, p2, weight=Q(0)) -> SymTensorField:
    if not isinstance(p1, Poly):
        p1 = Poly.const(2, p1)
    if not isinstance(p2, Poly):
        p2 = Poly.const(2, p2)
    return SymTensorField(1, {(1,): p1, (2,): p2}, weight)


def lower_all(sigma: SymTensorField):
    """All-indices-lowered components (dict multiset -> Poly), v_a = w_{ba} v^b."""
    k = sigma.rank
    if k == 0:
        return {(): sigma[()]}
    out = {}
    for tgt in itertools.product((1, 2), repeat=k):
        p = Poly.zero(2)
        for src in itertools.product((1, 2), repeat=k):
            c = Q(1)
            for b, a in zip(src, tgt):
                c *= omega_lower(b, a)
                if not c:
                    break
            if c:
                p = p + sigma[tuple(sorted(src))].scale(c)
        key = tuple(sorted(tgt))
        out[key] = p  # symmetric: every arrangement gives the same value
    return out


def phi(k, sigma: SymTensorField) -> SymTensorField:
    """First BGG operator in the flat scale, all indices lowered.

    Full symmetrization of the (k+1)-fold derivative of the lowered
    tensor; a rank-(2k+1) symmetric tensor.  For k = 0 this is the
    gradient.
    """
    if sigma.rank != k:
        raise ValueError("rank mismatch: expected %d, got %d" % (k, sigma.rank))
    low = lower_all(sigma)
    rank_out = 2 * k + 1
    buckets = {}
    for tau in itertools.product((1, 2), repeat=rank_out):
        c_idx, a_idx = tau[:k + 1], tau[k + 1:]
        p = low[tuple(sorted(a_idx))]
        for c in c_idx:
            p = p.diff(c - 1)
        if p.is_zero():
            continue
        ms = tuple(sorted(tau))
        buckets[ms] = buckets.get(ms, Poly.zero(2)) + p
    entries = {ms: p.scale(1 / arrangements(ms)) for ms, p in buckets.items()}
    return SymTensorField(rank_out, entries, sigma.weight - 3 * (k + 1))


def phi_tf1(sigma: SymTensorField):
    """Trace-free form of the k = 1 BGG operator: tf(d_(b d_c) sigma^a).

    Returns dict (b, c, a) -> Poly with (b, c) symmetric; used by the
    splitting-derivative and symbol-obstruction identities where the
    mixed-index normalization matters.
    """
    if sigma.rank != 1:
        raise ValueError("rank-1 input required")
    div = sigma[(1,)].diff(0) + sigma[(2,)].diff(1)
    t = {1: div.diff(0), 2: div.diff(1)}
    out = {}
    for b, c in ((1, 1), (1, 2), (2, 2)):
        for a in (1, 2):
            p = sigma[(a,)].diff(b - 1).diff(c - 1)
            corr = Poly.zero(2)
            if a == c:
                corr = corr + t[b]
            if a == b:
                corr = corr + t[c]
            out[(b, c, a)] = p - corr.scale(Q(1, 3))
    return out


def solve_phi(k, degcap):
    """Exact polynomial solution space of phi_k = 0 up to entry degree degcap.

    Returns (basis, dim) with a canonical reduced basis; unknown monomial
    columns are ordered (component multiset, degree-lex monomial).
    """
    keys = [(ms, mono)
            for ms in multisets(k)
            for d in range(degcap + 1)
            for mono in sorted(((d1, d - d1) for d1 in range(d + 1)))]
    keys.sort(key=lambda t: (deglex_key(t[1]), t[0]))
    cols = {key: i for i, key in enumerate(keys)}
    rows_by_eq = {}
    for key, col in cols.items():
        ms, mono = key
        unit = SymTensorField(k, {ms: Poly.monomial(mono)})
        img = phi(k, unit)
        for ms_out, p in img.entries.items():
            for mono_out, c in p.terms.items():
                rows_by_eq.setdefault((ms_out, mono_out), {})[col] = c
    rows = [rows_by_eq[kk] for kk in sorted(rows_by_eq)]
    basis = []
    for vec in linalg.nullspace(rows, len(keys)):
        entries = {}
        for col, v in vec.items():
            ms, mono = keys[col]
            entries[ms] = entries.get(ms, Poly.zero(2)) + Poly.monomial(mono, v)
        basis.append(SymTensorField(k, entries))
    return basis, len(basis)


def bgg_solution_basis_rank1():
    """The canonical 8-dimensional rank-1 solution basis, graded by degree.

    Constant fields, the four linear fields, then the two quadratic
    special fields y^a y^1 and y^a y^2.  Each is verified to solve the
    rank-1 equation; together they span solve_phi(1, 2).
    """
    y1, y2 = Poly.variable(2, 0), Poly.variable(2, 1)
    z = Poly.zero(2)
    one = Poly.const(2, 1)
    fields = [
        vector_field(one, z), vector_field(z, one),
        vector_field(y1, z), vector_field(y2, z),
        vector_field(z, y1), vector_field(z, y2),
        vector_field(y1 * y1, y2 * y1), vector_field(y1 * y2, y2 * y2),
    ]
    for v in fields:
        if not phi(1, v).is_zero():
            raise AssertionError("canonical basis element fails the equation")
    return fields


# -- hatted-scale rank-1 BGG operator (cross-validation) -------------------

def phi1_hat(upsilon: Upsilon, v: SymTensorField):
    """tf(sym hat-nabla hat-nabla v + P-hat v) in the Upsilon-changed scale."""
    if v.rank != 1:
        raise ValueError("rank-1 input required")
    phat = schouten_hat(upsilon)
    u = upsilon
    vv = (v[(1,)], v[(2,)])
    # M^c_b = hat-nabla_b v^c
    M = {}
    for b in (1, 2):
        r = hat_derivative(u, "vector", vv, Q(0), b)
        M[(1, b)] = r[0]
        M[(2, b)] = r[1]
    # N^c_{ab} = hat-nabla_a M^c_b  with the (1,1)-tensor rule
    N = {}
    for a in (1, 2):
        for b in (1, 2):
            for c in (1, 2):
                val = M[(c, b)].diff(a - 1)
                # + U_r M^r_b delta^c_a - U_b M^c_a
                if c == a:
                    val = val + u[1] * M[(1, b)] + u[2] * M[(2, b)]
                val = val - u[b] * M[(c, a)]
                N[(c, a, b)] = val
    out = {}
    for a in (1, 2):
        for b in (1, 2):
            if (a, b) == (2, 1):
                continue
            for c in (1, 2):
                s = (N[(c, a, b)] + N[(c, b, a)]).scale(Q(1, 2)) + phat[(a, b)] * vv[c - 1]
                out[(c, a, b)] = s
    # trace-free part: subtract 1/3 (delta^c_a t_b + delta^c_b t_a)
    t = {}
    for b in (1, 2):
        t[b] = sum((out[(a, *sorted((a, b)))] for a in (1, 2)), Poly.zero(2))
    res = {}
    for a in (1, 2):
        for b in (1, 2):
            if (a, b) == (2, 1):
                continue
            for c in (1, 2):
                val = out[(c, a, b)]
                if c == a:
                    val = val - t[b].scale(Q(1, 3))
                if c == b:
                    val = val - t[a].scale(Q(1, 3))
                res[(c, a, b)] = val
    return res


def solve_phi1_hat(upsilon: Upsilon, degcap=2):
    """Polynomial solutions of the hatted rank-1 operator (exact)."""
    keys = [(comp, mono)
            for comp in (1, 2)
            for d in range(degcap + 1)
            for mono in sorted(((d1, d - d1) for d1 in range(d + 1)))]
    cols = {key: i for i, key in enumerate(keys)}
    rows_by_eq = {}
    for key, col in cols.items():
        comp, mono = key
        unit = vector_field(Poly.monomial(mono) if comp == 1 else Poly.zero(2),
                            Poly.monomial(mono) if comp == 2 else Poly.zero(2))
        img = phi1_hat(upsilon, unit)
        for idx, p in img.items():
            for mono_out, c in p.terms.items():
                rows_by_eq.setdefault((idx, mono_out), {})[col] = c
    rows = [rows_by_eq[kk] for kk in sorted(rows_by_eq)]
    basis = []
    for vec in linalg.nullspace(rows, len(keys)):
        comps = {1: Poly.zero(2), 2: Poly.zero(2)}
        for col, v in vec.items():
            comp, mono = keys[col]
            comps[comp] = comps[comp] + Poly.monomial(mono, v)
        basis.append(vector_field(comps[1], comps[2]))
    return basis, len(basis)


# -- the flat symplectic symbol system on R^{2n} ---------------------------

def omega_2n(n):
    """The block symplectic form on R^{2n}: w_{i, n+i} = 1 (0-based matrix)."""
    dim = 2 * n
    m = [[Q(0)] * dim for _ in range(dim)]
    for i in range(n):
        m[i][n + i] = Q(1)
        m[n + i][i] = Q(-1)
    return m


def _sym_system_equations(n, v):
    """Residuals of both equations for a covector field v (list of Polys)."""
    dim = 2 * n
    w = omega_2n(n)
    eqs = []
    # sym(d_a d_b v_c) = 0 over sorted triples
    for a in range(dim):
        for b in range(a, dim):
            for c in range(b, dim):
                acc = Poly.zero(dim)
                for (x, y, zz) in set(itertools.permutations((a, b, c))):
                    acc = acc + v[zz].diff(x).diff(y)
                eqs.append(acc)
    # trace-free part of the raised curl: A^{ab} - (tr/2n) w^{ab},
    # with v^a = w^{ab} v_b and d^a = w^{ab} d_b (upper form = same block matrix)
    vup = [sum((v[b].scale(w[a][b]) for b in range(dim)), Poly.zero(dim)) for a in range(dim)]
    def dup(p, a):
        return sum((p.diff(b).scale(w[a][b]) for b in range(dim)), Poly.zero(dim))
    A = {}
    for a in range(dim):
        for b in range(a + 1, dim):
            A[(a, b)] = (dup(vup[b], a) - dup(vup[a], b)).scale(Q(1, 2))
    trace = Poly.zero(dim)
    for a in range(dim):
        for b in range(dim):
            if w[a][b]:
                aa, bb = min(a, b), max(a, b)
                s = A[(aa, bb)] if a < b else A[(aa, bb)].scale(-1)
                trace = trace + s.scale(w[a][b])
    # w_{ab} A^{ab} = trace with lower w; lower and upper blocks coincide here
    for a in range(dim):
        for b in range(a + 1, dim):
            eqs.append(A[(a, b)] - trace.scale(Q(w[a][b], 1) / Q(2 * n)))
    return eqs


def solve_symplectic_system(n, degcap):
    """Exact polynomial solutions of the flat symbol system on R^{2n}.

    Rejects n = 1, where the second equation is vacuous and the system
    degenerates to the projective one.
    """
    if n < 2:
        raise ValueError("the system is stated for 2n > 2; use the BGG solver for n = 1")
    dim = 2 * n
    monos = [m for d in range(degcap + 1)
             for m in sorted(itertools.product(range(d + 1), repeat=dim))
             if sum(m) == d]
    keys = [(c, mono) for c in range(dim) for mono in monos]
    cols = {key: i for i, key in enumerate(keys)}
    rows_by_eq = {}
    for key, col in cols.items():
        comp, mono = key
        v = [Poly.zero(dim) for _ in range(dim)]
        v[comp] = Poly.monomial(mono)
        for eq_i, p in enumerate(_sym_system_equations(n, v)):
            for mono_out, c in p.terms.items():
                rows_by_eq.setdefault((eq_i, mono_out), {})[col] = c
    rows = [rows_by_eq[kk] for kk in sorted(rows_by_eq)]
    basis = []
    for vec in linalg.nullspace(rows, len(keys)):
        v = [Poly.zero(dim) for _ in range(dim)]
        for col, val in vec.items():
            comp, mono = keys[col]
            v[comp] = v[comp] + Poly.monomial(mono, val)
        basis.append(tuple(v))
    return basis, len(basis)


def symplectic_splitting(n, v):
    """v -> (v, sym grad v, (1/(2n)) w^{kl} d_k v_l).

    The scalar slot is the omega-component of the curl; with the block
    convention here the correct normalization is 1/(2n) (the one that
    makes images of solutions parallel and the top-slot projection a
    two-sided inverse).
    """
    dim = 2 * n
    w = omega_2n(n)
    wsym = {}
    for a in range(dim):
        for b in range(a, dim):
            wsym[(a, b)] = (v[a].diff(b) + v[b].diff(a)).scale(Q(1, 2))
    scalar = Poly.zero(dim)
    for k in range(dim):
        for l in range(dim):
            if w[k][l]:
                scalar = scalar + v[l].diff(k).scale(w[k][l])
    return tuple(v), wsym, scalar.scale(Q(1, 2 * n))


def prolongation_is_parallel(n, v, wsym, scalar):
    """Whether (v, w, phi) is parallel for the prolongation connection."""
    dim = 2 * n
    w = omega_2n(n)
    for c in range(dim):
        for a in range(dim):
            key = (min(c, a), max(c, a))
            res = v[a].diff(c) - wsym[key] - scalar.scale(w[c][a])
            if not res.is_zero():
                return False
    for key, p in wsym.items():
        for c in range(dim):
            if not p.diff(c).is_zero():
                return False
    for c in range(dim):
        if not scalar.diff(c).is_zero():
            return False
    return True


def prolongation_parallel(n, degcap):
    """Exact parallel sections of the prolongation connection.

    Solves  d_c v_a = w_ca + phi omega_ca,  dw = 0,  dphi = 0  with
    polynomial unknowns; returns (basis, dim) where each basis element
    is the triple (v, w, phi).
    """
    if n < 2:
        raise ValueError("the system is stated for 2n > 2")
    dim = 2 * n
    w = omega_2n(n)
    monos = [m for d in range(degcap + 1)
             for m in sorted(itertools.product(range(d + 1), repeat=dim))
             if sum(m) == d]
    keys = []
    for c in range(dim):
        keys += [("v", c, mono) for mono in monos]
    for a in range(dim):
        for b in range(a, dim):
            keys += [("w", (a, b), mono) for mono in monos]
    keys += [("s", None, mono) for mono in monos]
    cols = {key: i for i, key in enumerate(keys)}

    rows_by_eq = {}

    def add(eq, col, c):
        rows_by_eq.setdefault(eq, {})[col] = rows_by_eq.setdefault(eq, {}).get(col, Q(0)) + c

    for key, col in cols.items():
        tag, which, mono = key
        p = Poly.monomial(mono)
        if tag == "v":
            for c in range(dim):
                d = p.diff(c)
                for mo, cc in d.terms.items():
                    add(("v", c, which, mo), col, cc)
        elif tag == "w":
            a, b = which
            for c in range(dim):
                for mo, cc in p.diff(c).terms.items():
                    add(("wconst", which, c, mo), col, cc)
            for c in range(dim):
                for aa in range(dim):
                    if (min(c, aa), max(c, aa)) == which:
                        for mo, cc in p.terms.items():
                            add(("v", c, aa, mo), col, -cc)
        else:
            for c in range(dim):
                for mo, cc in p.diff(c).terms.items():
                    add(("sconst", c, mo), col, cc)
            for c in range(dim):
                for aa in range(dim):
                    if w[c][aa]:
                        for mo, cc in p.terms.items():
                            add(("v", c, aa, mo), col, -cc * w[c][aa])
    rows = [rows_by_eq[kk] for kk in sorted(rows_by_eq, key=repr)]
    basis = []
    for vec in linalg.nullspace(rows, len(keys)):
        v = [Poly.zero(dim) for _ in range(dim)]
        ws = {(a, b): Poly.zero(dim) for a in range(dim) for b in range(a, dim)}
        s = Poly.zero(dim)
        for col, val in vec.items():
            tag, which, mono = keys[col]
            if tag == "v":
                v[which] = v[which] + Poly.monomial(mono, val)
            elif tag == "w":
                ws[which] = ws[which] + Poly.monomial(mono, val)
            else:
                s = s + Poly.monomial(mono, val)
        basis.append((tuple(v), ws, s))
    return basis, len(basis)
