"""Polynomial-coefficient differential operators on spinor fields.

An operator is a sum of terms

    p(y) * W * d^beta,        p in Q[y1,y2],  W a normal-ordered Weyl
                              element acting on the Fock variable,
                              beta a derivative multi-index in y,

stored in canonical normal form (coefficients left, Weyl part
normal-ordered, derivatives right).  Operator equality is normal-form
equality.  Composition uses the Leibniz rule on the polynomial
coefficients; application is compatible with composition.

The symplectic Dirac operator is D = g2 d/dy1 - g1 d/dy2 (in the Fock
model: x d/dy1 - 2 d/dx d/dy2), mapping weight -3/4 fields to weight
-9/4 fields.  Right division by D — the operational meaning of working
modulo trivial symmetries — exploits that right-composition with D
never touches the polynomial coefficients, so the linear system splits
into one small exact block per y-monomial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import linalg
from .poly import Poly, Q, as_q, deglex_key
from .spinor import SpinorField, W_MINUS_3_4, W_MINUS_9_4
from .weyl import WeylElem, weyl_mul, to_symmetric_basis

BETA_ZERO = (0, 0)


def _combine_weight(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise ValueError("weight mismatch: %s vs %s" % (a, b))


class DiffOp:
    """terms: dict beta -> dict (i, j) -> YPoly coefficient."""

    __slots__ = ("terms", "weight_in", "weight_out")

    def __init__(self, terms=None, weight_in=None, weight_out=None):
        clean = {}
        if terms:
            for beta, wmap in terms.items():
                b = (int(beta[0]), int(beta[1]))
                sub = {}
                for key, p in wmap.items():
                    if not isinstance(p, Poly):
                        p = Poly.const(2, p)
                    if not p.is_zero():
                        sub[(int(key[0]), int(key[1]))] = p
                if sub:
                    clean[b] = sub
        self.terms = clean
        self.weight_in = None if weight_in is None else as_q(weight_in)
        self.weight_out = None if weight_out is None else as_q(weight_out)

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(weight_in=None, weight_out=None):
        return DiffOp(None, weight_in, weight_out)

    @staticmethod
    def identity(weight=None):
        return DiffOp({BETA_ZERO: {(0, 0): Poly.const(2, 1)}}, weight, weight)

    @staticmethod
    def from_weyl(w: WeylElem, weight_in=None, weight_out=None):
        return DiffOp({BETA_ZERO: dict(w.terms)}, weight_in, weight_out)

    @staticmethod
    def from_poly(p: Poly, weight_in=None, weight_out=None):
        return DiffOp({BETA_ZERO: {(0, 0): p}}, weight_in, weight_out)

    @staticmethod
    def partial(a, weight_in=None, weight_out=None):
        """d/dy^a for a in {1, 2}."""
        beta = (1, 0) if a == 1 else (0, 1)
        return DiffOp({beta: {(0, 0): Poly.const(2, 1)}}, weight_in, weight_out)

    @staticmethod
    def scalar(c, weight=None):
        return DiffOp({BETA_ZERO: {(0, 0): Poly.const(2, c)}}, weight, weight)

    # -- structure -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def order(self):
        return max((b[0] + b[1] for b in self.terms), default=-1)

    def ydeg(self):
        d = -1
        for wmap in self.terms.values():
            for p in wmap.values():
                d = max(d, p.degree())
        return d

    def gamma_deg(self):
        d = -1
        for wmap in self.terms.values():
            for (i, j) in wmap:
                d = max(d, i + j)
        return d

    def layer(self, k):
        """Terms of exact derivative order k."""
        return DiffOp({b: w for b, w in self.terms.items() if b[0] + b[1] == k},
                      self.weight_in, self.weight_out)

    def coefficient(self, beta, key) -> Poly:
        return self.terms.get(tuple(beta), {}).get(tuple(key), Poly.zero(2))

    # -- linear algebra -------------------------------------------------

    def __add__(self, other):
        win = _combine_weight(self.weight_in, other.weight_in)
        wout = _combine_weight(self.weight_out, other.weight_out)
        t = {b: dict(w) for b, w in self.terms.items()}
        for b, wmap in other.terms.items():
            sub = t.setdefault(b, {})
            for k, p in wmap.items():
                s = sub.get(k, Poly.zero(2)) + p
                if s.is_zero():
                    sub.pop(k, None)
                else:
                    sub[k] = s
            if not sub:
                del t[b]
        out = DiffOp.__new__(DiffOp)
        out.terms = t
        out.weight_in, out.weight_out = win, wout
        return out

    def __neg__(self):
        out = DiffOp.__new__(DiffOp)
        out.terms = {b: {k: -p for k, p in w.items()} for b, w in self.terms.items()}
        out.weight_in, out.weight_out = self.weight_in, self.weight_out
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_q(c)
        out = DiffOp.__new__(DiffOp)
        if not c:
            out.terms = {}
        else:
            out.terms = {b: {k: p.scale(c) for k, p in w.items()}
                         for b, w in self.terms.items()}
        out.weight_in, out.weight_out = self.weight_in, self.weight_out
        return out

    def left_mul_poly(self, p: Poly):
        """Multiply the output by a base polynomial."""
        if p.is_zero():
            return DiffOp.zero(self.weight_in, self.weight_out)
        t = {}
        for b, wmap in self.terms.items():
            sub = {}
            for k, q in wmap.items():
                pq = p * q
                if not pq.is_zero():
                    sub[k] = pq
            if sub:
                t[b] = sub
        out = DiffOp.__new__(DiffOp)
        out.terms = t
        out.weight_in, out.weight_out = self.weight_in, self.weight_out
        return out

    def left_mul_weyl(self, w: WeylElem):
        """Compose with a fiberwise Weyl element on the left."""
        t = {}
        for b, wmap in self.terms.items():
            sub = {}
            for k, p in wmap.items():
                prod = weyl_mul(w, WeylElem.monomial(k[0], k[1]))
                for kk, c in prod.terms.items():
                    s = sub.get(kk, Poly.zero(2)) + p.scale(c)
                    if s.is_zero():
                        sub.pop(kk, None)
                    else:
                        sub[kk] = s
            if sub:
                t[b] = sub
        out = DiffOp.__new__(DiffOp)
        out.terms = t
        out.weight_in, out.weight_out = self.weight_in, self.weight_out
        return out

    def with_weights(self, weight_in, weight_out):
        out = DiffOp.__new__(DiffOp)
        out.terms = self.terms
        out.weight_in = None if weight_in is None else as_q(weight_in)
        out.weight_out = None if weight_out is None else as_q(weight_out)
        return out

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.terms == other.terms

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for b in sorted(self.terms, key=deglex_key):
            for k in sorted(self.terms[b], key=lambda x: (x[0] + x[1], x)):
                p = self.terms[b][k]
                chunk = "(%s)" % p
                if k != (0, 0):
                    chunk += "*[%s]" % WeylElem.monomial(k[0], k[1])
                if b[0]:
                    chunk += "*d1" if b[0] == 1 else "*d1^%d" % b[0]
                if b[1]:
                    chunk += "*d2" if b[1] == 1 else "*d2^%d" % b[1]
                parts.append(chunk)
        return " + ".join(parts)

    # -- action ----------------------------------------------------------

    def apply(self, phi: SpinorField) -> SpinorField:
        if self.weight_in is not None and phi.weight != self.weight_in:
            raise ValueError("operator expects weight %s, field has %s"
                             % (self.weight_in, phi.weight))
        wout = self.weight_out if self.weight_out is not None else phi.weight
        acc = SpinorField.zero(wout)
        for b, wmap in self.terms.items():
            d = phi
            for _ in range(b[0]):
                d = d.diff_y(1)
            for _ in range(b[1]):
                d = d.diff_y(2)
            if d.is_zero():
                continue
            for k, p in wmap.items():
                piece = d.weyl_act(WeylElem.monomial(k[0], k[1])).mul_ypoly(p)
                acc = acc + piece.with_weight(wout)
        return acc


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Normal form of the composition a o b (b acts first)."""
    _combine_weight(a.weight_in, b.weight_out)
    t = {}
    for beta_a, wa in a.terms.items():
        for beta_b, wb in b.terms.items():
            for alpha in itertools.product(range(beta_a[0] + 1), range(beta_a[1] + 1)):
                cbin = Q(comb(beta_a[0], alpha[0]) * comb(beta_a[1], alpha[1]))
                beta = (beta_a[0] - alpha[0] + beta_b[0],
                        beta_a[1] - alpha[1] + beta_b[1])
                for ka, pa in wa.items():
                    for kb, pb in wb.items():
                        q = pb
                        for _ in range(alpha[0]):
                            q = q.diff(0)
                        for _ in range(alpha[1]):
                            q = q.diff(1)
                        if q.is_zero():
                            continue
                        coeff = (pa * q).scale(cbin)
                        prod = weyl_mul(WeylElem.monomial(*ka), WeylElem.monomial(*kb))
                        sub = t.setdefault(beta, {})
                        for kk, cw in prod.terms.items():
                            s = sub.get(kk, Poly.zero(2)) + coeff.scale(cw)
                            if s.is_zero():
                                sub.pop(kk, None)
                            else:
                                sub[kk] = s
    t = {bb: ww for bb, ww in t.items() if ww}
    out = DiffOp.__new__(DiffOp)
    out.terms = t
    out.weight_in = b.weight_in
    out.weight_out = a.weight_out
    return out


def dirac() -> DiffOp:
    """The symplectic Dirac operator g2 d1 - g1 d2 on weight -3/4 fields."""
    return DiffOp(
        {(1, 0): {(1, 0): Poly.const(2, 1)},
         (0, 1): {(0, 1): Poly.const(2, -1)}},
        weight_in=W_MINUS_3_4, weight_out=W_MINUS_9_4,
    )


# -- right division by the Dirac operator ------------------------------

@dataclass
class DivisionResult:
    status: str                 # "ok" or "infeasible-within-bounds"
    quotient: DiffOp | None
    caps: dict
    detail: str = ""

    def __bool__(self):
        return self.status == "ok"


def _rmul_dirac_images(key):
    """Images of the unit term (i, j, beta) under right-composition with D.

    T o D never touches polynomial coefficients: each normal-form unit
    maps to at most three units, per  W g2 = g2^{i+1} g1^j + 2j g2^i g1^{j-1}
    and  W g1 = g2^i g1^{j+1}.
    """
    i, j, b = key
    out = [((i + 1, j, (b[0] + 1, b[1])), Q(1)),
           ((i, j + 1, (b[0], b[1] + 1)), Q(-1))]
    if j:
        out.append(((i, j - 1, (b[0] + 1, b[1])), Q(2 * j)))
    return out


def right_divide(r: DiffOp, order_cap=None, ydeg_cap=None, gamma_cap=None) -> DivisionResult:
    """Solve r = T o D for T within the ansatz caps, exactly.

    Defaults: order(T) <= order(r) - 1, ydeg(T) <= ydeg(r) + 2,
    gamma-degree(T) <= gamma-degree(r) + 2.  A failure is reported as
    inconclusive within the caps, never as a nonexistence theorem.
    The y-monomial blocks are independent, so each block is a small
    exact solve.
    """
    if r.weight_in is not None and r.weight_in != W_MINUS_3_4:
        raise ValueError("right division expects a weight -3/4 domain")
    if order_cap is None:
        order_cap = max(r.order() - 1, 0)
    if ydeg_cap is None:
        ydeg_cap = max(r.ydeg() + 2, 0)
    if gamma_cap is None:
        gamma_cap = max(r.gamma_deg() + 2, 0)
    caps = {"order": order_cap, "ydeg": ydeg_cap, "gamma": gamma_cap}

    if r.is_zero():
        return DivisionResult("ok", DiffOp.zero(W_MINUS_9_4, r.weight_out), caps)

    # split r into y-monomial blocks: (i, j, beta) -> coeff per monomial
    blocks = {}
    for b, wmap in r.terms.items():
        for k, p in wmap.items():
            for mono, c in p.terms.items():
                blocks.setdefault(mono, {})[(k[0], k[1], b)] = c

    unknown_keys = [
        (i, j, (b1, b2))
        for i in range(gamma_cap + 1)
        for j in range(gamma_cap + 1 - i)
        for b1 in range(order_cap + 1)
        for b2 in range(order_cap + 1 - b1)
    ]
    images = [_rmul_dirac_images(k) for k in unknown_keys]

    t_terms = {}
    for mono in sorted(blocks, key=deglex_key):
        if sum(mono) > ydeg_cap:
            return DivisionResult(
                "infeasible-within-bounds", None, caps,
                "monomial block y^%s exceeds the ydeg cap" % (mono,))
        rows_by_eq = {}
        for col, img in enumerate(images):
            for key, c in img:
                rows_by_eq.setdefault(key, {})[col] = c
        eq_keys = sorted(set(rows_by_eq) | set(blocks[mono]))
        rows = [rows_by_eq.get(k, {}) for k in eq_keys]
        rhs = [blocks[mono].get(k, Q(0)) for k in eq_keys]
        sol = linalg.solve(rows, rhs, len(unknown_keys))
        if sol is None:
            return DivisionResult(
                "infeasible-within-bounds", None, caps,
                "no quotient reproduces the y^%s block within the caps" % (mono,))
        for col, v in sol.items():
            if not v:
                continue
            i, j, b = unknown_keys[col]
            sub = t_terms.setdefault(b, {})
            p = sub.get((i, j), Poly.zero(2)) + Poly.monomial(mono, v)
            if p.is_zero():
                sub.pop((i, j), None)
            else:
                sub[(i, j)] = p

    quotient = DiffOp(t_terms, W_MINUS_9_4, r.weight_out)
    if compose(quotient, dirac().with_weights(W_MINUS_3_4, W_MINUS_9_4)) != r.with_weights(W_MINUS_3_4, r.weight_out):
        raise AssertionError("division verification failed; this is a bug")
    return DivisionResult("ok", quotient, caps)


def right_divide_modulo(target: DiffOp, generators, order_cap=None,
                        ydeg_cap=None, gamma_cap=None):
    """Solve  target = sum_m lambda_m generators[m] + T o D  exactly.

    Joint exact solve for the generator coefficients and the quotient.
    The T-unknowns are block-local in the y-monomial, the lambdas couple
    the blocks; ordering the columns block-first keeps the elimination
    cheap.  Returns (lambdas, T) or None.
    """
    gens = list(generators)
    if order_cap is None:
        order_cap = max(target.order() - 1,
                        max((g.order() - 1 for g in gens), default=0), 0)
    all_ops = [target] + gens
    if gamma_cap is None:
        gamma_cap = max(op.gamma_deg() for op in all_ops) + 2
    monos = set()
    for op in all_ops:
        for wmap in op.terms.values():
            for p in wmap.values():
                monos.update(p.terms)
    if ydeg_cap is not None:
        monos = {m for m in monos if sum(m) <= ydeg_cap}
    monos = sorted(monos, key=deglex_key)

    unit_keys = [
        (i, j, (b1, b2))
        for i in range(gamma_cap + 1)
        for j in range(gamma_cap + 1 - i)
        for b1 in range(order_cap + 1)
        for b2 in range(order_cap + 1 - b1)
    ]
    images = [_rmul_dirac_images(k) for k in unit_keys]
    ncols = len(monos) * len(unit_keys) + len(gens)
    lam0 = len(monos) * len(unit_keys)
    mono_index = {m: i for i, m in enumerate(monos)}

    rows_by_eq = {}

    def add(eq, col, c):
        row = rows_by_eq.setdefault(eq, {})
        s = row.get(col, Q(0)) + c
        if s:
            row[col] = s
        else:
            row.pop(col, None)

    for mi, mono in enumerate(monos):
        base = mi * len(unit_keys)
        for ui, img in enumerate(images):
            for key, c in img:
                add((mono, key), base + ui, c)
    for gi, g in enumerate(gens):
        for b, wmap in g.terms.items():
            for key, p in wmap.items():
                for mono, c in p.terms.items():
                    if mono in mono_index:
                        add((mono, (key[0], key[1], b)), lam0 + gi, c)
    rhs_map = {}
    for b, wmap in target.terms.items():
        for key, p in wmap.items():
            for mono, c in p.terms.items():
                if mono not in mono_index:
                    return None
                rhs_map[(mono, (key[0], key[1], b))] = c
    eq_keys = sorted(set(rows_by_eq) | set(rhs_map))
    rows = [rows_by_eq.get(k, {}) for k in eq_keys]
    rhs = [rhs_map.get(k, Q(0)) for k in eq_keys]
    sol = linalg.solve(rows, rhs, ncols)
    if sol is None:
        return None
    lambdas = [sol.get(lam0 + gi, Q(0)) for gi in range(len(gens))]
    t_terms = {}
    for col, v in sol.items():
        if col >= lam0 or not v:
            continue
        mi, ui = divmod(col, len(unit_keys))
        i, j, b = unit_keys[ui]
        sub = t_terms.setdefault(b, {})
        p = sub.get((i, j), Poly.zero(2)) + Poly.monomial(monos[mi], v)
        if p.is_zero():
            sub.pop((i, j), None)
        else:
            sub[(i, j)] = p
    return lambdas, DiffOp(t_terms, W_MINUS_9_4, target.weight_out)


# -- kernel of the Dirac operator --------------------------------------

def kernel_basis(ydeg, xdeg):
    """Exact basis of {phi : D phi = 0, y-degree <= ydeg, x-degree <= xdeg}.

    Monomials are ordered degree-lexicographically so the reduced basis
    is reproducible.  Image monomials beyond the caps still impose
    equations (no truncation of the constraint).
    """
    monos = [
        (d1, d2, m)
        for t in range(ydeg + 1)
        for d1 in range(t + 1)
        for d2 in (t - d1,)
        for m in range(xdeg + 1)
    ]
    monos.sort(key=lambda k: (k[0] + k[1] + k[2], k))
    index = {mk: i for i, mk in enumerate(monos)}
    d_op = dirac()
    rows_by_eq = {}
    for col, mk in enumerate(monos):
        img = d_op.apply(SpinorField.monomial(*mk, weight=W_MINUS_3_4))
        for key, c in img.terms.items():
            rows_by_eq.setdefault(key, {})[col] = c
    rows = [rows_by_eq[k] for k in sorted(rows_by_eq)]
    basis = []
    for vec in linalg.nullspace(rows, len(monos)):
        basis.append(SpinorField({monos[c]: v for c, v in vec.items()}, W_MINUS_3_4))
    return basis


# -- principal symbols ---------------------------------------------------

def _arrangements(ms):
    ones = sum(1 for a in ms if a == 1)
    return Q(comb(len(ms), ones))


def _beta_multiset(beta):
    return (1,) * beta[0] + (2,) * beta[1]


@dataclass
class SymbolComponent:
    gamma_degree: int
    pair: dict                      # (beta-multiset, gamma-multiset) -> YPoly
    cartan: dict = field(default_factory=dict)   # combined multiset -> YPoly
    has_complement: bool = False

    def cartan_is_zero(self):
        return all(p.is_zero() for p in self.cartan.values())


@dataclass
class SymbolDecomposition:
    order: int
    components: dict                # gamma degree -> SymbolComponent

    def component(self, g):
        return self.components.get(g)

    def gamma_degrees(self):
        return sorted(self.components)

    def scalar_part(self):
        """The gamma-degree-0 symbol as dict multiset -> YPoly."""
        comp = self.components.get(0)
        if comp is None:
            return {}
        return {bms: p for (bms, _), p in comp.pair.items()}


def principal_symbol(a: DiffOp) -> SymbolDecomposition:
    """Top-order term, split by gamma degree and into Cartan/complement.

    The Weyl part is expanded in the symmetric basis, the pair tensor is
    formed over (derivative indices, gamma indices), and the Cartan part
    is the fully symmetric projection: restricting the bihomogeneous
    form to the diagonal kills exactly the trace (omega-contraction)
    complement, so the diagonal restriction is the Cartan component.
    """
    k = a.order()
    if k < 0:
        return SymbolDecomposition(k, {})
    pair_by_g = {}
    for beta, wmap in a.layer(k).terms.items():
        bms = _beta_multiset(beta)
        # to_symmetric_basis works over Q, so expand each y-monomial
        # slice of the Weyl coefficient separately
        slices = {}
        for key, p in wmap.items():
            for mono, c in p.terms.items():
                slices.setdefault(mono, {})[key] = c
        for mono, terms in slices.items():
            sym = to_symmetric_basis(WeylElem(terms))
            for (pcnt, qcnt), c in sym.items():
                g = pcnt + qcnt
                gms = (1,) * qcnt + (2,) * pcnt
                tensors = pair_by_g.setdefault(g, {})
                norm = _arrangements(bms) * _arrangements(gms)
                key2 = (bms, gms)
                p0 = tensors.get(key2, Poly.zero(2))
                tensors[key2] = p0 + Poly.monomial(mono, c / norm)
    components = {}
    for g, pair in pair_by_g.items():
        pair = {kk: p for kk, p in pair.items() if not p.is_zero()}
        if not pair:
            continue
        # diagonal restriction -> symmetric (k+g)-tensor
        diag = {}
        for (bms, gms), p in pair.items():
            e = tuple(sorted(bms + gms))
            w = _arrangements(bms) * _arrangements(gms)
            diag[e] = diag.get(e, Poly.zero(2)) + p.scale(w)
        cartan = {ms: p.scale(1 / _arrangements(ms))
                  for ms, p in diag.items() if not p.is_zero()}
        # embed the Cartan part back (fully symmetric tensor viewed as a
        # pair tensor: every split carries the same component) and compare
        keys = set(pair)
        for ms in cartan:
            keys.update(_splits(ms, k))
        has_complement = any(
            pair.get(key, Poly.zero(2)) != cartan.get(tuple(sorted(key[0] + key[1])),
                                                      Poly.zero(2))
            for key in keys
        )
        components[g] = SymbolComponent(g, pair, cartan, has_complement)
    return SymbolDecomposition(k, components)


def _splits(ms, k):
    """Distinct (size-k, rest) multiset splits of a combined multiset."""
    seen = set()
    idx = range(len(ms))
    for pick in itertools.combinations(idx, k):
        left = tuple(sorted(ms[i] for i in pick))
        right = tuple(sorted(ms[i] for i in idx if i not in pick))
        seen.add((left, right))
    return seen


# -- order obstruction (non-scalar symbols don't drop order) -------------

@dataclass
class ObstructionReport:
    certified: bool
    caps: dict
    detail: str = ""


def obstruction_order_check(a: DiffOp, order_cap=None, ydeg_cap=None,
                            gamma_cap=None) -> ObstructionReport:
    """Certify that no O' within the caps makes D o a - O' o D drop order.

    Precondition: the principal symbol of ``a`` has a nonzero Cartan
    component in gamma degree >= 1.  The certificate is infeasibility of
    the exact linear system matching the top-order layer of D o a
    against right-composites O' o D; it is a bounded-ansatz statement
    and is reported as such.
    """
    sym = principal_symbol(a)
    if not any(g >= 1 and not comp.cartan_is_zero()
               for g, comp in sym.components.items()):
        raise ValueError("precondition: principal symbol has no Cartan "
                         "gamma-component of positive degree")
    k = a.order()
    if order_cap is None:
        order_cap = k
    top = compose(dirac().with_weights(None, None), a.with_weights(None, None)).layer(k + 1)
    if ydeg_cap is None:
        ydeg_cap = top.ydeg() + 2
    if gamma_cap is None:
        gamma_cap = top.gamma_deg() + 2
    caps = {"order": order_cap, "ydeg": ydeg_cap, "gamma": gamma_cap}

    blocks = {}
    for b, wmap in top.terms.items():
        for key, p in wmap.items():
            for mono, c in p.terms.items():
                blocks.setdefault(mono, {})[(key[0], key[1], b)] = c

    # unknowns: top-order layer of O' (order == order_cap contributes to k+1
    # only when order_cap == k; lower layers cannot reach order k+1)
    unknown_keys = [
        (i, j, (b1, b2))
        for i in range(gamma_cap + 1)
        for j in range(gamma_cap + 1 - i)
        for b1 in range(k + 1)
        for b2 in (k - b1,)
        if b1 + b2 <= order_cap
    ]
    images = [_rmul_dirac_images(kk) for kk in unknown_keys]
    for mono in sorted(blocks, key=deglex_key):
        if sum(mono) > ydeg_cap:
            return ObstructionReport(
                True, caps,
                "top-order block y^%s cannot be produced within the ydeg cap" % (mono,))
        rows_by_eq = {}
        for col, img in enumerate(images):
            for key, c in img:
                rows_by_eq.setdefault(key, {})[col] = c
        eq_keys = sorted(set(rows_by_eq) | set(blocks[mono]))
        rows = [rows_by_eq.get(kk, {}) for kk in eq_keys]
        rhs = [blocks[mono].get(kk, Q(0)) for kk in eq_keys]
        if linalg.solve(rows, rhs, len(unknown_keys)) is None:
            return ObstructionReport(
                True, caps,
                "top layer of the composition is not right-divisible: "
                "block y^%s infeasible" % (mono,))
    return ObstructionReport(False, caps, "a top-order cancellation exists; "
                                          "no obstruction within these caps")
