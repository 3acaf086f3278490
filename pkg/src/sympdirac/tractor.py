"""Projective tractor calculus on the flat plane, realized concretely.

The standard tractor bundle is trivialized as column vectors
(s^1, s^2, r); its dual pairs by the plain dot product, which fixes the
injector normalization.  Adjoint tractors are trace-free 3x3 matrices
with slot layout

        [ mu^1_1  mu^1_2  v^1 ]
        [ mu^2_1  mu^2_2  v^2 ]      (row = upper index, col = lower),
        [ rho_1   rho_2   phi ]

and the flat-scale tractor connection is  nabla_c = d_c + ad(Gamma_c)
with Gamma_c = E_{c,3}.  The connection is flat, so the polynomial frame

        U(y) = [[1, 0, -y1], [0, 1, -y2], [0, 0, 1]]

is parallel; conjugating by it (the "parallel gauge") turns the coupled
covariant derivative into the plain entrywise derivative.  Consequences
used throughout:

  * a section is parallel iff its gauge matrix is constant — parallel
    adjoint tractors are literally sl(3, Q) matrices;
  * matrices of operators compose entrywise in the gauge, with no
    connection bookkeeping, which is exactly the composition rule the
    operator identities in :mod:`sympdirac.symmetry` are stated with.

Scale-slot pictures (for the component formulas quoted in docstrings
and reports) are recovered by undressing.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .diffop import DiffOp, compose, dirac
from .poly import Poly, Q, as_q
from .projective import (SymTensorField, Upsilon, phi, spinor_hat_correction,
                         vector_field)
from .spinor import SpinorField, W_MINUS_3_4, W_MINUS_9_4
from .weyl import WeylElem, gamma_lower, gamma_raise, weyl_mul

# -- numeric injectors and the gauge -----------------------------------

def _unit(i, j):
    m = [[Q(0)] * 3 for _ in range(3)]
    m[i][j] = Q(1)
    return m


def inj_Y(a):
    """Adjoint injector carrying the top (vector) slot, a in {1, 2}."""
    return _unit(a - 1, 2)


def inj_Z(a, b):
    """Adjoint injector for the endomorphism slot, entry (a, b)."""
    return _unit(a - 1, b - 1)


def inj_W():
    """Adjoint injector for the scalar slot."""
    return _unit(2, 2)


def inj_X(b):
    """Adjoint injector carrying the bottom (covector) slot."""
    return _unit(2, b - 1)


def _poly_mat(rows):
    return [[Poly.const(2, c) if not isinstance(c, Poly) else c for c in row]
            for row in rows]


def u_matrix():
    y1, y2 = Poly.variable(2, 0), Poly.variable(2, 1)
    one, z = Poly.const(2, 1), Poly.zero(2)
    return [[one, z, -y1], [z, one, -y2], [z, z, one]]


def u_inverse():
    y1, y2 = Poly.variable(2, 0), Poly.variable(2, 1)
    one, z = Poly.const(2, 1), Poly.zero(2)
    return [[one, z, y1], [z, one, y2], [z, z, one]]


def mat_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(3)), Poly.zero(2))
             for j in range(3)] for i in range(3)]


def dress_field(m):
    """Scale slots -> parallel-gauge components (pointwise conjugation)."""
    return mat_mul(mat_mul(u_inverse(), _poly_mat(m)), u_matrix())


def undress_field(m):
    return mat_mul(mat_mul(u_matrix(), _poly_mat(m)), u_inverse())


def dress_op_matrix(m):
    """Conjugate a 3x3 matrix of operators by the parallel frame.

    The frame entries are functions of y multiplying operator *outputs*,
    so they enter as left multiplications, never as compositions.
    """
    ui, u = u_inverse(), u_matrix()
    out = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            acc = DiffOp.zero()
            for k in range(3):
                for l in range(3):
                    c = ui[i][k] * u[l][j]
                    if c.is_zero():
                        continue
                    acc = acc + m[k][l].left_mul_poly(c)
            out[i][j] = acc
    return out


def undress_op_matrix(m):
    u, ui = u_matrix(), u_inverse()
    out = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            acc = DiffOp.zero()
            for k in range(3):
                for l in range(3):
                    c = u[i][k] * ui[l][j]
                    if c.is_zero():
                        continue
                    acc = acc + m[k][l].left_mul_poly(c)
            out[i][j] = acc
    return out


GAMMA_FLAT = (_unit(0, 2), _unit(1, 2))   # Gamma_c = E_{c,3}, c = 1, 2


# -- injector table checks ----------------------------------------------

def num_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)]


def num_tr(a):
    return sum(a[i][i] for i in range(3))


def num_eq(a, b):
    return all(a[i][j] == b[i][j] for i in range(3) for j in range(3))


def num_scale(a, c):
    return [[a[i][j] * c for j in range(3)] for i in range(3)]


def num_add(a, b):
    return [[a[i][j] + b[i][j] for j in range(3)] for i in range(3)]


def injector_product_table_holds():
    """The six product identities of the adjoint injectors."""
    delta = lambda i, j: Q(1) if i == j else Q(0)
    rng = (1, 2)
    ok = True
    for b, a, d, c in itertools.product(rng, repeat=4):
        ok &= num_eq(num_mul(inj_Z(b, a), inj_Z(d, c)),
                     num_scale(inj_Z(b, c), delta(d, a)))
    for r, b, s in itertools.product(rng, repeat=3):
        ok &= num_eq(num_mul(inj_X(s), inj_Z(r, b)),
                     num_scale(inj_X(b), delta(r, s)))
    for b, d in itertools.product(rng, repeat=2):
        ok &= num_eq(num_mul(inj_X(b), inj_Y(d)), num_scale(inj_W(), delta(d, b)))
    for r in rng:
        ok &= num_eq(num_mul(inj_W(), inj_X(r)), inj_X(r))
    for d, b in itertools.product(rng, repeat=2):
        ok &= num_eq(num_mul(inj_Y(d), inj_X(b)), inj_Z(d, b))
    for r, s, a in itertools.product(rng, repeat=3):
        ok &= num_eq(num_mul(inj_Z(r, s), inj_Y(a)), num_scale(inj_Y(r), delta(s, a)))
    return ok


def injector_contraction_table_holds():
    """Y-X pairing, Z-Z pairing and W-W pairing as exact scalars."""
    delta = lambda i, j: Q(1) if i == j else Q(0)
    rng = (1, 2)
    ok = True
    for a, b in itertools.product(rng, repeat=2):
        ok &= num_tr(num_mul(inj_Y(a), inj_X(b))) == delta(a, b)
    for a, b, c, d in itertools.product(rng, repeat=4):
        ok &= num_tr(num_mul(inj_Z(a, b), inj_Z(c, d))) == delta(a, d) * delta(c, b)
    ok &= num_tr(num_mul(inj_W(), inj_W())) == 1
    return ok


def injector_derivative_table_holds():
    """Flat-scale covariant derivative of the injector fields.

    nabla_c of a constant endomorphism is ad(Gamma_c); the four identities
    are  Y -> 0,  Z_a^b -> -delta_c^b Y_a,  W -> Y_c,
    X^b -> Z_c^b - delta_c^b W.
    """
    def nab(c, m):
        g = GAMMA_FLAT[c - 1]
        return num_add(num_mul(g, m), num_scale(num_mul(m, g), Q(-1)))

    rng = (1, 2)
    ok = True
    for c in rng:
        for a in rng:
            ok &= num_eq(nab(c, inj_Y(a)), _unit(3, 3) if False else [[Q(0)]*3]*3)
        for a, b in itertools.product(rng, repeat=2):
            expect = num_scale(inj_Y(a), Q(-1) if b == c else Q(0))
            ok &= num_eq(nab(c, inj_Z(a, b)), expect)
        ok &= num_eq(nab(c, inj_W()), inj_Y(c))
        for b in rng:
            expect = num_add(inj_Z(c, b), num_scale(inj_W(), Q(-1) if b == c else Q(0)))
            ok &= num_eq(nab(c, inj_X(b)), expect)
    return ok


# -- adjoint tractor fields ----------------------------------------------

class AdjTractorField:
    """Trace-free 3x3 matrix of base polynomials, stored in scale slots."""

    __slots__ = ("mat",)

    def __init__(self, mat):
        self.mat = _poly_mat(mat)

    @staticmethod
    def from_slots(v, mu, phi_slot, rho):
        if not isinstance(phi_slot, Poly):
            phi_slot = Poly.const(2, phi_slot)
        m = [[mu[0][0], mu[0][1], v[0]],
             [mu[1][0], mu[1][1], v[1]],
             [rho[0], rho[1], phi_slot]]
        return AdjTractorField(m)

    @staticmethod
    def zero():
        z = Poly.zero(2)
        return AdjTractorField([[z] * 3 for _ in range(3)])

    # slot accessors ----------------------------------------------------

    def v(self):
        return (self.mat[0][2], self.mat[1][2])

    def mu(self):
        return ((self.mat[0][0], self.mat[0][1]), (self.mat[1][0], self.mat[1][1]))

    def phi_slot(self):
        return self.mat[2][2]

    def rho(self):
        return (self.mat[2][0], self.mat[2][1])

    def trace(self):
        return self.mat[0][0] + self.mat[1][1] + self.mat[2][2]

    def is_trace_free(self):
        return self.trace().is_zero()

    def gauge(self):
        """Parallel-gauge components; constant iff the section is parallel."""
        return dress_field(self.mat)

    @staticmethod
    def from_gauge(g):
        return AdjTractorField(undress_field(g))

    def is_parallel(self):
        return all(p.is_constant() for row in self.gauge() for p in row)

    # algebra -------------------------------------------------------------

    def __add__(self, other):
        return AdjTractorField([[self.mat[i][j] + other.mat[i][j]
                                 for j in range(3)] for i in range(3)])

    def __sub__(self, other):
        return AdjTractorField([[self.mat[i][j] - other.mat[i][j]
                                 for j in range(3)] for i in range(3)])

    def scale(self, c):
        return AdjTractorField([[self.mat[i][j].scale(c) for j in range(3)]
                                for i in range(3)])

    def matmul(self, other):
        return AdjTractorField(mat_mul(self.mat, other.mat))

    def __eq__(self, other):
        return isinstance(other, AdjTractorField) and all(
            self.mat[i][j] == other.mat[i][j] for i in range(3) for j in range(3))

    def __ne__(self, other):
        return not self.__eq__(other)

    def is_zero(self):
        return all(p.is_zero() for row in self.mat for p in row)

    def __repr__(self):
        return "AdjTractorField(v=%s, mu=%s, phi=%s, rho=%s)" % (
            self.v(), self.mu(), self.phi_slot(), self.rho())


def tractor_nabla(i: AdjTractorField, c) -> AdjTractorField:
    """Flat-scale tractor derivative along y^c: d_c + ad(Gamma_c).

    Component form (P = 0): the v slot picks up -mu^a_c + phi delta^a_c,
    the mu slot +rho_b delta^a_c, the scalar slot -rho_c, the rho slot
    nothing.
    """
    g = GAMMA_FLAT[c - 1]
    m = i.mat
    dm = [[m[r][s].diff(c - 1) for s in range(3)] for r in range(3)]
    gm = [[sum((m[r][s].scale(g[t][r]) for r in range(3)), Poly.zero(2))
           for s in range(3)] for t in range(3)]
    mg = [[sum((m[t][r].scale(g[r][s]) for r in range(3)), Poly.zero(2))
           for s in range(3)] for t in range(3)]
    out = [[dm[r][s] + gm[r][s] - mg[r][s] for s in range(3)] for r in range(3)]
    return AdjTractorField(out)


def splitting1(v) -> AdjTractorField:
    """Differential splitting of a vector field into an adjoint tractor.

    Flat scale: slots (v; grad v - (1/3) div delta, -(1/3) div;
    -(1/3) grad div).  The projection back to the top slot returns v,
    and the image is parallel exactly when the rank-1 BGG equation holds.
    """
    if isinstance(v, SymTensorField):
        if v.rank != 1:
            raise ValueError("rank-1 field required")
        v1, v2 = v[(1,)], v[(2,)]
    else:
        v1, v2 = v
    div = v1.diff(0) + v2.diff(1)
    third = Q(1, 3)
    mu = [[v1.diff(0) - div.scale(third), v1.diff(1)],
          [v2.diff(0), v2.diff(1) - div.scale(third)]]
    phi_slot = -div.scale(third)
    rho = (-div.diff(0).scale(third), -div.diff(1).scale(third))
    return AdjTractorField.from_slots((v1, v2), mu, phi_slot, rho)


def splitting1_hat(v, upsilon: Upsilon) -> AdjTractorField:
    """The splitting computed in the Upsilon-changed scale.

    Uses the hatted covariant derivative and hatted Schouten tensor in
    the same component formula; the result is expressed in the *hatted*
    splitting's slots.
    """
    from .projective import hat_derivative, schouten_hat
    if isinstance(v, SymTensorField):
        v = (v[(1,)], v[(2,)])
    phat = schouten_hat(upsilon)
    d1 = hat_derivative(upsilon, "vector", v, Q(0), 1)
    d2 = hat_derivative(upsilon, "vector", v, Q(0), 2)
    grad = {(1, 1): d1[0], (1, 2): d2[0], (2, 1): d1[1], (2, 2): d2[1]}  # (a, b) = nabla-hat_b v^a
    div = grad[(1, 1)] + grad[(2, 2)]
    third = Q(1, 3)
    mu = [[grad[(1, 1)] - div.scale(third), grad[(1, 2)]],
          [grad[(2, 1)], grad[(2, 2)] - div.scale(third)]]
    phi_slot = -div.scale(third)
    ddiv = (div.diff(0), div.diff(1))  # div has weight 0: hat = flat derivative
    rho = tuple(
        -(ddiv[a - 1].scale(third)
          + phat[(a, 1)] * v[0] + phat[(a, 2)] * v[1])
        for a in (1, 2))
    return AdjTractorField.from_slots(tuple(v), mu, phi_slot, rho)


def tractor_nabla_hat(i: AdjTractorField, c, upsilon: Upsilon) -> AdjTractorField:
    """Tractor derivative of hatted-slot components in the hatted scale.

    Same component formula with the hatted connection on each slot's
    tensor type and the hatted Schouten tensor in place of P = 0.
    """
    from .projective import hat_derivative, schouten_hat
    u = upsilon
    phat = schouten_hat(u)
    v = i.v()
    mu = i.mu()
    ph = i.phi_slot()
    rho = i.rho()
    dv = hat_derivative(u, "vector", v, Q(0), c)
    drho = hat_derivative(u, "covector", rho, Q(0), c)
    dph = ph.diff(c - 1)
    # (1,1)-tensor rule: d mu^a_b + U_r mu^r_b delta^a_c' - U_b mu^a_c'
    dmu = {}
    for a in (1, 2):
        for b in (1, 2):
            val = mu[a - 1][b - 1].diff(c - 1)
            if a == c:
                val = val + u[1] * mu[0][b - 1] + u[2] * mu[1][b - 1]
            val = val - u[b] * mu[a - 1][c - 1]
            dmu[(a, b)] = val
    out_v = tuple(
        dv[a - 1] - mu[a - 1][c - 1] + (ph if a == c else Poly.zero(2))
        for a in (1, 2))
    out_mu = [[dmu[(a, b)] + v[a - 1] * phat[(c, b)]
               + (rho[b - 1] if a == c else Poly.zero(2))
               for b in (1, 2)] for a in (1, 2)]
    out_ph = dph - v[0] * phat[(c, 1)] - v[1] * phat[(c, 2)] - rho[c - 1]
    out_rho = tuple(
        drho[a - 1] + ph * phat[(a, c)]
        - mu[0][a - 1] * phat[(c, 1)] - mu[1][a - 1] * phat[(c, 2)]
        for a in (1, 2))
    return AdjTractorField.from_slots(out_v, out_mu, out_ph, out_rho)


def parallel_adjoint_basis():
    """Splittings of the eight rank-1 BGG solutions; all parallel.

    These are the sl(3) generators in the parallel gauge: the constant
    fields give the nilpotent top row, the linear fields the Levi block,
    the quadratic special fields the bottom row.
    """
    from .projective import bgg_solution_basis_rank1
    basis = [splitting1(v) for v in bgg_solution_basis_rank1()]
    for i in basis:
        if not i.is_parallel():
            raise AssertionError("splitting of a BGG solution is not parallel")
        if not i.is_trace_free():
            raise AssertionError("adjoint tractor is not trace free")
    return basis


# -- operator matrices and the double-D operator --------------------------

class OperatorMatrix:
    """3x3 matrix of operators in the parallel gauge.

    The product is (M N)^B_A = sum_R M^B_R o N^R_A with operator
    composition inside each entry; because the entries live in the
    parallel gauge this plain rule *is* the correctly coupled
    composition of tractor-valued operators.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = [[e for e in row] for row in entries]

    @staticmethod
    def zero():
        return OperatorMatrix([[DiffOp.zero() for _ in range(3)] for _ in range(3)])

    @staticmethod
    def identity_matrix(weight=None):
        z = DiffOp.zero()
        return OperatorMatrix([
            [DiffOp.identity(weight) if i == j else DiffOp.zero() for j in range(3)]
            for i in range(3)])

    @staticmethod
    def from_scale_slots(entries):
        return OperatorMatrix(dress_op_matrix(entries))

    def scale_slots(self):
        """Undressed entries (the component formulas live here)."""
        return undress_op_matrix(self.entries)

    def __getitem__(self, idx):
        return self.entries[idx]

    def mul(self, other):
        out = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
        for b in range(3):
            for a in range(3):
                acc = DiffOp.zero()
                for r in range(3):
                    acc = acc + compose(self.entries[b][r], other.entries[r][a])
                out[b][a] = acc
        return OperatorMatrix(out)

    def add(self, other):
        return OperatorMatrix([[self.entries[i][j] + other.entries[i][j]
                                for j in range(3)] for i in range(3)])

    def sub(self, other):
        return OperatorMatrix([[self.entries[i][j] - other.entries[i][j]
                                for j in range(3)] for i in range(3)])

    def scale(self, c):
        return OperatorMatrix([[self.entries[i][j].scale(c) for j in range(3)]
                               for i in range(3)])

    def compose_scalar_left(self, op: DiffOp):
        return OperatorMatrix([[compose(op, self.entries[i][j]) for j in range(3)]
                               for i in range(3)])

    def compose_scalar_right(self, op: DiffOp):
        return OperatorMatrix([[compose(self.entries[i][j], op) for j in range(3)]
                               for i in range(3)])

    def trace(self) -> DiffOp:
        return self.entries[0][0] + self.entries[1][1] + self.entries[2][2]

    def is_trace_free(self):
        return self.trace().is_zero()

    def __eq__(self, other):
        return isinstance(other, OperatorMatrix) and all(
            self.entries[i][j] == other.entries[i][j]
            for i in range(3) for j in range(3))

    def __ne__(self, other):
        return not self.__eq__(other)

    def is_zero(self):
        return all(self.entries[i][j].is_zero() for i in range(3) for j in range(3))


@lru_cache(maxsize=None)
def double_d(w) -> OperatorMatrix:
    """The double-D operator at weight w, as a gauge operator matrix.

    Scale slots: endomorphism block 1/4 g^a g_b + (-w/3 + 1/4) delta^a_b,
    scalar slot 2w/3, bottom row nabla_b, empty top column.  The slot
    constants are pinned by projective invariance together with trace
    freeness; at w = -3/4 the delta coefficient is 1/2 and the scalar
    slot -1/2, at w = -9/4 they are 1 and -3/2.
    """
    w = as_q(w)
    cdelta = -w / 3 + Q(1, 4)
    m = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for a in (1, 2):
        for b in (1, 2):
            wel = weyl_mul(gamma_raise(a), gamma_lower(b)).scale(Q(1, 4))
            if a == b:
                wel = wel + WeylElem.monomial(0, 0, cdelta)
            m[a - 1][b - 1] = DiffOp.from_weyl(wel, w, w)
        m[a - 1][2] = DiffOp.zero(w, w)
    for b in (1, 2):
        m[2][b - 1] = DiffOp.partial(b, w, w)
    m[2][2] = DiffOp.scalar(2 * w / 3, w)
    return OperatorMatrix.from_scale_slots(m)


def x_slot_gamma_dirac(coeff=Q(1, 2)) -> OperatorMatrix:
    """The gauge matrix of  coeff * X^b g_b D  (bottom-row slots only)."""
    ds = dirac().with_weights(W_MINUS_3_4, W_MINUS_3_4)
    m = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for b in (1, 2):
        m[2][b - 1] = compose(DiffOp.from_weyl(gamma_lower(b)), ds).scale(coeff)
    return OperatorMatrix.from_scale_slots(m)


def commutator_bracket(m: OperatorMatrix, n: OperatorMatrix) -> OperatorMatrix:
    """[M, N]^B_C = M^B_R N^R_C - N^R_C M^B_R (written-right factor first)."""
    out = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for b in range(3):
        for c in range(3):
            acc = DiffOp.zero()
            for r in range(3):
                acc = acc + compose(m.entries[b][r], n.entries[r][c])
                acc = acc - compose(n.entries[r][c], m.entries[b][r])
            out[b][c] = acc
    return OperatorMatrix(out)


def square_both_orders(m: OperatorMatrix) -> OperatorMatrix:
    """(M^2)^A_B = M^A_R M^R_B + M^R_B M^A_R (sum of both orders)."""
    out = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for a in range(3):
        for b in range(3):
            acc = DiffOp.zero()
            for r in range(3):
                acc = acc + compose(m.entries[a][r], m.entries[r][b])
                acc = acc + compose(m.entries[r][b], m.entries[a][r])
            out[a][b] = acc
    return OperatorMatrix(out)


def mixed_square(m: OperatorMatrix) -> OperatorMatrix:
    """The matrix  (A, B) -> sum_R M^R_B o M^A_R  (written M^R_B M^A_R)."""
    out = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for a in range(3):
        for b in range(3):
            acc = DiffOp.zero()
            for r in range(3):
                acc = acc + compose(m.entries[r][b], m.entries[a][r])
            out[a][b] = acc
    return OperatorMatrix(out)


def pairing(m: OperatorMatrix, n: OperatorMatrix) -> DiffOp:
    """<M, N> = M^S_R N^R_S, a scalar operator."""
    acc = DiffOp.zero()
    for s in range(3):
        for r in range(3):
            acc = acc + compose(m.entries[s][r], n.entries[r][s])
    return acc


def tracefree_part(m: OperatorMatrix) -> OperatorMatrix:
    tr = m.trace().scale(Q(1, 3))
    out = [[m.entries[i][j] - (tr if i == j else DiffOp.zero()) for j in range(3)]
           for i in range(3)]
    return OperatorMatrix(out)


def contract_field_opmatrix(i: AdjTractorField, m: OperatorMatrix) -> DiffOp:
    """I^A_B M^B_A: the full tractor contraction, a scalar operator."""
    g = i.gauge()
    acc = DiffOp.zero()
    for a in range(3):
        for b in range(3):
            if g[a][b].is_zero():
                continue
            acc = acc + m.entries[b][a].left_mul_poly(g[a][b])
    return acc


def contract_gauge_opmatrix(g, m: OperatorMatrix) -> DiffOp:
    """Same contraction with gauge components given directly."""
    acc = DiffOp.zero()
    for a in range(3):
        for b in range(3):
            if g[a][b].is_zero():
                continue
            acc = acc + m.entries[b][a].left_mul_poly(g[a][b])
    return acc


# -- the Thomas-type tractor D operator on spinors -------------------------

def dirac_at_weight(w) -> DiffOp:
    """The formula g^a nabla_a acting on weight-w fields (flat scale)."""
    return dirac().with_weights(w, w - Q(3, 2))


def thomas_d(w):
    """Components of the tractor D operator on weight-w spinor fields.

    Returns (scalar-slot operator, covector-slot pair): the scalar slot
    is (4w+3)(w+1/4) id, the covector slots (4w+3) nabla_b + g_b D.
    At w = -3/4 only the invariant bottom slot g_b D survives; at
    w = -1/4 the covector slots are twice the twistor operator
    nabla_b + (1/2) g_b D.
    """
    w = as_q(w)
    ds = dirac_at_weight(w).with_weights(None, None)
    nu = DiffOp.identity().scale((4 * w + 3) * (w + Q(1, 4)))
    mu = tuple(
        DiffOp.partial(b).scale(4 * w + 3) + compose(DiffOp.from_weyl(gamma_lower(b)), ds)
        for b in (1, 2))
    return nu, mu


def thomas_d_hatted(w, upsilon: Upsilon):
    """Thomas D assembled in the changed scale, expressed in flat slots.

    Uses the hatted injectors (the scalar-slot injector shifts by
    -Upsilon against the covector slots) and the hatted spinor
    derivative; projective invariance says this equals thomas_d(w)
    entrywise as operators.
    """
    w = as_q(w)
    hatgrad = tuple(DiffOp.partial(b) + spinor_hat_correction(upsilon, w, b)
                    for b in (1, 2))
    ds_hat = DiffOp.zero()
    for a in (1, 2):
        ds_hat = ds_hat + compose(DiffOp.from_weyl(gamma_raise(a)), hatgrad[a - 1])
    nu = DiffOp.identity().scale((4 * w + 3) * (w + Q(1, 4)))
    mu = []
    for b in (1, 2):
        op = hatgrad[b - 1].scale(4 * w + 3)
        op = op + compose(DiffOp.from_weyl(gamma_lower(b)), ds_hat)
        op = op - nu.left_mul_poly(upsilon[b])
        mu.append(op)
    return nu, tuple(mu)


def double_d_hatted(w, upsilon: Upsilon) -> OperatorMatrix:
    """Double-D assembled in the changed scale, expressed in flat slots.

    The endomorphism and scalar slots are scale-independent; the bottom
    row becomes  m^a_b Upsilon_a - (2w/3) Upsilon_b + hat-nabla_b, which
    projective invariance collapses back to nabla_b.
    """
    w = as_q(w)
    cdelta = -w / 3 + Q(1, 4)
    m = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for a in (1, 2):
        for b in (1, 2):
            wel = weyl_mul(gamma_raise(a), gamma_lower(b)).scale(Q(1, 4))
            if a == b:
                wel = wel + WeylElem.monomial(0, 0, cdelta)
            m[a - 1][b - 1] = DiffOp.from_weyl(wel)
    for b in (1, 2):
        op = DiffOp.partial(b) + spinor_hat_correction(upsilon, w, b)
        for a in (1, 2):
            wel = weyl_mul(gamma_raise(a), gamma_lower(b)).scale(Q(1, 4))
            if a == b:
                wel = wel + WeylElem.monomial(0, 0, cdelta)
            op = op + DiffOp.from_weyl(wel).left_mul_poly(upsilon[a])
        op = op - DiffOp.from_poly(upsilon[b]).scale(2 * w / 3)
        m[2][b - 1] = op
    m[2][2] = DiffOp.scalar(2 * w / 3)
    return OperatorMatrix.from_scale_slots(m)


# -- rank-2 symmetric adjoint powers ---------------------------------------

_IDX4 = list(itertools.product(range(3), repeat=4))


def _delta(i, j):
    return Q(1) if i == j else Q(0)


class SymAdjPower:
    """Pair-symmetrized, totally trace-free element of the square of
    the adjoint bundle; components (A, B, C, D) -> polynomial are stored
    in the parallel gauge with the pattern T^A_B^C_D."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        self.comps = {k: p for k, p in comps.items() if not p.is_zero()}

    def __getitem__(self, key):
        return self.comps.get(key, Poly.zero(2))

    def is_zero(self):
        return not self.comps

    def add(self, other):
        out = dict(self.comps)
        for k, p in other.comps.items():
            s = out.get(k, Poly.zero(2)) + p
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SymAdjPower(out)

    def scale(self, c):
        return SymAdjPower({k: p.scale(c) for k, p in self.comps.items()})

    def contractions(self):
        """The four upper-lower trace tensors (each a 3x3 of polynomials)."""
        z = Poly.zero(2)
        c_ab = [[z for _ in range(3)] for _ in range(3)]
        c_cd = [[z for _ in range(3)] for _ in range(3)]
        c_ad = [[z for _ in range(3)] for _ in range(3)]
        c_cb = [[z for _ in range(3)] for _ in range(3)]
        for (a, b, c, d), p in self.comps.items():
            if a == b:
                c_ab[c][d] = c_ab[c][d] + p
            if c == d:
                c_cd[a][b] = c_cd[a][b] + p
            if a == d:
                c_ad[c][b] = c_ad[c][b] + p
            if c == b:
                c_cb[a][d] = c_cb[a][d] + p
        return c_ab, c_cd, c_ad, c_cb

    def all_contractions_vanish(self):
        return all(p.is_zero() for m in self.contractions() for row in m for p in row)

    def vector_coords(self, ncols_map):
        vec = {}
        for k, p in self.comps.items():
            for mono, c in p.terms.items():
                vec[ncols_map[(k, mono)]] = c
        return vec

    def top_slot(self) -> SymTensorField:
        """The scale-picture top component, a symmetric 2-tensor field."""
        u, ui = u_matrix(), u_inverse()
        entries = {}
        for a in (1, 2):
            for c in (1, 2):
                acc = Poly.zero(2)
                for (p, q, r, s), val in self.comps.items():
                    f = u[a - 1][p] * ui[q][2] * u[c - 1][r] * ui[s][2]
                    if not f.is_zero():
                        acc = acc + f * val
                if not acc.is_zero():
                    key = tuple(sorted((a, c)))
                    entries[key] = entries.get(key, Poly.zero(2)) + (
                        acc if a == c else acc.scale(Q(1, 2)))
        return SymTensorField(2, entries)


def _pair_symmetrize(t0):
    out = {}
    for (a, b, c, d), p in t0.items():
        for key, q in (((a, b, c, d), p), ((c, b, a, d), p),
                       ((a, d, c, b), p), ((c, d, a, b), p)):
            s = out.get(key, Poly.zero(2)) + q.scale(Q(1, 4))
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def _delta_family(mmat):
    """delta^(A_(B M^C)_D): the nine-parameter trace family."""
    out = {}
    for (a, b, c, d) in _IDX4:
        val = (_delta(a, b) * mmat[c][d] + _delta(c, b) * mmat[a][d]
               + _delta(a, d) * mmat[c][b] + _delta(c, d) * mmat[a][b])
        if val:
            out[(a, b, c, d)] = Poly.const(2, val * Q(1, 4)) if not isinstance(val, Poly) else val.scale(Q(1, 4))
    return out


@lru_cache(maxsize=1)
def _trace_solver():
    """Numeric matrix of the map M -> traces(delta-family(M)).

    Rows: the (c_ab, c_ad) trace entries; columns: the 9 matrix units.
    """
    rows_by_eq = {}
    for col, (p, q) in enumerate(itertools.product(range(3), repeat=2)):
        unit = [[Q(1) if (i, j) == (p, q) else Q(0) for j in range(3)] for i in range(3)]
        fam = {k: v for k, v in _delta_family(unit).items()}
        sap = SymAdjPower({k: v if isinstance(v, Poly) else Poly.const(2, v)
                           for k, v in fam.items()})
        c_ab, _, c_ad, _ = sap.contractions()
        for i in range(3):
            for j in range(3):
                v1 = c_ab[i][j].constant_value()
                if v1:
                    rows_by_eq.setdefault(("ab", i, j), {})[col] = v1
                v2 = c_ad[i][j].constant_value()
                if v2:
                    rows_by_eq.setdefault(("ad", i, j), {})[col] = v2
    eqs = sorted(rows_by_eq)
    return eqs, [rows_by_eq[e] for e in eqs]


def cartan_project2(i: AdjTractorField, j: AdjTractorField) -> SymAdjPower:
    """The Cartan (highest-weight) component of I tensor J.

    Symmetrize the upper pair and the lower pair, then subtract the
    unique element of the delta-trace family that kills every
    upper-lower contraction.  Idempotent on its own output.
    """
    gi, gj = i.gauge(), j.gauge()
    t0 = {}
    for (a, b, c, d) in _IDX4:
        p = gi[a][b] * gj[c][d]
        if not p.is_zero():
            t0[(a, b, c, d)] = p
    t1 = SymAdjPower(_pair_symmetrize(t0))
    c_ab, _, c_ad, _ = t1.contractions()
    eqs, rows = _trace_solver()
    # solve per y-monomial for the trace-family coefficient matrix M
    monos = set()
    for m33 in (c_ab, c_ad):
        for row in m33:
            for p in row:
                monos.update(p.terms)
    mmat = [[Poly.zero(2) for _ in range(3)] for _ in range(3)]
    for mono in sorted(monos):
        rhs = []
        for e in eqs:
            tag, ii, jj = e
            src = c_ab if tag == "ab" else c_ad
            rhs.append(src[ii][jj].coeff(mono))
        sol = linalg.solve(rows, rhs, 9)
        if sol is None:
            raise AssertionError("trace system unexpectedly inconsistent")
        for col, v in sol.items():
            p, q = divmod(col, 3)
            mmat[p][q] = mmat[p][q] + Poly.monomial(mono, v)
    fam = {}
    for (a, b, c, d) in _IDX4:
        acc = Poly.zero(2)
        if a == b:
            acc = acc + mmat[c][d]
        if c == b:
            acc = acc + mmat[a][d]
        if a == d:
            acc = acc + mmat[c][b]
        if c == d:
            acc = acc + mmat[a][b]
        if not acc.is_zero():
            fam[(a, b, c, d)] = acc.scale(Q(1, 4))
    res = t1.add(SymAdjPower(fam).scale(-1))
    return res


@lru_cache(maxsize=None)
def double_d_pair_compositions(w1, w2):
    """All 81 compositions D^B_A o D^D_C at the given weights (cached)."""
    m1, m2 = double_d(as_q(w1)), double_d(as_q(w2))
    table = {}
    for b, a, d, c in _IDX4:
        table[(b, a, d, c)] = compose(m1.entries[b][a], m2.entries[d][c])
    return table


def contract_sympower_dd(t: SymAdjPower, w=W_MINUS_3_4) -> DiffOp:
    """T^A_B^C_D  D^B_A D^D_C with the rightmost factor acting first."""
    table = double_d_pair_compositions(w, w)
    acc = DiffOp.zero()
    for (a, b, c, d), p in t.comps.items():
        acc = acc + table[(b, a, d, c)].left_mul_poly(p)
    return acc


# -- reference right-hand sides for the composition identities -------------

def _zero4():
    return {}


def _acc4(store, key, op):
    cur = store.get(key)
    store[key] = op if cur is None else cur + op


def dd_pair_tensor(w=W_MINUS_3_4):
    """The 4-index tensor (B, A, D, C) -> D^B_A o D^D_C."""
    return double_d_pair_compositions(w, w)


def dd_composition_reference(w=W_MINUS_3_4):
    """The nine-term closed form of D^B_A D^D_C in the flat scale.

    Assembled from dressed injector fields with the quoted operator
    coefficients (Schouten terms dropped at P = 0); comparing it entry
    by entry against the computed 81 compositions is the full
    composition identity.
    """
    dz = {(a, b): _poly_mat_to(dress_field(inj_Z(a, b))) for a in (1, 2) for b in (1, 2)}
    dy = {a: _poly_mat_to(dress_field(inj_Y(a))) for a in (1, 2)}
    dx = {b: _poly_mat_to(dress_field(inj_X(b))) for b in (1, 2)}
    dw = _poly_mat_to(dress_field(inj_W()))
    one = DiffOp.identity()

    def gam(a, b):  # 1/4 g^a g_b + 1/2 delta  (the w = -3/4 block)
        wel = weyl_mul(gamma_raise(a), gamma_lower(b)).scale(Q(1, 4))
        if a == b:
            wel = wel + WeylElem.monomial(0, 0, Q(1, 2))
        return DiffOp.from_weyl(wel)

    def gq(a, b):  # plain 1/4 g^a g_b
        return DiffOp.from_weyl(weyl_mul(gamma_raise(a), gamma_lower(b)).scale(Q(1, 4)))

    store = _zero4()
    rng = (1, 2)
    # T1: Z x Z with the quartic/quadratic/scalar gamma coefficients
    for b, a, d, c in itertools.product(rng, repeat=4):
        wel = weyl_mul(weyl_mul(gamma_raise(b), gamma_lower(a)),
                       weyl_mul(gamma_raise(d), gamma_lower(c))).scale(Q(1, 16))
        if d == c:
            wel = wel + weyl_mul(gamma_raise(b), gamma_lower(a)).scale(Q(1, 8))
        if b == a:
            wel = wel + weyl_mul(gamma_raise(d), gamma_lower(c)).scale(Q(1, 8))
        if b == a and d == c:
            wel = wel + WeylElem.monomial(0, 0, Q(1, 4))
        op = DiffOp.from_weyl(wel)
        _pair_term(store, dz[(b, a)], dz[(d, c)], op)
    # T2: -(1/2) (Z^B_A W^D_C + W^B_A Z^D_C) (1/4 g^b g_a + 1/2 delta)
    for b, a in itertools.product(rng, repeat=2):
        op = gam(b, a).scale(Q(-1, 2))
        _pair_term(store, dz[(b, a)], dw, op)
        _pair_term(store, dw, dz[(b, a)], op)
    # T3: +(1/4) W W
    _pair_term(store, dw, dw, one.scale(Q(1, 4)))
    # T4: -X Y (1/4 g^d g_b + delta)
    for b, d in itertools.product(rng, repeat=2):
        wel = weyl_mul(gamma_raise(d), gamma_lower(b)).scale(Q(1, 4))
        if d == b:
            wel = wel + WeylElem.monomial(0, 0, 1)
        _pair_term(store, dx[b], dy[d], DiffOp.from_weyl(wel).scale(-1))
    # T5: +X Z (1/4 g^d g_c nabla_b + 1/2 delta^d_c nabla_b + delta^d_b nabla_c)
    for b, d, c in itertools.product(rng, repeat=3):
        op = compose(gq(d, c), DiffOp.partial(b))
        if d == c:
            op = op + DiffOp.partial(b).scale(Q(1, 2))
        if d == b:
            op = op + DiffOp.partial(c)
        _pair_term(store, dx[b], dz[(d, c)], op)
    # T6: +Z X (1/4 g^b g_a + 1/2 delta) nabla_d
    for b, a, d in itertools.product(rng, repeat=3):
        op = compose(gam(b, a), DiffOp.partial(d))
        _pair_term(store, dz[(b, a)], dx[d], op)
    # T7: -(3/2) X W nabla_b
    for b in rng:
        _pair_term(store, dx[b], dw, DiffOp.partial(b).scale(Q(-3, 2)))
    # T8: -(1/2) W X nabla_d
    for d in rng:
        _pair_term(store, dw, dx[d], DiffOp.partial(d).scale(Q(-1, 2)))
    # T9: +X X nabla_b nabla_d
    for b, d in itertools.product(rng, repeat=2):
        _pair_term(store, dx[b], dx[d], compose(DiffOp.partial(b), DiffOp.partial(d)))
    return store


def _poly_mat_to(m):
    return m


def _pair_term(store, f1, f2, op):
    """Accumulate f1[B][A] f2[D][C] op into the 4-index store."""
    for bb, aa, dd, cc in _IDX4:
        c1 = f1[bb][aa] * f2[dd][cc]
        if c1.is_zero():
            continue
        _acc4(store, (bb, aa, dd, cc), op.left_mul_poly(c1))


def dd_skew_reference(w=W_MINUS_3_4):
    """Closed form of the skew part D^B_A D^D_C - D^D_C D^B_A (P = 0)."""
    from .weyl import omega_lower, omega_upper
    dz = {(a, b): dress_field(inj_Z(a, b)) for a in (1, 2) for b in (1, 2)}
    dy = {a: dress_field(inj_Y(a)) for a in (1, 2)}
    dx = {b: dress_field(inj_X(b)) for b in (1, 2)}
    dw = dress_field(inj_W())
    store = _zero4()
    rng = (1, 2)
    for b, a, d, c in itertools.product(rng, repeat=4):
        wel = WeylElem.zero()
        if a == d:
            wel = wel + weyl_mul(gamma_raise(b), gamma_lower(c))
        if c == b:
            wel = wel - weyl_mul(gamma_raise(d), gamma_lower(a))
        wbd = omega_upper(b, d)
        if wbd:
            wel = wel + weyl_mul(gamma_lower(c), gamma_lower(a)).scale(wbd)
        wac = omega_lower(a, c)
        if wac:
            wel = wel + weyl_mul(gamma_raise(b), gamma_raise(d)).scale(wac)
        if not wel.is_zero():
            _pair_term(store, dz[(b, a)], dz[(d, c)],
                       DiffOp.from_weyl(wel).scale(Q(1, 8)))
    for b, d in itertools.product(rng, repeat=2):
        wel = weyl_mul(gamma_raise(d), gamma_lower(b)).scale(Q(1, 4))
        if d == b:
            wel = wel + WeylElem.monomial(0, 0, 1)
        op = DiffOp.from_weyl(wel)
        _pair_term(store, dx[b], dy[d], op.scale(-1))
        _pair_term(store, dy[d], dx[b], op)
    for b, d, c in itertools.product(rng, repeat=3):
        if b != d:
            continue
        op = DiffOp.partial(c)
        _pair_term(store, dx[b], dz[(d, c)], op)
        _pair_term(store, dz[(d, c)], dx[b], op.scale(-1))
    for b in rng:
        op = DiffOp.partial(b)
        _pair_term(store, dx[b], dw, op.scale(-1))
        _pair_term(store, dw, dx[b], op)
    return store


def dd_skew_computed(w=W_MINUS_3_4):
    table = double_d_pair_compositions(w, w)
    out = {}
    for key in _IDX4:
        b, a, d, c = key
        first = table[(b, a, d, c)]
        m = double_d(as_q(w))
        second = compose(m.entries[d][c], m.entries[b][a])
        val = first - second
        if not val.is_zero():
            out[key] = val
    return out


def dd_square_reference():
    """Closed form of the mixed square D^R_B D^A_R at w = -3/4 (P = 0)."""
    m = [[DiffOp.zero() for _ in range(3)] for _ in range(3)]
    for d, a in itertools.product((1, 2), repeat=2):
        wel = weyl_mul(gamma_raise(d), gamma_lower(a)).scale(Q(-3, 8))
        if a == d:
            wel = wel + WeylElem.monomial(0, 0, Q(-10, 8))
        m[d - 1][a - 1] = DiffOp.from_weyl(wel)
    for a in (1, 2):
        acc = DiffOp.zero()
        for b in (1, 2):
            wel = weyl_mul(gamma_raise(b), gamma_lower(a)).scale(Q(1, 4))
            if a == b:
                wel = wel + WeylElem.monomial(0, 0, Q(1, 2))
            acc = acc + compose(DiffOp.from_weyl(wel), DiffOp.partial(b))
        acc = acc - DiffOp.partial(a).scale(Q(3, 2))
        m[2][a - 1] = acc
    m[2][2] = DiffOp.scalar(Q(1, 4))
    return OperatorMatrix.from_scale_slots(m)
