"""Classical BRST: charge, differential, codifferential and the transfer.

The charge combines the structure constants and the moment map; its graded
self-bracket vanishes exactly and its adjoint action splits as the
codifferential plus twice the Koszul differential.  Transfer to the
quotient cochains goes through the first perturbation lemma applied to the
extended Koszul contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvarianceError
from .hpt import perturb_v1
from .koszul import Contraction, koszul_diff
from .poisson import poisson_bracket
from .series import Series
from .superalg import (
    OperatorHandle,
    SuperElement,
    contract_antighost,
    contract_ghost,
    graded_poisson,
    op_compose,
    op_scale,
    super_mul,
)


def _ghost(ctx, dim, order, a):
    return SuperElement.generator(ctx, dim, order, ghosts=(a,))


def _antighost(ctx, dim, order, a):
    return SuperElement.generator(ctx, dim, order, antighosts=(a,))


def classical_charge(moment, order=0):
    """theta = -1/4 sum f_ab^c e^a e^b e_c + sum_a J_a e^a."""
    ctx = moment.ctx
    dim = moment.lie.dim
    theta = SuperElement.zero(ctx, dim, order)
    f = moment.lie.f
    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                v = f[a][b][c]
                if not v:
                    continue
                term = super_mul(
                    super_mul(
                        _ghost(ctx, dim, order, a + 1), _ghost(ctx, dim, order, b + 1)
                    ),
                    _antighost(ctx, dim, order, c + 1),
                )
                theta = theta + term.scale(Fraction(-1, 4) * v)
    for a in range(dim):
        theta = theta + SuperElement(
            ctx,
            dim,
            order,
            {((a + 1,), ()): Series.from_poly(moment.components[a], order)},
        )
    return theta


def classical_brst_diff(theta, lam):
    """D = {theta, .} as an operator handle."""
    return OperatorHandle(
        "D", lambda x: graded_poisson(theta, x, lam), +1, frozenset({"ghost"})
    )


def build_koszul_operator(moment):
    return OperatorHandle(
        "koszul", lambda x: koszul_diff(x, moment), -1
    )


def build_delta(moment, lam):
    """The Lie-algebra codifferential on the BRST algebra.

    delta = -1/2 f_ab^c e^a e^b i_c + f_ab^c e^a e_c i^b + e^a {J_a, .},
    where the last piece acts on coefficients only.
    """
    ctx = moment.ctx
    dim = moment.lie.dim
    f = moment.lie.f
    triples = [
        (a, b, c, f[a][b][c])
        for a in range(dim)
        for b in range(dim)
        for c in range(dim)
        if f[a][b][c]
    ]

    def fn(x):
        order = x.order
        out = SuperElement.zero(ctx, dim, order)
        for a, b, c, v in triples:
            ic = contract_ghost(x, c + 1)
            if ic.terms:
                ghost2 = super_mul(
                    _ghost(ctx, dim, order, a + 1), _ghost(ctx, dim, order, b + 1)
                )
                out = out + super_mul(ghost2, ic).scale(Fraction(-1, 2) * v)
            ib = contract_antighost(x, b + 1)
            if ib.terms:
                ga_ec = super_mul(
                    _ghost(ctx, dim, order, a + 1), _antighost(ctx, dim, order, c + 1)
                )
                out = out + super_mul(ga_ec, ib).scale(v)
        for a in range(dim):
            j = moment.components[a]
            acted = x.map_coefficients(lambda p, _j=j: poisson_bracket(_j, p, lam))
            if acted.terms:
                out = out + super_mul(_ghost(ctx, dim, x.order, a + 1), acted)
        return out

    return OperatorHandle("delta", fn, +1, frozenset({"ghost"}))


def lie_action(moment, lam, a):
    """The infinitesimal action of the a-th basis vector on the BRST algebra.

    Poisson action on coefficients, adjoint on antighosts, coadjoint on
    ghosts.  Restricting to the antighost sector gives the module structure
    behind the codifferential.
    """
    ctx = moment.ctx
    dim = moment.lie.dim
    f = moment.lie.f
    j = moment.components[a]

    def fn(x):
        out = x.map_coefficients(lambda p: poisson_bracket(j, p, lam))
        for b in range(dim):
            ib = contract_antighost(x, b + 1)
            if ib.terms:
                for c in range(dim):
                    v = f[a][b][c]
                    if v:
                        out = out + super_mul(
                            _antighost(ctx, dim, x.order, c + 1), ib
                        ).scale(v)
            gb = contract_ghost(x, b + 1)
            if gb.terms:
                for c in range(dim):
                    v = f[a][c][b]
                    if v:
                        out = out + super_mul(
                            _ghost(ctx, dim, x.order, c + 1), gb
                        ).scale(-v)
        return out

    return OperatorHandle(f"L_{a + 1}", fn, 0)


@dataclass
class RepresentationHandle:
    """Per-basis operators realizing a Lie algebra representation."""

    lie: object
    ops: tuple

    def __call__(self, a):
        return self.ops[a]

    def commutator_residuals(self, probes):
        """[L_a, L_b] - sum_c f_ab^c L_c on each probe."""
        out = []
        d = self.lie.dim
        for a in range(d):
            for b in range(a + 1, d):
                for k, x in enumerate(probes):
                    r = self.ops[a](self.ops[b](x)) - self.ops[b](self.ops[a](x))
                    for c in range(d):
                        v = self.lie.f[a][b][c]
                        if v:
                            r = r - self.ops[c](x).scale(v)
                    out.append(((a + 1, b + 1, k), r))
        return out


def build_rep_L(moment, lam):
    return RepresentationHandle(
        moment.lie, tuple(lie_action(moment, lam, a) for a in range(moment.lie.dim))
    )


def build_rep_Lz(moment, lam, res, prol):
    """The quotient-model representation: res after the action after prol."""
    full = build_rep_L(moment, lam)
    ops = tuple(
        op_compose(res, op_compose(full.ops[a], prol), name=f"Lz_{a + 1}")
        for a in range(moment.lie.dim)
    )
    return RepresentationHandle(moment.lie, ops)


def check_classical_splitting(moment, lam, theta, delta, probes):
    """Residuals of the splitting identities on each probe."""
    dop = classical_brst_diff(theta, lam)
    kop = build_koszul_operator(moment)
    out = []
    for k, x in enumerate(probes):
        dx = dop(x)
        out.append((f"D-delta-2koszul[{k}]", dx - delta(x) - kop(x).scale(2)))
        out.append((f"D^2[{k}]", dop(dx)))
        out.append((f"delta^2[{k}]", delta(delta(x))))
        out.append((f"koszul^2[{k}]", kop(kop(x))))
        out.append(
            (f"delta.koszul+koszul.delta[{k}]", delta(kop(x)) + kop(delta(x)))
        )
    return out


def brst_base_contraction(koszul_contraction):
    """Extend the Koszul contraction to the full BRST algebra with d_Y = 2*koszul.

    The restriction, prolongation and homotopy already act on elements with
    ghosts (the homotopy with the odd Koszul sign), so the extension only
    rescales: the homotopy for 2*koszul is h/2.
    """
    c = koszul_contraction
    return Contraction(
        p=c.p,
        i=c.i,
        h=op_scale(c.h, Fraction(1, 2), name="h/2"),
        d_X=OperatorHandle("0", lambda x: x.scale(0), +1),
        d_Y=op_scale(c.d_Y, 2, name="2*koszul"),
        sc1=c.sc1,
        sc2=c.sc2,
        sc3=c.sc3,
        meta=dict(c.meta, extended="brst"),
    )


def quotient_codifferential(delta, res, prol, name="d_z"):
    """The transferred codifferential on quotient cochains: res delta prol."""
    return OperatorHandle(
        name, lambda x: res(delta(prol(x))), +1, frozenset({"ghost"})
    )


def classical_reduction(moment, lam, koszul_contraction, probes_X=(), probes_Y=(), upto=None):
    """Transfer the BRST differential to the quotient cochains.

    Returns (Phi, H, contraction, d_z).  Phi and H come out of the first
    perturbation lemma applied to the perturbation D of 2*koszul.
    """
    base = brst_base_contraction(koszul_contraction)
    delta = build_delta(moment, lam)
    d_z = quotient_codifferential(delta, base.p, base.i)
    out = perturb_v1(base, delta, d_z, probes_X, probes_Y, upto=upto)
    return out.i, out.h, out, d_z


def closed_form_H(koszul_contraction, delta, lie_dim):
    """H = 1/2 h sum_j (-1/2)^j (h delta + delta h)^j, the explicit transfer homotopy."""
    h = koszul_contraction.h

    def fn(x):
        acc = SuperElement.zero(x.ctx, x.dim, x.order)
        term = x
        for j in range(lie_dim + 1):
            acc = acc + term.scale(Fraction(-1, 2) ** j)
            term = h(delta(term)) + delta(h(term))
            if not term.terms:
                break
        return h(acc).scale(Fraction(1, 2))

    return OperatorHandle("H_closed", fn, -1)


def closed_form_Phi(koszul_contraction, delta, h_transfer, d_z):
    """Phi = prol - H (delta prol - prol d_z)."""
    prol = koszul_contraction.i

    def fn(x):
        px = prol(x)
        return px - h_transfer(delta(px) - prol(d_z(x)))

    return OperatorHandle("Phi_closed", fn, 0)


def certify_invariant(p, moment, lam, space, torus_rows=()):
    """Certify that a quotient-model element is invariant.

    Torus route: every monomial has weight zero on the declared rows.
    Bracket route: {J_a, p} reduces to zero modulo the ideal for every a.
    Raises InvarianceError otherwise.
    """
    if torus_rows:
        for m in p.terms:
            grade = p.ctx.grade_of_mono(m)
            for r in torus_rows:
                if grade[1 + r] != 0:
                    raise InvarianceError(
                        f"monomial {m} has nonzero weight on torus row {r}"
                    )
        return True
    for a, j in enumerate(moment.components):
        residual = space.normal_form_poly(poisson_bracket(j, p, lam))
        if not residual.is_zero():
            raise InvarianceError(
                f"{{J_{a + 1}, f}} is not in the ideal: residual {residual}"
            )
    return True


def reduced_poisson(f, g, phi, res, lam, dim, moment=None, space=None, torus_rows=(), certify=True):
    """The reduced bracket {[f],[g]} = res {Phi f, Phi g} on invariants."""
    if certify:
        if space is None or moment is None:
            raise InvarianceError("cannot certify invariance without the quotient model")
        certify_invariant(f, moment, lam, space, torus_rows)
        certify_invariant(g, moment, lam, space, torus_rows)
    fx = SuperElement.from_poly(f, dim, 0)
    gx = SuperElement.from_poly(g, dim, 0)
    out = res(graded_poisson(phi(fx), phi(gx), lam))
    return out.as_series().classical()
