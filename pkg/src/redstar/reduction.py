"""Quantum reduction: deformed restriction, transfer and the reduced product.

The deformed restriction comes from the second perturbation lemma applied
to the deformed Koszul differential; the full quantum transfer from the
first lemma applied to the quantum BRST differential.  The reduced star
product of two certified invariants is the deformed restriction of the star
product of their prolongations; on general cochain classes the transferred
product routes through the perturbed inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .brst import certify_invariant, quotient_codifferential
from .errors import ClosednessError
from .hpt import neumann_inverse, perturb_v1, perturb_v2
from .koszul import Contraction
from .poisson import moyal_star_series
from .poly import Poly
from .series import Series
from .superalg import OperatorHandle, SuperElement, op_compose, op_scale


def deformed_restriction(koszul_contraction, moment, star, probes_X=(), probes_Y=(), upto=None):
    """Contraction of the deformed Koszul complex via the second lemma.

    Returns (contraction, t) where the contraction carries res_nu and the
    deformed homotopy, and t = koszul_nu - koszul is the initiator.
    """
    from .quantum import build_quantum_koszul

    knu = build_quantum_koszul(moment, star)
    t = OperatorHandle(
        "(koszul_nu-koszul)",
        lambda x: knu(x) - koszul_contraction.d_Y(x),
        -1,
        frozenset({"nu"}),
    )
    t_x = OperatorHandle("0", lambda x: x.scale(0), -1, frozenset({"nu"}))
    out = perturb_v2(
        koszul_contraction, t, t_x, probes_X, probes_Y, upto=upto
    )
    out.meta["initiator"] = t
    return out, t


def closed_form_res_nu(koszul_contraction, t, order, name="res_nu_closed"):
    """res (id + (koszul_nu,1 - koszul,1) h_0)^{-1} on the antighost-free sector."""
    c = koszul_contraction
    th = OperatorHandle(
        "t.h", lambda x: t(c.h(x)), 0, frozenset({"nu"})
    )
    inv = neumann_inverse(th, cap=order + 4)
    return op_compose(c.p, inv, name=name)


def quantized_representation(moment, star, res_nu, prol):
    """L^z deformed: res_nu after the star-commutator action after prol."""
    from .brst import RepresentationHandle

    dim = moment.lie.dim

    def make(a):
        j = moment.components[a]

        def fn(x):
            px = prol(x)
            jser = Series.from_poly(j, px.order)
            acted = {}
            for key, coeff in px.terms.items():
                comm = (
                    moyal_star_series(jser, coeff, star.lam)
                    - moyal_star_series(coeff, jser, star.lam)
                ).div_nu()
                if not all(p.is_zero() for p in comm.coeffs):
                    acted[key] = comm
            # adjoint part on antighosts vanishes on quotient cochains
            return res_nu(SuperElement(px.ctx, px.dim, px.order, acted, _clean=True))

        return OperatorHandle(f"Lz_nu_{a + 1}", fn, 0)

    return RepresentationHandle(moment.lie, tuple(make(a) for a in range(dim)))


def quantum_reduction(moment, star, deformed_contraction, probes_X=(), probes_Y=(), upto=None):
    """Transfer the quantum BRST differential: returns (Phi_nu, H_nu, contraction, d_z_nu)."""
    c = deformed_contraction
    base = Contraction(
        p=c.p,
        i=c.i,
        h=op_scale(c.h, Fraction(1, 2), name="h_nu/2"),
        d_X=OperatorHandle("0", lambda x: x.scale(0), +1),
        d_Y=op_scale(c.d_Y, 2, name="2*koszul_nu"),
        sc1=c.sc1,
        sc2=c.sc2,
        sc3=c.sc3,
        meta=dict(c.meta, extended="quantum-brst"),
    )
    from .quantum import build_quantum_delta

    delta_nu = build_quantum_delta(moment, star)
    d_z = quotient_codifferential(delta_nu, base.p, base.i, name="d_z_nu")
    out = perturb_v1(base, delta_nu, d_z, probes_X, probes_Y, upto=upto)
    return out.i, out.h, out, d_z


def closed_form_H_nu(deformed_contraction, delta_nu, lie_dim):
    """H_nu = 1/2 h_nu sum_j (-1/2)^j (h_nu delta_nu + delta_nu h_nu)^j."""
    h = deformed_contraction.h

    def fn(x):
        acc = SuperElement.zero(x.ctx, x.dim, x.order)
        term = x
        for j in range(lie_dim + 1):
            acc = acc + term.scale(Fraction(-1, 2) ** j)
            term = h(delta_nu(term)) + delta_nu(h(term))
            if not term.terms:
                break
        return h(acc).scale(Fraction(1, 2))

    return OperatorHandle("H_nu_closed", fn, -1)


def closed_form_Phi_nu(deformed_contraction, delta_nu, h_nu, d_z_nu):
    prol = deformed_contraction.i

    def fn(x):
        px = prol(x)
        return px - h_nu(delta_nu(px) - prol(d_z_nu(x)))

    return OperatorHandle("Phi_nu_closed", fn, 0)


@dataclass
class ReductionPipeline:
    """Everything needed to evaluate the reduced star product."""

    moment: object
    lam: object
    star: object
    space: object
    order: int
    koszul_contraction: object
    deformed_contraction: object
    quantum_contraction: object
    phi_nu: OperatorHandle
    h_nu: OperatorHandle
    d_z_nu: OperatorHandle
    torus_rows: tuple = ()

    @property
    def res_nu(self):
        return self.deformed_contraction.p

    @property
    def prol(self):
        return self.deformed_contraction.i

    def embed(self, f):
        if isinstance(f, Poly):
            return SuperElement.from_poly(f, self.moment.lie.dim, self.order)
        if isinstance(f, Series):
            return SuperElement.scalar(f, self.moment.lie.dim)
        return f

    def certify(self, f):
        if isinstance(f, Series):
            for c in f.coeffs:
                certify_invariant(c, self.moment, self.lam, self.space, self.torus_rows)
        else:
            certify_invariant(f, self.moment, self.lam, self.space, self.torus_rows)


def reduced_star(f, g, pipe, certify=True):
    """f * g = res_nu(prol f * prol g) for certified invariants.

    Accepts Poly or Series in the quotient model; returns a Series in the
    quotient model.
    """
    if certify:
        pipe.certify(f)
        pipe.certify(g)
    fx = pipe.prol(pipe.embed(f))
    gx = pipe.prol(pipe.embed(g))
    return pipe.res_nu(pipe.star.star(fx, gx)).as_series()


def reduced_star_cohomology(a, b, pipe, check_closed=True, upto=None):
    """[a] * [b] = res_nu(Phi_nu a * Phi_nu b) on closed quotient cochains."""
    if check_closed:
        for name, x in (("left", a), ("right", b)):
            res = pipe.d_z_nu(x)
            if not res.is_zero(upto):
                raise ClosednessError(f"{name} cochain is not closed: d_z residual {res}")
    return pipe.res_nu(pipe.star.star(pipe.phi_nu(a), pipe.phi_nu(b)))


def weight_zero_monomials(ctx, torus_rows, max_degree):
    """All monomials of weight zero on the torus rows, by ascending degree."""
    out = []
    for deg in range(max_degree + 1):
        for m in ctx.monomials_of_degree(deg):
            grade = ctx.grade_of_mono(m)
            if all(grade[1 + r] == 0 for r in torus_rows):
                out.append(m)
    return out


def invariant_generators(ctx, torus_rows, max_degree, include_unit=True):
    """Indecomposable weight-zero monomials up to the degree cap, plus 1.

    A weight-zero monomial is kept when it does not factor into two
    nontrivial weight-zero monomials of lower degree; the survivors
    multiplicatively generate every weight-zero monomial within the cap.
    """
    invariants = weight_zero_monomials(ctx, torus_rows, max_degree)
    inv_set = set(invariants)
    gens = []
    for m in invariants:
        deg = sum(m)
        if deg == 0:
            if include_unit:
                gens.append(m)
            continue
        decomposable = False
        for d in inv_set:
            dd = sum(d)
            if dd == 0 or dd >= deg:
                continue
            rest = tuple(a - b for a, b in zip(m, d))
            if all(e >= 0 for e in rest) and rest in inv_set:
                decomposable = True
                break
        if not decomposable:
            gens.append(m)
    return [Poly.monomial(ctx, m) for m in gens]
