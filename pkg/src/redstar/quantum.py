"""Quantum BRST: deformed charge, differentials and the splitting check.

The deformed Koszul differential is right star multiplication by the
moment map plus structure-constant corrections; the deformed
codifferential replaces the coefficient Poisson action by the rescaled
star commutator.  Dividing by nu costs one reliable order, which the
Series layer tracks; callers give themselves headroom by working at a
truncation above the order they assert.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConventionError
from .poisson import moyal_star_series
from .series import Series
from .superalg import (
    OperatorHandle,
    SuperElement,
    contract_antighost,
    contract_ghost,
    super_mul,
)
from .brst import classical_charge, _ghost, _antighost


def quantum_charge_raw(moment, order):
    """theta_nu: the classical charge plus the unimodular nu-correction."""
    ctx = moment.ctx
    dim = moment.lie.dim
    theta = classical_charge(moment, order)
    f = moment.lie.f
    for a in range(dim):
        trace = sum(f[a][b][b] for b in range(dim))
        if trace:
            correction = SuperElement(
                ctx,
                dim,
                order,
                {((a + 1,), ()): Series.nu(ctx, order).scale(Fraction(trace, 2))},
            )
            theta = theta + correction
    return theta


def quantum_charge(moment, star, order):
    """The deformed charge, with nilpotency enforced.

    A nonvanishing square means a sign-convention breach somewhere in the
    product data and aborts the construction.
    """
    theta = quantum_charge_raw(moment, order)
    square = star.star(theta, theta)
    if not square.is_zero():
        raise ConventionError(
            f"quantum charge fails nilpotency: theta_nu * theta_nu = {square}"
        )
    return theta


def star_right_multiply(x, j, star):
    """x * J for a ghost-free polynomial J (Moyal on coefficients only)."""
    out = {}
    for key, coeff in x.terms.items():
        prod = moyal_star_series(coeff, Series.from_poly(j, x.order), star.lam)
        if not all(p.is_zero() for p in prod.coeffs):
            out[key] = prod
    return SuperElement(x.ctx, x.dim, x.order, out, _clean=True)


def build_R(moment, star):
    """R(x) = sum_a (i^a x) * J_a: right star multiplication."""

    def fn(x):
        out = SuperElement.zero(x.ctx, x.dim, x.order)
        for a in range(1, moment.lie.dim + 1):
            piece = contract_antighost(x, a)
            if piece.terms:
                out = out + star_right_multiply(piece, moment.components[a - 1], star)
        return out

    return OperatorHandle("R", fn, +1)


def build_q(moment):
    """q(x) = -1/2 sum f_ab^c e_c i^a i^b x."""
    ctx = moment.ctx
    dim = moment.lie.dim
    f = moment.lie.f

    def fn(x):
        out = SuperElement.zero(ctx, dim, x.order)
        for a in range(dim):
            for b in range(dim):
                for c in range(dim):
                    v = f[a][b][c]
                    if not v:
                        continue
                    inner = contract_antighost(contract_antighost(x, b + 1), a + 1)
                    if inner.terms:
                        out = out + super_mul(
                            _antighost(ctx, dim, x.order, c + 1), inner
                        ).scale(Fraction(-1, 2) * v)
        return out

    return OperatorHandle("q", fn, +1)


def build_u(moment):
    """u(x) = sum_ab f_ab^b i^a x (the unimodular term)."""
    dim = moment.lie.dim
    f = moment.lie.f

    def fn(x):
        out = SuperElement.zero(x.ctx, dim, x.order)
        for a in range(dim):
            trace = sum(f[a][b][b] for b in range(dim))
            if trace:
                piece = contract_antighost(x, a + 1)
                if piece.terms:
                    out = out + piece.scale(trace)
        return out

    return OperatorHandle("u", fn, +1)


def build_quantum_koszul(moment, star):
    """The deformed Koszul differential R + nu (u/2 - q)."""
    r = build_R(moment, star)
    q = build_q(moment)
    u = build_u(moment)

    def fn(x):
        correction = u(x).scale(Fraction(1, 2)) - q(x)
        return r(x) + correction.shift_nu(1)

    return OperatorHandle("koszul_nu", fn, +1)


def build_quantum_delta(moment, star):
    """The deformed codifferential: structure terms plus e^a (1/nu)[J_a, .]*.

    The star-commutator piece acts on coefficients; the division by nu is
    exact under quantum covariance and drops one reliable order.
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
            j = Series.from_poly(moment.components[a], order)
            acted = {}
            for key, coeff in x.terms.items():
                comm = (
                    moyal_star_series(j, coeff, star.lam)
                    - moyal_star_series(coeff, j, star.lam)
                ).div_nu()
                if not all(p.is_zero() for p in comm.coeffs):
                    acted[key] = comm
            el = SuperElement(ctx, dim, order, acted, _clean=True)
            if el.terms:
                out = out + super_mul(_ghost(ctx, dim, order, a + 1), el)
        return out

    return OperatorHandle("delta_nu", fn, +1, frozenset({"ghost"}))


def quantum_brst_diff(theta_nu, star):
    """D_nu = (1/nu) ad_*(theta_nu)."""

    def fn(x):
        return star.commutator(theta_nu, x).div_nu()

    return OperatorHandle("D_nu", fn, +1, frozenset({"ghost"}))


@dataclass
class QuantumOperators:
    theta_nu: SuperElement
    D: OperatorHandle
    koszul_nu: OperatorHandle
    delta_nu: OperatorHandle
    R: OperatorHandle
    q: OperatorHandle
    u: OperatorHandle


def build_quantum_operators(moment, star, order):
    theta_nu = quantum_charge(moment, star, order)
    return QuantumOperators(
        theta_nu=theta_nu,
        D=quantum_brst_diff(theta_nu, star),
        koszul_nu=build_quantum_koszul(moment, star),
        delta_nu=build_quantum_delta(moment, star),
        R=build_R(moment, star),
        q=build_q(moment),
        u=build_u(moment),
    )


def check_quantum_splitting(ops, probes, upto=None):
    """Residuals of the quantum splitting identities on each probe.

    D_nu = delta_nu + 2 koszul_nu, each square zero, and the two pieces
    anticommute; all modulo the truncation (to `upto` when given).
    """
    out = []
    for k, x in enumerate(probes):
        dx = ops.D(x)
        out.append(
            (f"D_nu-delta_nu-2koszul_nu[{k}]", dx - ops.delta_nu(x) - ops.koszul_nu(x).scale(2))
        )
        out.append((f"D_nu^2[{k}]", ops.D(dx)))
        out.append((f"delta_nu^2[{k}]", ops.delta_nu(ops.delta_nu(x))))
        out.append((f"koszul_nu^2[{k}]", ops.koszul_nu(ops.koszul_nu(x))))
        out.append(
            (
                f"delta_nu.koszul_nu+koszul_nu.delta_nu[{k}]",
                ops.delta_nu(ops.koszul_nu(x)) + ops.koszul_nu(ops.delta_nu(x)),
            )
        )
    return out
