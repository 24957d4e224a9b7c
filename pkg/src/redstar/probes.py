"""Random probe generation for identity checks (seeded, reproducible)."""

from __future__ import annotations

from itertools import combinations

from .poly import Poly
from .series import Series
from .superalg import SuperElement


def random_poly(ctx, rng, max_degree=3, terms=4, span=5):
    """A small random polynomial with exact coefficients."""
    out = {}
    for _ in range(terms):
        deg = rng.randint(0, max_degree)
        mono = [0] * ctx.nvars
        for _ in range(deg):
            mono[rng.randrange(ctx.nvars)] += 1
        out[tuple(mono)] = ctx.field.random(rng, span)
    return Poly(ctx, out)


def random_homogeneous_poly(ctx, rng, degree, terms=3, span=5):
    monos = ctx.monomials_of_degree(degree)
    if not monos:
        return Poly.zero(ctx)
    out = {}
    for _ in range(terms):
        out[monos[rng.randrange(len(monos))]] = ctx.field.random(rng, span)
    return Poly(ctx, out)


def random_series(ctx, rng, order, max_degree=3, terms=3):
    return Series(
        ctx,
        order,
        [random_poly(ctx, rng, max_degree, terms) for _ in range(order + 1)],
    )


def random_super(ctx, dim, order, rng, max_degree=3, terms=3, nu_content=False):
    """A random BRST element with arbitrary ghost/antighost content."""
    out = {}
    subsets = [()]
    for r in range(1, dim + 1):
        subsets.extend(combinations(range(1, dim + 1), r))
    for _ in range(terms):
        g = subsets[rng.randrange(len(subsets))]
        a = subsets[rng.randrange(len(subsets))]
        if nu_content:
            coeff = random_series(ctx, rng, order, max_degree, terms=2)
        else:
            coeff = Series.from_poly(random_poly(ctx, rng, max_degree, terms=2), order)
        key = (g, a)
        cur = out.get(key)
        out[key] = coeff if cur is None else cur + coeff
    return SuperElement(ctx, dim, order, out)


def random_bounded_super(ctx, dim, order, rng, bound, jgrade_degs, terms=3, nu_content=False):
    """A random BRST element whose every term stays within the degree bound.

    `jgrade_degs[a]` is the polynomial degree of the a-th moment component;
    a term with antighost set A and coefficient degree d has total degree
    d + sum of the offsets, which is kept <= bound.
    """
    out = {}
    subsets = [()]
    for r in range(1, dim + 1):
        subsets.extend(combinations(range(1, dim + 1), r))
    ghost_subsets = list(subsets)
    for _ in range(terms):
        a = subsets[rng.randrange(len(subsets))]
        g = ghost_subsets[rng.randrange(len(ghost_subsets))]
        room = bound - sum(jgrade_degs[x - 1] for x in a)
        if room < 0:
            continue
        deg = rng.randint(0, room)
        p = random_poly(ctx, rng, deg, terms=2)
        if nu_content:
            coeff = Series(
                ctx,
                order,
                [random_poly(ctx, rng, deg, terms=1) for _ in range(order + 1)],
            )
        else:
            coeff = Series.from_poly(p, order)
        key = (g, a)
        cur = out.get(key)
        out[key] = coeff if cur is None else cur + coeff
    return SuperElement(ctx, dim, order, out)


def random_bounded_chain(ctx, dim, order, rng, bound, jgrade_degs, hdegree, terms=3):
    """A random ghost-free chain of one antighost degree within the bound."""
    out = {}
    asets = list(combinations(range(1, dim + 1), hdegree))
    for _ in range(terms):
        a = asets[rng.randrange(len(asets))]
        room = bound - sum(jgrade_degs[x - 1] for x in a)
        if room < 0:
            continue
        deg = rng.randint(0, room)
        coeff = Series.from_poly(random_poly(ctx, rng, deg, terms=2), order)
        key = ((), a)
        cur = out.get(key)
        out[key] = coeff if cur is None else cur + coeff
    return SuperElement(ctx, dim, order, out)


def random_cochain(ctx, dim, order, rng, space, max_degree=3, terms=3):
    """A random quotient-model cochain: ghosts only, complement coefficients."""
    out = {}
    subsets = [()]
    for r in range(1, dim + 1):
        subsets.extend(combinations(range(1, dim + 1), r))
    for _ in range(terms):
        g = subsets[rng.randrange(len(subsets))]
        p = space.normal_form_poly(random_poly(ctx, rng, max_degree, terms=2))
        key = (g, ())
        coeff = Series.from_poly(p, order)
        cur = out.get(key)
        out[key] = coeff if cur is None else cur + coeff
    return SuperElement(ctx, dim, order, out)
