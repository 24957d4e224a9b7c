"""Constant-coefficient Poisson brackets and the Moyal-type star product.

The bivector is an antisymmetric invertible matrix over the coefficient
field.  The star product is the exponential bidifferential series

    f * g = sum_k (nu/2)^k / k! * L^{i1 j1} .. L^{ik jk}
            (d_{i1} .. d_{ik} f)(d_{j1} .. d_{jk} g)

truncated at the scenario order.  On polynomials every term with k beyond
min(deg f, deg g) vanishes, so the expansion is finite and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .errors import ContextError, ShapeError
from .linalg import matrix_rank
from .poly import Poly
from .series import Series


@dataclass(frozen=True)
class PoissonData:
    """The constant Poisson bivector in the declared coordinates."""

    ctx: object
    matrix: tuple  # rows of field elements

    def __post_init__(self):
        n = self.ctx.nvars
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ShapeError("Poisson matrix must be square over the variable list")
        for a in range(n):
            for b in range(n):
                if self.matrix[a][b] != -self.matrix[b][a]:
                    raise ShapeError("Poisson matrix must be antisymmetric")
        if matrix_rank([list(r) for r in self.matrix], n, self.ctx.field) != n:
            raise ShapeError("Poisson matrix must be invertible (symplectic)")
        object.__setattr__(
            self,
            "_entries",
            tuple(
                (a, b, v)
                for a, row in enumerate(self.matrix)
                for b, v in enumerate(row)
                if v
            ),
        )

    def entries(self):
        """Nonzero entries as (i, j, value) triples."""
        return self._entries


def poisson_data(ctx, entries):
    """Build PoissonData from a sparse list of (name_i, name_j, value)."""
    n = ctx.nvars
    zero = ctx.field.zero
    m = [[zero] * n for _ in range(n)]
    for ni, nj, v in entries:
        a, b = ctx.index(ni), ctx.index(nj)
        v = ctx.field.coerce(v)
        m[a][b] = v
        m[b][a] = -v
    return PoissonData(ctx, tuple(tuple(r) for r in m))


def poisson_bracket(f, g, lam):
    """{f, g} = sum_ij L^{ij} d_i f d_j g."""
    if f.ctx != g.ctx or f.ctx != lam.ctx:
        raise ContextError("bracket operands live in different contexts")
    out = Poly.zero(f.ctx)
    for a, b, v in lam.entries():
        df = f.diff(a)
        if df.is_zero():
            continue
        dg = g.diff(b)
        if dg.is_zero():
            continue
        out = out + (df * dg).scale(v)
    return out


def _derivative(cache, p, indices):
    """Iterated partial derivative with caching keyed by sorted index tuple."""
    key = tuple(sorted(indices))
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not key:
        cache[key] = p
        return p
    prev = _derivative(cache, p, key[:-1])
    out = prev.diff(key[-1])
    cache[key] = out
    return out


def moyal_term(f, g, lam, k, f_cache=None, g_cache=None):
    """The k-th bidifferential coefficient (without the (nu/2)^k factor)."""
    ctx = f.ctx
    if k == 0:
        return f * g
    if k > f.degree() or k > g.degree():
        return Poly.zero(ctx)
    if f_cache is None:
        f_cache = {(): f}
    if g_cache is None:
        g_cache = {(): g}
    entries = lam.entries()
    out = Poly.zero(ctx)
    for combo in combinations_with_replacement(range(len(entries)), k):
        mult = 1
        counts = {}
        for idx in combo:
            counts[idx] = counts.get(idx, 0) + 1
        for c in counts.values():
            mult *= factorial(c)
        coeff = ctx.field.one
        for idx in combo:
            coeff = coeff * entries[idx][2]
        fi = tuple(entries[idx][0] for idx in combo)
        gi = tuple(entries[idx][1] for idx in combo)
        df = _derivative(f_cache, f, fi)
        if df.is_zero():
            continue
        dg = _derivative(g_cache, g, gi)
        if dg.is_zero():
            continue
        out = out + (df * dg).scale(coeff * Fraction(1, mult))
    return out


def moyal_star(f, g, lam, order):
    """Moyal star product of two polynomials, truncated at `order`."""
    ctx = f.ctx
    if g.ctx != ctx or lam.ctx != ctx:
        raise ContextError("star operands live in different contexts")
    coeffs = []
    f_cache, g_cache = {(): f}, {(): g}
    kmax = min(order, max(f.degree(), 0), max(g.degree(), 0))
    for k in range(order + 1):
        if k > kmax:
            coeffs.append(Poly.zero(ctx))
            continue
        term = moyal_term(f, g, lam, k, f_cache, g_cache)
        coeffs.append(term.scale(Fraction(1, 2**k)))
    return Series(ctx, order, coeffs)


def moyal_star_series(a, b, lam, order=None):
    """Moyal star product of two Series, slotwise with truncation."""
    if isinstance(a, Poly):
        a = Series.from_poly(a, order if order is not None else b.order)
    if isinstance(b, Poly):
        b = Series.from_poly(b, a.order)
    if a.order != b.order:
        raise ContextError("series truncation orders differ")
    n = a.order
    ctx = a.ctx
    zero = Poly.zero(ctx)
    out = [zero] * (n + 1)
    for i, ci in enumerate(a.coeffs):
        if ci.is_zero():
            continue
        for j, cj in enumerate(b.coeffs):
            if i + j > n or cj.is_zero():
                continue
            prod = moyal_star(ci, cj, lam, n - i - j)
            for k, p in enumerate(prod.coeffs):
                if not p.is_zero():
                    out[i + j + k] = out[i + j + k] + p
    return Series(ctx, n, out, min(a.reliable, b.reliable))


def moyal_commutator(f, g, lam, order):
    """f * g - g * f as a Series."""
    return moyal_star(f, g, lam, order) - moyal_star(g, f, lam, order)


@dataclass
class ResidualRecord:
    """One residual from an identity check; zero means the identity held."""

    label: str
    residual: Series

    @property
    def passed(self):
        return self.residual.is_zero()

    def witness(self):
        return None if self.passed else str(self.residual)


@dataclass
class CheckOutcome:
    name: str
    records: list

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    def failures(self):
        return [r for r in self.records if not r.passed]


def check_quantum_covariance(moment, lam, order):
    """J_a * J_b - J_b * J_a = nu * sum_c f_ab^c J_c for every basis pair."""
    comps = moment.components
    lie = moment.lie
    records = []
    for a in range(lie.dim):
        for b in range(a + 1, lie.dim):
            lhs = moyal_commutator(comps[a], comps[b], lam, order)
            rhs = Poly.zero(comps[a].ctx)
            for c in range(lie.dim):
                fc = lie.f[a][b][c]
                if fc:
                    rhs = rhs + comps[c].scale(fc)
            residual = lhs - Series.from_poly(rhs, order).shift_nu(1)
            records.append(ResidualRecord(f"pair ({a + 1},{b + 1})", residual))
    return CheckOutcome("quantum-covariance", records)


def check_strong_invariance(moment, lam, order, probes):
    """J_a * f - f * J_a = nu {J_a, f} on every probe polynomial."""
    comps = moment.components
    records = []
    for a, j in enumerate(comps):
        for k, f in enumerate(probes):
            lhs = moyal_commutator(j, f, lam, order)
            rhs = Series.from_poly(poisson_bracket(j, f, lam), order).shift_nu(1)
            records.append(
                ResidualRecord(f"component {a + 1}, probe {k + 1}", lhs - rhs)
            )
    return CheckOutcome("strong-invariance", records)
