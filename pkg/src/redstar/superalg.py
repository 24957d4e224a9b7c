"""The BRST algebra: ghosts, antighosts, graded products and brackets.

Elements are sparse maps from (ghost index set, antighost index set) to
Series coefficients.  Index sets are strictly increasing tuples; the
canonical monomial order puts ghosts e^1 < ... < e^l before antighosts
e_1 < ... < e_l, and all reordering signs are absorbed into coefficients.

Convention notes (pinned by the identity test suite, see tests):
  * i^a is the odd left derivation with i^a(e_b) = delta, i^a(e^b) = 0;
    i_a annihilates ghosts the same way.
  * The Clifford product is mu(exp(c*nu*T)(x (x) y)) with
    T(x (x) y) = sum_a (-1)^{|x|} i^a(x) (x) i_a(y) and c = -2.
  * The even graded Poisson bracket pairs ghosts with antighosts at
    strength 2, the normalization under which the charge bracket equals
    the codifferential plus twice the Koszul differential, and under which
    the bracket is the first-order supercommutator of the graded star
    product.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial

from .errors import ContextError
from .poisson import moyal_star_series, poisson_bracket
from .poly import Poly
from .series import Series


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants and optional torus weight data.

    `f[a][b][c]` is the coefficient of the c-th basis vector in [e_a, e_b].
    `torus_rows` names the grading rows of the variable context that realize
    the torus weights (empty for nonabelian or non-diagonal actions).
    """

    dim: int
    f: tuple
    torus_rows: tuple = ()
    abelian: bool = False
    unimodular: bool = False

    @classmethod
    def build(cls, dim, f_entries=(), torus_rows=()):
        """Construct from sparse entries (a, b, c, value), 1-based indices."""
        f = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for a, b, c, v in f_entries:
            v = Fraction(v)
            f[a - 1][b - 1][c - 1] = v
            f[b - 1][a - 1][c - 1] = -v
        f = tuple(tuple(tuple(row) for row in plane) for plane in f)
        abelian = all(not v for plane in f for row in plane for v in row)
        unimodular = all(
            sum(f[a][b][b] for b in range(dim)) == 0 for a in range(dim)
        )
        data = cls(dim, f, tuple(torus_rows), abelian, unimodular)
        data.validate()
        return data

    def validate(self):
        d = self.dim
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    if self.f[a][b][c] != -self.f[b][a][c]:
                        raise ValueError("structure constants are not antisymmetric")
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    for e in range(d):
                        s = sum(
                            self.f[a][b][x] * self.f[x][c][e]
                            + self.f[b][c][x] * self.f[x][a][e]
                            + self.f[c][a][x] * self.f[x][b][e]
                            for x in range(d)
                        )
                        if s != 0:
                            raise ValueError("structure constants fail the Jacobi identity")
        if self.abelian and any(v for plane in self.f for row in plane for v in row):
            raise ValueError("abelian flag inconsistent with nonzero structure constants")


# -- sign utilities -----------------------------------------------------------
# Generators are encoded as integers: ghost a -> a, antighost a -> dim + a.


def _encode(ghosts, antighosts, dim):
    return tuple(ghosts) + tuple(dim + a for a in antighosts)


def _merge_sign(seq1, seq2):
    """Koszul sign for concatenating two sorted odd-generator sequences.

    Returns (sign, merged sorted tuple) or (0, None) when a generator repeats.
    """
    if not seq1:
        return 1, tuple(seq2)
    if not seq2:
        return 1, tuple(seq1)
    inversions = 0
    for y in seq2:
        for x in seq1:
            if x == y:
                return 0, None
            if x > y:
                inversions += 1
    merged = tuple(sorted(seq1 + seq2))
    if len(merged) != len(set(merged)):
        return 0, None
    return (-1) ** inversions, merged


def _decode(seq, dim):
    ghosts = tuple(g for g in seq if g <= dim)
    antighosts = tuple(g - dim for g in seq if g > dim)
    return ghosts, antighosts


def term_parity(key):
    ghosts, antighosts = key
    return (len(ghosts) + len(antighosts)) % 2


def term_degree(key):
    ghosts, antighosts = key
    return len(ghosts) - len(antighosts)


def _remove_antighost(key, a):
    """Action of i^a on a canonical term: (sign, new key) or None."""
    ghosts, antighosts = key
    if a not in antighosts:
        return None
    pos = antighosts.index(a)
    sign = (-1) ** (len(ghosts) + pos)
    return sign, (ghosts, antighosts[:pos] + antighosts[pos + 1 :])


def _remove_ghost(key, a):
    """Action of i_a on a canonical term: (sign, new key) or None."""
    ghosts, antighosts = key
    if a not in ghosts:
        return None
    pos = ghosts.index(a)
    sign = (-1) ** pos
    return sign, (ghosts[:pos] + ghosts[pos + 1 :], antighosts)


class SuperElement:
    """Element of the BRST algebra with Series coefficients."""

    __slots__ = ("ctx", "dim", "order", "terms")

    def __init__(self, ctx, dim, order, terms=None, _clean=False):
        self.ctx = ctx
        self.dim = dim
        self.order = order
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            clean = {}
            for key, coeff in terms.items():
                if isinstance(coeff, Poly):
                    coeff = Series.from_poly(coeff, order)
                if not all(c.is_zero() for c in coeff.coeffs):
                    clean[key] = coeff
            self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ctx, dim, order):
        return cls(ctx, dim, order, {}, _clean=True)

    @classmethod
    def scalar(cls, coeff, dim):
        """Embed a Poly or Series as a ghost-free element."""
        if isinstance(coeff, Poly):
            raise TypeError("wrap the Poly in a Series first (order is ambiguous)")
        return cls(coeff.ctx, dim, coeff.order, {((), ()): coeff})

    @classmethod
    def from_poly(cls, p, dim, order):
        return cls(p.ctx, dim, order, {((), ()): Series.from_poly(p, order)})

    @classmethod
    def generator(cls, ctx, dim, order, ghosts=(), antighosts=(), coeff=1):
        key = (tuple(ghosts), tuple(antighosts))
        if list(key[0]) != sorted(set(key[0])) or list(key[1]) != sorted(set(key[1])):
            raise ValueError("generator index sets must be strictly increasing")
        series = Series.const(ctx, coeff, order)
        return cls(ctx, dim, order, {key: series})

    def _check(self, other):
        if self.ctx != other.ctx or self.dim != other.dim or self.order != other.order:
            raise ContextError("super elements live in different contexts")

    # -- linear structure ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, SuperElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            cur = out.get(key)
            s = coeff if cur is None else cur + coeff
            if all(c.is_zero() for c in s.coeffs):
                out.pop(key, None)
            else:
                out[key] = s
        return SuperElement(self.ctx, self.dim, self.order, out, _clean=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SuperElement(
            self.ctx,
            self.dim,
            self.order,
            {k: -c for k, c in self.terms.items()},
            _clean=True,
        )

    def scale(self, c):
        out = {}
        for key, coeff in self.terms.items():
            s = coeff.scale(c)
            if not all(p.is_zero() for p in s.coeffs):
                out[key] = s
        return SuperElement(self.ctx, self.dim, self.order, out, _clean=True)

    def scale_series(self, s):
        """Multiply every coefficient by a Series (central, even)."""
        out = {}
        for key, coeff in self.terms.items():
            prod = coeff * s
            if not all(p.is_zero() for p in prod.coeffs):
                out[key] = prod
        return SuperElement(self.ctx, self.dim, self.order, out, _clean=True)

    def shift_nu(self, k):
        return SuperElement(
            self.ctx,
            self.dim,
            self.order,
            {key: c.shift_nu(k) for key, c in self.terms.items()},
        )

    def div_nu(self):
        return SuperElement(
            self.ctx,
            self.dim,
            self.order,
            {key: c.div_nu() for key, c in self.terms.items()},
        )

    def map_coefficients(self, fn, reliable_drop=0):
        """Apply a Poly -> Poly linear map to every nu-slot of every term."""
        out = {}
        for key, coeff in self.terms.items():
            mapped = Series(
                self.ctx,
                self.order,
                [fn(p) for p in coeff.coeffs],
                coeff.reliable - reliable_drop,
            )
            if not all(p.is_zero() for p in mapped.coeffs):
                out[key] = mapped
        return SuperElement(self.ctx, self.dim, self.order, out, _clean=True)

    # -- structure queries ----------------------------------------------------

    def is_zero(self, upto=None):
        return all(c.is_zero(upto) for c in self.terms.values())

    @property
    def reliable(self):
        if not self.terms:
            return self.order
        return min(c.reliable for c in self.terms.values())

    def parity_components(self):
        even = {}
        odd = {}
        for key, coeff in self.terms.items():
            (even if term_parity(key) == 0 else odd)[key] = coeff
        mk = lambda t: SuperElement(self.ctx, self.dim, self.order, t, _clean=True)
        return mk(even), mk(odd)

    def degree_components(self):
        buckets = {}
        for key, coeff in self.terms.items():
            buckets.setdefault(term_degree(key), {})[key] = coeff
        return {
            d: SuperElement(self.ctx, self.dim, self.order, t, _clean=True)
            for d, t in sorted(buckets.items())
        }

    def max_antighost_degree(self):
        return max((len(k[1]) for k in self.terms), default=0)

    def ghost_free(self):
        return all(not k[0] for k in self.terms)

    def antighost_free(self):
        return all(not k[1] for k in self.terms)

    def as_series(self):
        """The scalar part of a ghost- and antighost-free element."""
        if any(k != ((), ()) for k in self.terms):
            raise ValueError("element has ghost or antighost content")
        return self.terms.get(((), ()), Series.zero(self.ctx, self.order))

    def truncate(self, order):
        return SuperElement(
            self.ctx,
            self.dim,
            order,
            {k: c.truncate(order) for k, c in self.terms.items()},
        )

    def classical_part(self):
        """The nu^0 part, as an order-0 element."""
        return self.truncate(0)

    def coefficient(self, ghosts=(), antighosts=()):
        key = (tuple(ghosts), tuple(antighosts))
        return self.terms.get(key, Series.zero(self.ctx, self.order))

    def eq_upto(self, other, upto=None):
        return (self - other).is_zero(upto)

    def __eq__(self, other):
        if not isinstance(other, SuperElement):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.dim == other.dim
            and self.order == other.order
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx, self.dim, self.order, frozenset(self.terms)))

    def max_degree(self):
        return max((c.max_degree() for c in self.terms.values()), default=-1)

    def nonzero_term_count(self):
        return sum(c.nonzero_term_count() for c in self.terms.values())

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for key in sorted(self.terms, key=lambda k: (term_degree(k), k)):
            ghosts, antighosts = key
            gens = [f"e^{a}" for a in ghosts] + [f"e_{a}" for a in antighosts]
            body = "*".join(gens) if gens else "1"
            chunks.append(f"({self.terms[key]})*{body}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"SuperElement({self})"


# -- derivations ---------------------------------------------------------------


def contract_ghost(x, a):
    """i_a: the odd left derivation dual to the ghost e^a."""
    out = {}
    for key, coeff in x.terms.items():
        hit = _remove_ghost(key, a)
        if hit is None:
            continue
        sign, new_key = hit
        s = coeff.scale(sign)
        cur = out.get(new_key)
        out[new_key] = s if cur is None else cur + s
    return SuperElement(x.ctx, x.dim, x.order, out)


def contract_antighost(x, a):
    """i^a: the odd left derivation dual to the antighost e_a."""
    out = {}
    for key, coeff in x.terms.items():
        hit = _remove_antighost(key, a)
        if hit is None:
            continue
        sign, new_key = hit
        s = coeff.scale(sign)
        cur = out.get(new_key)
        out[new_key] = s if cur is None else cur + s
    return SuperElement(x.ctx, x.dim, x.order, out)


def apply_contraction_derivation(kind, a, x):
    """Dispatch on the two dual-pairing derivations: 'i^a' or 'i_a'."""
    if kind == "i^a":
        return contract_antighost(x, a)
    if kind == "i_a":
        return contract_ghost(x, a)
    raise ValueError(f"unknown derivation kind {kind!r}")


# -- products -------------------------------------------------------------------


def _merge_terms(key1, key2, dim):
    seq1 = _encode(*key1, dim)
    seq2 = _encode(*key2, dim)
    sign, merged = _merge_sign(seq1, seq2)
    if sign == 0:
        return 0, None
    return sign, _decode(merged, dim)


def super_mul(x, y):
    """The graded commutative product (coefficients multiply pointwise)."""
    x._check(y)
    out = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            sign, key = _merge_terms(k1, k2, x.dim)
            if sign == 0:
                continue
            s = (c1 * c2).scale(sign)
            cur = out.get(key)
            out[key] = s if cur is None else cur + s
    return SuperElement(x.ctx, x.dim, x.order, out)


def _clifford_ghost_terms(key1, key2, dim, max_k):
    """Contraction expansion of two ghost monomials.

    Yields (k, integer coefficient, merged key) for mu(T^k(x (x) y)) / k!,
    where T(x (x) y) = sum_a (-1)^{|x|} i^a(x) (x) i_a(y).
    """
    results = []
    level = [(key1, key2, 1)]
    k = 0
    while level and k <= max_k:
        for kx, ky, c in level:
            sign, merged = _merge_terms(kx, ky, dim)
            if sign != 0:
                results.append((k, c * sign * Fraction(1, factorial(k)), merged))
        nxt = []
        for kx, ky, c in level:
            px = term_parity(kx)
            for a in kx[1]:
                if a not in ky[0]:
                    continue
                s1, kx2 = _remove_antighost(kx, a)
                s2, ky2 = _remove_ghost(ky, a)
                nxt.append((kx2, ky2, c * s1 * s2 * (-1) ** px))
        level = nxt
        k += 1
    return results


def clifford_mul(x, y, coeff=Fraction(-2)):
    """Clifford multiplication: ghost pairing to all orders in nu.

    Coefficients multiply pointwise (no Moyal part); each contraction level
    k contributes a factor (coeff * nu)^k.
    """
    x._check(y)
    out = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            base = c1 * c2
            for k, s, key in _clifford_ghost_terms(k1, k2, x.dim, x.order):
                contrib = base.scale(s * coeff**k).shift_nu(k)
                if all(p.is_zero() for p in contrib.coeffs):
                    continue
                cur = out.get(key)
                out[key] = contrib if cur is None else cur + contrib
    return SuperElement(x.ctx, x.dim, x.order, out)


@dataclass(frozen=True)
class StarProduct:
    """The graded star product: Moyal on coefficients, Clifford on ghosts."""

    lam: object  # PoissonData
    dim: int
    order: int
    clifford_coeff: Fraction = Fraction(-2)

    def moyal(self, a, b):
        return moyal_star_series(a, b, self.lam)

    def star(self, x, y):
        x._check(y)
        out = {}
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                base = moyal_star_series(c1, c2, self.lam)
                for k, s, key in _clifford_ghost_terms(k1, k2, x.dim, x.order):
                    contrib = base.scale(s * self.clifford_coeff**k).shift_nu(k)
                    if all(p.is_zero() for p in contrib.coeffs):
                        continue
                    cur = out.get(key)
                    out[key] = contrib if cur is None else cur + contrib
        return SuperElement(x.ctx, x.dim, x.order, out)

    def commutator(self, x, y):
        """Graded star commutator, parity piece by parity piece."""
        out = SuperElement.zero(x.ctx, x.dim, x.order)
        for px, xp in zip((0, 1), x.parity_components()):
            if not xp.terms:
                continue
            for py, yp in zip((0, 1), y.parity_components()):
                if not yp.terms:
                    continue
                sign = (-1) ** (px * py)
                out = out + self.star(xp, yp) - self.star(yp, xp).scale(sign)
        return out


def graded_poisson(x, y, lam):
    """The even graded Poisson bracket.

    Extends the coefficient Poisson bracket; ghosts pair with antighosts at
    strength 2 (see the module docstring).  Bilinear over nu slots.
    """
    x._check(y)
    out = SuperElement.zero(x.ctx, x.dim, x.order)
    terms_out = {}

    def _accumulate(key, series):
        if all(p.is_zero() for p in series.coeffs):
            return
        cur = terms_out.get(key)
        terms_out[key] = series if cur is None else cur + series

    for k1, c1 in x.terms.items():
        p1 = term_parity(k1)
        for k2, c2 in y.terms.items():
            p2 = term_parity(k2)
            # coefficient bracket, ghost parts multiply
            sign, key = _merge_terms(k1, k2, x.dim)
            if sign != 0:
                zero = Poly.zero(x.ctx)
                coeffs = [zero] * (x.order + 1)
                for i, a in enumerate(c1.coeffs):
                    if a.is_zero():
                        continue
                    for j, b in enumerate(c2.coeffs):
                        if i + j > x.order or b.is_zero():
                            continue
                        coeffs[i + j] = coeffs[i + j] + poisson_bracket(a, b, lam)
                _accumulate(key, Series(x.ctx, x.order, coeffs, min(c1.reliable, c2.reliable)).scale(sign))
            # ghost pairing at strength 2
            prod = c1 * c2
            for a in k1[1]:
                if a not in k2[0]:
                    continue
                s1, k1r = _remove_antighost(k1, a)
                s2, k2r = _remove_ghost(k2, a)
                msign, key2 = _merge_terms(k1r, k2r, x.dim)
                if msign == 0:
                    continue
                total = (-2) * ((-1) ** p1) * s1 * s2 * msign
                _accumulate(key2, prod.scale(total))
            for a in k2[1]:
                if a not in k1[0]:
                    continue
                s1, k2r = _remove_antighost(k2, a)
                s2, k1r = _remove_ghost(k1, a)
                msign, key2 = _merge_terms(k2r, k1r, x.dim)
                if msign == 0:
                    continue
                total = 2 * ((-1) ** (p1 * p2 + p2)) * s1 * s2 * msign
                _accumulate(key2, prod.scale(total))
    return SuperElement(x.ctx, x.dim, x.order, terms_out) + out


# -- operator handles -----------------------------------------------------------


@dataclass
class OperatorHandle:
    """An evaluable linear map with declared degree and filtration data."""

    name: str
    fn: object
    degree: int = 0
    raises_filtration: frozenset = dc_field(default_factory=frozenset)
    equivariant: bool = None

    def __call__(self, x):
        return self.fn(x)

    def __repr__(self):
        return f"<op {self.name} (degree {self.degree:+d})>"


def op_identity(name="id"):
    return OperatorHandle(name, lambda x: x, 0)


def op_zero_like(name="0"):
    return OperatorHandle(name, lambda x: x.scale(0), 0)


def op_compose(f, g, name=None):
    """f after g."""
    return OperatorHandle(
        name or f"{f.name}.{g.name}",
        lambda x: f(g(x)),
        f.degree + g.degree,
        f.raises_filtration | g.raises_filtration,
    )


def op_add(f, g, name=None):
    if f.degree != g.degree:
        raise ValueError("cannot add operators of different degree")
    return OperatorHandle(
        name or f"({f.name}+{g.name})",
        lambda x: f(x) + g(x),
        f.degree,
        f.raises_filtration & g.raises_filtration,
    )


def op_sub(f, g, name=None):
    if f.degree != g.degree:
        raise ValueError("cannot subtract operators of different degree")
    return OperatorHandle(
        name or f"({f.name}-{g.name})",
        lambda x: f(x) - g(x),
        f.degree,
        f.raises_filtration & g.raises_filtration,
    )


def op_scale(f, c, name=None):
    return OperatorHandle(
        name or f"{c}*{f.name}", lambda x: f(x).scale(c), f.degree, f.raises_filtration
    )
