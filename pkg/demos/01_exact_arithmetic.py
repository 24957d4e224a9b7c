"""Exact polynomial and series arithmetic: the substrate of the engine.

Everything downstream rests on sparse polynomials over exact fields and
nu-truncated series.  No floating point appears anywhere: every identity
the engine reports is an identity of rational (or Gaussian-rational)
coefficients, not a numerical tolerance.
"""

from fractions import Fraction

from redstar.parsing import parse_polynomial, poly_to_text
from redstar.poly import Poly, VarContext, poly_ring
from redstar.scalars import QQ_I, GaussianRational
from redstar.series import Series

# -- polynomials over the rationals --------------------------------------------

ctx, (q, p) = poly_ring(("q", "p"))
print("cancellation:            (q+p) + (q-p) =", (q + p) + (q - p))
print("difference of squares:   (q+p) * (q-p) =", (q + p) * (q - p))
print("scalar distribution:     1/2 * (q^2 + 2p) =", (q * q + p.scale(2)).scale(Fraction(1, 2)))
print("derivative:              d/dq (q^2 p) =", (q * q * p).diff("q"))

# the parser speaks the same grammar the printer emits
expr = "1/2*(q^2 + 2*p) - 3*q*p"
f = parse_polynomial(expr, ctx)
print(f"\nparse({expr!r}) = {f}")
print("round trip recovers it exactly:", parse_polynomial(poly_to_text(f), ctx) == f)

# -- Gaussian rationals for complex coordinates ---------------------------------

zctx = VarContext(("z", "zb"), QQ_I)
i = GaussianRational(0, 1)
g = Poly.variable(zctx, "z").scale(2 * i) + Poly.const(zctx, GaussianRational(1, -1))
print("\ncomplex coefficients:", g)
print("i^2 in the scalar field:", i * i)

# -- truncated series in the deformation parameter ------------------------------

one = Series.const(ctx, 1, 3)
nu = Series.nu(ctx, 3)
a = one + nu * q
b = one - nu * q
print("\n(1 + nu q)(1 - nu q) at order 3:", a * b)
print("same product truncated to order 1:", (a.truncate(1) * b.truncate(1)))

s = nu * q + Series.nu(ctx, 3, 2) * p
print("\n(nu q + nu^2 p) / nu =", s.div_nu())
print("reliable order after the division:", s.div_nu().reliable, "(one order lost, tracked)")
