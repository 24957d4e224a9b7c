import random
from fractions import Fraction

from redstar.koszul import MomentMapData
from redstar.poisson import (
    check_quantum_covariance,
    check_strong_invariance,
    moyal_commutator,
    moyal_star,
    poisson_bracket,
    poisson_data,
)
from redstar.poly import Poly, VarContext, poly_ring
from redstar.probes import random_poly
from redstar.series import Series
from redstar.superalg import LieAlgebraData


def canonical_qp():
    ctx, (q, p) = poly_ring(("q", "p"))
    lam = poisson_data(ctx, [("q", "p", 1)])
    return ctx, q, p, lam


def test_canonical_pair():
    ctx, q, p, lam = canonical_qp()
    assert poisson_bracket(q, p, lam) == Poly.const(ctx, 1)


def test_leibniz_example():
    ctx, q, p, lam = canonical_qp()
    assert poisson_bracket(q * q, p, lam) == q.scale(2)


def commuting_n2():
    pairs = [(1, 1), (1, 2), (2, 2)]
    names = [f"q{i}{j}" for i, j in pairs] + [f"p{i}{j}" for i, j in pairs]
    ctx = VarContext(tuple(names))
    lam = poisson_data(
        ctx,
        [(f"q{i}{j}", f"p{i}{j}", Fraction(1) if i == j else Fraction(1, 2)) for i, j in pairs],
    )

    def qv(i, j):
        i, j = min(i, j), max(i, j)
        return Poly.variable(ctx, f"q{i}{j}")

    def pv(i, j):
        i, j = min(i, j), max(i, j)
        return Poly.variable(ctx, f"p{i}{j}")

    def entry(r, c):
        out = Poly.zero(ctx)
        for k in (1, 2):
            out = out + qv(r, k) * pv(k, c) - pv(r, k) * qv(k, c)
        return out

    return ctx, lam, entry(1, 2).scale(2)


def test_commuting_variety_equivariance():
    # one so(2) component: {J, J} = 0 and J is honestly quadratic
    ctx, lam, J = commuting_n2()
    assert poisson_bracket(J, J, lam).is_zero()
    assert J.degree() == 2


def test_bracket_axioms_random():
    ctx, q, p, lam = canonical_qp()
    rng = random.Random(17)
    for _ in range(25):
        f = random_poly(ctx, rng, 4, 3)
        g = random_poly(ctx, rng, 4, 3)
        h = random_poly(ctx, rng, 4, 3)
        assert poisson_bracket(f, g, lam) == -poisson_bracket(g, f, lam)
        assert poisson_bracket(f, g * h, lam) == (
            poisson_bracket(f, g, lam) * h + g * poisson_bracket(f, h, lam)
        )
        jac = (
            poisson_bracket(f, poisson_bracket(g, h, lam), lam)
            + poisson_bracket(g, poisson_bracket(h, f, lam), lam)
            + poisson_bracket(h, poisson_bracket(f, g, lam), lam)
        )
        assert jac.is_zero()


def test_moyal_first_order():
    ctx, q, p, lam = canonical_qp()
    s = moyal_star(q, p, lam, 2)
    assert s.coefficient(0) == q * p
    assert s.coefficient(1) == Poly.const(ctx, Fraction(1, 2))
    assert s.coefficient(2).is_zero()


def test_moyal_q2_p2():
    # frozen by hand: the k-th term is (1/2^k k!) * (d_q^k q^2)(d_p^k p^2)
    ctx, q, p, lam = canonical_qp()
    s = moyal_star(q * q, p * p, lam, 3)
    assert s.coefficient(0) == q * q * p * p
    assert s.coefficient(1) == (q * p).scale(2)
    assert s.coefficient(2) == Poly.const(ctx, Fraction(1, 2))
    assert s.coefficient(3).is_zero()


def test_moyal_unit():
    ctx, q, p, lam = canonical_qp()
    rng = random.Random(2)
    one = Poly.const(ctx, 1)
    for _ in range(10):
        f = random_poly(ctx, rng, 5, 4)
        assert moyal_star(f, one, lam, 4) == Series.from_poly(f, 4)
        assert moyal_star(one, f, lam, 4) == Series.from_poly(f, 4)


def test_moyal_associativity_random():
    ctx, q, p, lam = canonical_qp()
    rng = random.Random(3)
    from redstar.poisson import moyal_star_series

    for _ in range(15):
        f = Series.from_poly(random_poly(ctx, rng, 5, 3), 4)
        g = Series.from_poly(random_poly(ctx, rng, 5, 3), 4)
        h = Series.from_poly(random_poly(ctx, rng, 5, 3), 4)
        lhs = moyal_star_series(moyal_star_series(f, g, lam), h, lam)
        rhs = moyal_star_series(f, moyal_star_series(g, h, lam), lam)
        assert lhs == rhs


def test_commutator_bracket_compatibility():
    ctx, q, p, lam = canonical_qp()
    rng = random.Random(4)
    for _ in range(15):
        f = random_poly(ctx, rng, 4, 3)
        g = random_poly(ctx, rng, 4, 3)
        comm = moyal_commutator(f, g, lam, 4)
        assert comm.coefficient(0).is_zero()
        assert comm.coefficient(1) == poisson_bracket(f, g, lam)


def test_quantum_covariance_abelian():
    ctx, lam, J = commuting_n2()
    lie = LieAlgebraData.build(1)
    moment = MomentMapData(ctx, (J,), lie, "")
    out = check_quantum_covariance(moment, lam, 4)
    assert out.passed


def test_quantum_covariance_negative_control():
    # corrupt one component of a two-torus moment map with a cubic term
    names = ("x1", "y1", "x2", "y2")
    ctx = VarContext(names)
    lam = poisson_data(ctx, [("x1", "y1", 1), ("x2", "y2", 1)])
    v = lambda n: Poly.variable(ctx, n)
    j1 = v("x1") * v("y1")
    j2 = v("x2") * v("y2") + v("x1") ** 3
    lie = LieAlgebraData.build(2)
    moment = MomentMapData(ctx, (j1, j2), lie, "")
    out = check_quantum_covariance(moment, lam, 4)
    assert not out.passed
    assert out.failures()[0].residual.nonzero_term_count() > 0


def test_strong_invariance_quadratic():
    ctx, lam, J = commuting_n2()
    lie = LieAlgebraData.build(1)
    moment = MomentMapData(ctx, (J,), lie, "")
    rng = random.Random(12)
    probes = [Poly.const(ctx, 1)] + [random_poly(ctx, rng, 4, 3) for _ in range(8)]
    out = check_strong_invariance(moment, lam, 4, probes)
    assert out.passed


def test_strong_invariance_cubic_fails_at_nu3():
    ctx, q, p, lam = canonical_qp()
    lie = LieAlgebraData.build(1)
    moment = MomentMapData(ctx, (q ** 3,), lie, "")
    probes = [p ** 3]
    out = check_strong_invariance(moment, lam, 4, probes)
    assert not out.passed
    bad = out.failures()[0].residual
    assert bad.coefficient(1).is_zero() and bad.coefficient(2).is_zero()
    assert not bad.coefficient(3).is_zero()
