"""Scenario execution: the ordered verification pipeline with reporting.

Stages run in a fixed order; a failing stage marks everything after it as
skipped.  All randomness is seeded from the scenario configuration, so two
runs of the same config produce identical reports up to timing fields.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import __version__
from .brst import (
    build_delta,
    build_rep_Lz,
    certify_invariant,
    check_classical_splitting,
    classical_charge,
    classical_reduction,
    closed_form_H,
    closed_form_Phi,
    classical_brst_diff,
    reduced_poisson,
)
from .errors import (
    ConfigError,
    InvarianceError,
    LemmaHypothesisError,
    RedstarError,
)
from .koszul import (
    MomentMapData,
    build_koszul_contraction,
    check_acyclicity,
    enforce_side_conditions,
)
from .parsing import parse_polynomial
from .poisson import (
    check_quantum_covariance,
    check_strong_invariance,
    poisson_bracket,
    poisson_data,
)
from .poly import Poly
from .probes import (
    random_bounded_chain,
    random_bounded_super,
    random_poly,
)
from .quantum import check_quantum_splitting
from .reduction import (
    ReductionPipeline,
    closed_form_H_nu,
    closed_form_Phi_nu,
    closed_form_res_nu,
    deformed_restriction,
    invariant_generators,
    quantized_representation,
    quantum_reduction,
    reduced_star,
    reduced_star_cohomology,
)
from .report import CheckRecord, Report
from .scenarios import FULL_STAGES as STAGE_ORDER
from .series import Series
from .superalg import (
    LieAlgebraData,
    StarProduct,
    SuperElement,
    graded_poisson,
)

NU_HEADROOM = 2  # extra truncation orders to absorb divisions by nu


@dataclass
class RunState:
    config: object
    ctx: object = None
    lam: object = None
    lie: object = None
    moment: object = None
    star: object = None
    order: int = 4
    work_order: int = 6
    bound: int = 6
    jdegs: tuple = ()
    kc: object = None
    space: object = None
    theta: object = None
    delta: object = None
    phi: object = None
    H: object = None
    d_z: object = None
    classical_contraction: object = None
    qops: object = None
    dc: object = None
    initiator: object = None
    phi_nu: object = None
    h_nu: object = None
    d_z_nu: object = None
    quantum_contraction: object = None
    pipe: object = None
    generators: list = field(default_factory=list)
    torus: bool = False


def _rng(state, stage):
    return random.Random(f"{state.config.seed}:{stage}")


def _summary(obj):
    terms = getattr(obj, "nonzero_term_count", None)
    if terms is not None:
        return obj.nonzero_term_count(), obj.max_degree()
    if isinstance(obj, Poly):
        return len(obj.terms), obj.degree()
    return (0, -1)


def _trim(text, n=400):
    text = str(text)
    return text if len(text) <= n else text[: n - 4] + " ..."


def _record(stage, check_id, anchor, residual_items, probes=0, upto=None, detail=None):
    """Build a CheckRecord from (label, residual) pairs; exact zero means pass."""
    t0 = time.perf_counter()
    status = "pass"
    witness = None
    terms, maxdeg = 0, -1
    for label, residual in residual_items:
        ok = residual.is_zero(upto) if upto is not None else residual.is_zero()
        if not ok:
            status = "fail"
            witness = _trim(f"{label}: {residual}")
            terms, maxdeg = _summary(residual)
            break
    return CheckRecord(
        check_id=check_id,
        stage=stage,
        anchor=anchor,
        status=status,
        residual_terms=terms,
        residual_max_degree=maxdeg,
        probes=probes,
        wall_time_s=time.perf_counter() - t0,
        witness=witness,
        detail=detail,
    )


def _timed(record, t0):
    record.wall_time_s = time.perf_counter() - t0
    return record


def _aggregate(stage, prefix, anchor_map, residual_items, probes, upto=None):
    """One record per identity label, aggregated over all probes."""
    grouped = {}
    for label, residual in residual_items:
        base = label.split("[")[0]
        grouped.setdefault(base, []).append((label, residual))
    records = []
    for base, items in grouped.items():
        rec = _record(
            stage,
            f"{prefix}.{base}",
            anchor_map.get(base, base),
            items,
            probes=len(items),
            upto=upto,
        )
        records.append(rec)
    return records


# -- stages -----------------------------------------------------------------------


def stage_load(state):
    cfg = state.config
    records = []
    t0 = time.perf_counter()
    ctx = cfg.build_context()
    state.ctx = ctx
    state.order = cfg.order
    state.work_order = cfg.order + NU_HEADROOM
    state.bound = cfg.degree_bound
    state.torus = bool(cfg.torus_rows)

    def parse_scalar(text):
        p = parse_polynomial(text, ctx)
        if p.degree() > 0:
            raise ConfigError(f"expected a constant, got {text!r}")
        return p.constant_term()

    lam = poisson_data(ctx, [(a, b, parse_scalar(v)) for a, b, v in cfg.poisson_entries])
    state.lam = lam
    records.append(
        _timed(
            CheckRecord(
                "load.poisson", "load",
                "Lambda antisymmetric and invertible", "pass",
            ),
            t0,
        )
    )

    t0 = time.perf_counter()
    try:
        lie = LieAlgebraData.build(
            cfg.lie_dim,
            [(a, b, c, v) for a, b, c, v in cfg.structure_constants],
            torus_rows=cfg.torus_rows,
        )
    except ValueError as exc:
        raise ConfigError(f"Lie data rejected: {exc}") from None
    state.lie = lie
    records.append(
        _timed(
            CheckRecord(
                "load.lie", "load",
                "f antisymmetric; Jacobi identity; flags consistent", "pass",
                detail=f"abelian={lie.abelian} unimodular={lie.unimodular}",
            ),
            t0,
        )
    )

    comps = tuple(parse_polynomial(src, ctx) for src in cfg.moment_map)
    state.moment = MomentMapData(ctx, comps, lie, cfg.justification)
    state.jdegs = tuple(max(j.degree(), 0) for j in comps)

    if ctx.gradings:
        items = [
            (f"J_{a + 1} homogeneous", Poly.zero(ctx) if j.is_homogeneous() else j)
            for a, j in enumerate(comps)
        ]
        records.append(
            _record("load", "load.homogeneity", "components homogeneous per grading", items)
        )
        if state.torus:
            bad = Poly.zero(ctx)
            for r in cfg.torus_rows:
                for j in comps:
                    g = j.grade()
                    if g[1 + r] != 0:
                        bad = j
            records.append(
                _record(
                    "load", "load.weight-zero",
                    "components invariant (weight zero) on torus rows",
                    [("torus weight of J", bad)],
                )
            )

    eq = state.moment.check_equivariance(lam)
    records.append(
        _record(
            "load",
            "load.equivariance",
            "{J_a,J_b} = f_ab^c J_c",
            [(f"pair {ab}", r) for ab, r in eq],
            probes=len(eq),
        )
    )

    if cfg.action:
        items = []
        for a, var, expr in cfg.action:
            want = parse_polynomial(expr, ctx)
            got = poisson_bracket(comps[a - 1], Poly.variable(ctx, var), lam)
            items.append((f"{{J_{a}, {var}}}", got - want))
        records.append(
            _record(
                "load",
                "load.calibration",
                "{J_a, v} equals the declared infinitesimal action",
                items,
                probes=len(items),
            )
        )

    from fractions import Fraction

    state.star = StarProduct(
        lam, lie.dim, state.work_order, Fraction(cfg.clifford_coeff)
    )
    return records


def stage_covariance(state):
    outcome = check_quantum_covariance(state.moment, state.lam, state.work_order)
    return [
        _record(
            "covariance",
            "covariance.pairs",
            "J_a*J_b - J_b*J_a = nu f_ab^c J_c",
            [(r.label, r.residual) for r in outcome.records],
            probes=len(outcome.records),
            upto=state.order,
        )
    ]


def stage_strong_invariance(state):
    rng = _rng(state, "strong-invariance")
    n = state.config.probe_counts()["strong_invariance"]
    probes = [Poly.const(state.ctx, 1)] + [
        random_poly(state.ctx, rng, 4, 4) for _ in range(n - 1)
    ]
    outcome = check_strong_invariance(state.moment, state.lam, state.work_order, probes)
    return [
        _record(
            "strong-invariance",
            "strong-invariance.probes",
            "J_a*f - f*J_a = nu {J_a, f}",
            [(r.label, r.residual) for r in outcome.records],
            probes=len(outcome.records),
            upto=state.order,
        )
    ]


def stage_acyclicity(state):
    t0 = time.perf_counter()
    rep = check_acyclicity(state.moment, state.bound)
    records = []
    by_degree = {}
    for g, d in rep.h0_dims.items():
        by_degree[g[0]] = by_degree.get(g[0], 0) + d
    records.append(
        _timed(
            CheckRecord(
                "acyclicity.H0",
                "acyclicity",
                "H_0 realized as the canonical monomial complement",
                "pass",
                detail="dim H_0 by degree: "
                + " ".join(f"{d}:{v}" for d, v in sorted(by_degree.items())),
            ),
            t0,
        )
    )
    for i in range(1, state.moment.lie.dim + 1):
        total = rep.total(i)
        status = "pass" if total == 0 else "fail"
        witness = None
        if status == "fail" and rep.witness_slice and rep.witness_slice[0] == i:
            chain = " + ".join(
                f"({p})*e_{'e_'.join(str(a) for a in aset)}" if len(aset) > 1 else f"({p})*e_{aset[0]}"
                for aset, p in rep.witness.items()
            )
            witness = _trim(f"nontrivial cycle at slice {rep.witness_slice[1]}: {chain}")
        records.append(
            CheckRecord(
                f"acyclicity.H{i}",
                "acyclicity",
                f"dim H_{i} = 0 in all graded slices up to degree {state.bound}",
                status,
                residual_terms=total,
                residual_max_degree=max(
                    (g[0] for (j, g), v in rep.dims.items() if j == i and v), default=-1
                ),
                witness=witness,
                detail=f"total dim H_{i} over slices: {total}",
            )
        )
    return records


def stage_contraction(state):
    cfg = state.config
    rng = _rng(state, "contraction")
    t0 = time.perf_counter()
    kc = enforce_side_conditions(build_koszul_contraction(state.moment, state.bound))
    state.kc = kc
    state.space = kc.meta["space"]
    build_rec = _timed(
        CheckRecord(
            "contraction.build",
            "contraction",
            "res/prol/h assembled from canonical slice solves; side conditions normalized",
            "pass",
        ),
        t0,
    )
    n_per = cfg.probe_counts()["contraction"]
    dim = state.moment.lie.dim
    items = []
    probes = 0
    t0 = time.perf_counter()
    for i in range(0, dim + 1):
        for _ in range(n_per):
            y = random_bounded_chain(
                state.ctx, dim, 0, rng, state.bound, state.jdegs, i, terms=2
            )
            x = kc.p(
                random_bounded_super(state.ctx, dim, 0, rng, state.bound, state.jdegs, terms=2)
            )
            for label, residual in kc.axiom_residuals(x, y).items():
                items.append((label, residual))
            probes += 1
    anchors = {
        "p.i=id": "res prol = id",
        "d h+h d=id-i.p": "koszul h + h koszul = id - prol res",
        "p d=d p": "res is a chain map",
        "d i=i d": "prol is a chain map",
        "h h=0": "side condition 1",
        "h i=0": "side condition 2 (h prol = 0)",
        "p h=0": "side condition 3 (res h = 0)",
    }
    records = [build_rec] + _aggregate("contraction", "contraction", anchors, items, probes)
    # determinism: a rebuilt contraction is the same operator
    t0 = time.perf_counter()
    kc2 = enforce_side_conditions(build_koszul_contraction(state.moment, state.bound))
    det_items = []
    for _ in range(5):
        y = random_bounded_super(state.ctx, dim, 0, rng, state.bound, state.jdegs, terms=2)
        det_items.append(("h rebuilt minus h", kc.h(y) - kc2.h(y)))
        det_items.append(("res rebuilt minus res", kc.p(y) - kc2.p(y)))
    records.append(
        _timed(
            _record(
                "contraction",
                "contraction.determinism",
                "rebuilt homotopy is bit-identical on probes",
                det_items,
                probes=5,
            ),
            t0,
        )
    )
    return records


def stage_classical_brst(state):
    cfg = state.config
    rng = _rng(state, "classical-brst")
    dim = state.moment.lie.dim
    theta = classical_charge(state.moment, 0)
    state.theta = theta
    records = [
        _record(
            "classical-brst",
            "classical-brst.charge",
            "{theta, theta} = 0",
            [("{theta,theta}", graded_poisson(theta, theta, state.lam))],
        )
    ]
    delta = build_delta(state.moment, state.lam)
    state.delta = delta
    n = cfg.probe_counts()["splitting"]
    probes = [
        random_bounded_super(state.ctx, dim, 0, rng, state.bound, state.jdegs, terms=2)
        for _ in range(n)
    ]
    items = check_classical_splitting(state.moment, state.lam, theta, delta, probes)
    anchors = {
        "D-delta-2koszul": "D = delta + 2 koszul",
        "D^2": "D^2 = 0",
        "delta^2": "delta^2 = 0",
        "koszul^2": "koszul^2 = 0",
        "delta.koszul+koszul.delta": "delta and koszul supercommute",
    }
    records += _aggregate("classical-brst", "classical-brst", anchors, items, n)
    return records


def _build_generators(state, records, stage):
    cfg = state.config
    if state.generators:
        return
    if cfg.invariant_mode == "weights":
        gens = invariant_generators(state.ctx, cfg.torus_rows, cfg.generator_cap)
    else:
        gens = [parse_polynomial(src, state.ctx) for src in cfg.declared_invariants]
    items = []
    kept = []
    for g in gens:
        try:
            certify_invariant(
                state.space.normal_form_poly(g) if cfg.invariant_mode == "declared" else g,
                state.moment,
                state.lam,
                state.space,
                cfg.torus_rows,
            )
            kept.append(g)
            items.append((f"generator {g}", Poly.zero(state.ctx)))
        except InvarianceError as exc:
            items.append((f"generator {g}", g))
    records.append(
        _record(
            stage,
            f"{stage}.generators",
            "invariant generators certified (weight zero or bracket into the ideal)",
            items,
            probes=len(gens),
            detail=f"{len(kept)} generator(s)",
        )
    )
    state.generators = kept


def stage_classical_reduction(state):
    cfg = state.config
    rng = _rng(state, "classical-reduction")
    dim = state.moment.lie.dim
    records = []
    mk_y = lambda: random_bounded_super(
        state.ctx, dim, 0, rng, state.bound, state.jdegs, terms=2
    )
    probes_Y = [mk_y() for _ in range(6)]
    probes_X = [state.kc.p(y) for y in probes_Y]
    t0 = time.perf_counter()
    try:
        phi, H, cc, d_z = classical_reduction(
            state.moment, state.lam, state.kc, probes_X[:3], probes_Y[:3]
        )
    except LemmaHypothesisError as exc:
        return [
            CheckRecord(
                "classical-reduction.hypotheses",
                "classical-reduction",
                "transfer lemma hypotheses",
                "fail",
                witness=_trim(exc),
            )
        ]
    state.phi, state.H, state.classical_contraction, state.d_z = phi, H, cc, d_z
    records.append(
        _timed(
            CheckRecord(
                "classical-reduction.build",
                "classical-reduction",
                "transfer of D along the extended contraction (lemma version 1)",
                "pass",
            ),
            t0,
        )
    )
    items = []
    for x, y in zip(probes_X, probes_Y):
        items.extend(cc.axiom_residuals(x, y).items())
    anchors = {
        "p.i=id": "res Phi = id",
        "d h+h d=id-i.p": "D H + H D = id - Phi res",
        "p d=d p": "res is a chain map for (D, d_z)",
        "d i=i d": "Phi is a chain map",
        "h h=0": "H^2 = 0",
        "h i=0": "H Phi = 0",
        "p h=0": "res H = 0",
    }
    records += _aggregate(
        "classical-reduction", "classical-reduction", anchors, items, len(probes_Y)
    )
    # closed forms
    Hcf = closed_form_H(state.kc, state.delta, dim)
    Phicf = closed_form_Phi(state.kc, state.delta, H, d_z)
    items = []
    for y in probes_Y:
        items.append(("H - closed form", H(y) - Hcf(y)))
    for x in probes_X:
        items.append(("Phi - closed form", phi(x) - Phicf(x)))
    records.append(
        _record(
            "classical-reduction",
            "classical-reduction.closed-forms",
            "lemma output equals H = h/2 sum (-1/2)^j (h delta + delta h)^j and "
            "Phi = prol - H(delta prol - prol d_z)",
            items,
            probes=len(items),
        )
    )
    if state.torus:
        items = [("Phi - prol", phi(x) - state.kc.i(x)) for x in probes_X]
        records.append(
            _record(
                "classical-reduction",
                "classical-reduction.equivariant-phi",
                "equivariant prolongation: Phi = prol",
                items,
                probes=len(items),
            )
        )
    _build_generators(state, records, "classical-reduction")
    # reduced Poisson bracket checks
    gens = state.generators
    if gens:
        nf = state.space.normal_form_poly
        rp = lambda f, g: reduced_poisson(
            f, g, phi, state.kc.p, state.lam, dim,
            state.moment, state.space, cfg.torus_rows, certify=False,
        )
        pairs = list(itertools.combinations(range(min(len(gens), 6)), 2))
        items = [("antisymmetry {f,f}", Poly.zero(state.ctx))]
        for a, b in pairs:
            items.append(
                (f"antisym ({a},{b})", rp(nf(gens[a]), nf(gens[b])) + rp(nf(gens[b]), nf(gens[a])))
            )
        for a in range(min(len(gens), 4)):
            items.append((f"{{f,f}} ({a})", rp(nf(gens[a]), nf(gens[a]))))
            items.append(
                (f"constants central ({a})", rp(Poly.const(state.ctx, 1), nf(gens[a])))
            )
        records.append(
            _record(
                "classical-reduction",
                "reduced-poisson.algebra",
                "reduced bracket antisymmetric; constants central",
                items,
                probes=len(items),
            )
        )
        items = []
        for a, b, c in itertools.islice(itertools.combinations(range(min(len(gens), 5)), 3), 6):
            fa, fb, fc = nf(gens[a]), nf(gens[b]), nf(gens[c])
            jac = (
                rp(fa, rp(fb, fc)) + rp(fb, rp(fc, fa)) + rp(fc, rp(fa, fb))
            )
            items.append((f"jacobi ({a},{b},{c})", jac))
        if items:
            records.append(
                _record(
                    "classical-reduction",
                    "reduced-poisson.jacobi",
                    "reduced bracket satisfies the Jacobi identity",
                    items,
                    probes=len(items),
                )
            )
        # representative independence and the direct Dirac route
        items = []
        items2 = []
        for k in range(6):
            f = nf(gens[k % len(gens)])
            g = random_poly(state.ctx, rng, 2, 2)
            other = nf(gens[(k + 1) % len(gens)])
            ja = state.moment.components[k % dim]
            lhs = state.space.normal_form_poly(
                poisson_bracket(f + ja * g, other, state.lam)
            )
            rhs = state.space.normal_form_poly(poisson_bracket(f, other, state.lam))
            items.append((f"ideal shift ({k})", lhs - rhs))
            items2.append(
                (
                    f"Dirac route ({k})",
                    rp(f, other)
                    - state.space.normal_form_poly(poisson_bracket(f, other, state.lam)),
                )
            )
        records.append(
            _record(
                "classical-reduction",
                "reduced-poisson.ideal-invariance",
                "bracket unchanged when a representative shifts by J_a g",
                items,
                probes=len(items),
            )
        )
        records.append(
            _record(
                "classical-reduction",
                "reduced-poisson.dirac-route",
                "res{Phi f, Phi g} = res{prol f, prol g}",
                items2,
                probes=len(items2),
            )
        )
    return records


def stage_quantum_brst(state):
    cfg = state.config
    rng = _rng(state, "quantum-brst")
    dim = state.moment.lie.dim
    records = []
    from .quantum import (
        build_quantum_delta,
        build_quantum_koszul,
        quantum_brst_diff,
        quantum_charge_raw,
    )

    theta_nu = quantum_charge_raw(state.moment, state.work_order)
    square = state.star.star(theta_nu, theta_nu)
    rec = _record(
        "quantum-brst",
        "quantum-brst.charge",
        "theta_nu * theta_nu = 0",
        [("theta_nu*theta_nu", square)],
        upto=state.order,
    )
    records.append(rec)
    if rec.status == "fail":
        return records

    class _Q:
        pass

    qops = _Q()
    qops.theta_nu = theta_nu
    qops.D = quantum_brst_diff(theta_nu, state.star)
    qops.koszul_nu = build_quantum_koszul(state.moment, state.star)
    qops.delta_nu = build_quantum_delta(state.moment, state.star)
    state.qops = qops

    n = cfg.probe_counts()["splitting"]
    probes = [
        random_bounded_super(
            state.ctx, dim, state.work_order, rng, state.bound, state.jdegs, terms=2
        )
        for _ in range(n)
    ]
    items = check_quantum_splitting(qops, probes)
    anchors = {
        "D_nu-delta_nu-2koszul_nu": "D_nu = delta_nu + 2 koszul_nu",
        "D_nu^2": "D_nu^2 = 0",
        "delta_nu^2": "delta_nu^2 = 0",
        "koszul_nu^2": "koszul_nu^2 = 0",
        "delta_nu.koszul_nu+koszul_nu.delta_nu": "delta_nu and koszul_nu supercommute",
    }
    records += _aggregate(
        "quantum-brst", "quantum-brst", anchors, items, n, upto=state.order
    )

    # classical limits
    theta0 = classical_charge(state.moment, 0)
    D0 = classical_brst_diff(theta0, state.lam)
    delta0 = build_delta(state.moment, state.lam)
    from .koszul import koszul_diff

    items = []
    for x in probes[:8]:
        x0 = x.classical_part()
        items.append(
            ("koszul_nu|nu=0 - koszul", qops.koszul_nu(x).classical_part() - koszul_diff(x0, state.moment))
        )
        items.append(("delta_nu|nu=0 - delta", qops.delta_nu(x).classical_part() - delta0(x0)))
        items.append(("D_nu|nu=0 - D", qops.D(x).classical_part() - D0(x0)))
    records.append(
        _record(
            "quantum-brst",
            "quantum-brst.classical-limit",
            "each deformed operator restricts to its classical counterpart at nu = 0",
            items,
            probes=8,
        )
    )

    # left-module property of the deformed Koszul differential
    items = []
    for k in range(8):
        fpoly = random_poly(state.ctx, rng, 2, 2)
        fel = SuperElement.from_poly(fpoly, dim, state.work_order)
        x = random_bounded_super(
            state.ctx, dim, state.work_order, rng, state.bound - 2, state.jdegs, terms=2
        )
        lhs = qops.koszul_nu(state.star.star(fel, x))
        rhs = state.star.star(fel, qops.koszul_nu(x))
        items.append((f"module ({k})", lhs - rhs))
    records.append(
        _record(
            "quantum-brst",
            "quantum-brst.left-module",
            "koszul_nu(f * x) = f * koszul_nu(x) for scalar f",
            items,
            probes=8,
            upto=state.order,
        )
    )

    # star associativity sample
    nass = cfg.probe_counts()["associativity_sample"]
    items = []
    for k in range(nass):
        a = random_bounded_super(state.ctx, dim, state.work_order, rng, 4, state.jdegs, terms=2)
        b = random_bounded_super(state.ctx, dim, state.work_order, rng, 4, state.jdegs, terms=2)
        c = random_bounded_super(state.ctx, dim, state.work_order, rng, 4, state.jdegs, terms=2)
        items.append(
            (
                f"assoc ({k})",
                state.star.star(state.star.star(a, b), c)
                - state.star.star(a, state.star.star(b, c)),
            )
        )
    records.append(
        _record(
            "quantum-brst",
            "quantum-brst.associativity",
            "(x*y)*z = x*(y*z) for the graded star product",
            items,
            probes=nass,
            upto=state.order,
        )
    )
    return records


def stage_deformed_restriction(state):
    cfg = state.config
    rng = _rng(state, "deformed-restriction")
    dim = state.moment.lie.dim
    n = cfg.probe_counts()["restriction"]
    mk = lambda: random_bounded_super(
        state.ctx, dim, state.work_order, rng, state.bound, state.jdegs, terms=2
    )
    probes_Y = [mk() for _ in range(n)]
    probes_X = [state.kc.p(y) for y in probes_Y]
    t0 = time.perf_counter()
    try:
        dc, t = deformed_restriction(
            state.kc, state.moment, state.star, probes_X[:3], probes_Y[:3], upto=state.order
        )
    except LemmaHypothesisError as exc:
        return [
            CheckRecord(
                "deformed-restriction.hypotheses",
                "deformed-restriction",
                "transfer lemma hypotheses",
                "fail",
                witness=_trim(exc),
            )
        ]
    state.dc, state.initiator = dc, t
    records = [
        _timed(
            CheckRecord(
                "deformed-restriction.build",
                "deformed-restriction",
                "lemma version 2 applied to the deformed Koszul differential",
                "pass",
            ),
            t0,
        )
    ]
    items = []
    for x, y in zip(probes_X, probes_Y):
        items.extend(dc.axiom_residuals(x, y).items())
    anchors = {
        "p.i=id": "res_nu prol = id",
        "d h+h d=id-i.p": "koszul_nu h_nu + h_nu koszul_nu = id - prol res_nu",
        "p d=d p": "res_nu is a chain map",
        "d i=i d": "prol is a chain map for koszul_nu",
        "h h=0": "h_nu^2 = 0",
        "h i=0": "h_nu prol = 0",
        "p h=0": "res_nu h_nu = 0",
    }
    records += _aggregate(
        "deformed-restriction", "deformed-restriction", anchors, items,
        len(probes_Y), upto=state.order,
    )
    # closed form on the antighost-free sector
    cf = closed_form_res_nu(state.kc, t, state.work_order)
    items = []
    for y in probes_Y:
        y0 = SuperElement(
            state.ctx, dim, state.work_order,
            {k: c for k, c in y.terms.items() if not k[1]},
            _clean=True,
        )
        items.append(("res_nu - closed form", dc.p(y0) - cf(y0)))
    records.append(
        _record(
            "deformed-restriction",
            "deformed-restriction.closed-form",
            "res_nu = res (id + (koszul_nu - koszul) h)^{-1} on functions",
            items,
            probes=len(items),
            upto=state.order,
        )
    )
    # classical limit and exactness of the components
    items = [("res_nu|nu=0 - res", dc.p(y).classical_part() - state.kc.p(y).classical_part()) for y in probes_Y]
    records.append(
        _record(
            "deformed-restriction",
            "deformed-restriction.classical-limit",
            "res_nu = res + O(nu)",
            items,
            probes=len(items),
        )
    )
    items = []
    for a in range(dim):
        ja = SuperElement.from_poly(state.moment.components[a], dim, state.work_order)
        items.append((f"res_nu(J_{a + 1})", dc.p(ja)))
    records.append(
        _record(
            "deformed-restriction",
            "deformed-restriction.kills-constraints",
            "res_nu(J_a) = 0 (constraints are exact)",
            items,
            probes=dim,
            upto=state.order,
        )
    )
    return records


def stage_equivariance_lemma(state):
    cfg = state.config
    rng = _rng(state, "equivariance-lemma")
    dim = state.moment.lie.dim
    n = cfg.probe_counts()["lemma"]
    records = []
    # h preserves the torus weights
    items = []
    for _ in range(10):
        y = random_bounded_super(state.ctx, dim, 0, rng, state.bound, state.jdegs, terms=1)
        hy = state.kc.h(y)
        in_w = set()
        for (g, a), coeff in y.terms.items():
            for p in coeff.coeffs:
                for m in p.terms:
                    grade = state.ctx.grade_of_mono(m)
                    in_w.add(tuple(grade[1 + r] for r in cfg.torus_rows))
        bad = Poly.zero(state.ctx)
        for (g, a), coeff in hy.terms.items():
            for p in coeff.coeffs:
                for m in p.terms:
                    grade = state.ctx.grade_of_mono(m)
                    if tuple(grade[1 + r] for r in cfg.torus_rows) not in in_w:
                        bad = p
        items.append(("weights preserved", bad))
    records.append(
        _record(
            "equivariance-lemma",
            "equivariance-lemma.h-weights",
            "homotopy output carries the same torus weights as its input",
            items,
            probes=10,
        )
    )
    # deformed equals classical quotient representation
    repLz = build_rep_Lz(state.moment, state.lam, state.kc.p, state.kc.i)
    repLz_nu = quantized_representation(state.moment, state.star, state.dc.p, state.dc.i)
    items = []
    for k in range(n):
        fpoly = state.space.normal_form_poly(random_poly(state.ctx, rng, 4, 3))
        fx = SuperElement.from_poly(fpoly, dim, state.work_order)
        for a in range(dim):
            lhs = repLz_nu.ops[a](fx)
            rhs = repLz.ops[a](fx)
            items.append((f"component {a + 1}, probe {k}", lhs - rhs))
    records.append(
        _record(
            "equivariance-lemma",
            "equivariance-lemma.representations",
            "deformed quotient representation equals the classical one",
            items,
            probes=n,
            upto=state.order,
        )
    )
    # representation property of the deformed representation
    probes = [
        SuperElement.from_poly(
            state.space.normal_form_poly(random_poly(state.ctx, rng, 3, 2)),
            dim,
            state.work_order,
        )
        for _ in range(5)
    ]
    items = []
    for (a, b, k), r in repLz_nu.commutator_residuals(probes):
        items.append((f"[Lz_{a},Lz_{b}] probe {k}", r))
    records.append(
        _record(
            "equivariance-lemma",
            "equivariance-lemma.representation-property",
            "[Lz_a, Lz_b] = f_ab^c Lz_c for the deformed representation",
            items,
            probes=len(probes),
            upto=state.order,
        )
    )
    return records


def stage_quantum_reduction(state):
    cfg = state.config
    rng = _rng(state, "quantum-reduction")
    dim = state.moment.lie.dim
    mk = lambda: random_bounded_super(
        state.ctx, dim, state.work_order, rng, state.bound, state.jdegs, terms=2
    )
    probes_Y = [mk() for _ in range(5)]
    probes_X = [state.kc.p(y) for y in probes_Y]
    t0 = time.perf_counter()
    try:
        phi_nu, h_nu, qc, d_z_nu = quantum_reduction(
            state.moment, state.star, state.dc, probes_X[:2], probes_Y[:2], upto=state.order
        )
    except LemmaHypothesisError as exc:
        return [
            CheckRecord(
                "quantum-reduction.hypotheses",
                "quantum-reduction",
                "transfer lemma hypotheses",
                "fail",
                witness=_trim(exc),
            )
        ]
    state.phi_nu, state.h_nu, state.quantum_contraction, state.d_z_nu = (
        phi_nu,
        h_nu,
        qc,
        d_z_nu,
    )
    records = [
        _timed(
            CheckRecord(
                "quantum-reduction.build",
                "quantum-reduction",
                "lemma version 1 applied to the quantum BRST differential",
                "pass",
            ),
            t0,
        )
    ]
    items = []
    for x, y in zip(probes_X, probes_Y):
        items.extend(qc.axiom_residuals(x, y).items())
    anchors = {
        "p.i=id": "res_nu Phi_nu = id",
        "d h+h d=id-i.p": "D_nu H_nu + H_nu D_nu = id - Phi_nu res_nu",
        "p d=d p": "res_nu is a chain map for (D_nu, d_z_nu)",
        "d i=i d": "Phi_nu is a chain map",
        "h h=0": "H_nu^2 = 0",
        "h i=0": "H_nu Phi_nu = 0",
        "p h=0": "res_nu H_nu = 0",
    }
    records += _aggregate(
        "quantum-reduction", "quantum-reduction", anchors, items,
        len(probes_Y), upto=state.order,
    )
    from .quantum import build_quantum_delta

    delta_nu = state.qops.delta_nu if state.qops else build_quantum_delta(state.moment, state.star)
    Hcf = closed_form_H_nu(state.dc, delta_nu, dim)
    Phicf = closed_form_Phi_nu(state.dc, delta_nu, h_nu, d_z_nu)
    items = []
    for y in probes_Y:
        items.append(("H_nu - closed form", h_nu(y) - Hcf(y)))
    for x in probes_X:
        items.append(("Phi_nu - closed form", phi_nu(x) - Phicf(x)))
    records.append(
        _record(
            "quantum-reduction",
            "quantum-reduction.closed-forms",
            "H_nu = h_nu/2 sum (-1/2)^j (h_nu delta_nu + delta_nu h_nu)^j; "
            "Phi_nu = prol - H_nu(delta_nu prol - prol d_z_nu)",
            items,
            probes=len(items),
            upto=state.order,
        )
    )
    if state.torus:
        items = [("Phi_nu - prol", phi_nu(x) - state.dc.i(x)) for x in probes_X]
        records.append(
            _record(
                "quantum-reduction",
                "quantum-reduction.equivariant-phi",
                "equivariant prolongation: Phi_nu = prol",
                items,
                probes=len(items),
                upto=state.order,
            )
        )
    if state.H is not None:
        items = []
        for y in probes_Y:
            items.append(
                (
                    "H_nu|nu=0 - H",
                    h_nu(y).classical_part() - state.H(y.classical_part()),
                )
            )
        records.append(
            _record(
                "quantum-reduction",
                "quantum-reduction.classical-limit",
                "H_nu = H + O(nu) (classical contraction recovered at nu = 0)",
                items,
                probes=len(items),
            )
        )
    return records


def stage_reduced_star(state):
    cfg = state.config
    rng = _rng(state, "reduced-star")
    dim = state.moment.lie.dim
    records = []
    _build_generators(state, records, "reduced-star")
    gens = [state.space.normal_form_poly(g) for g in state.generators]
    if not gens:
        records.append(
            CheckRecord(
                "reduced-star.generators",
                "reduced-star",
                "invariant generators available",
                "fail",
                detail="no certified invariant generators",
            )
        )
        return records
    pipe = ReductionPipeline(
        state.moment,
        state.lam,
        state.star,
        state.space,
        state.work_order,
        state.kc,
        state.dc,
        state.quantum_contraction,
        state.phi_nu,
        state.h_nu,
        state.d_z_nu,
        torus_rows=cfg.torus_rows,
    )
    state.pipe = pipe
    nf = state.space.normal_form_poly
    one = Poly.const(state.ctx, 1)

    cache = {}

    def star_pair(ia, ib):
        key = (ia, ib)
        hit = cache.get(key)
        if hit is None:
            hit = reduced_star(gens[ia], gens[ib], pipe, certify=False)
            cache[key] = hit
        return hit

    # unit
    items = []
    for k in range(min(len(gens), 8)):
        items.append(
            (
                f"1*g ({k})",
                reduced_star(one, gens[k], pipe, certify=False)
                - Series.from_poly(gens[k], state.work_order),
            )
        )
        items.append(
            (
                f"g*1 ({k})",
                reduced_star(gens[k], one, pipe, certify=False)
                - Series.from_poly(gens[k], state.work_order),
            )
        )
    records.append(
        _record(
            "reduced-star",
            "reduced-star.unit",
            "f * 1 = 1 * f = f",
            items,
            probes=len(items),
            upto=state.order,
        )
    )

    # classical part and first-order correspondence on all pairs
    t0 = time.perf_counter()
    items0 = []
    items1 = []
    npairs = 0
    for ia in range(len(gens)):
        for ib in range(len(gens)):
            if gens[ia].degree() + gens[ib].degree() > state.bound:
                continue
            s = star_pair(ia, ib)
            npairs += 1
            items0.append((f"nu^0 ({ia},{ib})", s.classical() - nf(gens[ia] * gens[ib])))
            if ib > ia:
                anti = s - star_pair(ib, ia)
                rp = reduced_poisson(
                    gens[ia], gens[ib], state.phi, state.kc.p, state.lam, dim,
                    state.moment, state.space, cfg.torus_rows, certify=False,
                )
                items1.append((f"nu^1 ({ia},{ib})", anti.coefficient(1) - rp))
    rec0 = _record(
        "reduced-star",
        "reduced-star.classical-part",
        "nu^0 coefficient of f*g equals the product in the quotient model",
        items0,
        probes=npairs,
    )
    rec0.wall_time_s = time.perf_counter() - t0
    records.append(rec0)
    records.append(
        _record(
            "reduced-star",
            "reduced-star.first-order",
            "antisymmetrized nu^1 coefficient equals the reduced Poisson bracket",
            items1,
            probes=len(items1),
        )
    )

    # associativity
    t0 = time.perf_counter()
    idx = range(len(gens))
    triples = [
        (a, b, c)
        for a in idx
        for b in idx
        for c in idx
        if gens[a].degree() + gens[b].degree() + gens[c].degree() <= state.bound
    ]
    if cfg.star_triples != "all":
        k = min(len(triples), max(cfg.probe_counts()["associativity_sample"], 20))
        triples = [triples[rng.randrange(len(triples))] for _ in range(k)]
    items = []
    for a, b, c in triples:
        lhs = reduced_star(star_pair(a, b), gens[c], pipe, certify=False)
        rhs = reduced_star(gens[a], star_pair(b, c), pipe, certify=False)
        items.append((f"assoc ({a},{b},{c})", lhs - rhs))
    rec = _record(
        "reduced-star",
        "reduced-star.associativity",
        "(f*g)*h = f*(g*h) on generator triples",
        items,
        probes=len(triples),
        upto=state.order,
        detail=f"{len(triples)} triple(s), mode {cfg.star_triples}",
    )
    rec.wall_time_s = time.perf_counter() - t0
    records.append(rec)

    # representative independence: adding a right star multiple of J changes nothing
    nid = cfg.probe_counts()["ideal"]
    items = []
    for k in range(nid):
        a = rng.randrange(dim)
        G = gens[rng.randrange(len(gens))]
        room = max(0, state.bound - state.jdegs[a] - G.degree())
        g = random_poly(state.ctx, rng, room, 2)
        ideal_el = state.star.star(
            SuperElement.from_poly(g, dim, state.work_order),
            SuperElement.from_poly(state.moment.components[a], dim, state.work_order),
        )
        Gx = SuperElement.from_poly(G, dim, state.work_order)
        items.append((f"left shift ({k})", pipe.res_nu(state.star.star(ideal_el, Gx))))
        items.append((f"right shift ({k})", pipe.res_nu(state.star.star(Gx, ideal_el))))
    records.append(
        _record(
            "reduced-star",
            "reduced-star.ideal-invariance",
            "res_nu((g*J_a)*G) = 0 = res_nu(G*(g*J_a)): representatives may shift "
            "by right star multiples of the constraints",
            items,
            probes=nid,
            upto=state.order,
        )
    )

    # cohomology-level product
    items = []
    for k in range(4):
        ga = pipe.embed(gens[k % len(gens)])
        gb = pipe.embed(gens[(k + 1) % len(gens)])
        via_classes = reduced_star_cohomology(ga, gb, pipe, check_closed=True, upto=state.order)
        direct = reduced_star(gens[k % len(gens)], gens[(k + 1) % len(gens)], pipe, certify=False)
        items.append(
            (f"degree-0 classes ({k})", via_classes - SuperElement.scalar(direct, dim))
        )
    records.append(
        _record(
            "reduced-star",
            "cohomology-star.degree-zero",
            "on degree-zero classes the transferred product agrees with the direct formula",
            items,
            probes=4,
            upto=state.order,
        )
    )
    items = []
    onex = pipe.embed(Series.from_poly(one, state.work_order))
    for k in range(3):
        ga = pipe.embed(gens[k % len(gens)])
        items.append(
            (
                f"[1]*[g] ({k})",
                reduced_star_cohomology(onex, ga, pipe, check_closed=False) - ga,
            )
        )
    records.append(
        _record(
            "reduced-star",
            "cohomology-star.unit",
            "the class of 1 is a two-sided unit",
            items,
            probes=3,
            upto=state.order,
        )
    )
    # exact shifts multiply to exact elements, with an explicit primitive
    items = []
    for k in range(3):
        a_el = pipe.embed(gens[k % len(gens)])
        room = min(3, state.bound - gens[k % len(gens)].degree())
        cpoly = state.space.normal_form_poly(random_poly(state.ctx, rng, room, 2))
        c_el = pipe.embed(cpoly)
        dc_el = state.d_z_nu(c_el)
        lhs = pipe.res_nu(state.star.star(state.phi_nu(a_el), state.phi_nu(dc_el)))
        prim = pipe.res_nu(state.star.star(state.phi_nu(a_el), state.phi_nu(c_el)))
        items.append((f"exact shift ({k})", lhs - state.d_z_nu(prim)))
    records.append(
        _record(
            "reduced-star",
            "cohomology-star.exact-shift",
            "[a]*[d_z c] is exact, with primitive [a]*[c]",
            items,
            probes=3,
            upto=state.order - 1,
        )
    )
    if state.torus:
        # mixed ghost degrees: a closed degree-one cochain times a degree-zero
        # class is closed of degree one
        items = []
        for k in range(3):
            f = gens[k % len(gens)]
            g = gens[(k + 2) % len(gens)]
            cochain = SuperElement(
                state.ctx,
                dim,
                state.work_order,
                {((1,), ()): Series.from_poly(f, state.work_order)},
            )
            closed = state.d_z_nu(cochain)
            items.append((f"degree-one closed ({k})", closed))
            prod = reduced_star_cohomology(
                pipe.embed(g), cochain, pipe, check_closed=False
            )
            items.append((f"product closed ({k})", state.d_z_nu(prod)))
            bad = SuperElement(
                state.ctx,
                dim,
                state.work_order,
                {
                    key: coeff
                    for key, coeff in prod.terms.items()
                    if len(key[0]) != 1 or key[1]
                },
            )
            items.append((f"product ghost degree one ({k})", bad))
        records.append(
            _record(
                "reduced-star",
                "cohomology-star.degree-one",
                "invariant-coefficient degree-one cochains are closed and multiply "
                "degree-zero classes to closed degree-one cochains",
                items,
                probes=3,
                upto=state.order - 1,
            )
        )
    return records


STAGE_FUNCTIONS = {
    "load": stage_load,
    "covariance": stage_covariance,
    "strong-invariance": stage_strong_invariance,
    "acyclicity": stage_acyclicity,
    "contraction": stage_contraction,
    "classical-brst": stage_classical_brst,
    "classical-reduction": stage_classical_reduction,
    "quantum-brst": stage_quantum_brst,
    "deformed-restriction": stage_deformed_restriction,
    "equivariance-lemma": stage_equivariance_lemma,
    "quantum-reduction": stage_quantum_reduction,
    "reduced-star": stage_reduced_star,
}


def run_scenario(config, order=None, degree_bound=None, only_stage=None):
    """Execute the scenario's verification stages and assemble the report."""
    if order is not None or degree_bound is not None:
        from dataclasses import replace

        config = replace(
            config,
            order=order if order is not None else config.order,
            degree_bound=degree_bound if degree_bound is not None else config.degree_bound,
        )
    if only_stage is not None and only_stage not in STAGE_ORDER:
        raise ConfigError(f"unknown stage {only_stage!r}")
    state = RunState(config)
    report = Report(config.name, __version__, config.echo())
    failed = False
    for stage in STAGE_ORDER:
        if stage not in config.stages:
            if only_stage is None or stage == only_stage:
                report.records.append(
                    CheckRecord(
                        f"{stage}", stage, "stage not configured for this scenario",
                        "not-attempted",
                    )
                )
            continue
        if failed:
            if only_stage is None or stage == only_stage:
                report.records.append(
                    CheckRecord(
                        f"{stage}", stage, "earlier stage failed", "skipped"
                    )
                )
            continue
        t0 = time.perf_counter()
        try:
            records = STAGE_FUNCTIONS[stage](state)
        except RedstarError as exc:
            records = [
                CheckRecord(
                    f"{stage}.error",
                    stage,
                    "stage raised an engine error",
                    "error",
                    witness=_trim(exc),
                    wall_time_s=time.perf_counter() - t0,
                )
            ]
        if records and all(r.wall_time_s == 0.0 for r in records):
            records[-1].wall_time_s = time.perf_counter() - t0
        if any(r.status in ("fail", "error") for r in records):
            failed = True
        if only_stage is None or stage == only_stage:
            report.records.extend(records)
        if only_stage is not None and stage == only_stage:
            break
    return report
