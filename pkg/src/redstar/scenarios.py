"""Scenario configurations: the built-in registry and config-file I/O.

A scenario declares variables, gradings, the Poisson matrix, Lie data, the
moment map (as expressions in the polynomial grammar), the declared
infinitesimal action used for sign calibration, invariant generators, and
which verification stages to run.  The registry ships the standard
examples plus negative controls; plain-text config files use the same
fields with section headers.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from .errors import ConfigError
from .poly import Poly, VarContext
from .scalars import QQ, QQ_I

FULL_STAGES = (
    "load",
    "covariance",
    "strong-invariance",
    "acyclicity",
    "contraction",
    "classical-brst",
    "classical-reduction",
    "quantum-brst",
    "deformed-restriction",
    "equivariance-lemma",
    "quantum-reduction",
    "reduced-star",
)

DEFAULT_PROBES = {
    "strong_invariance": 20,
    "contraction": 50,  # per homological degree
    "splitting": 50,
    "restriction": 20,
    "lemma": 20,
    "associativity_sample": 10,
    "ideal": 20,
}


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    description: str = ""
    variables: tuple = ()
    field_name: str = "rational"  # "rational" | "gaussian"
    grading_names: tuple = ()
    gradings: tuple = ()  # rows of ints, parallel to grading_names
    torus_rows: tuple = ()  # indices into gradings
    poisson_entries: tuple = ()  # (var, var, value expression)
    lie_dim: int = 1
    structure_constants: tuple = ()  # (a, b, c, value string), 1-based
    moment_map: tuple = ()  # component expressions
    action: tuple = ()  # ((component, var, expression), ...) for calibration
    order: int = 4
    degree_bound: int = 8
    seed: int = 7
    invariant_mode: str = "weights"  # "weights" | "declared"
    declared_invariants: tuple = ()
    generator_cap: int = 4
    stages: tuple = FULL_STAGES
    clifford_coeff: str = "-2"
    star_triples: str = "sample"  # "all" | "sample"
    probe_overrides: tuple = ()  # (key, value) pairs
    params: tuple = ()  # (key, value) echo-only
    justification: str = ""

    def probe_counts(self):
        counts = dict(DEFAULT_PROBES)
        for k, v in self.probe_overrides:
            counts[k] = int(v)
        return counts

    def build_context(self):
        fld = QQ if self.field_name == "rational" else QQ_I
        return VarContext(tuple(self.variables), fld, tuple(tuple(r) for r in self.gradings))

    def echo(self):
        return {
            "name": self.name,
            "description": self.description,
            "variables": list(self.variables),
            "field": self.field_name,
            "gradings": {n: list(r) for n, r in zip(self.grading_names, self.gradings)},
            "torus_rows": [self.grading_names[i] for i in self.torus_rows],
            "poisson": [list(e) for e in self.poisson_entries],
            "lie_dim": self.lie_dim,
            "structure_constants": [list(e) for e in self.structure_constants],
            "moment_map": list(self.moment_map),
            "order": self.order,
            "degree_bound": self.degree_bound,
            "seed": self.seed,
            "invariant_mode": self.invariant_mode,
            "generator_cap": self.generator_cap,
            "stages": list(self.stages),
            "clifford_coeff": self.clifford_coeff,
            "star_triples": self.star_triples,
            "params": dict(self.params),
            "justification": self.justification,
        }


# -- registry builders ---------------------------------------------------------


def _torus_action_entries(variables, gradings, torus_rows, lie_dim):
    """Calibration table for diagonal torus actions: {J_a, v} = i * w * v."""
    out = []
    for a in range(lie_dim):
        row = gradings[torus_rows[a]]
        for v, w in zip(variables, row):
            if w == 0:
                out.append((a + 1, v, "0"))
            elif w == 1:
                out.append((a + 1, v, f"i*{v}"))
            elif w == -1:
                out.append((a + 1, v, f"-i*{v}"))
            else:
                out.append((a + 1, v, f"{w}*i*{v}"))
    return tuple(out)


def s1_c4():
    """Circle action on C^4 with an indefinite quadratic moment map.

    The constraint surface is a cone whose reduced space is worse than an
    orbifold; the full reduction pipeline runs with equivariant homotopies.
    """
    variables = ("z1", "z2", "z3", "z4", "zb1", "zb2", "zb3", "zb4")
    gradings = ((1, 1, -1, -1, -1, -1, 1, 1), (1, 1, 1, 1, -1, -1, -1, -1))
    return ScenarioConfig(
        name="s1-c4",
        description="S^1 acting on C^4 with weights (1,1,-1,-1); cone-level singular quotient",
        variables=variables,
        field_name="gaussian",
        grading_names=("torus", "holo"),
        gradings=gradings,
        torus_rows=(0,),
        poisson_entries=tuple((f"z{k}", f"zb{k}", "2*i") for k in range(1, 5)),
        lie_dim=1,
        moment_map=("1/2*(z3*zb3 + z4*zb4 - z1*zb1 - z2*zb2)",),
        action=_torus_action_entries(variables, gradings, (0,), 1),
        degree_bound=6,
        invariant_mode="weights",
        star_triples="all",
        justification=(
            "indefinite diagonal quadratic moment map on C^4: the components "
            "change sign near every zero, so they generate the vanishing ideal "
            "(scenario assumption), and the bounded-degree rank check certifies "
            "the complete-intersection property"
        ),
    )


def t2_c4(alpha=-1, beta=1):
    """Two-torus action on C^4 with weight parameters alpha < 0 and beta."""
    if alpha >= 0:
        raise ConfigError("t2-c4 requires alpha < 0 (generating hypothesis)")
    variables = ("z1", "z2", "z3", "z4", "zb1", "zb2", "zb3", "zb4")
    w1 = (alpha, 0, 1, 0, -alpha, 0, -1, 0)
    w2 = (beta, -1, 0, 1, -beta, 1, 0, -1)
    wd = (1, 1, 1, 1, -1, -1, -1, -1)
    gradings = (w1, w2, wd)
    return ScenarioConfig(
        name="t2-c4",
        description=f"T^2 acting on C^4 (alpha={alpha}, beta={beta})",
        variables=variables,
        field_name="gaussian",
        grading_names=("torus1", "torus2", "holo"),
        gradings=gradings,
        torus_rows=(0, 1),
        poisson_entries=tuple((f"z{k}", f"zb{k}", "2*i") for k in range(1, 5)),
        lie_dim=2,
        moment_map=(
            f"1/2*({-alpha}*z1*zb1 - z3*zb3)",
            f"1/2*({-beta}*z1*zb1 + z2*zb2 - z4*zb4)",
        ),
        action=_torus_action_entries(variables, gradings, (0, 1), 2),
        degree_bound=6,
        invariant_mode="weights",
        params=(("alpha", str(alpha)), ("beta", str(beta))),
        justification=(
            "diagonal torus moment map with alpha < 0: both components are "
            "indefinite near the zero set (scenario assumption for the "
            "generating hypothesis); acyclicity is certified by rank checks"
        ),
    )


def angular_momentum(m=2):
    """m planar particles with zero total angular momentum (real coordinates)."""
    qs = [f"q{ax}{i}" for i in range(1, m + 1) for ax in ("x", "y")]
    ps = [f"p{ax}{i}" for i in range(1, m + 1) for ax in ("x", "y")]
    variables = tuple(qs + ps)
    n = len(variables)
    qrow = tuple([1] * (2 * m) + [0] * (2 * m))
    prow = tuple([0] * (2 * m) + [1] * (2 * m))
    jterms = " + ".join(f"qx{i}*py{i} - qy{i}*px{i}" for i in range(1, m + 1))
    action = []
    for i in range(1, m + 1):
        action += [
            (1, f"qx{i}", f"qy{i}"),
            (1, f"qy{i}", f"-qx{i}"),
            (1, f"px{i}", f"py{i}"),
            (1, f"py{i}", f"-px{i}"),
        ]
    invariants = []
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            invariants.append(f"qx{i}*qx{j} + qy{i}*qy{j}")
            invariants.append(f"px{i}*px{j} + py{i}*py{j}")
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            invariants.append(f"qx{i}*px{j} + qy{i}*py{j}")
            invariants.append(f"qx{i}*py{j} - qy{i}*px{j}")
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            invariants.append(f"qx{i}*qy{j} - qy{i}*qx{j}")
            invariants.append(f"px{i}*py{j} - py{i}*px{j}")
    return ScenarioConfig(
        name=f"angular-momentum-m{m}",
        description=f"{m} particles in the plane with zero total angular momentum",
        variables=variables,
        field_name="rational",
        grading_names=("qdeg", "pdeg"),
        gradings=(qrow, prow),
        torus_rows=(),
        poisson_entries=tuple(
            (f"q{ax}{i}", f"p{ax}{i}", "1") for i in range(1, m + 1) for ax in ("x", "y")
        ),
        lie_dim=1,
        moment_map=(jterms,),
        action=tuple(action),
        degree_bound=6,
        invariant_mode="declared",
        declared_invariants=tuple(invariants),
        stages=tuple(s for s in FULL_STAGES if s != "equivariance-lemma"),
        params=(("m", str(m)),),
        justification=(
            "codimension-one zero level of an indefinite quadratic: the moment "
            "map changes sign near every zero (scenario assumption), making the "
            "complex a resolution; certified here by the bounded-degree ranks"
        ),
    )


def _symmetric_matrix_scenario(n):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    qnames = [f"q{i}{j}" for i, j in pairs]
    pnames = [f"p{i}{j}" for i, j in pairs]
    variables = tuple(qnames + pnames)
    k = len(pairs)
    qrow = tuple([1] * k + [0] * k)
    prow = tuple([0] * k + [1] * k)
    poisson = tuple(
        (f"q{i}{j}", f"p{i}{j}", "1" if i == j else "1/2") for i, j in pairs
    )
    return variables, (qrow, prow), poisson, pairs


def _so_n_generators(n):
    """Antisymmetric basis matrices X_a with [X_a, X_b] = f_ab^c X_c."""
    if n == 2:
        return [((1, 2),)], []  # one generator, abelian
    if n == 3:
        # X_a has entries -eps_{a j k}
        eps = {}
        for a in range(1, 4):
            for b in range(1, 4):
                for c in range(1, 4):
                    v = (a - b) * (b - c) * (c - a) // 2
                    if v:
                        eps[(a, b, c)] = v
        f_entries = [
            (a, b, c, str(eps[(a, b, c)]))
            for a in range(1, 4)
            for b in range(1, 4)
            for c in range(1, 4)
            if a < b and (a, b, c) in eps
        ]
        return None, f_entries
    raise ConfigError("only n = 2 and n = 3 are configured")


def _commuting_moment_exprs(n):
    """Moment map of conjugation on pairs of symmetric matrices, as text."""
    ctx = VarContext(
        tuple(
            [f"q{i}{j}" for i in range(1, n + 1) for j in range(i, n + 1)]
            + [f"p{i}{j}" for i in range(1, n + 1) for j in range(i, n + 1)]
        )
    )

    def qv(i, j):
        i, j = min(i, j), max(i, j)
        return Poly.variable(ctx, f"q{i}{j}")

    def pv(i, j):
        i, j = min(i, j), max(i, j)
        return Poly.variable(ctx, f"p{i}{j}")

    def entry(r, c):
        out = Poly.zero(ctx)
        for k in range(1, n + 1):
            out = out + qv(r, k) * pv(k, c) - pv(r, k) * qv(k, c)
        return out

    if n == 2:
        comps = [entry(1, 2).scale(2)]
        generators = [((1, 2),)]
    else:
        comps = [entry(2, 3).scale(2), entry(3, 1).scale(2), entry(1, 2).scale(2)]
        generators = [((2, 3),), ((3, 1),), ((1, 2),)]

    # calibration table: {J_a, x} = -[X_a, M]-entry for M in {Q, P}
    def xmat(a):
        m = [[0] * n for _ in range(n)]
        if n == 2:
            m[0][1], m[1][0] = -1, 1
        else:
            axes = {1: (2, 3), 2: (3, 1), 3: (1, 2)}
            r, c = axes[a]
            m[r - 1][c - 1] = -1
            m[c - 1][r - 1] = 1
        return m

    action = []
    for a in range(1, (1 if n == 2 else 3) + 1):
        X = xmat(a)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                for sym, mk in (("q", qv), ("p", pv)):
                    # [X, M]_ij with M symmetric
                    acc = Poly.zero(ctx)
                    for k in range(1, n + 1):
                        if X[i - 1][k - 1]:
                            acc = acc + mk(k, j).scale(X[i - 1][k - 1])
                        if X[k - 1][j - 1]:
                            acc = acc - mk(i, k).scale(X[k - 1][j - 1])
                    action.append((a, f"{sym}{i}{j}", str(-acc)))
    return [str(c) for c in comps], action


def commuting_variety(n=2):
    """Conjugation on pairs of symmetric matrices; moment map the commutator."""
    variables, gradings, poisson, pairs = _symmetric_matrix_scenario(n)
    _, f_entries = _so_n_generators(n)
    comps, action = _commuting_moment_exprs(n)
    if n == 2:
        stages = tuple(s for s in FULL_STAGES if s != "equivariance-lemma")
        invariants = (
            "q11 + q22",
            "p11 + p22",
            "q11^2 + 2*q12^2 + q22^2",
            "q11*p11 + 2*q12*p12 + q22*p22",
            "p11^2 + 2*p12^2 + p22^2",
        )
        mode = "declared"
    else:
        stages = ("load", "covariance", "strong-invariance", "classical-brst", "quantum-brst")
        invariants = ()
        mode = "declared"
    return ScenarioConfig(
        name=f"commuting-n{n}",
        description=f"commuting variety: conjugation on symmetric {n}x{n} matrix pairs",
        variables=variables,
        field_name="rational",
        grading_names=("qdeg", "pdeg"),
        gradings=gradings,
        torus_rows=(),
        poisson_entries=poisson,
        lie_dim=1 if n == 2 else 3,
        structure_constants=tuple(f_entries),
        moment_map=tuple(comps),
        action=tuple(action),
        degree_bound=6,
        invariant_mode=mode,
        declared_invariants=invariants,
        stages=stages,
        params=(("n", str(n)),),
        justification=(
            "the complexified commutator ideal of symmetric matrix pairs is "
            "prime of the expected codimension (scenario assumption for the "
            "generating hypothesis); n=2 acyclicity is certified by rank checks"
        ),
    )


def negative_control_qq():
    """Repeated constraint (q, q): fails the complete-intersection check."""
    return ScenarioConfig(
        name="negative-control-qq",
        description="repeated linear constraint; homology in degree one",
        variables=("q", "p"),
        field_name="rational",
        grading_names=(),
        gradings=(),
        torus_rows=(),
        poisson_entries=(("q", "p", "1"),),
        lie_dim=2,
        moment_map=("q", "q"),
        action=((1, "q", "0"), (1, "p", "1"), (2, "q", "0"), (2, "p", "1")),
        degree_bound=6,
        invariant_mode="declared",
        declared_invariants=(),
        stages=(
            "load",
            "covariance",
            "strong-invariance",
            "acyclicity",
            "contraction",
            "classical-brst",
        ),
        justification="negative control: the constraints do not form a regular sequence",
    )


def broken_sign_star():
    """The circle scenario with the ghost-pairing sign flipped in the product."""
    base = s1_c4()
    return replace(
        base,
        name="broken-sign-star",
        description="negative control: Clifford pairing sign flipped",
        clifford_coeff="2",
        stages=("load", "covariance", "strong-invariance", "quantum-brst"),
        star_triples="sample",
        justification="negative control: wrong pairing sign breaks the quantum splitting",
    )


def cubic_moment_map():
    """A cubic-perturbed constraint: strong invariance fails at third order."""
    return ScenarioConfig(
        name="cubic-moment-map",
        description="negative control: cubic perturbation of a quadratic constraint",
        variables=("q", "p"),
        field_name="rational",
        grading_names=(),
        gradings=(),
        torus_rows=(),
        poisson_entries=(("q", "p", "1"),),
        lie_dim=1,
        moment_map=("q^2 + q^3",),
        action=((1, "q", "0"), (1, "p", "2*q + 3*q^2")),
        degree_bound=6,
        invariant_mode="declared",
        declared_invariants=(),
        stages=("load", "covariance", "strong-invariance", "acyclicity"),
        justification="negative control: cubic term breaks strong invariance at nu^3",
    )


REGISTRY_BUILDERS = {
    "s1-c4": s1_c4,
    "t2-c4": t2_c4,
    "angular-momentum-m2": angular_momentum,
    "commuting-n2": lambda: commuting_variety(2),
    "commuting-n3": lambda: commuting_variety(3),
    "negative-control-qq": negative_control_qq,
    "broken-sign-star": broken_sign_star,
    "cubic-moment-map": cubic_moment_map,
}


def registry():
    return {name: build() for name, build in REGISTRY_BUILDERS.items()}


def get_scenario(name):
    try:
        return REGISTRY_BUILDERS[name]()
    except KeyError:
        raise ConfigError(f"unknown scenario {name!r}") from None


# -- config files ----------------------------------------------------------------


def load_config(path):
    """Read a scenario from a key-value config file with section headers."""
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep case
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    try:
        sc = cp["scenario"]
        variables = tuple(cp["variables"]["names"].split())
    except KeyError as exc:
        raise ConfigError(f"missing section or key: {exc}") from None

    grading_names = []
    gradings = []
    for key, value in cp["variables"].items():
        if key.startswith("grading."):
            grading_names.append(key.split(".", 1)[1])
            row = tuple(int(x) for x in value.split())
            if len(row) != len(variables):
                raise ConfigError(f"grading row {key} has wrong length")
            gradings.append(row)
    torus_names = cp["variables"].get("torus_rows", "").split()
    try:
        torus_rows = tuple(grading_names.index(n) for n in torus_names)
    except ValueError as exc:
        raise ConfigError(f"unknown torus grading row: {exc}") from None

    poisson = []
    for key, value in cp["poisson"].items():
        parts = key.split()
        if len(parts) != 2:
            raise ConfigError(f"poisson key must be two variable names: {key!r}")
        poisson.append((parts[0], parts[1], value))

    lie_dim = int(cp["lie"].get("dim", "1"))
    f_entries = []
    for key, value in cp["lie"].items():
        if key.startswith("f."):
            _, a, b, c = key.split(".")
            f_entries.append((int(a), int(b), int(c), value))

    moment = []
    for key in sorted(cp["moment-map"]):
        moment.append(cp["moment-map"][key])

    action = []
    if cp.has_section("action"):
        for key, value in cp["action"].items():
            parts = key.split()
            if len(parts) != 2:
                raise ConfigError(f"action key must be 'component variable': {key!r}")
            action.append((int(parts[0].lstrip("J")), parts[1], value))

    invariants = []
    mode = "weights"
    cap = 4
    if cp.has_section("invariants"):
        mode = cp["invariants"].get("mode", "weights")
        cap = int(cp["invariants"].get("degree_cap", "4"))
        for key in sorted(cp["invariants"]):
            if key.startswith("g"):
                invariants.append(cp["invariants"][key])

    stages = tuple(sc.get("stages", " ".join(FULL_STAGES)).split())
    probe_overrides = []
    if cp.has_section("checks"):
        for key, value in cp["checks"].items():
            probe_overrides.append((key, value))

    return ScenarioConfig(
        name=sc.get("name", "unnamed"),
        description=sc.get("description", ""),
        variables=variables,
        field_name=sc.get("field", "rational"),
        grading_names=tuple(grading_names),
        gradings=tuple(gradings),
        torus_rows=torus_rows,
        poisson_entries=tuple(poisson),
        lie_dim=lie_dim,
        structure_constants=tuple(f_entries),
        moment_map=tuple(moment),
        action=tuple(action),
        order=int(sc.get("order", "4")),
        degree_bound=int(sc.get("degree_bound", "8")),
        seed=int(sc.get("seed", "7")),
        invariant_mode=mode,
        declared_invariants=tuple(invariants),
        generator_cap=cap,
        stages=stages,
        clifford_coeff=sc.get("clifford_coeff", "-2"),
        star_triples=sc.get("star_triples", "sample"),
        probe_overrides=tuple(probe_overrides),
        justification=sc.get("justification", ""),
    )
