"""Reproducible experiment tables behind the ``approxop`` command line.

A configuration is one JSON document::

    {
      "function": {"kind": "norm_sq"},
      "point": {"head": [0.5, 0.5], "tail": {"kind": "zero"}, "space": "gamma"},
      "n_list": [1, 2, 4],
      "family": "bernstein",
      "anchor": null,
      "strategy": {"kind": "auto", "samples": 10000, "seed": 7}
    }

Each ``cmd_*`` function turns an :class:`ExperimentSpec` into an
:class:`ExperimentResult`: fixed column names, one dict per row, and a flag
telling whether a checked property was violated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from approxop.bounds import SQRT_GAMMA, bound_vs_actual, ucb_bound_relaxed
from approxop.diag_operator import (
    ClosedForm,
    Enumerate,
    MonteCarlo,
    OperatorConfig,
    RankFactor,
    apply_operator,
    closed_form_eval,
    enumerate_eval,
    evaluate_with_fallback,
    operator_mapping,
)
from approxop.errors import DomainError, FeasibilityError, SpecError
from approxop.function_model import FBAR_WEIGHTS, Fbar, Mapping, NormSq, convexity_probe, mapping_from_dict
from approxop.kernels1d import BERNSTEIN, FAMILIES, KernelFamily, family_check
from approxop.sequence_space import SequencePoint, Space, series_sum

__all__ = [
    "COMMANDS",
    "ExperimentSpec",
    "ExperimentResult",
    "parse_spec",
    "run_experiment",
    "testg_prediction",
    "counterexample_gaps_display",
]

COMMANDS = ("evaluate", "converge", "bounds", "lipschitz", "convexity", "counterexample", "family-check")


@dataclass
class ExperimentSpec:
    command: str
    function: Mapping | None
    point: SequencePoint | None
    n_list: list[int]
    family: KernelFamily = BERNSTEIN
    anchor: SequencePoint | None = None
    strategy: str = "auto"
    budget: int | None = None
    samples: int | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def monte_carlo(self) -> MonteCarlo | None:
        if self.samples is None or self.seed is None:
            return None
        return MonteCarlo(int(self.samples), int(self.seed))


@dataclass
class ExperimentResult:
    command: str
    columns: list[str]
    rows: list[dict]
    violation: bool = False
    messages: list[str] = field(default_factory=list)


def parse_spec(data: dict, command: str | None = None, n_list=None, seed: int | None = None) -> ExperimentSpec:
    """Validate a configuration document; CLI overrides take precedence."""
    if not isinstance(data, dict):
        raise SpecError("configuration must be a JSON object")
    command = command or data.get("command")
    if command not in COMMANDS:
        raise SpecError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    try:
        family = KernelFamily.from_name(str(data.get("family", "bernstein")))
        space = Space.for_family(family)
        function = mapping_from_dict(data["function"]) if data.get("function") is not None else None
        point = SequencePoint.from_dict(data["point"], space) if data.get("point") is not None else None
        anchor = SequencePoint.from_dict(data["anchor"], space) if data.get("anchor") is not None else None
    except (KeyError, TypeError, DomainError) as exc:
        raise SpecError(f"invalid configuration: {exc}") from None
    ns = n_list if n_list else data.get("n_list", [])
    try:
        ns = [int(x) for x in ns]
    except (TypeError, ValueError):
        raise SpecError(f"n_list must hold integers, got {ns!r}") from None
    if not ns:
        raise SpecError("n_list must be nonempty")
    if any(n < 1 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise SpecError(f"n_list must be positive and strictly ascending, got {ns}")
    strat = dict(data.get("strategy") or {})
    kind = strat.get("kind", "auto")
    if kind not in ("auto", "closed_form", "enumerate", "rank_factor", "monte_carlo"):
        raise SpecError(f"unknown strategy {kind!r}")
    spec = ExperimentSpec(
        command=command,
        function=function,
        point=point,
        n_list=ns,
        family=family,
        anchor=anchor,
        strategy=kind,
        budget=strat.get("budget"),
        samples=strat.get("samples"),
        seed=seed if seed is not None else strat.get("seed", data.get("seed")),
        extra={k: v for k, v in data.items() if k not in
               ("command", "function", "point", "n_list", "family", "anchor", "strategy")},
    )
    spec.extra["family_given"] = "family" in data
    if spec.seed is not None:
        spec.seed = int(spec.seed)
    if kind == "monte_carlo" and (spec.seed is None or spec.samples is None):
        raise SpecError("monte_carlo strategy requires 'samples' and 'seed'")
    needs_function = command not in ("counterexample", "family-check")
    needs_point = command not in ("lipschitz", "convexity", "family-check", "counterexample")
    if needs_function and function is None:
        raise SpecError(f"command {command} needs a 'function'")
    if needs_point and point is None:
        raise SpecError(f"command {command} needs a 'point'")
    return spec


def _evaluate(spec: ExperimentSpec, F: Mapping, t: SequencePoint, n: int):
    config = OperatorConfig(spec.family, n, spec.anchor)
    kind = spec.strategy
    if kind == "auto":
        return evaluate_with_fallback(F, t, config, monte_carlo=spec.monte_carlo, budget=spec.budget)
    strategy = {
        "closed_form": lambda: ClosedForm(),
        "enumerate": lambda: Enumerate(spec.budget),
        "rank_factor": lambda: RankFactor(),
        "monte_carlo": lambda: spec.monte_carlo,
    }[kind]()
    return apply_operator(F, t, config.replace(strategy=strategy))


def _vec_cols(prefix: str, d: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(d)]


def cmd_evaluate(spec: ExperimentSpec) -> ExperimentResult:
    F, t = spec.function, spec.point
    d = F.codomain_dim
    columns = ["n", *_vec_cols("v", d), "std_error", "engine", "count"]
    rows = []
    for n in spec.n_list:
        rep = _evaluate(spec, F, t, n)
        row = {"n": n, **dict(zip(_vec_cols("v", d), rep.value.tolist()))}
        row.update(std_error=rep.std_error, engine=rep.engine, count=rep.count)
        rows.append(row)
    return ExperimentResult("evaluate", columns, rows)


def testg_prediction(t: SequencePoint, n: int) -> float:
    """Signed error of ``L_n(||.||^2)(t)`` for Bernstein with zero anchor, term by term."""
    head = t.coords(n)
    return math.fsum([-t.tail_sq(n), *(head / n).tolist(), *(-(head * head) / n).tolist()])


def cmd_converge(spec: ExperimentSpec) -> ExperimentResult:
    F, t = spec.function, spec.point
    d = F.codomain_dim
    columns = ["n", *_vec_cols("error", d), *_vec_cols("predicted", d), "std_error", "engine"]
    Ft = F.evaluate(t)
    literal = isinstance(F, NormSq) and spec.family == BERNSTEIN and spec.anchor is None
    rows = []
    for n in spec.n_list:
        rep = _evaluate(spec, F, t, n)
        row = {"n": n, **dict(zip(_vec_cols("error", d), (rep.value - Ft).tolist()))}
        if literal:
            pred = [testg_prediction(t, n)]
        elif F.registered:
            pred = (closed_form_eval(F, t, OperatorConfig(spec.family, n, spec.anchor)).value - Ft).tolist()
        else:
            pred = [None] * d
        row.update(zip(_vec_cols("predicted", d), pred))
        row.update(std_error=rep.std_error, engine=rep.engine)
        rows.append(row)
    return ExperimentResult("converge", columns, rows)


def cmd_bounds(spec: ExperimentSpec) -> ExperimentResult:
    F, t = spec.function, spec.point
    delta = spec.extra.get("delta", SQRT_GAMMA)
    radius = spec.extra.get("radius")
    columns = ["n", "gamma_sq", "delta", "omega", "provenance", "bound", "relaxed_bound",
               "actual_error", "std_error", "engine", "holds"]
    rows, violation, messages = [], False, []
    plain = spec.family == BERNSTEIN and spec.anchor is None
    for n in spec.n_list:
        rep = bound_vs_actual(F, t, n, spec.family, delta, spec.anchor, radius=radius,
                              monte_carlo=spec.monte_carlo)
        relaxed = ucb_bound_relaxed(F, t, n, radius).bound if plain else None
        if rep.holds is False:
            violation = True
            messages.append(f"n={n}: actual error {rep.actual_error!r} exceeds bound {rep.bound!r}")
        rows.append({"n": n, "gamma_sq": rep.gamma_sq, "delta": rep.delta, "omega": rep.omega_at_delta,
                     "provenance": rep.omega_provenance, "bound": rep.bound, "relaxed_bound": relaxed,
                     "actual_error": rep.actual_error, "std_error": rep.std_error, "engine": rep.engine,
                     "holds": rep.holds})
    return ExperimentResult("bounds", columns, rows, violation, messages)


def _random_points(rng: np.random.Generator, count: int, dim: int, space: Space) -> np.ndarray:
    lo, hi = space.interval
    lo, hi = max(lo, -1.0), min(hi, 1.0)
    return rng.uniform(lo, hi, size=(count, dim))


def cmd_lipschitz(spec: ExperimentSpec) -> ExperimentResult:
    """Sampled Lipschitz ratios of ``L_n(F)`` against ``sqrt(n) M``."""
    F = spec.function
    M = spec.extra.get("lipschitz", F.lipschitz)
    if M is None:
        raise SpecError("lipschitz needs a declared Lipschitz constant ('lipschitz' field)")
    pairs = int(spec.extra.get("pairs", 1000))
    rng = np.random.default_rng(spec.seed if spec.seed is not None else 0)
    space = Space.for_family(spec.family)
    columns = ["n", "pairs", "max_ratio", "limit", "status"]
    rows, violation, messages = [], False, []
    for n in spec.n_list:
        config = OperatorConfig(spec.family, n, spec.anchor)
        LF = operator_mapping(F, config, engine=lambda G, p, c: _evaluate(spec, G, p, c.n))
        t = _random_points(rng, pairs, n, space)
        # half independent pairs, half local perturbations
        step = rng.normal(scale=0.05, size=(pairs, n))
        u = np.where(np.arange(pairs)[:, None] % 2 == 0, _random_points(rng, pairs, n, space), t + step)
        u = np.clip(u, *space.interval)
        anchor = SequencePoint.zeros(space)
        diff = np.linalg.norm(LF.evaluate_batch(t, anchor) - LF.evaluate_batch(u, anchor), axis=1)
        dist = np.linalg.norm(t - u, axis=1)
        keep = dist > 0
        ratio = float(np.max(diff[keep] / dist[keep])) if np.any(keep) else 0.0
        limit = math.sqrt(n) * float(M)
        ok = ratio <= limit + 1e-9
        if not ok:
            violation = True
            messages.append(f"n={n}: ratio {ratio!r} exceeds sqrt(n) M = {limit!r}")
        rows.append({"n": n, "pairs": pairs, "max_ratio": ratio, "limit": limit, "status": "pass" if ok else "FAIL"})
    return ExperimentResult("lipschitz", columns, rows, violation, messages)


def cmd_convexity(spec: ExperimentSpec) -> ExperimentResult:
    """Per-variable convexity of ``L_n(F)`` probed on random segments."""
    F = spec.function
    if F.codomain_dim != 1:
        raise SpecError("convexity needs a scalar function")
    triples = int(spec.extra.get("triples", 100))
    rng = np.random.default_rng(spec.seed if spec.seed is not None else 0)
    space = Space.for_family(spec.family)
    columns = ["n", "axis", "checked", "violations", "max_excess", "status"]
    rows, violation, messages = [], False, []
    for n in spec.n_list:
        config = OperatorConfig(spec.family, n, spec.anchor)
        LF = operator_mapping(F, config, engine=lambda G, p, c: _evaluate(spec, G, p, c.n))
        axes = spec.extra.get("axes") or list(range(1, n + 1))
        for axis in axes:
            if axis > n:
                continue
            rep = convexity_probe(LF, axis, triples, rng, dim=n, space=space)
            if not rep.ok:
                violation = True
                messages.append(f"n={n} axis={axis}: {len(rep.violations)} violations, worst {rep.max_excess!r}")
            rows.append({"n": n, "axis": axis, "checked": rep.checked, "violations": len(rep.violations),
                         "max_excess": rep.max_excess, "status": "pass" if rep.ok else "FAIL"})
    return ExperimentResult("convexity", columns, rows, violation, messages)


def counterexample_gaps_display(tail: SequencePoint, n: int) -> tuple[float, float]:
    """Both gaps from their explicit series, with ``t_{n+k}`` the ``k``-th tail coordinate.

    ``gap_4 = sum_{j>n} t_j^2 / 2^j`` and
    ``gap_5 = 2^{-(n+1)} (t_{n+1}^2 + (t_{n+1} - t_{n+1}^2) / (n+1))``.
    """
    gap4 = 0.5**n * series_sum([FBAR_WEIGHTS, tail], [1, 2])
    t_next = tail.coord(1)
    gap5 = 0.5 ** (n + 1) * (t_next**2 + (t_next - t_next**2) / (n + 1))
    return gap4, gap5


def _tbar(tail: SequencePoint, n: int) -> SequencePoint:
    return SequencePoint((1.0,) * n + tail.head, tail.tail, Space.GAMMA)


def cmd_counterexample(spec: ExperimentSpec) -> ExperimentResult:
    """Gaps ``fbar - L_n fbar`` and ``L_{n+1} fbar - L_n fbar`` at ``(1,...,1, tail)``."""
    tail = spec.point if spec.point is not None else SequencePoint.zeros()
    budget = spec.budget
    F = Fbar()
    columns = ["n", "gap_4", "gap_4_enum", "gap_4_display", "gap_5", "gap_5_enum", "gap_5_display", "status"]
    rows, violation, messages = [], False, []
    for n in spec.n_list:
        tb = _tbar(tail, n)
        f_t = F.evaluate(tb)[0]
        L_n = closed_form_eval(F, tb, OperatorConfig(BERNSTEIN, n)).scalar
        L_n1 = closed_form_eval(F, tb, OperatorConfig(BERNSTEIN, n + 1)).scalar
        gap4, gap5 = f_t - L_n, L_n1 - L_n
        gap4_enum = gap5_enum = None
        try:
            e_n = enumerate_eval(F, tb, OperatorConfig(BERNSTEIN, n, strategy=Enumerate(budget))).scalar
            gap4_enum = f_t - e_n
            e_n1 = enumerate_eval(F, tb, OperatorConfig(BERNSTEIN, n + 1, strategy=Enumerate(budget))).scalar
            gap5_enum = e_n1 - e_n
        except FeasibilityError:
            pass
        d4, d5 = counterexample_gaps_display(tail, n)
        checks = [gap4, gap5] + [g for g in (gap4_enum, gap5_enum) if g is not None]
        ok = min(checks) >= -1e-12 and abs(gap4 - d4) <= 1e-12 and abs(gap5 - d5) <= 1e-12
        if not ok:
            violation = True
            messages.append(f"n={n}: gaps disagree with the displayed closed forms or are negative")
        rows.append({"n": n, "gap_4": gap4, "gap_4_enum": gap4_enum, "gap_4_display": d4, "gap_5": gap5,
                     "gap_5_enum": gap5_enum, "gap_5_display": d5, "status": "pass" if ok else "FAIL"})
    return ExperimentResult("counterexample", columns, rows, violation, messages)


def cmd_family_check(spec: ExperimentSpec) -> ExperimentResult:
    """Moment hypotheses per family; a flagged residual is reported, not a failure."""
    names = spec.extra.get("families")
    if names:
        families = [KernelFamily.from_name(x) for x in names]
    else:
        families = [spec.family] if spec.extra.get("family_given") else list(FAMILIES)
    columns = ["family", "n", "coef_e2", "coef_e1", "coef_const", "slope_e2", "slope_e1", "slope_const",
               "moments_ok", "status"]
    rows, violation, messages = [], False, []
    for fam in families:
        grid = spec.extra.get("t_grid") or ([0.0, 0.5, 1.0] if fam == BERNSTEIN else [0.0, 0.5, 1.0, 2.0])
        rep = family_check(fam, spec.n_list, grid)
        if not rep.moments_ok:
            violation = True
            messages.append(f"{fam}: moment identities failed")
        messages.extend(f"{fam}: {r}" for r in rep.reasons)
        for n in spec.n_list:
            a, b, c = rep.coefficients[n]
            ok_n = all(r["ok"] for r in rep.moment_rows if r["n"] == n)
            rows.append({"family": str(fam), "n": n, "coef_e2": a, "coef_e1": b, "coef_const": c,
                         "slope_e2": rep.slopes[0], "slope_e1": rep.slopes[1], "slope_const": rep.slopes[2],
                         "moments_ok": ok_n, "status": rep.status})
    return ExperimentResult("family-check", columns, rows, violation, messages)


_DISPATCH = {
    "evaluate": cmd_evaluate,
    "converge": cmd_converge,
    "bounds": cmd_bounds,
    "lipschitz": cmd_lipschitz,
    "convexity": cmd_convexity,
    "counterexample": cmd_counterexample,
    "family-check": cmd_family_check,
}


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    return _DISPATCH[spec.command](spec)
