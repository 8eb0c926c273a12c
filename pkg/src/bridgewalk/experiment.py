"""Scenario configuration, runs, CSV output and comparison reports."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import spectral
from .graphs import BridgedGraph, bridge_graphs, parse_graph_spec
from .walk import GroverOperator, ProbabilitySeries, evolve

CSV_COLUMNS = ("t", "mu_h1", "mu_h2", "mu_h0", "mu_h1_theory", "mu_h2_theory")
SWEEP_COLUMNS = ("eps", "a1", "a2", "tau_formula", "tau_simulated", "tau_mismatch",
                 "max_dev", "dev_ratio", "dev_order", "cos_dev", "cos_dev_over_eps2",
                 "cos_dev_ratio", "lambda1_error")
CLOSURE_TOL = 1e-9
# envelope deviation allowed by the report check, in units of eps
DEVIATION_FACTOR = 5.0
OVERLAP_FACTOR = 5.0


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    """Lossless text form of a number (17 significant digits for floats)."""
    if isinstance(x, (bool, np.bool_)):
        return "PASS" if x else "FAIL"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


@dataclass
class ScenarioConfig:
    h1: str | None = None
    h2: str | None = None
    xi1: int = 0
    xi2: int = 0
    eps: float = 0.01
    steps: str = "auto"
    theta_source: str = "numeric"
    seed: int | None = None
    out_csv: str | None = None
    out_svg: str | None = None
    out_report: str | None = None
    eps_list: tuple[float, ...] = field(default_factory=tuple)

    def validate(self) -> "ScenarioConfig":
        if not self.h1 or not self.h2:
            raise ConfigError("both h1 and h2 graph descriptors are required")
        if not 0.0 < self.eps <= 1.0:
            raise ConfigError(f"eps must lie in (0, 1], got {self.eps}")
        if self.theta_source not in ("numeric", "asymptotic"):
            raise ConfigError(f"theta_source must be numeric or asymptotic, got {self.theta_source!r}")
        if self.steps != "auto":
            try:
                n = int(self.steps)
            except ValueError:
                raise ConfigError(f"steps must be an integer or 'auto', got {self.steps!r}") from None
            if n < 1:
                raise ConfigError(f"steps must be >= 1, got {n}")
        return self

    def graph(self) -> BridgedGraph:
        return bridge_graphs(parse_graph_spec(self.h1, self.seed), self.xi1,
                             parse_graph_spec(self.h2, self.seed), self.xi2)

    def horizon(self, graph: BridgedGraph, eps: float | None = None) -> int:
        eps = self.eps if eps is None else eps
        if self.steps == "auto":
            return asy.peak_window(asy.TheoryParams(graph.a1, graph.a2, eps))
        return int(self.steps)


def _coerce(name: str, value: str):
    try:
        if name in ("xi1", "xi2"):
            return int(value)
        if name == "seed":
            return None if value.lower() in ("", "none") else int(value)
        if name == "eps":
            return float(value)
        if name == "eps_list":
            return tuple(float(x) for x in value.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"bad value for {name}: {value!r}") from None
    return value


CONFIG_KEYS = {f.name for f in fields(ScenarioConfig)}


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment line."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key = key.strip().lower().replace("-", "_")
        if key == "epsilon":
            key = "eps"
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value.strip())
    return out


def load_config(path: str | Path | None = None, **overrides) -> ScenarioConfig:
    """Config from an optional file, with non-None keyword overrides on top."""
    values = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text()))
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "steps" in values:
        values["steps"] = str(values["steps"])
    return ScenarioConfig(**values).validate()


# reports

@dataclass
class ComparisonReport:
    fields: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        out = [f"{k}={fmt(v)}" for k, v in self.fields.items()]
        out += [f"check.{k}={fmt(v)}" for k, v in self.checks.items()]
        out.append(f"result={fmt(self.passed)}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def parse_report(text: str) -> dict[str, str]:
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def _scenario_fields(cfg: ScenarioConfig, graph: BridgedGraph, eps: float) -> dict:
    return {"h1": cfg.h1, "h2": cfg.h2, "xi1": cfg.xi1, "xi2": cfg.xi2, "eps": float(eps),
            "a1": graph.a1, "a2": graph.a2}


def summarize_series(t, mu1, mu2, mu0, mu1_th, mu2_th, params: asy.TheoryParams) -> dict:
    """Statistics of a run that can be recomputed from its CSV columns alone."""
    t = np.asarray(t)
    tau_f = asy.tau_formula(params)
    limit = min(len(t) - 1, 2 * tau_f)
    win = slice(0, limit + 1)
    dev = max(np.max(np.abs(np.asarray(mu1)[win] - np.asarray(mu1_th)[win])),
              np.max(np.abs(np.asarray(mu2)[win] - np.asarray(mu2_th)[win])))
    closure = np.max(np.abs(np.asarray(mu1) + np.asarray(mu2) + np.asarray(mu0) - 1.0))
    out = {
        "horizon": int(t[-1]),
        "max_mu_h2": float(np.max(mu2)),
        "argmax_mu_h2": int(np.argmax(mu2)),
        "min_mu_h1": float(np.min(mu1)),
        "max_theory_deviation": float(dev),
        "deviation_window": int(limit),
        "max_closure_error": float(closure),
        "tau_formula": tau_f,
    }
    try:
        out["tau_simulated"] = asy.tau_simulated(mu2, params)
    except asy.HorizonTooShortError:
        out["tau_simulated"] = "n/a"
    return out


def simulation_checks(summary: dict, eps: float) -> dict:
    checks = {
        "closure": summary["max_closure_error"] < CLOSURE_TOL,
        "theory_deviation": summary["max_theory_deviation"] <= DEVIATION_FACTOR * eps,
    }
    if summary["tau_simulated"] != "n/a":
        tau_f = summary["tau_formula"]
        checks["tau"] = abs(summary["tau_simulated"] - tau_f) <= asy.tau_tolerance(tau_f)
    return checks


@dataclass
class SimulationResult:
    config: ScenarioConfig
    graph: BridgedGraph
    params: asy.TheoryParams
    series: ProbabilitySeries
    report: ComparisonReport


def run_simulation(cfg: ScenarioConfig) -> SimulationResult:
    graph = cfg.graph()
    params = asy.theory_params(graph, cfg.eps, cfg.theta_source)
    series = evolve(graph, cfg.eps, cfg.horizon(graph))
    series.mu_h1_theory, series.mu_h2_theory = asy.mu_theory(series.t, params)
    report = ComparisonReport(_scenario_fields(cfg, graph, cfg.eps))
    report.fields["theta_source"] = cfg.theta_source
    report.fields["cos_theta_asymptotic"] = spectral.asymptotic_cos_theta(graph.a1, graph.a2, cfg.eps)
    report.fields["theta"] = params.theta
    summary = summarize_series(series.t, series.mu_h1, series.mu_h2, series.mu_h0,
                               series.mu_h1_theory, series.mu_h2_theory, params)
    report.fields.update(summary)
    report.fields["max_norm_drift"] = float(np.max(np.abs(series.norm_sq - 1.0)))
    report.checks.update(simulation_checks(summary, cfg.eps))
    return SimulationResult(cfg, graph, params, series, report)


def series_to_csv(series: ProbabilitySeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    cols = [series.t, series.mu_h1, series.mu_h2, series.mu_h0,
            series.mu_h1_theory, series.mu_h2_theory]
    for row in zip(*cols):
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_series_csv(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = {c: np.array([float(r[c]) for r in rows]) for c in CSV_COLUMNS}
    out["t"] = out["t"].astype(np.int64)
    return out


def summary_from_csv(path: str | Path, params: asy.TheoryParams) -> dict:
    cols = read_series_csv(path)
    return summarize_series(cols["t"], cols["mu_h1"], cols["mu_h2"], cols["mu_h0"],
                            cols["mu_h1_theory"], cols["mu_h2_theory"], params)


def spectrum_report(cfg: ScenarioConfig) -> ComparisonReport:
    graph = cfg.graph()
    eps = cfg.eps
    report = ComparisonReport(_scenario_fields(cfg, graph, eps))
    th = spectral.theta(graph, eps)
    lam1 = spectral.reduced_eigenvalue(graph)
    lam1_expected = -(1.0 / graph.a1 + 1.0 / graph.a2)
    op = GroverOperator(graph, eps)
    stat = spectral.stationary_arc_vector(graph, eps)
    report.fields.update({
        "cos_theta_numeric": th.cos_numeric,
        "cos_theta_asymptotic": th.cos_asymptotic,
        "cos_theta_deviation_over_eps2": abs(th.cos_numeric - th.cos_asymptotic) / eps ** 2,
        "theta_numeric": th.theta_numeric,
        "theta_asymptotic": th.theta_asymptotic,
        "second_eigenvalue_multiplicity": len(th.cluster),
        "lambda1": lam1,
        "lambda1_expected": lam1_expected,
        "lambda1_finite_difference": (th.cos_numeric - 1.0) / eps,
        "stationary_lift_residual": float(np.linalg.norm(op(stat) - stat)),
    })
    report.checks["lambda1"] = abs(lam1 - lam1_expected) <= 1e-12
    report.checks["stationary_lift"] = report.fields["stationary_lift_residual"] <= 1e-12
    if not th.simple:
        report.checks["simple_second_eigenvalue"] = False
        return report
    plus, minus = spectral.lift_to_arc(graph, eps, th.cos_numeric, th.eigenvector, check=False)
    res = max(plus.residual(op.apply), minus.residual(op.apply))
    ov = spectral.overlaps(graph, eps)
    report.fields.update({
        "oscillatory_lift_residual": res,
        "overlap_stationary": ov.stationary,
        "overlap_stationary_closed_form": ov.stationary_closed_form,
        "overlap_oscillatory": ov.plus,
        "overlap_oscillatory_closed_form": ov.oscillatory_closed_form,
        "overlap_total_sq": ov.total_sq,
    })
    report.checks["oscillatory_lift"] = res <= spectral.LIFT_RESIDUAL_TOL
    report.checks["overlaps"] = (
        abs(ov.stationary - ov.stationary_closed_form) <= OVERLAP_FACTOR * eps
        and max(abs(ov.plus - ov.oscillatory_closed_form),
                abs(ov.minus - ov.oscillatory_closed_form)) <= OVERLAP_FACTOR * eps)
    return report


def tau_report(cfg: ScenarioConfig) -> ComparisonReport:
    graph = cfg.graph()
    params = asy.theory_params(graph, cfg.eps, "asymptotic")
    horizon = cfg.horizon(graph)
    series = evolve(graph, cfg.eps, horizon)
    tau_f = asy.tau_formula(params)
    tau_s = asy.tau_simulated(series.mu_h2, params)
    report = ComparisonReport(_scenario_fields(cfg, graph, cfg.eps))
    report.fields.update({
        "r_eff": asy.r_eff(graph.a1, graph.a2),
        "tau_formula": tau_f,
        "tau_simulated": tau_s,
        "difference": tau_s - tau_f,
        "tolerance": asy.tau_tolerance(tau_f),
    })
    report.checks["tau"] = abs(tau_s - tau_f) <= asy.tau_tolerance(tau_f)
    return report


def sweep_rows(cfg: ScenarioConfig, eps_list) -> list[dict]:
    """Remainder diagnostics for each eps, with ratios against the previous row."""
    eps_list = [float(e) for e in eps_list]
    if len(eps_list) < 2:
        raise ConfigError("a sweep needs at least two eps values")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ConfigError(f"sweep eps values must be strictly descending, got {eps_list}")
    if any(not 0.0 < e <= 1.0 for e in eps_list):
        raise ConfigError("sweep eps values must lie in (0, 1]")
    graph = cfg.graph()
    lam1 = spectral.reduced_eigenvalue(graph)
    rows = []
    for eps in eps_list:
        run = run_simulation(replace(cfg, eps=eps, steps="auto"))
        th = spectral.theta(graph, eps)
        cos_dev = abs(th.cos_numeric - th.cos_asymptotic)
        tau_s = run.report.fields["tau_simulated"]
        tau_f = run.report.fields["tau_formula"]
        rows.append({
            "eps": eps, "a1": graph.a1, "a2": graph.a2,
            "tau_formula": tau_f, "tau_simulated": tau_s, "tau_mismatch": tau_s - tau_f,
            "max_dev": run.report.fields["max_theory_deviation"],
            "cos_dev": cos_dev, "cos_dev_over_eps2": cos_dev / eps ** 2,
            "lambda1_error": abs((th.cos_numeric - 1.0) / eps - lam1),
        })
    for prev, row in zip([None] + rows, rows):
        if prev is None:
            row["dev_ratio"] = row["dev_order"] = row["cos_dev_ratio"] = math.nan
            continue
        r = prev["eps"] / row["eps"]
        row["dev_ratio"] = prev["max_dev"] / row["max_dev"]
        row["dev_order"] = math.log(row["dev_ratio"]) / math.log(r)
        row["cos_dev_ratio"] = prev["cos_dev"] / row["cos_dev"]
    return rows


def sweep_checks(rows: list[dict]) -> dict:
    """Scaling checks; for a halving these are the [1.5, 3] and [0.25, 4] windows."""
    ok_dev, ok_cos, ok_lam, ok_tau = True, True, True, True
    for prev, row in zip(rows, rows[1:]):
        r = prev["eps"] / row["eps"]
        lo, hi = r ** (math.log(1.5) / math.log(2)), r ** (math.log(3) / math.log(2))
        ok_dev &= lo <= row["dev_ratio"] <= hi
        ok_cos &= r ** -2 <= row["cos_dev_over_eps2"] / prev["cos_dev_over_eps2"] <= r ** 2
        ok_lam &= lo <= prev["lambda1_error"] / row["lambda1_error"] <= hi
    for row in rows:
        ok_tau &= abs(row["tau_mismatch"]) <= asy.tau_tolerance(row["tau_formula"])
    return {"envelope_order_eps": ok_dev, "cos_theta_order_eps2": ok_cos,
            "lambda1_order_eps": ok_lam, "tau": ok_tau}


def sweep_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()
