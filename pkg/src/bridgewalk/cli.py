"""Command-line front end: ``bridgewalk {simulate,spectrum,tau,sweep}``.

Exit status is 0 when every report check passes, 1 when one fails and 2
for usage, configuration or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiment as ex
from .asymptotics import HorizonTooShortError
from .graphs import GraphError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value scenario file; flags override it")
    p.add_argument("--h1", help="first graph, e.g. complete:5, cycle:15, random:8:0.4:1, file:g.txt")
    p.add_argument("--h2", help="second graph")
    p.add_argument("--xi1", type=int, help="boundary vertex in h1 (default 0)")
    p.add_argument("--xi2", type=int, help="boundary vertex in h2 (default 0)")
    p.add_argument("--eps", type=float, help="bridge weight in (0, 1] (default 0.01)")
    p.add_argument("--steps", help="number of steps or 'auto' (2*tau + 10)")
    p.add_argument("--theta-source", choices=("numeric", "asymptotic"),
                   help="declination used by the theory curves (default numeric)")
    p.add_argument("--seed", type=int, help="seed for random:N:P descriptors without one")
    p.add_argument("--out-csv", help="write the data table here")
    p.add_argument("--out-svg", help="write the figure here")
    p.add_argument("--out-report", help="also write the report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bridgewalk", description="Grover walks on two graphs joined by a weak bridge.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("simulate", "evolve the walk and compare with the envelopes"),
                        ("spectrum", "second eigenvalue, reduced eigenvalue, lifts, overlaps"),
                        ("tau", "first transfer time: formula vs simulation"),
                        ("sweep", "remainder scaling over several eps values")):
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--eps-list", help="descending eps values, e.g. 0.02,0.01,0.005")
    return parser


def _config(args) -> ex.ScenarioConfig:
    overrides = {k: getattr(args, k, None) for k in
                 ("h1", "h2", "xi1", "xi2", "eps", "steps", "theta_source", "seed",
                  "out_csv", "out_svg", "out_report")}
    if getattr(args, "eps_list", None):
        overrides["eps_list"] = ex._coerce("eps_list", args.eps_list)
    return ex.load_config(args.config, **overrides)


def _emit(report: ex.ComparisonReport, cfg: ex.ScenarioConfig) -> int:
    text = report.text()
    sys.stdout.write(text)
    if cfg.out_report:
        Path(cfg.out_report).write_text(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_simulate(cfg: ex.ScenarioConfig) -> int:
    result = ex.run_simulation(cfg)
    if cfg.out_csv:
        Path(cfg.out_csv).write_text(ex.series_to_csv(result.series))
    if cfg.out_svg:
        from .plotting import plot_series

        title = f"{result.graph.h1.name} - {result.graph.h2.name}, eps={cfg.eps:g}"
        plot_series(result.series, cfg.out_svg, title)
    return _emit(result.report, cfg)


def cmd_spectrum(cfg: ex.ScenarioConfig) -> int:
    return _emit(ex.spectrum_report(cfg), cfg)


def cmd_tau(cfg: ex.ScenarioConfig) -> int:
    return _emit(ex.tau_report(cfg), cfg)


def cmd_sweep(cfg: ex.ScenarioConfig) -> int:
    rows = ex.sweep_rows(cfg, cfg.eps_list)
    table = ex.sweep_to_csv(rows)
    if cfg.out_csv:
        Path(cfg.out_csv).write_text(table)
    else:
        sys.stdout.write(table)
    if cfg.out_svg:
        from .plotting import plot_sweep

        plot_sweep(rows, cfg.out_svg)
    report = ex.ComparisonReport({"h1": cfg.h1, "h2": cfg.h2, "eps_list": ",".join(map(ex.fmt, cfg.eps_list))},
                                 ex.sweep_checks(rows))
    return _emit(report, cfg)


COMMANDS = {"simulate": cmd_simulate, "spectrum": cmd_spectrum, "tau": cmd_tau, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg)
    except (ex.ConfigError, GraphError, HorizonTooShortError, OSError) as exc:
        print(f"bridgewalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
