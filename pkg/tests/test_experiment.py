import xml.etree.ElementTree as ET

import numpy as np
import pytest

from bridgewalk import cli
from bridgewalk import experiment as ex
from bridgewalk.asymptotics import TheoryParams
from bridgewalk.graphs import cycle_graph, write_edge_list

SVG = "{http://www.w3.org/2000/svg}"


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_config_text():
    text = "# scenario\nh1 = complete:6\nh2=cycle:15\neps = 0.02\nxi1=3\ntheta-source=asymptotic\n"
    assert ex.parse_config_text(text) == {
        "h1": "complete:6", "h2": "cycle:15", "eps": 0.02, "xi1": 3, "theta_source": "asymptotic"}


@pytest.mark.parametrize("text", ["h1 complete:5", "colour=red", "eps=abc"])
def test_parse_config_errors(text):
    with pytest.raises(ex.ConfigError):
        ex.parse_config_text(text)


def test_flags_override_file(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text("h1=complete:5\nh2=complete:5\neps=0.02\nsteps=40\n")
    cfg = ex.load_config(path, eps=0.01, h2="complete:3", xi1=None)
    assert (cfg.h1, cfg.h2, cfg.eps, cfg.steps, cfg.xi1) == ("complete:5", "complete:3", 0.01, "40", 0)


@pytest.mark.parametrize("overrides", [
    {"h1": "complete:5"},
    {"h1": "complete:5", "h2": "complete:5", "eps": 0.0},
    {"h1": "complete:5", "h2": "complete:5", "eps": 1.5},
    {"h1": "complete:5", "h2": "complete:5", "steps": "0"},
    {"h1": "complete:5", "h2": "complete:5", "steps": "soon"},
])
def test_config_validation(overrides):
    with pytest.raises(ex.ConfigError):
        ex.load_config(None, **overrides)


def test_auto_horizon():
    cfg = ex.load_config(None, h1="complete:5", h2="complete:5", eps=0.01)
    assert cfg.horizon(cfg.graph()) == 2 * 70 + 10


def test_simulate_outputs(capsys, tmp_path):
    csv_path, svg_path, rep_path = tmp_path / "k5k5.csv", tmp_path / "k5k5.svg", tmp_path / "r.txt"
    code, out, _ = run_cli(capsys, "simulate", "--h1", "complete:5", "--h2", "complete:5",
                           "--eps", "0.01", "--out-csv", str(csv_path), "--out-svg", str(svg_path),
                           "--out-report", str(rep_path))
    assert code == 0
    assert rep_path.read_text() == out
    report = ex.parse_report(out)
    assert report["tau_formula"] == "70"
    assert abs(int(report["tau_simulated"]) - 70) <= 2
    header = csv_path.read_text().splitlines()[0]
    assert header == "t,mu_h1,mu_h2,mu_h0,mu_h1_theory,mu_h2_theory"
    assert len(csv_path.read_text().splitlines()) == 152


def test_csv_roundtrip_reproduces_report(capsys, tmp_path):
    csv_path = tmp_path / "k3k5.csv"
    code, out, _ = run_cli(capsys, "simulate", "--h1", "complete:3", "--h2", "complete:5",
                           "--out-csv", str(csv_path))
    assert code == 0
    report = ex.parse_report(out)
    params = TheoryParams(int(report["a1"]), int(report["a2"]), float(report["eps"]))
    summary = ex.summary_from_csv(csv_path, params)
    for key, value in summary.items():
        assert ex.fmt(value) == report[key], key


def test_csv_deterministic(capsys, tmp_path):
    outputs = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        code, _, _ = run_cli(capsys, "simulate", "--h1", "random:8:0.4", "--h2", "star:5",
                             "--seed", "42", "--eps", "0.02", "--out-csv", str(path))
        assert code == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_csv_lossless_floats(tmp_path):
    cfg = ex.load_config(None, h1="complete:5", h2="complete:3", steps="30")
    result = ex.run_simulation(cfg)
    path = tmp_path / "s.csv"
    path.write_text(ex.series_to_csv(result.series))
    cols = ex.read_series_csv(path)
    np.testing.assert_array_equal(cols["mu_h2"], result.series.mu_h2)
    np.testing.assert_array_equal(cols["mu_h1_theory"], result.series.mu_h1_theory)


def _line_styles(svg_path):
    root = ET.parse(svg_path).getroot()
    styles = {}
    for group in root.iter(f"{SVG}g"):
        gid = group.get("id")
        if gid in ("mu_h1", "mu_h2"):
            path = group.find(f"{SVG}path")
            styles[gid] = path.get("style")
    return styles


def test_svg_line_convention(tmp_path):
    cfg = ex.load_config(None, h1="complete:6", h2="cycle:15")
    result = ex.run_simulation(cfg)
    from bridgewalk.plotting import plot_series

    path = tmp_path / "fig.svg"
    plot_series(result.series, path)
    styles = _line_styles(path)
    assert "stroke-dasharray" not in styles["mu_h1"]
    assert "stroke-dasharray" in styles["mu_h2"]
    text = path.read_text()
    assert ">1.0<" in text or ">1<" in text  # probability axis tops out at 1


def test_svg_deterministic(tmp_path):
    from bridgewalk.plotting import plot_series

    result = ex.run_simulation(ex.load_config(None, h1="complete:5", h2="complete:3", steps="60"))
    plot_series(result.series, tmp_path / "a.svg")
    plot_series(result.series, tmp_path / "b.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_file_descriptor(capsys, tmp_path):
    edges = tmp_path / "c15.txt"
    write_edge_list(cycle_graph(15), edges)
    code, out, _ = run_cli(capsys, "tau", "--h1", "complete:6", "--h2", f"file:{edges}")
    assert code == 0
    assert ex.parse_report(out)["tau_formula"] == "86"


def test_config_file_cli(capsys, tmp_path):
    cfg = tmp_path / "k5k3.cfg"
    cfg.write_text("h1=complete:5\nh2=complete:3\neps=0.01\n")
    code, out, _ = run_cli(capsys, "tau", "--config", str(cfg))
    assert code == 0
    assert ex.parse_report(out)["tau_formula"] == "47"


def test_spectrum_command(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--h1", "complete:5", "--h2", "complete:5")
    assert code == 0
    rep = ex.parse_report(out)
    assert float(rep["cos_theta_asymptotic"]) == pytest.approx(0.999, abs=1e-15)
    assert float(rep["lambda1"]) == pytest.approx(-0.1, abs=1e-14)
    assert float(rep["oscillatory_lift_residual"]) <= 1e-9


def test_spectrum_overlap_k5k3(capsys):
    _, out, _ = run_cli(capsys, "spectrum", "--h1", "complete:5", "--h2", "complete:3")
    rep = ex.parse_report(out)
    assert float(rep["overlap_stationary_closed_form"]) == pytest.approx(0.8770580, abs=1e-7)


def test_tau_failure_exit_code(capsys):
    code, out, _ = run_cli(capsys, "tau", "--h1", "complete:5", "--h2", "path:2", "--eps", "0.3")
    assert code == 1
    assert "check.tau=FAIL" in out


def test_sweep_command(capsys, tmp_path):
    csv_path = tmp_path / "sweep.csv"
    svg_path = tmp_path / "sweep.svg"
    code, out, _ = run_cli(capsys, "sweep", "--h1", "complete:5", "--h2", "complete:5",
                           "--eps-list", "0.02,0.01,0.005", "--out-csv", str(csv_path),
                           "--out-svg", str(svg_path))
    assert code == 0, out
    rows = csv_path.read_text().splitlines()
    assert rows[0].split(",") == list(ex.SWEEP_COLUMNS)
    assert len(rows) == 4
    col = rows[0].split(",")
    for line in rows[2:]:
        vals = dict(zip(col, line.split(",")))
        assert float(vals["dev_ratio"]) == pytest.approx(2.0, abs=0.2)
        assert float(vals["cos_dev_ratio"]) == pytest.approx(4.0, abs=0.2)
    assert svg_path.exists()


@pytest.mark.parametrize("argv", [
    ["sweep", "--h1", "complete:5", "--h2", "complete:5", "--eps-list", "0.02"],
    ["sweep", "--h1", "complete:5", "--h2", "complete:5", "--eps-list", "0.01,0.02"],
    ["simulate", "--h1", "complete:5"],
    ["simulate", "--h1", "complete:1", "--h2", "complete:5"],
    ["simulate", "--h1", "complete:5", "--h2", "file:/nonexistent/edges.txt"],
    ["tau", "--h1", "complete:5", "--h2", "complete:5", "--steps", "10"],
    ["simulate", "--h1", "complete:5", "--h2", "complete:5", "--xi2", "9"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["simulate", "--theta-source", "guess"])
    assert exc.value.code == 2


@pytest.mark.parametrize("name", ["k5_k5", "k5_k3", "k3_k5", "k6_c15"])
def test_bundled_scenarios(capsys, tmp_path, monkeypatch, name):
    from pathlib import Path

    cfg = Path(__file__).parent.parent / "scenarios" / f"{name}.cfg"
    monkeypatch.chdir(tmp_path)
    code, _, _ = run_cli(capsys, "simulate", "--config", str(cfg))
    assert code == 0
    assert (tmp_path / f"{name}.csv").exists() and (tmp_path / f"{name}.svg").exists()
