import json

import numpy as np
import pytest

from gefit.cli import main
from gefit.datasets import annual_path, monthly_path
from gefit.gedist import GEParams, ge_sample


@pytest.fixture()
def dataset(tmp_path):
    s = ge_sample(60, GEParams(1.0, 1.5), seed=123)
    path = tmp_path / "data.csv"
    lines = ["time,value"]
    lines += [f"{1950 + i},{v:.6f}" for i, v in enumerate(s.values)]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fit_ml_json_output(dataset, capsys):
    code, out, _ = run(capsys, "fit", dataset, "--method", "ml")
    assert code == 0
    result = json.loads(out)
    assert result["method"] == "ML"
    assert result["lambda"] == pytest.approx(1.0, abs=0.3)
    assert result["nu"] == pytest.approx(1.5, abs=0.6)
    assert 0.0 < result["ks_distance"] < 0.2
    assert result["converged"] is True
    assert result["n"] == 60
    assert result["stderr_lambda"] > 0.0
    assert "alpha" not in result


def test_fit_mdpde_fixed_alpha(dataset, capsys, tmp_path):
    out_file = tmp_path / "fit.json"
    code, _, _ = run(capsys, "fit", dataset, "--method", "mdpde",
                     "--alpha", "0.5", "--output", str(out_file))
    assert code == 0
    result = json.loads(out_file.read_text())
    assert result["method"] == "MDPDE"
    assert result["alpha"] == 0.5


def test_fit_missing_file(capsys):
    code, _, err = run(capsys, "fit", "/nonexistent/file.csv")
    assert code == 2
    assert "no such file" in err


def test_fit_bad_rows(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("time,value\n1950,1.0\n1951,oops\n")
    code, _, err = run(capsys, "fit", str(p), "--method", "ml")
    assert code == 2
    assert ":3:" in err  # line-numbered parse error


def test_missing_values_dropped(tmp_path, capsys):
    s = ge_sample(30, GEParams(1.0, 1.5), seed=5)
    rows = ["time,value"]
    for i, v in enumerate(s.values):
        rows.append(f"{i},{v:.5f}")
    rows.insert(3, "999,NA")
    rows.insert(7, "998,")
    p = tmp_path / "gaps.csv"
    p.write_text("\n".join(rows) + "\n")
    code, out, _ = run(capsys, "fit", str(p), "--method", "lm")
    assert code == 0
    result = json.loads(out)
    assert result["dropped_missing"] == 2
    assert result["n"] == 30


def test_usage_error():
    assert main(["fit"]) == 1      # missing dataset argument
    assert main(["bogus-subcommand"]) == 1


def test_tune_alpha_csv(dataset, capsys, tmp_path):
    out_file = tmp_path / "curve.csv"
    code, _, err = run(capsys, "tune-alpha", dataset,
                       "--grid", "0,0.3", "--output", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "alpha,cvm_distance"
    assert len(lines) == 3
    assert "optimal_alpha" in err


def test_simulate(tmp_path, capsys):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text(
        "# tiny smoke study\n"
        "truth.lambda = 1.0\n"
        "truth.nu = 1.5\n"
        "n = 40\n"
        "reps = 3\n"
        "seed = 11\n"
        "contamination.proportions = 0,0.1\n"
        "contamination.quantile = 0.999\n"
        "methods = lm,mdpde@0.5\n")
    out_file = tmp_path / "table.csv"
    code, _, _ = run(capsys, "simulate", str(cfg), "--output", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "method,alpha,parameter,outlier_pct,bias,mse,failures"
    # 2 proportions x 2 methods x 2 parameters
    assert len(lines) == 1 + 8


def test_simulate_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("this line has no equals sign\n")
    code, _, err = run(capsys, "simulate", str(cfg))
    assert code == 2


def test_curves_are(tmp_path, capsys):
    out_file = tmp_path / "are.csv"
    code, _, _ = run(capsys, "curves", "are", "--shape", "2.0",
                     "--step", "0.25", "--output", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "alpha,are_rate,are_shape"
    first = lines[1].split(",")
    assert float(first[1]) == pytest.approx(1.0, abs=1e-10)  # alpha = 0


def test_curves_influence(tmp_path, capsys):
    out_file = tmp_path / "inf.csv"
    code, _, _ = run(capsys, "curves", "influence", "--alpha", "0.5",
                     "--points", "50", "--output", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    assert lines[0] == "x,if_rate,if_shape"
    assert len(lines) == 51
    vals = np.array([[float(c) for c in l.split(",")] for l in lines[1:]])
    assert np.all(np.isfinite(vals))


def test_curves_density_and_moments(tmp_path, capsys):
    for kind, header in [("density", "x,pdf"),
                         ("moments", "nu,mean,variance,skewness"),
                         ("sigma", "alpha,sigma11,sigma12,sigma22")]:
        out_file = tmp_path / f"{kind}.csv"
        code, _, _ = run(capsys, "curves", kind, "--step", "0.5",
                         "--output", str(out_file))
        assert code == 0
        assert out_file.read_text().splitlines()[0] == header


def test_diagnose_bundle(capsys):
    code, out, _ = run(capsys, "--seed", "3", "diagnose", monthly_path(),
                       "--method", "ml", "--bootstrap", "99")
    assert code == 0
    bundle = json.loads(out)
    assert bundle["n"] == 61
    assert 0.0 <= bundle["trend_pvalue"] <= 1.0
    assert len(bundle["acf"]) == len(bundle["pacf"])
    assert bundle["lag1_acf"] == bundle["acf"][0]
    assert bundle["outliers"]["flagged_indices"]  # injected outlier flagged
    gof = bundle["goodness_of_fit"]
    assert 0.0 < gof["p_value"] <= 1.0
    assert gof["bootstrap_B"] == 99


def test_diagnose_clean_annual_dataset(capsys):
    code, out, _ = run(capsys, "--seed", "4", "diagnose", annual_path(),
                       "--method", "lm", "--bootstrap", "99")
    assert code == 0
    bundle = json.loads(out)
    assert bundle["goodness_of_fit"]["p_value"] > 0.05
