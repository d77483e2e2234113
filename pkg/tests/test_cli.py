import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from bergman_interp.bergman_space import Blaschke, Kernel, Polynomial, PreCompose, SpaceParams
from bergman_interp.cli import main
from bergman_interp.cli.expr import format_polynomial, parse_symbol
from bergman_interp.errors import ConfigError


def run(tmp_path, capsys, command, cfg, *extra):
    path = tmp_path / "cfg.json"
    path.write_text(cfg if isinstance(cfg, str) else json.dumps(cfg))
    code = main([command, "--config", str(path), *extra])
    out = capsys.readouterr()
    return code, out.out, out.err


# --------------------------------------------------------------------------
# expression grammar


@pytest.mark.parametrize(
    "text, coeffs",
    [
        ("1", (1,)),
        ("z", (0, 1)),
        ("0.5*z", (0, 0.5)),
        ("(1 + z)/2", (0.5, 0.5)),
        ("(1 - z)^3", (1, -3, 3, -1)),
        ("z**2 - i*z", (0, -1j, 1)),
        ("-(2 - 1j)", (-2 + 1j,)),
    ],
)
def test_polynomial_expressions(text, coeffs):
    f = parse_symbol(text)
    assert isinstance(f, Polynomial)
    np.testing.assert_allclose(np.array(f.coeffs, dtype=complex), np.array(coeffs, dtype=complex))


def test_constructor_expressions():
    params = SpaceParams(2, 0)
    k = parse_symbol("kernel(2, 0.5)", params)
    assert isinstance(k, Kernel)
    assert k(0.1) == pytest.approx(Kernel(2, 0.5, params)(0.1))
    b = parse_symbol("blaschke(0.5, 0.5, -0.2*i)")
    assert isinstance(b, Blaschke)
    assert abs(b(0.5)) == 0 and abs(b(0.999)) < 1
    m = parse_symbol("mobius(0.3)")
    assert isinstance(m, PreCompose)
    assert m(0.3) == pytest.approx(0)
    assert m(0) == pytest.approx(0.3)
    q = parse_symbol("1/(1 - z)")
    assert q(0.5) == pytest.approx(2)


@pytest.mark.parametrize(
    "text",
    ["__import__('os')", "z**0.5", "z**-1", "z**100", "foo(1)", "kernel(1, 1.5)", "1/0",
     "blaschke()", "abs(z)", "z[0]", "'z'", "z +", "kernel(m=1, lam=0)"],
)
def test_rejected_expressions(text):
    with pytest.raises(ConfigError):
        parse_symbol(text)


def test_format_polynomial():
    assert format_polynomial(Polynomial((1.0,))) == "1"
    assert format_polynomial(Polynomial((0.0, 1.0))) == "z"
    assert format_polynomial(Polynomial((0.5, 0, -2.0))) == "0.5 - 2*z^2"
    assert format_polynomial(Polynomial((0.0,))) == "0"


# --------------------------------------------------------------------------
# exit code 0


def test_interpolate_central(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "interpolate", {"points": [0], "J": 0})
    doc = json.loads(out)
    assert code == 0
    assert doc["case"] == "central" and doc["polynomial"] == "1"
    code, out, _ = run(tmp_path, capsys, "interpolate", {"points": [0.2], "J": 0})
    doc = json.loads(out)
    assert doc["polynomial"] == format_polynomial(Polynomial((1 / 0.96,)))
    assert doc["contract"]["ok"]


def test_interpolate_clustered_csv(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "interpolate", {"points": [0.3, [0, 0.5]], "J": 1}, "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "point_re", "point_im", "value_re", "value_im", "log10_magnitude", "phase"]
    # one prescribed jet entry per point
    assert [r[0] for r in rows[1:]] == ["0", "1"]
    assert float(rows[2][3]) == pytest.approx(16 / 9)
    assert "\r" not in out


def test_sweep_decreasing(tmp_path, capsys):
    cfg = {"directions": [1, -1], "t": [0.9, 0.99, 0.999]}
    code, out, _ = run(tmp_path, capsys, "sweep", cfg, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    last = [float(r["log10_max_half_disk"]) for r in rows]
    assert all(b < a for a, b in zip(last, last[1:]))


def test_check_order_bounded_yes_and_no(tmp_path, capsys):
    cfg = {"target": {"p": 2, "alpha": 0}, "pairs": [{"u": "1", "phi": "0.5*z", "k": 0}]}
    code, out, _ = run(tmp_path, capsys, "check-order-bounded", cfg)
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "yes"
    assert doc["pairs"][0]["value"] == pytest.approx(4 / 3, rel=1e-8)
    cfg["pairs"].append({"u": "1", "phi": "z", "k": 1})
    code, out, _ = run(tmp_path, capsys, "check-order-bounded", cfg)
    assert code == 0 and json.loads(out)["verdict"] == "no"


def test_check_compact(tmp_path, capsys):
    cfg = {"pairs": [{"u": "(1 - z)^3", "phi": "(1 + z)/2", "k": 0}]}
    code, out, _ = run(tmp_path, capsys, "check-compact", cfg)
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "yes"
    assert doc["pairs"][0]["sequence_check"]["agree"]
    cfg = {"pairs": [{"u": "1", "phi": "z", "k": 0}]}
    code, out, _ = run(tmp_path, capsys, "check-compact", cfg, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["pair", "k", "threshold", "sup_ratio"]
    assert len(rows) > 10


def test_kernel_norms(tmp_path, capsys):
    cfg = {"m": [0, 2], "lambda": [0, 0.5], "quadrature": True}
    code, out, _ = run(tmp_path, capsys, "kernel-norms", cfg)
    assert code == 0
    for row in json.loads(out)["rows"]:
        assert row["norm"] <= row["sup_bound"] * (1 + 1e-12)
        assert row["quadrature"] == pytest.approx(row["norm"], rel=1e-6)


def test_verify_deterministic(tmp_path, capsys):
    cfg = {"matrix_trials": 50, "analytic_trials": 5}
    a = run(tmp_path, capsys, "verify", cfg, "--seed", "7")
    b = run(tmp_path, capsys, "verify", cfg, "--seed", "7")
    assert a[0] == 0 and a[1] == b[1]
    assert json.loads(a[1])["passed"]


def test_verify_injection_counts_preconditions(tmp_path, capsys):
    cfg = {"matrix_trials": 50, "analytic_trials": 5, "inject": {"D_factor": 2.0}}
    code, out, _ = run(tmp_path, capsys, "verify", cfg, "--seed", "1")
    props = {p["property"]: p for p in json.loads(out)["properties"]}
    assert code == 0
    assert props["inverse_norm_bound"]["precondition_errors"] == 50
    assert props["inverse_norm_bound"]["failures"] == 0


def test_out_file(tmp_path, capsys):
    target = tmp_path / "o.json"
    code, out, _ = run(tmp_path, capsys, "interpolate", {"points": [0.2], "J": 0}, "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["case"] == "central"


# --------------------------------------------------------------------------
# exit code 1


def test_malformed_json_reports_line(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "interpolate", '{\n "points": [0.2],\n "J": }')
    assert code == 1 and ":3:" in err


def test_schema_error_names_field(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "interpolate", {"points": [0.2], "J": -1})
    assert code == 1 and "field J" in err
    code, _, err = run(tmp_path, capsys, "check-order-bounded", {"target": {}, "pairs": [{"u": 1, "phi": "z"}]})
    assert code == 1 and "field pairs/0" in err


def test_point_outside_disk(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "interpolate", {"points": [1.2], "J": 0})
    assert code == 1 and err


def test_non_self_map(tmp_path, capsys):
    cfg = {"target": {"p": 2, "alpha": 0}, "pairs": [{"u": "1", "phi": "0.6 + 0.5*z", "k": 0}]}
    code, _, err = run(tmp_path, capsys, "check-order-bounded", cfg)
    assert code == 1 and "into itself" in err
    code, _, _ = run(tmp_path, capsys, "check-compact", {"pairs": cfg["pairs"]})
    assert code == 1


def test_missing_config_file(tmp_path, capsys):
    code = main(["interpolate", "--config", str(tmp_path / "nope.json")])
    assert code == 1


# --------------------------------------------------------------------------
# exit codes 2 and 3


def test_numeric_failure(tmp_path, capsys):
    cfg = {"points": [0.1, 0.2, 0.3, 0.4, 0.5], "J": 4, "strategy": "paper"}
    code, out, err = run(tmp_path, capsys, "interpolate", cfg)
    assert code == 2
    assert json.loads(out)["error"] == "NumericError"
    assert "numerical failure" in err


def test_inconclusive_verdict(tmp_path, capsys):
    # exponent 2 against weight 1.05: the tail decays too slowly to classify
    cfg = {"target": {"p": 2, "alpha": 1.05}, "pairs": [{"u": "1", "phi": "z", "k": 0}]}
    code, out, _ = run(tmp_path, capsys, "check-order-bounded", cfg)
    assert code == 3 and json.loads(out)["verdict"] == "inconclusive"


def test_module_entry_point(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"points": [0.2], "J": 0}))
    proc = subprocess.run([sys.executable, "-m", "bergman_interp.cli", "interpolate", "--config", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["case"] == "central"
