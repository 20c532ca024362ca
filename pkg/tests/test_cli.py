import io
import json
import math

import numpy as np
import pytest

from hypstieltjes.cli import RunConfig, UsageError, build_parser, config_from_args, parse_complex, parse_grid, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


LOG = ("--sigma", "1", "--a", "1", "--b", "2")


def test_parse_complex():
    assert parse_complex("1") == 1
    assert parse_complex("0.5-2i") == 0.5 - 2j
    assert parse_complex("3i") == 3j
    with pytest.raises(UsageError):
        parse_complex("abc")


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("0:1:3"), [0, 0.5, 1])
    for bad in ("0:1", "1:0:3", "0:1:0"):
        with pytest.raises(UsageError):
            parse_grid(bad)


def test_eval_log_at_one():
    code, out, _ = call("eval", *LOG, "--z", "1")
    assert code == 0
    assert float(out) == pytest.approx(math.log(2), rel=1e-13)
    _, out, _ = call("eval", *LOG, "--z", "1", "--format", "json")
    assert json.loads(out)["value"][0][0] == pytest.approx(math.log(2), rel=1e-13)


def test_eval_csv():
    code, out, _ = call("eval", *LOG, "--z", "1", "--z", "2i", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "z_re,z_im,value_re,value_im" and len(lines) == 3
    assert float(lines[1].split(",")[2]) == pytest.approx(math.log(2), rel=1e-13)


def test_density_grid():
    code, out, _ = call("density", "--sigma", "0.5", "--a", "1,3", "--b", "2,2", "--kind", "rho", "--grid", "0.01:0.99:99", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 100


def test_moments_command():
    code, out, _ = call("moments", *LOG, "--m", "3", "--format", "csv")
    rows = out.strip().splitlines()[1:]
    assert code == 0 and len(rows) == 4
    assert all(float(r.split(",")[3]) < 1e-10 for r in rows)


def test_pade_command():
    code, out, _ = call("pade", *LOG, "--m", "4", "--z", "1")
    assert code == 0 and json.loads(out)


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "--sigma", "1", "--a", "1", "--b", "2,3", "--z", "1"),
        ("eval", *LOG, "--z", "-2"),
        ("eval", *LOG, "--z", "xyz"),
        ("verify", "--suite", "nope"),
        ("density", *LOG, "--kind", "rho"),
    ],
)
def test_bad_input_exit_two(argv):
    code, _, _ = call(*argv)
    assert code == 2


def test_verify_schur_passes():
    code, out, _ = call("verify", "--suite", "schur", "--seed", "1")
    rep = json.loads(out)
    assert code == 0 and rep["all_passed"] and rep["schema_version"] == "1.0"
    assert all("runtime_s" not in e for e in rep["entries"])


def test_verify_timings_flag():
    _, out, _ = call("verify", "--suite", "schur", "--timings")
    assert all("runtime_s" in e for e in json.loads(out)["entries"])


def test_out_file(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = call("eval", *LOG, "--z", "1", "--out", str(path))
    assert code == 0 and out == "" and path.read_text()


def test_help_lists_csv_columns(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--help"])
    assert "x, value, error" in capsys.readouterr().out


def test_run_config_roundtrip():
    ns = build_parser().parse_args(["eval", "--sigma", "0.5+0.1i", "--a", "1,3", "--b", "2,2", "--z", "1", "--tol-rel", "1e-9"])
    rc = config_from_args(ns)
    back = RunConfig.from_dict(json.loads(json.dumps(rc.to_dict())))
    assert back == rc
