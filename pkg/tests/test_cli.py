import json
import math
import subprocess
import sys

import numpy as np
import pytest

from dirac1d import cli
from dirac1d.cli import ScanResult, Table, parse_csv, parse_json, render_csv, run_scan


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def table_of(out):
    return parse_csv(out)


def test_spectrum_weak_coupling(capsys):
    code, out, _ = run(["spectrum", "--alpha", "10", "--parity", "even", "--count", "4"], capsys)
    assert code == 0
    t = table_of(out)
    assert len(t.rows) == 4
    zeros = [1.0188, 3.2482, 4.8201, 6.1633]
    for eps, rho in zip(t.column("epsilon"), zeros):
        nr = 2 ** (-1 / 3) * rho * 10 ** (-4 / 3)
        # relativistic levels sit a few percent below the Airy values at alpha = 10
        assert abs(eps - nr) / nr < 0.05
    assert t.column("epsilon")[0] == pytest.approx(2 ** (-1 / 3) * 1.0188 * 10 ** (-4 / 3), rel=0.02)


def test_spectrum_oracle_columns(capsys):
    code, out, _ = run(["spectrum", "--alpha", "1", "--count", "2", "--oracle"], capsys)
    assert code == 0
    t = table_of(out)
    assert t.columns[-2:] == ["E_oracle", "rel_dE"]
    assert len(t.rows) == 4
    assert all(d < 1e-6 for d in t.column("rel_dE"))


def test_spectrum_m_g_units(capsys):
    code, out, _ = run(["spectrum", "--m", "2", "--g", "4", "--count", "1", "--parity", "odd"], capsys)
    assert code == 0
    t = table_of(out)
    (E,) = t.column("E")
    (eps,) = t.column("epsilon")
    assert E == pytest.approx(2 * (1 + eps), rel=1e-10)


@pytest.mark.parametrize(
    "argv,msg",
    [
        (["spectrum", "--alpha", "0"], "alpha must be positive"),
        (["spectrum", "--alpha", "-3"], "alpha must be positive"),
        (["spectrum", "--alpha", "1", "--m", "1"], "not both"),
        (["spectrum", "--m", "1"], "--m and --g"),
        (["spectrum", "--alpha", "1", "--count", "5", "--oracle"], "at most 4"),
        (["wavefunction", "--alpha", "1", "--grid-points", "100"], "odd"),
        (["scan", "--alpha-min", "0"], "alpha must be positive"),
    ],
)
def test_usage_errors(argv, msg, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 2
    assert msg in capsys.readouterr().err


def test_domain_error_exit_code(capsys):
    code, _, err = run(["compare", "--alpha", "1"], capsys)
    assert code == 2
    assert "alpha >= 2" in err


def test_exit_3_with_partial_table(capsys):
    code, out, err = run(["spectrum", "--alpha", "24", "--parity", "even", "--count", "16"], capsys)
    assert code == 3
    assert "solver failure" in err
    t = table_of(out)
    assert 0 < len(t.rows) < 16


def test_wavefunction_missing_level_exit_3(capsys):
    code, out, err = run(["wavefunction", "--alpha", "24", "--index", "15"], capsys)
    assert code == 3
    assert "does not exist" in err


def test_wavefunction_standard(capsys):
    code, out, _ = run(["wavefunction", "--alpha", "1", "--parity", "odd", "--index", "1"], capsys)
    assert code == 0
    t = table_of(out)
    assert abs(float(t.meta["norm"]) - 1.0) < 1e-8
    assert float(t.meta["continuity_gap"]) < 1e-8
    assert float(t.meta["residual"]) < 1e-9
    x = np.array(t.column("x"))
    u = np.array(t.column("u"))
    v = np.array(t.column("v"))
    np.testing.assert_array_equal(x, -x[::-1])
    # odd parity: u(-x) = -v(x)
    np.testing.assert_allclose(u[::-1], -v, atol=1e-11)


def test_wavefunction_tilde_matches_airy(capsys):
    from dirac1d.nonrel import ModelParams, Parity, nonrel_level, nonrel_wavefunction

    code, out, _ = run(["wavefunction", "--alpha", "10", "--representation", "tilde"], capsys)
    assert code == 0
    t = table_of(out)
    assert t.columns == ["x", "u_tilde", "v_tilde"]
    x = np.array(t.column("x"))
    ut = np.array(t.column("u_tilde"))
    p = ModelParams.from_alpha(10.0)
    ref = nonrel_wavefunction(p, nonrel_level(p, Parity.EVEN, 1), grid=x).u
    corr = np.trapezoid(ut * ref, x) / math.sqrt(np.trapezoid(ut**2, x) * np.trapezoid(ref**2, x))
    assert corr > 0.999


def test_compare_and_fit(capsys):
    code, out, _ = run(["compare", "--alpha", "2", "--levels", "4", "--fit"], capsys)
    assert code == 0
    t2 = table_of(out)
    assert t2.columns[-1] == "epsilon_times_alpha"
    for eps, ea in zip(t2.column("epsilon_rel"), t2.column("epsilon_times_alpha")):
        assert ea == pytest.approx(2 * eps, rel=1e-10)
    code, out, _ = run(["compare", "--alpha", "10", "--levels", "4"], capsys)
    t10 = table_of(out)
    assert "epsilon_times_alpha" not in t10.columns
    for a, b in zip(t2.column("deviation"), t10.column("deviation")):
        assert abs(a) > abs(b)


def test_json_output(capsys):
    code, out, _ = run(["spectrum", "--alpha", "1", "--count", "2", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "dirac1d.spectrum/1"
    t = parse_json(out)
    assert len(t.rows) == 4


def test_out_file(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, out, _ = run(["spectrum", "--alpha", "2", "--count", "1", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    data = path.read_bytes()
    assert b"\r" not in data
    assert data.startswith(b"# schema: dirac1d.spectrum/1\n")


def test_unknown_schema_rejected():
    t = Table("spectrum", ["a"])
    t.add(1.5)
    text = render_csv(t)
    with pytest.raises(ValueError, match="version"):
        parse_csv(text.replace("spectrum/1", "spectrum/2"))
    with pytest.raises(ValueError):
        parse_csv(text.replace("dirac1d.spectrum", "other.thing"))
    with pytest.raises(ValueError):
        parse_csv("a,b\n1,2\n")


def test_cell_format_12_digits():
    assert cli.format_cell(1 / 3) == "3.33333333333e-01"
    assert cli.format_cell(None) == ""
    assert cli.format_cell(7) == "7"
    assert cli.parse_cell("3.33333333333e-01") == cli.round12(1 / 3)


@pytest.fixture(scope="module")
def small_scan():
    return run_scan(0.05, 2.0, points=6, levels=2)


def test_scan_table_invariants(small_scan):
    inv = small_scan.inv_alphas()
    assert len(inv) == 6
    assert all(b > a for a, b in zip(inv, inv[1:]))
    assert all(r.epsilon_rel >= 0 for r in small_scan.rows if r.epsilon_rel is not None)
    assert len(small_scan.rows) == 6 * 2 * 2


def test_scan_round_trip(small_scan):
    text = render_csv(small_scan.to_table())
    back = ScanResult.from_table(parse_csv(text))
    assert back.rows == small_scan.rows
    assert render_csv(back.to_table()) == text


def test_scan_parallel_matches_serial(small_scan):
    par = run_scan(0.05, 2.0, points=6, levels=2, jobs=2)
    assert render_csv(par.to_table()) == render_csv(small_scan.to_table())


def test_scan_records_failures(monkeypatch):
    from dirac1d.errors import ConvergenceError

    real = cli.find_levels

    def flaky(params, parity, count):
        if params.alpha < 1.0:
            raise ConvergenceError("synthetic failure")
        return real(params, parity, count)

    monkeypatch.setattr(cli, "find_levels", flaky)
    res = run_scan(0.5, 2.0, points=3, levels=1)
    failed = [r for r in res.rows if r.epsilon_rel is None]
    # 1/alpha = 1.25 and 2.0 fail, both parities each
    assert len(failed) == 4
    assert all(r.inv_alpha > 1.0 for r in failed)
    assert all("synthetic failure" in r.reason for r in failed)
    assert all(r.epsilon_nonrel > 0 for r in failed)
    text = render_csv(res.to_table())
    assert ScanResult.from_table(parse_csv(text)).rows == res.rows


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "dirac1d.cli", "spectrum", "--alpha", "0"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "alpha must be positive" in proc.stderr
