import io
import math

import pytest

from vacdens.cli import OutputTable, format_number, run, write_csv


def invoke(args):
    out, err = io.BytesIO(), io.StringIO()
    code = run(args, stdout=out, stderr=err)
    return code, out.getvalue().decode(), err.getvalue()


def parse_csv(text):
    lines = text.split("\n")
    assert lines[-1] == ""
    lines = lines[:-1]
    comments = [ln for ln in lines if ln.startswith("#")]
    body = lines[len(comments):]
    assert all(not ln.startswith("#") for ln in body)
    header = body[0].split(",")
    rows = [[float(v) for v in ln.split(",")] for ln in body[1:]]
    assert all(len(r) == len(header) and all(math.isfinite(v) for v in r) for r in rows)
    return comments, header, rows


def test_boundary_example():
    code, out, _ = invoke(["boundary", "--eta", "5e-17", "--z-max", "4", "--samples", "400"])
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == ["z_over_ceta", "e2_renorm", "b2_renorm", "e2_ideal"]
    assert len(rows) == 400 and rows[-1][0] == 4.0


def test_boundary_off_interface_grid():
    code, out, _ = invoke(["boundary", "--z-min", "0.5", "--samples", "3"])
    _, _, rows = parse_csv(out)
    assert rows[0][0] == 0.5 and rows[0][1] == pytest.approx(1 / math.pi)


def test_cavity_density_echo():
    code, out, _ = invoke(["cavity", "density", "--samples", "11"])
    assert code == 0
    comments, header, rows = parse_csv(out)
    text = "\n".join(comments)
    for key in ("omega_hat", "mu", "N = 106", "N_b", "SI_prefactor"):
        assert key in text
    assert header == ["x_over_L0", "S"] and len(rows) == 11


def test_cavity_averaged_columns():
    code, out, err = invoke(["cavity", "averaged", "--n-modes", "30", "--sigma-over-L0", "0.01",
                             "--samples", "5"])
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == ["x_over_L0", "S", "avg_ground", "avg_excited", "averaged"]


def test_cavity_casimir():
    code, out, _ = invoke(["cavity", "casimir"])
    comments, header, rows = parse_csv(out)
    assert header == ["epsilon", "density"] and len(rows) == 3
    value = float(next(c for c in comments if "extrapolated" in c).split("=")[1])
    assert value == pytest.approx(-math.pi / 24, rel=1e-6)


def test_point_source_profile():
    code, out, _ = invoke(["point-source", "--r-min", "0.1", "--r-max", "10", "--samples", "4"])
    _, header, rows = parse_csv(out)
    assert header == ["r_over_gamma_c", "u_electric", "u_magnetic", "u_total"]
    assert rows[0][0] == pytest.approx(0.1) and rows[-1][0] == pytest.approx(10)


def test_point_source_check_report():
    code, out, _ = invoke(["point-source", "check"])
    assert code == 0
    report = dict(ln.split("=", 1) for ln in out.strip().split("\n"))
    assert float(report["far_coefficient_electric"]) == pytest.approx(23, rel=1.5e-3)
    assert float(report["cancellation_ratio"]) < 1e-6


def test_unknown_subcommand():
    code, out, err = invoke(["frobnicate"])
    assert code == 2 and "unknown subcommand" in err and out == ""


@pytest.mark.parametrize("args", [[], ["cavity"], ["boundary", "--eta", "-1"],
                                  ["boundary", "--samples", "x"], ["boundary", "--bogus", "1"],
                                  ["cavity", "casimir", "--eps", "0.1,0.05"],
                                  ["cavity", "density", "--n-modes", "0"]])
def test_configuration_errors(args):
    code, _, err = invoke(args)
    assert code == 2 and err


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("z_max = 2\nz_samples = 5\n")
    _, out, _ = invoke(["boundary", "--config", str(cfg)])
    assert parse_csv(out)[2][-1][0] == 2.0
    _, out, _ = invoke(["boundary", "--config", str(cfg), "--z-max", "3"])
    rows = parse_csv(out)[2]
    assert rows[-1][0] == 3.0 and len(rows) == 5


def test_config_file_error_reports_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("z_max = 2\neta = 0\n")
    code, _, err = invoke(["boundary", "--config", str(cfg)])
    assert code == 2 and "line 2" in err


def test_missing_config_file(tmp_path):
    assert invoke(["boundary", "--config", str(tmp_path / "none.cfg")])[0] == 2


def test_out_file(tmp_path):
    target = tmp_path / "b.csv"
    code, out, _ = invoke(["boundary", "--samples", "3", "--out", str(target)])
    assert code == 0 and out == ""
    assert target.read_bytes().startswith(b"#")


def test_unwritable_out_is_io_failure(tmp_path):
    code, _, err = invoke(["boundary", "--samples", "3", "--out", str(tmp_path / "no" / "x.csv")])
    assert code == 3 and "I/O" in err


def test_numerical_failure_exit_code(monkeypatch):
    from vacdens import cli
    from vacdens.quadrature import QuadratureError

    def boom(*a, **k):
        raise QuadratureError("forced")
    monkeypatch.setattr(cli.boundary, "integral_check", boom)
    assert invoke(["boundary", "--samples", "3"])[0] == 3


def test_write_csv_formatting():
    sink = io.BytesIO()
    write_csv(OutputTable(["a", "b"], [(1 / 3, -2.5e-300)], ["omega_hat=1"]), sink)
    lines = sink.getvalue().decode().split("\n")
    assert lines[0] == "# omega_hat=1" and lines[1] == "a,b"
    first, second = lines[2].split(",")
    assert first.startswith("3.33333333333333") and "e-01" in first
    assert float(first) == 1 / 3 and float(second) == -2.5e-300
    assert not lines[2].endswith(",")


def test_write_csv_empty_rows():
    sink = io.BytesIO()
    write_csv(OutputTable(["x"]), sink)
    assert sink.getvalue() == b"x\n"


@pytest.mark.parametrize("row", [(1.0,), (1.0, math.nan), (1.0, math.inf)])
def test_write_csv_rejects_invalid(row):
    with pytest.raises(ValueError):
        write_csv(OutputTable(["a", "b"], [row]), io.BytesIO())


def test_format_round_trips():
    for v in (0.1, 1e-310, 6.02214076e23, -math.pi):
        assert float(format_number(v)) == v
