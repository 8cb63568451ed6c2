import json
import math

import numpy as np
import pytest

from sosmap import lab
from sosmap import mapcore as mc
from sosmap.cli import main, parse_field, read_config
from sosmap.errors import InvalidFieldSpec, ParseError
from sosmap.field import Field

# (k, h, tau, y0, x1, n_steps) transcribed from the figure captions
CAPTIONS = {
    "fig1": (2, 1.0, 3.0, 0.5, 1.48589, 3000),
    "fig2": (2, 1.0, 2.6, 0.8, 1.713, 10000),
    "fig3": (2, 1.0, 4.0, 1.5, 1.0, 10000),
    "fig4": (2, 1.0, 4.0, 1.5, 1.02, 10000),
    "fig5": (2, 1.0, 4.0, 1.5, 0.98, 10000),
    "fig6": (2, 1.0, 4.5, 1.2, 1.3, 10000),
    "fig7": (2, 1.0, 4.5, 1.2, 1.3, 500),
    "fig8": (2, 1.0, 4.5, 1.2, 1.3, 25),
    "fig9": (2, 1.0, 4.5, 1.2, 1.2838, 10000),
    "fig10": (2, 1.0, 5.5, 1.2, 1.1, 100),
    "fig11": (3, 1.0, 4.0, 1.2, 0.8, 500),
    "fig12": (2, 0.5, 3.0, 1.2, 0.6, 200),
    "fig13": (2, 1.05, 3.0, 1.2, 0.6, 95),
}


@pytest.mark.parametrize("name", sorted(CAPTIONS))
def test_preset_echo_matches_caption(name):
    k, h, tau, y0, x1, n = CAPTIONS[name]
    assert lab.PRESETS[name].echo() == {"k": k, "h": h, "tau": tau, "x0": 1.0, "y0": y0,
                                        "x1": x1, "n_steps": n}


def test_preset_fig12_files(tmp_path, capsys):
    assert main(["preset", "fig12", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "fig12.csv").read_text().splitlines()
    assert rows[0] == "step,x,y" and len(rows) == 202
    assert rows[1] == "0,1.48589,1" or rows[1].startswith("0,0.59999999999999998,1")
    report = json.loads((tmp_path / "fig12.json").read_text())
    assert report["ok"] and report["first_nonpositive"] is None
    assert json.loads(capsys.readouterr().out) == report


def test_preset_assertion_failure_exit_code(tmp_path):
    # the DoubleMinusOne orbit goes negative within a few steps
    assert main(["preset", "fig11", "--out", str(tmp_path)]) == 3
    report = json.loads((tmp_path / "fig11.json").read_text())
    regime = [c for c in report["assertions"] if c["name"] == "regime"][0]
    assert regime["ok"]


def test_trajectory_csv_round_trip():
    p = mc.make_params(2, 3.0, 0.5, 1.2, 0.6)
    t = mc.iterate(p, 50)
    back = lab.read_trajectory_csv(lab.trajectory_csv(t))
    assert np.array_equal(back, t.points)


@pytest.mark.parametrize("text", ["", "a,b,c\n1,2,3\n", "step,x,y\n", "step,x,y\n0,1\n",
                                  "step,x,y\n0,zz,1\n"])
def test_read_trajectory_csv_rejects(text):
    with pytest.raises(ParseError):
        lab.read_trajectory_csv(text)


def test_iterate_command(capsys):
    assert main(["iterate", "--k", "2", "--tau", "3", "--h", "0.5", "--y0", "1.2", "--x1", "0.6",
                 "--steps", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5
    x1 = -1.2 * 0.5 * 0.36 + 3 * 0.6 - 1.0
    assert float(lines[2].split(",")[1]) == pytest.approx(x1, abs=1e-15)


def test_theta_alternative_to_tau(capsys):
    th = mc.theta_from_tau(3.0)
    assert main(["spectral", "--theta", repr(th), "--y0", "0.5", "--x1", "1.48589"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["params"]["tau"] == pytest.approx(3.0, abs=1e-14)


@pytest.mark.parametrize("argv", [
    ["iterate", "--tau", "3", "--x1", "0.6"],
    ["iterate", "--tau", "3", "--y0", "2", "--x1", "1.5"],
    ["iterate", "--tau", "1.5", "--y0", "0.2", "--x1", "0.6"],
    ["iterate", "--y0", "0.2", "--x1", "0.6"],
    ["spectral", "--tau", "3", "--field", "nuj:0.5", "--y0", "0.2", "--x1", "0.6"],
    ["spectral", "--tau", "3", "--field", "bogus:1", "--y0", "0.2", "--x1", "0.6"],
    ["measure", "--theta", "0.5", "--depth", "1", "--spins", "0,1"],
])
def test_invalid_input_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_io_errors_exit_4(tmp_path):
    assert main(["plot-data", str(tmp_path / "missing.csv")]) == 4
    assert main(["iterate", "--tau", "3", "--y0", "1", "--x1", "1", "--steps", "2",
                 "--out", str(tmp_path / "no" / "such" / "dir.csv")]) == 4


def test_tau_and_theta_are_exclusive():
    with pytest.raises(SystemExit) as e:
        main(["spectral", "--tau", "3", "--theta", "0.3", "--y0", "1", "--x1", "1"])
    assert e.value.code == 2


def test_parse_field_variants():
    assert parse_field("const:1.05").bulk_constant() == 1.05
    assert parse_field("nuj", theta=0.5).at(1) == pytest.approx(0.5 / 3)
    assert parse_field("steep:1.5", k=2).at(0) == pytest.approx((1.5 ** 4 - 1) / (1.5 ** 4 + 1))
    f = parse_field("table:0=1,1=1.05;default=1.05")
    assert f.at(1) == 1.05 and f.at(9) == 1.05
    assert parse_field("geom:2,0.5,1").at(2) == pytest.approx(0.5)
    with pytest.raises(InvalidFieldSpec):
        parse_field("geom:1,2")


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("k = 2\ntau = 3.0\nh = 0.5\ny0 = 1.2\nx1 = 0.6\nn_steps = 4\n")
    assert read_config(str(cfg))["steps"] == 4
    assert main(["iterate", "--config", str(cfg)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 6
    assert main(["iterate", "--config", str(cfg), "--steps", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_config_table_field(tmp_path):
    cfg = tmp_path / "f.cfg"
    cfg.write_text("h.kind = table\nh.table = 0=1,1=1.05\nh.default = 1.05\n")
    spec = read_config(str(cfg))["field"]
    assert parse_field(spec).bulk_constant() == 1.05


def test_sweep_rows_and_inadmissible_cells():
    spec = lab.SweepSpec(2, 3.0, Field.constant(0.5), (0.5, 2.5, 3), (0.5, 1.0, 2), 50)
    text = lab.sweep(spec)
    lines = text.splitlines()
    assert lines[0] == "y0,x1,admissible,horizon,max_abs"
    assert len(lines) == 7
    assert lines[1].startswith("0.5,0.5,1,")
    # y0 = 2.5, x1 = 1.0 violates y0 + x1 < tau
    assert lines[-1] == "2.5,1,0,,"


def test_sweep_parallel_matches_serial():
    spec = lab.SweepSpec(2, 3.0, Field.constant(1.05), (0.2, 1.8, 6), (0.2, 1.2, 5), 120)
    assert lab.sweep(spec, 1) == lab.sweep(spec, 3)


def test_sweep_command(capsys):
    assert main(["sweep", "--tau", "3", "--h", "1.05", "--y0-range", "1.2,1.2,1",
                 "--x1-range", "0.6,0.6,1", "--steps", "50"]) == 0
    row = capsys.readouterr().out.splitlines()[1].split(",")
    p = mc.make_params(2, 3.0, 1.05, 1.2, 0.6)
    t = mc.iterate(p, 50)
    expected = str(t.first_nonpositive) if t.first_nonpositive is not None else ">=50"
    assert row[3] == expected


def test_spectral_command_fig1(capsys):
    assert main(["spectral", "--tau", "3", "--y0", "0.5", "--x1", "1.48589"]) == 0
    out = json.loads(capsys.readouterr().out)
    p1 = out["fixed_points"][1]
    assert p1["type"] == "NonHyperbolic" and p1["regime"] == "ComplexUnitModulus"
    assert p1["rotation_angle"] == pytest.approx(math.pi / 3)
    assert out["fixed_points"][0]["type"] == "Saddle"


def test_invariant_set_outside_condition(capsys):
    assert main(["invariant-set", "--tau", "5.5", "--y0", "0.2", "--x1", "0.6"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["condition_ok"] is False and "violations" not in out


def test_invariant_set_command(capsys):
    assert main(["invariant-set", "--tau", "3", "--y0", "0.5", "--x1", "1.48589",
                 "--grid", "20"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["a"] == pytest.approx(2 / 1.01411)
    assert out["violations"] > 0


def test_boundary_law_command(capsys):
    assert main(["boundary-law", "--theta", "0.5", "--k", "2", "--kind", "s1",
                 "--trunc", "100", "--imax", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["z"]["2"]["z"] == pytest.approx(0.5 ** 6)
    assert out["conditions"]["lin"]["verdict"] == "Diverges"
    assert out["conditions"]["rfi"]["verdict"] == "Converges"
    assert out["normalisable"]["status"] == "Diverges"


def test_measure_command(capsys):
    assert main(["measure", "--theta", "0.5", "--k", "2", "--kind", "s1", "--depth", "1",
                 "--spins", "0,1,1,1", "--q-field", "const:1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["log_measure"] == pytest.approx(3 * math.log(0.125) + 3 * math.log(0.5))


def test_plot_data(tmp_path, capsys):
    p = mc.make_params(2, 3.0, 0.5, 1.2, 0.6)
    path = tmp_path / "t.csv"
    path.write_text(lab.trajectory_csv(mc.iterate(p, 200)))
    assert main(["plot-data", str(path)]) == 0
    first = capsys.readouterr().out
    assert main(["plot-data", str(path)]) == 0
    assert capsys.readouterr().out == first
    data = json.loads(first)
    uv = np.array(data["points"])
    assert uv.min() >= 0 and uv.max() <= 1
    bbox = data["bbox"]
    xs = 1 / (0.5 * 1.2)
    assert bbox["xmin"] <= xs <= bbox["xmax"] and bbox["ymin"] <= xs <= bbox["ymax"]


def test_plot_data_single_point():
    assert lab.plot_data(np.array([[3.0, -1.0]]))["points"] == [[0.5, 0.5]]


def test_plot_data_bad_file(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("not a trajectory\n")
    assert main(["plot-data", str(path)]) == 2


def test_json_is_strict():
    text = lab.dumps({"a": math.inf, "b": float("nan")})
    assert json.loads(text) == {"a": "inf", "b": "nan"}
