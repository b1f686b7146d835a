import json
import math
from pathlib import Path

import numpy as np
import numpy.testing as npt
import pytest

from thermoprobe.errors import NoConvergence, UnknownPreset, ValidationError
from thermoprobe.sensor import SensorParams
from thermoprobe.teleport import CLASSICAL_FIDELITY, InputState
from thermoprobe.thermolab import (
    COLUMNS,
    PRESETS,
    ScenarioSpec,
    SweepResult,
    TGrid,
    Vary,
    export,
    figure_preset,
    run_sweep,
    to_csv,
    to_json,
    to_svg,
)
from thermoprobe.thermolab import cli
from thermoprobe.thermolab.sweep import evaluate_point

GOLDEN = Path(__file__).parent / "golden"
HEADER = "vary_value,T,qfi_direct,hss_direct,qfi_remote,hss_remote,fidelity,p0,p1,p2,p3,skipped_terms"


def small(spec, count=9):
    return spec.replace(t_grid=TGrid(spec.t_grid.t_min, spec.t_grid.t_max, count))


@pytest.fixture(scope="module")
def fig4():
    return run_sweep(figure_preset("fig4"))


def test_preset_fig4():
    spec = figure_preset("fig4")
    assert spec.scenario == "both"
    assert (spec.params.ej1, spec.params.ej2, spec.params.em) == (0.05, 2.0, 1.0)
    assert spec.input == InputState(math.pi / 2, math.pi / 6)
    assert spec.t_grid == TGrid(0.05, 5.0, 200, "linear")


def test_preset_fig5_and_fig2c():
    fig5 = figure_preset("fig5")
    assert (fig5.params.ej1, fig5.params.ej2, fig5.params.em) == (1.0, 0.05, 0.5)
    assert fig5.input == InputState(math.pi / 2, math.pi)
    fig2c = figure_preset("fig2c")
    assert (fig2c.params.ej1, fig2c.params.ej2) == (2.0, 0.8)
    assert fig2c.input == InputState(math.pi / 4, math.pi / 3)
    assert any("pi/4" in note for note in fig2c.notes)


def test_preset_variations():
    expected = {"fig2a": "ej1", "fig2b": "ej2", "fig2c": "em", "fig2d": "em"}
    for name, field in expected.items():
        assert figure_preset(name).vary == Vary(field, (0.5, 1.0, 2.0, 4.0))
    assert set(PRESETS) == {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig4", "fig5"}


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        figure_preset("fig6")


def test_spec_validation():
    params = SensorParams(ej1=1, ej2=0.1, em=1)
    with pytest.raises(ValidationError):
        TGrid(0.0, 1.0, 10)
    with pytest.raises(ValidationError):
        TGrid(0.1, 1.0, 1)
    with pytest.raises(ValidationError):
        TGrid(0.1, 1.0, 10, "cubic")
    with pytest.raises(ValidationError):
        Vary("em", ())
    with pytest.raises(ValidationError):
        Vary("ec1", (1.0,))
    with pytest.raises(ValidationError):
        ScenarioSpec("remote", params, TGrid(0.1, 1, 3))
    with pytest.raises(ValidationError):
        ScenarioSpec("sideways", params, TGrid(0.1, 1, 3))


def test_grid_points():
    npt.assert_allclose(TGrid(1.0, 2.0, 5).points(), [1.0, 1.25, 1.5, 1.75, 2.0])
    npt.assert_allclose(TGrid(0.1, 10.0, 3, "log").points(), [0.1, 1.0, 10.0])


def test_grid_refinement_keeps_existing_rows():
    spec = figure_preset("fig3b")
    coarse = run_sweep(small(spec, 5))
    fine = run_sweep(small(spec, 9))
    for i, row in enumerate(coarse.rows):
        assert fine.rows[2 * i] == row


def test_rows_sorted_and_complete():
    spec = small(figure_preset("fig2a")).replace(vary=Vary("ej1", (4.0, 0.5, 2.0)))
    res = run_sweep(spec)
    keys = [(r.vary_value, r.T) for r in res.rows]
    assert keys == sorted(keys)
    assert res.vary_values() == [0.5, 2.0, 4.0]
    assert all(r.qfi_direct is None and r.qfi_remote is not None for r in res.rows)


def test_row_invariants(fig4):
    for r in fig4.rows:
        assert 0 <= r.fidelity <= 1 + 1e-12
        assert abs(r.p0 + r.p1 + r.p2 + r.p3 - 1) <= 1e-10
        assert r.qfi_remote <= r.qfi_direct * (1 + 1e-9)
        assert r.hss_direct >= 0 and r.hss_remote >= 0


def test_saturated_grid_gives_zero_sensitivity():
    spec = figure_preset("fig4").replace(t_grid=TGrid(1e6, 1e6, 2))
    for r in run_sweep(spec).rows:
        assert max(r.qfi_direct, r.hss_direct, r.qfi_remote, r.hss_remote) < 1e-8


def test_fig5_fidelity_golden():
    golden = json.loads((GOLDEN / "fig5_fidelity.json").read_text())
    res = run_sweep(figure_preset("fig5"))
    p = figure_preset("fig5").params
    for key, row in (("T_min", res.rows[0]), ("T_max", res.rows[-1])):
        t = row.T
        # independent closed form for theta = pi/2, phi = pi
        a1, a2 = p.r1 / (4 * t), p.r2 / (4 * t)
        assert row.fidelity == pytest.approx(math.cosh(a2) / (math.cosh(a1) + math.cosh(a2)), rel=1e-12)
        assert row.fidelity == pytest.approx(golden[key]["fidelity"], rel=1e-12)
        assert t == golden[key]["T"]
    assert res.rows[0].fidelity > CLASSICAL_FIDELITY
    assert res.rows[-1].fidelity < res.rows[0].fidelity


def test_reduced_direct_state():
    spec = small(figure_preset("fig3a"))
    full = run_sweep(spec)
    reduced = run_sweep(spec.replace(reduced=True))
    assert [r.T for r in full.rows] == [r.T for r in reduced.rows]
    assert any(a.qfi_direct != b.qfi_direct for a, b in zip(full.rows, reduced.rows))
    # partial trace cannot add information
    for a, b in zip(full.rows, reduced.rows):
        assert b.qfi_direct <= a.qfi_direct * (1 + 1e-9)


def test_off_symmetric_point_uses_finite_difference():
    spec = small(figure_preset("fig3a")).replace(params=SensorParams(ej1=1, ej2=0.1, em=1, ng1=0.45))
    res = run_sweep(spec)
    assert res.meta["derivative"] == "finite_difference"
    assert all(r.qfi_direct > 0 for r in res.rows)


def test_errors_carry_grid_point(monkeypatch):
    from thermoprobe.thermolab import sweep as sweep_module

    def boom(*args, **kwargs):
        raise NoConvergence("stuck")

    monkeypatch.setattr(sweep_module, "qfi_from_matrices", boom)
    with pytest.raises(NoConvergence) as info:
        run_sweep(small(figure_preset("fig3a"), 3))
    assert info.value.temperature == 0.05
    assert "T=0.05" in str(info.value)


def test_workers_do_not_change_output():
    spec = small(figure_preset("fig2d"), 17)
    assert to_csv(run_sweep(spec, workers=4)) == to_csv(run_sweep(spec))


def test_csv_header_and_rows(fig4):
    text = to_csv(fig4)
    lines = text.splitlines()
    assert lines[0] == HEADER
    assert len(lines) == 201
    first = lines[1].split(",")
    assert len(first) == 12
    assert first[0] == ""  # no vary field
    assert float(first[1]) == fig4.rows[0].T
    assert float(first[2]) == fig4.rows[0].qfi_direct  # shortest repr round-trips exactly


def test_csv_empty_and_single_row():
    assert to_csv(SweepResult(rows=[], meta={})) == HEADER + "\n"
    row = evaluate_point(figure_preset("fig4"), figure_preset("fig4").params, 0.5, 1e-12)
    lines = to_csv(SweepResult(rows=[row], meta={})).splitlines()
    assert len(lines) == 2 and len(lines[1].split(",")) == 12


def test_json_export(fig4, tmp_path):
    path = export(fig4, "json", tmp_path / "out.json")
    payload = json.loads(path.read_text())
    assert payload["meta"]["spec"] == figure_preset("fig4").to_dict()
    assert payload["meta"]["cutoff"] == 1e-12
    assert payload["meta"]["tool"] == "thermoprobe"
    assert len(payload["rows"]) == 200
    assert list(payload["rows"][0]) == list(COLUMNS)
    assert to_json(fig4) == path.read_text()


def test_svg_export():
    res = run_sweep(small(figure_preset("fig2d")))
    svg = to_svg(res)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'class="classical-threshold"' in svg
    # one polyline per vary value in each of the QFI, HSS and fidelity panels
    assert svg.count("<polyline") == 3 * 4
    assert "em=0.5" in svg and ">T</text>" in svg
    direct = to_svg(run_sweep(small(figure_preset("fig3a"))))
    assert "classical-threshold" not in direct


def test_export_errors(fig4, tmp_path):
    with pytest.raises(ValidationError):
        export(fig4, "xlsx", tmp_path / "x")
    with pytest.raises(OSError):
        export(fig4, "csv", tmp_path / "missing" / "dir" / "x.csv")


def test_scenario_json_roundtrip(tmp_path):
    spec = figure_preset("fig2c")
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec.to_dict()))
    assert ScenarioSpec.from_json(path) == spec
    bad = spec.to_dict() | {"colour": "red"}
    with pytest.raises(ValidationError):
        ScenarioSpec.from_dict(bad)


def test_figure_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["figure", "fig4", "--out", str(a)]) == 0
    assert cli.main(["figure", "fig4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_sweep_flags(tmp_path):
    out = tmp_path / "sweep.json"
    argv = [
        "sweep", "--ej1", "1", "--ej2", "0.1", "--em", "1", "--theta", "1.5707963267948966",
        "--phi", "0", "--tmin", "0.1", "--tmax", "1", "--points", "4", "--log",
        "--vary", "em", "--values", "0.5,1", "--out", str(out), "--format", "json",
    ]
    assert cli.main(argv) == 0
    payload = json.loads(out.read_text())
    assert len(payload["rows"]) == 8
    assert payload["meta"]["spec"]["t_grid"]["spacing"] == "log"


def test_cli_spec_file_and_suffix_format(tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(small(figure_preset("fig5"), 3).to_dict()))
    out = tmp_path / "plot.svg"
    assert cli.main(["sweep", "--spec", str(spec_path), "--out", str(out)]) == 0
    assert out.read_text().startswith("<svg")


def test_cli_stdout(capsys):
    assert cli.main(["sweep", "--scenario", "direct", "--ej1", "1", "--ej2", "0.1", "--em", "1",
                     "--points", "3"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == HEADER


def test_cli_validation_exit_codes(tmp_path, capsys):
    assert cli.main(["sweep", "--ej1", "1", "--out", str(tmp_path / "x.csv")]) == 1
    assert cli.main(["sweep", "--ej1", "-1", "--ej2", "0", "--em", "0", "--theta", "0", "--phi", "0"]) == 1
    assert cli.main(["sweep", "--spec", str(tmp_path / "nope.json")]) == 1
    with pytest.raises(SystemExit) as info:
        cli.main(["figure", "fig9"])
    assert info.value.code == 1


def test_cli_numerical_exit_code(monkeypatch, tmp_path):
    def boom(*args, **kwargs):
        raise NoConvergence("stuck")

    monkeypatch.setattr(cli, "run_sweep", boom)
    assert cli.main(["figure", "fig4", "--out", str(tmp_path / "x.csv")]) == 2


def test_cli_cutoff_env(monkeypatch, tmp_path):
    out = tmp_path / "x.json"
    monkeypatch.setenv("THERMOPROBE_CUTOFF", "1e-9")
    assert cli.main(["figure", "fig3a", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["meta"]["cutoff"] == 1e-9
    monkeypatch.setenv("THERMOPROBE_CUTOFF", "banana")
    assert cli.main(["figure", "fig3a", "--out", str(out)]) == 1


def test_cli_module_entry_point():
    import subprocess
    import sys

    done = subprocess.run(
        [sys.executable, "-m", "thermoprobe", "figure", "fig3a"], capture_output=True, text=True
    )
    assert done.returncode == 0
    assert done.stdout.splitlines()[0] == HEADER
