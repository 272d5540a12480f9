import json
import subprocess
import sys

import pytest

from seit import cli, io
from seit.geometry import convex_hull, in_convex_polygon, polygon_area


def run(argv, capsys):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_grid():
    assert cli.parse_grid("0:0.9:0.1")[-1] == 0.9
    assert len(cli.parse_grid("0:0.9:0.1")) == 10
    assert cli.parse_grid("0:1:0.3") == [0.0, 0.3, 0.6, 0.9]
    assert cli.parse_grid("2.5") == [2.5]
    assert cli.parse_grid([1, 2]) == [1.0, 2.0]
    with pytest.raises(cli.UsageError):
        cli.parse_grid("1:0:0.1")
    with pytest.raises(cli.UsageError):
        cli.parse_grid("0:1")


def test_p2p_dmc_bsc_row(capsys):
    code, out, _ = run(["p2p-dmc", "bsc", "--p", "0.1", "--b-grid", "0:0.9:0.1"], capsys)
    assert code == 0
    meta, rows = io.parse_csv(out)
    assert meta["command"] == "p2p-dmc"
    assert meta["schema_version"] == io.SCHEMA_VERSION
    row = next(r for r in rows if r["b"] == 0.7)
    assert row["capacity_solver"] == pytest.approx(0.412295, abs=5e-7)
    assert row["capacity_closed_form"] == pytest.approx(0.412295, abs=5e-7)
    assert row["p_x0"] + row["p_x1"] == pytest.approx(1.0)


def test_p2p_dmc_json_channel(tmp_path, capsys):
    path = tmp_path / "ch.json"
    path.write_text(json.dumps({"p_y_given_x": [[1, 0], [0, 1]]}))
    code, out, _ = run(["p2p-dmc", str(path), "--b-grid", "0.8"], capsys)
    assert code == 0
    _, rows = io.parse_csv(out)
    assert rows[0]["capacity_solver"] == pytest.approx(0.7219280948873623, abs=1e-9)
    assert rows[0]["capacity_closed_form"] is None


def test_mac_region_infeasible_exit_code(capsys):
    code, out, err = run(["mac-region", "--snr", "10,10,10,10", "--b", "50"], capsys)
    assert code == 2
    assert out == ""
    assert "B_max=41" in err
    assert len(err.strip().splitlines()) == 1


def test_norm_violation_exit_code(capsys):
    code, _, err = run(["simulate", "--gains", "0.9,0.9,0.9,0.9", "--powers", "1,1"], capsys)
    assert code == 2
    assert "transmitter" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["mac-region", "--snr", "10,10"],
        ["mac-region", "--b", "3"],
        ["p2p-dmc", "bsc"],
        ["ne-region", "--snr", "1,1,1,1", "--decoder", "nope"],
        ["p2p-gaussian", "--snr1", "1"],
        ["mac-region", "--snr", "1,1,1,1", "--b", "-1"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1
    assert err.startswith("error:")


def test_ne_region_symmetric_rows(capsys):
    code, out, _ = run(["ne-region", "--snr", "10,10,10,10", "--b", "36", "--decoder", "all", "--samples", "200"], capsys)
    assert code == 0
    _, rows = io.parse_csv(out)
    sym = [r for r in rows if r["kind"] == "point" and r["decoder"] == "sud" and r["beta1"] == 0.25]
    assert sym and sym[0]["r1"] == pytest.approx(0.388804, abs=5e-7)
    assert sym[0]["r2"] == pytest.approx(0.388804, abs=5e-7)
    assert any(r["kind"] == "hull" for r in rows)


def test_mac_region_and_gaussian(capsys):
    code, out, _ = run(["mac-region", "--snr", "10,10,10,10", "--b", "36", "--grid-steps", "5"], capsys)
    assert code == 0
    meta, rows = io.parse_csv(out)
    assert meta["b_max"] == 41.0
    assert meta["sum_rate_max"] == pytest.approx(1.292481250360578, abs=1e-9)
    assert {r["kind"] for r in rows} == {"corner", "hull"}
    code, out, _ = run(["p2p-gaussian", "--snr1", "3", "--snr2", "1", "--b-grid", "0:2:0.5"], capsys)
    _, rows = io.parse_csv(out)
    assert [r["capacity"] for r in rows] == [1.0] * 5


def test_snr_db(capsys):
    code, out, _ = run(["mac-region", "--snr", "10,10,10,10", "--snr-db", "--b", "41", "--grid-steps", "3"], capsys)
    assert code == 0
    assert io.parse_csv(out)[0]["b_max"] == 41.0


def test_best_response(capsys):
    code, out, _ = run(["best-response", "--snr", "10,10,10,10", "--b", "10", "--init", "0.1,0.1"], capsys)
    assert code == 0
    meta, rows = io.parse_csv(out)
    assert meta["converged"] is True and meta["certified"] is True
    assert (rows[-1]["beta1"], rows[-1]["beta2"]) == (1.0, 1.0)


def test_simulate_json_and_rerun(tmp_path, capsys):
    out = tmp_path / "sim.json"
    argv = ["simulate", "--snr", "10,10,10,10", "--beta", "0.25,0.25", "--n", "2000", "--trials", "4",
            "--seed", "9", "--b-target", "36", "--b-grid", "30:40:5", "--out", str(out)]
    assert cli.run(argv) == 0
    data = io.read_json(out)
    assert data["report"]["analytic_energy_rate"] == 36.0
    assert len(data["report"]["empirical_energy_rate"]) == 4
    assert [p["b"] for p in data["outage_curve"]] == [30.0, 35.0, 40.0]
    first = out.read_bytes()
    again = tmp_path / "again.json"
    assert cli.run(["simulate", "--config", str(io.manifest_path(out)), "--out", str(again)]) == 0
    second = json.loads(again.read_text())
    assert second["report"] == data["report"]
    assert second["manifest"]["manifest_sha256"] == data["manifest"]["manifest_sha256"]
    assert cli.run(argv) == 0
    assert out.read_bytes() == first


def test_rerun_from_manifest_is_bit_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.run(["ne-region", "--snr", "10,10,10,10", "--b", "30", "--samples", "21", "--out", str(a)]) == 0
    manifest = io.read_json(io.manifest_path(a))
    assert manifest["command"] == "ne-region"
    assert manifest["outputs"] == [str(a)]
    assert manifest["config"]["samples"] == 21
    assert cli.run(["ne-region", "--config", str(io.manifest_path(a)), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"snr": "10,10,10,10", "b": 36, "grid_steps": 3}))
    code, out, _ = run(["mac-region", "--config", str(cfg), "--b", "10"], capsys)
    assert code == 0
    assert io.parse_csv(out)[0]["b"] == 10.0
    cfg.write_text(json.dumps({"nonsense": 1}))
    code, _, _ = run(["mac-region", "--config", str(cfg)], capsys)
    assert code == 1


def test_csv_round_trip():
    manifest = io.build_manifest("x", {"a": 1})
    text = io.format_csv(manifest, ["a", "b", "c"], [{"a": 1.5, "b": True, "c": None}, {"a": float("inf"), "b": "s"}], {"k": 2})
    meta, rows = io.parse_csv(text)
    assert meta["manifest_sha256"] == manifest["manifest_sha256"]
    assert meta["k"] == 2
    assert rows == [{"a": 1.5, "b": True, "c": None}, {"a": float("inf"), "b": "s", "c": None}]


def test_manifest_hash_ignores_outputs():
    a = io.build_manifest("x", {"a": 1}, 3, ["p"])
    b = io.build_manifest("x", {"a": 1}, 3, ["q"])
    c = io.build_manifest("x", {"a": 2}, 3, ["p"])
    assert a["manifest_sha256"] == b["manifest_sha256"] != c["manifest_sha256"]


def test_atomic_write_leaves_no_temp(tmp_path):
    target = tmp_path / "sub" / "f.txt"
    io.atomic_write_text(target, "hello")
    io.atomic_write_text(target, "again")
    assert target.read_text() == "again"
    assert [p.name for p in target.parent.iterdir()] == ["f.txt"]


def test_check_command(capsys):
    code, out, _ = run(["check"], capsys)
    lines = out.strip().splitlines()
    assert len(lines) == 6
    assert all(line.startswith(("PASS", "FAIL")) for line in lines)
    assert code == (0 if all(line.startswith("PASS") for line in lines) else 1)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "seit", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "seit" in proc.stdout


def test_geometry():
    hull = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5), (1, 0)])
    assert hull == [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert polygon_area(hull) == pytest.approx(1.0)
    assert in_convex_polygon((0.5, 0.5), hull)
    assert not in_convex_polygon((1.5, 0.5), hull)
    assert convex_hull([(1, 1), (1, 1)]) == [(1, 1)]
    assert convex_hull([(0, 0), (1, 1), (2, 2)]) == [(0, 0), (2, 2)]
    assert in_convex_polygon((1, 1), [(0, 0), (2, 2)])
