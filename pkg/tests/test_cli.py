"""Command-line interface: parsing, dispatch, exports, determinism."""

import json

import pytest

from nsolab.cli import main, parse_complex


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_complex():
    assert parse_complex("0,1") == 1j
    assert parse_complex("-1.5,2e-3") == complex(-1.5, 2e-3)
    import argparse

    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex("1")


def test_spectrum_values(capsys):
    code, out, _ = run(capsys, "spectrum", "--c", "0,1", "--count", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5
    n, re, im = lines[2].split()
    assert n == "2"
    assert float(re) == pytest.approx(5 * 0.7071067811865476)
    assert float(im) == pytest.approx(5 * 0.7071067811865476)


def test_spectrum_check_mode(capsys):
    code, out, _ = run(capsys, "spectrum", "--c", "1,1", "--count", "2",
                       "--check", "--dim", "64")
    assert code == 0
    assert "relgap=" in out


def test_grid_exports_and_exit_code(tmp_path, capsys):
    out_csv = tmp_path / "grid.csv"
    out_json = tmp_path / "grid.json"
    code, out, _ = run(capsys, "grid", "--c", "0,1", "--rect", "0,4,0,4",
                       "--res", "5,5", "--eps", "10,1,0.1", "--dim", "32",
                       "--out", str(out_csv), "--contours", str(out_json))
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "re,im,norm,reliable,relgap"
    assert len(lines) == 26
    payload = json.loads(out_json.read_text())
    assert payload["epsilons"] == [10.0, 1.0, 0.1]


def test_grid_determinism_across_workers(tmp_path, capsys):
    paths = []
    for tag, workers in (("a", "1"), ("b", "3")):
        p = tmp_path / f"grid_{tag}.csv"
        code, _, _ = run(capsys, "grid", "--c", "0.5,0.5", "--rect", "0,3,0,3",
                         "--res", "4,4", "--eps", "1", "--dim", "32",
                         "--workers", workers, "--out", str(p))
        assert code == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_dim_validation_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "grid", "--c", "0,1", "--rect", "0,1,0,1",
                       "--res", "2,2", "--eps", "1", "--dim", "100",
                       "--out", str(tmp_path / "x.csv"))
    assert code == 1
    assert "power of two" in err


def test_numrange_classify(capsys):
    code, out, _ = run(capsys, "numrange", "--c", "0,1", "--z", "1,1")
    assert code == 0 and out.startswith("interior")


def test_numrange_boundary_csv(tmp_path, capsys):
    p = tmp_path / "boundary.csv"
    code, _, _ = run(capsys, "numrange", "--c", "0,1", "--boundary",
                     "0.1,10,9", "--out", str(p))
    assert code == 0
    lines = p.read_text().splitlines()
    assert lines[0] == "re,im" and len(lines) == 10


def test_quasimode_sweep(tmp_path, capsys):
    p = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "quasimode", "--c", "0,1", "--alpha", "1",
                       "--gamma", "1", "--etas", "10,100", "--out", str(p))
    assert code == 0
    assert out.count("lower_bound=") == 2
    assert len(p.read_text().splitlines()) == 3


def test_mehler_report(capsys):
    code, out, _ = run(capsys, "mehler", "--c", "1,0", "--tau", "0.5,0")
    assert code == 0
    assert "valid=True" in out and "hs_closed=" in out


def test_mehler_law(capsys):
    code, out, _ = run(capsys, "mehler", "--c", "0,1", "--tau", "0.5,0",
                       "--tau2", "0.25,0")
    assert code == 0
    assert float(out.split("=")[1]) < 1e-8


def test_mehler_decay_csv(tmp_path, capsys):
    p = tmp_path / "decay.csv"
    code, out, _ = run(capsys, "mehler", "--c", "0,1", "--decay-edge", "lower",
                       "--t-grid", "1,2,3,4,5,6", "--out", str(p))
    assert code == 0 and "fitted_exponent=" in out
    assert p.read_text().startswith("t,norm,fitted_exponent_so_far\n")


def test_projector_table(tmp_path, capsys):
    p = tmp_path / "table.csv"
    code, out, _ = run(capsys, "projector", "--c", "0,1", "--n-max", "1",
                       "--dim", "64", "--out", str(p))
    assert code == 0
    assert out.count("kappa_contour=") == 2
    assert len(p.read_text().splitlines()) == 3


def test_edge_scan_csv(tmp_path, capsys):
    p = tmp_path / "edge.csv"
    code, out, _ = run(capsys, "edge", "--c", "0,1", "--edge", "lower",
                       "--eps", "0.3", "--eta-max", "3", "--eta-step", "1",
                       "--dim", "32", "--out", str(p))
    assert code == 0 and out.startswith("sup_norm=")
    assert len(p.read_text().splitlines()) == 5


def test_conjecture_scan_csv(tmp_path, capsys):
    p = tmp_path / "conj.csv"
    code, out, _ = run(capsys, "conjecture", "--c", "0,1", "--m", "0",
                       "--p", "0.25", "--delta", "0.5", "--dim", "32",
                       "--out", str(p))
    assert code == 0 and out.startswith("b=")
    assert p.read_text().startswith("param,re,im,norm,reliable,relgap,label\n")


def test_dump_matrix(tmp_path, capsys):
    p = tmp_path / "mat.txt"
    code, out, _ = run(capsys, "dump-matrix", "--c", "0,1", "--dim", "16",
                       "--out", str(p))
    assert code == 0
    assert p.read_text().startswith("N=16\n")


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[common]\nc = 0,1\n\n[spectrum]\ncount = 4\n")
    code, out, _ = run(capsys, "--config", str(cfg), "spectrum")
    assert code == 0 and len(out.strip().splitlines()) == 4
    # explicit flag wins over the config value
    code, out, _ = run(capsys, "--config", str(cfg), "spectrum", "--count", "2")
    assert code == 0 and len(out.strip().splitlines()) == 2


def test_missing_config_is_usage_error(capsys):
    code, _, err = run(capsys, "--config", "/nonexistent.ini", "spectrum")
    assert code == 2 and "config file" in err


def test_nso_workers_env_does_not_change_output(tmp_path, capsys, monkeypatch):
    paths = []
    for tag, env in (("one", "1"), ("two", "2")):
        monkeypatch.setenv("NSO_WORKERS", env)
        p = tmp_path / f"env_{tag}.csv"
        code, _, _ = run(capsys, "grid", "--c", "0,1", "--rect", "0,2,0,2",
                         "--res", "3,3", "--eps", "1", "--dim", "32",
                         "--out", str(p))
        assert code == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "2")
    assert code == 0
    assert "[PASS]  2" in out


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2
