"""Command-line interface: CSV schema, determinism, exit codes, SVG output."""

import numpy as np
import pytest

from wg_hp.cli import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    EXIT_SYNTAX,
    EXIT_USAGE,
    EXIT_VALIDATION,
    main,
    parse_eps_grid,
    parse_p_range,
)

CSV_HEADER = "regime,eps1,eps2,p,N,dof,err_rel_percent,err_abs,ref_degree,wall_ms"


def test_parse_p_range():
    assert parse_p_range("2..5") == [2, 3, 4, 5]
    assert parse_p_range("7") == [7]
    with pytest.raises(Exception):
        parse_p_range("5..2")


def test_parse_eps_grid():
    assert parse_eps_grid("1e-5:1e-2,1e-8:1e-4") == [(1e-5, 1e-2), (1e-8, 1e-4)]
    with pytest.raises(Exception):
        parse_eps_grid("1e-5")


def test_solve_writes_samples_and_nodes(tmp_path):
    out = tmp_path / "sol.csv"
    code = main([
        "solve", "--eps1", "1e-5", "--eps2", "1e-2", "--p", "4", "--kappa", "1",
        "--b", "cos(x)", "--r", "1+x", "--f", "exp(x)", "--out", str(out),
    ])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "kind,x,value"
    interior = [l for l in lines if l.startswith("interior,")]
    nodes = [l for l in lines if l.startswith("node,")]
    assert len(interior) == 200 * 3  # 200 samples per element, 3 elements
    assert len(nodes) == 4
    # boundary node values are exactly zero
    first = nodes[0].split(",")
    last = nodes[-1].split(",")
    assert float(first[1]) == 0.0 and float(first[2]) == 0.0
    assert float(last[1]) == 1.0 and float(last[2]) == 0.0


def test_solve_zero_load(tmp_path):
    out = tmp_path / "zero.csv"
    assert main(["solve", "--f", "0", "--p", "2", "--out", str(out)]) == EXIT_OK
    vals = [float(l.split(",")[2]) for l in out.read_text().splitlines()[1:]]
    assert max(abs(v) for v in vals) <= 1e-12


def test_solve_svg_deterministic(tmp_path):
    svg1, svg2 = tmp_path / "a.svg", tmp_path / "b.svg"
    for svg in (svg1, svg2):
        code = main(["solve", "--p", "3", "--out", str(tmp_path / "s.csv"), "--svg", str(svg)])
        assert code == EXIT_OK
    text = svg1.read_text()
    assert text.startswith("<svg")
    assert text == svg2.read_text()


def test_syntax_error_exit_code(capsys):
    assert main(["solve", "--f", "exp("]) == EXIT_SYNTAX
    assert "offset" in capsys.readouterr().err


def test_validation_error_exit_code(capsys):
    assert main(["solve", "--b", "-1"]) == EXIT_VALIDATION
    assert "assumption" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    assert main(["convergence", "--eps-grid", "1e-5", "--out", "/dev/null"]) == EXIT_USAGE


def test_convergence_csv_schema_and_determinism(tmp_path):
    out1, out2 = tmp_path / "c1.csv", tmp_path / "c2.csv"
    argv = ["convergence", "--eps-grid", "1e-5:1e-2,1e-4:1e-4", "--p-range", "1..3"]
    assert main(argv + ["--out", str(out1)]) == EXIT_OK
    assert main(argv + ["--out", str(out2)]) == EXIT_OK
    text = out1.read_text()
    assert text == out2.read_text()  # byte-identical rerun
    assert "\r" not in text
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 6  # 2 eps pairs x 3 degrees
    for row in rows:
        assert len(row) == 10
        assert row[9] == "0"  # wall_ms pinned for determinism
        assert int(row[8]) == 2 * int(row[3])


def test_convergence_slope_negative(tmp_path):
    out = tmp_path / "model.csv"
    assert main([
        "convergence", "--eps1", "1e-5", "--eps2", "1e-2", "--p-range", "1..6",
        "--out", str(out),
    ]) == EXIT_OK
    rows = [l.split(",") for l in out.read_text().splitlines()[1:]]
    ps = np.array([int(r[3]) for r in rows], dtype=float)
    errs = np.array([float(r[6]) for r in rows])
    slope = np.polyfit(ps, np.log10(errs), 1)[0]
    assert slope < 0


def test_convergence_svg(tmp_path):
    svg = tmp_path / "c.svg"
    assert main([
        "convergence", "--eps1", "1e-4", "--eps2", "1e-4", "--p-range", "1..3",
        "--out", str(tmp_path / "c.csv"), "--svg", str(svg),
    ]) == EXIT_OK
    assert svg.read_text().startswith("<svg")


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("eps1=1e-4\neps2=1e-4\np-range=1..2\n# a comment\n")
    out = tmp_path / "cfg.csv"
    # flag overrides the config's eps2
    assert main([
        "convergence", "--config", str(cfg), "--eps2", "1e-3", "--out", str(out),
    ]) == EXIT_OK
    rows = [l.split(",") for l in out.read_text().splitlines()[1:]]
    assert len(rows) == 2
    assert all(float(r[2]) == 1e-3 for r in rows)


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("this is not a key value line\n")
    assert main(["solve", "--config", str(cfg)]) == EXIT_USAGE


def test_check_command(capsys):
    assert main(["check"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("[pass]") == 5


def test_check_command_zero_penalty_fails(capsys):
    assert main(["check", "--sigma", "0"]) == EXIT_CHECK_FAILED
    assert "[FAIL]" in capsys.readouterr().out
