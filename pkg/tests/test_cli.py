"""Tests for the study command: config handling, sweep driver, formats."""

import hashlib
from types import SimpleNamespace

import pytest

from nipg2d.cli import (
    StudyConfig,
    _bool,
    _parse_config_file,
    build_config,
    format_csv,
    format_markdown,
    main,
    parse_csv,
    run_study,
)
from nipg2d.solver import SolverConfig


def no_args(**overrides):
    base = dict(k=None, eps=None, n=None, solver=None, quad_order=None,
                out_csv=None, out_md=None)
    base.update(overrides)
    return SimpleNamespace(**base)


def small_config(**overrides):
    kwargs = dict(k_list=(1,), eps_list=(1e-2,), n_list=(8, 16))
    kwargs.update(overrides)
    return StudyConfig(**kwargs)


def mask_wall_ms(csv_text):
    """Drop the wall-clock column so runs can be compared bytewise."""
    kept = []
    for line in csv_text.splitlines():
        if line.startswith("#") or line.startswith("k,"):
            kept.append(line)
        else:
            kept.append(",".join(line.split(",")[:-1]))
    return "\n".join(kept)


class TestConfigFile:
    def test_parses_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "study.cfg"
        path.write_text(
            "# convergence sweep\n"
            "k = 1, 2\n"
            "\n"
            "eps = 1e-2   # easy regime\n"
            "n = 8, 16\n")
        raw = _parse_config_file(path)
        assert raw == {"k": "1, 2", "eps": "1e-2", "n": "8, 16"}

    def test_malformed_line_reports_position(self, tmp_path):
        path = tmp_path / "study.cfg"
        path.write_text("k = 1\njust words\n")
        with pytest.raises(ValueError, match=":2:"):
            _parse_config_file(path)

    @pytest.mark.parametrize("text,expected", [
        ("true", True), ("Yes", True), ("1", True), ("on", True),
        ("false", False), ("No", False), ("0", False), ("off", False),
    ])
    def test_bool_values(self, text, expected):
        assert _bool(text) is expected

    def test_bool_rejects_garbage(self):
        with pytest.raises(ValueError):
            _bool("maybe")


class TestBuildConfig:
    def test_file_values_fill_the_config(self):
        cfg = build_config(
            {"k": "1,2", "eps": "1e-2, 1e-3", "n": "8,16", "sigma": "3.5",
             "solver": "iterative", "rel_tol": "1e-8",
             "estimate_condition": "yes", "dirichlet": "strong"},
            no_args())
        assert cfg.k_list == (1, 2)
        assert cfg.eps_list == (1e-2, 1e-3)
        assert cfg.n_list == (8, 16)
        assert cfg.sigma == 3.5
        assert cfg.solver.method == "iterative"
        assert cfg.solver.rel_tol == 1e-8
        assert cfg.solver.estimate_condition is True
        assert cfg.dirichlet == "strong"

    def test_command_line_overrides_file(self):
        cfg = build_config({"k": "1", "eps": "1e-2", "n": "8"},
                           no_args(k="3", n="16,32", solver="iterative"))
        assert cfg.k_list == (3,)
        assert cfg.n_list == (16, 32)
        assert cfg.solver.method == "iterative"
        assert cfg.eps_list == (1e-2,)  # untouched file value

    def test_missing_required_keys_are_rejected(self):
        with pytest.raises(ValueError, match="'k'"):
            build_config({"eps": "1e-2"}, no_args())
        with pytest.raises(ValueError, match="'eps'"):
            build_config({"k": "1"}, no_args())

    def test_defaults_when_unset(self):
        cfg = build_config({"k": "1", "eps": "1e-2"}, no_args())
        assert cfg.n_list is None
        assert cfg.sigma is None
        assert cfg.solver.method == "direct"
        assert cfg.solver.estimate_condition is False
        assert cfg.dirichlet == "weak"


class TestValidation:
    def test_sigma_below_half_plus_degree_is_rejected(self):
        with pytest.raises(ValueError, match="sigma"):
            small_config(k_list=(2,), sigma=2.0).validate()

    def test_non_doubling_sequence_is_rejected(self):
        with pytest.raises(ValueError, match="double"):
            small_config(n_list=(8, 24)).validate()

    def test_unknown_problem_is_rejected(self):
        with pytest.raises(ValueError, match="problem"):
            small_config(problem="mystery").validate()

    def test_unknown_dirichlet_mode_is_rejected(self):
        with pytest.raises(ValueError, match="Dirichlet"):
            small_config(dirichlet="penalty").validate()

    def test_empty_lists_are_rejected(self):
        with pytest.raises(ValueError):
            small_config(k_list=()).validate()
        with pytest.raises(ValueError):
            small_config(eps_list=()).validate()


class TestRunStudy:
    def test_single_cell(self):
        report = run_study(small_config(n_list=(8,)))
        assert len(report.rows) == 1
        row = report.rows[0]
        assert (row.k, row.n, row.dofs) == (1, 8, 256)
        assert row.p_in is None
        assert row.converged
        assert not report.degraded

    def test_rate_is_attached_to_the_coarser_row(self):
        report = run_study(small_config())
        assert len(report.rows) == 2
        assert report.rows[0].p_in is not None
        assert report.rows[1].p_in is None
        assert 0.5 < report.rows[0].p_in < 2.5

    def test_config_echo_is_complete(self):
        report = run_study(small_config())
        echo = report.config_echo
        assert echo["problem"] == "boundary_layer"
        assert echo["penalty_schedule"] == "M1:1 M2:N^2 M3:N M4:N"
        assert echo["boundary_edge_rule"] == "same-as-interior"
        assert echo["sigma"] == "k + 3/2"
        assert echo["quad_order"] == "k + 2"
        assert echo["error_quad_order"] == "k + 3"
        assert echo["solver"] == "direct"
        assert echo["estimate_condition"] == "false"

    def test_output_is_deterministic_up_to_wall_clock(self):
        a = mask_wall_ms(format_csv(run_study(small_config())))
        b = mask_wall_ms(format_csv(run_study(small_config())))
        assert (hashlib.sha256(a.encode()).hexdigest()
                == hashlib.sha256(b.encode()).hexdigest())

    def test_condition_estimates_on_request(self):
        cfg = small_config(
            n_list=(8,),
            solver=SolverConfig(estimate_condition=True))
        report = run_study(cfg)
        assert report.rows[0].condition is not None
        csv_text = format_csv(report)
        assert "# condition_estimate k=1 eps=0.01 N=8 = " in csv_text
        md = format_markdown(report)
        assert "Condition estimates (1-norm):" in md


class TestFormats:
    def test_csv_round_trip(self):
        report = run_study(small_config())
        echo, rows = parse_csv(format_csv(report))
        assert echo["problem"] == "boundary_layer"
        assert [r["N"] for r in rows] == [8, 16]
        for parsed, row in zip(rows, report.rows):
            assert parsed["k"] == row.k
            assert parsed["dofs"] == row.dofs
            assert parsed["e_IN"] == pytest.approx(row.e_in, rel=1e-5)
            assert parsed["e_Pi"] == pytest.approx(row.e_pi, rel=1e-5)
            assert parsed["e_L2"] == pytest.approx(row.e_l2, rel=1e-5)
        assert rows[0]["p_IN"] == pytest.approx(report.rows[0].p_in, abs=1e-4)
        assert rows[1]["p_IN"] is None

    def test_csv_header_row(self):
        text = format_csv(run_study(small_config(n_list=(8,))))
        data = [l for l in text.splitlines() if not l.startswith("#")]
        assert data[0] == ("k,eps,N,dofs,e_IN,p_IN,e_Pi,e_L2,"
                           "solver_iters,residual,wall_ms")

    def test_markdown_layout(self):
        md = format_markdown(run_study(small_config()))
        assert "<!-- problem = boundary_layer -->" in md
        assert "## degree k = 1" in md
        assert "| N | e_IN (eps=0.01) | order |" in md
        lines = md.splitlines()
        last_row = [l for l in lines if l.startswith("| 16 ")][0]
        assert last_row.rstrip().endswith("| -- |")  # finest N has no rate
        coarse_row = [l for l in lines if l.startswith("| 8 ")][0]
        assert "| -- |" not in coarse_row


class TestMain:
    def test_stdout_csv_and_exit_zero(self, capsys):
        code = main(["study", "--k", "1", "--eps", "1e-2", "--n", "8"])
        captured = capsys.readouterr()
        assert code == 0
        echo, rows = parse_csv(captured.out)
        assert len(rows) == 1 and rows[0]["N"] == 8

    def test_config_file_with_output_files(self, tmp_path, capsys):
        cfg = tmp_path / "study.cfg"
        cfg.write_text("k = 1\neps = 1e-2\nn = 8, 16\n")
        out_csv = tmp_path / "table.csv"
        out_md = tmp_path / "table.md"
        code = main(["study", "--config", str(cfg),
                     "--out-csv", str(out_csv), "--out-md", str(out_md)])
        assert code == 0
        assert capsys.readouterr().out == ""  # files instead of stdout
        echo, rows = parse_csv(out_csv.read_text())
        assert [r["N"] for r in rows] == [8, 16]
        assert "## degree k = 1" in out_md.read_text()

    def test_config_error_exits_one(self, capsys):
        code = main(["study", "--k", "1"])  # eps missing
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_unreadable_config_exits_one(self, tmp_path, capsys):
        code = main(["study", "--config", str(tmp_path / "nope.cfg")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_degraded_solve_exits_two(self, tmp_path, capsys):
        cfg = tmp_path / "study.cfg"
        cfg.write_text("k = 1\neps = 1e-3\nn = 16\nsolver = iterative\n"
                       "rel_tol = 1e-14\nmax_iters = 1\nrestart = 2\n")
        code = main(["study", "--config", str(cfg),
                     "--out-csv", str(tmp_path / "t.csv")])
        assert code == 2
        assert "missed the tolerance" in capsys.readouterr().err
