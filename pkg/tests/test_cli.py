"""Command-line surface: parsing, exit codes, output formats, determinism."""

import json
import math

import numpy as np
import pytest

from pairvis.cli import ConfigError, main, parse_angle, parse_grid_shape

PI = math.pi


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsing:
    @pytest.mark.parametrize("token,expected", [
        ("0", 0.0),
        ("pi/8", PI / 8),
        ("pi/4", PI / 4),
        ("3pi/8", 3 * PI / 8),
        ("pi/2", PI / 2),
        ("3pi/4", 3 * PI / 4),
        ("0.3", 0.3),
        ("pi", PI),
        ("2pi/7", 2 * PI / 7),
    ])
    def test_angle_tokens(self, token, expected):
        assert parse_angle(token) == pytest.approx(expected, rel=1e-16)

    @pytest.mark.parametrize("bad", ["pie", "pi/0", "1..2", ""])
    def test_bad_angles_rejected(self, bad):
        with pytest.raises(ConfigError):
            parse_angle(bad)

    def test_grid_shape(self):
        assert parse_grid_shape("64x128") == (64, 128)

    @pytest.mark.parametrize("bad", ["64", "1x8", "0x0", "8x", "axb"])
    def test_bad_grid_shapes_rejected(self, bad):
        with pytest.raises(ConfigError):
            parse_grid_shape(bad)


class TestExitCodes:
    def test_missing_xi_is_config_error(self, capsys):
        code, _, err = run(["report", "--a", "4"], capsys)
        assert code == 2
        assert "xi" in err

    def test_invalid_params_are_config_errors(self, capsys):
        code, _, _ = run(["report", "--a", "-3", "--xi", "0.3"], capsys)
        assert code == 2

    def test_single_point_grid_is_config_error(self, capsys):
        code, _, _ = run(["grid", "--xi", "0.3", "--grid", "1x1"], capsys)
        assert code == 2

    def test_unknown_figure_is_config_error(self, capsys):
        code, _, _ = run(["grid", "--xi", "0.3", "--figure", "fig9"], capsys)
        assert code == 2

    def test_corrected_grid_requires_kk_basis(self, capsys):
        code, _, _ = run(["grid", "--xi", "0.3", "--basis", "xx", "--corrected", "--grid", "8x8"], capsys)
        assert code == 2

    def test_sweep_count_below_two_is_config_error(self, capsys):
        code, _, _ = run(["sweep", "--xi", "0.3", "--sweep-count", "1"], capsys)
        assert code == 2

    def test_negative_quad_tolerance_is_config_error(self, capsys):
        code, _, _ = run(["validate", "--xi", "0.3", "--tol-quad", "-1"], capsys)
        assert code == 2

    def test_unknown_flag_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["report", "--xi", "0.3", "--frobnicate"])
        assert exc.value.code == 2


class TestGridCommand:
    def test_csv_grid_to_stdout(self, capsys):
        code, out, _ = run(["grid", "--a", "4", "--xi", "0.3", "--grid", "8x8"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "u,v,value"
        assert len(lines) == 1 + 64

    def test_json_grid_structure(self, capsys):
        code, out, _ = run(
            ["grid", "--a", "4", "--xi", "0.3", "--grid", "6x5", "--basis", "kx", "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["basis"] == "kx"
        assert payload["grid"]["n_u"] == 6 and payload["grid"]["n_v"] == 5

    def test_figure_preset_fixes_geometry(self, capsys):
        code, out, _ = run(
            ["grid", "--figure", "fig2", "--xi", "pi/4", "--grid", "6x6", "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["params"]["a"] == 30.0
        assert payload["params"]["h1"] == 1.0 and payload["params"]["h2"] == 2.0
        assert payload["basis"] == "kk"

    def test_fig5_is_position_basis(self, capsys):
        code, out, _ = run(
            ["grid", "--figure", "fig5", "--xi", "0", "--grid", "6x6", "--format", "json"],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["basis"] == "xx"

    def test_corrected_grid_on_preset(self, capsys):
        code, out, _ = run(
            ["grid", "--figure", "fig3", "--xi", "0.3", "--grid", "8x8"], capsys
        )
        assert code == 0
        assert out.startswith("u,v,value")

    def test_writes_file(self, tmp_path, capsys):
        target = tmp_path / "grid.csv"
        code, out, _ = run(
            ["grid", "--a", "4", "--xi", "0.3", "--grid", "8x8", "--out", str(target)], capsys
        )
        assert code == 0 and out == ""
        assert target.read_text().startswith("u,v,value")


class TestReportCommand:
    def test_json_sections(self, capsys):
        code, out, _ = run(
            ["report", "--a", "30", "--h1", "1", "--h2", "2", "--xi", "0.3", "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert set(payload) == {"visibility", "corrected", "correlation"}
        vis = payload["visibility"]
        assert 1.0 - vis["V"] ** 2 - vis["D"] ** 2 == pytest.approx(vis["epsilon"], abs=1e-15)

    def test_separable_angle_trivial_values(self, capsys):
        code, out, _ = run(["report", "--a", "6", "--xi", "0", "--format", "json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["visibility"]["V"] == pytest.approx(1.0, abs=1e-15)
        assert payload["visibility"]["D"] == pytest.approx(0.0, abs=1e-15)
        # for equal slits the three-envelope contrast keeps an e^{-2a}-scale
        # residue at separable angles (the indirect method's artifact)
        assert payload["corrected"]["F"] == pytest.approx(0.0, abs=1e-4)
        assert payload["correlation"]["R"] == pytest.approx(0.0, abs=1e-15)
        assert payload["visibility"]["epsilon"] == pytest.approx(0.0, abs=1e-15)

    def test_regime_warning_surfaces(self, capsys):
        code, out, _ = run(["report", "--a", "1", "--xi", "0.3", "--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["visibility"]["regime_warning"] is True

    def test_csv_format_has_section_rows(self, capsys):
        code, out, _ = run(["report", "--a", "4", "--xi", "0.3", "--format", "csv"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "section,key,value"
        sections = {row.split(",")[0] for row in lines[1:]}
        assert sections == {"visibility", "corrected", "correlation"}


class TestSweepCommand:
    def test_columns_and_shape(self, capsys):
        code, out, _ = run(
            ["sweep", "--xi", "0.3", "--sweep-start", "2", "--sweep-stop", "4", "--sweep-count", "5"],
            capsys,
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "a,V2_plus_D2,V2_plus_F2,V2_plus_R2,bound"
        assert len(lines) == 6
        first = [float(x) for x in lines[1].split(",")]
        assert first[0] == 2.0

    def test_direct_sum_within_bound_and_corrected_below_one(self, capsys):
        code, out, _ = run(["sweep", "--figure", "fig4", "--xi", "0.3", "--sweep-count", "13"], capsys)
        assert code == 0
        rows = np.array([[float(x) for x in row.split(",")] for row in out.strip().split("\n")[1:]])
        a, v2d2, v2f2, _, bound = rows.T
        assert np.all(np.abs(v2d2 - 1.0) <= bound)
        assert np.all(np.abs(v2d2 - 1.0) <= 2.0 * np.exp(-a))
        assert np.all(v2f2 < 1.0)

    def test_indirect_correlation_converges_faster(self, capsys):
        code, out, _ = run(["sweep", "--figure", "fig7", "--xi", "0.3", "--sweep-count", "13"], capsys)
        assert code == 0
        rows = np.array([[float(x) for x in row.split(",")] for row in out.strip().split("\n")[1:]])
        _, v2d2, _, v2r2, _ = rows.T
        mask = (np.abs(v2d2 - 1.0) > 1e-10) & (np.abs(v2r2 - 1.0) > 1e-10)
        assert np.all(np.abs(v2r2 - 1.0)[mask] < np.abs(v2d2 - 1.0)[mask])

    def test_values_round_trip_through_17_digits(self, capsys):
        code, out, _ = run(["sweep", "--xi", "0.3", "--sweep-count", "3"], capsys)
        assert code == 0
        row = out.strip().split("\n")[1].split(",")
        assert float(row[0]) == 2.0
        # 17 significant digits round-trip float64 exactly
        for cell in row:
            assert f"{float(cell):.17g}" == cell


class TestDeterminism:
    def test_grid_byte_identical_across_thread_hints(self, capsys):
        argv = ["grid", "--a", "6", "--h2", "2", "--xi", "0.3", "--grid", "32x32"]
        _, out1, _ = run(argv + ["--threads", "1"], capsys)
        _, out4, _ = run(argv + ["--threads", "4"], capsys)
        assert out1 == out4

    def test_sweep_byte_identical_across_thread_hints(self, capsys):
        argv = ["sweep", "--xi", "pi/8", "--sweep-count", "7"]
        _, out1, _ = run(argv + ["--threads", "1"], capsys)
        _, out4, _ = run(argv + ["--threads", "4"], capsys)
        assert out1 == out4


class TestValidateCommand:
    def test_quick_suite_passes(self, capsys):
        code, out, _ = run(["validate", "--quick", "--xi", "0.3"], capsys)
        assert code == 0
        lines = [row for row in out.strip().split("\n") if row]
        assert lines and all(row.startswith("PASS") for row in lines)

    def test_injected_fault_fails_nonzero(self, capsys):
        code, out, _ = run(["validate", "--quick", "--xi", "0.3", "--tol-quad", "0"], capsys)
        assert code == 1
        assert any(row.startswith("FAIL") for row in out.strip().split("\n"))
