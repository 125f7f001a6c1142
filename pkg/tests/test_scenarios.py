import json
import math

import pytest

from starkcomb import ConfigError, InfeasiblePlanError, load_config, run_scenario
from starkcomb.cli import main
from starkcomb.scenarios import SCENARIO_NAMES


def read_csv(path):
    meta, rows = {}, []
    header = None
    for line in path.read_text().splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        elif header is None:
            header = line.split(",")
        else:
            rows.append(dict(zip(header, line.split(","))))
    return meta, header, rows


class TestRunScenario:
    def test_unknown_name(self, config, tmp_path):
        with pytest.raises(ConfigError, match="unknown scenario"):
            run_scenario(config, "mystery", tmp_path)

    def test_plan_outputs(self, config, tmp_path):
        paths = run_scenario(config, "plan", tmp_path)
        names = {p.name for p in paths}
        assert names == {"plan.csv", "field_profile.csv", "plan_manifest.json"}
        meta, header, rows = read_csv(tmp_path / "plan.csv")
        assert meta["config_sha256"] == config.sha256
        assert header == [
            "line_index", "line_GHz", "position_cm", "lo_power_dBm",
            "spacing_to_next_cm",
        ]
        assert len(rows) == 21
        assert float(rows[0]["position_cm"]) == 7.98
        assert float(rows[-1]["position_cm"]) == 2.0
        assert rows[-1]["spacing_to_next_cm"] == ""

        _, profile_header, profile_rows = read_csv(tmp_path / "field_profile.csv")
        assert profile_header == ["x_cm", "field_V_per_cm", "transition_GHz"]
        ghz = [float(r["transition_GHz"]) for r in profile_rows]
        assert all(a > b for a, b in zip(ghz, ghz[1:]))

    def test_manifest_content(self, config, tmp_path):
        run_scenario(config, "sensitivity", tmp_path, seed=17)
        manifest = json.loads((tmp_path / "sensitivity_manifest.json").read_text())
        assert manifest["scenario"] == "sensitivity"
        assert manifest["config_sha256"] == config.sha256
        assert manifest["seed"] == 17
        assert set(manifest["outputs"]) == {"sensitivity.csv"}

    def test_sensitivity_rows(self, config, tmp_path):
        run_scenario(config, "sensitivity", tmp_path)
        _, header, rows = read_csv(tmp_path / "sensitivity.csv")
        assert header == [
            "channel_index", "line_GHz", "E_det_nV_per_cm", "sensitivity_nV_cm_Hz",
        ]
        by_index = {int(r["channel_index"]): r for r in rows}
        assert math.isclose(float(by_index[10]["E_det_nV_per_cm"]), 798.2, rel_tol=1e-9)
        worst = max(float(r["sensitivity_nV_cm_Hz"]) for r in rows)
        assert math.isclose(worst, 326.6, rel_tol=1e-9)

    def test_single_line_response_has_3db_points_at_5_mhz(self, config, tmp_path):
        override = tmp_path / "one_line.yaml"
        override.write_text("comb:\n  line_count: 1\n")
        cfg = load_config(override)
        run_scenario(cfg, "response", tmp_path)
        _, _, rows = read_csv(tmp_path / "response.csv")
        beats = {float(r["signal_GHz"]): float(r["beat_dBm"]) for r in rows}
        peak = beats[8.13]
        # Filter-definition oracle: half power at +/- half_width.
        for edge in (8.125, 8.135):
            assert math.isclose(peak - beats[edge], 10 * math.log10(2.0), abs_tol=0.02)

    def test_eit_metadata_lists_system_parameters(self, config, tmp_path):
        run_scenario(config, "eit", tmp_path)
        meta, header, rows = read_csv(tmp_path / "eit.csv")
        assert header == ["probe_detuning_MHz", "absorption"]
        for key in (
            "probe_rabi_MHz", "coupling_rabi_MHz", "mw_rabi_MHz",
            "decay_e_MHz", "decay_r1_MHz", "decay_r2_MHz", "dephasing_MHz",
        ):
            assert key in meta
        values = [float(r["absorption"]) for r in rows]
        assert all(0.0 <= v <= 1.0 + 1e-6 for v in values)

    def test_infeasible_min_gap(self, tmp_path):
        override = tmp_path / "gap.yaml"
        override.write_text("planner:\n  min_gap_cm: 2.0\n")
        cfg = load_config(override)
        with pytest.raises(InfeasiblePlanError):
            run_scenario(cfg, "plan", tmp_path)

    def test_determinism_byte_identical(self, config, tmp_path):
        first = tmp_path / "a"
        second = tmp_path / "b"
        for name in SCENARIO_NAMES:
            paths_a = run_scenario(config, name, first / name)
            paths_b = run_scenario(config, name, second / name)
            for pa, pb in zip(paths_a, paths_b):
                assert pa.read_bytes() == pb.read_bytes()

    def test_outputs_revalidate_against_model_invariants(self, config, tmp_path):
        run_scenario(config, "plan", tmp_path)
        _, _, rows = read_csv(tmp_path / "plan.csv")
        positions = [float(r["position_cm"]) for r in rows]
        assert all(a > b for a, b in zip(positions, positions[1:]))
        for row, nxt in zip(rows, rows[1:]):
            gap = float(row["position_cm"]) - float(nxt["position_cm"])
            # CSV carries 10 significant figures.
            assert math.isclose(float(row["spacing_to_next_cm"]), gap, abs_tol=1e-8)

        run_scenario(config, "linearity", tmp_path)
        _, _, rows = read_csv(tmp_path / "linearity.csv")
        by_channel = {}
        for r in rows:
            by_channel.setdefault(int(r["channel_index"]), []).append(
                (float(r["field_V_per_cm"]), float(r["beat_dBm"]))
            )
        assert set(by_channel) == set(range(21))
        for points in by_channel.values():
            beats = [b for _, b in points]
            assert all(a <= b for a, b in zip(beats, beats[1:]))

    def test_timestamp_flag_changes_header_only(self, config, tmp_path):
        run_scenario(config, "sensitivity", tmp_path / "plain")
        run_scenario(config, "sensitivity", tmp_path / "stamped", timestamp=True)
        plain = (tmp_path / "plain/sensitivity.csv").read_text()
        stamped = (tmp_path / "stamped/sensitivity.csv").read_text()
        assert plain != stamped
        strip = lambda text: [
            line for line in text.splitlines() if not line.startswith("#")
        ]
        assert strip(plain) == strip(stamped)


class TestCli:
    def test_plan_success(self, tmp_path, capsys):
        assert main(["plan", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "plan.csv" in out
        assert (tmp_path / "plan.csv").exists()

    def test_bad_config_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.yaml"
        bad.write_text("comb:\n  line_count: -3\n")
        assert main(["plan", "--config", str(bad), "--out", str(tmp_path)]) == 2
        assert "configuration error" in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmp_path):
        assert main(["plan", "--config", str(tmp_path / "none.yaml")]) == 2

    def test_infeasible_plan_exits_3(self, tmp_path, capsys):
        cfg = tmp_path / "gap.yaml"
        cfg.write_text("planner:\n  min_gap_cm: 2.0\n")
        assert main(["plan", "--config", str(cfg), "--out", str(tmp_path)]) == 3
        assert "infeasible" in capsys.readouterr().err

    def test_uncovered_line_exits_3(self, tmp_path):
        cfg = tmp_path / "wide.yaml"
        cfg.write_text("comb:\n  line_count: 41\n")  # lines outside the band
        assert main(["plan", "--config", str(cfg), "--out", str(tmp_path)]) == 3

    def test_degenerate_ladder_exits_4(self, tmp_path):
        cfg = tmp_path / "degenerate.yaml"
        cfg.write_text(
            "ladder:\n"
            "  coupling_rabi_mhz: 0.0\n"
            "  mw_rabi_mhz: 0.0\n"
            "  decay_r1_khz: 0.0\n"
            "  decay_r2_khz: 0.0\n"
            "  dephasing_khz: 0.0\n"
        )
        assert main(["eit", "--config", str(cfg), "--out", str(tmp_path)]) == 4

    def test_seed_recorded(self, tmp_path):
        assert main(["plan", "--out", str(tmp_path), "--seed", "99"]) == 0
        manifest = json.loads((tmp_path / "plan_manifest.json").read_text())
        assert manifest["seed"] == 99

    def test_console_script_entry_point(self, tmp_path):
        import subprocess
        import sys

        result = subprocess.run(
            [sys.executable, "-m", "starkcomb.cli", "sensitivity", "--out", str(tmp_path)],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0, result.stderr
        assert (tmp_path / "sensitivity.csv").exists()
