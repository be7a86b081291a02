"""End-to-end pipeline, sweeps, report rendering and the CLI.

The symmetric 20 MHz reference spec must flow through every stage and
land on the published design values; reports must be deterministic,
carry units on every number and end in a machine-readable footer; the
CLI must honor its exit-code contract.
"""

import json
import math
import subprocess
import sys

import pytest

from wptkit import imn, pipeline, tissue
from wptkit.coil import PortPair
from wptkit.errors import InfeasibleDesignError
from wptkit.pipeline import (
    DesignSpec,
    frequency_grid,
    load_design_spec,
    run_design,
    si,
    spec_from_dict,
    sweep_csv_text,
    sweep_link,
    sweep_table,
)
from wptkit.touchstone import read_touchstone, record_from_matrices, write_touchstone

SYMMETRIC = {
    "f0_hz": 20e6,
    "ports": {"zp1_ohm": 50.0, "zp2_ohm": 50.0},
    "k": 0.1,
    "tx": {"shape": "square", "max_area_m2": 3.24e-4},
    "rx": {"shape": "square", "max_area_m2": 3.24e-4},
    "sar": {"p_tx_max_w": 0.0846},
}

ASYMMETRIC = {
    "f0_hz": 40e6,
    "k": 0.2,
    "l1_pinned_h": 525.7e-9,
    "tx": {"shape": "square", "max_area_m2": 9e-4},
    "rx": {"shape": "square", "max_area_m2": 25e-6},
    "tissue": {"enabled": False},
}


@pytest.fixture(scope="module")
def symmetric_report():
    return run_design(spec_from_dict(SYMMETRIC))


@pytest.fixture(scope="module")
def asymmetric_report():
    return run_design(spec_from_dict(ASYMMETRIC))


class TestSpecParsing:
    def test_defaults(self):
        spec = spec_from_dict({"f0_hz": 10e6})
        assert spec.ports == PortPair(50, 50)
        assert spec.k == 0.1
        assert spec.tissue.enabled

    def test_missing_frequency_rejected(self):
        with pytest.raises(ValueError):
            spec_from_dict({})

    def test_bad_shape_rejected(self):
        with pytest.raises(ValueError, match="shape"):
            spec_from_dict({"f0_hz": 1e7, "tx": {"shape": "pentagram"}})

    def test_estimate_requires_distance(self):
        with pytest.raises(ValueError):
            spec_from_dict({"f0_hz": 1e7, "k": "estimate"})

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(SYMMETRIC))
        spec = load_design_spec(path)
        assert spec.f0 == 20e6
        assert spec.sar_p_tx_max == pytest.approx(0.0846)


class TestSymmetricDesign:
    def test_optimal_inductance(self, symmetric_report):
        assert abs(symmetric_report.l_opt - 400.4e-9) / 400.4e-9 < 0.02
        assert symmetric_report.l1_target == symmetric_report.l2_target

    def test_feasible_coils(self, symmetric_report):
        for stage in (symmetric_report.tx_stage, symmetric_report.rx_stage):
            assert abs(stage.inductance - symmetric_report.l1_target) / symmetric_report.l1_target <= 0.01
            assert stage.geometry.area <= 3.24e-4 * (1 + 1e-9)

    def test_feasible_imn(self, symmetric_report):
        assert symmetric_report.imn_synthesis.solutions
        best = symmetric_report.best_imn()
        assert best.s11_db <= -40 and best.s22_db <= -40

    def test_pte_consistency(self, symmetric_report):
        p = symmetric_report.pte_report
        assert p.gamma == 1.0
        assert p.pte == pytest.approx(p.pte_max, rel=1e-6)
        assert 0.0 < p.pte < 1.0

    def test_sar_budget(self, symmetric_report):
        assert symmetric_report.sar.pdl_max == pytest.approx(
            0.0846 * symmetric_report.pte_report.pte, rel=1e-12)

    def test_effective_params_single_source(self, symmetric_report):
        # The matching stage consumed the same tissue-modified network
        # the re-extracted values describe.
        ex = symmetric_report.extraction
        assert ex.valid
        assert ex.r2 > symmetric_report.coils.r2  # embedded side got lossier


class TestAsymmetricDesign:
    def test_pinned_split(self, asymmetric_report):
        assert asymmetric_report.l1_target == pytest.approx(525.7e-9)
        assert asymmetric_report.l2_target == pytest.approx(80e-9, rel=2e-3)

    def test_rx_fits_small_implant(self, asymmetric_report):
        assert asymmetric_report.rx_stage.geometry.area <= 25e-6 * (1 + 1e-9)
        assert abs(asymmetric_report.rx_stage.inductance - asymmetric_report.l2_target) \
            / asymmetric_report.l2_target <= 0.01


class TestInfeasiblePaths:
    def test_area_cap_halts_at_synthesis(self):
        bad = dict(SYMMETRIC, rx={"shape": "square", "max_area_m2": (0.5e-3) ** 2})
        with pytest.raises(InfeasibleDesignError) as err:
            run_design(spec_from_dict(bad))
        assert "rx coil synthesis" in str(err.value)

    def test_harvester_halts_when_unreachable(self):
        bad = dict(SYMMETRIC)
        bad["harvester"] = {"v_rx_v": 0.05, "target_v_out_v": 100.0,
                            "n_min": 1, "n_max": 5, "q_values": [1.0]}
        with pytest.raises(InfeasibleDesignError) as err:
            run_design(spec_from_dict(bad))
        assert err.value.stage == "harvester sizing"


class TestReport:
    def test_deterministic_text(self):
        a = run_design(spec_from_dict(SYMMETRIC)).text()
        b = run_design(spec_from_dict(SYMMETRIC)).text()
        assert a == b

    def test_numbers_carry_units(self, symmetric_report):
        text = symmetric_report.text()
        body = text.split("[footer]")[0]
        assert "nH" in body and "MHz" in body and "ohm" in body
        assert "mm^2" in body and "pF" in body
        # dB-annotated and percentage lines included
        assert "dB" in body and "%" in body

    def test_footer_is_key_value(self, symmetric_report):
        footer = symmetric_report.text().split("[footer]\n")[1]
        for line in footer.strip().splitlines():
            key, _, value = line.partition("=")
            assert key and value

    def test_si_formatting(self):
        assert si(403.89e-9, "H") == "403.9 nH"
        assert si(20e6, "Hz") == "20 MHz"
        assert si(0.0, "V") == "0 V"
        assert si(52.7e-12, "F") == "52.7 pF"


class TestSweep:
    def test_bare_link_peaks_near_f_opt(self):
        # Air-only model: the swept |S21| peak must land on the coil
        # pair's analytic peak frequency.
        spec = spec_from_dict(dict(SYMMETRIC, tissue={"enabled": False}))
        report = run_design(spec)
        freqs = frequency_grid(2e6, 200e6, 501, "log")
        rows = sweep_link(report.link, freqs, with_imn=False)
        best = max(rows, key=lambda r: r.s21_db)
        assert abs(math.log(best.f / report.f_opt)) < math.log(200e6 / 2e6) / 100

    def test_matched_link_reflection_minimum_at_f0(self, symmetric_report):
        freqs = frequency_grid(2e6, 200e6, 501, "log")
        rows = sweep_link(symmetric_report.link, freqs)
        best = min(rows, key=lambda r: r.s11_db)
        assert abs(math.log(best.f / 20e6)) < math.log(200e6 / 2e6) / 100

    def test_csv_shape(self, symmetric_report):
        rows = sweep_link(symmetric_report.link, frequency_grid(1e7, 4e7, 11, "linear"))
        text = sweep_csv_text(rows)
        lines = text.strip().splitlines()
        assert lines[0] == "f_hz,s11_db,s21_db,s22_db,pte_pct,pte_max_pct"
        assert len(lines) == 12
        assert "," in lines[1] and "." in lines[1]

    def test_imported_sweep_equals_rows(self, tmp_path, symmetric_report):
        freqs = [10e6, 20e6, 30e6]
        mats = [symmetric_report.link.s_at(f) for f in freqs]
        record = record_from_matrices(freqs, mats)
        path = tmp_path / "meas.s2p"
        write_touchstone(record, path)
        table = tissue.import_override(read_touchstone(path))
        rows = sweep_table(table)
        assert [r.f for r in rows] == freqs
        direct = [20 * math.log10(abs(m.m21)) for m in mats]
        for row, want in zip(rows, direct):
            assert row.s21_db == pytest.approx(want, abs=1e-9)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            frequency_grid(1e6, 1e5, 10, "log")
        with pytest.raises(ValueError):
            frequency_grid(1e6, 1e7, 1, "log")
        with pytest.raises(ValueError):
            frequency_grid(1e6, 1e7, 10, "cubic")


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "wptkit.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


class TestCli:
    def test_design_command(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps(SYMMETRIC))
        out = tmp_path / "report.txt"
        proc = run_cli("design", str(spec), "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        text = out.read_text()
        assert "[footer]" in text and "l_opt_h=" in text

    def test_sweep_command(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps(SYMMETRIC))
        out = tmp_path / "sweep.csv"
        proc = run_cli("sweep", "--spec", str(spec), "--points", "11",
                       "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 12

    def test_validation_exit_code(self, tmp_path):
        spec = tmp_path / "bad.json"
        spec.write_text(json.dumps({"f0_hz": -1}))
        assert run_cli("design", str(spec)).returncode == 2

    def test_io_exit_code(self, tmp_path):
        assert run_cli("design", str(tmp_path / "nope.json")).returncode == 4

    def test_infeasible_exit_code(self, tmp_path):
        spec = tmp_path / "tiny.json"
        bad = dict(SYMMETRIC, rx={"shape": "square", "max_area_m2": 2.5e-7})
        spec.write_text(json.dumps(bad))
        assert run_cli("design", str(spec)).returncode == 3

    def test_s2p_convert(self, tmp_path):
        src = tmp_path / "in.s2p"
        src.write_text("# MHZ S MA R 50\n1 0.5 0 1 0 1 0 0.5 0\n2 0.5 0 1 0 1 0 0.5 0\n")
        dst = tmp_path / "out.s2p"
        assert run_cli("s2p", "convert", str(src), str(dst)).returncode == 0
        assert dst.read_text().startswith("# HZ S RI R 50")

    def test_seedless_flag_accepted(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps(SYMMETRIC))
        proc = run_cli("--seedless", "design", str(spec))
        assert proc.returncode == 0

    def test_coil_synth_command(self):
        proc = run_cli("coil", "synth", "--target-l", "80e-9",
                       "--max-area", "25e-6", "--top", "2")
        assert proc.returncode == 0, proc.stderr
        assert "L=" in proc.stdout and "area=" in proc.stdout

    def test_harvester_explore_command(self):
        proc = run_cli("harvester", "explore", "--v-rx", "0.05",
                       "--target-v", "1.0", "--n-max", "40")
        assert proc.returncode == 0, proc.stderr
        assert "# chosen:" in proc.stdout

    def test_tissue_table_command(self):
        proc = run_cli("tissue", "table", "--f", "2e7")
        assert proc.returncode == 0
        assert "muscle" in proc.stdout and "sigma_eff" in proc.stdout


class TestKEstimation:
    def test_estimated_coupling_flows_through(self):
        spec_dict = {
            "f0_hz": 20e6,
            "k": "estimate",
            "distance_m": 15e-3,
            "tx": {"shape": "square", "max_area_m2": 3.24e-4},
            "rx": {"shape": "square", "max_area_m2": 3.24e-4},
            "tissue": {"enabled": False},
        }
        report = run_design(spec_from_dict(spec_dict))
        assert report.k_source == "estimated"
        assert 0.0 < report.coils.k < 1.0
        assert report.imn_synthesis.solutions
