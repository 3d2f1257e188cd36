import json
import math

import numpy as np
import pytest

import vqekit as vk
from vqekit import AnsatzKind, BfgsConfig, RestartSpec
from vqekit.experiments import (
    ConvergenceRow,
    SizeConsistencyRow,
    VarianceRow,
    barren_plateau_variance,
    convergence_sweep,
    emit_csv,
    layers_to_accuracy,
    neel_bitstring,
    parse_csv,
    power_law_fit,
    size_consistency_test,
    write_csv_with_metadata,
)

FAST = dict(bfgs=BfgsConfig(max_iterations=120), restarts=RestartSpec(seed=5))


class TestCsv:
    def test_convergence_roundtrip(self):
        # rows carry the CSV precision (12 significant digits) by construction
        rows = [
            ConvergenceRow(1, -3.12345678901, 0.01, -0.780864197253, 18, 6, 19, 51, 0.25),
            ConvergenceRow(2, -3.2, 1e-12, None, 36, 12, 38, 99, 1.5),
        ]
        assert parse_csv(emit_csv(rows, ConvergenceRow), ConvergenceRow) == rows

    def test_pipeline_rows_roundtrip(self):
        h = vk.heisenberg_1d(3, -1.0)
        rows = convergence_sweep(h, AnsatzKind.XYZ2F, "101", 1, n_sites=3, **FAST)
        assert parse_csv(emit_csv(rows, ConvergenceRow), ConvergenceRow) == rows

    def test_variance_roundtrip(self):
        rows = [VarianceRow("xyz2f", 6, 4, "first-of-first-layer", "random", 100, 1.25e-4)]
        assert parse_csv(emit_csv(rows, VarianceRow), VarianceRow) == rows

    def test_size_consistency_roundtrip(self):
        rows = [SizeConsistencyRow("xyz2f", 2, -0.83054, -0.83054, 0.00085, 0.0017)]
        assert parse_csv(emit_csv(rows, SizeConsistencyRow), SizeConsistencyRow) == rows

    def test_headers_exact(self):
        assert emit_csv([], ConvergenceRow).splitlines()[0] == (
            "layer,energy,error_vs_exact,per_site_energy,n_params,"
            "n_two_qubit,asap_depth,iterations,wall_time_s"
        )
        assert emit_csv([], VarianceRow).splitlines()[0] == (
            "kind,n_qubits,layers,parameter_id,mode,sample_count,variance"
        )
        assert emit_csv([], SizeConsistencyRow).splitlines()[0] == (
            "kind,L,e_sub,e_composite,infidelity_sub,infidelity_composite"
        )

    def test_sidecar_written(self, tmp_path):
        path = tmp_path / "rows.csv"
        write_csv_with_metadata(path, [], ConvergenceRow,
                                {"seed": 3, "restart_step_sizes": [0.0]})
        sidecar = json.loads((tmp_path / "rows.csv.meta.json").read_text())
        assert sidecar["seed"] == 3
        assert "version" in sidecar


class TestPowerLawFit:
    def test_quadratic(self):
        points = [(n, 2.0 * n**2) for n in (4, 6, 8, 10, 12)]
        a, b = power_law_fit(points)
        assert abs(b - 2.0) < 1e-10
        assert abs(a - 2.0) < 1e-10

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            power_law_fit([(4, 1.0)])

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            power_law_fit([(4, 1.0), (6, -2.0), (8, 3.0)])


class TestConvergenceSweep:
    def test_rows_and_monotonicity(self):
        h = vk.heisenberg_1d(3, -1.0)
        rows = convergence_sweep(h, AnsatzKind.XYZ2F, "101", 2, n_sites=3, **FAST)
        assert [r.layer for r in rows] == [1, 2]
        assert rows[1].energy <= rows[0].energy
        for row in rows:
            assert row.error_vs_exact >= -1e-9
            assert abs(row.per_site_energy - row.energy / 3) < 1e-9
        assert rows[0].n_params == 13

    def test_zero_layers_rejected(self):
        with pytest.raises(ValueError):
            convergence_sweep(vk.heisenberg_1d(3, -1.0), AnsatzKind.XYZ2F, "101", 0)


class TestLayersToAccuracy:
    def test_infinite_tolerance_gives_first_layer(self):
        h = vk.heisenberg_1d(3, -1.0)
        res = layers_to_accuracy(h, AnsatzKind.XYZ2F, "101", math.inf, 4, **FAST)
        assert res.reached and res.layers == 1

    def test_unreachable_with_tiny_cap(self):
        h = vk.heisenberg_1d(4, -1.0)
        res = layers_to_accuracy(h, AnsatzKind.RY_LINEAR, "1010", 1e-12, 1, **FAST)
        assert not res.reached
        assert res.layers is None
        assert res.counts is not None

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            layers_to_accuracy(vk.heisenberg_1d(3, -1.0), AnsatzKind.XYZ2F, "101", 0.0, 2)


class TestSizeConsistency:
    def test_xyz2f_composite_matches_subsystem(self):
        # even chain length: unique singlet ground states on both sides
        rows = size_consistency_test(AnsatzKind.XYZ2F, 4, [1, 2], **FAST)
        for row in rows:
            assert abs(row.e_composite - row.e_sub) < 1e-9
            # F_comp = F_sub^2, so 1-F_comp stays below ~2x the subsystem value
            assert row.infidelity_composite < 2.5 * row.infidelity_sub + 1e-8

    def test_heuristic_kind_violates(self):
        rows = size_consistency_test(AnsatzKind.RY_LINEAR, 4, [2], **FAST)
        assert rows[0].e_composite > rows[0].e_sub + 1e-3


class TestBarrenPlateau:
    def test_two_sample_variance(self):
        rows = barren_plateau_variance(AnsatzKind.XYZ2F, [3], [2], 2, "random", seed=3)
        assert len(rows) == 2
        for row in rows:
            assert row.variance >= 0
            assert row.sample_count == 2
        ids = {r.parameter_id for r in rows}
        assert ids == {"first-of-first-layer", "first-of-last-layer"}

    def test_layerwise_mode(self):
        rows = barren_plateau_variance(AnsatzKind.XYZ2F, [3], [2], 4, "layerwise",
                                       seed=3, **FAST)
        assert all(r.mode == "layerwise" for r in rows)

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            barren_plateau_variance(AnsatzKind.XYZ2F, [3], [1], 1, "random")

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            barren_plateau_variance(AnsatzKind.XYZ2F, [3], [1], 2, "warm")


def test_neel_bitstring():
    assert neel_bitstring(6) == "101010"
    assert neel_bitstring(5) == "10101"
