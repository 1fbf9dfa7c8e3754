"""Tests for gates, purification circuits, closed forms and protection"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from channels import ErrorParams, bell_state, combined_error_bell, one_sided_bell_error
from dynamics import DEVICE_QUBITS, mhz_to_rad_per_ns
from protocols import (
    CONTROL,
    STORAGE,
    GateOp,
    ProtectionSeries,
    QuasiStaticNoise,
    analytic_combined_postselect,
    analytic_purified_fidelity,
    calibrate_quasi_static_sigma,
    circuit_unitary,
    compose_cnot,
    discrepancy_report,
    double_selection_branches,
    fit_effective_t2,
    protect_dd,
    protect_free,
    protect_rabi,
    purification_target,
    purify,
    purify_all_outcomes,
    purify_double_selection,
    reference_noise,
    standard_gate,
    transfer_to_storage,
)
from quantum import (
    ComplexOperator,
    CompositeSpace,
    DensityMatrix,
    DimensionError,
    LabelError,
    NonPhysicalStateError,
    ParameterRangeError,
    UndefinedPostStateError,
    UnknownGateError,
    state_fidelity,
)

P_GRID = np.round(np.arange(0.0, 0.9501, 0.05), 10)
F_GRID = np.round(np.arange(0.5, 1.0001, 0.05), 10)
STORAGE_T1 = (DEVICE_QUBITS["Q2A"].T1, DEVICE_QUBITS["Q2B"].T1)


def _werner(F: float, error: str = "phi-") -> DensityMatrix:
    good = bell_state("psi-").density().entries
    bad = bell_state(error).density().entries
    return DensityMatrix(space=CompositeSpace.qubits("A", "B"), entries=F * good + (1 - F) * bad)


def _damped(p: float) -> DensityMatrix:
    return one_sided_bell_error("amplitude_damping", p)


class TestStandardGate:
    def test_iswap_moves_excitation(self):
        u = standard_gate("iSWAP").unitary.entries
        eg = np.array([0, 0, 1, 0])
        assert_allclose(u @ eg, [0, -1j, 0, 0], atol=1e-15)

    def test_cz_flips_ee_sign(self):
        u = standard_gate("CZ").unitary.entries
        assert_allclose(u, np.diag([1, 1, 1, -1]))

    def test_x_squared_is_identity(self):
        x = standard_gate("X").unitary.entries
        assert_allclose(x @ x, np.eye(2))

    def test_y_half_matrix(self):
        y2 = standard_gate("Y/2").unitary.entries
        assert_allclose(y2, np.array([[1, -1], [1, 1]]) / math.sqrt(2), atol=1e-15)

    def test_targets_become_labels(self):
        gate = standard_gate("CZ", ["Q1A", "Q2A"])
        assert gate.targets == ("Q1A", "Q2A")
        assert gate.unitary.space.labels == ("Q1A", "Q2A")

    def test_iswap_duration_metadata(self):
        assert standard_gate("iSWAP").duration_ns == pytest.approx(15.0, rel=1e-2)

    def test_unknown_gate(self):
        with pytest.raises(UnknownGateError):
            standard_gate("T")

    def test_wrong_arity(self):
        with pytest.raises(LabelError):
            standard_gate("CZ", ["Q1A"])

    def test_non_unitary_rejected(self):
        space = CompositeSpace.qubits("q")
        with pytest.raises(NonPhysicalStateError):
            GateOp(
                name="bad",
                unitary=ComplexOperator(space=space, entries=[[1, 0], [0, 2]]),
                targets=("q",),
            )


class TestComposeCnot:
    def test_product_is_exact_cnot(self):
        space = CompositeSpace.qubits("c", "t")
        product = circuit_unitary(compose_cnot("c", "t"), space)
        assert_allclose(product, standard_gate("CNOT").unitary.entries, atol=1e-12)

    def test_truth_table(self):
        space = CompositeSpace.qubits("c", "t")
        product = circuit_unitary(compose_cnot("c", "t"), space)
        assert abs(product[space.basis_index("ee"), space.basis_index("eg")]) == pytest.approx(1)
        assert abs(product[space.basis_index("gg"), space.basis_index("gg")]) == pytest.approx(1)

    def test_gate_order(self):
        names = [gate.name for gate in compose_cnot("c", "t")]
        assert names == ["-Y/2", "CZ", "Y/2"]

    def test_label_clash(self):
        with pytest.raises(LabelError):
            compose_cnot("q", "q")


class TestPurify:
    @pytest.mark.parametrize("F", F_GRID)
    def test_werner_matches_closed_form(self, F):
        rho = _werner(F)
        outcome = purify(rho, rho, "bit", "both-consistent")
        assert outcome.fidelity == pytest.approx(analytic_purified_fidelity(F), abs=1e-12)

    @pytest.mark.parametrize("p", P_GRID)
    def test_damped_ee_gives_psi_plus(self, p):
        rho = _damped(p)
        outcome = purify(rho, rho, "bit", "ee")
        psi_plus = bell_state("psi+", CONTROL).density().entries
        assert_allclose(outcome.post_state.entries, psi_plus, atol=1e-12)
        assert outcome.success_prob == pytest.approx((1 - p) / 2, abs=1e-12)

    @pytest.mark.parametrize("p", P_GRID)
    def test_damped_gg_fidelity(self, p):
        rho = _damped(p)
        outcome = purify(rho, rho, "bit", "gg")
        expected = (2 - p) ** 2 / (4 * (1 - p + p**2))
        assert outcome.fidelity == pytest.approx(expected, abs=1e-12)
        assert outcome.success_prob == pytest.approx((1 - p + p**2) / 2, abs=1e-12)

    def test_outcome_weights_sum_to_one(self, random_density):
        for _ in range(5):
            outcome = purify(random_density(), random_density(), "bit", "gg")
            assert sum(outcome.outcome_probs.values()) == pytest.approx(1.0, abs=1e-10)

    def test_ideal_inputs(self, psi_minus_rho):
        outcome = purify(psi_minus_rho, psi_minus_rho, "bit", "both-consistent")
        assert outcome.fidelity == pytest.approx(1.0, abs=1e-12)
        assert outcome.success_prob == pytest.approx(1.0, abs=1e-12)

    def test_inconsistent_outcomes_vanish_for_ideal_inputs(self, psi_minus_rho):
        outcomes = purify_all_outcomes(psi_minus_rho, psi_minus_rho)
        assert outcomes["ge"] is None and outcomes["eg"] is None
        assert outcomes["gg"].success_prob == pytest.approx(0.5)

    def test_zero_probability_selection(self):
        rho = _damped(1.0)
        with pytest.raises(UndefinedPostStateError):
            purify(rho, rho, "bit", "ee")

    def test_post_state_on_control_labels(self, psi_minus_rho):
        outcome = purify(psi_minus_rho, psi_minus_rho)
        assert outcome.post_state.space.labels == CONTROL

    def test_rejects_non_pair(self):
        rho = DensityMatrix.maximally_mixed(CompositeSpace.qubits("a", "b", "c"))
        with pytest.raises(DimensionError):
            purify(rho, rho)

    def test_bad_selection(self, psi_minus_rho):
        with pytest.raises(ValueError):
            purify(psi_minus_rho, psi_minus_rho, "bit", "ge")


class TestPhasePurification:
    def test_target_is_phi_minus(self):
        target = purification_target("phase")
        overlap = target.overlap(bell_state("phi-", CONTROL))
        assert abs(overlap) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("F", [0.6, 0.75, 0.9])
    def test_phase_errors_match_closed_form(self, F):
        rho = _werner(F, error="psi+")
        outcome = purify(rho, rho, "phase", "both-consistent")
        assert outcome.fidelity == pytest.approx(analytic_purified_fidelity(F), abs=1e-12)

    def test_ideal_inputs(self, psi_minus_rho):
        outcome = purify(psi_minus_rho, psi_minus_rho, "phase", "both-consistent")
        assert outcome.fidelity == pytest.approx(1.0, abs=1e-12)


class TestDoubleSelection:
    def test_ideal_inputs(self, psi_minus_rho):
        outcome = purify_double_selection(psi_minus_rho, psi_minus_rho, psi_minus_rho)
        assert outcome.fidelity == pytest.approx(1.0, abs=1e-12)
        assert outcome.success_prob == pytest.approx(1.0, abs=1e-12)

    def test_joint_weights_sum_to_one(self, random_density):
        branches = double_selection_branches(random_density(), random_density(), random_density())
        assert len(branches) == 16
        assert sum(weight for _, weight in branches.values()) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
    def test_bit_errors(self, eps):
        rho = _werner(1 - eps)
        outcome = purify_double_selection(rho, rho, rho)
        good, bad = (1 - eps) ** 2, eps**2
        assert outcome.fidelity == pytest.approx((good + bad) / (good + 3 * bad), abs=1e-12)
        assert outcome.success_prob == pytest.approx((1 - eps) * (good + 3 * bad), abs=1e-12)

    def test_success_below_single_selection(self):
        rho = _werner(0.9)
        double = purify_double_selection(rho, rho, rho)
        single = purify(rho, rho, "bit", "both-consistent")
        assert double.success_prob < single.success_prob


class TestAnalytic:
    @pytest.mark.parametrize("F, expected", [(1.0, 1.0), (0.5, 0.5), (0.75, 0.9)])
    def test_purified_fidelity(self, F, expected):
        assert analytic_purified_fidelity(F) == pytest.approx(expected)

    def test_purified_fidelity_range(self):
        with pytest.raises(ParameterRangeError):
            analytic_purified_fidelity(1.2)

    def test_zero_error_ee(self):
        result = analytic_combined_postselect(ErrorParams(), "ee")
        assert result.fidelity == pytest.approx(1.0)
        assert result.success == pytest.approx(0.5)

    @pytest.mark.parametrize("eps_d", [0.0, 0.1, 0.3])
    def test_ee_success(self, eps_d):
        result = analytic_combined_postselect(ErrorParams(eps_d=eps_d, eps_p=0.02), "ee")
        assert result.success == pytest.approx(0.5 - eps_d)

    @pytest.mark.parametrize("selection", ["gg", "ee"])
    @pytest.mark.parametrize("eps_d, eps_p", [(0.05, 0.05), (0.02, 0.1), (0.0, 0.2)])
    def test_closed_form_matches_circuit(self, selection, eps_d, eps_p):
        params = ErrorParams(eps_d=eps_d, eps_p=eps_p)
        rho = combined_error_bell(params)
        circuit = purify(rho, rho, "bit", selection)
        closed = analytic_combined_postselect(params, selection)
        assert closed.fidelity == pytest.approx(circuit.fidelity, abs=1e-12)
        assert closed.success == pytest.approx(circuit.success_prob, abs=1e-12)
        assert_allclose(closed.post_state.entries, circuit.post_state.entries, atol=1e-12)

    def test_both_consistent_has_no_closed_form(self):
        with pytest.raises(ParameterRangeError):
            analytic_combined_postselect(ErrorParams(), "both-consistent")


class TestDiscrepancyReport:
    @pytest.fixture(scope="class")
    def report(self):
        return discrepancy_report()

    def test_mandatory_entries(self, report):
        names = {entry.name for entry in report.entries}
        assert {
            "one_sided_bit_flip_weights",
            "one_sided_phase_flip_weights",
            "combined_ee_phase_error",
        } <= names

    def test_one_sided_weights_follow_kraus(self, report):
        for entry in report.by_name("one_sided_bit_flip_weights"):
            p = entry.parameters["p"]
            assert entry.oracle["psi-"] == pytest.approx(1 - p, abs=1e-12)
            assert entry.oracle["phi-"] == pytest.approx(p, abs=1e-12)
            assert entry.matches == []
        for entry in report.by_name("one_sided_phase_flip_weights"):
            assert entry.oracle["psi+"] == pytest.approx(entry.parameters["p"], abs=1e-12)

    def test_combined_branch_matches_one_form(self, report):
        entries = report.by_name("combined_ee_phase_error")
        assert len(entries) == 4
        for entry in entries:
            assert entry.matches == ["(2e_p - 2e_p^2 - e_d)/(1 - 2e_d)"]
            assert entry.oracle["success"] == pytest.approx(
                0.5 - entry.parameters["eps_d"], abs=1e-12
            )

    def test_physicality_flags(self, report):
        flags = [entry.physical for entry in report.by_name("combined_ee_phase_error")]
        assert flags == [False, True, False, False]

    def test_markdown(self, report):
        text = report.format_markdown()
        assert "combined_ee_phase_error" in text
        assert "matches" in text and "differs" in text


class TestStorageTransfer:
    def test_ideal_transfer_keeps_psi_minus(self, psi_minus_rho):
        moved = transfer_to_storage(psi_minus_rho)
        assert moved.space.labels == STORAGE
        assert state_fidelity(moved, bell_state("psi-", STORAGE)) == pytest.approx(1.0)

    def test_lossy_transfer(self, psi_minus_rho):
        moved = transfer_to_storage(psi_minus_rho, efficiency=0.9)
        assert state_fidelity(moved, bell_state("psi-", STORAGE)) == pytest.approx(0.9)

    def test_rejects_non_pair(self):
        rho = DensityMatrix.maximally_mixed(CompositeSpace.qubits("a", "b", "c"))
        with pytest.raises(DimensionError):
            transfer_to_storage(rho)

    def test_efficiency_range(self, psi_minus_rho):
        with pytest.raises(ParameterRangeError):
            transfer_to_storage(psi_minus_rho, efficiency=1.5)


class TestProtection:
    def test_noiseless_storage_is_identity(self, psi_minus_rho):
        noise = QuasiStaticNoise(sigma_detuning=0.0, n_trajectories=3, seed=1)
        for series in (
            protect_free(psi_minus_rho, 700, noise),
            protect_dd(psi_minus_rho, 700, noise),
            protect_rabi(psi_minus_rho, 700, mhz_to_rad_per_ns(5), noise),
        ):
            assert_allclose(series.fidelity_mean, 1.0, atol=1e-12)

    def test_undriven_rabi_equals_free(self, psi_minus_rho):
        noise = QuasiStaticNoise(sigma_detuning=0.002, n_trajectories=50, seed=7)
        free = protect_free(psi_minus_rho, 700, noise, t1_us=STORAGE_T1)
        rabi = protect_rabi(psi_minus_rho, 700, 0.0, noise, t1_us=STORAGE_T1)
        assert_allclose(rabi.fidelity_mean, free.fidelity_mean, atol=1e-10)

    def test_reproducible(self, psi_minus_rho):
        noise = QuasiStaticNoise(sigma_detuning=0.002, n_trajectories=40, seed=3)
        first = protect_dd(psi_minus_rho, 1400, noise, t1_us=STORAGE_T1)
        second = protect_dd(psi_minus_rho, 1400, noise, t1_us=STORAGE_T1)
        assert first == second

    def test_dd_not_worse_than_free(self, psi_minus_rho):
        noise = QuasiStaticNoise(sigma_detuning=0.001, n_trajectories=200, seed=11)
        free = protect_free(psi_minus_rho, 2100, noise, t1_us=20.0)
        dd = protect_dd(psi_minus_rho, 2100, noise, t1_us=20.0)
        assert free.times_ns == dd.times_ns
        assert all(d >= f - 1e-12 for d, f in zip(dd.fidelity_mean, free.fidelity_mean))

    def test_calibrated_protection(self, psi_minus_rho):
        sigma = calibrate_quasi_static_sigma(psi_minus_rho, 0.576, 1400, STORAGE_T1)
        noise = QuasiStaticNoise(sigma_detuning=sigma, n_trajectories=4000, seed=2024)
        free = protect_free(psi_minus_rho, 1400, noise, t1_us=STORAGE_T1)
        dd = protect_dd(psi_minus_rho, 1400, noise, t1_us=STORAGE_T1)
        rabi = protect_rabi(
            psi_minus_rho, 1400, mhz_to_rad_per_ns(5), noise, t1_us=STORAGE_T1
        )
        assert free.at(1400) == pytest.approx(0.576, abs=0.02)
        assert dd.at(1400) >= 0.70
        assert rabi.at(1400) >= 0.70

    def test_stronger_drive_suppresses_noise(self, psi_minus_rho):
        noise = QuasiStaticNoise(sigma_detuning=0.002, n_trajectories=200, seed=5)
        weak = protect_rabi(psi_minus_rho, 1400, mhz_to_rad_per_ns(1), noise)
        strong = protect_rabi(psi_minus_rho, 1400, mhz_to_rad_per_ns(5), noise)
        weak_loss = 1 - np.mean(weak.fidelity_mean[1:])
        strong_loss = 1 - np.mean(strong.fidelity_mean[1:])
        assert strong_loss < weak_loss

    def test_total_time_must_fit_cycles(self, psi_minus_rho):
        noise = QuasiStaticNoise(sigma_detuning=0.0, seed=1)
        with pytest.raises(ParameterRangeError):
            protect_dd(psi_minus_rho, 100, noise)

    def test_negative_drive(self, psi_minus_rho):
        noise = QuasiStaticNoise(sigma_detuning=0.0, seed=1)
        with pytest.raises(ParameterRangeError):
            protect_rabi(psi_minus_rho, 700, -1.0, noise)

    def test_noise_validation(self):
        with pytest.raises(ValidationError):
            QuasiStaticNoise(sigma_detuning=-1.0, seed=0)
        with pytest.raises(ValidationError):
            QuasiStaticNoise(sigma_detuning=0.1, n_trajectories=0, seed=0)

    def test_calibration_out_of_range(self, psi_minus_rho):
        with pytest.raises(ParameterRangeError):
            calibrate_quasi_static_sigma(psi_minus_rho, 0.1, 1400, STORAGE_T1)

    def test_effective_t2_fit(self):
        times = np.arange(0, 7001, 70.0)
        series = ProtectionSeries(
            method="synthetic",
            times_ns=tuple(times),
            fidelity_mean=tuple(0.5 + 0.5 * np.exp(-2 * times / 3000.0)),
            fidelity_stderr=tuple(np.zeros_like(times)),
            n_traj=1,
        )
        fit = fit_effective_t2(series)
        assert fit.t2_ns == pytest.approx(3000.0, rel=1e-6)
        assert fit.initial == pytest.approx(1.0, rel=1e-6)

    def test_reference_removes_damping(self):
        times = np.arange(0, 2801, 70.0)
        damping = np.exp(-times / 7000.0)
        reference = ProtectionSeries(
            method="reference",
            times_ns=tuple(times),
            fidelity_mean=tuple(damping),
            fidelity_stderr=tuple(np.zeros_like(times)),
            n_traj=1,
        )
        series = reference.model_copy(
            update={
                "method": "noisy",
                "fidelity_mean": tuple(damping * (0.5 + 0.5 * np.exp(-2 * times / 12000.0))),
            }
        )
        fit = fit_effective_t2(series, reference=reference)
        assert fit.t2_ns == pytest.approx(12000.0, rel=1e-6)

    def test_reference_grid_must_match(self, psi_minus_rho):
        noise = QuasiStaticNoise(sigma_detuning=0.0, n_trajectories=1, seed=1)
        short = protect_free(psi_minus_rho, 700, noise)
        long = protect_free(psi_minus_rho, 1400, noise)
        with pytest.raises(ParameterRangeError):
            fit_effective_t2(long, reference=short)

    def test_white_dephasing_survives_dd(self, psi_minus_rho):
        noise = QuasiStaticNoise(
            sigma_detuning=0.0, n_trajectories=1, white_t_phi_us=12.0, seed=1
        )
        dd = protect_dd(psi_minus_rho, 1400, noise)
        assert dd.at(1400) == pytest.approx(0.5 + 0.5 * np.exp(-2 * 1.4 / 12.0), abs=1e-9)

    def test_calibration_includes_white_dephasing(self, psi_minus_rho):
        sigma = calibrate_quasi_static_sigma(
            psi_minus_rho, 0.576, 1400, STORAGE_T1, white_t_phi_us=12.0
        )
        assert sigma < calibrate_quasi_static_sigma(psi_minus_rho, 0.576, 1400, STORAGE_T1)
        noise = QuasiStaticNoise(
            sigma_detuning=sigma, n_trajectories=4000, white_t_phi_us=12.0, seed=2024
        )
        free = protect_free(psi_minus_rho, 1400, noise, t1_us=STORAGE_T1)
        assert free.at(1400) == pytest.approx(0.576, abs=0.02)

    @pytest.mark.parametrize("method", ["dd", "rabi"])
    def test_effective_t2_with_residual_white_noise(self, psi_minus_rho, method):
        sigma = calibrate_quasi_static_sigma(
            psi_minus_rho, 0.576, 1400, STORAGE_T1, white_t_phi_us=12.0
        )
        noise = QuasiStaticNoise(
            sigma_detuning=sigma, n_trajectories=400, white_t_phi_us=12.0, seed=17
        )

        def run(n):
            if method == "dd":
                return protect_dd(psi_minus_rho, 2800, n, t1_us=STORAGE_T1)
            return protect_rabi(psi_minus_rho, 2800, mhz_to_rad_per_ns(5), n, t1_us=STORAGE_T1)

        series = run(noise)
        fit = fit_effective_t2(series, reference=run(reference_noise(noise)))
        assert 9.0 <= fit.t2_ns / 1e3 <= 15.0
        assert series.at(1400) >= 0.70

    def test_free_t2_is_short(self, psi_minus_rho):
        sigma = calibrate_quasi_static_sigma(
            psi_minus_rho, 0.576, 1400, STORAGE_T1, white_t_phi_us=12.0
        )
        noise = QuasiStaticNoise(
            sigma_detuning=sigma, n_trajectories=400, white_t_phi_us=12.0, seed=17
        )
        free = protect_free(psi_minus_rho, 2800, noise, t1_us=STORAGE_T1)
        reference = protect_free(psi_minus_rho, 2800, reference_noise(noise), t1_us=STORAGE_T1)
        assert fit_effective_t2(free, reference=reference).t2_ns / 1e3 < 5.0
