"""Tests for the dense linear-algebra core"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import settings
from quantum import (
    PAULI_X,
    SIGMA_MINUS,
    ComplexOperator,
    CompositeSpace,
    DegenerateInputError,
    DensityMatrix,
    DimensionError,
    LabelError,
    NonPhysicalStateError,
    PureState,
    embed,
    nearest_physical_state,
    partial_trace,
    partial_trace_matrix,
    state_fidelity,
    tensor_all,
    tensor_product,
)


def _op(labels, matrix):
    return ComplexOperator(space=CompositeSpace.qubits(*labels), entries=matrix)


def _single(label, matrix):
    return _op((label,), matrix)


class TestCompositeSpace:
    def test_total_dim_and_index(self):
        space = CompositeSpace(dims=(2, 3, 2), labels=("Q2A", "C1", "Q2B"))
        assert space.total_dim == 12
        assert space.index_of("C1") == 1
        assert space.basis_index("geg") == 2
        assert space.basis_index("efe") == 1 * 6 + 2 * 2 + 1

    def test_basis_labels_order(self, two_qubits):
        assert two_qubits.basis_labels() == ["gg", "ge", "eg", "ee"]

    def test_duplicate_labels_rejected(self):
        with pytest.raises(LabelError):
            CompositeSpace(dims=(2, 2), labels=("A", "A"))

    def test_length_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            CompositeSpace(dims=(2, 2), labels=("A",))

    def test_dimension_guard(self):
        with pytest.raises(DimensionError):
            CompositeSpace.qubits(*[f"q{i}" for i in range(13)])

    def test_small_subsystem_rejected(self):
        with pytest.raises(DimensionError):
            CompositeSpace(dims=(1, 2), labels=("A", "B"))

    def test_unknown_label(self, two_qubits):
        with pytest.raises(LabelError):
            two_qubits.index_of("C")


class TestTensorProduct:
    def test_identity(self):
        result = tensor_product(_single("A", np.eye(2)), _single("B", np.eye(2)))
        assert_allclose(result.entries, np.eye(4))
        assert result.space.labels == ("A", "B")

    def test_bit_flip_on_first_qubit(self, two_qubits):
        op = tensor_product(_single("A", PAULI_X), _single("B", np.eye(2)))
        ge = PureState.basis(two_qubits, "ge").amplitudes
        ee = PureState.basis(two_qubits, "ee").amplitudes
        assert_allclose(op.entries @ ge, ee)

    def test_lowering_on_each_side_of_psi_minus(self, psi_minus, two_qubits):
        gg = PureState.basis(two_qubits, "gg").amplitudes
        lower_a = tensor_product(_single("A", SIGMA_MINUS), _single("B", np.eye(2)))
        lower_b = tensor_product(_single("A", np.eye(2)), _single("B", SIGMA_MINUS))
        # psi- = (|eg> - |ge>)/sqrt2: only the first term survives on A
        assert_allclose(lower_a.entries @ psi_minus.amplitudes, gg / np.sqrt(2), atol=1e-15)
        assert_allclose(lower_b.entries @ psi_minus.amplitudes, -gg / np.sqrt(2), atol=1e-15)

    def test_label_clash(self):
        with pytest.raises(LabelError):
            tensor_product(_single("A", np.eye(2)), _single("A", np.eye(2)))

    def test_associative(self, rng):
        mats = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)]
        a, b, c = (_single(label, m) for label, m in zip("ABC", mats))
        left = tensor_product(tensor_product(a, b), c)
        right = tensor_product(a, tensor_product(b, c))
        assert_allclose(left.entries, right.entries, atol=1e-12)

    def test_density_inputs_stay_density(self, psi_minus_rho):
        other = psi_minus_rho.model_copy(
            update={"space": CompositeSpace.qubits("C", "D")}
        )
        result = tensor_all(psi_minus_rho, other)
        assert isinstance(result, DensityMatrix)
        assert result.space.total_dim == 16


class TestEmbed:
    def test_first_and_second_position(self, two_qubits):
        assert_allclose(
            embed(np.array(PAULI_X), ["A"], two_qubits).entries,
            np.kron(PAULI_X, np.eye(2)),
        )
        assert_allclose(
            embed(np.array(PAULI_X), ["B"], two_qubits).entries,
            np.kron(np.eye(2), PAULI_X),
        )

    def test_cz_on_non_adjacent_pair(self):
        space = CompositeSpace.qubits("Q1A", "Q2A", "Q1B")
        cz = np.diag([1, 1, 1, -1])
        full = embed(cz, ["Q1A", "Q1B"], space).entries
        for levels in space.basis_labels():
            vec = PureState.basis(space, levels).amplitudes
            sign = -1 if levels[0] == "e" and levels[2] == "e" else 1
            assert_allclose(full @ vec, sign * vec)

    def test_cz_on_first_two_of_three(self):
        space = CompositeSpace.qubits("Q1A", "Q2A", "Q1B")
        full = embed(np.diag([1, 1, 1, -1]), ["Q1A", "Q2A"], space).entries
        eeg = PureState.basis(space, "eeg").amplitudes
        assert_allclose(full @ eeg, -eeg)

    def test_reversed_target_order(self):
        space = CompositeSpace.qubits("A", "B")
        swap_free = np.kron(PAULI_X, np.eye(2))
        assert_allclose(
            embed(swap_free, ["B", "A"], space).entries,
            np.kron(np.eye(2), PAULI_X),
        )

    def test_unknown_label(self, two_qubits):
        with pytest.raises(LabelError):
            embed(np.eye(2), ["Z"], two_qubits)

    def test_dimension_mismatch(self, two_qubits):
        with pytest.raises(DimensionError):
            embed(np.eye(4), ["A"], two_qubits)


class TestPartialTrace:
    def test_bell_reduced_state_is_mixed(self, psi_minus_rho):
        reduced = partial_trace(psi_minus_rho, ["A"])
        assert_allclose(reduced.entries, np.eye(2) / 2, atol=1e-15)

    def test_product_state(self):
        rho_a = DensityMatrix(
            space=CompositeSpace.qubits("A"), entries=[[0.7, 0.2j], [-0.2j, 0.3]]
        )
        rho_b = DensityMatrix(
            space=CompositeSpace.qubits("B"), entries=[[0.4, 0.1], [0.1, 0.6]]
        )
        joint = tensor_product(rho_a, rho_b)
        assert_allclose(partial_trace(joint, ["A"]).entries, rho_a.entries, atol=1e-15)
        assert_allclose(partial_trace(joint, ["B"]).entries, rho_b.entries, atol=1e-15)

    def test_damped_bell_over_a(self, two_qubits, damped_bell_matrix):
        p = 0.3
        rho = DensityMatrix(space=two_qubits, entries=damped_bell_matrix(p))
        reduced = partial_trace(rho, ["B"])
        assert_allclose(reduced.entries, np.diag([(1 + p) / 2, (1 - p) / 2]), atol=1e-15)

    def test_keep_all_is_identity(self, random_density):
        rho = random_density()
        assert_allclose(partial_trace(rho, ["A", "B"]).entries, rho.entries)

    def test_relabeling_permutation(self, random_density):
        rho = random_density()
        swapped = partial_trace(rho, ["B", "A"])
        swap = np.eye(4)[[0, 2, 1, 3]]
        assert_allclose(swapped.entries, swap @ rho.entries @ swap, atol=1e-15)
        assert swapped.space.labels == ("B", "A")

    def test_middle_subsystem_of_qutrit_chain(self, rng):
        space = CompositeSpace(dims=(2, 3, 2), labels=("A", "C", "B"))
        g = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
        rho = g @ g.conj().T
        rho /= np.trace(rho)
        reduced, sub = partial_trace_matrix(rho, space, ["C"])
        brute = np.zeros((3, 3), dtype=complex)
        for a in range(2):
            for b in range(2):
                rows = [a * 6 + c * 2 + b for c in range(3)]
                brute += rho[np.ix_(rows, rows)]
        assert sub.dims == (3,)
        assert_allclose(reduced, brute, atol=1e-14)

    def test_unknown_label(self, psi_minus_rho):
        with pytest.raises(LabelError):
            partial_trace(psi_minus_rho, ["Q"])


class TestStateFidelity:
    def test_self(self, psi_minus, psi_minus_rho):
        assert state_fidelity(psi_minus_rho, psi_minus) == pytest.approx(1.0)

    def test_maximally_mixed(self, two_qubits, psi_minus):
        rho = DensityMatrix.maximally_mixed(two_qubits)
        assert state_fidelity(rho, psi_minus) == pytest.approx(0.25)

    @pytest.mark.parametrize("p", [0.0, 0.1, 0.5, 0.9, 1.0])
    def test_damped_bell(self, two_qubits, psi_minus, damped_bell_matrix, p):
        rho = DensityMatrix(space=two_qubits, entries=damped_bell_matrix(p))
        expected = (2 - p + 2 * np.sqrt(1 - p)) / 4
        assert state_fidelity(rho, psi_minus) == pytest.approx(expected, abs=1e-12)

    def test_global_phase_invariance(self, random_density, psi_minus):
        rho = random_density()
        rotated = psi_minus.model_copy(
            update={"amplitudes": np.exp(0.7j) * psi_minus.amplitudes}
        )
        assert state_fidelity(rho, rotated) == pytest.approx(
            state_fidelity(rho, psi_minus), abs=1e-14
        )

    def test_space_mismatch(self, psi_minus_rho):
        other = PureState.basis(CompositeSpace.qubits("C", "D"), "gg")
        with pytest.raises(DimensionError):
            state_fidelity(psi_minus_rho, other)


class TestNearestPhysicalState:
    def test_physical_input_unchanged(self, random_density):
        rho = random_density()
        assert_allclose(nearest_physical_state(rho.as_operator()).entries, rho.entries, atol=1e-12)

    def test_clips_negative_eigenvalue(self):
        space = CompositeSpace.qubits("A")
        result = nearest_physical_state(np.diag([1.1, -0.1]), space)
        assert_allclose(result.entries, np.diag([1.0, 0.0]), atol=1e-15)

    def test_trace_renormalization(self):
        space = CompositeSpace.qubits("A")
        result = nearest_physical_state(np.diag([0.6, 0.6]), space)
        assert_allclose(result.entries, np.diag([0.5, 0.5]), atol=1e-15)

    def test_idempotent(self, rng, two_qubits):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        once = nearest_physical_state(h, two_qubits)
        twice = nearest_physical_state(once.as_operator())
        assert_allclose(once.entries, twice.entries, atol=1e-12)

    def test_degenerate_input(self):
        with pytest.raises(DegenerateInputError):
            nearest_physical_state(-np.eye(2), CompositeSpace.qubits("A"))


class TestValidation:
    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(NonPhysicalStateError):
            DensityMatrix(space=CompositeSpace.qubits("A"), entries=np.diag([1.1, -0.1]))

    def test_rejects_bad_trace(self):
        with pytest.raises(NonPhysicalStateError):
            DensityMatrix(space=CompositeSpace.qubits("A"), entries=np.diag([0.6, 0.6]))

    def test_rejects_unnormalized_vector(self):
        with pytest.raises(NonPhysicalStateError):
            PureState(space=CompositeSpace.qubits("A"), amplitudes=[1, 1])

    def test_override_tolerance(self):
        with settings.override(TRACE_TOL=0.5):
            DensityMatrix(space=CompositeSpace.qubits("A"), entries=np.diag([0.6, 0.6]))
        assert settings.TRACE_TOL == pytest.approx(1e-10)

    def test_entries_are_read_only(self, psi_minus_rho):
        with pytest.raises(ValueError):
            psi_minus_rho.entries[0, 0] = 1.0


class TestSerialization:
    def test_json_field_names(self, psi_minus_rho):
        data = psi_minus_rho.to_json_dict()
        assert set(data) == {"labels", "dims", "re", "im"}
        assert len(data["re"]) == 16
        assert data["re"][1 * 4 + 2] == pytest.approx(-0.5)

    def test_restores_state(self, random_density):
        rho = random_density()
        restored = DensityMatrix.from_json_dict(rho.to_json_dict())
        assert restored.space == rho.space
        assert_allclose(restored.entries, rho.entries)
