import numpy as np
import pytest

from src.exceptions import (
    DimensionGuardError,
    EmptySubsetError,
    InvalidSubsetError,
    InvariantViolationError,
    NonPrimeWarning,
    UnsupportedBasisError,
)
from src.qudit.operators import basis_labels, fourier, max_entangled, mub_basis, pauli_ops
from src.qudit.states import (
    DensityMatrix,
    PureState,
    SystemShape,
    entanglement_entropy,
    fidelity,
    partial_trace,
    random_pure_state,
    trace_distance,
    von_neumann_entropy,
)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_max_entangled_reduces_to_maximally_mixed(q):
    reduced = partial_trace(max_entangled(q), [1])
    assert np.allclose(reduced.matrix, np.eye(q) / q, atol=1e-12)
    assert von_neumann_entropy(reduced) == pytest.approx(np.log2(q), abs=1e-10)


def test_entanglement_entropy_matches_density_route(rng):
    state = PureState.normalized((2, 3, 2), random_pure_state(12, rng).amplitudes)
    for keep in ([0], [1], [0, 2], [1, 2]):
        direct = von_neumann_entropy(partial_trace(state, keep))
        assert entanglement_entropy(state, keep) == pytest.approx(direct, abs=1e-10)
    assert entanglement_entropy(state, [0, 1, 2]) == 0.0


def test_partial_trace_of_density_matrix_matches_pure_route(rng):
    state = PureState.normalized((3, 3), random_pure_state(9, rng).amplitudes)
    via_pure = partial_trace(state, [1])
    via_density = partial_trace(state.to_density(), [1])
    assert np.allclose(via_pure.matrix, via_density.matrix, atol=1e-12)


def test_partial_trace_composes(rng):
    state = PureState.normalized((2, 3, 2, 2), random_pure_state(24, rng).amplitudes)
    for route in (state, state.to_density()):
        once = partial_trace(route, [0, 3])
        twice = partial_trace(partial_trace(route, [0, 1, 3]), [0, 2])
        assert np.linalg.norm(once.matrix - twice.matrix) < 1e-12


def test_ghz_keeps_classical_correlation():
    ghz = PureState.normalized((2, 2, 2), np.array([1, 0, 0, 0, 0, 0, 0, 1]))
    reduced = partial_trace(ghz, [1, 2])
    assert np.allclose(reduced.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-12)


def test_entropy_is_unitarily_invariant(rng):
    rho = partial_trace(PureState.normalized((4, 3), random_pure_state(12, rng).amplitudes), [0])
    gaussian = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    unitary, _ = np.linalg.qr(gaussian)
    rotated = unitary @ rho.matrix @ unitary.conj().T
    rotated = DensityMatrix((4,), (rotated + rotated.conj().T) / 2)
    assert von_neumann_entropy(rotated) == pytest.approx(von_neumann_entropy(rho), abs=1e-10)


def test_pure_state_rejects_unnormalised_vector():
    with pytest.raises(InvariantViolationError):
        PureState((2,), np.array([1.0, 1.0]))


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(InvariantViolationError):
        DensityMatrix((2,), np.eye(2))


def test_state_arrays_are_read_only():
    state = max_entangled(2)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0


def test_shape_guard():
    with pytest.raises(DimensionGuardError):
        SystemShape((2,) * 21)


def test_position_validation():
    state = max_entangled(2)
    with pytest.raises(EmptySubsetError):
        partial_trace(state, [])
    with pytest.raises(InvalidSubsetError):
        partial_trace(state, [2])
    with pytest.raises(InvalidSubsetError):
        partial_trace(state, [0, 0])


def test_fidelity_and_trace_distance():
    zero = PureState((2,), np.array([1, 0]))
    mixed = DensityMatrix.maximally_mixed((2,))
    assert fidelity(zero, mixed) == pytest.approx(0.5)
    assert trace_distance(zero.to_density(), mixed) == pytest.approx(0.5)


def test_pauli_commutation():
    x, z, omega = pauli_ops(5)
    assert np.allclose(z @ x, omega * x @ z)
    assert np.allclose(x @ np.eye(5)[:, 0], np.eye(5)[:, 1])


def test_fourier_is_unitary():
    f = fourier(7)
    assert np.allclose(f.conj().T @ f, np.eye(7))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_pauli_powers_are_identity(q):
    x, z, _ = pauli_ops(q)
    assert np.allclose(np.linalg.matrix_power(x, q), np.eye(q), atol=1e-12)
    assert np.allclose(np.linalg.matrix_power(z, q), np.eye(q), atol=1e-12)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_fourier_exchanges_paulis(q):
    f = fourier(q)
    x, z, _ = pauli_ops(q)
    assert np.allclose(f @ x @ f.conj().T, z, atol=1e-12)
    assert np.allclose(f @ z @ f.conj().T, x.conj().T, atol=1e-12)
    assert np.allclose(f[:, 0], np.full(q, 1 / np.sqrt(q)))


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_bases_are_mutually_unbiased(q):
    bases = [mub_basis(q, t) for t in basis_labels(q)]
    for i, a in enumerate(bases):
        for b in bases[i + 1:]:
            assert np.allclose(a.overlaps(b), 1 / q, atol=1e-10)


@pytest.mark.parametrize("q,t", [(3, 1), (3, 2), (5, 3), (7, 7)])
def test_basis_labels_follow_eigenvalue_phase(q, t):
    x, z, omega = pauli_ops(q)
    operator = x if t == q else np.linalg.matrix_power(x, t) @ z
    basis = mub_basis(q, t)
    reference = np.vdot(basis[0], operator @ basis[0])
    for i in range(q):
        value = np.vdot(basis[i], operator @ basis[i])
        assert value / reference == pytest.approx(omega ** i, abs=1e-9)


def test_qubit_tie_uses_imaginary_part():
    basis = mub_basis(2, 1)
    assert np.allclose(basis[0], np.array([1, -1j]) / np.sqrt(2), atol=1e-12)


def test_first_component_is_real_positive():
    for t in basis_labels(5):
        for vector in mub_basis(5, t).vectors:
            pivot = vector[np.flatnonzero(np.abs(vector) > 1e-10)[0]]
            assert abs(pivot.imag) < 1e-12 and pivot.real > 0


def test_composite_dimension_only_two_bases():
    assert basis_labels(4) == [0, 4]
    with pytest.raises(UnsupportedBasisError):
        mub_basis(4, 1)
    with pytest.warns(NonPrimeWarning):
        basis = mub_basis(4, 4)
    assert basis.metadata["warnings"]
    assert np.allclose(mub_basis(4, 0).overlaps(basis), 0.25)


def test_basis_out_of_range():
    with pytest.raises(UnsupportedBasisError):
        mub_basis(3, 4)
