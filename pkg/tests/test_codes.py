import numpy as np
import pytest

from src.codes.schemes import (
    ChannelState,
    Scheme,
    bundled_scheme,
    bundled_schemes,
    channel_state,
    discard_shares,
    ghz_scheme,
    logical_basis_state,
    reed_solomon_threshold,
)
from src.exceptions import (
    FieldTooSmallError,
    InvalidSubsetError,
    InvariantViolationError,
    NonIdealSchemeError,
    NotPrimeError,
)
from src.qudit.operators import basis_labels
from src.qudit.states import DensityMatrix, PureState, partial_trace


def test_bundled_list():
    schemes = bundled_schemes()
    assert len(schemes) == 11
    assert {"cgl23", "five_qubit", "rs_2_5", "rs_3_7", "five_qubit_minus_one"} <= set(schemes)


@pytest.mark.parametrize("name", ["ghz_3_2", "ghz_4_3", "cgl23", "five_qubit", "rs_2_5"])
def test_logical_basis_is_orthonormal(name):
    scheme = bundled_scheme(name)
    gram = scheme.encoding.conj().T @ scheme.encoding
    assert np.allclose(gram, np.eye(scheme.kappa), atol=1e-10)


def test_ghz_layout():
    scheme = ghz_scheme(3, 2)
    assert scheme.encoding[0, 0] == 1
    assert scheme.encoding[7, 1] == 1
    assert scheme.claimed_ramp == (3, 0, 3)


def test_cgl_amplitudes(cgl):
    support = {i: sorted(np.flatnonzero(np.abs(cgl.encoding[:, i]) > 0)) for i in range(3)}
    assert support == {0: [0, 13, 26], 1: [5, 15, 19], 2: [7, 11, 21]}
    assert np.allclose(cgl.encoding[0, 0], 1 / np.sqrt(3))


def test_reed_solomon_errors():
    with pytest.raises(FieldTooSmallError):
        reed_solomon_threshold(2, 3)
    with pytest.raises(NotPrimeError):
        reed_solomon_threshold(2, 4)
    with pytest.raises(ValueError):
        reed_solomon_threshold(1, 5)


def test_reed_solomon_shape():
    scheme = reed_solomon_threshold(2, 5)
    assert (scheme.q, scheme.kappa, scheme.n) == (5, 5, 3)
    assert np.count_nonzero(scheme.encoding[:, 0]) == 5


def test_channel_state_dealer_is_maximally_mixed(cgl):
    cs = channel_state(cgl)
    dealer = partial_trace(cs.purification, [0])
    assert np.allclose(dealer.matrix, np.eye(3) / 3, atol=1e-12)
    assert isinstance(cs.state, PureState)


def test_mixed_channel_state_is_density(five_minus_one):
    cs = ChannelState(five_minus_one)
    assert isinstance(cs.state, DensityMatrix)
    assert cs.state.dims == (2, 2, 2, 2, 2)


def test_discard_shares(five):
    reduced = discard_shares(five, [5])
    assert reduced.name == "five_qubit-d5"
    assert reduced.active == (1, 2, 3, 4)
    assert reduced.claimed_ramp == (3, None, 4)
    assert not reduced.is_pure
    assert discard_shares(five, []) is five


def test_discard_needs_two_active_players(cgl):
    with pytest.raises(InvalidSubsetError):
        discard_shares(cgl, [1, 2])
    with pytest.raises(InvalidSubsetError):
        discard_shares(cgl, [4])


def test_validate_players(five_minus_one):
    assert five_minus_one.validate_players([3, 1]) == (1, 3)
    with pytest.raises(InvalidSubsetError):
        five_minus_one.validate_players([5])
    assert five_minus_one.complement([1, 2]) == (3, 4, 5)


def test_logical_basis_state_is_pure_for_pure_scheme(cgl):
    state = logical_basis_state(cgl, 1, 2)
    assert isinstance(state, PureState)
    expected = cgl.encoding @ cgl.secret_vector(1, 2).conj()
    assert np.allclose(state.amplitudes, expected)


def test_logical_basis_state_mixed(five_minus_one):
    state = logical_basis_state(five_minus_one, 0, 1)
    assert isinstance(state, DensityMatrix)
    assert state.dims == (2, 2, 2, 2)


def test_non_ideal_scheme_only_computational_basis():
    encoding = np.zeros((9, 2), dtype=complex)
    encoding[0, 0] = encoding[4, 1] = 1
    scheme = Scheme("toy", 3, 2, 2, encoding)
    assert not scheme.is_ideal
    with pytest.raises(NonIdealSchemeError):
        scheme.secret_vector(1, 0)


def test_non_orthonormal_encoding_rejected():
    encoding = np.zeros((4, 2), dtype=complex)
    encoding[0, 0] = encoding[0, 1] = 1
    with pytest.raises(InvariantViolationError):
        Scheme("bad", 2, 2, 2, encoding)


def test_unknown_bundled_scheme():
    with pytest.raises(KeyError):
        bundled_scheme("steane")


@pytest.mark.parametrize("name", ["ghz_3_2", "cgl23", "rs_2_5", "rs_3_7"])
def test_logical_bases_are_mutually_unbiased(name):
    scheme = bundled_scheme(name)
    labels = basis_labels(scheme.q)
    vectors = {
        t: np.array([scheme.logical_vector(t, i) for i in range(scheme.q)]) for t in labels
    }
    for t in labels:
        for u in labels:
            overlaps = np.abs(vectors[t].conj() @ vectors[u].T) ** 2
            expected = np.eye(scheme.q) if t == u else np.full((scheme.q, scheme.q), 1 / scheme.q)
            assert np.allclose(overlaps, expected, atol=1e-10)
