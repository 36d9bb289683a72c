import numpy as np
import pytest

from src.exceptions import LengthError
from src.protocols.privacy import privacy_amplification, toeplitz_matrix


@pytest.fixture
def key():
    return [int(d) for d in np.random.default_rng(99).integers(3, size=200)]


def test_same_seed_same_output(key):
    first = privacy_amplification(key, 80, seed=4, q=3)
    assert first == privacy_amplification(key, 80, seed=4, q=3)


def test_output_digits_in_alphabet(key):
    out = privacy_amplification(key, 100, seed=1, q=3)
    assert len(out) == 100
    assert set(out) <= {0, 1, 2}


def test_seeds_produce_different_hashes(key):
    reference = privacy_amplification(key, 64, seed=0, q=3)
    differing = sum(privacy_amplification(key, 64, seed=s, q=3) != reference for s in range(1, 201))
    assert differing >= 190


def test_toeplitz_structure():
    matrix = toeplitz_matrix(4, 6, seed=2, q=5)
    assert matrix.shape == (4, 6)
    for i in range(1, 4):
        assert np.array_equal(matrix[i, 1:], matrix[i - 1, :-1])


def test_empty_output():
    assert privacy_amplification([1, 0, 1], 0, seed=3) == []


def test_length_errors():
    with pytest.raises(LengthError):
        privacy_amplification([1, 0, 1], 4, seed=3)
    with pytest.raises(LengthError):
        privacy_amplification([1, 0, 1], -1, seed=3)


def test_digits_out_of_range():
    with pytest.raises(ValueError):
        privacy_amplification([0, 2, 1], 2, seed=3, q=2)
