"""Fixtures compartidas: esquemas incluidos y sus análisis (una vez por sesión)."""

from pathlib import Path

import numpy as np
import pytest

from src.analysis.access import analyze_access_structure
from src.codes.schemes import bundled_scheme, cgl_qutrit_23, five_qubit_35, ghz_scheme

FIXTURES = Path(__file__).parent / "fixtures"

# esquemas incluidos pequeños: el análisis exhaustivo tarda poco
FAST_SCHEMES = [
    "ghz_2_2", "ghz_3_2", "ghz_4_2", "ghz_2_3", "ghz_3_3", "ghz_4_3",
    "cgl23", "five_qubit", "rs_2_5", "five_qubit_minus_one",
]


@pytest.fixture(scope="session")
def cgl():
    return cgl_qutrit_23()


@pytest.fixture(scope="session")
def five():
    return five_qubit_35()


@pytest.fixture(scope="session")
def five_minus_one():
    return bundled_scheme("five_qubit_minus_one")


@pytest.fixture(scope="session")
def ghz32():
    return ghz_scheme(3, 2)


@pytest.fixture(scope="session")
def analyses():
    """Informes de acceso por nombre de esquema, calculados a demanda."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = analyze_access_structure(bundled_scheme(name))
        return cache[name]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def explicit_scheme_path():
    return FIXTURES / "cgl23_explicit.scheme"
