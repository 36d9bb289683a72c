import numpy as np
import pytest

from src.codes.scheme_file import format_scheme, load_scheme, parse_scheme, save_scheme
from src.codes.schemes import discard_shares, reed_solomon_threshold
from src.exceptions import DimensionGuardError, ParseError


def test_explicit_fixture_matches_construction(explicit_scheme_path, cgl):
    loaded = load_scheme(explicit_scheme_path)
    assert loaded.name == "cgl23"
    assert loaded.claimed_ramp == (2, 1, 3)
    assert np.allclose(loaded.encoding, cgl.encoding, atol=1e-15)


def test_construction_file_roundtrip(tmp_path):
    scheme = reed_solomon_threshold(2, 5)
    path = save_scheme(scheme, tmp_path / "rs25.scheme")
    text = path.read_text(encoding="utf-8")
    assert "construction=rs k=2 q=5" in text
    assert "logical" not in text
    loaded = load_scheme(path)
    assert np.array_equal(loaded.encoding, scheme.encoding)
    assert loaded.construction == {"kind": "rs", "k": 2, "q": 5}


def test_explicit_roundtrip_keeps_discarded(tmp_path, five):
    scheme = discard_shares(five, [5])
    path = save_scheme(scheme, tmp_path / "five.scheme", explicit=True)
    loaded = load_scheme(path)
    assert loaded.discarded == (5,)
    assert loaded.claimed_ramp == (3, None, 4)
    assert np.allclose(loaded.encoding, scheme.encoding, atol=1e-15)


def test_claimed_ramp_with_unknown_k_prime(cgl):
    text = format_scheme(cgl).replace("claimed_ramp=2,1,3", "claimed_ramp=2,?,3")
    assert parse_scheme(text).claimed_ramp == (2, None, 3)


@pytest.mark.parametrize(
    "text,line",
    [
        ("name=x\ncolour=3\n", 2),
        ("name=x\nq=tres\n", 2),
        ("name=x\nq=3\nq=3\n", 3),
        ("0 1 0\n", 1),
        ("name=x\nq=2\nkappa=2\nn=1\nconstruction=explicit\nlogical 0\n0 uno 0\n", 7),
        ("name=x\nq=2\nkappa=2\nn=1\nconstruction=steane\n", 5),
    ],
)
def test_parse_errors_report_line(text, line):
    with pytest.raises(ParseError) as excinfo:
        parse_scheme(text)
    assert excinfo.value.line == line
    assert f"línea {line}" in str(excinfo.value)


def test_missing_key():
    with pytest.raises(ParseError, match="name"):
        parse_scheme("q=3\nkappa=3\nn=3\nconstruction=cgl23\n")


def test_index_out_of_range():
    text = "name=x\nq=2\nkappa=2\nn=1\nconstruction=explicit\nlogical 0\n5 1 0\nlogical 1\n1 1 0\n"
    with pytest.raises(ParseError, match="fuera de rango"):
        parse_scheme(text)


def test_header_must_match_construction():
    with pytest.raises(ParseError, match="no coincide"):
        parse_scheme("name=g\nq=3\nkappa=3\nn=4\nconstruction=cgl23\n")


def test_non_utf8_file(tmp_path):
    path = tmp_path / "bad.scheme"
    path.write_bytes(b"name=\xff\xfe\n")
    with pytest.raises(ParseError):
        load_scheme(path)


def test_oversized_explicit_file_hits_guard_before_allocating():
    text = ("name=grande\nq=2\nkappa=2\nn=40\nconstruction=explicit\n"
            "logical 0\n0 1 0\nlogical 1\n1 1 0\n")
    with pytest.raises(DimensionGuardError, match="amplitudes"):
        parse_scheme(text)
