import pytest

from src.analysis.qecc import (
    BoundStatus,
    bound_report,
    claim_bounds,
    correctable_erasure,
    distance,
    erasure_profile,
)
from src.codes.schemes import bundled_scheme
from src.exceptions import InvalidSubsetError, SchemeMismatchError


def statuses(checks):
    return {c.name: c.status for c in checks}


def test_correctable_erasure_on_cgl(cgl):
    assert correctable_erasure(cgl, (3,)).correctable
    assert correctable_erasure(cgl, ()).correctable
    lost = correctable_erasure(cgl, (2, 3))
    assert not lost.correctable
    assert lost.residual > 0.1


def test_erasure_must_be_proper_subset_of_active(cgl, five_minus_one):
    with pytest.raises(InvalidSubsetError):
        correctable_erasure(cgl, (1, 2, 3))
    with pytest.raises(InvalidSubsetError):
        correctable_erasure(five_minus_one, (5,))
    with pytest.raises(InvalidSubsetError):
        correctable_erasure(cgl, (1, 1))


@pytest.mark.parametrize("name,expected", [("five_qubit", 3), ("cgl23", 2), ("ghz_3_2", 1)])
def test_distance(name, expected):
    assert distance(bundled_scheme(name)) == expected


def test_mixed_scheme_has_no_distance(five_minus_one):
    assert distance(five_minus_one) is None
    profile = erasure_profile(five_minus_one)
    single = [c for c in profile if len(c.erased) == 1]
    assert len(single) == 4 and all(c.correctable for c in single)


@pytest.mark.slow
def test_reed_solomon_37_distance():
    assert distance(bundled_scheme("rs_3_7")) == 3


def test_erasure_profile_is_monotone(five):
    correctable = {c.erased for c in erasure_profile(five) if c.correctable}
    for erased in correctable:
        for smaller in one_smaller(erased):
            assert smaller in correctable


def one_smaller(erased):
    return [tuple(p for p in erased if p != drop) for drop in erased]


def test_claim_bounds_rejects_oversized_threshold():
    checks = statuses(claim_bounds(2, 2, 5, 9))
    assert checks["share_size"] == BoundStatus.FAIL
    assert checks["singleton_kappa"] == BoundStatus.PASS
    assert checks["threshold_k"] == BoundStatus.PASS


def test_claim_bounds_not_applicable_for_mixed():
    checks = claim_bounds(2, 2, 3, 4, pure=False)
    assert all(c.status == BoundStatus.NOT_APPLICABLE for c in checks)


def test_claim_bounds_kappa_above_q():
    assert statuses(claim_bounds(2, 4, 2, 3))["singleton_kappa"] == BoundStatus.FAIL


def test_five_qubit_report(analyses, five):
    report = bound_report(five, analyses("five_qubit"))
    assert report.params == "((5,2,3))_2"
    assert report.all_pass
    assert all(b.status == BoundStatus.PASS for b in report.bounds)
    assert report.duality_exceptions == []
    assert report.claimed_ramp_matches is True


def test_cgl_report(analyses, cgl):
    report = bound_report(cgl, analyses("cgl23"))
    assert report.distance == 2
    assert statuses(report.bounds)["distance_threshold"] == BoundStatus.PASS
    assert report.all_pass


def test_mixed_report_skips_duality(analyses, five_minus_one):
    report = bound_report(five_minus_one, analyses("five_qubit_minus_one"))
    assert report.distance is None
    assert report.params == "((4,2,?))_2"
    assert statuses(report.bounds)["pure_duality"] == BoundStatus.NOT_APPLICABLE
    assert report.discarded == [5]
    assert report.derived_k == 3 and report.derived_k_prime == 2


@pytest.mark.parametrize("name", ["ghz_3_2", "ghz_3_3", "rs_2_5"])
def test_authorised_complement_matches_correctable_erasure(analyses, name):
    report = bound_report(bundled_scheme(name), analyses(name))
    assert report.duality_exceptions == []
    assert report.all_pass


def test_mismatched_analysis(analyses, cgl):
    with pytest.raises(SchemeMismatchError):
        bound_report(cgl, analyses("ghz_3_3"))
