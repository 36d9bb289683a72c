"""Diccionario compartición de secretos ↔ corrección de errores cuánticos.

Borrar E es corregible si y solo si el complemento de E satisface la
condición de borrado. Las cotas se evalúan con aritmética racional exacta.
"""

import itertools
from enum import StrEnum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel

from src.analysis.access import AccessClass, AccessReport, all_subsets
from src.analysis.decoder import erasure_gram
from src.codes.schemes import Scheme
from src.exceptions import InvalidSubsetError, SchemeMismatchError


class BoundStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


class ErasureCheck(BaseModel):
    erased: Tuple[int, ...]
    correctable: bool
    residual: float


class BoundCheck(BaseModel):
    name: str
    status: BoundStatus
    detail: str


class QeccReport(BaseModel):
    scheme_name: str
    n: int
    kappa: int
    q: int
    distance: Optional[int]
    is_pure: bool
    discarded: List[int]
    erasures: List[ErasureCheck]
    derived_k: Optional[int]
    derived_k_prime: int
    bounds: List[BoundCheck]
    duality_exceptions: List[Tuple[int, ...]]
    claimed_ramp_matches: Optional[bool] = None

    @property
    def params(self) -> str:
        d = "?" if self.distance is None else self.distance
        return f"(({self.n},{self.kappa},{d}))_{self.q}"

    @property
    def all_pass(self) -> bool:
        return (
            all(b.status != BoundStatus.FAIL for b in self.bounds)
            and not self.duality_exceptions
            and self.claimed_ramp_matches is not False
        )


def correctable_erasure(scheme: Scheme, erased: Iterable[int]) -> ErasureCheck:
    """¿Se puede recuperar el secreto tras perder las acciones ``erased``?

    Raises:
        InvalidSubsetError: Si E contiene jugadores no activos o es el conjunto completo
    """
    erased = tuple(sorted(int(p) for p in erased))
    if len(set(erased)) != len(erased) or any(p not in scheme.active for p in erased):
        raise InvalidSubsetError(f"Conjunto de borrado inválido para {scheme.name}: {erased}")
    remaining = [p for p in scheme.active if p not in erased]
    if not remaining:
        raise InvalidSubsetError("E debe ser un subconjunto propio de las acciones activas")
    gram = erasure_gram(scheme, remaining)
    return ErasureCheck(
        erased=erased, correctable=gram.satisfied, residual=gram.offdiag_norm
    )


def erasure_profile(scheme: Scheme) -> List[ErasureCheck]:
    """Corregibilidad de cada subconjunto propio de acciones activas (incluido ∅)."""
    candidates = [()] + [s for s in all_subsets(scheme.active) if len(s) < scheme.n]
    return [correctable_erasure(scheme, erased) for erased in candidates]


def _distance_from_profile(profile: List[ErasureCheck], n: int) -> int:
    """d = t + 1, con t el mayor tamaño tal que todo borrado de ese tamaño se corrige."""
    by_size: Dict[int, List[bool]] = {}
    for check in profile:
        by_size.setdefault(len(check.erased), []).append(check.correctable)
    tolerated = 0
    for size in range(1, n):
        if all(by_size.get(size, [False])):
            tolerated = size
        else:
            break
    return tolerated + 1


def distance(scheme: Scheme, profile: Optional[List[ErasureCheck]] = None) -> Optional[int]:
    """d = 1 + mayor e tal que todo borrado de tamaño e es corregible.

    Para esquemas mixtos devuelve None (se informa el perfil de borrados).
    """
    if not scheme.is_pure:
        return None
    profile = erasure_profile(scheme) if profile is None else profile
    return _distance_from_profile(profile, scheme.n)


def claim_bounds(q: int, kappa: int, k: Optional[int], n: int, pure: bool = True,
                 perfect: bool = True) -> List[BoundCheck]:
    """Evalúa las cotas para una afirmación (q, κ, k, n) sin necesitar el esquema."""
    checks = []
    threshold = pure and perfect and k is not None
    ideal = kappa == q

    if threshold:
        ok = kappa <= q
        checks.append(BoundCheck(
            name="singleton_kappa",
            status=BoundStatus.PASS if ok else BoundStatus.FAIL,
            detail=f"κ={kappa} {'<=' if ok else '>'} q={q}",
        ))
    else:
        checks.append(BoundCheck(
            name="singleton_kappa", status=BoundStatus.NOT_APPLICABLE,
            detail="solo para esquemas umbral perfectos puros",
        ))

    share_limit = Fraction(n + 2, 2)
    if threshold and ideal:
        ok = q * q >= share_limit
        checks.append(BoundCheck(
            name="share_size",
            status=BoundStatus.PASS if ok else BoundStatus.FAIL,
            detail=f"q²={q * q} {'>=' if ok else '<'} (n+2)/2={float(share_limit):g}",
        ))
    else:
        checks.append(BoundCheck(
            name="share_size", status=BoundStatus.NOT_APPLICABLE,
            detail="solo para esquemas ideales, puros y umbral perfectos",
        ))

    if threshold:
        ok = q * q >= n - 1
        checks.append(BoundCheck(
            name="mds_advisory",
            status=BoundStatus.PASS if ok else BoundStatus.FAIL,
            detail=f"q²={q * q} {'>=' if ok else '<'} n-1={n - 1} (conjetura MDS, orientativo)",
        ))
        ok = Fraction(k) == Fraction(n + 1, 2)
        checks.append(BoundCheck(
            name="threshold_k",
            status=BoundStatus.PASS if ok else BoundStatus.FAIL,
            detail=f"k={k} {'==' if ok else '!='} (n+1)/2={float(Fraction(n + 1, 2)):g}",
        ))
    else:
        for name in ("mds_advisory", "threshold_k"):
            checks.append(BoundCheck(
                name=name, status=BoundStatus.NOT_APPLICABLE,
                detail="solo para esquemas umbral perfectos puros",
            ))
    return checks


def _duality_check(ramp_k: Optional[int], ramp_k_prime: int, n: int, pure: bool) -> BoundCheck:
    if not pure:
        gap = "?" if ramp_k is None else n - ramp_k
        return BoundCheck(
            name="pure_duality", status=BoundStatus.NOT_APPLICABLE,
            detail=f"esquema mixto: k'={ramp_k_prime}, n-k={gap}",
        )
    if ramp_k is None:
        return BoundCheck(
            name="pure_duality", status=BoundStatus.NOT_APPLICABLE,
            detail="sin umbral k medido",
        )
    ok = ramp_k_prime == n - ramp_k
    return BoundCheck(
        name="pure_duality",
        status=BoundStatus.PASS if ok else BoundStatus.FAIL,
        detail=f"k'={ramp_k_prime} {'==' if ok else '!='} n-k={n - ramp_k}",
    )


def bound_report(scheme: Scheme, analysis: AccessReport) -> QeccReport:
    """Informe QECC: perfil de borrados, distancia, cotas y dualidad.

    Raises:
        SchemeMismatchError: Si el análisis no corresponde al esquema
    """
    if (analysis.scheme_name, analysis.q, analysis.kappa, analysis.n) != (
        scheme.name, scheme.q, scheme.kappa, scheme.n
    ):
        raise SchemeMismatchError(
            f"El análisis de {analysis.scheme_name} no corresponde a {scheme.name}"
        )
    profile = erasure_profile(scheme)
    d = distance(scheme, profile)

    classes = {c.subset: c.qq_class for c in analysis.classifications}
    exceptions = []
    if scheme.is_pure:
        for check in profile:
            if not check.erased:
                continue
            rest = tuple(p for p in scheme.active if p not in check.erased)
            authorised = classes[rest] == AccessClass.AUTHORISED
            if authorised != check.correctable:
                exceptions.append(rest)

    ramp = analysis.ramp
    bounds = claim_bounds(
        scheme.q, scheme.kappa, ramp.k, scheme.n,
        pure=scheme.is_pure, perfect=ramp.is_perfect_threshold,
    )
    bounds.append(_duality_check(ramp.k, ramp.k_prime, scheme.n, scheme.is_pure))
    if d is not None and ramp.k is not None and ramp.is_perfect_threshold:
        ok = d == scheme.n - ramp.k + 1
        bounds.append(BoundCheck(
            name="distance_threshold",
            status=BoundStatus.PASS if ok else BoundStatus.FAIL,
            detail=f"d={d} {'==' if ok else '!='} n-k+1={scheme.n - ramp.k + 1}",
        ))

    claimed_matches = None
    if scheme.claimed_ramp is not None:
        claimed_matches = all(
            c is None or c == m
            for c, m in zip(scheme.claimed_ramp, ramp.as_tuple())
        )

    return QeccReport(
        scheme_name=scheme.name,
        n=scheme.n,
        kappa=scheme.kappa,
        q=scheme.q,
        distance=d,
        is_pure=scheme.is_pure,
        discarded=list(scheme.discarded),
        erasures=profile,
        derived_k=ramp.k,
        derived_k_prime=ramp.k_prime,
        bounds=bounds,
        duality_exceptions=exceptions,
        claimed_ramp_matches=claimed_matches,
    )


def no_cloning_violations(analysis: AccessReport) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Pares de subconjuntos disjuntos clasificados ambos como autorizados QQ."""
    authorised = [
        c.subset for c in analysis.classifications if c.qq_class == AccessClass.AUTHORISED
    ]
    return [
        (a, b) for a, b in itertools.combinations(authorised, 2) if not set(a) & set(b)
    ]
