"""Estructura de acceso QQ/RCQ a partir de información mutua cuántica y de Holevo.

Todas las entropías se calculan sobre la purificación del estado canal
(repartidor d + n_total acciones), de modo que nunca se forma la matriz
densidad completa.
"""

import itertools
from enum import StrEnum
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from src.codes.schemes import Scheme, channel_purification
from src.config import settings
from src.exceptions import (
    DimensionMismatchError,
    NonIdealSchemeError,
    TooManyPlayersError,
    UnsupportedBasisError,
)
from src.qudit.operators import basis_labels
from src.qudit.states import DensityMatrix, PureState, entanglement_entropy


class AccessClass(StrEnum):
    AUTHORISED = "authorised"
    UNAUTHORISED = "unauthorised"
    INTERMEDIATE = "intermediate"


class SubsetClassification(BaseModel):
    """Clasificación de un subconjunto B: I(τ;Λ_B), χ por base y clases QQ/RCQ."""

    model_config = ConfigDict(frozen=True)

    subset: Tuple[int, ...]
    i_quantum: float
    chi: Dict[int, float]
    qq_class: AccessClass
    rcq_class: AccessClass
    rcq_class_two_bases: AccessClass
    tolerance: float


class Ramp(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: Optional[int]
    k_prime: int
    n: int

    def as_tuple(self) -> Tuple[Optional[int], int, int]:
        return (self.k, self.k_prime, self.n)

    @property
    def is_perfect_threshold(self) -> bool:
        return self.k is not None and self.k_prime == self.k - 1


class SubsetVerdict(BaseModel):
    subset: Tuple[int, ...]
    qq_auth_implies_rcq_auth: bool
    qq_unauth_implies_rcq_unauth: bool
    rcq_auth_implies_qq_auth: bool
    chi_margin: float
    pair_margin: float
    chi_bound_holds: bool

    @property
    def passed(self) -> bool:
        return (
            self.qq_auth_implies_rcq_auth
            and self.qq_unauth_implies_rcq_unauth
            and self.rcq_auth_implies_qq_auth
            and self.chi_bound_holds
        )


class ImplicationVerdicts(BaseModel):
    subsets: List[SubsetVerdict]
    all_pass: bool
    min_chi_margin: float
    min_pair_margin: float


class AccessReport(BaseModel):
    scheme_name: str
    q: int
    kappa: int
    n: int
    is_pure: bool
    tolerance: float
    classifications: List[SubsetClassification]
    ramp: Ramp
    rcq_ramp: Ramp
    implications: Optional[ImplicationVerdicts] = None
    threshold_consistent: Optional[bool] = None
    rcq_bases_disagree: List[Tuple[int, ...]] = []

    def by_subset(self) -> Dict[Tuple[int, ...], SubsetClassification]:
        return {c.subset: c for c in self.classifications}


class ChannelAnalyzer:
    """Calcula las cantidades informacionales de un esquema para cualquier B.

    Ejemplo:
        >>> analyzer = ChannelAnalyzer(cgl_qutrit_23())
        >>> analyzer.classify((1, 2)).qq_class
        <AccessClass.AUTHORISED: 'authorised'>
    """

    def __init__(self, scheme: Scheme, tol: Optional[float] = None):
        self.scheme = scheme
        self.tol = settings.classification_tol if tol is None else tol
        self.channel = channel_purification(scheme)
        self.bases = basis_labels(scheme.q) if scheme.is_ideal else [0]
        self._logical: Dict[int, List[PureState]] = {}

    @property
    def two_bases(self) -> List[int]:
        return [0, self.scheme.q] if self.scheme.is_ideal else [0]

    def logical_states(self, t: int) -> List[PureState]:
        """Estados |i(t)_L⟩ (purificados sobre las n_total acciones)."""
        if t not in self._logical:
            shape = (self.scheme.q,) * self.scheme.n_total
            size = self.scheme.kappa if t == 0 else self.scheme.q
            self._logical[t] = [
                PureState.normalized(shape, self.scheme.logical_vector(t, i)) for i in range(size)
            ]
        return self._logical[t]

    def subsystem_entropy(self, subset: Iterable[int], with_dealer: bool = False) -> float:
        positions = ((0,) if with_dealer else ()) + tuple(subset)
        return entanglement_entropy(self.channel, positions)

    def quantum_mutual_info(self, subset: Iterable[int]) -> float:
        """I(τ;Λ_B) = S(τ) + S(Λ_B(τ)) - S((id⊗Λ_B)(|Φ⟩⟨Φ|))."""
        subset = self.scheme.validate_players(subset)
        value = (
            np.log2(self.scheme.kappa)
            + self.subsystem_entropy(subset)
            - self.subsystem_entropy(subset, with_dealer=True)
        )
        return float(max(value, 0.0))

    def holevo_chi(self, subset: Iterable[int], t: int) -> float:
        """χ del conjunto {1/q, |r(t)_L⟩} tras el canal Λ_B."""
        subset = self.scheme.validate_players(subset)
        if t not in basis_labels(self.scheme.q):
            raise UnsupportedBasisError(f"t={t} no disponible para q={self.scheme.q}")
        if t != 0 and not self.scheme.is_ideal:
            raise NonIdealSchemeError(f"{self.scheme.name}: χ solo está definido para t=0")
        positions = [p - 1 for p in subset]
        states = self.logical_states(t)
        average = np.mean([entanglement_entropy(s, positions) for s in states])
        return float(max(self.subsystem_entropy(subset) - average, 0.0))

    def _class_from_chi(self, chi: Dict[int, float], labels: Iterable[int]) -> AccessClass:
        log_k = np.log2(self.scheme.kappa)
        values = [chi[t] for t in labels]
        if all(v > log_k - self.tol for v in values):
            return AccessClass.AUTHORISED
        if all(v < self.tol for v in values):
            return AccessClass.UNAUTHORISED
        return AccessClass.INTERMEDIATE

    def classify(self, subset: Iterable[int]) -> SubsetClassification:
        subset = self.scheme.validate_players(subset)
        i_quantum = self.quantum_mutual_info(subset)
        chi = {t: self.holevo_chi(subset, t) for t in self.bases}

        if abs(i_quantum - 2 * np.log2(self.scheme.kappa)) < self.tol:
            qq_class = AccessClass.AUTHORISED
        elif i_quantum < self.tol:
            qq_class = AccessClass.UNAUTHORISED
        else:
            qq_class = AccessClass.INTERMEDIATE

        return SubsetClassification(
            subset=subset,
            i_quantum=i_quantum,
            chi=chi,
            qq_class=qq_class,
            rcq_class=self._class_from_chi(chi, self.bases),
            rcq_class_two_bases=self._class_from_chi(chi, self.two_bases),
            tolerance=self.tol,
        )


def apply_lambda(scheme: Scheme, subset: Iterable[int], rho_in: DensityMatrix) -> DensityMatrix:
    """Λ_B(ρ): codificar, descartar acciones y trazar el complemento de B.

    Raises:
        EmptySubsetError: Si B está vacío
        DimensionMismatchError: Si ρ no es un operador sobre el espacio del secreto
    """
    subset = scheme.validate_players(subset)
    if rho_in.dims != (scheme.kappa,):
        raise DimensionMismatchError(
            f"Se esperaba un estado de dimensión {scheme.kappa}, recibido {rho_in.dims}"
        )
    rest = scheme.complement(subset)
    axes = [p - 1 for p in subset] + [p - 1 for p in rest] + [scheme.n_total]
    dim_b = scheme.q ** len(subset)
    tensor = np.transpose(scheme.encoding_tensor(), axes).reshape(dim_b, -1, scheme.kappa)
    out = np.einsum('bri,ij,crj->bc', tensor, rho_in.matrix, tensor.conj(), optimize=True)
    return DensityMatrix((scheme.q,) * len(subset), (out + out.conj().T) / 2)


def quantum_mutual_info(scheme: Scheme, subset: Iterable[int]) -> float:
    return ChannelAnalyzer(scheme).quantum_mutual_info(subset)


def holevo_chi(scheme: Scheme, subset: Iterable[int], t: int) -> float:
    return ChannelAnalyzer(scheme).holevo_chi(subset, t)


def classify_subset(
    scheme: Scheme, subset: Iterable[int], tol: Optional[float] = None
) -> SubsetClassification:
    return ChannelAnalyzer(scheme, tol).classify(subset)


def all_subsets(players: Iterable[int]) -> List[Tuple[int, ...]]:
    """Subconjuntos no vacíos ordenados por tamaño y luego lexicográficamente."""
    players = tuple(players)
    return [
        combo
        for size in range(1, len(players) + 1)
        for combo in itertools.combinations(players, size)
    ]


def _extract_ramp(classes: Dict[Tuple[int, ...], AccessClass], n: int) -> Ramp:
    """Umbrales de rampa a partir de las clases por tamaño.

    k es el menor tamaño desde el cual todos los conjuntos están autorizados
    (None si ni el conjunto total lo está) y k′ el mayor tamaño hasta el cual
    ningún conjunto obtiene información.
    """
    by_size: Dict[int, List[AccessClass]] = {}
    for subset, cls in classes.items():
        by_size.setdefault(len(subset), []).append(cls)

    k = None
    for size in range(n, 0, -1):
        if all(c == AccessClass.AUTHORISED for c in by_size[size]):
            k = size
        else:
            break
    k_prime = 0
    for size in range(1, n + 1):
        if all(c == AccessClass.UNAUTHORISED for c in by_size[size]):
            k_prime = size
        else:
            break
    return Ramp(k=k, k_prime=k_prime, n=n)


def verify_implications(report: AccessReport) -> ImplicationVerdicts:
    """Comprueba las tres implicaciones QQ/RCQ y la desigualdad χ_t + χ_t' <= I.

    ``chi_margin`` es I - χ_0 - χ_1 (χ_0 - χ_q para q compuesto);
    ``pair_margin`` toma el peor par de bases, así que nunca es mayor.
    """
    tol = report.tolerance
    verdicts = []
    for c in report.classifications:
        labels = sorted(c.chi)
        values = [c.chi[t] for t in labels]
        if len(values) >= 2:
            margin = c.i_quantum - values[0] - values[1]
            pair_margin = c.i_quantum - max(a + b for a, b in itertools.combinations(values, 2))
        else:
            margin = pair_margin = c.i_quantum - values[0]
        qq_auth = c.qq_class == AccessClass.AUTHORISED
        rcq_auth = c.rcq_class == AccessClass.AUTHORISED
        verdicts.append(
            SubsetVerdict(
                subset=c.subset,
                qq_auth_implies_rcq_auth=not qq_auth or rcq_auth,
                qq_unauth_implies_rcq_unauth=(
                    c.qq_class != AccessClass.UNAUTHORISED
                    or c.rcq_class == AccessClass.UNAUTHORISED
                ),
                rcq_auth_implies_qq_auth=not rcq_auth or qq_auth,
                chi_margin=margin,
                pair_margin=pair_margin,
                chi_bound_holds=margin >= -tol and pair_margin >= -tol,
            )
        )
    return ImplicationVerdicts(
        subsets=verdicts,
        all_pass=all(v.passed for v in verdicts),
        min_chi_margin=min(v.chi_margin for v in verdicts),
        min_pair_margin=min(v.pair_margin for v in verdicts),
    )


def analyze_access_structure(
    scheme: Scheme, tol: Optional[float] = None, progress: bool = False
) -> AccessReport:
    """Clasifica todos los subconjuntos no vacíos de jugadores activos.

    Args:
        scheme: Esquema a analizar
        tol: Tolerancia en bits (default: settings.classification_tol)
        progress: Muestra una barra de progreso tqdm

    Returns:
        Informe con clasificaciones, rampas QQ/RCQ y veredictos de las implicaciones QQ/RCQ

    Raises:
        TooManyPlayersError: Si n supera settings.max_players
    """
    if scheme.n > settings.max_players:
        raise TooManyPlayersError(
            f"{scheme.n} jugadores (límite {settings.max_players}): 2^n - 1 subconjuntos"
        )
    analyzer = ChannelAnalyzer(scheme, tol)
    subsets = all_subsets(scheme.active)
    classifications = [
        analyzer.classify(subset)
        for subset in tqdm(subsets, desc="Subconjuntos", unit="subc", disable=not progress)
    ]

    ramp = _extract_ramp({c.subset: c.qq_class for c in classifications}, scheme.n)
    rcq_ramp = _extract_ramp({c.subset: c.rcq_class for c in classifications}, scheme.n)

    threshold_consistent = None
    if scheme.is_pure and ramp.is_perfect_threshold:
        threshold_consistent = scheme.n % 2 == 1 and ramp.k == (scheme.n + 1) // 2

    report = AccessReport(
        scheme_name=scheme.name,
        q=scheme.q,
        kappa=scheme.kappa,
        n=scheme.n,
        is_pure=scheme.is_pure,
        tolerance=analyzer.tol,
        classifications=classifications,
        ramp=ramp,
        rcq_ramp=rcq_ramp,
        threshold_consistent=threshold_consistent,
        rcq_bases_disagree=[
            c.subset for c in classifications if c.rcq_class != c.rcq_class_two_bases
        ],
    )
    report.implications = verify_implications(report)
    return report
