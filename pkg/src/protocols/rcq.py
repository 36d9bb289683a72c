"""Protocolo RCQ: rondas de medida, tamizado, estimación del QBER y amplificación.

En cada ronda el repartidor elige t y proyecta d sobre |r(t)⟩, de modo que
los jugadores quedan con V conj|r(t)⟩. Los jugadores de B aplican Γ_B y miden
b′ en la base conjugada {conj|s(t')⟩}; si t = t' y no hay ruido, s = r.

El ruido se modela como una mezcla de ramas puras (twirl de Pauli, medida
de Eve, borrado anunciado), así que las distribuciones de salida son exactas
y el oráculo ``exact_sifted_qber`` enumera las mismas ramas.
"""

from enum import StrEnum
from math import floor, sqrt
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from tqdm import tqdm

from src.analysis.decoder import Decoder, reshape_for_subset, synthesize_decoder
from src.codes.schemes import Scheme
from src.config import settings
from src.exceptions import (
    InvalidSubsetError,
    NonIdealSchemeError,
    NotAuthorizedError,
    UnsupportedBasisError,
)
from src.protocols.privacy import privacy_amplification
from src.qudit.operators import basis_labels, mub_basis, pauli_ops
from src.utils import ROUND_STREAM, SAMPLING_STREAM, stream_rng

DEALER = "dealer"
OUTPUT = "output"
STRATEGIES = ("computational", "random")


class NoiseKind(StrEnum):
    NONE = "none"
    DEPOLARIZING = "depolarizing"
    ERASURE = "erasure"
    INTERCEPT_RESEND = "intercept_resend"


class NoiseModel(BaseModel):
    """Modelo de ruido de una sesión.

    ``target`` es una acción (base 1), "dealer" o "output" (sistema b′
    decodificado). ``strategy`` solo aplica a intercept_resend:
    "computational", "random" o una base fija t.
    """

    model_config = ConfigDict(frozen=True)

    kind: NoiseKind = NoiseKind.NONE
    target: Optional[Union[int, str]] = None
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    strategy: Optional[Union[int, str]] = None

    @model_validator(mode='after')
    def check_target(self) -> "NoiseModel":
        if self.kind == NoiseKind.NONE:
            return self
        if self.target is None:
            raise ValueError(f"El ruido {self.kind} necesita un objetivo")
        if isinstance(self.target, str) and self.target not in (DEALER, OUTPUT):
            raise ValueError(f"Objetivo de ruido desconocido: {self.target!r}")
        if isinstance(self.target, str) and self.kind != NoiseKind.DEPOLARIZING:
            raise ValueError(f"{self.kind} solo admite una acción como objetivo")
        if self.kind == NoiseKind.INTERCEPT_RESEND:
            if self.strategy is None:
                raise ValueError("intercept_resend necesita una estrategia de base")
            if isinstance(self.strategy, str) and self.strategy not in STRATEGIES:
                raise ValueError(f"Estrategia desconocida: {self.strategy!r}")
        return self

    @classmethod
    def parse(cls, text: str) -> "NoiseModel":
        """Interpreta 'kind:target:param', por ejemplo 'depolarizing:3:0.2',
        'erasure:2:0.5' o 'intercept_resend:1:computational'."""
        parts = [p.strip() for p in text.split(":")]
        if parts == ["none"]:
            return cls()
        if len(parts) != 3:
            raise ValueError(f"Ruido inválido {text!r}: se esperaba kind:target:param")
        kind, target, param = parts
        target = int(target) if target.isdigit() else target
        if kind == NoiseKind.INTERCEPT_RESEND:
            strategy = int(param) if param.isdigit() else param
            return cls(kind=kind, target=target, p=1.0, strategy=strategy)
        return cls(kind=kind, target=target, p=float(param))

    def describe(self) -> str:
        if self.kind == NoiseKind.NONE:
            return "sin ruido"
        if self.kind == NoiseKind.INTERCEPT_RESEND:
            return f"intercept_resend en la acción {self.target} (base {self.strategy})"
        return f"{self.kind} p={self.p:g} sobre {self.target}"


class SessionConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    rounds: int = Field(ge=1)
    seed: int = Field(default_factory=lambda: settings.default_seed)
    noise: NoiseModel = NoiseModel()
    abort_qber: float = Field(default_factory=lambda: settings.abort_qber, ge=0.0, le=1.0)
    test_fraction: float = Field(default_factory=lambda: settings.test_fraction, gt=0.0, lt=1.0)
    pa_output_rate: float = Field(
        default_factory=lambda: settings.pa_output_rate, gt=0.0, le=1.0
    )


class RoundRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    t: int
    r: int
    t_prime: int
    s: int
    sifted: bool

    def log_line(self) -> str:
        return f"{self.index} {self.t} {self.r} {self.t_prime} {self.s} {int(self.sifted)}"


class SessionTranscript(BaseModel):
    scheme_name: str
    subset: Tuple[int, ...]
    q: int
    config: SessionConfig
    rounds: List[RoundRecord]
    sifted_key_dealer: List[int]
    sifted_key_players: List[int]
    test_indices: List[int]
    qber_estimate: Optional[float]
    qber_sigma: Optional[float]
    aborted: bool
    final_key: List[int]
    final_key_players: List[int]
    key_disagreement_rate: Optional[float]

    @property
    def sift_rate(self) -> float:
        return len(self.sifted_key_dealer) / len(self.rounds)

    def summary(self) -> Dict:
        """Resumen sin el registro de rondas (para el informe JSON)."""
        return {
            "scheme": self.scheme_name,
            "subset": list(self.subset),
            "rounds": len(self.rounds),
            "seed": self.config.seed,
            "noise": self.config.noise.model_dump(mode='json'),
            "sifted": len(self.sifted_key_dealer),
            "sift_rate": self.sift_rate,
            "test_digits": len(self.test_indices),
            "qber_estimate": self.qber_estimate,
            "qber_sigma": self.qber_sigma,
            "abort_qber": self.config.abort_qber,
            "aborted": self.aborted,
            "final_key_length": len(self.final_key),
            "final_keys_match": self.final_key == self.final_key_players,
            "key_disagreement_rate": self.key_disagreement_rate,
        }

    def round_log(self) -> str:
        """Registro de rondas: una línea 'round t r t' s sifted' por ronda."""
        lines = ["# round t r t' s sifted"]
        lines += [record.log_line() for record in self.rounds]
        return "\n".join(lines) + "\n"


def _apply_on_share(vector: np.ndarray, scheme: Scheme, share: int, operator: np.ndarray):
    """Aplica ``operator`` sobre la acción ``share`` (base 1) del vector completo."""
    tensor = np.asarray(vector).reshape((scheme.q,) * scheme.n_total)
    out = np.tensordot(operator, tensor, axes=([1], [share - 1]))
    return np.moveaxis(out, 0, share - 1).reshape(-1)


Branch = Tuple[float, np.ndarray, Decoder]


class RCQSimulator:
    """Distribuciones exactas de salida y muestreo de rondas para (esquema, B, ruido).

    Las distribuciones P(s | t, r, t') se calculan una vez y se guardan en caché.
    """

    def __init__(
        self,
        scheme: Scheme,
        subset: Iterable[int],
        noise: Optional[NoiseModel] = None,
        decoder: Optional[Decoder] = None,
    ):
        if not scheme.is_ideal:
            raise NonIdealSchemeError(f"{scheme.name}: RCQ requiere kappa == q")
        self.scheme = scheme
        self.subset = scheme.validate_players(subset)
        self.noise = noise or NoiseModel()
        self._check_noise()
        self.decoder = decoder or synthesize_decoder(scheme, self.subset)
        self.labels = basis_labels(scheme.q)
        self.bases = {t: mub_basis(scheme.q, t) for t in self.labels}
        # b′ se mide en la base conjugada {conj|s(t′)⟩}
        self.player_bases = {t: basis.conjugate() for t, basis in self.bases.items()}
        self._distributions: Dict[Tuple[int, int, int], np.ndarray] = {}
        self._erasure_decoder: Optional[Decoder] = None
        self._erasure_resolved = False

    def _check_noise(self) -> None:
        target = self.noise.target
        if self.noise.kind == NoiseKind.NONE or isinstance(target, str):
            return
        if target not in self.scheme.active:
            raise InvalidSubsetError(
                f"El objetivo del ruido ({target}) no es una acción activa de {self.scheme.name}"
            )
        strategy = self.noise.strategy
        if isinstance(strategy, int) and strategy not in basis_labels(self.scheme.q):
            raise UnsupportedBasisError(f"Base t={strategy} no disponible para q={self.scheme.q}")

    def erasure_decoder(self) -> Optional[Decoder]:
        """Decodificador de B sin la acción borrada, o None si ya no está autorizado."""
        if not self._erasure_resolved:
            self._erasure_resolved = True
            smaller = [p for p in self.subset if p != self.noise.target]
            if smaller:
                try:
                    self._erasure_decoder = synthesize_decoder(self.scheme, smaller)
                except NotAuthorizedError:
                    self._erasure_decoder = None
        return self._erasure_decoder

    def _twirl(self, vector: np.ndarray, share: int, p: float) -> List[Branch]:
        x, z, _ = pauli_ops(self.scheme.q)
        q = self.scheme.q
        branches = [(1.0 - p, vector, self.decoder)]
        for a in range(q):
            for b in range(q):
                operator = np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
                twirled = _apply_on_share(vector, self.scheme, share, operator)
                branches.append((p / q ** 2, twirled, self.decoder))
        return branches

    def _intercept(self, vector: np.ndarray, share: int) -> List[Branch]:
        strategy = self.noise.strategy
        if strategy == "computational":
            eve_bases = [0]
        elif strategy == "random":
            eve_bases = self.labels
        else:
            eve_bases = [int(strategy)]
        branches = []
        for t_eve in eve_bases:
            for e in range(self.scheme.q):
                v = self.bases[t_eve][e]
                projected = _apply_on_share(vector, self.scheme, share, np.outer(v, v.conj()))
                branches.append((1.0 / len(eve_bases), projected, self.decoder))
        return branches

    def player_branches(self, vector: np.ndarray) -> List[Branch]:
        """Ramas (peso, vector no normalizado, decodificador) tras el ruido sobre las acciones."""
        noise = self.noise
        if noise.kind == NoiseKind.NONE or isinstance(noise.target, str):
            return [(1.0, vector, self.decoder)]
        share = int(noise.target)
        if noise.kind == NoiseKind.DEPOLARIZING:
            return self._twirl(vector, share, noise.p)
        if noise.kind == NoiseKind.ERASURE:
            if share not in self.subset:
                return [(1.0, vector, self.decoder)]
            smaller = self.erasure_decoder()
            if smaller is not None:
                return [(1.0 - noise.p, vector, self.decoder), (noise.p, vector, smaller)]
            return self._twirl(vector, share, noise.p)
        return self._intercept(vector, share)

    def measure(self, vector: np.ndarray, decoder: Decoder, t_prime: int) -> np.ndarray:
        """Probabilidades (no normalizadas) de s al medir b′ en {conj|s(t')⟩}."""
        matrix = reshape_for_subset(self.scheme, decoder.subset, vector)
        out = decoder.apply(matrix)
        amplitudes = self.player_bases[t_prime].vectors.conj() @ out
        return np.sum(np.abs(amplitudes) ** 2, axis=1)

    def _players_distribution(self, t: int, r: int, t_prime: int) -> np.ndarray:
        key = (t, r, t_prime)
        if key not in self._distributions:
            vector = self.scheme.logical_vector(t, r)
            total = np.zeros(self.scheme.q)
            for weight, branch, decoder in self.player_branches(vector):
                if weight > 0:
                    total += weight * self.measure(branch, decoder, t_prime)
            # Γ_B conserva la traza; solo se absorbe el redondeo
            self._distributions[key] = total / total.sum()
        return self._distributions[key]

    def outcome_distribution(self, t: int, r: int, t_prime: int) -> np.ndarray:
        """P(s | t, r, t') incluyendo el ruido sobre el repartidor o la salida."""
        for label in (t, t_prime):
            if label not in self.labels:
                raise UnsupportedBasisError(f"t={label} no disponible para q={self.scheme.q}")
        q = self.scheme.q
        dist = self._players_distribution(t, r, t_prime)
        noise = self.noise
        if noise.kind == NoiseKind.DEPOLARIZING and noise.target == DEALER:
            unrelated = np.mean([self._players_distribution(t, x, t_prime) for x in range(q)], 0)
            dist = (1.0 - noise.p) * dist + noise.p * unrelated
        elif noise.kind == NoiseKind.DEPOLARIZING and noise.target == OUTPUT:
            dist = (1.0 - noise.p) * dist + noise.p / q
        return dist

    def round(self, index: int, rng: np.random.Generator) -> RoundRecord:
        labels = self.labels
        t = labels[int(rng.integers(len(labels)))]
        r = int(rng.integers(self.scheme.q))
        t_prime = labels[int(rng.integers(len(labels)))]
        dist = self.outcome_distribution(t, r, t_prime)
        s = int(rng.choice(self.scheme.q, p=dist))
        return RoundRecord(index=index, t=t, r=r, t_prime=t_prime, s=s, sifted=t == t_prime)

    def exact_sifted_qber(self) -> float:
        """QBER tamizado exacto: promedio sobre t y r de P(s != r | t, r, t)."""
        q = self.scheme.q
        errors = [
            1.0 - self.outcome_distribution(t, r, t)[r] for t in self.labels for r in range(q)
        ]
        return float(np.mean(errors))


def rcq_round(
    scheme: Scheme,
    subset: Iterable[int],
    decoder: Decoder,
    rng: np.random.Generator,
    noise: Optional[NoiseModel] = None,
    index: int = 0,
) -> RoundRecord:
    """Una ronda RCQ con el decodificador dado.

    Raises:
        NonIdealSchemeError: Si kappa != q
    """
    return RCQSimulator(scheme, subset, noise, decoder).round(index, rng)


def exact_sifted_qber(
    scheme: Scheme, subset: Iterable[int], noise: Optional[NoiseModel] = None
) -> float:
    """Oráculo: QBER tamizado esperado enumerando bases, resultados y ramas de ruido."""
    return RCQSimulator(scheme, subset, noise).exact_sifted_qber()


def rcq_session(
    scheme: Scheme,
    subset: Iterable[int],
    config: SessionConfig,
    progress: bool = False,
    simulator: Optional[RCQSimulator] = None,
) -> SessionTranscript:
    """Sesión completa: rondas, tamizado, estimación del QBER, aborto y hash final.

    La ronda i usa el generador stream_rng(seed, ROUND_STREAM, i); el muestreo de
    los dígitos de prueba y el hash usan flujos propios de la misma semilla.

    Raises:
        NotAuthorizedError: Si B no está autorizado
    """
    simulator = simulator or RCQSimulator(scheme, subset, config.noise)
    q = scheme.q
    records = [
        simulator.round(index, stream_rng(config.seed, ROUND_STREAM, index))
        for index in tqdm(
            range(config.rounds), desc="Rondas RCQ", unit="ronda", disable=not progress
        )
    ]
    sifted = [record for record in records if record.sifted]
    dealer_key = [record.r for record in sifted]
    players_key = [record.s for record in sifted]

    n_test = int(len(sifted) * config.test_fraction)
    sampler = stream_rng(config.seed, SAMPLING_STREAM)
    test_indices = sorted(int(i) for i in sampler.choice(len(sifted), size=n_test, replace=False))
    test_set = set(test_indices)

    if n_test:
        errors = sum(dealer_key[i] != players_key[i] for i in test_indices)
        qber = errors / n_test
        qber_sigma = sqrt(qber * (1.0 - qber) / n_test)
        aborted = qber > config.abort_qber
    else:
        qber = qber_sigma = None
        aborted = True

    remaining = [i for i in range(len(sifted)) if i not in test_set]
    dealer_rest = [dealer_key[i] for i in remaining]
    players_rest = [players_key[i] for i in remaining]
    disagreement = (
        sum(a != b for a, b in zip(dealer_rest, players_rest)) / len(remaining)
        if remaining else None
    )

    final_key: List[int] = []
    final_key_players: List[int] = []
    if not aborted:
        out_len = floor(config.pa_output_rate * len(remaining))
        final_key = privacy_amplification(dealer_rest, out_len, config.seed, q)
        final_key_players = privacy_amplification(players_rest, out_len, config.seed, q)

    return SessionTranscript(
        scheme_name=scheme.name,
        subset=simulator.subset,
        q=q,
        config=config,
        rounds=records,
        sifted_key_dealer=dealer_key,
        sifted_key_players=players_key,
        test_indices=test_indices,
        qber_estimate=qber,
        qber_sigma=qber_sigma,
        aborted=aborted,
        final_key=final_key,
        final_key_players=final_key_players,
        key_disagreement_rate=disagreement,
    )
