"""Protocolo QQ: codificación por teletransporte y decodificación por el conjunto B."""

from typing import Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from src.analysis.decoder import Decoder, reshape_for_subset, synthesize_decoder
from src.codes.schemes import Scheme
from src.exceptions import DimensionMismatchError, NonIdealSchemeError
from src.qudit.operators import pauli_ops
from src.qudit.states import DensityMatrix, PureState, fidelity, random_pure_state
from src.utils import TRIAL_STREAM, stream_rng


class TeleportResult:
    """Estado de los jugadores tras la medida de Bell y la corrección lógica."""

    def __init__(self, players_state: PureState, outcome: Tuple[int, int], probability: float):
        self.players_state = players_state
        self.outcome = outcome
        self.probability = probability


class QQResult(BaseModel):
    subset: Tuple[int, ...]
    outcome: Tuple[int, int]
    fidelity: float


class QQTrialsSummary(BaseModel):
    scheme_name: str
    subset: Tuple[int, ...]
    trials: int
    seed: int
    min_fidelity: float
    mean_fidelity: float
    outcome_counts: List[int]


def _bell_operator(q: int, a: int, b: int) -> np.ndarray:
    x, z, _ = pauli_ops(q)
    return np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)


def teleport_encode(scheme: Scheme, secret: PureState, rng: np.random.Generator) -> TeleportResult:
    """Medida de Bell extendida sobre (secreto, d) y corrección V X^a Z^b V†.

    Los estados de Bell son Φ_ab = (X^a Z^b ⊗ I)Φ. Tras el resultado (a, b) los
    jugadores tienen V Z^-b X^-a |ζ⟩, con probabilidad 1/q².

    Raises:
        NonIdealSchemeError: Si kappa != q
        DimensionMismatchError: Si el secreto no tiene dimensión q
    """
    if not scheme.is_ideal:
        raise NonIdealSchemeError(f"{scheme.name}: el teletransporte requiere kappa == q")
    q = scheme.q
    if secret.dims != (q,):
        raise DimensionMismatchError(f"El secreto debe tener dimensión {q}, tiene {secret.dims}")

    channel = scheme.encoding.T / np.sqrt(q)
    joint = np.einsum('s,dp->sdp', secret.amplitudes, channel)

    branches = []
    for a in range(q):
        for b in range(q):
            bell = _bell_operator(q, a, b) / np.sqrt(q)
            branches.append(np.einsum('sd,sdp->p', bell.conj(), joint))
    probabilities = np.array([np.vdot(v, v).real for v in branches])
    index = int(rng.choice(q * q, p=probabilities / probabilities.sum()))
    a, b = divmod(index, q)

    encoding = scheme.encoding
    logical = encoding.conj().T @ branches[index]
    corrected = encoding @ (_bell_operator(q, a, b) @ logical)
    state = PureState.normalized((q,) * scheme.n_total, corrected)
    return TeleportResult(state, (a, b), float(probabilities[index]))


def decode_players(
    scheme: Scheme, decoder: Decoder, players_state: PureState
) -> DensityMatrix:
    """Aplica Γ_B sobre las acciones de B y devuelve el estado de b′."""
    matrix = reshape_for_subset(scheme, decoder.subset, players_state.amplitudes)
    rho = decoder.output_state(matrix)
    rho = rho / np.trace(rho).real
    return DensityMatrix((scheme.kappa,), (rho + rho.conj().T) / 2)


def qq_run(
    scheme: Scheme,
    subset: Iterable[int],
    secret: PureState,
    rng: np.random.Generator,
    decoder: Optional[Decoder] = None,
) -> QQResult:
    """Teletransporte al esquema y recuperación por B.

    Raises:
        NotAuthorizedError: Si B no está autorizado
    """
    subset = scheme.validate_players(subset)
    decoder = decoder or synthesize_decoder(scheme, subset)
    teleported = teleport_encode(scheme, secret, rng)
    recovered = decode_players(scheme, decoder, teleported.players_state)
    return QQResult(
        subset=subset, outcome=teleported.outcome, fidelity=fidelity(secret, recovered)
    )


def qq_trials(
    scheme: Scheme, subset: Iterable[int], trials: int, seed: int, progress: bool = False
) -> QQTrialsSummary:
    """Ejecuta ``trials`` secretos aleatorios (Haar) y resume las fidelidades."""
    subset = scheme.validate_players(subset)
    decoder = synthesize_decoder(scheme, subset)
    fidelities = []
    counts = [0] * (scheme.q ** 2)
    for index in tqdm(range(trials), desc="Ensayos QQ", unit="ens", disable=not progress):
        rng = stream_rng(seed, TRIAL_STREAM, index)
        secret = random_pure_state(scheme.kappa, rng)
        result = qq_run(scheme, subset, secret, rng, decoder)
        fidelities.append(result.fidelity)
        a, b = result.outcome
        counts[a * scheme.q + b] += 1
    return QQTrialsSummary(
        scheme_name=scheme.name,
        subset=subset,
        trials=trials,
        seed=seed,
        min_fidelity=float(np.min(fidelities)),
        mean_fidelity=float(np.mean(fidelities)),
        outcome_counts=counts,
    )
