"""Síntesis del decodificador Γ_B a partir de la condición de borrado.

Cada |i_L⟩ se reorganiza como una matriz M_i (filas: acciones de B, columnas:
complemento, incluidas las descartadas). B recupera el secreto si y solo si
M_i†M_j = δ_ij σ. Con σ = Σ λ_k |e_k⟩⟨e_k| los vectores
v_ik = M_i|e_k⟩/√λ_k son ortonormales y W v_ik = |i⟩|k⟩.
"""

from functools import cached_property
from math import ceil
from typing import Iterable, Tuple

import numpy as np

from src.codes.schemes import Scheme
from src.config import settings
from src.exceptions import (
    DimensionGuardError,
    DimensionMismatchError,
    InvariantViolationError,
    NotAuthorizedError,
)
from src.qudit.states import PureState

JUNK_FIDELITY_TOL = 1e-10
ISOMETRY_TOL = 1e-10


def share_matrices(scheme: Scheme, subset: Iterable[int]) -> np.ndarray:
    """Tensor (κ, d_B, d_R): M_i para cada vector lógico."""
    subset = scheme.validate_players(subset)
    rest = scheme.complement(subset)
    axes = [p - 1 for p in subset] + [p - 1 for p in rest] + [scheme.n_total]
    dim_b = scheme.q ** len(subset)
    tensor = np.transpose(scheme.encoding_tensor(), axes).reshape(dim_b, -1, scheme.kappa)
    return np.moveaxis(tensor, -1, 0)


def reshape_for_subset(scheme: Scheme, subset: Tuple[int, ...], vector: np.ndarray) -> np.ndarray:
    """Vector sobre las n_total acciones como matriz (d_B, d_resto)."""
    rest = scheme.complement(subset)
    tensor = np.asarray(vector).reshape((scheme.q,) * scheme.n_total)
    axes = [p - 1 for p in subset] + [p - 1 for p in rest]
    return np.transpose(tensor, axes).reshape(scheme.q ** len(subset), -1)


class ErasureGram:
    """Bloques G_ij = M_i†M_j en la forma reducida.

    Cuando κ·d_B < d_R las matrices M_i se proyectan sobre el espacio de filas
    de su apilamiento (base ortonormal W), de modo que los bloques tienen
    tamaño r x r con r <= κ·d_B. Las normas de Frobenius no cambian.
    """

    def __init__(self, scheme: Scheme, subset: Iterable[int]):
        self.scheme = scheme
        self.subset = scheme.validate_players(subset)
        self.matrices = share_matrices(scheme, self.subset)
        kappa, dim_b, dim_r = self.matrices.shape
        self.dim_b = dim_b
        self.dim_r = dim_r

        if kappa * dim_b < dim_r:
            stacked = self.matrices.reshape(kappa * dim_b, dim_r)
            _, singular, vh = np.linalg.svd(stacked, full_matrices=False)
            rank = int(np.sum(singular > settings.rank_cutoff))
            basis = vh[:rank].conj().T
            self.reduced = self.matrices @ basis
        else:
            self.reduced = self.matrices

        self.blocks = np.einsum('ibr,jbs->ijrs', self.reduced.conj(), self.reduced, optimize=True)

    @cached_property
    def sigma(self) -> np.ndarray:
        """σ: promedio de los bloques diagonales."""
        diagonal = np.einsum('iirs->irs', self.blocks)
        return diagonal.mean(axis=0)

    @cached_property
    def offdiag_norm(self) -> float:
        kappa = self.scheme.kappa
        worst = 0.0
        for i in range(kappa):
            for j in range(kappa):
                block = self.blocks[i, j] - (self.sigma if i == j else 0.0)
                worst = max(worst, float(np.linalg.norm(block)))
        return worst

    @property
    def satisfied(self) -> bool:
        return self.offdiag_norm < settings.erasure_tol


def erasure_gram(scheme: Scheme, subset: Iterable[int]) -> ErasureGram:
    """Evalúa la condición de borrado M_i†M_j = δ_ij σ para el conjunto B.

    Raises:
        EmptySubsetError: Si B está vacío
        InvalidSubsetError: Si B contiene jugadores no activos
    """
    return ErasureGram(scheme, subset)


class Decoder:
    """Operación Γ_B: isometría de las acciones de B a b′ ⊗ basura.

    ``recovery`` guarda la isometría parcial sobre el soporte del código
    (filas ⟨v_ik|, índice i·rank + k). ``isometry`` completa W sobre el
    complemento ortogonal con Gram–Schmidt en el orden de la base
    computacional; la salida tiene dimensión κ·J con J = ceil(d_B/κ) y el
    vector v_ik va a la posición i·J + k.
    """

    def __init__(
        self,
        scheme_name: str,
        q: int,
        subset: Tuple[int, ...],
        kappa: int,
        recovery: np.ndarray,
        junk_state: np.ndarray,
    ):
        self.scheme_name = scheme_name
        self.q = q
        self.subset = subset
        self.kappa = kappa
        self.rank = recovery.shape[0] // kappa
        self.dim_b = recovery.shape[1]
        self.junk_dim = ceil(self.dim_b / kappa)
        recovery.flags.writeable = False
        self.recovery = recovery
        self.junk_state = junk_state

    def __repr__(self) -> str:
        return (
            f"Decoder(scheme={self.scheme_name!r}, subset={list(self.subset)}, "
            f"rank={self.rank}, junk_dim={self.junk_dim})"
        )

    @property
    def output_dim(self) -> int:
        return self.kappa * self.junk_dim

    @property
    def can_materialize(self) -> bool:
        return self.output_dim <= settings.max_density_dim

    @cached_property
    def isometry(self) -> np.ndarray:
        """Isometría completa W (κ·J x d_B).

        Raises:
            DimensionGuardError: Si κ·J supera settings.max_density_dim
        """
        if not self.can_materialize:
            raise DimensionGuardError(
                f"Isometría de {self.output_dim}x{self.dim_b} excede el límite "
                f"{settings.max_density_dim}"
            )
        support = self.recovery.conj().T
        columns = np.hstack([support, np.eye(self.dim_b, dtype=complex)])
        q_matrix, _ = np.linalg.qr(columns)
        complement = q_matrix[:, support.shape[1]:]

        targets = [i * self.junk_dim + k for i in range(self.kappa) for k in range(self.rank)]
        taken = set(targets)
        free = [index for index in range(self.output_dim) if index not in taken]
        isometry = np.zeros((self.output_dim, self.dim_b), dtype=complex)
        isometry[targets] = self.recovery
        isometry[free[: complement.shape[1]]] = complement.conj().T

        deviation = np.max(np.abs(isometry.conj().T @ isometry - np.eye(self.dim_b)))
        if deviation > ISOMETRY_TOL:
            raise InvariantViolationError(f"W†W != I (desviación {deviation:.3e})")
        isometry.flags.writeable = False
        return isometry

    def apply(self, matrix: np.ndarray) -> np.ndarray:
        """Aplica Γ_B a una matriz (d_B, d_resto); devuelve (κ, J·d_resto).

        Usa la isometría completa si cabe en el límite. En otro caso aplica la
        isometría parcial, que solo conserva la traza sobre el soporte del
        código.

        Raises:
            DimensionMismatchError: Si la matriz no tiene d_B filas
            DimensionGuardError: Si la isometría no cabe y la entrada tiene
                peso fuera del soporte del código
        """
        matrix = np.asarray(matrix)
        if matrix.shape[0] != self.dim_b:
            raise DimensionMismatchError(
                f"El decodificador espera d_B={self.dim_b}, recibido {matrix.shape[0]}"
            )
        if self.can_materialize:
            out = self.isometry @ matrix
            return out.reshape(self.kappa, -1)
        out = self.recovery @ matrix
        mass = float(np.vdot(matrix, matrix).real)
        leak = mass - float(np.vdot(out, out).real)
        if leak > ISOMETRY_TOL * max(mass, 1.0):
            raise DimensionGuardError(
                f"La entrada tiene peso {leak:.3e} fuera del soporte del código y la "
                f"isometría de {self.output_dim}x{self.dim_b} excede el límite "
                f"{settings.max_density_dim}"
            )
        return out.reshape(self.kappa, -1)

    def output_state(self, matrix: np.ndarray) -> np.ndarray:
        """Matriz reducida (sin normalizar) de b′ tras aplicar Γ_B."""
        out = self.apply(matrix)
        return out @ out.conj().T


def synthesize_decoder(scheme: Scheme, subset: Iterable[int]) -> Decoder:
    """Construye Γ_B para un conjunto autorizado.

    Args:
        scheme: Esquema (los mixtos se decodifican sobre la purificación)
        subset: Jugadores de B (base 1)

    Returns:
        Decodificador certificado: basura independiente de la entrada

    Raises:
        NotAuthorizedError: Si la condición de borrado no se cumple
    """
    gram = erasure_gram(scheme, subset)
    if not gram.satisfied:
        raise NotAuthorizedError(gram.subset, gram.offdiag_norm)

    eigenvalues, eigenvectors = np.linalg.eigh((gram.sigma + gram.sigma.conj().T) / 2)
    keep = eigenvalues > settings.rank_cutoff
    eigenvalues, eigenvectors = eigenvalues[keep], eigenvectors[:, keep]

    # v_ik = M_i e_k / √λ_k, filas de la isometría parcial
    vectors = np.einsum('ibr,rk->ibk', gram.reduced, eigenvectors) / np.sqrt(eigenvalues)
    recovery = np.transpose(vectors, (0, 2, 1)).reshape(-1, gram.dim_b).conj()

    gram_check = recovery @ recovery.conj().T
    deviation = np.max(np.abs(gram_check - np.eye(recovery.shape[0])))
    if deviation > ISOMETRY_TOL:
        raise InvariantViolationError(f"Los vectores v_ik no son ortonormales ({deviation:.3e})")

    junk = _certify_junk(scheme, gram, recovery)
    return Decoder(scheme.name, scheme.q, gram.subset, scheme.kappa, recovery, junk)


def _certify_junk(scheme: Scheme, gram: ErasureGram, recovery: np.ndarray) -> np.ndarray:
    # cada |i_L⟩ debe salir como |i⟩ ⊗ basura común
    kappa = scheme.kappa
    rank = recovery.shape[0] // kappa
    junk_states = []
    for i in range(kappa):
        out = (recovery @ gram.matrices[i]).reshape(kappa, rank, gram.dim_r)
        leak = np.linalg.norm(np.delete(out, i, axis=0))
        if leak > np.sqrt(JUNK_FIDELITY_TOL):
            raise InvariantViolationError(f"|{i}_L⟩ no se decodifica en |{i}⟩ ({leak:.3e})")
        junk_states.append(out[i].reshape(-1))

    reference = junk_states[0]
    for i, junk in enumerate(junk_states[1:], start=1):
        overlap = abs(np.vdot(reference, junk)) ** 2
        if overlap < 1 - JUNK_FIDELITY_TOL:
            raise InvariantViolationError(
                f"El estado basura depende de la entrada (fidelidad {overlap:.12f} para i={i})"
            )
    return reference.reshape(rank, gram.dim_r)


def recovery_fidelity(scheme: Scheme, decoder: Decoder, secret: PureState) -> float:
    """Codifica ``secret``, aplica Γ_B y devuelve ⟨ζ|ρ_b′|ζ⟩.

    Raises:
        DimensionMismatchError: Si el secreto o el decodificador no encajan con el esquema
    """
    if secret.dims != (scheme.kappa,):
        raise DimensionMismatchError(
            f"El secreto debe tener dimensión {scheme.kappa}, tiene {secret.dims}"
        )
    subset = decoder.subset
    if decoder.kappa != scheme.kappa or decoder.dim_b != scheme.q ** len(subset):
        raise DimensionMismatchError(
            f"El decodificador de {decoder.scheme_name} no corresponde a {scheme.name}"
        )
    encoded = scheme.encoding @ secret.amplitudes
    rho = decoder.output_state(reshape_for_subset(scheme, scheme.validate_players(subset), encoded))
    value = np.vdot(secret.amplitudes, rho @ secret.amplitudes).real
    return float(min(max(value, 0.0), 1.0))
