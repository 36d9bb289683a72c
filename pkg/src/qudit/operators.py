"""Operadores de Pauli generalizados, transformada de Fourier y bases complementarias."""

import warnings
from typing import Dict, List, Tuple

import galois
import numpy as np

from src.exceptions import InvariantViolationError, NonPrimeWarning, UnsupportedBasisError
from src.qudit.states import PureState

ORTHO_TOL = 1e-10
PHASE_TIE_TOL = 1e-9


class OrthonormalBasis:
    """Base ortonormal {|i(t)⟩} de un qudit de dimensión q.

    ``vectors[i]`` es el vector con etiqueta i. ``metadata`` registra avisos
    como el de dimensión compuesta.
    """

    def __init__(self, dim: int, label: int, vectors: np.ndarray, metadata: Dict = None):
        vectors = np.array(vectors, dtype=complex)
        if vectors.shape != (dim, dim):
            raise InvariantViolationError(f"Se esperaban {dim} vectores de dimensión {dim}")
        if np.max(np.abs(vectors.conj() @ vectors.T - np.eye(dim))) > ORTHO_TOL:
            raise InvariantViolationError(f"La base t={label} no es ortonormal")
        vectors.flags.writeable = False
        self.dim = dim
        self.label = label
        self.vectors = vectors
        self.metadata = dict(metadata or {})

    def __getitem__(self, i: int) -> np.ndarray:
        return self.vectors[i]

    def __len__(self) -> int:
        return self.dim

    def conjugate(self) -> "OrthonormalBasis":
        """Base conjugada {conj|i(t)⟩}, la que miden los jugadores en RCQ."""
        metadata = dict(self.metadata, conjugated=True)
        return OrthonormalBasis(self.dim, self.label, self.vectors.conj(), metadata)

    def overlaps(self, other: "OrthonormalBasis") -> np.ndarray:
        """Matriz |⟨i(t)|j(t')⟩|²."""
        return np.abs(self.vectors.conj() @ other.vectors.T) ** 2


def is_prime(q: int) -> bool:
    """Primalidad de q con galois; decide cuántas bases complementarias hay."""
    return bool(galois.is_prime(int(q)))


def basis_labels(q: int) -> List[int]:
    """Etiquetas t disponibles: {0..q} para q primo, {0, q} en otro caso."""
    return list(range(q + 1)) if is_prime(q) else [0, q]


def pauli_ops(q: int) -> Tuple[np.ndarray, np.ndarray, complex]:
    """Operadores X, Z y la raíz ω = e^{2πi/q}.

    X|i⟩ = |i+1 mod q⟩ y Z|i⟩ = ω^i|i⟩, de modo que ZX = ωXZ.
    """
    if q < 2:
        raise ValueError(f"q debe ser >= 2, recibido {q}")
    omega = np.exp(2j * np.pi / q)
    x = np.roll(np.eye(q, dtype=complex), 1, axis=0)
    z = np.diag(omega ** np.arange(q))
    return x, z, omega


def fourier(q: int) -> np.ndarray:
    """Transformada de Fourier U_jk = ω^{jk}/√q."""
    if q < 2:
        raise ValueError(f"q debe ser >= 2, recibido {q}")
    j, k = np.meshgrid(np.arange(q), np.arange(q), indexing='ij')
    return np.exp(2j * np.pi * j * k / q) / np.sqrt(q)


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    # primera componente no nula real positiva
    pivot = vector[np.flatnonzero(np.abs(vector) > ORTHO_TOL)[0]]
    return vector * (abs(pivot) / pivot)


def mub_basis(q: int, t: int) -> OrthonormalBasis:
    """Base propia de X^tZ (t en 0..q-1) o de X (t = q).

    Las etiquetas salen de los autovalores: se divide por el autovalor de mayor
    parte real (empate: mayor parte imaginaria) y el vector con fase 2πi/q
    recibe la etiqueta i. Fase de cada vector: primera componente no nula real
    positiva.

    Raises:
        UnsupportedBasisError: Si t está fuera de rango o q es compuesto y t ∉ {0, q}
    """
    prime = is_prime(q)
    if not 0 <= t <= q:
        raise UnsupportedBasisError(f"t={t} fuera de rango para q={q}")
    if not prime and t not in (0, q):
        raise UnsupportedBasisError(
            f"q={q} es compuesto: solo se admiten las bases t=0 y t={q}"
        )
    if not prime:
        warnings.warn(
            f"q={q} no es primo: bases complementarias parciales", NonPrimeWarning, stacklevel=2
        )
    metadata = {} if prime else {"warnings": ["NonPrimeWarning: dimensión compuesta"]}

    if t == 0:
        return OrthonormalBasis(q, 0, np.eye(q, dtype=complex), metadata)

    x, z, _ = pauli_ops(q)
    operator = x if t == q else np.linalg.matrix_power(x, t) @ z
    eigenvalues, eigenvectors = np.linalg.eig(operator)

    reference = max(
        eigenvalues,
        key=lambda v: (round(v.real / PHASE_TIE_TOL), round(v.imag / PHASE_TIE_TOL)),
    )
    phases = np.angle(eigenvalues / reference)
    labels = np.round(phases * q / (2 * np.pi)).astype(int) % q
    if len(set(labels.tolist())) != q:
        raise InvariantViolationError(f"Etiquetado ambiguo de la base t={t}, q={q}")

    vectors = np.empty((q, q), dtype=complex)
    for column, label in enumerate(labels):
        v = eigenvectors[:, column]
        vectors[label] = _fix_phase(v / np.linalg.norm(v))
    return OrthonormalBasis(q, t, vectors, metadata)


def max_entangled(q: int) -> PureState:
    """|Φ_q⟩ = (1/√q) Σ_i |ii⟩."""
    amplitudes = np.eye(q, dtype=complex).reshape(-1) / np.sqrt(q)
    return PureState((q, q), amplitudes)
