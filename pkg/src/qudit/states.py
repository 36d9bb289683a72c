"""Estados densos sobre sistemas compuestos de qudits.

Convención de índices: índice de radix mixto con la posición 0 como el
dígito más lento (orden de ``numpy.reshape`` en C).
"""

from math import prod
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from src.config import settings
from src.exceptions import (
    DimensionGuardError,
    DimensionMismatchError,
    EmptySubsetError,
    InvalidSubsetError,
    InvariantViolationError,
)

NORM_TOL = 1e-12
PSD_SLACK = -1e-10


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.flags.writeable = False
    return array


class SystemShape:
    """Dimensiones locales de un sistema compuesto.

    Ejemplo:
        >>> shape = SystemShape((3, 3, 3))
        >>> shape.total_dim
        27
    """

    def __init__(self, dims: Iterable[int]):
        self.dims: Tuple[int, ...] = tuple(int(d) for d in dims)
        if not self.dims:
            raise InvariantViolationError("Un sistema necesita al menos una dimensión local")
        if any(d < 2 for d in self.dims):
            raise InvariantViolationError(f"Toda dimensión local debe ser >= 2: {self.dims}")
        self.total_dim = prod(self.dims)
        if self.total_dim > settings.max_amplitudes:
            raise DimensionGuardError(
                f"El sistema {self.dims} tiene {self.total_dim} amplitudes "
                f"(límite: {settings.max_amplitudes})"
            )

    def __len__(self) -> int:
        return len(self.dims)

    def __eq__(self, other) -> bool:
        return isinstance(other, SystemShape) and self.dims == other.dims

    def __hash__(self) -> int:
        return hash(self.dims)

    def __repr__(self) -> str:
        return f"SystemShape({self.dims})"

    def sub(self, positions: Sequence[int]) -> "SystemShape":
        return SystemShape(self.dims[p] for p in positions)

    def validate_positions(self, positions: Iterable[int]) -> Tuple[int, ...]:
        """Ordena y valida un conjunto de posiciones (base 0).

        Raises:
            EmptySubsetError: Si no hay posiciones
            InvalidSubsetError: Si alguna posición está fuera de rango o repetida
        """
        positions = list(positions)
        if not positions:
            raise EmptySubsetError("El subconjunto de sistemas está vacío")
        if len(set(positions)) != len(positions):
            raise InvalidSubsetError(f"Posiciones repetidas: {positions}")
        for p in positions:
            if not 0 <= p < len(self.dims):
                raise InvalidSubsetError(f"Posición {p} fuera de rango para {self.dims}")
        return tuple(sorted(positions))


class PureState:
    """Vector de amplitudes normalizado sobre un SystemShape."""

    def __init__(self, shape: Union[SystemShape, Sequence[int]], amplitudes: np.ndarray):
        self.shape = shape if isinstance(shape, SystemShape) else SystemShape(shape)
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != self.shape.total_dim:
            raise DimensionMismatchError(
                f"Se esperaban {self.shape.total_dim} amplitudes, hay {amplitudes.size}"
            )
        norm = np.vdot(amplitudes, amplitudes).real
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantViolationError(f"Estado no normalizado (norma² = {norm:.15f})")
        self.amplitudes = _frozen(amplitudes)

    @classmethod
    def normalized(cls, shape, amplitudes: np.ndarray) -> "PureState":
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(shape, amplitudes / np.linalg.norm(amplitudes))

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.shape.dims

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.shape, np.outer(self.amplitudes, self.amplitudes.conj()))


class DensityMatrix:
    """Operador hermítico, de traza uno y semidefinido positivo."""

    def __init__(self, shape: Union[SystemShape, Sequence[int]], matrix: np.ndarray):
        self.shape = shape if isinstance(shape, SystemShape) else SystemShape(shape)
        dim = self.shape.total_dim
        if dim > settings.max_density_dim:
            raise DimensionGuardError(
                f"Matriz densa de dimensión {dim} excede el límite {settings.max_density_dim}"
            )
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (dim, dim):
            raise DimensionMismatchError(f"Se esperaba una matriz {dim}x{dim}, hay {matrix.shape}")
        if np.max(np.abs(matrix - matrix.conj().T), initial=0.0) > NORM_TOL:
            raise InvariantViolationError("La matriz densidad no es hermítica")
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > NORM_TOL:
            raise InvariantViolationError(f"Traza distinta de 1: {trace:.15f}")
        if np.linalg.eigvalsh(matrix).min() < PSD_SLACK:
            raise InvariantViolationError("La matriz densidad no es semidefinida positiva")
        self.matrix = _frozen(matrix)

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityMatrix":
        shape = SystemShape(dims)
        return cls(shape, np.eye(shape.total_dim) / shape.total_dim)

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.shape.dims


def _hermitize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2


def partial_trace(state: Union[PureState, DensityMatrix], keep: Iterable[int]) -> DensityMatrix:
    """Traza parcial conservando las posiciones ``keep`` en su orden original.

    Args:
        state: Estado puro o matriz densidad
        keep: Posiciones (base 0) que se conservan

    Returns:
        Matriz densidad de los subsistemas conservados

    Raises:
        EmptySubsetError: Si ``keep`` está vacío
    """
    keep = state.shape.validate_positions(keep)
    dims = state.dims
    rest = tuple(p for p in range(len(dims)) if p not in keep)
    kept_shape = state.shape.sub(keep)
    dim_keep = kept_shape.total_dim
    dim_rest = prod(dims[p] for p in rest)

    if isinstance(state, PureState):
        m = np.transpose(state.tensor(), keep + rest).reshape(dim_keep, dim_rest)
        reduced = m @ m.conj().T
    else:
        n = len(dims)
        tensor = state.matrix.reshape(dims + dims)
        axes = keep + rest + tuple(n + p for p in keep + rest)
        t = np.transpose(tensor, axes).reshape(dim_keep, dim_rest, dim_keep, dim_rest)
        reduced = np.einsum('arbr->ab', t)
    return DensityMatrix(kept_shape, _hermitize(reduced))


def _entropy_from_spectrum(values: np.ndarray) -> float:
    """Entropía en bits de un espectro; los valores bajo eigen_clamp no cuentan."""
    values = np.clip(np.real(values), 0.0, None)
    values = values[values > settings.eigen_clamp]
    return float(max(-np.sum(values * np.log2(values)), 0.0))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropía de von Neumann en bits: S(ρ) = -tr(ρ log₂ ρ)."""
    return _entropy_from_spectrum(np.linalg.eigvalsh(rho.matrix))


def schmidt_coefficients(state: PureState, keep: Iterable[int]) -> np.ndarray:
    """Cuadrados de los coeficientes de Schmidt de la bipartición keep | resto."""
    keep = state.shape.validate_positions(keep)
    dims = state.dims
    rest = tuple(p for p in range(len(dims)) if p not in keep)
    dim_keep = prod(dims[p] for p in keep)
    m = np.transpose(state.tensor(), keep + rest).reshape(dim_keep, -1)
    return np.linalg.svd(m, compute_uv=False) ** 2


def entanglement_entropy(state: PureState, keep: Iterable[int]) -> float:
    """Entropía del subsistema ``keep`` de un estado puro, sin formar ρ completa."""
    keep = tuple(keep)
    if len(keep) == len(state.dims):
        return 0.0
    return _entropy_from_spectrum(schmidt_coefficients(state, keep))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Distancia de traza ½‖ρ - σ‖₁ entre dos matrices densidad.

    Raises:
        DimensionMismatchError: Si las formas de ρ y σ no coinciden
    """
    if rho.shape != sigma.shape:
        raise DimensionMismatchError(f"{rho.dims} != {sigma.dims}")
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(rho.matrix - sigma.matrix))))


def fidelity(psi: PureState, rho: DensityMatrix) -> float:
    """Fidelidad ⟨ψ|ρ|ψ⟩ entre un estado puro y una matriz densidad."""
    if psi.shape != rho.shape:
        raise DimensionMismatchError(f"{psi.dims} != {rho.dims}")
    value = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes).real
    return float(min(max(value, 0.0), 1.0))


def random_pure_state(dim: int, rng: np.random.Generator) -> PureState:
    """Estado de Haar de dimensión ``dim`` (gaussiana compleja normalizada)."""
    amplitudes = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.normalized((dim,), amplitudes)
