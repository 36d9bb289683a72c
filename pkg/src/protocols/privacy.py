"""Amplificación de privacidad con hash de Toeplitz sobre Z_q."""

from typing import List, Sequence

import numpy as np
from scipy.linalg import toeplitz

from src.exceptions import LengthError
from src.utils import HASH_STREAM, stream_rng


def toeplitz_matrix(rows: int, columns: int, seed: int, q: int) -> np.ndarray:
    """Matriz de Toeplitz aleatoria (rows x columns) con entradas en Z_q."""
    rng = stream_rng(seed, HASH_STREAM)
    first_column = rng.integers(q, size=rows)
    first_row = rng.integers(q, size=columns)
    first_row[0] = first_column[0]
    return toeplitz(first_column, first_row)


def privacy_amplification(key: Sequence[int], out_len: int, seed: int, q: int = 2) -> List[int]:
    """Comprime la clave tamizada: salida = T·key mod q.

    Args:
        key: Dígitos en {0, ..., q-1}
        out_len: Longitud de la clave final (<= len(key))
        seed: Semilla del hash (compartida por el repartidor y los jugadores)
        q: Tamaño del alfabeto

    Returns:
        Lista de out_len dígitos

    Raises:
        LengthError: Si out_len es negativo o mayor que la clave
        ValueError: Si algún dígito está fuera de Z_q
    """
    key = np.asarray(key, dtype=np.int64)
    if out_len < 0 or out_len > key.size:
        raise LengthError(f"out_len={out_len} inválido para una clave de {key.size} dígitos")
    if key.size and (key.min() < 0 or key.max() >= q):
        raise ValueError(f"La clave contiene dígitos fuera de Z_{q}")
    if out_len == 0:
        return []
    matrix = toeplitz_matrix(out_len, key.size, seed, q)
    return [int(d) for d in (matrix @ key) % q]
