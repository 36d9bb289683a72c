"""Utilidades generales: escritura atómica, debug, semillas y helpers."""

import os
import tempfile
from datetime import datetime
from pathlib import Path
from typing import Tuple, Union

import numpy as np

# Flujos de aleatoriedad independientes derivados de una misma semilla
ROUND_STREAM = 0
SAMPLING_STREAM = 1
HASH_STREAM = 2
TRIAL_STREAM = 3


def stream_rng(seed: int, stream: int, index: int = 0) -> np.random.Generator:
    """Generador basado en contador: función pura de (seed, stream, index).

    Args:
        seed: Semilla de 64 bits de la sesión
        stream: Identificador del flujo (rondas, muestreo, hash...)
        index: Índice dentro del flujo (por ejemplo, número de ronda)

    Returns:
        Generador de numpy independiente para esa posición
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(index)))
    return np.random.default_rng(sequence)


def parse_subset(text: str) -> Tuple[int, ...]:
    """Convierte '1,2,3' en (1, 2, 3).

    Raises:
        ValueError: Si algún elemento no es un entero
    """
    items = [item.strip() for item in text.split(",") if item.strip()]
    return tuple(int(item) for item in items)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """Escribe un archivo de texto de forma atómica (temporal + rename).

    Args:
        path: Ruta destino
        text: Contenido

    Returns:
        Ruta escrita
    """
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def create_debug_directory(scheme_name: str) -> str:
    """Crea un directorio de debug con el nombre del esquema y timestamp.

    Args:
        scheme_name: Nombre del esquema simulado

    Returns:
        Ruta del directorio de debug creado

    Raises:
        OSError: Si el directorio no puede ser creado
    """
    timestamp = datetime.now().strftime("%Y-%m-%d_%H-%M-%S")
    debug_dir = f"debug_{scheme_name}_{timestamp}"
    os.makedirs(debug_dir, exist_ok=True)
    return debug_dir


def save_debug_file(text: str, filename: str, debug_dir: str) -> None:
    """Guarda un artefacto de debug (log de rondas, transcript) sin interrumpir la ejecución."""
    filepath = os.path.join(debug_dir, filename)
    try:
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(text)
    except OSError as e:
        print(f"\n⚠️  Advertencia: No se pudo guardar {filename}: {str(e)}")
