"""Lectura y escritura de archivos de esquema (texto UTF-8).

Formato::

    # comentario
    name=cgl23
    q=3
    kappa=3
    n=3
    discarded=5            (opcional)
    claimed_ramp=2,1,3     (opcional, k' puede ser ?)
    construction=explicit  (o ghz | cgl23 | five_qubit | rs k=2 q=5)
    logical 0
    0 0.57735026918962573 0
    ...
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from src.codes.schemes import (
    Scheme,
    cgl_qutrit_23,
    five_qubit_35,
    ghz_scheme,
    reed_solomon_threshold,
)
from src.exceptions import ParseError, QSSError
from src.qudit.states import SystemShape
from src.utils import atomic_write_text

_HEADER_KEYS = ("name", "q", "kappa", "n", "discarded", "claimed_ramp", "construction")


def _format_float(value: float) -> str:
    return format(float(value), '.17g')


def _construction_line(construction: Optional[Dict]) -> str:
    if not construction:
        return "explicit"
    kind = construction["kind"]
    if kind == "rs":
        return f"rs k={construction['k']} q={construction['q']}"
    return kind


def format_scheme(scheme: Scheme, explicit: bool = False) -> str:
    """Serializa un esquema; con ``explicit`` siempre escribe las amplitudes."""
    lines = [
        f"# Esquema {scheme.name}",
        f"name={scheme.name}",
        f"q={scheme.q}",
        f"kappa={scheme.kappa}",
        f"n={scheme.n_total}",
    ]
    if scheme.discarded:
        lines.append("discarded=" + ",".join(str(p) for p in scheme.discarded))
    if scheme.claimed_ramp is not None:
        k, k_prime, n = scheme.claimed_ramp
        lines.append(
            "claimed_ramp=" + ",".join("?" if v is None else str(v) for v in (k, k_prime, n))
        )
    construction = None if explicit else scheme.construction
    lines.append(f"construction={_construction_line(construction)}")
    if construction is None:
        for i in range(scheme.kappa):
            lines.append(f"logical {i}")
            column = scheme.encoding[:, i]
            for index in np.flatnonzero(np.abs(column) > 0):
                amp = column[index]
                lines.append(f"{index} {_format_float(amp.real)} {_format_float(amp.imag)}")
    return "\n".join(lines) + "\n"


def save_scheme(scheme: Scheme, path: Union[str, Path], explicit: bool = False) -> Path:
    """Escribe el esquema de forma atómica y devuelve la ruta."""
    return atomic_write_text(path, format_scheme(scheme, explicit=explicit))


def _parse_int(value: str, key: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"valor entero inválido para {key}: {value!r}", line)


def _parse_construction(value: str, line: int) -> Dict:
    tokens = value.split()
    if not tokens:
        raise ParseError("construction vacío", line)
    kind, params = tokens[0], {}
    for token in tokens[1:]:
        if "=" not in token:
            raise ParseError(f"parámetro de construcción inválido: {token!r}", line)
        key, raw = token.split("=", 1)
        params[key] = _parse_int(raw, key, line)
    if kind not in ("explicit", "ghz", "cgl23", "five_qubit", "rs"):
        raise ParseError(f"construcción desconocida: {kind!r}", line)
    if kind == "rs" and set(params) != {"k", "q"}:
        raise ParseError("construction=rs requiere k=... q=...", line)
    return {"kind": kind, **params}


def _parse_ramp(value: str, line: int) -> Tuple:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 3:
        raise ParseError(f"claimed_ramp necesita tres valores: {value!r}", line)
    return tuple(None if p == "?" else _parse_int(p, "claimed_ramp", line) for p in parts)


def parse_scheme(text: str) -> Scheme:
    """Interpreta el contenido de un archivo de esquema.

    Raises:
        ParseError: Error de formato, con número de línea
        InvariantViolationError: Si las columnas no son ortonormales
    """
    header: Dict[str, object] = {}
    blocks: Dict[int, List[Tuple[int, complex]]] = {}
    current: Optional[int] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("logical"):
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"cabecera de bloque inválida: {raw!r}", number)
            current = _parse_int(parts[1], "logical", number)
            if current in blocks:
                raise ParseError(f"bloque logical {current} repetido", number)
            blocks[current] = []
            continue
        if "=" in line and current is None:
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in _HEADER_KEYS:
                raise ParseError(f"clave desconocida: {key!r}", number)
            if key in header:
                raise ParseError(f"clave repetida: {key!r}", number)
            if key == "name":
                header[key] = value
            elif key == "discarded":
                header[key] = [_parse_int(v, key, number) for v in value.split(",") if v.strip()]
            elif key == "claimed_ramp":
                header[key] = _parse_ramp(value, number)
            elif key == "construction":
                header[key] = _parse_construction(value, number)
            else:
                header[key] = _parse_int(value, key, number)
            continue
        if current is None:
            raise ParseError(f"línea fuera de un bloque logical: {raw!r}", number)
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"se esperaba 'indice re im': {raw!r}", number)
        index = _parse_int(parts[0], "indice", number)
        try:
            amplitude = complex(float(parts[1]), float(parts[2]))
        except ValueError:
            raise ParseError(f"amplitud inválida: {raw!r}", number)
        blocks[current].append((index, amplitude))

    for key in ("name", "q", "kappa", "n", "construction"):
        if key not in header:
            raise ParseError(f"falta la clave obligatoria {key!r}")
    q, kappa, n = header["q"], header["kappa"], header["n"]
    # la matriz de codificación ocupa kappa·q^n amplitudes
    SystemShape((kappa,) + (q,) * n)
    construction = header["construction"]
    kind = construction["kind"]

    if kind == "explicit":
        if sorted(blocks) != list(range(kappa)):
            raise ParseError(f"se esperaban los bloques logical 0..{kappa - 1}")
        size = q ** n
        encoding = np.zeros((size, kappa), dtype=complex)
        for i, entries in blocks.items():
            for index, amplitude in entries:
                if not 0 <= index < size:
                    raise ParseError(f"índice {index} fuera de rango en logical {i}")
                encoding[index, i] = amplitude
        return Scheme(
            header["name"], q, kappa, n, encoding,
            discarded=header.get("discarded", ()),
            claimed_ramp=header.get("claimed_ramp"),
        )

    if blocks:
        raise ParseError(f"construction={kind} no admite bloques logical")
    if kind == "ghz":
        built = ghz_scheme(n, q)
    elif kind == "cgl23":
        built = cgl_qutrit_23()
    elif kind == "five_qubit":
        built = five_qubit_35()
    else:
        built = reed_solomon_threshold(construction["k"], construction["q"])
    if (built.q, built.kappa, built.n_total) != (q, kappa, n):
        raise ParseError(
            f"la cabecera (q={q}, kappa={kappa}, n={n}) no coincide con construction={kind}"
        )
    return Scheme(
        header["name"], q, kappa, n, built.encoding,
        discarded=header.get("discarded", ()),
        claimed_ramp=header.get("claimed_ramp", built.claimed_ramp),
        construction=built.construction,
    )


def load_scheme(path: Union[str, Path]) -> Scheme:
    """Carga un archivo de esquema.

    Raises:
        FileNotFoundError: Si el archivo no existe
        ParseError: Error de formato
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise ParseError(f"el archivo no es UTF-8: {e}")
    try:
        return parse_scheme(text)
    except QSSError:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise ParseError(str(e))
