"""Documento de informe JSON (versión de esquema en el propio documento)."""

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel

from src import __version__
from src.analysis.access import AccessReport
from src.analysis.qecc import QeccReport
from src.codes.schemes import Scheme
from src.utils import atomic_write_text

SCHEMA_VERSION = "1.0"


class SchemeInfo(BaseModel):
    name: str
    q: int
    kappa: int
    n_total: int
    n: int
    discarded: List[int]
    is_pure: bool
    is_ideal: bool
    claimed_ramp: Optional[List[Optional[int]]] = None
    construction: Optional[Dict[str, Any]] = None

    @classmethod
    def from_scheme(cls, scheme: Scheme) -> "SchemeInfo":
        return cls(
            name=scheme.name,
            q=scheme.q,
            kappa=scheme.kappa,
            n_total=scheme.n_total,
            n=scheme.n,
            discarded=list(scheme.discarded),
            is_pure=scheme.is_pure,
            is_ideal=scheme.is_ideal,
            claimed_ramp=list(scheme.claimed_ramp) if scheme.claimed_ramp else None,
            construction=scheme.construction,
        )


class ReportDocument(BaseModel):
    """Informe de ``analyze`` o ``simulate``.

    ``generated_at`` es el único campo que cambia entre ejecuciones idénticas.
    """

    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__
    generated_at: str
    command: str
    scheme: SchemeInfo
    config: Dict[str, Any]
    access: Optional[AccessReport] = None
    qecc: Optional[QeccReport] = None
    ramp_comparison: Optional[str] = None
    simulation: Optional[Dict[str, Any]] = None
    passed: bool = True


def build_report(
    command: str, scheme: Scheme, config: Dict[str, Any], **sections
) -> ReportDocument:
    return ReportDocument(
        generated_at=datetime.now(timezone.utc).isoformat(timespec='seconds'),
        command=command,
        scheme=SchemeInfo.from_scheme(scheme),
        config=config,
        **sections,
    )


def report_json(report: ReportDocument) -> str:
    return report.model_dump_json(indent=2) + "\n"


def write_report(report: ReportDocument, path: Union[str, Path]) -> Path:
    """Escribe el informe de forma atómica (temporal + rename)."""
    return atomic_write_text(path, report_json(report))


def report_schema() -> str:
    """Esquema JSON publicado del informe."""
    return json.dumps(ReportDocument.model_json_schema(), indent=2, ensure_ascii=False) + "\n"
