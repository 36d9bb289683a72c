"""Formateadores de salida para los resultados del análisis y la simulación."""

from typing import List

from src.analysis.access import AccessClass, AccessReport
from src.analysis.qecc import BoundStatus, QeccReport
from src.protocols.qq import QQTrialsSummary
from src.protocols.rcq import SessionTranscript

_CLASS_MARK = {
    AccessClass.AUTHORISED: "✅",
    AccessClass.UNAUTHORISED: "🔒",
    AccessClass.INTERMEDIATE: "⚠️ ",
}

_STATUS_MARK = {
    BoundStatus.PASS: "✅",
    BoundStatus.FAIL: "❌",
    BoundStatus.NOT_APPLICABLE: "➖",
}


def _ramp_text(ramp) -> str:
    k = "?" if ramp.k is None else ramp.k
    return f"({k},{ramp.k_prime},{ramp.n})"


def ramp_comparison_line(report: AccessReport) -> str:
    """Resumen de la relación RCQ ↔ QQ: (n,k,k') RCQ frente a (n,k,n-k) QQ."""
    qq, rcq = report.ramp, report.rcq_ramp
    same_k = qq.k == rcq.k
    if qq.k is None:
        dual = "n/a"
    else:
        dual = "sí" if rcq.k_prime >= report.n - qq.k else "no"
    return (
        f"Relación de rampas: RCQ {_ramp_text(rcq)} ↔ QQ {_ramp_text(qq)} | "
        f"mismo k: {'sí' if same_k else 'no'} | k'_RCQ >= n-k: {dual}"
    )


def format_access_table(report: AccessReport) -> str:
    """Tabla por subconjunto con I(τ;Λ_B), χ_t y las clases QQ/RCQ.

    Ejemplo:
        >>> print(format_access_table(analyze_access_structure(cgl_qutrit_23())))
    """
    output = [
        f"{'=' * 80}",
        f"Esquema {report.scheme_name}: q={report.q}, κ={report.kappa}, n={report.n}, "
        f"{'puro' if report.is_pure else 'mixto'}",
        f"{'=' * 80}",
    ]
    for c in report.classifications:
        chi = ", ".join(f"χ{t}={v:.4f}" for t, v in sorted(c.chi.items()))
        output.append(
            f"  {_CLASS_MARK[c.qq_class]} B={list(c.subset)}  I={c.i_quantum:.4f}  {chi}"
        )
        output.append(
            f"     QQ: {c.qq_class}  RCQ: {c.rcq_class}  RCQ(2 bases): {c.rcq_class_two_bases}"
        )

    output.append("")
    output.append(
        f"📐 Rampa QQ: {_ramp_text(report.ramp)}   Rampa RCQ: {_ramp_text(report.rcq_ramp)}"
    )
    if report.implications is not None:
        verdict = "✅ se cumplen" if report.implications.all_pass else "❌ fallan"
        output.append(
            f"🔍 Implicaciones QQ/RCQ: {verdict} "
            f"(margen I-χ0-χ1 mínimo {report.implications.min_chi_margin:.3e}, "
            f"peor par {report.implications.min_pair_margin:.3e})"
        )
    if report.threshold_consistent is False:
        output.append("⚠️  Umbral perfecto puro con k != (n+1)/2")
    if report.rcq_bases_disagree:
        output.append(f"⚠️  Clases RCQ distintas con dos bases: {report.rcq_bases_disagree}")
    output.append(ramp_comparison_line(report))
    return "\n".join(output)


def format_qecc(report: QeccReport) -> str:
    output = [f"🧩 Código {report.params}  (descartadas: {report.discarded or 'ninguna'})"]
    for bound in report.bounds:
        output.append(f"  {_STATUS_MARK[bound.status]} {bound.name}: {bound.detail}")
    if report.duality_exceptions:
        output.append(f"  ❌ Excepciones de dualidad: {report.duality_exceptions}")
    if report.claimed_ramp_matches is False:
        output.append("  ❌ La rampa declarada no coincide con la medida")
    return "\n".join(output)


def format_qq_summary(summary: QQTrialsSummary) -> str:
    return "\n".join([
        f"🔐 QQ {summary.scheme_name} B={list(summary.subset)}: {summary.trials} ensayos",
        f"   Fidelidad mínima: {summary.min_fidelity:.12f}",
        f"   Fidelidad media:  {summary.mean_fidelity:.12f}",
    ])


def format_session(transcript: SessionTranscript) -> str:
    summary = transcript.summary()
    lines: List[str] = [
        f"🔑 RCQ {summary['scheme']} B={summary['subset']}: {summary['rounds']} rondas "
        f"({transcript.config.noise.describe()})",
        f"   Tamizadas: {summary['sifted']} (tasa {summary['sift_rate']:.4f})",
    ]
    if summary["qber_estimate"] is None:
        lines.append("   QBER: sin dígitos de prueba")
    else:
        lines.append(
            f"   QBER: {summary['qber_estimate']:.4f} ± {summary['qber_sigma']:.4f} "
            f"(umbral {summary['abort_qber']})"
        )
    if transcript.aborted:
        lines.append("   ❌ Sesión abortada")
    else:
        lines.append(f"   ✅ Clave final: {summary['final_key_length']} dígitos")
    return "\n".join(lines)
