"""Análisis de estructuras de acceso, decodificadores y cotas QECC."""

_EXPORTS = {
    "ChannelAnalyzer": "access",
    "analyze_access_structure": "access",
    "classify_subset": "access",
    "quantum_mutual_info": "access",
    "holevo_chi": "access",
    "apply_lambda": "access",
    "verify_implications": "access",
    "erasure_gram": "decoder",
    "synthesize_decoder": "decoder",
    "recovery_fidelity": "decoder",
    "correctable_erasure": "qecc",
    "distance": "qecc",
    "claim_bounds": "qecc",
    "bound_report": "qecc",
}

__all__ = list(_EXPORTS)


def __getattr__(name):
    """Lazy import para evitar importaciones eagerly."""
    if name in _EXPORTS:
        import importlib
        module = importlib.import_module(f"src.analysis.{_EXPORTS[name]}")
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
