"""Construcciones de esquemas de compartición de secretos cuánticos."""

__all__ = [
    "Scheme",
    "ChannelState",
    "ghz_scheme",
    "cgl_qutrit_23",
    "five_qubit_35",
    "reed_solomon_threshold",
    "discard_shares",
    "channel_state",
    "logical_basis_state",
    "bundled_scheme",
    "bundled_schemes",
    "save_scheme",
    "load_scheme",
]


def __getattr__(name):
    """Lazy import para evitar importaciones eagerly."""
    if name in ("save_scheme", "load_scheme"):
        from src.codes import scheme_file
        return getattr(scheme_file, name)
    if name in __all__:
        from src.codes import schemes
        return getattr(schemes, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
