"""Simulación de los protocolos QQ y RCQ."""

_EXPORTS = {
    "teleport_encode": "qq",
    "qq_run": "qq",
    "qq_trials": "qq",
    "NoiseModel": "rcq",
    "SessionConfig": "rcq",
    "RCQSimulator": "rcq",
    "rcq_round": "rcq",
    "rcq_session": "rcq",
    "exact_sifted_qber": "rcq",
    "privacy_amplification": "privacy",
}

__all__ = list(_EXPORTS)


def __getattr__(name):
    """Lazy import para evitar importaciones eagerly."""
    if name in _EXPORTS:
        import importlib
        module = importlib.import_module(f"src.protocols.{_EXPORTS[name]}")
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
