"""Álgebra lineal densa sobre sistemas compuestos de qudits."""

__all__ = [
    "SystemShape",
    "PureState",
    "DensityMatrix",
    "OrthonormalBasis",
    "partial_trace",
    "von_neumann_entropy",
    "entanglement_entropy",
    "pauli_ops",
    "fourier",
    "mub_basis",
    "max_entangled",
]

_STATES = {
    "SystemShape", "PureState", "DensityMatrix", "partial_trace",
    "von_neumann_entropy", "entanglement_entropy",
}


def __getattr__(name):
    """Lazy import para evitar importaciones eagerly."""
    if name in _STATES:
        from src.qudit import states
        return getattr(states, name)
    if name in __all__:
        from src.qudit import operators
        return getattr(operators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
