"""Jerarquía de errores del analizador."""

from typing import Optional


class QSSError(Exception):
    """Error base de todas las operaciones del paquete."""


class DimensionGuardError(QSSError):
    """El sistema excede el límite de amplitudes o de matriz densa configurado."""


class EmptySubsetError(QSSError):
    """Se pidió un subconjunto vacío de jugadores o de sistemas."""


class InvalidSubsetError(QSSError):
    """Posiciones inválidas: fuera de rango, repetidas o ya descartadas."""


class DimensionMismatchError(QSSError):
    """Las dimensiones de un estado u operador no coinciden con el esquema."""


class UnsupportedBasisError(QSSError):
    """Etiqueta de base no disponible para la dimensión pedida."""


class NonIdealSchemeError(QSSError):
    """La operación requiere un esquema ideal (kappa == q)."""


class FieldTooSmallError(QSSError):
    """El cuerpo GF(q) no tiene suficientes puntos de evaluación."""


class NotPrimeError(QSSError):
    """La dimensión debe ser un número primo."""


class InvariantViolationError(QSSError):
    """Un objeto construido no cumple sus invariantes."""


class TooManyPlayersError(QSSError):
    """Demasiados jugadores para un análisis exhaustivo de subconjuntos."""


class LengthError(QSSError):
    """Longitud de clave inválida."""


class SchemeMismatchError(QSSError):
    """Un informe no corresponde al esquema indicado."""


class ParseError(QSSError):
    """Error de formato en un archivo de esquema."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"línea {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class NotAuthorizedError(QSSError):
    """El subconjunto no satisface la condición de borrado (no está autorizado)."""

    def __init__(self, subset, residual: float):
        self.subset = tuple(subset)
        self.residual = residual
        super().__init__(
            f"El conjunto {list(self.subset)} no está autorizado "
            f"(residuo de la condición de borrado: {residual:.3e})"
        )


class NonPrimeWarning(UserWarning):
    """Dimensión compuesta: solo están disponibles las bases t=0 y t=q."""
