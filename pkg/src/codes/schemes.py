"""Esquemas de compartición de secretos: bases lógicas, estado canal y esquemas mixtos.

Los jugadores (acciones) se etiquetan 1..n_total. En el estado canal la
posición 0 es el sistema d del repartidor y la posición ℓ es la acción ℓ.
"""

import itertools
import re
from functools import reduce
from typing import Dict, Iterable, Optional, Tuple, Union

import galois
import numpy as np

from src.exceptions import (
    EmptySubsetError,
    FieldTooSmallError,
    InvalidSubsetError,
    InvariantViolationError,
    NonIdealSchemeError,
    NotPrimeError,
)
from src.qudit.operators import is_prime, mub_basis, pauli_ops
from src.qudit.states import DensityMatrix, PureState, SystemShape, partial_trace, trace_distance

ORTHO_TOL = 1e-10

Ramp = Tuple[Optional[int], Optional[int], int]


class Scheme:
    """Isometría de codificación de un secreto de dimensión kappa en n_total acciones.

    La columna i de ``encoding`` es |i_L⟩. Los esquemas mixtos se representan
    por su purificación más la lista ``discarded`` de acciones descartadas.

    Ejemplo:
        >>> scheme = ghz_scheme(3, 2)
        >>> scheme.active
        (1, 2, 3)
    """

    def __init__(
        self,
        name: str,
        q: int,
        kappa: int,
        n_total: int,
        encoding: np.ndarray,
        discarded: Iterable[int] = (),
        claimed_ramp: Optional[Ramp] = None,
        construction: Optional[Dict] = None,
    ):
        self.name = name
        self.q = int(q)
        self.kappa = int(kappa)
        self.n_total = int(n_total)
        if self.kappa < 2:
            raise InvariantViolationError("La dimensión del secreto debe ser >= 2")
        if self.kappa > self.q ** self.n_total:
            raise InvariantViolationError("kappa no puede superar q^n")
        # límite de amplitudes del estado canal (d + acciones)
        self.channel_shape = SystemShape((self.kappa,) + (self.q,) * self.n_total)

        encoding = np.array(encoding, dtype=complex)
        if encoding.shape != (self.q ** self.n_total, self.kappa):
            raise InvariantViolationError(
                f"La codificación debe tener forma {(self.q ** self.n_total, self.kappa)}, "
                f"tiene {encoding.shape}"
            )
        gram = encoding.conj().T @ encoding
        deviation = float(np.max(np.abs(gram - np.eye(self.kappa))))
        if deviation > ORTHO_TOL:
            raise InvariantViolationError(
                f"Las columnas lógicas no son ortonormales (desviación {deviation:.3e})"
            )
        encoding.flags.writeable = False
        self.encoding = encoding

        discarded = tuple(int(p) for p in discarded)
        if len(set(discarded)) != len(discarded):
            raise InvalidSubsetError(f"Acciones descartadas repetidas: {discarded}")
        if any(not 1 <= p <= self.n_total for p in discarded):
            raise InvalidSubsetError(f"Acciones descartadas fuera de rango: {discarded}")
        self.discarded = tuple(sorted(discarded))
        if len(self.discarded) >= self.n_total:
            raise InvalidSubsetError("No queda ningún jugador activo")

        self.claimed_ramp = tuple(claimed_ramp) if claimed_ramp is not None else None
        self.construction = dict(construction) if construction else None

    def __repr__(self) -> str:
        return (
            f"Scheme(name={self.name!r}, q={self.q}, kappa={self.kappa}, "
            f"n_total={self.n_total}, discarded={list(self.discarded)})"
        )

    @property
    def players(self) -> Tuple[int, ...]:
        return tuple(range(1, self.n_total + 1))

    @property
    def active(self) -> Tuple[int, ...]:
        return tuple(p for p in self.players if p not in self.discarded)

    @property
    def n(self) -> int:
        return len(self.active)

    @property
    def is_pure(self) -> bool:
        return not self.discarded

    @property
    def is_ideal(self) -> bool:
        return self.kappa == self.q

    def encoding_tensor(self) -> np.ndarray:
        """Codificación con forma (q, ..., q, kappa)."""
        return self.encoding.reshape((self.q,) * self.n_total + (self.kappa,))

    def validate_players(self, subset: Iterable[int]) -> Tuple[int, ...]:
        """Valida un subconjunto de jugadores activos (etiquetas base 1).

        Raises:
            EmptySubsetError: Si el subconjunto está vacío
            InvalidSubsetError: Si contiene jugadores inexistentes, repetidos o descartados
        """
        subset = [int(p) for p in subset]
        if not subset:
            raise EmptySubsetError("El subconjunto de jugadores está vacío")
        if len(set(subset)) != len(subset):
            raise InvalidSubsetError(f"Jugadores repetidos: {subset}")
        inactive = [p for p in subset if p not in self.active]
        if inactive:
            raise InvalidSubsetError(f"Jugadores no activos en {self.name}: {inactive}")
        return tuple(sorted(subset))

    def complement(self, subset: Iterable[int]) -> Tuple[int, ...]:
        """Acciones fuera de ``subset``, incluidas las descartadas."""
        subset = set(subset)
        return tuple(p for p in self.players if p not in subset)

    def secret_vector(self, t: int, i: int) -> np.ndarray:
        """Vector |i(t)⟩ del espacio del secreto."""
        if t == 0:
            vector = np.zeros(self.kappa, dtype=complex)
            vector[i] = 1.0
            return vector
        if not self.is_ideal:
            raise NonIdealSchemeError(
                f"{self.name}: kappa={self.kappa} != q={self.q}, solo se admite t=0"
            )
        return mub_basis(self.q, t)[i]

    def logical_vector(self, t: int, i: int) -> np.ndarray:
        """V conj|i(t)⟩ sobre las n_total acciones (purificación)."""
        return self.encoding @ self.secret_vector(t, i).conj()


def ghz_scheme(n: int, q: int) -> Scheme:
    """Esquema GHZ con |i_L⟩ = |i⟩^{⊗n}, rampa (n, 0, n)."""
    if n < 2 or q < 2:
        raise ValueError(f"Se requiere n >= 2 y q >= 2 (n={n}, q={q})")
    SystemShape((q,) + (q,) * n)
    repunit = (q ** n - 1) // (q - 1)
    encoding = np.zeros((q ** n, q), dtype=complex)
    for i in range(q):
        encoding[i * repunit, i] = 1.0
    return Scheme(
        f"ghz_{n}_{q}", q, q, n, encoding,
        claimed_ramp=(n, 0, n),
        construction={"kind": "ghz", "n": n, "q": q},
    )


def cgl_qutrit_23() -> Scheme:
    """Esquema umbral (2,3) de qutrits: |s_L⟩ = Σ_a |a, a+s, a+2s⟩ / √3."""
    encoding = np.zeros((27, 3), dtype=complex)
    for s, a in itertools.product(range(3), repeat=2):
        digits = (a, (a + s) % 3, (a + 2 * s) % 3)
        encoding[9 * digits[0] + 3 * digits[1] + digits[2], s] = 1 / np.sqrt(3)
    return Scheme(
        "cgl23", 3, 3, 3, encoding,
        claimed_ramp=(2, 1, 3),
        construction={"kind": "cgl23"},
    )


def _pauli_string(word: str) -> np.ndarray:
    x, z, _ = pauli_ops(2)
    table = {"I": np.eye(2), "X": x, "Z": z}
    return reduce(np.kron, (table[c] for c in word))


def five_qubit_35() -> Scheme:
    """Código perfecto ((5,2,3))₂ con estabilizadores XZZXI y sus desplazamientos cíclicos."""
    generators = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
    projector = np.eye(32, dtype=complex)
    for word in generators:
        projector = projector @ (np.eye(32) + _pauli_string(word)) / 2
    zero = projector[:, 0]
    zero = zero / np.linalg.norm(zero)
    one = _pauli_string("XXXXX") @ zero
    return Scheme(
        "five_qubit", 2, 2, 5, np.column_stack([zero, one]),
        claimed_ramp=(3, 2, 5),
        construction={"kind": "five_qubit"},
    )


def reed_solomon_threshold(k: int, q: int) -> Scheme:
    """Código de Reed-Solomon cuántico: umbral (k, 2k-1) sobre GF(q).

    |s_L⟩ = q^{-(k-1)/2} Σ_{f: grado<k, f(0)=s} |f(1), ..., f(n)⟩

    Raises:
        NotPrimeError: Si q no es primo
        FieldTooSmallError: Si q <= 2k - 1
    """
    if not is_prime(q):
        raise NotPrimeError(f"q={q} no es primo")
    n = 2 * k - 1
    if k < 2:
        raise ValueError(f"El umbral k debe ser >= 2, recibido {k}")
    if q <= n:
        raise FieldTooSmallError(
            f"campo demasiado pequeño: GF({q}) no tiene {n + 1} puntos distintos "
            f"de evaluación (se requiere q > {n})"
        )
    SystemShape((q,) + (q,) * n)

    GF = galois.GF(q)
    points = np.arange(1, n + 1)
    vandermonde = GF(np.array([[pow(int(x), j, q) for x in points] for j in range(k)]))
    weights = q ** np.arange(n - 1, -1, -1)
    amplitude = q ** (-(k - 1) / 2)

    encoding = np.zeros((q ** n, q), dtype=complex)
    free = np.array(list(itertools.product(range(q), repeat=k - 1)), dtype=int).reshape(-1, k - 1)
    for s in range(q):
        coefficients = np.column_stack([np.full(len(free), s), free])
        values = (GF(coefficients) @ vandermonde).view(np.ndarray).astype(int)
        encoding[values @ weights, s] = amplitude
    return Scheme(
        f"rs_{k}_{q}", q, q, n, encoding,
        claimed_ramp=(k, k - 1, n),
        construction={"kind": "rs", "k": k, "q": q},
    )


def discard_shares(scheme: Scheme, drop: Iterable[int]) -> Scheme:
    """Descarta acciones: de (k, n) a (k, n - l), con k' pendiente de análisis.

    Raises:
        InvalidSubsetError: Si alguna acción no está activa o quedarían menos de dos jugadores
    """
    drop = [int(p) for p in drop]
    if not drop:
        return scheme
    if len(set(drop)) != len(drop) or any(p not in scheme.active for p in drop):
        raise InvalidSubsetError(f"Acciones inválidas para descartar en {scheme.name}: {drop}")
    if scheme.n - len(drop) < 2:
        raise InvalidSubsetError("Deben quedar al menos dos jugadores activos")
    claimed = None
    if scheme.claimed_ramp is not None:
        claimed = (scheme.claimed_ramp[0], None, scheme.n - len(drop))
    suffix = "".join(f"-d{p}" for p in sorted(drop))
    return Scheme(
        f"{scheme.name}{suffix}", scheme.q, scheme.kappa, scheme.n_total, scheme.encoding,
        discarded=scheme.discarded + tuple(drop),
        claimed_ramp=claimed,
        construction=scheme.construction,
    )


def channel_purification(scheme: Scheme) -> PureState:
    """Estado canal puro sobre d y las n_total acciones, sin descartar nada."""
    amplitudes = scheme.encoding.T / np.sqrt(scheme.kappa)
    return PureState(scheme.channel_shape, amplitudes.reshape(-1))


class ChannelState:
    """Estado canal |CS⟩ = (1/√κ) Σ_i |i⟩_d |i_L⟩ (reducido a los jugadores activos).

    ``purification`` es siempre el estado puro sobre d y las n_total acciones.
    """

    def __init__(self, scheme: Scheme):
        self.scheme = scheme
        self.purification = channel_purification(scheme)
        if scheme.is_pure:
            self.state: Union[PureState, DensityMatrix] = self.purification
        else:
            self.state = partial_trace(self.purification, (0,) + scheme.active)

        dealer = partial_trace(self.purification, [0])
        distance = trace_distance(dealer, DensityMatrix.maximally_mixed((scheme.kappa,)))
        if distance > ORTHO_TOL:
            raise InvariantViolationError(
                f"El sistema del repartidor no está máximamente mezclado ({distance:.3e})"
            )


def channel_state(scheme: Scheme) -> ChannelState:
    """Construye el estado canal |CS⟩ y comprueba que d queda máximamente mezclado.

    Raises:
        InvariantViolationError: Si el sistema d no queda máximamente mezclado
    """
    return ChannelState(scheme)


def logical_basis_state(scheme: Scheme, t: int, i: int) -> Union[PureState, DensityMatrix]:
    """Estado de los jugadores tras proyectar d sobre |i(t)⟩.

    Raises:
        NonIdealSchemeError: Si kappa != q y t != 0
    """
    state = PureState.normalized((scheme.q,) * scheme.n_total, scheme.logical_vector(t, i))
    if scheme.is_pure:
        return state
    return partial_trace(state, [p - 1 for p in scheme.active])


_BUNDLED_PATTERNS = {
    r"ghz_(\d+)_(\d+)": lambda n, q: ghz_scheme(int(n), int(q)),
    r"rs_(\d+)_(\d+)": lambda k, q: reed_solomon_threshold(int(k), int(q)),
    r"cgl23": cgl_qutrit_23,
    r"five_qubit": five_qubit_35,
    r"five_qubit_minus_one": lambda: discard_shares(five_qubit_35(), [5]),
}


def bundled_scheme(name: str) -> Scheme:
    """Construye un esquema incluido por nombre (cgl23, five_qubit, rs_3_7, ghz_3_2...)."""
    for pattern, builder in _BUNDLED_PATTERNS.items():
        match = re.fullmatch(pattern, name)
        if match:
            return builder(*match.groups())
    raise KeyError(f"Esquema desconocido: {name}")


def bundled_schemes() -> Dict[str, Scheme]:
    """Lista de esquemas de referencia sobre los que se verifican las propiedades."""
    names = [f"ghz_{n}_{q}" for n in (2, 3, 4) for q in (2, 3)]
    names += ["cgl23", "five_qubit", "rs_2_5", "rs_3_7", "five_qubit_minus_one"]
    return {name: bundled_scheme(name) for name in names}
