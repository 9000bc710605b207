"""Node-specific state constructions and gates.

The ion is modeled with three levels |0>, |1>, |2> reached by the pi, sigma-minus and
sigma-plus decay channels respectively. After collection into the fiber the photon
is a polarization qubit {|H>, |V>}.
"""

import math

import numpy as np

from app.errors import DimensionError
from app.quantum.models import QuantumState, Unitary
from app.quantum.ops import Target, apply_operator, apply_unitary, restrict_levels

ION_LEVELS = 3
POLARIZATIONS = ("pi", "sigma_minus", "sigma_plus")
FIBER_POLARIZATIONS = ("H", "V")

# Clebsch-Gordan weights of the three decay channels
EMISSION_WEIGHTS = (1 / 3, 1 / 6, 1 / 2)

# Merge pulse area sending (1/2)|1> + (sqrt(3)/2)|2> onto |1>
MERGE_ANGLE = 2 * math.pi / 3

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_SQ2 = 1 / math.sqrt(2)
BELL_VECTORS = {
    "phi_plus": np.array([_SQ2, 0, 0, _SQ2], dtype=complex),
    "phi_minus": np.array([_SQ2, 0, 0, -_SQ2], dtype=complex),
    "psi_plus": np.array([0, _SQ2, _SQ2, 0], dtype=complex),
    "psi_minus": np.array([0, _SQ2, -_SQ2, 0], dtype=complex),
}


def emission_state(labels: tuple[str, str] = ("ion", "photon")) -> QuantumState:
    """Ion-photon state right after spontaneous emission.

    (1/sqrt3)|0,pi> + (1/sqrt6)|1,sigma-> + (1/sqrt2)|2,sigma+>
    """
    amplitudes = np.zeros(ION_LEVELS * len(POLARIZATIONS), dtype=complex)
    for level, weight in enumerate(EMISSION_WEIGHTS):
        amplitudes[level * len(POLARIZATIONS) + level] = math.sqrt(weight)
    return QuantumState(amplitudes, (ION_LEVELS, len(POLARIZATIONS)), labels)


# pi -> H with unit amplitude, sigma+- -> V with amplitude 1/sqrt2
FIBER_PROJECTION = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, _SQ2, _SQ2],
    ],
    dtype=complex,
)


def fiber_projection(
    state: QuantumState, photon: Target = "photon"
) -> tuple[float, QuantumState]:
    """Collect the photon into the fiber, mapping its polarization onto {H, V}.

    Args:
        state: State holding a three-mode polarization subsystem
        photon: Label or index of the polarization subsystem

    Returns:
        Tuple of (collection probability, renormalized state with a qubit photon)

    Raises:
        DimensionError: If the state has no three-mode polarization subsystem
    """
    idx = state.index(photon)
    if state.dims[idx] != len(POLARIZATIONS):
        raise DimensionError(
            f"Subsystem '{state.labels[idx]}' has dimension {state.dims[idx]}, "
            f"expected the {len(POLARIZATIONS)} polarization modes"
        )
    data, dims = apply_operator(state, FIBER_PROJECTION, [idx], out_dims=[2])
    if state.is_pure:
        probability = float(np.vdot(data, data).real)
    else:
        probability = float(np.trace(data).real)
    if probability <= 1e-15:
        raise ValueError("No amplitude survives the fiber projection")
    if state.is_pure:
        return probability, QuantumState.from_vector(data, dims, state.labels, normalize=True)
    return probability, QuantumState.from_matrix(data, dims, state.labels, normalize=True)


def merge_unitary(dim: int = ION_LEVELS, angle: float = MERGE_ANGLE) -> Unitary:
    """Rotation by `angle` on span{|1>, |2>} of an ion with `dim` levels."""
    if dim < 3:
        raise DimensionError(f"Merge gate needs levels |1> and |2>, ion has {dim} levels")
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    matrix = np.eye(dim, dtype=complex)
    matrix[1:3, 1:3] = [[c, s], [-s, c]]
    return Unitary(matrix, (dim,), "merge")


def merge_gate(state: QuantumState, ion: Target = "ion") -> QuantumState:
    """Apply the ideal merge rotation to the ion subsystem."""
    idx = state.index(ion)
    return apply_unitary(state, merge_unitary(state.dims[idx]), [idx])


def ion_photon_state(labels: tuple[str, str] = ("ion", "photon")) -> QuantumState:
    """Run emission, fiber projection, merge and qubit restriction in sequence."""
    _, projected = fiber_projection(emission_state(labels), labels[1])
    merged = merge_gate(projected, labels[0])
    _, qubit = restrict_levels(merged, labels[0], [0, 1])
    return qubit


def bell_state(kind: str = "phi_plus", labels: tuple[str, str] = ("ion", "photon")) -> QuantumState:
    """One of the four Bell states; phi_plus is (|0H> + |1V>)/sqrt2."""
    try:
        vector = BELL_VECTORS[kind]
    except KeyError:
        raise ValueError(f"Unknown Bell state '{kind}', expected one of {list(BELL_VECTORS)}") from None
    return QuantumState(vector, (2, 2), labels)


def werner_state(
    p: float, kind: str = "phi_plus", labels: tuple[str, str] = ("ion", "photon")
) -> QuantumState:
    """Bell state with weight p mixed with the maximally mixed state."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner weight must be in [0, 1], got {p}")
    bell = bell_state(kind, labels).matrix
    return QuantumState(p * bell + (1 - p) * np.eye(4) / 4, (2, 2), labels)


def mub_states(label: str = "qubit") -> dict[str, QuantumState]:
    """The six eigenstates of X, Y and Z."""
    vectors = {
        "z+": [1, 0],
        "z-": [0, 1],
        "x+": [_SQ2, _SQ2],
        "x-": [_SQ2, -_SQ2],
        "y+": [_SQ2, 1j * _SQ2],
        "y-": [_SQ2, -1j * _SQ2],
    }
    return {name: QuantumState(np.array(v, dtype=complex), (2,), (label,)) for name, v in vectors.items()}


def pauli_operator(setting: str) -> np.ndarray:
    """Tensor product of Pauli matrices, e.g. "XZ" -> X (x) Z."""
    op = np.array([[1.0 + 0j]])
    for letter in setting:
        try:
            op = np.kron(op, PAULI[letter])
        except KeyError:
            raise ValueError(f"Unknown Pauli letter '{letter}' in '{setting}'") from None
    return op
