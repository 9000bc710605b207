"""Truncated Fock-space optics: loss, the 50:50 beamsplitter and threshold detectors."""

import math
from functools import cache

import numpy as np

from app.errors import DimensionError
from app.quantum.models import Projector, QuantumState
from app.quantum.ops import Target, apply_kraus, apply_operator

# Output modes hold up to two photons after interference
FOCK_CUTOFF = 3

CLICK_PATTERNS = ("none", "c", "d", "both")


def loss_kraus(eta: float, cutoff: int = 2) -> list[np.ndarray]:
    """Kraus operators of a pure-loss channel with transmission eta on one mode.

    Only the one-photon sector is thinned, so cutoff must be 2.
    """
    if not 0 <= eta <= 1:
        raise ValueError(f"Transmission must be in [0, 1], got {eta}")
    if cutoff != 2:
        raise DimensionError(f"Loss is modeled on single-photon modes, got cutoff {cutoff}")
    k0 = np.diag([1.0, math.sqrt(eta)]).astype(complex)
    k1 = np.array([[0.0, math.sqrt(1 - eta)], [0.0, 0.0]], dtype=complex)
    return [k0, k1]


def apply_loss(state: QuantumState, mode: Target, eta: float) -> QuantumState:
    """Thin a mode by eta; the lost photon goes to a traced-out environment."""
    return apply_kraus(state, loss_kraus(eta), mode)


@cache
def beamsplitter_matrix(cutoff: int = FOCK_CUTOFF) -> np.ndarray:
    """a+ -> (c+ + d+)/sqrt2, b+ -> (c+ - d+)/sqrt2 on |n_a n_b>, n_a + n_b < cutoff.

    States with more photons than the cutoff supports are left unchanged, which keeps
    the matrix unitary on the truncated space.
    """
    dim = cutoff * cutoff
    matrix = np.eye(dim, dtype=complex)
    for na in range(cutoff):
        for nb in range(cutoff - na):
            column = np.zeros(dim, dtype=complex)
            norm = 1 / math.sqrt(math.factorial(na) * math.factorial(nb) * 2 ** (na + nb))
            for i in range(na + 1):
                for j in range(nb + 1):
                    k, m = i + j, (na - i) + (nb - j)
                    coeff = math.comb(na, i) * math.comb(nb, j) * (-1) ** (nb - j) * norm
                    column[k * cutoff + m] += coeff * math.sqrt(math.factorial(k) * math.factorial(m))
            matrix[:, na * cutoff + nb] = column
    return matrix


def embed_modes(state: QuantumState, modes: tuple[Target, Target]) -> QuantumState:
    """Extend two single-photon modes to the FOCK_CUTOFF space."""
    isometry = np.zeros((FOCK_CUTOFF, 2), dtype=complex)
    isometry[0, 0] = isometry[1, 1] = 1.0
    out = state
    for mode in modes:
        i = out.index(mode)
        data, dims = apply_operator(out, isometry, [i], out_dims=[FOCK_CUTOFF])
        out = QuantumState(data, dims, out.labels)
    return out


def beamsplitter(
    state: QuantumState,
    modes: tuple[Target, Target] = ("mode_a", "mode_b"),
    outputs: tuple[str, str] = ("mode_c", "mode_d"),
) -> QuantumState:
    """Interfere two modes on a 50:50 beamsplitter.

    Args:
        state: State holding the two input modes
        modes: Input modes a and b, each with at most one photon
        outputs: Labels of the output modes c and d

    Returns:
        State whose input modes are replaced by outputs with cutoff FOCK_CUTOFF

    Raises:
        ValueError: If an input mode carries more than one photon
    """
    idx = [state.index(m) for m in modes]
    for i in idx:
        if state.dims[i] == FOCK_CUTOFF:
            projector = np.zeros((FOCK_CUTOFF, FOCK_CUTOFF))
            projector[2, 2] = 1.0
            data, _ = apply_operator(state.density(), projector, [i])
            if np.trace(data).real > 1e-12:
                raise ValueError(f"Mode '{state.labels[i]}' carries more than one photon")
        elif state.dims[i] != 2:
            raise DimensionError(f"Mode '{state.labels[i]}' has unsupported dimension {state.dims[i]}")

    if any(state.dims[i] == 2 for i in idx):
        to_embed = tuple(state.labels[i] for i in idx if state.dims[i] == 2)
        state = embed_modes(state, to_embed)

    data, dims = apply_operator(state, beamsplitter_matrix(), idx)
    labels = list(state.labels)
    for i, name in zip(idx, outputs, strict=True):
        labels[i] = name
    if state.is_pure:
        return QuantumState.from_vector(data, dims, labels, normalize=True)
    return QuantumState.from_matrix(data, dims, labels, normalize=True)


def click_projectors(cutoff: int = FOCK_CUTOFF) -> list[Projector]:
    """Threshold-detector patterns on modes (c, d): none, c only, d only, both."""
    groups: dict[str, np.ndarray] = {p: np.zeros(cutoff * cutoff) for p in CLICK_PATTERNS}
    for nc in range(cutoff):
        for nd in range(cutoff):
            pattern = CLICK_PATTERNS[(nc > 0) + 2 * (nd > 0)]
            groups[pattern][nc * cutoff + nd] = 1.0
    return [Projector(np.diag(groups[p]), (cutoff, cutoff), p) for p in CLICK_PATTERNS]
