"""Parametric noise channels: decay, dephasing, line modulation, SNR and Raman errors."""

import logging
import math
from collections.abc import Callable, Sequence

import numpy as np

from app.errors import DimensionError
from app.noise.models import ModulationTone, NoiseParams
from app.quantum.constructions import PAULI, mub_states
from app.quantum.models import QuantumState
from app.quantum.ops import Target, apply_kraus

logger = logging.getLogger(__name__)


def metastable_decay(t: float, t1_prime: float) -> float:
    """Survival probability of the metastable memory after time t.

    Decay is detected by state detection and the trial discarded, so the protocol
    treats 1 - survival as a heralded erasure probability.
    """
    if t < 0:
        raise ValueError(f"Storage time must be non-negative, got {t}")
    if t1_prime <= 0:
        raise ValueError(f"T1' must be positive, got {t1_prime}")
    return math.exp(-t / t1_prime)


def gaussian_envelope(t, t2: float):
    """Coherence envelope exp(-(t/T2)^2); accepts scalars or arrays."""
    if t2 <= 0:
        raise ValueError(f"T2 must be positive, got {t2}")
    return np.exp(-((np.asarray(t, dtype=float) / t2) ** 2))


def scale_coherence(rho: QuantumState, qubit: Target, factor: complex) -> QuantumState:
    """Multiply the off-diagonal blocks of one qubit by `factor` (|factor| <= 1).

    The <0|.|1> block is scaled by factor and the <1|.|0> block by its conjugate, which
    is a phase-damping channel followed by a Z rotation.
    """
    i = rho.index(qubit)
    if rho.dims[i] != 2:
        raise DimensionError(f"Subsystem '{rho.labels[i]}' is not a qubit (dim {rho.dims[i]})")
    if abs(factor) > 1 + 1e-12:
        raise ValueError(f"Coherence factor must satisfy |f| <= 1, got {abs(factor)}")
    n = len(rho.dims)
    mask = np.array([[1.0, factor], [np.conj(factor), 1.0]], dtype=complex)
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    tensor = np.moveaxis(tensor, [i, n + i], [-2, -1]) * mask
    tensor = np.moveaxis(tensor, [-2, -1], [i, n + i])
    return QuantumState.from_matrix(
        tensor.reshape(rho.dimension, rho.dimension), rho.dims, rho.labels
    )


def gaussian_dephasing(rho: QuantumState, t: float, t2: float, qubit: Target) -> QuantumState:
    """Scale the qubit's off-diagonal blocks by exp(-(t/T2)^2).

    Raises:
        DimensionError: If the target subsystem is not a qubit
    """
    if t < 0:
        raise ValueError(f"Storage time must be non-negative, got {t}")
    return scale_coherence(rho, qubit, float(gaussian_envelope(t, t2)))


def ac_line_phase(t, modulation: Sequence[ModulationTone], offset: float = 0.0):
    """Phase sum_i A_i sin(2 pi f_i t + phi_i); `offset` shifts time for untriggered starts."""
    t = np.asarray(t, dtype=float) + offset
    phase = np.zeros_like(t)
    for tone in modulation:
        phase = phase + tone.amplitude * np.sin(2 * math.pi * tone.frequency * t + tone.phase)
    return phase


def echoed_line_phase(window, modulation: Sequence[ModulationTone], offset: float = 0.0):
    """Net line phase over a storage window with a basis flip at its midpoint.

    The second half accumulates with opposite sign, leaving
    2 phase(w/2) - phase(0) - phase(w).
    """
    window = np.asarray(window, dtype=float)
    return (
        2 * ac_line_phase(window / 2, modulation, offset)
        - ac_line_phase(np.zeros_like(window), modulation, offset)
        - ac_line_phase(window, modulation, offset)
    )


def memory_coherence(t, noise: NoiseParams, extra_phase=0.0, offset: float = 0.0):
    """exp(-(t/T2)^2) * cos(phase(t) + extra_phase)."""
    phase = ac_line_phase(t, noise.modulation, offset) + extra_phase
    return gaussian_envelope(t, noise.t2) * np.cos(phase)


def memory_fidelity(t, noise: NoiseParams, extra_phase=0.0, offset: float = 0.0):
    """Storage fidelity (1 + coherence(t)) / 2 of a superposition state."""
    return (1 + memory_coherence(t, noise, extra_phase, offset)) / 2


def snr_mixture(rho: QuantumState, snr: float | None) -> QuantumState:
    """Admix the maximally mixed state with weight 1/(snr+1).

    snr of None or infinity returns the input unchanged.
    """
    if snr is None or math.isinf(snr):
        return rho
    if snr < 0:
        raise ValueError(f"SNR must be non-negative, got {snr}")
    weight = snr / (snr + 1)
    d = rho.dimension
    return QuantumState.from_matrix(
        weight * rho.matrix + (1 - weight) * np.eye(d) / d, rho.dims, rho.labels
    )


def depolarize(rho: QuantumState, qubit: Target, lam: float) -> QuantumState:
    """Qubit depolarizing channel rho -> lam*rho + (1-lam)*I/2 (x) Tr_q(rho).

    Valid for -1/3 <= lam <= 1.
    """
    if not -1 / 3 - 1e-12 <= lam <= 1 + 1e-12:
        raise ValueError(f"Depolarizing parameter {lam} outside [-1/3, 1]")
    if lam >= 1:
        return rho
    p_identity = (1 + 3 * lam) / 4
    p_pauli = (1 - lam) / 4
    kraus = [math.sqrt(max(p_identity, 0.0)) * PAULI["I"]]
    kraus += [math.sqrt(p_pauli) * PAULI[p] for p in ("X", "Y", "Z")]
    return apply_kraus(rho, kraus, qubit)


def average_fidelity_channel(rho: QuantumState, qubit: Target, fidelity: float) -> QuantumState:
    """Depolarizing channel whose six-MUB average state fidelity equals `fidelity`."""
    if not 0 <= fidelity <= 1:
        raise ValueError(f"Fidelity must be in [0, 1], got {fidelity}")
    return depolarize(rho, qubit, 2 * fidelity - 1)


def raman_transfer(rho: QuantumState, n_pulses: int, f_pi: float, qubit: Target) -> QuantumState:
    """n Raman pi-pulses as one depolarizing channel with MUB-average fidelity f_pi**n."""
    if n_pulses < 0:
        raise ValueError(f"Pulse count must be non-negative, got {n_pulses}")
    if n_pulses == 0:
        return rho
    total = f_pi**n_pulses
    if total < 1 / 3:
        raise ValueError(f"Average fidelity {total} below 1/3 cannot come from a depolarizing channel")
    return average_fidelity_channel(rho, qubit, total)


def merge_imperfection(rho: QuantumState, merge_fidelity: float, qubit: Target) -> QuantumState:
    return average_fidelity_channel(rho, qubit, merge_fidelity)


def mub_average_fidelity(channel: Callable[[QuantumState], QuantumState]) -> float:
    """Average <psi|channel(psi)|psi> over the six single-qubit MUB states.

    The channel receives each state labelled "qubit".
    """
    total = 0.0
    states = mub_states()
    for state in states.values():
        out = channel(state)
        total += float(np.vdot(state.data, out.matrix @ state.data).real)
    return total / len(states)
