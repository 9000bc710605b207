"""Fidelity measures for node states."""

import math
from dataclasses import dataclass

import numpy as np

from app.errors import DimensionError
from app.quantum.constructions import pauli_operator
from app.quantum.models import QuantumState
from app.quantum.ops import expectation


@dataclass(frozen=True)
class BellMatch:
    """Closest phase-adjusted maximally entangled state to a two-qubit state."""

    fidelity: float
    family: str  # "phi" (|00> + e^{i phase}|11>) or "psi" (|01> + e^{i phase}|10>)
    phase: float


def _require_two_qubits(rho: QuantumState):
    if rho.dims != (2, 2):
        raise DimensionError(f"Expected a two-qubit state, got dims {rho.dims}")


def closest_bell_state(rho: QuantumState) -> BellMatch:
    """Maximize the overlap over phase-adjusted Bell states of both families.

    The search spans phi (|00> + e^{ia}|11>) and psi (|01> + e^{ia}|10>) states, so
    a psi-type state scores 1 here. Use `fidelity` with an explicit target for
    the overlap with one fixed Bell state.

    Local phase rotations diag(1, e^{ia}) on each qubit only change the relative
    phase inside each family, so the maximum over the phase is attained in closed
    form: (rho_00 + rho_33)/2 + |rho_03| for the phi family and the analogous
    expression for psi.
    """
    _require_two_qubits(rho)
    m = rho.matrix
    phi = 0.5 * float((m[0, 0] + m[3, 3]).real) + abs(m[3, 0])
    psi = 0.5 * float((m[1, 1] + m[2, 2]).real) + abs(m[2, 1])
    if phi >= psi:
        return BellMatch(min(phi, 1.0), "phi", float(np.angle(m[3, 0])))
    return BellMatch(min(psi, 1.0), "psi", float(np.angle(m[2, 1])))


def bell_fidelity(rho: QuantumState) -> float:
    """Fidelity to the most closely matching phase-adjusted Bell state, phi or psi.

    Raises:
        DimensionError: If rho is not a two-qubit state
    """
    return closest_bell_state(rho).fidelity


def fidelity(state: QuantumState, target: QuantumState) -> float:
    """Overlap <psi|rho|psi> of a state with a pure target."""
    if not target.is_pure:
        raise ValueError("Target state must be pure")
    if state.dims != target.dims:
        raise DimensionError(f"Dimension mismatch: {state.dims} vs {target.dims}")
    if state.is_pure:
        return float(abs(np.vdot(target.data, state.data)) ** 2)
    return float(np.vdot(target.data, state.data @ target.data).real)


def visibility_fidelity(vx: float, vy: float, vz: float) -> float:
    """Entanglement fidelity estimate (1 + Vx + Vy + Vz) / 4."""
    for name, v in (("vx", vx), ("vy", vy), ("vz", vz)):
        if not math.isfinite(v) or abs(v) > 1.0:
            raise ValueError(f"Visibility {name}={v} outside [-1, 1]")
    return (1.0 + vx + vy + vz) / 4.0


def pauli_expectation(state: QuantumState, setting: str) -> float:
    """<P_1 (x) ... (x) P_n> for an all-qubit state, e.g. setting "XZ"."""
    if len(setting) != len(state.dims) or any(d != 2 for d in state.dims):
        raise DimensionError(f"Setting '{setting}' does not match qubit dims {state.dims}")
    return float(expectation(state, pauli_operator(setting)).real)
