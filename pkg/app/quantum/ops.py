"""Dense linear-algebra operations on QuantumState values."""

import logging
import math
from collections.abc import Sequence

import numpy as np

from app.errors import DimensionError
from app.quantum.models import Projector, QuantumState, Unitary

logger = logging.getLogger(__name__)

Target = str | int


def _resolve_targets(state: QuantumState, targets: Target | Sequence[Target]) -> list[int]:
    if isinstance(targets, str | int):
        targets = [targets]
    indices = [state.index(t) for t in targets]
    if len(set(indices)) != len(indices):
        raise DimensionError(f"Repeated target subsystems: {targets}")
    return indices


def _contract_rows(
    tensor: np.ndarray, op: np.ndarray, targets: list[int], out_dims: list[int], in_dims: list[int]
) -> np.ndarray:
    """Contract op's input indices with the given row axes of tensor."""
    k = len(targets)
    op_t = op.reshape(out_dims + in_dims)
    result = np.tensordot(op_t, tensor, axes=(list(range(k, 2 * k)), targets))
    return np.moveaxis(result, list(range(k)), targets)


def apply_operator(
    state: QuantumState,
    op: np.ndarray,
    targets: Target | Sequence[Target],
    out_dims: Sequence[int] | None = None,
) -> tuple[np.ndarray, tuple[int, ...]]:
    """Apply a (possibly rectangular, non-unitary) operator to target subsystems.

    The result is returned unnormalized as a raw array together with the new dims,
    since post-selection and Kraus maps renormalize differently.

    Args:
        state: Input state
        op: Matrix of shape (prod(out_dims), prod(in_dims))
        targets: Subsystems acted on, in the operator's tensor order
        out_dims: Output dimensions of the targets (defaults to input dimensions)

    Returns:
        Tuple of (unnormalized vector or matrix, new dims)
    """
    idx = _resolve_targets(state, targets)
    in_dims = [state.dims[i] for i in idx]
    out_dims = list(out_dims) if out_dims is not None else in_dims
    op = np.asarray(op, dtype=complex)
    if op.shape != (math.prod(out_dims), math.prod(in_dims)):
        raise DimensionError(
            f"Operator shape {op.shape} does not act on subsystems {in_dims} -> {out_dims}"
        )

    new_dims = list(state.dims)
    for i, d in zip(idx, out_dims, strict=True):
        new_dims[i] = d

    n = len(state.dims)
    if state.is_pure:
        psi = state.data.reshape(state.dims)
        out = _contract_rows(psi, op, idx, out_dims, in_dims)
        return out.reshape(-1), tuple(new_dims)

    rho = state.data.reshape(state.dims + state.dims)
    rho = _contract_rows(rho, op, idx, out_dims, in_dims)
    # right multiplication by op^dagger acts on the column axes
    k = len(idx)
    col_axes = [n + i for i in idx]
    op_conj = op.conj().reshape(out_dims + in_dims)
    rho = np.tensordot(rho, op_conj, axes=(col_axes, list(range(k, 2 * k))))
    rho = np.moveaxis(rho, list(range(2 * n - k, 2 * n)), col_axes)
    total = math.prod(new_dims)
    return rho.reshape(total, total), tuple(new_dims)


def apply_unitary(
    state: QuantumState, unitary: Unitary, targets: Target | Sequence[Target] | None = None
) -> QuantumState:
    """Apply a unitary to the target subsystems (all subsystems by default)."""
    if targets is None:
        targets = list(range(len(state.dims)))
    target_dims = tuple(state.dims[i] for i in _resolve_targets(state, targets))
    if target_dims != unitary.dims:
        raise DimensionError(f"Unitary on {unitary.dims} does not match targets {target_dims}")
    data, dims = apply_operator(state, unitary.matrix, targets)
    if state.is_pure:
        return QuantumState.from_vector(data, dims, state.labels, normalize=True)
    return QuantumState.from_matrix(data, dims, state.labels, normalize=True)


def apply_kraus(
    state: QuantumState, kraus_ops: Sequence[np.ndarray], targets: Target | Sequence[Target]
) -> QuantumState:
    """Apply a CPTP map given by Kraus operators; the result is a density matrix."""
    rho = state.density()
    total = None
    for k in kraus_ops:
        data, dims = apply_operator(rho, k, targets)
        total = data if total is None else total + data
    if total is None:
        raise ValueError("At least one Kraus operator is required")
    return QuantumState.from_matrix(total, dims, state.labels, normalize=True)


def tensor(*states: QuantumState) -> QuantumState:
    """Tensor product in argument order; mixed inputs give a density matrix."""
    if not states:
        raise ValueError("tensor() needs at least one state")
    dims: tuple[int, ...] = ()
    labels: tuple[str, ...] = ()
    for s in states:
        dims += s.dims
        labels += s.labels
    if all(s.is_pure for s in states):
        vec = np.array([1.0 + 0j])
        for s in states:
            vec = np.kron(vec, s.data)
        return QuantumState.from_vector(vec, dims, labels, normalize=True)
    mat = np.array([[1.0 + 0j]])
    for s in states:
        mat = np.kron(mat, s.matrix)
    return QuantumState.from_matrix(mat, dims, labels, normalize=True)


def partial_trace(state: QuantumState, keep: Target | Sequence[Target]) -> QuantumState:
    """Reduced state on the kept subsystems (kept in their original order)."""
    keep_idx = sorted(_resolve_targets(state, keep))
    n = len(state.dims)
    drop_idx = [i for i in range(n) if i not in keep_idx]
    keep_dims = [state.dims[i] for i in keep_idx]
    dk = math.prod(keep_dims)
    dd = math.prod(state.dims[i] for i in drop_idx) if drop_idx else 1

    rho = state.matrix.reshape(state.dims + state.dims)
    order = keep_idx + drop_idx
    rho = rho.transpose(order + [n + i for i in order]).reshape(dk, dd, dk, dd)
    reduced = np.einsum("ijkj->ik", rho)
    labels = tuple(state.labels[i] for i in keep_idx)
    return QuantumState.from_matrix(reduced, tuple(keep_dims), labels, normalize=True)


def computational_projectors(dim: int, prefix: str = "") -> list[Projector]:
    """Projectors onto the computational basis states |0>, ..., |dim-1>."""
    basis = np.eye(dim)
    return [Projector.onto(basis[i], (dim,), f"{prefix}{i}") for i in range(dim)]


def measure_projective(
    state: QuantumState,
    projectors: Sequence[Projector],
    targets: Target | Sequence[Target] | None = None,
) -> tuple[list[float], list[QuantumState | None]]:
    """Projective measurement on the target subsystems.

    Incomplete projector sets are allowed for post-selection; a warning is logged
    when they do not sum to the identity.

    Returns:
        Tuple of (Born probabilities, renormalized post-states). A post-state is
        None when its outcome has zero probability.
    """
    if not projectors:
        raise ValueError("No projectors given")
    if targets is None:
        targets = list(range(len(state.dims)))
    idx = _resolve_targets(state, targets)
    target_dims = tuple(state.dims[i] for i in idx)
    for p in projectors:
        if p.dims != target_dims:
            raise DimensionError(f"Projector '{p.label}' on {p.dims} does not match {target_dims}")

    completeness = sum(p.matrix for p in projectors)
    if not np.allclose(completeness, np.eye(math.prod(target_dims)), atol=1e-12):
        logger.warning(
            f"Projectors {[p.label for p in projectors]} do not sum to identity; "
            "outcome probabilities are post-selected"
        )

    probabilities: list[float] = []
    post_states: list[QuantumState | None] = []
    for p in projectors:
        data, dims = apply_operator(state, p.matrix, idx)
        if state.is_pure:
            prob = float(np.vdot(data, data).real)
        else:
            prob = float(np.trace(data).real)
        probabilities.append(max(prob, 0.0))
        if prob <= 1e-15:
            post_states.append(None)
        elif state.is_pure:
            post_states.append(QuantumState.from_vector(data, dims, state.labels, normalize=True))
        else:
            post_states.append(QuantumState.from_matrix(data, dims, state.labels, normalize=True))
    return probabilities, post_states


def restrict_levels(
    state: QuantumState, subsystem: Target, levels: Sequence[int]
) -> tuple[float, QuantumState]:
    """Project a subsystem onto a subset of its levels and re-index them.

    Used to map the three-level ion onto the communication qubit after the merge
    gate has emptied the third level.

    Returns:
        Tuple of (retained probability, renormalized state on the smaller space)
    """
    i = state.index(subsystem)
    dim = state.dims[i]
    if not levels or any(not 0 <= lv < dim for lv in levels) or len(set(levels)) != len(levels):
        raise DimensionError(f"Invalid levels {levels} for subsystem of dimension {dim}")
    isometry = np.zeros((len(levels), dim), dtype=complex)
    for row, level in enumerate(levels):
        isometry[row, level] = 1.0
    data, dims = apply_operator(state, isometry, [i], out_dims=[len(levels)])
    if state.is_pure:
        prob = float(np.vdot(data, data).real)
    else:
        prob = float(np.trace(data).real)
    if prob <= 1e-15:
        raise ValueError(f"No population on levels {levels} of '{state.labels[i]}'")
    if state.is_pure:
        return prob, QuantumState.from_vector(data, dims, state.labels, normalize=True)
    return prob, QuantumState.from_matrix(data, dims, state.labels, normalize=True)


def expectation(state: QuantumState, observable: np.ndarray) -> complex:
    """<O> for an operator on the full space."""
    observable = np.asarray(observable, dtype=complex)
    if observable.shape != (state.dimension, state.dimension):
        raise DimensionError(f"Observable of shape {observable.shape} for dims {state.dims}")
    if state.is_pure:
        return complex(np.vdot(state.data, observable @ state.data))
    return complex(np.trace(state.data @ observable))


def permute(state: QuantumState, order: Sequence[Target]) -> QuantumState:
    """Reorder subsystems; order lists every subsystem exactly once."""
    idx = _resolve_targets(state, order)
    n = len(state.dims)
    if sorted(idx) != list(range(n)):
        raise DimensionError(f"Permutation {order} does not cover all of {state.labels}")
    dims = tuple(state.dims[i] for i in idx)
    labels = tuple(state.labels[i] for i in idx)
    if state.is_pure:
        vec = state.data.reshape(state.dims).transpose(idx).reshape(-1)
        return QuantumState(vec, dims, labels)
    rho = state.data.reshape(state.dims + state.dims)
    rho = rho.transpose(idx + [n + i for i in idx]).reshape(state.dimension, state.dimension)
    return QuantumState(rho, dims, labels)


def relabel(state: QuantumState, labels: Sequence[str]) -> QuantumState:
    return QuantumState(state.data, state.dims, tuple(labels))
