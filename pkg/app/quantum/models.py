"""Data models for quantum states, unitaries and projectors."""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field

from app.errors import DimensionError

# Two ions with two dual-rail photon modes
MAX_DIMENSION = 64

# Construction-time tolerances; results of exact constructions are far tighter
NORM_TOLERANCE = 1e-9
EIGENVALUE_FLOOR = -1e-10


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def _check_dims(dims: tuple[int, ...]) -> int:
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"Invalid subsystem dimensions: {dims}")
    total = math.prod(dims)
    if total > MAX_DIMENSION:
        raise DimensionError(
            f"Hilbert space dimension {total} exceeds the supported maximum {MAX_DIMENSION}"
        )
    return total


class StateDocument(BaseModel):
    """JSON form of a QuantumState.

    A flat amplitude list of length D is a pure state; length D*D is a row-major
    density matrix.
    """

    dims: list[int] = Field(..., description="Subsystem dimensions, ions first")
    labels: list[str] = Field(..., description="Subsystem names in the same order as dims")
    re: list[float] = Field(..., description="Real parts, flattened row-major")
    im: list[float] = Field(..., description="Imaginary parts, flattened row-major")


@dataclass(frozen=True)
class QuantumState:
    """Pure state or density matrix over a small composite Hilbert space.

    Subsystems are ordered ions first, then photonic modes. The underlying array is
    read-only, so instances can be shared freely between workers.
    """

    data: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        total = _check_dims(dims)
        labels = tuple(self.labels) or tuple(f"s{i}" for i in range(len(dims)))
        if len(labels) != len(dims):
            raise DimensionError(f"{len(labels)} labels given for {len(dims)} subsystems")
        if len(set(labels)) != len(labels):
            raise DimensionError(f"Duplicate subsystem labels: {labels}")

        data = np.array(self.data, dtype=complex)
        if data.ndim == 1:
            if data.shape != (total,):
                raise DimensionError(f"Amplitude vector of length {data.size} for dims {dims}")
            norm = float(np.vdot(data, data).real)
            if abs(norm - 1.0) > NORM_TOLERANCE:
                raise ValueError(f"State vector is not normalized (norm^2 = {norm})")
        elif data.ndim == 2:
            if data.shape != (total, total):
                raise DimensionError(f"Density matrix of shape {data.shape} for dims {dims}")
            if not np.allclose(data, data.conj().T, atol=NORM_TOLERANCE):
                raise ValueError("Density matrix is not Hermitian")
            trace = float(np.trace(data).real)
            if abs(trace - 1.0) > NORM_TOLERANCE:
                raise ValueError(f"Density matrix trace is {trace}, expected 1")
            smallest = float(np.linalg.eigvalsh(data).min())
            if smallest < EIGENVALUE_FLOOR:
                raise ValueError(f"Density matrix has negative eigenvalue {smallest}")
        else:
            raise DimensionError(f"State data must be a vector or a matrix, got ndim={data.ndim}")

        object.__setattr__(self, "data", _frozen(data))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_vector(
        cls, amplitudes, dims, labels=(), normalize: bool = False
    ) -> "QuantumState":
        """Build a pure state, optionally renormalizing the amplitudes."""
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise ValueError("Cannot normalize the zero vector")
            vec = vec / norm
        return cls(vec, tuple(dims), tuple(labels))

    @classmethod
    def from_matrix(cls, matrix, dims, labels=(), normalize: bool = False) -> "QuantumState":
        """Build a density-matrix state, optionally renormalizing the trace."""
        rho = np.asarray(matrix, dtype=complex)
        rho = (rho + rho.conj().T) / 2
        if normalize:
            trace = np.trace(rho).real
            if trace <= 0:
                raise ValueError("Cannot normalize a matrix with non-positive trace")
            rho = rho / trace
        return cls(rho, tuple(dims), tuple(labels))

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def dimension(self) -> int:
        return math.prod(self.dims)

    @property
    def matrix(self) -> np.ndarray:
        """Density matrix of the state (|psi><psi| for pure states)."""
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return np.array(self.data)

    def density(self) -> "QuantumState":
        if not self.is_pure:
            return self
        return QuantumState(self.matrix, self.dims, self.labels)

    def index(self, label: str | int) -> int:
        """Resolve a subsystem label (or pass through an integer index)."""
        if isinstance(label, int):
            if not 0 <= label < len(self.dims):
                raise DimensionError(f"Subsystem index {label} out of range for {self.labels}")
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise DimensionError(f"No subsystem named '{label}' in {self.labels}") from None

    def trace_value(self) -> float:
        if self.is_pure:
            return float(np.vdot(self.data, self.data).real)
        return float(np.trace(self.data).real)

    def purity(self) -> float:
        rho = self.matrix
        return float(np.trace(rho @ rho).real)

    def to_document(self) -> StateDocument:
        flat = self.data.reshape(-1)
        return StateDocument(
            dims=list(self.dims),
            labels=list(self.labels),
            re=[float(x) for x in flat.real],
            im=[float(x) for x in flat.imag],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_document().model_dump(mode="json"), sort_keys=True)

    @classmethod
    def from_document(cls, document: StateDocument) -> "QuantumState":
        values = np.array(document.re, dtype=float) + 1j * np.array(document.im, dtype=float)
        total = math.prod(document.dims)
        if values.size == total:
            return cls(values, tuple(document.dims), tuple(document.labels))
        if values.size == total * total:
            return cls(values.reshape(total, total), tuple(document.dims), tuple(document.labels))
        raise DimensionError(f"{values.size} values do not fit dims {document.dims}")

    @classmethod
    def from_json(cls, text: str) -> "QuantumState":
        return cls.from_document(StateDocument.model_validate_json(text))


@dataclass(frozen=True)
class Unitary:
    """Unitary acting on the listed subsystem dimensions."""

    matrix: np.ndarray
    dims: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        total = _check_dims(dims)
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (total, total):
            raise DimensionError(f"Unitary of shape {matrix.shape} for dims {dims}")
        if not np.allclose(matrix.conj().T @ matrix, np.eye(total), atol=1e-12):
            raise ValueError(f"Matrix '{self.label}' is not unitary")
        object.__setattr__(self, "matrix", _frozen(matrix))
        object.__setattr__(self, "dims", dims)

    def dagger(self) -> "Unitary":
        return Unitary(self.matrix.conj().T, self.dims, f"{self.label}^dagger")


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector tagged with its outcome label."""

    matrix: np.ndarray
    dims: tuple[int, ...]
    label: str

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        total = _check_dims(dims)
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (total, total):
            raise DimensionError(f"Projector of shape {matrix.shape} for dims {dims}")
        if not np.allclose(matrix, matrix.conj().T, atol=1e-12):
            raise ValueError(f"Projector '{self.label}' is not Hermitian")
        if not np.allclose(matrix @ matrix, matrix, atol=1e-12):
            raise ValueError(f"Projector '{self.label}' is not idempotent")
        object.__setattr__(self, "matrix", _frozen(matrix))
        object.__setattr__(self, "dims", dims)

    @classmethod
    def onto(cls, vector, dims, label: str) -> "Projector":
        """Rank-one projector onto a (normalized) vector."""
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        vec = vec / np.linalg.norm(vec)
        return cls(np.outer(vec, vec.conj()), tuple(dims), label)


@dataclass(frozen=True)
class SwapOutcome:
    """One Bell-measurement outcome of an entanglement swap."""

    label: str
    probability: float
    state: QuantumState | None
