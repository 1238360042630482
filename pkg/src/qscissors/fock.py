"""Truncated multimode Fock-space linear algebra.

Every mode of a computation keeps the levels ``0 .. n_max-1``. A basis vector
``|n_1, ..., n_k>`` sits at the row-major flat index with mode 1 varying
slowest, so a state vector reshapes to an array of shape ``(n_max,) * k``.

In the scissors pipeline the modes are ordered ``(a1/b1, c1, a2/b2/c2, b3/c3)``:
the output line first, then the idler, then the two inputs of the second
beam splitter.
"""

from dataclasses import dataclass
from string import ascii_letters

import numpy as np

from .errors import ConfigurationError, InvalidPovmError, UsageError

__all__ = [
    "BasisIndexer",
    "PureState",
    "DensityOperator",
    "check_cutoff",
    "fock_state",
    "vacuum",
    "tensor_product",
    "partial_trace",
    "apply_diagonal_povm",
    "fidelity_to_pure",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = -1e-10


def check_cutoff(n_max):
    if int(n_max) != n_max or n_max < 2:
        raise UsageError(f"cutoff n_max must be an integer >= 2, got {n_max!r}")
    return int(n_max)


def _readonly(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class BasisIndexer:
    """Bijection between flat basis indices and per-mode occupation numbers."""

    mode_count: int
    n_max: int

    def __post_init__(self):
        if self.mode_count < 1:
            raise UsageError("mode_count must be positive")
        object.__setattr__(self, "n_max", check_cutoff(self.n_max))

    @property
    def dim(self):
        return self.n_max**self.mode_count

    @property
    def shape(self):
        return (self.n_max,) * self.mode_count

    def flat_index(self, occupation):
        if len(occupation) != self.mode_count:
            raise UsageError(f"expected {self.mode_count} occupation numbers, got {len(occupation)}")
        if any(n < 0 or n >= self.n_max for n in occupation):
            raise UsageError(f"occupation {tuple(occupation)} outside cutoff {self.n_max}")
        return int(np.ravel_multi_index(tuple(occupation), self.shape))

    def multi_index(self, index):
        if not 0 <= index < self.dim:
            raise UsageError(f"flat index {index} outside [0, {self.dim})")
        return tuple(int(n) for n in np.unravel_index(index, self.shape))

    def __add__(self, other):
        if self.n_max != other.n_max:
            raise ConfigurationError(f"cutoff mismatch: {self.n_max} vs {other.n_max}")
        return BasisIndexer(self.mode_count + other.mode_count, self.n_max)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    indexer: BasisIndexer

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.indexer.dim:
            raise UsageError(f"{amps.size} amplitudes for a basis of dimension {self.indexer.dim}")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    @classmethod
    def from_tensor(cls, tensor):
        tensor = np.asarray(tensor)
        return cls(tensor.reshape(-1), BasisIndexer(tensor.ndim, tensor.shape[0]))

    @property
    def n_max(self):
        return self.indexer.n_max

    @property
    def mode_count(self):
        return self.indexer.mode_count

    def as_tensor(self):
        return self.amplitudes.reshape(self.indexer.shape)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self):
        norm = self.norm()
        if norm == 0.0:
            raise UsageError("cannot normalize the zero vector")
        return PureState(self.amplitudes / norm, self.indexer)

    def density(self):
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.indexer)

    def __matmul__(self, other):
        # kron matches the row-major, first-mode-slowest convention
        return PureState(np.kron(self.amplitudes, other.amplitudes), self.indexer + other.indexer)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray
    indexer: BasisIndexer

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        dim = self.indexer.dim
        if mat.shape != (dim, dim):
            raise UsageError(f"matrix shape {mat.shape} does not match basis dimension {dim}")
        object.__setattr__(self, "matrix", _readonly(mat))

    @classmethod
    def from_tensor(cls, tensor):
        tensor = np.asarray(tensor)
        k = tensor.ndim // 2
        indexer = BasisIndexer(k, tensor.shape[0])
        return cls(tensor.reshape(indexer.dim, indexer.dim), indexer)

    @property
    def n_max(self):
        return self.indexer.n_max

    @property
    def mode_count(self):
        return self.indexer.mode_count

    def as_tensor(self):
        return self.matrix.reshape(self.indexer.shape * 2)

    def trace(self):
        return float(np.trace(self.matrix).real)

    def normalize(self):
        tr = self.trace()
        if tr <= 0.0:
            raise UsageError(f"cannot normalize an operator with trace {tr}")
        return DensityOperator(self.matrix / tr, self.indexer)

    def photon_distribution(self, mode=0):
        """Marginal photon-number distribution of one mode."""
        reduced = partial_trace(self, {mode})
        return np.diag(reduced.matrix).real.copy()

    def check(self, normalized=True):
        """Raise ``ValueError`` unless the operator is a valid density operator."""
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if herm > HERMITIAN_TOL * max(1.0, np.max(np.abs(m))):
            raise ValueError(f"operator not Hermitian (max deviation {herm:.3e})")
        if normalized and abs(self.trace() - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {self.trace()!r} differs from 1")
        lowest = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
        if lowest < PSD_TOL:
            raise ValueError(f"negative eigenvalue {lowest:.3e}")
        return self

    def __matmul__(self, other):
        return tensor_product(self, other)


def fock_state(levels, n_max):
    """Product Fock state ``|n_1, n_2, ...>`` (an int gives a single mode)."""
    levels = (levels,) if np.isscalar(levels) else tuple(levels)
    indexer = BasisIndexer(len(levels), n_max)
    amps = np.zeros(indexer.dim, dtype=complex)
    amps[indexer.flat_index(levels)] = 1.0
    return PureState(amps, indexer)


def vacuum(n_max, modes=1):
    return fock_state((0,) * modes, n_max)


def tensor_product(a, b):
    if a.n_max != b.n_max:
        raise ConfigurationError(f"cutoff mismatch: {a.n_max} vs {b.n_max}")
    return DensityOperator(np.kron(a.matrix, b.matrix), a.indexer + b.indexer)


def partial_trace(rho, keep):
    """Trace out every mode not listed in ``keep``; kept modes retain their order."""
    keep = sorted(set(keep))
    k = rho.mode_count
    if not keep:
        raise UsageError("partial_trace needs at least one mode to keep")
    if keep[0] < 0 or keep[-1] >= k:
        raise UsageError(f"modes {keep} outside range 0..{k - 1}")
    if len(keep) == k:
        return rho
    ket = ascii_letters[:k]
    bra = list(ascii_letters[k : 2 * k])
    for mode in range(k):
        if mode not in keep:
            bra[mode] = ket[mode]
    out = "".join(ket[m] for m in keep) + "".join(bra[m] for m in keep)
    reduced = np.einsum(f"{ket}{''.join(bra)}->{out}", rho.as_tensor())
    return DensityOperator.from_tensor(reduced)


def _povm_weights(element, n_max):
    if not isinstance(element, (np.ndarray, list, tuple)):
        element = element.diagonal  # PovmElement
    weights = np.asarray(element, dtype=float)
    if weights.shape != (n_max,):
        raise UsageError(f"POVM element of length {weights.shape} for cutoff {n_max}")
    if np.any(weights < -1e-12):
        raise InvalidPovmError(f"POVM element has negative entry {weights.min():.3e}")
    return np.clip(weights, 0.0, None)


def apply_diagonal_povm(rho, mode, element):
    """Weight ``rho`` by a Fock-diagonal POVM element acting on ``mode``.

    Returns the unnormalized operator ``sqrt(E) rho sqrt(E)`` together with the
    outcome probability ``Tr(E rho)``.
    """
    if not 0 <= mode < rho.mode_count:
        raise UsageError(f"mode {mode} outside range 0..{rho.mode_count - 1}")
    root = np.sqrt(_povm_weights(element, rho.n_max))
    shape = [1] * rho.mode_count
    shape[mode] = rho.n_max
    factor = np.broadcast_to(root.reshape(shape), rho.indexer.shape).reshape(-1)
    weighted = rho.matrix * factor[:, None] * factor[None, :]
    return DensityOperator(weighted, rho.indexer), float(np.trace(weighted).real)


def fidelity_to_pure(rho, psi):
    if rho.indexer != psi.indexer:
        raise UsageError("state and target live on different bases")
    value = float(np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes).real)
    return min(max(value, 0.0), 1.0)
