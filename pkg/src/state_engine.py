"""
Reference States and Correlation Tensors
Features:
- GHZ, cluster (fixed 4-qubit and linear-chain stabilizer), Dicke, W, singlet and Ψ(θ,φ) states
- Correlations T_j = Tr(ρ σ_j) by amplitude-pair traversal of the X/Z masks
- White-noise admixture, fidelity, density reconstruction from correlations
- Multinomial simulation of measurement counts in local Pauli eigenbases

Basis order: qubit 1 is the most significant bit of the computational-basis index,
so |HaVb⟩ = |0011⟩ has index 3 (tensor order pol1, path1, pol2, path2).
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from errors import ArgumentError, DimensionError, ValidationError
from pauli_core import Bipartition, MeasurementSetting, PauliString, all_pauli_strings

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
DEFAULT_NONVANISHING_TOL = 1e-9

_PAULI_2x2 = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}

# columns: eigenvector for +1 (outcome bit 0), eigenvector for -1 (outcome bit 1)
_EIGENBASES = {
    1: np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    2: np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2),
    3: np.eye(2, dtype=complex),
}


class StateFamily(Enum):
    """Built-in target states"""
    GHZ = "ghz"
    CLUSTER4 = "cluster4"
    CLUSTER_STABILIZER = "cluster"
    DICKE = "dicke"
    W = "w"
    SINGLET4 = "singlet4"
    PSI_FAMILY = "psi"
    GHZ_PRIME = "ghz_prime"

    @classmethod
    def parse(cls, name: Union[str, "StateFamily"]) -> "StateFamily":
        if isinstance(name, cls):
            return name
        key = name.strip().lower().replace("-", "_")
        aliases = {"ghz'": "ghz_prime", "ghzprime": "ghz_prime", "singlet": "singlet4",
                   "psifamily": "psi", "cluster_stabilizer": "cluster", "c4": "cluster4"}
        key = aliases.get(key, key)
        for member in cls:
            if member.value == key or member.name.lower() == key:
                return member
        raise ArgumentError(f"Unknown state family '{name}'")


@dataclass(eq=False)
class StateVector:
    """Normalized pure state"""
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 2 ** self.n_qubits:
            raise DimensionError(f"{self.amplitudes.size} amplitudes for {self.n_qubits} qubits")
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state not normalized (norm² = {norm:.15f})")

    @classmethod
    def normalized(cls, n_qubits: int, amplitudes: Iterable[complex]) -> "StateVector":
        vec = np.asarray(list(amplitudes), dtype=complex)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ArgumentError("zero vector cannot be normalized")
        return cls(n_qubits, vec / norm)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_dict(self) -> Dict:
        return {"n": self.n_qubits,
                "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes]}


@dataclass(eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator"""
    n_qubits: int
    entries: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        dim = 2 ** self.n_qubits
        if self.entries.shape != (dim, dim):
            raise DimensionError(f"matrix shape {self.entries.shape} for {self.n_qubits} qubits")
        if self.check:
            self.validate()

    def validate(self) -> None:
        if np.max(np.abs(self.entries - self.entries.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("density matrix is not Hermitian")
        trace = np.trace(self.entries).real
        if abs(trace - 1.0) > HERMITIAN_TOL:
            raise ValidationError(f"density matrix trace {trace} ≠ 1")
        smallest = float(np.linalg.eigvalsh(self.entries).min())
        if smallest < -PSD_TOL:
            raise ValidationError(f"density matrix has negative eigenvalue {smallest:.3e}")

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        return cls(state.n_qubits, state.projector())


@dataclass(eq=False)
class CorrelationSet:
    """Map Pauli index -> (value, stderr)"""
    n_qubits: int
    entries: Dict[PauliString, Tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for j, (value, stderr) in self.entries.items():
            if j.n_qubits != self.n_qubits:
                raise DimensionError(f"σ_{j.label} does not act on {self.n_qubits} qubits")
            value, stderr = float(value), float(stderr)
            if not np.isfinite(value) or abs(value) > 1.0 + 1e-9:
                raise ValidationError(f"T_{j.label} = {value} outside [-1, 1]")
            if not np.isfinite(stderr) or stderr < 0:
                raise ValidationError(f"stderr of T_{j.label} must be ≥ 0, got {stderr}")
            if j.is_identity() and (abs(value - 1.0) > 1e-9 or stderr != 0):
                raise ValidationError("identity correlation must be 1 with zero stderr")
            clean[j] = (float(np.clip(value, -1.0, 1.0)), stderr)
        self.entries = dict(sorted(clean.items(), key=lambda kv: kv[0].label))

    @classmethod
    def from_labels(cls, values: Mapping[str, Union[float, Tuple[float, float]]]) -> "CorrelationSet":
        """Build from {"3333": 0.982} or {"3333": (0.982, 0.003)}"""
        entries = {}
        for label, item in values.items():
            value, stderr = (item, 0.0) if np.isscalar(item) else item
            entries[PauliString.from_digits(label)] = (value, stderr)
        if not entries:
            raise ArgumentError("correlation set needs at least one entry")
        n = next(iter(entries)).n_qubits
        return cls(n, entries)

    def __contains__(self, j: PauliString) -> bool:
        return j in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self.entries)

    def items(self):
        return self.entries.items()

    def value(self, j: PauliString) -> float:
        return self.entries[j][0]

    def stderr(self, j: PauliString) -> float:
        return self.entries[j][1]

    def get(self, j: PauliString, default: Optional[Tuple[float, float]] = None):
        return self.entries.get(j, default)

    def labels(self) -> List[str]:
        return [j.label for j in self.entries]

    def to_dict(self) -> Dict[str, List[float]]:
        return {j.label: [v, s] for j, (v, s) in self.entries.items()}


@dataclass(eq=False)
class CountsRecord:
    """Outcome histogram of one measurement setting; bit 1 = eigenvalue -1"""
    setting: MeasurementSetting
    shots: int
    counts: Dict[str, int]

    def __post_init__(self):
        if self.shots < 1:
            raise ValidationError("shots must be positive")
        n = self.setting.n_qubits
        for outcome, count in self.counts.items():
            if len(outcome) != n or set(outcome) - {"0", "1"}:
                raise ValidationError(f"outcome '{outcome}' is not a {n}-bit string")
            if count < 0:
                raise ValidationError(f"negative count for outcome {outcome}")
        if sum(self.counts.values()) != self.shots:
            raise ValidationError(
                f"counts sum to {sum(self.counts.values())}, expected {self.shots} shots"
            )
        self.counts = dict(sorted((k, int(v)) for k, v in self.counts.items()))

    def to_dict(self) -> Dict:
        return {"setting": self.setting.label, "shots": self.shots, "counts": dict(self.counts)}


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def basis_index(bits: str) -> int:
    return int(bits, 2)


def _index_mask(mask: int, n: int) -> int:
    """Pauli mask (bit i-1 = qubit i) -> basis-index mask (qubit 1 = MSB)"""
    out = 0
    for i in range(n):
        if (mask >> i) & 1:
            out |= 1 << (n - 1 - i)
    return out


def _parity_array(values: np.ndarray, n: int) -> np.ndarray:
    parity = np.zeros_like(values)
    for b in range(n):
        parity ^= (values >> b) & 1
    return parity


def _pauli_action(j: PauliString) -> Tuple[np.ndarray, np.ndarray]:
    """σ_j|s⟩ = phase[s] |target[s]⟩ for every basis index s"""
    n = j.n_qubits
    s = np.arange(2 ** n, dtype=np.int64)
    x = _index_mask(j.x_mask, n)
    z = _index_mask(j.z_mask, n)
    n_y = bin(j.x_mask & j.z_mask).count("1")
    signs = 1 - 2 * _parity_array(s & z, n)
    phase = (1j ** n_y) * signs
    return s ^ x, phase


def pauli_matrix(j: PauliString) -> np.ndarray:
    """Dense 2^N x 2^N matrix of σ_j by Kronecker products"""
    matrix = np.array([[1.0 + 0j]])
    for d in j.digits:
        matrix = np.kron(matrix, _PAULI_2x2[d])
    return matrix


def _check_dims(state: Union[StateVector, DensityMatrix], n_qubits: int) -> None:
    if state.n_qubits != n_qubits:
        raise DimensionError(f"state on {state.n_qubits} qubits, operator on {n_qubits}")


# ---------------------------------------------------------------------------
# state construction
# ---------------------------------------------------------------------------

def _basis_superposition(n: int, terms: Mapping[str, complex]) -> StateVector:
    vec = np.zeros(2 ** n, dtype=complex)
    for bits, amp in terms.items():
        vec[basis_index(bits)] += amp
    return StateVector.normalized(n, vec)


def _cluster_chain(n: int) -> StateVector:
    """Graph state of the open chain: +1 eigenstate of X_i Z_{i-1} Z_{i+1}"""
    s = np.arange(2 ** n, dtype=np.int64)
    bits = [(s >> (n - 1 - i)) & 1 for i in range(n)]
    edges = sum(bits[i] * bits[i + 1] for i in range(n - 1))
    vec = (1 - 2 * (edges % 2)).astype(complex) / np.sqrt(2 ** n)
    return StateVector(n, vec)


def psi_family(theta: float, phi: float) -> StateVector:
    """Ψ(θ,φ) = (cos2θ|0000⟩ + sin2θ|0011⟩ + e^{iφ} sin2θ|1100⟩ − e^{iφ} cos2θ|1111⟩)/√2"""
    c, s = np.cos(2 * theta), np.sin(2 * theta)
    e = np.exp(1j * phi)
    return _basis_superposition(4, {"0000": c, "0011": s, "1100": e * s, "1111": -e * c})


def make_state(family: Union[str, StateFamily], n: int = 4,
               excitations: Optional[int] = None,
               theta: float = 0.0, phi: float = 0.0) -> StateVector:
    """
    Build a reference state

    Args:
        family: StateFamily member or its name ("ghz", "cluster4", "cluster", "dicke", "w",
            "singlet4", "psi", "ghz_prime")
        n: Number of qubits
        excitations: Number of excitations for Dicke states (default n // 2)
        theta, phi: Angles of the Ψ(θ,φ) family in radians

    Returns:
        Normalized StateVector
    """
    family = StateFamily.parse(family)
    if n < 2:
        raise ArgumentError("states need at least 2 qubits")
    fixed_four = (StateFamily.CLUSTER4, StateFamily.SINGLET4,
                  StateFamily.PSI_FAMILY, StateFamily.GHZ_PRIME)
    if family in fixed_four and n != 4:
        raise ArgumentError(f"{family.value} is defined for 4 qubits only")

    if family is StateFamily.GHZ:
        return _basis_superposition(n, {"0" * n: 1, "1" * n: 1})
    if family is StateFamily.CLUSTER4:
        return _basis_superposition(4, {"0000": 1, "0011": 1, "1100": -1, "1111": 1})
    if family is StateFamily.CLUSTER_STABILIZER:
        if n % 2:
            raise ArgumentError("the chain cluster state is used for even n only")
        return _cluster_chain(n)
    if family in (StateFamily.DICKE, StateFamily.W):
        k = 1 if family is StateFamily.W else (n // 2 if excitations is None else excitations)
        if not 0 <= k <= n:
            raise ArgumentError(f"excitations must lie in 0..{n}")
        terms = {}
        for ones in combinations(range(n), k):
            bits = ["0"] * n
            for i in ones:
                bits[i] = "1"
            terms["".join(bits)] = 1
        return _basis_superposition(n, terms)
    if family is StateFamily.SINGLET4:
        return _basis_superposition(4, {"0011": 1, "1100": 1, "0110": -0.5,
                                        "1001": -0.5, "0101": -0.5, "1010": -0.5})
    if family is StateFamily.GHZ_PRIME:
        return _basis_superposition(4, {"0011": 1, "1100": -1})
    return psi_family(theta, phi)


def state_from_dict(payload: Mapping) -> StateVector:
    amps = [complex(re, im) for re, im in payload["amplitudes"]]
    return StateVector(int(payload["n"]), np.array(amps))


def state_to_json(state: StateVector) -> str:
    return json.dumps(state.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# correlations
# ---------------------------------------------------------------------------

def correlation(state: Union[StateVector, DensityMatrix], j: PauliString) -> float:
    """T_j = Tr(ρ σ_j); ⟨ψ|σ_j|ψ⟩ for pure states"""
    _check_dims(state, j.n_qubits)
    target, phase = _pauli_action(j)
    if isinstance(state, StateVector):
        psi = state.amplitudes
        value = np.sum(psi[target].conj() * phase * psi)
    else:
        value = np.sum(state.entries[np.arange(target.size), target] * phase)
    return float(np.clip(value.real, -1.0, 1.0))


def batch_correlations(states: np.ndarray, ops: Sequence[PauliString]) -> np.ndarray:
    """
    Correlations of many pure states at once

    Args:
        states: Array of shape (m, 2^N), one normalized amplitude vector per row
        ops: Pauli strings on N qubits

    Returns:
        Real array of shape (m, len(ops))
    """
    states = np.atleast_2d(np.asarray(states, dtype=complex))
    out = np.empty((states.shape[0], len(ops)))
    for k, j in enumerate(ops):
        if states.shape[1] != 2 ** j.n_qubits:
            raise DimensionError(f"states of dimension {states.shape[1]} for σ_{j.label}")
        target, phase = _pauli_action(j)
        out[:, k] = np.einsum("ms,s,ms->m", states[:, target].conj(), phase, states).real
    return out


def correlation_tensor(state: Union[StateVector, DensityMatrix]) -> Dict[PauliString, float]:
    """All 4^N correlations"""
    return {j: correlation(state, j) for j in all_pauli_strings(state.n_qubits)}


def nonvanishing_correlations(state: Union[StateVector, DensityMatrix],
                              tol: float = DEFAULT_NONVANISHING_TOL) -> CorrelationSet:
    """Correlations with |T_j| > tol, identity included, stderr 0"""
    if tol <= 0:
        raise ArgumentError("tolerance must be positive")
    entries = {}
    for j, value in correlation_tensor(state).items():
        if abs(value) > tol:
            entries[j] = (value, 0.0)
    return CorrelationSet(state.n_qubits, entries)


def density_from_correlations(corrs: CorrelationSet, check_physical: bool = True) -> DensityMatrix:
    """ρ = 2^-N Σ_j T_j σ_j, missing entries taken as zero"""
    identity = PauliString.identity(corrs.n_qubits)
    if identity not in corrs or abs(corrs.value(identity) - 1.0) > 1e-9:
        raise ArgumentError("correlation set must contain the identity entry with value 1")
    dim = 2 ** corrs.n_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    for j, (value, _) in corrs.items():
        if value == 0:
            continue
        target, phase = _pauli_action(j)
        rho[target, np.arange(dim)] += value * phase
    return DensityMatrix(corrs.n_qubits, rho / dim, check=check_physical)


# ---------------------------------------------------------------------------
# noise and fidelity
# ---------------------------------------------------------------------------

def add_white_noise(state: StateVector, p: float) -> DensityMatrix:
    """p|ψ⟩⟨ψ| + (1-p) I/2^N"""
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"noise parameter p={p} outside [0, 1]")
    dim = 2 ** state.n_qubits
    rho = p * state.projector() + (1 - p) * np.eye(dim) / dim
    return DensityMatrix(state.n_qubits, rho)


def fidelity(rho: Union[DensityMatrix, StateVector], psi: StateVector) -> float:
    """F = ⟨ψ|ρ|ψ⟩"""
    if isinstance(rho, StateVector):
        rho = DensityMatrix.from_state(rho)
    _check_dims(rho, psi.n_qubits)
    value = np.vdot(psi.amplitudes, rho.entries @ psi.amplitudes).real
    return float(np.clip(value, 0.0, 1.0))


def noise_for_fidelity(target_fidelity: float, n_qubits: int) -> float:
    """White-noise weight p whose mixture has the given fidelity with its pure target"""
    floor = 1.0 / 2 ** n_qubits
    if not floor <= target_fidelity <= 1.0:
        raise ArgumentError(f"fidelity must lie in [{floor}, 1]")
    return float(np.clip((target_fidelity - floor) / (1.0 - floor), 0.0, 1.0))


def schmidt_coefficients(state: StateVector, cut: Bipartition) -> np.ndarray:
    """Singular values across the cut, sorted descending"""
    _check_dims(state, cut.n_qubits)
    n = state.n_qubits
    tensor = state.amplitudes.reshape((2,) * n)
    order = [i - 1 for i in sorted(cut.side_a)] + [i - 1 for i in sorted(cut.side_b)]
    matrix = np.transpose(tensor, order).reshape(2 ** len(cut.side_a), -1)
    return np.sort(np.linalg.svd(matrix, compute_uv=False))[::-1]


# ---------------------------------------------------------------------------
# counts
# ---------------------------------------------------------------------------

def outcome_probabilities(rho: Union[DensityMatrix, StateVector],
                          setting: MeasurementSetting) -> np.ndarray:
    """Born-rule probabilities of the 2^N outcome patterns"""
    if isinstance(rho, StateVector):
        rho = DensityMatrix.from_state(rho)
    _check_dims(rho, setting.n_qubits)
    basis = np.array([[1.0 + 0j]])
    for k in setting.locals:
        basis = np.kron(basis, _EIGENBASES[k])
    probs = np.einsum("ij,ik,kj->j", basis.conj(), rho.entries, basis).real
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def simulate_counts(rho: Union[DensityMatrix, StateVector], setting: MeasurementSetting,
                    shots: int, seed: int) -> CountsRecord:
    """
    Sample a multinomial outcome histogram

    Args:
        rho: State to measure
        setting: Local Pauli basis per qubit
        shots: Number of detection events
        seed: Seed of the numpy generator owned by this call

    Returns:
        CountsRecord with nonzero outcomes only
    """
    if shots < 1:
        raise ArgumentError("shots must be at least 1")
    probs = outcome_probabilities(rho, setting)
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    n = setting.n_qubits
    counts = {format(i, f"0{n}b"): int(c) for i, c in enumerate(draws) if c}
    return CountsRecord(setting, shots, counts)
