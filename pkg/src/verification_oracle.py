"""
Verification Oracle
Brute-force evidence for the witness bounds
Features:
- Anticommuting sets: Σ T_j^2 <= 1 over random pure and mixed states
- Cut-anticommuting pairs: T_p^2 + T_q^2 <= 1 over states separable across the cut
- Witness thresholds: biseparable sampling per cut, mixtures across cuts, Nelder-Mead refinement
- Commuting sets: a joint eigenstate saturates Σ T_j^2 = |S|

Trials are split over workers, each with its own SeedSequence child,
so a run is reproducible for a fixed seed and worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.optimize import minimize
from scipy.stats import unitary_group

from errors import ArgumentError
from pauli_core import (
    Bipartition,
    PauliString,
    commutes,
    cut_anticommutes,
    enumerate_bipartitions,
    restrict,
)
from state_engine import DensityMatrix, batch_correlations, correlation, pauli_matrix
from witness_builder import CriterionKind, WitnessSpec, build_graph

BOUND_SLACK = 1e-9
FACTORIZATION_TOL = 1e-10
BATCH = 20000
POOL_PER_CUT = 2000


@dataclass
class OracleReport:
    suite: str
    trials: int
    max_observed: float
    bound: float
    passed: bool
    worst_case: Dict = field(default_factory=dict)
    details: Dict = field(default_factory=dict)
    applicable: bool = True

    @property
    def margin(self) -> float:
        return self.bound - self.max_observed

    def to_dict(self) -> Dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "max_observed": self.max_observed,
            "bound": self.bound,
            "margin": self.margin,
            "pass": self.passed,
            "applicable": self.applicable,
            "worst_case_descriptor": self.worst_case,
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------

def _child_seeds(seed: int, count: int) -> List[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def _run_partitioned(trials: int, seed: int, workers: int,
                     task: Callable[[np.random.Generator, int], Tuple]) -> List[Tuple]:
    """Split trials over workers; task(rng, count) runs once per worker"""
    if trials < 1:
        raise ArgumentError("trials must be at least 1")
    workers = max(1, min(workers, trials))
    sizes = [trials // workers + (1 if i < trials % workers else 0) for i in range(workers)]
    rngs = [np.random.default_rng(s) for s in _child_seeds(seed, workers)]
    if workers == 1:
        return [task(rngs[0], sizes[0])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, rngs, sizes))


def _haar_states(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Rows are Haar-random pure states"""
    vec = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return vec / np.linalg.norm(vec, axis=1, keepdims=True)


def _join(cut: Bipartition, psi_a: np.ndarray, psi_b: np.ndarray) -> np.ndarray:
    """Rows psi_a ⊗ psi_b reordered to qubit order 1..N"""
    n = cut.n_qubits
    count = psi_a.shape[0]
    order = sorted(cut.side_a) + sorted(cut.side_b)
    joint = np.einsum("ma,mb->mab", psi_a, psi_b).reshape((count,) + (2,) * n)
    axes = [0] + [1 + order.index(q) for q in range(1, n + 1)]
    return np.transpose(joint, axes).reshape(count, 2 ** n)


def _product_states(rng: np.random.Generator, count: int, cut: Bipartition):
    psi_a = _haar_states(rng, count, 2 ** len(cut.side_a))
    psi_b = _haar_states(rng, count, 2 ** len(cut.side_b))
    return psi_a, psi_b, _join(cut, psi_a, psi_b)


def _mix(rng: np.random.Generator, rows: np.ndarray, count: int, components: int) -> np.ndarray:
    """Correlations of random convex mixtures of the given rows (correlations are linear in ρ)"""
    k = max(2, min(components, rows.shape[0]))
    picks = rng.integers(0, rows.shape[0], size=(count, k))
    weights = rng.dirichlet(np.ones(k), size=count)
    return np.einsum("mk,mkj->mj", weights, rows[picks])


def _amplitudes(psi: np.ndarray) -> List[List[float]]:
    return [[float(a.real), float(a.imag)] for a in psi]


def _check_ops(ops: Sequence[PauliString]) -> int:
    if not ops:
        raise ArgumentError("operator list must be nonempty")
    sizes = {j.n_qubits for j in ops}
    if len(sizes) != 1:
        raise ArgumentError(f"operators act on different qubit numbers {sorted(sizes)}")
    return sizes.pop()


def _report(suite: str, trials: int, observed: float, bound: float, worst: Dict,
            details: Dict, slack: float, extra_ok: bool = True) -> OracleReport:
    passed = bool(observed <= bound + slack and extra_ok)
    return OracleReport(suite, trials, float(observed), float(bound), passed, worst, details)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def check_anticommuting_bound(ops: Sequence[PauliString], trials: int = 100000, seed: int = 0,
                              components: int = 8, workers: int = 1,
                              slack: float = BOUND_SLACK) -> OracleReport:
    """
    Sample Σ_j T_j^2 for a pairwise anticommuting set

    Args:
        ops: Pairwise anticommuting Pauli strings
        trials: Number of random pure states (the same number of mixtures is drawn)
        seed: Root seed
        components: Largest number of components in a random mixture
        workers: Number of trial partitions

    Returns:
        OracleReport against the bound 1
    """
    n = _check_ops(ops)
    for p, q in combinations(ops, 2):
        if commutes(p, q):
            raise ArgumentError(f"σ_{p.label} and σ_{q.label} commute")
    dim = 2 ** n

    def task(rng: np.random.Generator, count: int):
        best, best_state, kind = -1.0, None, None
        for start in range(0, count, BATCH):
            size = min(BATCH, count - start)
            states = _haar_states(rng, size, dim)
            corr = batch_correlations(states, ops)
            sums = np.sum(corr ** 2, axis=1)
            i = int(np.argmax(sums))
            if sums[i] > best:
                best, best_state, kind = float(sums[i]), states[i], "pure"
            mixed = np.max(np.sum(_mix(rng, corr, size, components) ** 2, axis=1))
            if mixed > best:
                best, best_state, kind = float(mixed), None, "mixture"
        for _ in range(min(count, 64)):
            u = unitary_group.rvs(dim, random_state=rng)
            rho = (u * rng.dirichlet(np.ones(dim))) @ u.conj().T
            value = sum(correlation(DensityMatrix(n, rho, check=False), j) ** 2 for j in ops)
            if value > best:
                best, best_state, kind = float(value), None, "full-rank"
        return best, best_state, kind

    results = _run_partitioned(trials, seed, workers, task)
    best, state, kind = max(results, key=lambda r: r[0])
    mixed = DensityMatrix(n, np.eye(dim) / dim)
    details = {
        "operators": [j.label for j in ops],
        "maximally_mixed": float(sum(correlation(mixed, j) ** 2 for j in ops)),
    }
    worst = {"kind": kind}
    if state is not None:
        worst["amplitudes"] = _amplitudes(state)
    return _report("anticommuting_bound", trials, best, 1.0, worst, details, slack)


def _dense(ops: Sequence[PauliString]) -> np.ndarray:
    return np.stack([pauli_matrix(j) for j in ops])


def _refine_product(cut: Bipartition, objective: Callable[[np.ndarray], float],
                    starts: Sequence[Tuple[np.ndarray, np.ndarray]], restarts: int,
                    rng: np.random.Generator, maxiter: int):
    """Maximize objective(product state) by Nelder-Mead over both sides' amplitudes"""
    da, db = 2 ** len(cut.side_a), 2 ** len(cut.side_b)

    def unpack(x: np.ndarray):
        psi_a = x[:da] + 1j * x[da:2 * da]
        psi_b = x[2 * da:2 * da + db] + 1j * x[2 * da + db:]
        norm_a, norm_b = np.linalg.norm(psi_a), np.linalg.norm(psi_b)
        if norm_a == 0 or norm_b == 0:
            return None
        return psi_a / norm_a, psi_b / norm_b

    def loss(x: np.ndarray) -> float:
        sides = unpack(x)
        if sides is None:
            return 0.0
        return -objective(_join(cut, sides[0][None, :], sides[1][None, :])[0])

    points = [np.concatenate([a.real, a.imag, b.real, b.imag]) for a, b in starts[:restarts]]
    while len(points) < restarts:
        points.append(rng.standard_normal(2 * (da + db)))

    best_value, best_sides = -np.inf, None
    for x0 in points:
        result = minimize(loss, x0, method="Nelder-Mead",
                          options={"maxiter": maxiter, "xatol": 1e-10, "fatol": 1e-13,
                                   "adaptive": True})
        if -result.fun > best_value and unpack(result.x) is not None:
            best_value, best_sides = float(-result.fun), unpack(result.x)
    return best_value, best_sides


def check_biseparable_bound(p: PauliString, q: PauliString, cut: Bipartition,
                            trials: int = 100000, seed: int = 0, restarts: int = 12,
                            components: int = 8, workers: int = 1, maxiter: int = 2000,
                            slack: float = BOUND_SLACK) -> OracleReport:
    """
    Sample T_p^2 + T_q^2 over states separable across a cut

    Also checks T_p = T_p|A · T_p|B on every sampled product state and
    refines the maximum with multi-start Nelder-Mead.
    """
    _check_ops([p, q])
    if cut.n_qubits != p.n_qubits:
        raise ArgumentError(f"cut on {cut.n_qubits} qubits, operators on {p.n_qubits}")
    if not cut_anticommutes(p, q, cut):
        raise ArgumentError(f"σ_{p.label} and σ_{q.label} do not {cut.label}-anticommute")
    ops = [p, q]
    ops_a = [restrict(j, cut.side_a) for j in ops]
    ops_b = [restrict(j, cut.side_b) for j in ops]

    def task(rng: np.random.Generator, count: int):
        best, best_sides, factor_error = -1.0, None, 0.0
        for start in range(0, count, BATCH):
            size = min(BATCH, count - start)
            psi_a, psi_b, full = _product_states(rng, size, cut)
            corr = batch_correlations(full, ops)
            local = batch_correlations(psi_a, ops_a) * batch_correlations(psi_b, ops_b)
            factor_error = max(factor_error, float(np.max(np.abs(corr - local))))
            sums = np.sum(corr ** 2, axis=1)
            i = int(np.argmax(sums))
            if sums[i] > best:
                best, best_sides = float(sums[i]), (psi_a[i], psi_b[i])
            mixed = float(np.max(np.sum(_mix(rng, corr, size, components) ** 2, axis=1)))
            best = max(best, mixed)
        return best, best_sides, factor_error

    results = _run_partitioned(trials, seed, workers, task)
    sampled, sides, _ = max(results, key=lambda r: r[0])
    factor_error = max(r[2] for r in results)

    mats = _dense(ops)

    def objective(psi: np.ndarray) -> float:
        t = np.einsum("s,kst,t->k", psi.conj(), mats, psi).real
        return float(np.sum(t ** 2))

    rng = np.random.default_rng(_child_seeds(seed, 1)[0] + 1)
    starts = [sides] if sides is not None else []
    refined, refined_sides = _refine_product(cut, objective, starts, restarts, rng, maxiter)
    best = max(sampled, refined)
    chosen = refined_sides if refined >= sampled else sides
    worst = {"cut": cut.label}
    if chosen is not None:
        worst.update(psi_a=_amplitudes(chosen[0]), psi_b=_amplitudes(chosen[1]))
    details = {
        "operators": [p.label, q.label],
        "sampled_max": sampled,
        "refined_max": refined,
        "factorization_error": factor_error,
    }
    return _report("biseparable_bound", trials, best, 1.0, worst, details, slack,
                   extra_ok=factor_error < FACTORIZATION_TOL)


def refine_biseparable_max(witness: WitnessSpec, cut: Bipartition, restarts: int = 12,
                           seed: int = 0, maxiter: int = 2000,
                           starts: Optional[Sequence[Tuple[np.ndarray, np.ndarray]]] = None):
    """
    Push the witness value of states separable across a cut toward its supremum

    Returns:
        (value, descriptor) where descriptor holds the best product state's sides
    """
    if restarts < 1:
        raise ArgumentError("restarts must be at least 1")
    mats = _dense(witness.operators)
    coeffs = np.array([float(w / witness.g0) for w in witness.weights])

    def objective(psi: np.ndarray) -> float:
        t = np.einsum("s,kst,t->k", psi.conj(), mats, psi).real
        return float(coeffs @ t ** 2)

    rng = np.random.default_rng(seed)
    value, sides = _refine_product(cut, objective, list(starts or []), restarts, rng, maxiter)
    descriptor = {"cut": cut.label}
    if sides is not None:
        descriptor.update(psi_a=_amplitudes(sides[0]), psi_b=_amplitudes(sides[1]))
    return value, descriptor


def check_witness_threshold(witness: WitnessSpec, trials: int = 100000, seed: int = 0,
                            restarts: int = 12, components: int = 8, workers: int = 1,
                            maxiter: int = 2000, slack: float = BOUND_SLACK,
                            verbose: bool = False) -> OracleReport:
    """
    Search biseparable states for values above G/G0

    Args:
        witness: Witness under test
        trials: Product states sampled per cut
        seed: Root seed; every cut gets its own child seed
        restarts: Nelder-Mead starts per cut
        components: Largest number of components in a cross-cut mixture

    Returns:
        OracleReport with per-cut maxima in details
    """
    ops = list(witness.operators)
    coeffs = np.array([float(w / witness.g0) for w in witness.weights])
    cuts = enumerate_bipartitions(witness.n_qubits)
    seeds = _child_seeds(seed, len(cuts) + 1)

    per_cut, pool, overall, worst = {}, [], -1.0, {}
    for cut, cut_seed in zip(cuts, seeds):
        def task(rng: np.random.Generator, count: int, cut=cut):
            best, best_sides, rows = -1.0, None, []
            for start in range(0, count, BATCH):
                size = min(BATCH, count - start)
                psi_a, psi_b, full = _product_states(rng, size, cut)
                corr = batch_correlations(full, ops)
                values = (corr ** 2) @ coeffs
                i = int(np.argmax(values))
                if values[i] > best:
                    best, best_sides = float(values[i]), (psi_a[i], psi_b[i])
                rows.append(corr[:POOL_PER_CUT])
            return best, best_sides, np.concatenate(rows)[:POOL_PER_CUT]

        results = _run_partitioned(trials, cut_seed, workers, task)
        sampled, sides, _ = max(results, key=lambda r: r[0])
        pool.extend(r[2] for r in results)
        refined, descriptor = refine_biseparable_max(
            witness, cut, restarts, cut_seed, maxiter, starts=[sides] if sides is not None else None)
        per_cut[cut.label] = {"sampled": sampled, "refined": refined}
        cut_best = max(sampled, refined)
        if cut_best > overall:
            overall = cut_best
            worst = descriptor if refined >= sampled else {
                "cut": cut.label, "psi_a": _amplitudes(sides[0]), "psi_b": _amplitudes(sides[1])}
        if verbose:
            print(f"   {cut.label}: sampled {sampled:.6f}, refined {refined:.6f}")

    rows = np.concatenate(pool)
    rng = np.random.default_rng(seeds[-1])
    mixed = (_mix(rng, rows, min(trials, rows.shape[0]), components) ** 2) @ coeffs
    mixture_max = float(np.max(mixed))
    if mixture_max > overall:
        overall, worst = mixture_max, {"kind": "mixture across cuts"}

    dim = 2 ** witness.n_qubits
    maximally_mixed = DensityMatrix(witness.n_qubits, np.eye(dim) / dim)
    details = {
        "per_cut": per_cut,
        "mixture_max": mixture_max,
        "maximally_mixed": float(coeffs @ np.array(
            [correlation(maximally_mixed, j) ** 2 for j in ops])),
    }
    return _report("witness_threshold", trials, overall, float(witness.threshold), worst,
                   details, slack)


def _joint_eigenstate(ops: Sequence[PauliString]) -> np.ndarray:
    """Common eigenvector of commuting strings by successive restriction to eigenspaces"""
    dim = 2 ** ops[0].n_qubits
    basis = np.eye(dim, dtype=complex)
    for j in ops:
        restricted = basis.conj().T @ pauli_matrix(j) @ basis
        values, vectors = np.linalg.eigh((restricted + restricted.conj().T) / 2)
        plus = values > 0
        keep = plus if plus.sum() >= (~plus).sum() else ~plus
        basis = basis @ vectors[:, keep]
    return basis[:, 0]


def check_commuting_saturation(ops: Sequence[PauliString], trials: int = 2000, seed: int = 0,
                               slack: float = BOUND_SLACK) -> OracleReport:
    """
    A joint eigenstate of commuting strings reaches Σ T_j^2 = |S|; random states stay below

    Args:
        ops: Pairwise commuting strings on at most 6 qubits
        trials: Random pure states compared against the bound
    """
    n = _check_ops(ops)
    if n > 6:
        raise ArgumentError("joint diagonalization is limited to 6 qubits")
    for p, q in combinations(ops, 2):
        if not commutes(p, q):
            raise ArgumentError(f"σ_{p.label} and σ_{q.label} do not commute")
    bound = float(len(ops))
    eigenstate = _joint_eigenstate(ops)
    signs = batch_correlations(eigenstate[None, :], ops)[0]
    saturation = float(np.sum(signs ** 2))

    rng = np.random.default_rng(seed)
    random_max = float(np.max(np.sum(
        batch_correlations(_haar_states(rng, trials, 2 ** n), ops) ** 2, axis=1)))
    details = {
        "operators": [j.label for j in ops],
        "eigenstate_value": saturation,
        "eigenvalues": [round(float(s), 12) for s in signs],
        "random_max": random_max,
        "saturated": abs(saturation - bound) < 1e-9,
    }
    worst = {"amplitudes": _amplitudes(eigenstate)}
    return _report("commuting_saturation", trials, max(saturation, random_max), bound, worst,
                   details, slack, extra_ok=details["saturated"])


def check_all(witness: WitnessSpec, trials: int = 100000, seed: int = 0, restarts: int = 12,
              components: int = 8, workers: int = 1, slack: float = BOUND_SLACK,
              verbose: bool = False) -> List[OracleReport]:
    """
    Run every suite that applies to a witness

    Anticommuting cliques of the witness, one cut-anticommuting pair per
    biclique criterion, the witness threshold, and saturation of its largest
    commuting prefix. A witness of pairwise commuting operators gets a
    not-applicable anticommuting_bound entry.
    """
    n = witness.n_qubits
    ops = list(witness.operators)
    suite_seeds = _child_seeds(seed, 4)
    reports = []

    graph = build_graph(ops, None)
    cliques = sorted((sorted(c) for c in nx.find_cliques(graph.to_networkx()) if len(c) > 1))
    anticommuting_sets = [[ops[i] for i in c] for c in cliques[:4]]
    if not anticommuting_sets:
        reports.append(OracleReport("anticommuting_bound", 0, 0.0, 1.0, True,
                                    details={"reason": "no anticommuting pair among the operators"},
                                    applicable=False))
    for group in anticommuting_sets:
        reports.append(check_anticommuting_bound(group, trials, suite_seeds[0], components, workers,
                                                 slack))

    seen = set()
    for criterion in witness.per_cut_criteria:
        if not criterion.available or criterion.kind is not CriterionKind.BICLIQUE:
            continue
        key = (criterion.class_a[0], criterion.class_b[0], criterion.cut)
        if key in seen:
            continue
        seen.add(key)
        reports.append(check_biseparable_bound(*key, trials=trials, seed=suite_seeds[1],
                                               restarts=restarts, components=components,
                                               workers=workers, slack=slack))

    reports.append(check_witness_threshold(witness, trials, suite_seeds[2], restarts,
                                           components, workers, slack=slack, verbose=verbose))

    if n <= 6:
        commuting = []
        for j in ops:
            if all(commutes(j, other) for other in commuting):
                commuting.append(j)
        reports.append(check_commuting_saturation(commuting, min(trials, 2000), suite_seeds[3],
                                                  slack))

    if verbose:
        for r in reports:
            mark = ("✓" if r.passed else "✗") if r.applicable else "-"
            print(f"{mark} {r.suite}: max {r.max_observed:.6f} vs bound {r.bound:.6f}")
    return reports
