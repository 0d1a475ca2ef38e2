"""
Witness Construction
Builds combined witnesses and per-cut criteria from a target's correlations
Features:
- Operator selection from measurement settings
- Cut-anticommutativity graphs and exact maximum-weight independent sets
- Min-max weight optimization as an exact two-stage linear program
- Per-cut criteria from bicliques (or regular subgraphs) of each cut graph
- Published four-qubit criteria and closed-form N-qubit GHZ / cluster families
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from config.witness_catalog import WITNESS_CATALOG
from errors import ArgumentError, ConstructionError, DimensionError, LPError
from exact_lp import LP, fmt_out, parse_fraction, rationalize, solve
from pauli_core import (
    Bipartition,
    MeasurementSetting,
    PauliString,
    all_settings,
    commutes,
    cut_anticommutes,
    derivable_indices,
    enumerate_bipartitions,
    is_derivable,
    multiply,
    parse_bipartition,
)
from state_engine import CorrelationSet, make_state, nonvanishing_correlations

DEFAULT_MIN_ABS = 1e-6
UNIT_TOL = 1e-9
HALF = Fraction(1, 2)

Weight = Union[int, float, Fraction]


class CriterionKind(Enum):
    """Shape of a per-cut criterion"""
    BICLIQUE = "biclique"  # 1/2 [mean_A T^2 + mean_B T^2] <= 1/2
    AVERAGED = "averaged"  # mean over a regular subgraph, mean T^2 <= 1/2


class CriteriaFamily(Enum):
    """Four-qubit states with published criteria"""
    GHZ4 = "ghz4"
    CLUSTER4 = "cluster4"
    DICKE42 = "dicke42"
    SINGLET4 = "singlet4"
    W4 = "w4"

    @classmethod
    def parse(cls, name: Union[str, "CriteriaFamily"]) -> "CriteriaFamily":
        if isinstance(name, cls):
            return name
        key = name.strip().lower().replace("-", "").replace("_", "")
        for member in cls:
            if member.value == key or member.name.lower() == key:
                return member
        raise ArgumentError(f"No published criteria for '{name}'")


@dataclass(frozen=True)
class AnticommGraph:
    """Vertices are operators; edges join pairs that cut-anticommute (cut=None: globally)"""
    vertices: Tuple[PauliString, ...]
    cut: Optional[Bipartition]
    edges: frozenset

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def neighbours(self, i: int) -> List[int]:
        return sorted(b if a == i else a for a, b in self.edges if i in (a, b))

    def degree(self, i: int) -> int:
        return len(self.neighbours(i))

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_vertices))
        graph.add_edges_from(self.edges)
        return graph

    @property
    def label(self) -> str:
        return "global" if self.cut is None else self.cut.label


@dataclass(frozen=True)
class CutCriterion:
    """
    Individual criterion for one cut

    BICLIQUE: every member of class_a cut-anticommutes with every member of class_b
    and the value is 1/2 [mean_{class_a} T^2 + mean_{class_b} T^2].
    AVERAGED: class_a spans a regular subgraph of the cut graph, class_b is empty
    and the value is mean_{class_a} T^2.
    """
    cut: Bipartition
    class_a: Tuple[PauliString, ...]
    class_b: Tuple[PauliString, ...] = ()
    kind: CriterionKind = CriterionKind.BICLIQUE
    bound: Fraction = HALF
    available: bool = True
    ideal_score: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "class_a", tuple(self.class_a))
        object.__setattr__(self, "class_b", tuple(self.class_b))
        if not self.available:
            return
        members = self.members
        for j in members:
            if j.n_qubits != self.cut.n_qubits:
                raise DimensionError(f"σ_{j.label} does not act on {self.cut.n_qubits} qubits")
        if self.kind is CriterionKind.BICLIQUE:
            if not self.class_a or not self.class_b:
                raise ArgumentError("a biclique criterion needs two nonempty classes")
            for p in self.class_a:
                for q in self.class_b:
                    if not cut_anticommutes(p, q, self.cut):
                        raise ArgumentError(
                            f"σ_{p.label} and σ_{q.label} do not {self.cut.label}-anticommute"
                        )
        elif len(self.class_a) < 2 or self.class_b:
            raise ArgumentError("an averaged criterion needs ≥2 operators in class_a only")
        for p, q in combinations(members, 2):
            if not commutes(p, q):
                raise ArgumentError(f"σ_{p.label} and σ_{q.label} do not commute")

    @classmethod
    def unavailable(cls, cut: Bipartition) -> "CutCriterion":
        return cls(cut, (), (), available=False)

    @property
    def members(self) -> Tuple[PauliString, ...]:
        return self.class_a + self.class_b

    @property
    def coefficients(self) -> Dict[PauliString, Fraction]:
        """Value = Σ coefficient_j T_j^2"""
        if not self.available:
            return {}
        if self.kind is CriterionKind.AVERAGED:
            return {j: Fraction(1, len(self.class_a)) for j in self.class_a}
        coeffs = {j: Fraction(1, 2 * len(self.class_a)) for j in self.class_a}
        coeffs.update({j: Fraction(1, 2 * len(self.class_b)) for j in self.class_b})
        return coeffs

    def score(self, values: Mapping[PauliString, float]) -> float:
        """Criterion value for correlations given as a plain map; absent entries count as 0"""
        return float(sum(float(c) * values.get(j, 0.0) ** 2 for j, c in self.coefficients.items()))

    def to_dict(self) -> Dict:
        return {
            "cut": self.cut.label,
            "kind": self.kind.value,
            "available": self.available,
            "class_a": [j.label for j in self.class_a],
            "class_b": [j.label for j in self.class_b],
            "bound": fmt_out(self.bound),
            "ideal_score": self.ideal_score,
        }


@dataclass(eq=False)
class WitnessSpec:
    """W = (1/g0) Σ v_j T_j^2, biseparable states stay at or below g/g0"""
    n_qubits: int
    operators: Tuple[PauliString, ...]
    weights: Tuple[Fraction, ...]
    g0: Fraction
    g: Fraction
    settings: Tuple[MeasurementSetting, ...]
    per_cut_criteria: Tuple[CutCriterion, ...] = ()
    metadata: Dict = field(default_factory=dict)
    witness_id: str = ""

    def __post_init__(self):
        self.operators = tuple(self.operators)
        self.weights = tuple(parse_fraction(w) for w in self.weights)
        self.settings = tuple(self.settings)
        self.per_cut_criteria = tuple(self.per_cut_criteria)
        self.g0, self.g = parse_fraction(self.g0), parse_fraction(self.g)
        if not self.operators:
            raise ConstructionError("witness has no operators")
        if len(self.weights) != len(self.operators):
            raise ArgumentError("one weight per operator is required")
        if any(w <= 0 for w in self.weights):
            raise ArgumentError("weights must be positive")
        for item in self.operators + self.settings:
            if item.n_qubits != self.n_qubits:
                raise DimensionError(f"{item!r} does not act on {self.n_qubits} qubits")
        if self.g >= self.g0:
            raise ConstructionError(f"witness detects nothing (G={self.g} ≥ G0={self.g0})")
        for j in self.operators:
            if not any(is_derivable(j, k) for k in self.settings):
                raise ConstructionError(f"σ_{j.label} is not derivable from the listed settings")
        if not self.witness_id:
            labels = "-".join(k.label for k in self.settings)
            self.witness_id = f"witness-{self.n_qubits}q-{labels}"

    @property
    def threshold(self) -> Fraction:
        return self.g / self.g0

    @property
    def commuting(self) -> bool:
        return all(commutes(p, q) for p, q in combinations(self.operators, 2))

    def weight_of(self, j: PauliString) -> Fraction:
        return self.weights[self.operators.index(j)]

    def ideal_value(self, corrs: CorrelationSet) -> Fraction:
        """Witness value of the correlations, exact after rationalizing T_j^2"""
        total = sum(w * _square(corrs, j) for j, w in zip(self.operators, self.weights))
        return Fraction(total) / self.g0

    def to_dict(self) -> Dict:
        return {
            "witness_id": self.witness_id,
            "n_qubits": self.n_qubits,
            "operators": [j.label for j in self.operators],
            "weights": [fmt_out(w) for w in self.weights],
            "g": fmt_out(self.g),
            "g0": fmt_out(self.g0),
            "threshold": fmt_out(self.threshold),
            "threshold_decimal": float(self.threshold),
            "settings": [k.label for k in self.settings],
            "per_cut_criteria": [c.to_dict() for c in self.per_cut_criteria],
            "metadata": self.metadata,
        }


def witness_from_dict(payload: Mapping) -> WitnessSpec:
    """Inverse of WitnessSpec.to_dict"""
    try:
        n = int(payload["n_qubits"])
        criteria = []
        for item in payload.get("per_cut_criteria", []):
            cut = parse_bipartition(item["cut"], n)
            if not item.get("available", True):
                criteria.append(CutCriterion.unavailable(cut))
                continue
            criteria.append(CutCriterion(
                cut,
                tuple(PauliString.from_digits(x) for x in item["class_a"]),
                tuple(PauliString.from_digits(x) for x in item.get("class_b", [])),
                kind=CriterionKind(item.get("kind", "biclique")),
                bound=parse_fraction(item.get("bound", "1/2")),
                ideal_score=item.get("ideal_score"),
            ))
        return WitnessSpec(
            n_qubits=n,
            operators=tuple(PauliString.from_digits(x) for x in payload["operators"]),
            weights=tuple(parse_fraction(w) for w in payload["weights"]),
            g0=parse_fraction(payload["g0"]),
            g=parse_fraction(payload["g"]),
            settings=tuple(MeasurementSetting.from_label(k) for k in payload["settings"]),
            per_cut_criteria=tuple(criteria),
            metadata=dict(payload.get("metadata", {})),
            witness_id=payload.get("witness_id", ""),
        )
    except KeyError as e:
        raise ArgumentError(f"witness payload lacks field {e}")


@dataclass
class WeightSolution:
    """Outcome of optimize_weights; unpacks as (weights, g, g0)"""
    weights: Tuple[Fraction, ...]
    g: Fraction
    g0: Fraction
    t_star: Optional[Fraction] = None
    max_min_weight: Optional[Fraction] = None
    per_cut_g: Dict[str, Fraction] = field(default_factory=dict)
    binding_cuts: Tuple[str, ...] = ()
    degenerate: bool = False

    @property
    def non_detecting(self) -> bool:
        return self.g >= self.g0

    def __iter__(self) -> Iterator:
        return iter((self.weights, self.g, self.g0))

    def certificate(self) -> Dict:
        return {
            "lp_optimum": fmt_out(self.t_star) if self.t_star is not None else None,
            "max_min_weight": fmt_out(self.max_min_weight) if self.max_min_weight is not None else None,
            "binding_cuts": list(self.binding_cuts),
            "per_cut_g": {label: fmt_out(v) for label, v in self.per_cut_g.items()},
        }


@dataclass
class NamedCriteria:
    """Published per-cut criteria of a state, plus its combined witness if there is one"""
    family: CriteriaFamily
    criteria: List[CutCriterion]
    combined: Optional[WitnessSpec]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _square(corrs: Optional[CorrelationSet], j: PauliString) -> Fraction:
    """Rationalized T_j^2; 1 when no correlations are given"""
    if corrs is None:
        return Fraction(1)
    entry = corrs.get(j)
    if entry is None:
        return Fraction(0)
    return rationalize(entry[0] ** 2)


def _check_ops(ops: Sequence[PauliString]) -> int:
    if not ops:
        raise ArgumentError("operator list must be nonempty")
    sizes = {j.n_qubits for j in ops}
    if len(sizes) != 1:
        raise DimensionError(f"operators act on different qubit numbers {sorted(sizes)}")
    return sizes.pop()


def _require_commuting(ops: Sequence[PauliString]) -> None:
    for p, q in combinations(ops, 2):
        if not commutes(p, q):
            raise ArgumentError(f"σ_{p.label} and σ_{q.label} do not commute")


def _independent_set_constraints(ops: Sequence[PauliString],
                                  cuts: Sequence[Bipartition]) -> Dict[str, List[Tuple[int, ...]]]:
    return {cut.label: maximal_independent_sets(build_graph(ops, cut)) for cut in cuts}


def _setting_rank(j: PauliString, settings: Sequence[MeasurementSetting]) -> Tuple[int, str]:
    first = next(i for i, k in enumerate(settings) if is_derivable(j, k))
    return first, j.label


# ---------------------------------------------------------------------------
# operator selection and graphs
# ---------------------------------------------------------------------------

def select_operators(corrs: CorrelationSet, settings: Sequence[MeasurementSetting],
                     min_abs: float = DEFAULT_MIN_ABS,
                     commuting_only: bool = True) -> List[PauliString]:
    """
    Pick the witness operators

    Args:
        corrs: Correlations of the target state
        settings: Measurement settings available in the experiment
        min_abs: Smallest |T_j| kept
        commuting_only: Drop operators that break mutual commutativity, keeping larger |T_j|

    Returns:
        Non-identity operators ordered by the first setting that yields them, then by label
    """
    if not settings:
        raise ArgumentError("at least one measurement setting is required")
    if not 0 < min_abs <= 1:
        raise ArgumentError(f"min_abs must lie in (0, 1], got {min_abs}")
    for k in settings:
        if k.n_qubits != corrs.n_qubits:
            raise DimensionError(f"setting {k!r} does not act on {corrs.n_qubits} qubits")

    reachable = set()
    for k in settings:
        reachable |= derivable_indices(k)
    candidates = [j for j, (value, _) in corrs.items()
                  if not j.is_identity() and j in reachable and abs(value) >= min_abs]

    if commuting_only:
        chosen: List[PauliString] = []
        for j in sorted(candidates, key=lambda j: (-abs(corrs.value(j)), j.label)):
            if all(commutes(j, other) for other in chosen):
                chosen.append(j)
        candidates = chosen

    if not candidates:
        raise ConstructionError("no usable operators")
    return sorted(candidates, key=lambda j: _setting_rank(j, settings))


def build_graph(ops: Sequence[PauliString], cut: Optional[Bipartition]) -> AnticommGraph:
    """
    Anticommutativity graph of a cut

    With cut=None edges join globally anticommuting pairs, so a commuting
    operator set gives an edgeless graph.
    """
    n = _check_ops(ops)
    if cut is not None and cut.n_qubits != n:
        raise DimensionError(f"cut on {cut.n_qubits} qubits, operators on {n}")
    edges = set()
    for i, j in combinations(range(len(ops)), 2):
        linked = not commutes(ops[i], ops[j]) if cut is None else cut_anticommutes(ops[i], ops[j], cut)
        if linked:
            edges.add((i, j))
    return AnticommGraph(tuple(ops), cut, frozenset(edges))


def maximal_independent_sets(graph: AnticommGraph) -> List[Tuple[int, ...]]:
    """All maximal independent sets (cliques of the complement), sorted"""
    complement = nx.complement(graph.to_networkx())
    return sorted(tuple(sorted(clique)) for clique in nx.find_cliques(complement))


def max_weight_independent(graph: AnticommGraph,
                           weights: Sequence[Weight]) -> Tuple[Weight, List[int]]:
    """
    Exact maximum-weight independent set

    Returns:
        (value, assignment) with assignment[j] = 1 for the chosen vertices;
        the first optimal set in sorted order is reported
    """
    if len(weights) != graph.n_vertices:
        raise ArgumentError(f"{len(weights)} weights for {graph.n_vertices} vertices")
    if any(w <= 0 for w in weights):
        raise ArgumentError("weights must be positive")
    best_value, best_set = None, ()
    for members in maximal_independent_sets(graph):
        value = sum(weights[i] for i in members)
        if best_value is None or value > best_value:
            best_value, best_set = value, members
    assignment = [1 if i in best_set else 0 for i in range(graph.n_vertices)]
    return best_value, assignment


# ---------------------------------------------------------------------------
# weight optimization
# ---------------------------------------------------------------------------

def _solve_minmax(n_ops: int, squares: Sequence[Fraction],
                  constraints: Sequence[Tuple[int, ...]]) -> Tuple[Fraction, Fraction, List[Fraction]]:
    """
    Stage 1: min t with Σ v_j T_j^2 = 1 and Σ_M v_j <= t for every independent set M.
    Stage 2: keep Σ_M v_j <= t* and maximize the smallest weight s.
    """
    norm_row = list(squares) + [0]

    stage1 = LP(c=[0] * n_ops + [1], A=[norm_row], b=[1], senses=["="])
    for members in constraints:
        stage1.A.append([1 if j in members else 0 for j in range(n_ops)] + [-1])
        stage1.b.append(0)
        stage1.senses.append("<=")
    first = solve(stage1)
    if first.status != "optimal":
        raise LPError(f"weight LP is {first.status}")
    t_star = first.optimal_value

    stage2 = LP(c=[0] * n_ops + [1], A=[norm_row], b=[1], senses=["="], maximize=True)
    for members in constraints:
        stage2.A.append([1 if j in members else 0 for j in range(n_ops)] + [0])
        stage2.b.append(t_star)
        stage2.senses.append("<=")
    for j in range(n_ops):
        stage2.A.append([-1 if i == j else 0 for i in range(n_ops)] + [1])
        stage2.b.append(0)
        stage2.senses.append("<=")
    second = solve(stage2)
    if second.status != "optimal":
        raise LPError(f"tie-breaking LP is {second.status}")
    return t_star, second.optimal_value, second.solution[:n_ops]


def optimize_weights(ops: Sequence[PauliString], cuts: Sequence[Bipartition],
                     corrs: Optional[CorrelationSet] = None) -> WeightSolution:
    """
    Noise-robust weights for a witness

    Minimizes max_r G_r(v) / Σ_j v_j T_j^2 over positive weights. Without
    correlations every T_j^2 is taken as 1, which is min G/G0 for a commuting set.

    Args:
        ops: Witness operators
        cuts: Bipartitions whose biseparable bounds are controlled
        corrs: Ideal correlations of the target, used for T_j^2

    Returns:
        WeightSolution scaled so the smallest weight is 1; unpacks as (weights, g, g0)
    """
    n = _check_ops(ops)
    if not cuts:
        raise ArgumentError("at least one cut is required")
    squares = [_square(corrs, j) for j in ops]
    for j, sq in zip(ops, squares):
        if sq == 0:
            raise ConstructionError(f"σ_{j.label} has a vanishing target correlation")

    per_cut_sets = _independent_set_constraints(ops, cuts)
    distinct = sorted({frozenset(m) for sets in per_cut_sets.values() for m in sets},
                      key=lambda m: (-len(m), sorted(m)))
    # a set contained in another constraint is implied by it
    constraints = []
    for members in distinct:
        if not any(members < other for other in distinct):
            constraints.append(tuple(sorted(members)))

    t_star, s_star, values = _solve_minmax(len(ops), squares, constraints)
    degenerate = s_star == 0
    weights = tuple(Fraction(1) for _ in ops) if degenerate else tuple(v / s_star for v in values)

    per_cut_g = {
        label: max(sum(weights[i] for i in members) for members in sets)
        for label, sets in per_cut_sets.items()
    }
    g = max(per_cut_g.values())
    g0, _ = max_weight_independent(build_graph(ops, None), weights)
    binding = tuple(label for label, value in per_cut_g.items() if value == g)
    return WeightSolution(weights, g, Fraction(g0), t_star, s_star, per_cut_g, binding, degenerate)


def optimality_certificate(spec: WitnessSpec, corrs: Optional[CorrelationSet] = None,
                           step: Fraction = Fraction(1, 20), exhaustive_limit: int = 6,
                           grid: Sequence[int] = (1, 2, 3, 4)) -> Dict:
    """
    Check that the weights minimize max_r G_r(v) / Σ v_j T_j^2

    Every single weight is perturbed by ±step (relative); for at most
    exhaustive_limit operators an integer weight grid is also searched.

    Returns:
        Dict with the optimum ratio and pass flags
    """
    ops = spec.operators
    squares = [_square(corrs, j) for j in ops]
    sets = [m for members in _independent_set_constraints(
        ops, enumerate_bipartitions(spec.n_qubits)).values() for m in members]

    def ratio(weights: Sequence[Fraction]) -> Fraction:
        worst = max(sum(weights[i] for i in members) for members in sets)
        return Fraction(worst) / sum(w * sq for w, sq in zip(weights, squares))

    optimum = ratio(spec.weights)
    worst_local = None
    for j in range(len(ops)):
        for factor in (1 - step, 1 + step):
            trial = list(spec.weights)
            trial[j] = trial[j] * factor
            value = ratio(trial)
            if worst_local is None or value < worst_local:
                worst_local = value

    grid_best = None
    if len(ops) <= exhaustive_limit:
        grid_best = min(ratio([Fraction(v) for v in point])
                        for point in product(grid, repeat=len(ops)))

    return {
        "optimum": fmt_out(optimum),
        "local_ok": worst_local >= optimum,
        "worst_local": fmt_out(worst_local),
        "grid_checked": grid_best is not None,
        "grid_ok": None if grid_best is None else grid_best >= optimum,
        "grid_best": None if grid_best is None else fmt_out(grid_best),
    }


# ---------------------------------------------------------------------------
# per-cut criteria
# ---------------------------------------------------------------------------

def _maximal_bicliques(graph: AnticommGraph) -> List[Tuple[frozenset, frozenset]]:
    """Closed pairs (P, Q) with Q the common neighbours of P and vice versa"""
    masks = [0] * graph.n_vertices
    for a, b in graph.edges:
        masks[a] |= 1 << b
        masks[b] |= 1 << a

    def common(mask: int) -> int:
        out = (1 << graph.n_vertices) - 1
        for i in range(graph.n_vertices):
            if (mask >> i) & 1:
                out &= masks[i]
        return out

    closed = {m for m in masks if m}
    frontier = set(closed)
    while frontier:
        fresh = set()
        for left in frontier:
            for right in closed:
                both = left & right
                if both and both not in closed:
                    fresh.add(both)
        closed |= fresh
        frontier = fresh

    def members(mask: int) -> frozenset:
        return frozenset(i for i in range(graph.n_vertices) if (mask >> i) & 1)

    pairs = set()
    for q_mask in closed:
        p_mask = common(q_mask)
        if p_mask:
            pair = frozenset((members(p_mask), members(q_mask)))
            if len(pair) == 2:
                pairs.add(pair)
    return [tuple(sorted(pair, key=sorted)) for pair in sorted(pairs, key=lambda p: sorted(map(sorted, p)))]


def _regular_candidates(graph: AnticommGraph) -> List[frozenset]:
    nxg = graph.to_networkx()
    nxg.remove_nodes_from([v for v, d in dict(nxg.degree()).items() if d == 0])
    found = []
    components = [frozenset(c) for c in nx.connected_components(nxg)]
    for component in components:
        degrees = {nxg.degree(v) for v in component}
        if len(component) > 1 and len(degrees) == 1:
            found.append(component)
    if len(components) > 1 and len({d for _, d in nxg.degree()}) == 1:
        found.append(frozenset(nxg.nodes))
    return found


def build_cut_criteria(ops: Sequence[PauliString], corrs: Optional[CorrelationSet],
                       cuts: Sequence[Bipartition]) -> List[CutCriterion]:
    """
    One criterion per cut

    Candidates are the maximal bicliques of the cut graph and its regular
    components. They are ranked by ideal score, then size, then biclique
    form first. A cut graph without edges yields an unavailable criterion.
    """
    _check_ops(ops)
    _require_commuting(ops)
    if corrs is None:
        values = {j: 1.0 for j in ops}
    else:
        values = {j: corrs.get(j, (0.0, 0.0))[0] for j in ops}
    criteria = []
    for cut in cuts:
        graph = build_graph(ops, cut)
        if not graph.edges:
            criteria.append(CutCriterion.unavailable(cut))
            continue
        candidates = []
        for left, right in _maximal_bicliques(graph):
            a = tuple(ops[i] for i in sorted(left))
            b = tuple(ops[i] for i in sorted(right))
            if len(b) > len(a) or (len(b) == len(a) and min(j.label for j in b) < min(j.label for j in a)):
                a, b = b, a
            candidates.append(CutCriterion(cut, a, b))
        for group in _regular_candidates(graph):
            candidates.append(CutCriterion(cut, tuple(ops[i] for i in sorted(group)),
                                           kind=CriterionKind.AVERAGED))

        def rank(criterion: CutCriterion):
            labels = ([j.label for j in criterion.class_a], [j.label for j in criterion.class_b])
            return (-round(criterion.score(values), 9), -len(criterion.members),
                    criterion.kind is not CriterionKind.BICLIQUE, labels)

        best = min(candidates, key=rank)
        criteria.append(CutCriterion(best.cut, best.class_a, best.class_b, best.kind,
                                     ideal_score=best.score(values)))
    return criteria


# ---------------------------------------------------------------------------
# combined witness
# ---------------------------------------------------------------------------

def build_combined_witness(state_corrs: CorrelationSet,
                           settings: Optional[Sequence[MeasurementSetting]] = None,
                           min_abs: float = DEFAULT_MIN_ABS,
                           family: Optional[str] = None,
                           verbose: bool = False,
                           n_candidates: int = 8) -> WitnessSpec:
    """
    Construct W = (1/G0) Σ v_j T_j^2 for a target state

    Args:
        state_corrs: Ideal correlations of the target
        settings: Measurement settings; proposed automatically when None or empty
        min_abs: Smallest |T_j| admitted
        family: Name of the target recorded in the metadata
        verbose: Print construction progress
        n_candidates: Partner settings tried by the automatic proposal

    Returns:
        WitnessSpec with exact weights, per-cut criteria and provenance metadata
    """
    if not settings:
        settings = propose_settings(state_corrs, n_candidates, min_abs)
        if verbose:
            print(f"🧮 Proposed settings: {', '.join(k.label for k in settings)}")
    settings = tuple(settings)
    n = state_corrs.n_qubits
    cuts = enumerate_bipartitions(n)

    ops = select_operators(state_corrs, settings, min_abs, commuting_only=False)
    if verbose:
        print(f"🧮 {len(ops)} operators: {', '.join(j.label for j in ops)}")

    solution = optimize_weights(ops, cuts, state_corrs)
    if solution.non_detecting:
        raise ConstructionError(
            f"settings {', '.join(k.label for k in settings)} give a non-detecting witness "
            f"(G={solution.g}, G0={solution.g0})"
        )

    commuting = all(commutes(p, q) for p, q in combinations(ops, 2))
    criteria_ops = ops if commuting else select_operators(state_corrs, settings, min_abs)
    criteria = build_cut_criteria(criteria_ops, state_corrs, cuts)

    spec = WitnessSpec(
        n_qubits=n,
        operators=tuple(ops),
        weights=solution.weights,
        g0=solution.g0,
        g=solution.g,
        settings=settings,
        per_cut_criteria=tuple(criteria),
    )
    ideal = spec.ideal_value(state_corrs)
    spec.metadata = {
        "family": family,
        "min_abs": min_abs,
        "optimizer": solution.certificate(),
        "ideal_value": fmt_out(ideal),
        "ideal_value_decimal": float(ideal),
        "flags": {
            "non_detecting": solution.non_detecting,
            "degenerate_weights": solution.degenerate,
            "noncommuting_selection": not commuting,
        },
    }
    if verbose:
        print(f"✓ G={solution.g}, G0={solution.g0}, threshold {spec.threshold}")
    return spec


def propose_settings(corrs: CorrelationSet, n_candidates: int = 8,
                     min_abs: float = DEFAULT_MIN_ABS) -> List[MeasurementSetting]:
    """
    Pick a pair of settings for a target state

    The first setting yields the most unit correlations. Partners are ranked
    by how many unit correlations they add; among the top n_candidates the
    pair with the largest robustness G0/G wins, then the lexicographic one.
    """
    n = corrs.n_qubits
    if n > 8:
        raise ArgumentError("automatic setting search is limited to 8 qubits")
    if n_candidates < 1:
        raise ArgumentError("n_candidates must be at least 1")
    units = {j for j, (value, _) in corrs.items() if not j.is_identity() and abs(value) >= 1 - UNIT_TOL}

    covered = {}
    for k in all_settings(n):
        covered[k] = frozenset(j for j in derivable_indices(k) if j in units)
    first = min(covered, key=lambda k: (-len(covered[k]), k.label))
    gain = {k: len(covered[k] - covered[first]) for k in covered if k != first}
    partners = sorted(gain, key=lambda k: (-gain[k], k.label))
    if gain[partners[0]] > 0:
        partners = [k for k in partners if gain[k] > 0]
    partners = partners[:n_candidates]

    cuts = enumerate_bipartitions(n)
    best_key, best_pair = None, None
    for k in partners:
        pair = sorted((first, k), key=lambda s: s.label)
        try:
            ops = select_operators(corrs, pair, min_abs, commuting_only=False)
            solution = optimize_weights(ops, cuts, corrs)
        except ConstructionError:
            continue
        if solution.non_detecting:
            continue
        key = (-(solution.g0 / solution.g), pair[0].label, pair[1].label)
        if best_key is None or key < best_key:
            best_key, best_pair = key, pair
    if best_pair is None:
        raise ConstructionError("no pair of settings gives a detecting witness")
    return best_pair


# ---------------------------------------------------------------------------
# published criteria and N-qubit families
# ---------------------------------------------------------------------------

def named_criteria(family: Union[str, CriteriaFamily]) -> NamedCriteria:
    """
    Published four-qubit criteria

    Args:
        family: GHZ4, CLUSTER4, DICKE42, SINGLET4 or W4

    Returns:
        NamedCriteria with the seven per-cut criteria and the combined witness (None for W4)
    """
    family = CriteriaFamily.parse(family)
    entry = WITNESS_CATALOG[family.value]
    state = make_state(entry["state"], 4, excitations=entry.get("excitations"))
    corrs = nonvanishing_correlations(state)
    values = {j: v for j, (v, _) in corrs.items()}

    criteria = []
    for item in entry["criteria"]:
        criterion = CutCriterion(
            parse_bipartition(item["cut"], 4),
            tuple(PauliString.from_digits(x) for x in item["class_a"]),
            tuple(PauliString.from_digits(x) for x in item["class_b"]),
            kind=CriterionKind(item.get("kind", "biclique")),
        )
        criteria.append(CutCriterion(criterion.cut, criterion.class_a, criterion.class_b,
                                     criterion.kind, ideal_score=criterion.score(values)))

    combined = None
    if entry["combined"] is not None:
        weights = entry["combined"]["weights"]
        combined = WitnessSpec(
            n_qubits=4,
            operators=tuple(PauliString.from_digits(x) for x in weights),
            weights=tuple(Fraction(w) for w in weights.values()),
            g0=parse_fraction(entry["combined"]["g0"]),
            g=parse_fraction(entry["combined"]["g"]),
            settings=tuple(MeasurementSetting.from_label(k) for k in entry["settings"]),
            per_cut_criteria=tuple(criteria),
            witness_id=f"{family.value}-published",
        )
        ideal = combined.ideal_value(corrs)
        combined.metadata = {
            "family": family.value,
            "source": "published",
            "ideal_value": fmt_out(ideal),
            "ideal_value_decimal": float(ideal),
        }
    return NamedCriteria(family, criteria, combined)


def nqubit_ghz_witness(n: int, with_criteria_up_to: int = 8) -> WitnessSpec:
    """
    Closed-form GHZ witness on n qubits

    All even-weight Z strings with weight 1 plus σ_2211…1 with weight 2^(n-2);
    G = 2^(n-1) - 1 and G0 = G + 2^(n-2).
    """
    if n < 3:
        raise ArgumentError("the GHZ family needs n ≥ 3")
    z_setting = MeasurementSetting(n, (3,) * n)
    y_setting = MeasurementSetting(n, (2, 2) + (1,) * (n - 2))
    z_strings = sorted((j for j in derivable_indices(z_setting)
                        if not j.is_identity() and j.weight % 2 == 0), key=lambda j: j.label)
    y_string = y_setting.as_pauli()
    ops = tuple(z_strings) + (y_string,)
    weights = tuple(Fraction(1) for _ in z_strings) + (Fraction(2 ** (n - 2)),)
    g = Fraction(2 ** (n - 1) - 1)
    g0 = g + 2 ** (n - 2)

    criteria = ()
    if n <= with_criteria_up_to:
        ideal = CorrelationSet(n, {**{j: (1.0, 0.0) for j in z_strings}, y_string: (-1.0, 0.0)})
        criteria = tuple(build_cut_criteria(ops, ideal, enumerate_bipartitions(n)))
    return WitnessSpec(n, ops, weights, g0, g, (z_setting, y_setting), criteria,
                       metadata={"family": "ghz", "closed_form": True},
                       witness_id=f"ghz-{n}q")


def _chain_stabilizers(n: int, start: int) -> List[PauliString]:
    """Non-identity products of the chain generators X_i Z_{i-1} Z_{i+1} with i = start, start+2, …"""
    generators = []
    for i in range(start, n + 1, 2):
        digits = [0] * n
        digits[i - 1] = 1
        for nb in (i - 1, i + 1):
            if 1 <= nb <= n:
                digits[nb - 1] = 3
        generators.append(PauliString.from_digits(digits))
    products = []
    for size in range(1, len(generators) + 1):
        for group in combinations(generators, size):
            current = group[0]
            for other in group[1:]:
                current = multiply(current, other)
            products.append(current)
    return sorted(products, key=lambda j: j.label)


def nqubit_cluster_witness(n: int, with_criteria_up_to: int = 6) -> WitnessSpec:
    """
    Closed-form linear-cluster witness on an even number of qubits

    Unit weights on the stabilizers derivable from M_1313… and M_3131…;
    G0 = 2(2^(n/2) - 1) and G = 2^(n/2-1) + 2^(n/2) - 2.
    """
    if n < 4 or n % 2:
        raise ArgumentError("the cluster family needs an even n ≥ 4")
    odd = MeasurementSetting(n, tuple(1 if i % 2 == 0 else 3 for i in range(n)))
    even = MeasurementSetting(n, tuple(3 if i % 2 == 0 else 1 for i in range(n)))
    ops = tuple(_chain_stabilizers(n, 1)) + tuple(_chain_stabilizers(n, 2))
    half = n // 2
    g0 = Fraction(2 * (2 ** half - 1))
    g = Fraction(2 ** (half - 1) + 2 ** half - 2)

    criteria = ()
    if n <= with_criteria_up_to:
        ideal = CorrelationSet(n, {j: (1.0, 0.0) for j in ops})
        criteria = tuple(build_cut_criteria(ops, ideal, enumerate_bipartitions(n)))
    return WitnessSpec(n, ops, tuple(Fraction(1) for _ in ops), g0, g, (odd, even), criteria,
                       metadata={"family": "cluster", "closed_form": True},
                       witness_id=f"cluster-{n}q")
