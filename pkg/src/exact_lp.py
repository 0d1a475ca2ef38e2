"""
Exact Rational Simplex
Two-phase tableau simplex over fractions.Fraction with Bland's rule.

Input contract:
- c: objective coefficients (length n), variables are x >= 0
- A: constraint rows (m x n), b: right-hand sides (length m)
- senses: entries in {"<=", ">=", "="}
- maximize: False minimizes c.x
"""

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from errors import LPError

Num = Union[int, float, Fraction, Decimal]

MAX_PIVOTS = 20000


def F(x: Num) -> Fraction:
    """Convert a number to Fraction exactly when possible"""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Decimal)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction.from_float(x).limit_denominator(10 ** 12)
    return Fraction(str(x))


def rationalize(x: Num, max_denominator: int = 10 ** 6) -> Fraction:
    """Closest fraction with bounded denominator; recovers 4/9 from 0.4444444444444444"""
    return F(x).limit_denominator(max_denominator)


def fmt_out(x: Num) -> str:
    """Render as "n/d" ("4/1" for integers)"""
    fr = F(x)
    return f"{fr.numerator}/{fr.denominator}"


def parse_fraction(text: Union[str, Num]) -> Fraction:
    if isinstance(text, str):
        return Fraction(text.strip())
    return F(text)


@dataclass
class LP:
    c: List[Num]
    A: List[List[Num]]
    b: List[Num]
    senses: List[str]
    maximize: bool = False


@dataclass
class LPResult:
    status: str  # optimal | infeasible | unbounded
    optimal_value: Optional[Fraction]
    solution: Optional[List[Fraction]]
    iterations: int
    basis: List[int] = field(default_factory=list)


class _Tableau:
    """Constraint rows with an explicit basis; reduced costs are recomputed per pivot"""

    def __init__(self, rows: List[List[Fraction]], basis: List[int], n_cols: int):
        self.rows = rows
        self.basis = basis
        self.n_cols = n_cols
        self.iterations = 0

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        p = row[col]
        self.rows[r] = row = [v / p for v in row]
        for i, other in enumerate(self.rows):
            if i == r or other[col] == 0:
                continue
            factor = other[col]
            self.rows[i] = [a - factor * b for a, b in zip(other, row)]
        self.basis[r] = col
        self.iterations += 1

    def reduced_costs(self, cost: Sequence[Fraction], allowed: Sequence[int]) -> dict:
        basic_cost = [cost[j] for j in self.basis]
        out = {}
        for j in allowed:
            if j in self.basis:
                continue
            out[j] = cost[j] - sum(cb * row[j] for cb, row in zip(basic_cost, self.rows))
        return out

    def minimize(self, cost: Sequence[Fraction], allowed: Sequence[int]) -> str:
        while True:
            if self.iterations > MAX_PIVOTS:
                raise LPError("simplex pivot limit exceeded")
            reduced = self.reduced_costs(cost, allowed)
            entering = next((j for j in sorted(reduced) if reduced[j] < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)

    def objective(self, cost: Sequence[Fraction]) -> Fraction:
        return sum(cost[j] * row[-1] for j, row in zip(self.basis, self.rows))

    def values(self, n: int) -> List[Fraction]:
        x = [Fraction(0)] * n
        for j, row in zip(self.basis, self.rows):
            if j < n:
                x[j] = row[-1]
        return x


def solve(lp: LP) -> LPResult:
    """
    Solve a linear program exactly

    Args:
        lp: Problem in the input contract of this module

    Returns:
        LPResult with Fraction values; status "infeasible" or "unbounded" when no optimum exists
    """
    n = len(lp.c)
    m = len(lp.A)
    if len(lp.b) != m or len(lp.senses) != m:
        raise LPError("A, b and senses must have the same number of rows")
    A = [[F(a) for a in row] for row in lp.A]
    b = [F(v) for v in lp.b]
    senses = list(lp.senses)
    for i in range(m):
        if len(A[i]) != n:
            raise LPError(f"constraint row {i} has {len(A[i])} coefficients, expected {n}")
        if senses[i] not in ("<=", ">=", "="):
            raise LPError(f"unknown constraint sense '{senses[i]}'")
        if b[i] < 0:
            A[i] = [-a for a in A[i]]
            b[i] = -b[i]
            senses[i] = {"<=": ">=", ">=": "<=", "=": "="}[senses[i]]

    n_slack = sum(1 for s in senses if s != "=")
    n_art = sum(1 for s in senses if s != "<=")
    n_cols = n + n_slack + n_art
    rows, basis = [], []
    slack_at, art_at = n, n + n_slack
    artificial = []
    for i in range(m):
        row = A[i] + [Fraction(0)] * (n_slack + n_art) + [b[i]]
        if senses[i] == "<=":
            row[slack_at] = Fraction(1)
            basis.append(slack_at)
            slack_at += 1
        else:
            if senses[i] == ">=":
                row[slack_at] = Fraction(-1)
                slack_at += 1
            row[art_at] = Fraction(1)
            basis.append(art_at)
            artificial.append(art_at)
            art_at += 1
        rows.append(row)

    tableau = _Tableau(rows, basis, n_cols)
    if artificial:
        phase1 = [Fraction(0)] * n_cols
        for j in artificial:
            phase1[j] = Fraction(1)
        tableau.minimize(phase1, range(n_cols))
        if tableau.objective(phase1) != 0:
            return LPResult("infeasible", None, None, tableau.iterations)
        _drive_out_artificials(tableau, set(artificial), n + n_slack)

    sign = Fraction(-1) if lp.maximize else Fraction(1)
    cost = [sign * F(c) for c in lp.c] + [Fraction(0)] * (n_cols - n)
    status = tableau.minimize(cost, range(n + n_slack))
    if status == "unbounded":
        return LPResult("unbounded", None, None, tableau.iterations)
    value = sign * tableau.objective(cost)
    return LPResult("optimal", value, tableau.values(n), tableau.iterations, list(tableau.basis))


def _drive_out_artificials(tableau: _Tableau, artificial: set, n_real: int) -> None:
    """Pivot zero-valued artificials out of the basis, dropping redundant rows"""
    r = 0
    while r < len(tableau.rows):
        if tableau.basis[r] in artificial:
            row = tableau.rows[r]
            col = next((j for j in range(n_real) if row[j] != 0), None)
            if col is None:
                del tableau.rows[r]
                del tableau.basis[r]
                continue
            tableau.pivot(r, col)
        r += 1
