"""
Pauli String Algebra
Exact, phase-free algebra of N-qubit Pauli strings
Features:
- Symplectic storage (X mask, Z mask) with digit encoding 0=I, 1=X, 2=Y, 3=Z
- Commutation by site parity, restriction to qubit subsets
- Cut-anticommutativity with respect to a bipartition
- Correlations derivable from a single measurement setting
- Canonical enumeration of all bipartitions
"""

from dataclasses import dataclass
from itertools import combinations, product
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from errors import ArgumentError, DimensionError

# digit -> (x bit, z bit)
DIGIT_TO_XZ = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
XZ_TO_DIGIT = {xz: d for d, xz in DIGIT_TO_XZ.items()}
LETTER_TO_DIGIT = {"I": 0, "X": 1, "Y": 2, "Z": 3}
DIGIT_TO_LETTER = {d: letter for letter, d in LETTER_TO_DIGIT.items()}
QUBIT_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _parity(value: int) -> int:
    return bin(value).count("1") & 1


def _parse_digits(label: Union[str, Sequence[int]]) -> Tuple[int, ...]:
    """Accept "1221", "XYYX" or a digit sequence"""
    if isinstance(label, str):
        text = label.strip()
        if text.lower().startswith("sigma_"):
            text = text[6:]
        digits = []
        for ch in text:
            if ch.isdigit():
                digits.append(int(ch))
            elif ch.upper() in LETTER_TO_DIGIT:
                digits.append(LETTER_TO_DIGIT[ch.upper()])
            else:
                raise ArgumentError(f"Invalid Pauli symbol '{ch}' in '{label}'")
    else:
        digits = [int(d) for d in label]
    if not digits:
        raise ArgumentError("Pauli string must cover at least one qubit")
    for d in digits:
        if d not in DIGIT_TO_XZ:
            raise ArgumentError(f"Pauli digit {d} outside 0..3")
    return tuple(digits)


@dataclass(frozen=True)
class PauliString:
    """N-site tensor product of I, X, Y, Z; bit i-1 of each mask is qubit i"""
    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ArgumentError("n_qubits must be positive")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ArgumentError("masks exceed n_qubits")

    @classmethod
    def from_digits(cls, label: Union[str, Sequence[int]]) -> "PauliString":
        digits = _parse_digits(label)
        x_mask = z_mask = 0
        for i, d in enumerate(digits):
            x, z = DIGIT_TO_XZ[d]
            x_mask |= x << i
            z_mask |= z << i
        return cls(len(digits), x_mask, z_mask)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @property
    def digits(self) -> Tuple[int, ...]:
        return tuple(
            XZ_TO_DIGIT[((self.x_mask >> i) & 1, (self.z_mask >> i) & 1)]
            for i in range(self.n_qubits)
        )

    @property
    def label(self) -> str:
        return "".join(str(d) for d in self.digits)

    @property
    def letters(self) -> str:
        return "".join(DIGIT_TO_LETTER[d] for d in self.digits)

    @property
    def support_mask(self) -> int:
        return self.x_mask | self.z_mask

    @property
    def weight(self) -> int:
        return bin(self.support_mask).count("1")

    def is_identity(self) -> bool:
        return self.support_mask == 0

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"σ_{self.label}"


@dataclass(frozen=True)
class MeasurementSetting:
    """One non-identity local Pauli basis per qubit"""
    n_qubits: int
    locals: Tuple[int, ...]

    def __post_init__(self):
        if len(self.locals) != self.n_qubits:
            raise DimensionError("setting length differs from n_qubits")
        if any(k not in (1, 2, 3) for k in self.locals):
            raise ArgumentError(f"setting {self.locals} must use only 1, 2, 3 at every site")

    @classmethod
    def from_label(cls, label: Union[str, Sequence[int]]) -> "MeasurementSetting":
        digits = _parse_digits(label)
        return cls(len(digits), digits)

    @property
    def label(self) -> str:
        return "".join(str(k) for k in self.locals)

    def as_pauli(self) -> PauliString:
        return PauliString.from_digits(self.locals)

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"M_{self.label}"


@dataclass(frozen=True)
class Bipartition:
    """Cut A|B, stored as the side containing qubit 1"""
    n_qubits: int
    side_a: FrozenSet[int]

    def __post_init__(self):
        everything = frozenset(range(1, self.n_qubits + 1))
        if not self.side_a or not self.side_a < everything:
            raise ArgumentError("both sides of a cut must be nonempty")
        if 1 not in self.side_a:
            raise ArgumentError("side_a must contain qubit 1; use Bipartition.from_side")

    @classmethod
    def from_side(cls, n_qubits: int, side: Iterable[int]) -> "Bipartition":
        side = frozenset(side)
        if any(i < 1 or i > n_qubits for i in side):
            raise ArgumentError(f"qubit index out of range 1..{n_qubits}")
        if 1 not in side:
            side = frozenset(range(1, n_qubits + 1)) - side
        return cls(n_qubits, side)

    @property
    def side_b(self) -> FrozenSet[int]:
        return frozenset(range(1, self.n_qubits + 1)) - self.side_a

    @property
    def mask_a(self) -> int:
        return sum(1 << (i - 1) for i in self.side_a)

    @property
    def mask_b(self) -> int:
        return sum(1 << (i - 1) for i in self.side_b)

    def display_sides(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Smaller side first; on a tie the side holding qubit 1"""
        a, b = tuple(sorted(self.side_a)), tuple(sorted(self.side_b))
        if len(b) < len(a):
            return b, a
        return a, b

    @property
    def label(self) -> str:
        left, right = self.display_sides()

        def name(side: Tuple[int, ...]) -> str:
            if self.n_qubits <= len(QUBIT_LETTERS):
                return "".join(QUBIT_LETTERS[i - 1] for i in side)
            return ",".join(str(i) for i in side)

        return f"{name(left)}|{name(right)}"

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        left, _ = self.display_sides()
        return len(left), left

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"Bipartition({self.label})"


def parse_bipartition(label: str, n_qubits: Optional[int] = None) -> Bipartition:
    """Parse "AB|CD" (letters, A = qubit 1) or "1,2|3,4" """
    if "|" not in label:
        raise ArgumentError(f"Bipartition '{label}' needs a '|' separator")
    left, right = (part.strip() for part in label.split("|", 1))

    def indices(part: str) -> List[int]:
        if "," in part or part.isdigit():
            return [int(tok) for tok in part.split(",") if tok]
        return [QUBIT_LETTERS.index(ch.upper()) + 1 for ch in part]

    try:
        a, b = indices(left), indices(right)
    except ValueError:
        raise ArgumentError(f"Cannot parse bipartition '{label}'")
    total = n_qubits or len(a) + len(b)
    if sorted(a + b) != list(range(1, total + 1)):
        raise ArgumentError(f"Bipartition '{label}' must split qubits 1..{total}")
    return Bipartition.from_side(total, a)


def _check_same_size(*items) -> int:
    sizes = {item.n_qubits for item in items}
    if len(sizes) != 1:
        raise DimensionError(f"qubit numbers differ: {sorted(sizes)}")
    return sizes.pop()


def _symplectic(p: PauliString, q: PauliString) -> int:
    """Mask of sites where p and q anticommute locally"""
    return (p.x_mask & q.z_mask) ^ (p.z_mask & q.x_mask)


def commutes(p: PauliString, q: PauliString) -> bool:
    """
    Check global commutation

    Two strings commute iff the number of sites where both are non-identity
    and different is even.
    """
    _check_same_size(p, q)
    return _parity(_symplectic(p, q)) == 0


def anticommutes_on(p: PauliString, q: PauliString, sites_mask: int) -> bool:
    """Anticommutation of the restrictions of p and q to the masked sites"""
    _check_same_size(p, q)
    return _parity(_symplectic(p, q) & sites_mask) == 1


def restrict(p: PauliString, subset: Iterable[int]) -> PauliString:
    """Digits of p at the given 1-based sites, in ascending site order"""
    sites = sorted(set(subset))
    if not sites:
        raise ArgumentError("restrict needs a nonempty qubit subset")
    if sites[0] < 1 or sites[-1] > p.n_qubits:
        raise ArgumentError(f"qubit index out of range 1..{p.n_qubits}")
    digits = p.digits
    return PauliString.from_digits([digits[i - 1] for i in sites])


def cut_anticommutes(p: PauliString, q: PauliString, cut: Bipartition) -> bool:
    """True iff p and q anticommute on side A or on side B of the cut"""
    _check_same_size(p, q, cut)
    local = _symplectic(p, q)
    return _parity(local & cut.mask_a) == 1 or _parity(local & cut.mask_b) == 1


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Product of two strings with the global phase dropped"""
    _check_same_size(p, q)
    return PauliString(p.n_qubits, p.x_mask ^ q.x_mask, p.z_mask ^ q.z_mask)


def derivable_indices(setting: MeasurementSetting) -> FrozenSet[PauliString]:
    """All 2^N strings with digit 0 or k_i at every site, identity included"""
    choices = [(0, k) for k in setting.locals]
    return frozenset(PauliString.from_digits(digits) for digits in product(*choices))


def is_derivable(p: PauliString, setting: MeasurementSetting) -> bool:
    _check_same_size(p, setting)
    return all(d in (0, k) for d, k in zip(p.digits, setting.locals))


def enumerate_bipartitions(n: int) -> List[Bipartition]:
    """
    All 2^(n-1)-1 cuts of n qubits

    Ordered by the size of the smaller side, then by its qubit labels; for
    n=4 this gives A|BCD, B|ACD, C|ABD, D|ABC, AB|CD, AC|BD, AD|BC.
    """
    if n < 2:
        raise ArgumentError("bipartitions need at least 2 qubits")
    cuts = set()
    for size in range(1, n // 2 + 1):
        for side in combinations(range(1, n + 1), size):
            cuts.add(Bipartition.from_side(n, side))
    return sorted(cuts, key=lambda cut: cut.sort_key())


def all_pauli_strings(n: int, include_identity: bool = True) -> List[PauliString]:
    """All 4^n strings in lexicographic digit order"""
    strings = [PauliString.from_digits(d) for d in product(range(4), repeat=n)]
    return strings if include_identity else strings[1:]


def all_settings(n: int) -> List[MeasurementSetting]:
    return [MeasurementSetting(n, locals_) for locals_ in product((1, 2, 3), repeat=n)]
