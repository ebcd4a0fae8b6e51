"""ATSP instances, fractional arc points and tours.

All public interfaces use 1-indexed node labels; matrices are stored
0-indexed, so ``costs[i - 1][j - 1]`` is the cost of arc ``(i, j)``.
"""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._numeric import EPS, Scalar, any_float, coerce, from_text, to_text

Matrix = tuple[tuple[Scalar, ...], ...]


def _square(rows, n: int, what: str) -> Matrix:
    rows = [list(r) for r in rows]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"{what} must be {n}x{n}")
    return tuple(tuple(coerce(v) for v in r) for r in rows)


@dataclass(frozen=True)
class AtspInstance:
    """Complete digraph on nodes 1..n with arc costs; the diagonal is ignored."""

    n: int
    costs: Matrix

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"an ATSP instance needs n >= 3, got {self.n}")
        object.__setattr__(self, "costs", _square(self.costs, self.n, "costs"))

    def cost(self, i: int, j: int) -> Scalar:
        return self.costs[i - 1][j - 1]

    @property
    def is_float(self) -> bool:
        return any_float(v for row in self.costs for v in row)

    def tour_cost(self, tour: "Tour") -> Scalar:
        order = tour.order
        return sum(
            (self.cost(order[k], order[(k + 1) % len(order)]) for k in range(len(order))),
            Fraction(0),
        )


@dataclass(frozen=True)
class FractionalPoint:
    """Arc values ``x_ij`` in [0, 1] with a zero diagonal."""

    n: int
    x: Matrix

    def __post_init__(self):
        x = _square(self.x, self.n, "x")
        for i in range(self.n):
            if x[i][i] != 0:
                raise ValueError(f"x_{i + 1}{i + 1} must be 0")
            for j in range(self.n):
                if not 0 <= x[i][j] <= 1:
                    raise ValueError(f"x_{i + 1},{j + 1} = {x[i][j]} outside [0, 1]")
        object.__setattr__(self, "x", x)

    def value(self, i: int, j: int) -> Scalar:
        return self.x[i - 1][j - 1]

    @property
    def is_float(self) -> bool:
        return any_float(v for row in self.x for v in row)

    def to_dict(self) -> dict:
        return {"n": self.n, "x": [[to_text(v) for v in row] for row in self.x]}

    @classmethod
    def from_dict(cls, data: dict) -> "FractionalPoint":
        return cls(int(data["n"]), [[from_text(v) for v in row] for row in data["x"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "FractionalPoint":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Tour:
    """A Hamiltonian cycle given as a visiting order that starts at node 1."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(1, len(order) + 1)):
            raise ValueError(f"{order} is not a permutation of 1..{len(order)}")
        if order[0] != 1:
            raise ValueError("a tour must start at node 1")
        object.__setattr__(self, "order", order)

    @property
    def n(self) -> int:
        return len(self.order)

    def arcs(self) -> list[tuple[int, int]]:
        k = len(self.order)
        return [(self.order[t], self.order[(t + 1) % k]) for t in range(k)]


def point_from_tour(t: Tour, n: int | None = None) -> FractionalPoint:
    n = t.n if n is None else n
    if t.n != n:
        raise ValueError(f"tour has {t.n} nodes, expected {n}")
    x = [[Fraction(0)] * n for _ in range(n)]
    for i, j in t.arcs():
        x[i - 1][j - 1] = Fraction(1)
    return FractionalPoint(n, x)


def convex_combination(points: Sequence[FractionalPoint], weights: Sequence) -> FractionalPoint:
    """Entrywise weighted sum of points; weights must be nonnegative and sum to 1."""
    if not points or len(points) != len(weights):
        raise ValueError("need one weight per point and at least one point")
    n = points[0].n
    if any(p.n != n for p in points):
        raise ValueError("all points must share the same n")
    weights = [coerce(w) for w in weights]
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    float_mode = any_float(weights) or any(p.is_float for p in points)
    total = sum(weights, Fraction(0))
    if (abs(total - 1) > EPS) if float_mode else (total != 1):
        raise ValueError(f"weights sum to {total}, not 1")
    zero = 0.0 if float_mode else Fraction(0)
    x = [[zero] * n for _ in range(n)]
    for p, w in zip(points, weights):
        for i in range(n):
            row = x[i]
            for j, v in enumerate(p.x[i]):
                if v:
                    row[j] += w * v
    if float_mode:
        # rounding can leave entries a hair outside [0, 1]
        x = [[min(1.0, max(0.0, float(v))) for v in row] for row in x]
    return FractionalPoint(n, x)


def check_degrees(p: FractionalPoint) -> bool:
    """True iff every row sum and every column sum of x equals 1."""
    tol = EPS if p.is_float else 0
    for k in range(p.n):
        if abs(sum(p.x[k]) - 1) > tol:
            return False
        if abs(sum(row[k] for row in p.x) - 1) > tol:
            return False
    return True


def random_tour(n: int, rng: random.Random) -> Tour:
    return Tour((1, *rng.sample(range(2, n + 1), n - 1)))


def random_dfj_point(n: int, k: int, seed: int) -> FractionalPoint:
    """Convex combination of ``k`` random tours with random rational weights.

    The result lies in the DFJ polytope because every tour does.
    """
    if n < 3 or k < 1:
        raise ValueError("need n >= 3 and k >= 1")
    rng = random.Random(seed)
    tours = [point_from_tour(random_tour(n, rng), n) for _ in range(k)]
    raw = [rng.randint(1, 1000) for _ in range(k)]
    total = sum(raw)
    return convex_combination(tours, [Fraction(r, total) for r in raw])


def random_instance(n: int, rng: random.Random, low: int = 1, high: int = 100) -> AtspInstance:
    """Integer costs drawn uniformly from [low, high]; diagonal 0."""
    costs = [[0 if i == j else rng.randint(low, high) for j in range(n)] for i in range(n)]
    return AtspInstance(n, costs)


# --- TSPLIB (EXPLICIT / FULL_MATRIX ATSP subset) ---------------------------


class TsplibParseError(ValueError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


_HEADER = re.compile(r"^\s*([A-Z_]+)\s*:?\s*(.*?)\s*$")
_REQUIRED = {
    "TYPE": "ATSP",
    "EDGE_WEIGHT_TYPE": "EXPLICIT",
    "EDGE_WEIGHT_FORMAT": "FULL_MATRIX",
}


def parse_tsplib(text: str) -> AtspInstance:
    """Parse an explicit full-matrix ATSP file.

    Weights are read row-major and may wrap across lines.  Integers and
    decimals are read exactly as rationals; ``p/q`` tokens are also accepted.
    """
    header: dict[str, str] = {}
    weights: list[Fraction] = []
    in_section = False
    lineno = 0
    n = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped == "EOF":
            break
        if in_section:
            for token in stripped.split():
                try:
                    weights.append(Fraction(token))
                except (ValueError, ZeroDivisionError):
                    raise TsplibParseError(f"non-numeric weight {token!r}", lineno) from None
                if len(weights) > n * n:
                    raise TsplibParseError(f"more than {n * n} weights for DIMENSION {n}", lineno)
            continue
        m = _HEADER.match(stripped)
        if not m:
            raise TsplibParseError(f"malformed header line {stripped!r}", lineno)
        key, value = m.groups()
        if key == "EDGE_WEIGHT_SECTION":
            for k, expected in _REQUIRED.items():
                if header.get(k, "").upper() != expected:
                    raise TsplibParseError(f"{k} must be {expected}, got {header.get(k)!r}", lineno)
            if "DIMENSION" not in header:
                raise TsplibParseError("DIMENSION missing before EDGE_WEIGHT_SECTION", lineno)
            try:
                n = int(header["DIMENSION"])
            except ValueError:
                raise TsplibParseError(f"bad DIMENSION {header['DIMENSION']!r}", lineno) from None
            if n < 3:
                raise TsplibParseError(f"DIMENSION must be >= 3, got {n}", lineno)
            in_section = True
            continue
        if not value:
            raise TsplibParseError(f"header {key} has no value", lineno)
        header[key] = value
    if not in_section:
        raise TsplibParseError("no EDGE_WEIGHT_SECTION", lineno)
    if len(weights) != n * n:
        raise TsplibParseError(f"expected {n * n} weights for DIMENSION {n}, found {len(weights)}", lineno)
    rows = [weights[i * n:(i + 1) * n] for i in range(n)]
    for i in range(n):
        rows[i][i] = Fraction(0)
    return AtspInstance(n, rows)


def serialize_tsplib(inst: AtspInstance, name: str = "instance") -> str:
    lines = [
        f"NAME: {name}",
        "TYPE: ATSP",
        f"DIMENSION: {inst.n}",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    lines += [" ".join(to_text(Fraction(v)) for v in row) for row in inst.costs]
    lines.append("EOF")
    return "\n".join(lines) + "\n"
