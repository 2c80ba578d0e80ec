# combinatorics.py
# Chord diagrams on 2k ordered circle points and cell census of a complex

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .chain_complex import FIRST, SECOND, ChainComplex
from .config_manager import ConfigManager, get_config
from .errors import ArityError, CellNameError

Pair = Tuple[int, int]

# Types of limit multigraphs, keyed by vertex count
DEGENERATION_GRAPH_COUNTS = {2: 5, 3: 8, 4: 5, 5: 2, 6: 1}
DEGENERATION_GRAPH_TOTAL = 21


@dataclass(frozen=True)
class Matching:
    """k disjoint chords covering the points 1..2k, each chord stored as (low, high)."""

    k: int
    pairs: Tuple[Pair, ...]

    def __post_init__(self):
        points = sorted(p for pair in self.pairs for p in pair)
        if len(self.pairs) != self.k or points != list(range(1, 2 * self.k + 1)):
            raise ValueError(f"{self.pairs} is not a perfect matching of 1..{2 * self.k}")

    @classmethod
    def of(cls, pairs: Iterable[Sequence[int]]) -> "Matching":
        normalized = tuple(sorted(tuple(sorted(pair)) for pair in pairs))
        return cls(len(normalized), normalized)

    def __str__(self) -> str:
        return "{" + ",".join(f"{a}{b}" for a, b in self.pairs) + "}"


class PairShape(str, Enum):
    DISJOINT = "disjoint"
    CROSSING = "crossing"
    NESTED = "nested"


def all_pairings(items: Iterable[int]) -> Iterator[List[Pair]]:
    """Yield all partitions of items into pairs, first item paired in order of the rest."""
    items = list(items)
    if not items:
        yield []
        return
    first_item = items.pop(0)
    for i, item in enumerate(items):
        first_pair = (first_item, item)
        rest = items[:i] + items[i + 1:]
        for pairing in all_pairings(rest):
            yield [first_pair] + pairing


def enumerate_matchings(k: int) -> List[Matching]:
    """All (2k-1)!! matchings of 1..2k in lexicographic order of their pair lists."""
    if k < 0:
        raise ValueError(f"chord count must be non-negative, got {k}")
    return [Matching(k, tuple(pairing)) for pairing in all_pairings(range(1, 2 * k + 1))]


def double_factorial_odd(k: int) -> int:
    """(2k-1)!!, the number of perfect matchings on 2k points."""
    return math.prod(range(1, 2 * k, 2))


def is_crossing(p1: Pair, p2: Pair) -> bool:
    return (p1[0] < p2[0] < p1[1] < p2[1]) or (p2[0] < p1[0] < p2[1] < p1[1])


def classify_pair(m: Matching) -> PairShape:
    """Shape of a two-chord diagram: separated, interleaved or one inside the other."""
    if m.k != 2:
        raise ArityError(f"classify_pair needs 2 chords, got {m.k}")
    (a, b), (c, d) = m.pairs
    if is_crossing((a, b), (c, d)):
        return PairShape.CROSSING
    if b < c:
        return PairShape.DISJOINT
    return PairShape.NESTED


def degeneration_graph_counts() -> Dict[int, int]:
    counts = dict(DEGENERATION_GRAPH_COUNTS)
    if sum(counts.values()) != DEGENERATION_GRAPH_TOTAL:
        raise ValueError(f"degeneration graph counts sum to {sum(counts.values())}")
    return counts


@dataclass(frozen=True)
class CellCensus:
    """Cell counts per dimension, split by type."""

    first: Tuple[int, ...]
    second: Tuple[int, ...]

    @property
    def totals(self) -> Tuple[int, ...]:
        return tuple(f + s for f, s in zip(self.first, self.second))

    @property
    def total(self) -> int:
        return sum(self.totals)


def census(x: ChainComplex) -> CellCensus:
    degrees = range(x.max_degree + 1)
    return CellCensus(
        tuple(sum(1 for cell in x.cells(d) if cell.type_tag == FIRST) for d in degrees),
        tuple(sum(1 for cell in x.cells(d) if cell.type_tag == SECOND) for d in degrees),
    )


# Top cells of CD3 and their chord diagrams

def matching_table(config: Optional[ConfigManager] = None) -> Dict[str, Matching]:
    raw = (config or get_config()).load_table("CD3", "matchings")
    return {name: Matching.of(pairs) for name, pairs in raw.items()}


def matching_for_cell(name: str, table: Optional[Mapping[str, Matching]] = None) -> Matching:
    table = table if table is not None else matching_table()
    if name not in table:
        raise CellNameError(f"{name!r} is not a top cell with a chord diagram")
    return table[name]


def cell_for_matching(m: Matching, table: Optional[Mapping[str, Matching]] = None) -> str:
    table = table if table is not None else matching_table()
    for name, matching in table.items():
        if matching == m:
            return name
    raise CellNameError(f"no top cell for the matching {m}")


def check_matching_bijection(x: ChainComplex, table: Optional[Mapping[str, Matching]] = None,
                             k: int = 3) -> Tuple[bool, str]:
    """Top cells of x and enumerate_matchings(k) correspond one to one through the table."""
    table = table if table is not None else matching_table()
    top = {cell.name for cell in x.cells(x.max_degree)}
    if set(table) != top:
        return False, f"table names {sorted(set(table) ^ top)[:5]} do not match the top cells"
    matchings = enumerate_matchings(k)
    if sorted(table.values(), key=lambda m: m.pairs) != matchings:
        return False, f"table does not list each of the {len(matchings)} matchings exactly once"
    return True, f"{len(top)} top cells in bijection with the matchings of {2 * k} points"
