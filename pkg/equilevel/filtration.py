# filtration.py
# Filtrations of a chain complex by cell level and the E1 page of the
# associated spectral sequence

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .chain_complex import (SECOND, Cell, ChainComplex, HomologyReport, betti,
                            closure_witnesses, euler, quotient, subcomplex)
from .config_manager import ConfigManager, MultiplicityTable, get_config
from .errors import ClassificationError, FiltrationError
from .logger import log_check, log_step

CellKey = Callable[[Cell], int]


@dataclass(frozen=True)
class Filtration:
    """A complex with a level per cell that never increases along the boundary.

    Psi_p is the subcomplex of cells with level <= p.
    """

    base: ChainComplex
    level_of: Mapping[str, int]
    levels: Tuple[int, ...]
    key_name: str = "custom"

    def psi(self, p: int) -> ChainComplex:
        return subcomplex(self.base, lambda cell: self.level_of[cell.name] <= p,
                          name=f"{self.base.name}[Psi_{p}]")

    def cells_at(self, p: int) -> List[Cell]:
        return [cell for cell in self.base.all_cells() if self.level_of[cell.name] == p]

    def relative(self, p: int) -> ChainComplex:
        """The quotient Psi_p / Psi_{p-1} (Psi_p itself at the lowest level)."""
        return quotient(self.psi(p), lambda cell: self.level_of[cell.name] < p,
                        name=f"{self.base.name}[Psi_{p}/Psi_{p - 1}]")


def monotonicity_violations(x: ChainComplex, key: CellKey) -> List[Tuple[str, str]]:
    """(cell, boundary cell) pairs where the boundary cell has the higher level."""
    violations = []
    for cell in x.all_cells():
        level = key(cell)
        for target in x.boundary_of(cell.name):
            if key(x.cell(target)) > level:
                violations.append((cell.name, target))
    return violations


def build_filtration(x: ChainComplex, key: CellKey, key_name: str = "custom") -> Filtration:
    """Assign levels with key and check monotonicity over every boundary entry.

    Args:
        x: The complex
        key: Cell -> level
        key_name: Name used in logs and reports

    Returns:
        The filtration
    """
    level_of = {cell.name: key(cell) for cell in x.all_cells()}
    violations = monotonicity_violations(x, lambda cell: level_of[cell.name])
    log_check(f"{key_name} filtration monotone on {x.name}", not violations, {"violations": len(violations)})
    if violations:
        cell, target = violations[0]
        raise FiltrationError(
            cell, target,
            f"{target} (level {level_of[target]}) lies in the boundary of {cell} (level {level_of[cell]})",
        )
    return Filtration(x, level_of, tuple(sorted(set(level_of.values()))), key_name)


def multiplicity_key(cell: Cell, table: MultiplicityTable) -> int:
    """Filtration level of a cell from its class.

    A mult= tag that disagrees with the class table is an error.
    """
    mult = table.multiplicity(cell.class_tag)
    if cell.multiplicity is not None and cell.multiplicity != mult:
        raise ClassificationError(
            f"{cell.name} is tagged mult={cell.multiplicity} but class {cell.class_tag} has multiplicity {mult}"
        )
    return table.level(cell.class_tag)


def multiplicity_filtration(x: ChainComplex, table: Optional[MultiplicityTable] = None,
                            config: Optional[ConfigManager] = None) -> Filtration:
    if table is None:
        table = (config or get_config()).multiplicity_table(x.name)
    return build_filtration(x, lambda cell: multiplicity_key(cell, table), "multiplicity")


def type_key(cell: Cell) -> int:
    return 0 if cell.type_tag == SECOND else 1


def type_filtration(x: ChainComplex) -> Filtration:
    """Two-step filtration: second-type cells, then everything."""
    return build_filtration(x, type_key, "type")


def type_subcomplex_check(x: ChainComplex) -> bool:
    """True iff the second-type cells form a closed subcomplex."""
    witnesses = closure_witnesses(x, lambda cell: cell.type_tag == SECOND)
    log_check(f"second-type cells closed in {x.name}", not witnesses, {"witnesses": witnesses[:5]})
    return not witnesses


@dataclass(frozen=True)
class E1Page:
    """dim E1_{p,q} = dim H_{p+q}(Psi_p, Psi_{p-1}) for every level p and degree p+q."""

    entries: Mapping[Tuple[int, int], int]
    base_euler: int

    def __getitem__(self, pq: Tuple[int, int]) -> int:
        return self.entries.get(pq, 0)

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {pq: dim for pq, dim in sorted(self.entries.items()) if dim}

    def column(self, p: int) -> List[int]:
        """Relative Betti numbers of level p ordered by total degree."""
        return [dim for (level, _), dim in sorted(self.entries.items(), key=lambda e: e[0][0] + e[0][1])
                if level == p]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** (p + q) * dim for (p, q), dim in self.entries.items())

    @property
    def euler_consistent(self) -> bool:
        return self.euler_characteristic == self.base_euler


def e1_page(f: Filtration, workers: int = 1) -> E1Page:
    """E1 page from quotient-complex Betti numbers, one level at a time.

    Args:
        f: A monotone filtration
        workers: Threads for the per-level computations

    Returns:
        The page, including zero entries
    """
    log_step(f"E1 page of {f.base.name}", f"{f.key_name} levels {list(f.levels)}")

    def level_report(p: int) -> HomologyReport:
        return betti(f.relative(p))

    if workers > 1 and len(f.levels) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(level_report, f.levels))
    else:
        reports = [level_report(p) for p in f.levels]

    entries: Dict[Tuple[int, int], int] = {}
    for p, report in zip(f.levels, reports):
        for entry in report.degrees:
            entries[(p, entry.degree - p)] = entry.betti
    page = E1Page(entries, euler(f.base))
    log_check(f"E1 Euler characteristic of {f.base.name}", page.euler_consistent,
              {"page": page.euler_characteristic, "base": page.base_euler})
    return page
