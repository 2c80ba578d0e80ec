# chain_complex.py
# Finite cellular chain complexes over GF(2) with named cells: validity,
# Betti numbers, subcomplexes, quotients and cycle/class verification

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import (Callable, Collection, Dict, FrozenSet, Iterable, List, Mapping,
                    Optional, Sequence, Tuple, Union)

from .errors import CellNameError, ClosureError, InvalidComplexError, ShapeError
from .gf2_linear import (Gf2Matrix, Gf2Vector, coordinates, in_span, is_independent,
                         kernel_basis, mul, rank)
from .logger import log_check, log_step

FIRST = "first"
SECOND = "second"
CELL_TYPES = (FIRST, SECOND)
MULTIPLICITIES = (3, 4, 5, 6)


@dataclass(frozen=True)
class Cell:
    """A named generator of the cellular chain group in one degree.

    `type_tag` is "second" for cells whose algebras contain the marked point.
    """

    name: str
    degree: int
    class_tag: Optional[str] = None
    type_tag: str = FIRST
    multiplicity: Optional[int] = None

    def __post_init__(self):
        if self.degree < 0:
            raise ShapeError(f"cell {self.name} has negative degree {self.degree}")
        if self.type_tag not in CELL_TYPES:
            raise ValueError(f"cell {self.name}: type must be one of {CELL_TYPES}, got {self.type_tag!r}")
        if self.multiplicity is not None and self.multiplicity not in MULTIPLICITIES:
            raise ValueError(f"cell {self.name}: multiplicity must be one of {MULTIPLICITIES}, got {self.multiplicity}")


@dataclass(frozen=True)
class Chain:
    """An element of C_d: a degree and the set of cells with coefficient 1."""

    degree: int
    support: FrozenSet[str]
    label: Optional[str] = field(default=None, compare=False)

    @classmethod
    def of(cls, degree: int, names: Iterable[str], label: Optional[str] = None) -> "Chain":
        """Build a chain from a list of names; a name listed twice cancels."""
        support: set = set()
        for name in names:
            support ^= {name}
        return cls(degree, frozenset(support), label)

    def __add__(self, other: "Chain") -> "Chain":
        if self.degree != other.degree:
            raise ShapeError(f"cannot add chains of degrees {self.degree} and {other.degree}")
        return Chain(self.degree, self.support ^ other.support)

    def is_zero(self) -> bool:
        return not self.support

    def describe(self) -> str:
        return self.label or " + ".join(sorted(self.support)) or "0"


@dataclass(frozen=True)
class Violation:
    """A failed invariant: (d, higher cell, lower cell) with d_d d_{d+1} != 0 there."""

    degree: int
    cell: str
    target: str
    kind: str = "boundary_squared"


@dataclass(frozen=True)
class ValidationResult:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class DegreeHomology:
    """Homology bookkeeping in one degree.

    rank_out is the rank of d_d : C_d -> C_{d-1}; rank_in is the rank of
    d_{d+1} : C_{d+1} -> C_d.
    """

    degree: int
    cells: int
    rank_out: int
    rank_in: int

    @property
    def betti(self) -> int:
        return self.cells - self.rank_out - self.rank_in


@dataclass(frozen=True)
class HomologyReport:
    degrees: Tuple[DegreeHomology, ...]

    @property
    def betti(self) -> List[int]:
        return [entry.betti for entry in self.degrees]

    def betti_at(self, degree: int) -> int:
        """b_degree, zero outside the computed degrees."""
        return self.degrees[degree].betti if 0 <= degree < len(self.degrees) else 0

    @property
    def cell_counts(self) -> List[int]:
        return [entry.cells for entry in self.degrees]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** entry.degree * entry.cells for entry in self.degrees)

    @property
    def betti_euler(self) -> int:
        return sum((-1) ** entry.degree * entry.betti for entry in self.degrees)


@dataclass(frozen=True)
class DecompositionMismatch:
    """A boundary that differs from the sum of the generators listed for it."""

    cell: str
    labels: Tuple[str, ...]
    difference: FrozenSet[str]
    computed_labels: Optional[Tuple[str, ...]] = None


CellPredicate = Union[Callable[[Cell], bool], Collection[str]]


def _as_predicate(keep: CellPredicate) -> Callable[[Cell], bool]:
    if callable(keep):
        return keep
    names = frozenset(keep)
    return lambda cell: cell.name in names


class ChainComplex:
    """A graded list of cells plus one boundary matrix per positive degree.

    Boundary matrices use the column convention: the column of a d-cell in
    d_d lists the (d-1)-cells of its boundary, rows follow the declaration
    order of the (d-1)-cells.
    """

    def __init__(self,
                 name: str,
                 cells: Sequence[Cell],
                 boundaries: Optional[Mapping[int, Gf2Matrix]] = None,
                 max_degree: Optional[int] = None):
        """Initialize the complex.

        Args:
            name: Complex name
            cells: All cells; order within a degree is kept
            boundaries: d -> matrix of d_d; missing degrees are zero maps
            max_degree: Top degree (defaults to the highest cell degree)
        """
        self.name = name
        top = max((cell.degree for cell in cells), default=0)
        self.max_degree = top if max_degree is None else max_degree
        if top > self.max_degree:
            raise ShapeError(f"{name}: cell of degree {top} above declared dimension {self.max_degree}")

        grouped: List[List[Cell]] = [[] for _ in range(self.max_degree + 1)]
        self._index: Dict[str, Tuple[int, int]] = {}
        for cell in cells:
            if cell.name in self._index:
                raise CellNameError(f"{name}: duplicate cell name {cell.name!r}")
            self._index[cell.name] = (cell.degree, len(grouped[cell.degree]))
            grouped[cell.degree].append(cell)
        self.cells_by_degree: Tuple[Tuple[Cell, ...], ...] = tuple(tuple(g) for g in grouped)

        boundaries = dict(boundaries or {})
        self._boundaries: Dict[int, Gf2Matrix] = {}
        for d in range(1, self.max_degree + 1):
            expected = (self.n_cells(d - 1), self.n_cells(d))
            matrix = boundaries.pop(d, None)
            if matrix is None:
                matrix = Gf2Matrix.zeros(*expected)
            if matrix.shape != expected:
                raise ShapeError(f"{name}: d_{d} has shape {matrix.shape}, expected {expected}")
            self._boundaries[d] = matrix
        if boundaries:
            raise ShapeError(f"{name}: boundary matrices given for degrees outside 1..{self.max_degree}")

    @classmethod
    def from_boundary_lists(cls,
                            name: str,
                            cells: Sequence[Cell],
                            boundary: Mapping[str, Iterable[str]],
                            max_degree: Optional[int] = None) -> "ChainComplex":
        """Build a complex from cell -> boundary cell names.

        Args:
            name: Complex name
            cells: All cells
            boundary: Boundary cell names per cell; unlisted cells have zero boundary
            max_degree: Top degree

        Returns:
            The complex
        """
        skeleton = cls(name, cells, max_degree=max_degree)
        entries: Dict[int, List[Tuple[int, int, int]]] = {}
        for cell_name, targets in boundary.items():
            cell = skeleton.cell(cell_name)
            for target in targets:
                lower = skeleton.cell(target)
                if lower.degree != cell.degree - 1:
                    raise CellNameError(
                        f"{name}: {target} (degree {lower.degree}) cannot bound {cell_name} (degree {cell.degree})"
                    )
                entries.setdefault(cell.degree, []).append(
                    (skeleton.index_of(target), skeleton.index_of(cell_name), 1)
                )
        matrices = {
            d: Gf2Matrix.from_entries(skeleton.n_cells(d - 1), skeleton.n_cells(d), triples)
            for d, triples in entries.items()
        }
        return cls(name, cells, matrices, skeleton.max_degree)

    # Cells

    def cells(self, degree: int) -> Tuple[Cell, ...]:
        if 0 <= degree <= self.max_degree:
            return self.cells_by_degree[degree]
        return ()

    def all_cells(self) -> List[Cell]:
        return [cell for group in self.cells_by_degree for cell in group]

    def n_cells(self, degree: int) -> int:
        return len(self.cells(degree))

    def cell(self, name: str) -> Cell:
        if name not in self._index:
            raise CellNameError(f"{self.name}: unknown cell {name!r}")
        degree, position = self._index[name]
        return self.cells_by_degree[degree][position]

    def index_of(self, name: str) -> int:
        self.cell(name)
        return self._index[name][1]

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._index)

    # Boundaries

    def boundary_matrix(self, degree: int) -> Gf2Matrix:
        """Matrix of d_degree; zero maps outside 1..max_degree."""
        if 1 <= degree <= self.max_degree:
            return self._boundaries[degree]
        return Gf2Matrix.zeros(self.n_cells(degree - 1), self.n_cells(degree))

    def boundary_of(self, name: str) -> List[str]:
        cell = self.cell(name)
        if cell.degree == 0:
            return []
        column = self.boundary_matrix(cell.degree).column(self.index_of(name))
        lower = self.cells(cell.degree - 1)
        return [lower[i].name for i in column.indices()]

    def boundary_map(self) -> Dict[str, List[str]]:
        return {cell.name: self.boundary_of(cell.name) for cell in self.all_cells()}

    # Chains

    def chain(self, degree: int, names: Iterable[str], label: Optional[str] = None) -> Chain:
        """Build a chain and check every name exists in the given degree."""
        chain = Chain.of(degree, names, label)
        self.check_chain(chain)
        return chain

    def check_chain(self, chain: Chain) -> None:
        for name in chain.support:
            cell = self.cell(name)
            if cell.degree != chain.degree:
                raise CellNameError(
                    f"{self.name}: {name} has degree {cell.degree}, not {chain.degree}"
                    + (f" (chain {chain.label})" if chain.label else "")
                )

    def chain_vector(self, chain: Chain) -> Gf2Vector:
        self.check_chain(chain)
        return Gf2Vector.from_indices(self.n_cells(chain.degree),
                                      (self.index_of(name) for name in chain.support))

    def vector_chain(self, degree: int, vector: Gf2Vector, label: Optional[str] = None) -> Chain:
        group = self.cells(degree)
        if vector.length != len(group):
            raise ShapeError(f"vector of length {vector.length} for {len(group)} cells of degree {degree}")
        return Chain(degree, frozenset(group[i].name for i in vector.indices()), label)

    def boundary(self, chain: Chain) -> Chain:
        vector = self.boundary_matrix(chain.degree).apply(self.chain_vector(chain))
        return self.vector_chain(chain.degree - 1, vector) if chain.degree > 0 else Chain(-1, frozenset())

    # Derived complexes

    def restricted(self, name: str, keep_names: Collection[str]) -> "ChainComplex":
        """The complex on the kept cells with boundaries restricted to them.

        No closure check; see `subcomplex` and `quotient`.
        """
        keep_names = frozenset(keep_names)
        positions = {
            d: [i for i, cell in enumerate(self.cells(d)) if cell.name in keep_names]
            for d in range(self.max_degree + 1)
        }
        cells = [cell for cell in self.all_cells() if cell.name in keep_names]
        matrices = {
            d: self.boundary_matrix(d).select(positions[d - 1], positions[d])
            for d in range(1, self.max_degree + 1)
        }
        return ChainComplex(name, cells, matrices, self.max_degree)

    def permuted(self, orders: Mapping[int, Sequence[int]]) -> "ChainComplex":
        """Reorder the cells of some degrees; orders[d][k] is the old position of new cell k."""
        order = {d: list(orders.get(d, range(self.n_cells(d)))) for d in range(self.max_degree + 1)}
        for d, positions in order.items():
            if sorted(positions) != list(range(self.n_cells(d))):
                raise ShapeError(f"order for degree {d} is not a permutation")
        cells = [self.cells(d)[i] for d in range(self.max_degree + 1) for i in order[d]]
        matrices = {
            d: self.boundary_matrix(d).select(order[d - 1], order[d])
            for d in range(1, self.max_degree + 1)
        }
        return ChainComplex(self.name, cells, matrices, self.max_degree)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (self.name == other.name
                and self.max_degree == other.max_degree
                and self.cells_by_degree == other.cells_by_degree
                and self._boundaries == other._boundaries)

    def __hash__(self) -> int:
        return hash((self.name, self.max_degree, self.cells_by_degree))

    def __repr__(self) -> str:
        counts = [self.n_cells(d) for d in range(self.max_degree + 1)]
        return f"ChainComplex({self.name!r}, cells={counts})"


def validate(x: ChainComplex) -> ValidationResult:
    """Check matrix shapes and d_d d_{d+1} = 0 for every d.

    Violations are listed by degree, then higher cell, then lower cell.
    """
    violations: List[Violation] = []
    for d in range(1, x.max_degree + 1):
        if x.boundary_matrix(d).shape != (x.n_cells(d - 1), x.n_cells(d)):
            violations.append(Violation(d, "", "", kind="shape"))
    for d in range(1, x.max_degree):
        product = mul(x.boundary_matrix(d), x.boundary_matrix(d + 1))
        for i, j in sorted(product.nonzero_entries(), key=lambda entry: (entry[1], entry[0])):
            violations.append(Violation(d, x.cells(d + 1)[j].name, x.cells(d - 1)[i].name))
    result = ValidationResult(tuple(violations))
    log_check(f"validate {x.name}", result.ok, {"violations": len(violations)} if violations else None)
    return result


def boundary_ranks(x: ChainComplex, workers: int = 1) -> Dict[int, int]:
    """Rank of d_d for every d in 0..max_degree+1.

    Args:
        x: The complex
        workers: Threads for the per-degree ranks; results match the sequential run

    Returns:
        Mapping degree -> rank
    """
    degrees = list(range(1, x.max_degree + 1))
    matrices = [x.boundary_matrix(d) for d in degrees]
    if workers > 1 and len(matrices) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(rank, matrices))
    else:
        values = [rank(m) for m in matrices]
    ranks = dict(zip(degrees, values))
    ranks[0] = 0
    ranks[x.max_degree + 1] = 0
    return ranks


def homology_report(x: ChainComplex, workers: int = 1) -> HomologyReport:
    """Rank-nullity bookkeeping without the validity check."""
    ranks = boundary_ranks(x, workers)
    return HomologyReport(tuple(
        DegreeHomology(d, x.n_cells(d), ranks[d], ranks[d + 1])
        for d in range(x.max_degree + 1)
    ))


def betti(x: ChainComplex, workers: int = 1) -> HomologyReport:
    """Betti numbers over GF(2); refuses complexes that fail `validate`."""
    result = validate(x)
    if not result.ok:
        raise InvalidComplexError(result)
    log_step(f"betti {x.name}")
    return homology_report(x, workers)


def euler(x: ChainComplex) -> int:
    return sum((-1) ** d * x.n_cells(d) for d in range(x.max_degree + 1))


def closure_witnesses(x: ChainComplex, keep: CellPredicate) -> List[Tuple[str, str]]:
    """(kept cell, dropped boundary cell) pairs; empty iff the kept cells are closed."""
    predicate = _as_predicate(keep)
    kept = {cell.name for cell in x.all_cells() if predicate(cell)}
    witnesses = []
    for cell in x.all_cells():
        if cell.name not in kept:
            continue
        witnesses.extend((cell.name, target) for target in x.boundary_of(cell.name) if target not in kept)
    return witnesses


def subcomplex(x: ChainComplex, keep: CellPredicate, name: Optional[str] = None) -> ChainComplex:
    """The subcomplex on the kept cells; raises ClosureError if it is not closed."""
    predicate = _as_predicate(keep)
    witnesses = closure_witnesses(x, predicate)
    if witnesses:
        raise ClosureError(witnesses)
    kept = [cell.name for cell in x.all_cells() if predicate(cell)]
    return x.restricted(name or f"{x.name}[sub]", kept)


def quotient(x: ChainComplex, keep: CellPredicate, name: Optional[str] = None) -> ChainComplex:
    """The quotient complex C(x) / C(sub): generated by the dropped cells."""
    predicate = _as_predicate(keep)
    witnesses = closure_witnesses(x, predicate)
    if witnesses:
        raise ClosureError(witnesses)
    dropped = [cell.name for cell in x.all_cells() if not predicate(cell)]
    return x.restricted(name or f"{x.name}[rel]", dropped)


def relative_betti(x: ChainComplex, keep: CellPredicate, workers: int = 1) -> HomologyReport:
    """Betti numbers of the pair (x, sub) via the quotient complex."""
    return betti(quotient(x, keep), workers)


def _image_rows(x: ChainComplex, degree: int) -> List[Gf2Vector]:
    """Columns of d_{degree+1}, i.e. boundaries of the (degree+1)-cells."""
    return x.boundary_matrix(degree + 1).columns()


def is_cycle(x: ChainComplex, c: Chain) -> bool:
    if c.degree == 0:
        x.check_chain(c)
        return True
    return x.boundary(c).is_zero()


def is_boundary(x: ChainComplex, c: Chain) -> bool:
    """True iff c lies in the image of d_{c.degree + 1}."""
    return in_span(x.chain_vector(c), _image_rows(x, c.degree))


def _check_degree(chains: Sequence[Chain], degree: int) -> None:
    for chain in chains:
        if chain.degree != degree:
            raise CellNameError(f"chain {chain.describe()} has degree {chain.degree}, expected {degree}")


def verify_homology_basis(x: ChainComplex, degree: int, chains: Sequence[Chain]) -> bool:
    """True iff the chains are cycles whose classes form a basis of H_degree."""
    _check_degree(chains, degree)
    vectors = [x.chain_vector(c) for c in chains]
    if not all(is_cycle(x, c) for c in chains):
        log_check(f"homology basis {x.name} H_{degree}", False, {"reason": "not all chains are cycles"})
        return False
    expected = betti(x).betti_at(degree)
    image = _image_rows(x, degree)
    n = x.n_cells(degree)
    image_rank = rank(Gf2Matrix.stack_rows(image, n))
    combined_rank = rank(Gf2Matrix.stack_rows(image + vectors, n))
    independent = combined_rank == image_rank + len(vectors)
    passed = independent and len(chains) == expected
    log_check(f"homology basis {x.name} H_{degree}", passed,
              {"chains": len(chains), "betti": expected, "independent": independent})
    return passed


def verify_kernel_list(x: ChainComplex, degree: int, chains: Sequence[Chain]) -> bool:
    """True iff the chains form a basis of ker d_degree."""
    _check_degree(chains, degree)
    vectors = [x.chain_vector(c) for c in chains]
    if not all(is_cycle(x, c) for c in chains):
        log_check(f"kernel list {x.name} d_{degree}", False, {"reason": "not all chains are cycles"})
        return False
    kernel_dim = x.n_cells(degree) - rank(x.boundary_matrix(degree))
    independent = is_independent(vectors, x.n_cells(degree))
    passed = independent and len(vectors) == kernel_dim
    log_check(f"kernel list {x.name} d_{degree}", passed,
              {"chains": len(vectors), "kernel_dim": kernel_dim, "independent": independent})
    return passed


def kernel_chains(x: ChainComplex, degree: int) -> List[Chain]:
    """A basis of ker d_degree in the deterministic free-column order."""
    return [
        x.vector_chain(degree, v, label=f"k{degree}_{i + 1:02d}")
        for i, v in enumerate(kernel_basis(x.boundary_matrix(degree)))
    ]


def verify_relative_homology_basis(x: ChainComplex, keep: CellPredicate,
                                   degree: int, chains: Sequence[Chain]) -> bool:
    """Quotient analog of verify_homology_basis for the pair (x, sub).

    Kept cells vanish in the quotient, so they are dropped from each chain.
    """
    q = quotient(x, keep)
    projected = [
        Chain(c.degree, frozenset(name for name in c.support if name in q), c.label)
        for c in chains
    ]
    for c in chains:
        x.check_chain(c)
    return verify_homology_basis(q, degree, projected)


def verify_decompositions(x: ChainComplex,
                          generators: Mapping[str, Chain],
                          table: Mapping[str, Sequence[str]]) -> List[DecompositionMismatch]:
    """Compare each listed boundary with the sum of the generators named for it.

    Args:
        x: The complex
        generators: label -> generator chain
        table: cell name -> generator labels claimed to sum to its boundary

    Returns:
        One mismatch per cell whose boundary differs; empty when all hold
    """
    mismatches = []
    for cell_name, labels in table.items():
        cell = x.cell(cell_name)
        boundary = x.boundary(Chain.of(cell.degree, [cell_name]))
        claimed = Chain(cell.degree - 1, frozenset())
        for label in labels:
            if label not in generators:
                raise CellNameError(f"unknown generator label {label!r} listed for {cell_name}")
            claimed = claimed + generators[label]
        difference = boundary.support ^ claimed.support
        if difference:
            pool = [g for g in generators.values() if g.degree == cell.degree - 1]
            solved = coordinates(x.chain_vector(boundary), [x.chain_vector(g) for g in pool]) if pool else None
            computed = tuple(pool[i].label or str(i) for i in solved) if solved is not None else None
            mismatches.append(DecompositionMismatch(cell_name, tuple(labels), frozenset(difference), computed))
    log_check(f"decompositions {x.name}", not mismatches, {"checked": len(table), "mismatches": len(mismatches)})
    return mismatches
