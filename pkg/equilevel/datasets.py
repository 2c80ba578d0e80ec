# datasets.py
# Builtin transcriptions of CD1, CD2 and CD3: loading, naming, reconciliation
# of the two CD3 encodings and adjudication of ambiguous printed items

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .chain_complex import (Chain, ChainComplex, DecompositionMismatch, validate,
                            verify_decompositions, verify_kernel_list)
from .chc_format import ChcDocument, parse_chains, parse_chc_document, read_source
from .config_manager import ConfigManager, get_config
from .errors import AlignmentError, DatasetLookupError
from .logger import log_check, log_load, log_step
from .validators import ConsistencyValidator

COMPLEX_NAMES = ("CD1", "CD2", "CD3")
ENCODINGS = ("formulas", "matrices", "corrected")
BUILTIN_PREFIX = "builtin:"

# Documented per-degree cell counts
CELL_COUNTS = {
    "CD1": (1, 2, 1),
    "CD2": (1, 5, 10, 9, 3),
    "CD3": (1, 7, 29, 67, 85, 56, 15),
}


@dataclass(frozen=True)
class DatasetSource:
    """Where a builtin complex came from, with the citation of each boundary line."""

    complex_name: str
    encoding: str
    path: Path
    provenance: Mapping[str, str] = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class CellName:
    """ASCII cell name split into its parts.

    `bar_k_1_m` is the barred cell of class k with index 1 and sign minus;
    Greek classes are spelled Ups, Om, Lam, Th and nabla.
    """

    base: str
    indices: Tuple[str, ...] = ()
    sign: Optional[str] = None
    barred: bool = False

    GREEK = {"Ups": "Upsilon", "Om": "Omega", "Lam": "Lambda", "Th": "Theta", "nabla": "nabla"}
    SIGNS = {"p": "+", "m": "-"}

    @classmethod
    def parse(cls, name: str) -> "CellName":
        parts = name.split("_")
        barred = parts[0] == "bar" and len(parts) > 1
        if barred:
            parts = parts[1:]
        base, rest = parts[0], parts[1:]
        sign = None
        if rest and rest[-1] in cls.SIGNS:
            sign = cls.SIGNS[rest[-1]]
            rest = rest[:-1]
        return cls(base, tuple(rest), sign, barred)

    @property
    def ascii(self) -> str:
        parts = (["bar"] if self.barred else []) + [self.base] + list(self.indices)
        if self.sign is not None:
            parts.append("p" if self.sign == "+" else "m")
        return "_".join(parts)

    @property
    def printed(self) -> str:
        """Rendering in the style of the printed formulas, e.g. `bar k_1^-`."""
        text = self.GREEK.get(self.base, self.base)
        if self.indices:
            text += "_" + "".join(self.indices)
        if self.sign is not None:
            text += "^" + self.sign
        return ("bar " if self.barred else "") + text


def _config(config: Optional[ConfigManager]) -> ConfigManager:
    return config if config is not None else get_config()


def dataset_source(name: str, encoding: Optional[str] = None,
                   config: Optional[ConfigManager] = None) -> DatasetSource:
    """Resolve a (complex, encoding) pair to its file.

    Args:
        name: CD1, CD2 or CD3
        encoding: formulas, matrices or corrected (the complex's default when None)
        config: Configuration manager (the shared one when None)

    Returns:
        The source, provenance not yet read
    """
    config = _config(config)
    entry = config.dataset_entry(name)
    encoding = encoding or entry.get("default", "formulas")
    path = config.dataset_path(name, "encodings", encoding)
    return DatasetSource(name, encoding, path)


@lru_cache(maxsize=32)
def _read_document(path: str) -> Tuple[ChcDocument, ChainComplex]:
    text = read_source(path)
    document = parse_chc_document(text, Path(path).name)
    complex_ = document.to_complex()
    log_load(path, "parsed", repr(complex_))
    return document, complex_


def load_chc_file(path: str) -> ChainComplex:
    """Parse a .chc file from disk."""
    return _read_document(str(Path(path).resolve()))[1]


def load_builtin_source(name: str, encoding: Optional[str] = None,
                        config: Optional[ConfigManager] = None) -> Tuple[DatasetSource, ChainComplex]:
    """Like load_builtin, also returning the source with its provenance."""
    source = dataset_source(name, encoding, config)
    document, complex_ = _read_document(str(source.path))
    return DatasetSource(source.complex_name, source.encoding, source.path, document.provenance()), complex_


def load_builtin(name: str, encoding: Optional[str] = None,
                 config: Optional[ConfigManager] = None) -> ChainComplex:
    """Load a shipped complex; validation is left to the caller.

    Args:
        name: CD1, CD2 or CD3
        encoding: formulas, matrices or corrected (the complex's default when None)
        config: Configuration manager

    Returns:
        The parsed complex
    """
    return load_builtin_source(name, encoding, config)[1]


def load_builtin_chains(name: str, chain_set: str, x: Optional[ChainComplex] = None,
                        config: Optional[ConfigManager] = None) -> List[Chain]:
    """Load a shipped chain list (generators, kernel2, kernel3) checked against a complex."""
    config = _config(config)
    path = config.dataset_path(name, "chains", chain_set)
    if x is None:
        x = load_builtin(name, config=config)
    log_load(str(path), "started")
    return parse_chains(read_source(path), x, path.name)


def resolve_spec(spec: str, config: Optional[ConfigManager] = None) -> ChainComplex:
    """Load `builtin:NAME[:ENCODING]` or a .chc path."""
    if spec.startswith(BUILTIN_PREFIX):
        parts = spec[len(BUILTIN_PREFIX):].split(":")
        if len(parts) > 2 or not parts[0]:
            raise DatasetLookupError(f"malformed builtin reference {spec!r}")
        return load_builtin(parts[0], parts[1] if len(parts) == 2 else None, config)
    return load_chc_file(spec)


def spec_label(spec: str, config: Optional[ConfigManager] = None) -> str:
    """Short label for a complex reference: the encoding name or the file stem."""
    if spec.startswith(BUILTIN_PREFIX):
        parts = spec[len(BUILTIN_PREFIX):].split(":")
        if len(parts) == 2:
            return parts[1]
        return _config(config).dataset_entry(parts[0]).get("default", "formulas")
    return Path(spec).stem


def resolve_chains(spec: str, x: ChainComplex, config: Optional[ConfigManager] = None) -> List[Chain]:
    """Load `builtin:NAME:SET` or a .chains path against the complex x."""
    if spec.startswith(BUILTIN_PREFIX):
        parts = spec[len(BUILTIN_PREFIX):].split(":")
        if len(parts) != 2:
            raise DatasetLookupError(f"chain sets are referenced as builtin:NAME:SET, got {spec!r}")
        return load_builtin_chains(parts[0], parts[1], x, config)
    path = Path(spec)
    return parse_chains(read_source(path), x, path.name)


# Reconciliation

@dataclass(frozen=True)
class Discrepancy:
    """A boundary entry present in one encoding and absent from the other."""

    degree: int
    higher: str
    lower: str
    present_in: str


def reconcile(a: ChainComplex, b: ChainComplex,
              labels: Tuple[str, str] = ("a", "b")) -> List[Discrepancy]:
    """Compare two encodings of the same complex entry by entry.

    Args:
        a: First encoding
        b: Second encoding, with the same cell names and degrees
        labels: Names reported in the present_in column

    Returns:
        Differences ordered by degree, then by a's cell order
    """
    inventory_a = {cell.name: cell.degree for cell in a.all_cells()}
    inventory_b = {cell.name: cell.degree for cell in b.all_cells()}
    if inventory_a != inventory_b or a.max_degree != b.max_degree:
        only_a = sorted(set(inventory_a.items()) - set(inventory_b.items()))
        only_b = sorted(set(inventory_b.items()) - set(inventory_a.items()))
        raise AlignmentError(
            f"cell inventories differ: only in {labels[0]}: {only_a[:5]}, only in {labels[1]}: {only_b[:5]}"
        )

    discrepancies = []
    for d in range(1, a.max_degree + 1):
        lower_order = {cell.name: i for i, cell in enumerate(a.cells(d - 1))}
        for cell in a.cells(d):
            in_a = set(a.boundary_of(cell.name))
            in_b = set(b.boundary_of(cell.name))
            for target in sorted(in_a ^ in_b, key=lower_order.__getitem__):
                discrepancies.append(Discrepancy(d, cell.name, target, labels[0] if target in in_a else labels[1]))
    log_check(f"reconcile {labels[0]} vs {labels[1]}", not discrepancies, {"discrepancies": len(discrepancies)})
    return discrepancies


# Consistency of shipped data

def check_type_pairing(x: ChainComplex) -> Tuple[bool, str]:
    return ConsistencyValidator().validate_type_pairing(x)


def check_multiplicity_tags(x: ChainComplex, config: Optional[ConfigManager] = None) -> Tuple[bool, str]:
    table = _config(config).multiplicity_table(x.name)
    return ConsistencyValidator().validate_multiplicity_tags(x, table)


def check_inventory(x: ChainComplex) -> Tuple[bool, str]:
    if x.name not in CELL_COUNTS:
        return False, f"no documented cell counts for {x.name}"
    return ConsistencyValidator().validate_inventory(x, CELL_COUNTS[x.name])


def check_class_names(x: ChainComplex) -> Tuple[bool, str]:
    """Every cell's class tag is the base of its ASCII name."""
    wrong = [cell.name for cell in x.all_cells() if CellName.parse(cell.name).base != cell.class_tag]
    if wrong:
        return False, f"class tags disagree with names: {', '.join(wrong[:5])}"
    return True, f"class tags of {x.name} agree with names"


# Printed kernel decompositions

_DEGREE_KEY = re.compile(r"^degree_(\d+)$")


def kernel_generators(x: ChainComplex, config: Optional[ConfigManager] = None,
                      overrides: Optional[Mapping[str, Chain]] = None) -> Dict[str, Chain]:
    """Labelled CD3 kernel generators of degrees 2 and 3, with optional substitutions."""
    generators: Dict[str, Chain] = {}
    for chain_set in ("kernel2", "kernel3"):
        for chain in load_builtin_chains("CD3", chain_set, x, config):
            generators[chain.label] = chain
    for label, chain in (overrides or {}).items():
        generators[label] = Chain(chain.degree, chain.support, label)
    return generators


def load_decompositions(config: Optional[ConfigManager] = None) -> Dict[int, Dict[str, List[str]]]:
    """Printed decompositions keyed by the degree of the decomposed cells."""
    table = _config(config).load_table("CD3", "decompositions")
    return {int(_DEGREE_KEY.match(key).group(1)): dict(entries) for key, entries in table.items()}


def verify_printed_decompositions(x: Optional[ChainComplex] = None,
                                  config: Optional[ConfigManager] = None,
                                  overrides: Optional[Mapping[str, Chain]] = None) -> List[DecompositionMismatch]:
    """Check every printed CD3 boundary decomposition against the kernel lists."""
    if x is None:
        x = load_builtin("CD3", "corrected", config)
    generators = kernel_generators(x, config, overrides)
    mismatches: List[DecompositionMismatch] = []
    for degree, table in sorted(load_decompositions(config).items()):
        log_step(f"decompositions of degree {degree}", f"{len(table)} cells")
        mismatches.extend(verify_decompositions(x, generators, table))
    return mismatches


# Reading adjudication

@dataclass(frozen=True)
class ReadingVerdict:
    """Outcome of one candidate reading of an ambiguous printed item."""

    subject: str
    kind: str
    reading: str
    adopted: bool
    well_typed: bool
    passes: bool
    mismatches: Optional[int] = None
    printed: Optional[str] = None


def load_readings(config: Optional[ConfigManager] = None) -> Dict[str, Any]:
    return _config(config).load_table("CD3", "readings")


def _well_typed(x: ChainComplex, terms: Sequence[str], degree: int) -> bool:
    return all(term in x and x.cell(term).degree == degree for term in terms)


def reading_chain(x: ChainComplex, item: Mapping[str, Any], reading: str) -> Optional[Chain]:
    """The chain a generator reading names, or None if it is ill-typed."""
    terms = item["readings"][reading]
    if not _well_typed(x, terms, item["degree"]):
        return None
    return Chain.of(item["degree"], terms, item["label"])


def _adjudicate_generator(x: ChainComplex, item: Mapping[str, Any],
                          config: ConfigManager) -> List[ReadingVerdict]:
    chains = load_builtin_chains("CD3", item["chains"], x, config)
    verdicts = []
    for reading in item["readings"]:
        chain = reading_chain(x, item, reading)
        if chain is None:
            verdicts.append(ReadingVerdict(item["label"], "generator", reading, reading == item["adopted"],
                                           False, False, None, item.get("printed")))
            continue
        substituted = [chain if c.label == item["label"] else c for c in chains]
        passes = verify_kernel_list(x, item["degree"], substituted)
        mismatches = verify_printed_decompositions(x, config, {item["label"]: chain})
        verdicts.append(ReadingVerdict(item["label"], "generator", reading, reading == item["adopted"],
                                       True, passes, len(mismatches), item.get("printed")))
    return verdicts


def _adjudicate_boundary(formulas: ChainComplex, item: Mapping[str, Any],
                         others: Mapping[str, Sequence[str]]) -> List[ReadingVerdict]:
    cell = formulas.cell(item["cell"])
    verdicts = []
    for reading, terms in item["readings"].items():
        well_typed = _well_typed(formulas, terms, cell.degree - 1)
        passes = False
        if well_typed:
            boundary = formulas.boundary_map()
            boundary.update(others)
            boundary[cell.name] = list(terms)
            candidate = ChainComplex.from_boundary_lists(formulas.name, formulas.all_cells(),
                                                         boundary, formulas.max_degree)
            passes = validate(candidate).ok
        verdicts.append(ReadingVerdict(cell.name, "boundary", reading, reading == item["adopted"],
                                       well_typed, passes, None, item.get("printed")))
    return verdicts


def adjudicate_readings(config: Optional[ConfigManager] = None) -> List[ReadingVerdict]:
    """Test every candidate reading of every ambiguous CD3 item.

    Generator readings are substituted into their kernel list on the corrected
    complex. Boundary readings are substituted into the formula transcription,
    with every other ambiguous boundary at its adopted reading.

    Returns:
        One verdict per (item, reading), in file order
    """
    config = _config(config)
    readings = load_readings(config)
    corrected = load_builtin("CD3", "corrected", config)
    formulas = load_builtin("CD3", "formulas", config)

    verdicts: List[ReadingVerdict] = []
    for item in readings.get("generators", []):
        verdicts.extend(_adjudicate_generator(corrected, item, config))

    boundary_items = readings.get("boundaries", [])
    for item in boundary_items:
        others = {other["cell"]: other["readings"][other["adopted"]]
                  for other in boundary_items if other["cell"] != item["cell"]}
        verdicts.extend(_adjudicate_boundary(formulas, item, others))

    for verdict in verdicts:
        log_check(f"reading {verdict.subject}:{verdict.reading}", verdict.passes,
                  {"well_typed": verdict.well_typed, "mismatches": verdict.mismatches})
    return verdicts


def settled(verdicts: Sequence[ReadingVerdict]) -> bool:
    """True iff each item has exactly one passing reading and it is the adopted one."""
    subjects: Dict[str, List[ReadingVerdict]] = {}
    for verdict in verdicts:
        subjects.setdefault(verdict.subject, []).append(verdict)
    for group in subjects.values():
        passing = [v for v in group if v.passes]
        if len(passing) != 1 or not passing[0].adopted:
            return False
    return True
