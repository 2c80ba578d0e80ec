# chc_format.py
# Reader and writer for the .chc complex format and the .chains chain-list format

import re
from pathlib import Path
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .chain_complex import CELL_TYPES, FIRST, MULTIPLICITIES, Cell, Chain, ChainComplex
from .errors import ChcParseError, EquilevelError
from .logger import log_correction, log_load

_TOKEN = re.compile(r"\S+")
_TERM = re.compile(r"\+|[^\s+]+")
_NAME = re.compile(r"^[A-Za-z0-9_.'^-]+$")
CELL_ATTRIBUTES = ("dim", "class", "type", "mult")


@dataclass
class BoundaryDeclaration:
    cell: str
    targets: List[Tuple[str, int]]
    line: int
    column: int
    comment: Optional[str] = None


@dataclass
class ChcDocument:
    """A parsed .chc file before it is turned into a complex."""

    name: str
    max_degree: int
    cells: List[Cell] = field(default_factory=list)
    boundaries: List[BoundaryDeclaration] = field(default_factory=list)
    comments: List[Tuple[int, str]] = field(default_factory=list)
    source: str = "<text>"
    cell_lines: Dict[str, int] = field(default_factory=dict)

    def provenance(self) -> Dict[str, str]:
        """Trailing comment of each boundary line, keyed by cell."""
        return {decl.cell: decl.comment for decl in self.boundaries if decl.comment}

    def to_complex(self) -> ChainComplex:
        """Resolve boundary names and build the complex.

        Repeated targets on one boundary line cancel mod 2 and are logged.
        """
        degrees = {cell.name: cell.degree for cell in self.cells}
        boundary: Dict[str, List[str]] = {}
        for decl in self.boundaries:
            if decl.cell not in degrees:
                raise ChcParseError(f"boundary of undeclared cell {decl.cell!r}", decl.line, decl.column, self.source)
            if decl.cell in boundary:
                raise ChcParseError(f"second boundary line for {decl.cell!r}", decl.line, decl.column, self.source)
            degree = degrees[decl.cell]
            seen: Dict[str, int] = {}
            for target, column in decl.targets:
                if target not in degrees:
                    raise ChcParseError(f"unknown boundary target {target!r}", decl.line, column, self.source)
                if degrees[target] != degree - 1:
                    raise ChcParseError(
                        f"{target} has dimension {degrees[target]}, boundary of {decl.cell} needs {degree - 1}",
                        decl.line, column, self.source,
                    )
                seen[target] = seen.get(target, 0) + 1
            for target, count in seen.items():
                if count > 1:
                    log_correction(decl.cell, f"{target} listed {count} times in its boundary; kept mod 2")
            boundary[decl.cell] = [t for t, count in seen.items() if count % 2]
        return ChainComplex.from_boundary_lists(self.name, self.cells, boundary, self.max_degree)


def _strip_comment(raw: str) -> Tuple[str, Optional[str]]:
    if "#" in raw:
        body, comment = raw.split("#", 1)
        return body, comment.strip()
    return raw, None


def _tokens(body: str) -> List[Tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(body)]


def _parse_int(text: str, what: str, line: int, column: int, source: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ChcParseError(f"{what} must be an integer, got {text!r}", line, column, source) from None
    if value < 0:
        raise ChcParseError(f"{what} must be non-negative, got {value}", line, column, source)
    return value


def _parse_terms(body: str, offset: int, line: int, source: str) -> List[Tuple[str, int]]:
    """Parse `NAME + NAME + ...` (or a lone `0`) into (name, column) pairs."""
    terms = [(m.group(0), offset + m.start() + 1) for m in _TERM.finditer(body)]
    if len(terms) == 1 and terms[0][0] == "0":
        return []
    if not terms:
        raise ChcParseError("expected terms or 0 after '='", line, offset + 1, source)
    names = []
    for position, (token, column) in enumerate(terms):
        expect_name = position % 2 == 0
        if expect_name and (token == "+" or not _NAME.match(token)):
            raise ChcParseError(f"expected a cell name, got {token!r}", line, column, source)
        if not expect_name and token != "+":
            raise ChcParseError(f"expected '+', got {token!r}", line, column, source)
        if expect_name:
            names.append((token, column))
    if terms[-1][0] == "+":
        raise ChcParseError("dangling '+'", line, terms[-1][1], source)
    return names


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        yield number, raw


def read_source(path: Union[str, Path]) -> str:
    """Read a .chc or .chains file as UTF-8.

    An undecodable byte is reported as a parse error at its line and byte column.
    """
    path = Path(path)
    raw = path.read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        before = raw[:e.start]
        line = before.count(b"\n") + 1
        column = e.start - before.rfind(b"\n")
        raise ChcParseError(f"invalid UTF-8 byte 0x{raw[e.start]:02x}", line, column, path.name) from e


def parse_chc_document(text: str, source: Optional[str] = None) -> ChcDocument:
    """Parse .chc text into a document.

    Args:
        text: The document
        source: Label used in error messages (file name)

    Returns:
        The document, with boundary targets still unresolved
    """
    source = source or "<text>"
    name: Optional[str] = None
    max_degree: Optional[int] = None
    cells: List[Cell] = []
    cell_lines: Dict[str, int] = {}
    boundaries: List[BoundaryDeclaration] = []
    comments: List[Tuple[int, str]] = []
    last_line = 1

    for number, raw in _lines(text):
        last_line = number
        body, comment = _strip_comment(raw)
        if comment:
            comments.append((number, comment))
        tokens = _tokens(body)
        if not tokens:
            continue
        keyword, column = tokens[0]

        if keyword == "complex":
            if name is not None:
                raise ChcParseError("second 'complex' line", number, column, source)
            if len(tokens) != 2:
                raise ChcParseError("expected 'complex NAME'", number, column, source)
            name = tokens[1][0]

        elif keyword == "dim":
            if max_degree is not None:
                raise ChcParseError("second 'dim' line", number, column, source)
            if len(tokens) != 2:
                raise ChcParseError("expected 'dim MAXDEGREE'", number, column, source)
            max_degree = _parse_int(tokens[1][0], "dim", number, tokens[1][1], source)

        elif keyword == "cell":
            if name is None or max_degree is None:
                raise ChcParseError("'cell' before the 'complex' and 'dim' lines", number, column, source)
            if len(tokens) < 3:
                raise ChcParseError("expected 'cell NAME dim=D ...'", number, column, source)
            cell_name, name_column = tokens[1]
            if not _NAME.match(cell_name):
                raise ChcParseError(f"invalid cell name {cell_name!r}", number, name_column, source)
            if cell_name in cell_lines:
                raise ChcParseError(
                    f"duplicate cell {cell_name!r} (first declared on line {cell_lines[cell_name]})",
                    number, name_column, source,
                )
            attributes: Dict[str, str] = {}
            attribute_columns: Dict[str, int] = {}
            for token, token_column in tokens[2:]:
                key, sep, value = token.partition("=")
                if not sep or key not in CELL_ATTRIBUTES or not value:
                    raise ChcParseError(f"unexpected cell attribute {token!r}", number, token_column, source)
                if key in attributes:
                    raise ChcParseError(f"repeated attribute {key!r}", number, token_column, source)
                attributes[key] = value
                attribute_columns[key] = token_column
                if key == "type" and value not in CELL_TYPES:
                    raise ChcParseError(f"type must be first or second, got {value!r}", number, token_column, source)
            if "dim" not in attributes:
                raise ChcParseError(f"cell {cell_name!r} has no dim=", number, name_column, source)
            degree = _parse_int(attributes["dim"], "dim", number, name_column, source)
            if degree > max_degree:
                raise ChcParseError(f"cell {cell_name!r} of dim {degree} exceeds dim {max_degree}",
                                    number, name_column, source)
            multiplicity = None
            if "mult" in attributes:
                mult_column = attribute_columns["mult"]
                multiplicity = _parse_int(attributes["mult"], "mult", number, mult_column, source)
                if multiplicity not in MULTIPLICITIES:
                    raise ChcParseError(f"mult must be one of {MULTIPLICITIES}, got {multiplicity}",
                                        number, mult_column, source)
            try:
                cells.append(Cell(cell_name, degree, attributes.get("class"),
                                  attributes.get("type", FIRST), multiplicity))
            except (ValueError, EquilevelError) as e:
                raise ChcParseError(str(e), number, name_column, source) from e
            cell_lines[cell_name] = number

        elif keyword == "boundary":
            if len(tokens) < 4 or tokens[2][0] != "=":
                raise ChcParseError("expected 'boundary NAME = NAME + ...'", number, column, source)
            rhs_offset = tokens[2][1]
            targets = _parse_terms(body[rhs_offset:], rhs_offset, number, source)
            boundaries.append(BoundaryDeclaration(tokens[1][0], targets, number, tokens[1][1], comment))

        else:
            raise ChcParseError(f"unknown keyword {keyword!r}", number, column, source)

    if name is None:
        raise ChcParseError("missing 'complex NAME' line", last_line, 1, source)
    if max_degree is None:
        raise ChcParseError("missing 'dim MAXDEGREE' line", last_line, 1, source)
    return ChcDocument(name, max_degree, cells, boundaries, comments, source, cell_lines)


def parse_chc(text: str, source: Optional[str] = None) -> ChainComplex:
    """Parse a .chc document into a chain complex.

    Args:
        text: The document
        source: Label used in error messages (file name)

    Returns:
        The complex
    """
    complex_ = parse_chc_document(text, source).to_complex()
    log_load(source or "<text>", "parsed", repr(complex_))
    return complex_


def _cell_line(cell: Cell) -> str:
    parts = [f"cell {cell.name}", f"dim={cell.degree}"]
    if cell.class_tag is not None:
        parts.append(f"class={cell.class_tag}")
    parts.append(f"type={cell.type_tag}")
    if cell.multiplicity is not None:
        parts.append(f"mult={cell.multiplicity}")
    return " ".join(parts)


def serialize_chc(x: ChainComplex) -> str:
    """Canonical .chc text: header, cells in degree order, then nonzero boundaries."""
    lines = [f"complex {x.name}", f"dim {x.max_degree}", ""]
    lines.extend(_cell_line(cell) for cell in x.all_cells())
    boundary_lines = []
    for cell in x.all_cells():
        targets = x.boundary_of(cell.name)
        if targets:
            boundary_lines.append(f"boundary {cell.name} = {' + '.join(targets)}")
    if boundary_lines:
        lines.append("")
        lines.extend(boundary_lines)
    return "\n".join(lines) + "\n"


def parse_chains(text: str, x: Optional[ChainComplex] = None, source: Optional[str] = None) -> List[Chain]:
    """Parse a chains file: one `degree D [label=ID] : NAME + NAME ...` per line.

    Args:
        text: The document
        x: Complex to check names and degrees against (skipped when None)
        source: Label used in error messages

    Returns:
        Chains in file order
    """
    source = source or "<text>"
    chains: List[Chain] = []
    labels: Dict[str, int] = {}
    for number, raw in _lines(text):
        body, _ = _strip_comment(raw)
        if not body.strip():
            continue
        head, sep, rhs = body.partition(":")
        tokens = _tokens(head)
        if not sep or not tokens or tokens[0][0] != "degree" or len(tokens) not in (2, 3):
            raise ChcParseError("expected 'degree D [label=ID] : NAME + ...'", number, 1, source)
        degree = _parse_int(tokens[1][0], "degree", number, tokens[1][1], source)
        label = None
        if len(tokens) == 3:
            key, eq, label = tokens[2][0].partition("=")
            if key != "label" or not eq or not label:
                raise ChcParseError(f"unexpected token {tokens[2][0]!r}", number, tokens[2][1], source)
            if label in labels:
                raise ChcParseError(f"label {label!r} already used on line {labels[label]}",
                                    number, tokens[2][1], source)
            labels[label] = number
        offset = len(head) + 1
        terms = _parse_terms(rhs, offset, number, source)

        counts: Dict[str, int] = {}
        for term, column in terms:
            if x is not None:
                if term not in x:
                    raise ChcParseError(f"unknown cell {term!r}", number, column, source)
                if x.cell(term).degree != degree:
                    raise ChcParseError(f"{term} has dimension {x.cell(term).degree}, not {degree}",
                                        number, column, source)
            counts[term] = counts.get(term, 0) + 1
        for term, count in counts.items():
            if count > 1:
                log_correction(label or f"{source}:{number}", f"{term} listed {count} times; kept mod 2")
        chains.append(Chain.of(degree, [term for term, _ in terms], label))
    return chains


def serialize_chains(chains: Sequence[Chain], x: Optional[ChainComplex] = None) -> str:
    """Chains text, names in the complex's cell order when given, else sorted."""
    lines = []
    for chain in chains:
        if x is not None:
            names = [cell.name for cell in x.cells(chain.degree) if cell.name in chain.support]
        else:
            names = sorted(chain.support)
        head = f"degree {chain.degree}" + (f" label={chain.label}" if chain.label else "")
        lines.append(f"{head} : {' + '.join(names) if names else '0'}")
    return "\n".join(lines) + "\n"
