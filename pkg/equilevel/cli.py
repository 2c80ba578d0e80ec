# cli.py
# Command line interface: load complexes, run verifications, print TSV reports

import argparse
import sys
from typing import Any, Dict, List, Optional, Sequence

from . import datasets
from .chain_complex import (Chain, ChainComplex, betti, euler, is_cycle, kernel_chains,
                            relative_betti, validate, verify_homology_basis,
                            verify_kernel_list, verify_relative_homology_basis)
from .combinatorics import census
from .config_manager import ConfigManager, get_config
from .errors import ConfigError, DatasetLookupError, EquilevelError, InvalidComplexError
from .filtration import Filtration, e1_page, multiplicity_filtration, type_filtration
from .logger import configure_logging, log_error

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class Report:
    """Collects TSV rows and writes them to stdout in one go."""

    def __init__(self, separator: str = "\t"):
        self.separator = separator
        self.rows: List[str] = []

    def row(self, *fields: Any) -> None:
        self.rows.append(self.separator.join(str(f) for f in fields))

    def write(self) -> None:
        for line in self.rows:
            print(line)


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def _chain_names(x: ChainComplex, chain: Chain) -> str:
    names = [cell.name for cell in x.cells(chain.degree) if cell.name in chain.support]
    return "+".join(names) if names else "0"


def _filtration(x: ChainComplex, key: str, config: ConfigManager) -> Filtration:
    if key == "mult":
        return multiplicity_filtration(x, config=config)
    return type_filtration(x)


# Commands

def verify_command(x: ChainComplex, report: Report) -> int:
    result = validate(x)
    report.row("status", "ok" if result.ok else "fail")
    for violation in result.violations:
        report.row("violation", violation.degree, violation.cell, violation.target)
    return EXIT_OK if result.ok else EXIT_FAIL


def betti_command(x: ChainComplex, report: Report, workers: int) -> int:
    homology = betti(x, workers)
    for entry in homology.degrees:
        report.row(f"H_{entry.degree}", entry.betti)
    report.row("euler", homology.euler_characteristic)
    return EXIT_OK


def census_command(x: ChainComplex, report: Report) -> int:
    counts = census(x)
    for d, (first, second, total) in enumerate(zip(counts.first, counts.second, counts.totals)):
        report.row(d, first, second, total)
    report.row("total", sum(counts.first), sum(counts.second), counts.total)
    return EXIT_OK


def cycles_command(x: ChainComplex, chains: Sequence[Chain], degree: int, report: Report) -> int:
    selected = [c for c in chains if c.degree == degree]
    all_cycles = True
    for chain in selected:
        cycle = is_cycle(x, chain)
        all_cycles &= cycle
        report.row("cycle", chain.label or _chain_names(x, chain), _yes_no(cycle))
    basis = verify_homology_basis(x, degree, selected)
    report.row("basis", degree, _yes_no(basis))
    return EXIT_OK if all_cycles and basis else EXIT_FAIL


def kernel_command(x: ChainComplex, degree: int, chains: Optional[Sequence[Chain]], report: Report) -> int:
    computed = kernel_chains(x, degree)
    report.row("kernel_dim", degree, len(computed))
    if chains is None:
        for i, chain in enumerate(computed, start=1):
            report.row("vector", i, _chain_names(x, chain))
        return EXIT_OK
    passed = verify_kernel_list(x, degree, [c for c in chains if c.degree == degree])
    report.row("kernel_list", degree, _yes_no(passed))
    return EXIT_OK if passed else EXIT_FAIL


def filtration_command(x: ChainComplex, key: str, config: ConfigManager, report: Report, workers: int) -> int:
    f = _filtration(x, key, config)
    for p in f.levels:
        report.row("level", p, "cells", len(f.cells_at(p)))
    page = e1_page(f, workers)
    for (p, q), dim in page.nonzero().items():
        report.row("E1", p, q, dim)
    report.row("euler_check", "ok" if page.euler_consistent else "fail")
    return EXIT_OK if page.euler_consistent else EXIT_FAIL


def reconcile_command(a_spec: str, b_spec: str, config: ConfigManager, report: Report) -> int:
    labels = (datasets.spec_label(a_spec, config), datasets.spec_label(b_spec, config))
    if labels[0] == labels[1]:
        labels = ("a", "b")
    a = datasets.resolve_spec(a_spec, config)
    b = datasets.resolve_spec(b_spec, config)
    discrepancies = datasets.reconcile(a, b, labels)
    for item in discrepancies:
        report.row(item.degree, item.higher, item.lower, item.present_in)
    return EXIT_FAIL if discrepancies else EXIT_OK


def relative_command(x: ChainComplex, key: str, level: int, config: ConfigManager, report: Report,
                     chains: Optional[Sequence[Chain]] = None, degree: Optional[int] = None) -> int:
    f = _filtration(x, key, config)
    if level not in f.levels:
        raise DatasetLookupError(f"no level {level} in the {key} filtration (levels {list(f.levels)})")
    psi = f.psi(level)

    def lower(cell) -> bool:
        return f.level_of[cell.name] < level

    homology = relative_betti(psi, lower)
    for entry in homology.degrees:
        report.row(f"H_{entry.degree}", entry.betti)
    if chains is None:
        return EXIT_OK
    selected = [c for c in chains if c.degree == degree]
    passed = verify_relative_homology_basis(psi, lower, degree, selected)
    report.row("basis", degree, _yes_no(passed))
    return EXIT_OK if passed else EXIT_FAIL


def adjudicate_command(config: ConfigManager, report: Report) -> int:
    verdicts = datasets.adjudicate_readings(config)
    for v in verdicts:
        report.row("reading", v.subject, v.reading, "adopted" if v.adopted else "candidate",
                   _yes_no(v.well_typed), _yes_no(v.passes), "-" if v.mismatches is None else v.mismatches)
    return EXIT_OK if datasets.settled(verdicts) else EXIT_FAIL


def decompose_command(readings: Sequence[str], config: ConfigManager, report: Report) -> int:
    x = datasets.load_builtin("CD3", "corrected", config)
    items = {item["label"]: item for item in datasets.load_readings(config).get("generators", [])}
    overrides: Dict[str, Chain] = {}
    for text in readings:
        label, _, reading = text.partition("=")
        if label not in items or reading not in items[label]["readings"]:
            raise DatasetLookupError(f"unknown reading {text!r}")
        chain = datasets.reading_chain(x, items[label], reading)
        if chain is None:
            raise DatasetLookupError(f"reading {text!r} mixes cell dimensions")
        overrides[label] = chain
    mismatches = datasets.verify_printed_decompositions(x, config, overrides)
    for m in mismatches:
        report.row("mismatch", m.cell, "+".join(sorted(m.difference)))
    report.row("mismatches", len(mismatches))
    return EXIT_FAIL if mismatches else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equilevel", description="GF(2) verification of cellular chain complexes")
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    # Global arguments
    parser.add_argument("--config", default=None, help="Path to a system.yml replacing the packaged one")
    parser.add_argument("--log-dir", default=None, help="Directory for a log file")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--workers", type=int, default=1, help="Threads for per-degree ranks")

    file_help = "A .chc file or builtin:CD1|CD2|CD3[:formulas|:matrices|:corrected]"
    chains_help = "A .chains file or builtin:NAME:SET"

    verify_parser = subparsers.add_parser("verify", help="Check that the boundary squares to zero")
    verify_parser.add_argument("file", help=file_help)

    betti_parser = subparsers.add_parser("betti", help="Betti numbers over GF(2)")
    betti_parser.add_argument("file", help=file_help)

    euler_parser = subparsers.add_parser("euler", help="Euler characteristic")
    euler_parser.add_argument("file", help=file_help)

    census_parser = subparsers.add_parser("census", help="Cell counts per dimension and type")
    census_parser.add_argument("file", help=file_help)

    cycles_parser = subparsers.add_parser("cycles", help="Check chains are cycles forming a homology basis")
    cycles_parser.add_argument("file", help=file_help)
    cycles_parser.add_argument("--degree", type=int, required=True)
    cycles_parser.add_argument("--chains", required=True, help=chains_help)

    kernel_parser = subparsers.add_parser("kernel", help="Kernel of a boundary map, or check a kernel list")
    kernel_parser.add_argument("file", help=file_help)
    kernel_parser.add_argument("--degree", type=int, required=True)
    kernel_parser.add_argument("--chains", default=None, help=chains_help)

    filtration_parser = subparsers.add_parser("filtration", help="Filtration levels and E1 page")
    filtration_parser.add_argument("file", help=file_help)
    filtration_parser.add_argument("--key", choices=["mult", "type"], required=True)

    reconcile_parser = subparsers.add_parser("reconcile", help="Compare two encodings of a complex")
    reconcile_parser.add_argument("file_a", help=file_help)
    reconcile_parser.add_argument("file_b", help=file_help)

    relative_parser = subparsers.add_parser("relative", help="Relative Betti numbers of one filtration step")
    relative_parser.add_argument("file", help=file_help)
    relative_parser.add_argument("--key", choices=["mult", "type"], required=True)
    relative_parser.add_argument("--level", type=int, required=True)
    relative_parser.add_argument("--chains", default=None, help=chains_help)
    relative_parser.add_argument("--degree", type=int, default=None)

    subparsers.add_parser("adjudicate", help="Test every reading of the ambiguous printed CD3 items")

    decompose_parser = subparsers.add_parser("decompose", help="Check printed CD3 kernel decompositions")
    decompose_parser.add_argument("--reading", action="append", default=[], metavar="LABEL=READING",
                                  help="Use a non-adopted reading of a generator")
    return parser


def run(args: argparse.Namespace, config: ConfigManager, report: Report) -> int:
    workers = max(1, args.workers)
    if args.command == "reconcile":
        return reconcile_command(args.file_a, args.file_b, config, report)
    elif args.command == "adjudicate":
        return adjudicate_command(config, report)
    elif args.command == "decompose":
        return decompose_command(args.reading, config, report)

    x = datasets.resolve_spec(args.file, config)
    if args.command == "verify":
        return verify_command(x, report)
    elif args.command == "betti":
        return betti_command(x, report, workers)
    elif args.command == "euler":
        report.row("euler", euler(x))
        return EXIT_OK
    elif args.command == "census":
        return census_command(x, report)
    elif args.command == "cycles":
        return cycles_command(x, datasets.resolve_chains(args.chains, x, config), args.degree, report)
    elif args.command == "kernel":
        chains = datasets.resolve_chains(args.chains, x, config) if args.chains else None
        return kernel_command(x, args.degree, chains, report)
    elif args.command == "filtration":
        return filtration_command(x, args.key, config, report, workers)
    elif args.command == "relative":
        if args.chains is not None and args.degree is None:
            raise EquilevelError("relative --chains needs --degree")
        chains = datasets.resolve_chains(args.chains, x, config) if args.chains else None
        return relative_command(x, args.key, args.level, config, report, chains, args.degree)
    raise EquilevelError(f"unknown command {args.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        config = get_config(args.config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(config.get("logging", default={}), args.log_dir, args.verbose)

    report = Report(config.separator)
    try:
        status = run(args, config, report)
    except InvalidComplexError as e:
        print(f"error: {e}", file=sys.stderr)
        log_error("InvalidComplexError", str(e))
        status = EXIT_FAIL
    except (EquilevelError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        log_error(type(e).__name__, str(e))
        return EXIT_USAGE
    report.write()
    return status


if __name__ == "__main__":
    sys.exit(main())
