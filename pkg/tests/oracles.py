# oracles.py
# Brute-force reference computations for small GF(2) problems

import itertools
from typing import Dict, List, Sequence

import numpy as np

from equilevel.chain_complex import Cell, ChainComplex
from equilevel.gf2_linear import Gf2Matrix


def _span_size(columns: np.ndarray) -> int:
    """Number of distinct GF(2) sums of subsets of the columns."""
    n_rows, n_cols = columns.shape
    seen = set()
    for mask in itertools.product((0, 1), repeat=n_cols):
        total = (columns @ np.array(mask, dtype=np.int64)) % 2 if n_cols else np.zeros(n_rows, dtype=np.int64)
        seen.add(tuple(int(v) for v in total))
    return len(seen)


def brute_rank(dense: np.ndarray) -> int:
    dense = np.asarray(dense, dtype=np.int64) % 2
    return _span_size(dense).bit_length() - 1


def brute_kernel(dense: np.ndarray) -> List[np.ndarray]:
    """All vectors v with dense @ v = 0 mod 2."""
    dense = np.asarray(dense, dtype=np.int64) % 2
    n_cols = dense.shape[1]
    out = []
    for bits in itertools.product((0, 1), repeat=n_cols):
        v = np.array(bits, dtype=np.int64)
        if not ((dense @ v) % 2).any():
            out.append(v)
    return out


def brute_betti(x: ChainComplex) -> List[int]:
    """Betti numbers from the sizes of the cycle and boundary groups."""
    result = []
    for d in range(x.max_degree + 1):
        n = x.n_cells(d)
        out_map = x.boundary_matrix(d).to_dense().astype(np.int64)
        cycles = len(brute_kernel(out_map)) if n else 1
        in_map = x.boundary_matrix(d + 1).to_dense().astype(np.int64)
        boundaries = _span_size(in_map) if in_map.shape[1] else 1
        result.append((cycles.bit_length() - 1) - (boundaries.bit_length() - 1))
    return result


def random_complex(rng: np.random.Generator, counts: Sequence[int], density: float = 0.5,
                   name: str = "R") -> ChainComplex:
    """A random valid complex with the given cell counts per degree.

    Each column of d_{d+1} is a random cycle of d_d, so d d = 0 holds.
    """
    cells = [Cell(f"c{d}_{i}", d) for d, n in enumerate(counts) for i in range(n)]
    matrices: Dict[int, Gf2Matrix] = {}
    previous = None
    for d in range(1, len(counts)):
        n_low, n_high = counts[d - 1], counts[d]
        if previous is None:
            dense = (rng.random((n_low, n_high)) < density).astype(np.uint8)
        else:
            cycles = brute_kernel(previous)
            picks = rng.integers(0, len(cycles), size=n_high)
            dense = np.array([cycles[i] for i in picks], dtype=np.uint8).reshape(n_high, n_low).T
        matrices[d] = Gf2Matrix.from_dense(dense.reshape(n_low, n_high))
        previous = dense.reshape(n_low, n_high).astype(np.int64)
    return ChainComplex(name, cells, matrices, len(counts) - 1)


def random_counts(rng: np.random.Generator, max_cells: int = 10, max_degree: int = 3) -> List[int]:
    top = int(rng.integers(0, max_degree + 1))
    while True:
        counts = [int(c) for c in rng.integers(0, 4, size=top + 1)]
        if 0 < sum(counts) <= max_cells:
            return counts


def matrix_rows(n_rows: int, n_cols: int, start: int, stop: int) -> np.ndarray:
    """Rows, as n_cols-bit integers, of the matrices numbered start .. stop - 1.

    Row i of matrix k is bits i * n_cols .. (i + 1) * n_cols - 1 of k, so the
    numbers 0 .. 2**(n_rows * n_cols) - 1 cover every matrix of that shape once.
    Rows are returned as uint8, so n_cols is at most 8.
    """
    k = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n_rows, dtype=np.int64) * n_cols
    return ((k[:, None] >> shifts) & ((1 << n_cols) - 1)).astype(np.uint8)


def rows_to_dense(rows: np.ndarray, n_cols: int) -> np.ndarray:
    return ((rows[..., None] >> np.arange(n_cols)) & 1).astype(np.uint8)


def _log2_exact(counts: np.ndarray) -> np.ndarray:
    return np.rint(np.log2(counts)).astype(np.int64)


def span_rank(rows: np.ndarray, n_cols: int) -> np.ndarray:
    """Ranks from the number of distinct subset sums of each matrix's rows."""
    batch, n_rows = rows.shape
    sums = np.zeros((batch, 1 << n_rows), dtype=np.uint8)
    for s in range(1, 1 << n_rows):
        low = (s & -s).bit_length() - 1
        sums[:, s] = sums[:, s & (s - 1)] ^ rows[:, low]
    seen = np.zeros((batch, 1 << n_cols), dtype=bool)
    seen[np.arange(batch)[:, None], sums] = True
    return _log2_exact(seen.sum(axis=1))


def kernel_dimension(rows: np.ndarray, n_cols: int) -> np.ndarray:
    """Nullities from counting every v with M v = 0."""
    parity = np.array([bin(v).count("1") % 2 for v in range(1 << n_cols)], dtype=bool)
    solutions = np.zeros(rows.shape[0], dtype=np.int64)
    for v in range(1 << n_cols):
        solutions += ~parity[rows & v].any(axis=1)
    return _log2_exact(solutions)
