# gf2_linear.py
# Exact linear algebra over the two-element field on bit-packed numpy words

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ShapeError

WORD_BITS = 64
_ONE = np.uint64(1)
_ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


def _n_words(n_bits: int) -> int:
    return (n_bits + WORD_BITS - 1) // WORD_BITS


def _tail_mask(n_bits: int) -> np.ndarray:
    mask = np.full(_n_words(n_bits), _ALL_ONES, dtype=np.uint64)
    rem = n_bits % WORD_BITS
    if rem:
        mask[-1] = np.uint64((1 << rem) - 1)
    return mask


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (..., n) array of entries into (..., ceil(n/64)) uint64 words.

    Entries are reduced mod 2. Bit j of the packed row lives in word j // 64
    at position j % 64.
    """
    bits = (np.asarray(bits, dtype=np.int64) % 2).astype(np.uint64)
    n = bits.shape[-1]
    words = np.zeros(bits.shape[:-1] + (_n_words(n),), dtype=np.uint64)
    for k in range(words.shape[-1]):
        chunk = bits[..., k * WORD_BITS:(k + 1) * WORD_BITS]
        shifts = np.arange(chunk.shape[-1], dtype=np.uint64)
        words[..., k] = np.bitwise_or.reduce(chunk << shifts, axis=-1)
    return words


def _unpack_bits(words: np.ndarray, n_bits: int) -> np.ndarray:
    shifts = np.arange(WORD_BITS, dtype=np.uint64)
    bits = (words[..., :, None] >> shifts) & _ONE
    bits = bits.reshape(words.shape[:-1] + (words.shape[-1] * WORD_BITS,))
    return bits[..., :n_bits].astype(np.uint8)


class Gf2Vector:
    """Immutable bit vector over GF(2)."""

    __slots__ = ("length", "_words")

    def __init__(self, length: int, words: Optional[np.ndarray] = None):
        """Initialize the vector.

        Args:
            length: Number of coordinates
            words: Packed uint64 words (zero vector when omitted)
        """
        if length < 0:
            raise ShapeError(f"vector length must be non-negative, got {length}")
        n_words = _n_words(length)
        if words is None:
            arr = np.zeros(n_words, dtype=np.uint64)
        else:
            arr = np.array(words, dtype=np.uint64).reshape(-1)
            if arr.size != n_words:
                raise ShapeError(f"{arr.size} words given for a vector of length {length}")
            arr &= _tail_mask(length)
        arr.setflags(write=False)
        self.length = length
        self._words = arr

    @classmethod
    def zeros(cls, length: int) -> "Gf2Vector":
        return cls(length)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Gf2Vector":
        arr = np.asarray(bits).reshape(-1)
        return cls(arr.size, _pack_bits(arr))

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "Gf2Vector":
        """Build a vector with a 1 at each listed index (repeats cancel)."""
        bits = np.zeros(length, dtype=np.uint8)
        for i in indices:
            if not 0 <= i < length:
                raise ShapeError(f"index {i} out of range for length {length}")
            bits[i] ^= 1
        return cls(length, _pack_bits(bits))

    @property
    def words(self) -> np.ndarray:
        return self._words

    def to_bits(self) -> np.ndarray:
        return _unpack_bits(self._words, self.length)

    def indices(self) -> List[int]:
        return np.flatnonzero(self.to_bits()).tolist()

    def weight(self) -> int:
        return int(np.count_nonzero(self.to_bits()))

    def is_zero(self) -> bool:
        return not self._words.any()

    def _check_length(self, other: "Gf2Vector") -> None:
        if self.length != other.length:
            raise ShapeError(f"vector lengths differ: {self.length} vs {other.length}")

    def __add__(self, other: "Gf2Vector") -> "Gf2Vector":
        self._check_length(other)
        return Gf2Vector(self.length, self._words ^ other._words)

    __xor__ = __add__
    __sub__ = __add__

    def dot(self, other: "Gf2Vector") -> int:
        self._check_length(other)
        return int(np.count_nonzero(_unpack_bits(self._words & other._words, self.length))) % 2

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        word, bit = divmod(i, WORD_BITS)
        return int((self._words[word] >> np.uint64(bit)) & _ONE)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Vector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self.length, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"Gf2Vector({''.join(str(b) for b in self.to_bits())!r})"


class Gf2Matrix:
    """Immutable dense matrix over GF(2), rows packed into uint64 words.

    Bit j of row i is the entry (i, j). Storage bits beyond n_cols are zero.
    """

    __slots__ = ("n_rows", "n_cols", "_words")

    def __init__(self, n_rows: int, n_cols: int, words: Optional[np.ndarray] = None):
        """Initialize the matrix.

        Args:
            n_rows: Number of rows
            n_cols: Number of columns
            words: Packed rows of shape (n_rows, ceil(n_cols / 64)); zero when omitted
        """
        if n_rows < 0 or n_cols < 0:
            raise ShapeError(f"matrix shape must be non-negative, got {n_rows}x{n_cols}")
        n_words = _n_words(n_cols)
        if words is None:
            arr = np.zeros((n_rows, n_words), dtype=np.uint64)
        else:
            arr = np.array(words, dtype=np.uint64)
            if arr.shape != (n_rows, n_words):
                raise ShapeError(
                    f"word array of shape {arr.shape} does not fit a {n_rows}x{n_cols} matrix"
                )
            arr &= _tail_mask(n_cols)
        arr.setflags(write=False)
        self.n_rows = n_rows
        self.n_cols = n_cols
        self._words = arr

    # Construction

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "Gf2Matrix":
        return cls(n_rows, n_cols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, array: Sequence[Sequence[int]]) -> "Gf2Matrix":
        """Build a matrix from a 2-D array of entries (reduced mod 2)."""
        arr = np.asarray(array)
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D array, got {arr.ndim} dimension(s)")
        return cls(arr.shape[0], arr.shape[1], _pack_bits(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n_cols: Optional[int] = None) -> "Gf2Matrix":
        if not rows:
            return cls(0, n_cols or 0)
        arr = np.asarray(rows)
        if n_cols is not None and arr.shape[1] != n_cols:
            raise ShapeError(f"rows have {arr.shape[1]} columns, expected {n_cols}")
        return cls.from_dense(arr)

    @classmethod
    def from_entries(cls, n_rows: int, n_cols: int,
                     entries: Iterable[Tuple[int, int, int]]) -> "Gf2Matrix":
        """Build a matrix from (row, col, value) triples, XOR-accumulated.

        Args:
            n_rows: Number of rows
            n_cols: Number of columns
            entries: Triples in any order; repeated positions add mod 2

        Returns:
            The matrix
        """
        dense = np.zeros((n_rows, n_cols), dtype=np.uint8)
        for i, j, value in entries:
            if not (0 <= i < n_rows and 0 <= j < n_cols):
                raise ShapeError(f"entry ({i}, {j}) outside a {n_rows}x{n_cols} matrix")
            dense[i, j] ^= value & 1
        return cls(n_rows, n_cols, _pack_bits(dense))

    @classmethod
    def from_columns(cls, n_rows: int, columns: Sequence[Iterable[int]]) -> "Gf2Matrix":
        """Build a matrix whose column j has a 1 in each row listed in columns[j]."""
        entries = [(i, j, 1) for j, rows in enumerate(columns) for i in rows]
        return cls.from_entries(n_rows, len(columns), entries)

    @classmethod
    def stack_rows(cls, vectors: Sequence[Gf2Vector], length: Optional[int] = None) -> "Gf2Matrix":
        """Stack vectors as the rows of a matrix."""
        if length is None:
            if not vectors:
                raise ShapeError("cannot infer the length of an empty vector list")
            length = vectors[0].length
        for v in vectors:
            if v.length != length:
                raise ShapeError(f"vector of length {v.length} in a list of length {length}")
        words = np.zeros((len(vectors), _n_words(length)), dtype=np.uint64)
        for i, v in enumerate(vectors):
            words[i] = v.words
        return cls(len(vectors), length, words)

    @classmethod
    def stack_columns(cls, vectors: Sequence[Gf2Vector], length: Optional[int] = None) -> "Gf2Matrix":
        return cls.stack_rows(vectors, length).transpose()

    # Access

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def words(self) -> np.ndarray:
        return self._words

    def to_dense(self) -> np.ndarray:
        return _unpack_bits(self._words, self.n_cols)

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.n_rows and 0 <= j < self.n_cols):
            raise IndexError((i, j))
        word, bit = divmod(j, WORD_BITS)
        return int((self._words[i, word] >> np.uint64(bit)) & _ONE)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        return self.get(*index)

    def row(self, i: int) -> Gf2Vector:
        return Gf2Vector(self.n_cols, self._words[i])

    def column(self, j: int) -> Gf2Vector:
        return Gf2Vector.from_bits(self.to_dense()[:, j])

    def columns(self) -> List[Gf2Vector]:
        dense = self.to_dense()
        return [Gf2Vector.from_bits(dense[:, j]) for j in range(self.n_cols)]

    def nonzero_entries(self) -> List[Tuple[int, int]]:
        """(row, col) positions of all 1-entries in row-major order."""
        return [(int(i), int(j)) for i, j in np.argwhere(self.to_dense())]

    def is_zero(self) -> bool:
        return not self._words.any()

    # Derived matrices

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix.from_dense(self.to_dense().T)

    def select(self, rows: Optional[Sequence[int]] = None,
               cols: Optional[Sequence[int]] = None) -> "Gf2Matrix":
        """Submatrix (or permutation) on the given row and column indices."""
        dense = self.to_dense()
        if rows is not None:
            dense = dense[np.asarray(rows, dtype=np.int64).reshape(-1), :]
        if cols is not None:
            dense = dense[:, np.asarray(cols, dtype=np.int64).reshape(-1)]
        return Gf2Matrix.from_dense(dense.reshape(
            len(rows) if rows is not None else self.n_rows,
            len(cols) if cols is not None else self.n_cols,
        ))

    def apply(self, v: Gf2Vector) -> Gf2Vector:
        """Matrix-vector product m * v."""
        if v.length != self.n_cols:
            raise ShapeError(f"vector of length {v.length} against {self.n_rows}x{self.n_cols} matrix")
        bits = (self.to_dense().astype(np.int64) @ v.to_bits().astype(np.int64)) % 2
        return Gf2Vector.from_bits(bits.reshape(self.n_rows))

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        return mul(self, other)

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape} matrices")
        return Gf2Matrix(self.n_rows, self.n_cols, self._words ^ other._words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self.n_rows, self.n_cols, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.n_rows}x{self.n_cols}, ones={len(self.nonzero_entries())})"


def _echelon_stack(w: np.ndarray, n_cols: int) -> Tuple[np.ndarray, np.ndarray]:
    """Row-reduce a stack of packed matrices of shape (batch, rows, words) in place.

    Returns the reduced stack and a (batch, n_cols) mask of pivot columns.
    """
    batch, n_rows, _ = w.shape
    pivot = np.zeros((batch, n_cols), dtype=bool)
    r = np.zeros(batch, dtype=np.intp)
    row_ids = np.arange(n_rows)
    for col in range(n_cols):
        if (r == n_rows).all():
            break
        word, bit = divmod(col, WORD_BITS)
        shift = np.uint64(bit)
        candidates = (((w[:, :, word] >> shift) & _ONE) != 0) & (row_ids >= r[:, None])
        found = np.flatnonzero(candidates.any(axis=1))
        if found.size == 0:
            continue
        top_row = r[found]
        p = candidates[found].argmax(axis=1)
        pivot_rows = w[found, p].copy()
        w[found, p] = w[found, top_row]
        w[found, top_row] = pivot_rows
        hits = ((w[found, :, word] >> shift) & _ONE) != 0
        hits[np.arange(found.size), top_row] = False
        w[found] ^= np.where(hits[:, :, None], pivot_rows[:, None, :], np.uint64(0))
        pivot[found, col] = True
        r[found] += 1
    return w, pivot


def row_echelon(m: Gf2Matrix) -> Tuple[Gf2Matrix, List[int]]:
    """Reduced row echelon form of m and its pivot columns.

    Pivots are chosen as the first nonzero entry scanning columns left to right
    and, within a column, rows top to bottom.
    """
    w, pivot = _echelon_stack(np.array(m.words, copy=True)[None], m.n_cols)
    return Gf2Matrix(m.n_rows, m.n_cols, w[0]), np.flatnonzero(pivot[0]).tolist()


def rank(m: Gf2Matrix) -> int:
    """GF(2) rank of m."""
    return len(row_echelon(m)[1])


def batch_rank(stack: np.ndarray) -> np.ndarray:
    """Ranks of a (batch, rows, cols) array of 0/1 matrices, reduced together."""
    stack = np.asarray(stack)
    if stack.ndim != 3:
        raise ShapeError(f"expected a 3-D stack of matrices, got {stack.ndim} dimension(s)")
    _, pivot = _echelon_stack(_pack_bits(stack), stack.shape[2])
    return pivot.sum(axis=1)


def kernel_basis(m: Gf2Matrix) -> List[Gf2Vector]:
    """Basis of {v : m * v = 0}, one vector per free column in increasing order.

    The vector for free column f has a 1 at f, zeros at the other free
    columns, and at each pivot column p the entry of the reduced form in
    (row of p, f).
    """
    reduced, pivots = row_echelon(m)
    dense = reduced.to_dense()
    pivot_set = set(pivots)
    basis = []
    for free in range(m.n_cols):
        if free in pivot_set:
            continue
        bits = np.zeros(m.n_cols, dtype=np.uint8)
        bits[free] = 1
        for i, p in enumerate(pivots):
            bits[p] = dense[i, free]
        basis.append(Gf2Vector.from_bits(bits))
    return basis


def mul(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    """GF(2) matrix product a * b."""
    if a.n_cols != b.n_rows:
        raise ShapeError(f"cannot multiply {a.n_rows}x{a.n_cols} by {b.n_rows}x{b.n_cols}")
    out = np.zeros((a.n_rows, _n_words(b.n_cols)), dtype=np.uint64)
    selectors = a.to_dense().astype(bool)
    for i in range(a.n_rows):
        chosen = b.words[selectors[i]]
        if chosen.shape[0]:
            out[i] = np.bitwise_xor.reduce(chosen, axis=0)
    return Gf2Matrix(a.n_rows, b.n_cols, out)


def _check_lengths(v: Gf2Vector, basis: Sequence[Gf2Vector]) -> None:
    for b in basis:
        if b.length != v.length:
            raise ShapeError(f"basis vector of length {b.length} against vector of length {v.length}")


def in_span(v: Gf2Vector, basis: Sequence[Gf2Vector]) -> bool:
    """True iff v is a GF(2) combination of the basis vectors."""
    _check_lengths(v, basis)
    if v.is_zero():
        return True
    if not basis:
        return False
    stacked = Gf2Matrix.stack_rows(list(basis), v.length)
    return rank(Gf2Matrix.stack_rows(list(basis) + [v], v.length)) == rank(stacked)


def is_independent(vectors: Sequence[Gf2Vector], length: Optional[int] = None) -> bool:
    if not vectors:
        return True
    return rank(Gf2Matrix.stack_rows(list(vectors), length)) == len(vectors)


def coordinates(v: Gf2Vector, basis: Sequence[Gf2Vector]) -> Optional[List[int]]:
    """Indices of basis vectors summing to v, or None if v is outside the span.

    Free variables are set to zero, so the answer is unique for an
    independent basis.
    """
    _check_lengths(v, basis)
    k = len(basis)
    augmented = Gf2Matrix.stack_columns(list(basis) + [v], v.length)
    reduced, pivots = row_echelon(augmented)
    if k in pivots:
        return None
    dense = reduced.to_dense()
    return sorted(p for i, p in enumerate(pivots) if dense[i, k])
