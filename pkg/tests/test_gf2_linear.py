import itertools

import numpy as np
import pytest

from equilevel.errors import ShapeError
from equilevel.gf2_linear import (Gf2Matrix, Gf2Vector, batch_rank, coordinates, in_span, is_independent,
                                  kernel_basis, mul, rank, row_echelon)
from tests.oracles import (brute_kernel, brute_rank, kernel_dimension, matrix_rows, rows_to_dense,
                           span_rank)


def test_rank_examples():
    assert rank(Gf2Matrix.zeros(0, 0)) == 0
    assert rank(Gf2Matrix.identity(3)) == 3
    assert rank(Gf2Matrix.from_dense([[1, 1], [1, 1]])) == 1


def test_kernel_examples():
    assert kernel_basis(Gf2Matrix.identity(2)) == []
    assert kernel_basis(Gf2Matrix.from_dense([[1, 1]])) == [Gf2Vector.from_bits([1, 1])]


def test_mul_examples():
    eye = Gf2Matrix.identity(4)
    assert mul(eye, eye) == eye
    row = Gf2Matrix.from_dense([[1, 1]])
    col = Gf2Matrix.from_dense([[1], [1]])
    assert mul(row, col) == Gf2Matrix.zeros(1, 1)
    with pytest.raises(ShapeError):
        mul(row, row)


def test_in_span_examples():
    assert in_span(Gf2Vector.zeros(3), [])
    assert not in_span(Gf2Vector.from_bits([1, 0]), [Gf2Vector.from_bits([0, 1])])
    assert in_span(Gf2Vector.from_bits([1, 1]), [Gf2Vector.from_bits([1, 0]), Gf2Vector.from_bits([0, 1])])
    with pytest.raises(ShapeError):
        in_span(Gf2Vector.zeros(2), [Gf2Vector.zeros(3)])


def test_from_entries_is_order_independent_and_xor_accumulates():
    entries = [(0, 1, 1), (1, 0, 1), (0, 1, 1), (1, 2, 1)]
    forward = Gf2Matrix.from_entries(2, 3, entries)
    backward = Gf2Matrix.from_entries(2, 3, list(reversed(entries)))
    assert forward == backward
    assert forward.to_dense().tolist() == [[0, 0, 0], [1, 0, 1]]


def test_storage_past_last_column_is_zero():
    m = Gf2Matrix(2, 3, np.full((2, 1), 0xFF, dtype=np.uint64))
    assert int(m.words[0, 0]) == 0b111
    v = Gf2Vector(70, np.full(2, 0xFFFFFFFFFFFFFFFF, dtype=np.uint64))
    assert v.weight() == 70


def test_wide_matrices_cross_word_boundaries():
    dense = np.zeros((3, 130), dtype=np.uint8)
    dense[0, 0] = dense[1, 64] = dense[2, 129] = 1
    dense[2, 64] = 1
    m = Gf2Matrix.from_dense(dense)
    assert rank(m) == 3
    assert m.get(2, 129) == 1 and m.get(1, 63) == 0
    assert len(kernel_basis(m)) == 127
    assert (m.transpose().to_dense() == dense.T).all()


def test_degenerate_shapes():
    for shape in [(0, 4), (4, 0), (0, 0)]:
        m = Gf2Matrix.zeros(*shape)
        assert rank(m) == 0
        assert len(kernel_basis(m)) == shape[1]
    assert mul(Gf2Matrix.zeros(2, 0), Gf2Matrix.zeros(0, 3)) == Gf2Matrix.zeros(2, 3)


def test_row_echelon_pivots_are_deterministic():
    m = Gf2Matrix.from_dense([[0, 1, 1], [1, 1, 0], [1, 0, 1]])
    reduced, pivots = row_echelon(m)
    assert pivots == [0, 1]
    assert reduced.to_dense().tolist() == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]
    assert kernel_basis(m) == [Gf2Vector.from_bits([1, 1, 1])]


def test_all_small_matrices_against_oracle():
    for n_rows, n_cols in itertools.product(range(4), repeat=2):
        for bits in itertools.product((0, 1), repeat=n_rows * n_cols):
            dense = np.array(bits, dtype=np.uint8).reshape(n_rows, n_cols)
            m = Gf2Matrix.from_dense(dense)
            assert rank(m) == brute_rank(dense)
            assert len(kernel_basis(m)) == len(brute_kernel(dense)).bit_length() - 1


SWEEP_CHUNK = 1 << 18


def test_every_matrix_up_to_5x5_against_oracle():
    for n_rows, n_cols in itertools.product(range(1, 6), repeat=2):
        total = 1 << (n_rows * n_cols)
        for start in range(0, total, SWEEP_CHUNK):
            rows = matrix_rows(n_rows, n_cols, start, min(start + SWEEP_CHUNK, total))
            ranks = batch_rank(rows_to_dense(rows, n_cols))
            assert (ranks == span_rank(rows, n_cols)).all(), (n_rows, n_cols, start)
            assert (n_cols - ranks == kernel_dimension(rows, n_cols)).all(), (n_rows, n_cols, start)


def test_batch_rank_matches_single_matrix_rank(rng):
    stack = (rng.random((40, 6, 70)) < 0.3).astype(np.uint8)
    stack[::5, 3] = stack[::5, 1] ^ stack[::5, 2]
    ranks = batch_rank(stack)
    assert ranks.tolist() == [rank(Gf2Matrix.from_dense(m)) for m in stack]
    assert all(ranks[::5] <= 5)
    with pytest.raises(ShapeError):
        batch_rank(stack[0])


def test_random_8x8_properties(rng):
    for _ in range(200):
        dense = (rng.random((8, 8)) < rng.uniform(0.1, 0.9)).astype(np.uint8)
        m = Gf2Matrix.from_dense(dense)
        r = rank(m)
        assert r == brute_rank(dense)
        assert r == rank(m.transpose())

        rows, cols = rng.permutation(8), rng.permutation(8)
        assert rank(m.select(rows, cols)) == r

        basis = kernel_basis(m)
        assert len(basis) == 8 - r
        assert all(m.apply(v).is_zero() for v in basis)
        assert is_independent(basis, 8)


def test_coordinates_recover_combination():
    basis = [Gf2Vector.from_bits(b) for b in np.eye(6, dtype=np.uint8)[:4]]
    target = basis[0] + basis[2] + basis[3]
    assert coordinates(target, basis) == [0, 2, 3]
    assert coordinates(Gf2Vector.from_bits([0, 0, 0, 0, 0, 1]), basis) is None
    assert coordinates(Gf2Vector.zeros(6), basis) == []


def test_vector_arithmetic():
    a = Gf2Vector.from_indices(5, [0, 2, 2, 4])
    assert a.indices() == [0, 4]
    b = Gf2Vector.from_bits([1, 1, 0, 0, 1])
    assert (a + b).indices() == [1]
    assert a.dot(b) == 0
    assert a[4] == 1 and a[3] == 0
    with pytest.raises(ShapeError):
        a + Gf2Vector.zeros(4)


def test_cd3_boundary_ranks(cd3):
    assert cd3.boundary_matrix(2).shape == (7, 29)
    assert [rank(cd3.boundary_matrix(d)) for d in range(1, 7)] == [0, 6, 21, 44, 41, 15]
    assert len(kernel_basis(cd3.boundary_matrix(2))) == 23
    assert len(kernel_basis(cd3.boundary_matrix(3))) == 46
    assert mul(cd3.boundary_matrix(2), cd3.boundary_matrix(3)) == Gf2Matrix.zeros(7, 67)


def test_homology_generator_is_not_a_boundary(cd3):
    chain = cd3.chain(3, ["bar_h_p", "bar_h_m"])
    assert not in_span(cd3.chain_vector(chain), cd3.boundary_matrix(4).columns())
