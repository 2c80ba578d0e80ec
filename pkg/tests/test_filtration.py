import pytest

from equilevel.chain_complex import Cell, ChainComplex, betti, relative_betti
from equilevel.chc_format import parse_chc
from equilevel.config_manager import MultiplicityTable
from equilevel.errors import ClassificationError, FiltrationError
from equilevel.filtration import (build_filtration, e1_page, monotonicity_violations, multiplicity_filtration,
                                  multiplicity_key, type_filtration, type_key, type_subcomplex_check)

TABLE = MultiplicityTable("T", {"pt": 3, "edge": 4}, {3: 0, 4: 1})


def mixed_types():
    cells = [Cell("a", 0, type_tag="first"), Cell("e", 1, type_tag="second")]
    return ChainComplex.from_boundary_lists("M", cells, {"e": ["a"]})


def test_multiplicity_key_examples(cd2, cd3, config):
    table3 = config.multiplicity_table("CD3")
    assert multiplicity_key(cd3.cell("bar_d"), table3) == 0
    assert multiplicity_key(cd3.cell("A_11"), table3) == 2
    assert multiplicity_key(cd3.cell("U_12"), table3) == 1
    assert multiplicity_key(cd2.cell("q3_4"), config.multiplicity_table("CD2")) == 0
    assert multiplicity_key(cd2.cell("q2_9"), config.multiplicity_table("CD2")) == 1


def test_multiplicity_key_rejects_contradicting_tag():
    x = parse_chc("complex T\ndim 0\ncell a dim=0 class=pt mult=5\n")
    with pytest.raises(ClassificationError):
        multiplicity_key(x.cell("a"), TABLE)
    with pytest.raises(ClassificationError):
        multiplicity_key(Cell("b", 0, class_tag="unknown"), TABLE)


def test_multiplicity_is_monotone(cd2, cd3, config):
    for x in (cd2, cd3):
        f = multiplicity_filtration(x, config=config)
        assert monotonicity_violations(x, lambda cell: f.level_of[cell.name]) == []
    assert multiplicity_filtration(cd3, config=config).levels == (0, 1, 2)


def test_non_monotone_key_is_rejected():
    x = ChainComplex.from_boundary_lists("I", [Cell("a", 0), Cell("e", 1)], {"e": ["a"]})
    levels = {"a": 1, "e": 0}
    with pytest.raises(FiltrationError) as info:
        build_filtration(x, lambda cell: levels[cell.name])
    assert (info.value.cell, info.value.boundary_cell) == ("e", "a")


def test_psi_levels_of_cd3(cd3, config):
    f = multiplicity_filtration(cd3, config=config)
    psi0 = f.psi(0)
    assert [psi0.n_cells(d) for d in range(5)] == [1, 4, 6, 4, 1]
    assert betti(psi0).betti == [1, 1, 0, 0, 0, 0, 0]
    assert len(f.psi(2)) == len(cd3)
    assert len(f.cells_at(0)) + len(f.cells_at(1)) + len(f.cells_at(2)) == len(cd3)


def test_e1_page_of_cd3(cd3, config):
    page = e1_page(multiplicity_filtration(cd3, config=config))
    assert page.nonzero() == {(0, 0): 1, (0, 1): 1, (2, 0): 2, (2, 1): 2}
    assert page.column(1) == [0] * 7
    assert page[(2, 0)] == 2 and page[(5, 5)] == 0
    assert page.euler_characteristic == page.base_euler == 0
    assert page.euler_consistent


def test_e1_page_parallel_matches_sequential(cd3, config):
    f = multiplicity_filtration(cd3, config=config)
    assert e1_page(f, workers=3) == e1_page(f)


def test_e1_columns_of_cd2(cd2, config):
    f = multiplicity_filtration(cd2, config=config)
    page = e1_page(f)
    assert page.column(0) == [1, 1, 0, 0, 0]
    assert page.column(1) == [0, 1, 2, 1, 0]
    assert page.column(1) == relative_betti(cd2, lambda cell: f.level_of[cell.name] == 0).betti
    assert page.euler_consistent


def test_type_filtration(cd1, cd2, cd3):
    for x in (cd1, cd2, cd3):
        assert type_subcomplex_check(x)
        assert type_filtration(x).levels == (0, 1)
    assert len(type_filtration(cd3).psi(0)) == 130
    assert type_key(cd3.cell("bar_d")) == 0 and type_key(cd3.cell("A_11")) == 1


def test_type_check_fails_when_second_type_cells_are_not_closed():
    x = mixed_types()
    assert not type_subcomplex_check(x)
    with pytest.raises(FiltrationError):
        type_filtration(x)


def test_single_level_filtration_reproduces_betti(cd2):
    page = e1_page(build_filtration(cd2, lambda cell: 0, "flat"))
    assert page.column(0) == betti(cd2).betti
