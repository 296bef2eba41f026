# -*- coding: utf-8 -*-
import shutil
from itertools import combinations
from pathlib import Path

import pytest

from ccdesign import bounds
from ccdesign.catalog import Catalog
from ccdesign.construct import (
    CC12_TRIPLES,
    VARIANT_NINE_MINUS_VERTEX,
    VARIANT_TURAN_PLUS_CONNECTOR,
    KostochkaLayout,
    assemble_cc12_3,
    construct_cc_n3,
    construct_gordon,
    construct_kostochka,
    construct_mantel_dual,
    construct_N,
    construct_r2,
    construct_turan,
    extend_by_recursion,
    kostochka_first_system_9,
    mantel_turan,
    plan_N,
    r2_triangle_sequence,
    trivial_cases,
)
from ccdesign.core import Block, CoverParams, DesignFamily, ParamError
from ccdesign.designfile import read_design
from ccdesign.solver import SearchConfig
from ccdesign.verify import is_covering, verify_connected_covering, verify_connected_turan, verify_family

SHIPPED_WITNESSES = Path(__file__).resolve().parent.parent / 'witnesses'


def _ok(fam: DesignFamily) -> bool:
    return verify_family(fam).ok


# ------------------------- trivial / r = 2 -------------------------
@pytest.mark.parametrize('n', range(2, 11))
def test_trivial_cases(n):
    for r in sorted({0, 1, n - 2, n - 1}):
        if not 0 <= r <= n - 1:
            continue
        fam = trivial_cases(n, r)
        assert fam.params == CoverParams(n, r + 1, r)
        assert _ok(fam)
        assert len(fam) == bounds.closed_form_cc(n, r)[1].value


def test_trivial_cases_refuses_middle_r():
    with pytest.raises(ParamError):
        trivial_cases(6, 3)


def test_r2_sizes():
    for n in range(3, 61):
        fam = construct_r2(n)
        assert len(fam) == bounds.r2_closed_form(n)
        assert _ok(fam)


def test_r2_each_triangle_adds_two_edges():
    for n in range(4, 30):
        seq = r2_triangle_sequence(n)
        covered = set()
        for i, tri in enumerate(seq):
            edges = {frozenset(e) for e in combinations(tri, 2)}
            new = edges - covered
            if i:
                assert edges & covered, (n, tri)
                assert len(new) == 2 or (i == len(seq) - 1 and len(new) == 1), (n, i, tri)
            covered |= edges
        assert len(covered) == n * (n - 1) // 2


# ------------------------- recursive coverings -------------------------
def test_gordon_sizes():
    for t in range(0, 5):
        for v in range(t + 1, 13):
            fam = construct_gordon(v, t)
            assert len(fam) == bounds.gordon_size(v, t)
            assert is_covering(fam.params, fam)[0]


def test_extend_by_recursion():
    prev = construct_r2(6)
    sub = DesignFamily.covering(6, 2, 1, [(1, 2), (3, 4), (5, 6)])
    fam = extend_by_recursion(prev, sub)
    assert fam.params == CoverParams(7, 3, 2)
    assert len(fam) == len(prev) + len(sub) == 10
    assert Block.of(1, 2, 7) in fam.blocks
    with pytest.raises(ParamError):
        extend_by_recursion(prev, DesignFamily.covering(6, 3, 2, [(1, 2, 3)]))


def test_cc12_triples_cover_pairs():
    fam = DesignFamily.covering(11, 3, 2, CC12_TRIPLES)
    assert len(fam) == bounds.fort_hedlund(11)
    assert is_covering(fam.params, fam) == (True, None)


def test_assemble_needs_55_blocks():
    with pytest.raises(ParamError):
        assemble_cc12_3(construct_r2(7))


# ------------------------- N(n,r) -------------------------
def test_n_7_4_blocks():
    fam = construct_N(7, 4)
    got = {b.elements for b in fam}
    expected = {(1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 4, 7), (1, 2, 4, 5, 6)}
    expected |= {p + (5, 6, 7) for p in combinations(range(1, 5), 2)}
    assert got == expected
    assert len(fam) == bounds.upper_n(7, 4) == 10


def test_n_layer_sizes():
    plan = plan_N(7, 4)
    assert plan.case == 'odd'
    assert plan.layer_sizes() == [3, 6]
    assert [b.elements for b in plan.connectors] == [(1, 2, 4, 5, 6)]
    plan = plan_N(8, 4)
    assert plan.case == 'even'
    assert plan.layer_sizes() == [4, 12, bounds.gordon_size(6, 2)]
    assert len(plan.connectors) == 1


def test_n_with_better_sub_covering():
    sub = read_design(SHIPPED_WITNESSES / 'C-n6-k3-r2.design').family
    fam = construct_N(8, 4, sub)
    assert len(fam) == bounds.upper_n(8, 4, c_sub=6) == 23
    with pytest.raises(ParamError):
        construct_N(8, 4, construct_r2(7))


def test_n_sweep():
    for r in range(2, 13):
        for n in range(r + 2, 17):
            fam = construct_N(n, r)
            c_sub = bounds.gordon_size(n - 2, r - 2) if (n - r) % 2 == 0 else None
            assert len(fam) == bounds.upper_n(n, r, c_sub), (n, r)
            assert verify_connected_covering(fam.params, fam).ok, (n, r)


# ------------------------- r = n-3 -------------------------
def test_mantel():
    for n in range(4, 61):
        fam = construct_mantel_dual(n)
        assert fam.params == CoverParams(n, n - 2, n - 3)
        assert len(fam) == bounds.mantel_cc(n)
    assert verify_connected_turan(mantel_turan(9).params, mantel_turan(9)).ok


# ------------------------- r = n-4 -------------------------
def test_turan_construction_sizes():
    for n in range(4, 16):
        fam = construct_turan(n)
        assert len(fam) == bounds.kostochka_formula(n)
        assert verify_connected_turan(fam.params, fam).is_valid_design


def test_first_nine_system_is_disconnected():
    fam = kostochka_first_system_9()
    assert len(fam) == 30
    report = verify_connected_turan(fam.params, fam)
    assert report.is_valid_design
    assert not report.is_connected


def test_kostochka_small():
    res = construct_kostochka(8)
    assert len(res.turan) == 21
    assert res.optimality_open
    assert res.variant == VARIANT_NINE_MINUS_VERTEX
    res = construct_kostochka(9)
    assert len(res.turan) == 31
    assert res.variant == VARIANT_TURAN_PLUS_CONNECTOR
    assert not res.optimality_open
    assert res.covering.params == CoverParams(9, 6, 5)


@pytest.mark.parametrize('n', list(range(10, 19)) + [21])
def test_kostochka_sizes(n):
    res = construct_kostochka(n)
    assert len(res.turan) == len(res.covering) == bounds.kostochka_cc_upper(n)
    assert verify_connected_covering(res.covering.params, res.covering).ok


@pytest.mark.slow
def test_kostochka_large():
    for n in range(19, 31):
        assert len(construct_kostochka(n).covering) == bounds.kostochka_formula(n)


def test_kostochka_layout_checks():
    lay = KostochkaLayout.for_n(12)
    assert lay.x(0) == 1 and lay.y(0) == 2
    assert lay.B(1) == (7, 8)
    assert lay.A(4) == lay.A(1)
    with pytest.raises(ParamError):
        KostochkaLayout.for_n(10)
    with pytest.raises(ParamError):
        KostochkaLayout(((1, 2), (3, 4), (5, 6, 7)))
    with pytest.raises(ParamError):
        construct_kostochka(7)


# ------------------------- CC(n,3) -------------------------
def test_cc_n3_small(witness_dir):
    cat = Catalog(witness_dir)
    sizes = {n: len(construct_cc_n3(n, cat)) for n in (4, 5, 6)}
    assert sizes == {4: 1, 5: 4, 6: 7}
    assert (6, 4, 3, True) in cat.witness_keys()
    # the stored witness is reused
    assert construct_cc_n3(6, cat) == cat.best_witness(6, 4, 3, connected=True)
    with pytest.raises(ParamError):
        construct_cc_n3(13, cat)


@pytest.mark.slow
def test_cc_n3_eight(witness_dir):
    cat = Catalog(witness_dir)
    fam = construct_cc_n3(8, cat, SearchConfig(seed=3, budget=400_000))
    assert len(fam) == 19
    assert verify_connected_covering(fam.params, fam).ok
    assert len(cat.best_witness(7, 4, 3, connected=True)) == 12


def test_assemble_cc12_from_shipped_eleven():
    cc11 = read_design(SHIPPED_WITNESSES / 'CC-n11-k4-r3.design').family
    fam = assemble_cc12_3(cc11)
    assert len(fam) == 73 == bounds.cc1_lower(12, 3)[1]
    assert verify_connected_covering(fam.params, fam).ok
    old = [b for b in fam.blocks if 12 not in b.elements]
    assert len(old) == 54
    assert set(old) < set(cc11.blocks)
    assert sorted(b.elements[:3] for b in fam.blocks if 12 in b.elements) == sorted(CC12_TRIPLES)


def test_cc_n3_rebuilds_ten_and_twelve(witness_dir):
    for name in ('CC-n9-k4-r3.design', 'C-n9-k3-r2.design', 'CC-n11-k4-r3.design'):
        shutil.copy(SHIPPED_WITNESSES / name, witness_dir / name)
    cat = Catalog(witness_dir)
    config = SearchConfig(seed=1)
    for n, size in ((9, 28), (10, 40), (11, 55), (12, 73)):
        fam = construct_cc_n3(n, cat, config)
        assert len(fam) == size, n
        assert verify_connected_covering(fam.params, fam).ok, n
        assert cat.connected_covering_number(n, 3).is_exact
    assert (witness_dir / 'CC-n10-k4-r3.design').exists()
    assert (witness_dir / 'CC-n12-k4-r3.design').exists()
