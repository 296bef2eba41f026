# -*- coding: utf-8 -*-
from itertools import combinations
from pathlib import Path

import pytest

from ccdesign import bounds
from ccdesign.catalog import (
    TAG_CLOSED,
    TAG_EMBEDDED,
    TAG_STEP,
    WITNESS_PREFIX,
    Catalog,
    witness_filename,
)
from ccdesign.construct import construct_r2
from ccdesign.core import CoverParams, DesignFamily, ParamError, VerificationError
from ccdesign.designfile import read_design
from ccdesign.verify import is_covering, verify_connected_covering

SHIPPED_WITNESSES = Path(__file__).resolve().parent.parent / 'witnesses'
FANO = [(1, 2, 4), (1, 3, 7), (1, 5, 6), (2, 3, 5), (2, 6, 7), (3, 4, 6), (4, 5, 7)]


def test_closed_form_covering_numbers():
    cat = Catalog(None)
    e = cat.covering_number(7, 3, 2)
    assert e.is_exact and e.value == 7
    assert TAG_CLOSED in e.lower_tags
    assert cat.covering_number(10, 4, 1).value == 3
    assert cat.covering_number(6, 4, 3).value == 6
    assert cat.turan_number(7, 3, 2).value == 9


def test_turan_number_rejects_bad_params():
    with pytest.raises(ParamError):
        Catalog(None).turan_number(5, 2, 3)


def test_connected_values():
    cat = Catalog(None)
    assert cat.connected_covering_number(7, 3).value == 12
    e = cat.connected_covering_number(8, 4)
    assert (e.lower, e.upper) == (20, 21)
    assert e.status == 'interval'
    e = cat.connected_covering_number(14, 10)
    assert (e.lower, e.upper) == (143, 144)
    assert 'C:' + TAG_STEP in e.lower_tags
    assert cat.cc_lower(14, 9) == 259
    assert cat.connected_covering_number(6, 0).value == 1
    assert cat.connected_covering_number(9, 2).value == 18


def test_embedded_lower_bounds_feed_cc():
    cat = Catalog(None)
    e = cat.connected_covering_number(11, 5)
    assert e.lower == 96
    assert 'C:' + TAG_EMBEDDED in e.lower_tags
    assert Catalog.embedded_lower(14, 9, 8) == 419
    assert len(Catalog.embedded_table()) == 7


def test_describe_and_json():
    e = Catalog(None).connected_covering_number(8, 4)
    assert e.label == 'CC(8,5,4)'
    assert 'in [20, 21]' in e.describe()
    doc = e.to_json()
    assert doc['connected'] is True and doc['upper'] == 21


def test_register_keeps_smallest(empty_catalog, witness_dir):
    everything = DesignFamily.covering(5, 3, 2, combinations(range(1, 6), 3))
    entry = empty_catalog.register_witness(everything, connected_required=True)
    assert entry.value == 5
    name = witness_filename(5, 3, 2, True)
    assert (witness_dir / name).exists()
    assert len(empty_catalog.best_witness(5, 3, 2, connected=True)) == 10

    empty_catalog.register_witness(construct_r2(5), connected_required=True)
    assert len(empty_catalog.best_witness(5, 3, 2, connected=True)) == 5
    e = empty_catalog.connected_covering_number(5, 2)
    assert WITNESS_PREFIX + name in e.upper_tags

    # a larger family never replaces the stored one
    empty_catalog.register_witness(everything, connected_required=True)
    assert len(empty_catalog.best_witness(5, 3, 2)) == 5

    rows = empty_catalog.history()
    assert [r['size'] for r in rows] == [10, 5]
    assert rows[0]['key'] == 'CC-n5-k3-r2'
    assert len(rows[1]['sha256']) == 64


def test_register_rejects_invalid(empty_catalog):
    fano = DesignFamily.covering(7, 3, 2, FANO)
    with pytest.raises(VerificationError):
        empty_catalog.register_witness(fano, connected_required=True)
    with pytest.raises(VerificationError):
        empty_catalog.register_witness(fano.with_blocks(fano.blocks[1:]), connected_required=False)
    entry = empty_catalog.register_witness(fano, connected_required=False)
    assert entry.value == 7
    assert empty_catalog.best_witness(7, 3, 2, connected=True) is None


def test_reload_reverifies(witness_dir):
    cat = Catalog(witness_dir)
    cat.register_witness(construct_r2(6), connected_required=True)
    (witness_dir / 'junk.design').write_text('not a design\n', encoding='utf-8')
    # a connected header on a disconnected family is refused
    fano = '7 3 2 covering connected\n' + ''.join(' '.join(map(str, b)) + '\n' for b in FANO)
    (witness_dir / 'fake.design').write_text(fano, encoding='utf-8')
    fresh = Catalog(witness_dir)
    assert fresh.witness_keys() == [(6, 3, 2, True)]
    assert fresh.reload() == 1
    assert len(fresh.history()) == 1


def test_missing_dir_is_empty(tmp_path):
    cat = Catalog(tmp_path / 'absent')
    assert cat.witness_keys() == []
    assert cat.history() == []


def test_shipped_witnesses_load(shipped_catalog):
    keys = shipped_catalog.witness_keys()
    assert (7, 3, 2, False) in keys
    assert (8, 4, 3, False) in keys
    e = shipped_catalog.covering_number(8, 4, 3)
    assert e.value == 14
    assert any(t.startswith(WITNESS_PREFIX) for t in e.upper_tags)
    assert shipped_catalog.covering_number(9, 3, 2).value == 12


SHIPPED_SIZES = {
    (9, 4, 3): 25, (10, 4, 3): 30, (11, 4, 3): 47, (12, 4, 3): 57, (13, 4, 3): 78,
    (9, 5, 4): 30, (11, 5, 4): 66, (12, 5, 4): 113, (13, 5, 4): 157,
    (10, 6, 5): 50, (11, 6, 5): 100, (12, 6, 5): 132, (13, 6, 5): 245,
    (11, 7, 6): 84, (12, 7, 6): 176, (12, 8, 7): 126, (13, 9, 8): 185,
}


@pytest.mark.parametrize('n,size', [(9, 28), (10, 40), (11, 55), (12, 73)])
def test_shipped_cc3_witnesses_reverify(n, size, shipped_catalog):
    doc = read_design(SHIPPED_WITNESSES / witness_filename(n, 4, 3, True))
    assert doc.connected
    fam = doc.family
    assert len(fam) == size == bounds.cc1_lower(n, 3)[1]
    report = verify_connected_covering(fam.params, fam)
    assert report.ok, report
    entry = shipped_catalog.connected_covering_number(n, 3)
    assert entry.is_exact and entry.value == size


@pytest.mark.parametrize('key', sorted(SHIPPED_SIZES))
def test_shipped_c_witnesses_reverify(key, shipped_catalog):
    n, k, r = key
    fam = read_design(SHIPPED_WITNESSES / witness_filename(n, k, r, False)).family
    assert fam.params == CoverParams(n, k, r)
    assert len(fam) == SHIPPED_SIZES[key]
    assert is_covering(fam.params, fam) == (True, None)
    assert shipped_catalog.covering_upper(n, k, r) == SHIPPED_SIZES[key]


def test_every_shipped_file_is_accepted(shipped_catalog):
    files = sorted(SHIPPED_WITNESSES.glob('*.design'))
    assert len(shipped_catalog.witness_keys()) == len(files)
