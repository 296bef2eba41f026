# -*- coding: utf-8 -*-
import json

import pytest

from ccdesign.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from ccdesign.core import DesignFamily
from ccdesign.designfile import read_design, serialize_design
from ccdesign.verify import dualize

FANO = [(1, 2, 4), (1, 3, 7), (1, 5, 6), (2, 3, 5), (2, 6, 7), (3, 4, 6), (4, 5, 7)]


def _run(witness_dir, *argv) -> int:
    return main(['--witness-dir', str(witness_dir), *argv])


@pytest.fixture
def fano_file(tmp_path):
    path = tmp_path / 'fano.design'
    path.write_text(serialize_design(DesignFamily.covering(7, 3, 2, FANO)), encoding='utf-8')
    return path


def test_bounds_text(witness_dir, capsys):
    assert _run(witness_dir, 'bounds', '--n', '7', '--r', '3') == EXIT_OK
    out = capsys.readouterr().out
    assert 'Bounds for CC(7,3)' in out
    assert 'exact: 12' in out


def test_bounds_json(witness_dir, capsys):
    assert _run(witness_dir, 'bounds', '--n', '8', '--r', '4', '--format', 'json') == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc['upper_n']['value'] == 23
    assert doc['catalog']['lower'] == 20
    assert doc['catalog']['upper'] == 21


def test_bounds_chinese(witness_dir, capsys):
    assert _run(witness_dir, '--lang', 'zh', 'bounds', '--n', '7', '--r', '3') == EXIT_OK
    assert '精确值' in capsys.readouterr().out


def test_bounds_bad_params(witness_dir, capsys):
    assert _run(witness_dir, 'bounds', '--n', '3', '--r', '5') == EXIT_USAGE
    assert 'invalid parameters' in capsys.readouterr().err


def test_construct_to_file_then_verify(witness_dir, tmp_path, capsys):
    out = tmp_path / 'r2.design'
    assert _run(witness_dir, 'construct', '--method', 'r2', '--n', '7', '--out', str(out)) == EXIT_OK
    doc = read_design(out)
    assert len(doc.family) == 10
    assert doc.connected
    assert _run(witness_dir, 'verify', str(out), '--spot-check', '50') == EXIT_OK
    text = capsys.readouterr().out
    assert 'block graph: connected' in text
    assert 'spot check: 50 random subsets covered' in text


def test_construct_registers_without_out(witness_dir, capsys):
    assert _run(witness_dir, 'construct', '--method', 'mantel', '--n', '6') == EXIT_OK
    assert (witness_dir / 'CC-n6-k4-r3.design').exists()
    assert (witness_dir / 'CT-n6-m3-p2.design').exists()
    assert _run(witness_dir, 'catalog', 'list') == EXIT_OK
    assert 'CC(6,4,3) = 7' in capsys.readouterr().out
    assert _run(witness_dir, 'catalog', 'history', '--format', 'json') == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert [r['key'] for r in rows] == ['CC-n6-k4-r3']


def test_construct_kostochka_eight(witness_dir, tmp_path, capsys):
    out = tmp_path / 'k8.design'
    assert _run(witness_dir, 'construct', '--method', 'kostochka', '--n', '8', '--out', str(out),
                '--turan-out', str(tmp_path / 't8.design')) == EXIT_OK
    assert 'optimality open' in capsys.readouterr().out
    assert len(read_design(out).family) == 21


def test_construct_missing_r(witness_dir, capsys):
    assert _run(witness_dir, 'construct', '--method', 'N', '--n', '7') == EXIT_USAGE


def test_construct_beyond_mask_limit(witness_dir, capsys):
    assert _run(witness_dir, 'construct', '--method', 'r2', '--n', '70') == EXIT_USAGE
    assert 'n <= 64' in capsys.readouterr().err


def test_verify_exit_codes(witness_dir, tmp_path, fano_file, capsys):
    assert _run(witness_dir, 'verify', str(fano_file)) == EXIT_OK
    assert 'block graph: 7 components' in capsys.readouterr().out

    short = tmp_path / 'short.design'
    short.write_text(serialize_design(DesignFamily.covering(7, 3, 2, FANO[1:])), encoding='utf-8')
    assert _run(witness_dir, 'verify', str(short)) == EXIT_FAIL
    assert 'first failing subset (1, 2)' in capsys.readouterr().out

    flagged = tmp_path / 'flagged.design'
    flagged.write_text(serialize_design(DesignFamily.covering(7, 3, 2, FANO), connected=True), encoding='utf-8')
    assert _run(witness_dir, 'verify', str(flagged)) == EXIT_FAIL

    broken = tmp_path / 'broken.design'
    broken.write_text('7 3 2 covering\n1 2\n', encoding='utf-8')
    assert _run(witness_dir, 'verify', str(broken)) == EXIT_USAGE
    assert 'line 2' in capsys.readouterr().err

    binary = tmp_path / 'binary.design'
    binary.write_bytes(b'7 3 2 covering\n\xff\n')
    assert _run(witness_dir, 'verify', str(binary)) == EXIT_USAGE
    assert 'not UTF-8' in capsys.readouterr().err


def test_verify_json(witness_dir, fano_file, capsys):
    assert _run(witness_dir, 'verify', str(fano_file), '--format', 'json') == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc['is_valid_design'] is True
    assert doc['component_count'] == 7
    assert doc['params'] == [7, 3, 2]


def test_table_with_shipped_witnesses(shipped_dir, capsys):
    assert _run(shipped_dir, 'table') == EXIT_OK
    out = capsys.readouterr().out
    assert 'mismatch 0' in out
    assert _run(shipped_dir, 'table', '--n-max', '6', '--format', 'csv') == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('n,r,lower')
    assert len(lines) == 22


def test_table_shape(witness_dir, capsys):
    assert _run(witness_dir, 'table', '--n-max', '6', '--shape') == EXIT_OK
    assert 'n=6: unimodal True, log-concave True' in capsys.readouterr().out


def test_search_refuses_target_below_bound(witness_dir, capsys):
    assert _run(witness_dir, 'search', '--n', '6', '--k', '3', '--r', '2', '--target', '5') == EXIT_FAIL
    assert 'refused' in capsys.readouterr().err
    assert not list(witness_dir.glob('*.design'))


def test_search_exhaustive(witness_dir, tmp_path, capsys):
    out = tmp_path / 'cc52.design'
    assert _run(witness_dir, 'search', '--n', '5', '--k', '3', '--r', '2', '--connected', '--exhaustive',
                '--out', str(out)) == EXIT_OK
    assert 'exact' in capsys.readouterr().out
    assert len(read_design(out).family) == 5


def test_dualize_twice_is_identity(witness_dir, tmp_path, fano_file, capsys):
    dual = tmp_path / 'dual.design'
    back = tmp_path / 'back.design'
    assert _run(witness_dir, 'dualize', str(fano_file), '--out', str(dual)) == EXIT_OK
    assert read_design(dual).family.kind == 'turan'
    assert _run(witness_dir, 'dualize', str(dual), '--out', str(back)) == EXIT_OK
    assert back.read_bytes() == fano_file.read_bytes()
    assert 'correspond under complementation' in capsys.readouterr().err


def test_dualize_to_stdout(witness_dir, fano_file, capsys):
    assert _run(witness_dir, 'dualize', str(fano_file)) == EXIT_OK
    expected = serialize_design(dualize(read_design(fano_file).family))
    assert capsys.readouterr().out == expected


def test_catalog_show(witness_dir, capsys):
    assert _run(witness_dir, 'catalog', 'show', '--n', '8', '--r', '4', '--connected') == EXIT_OK
    assert 'CC(8,5,4) in [20, 21]' in capsys.readouterr().out
    assert _run(witness_dir, 'catalog', 'show', '--n', '8') == EXIT_USAGE
    assert _run(witness_dir, 'catalog', 'list') == EXIT_OK
    assert 'no witnesses' in capsys.readouterr().out
    assert _run(witness_dir, 'catalog', 'history') == EXIT_OK
    assert 'ledger is empty' in capsys.readouterr().out


def test_usage_errors_exit_two(witness_dir):
    with pytest.raises(SystemExit) as info:
        _run(witness_dir, 'bounds', '--n', 'seven', '--r', '3')
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(['--version'])
    assert info.value.code == 0
