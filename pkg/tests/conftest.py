# -*- coding: utf-8 -*-
from __future__ import annotations

import shutil
from pathlib import Path

import pytest

from ccdesign.catalog import Catalog

SHIPPED_WITNESSES = Path(__file__).resolve().parent.parent / 'witnesses'


@pytest.fixture
def witness_dir(tmp_path, monkeypatch) -> Path:
    """Empty witness directory, also exported through CCDESIGN_WITNESS_DIR."""
    d = tmp_path / 'witnesses'
    d.mkdir()
    monkeypatch.setenv('CCDESIGN_WITNESS_DIR', str(d))
    return d


@pytest.fixture
def shipped_dir(tmp_path, monkeypatch) -> Path:
    """Copy of the shipped witnesses, so tests may register into it."""
    d = tmp_path / 'shipped'
    shutil.copytree(SHIPPED_WITNESSES, d)
    monkeypatch.setenv('CCDESIGN_WITNESS_DIR', str(d))
    return d


@pytest.fixture
def empty_catalog(witness_dir) -> Catalog:
    return Catalog(witness_dir)


@pytest.fixture(scope='session')
def shipped_catalog() -> Catalog:
    return Catalog(SHIPPED_WITNESSES)
