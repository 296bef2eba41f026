# -*- coding: utf-8 -*-
"""ccdesign：连通覆盖设计工具箱（构造、校验、上下界、搜索、表格重现）"""

from __future__ import annotations

__version__ = '1.0.0'

from .core import (  # noqa: E402
    Block,
    CoverParams,
    DesignError,
    DesignFamily,
    DesignFileError,
    ParamError,
    SearchError,
    TuranParams,
    VerificationError,
    binom,
)
from .verify import VerifyReport, dualize, verify_connected_covering, verify_connected_turan  # noqa: E402

__all__ = [
    '__version__',
    'Block',
    'CoverParams',
    'DesignError',
    'DesignFamily',
    'DesignFileError',
    'ParamError',
    'SearchError',
    'TuranParams',
    'VerificationError',
    'VerifyReport',
    'binom',
    'dualize',
    'verify_connected_covering',
    'verify_connected_turan',
]
