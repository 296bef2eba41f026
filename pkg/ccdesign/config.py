# -*- coding: utf-8 -*-
"""运行配置：全部来自环境变量，非法值回退默认值并记录警告"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

logger = logging.getLogger(__name__)

ENV_WITNESS_DIR = 'CCDESIGN_WITNESS_DIR'
ENV_LANG = 'CCDESIGN_LANG'
ENV_LOG_LEVEL = 'CCDESIGN_LOG_LEVEL'
ENV_WORKERS = 'CCDESIGN_WORKERS'

DEFAULT_WITNESS_DIR = Path('witnesses')
LANGUAGES = ('en', 'zh')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


@dataclass(frozen=True)
class Settings:
    witness_dir: Path = DEFAULT_WITNESS_DIR
    language: str = 'en'
    log_level: str = 'WARNING'
    workers: int = 1


def load_settings(environ: Mapping[str, str] | None = None) -> Settings:
    env = os.environ if environ is None else environ

    witness_dir = Path(env.get(ENV_WITNESS_DIR) or DEFAULT_WITNESS_DIR)

    language = (env.get(ENV_LANG) or 'en').strip().lower()
    if language not in LANGUAGES:
        logger.warning("%s=%r not supported, using 'en'", ENV_LANG, language)
        language = 'en'

    log_level = (env.get(ENV_LOG_LEVEL) or 'WARNING').strip().upper()
    if log_level not in LOG_LEVELS:
        logger.warning("%s=%r not a log level, using WARNING", ENV_LOG_LEVEL, log_level)
        log_level = 'WARNING'

    workers = 1
    raw = env.get(ENV_WORKERS)
    if raw:
        try:
            workers = max(1, int(raw))
        except ValueError:
            logger.warning("%s=%r is not an integer, using 1", ENV_WORKERS, raw)

    return Settings(witness_dir=witness_dir, language=language, log_level=log_level, workers=workers)


def ensure_witness_dir(settings: Settings) -> Path:
    """Witness directory, created on demand; current directory as last resort."""
    base = settings.witness_dir
    try:
        base.mkdir(parents=True, exist_ok=True)
    except Exception as e:
        logger.warning("cannot create witness dir %s (%s), using current directory", base, e)
        base = Path('.')
    return base
