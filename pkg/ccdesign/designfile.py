# -*- coding: utf-8 -*-
"""设计文件格式（纯文本）

    # 注释行与空行忽略
    n k r covering [connected]      或      n m p turan [connected]
    1 2 3                           每行一个区组，元素升序，空格分隔

serialize 输出规范形式（无注释、区组字典序），因此 parse 后再 serialize 逐字节一致。
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .core import (
    COVERING,
    KINDS,
    MAX_MASK_N,
    Block,
    CoverParams,
    DesignError,
    DesignFamily,
    DesignFileError,
    TuranParams,
)

CONNECTED_FLAG = 'connected'


@dataclass(frozen=True)
class DesignDocument:
    family: DesignFamily
    connected: bool = False


def _ints(tokens: list[str], line_no: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise DesignFileError(f"expected integers, got {' '.join(tokens)!r}", line_no) from None


def parse_design(text: str) -> DesignDocument:
    header: tuple | None = None
    blocks: list[Block] = []
    seen: set[tuple[int, ...]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) not in (4, 5):
                raise DesignFileError("header must be 'n k r kind [connected]'", line_no)
            n, a, b = _ints(tokens[:3], line_no)
            kind = tokens[3].lower()
            if kind not in KINDS:
                raise DesignFileError(f"unknown kind {tokens[3]!r}, expected one of {', '.join(KINDS)}", line_no)
            connected = False
            if len(tokens) == 5:
                if tokens[4].lower() != CONNECTED_FLAG:
                    raise DesignFileError(f"unexpected header token {tokens[4]!r}", line_no)
                connected = True
            try:
                params = CoverParams(n, a, b) if kind == COVERING else TuranParams(n, a, b)
            except DesignError as e:
                raise DesignFileError(str(e), line_no) from None
            if params.n > MAX_MASK_N:
                raise DesignFileError(f"n = {params.n} is too large: blocks are bit masks, so n <= {MAX_MASK_N}",
                                      line_no)
            header = (params, kind, connected)
            continue
        params = header[0]
        elems = _ints(tokens, line_no)
        if len(elems) != params.block_size:
            raise DesignFileError(f"block has {len(elems)} elements, expected {params.block_size}", line_no)
        if any(not 1 <= e <= params.n for e in elems):
            raise DesignFileError(f"block element outside [1,{params.n}]", line_no)
        try:
            block = Block(tuple(elems))
        except DesignError as e:
            raise DesignFileError(str(e), line_no) from None
        if block.elements in seen:
            raise DesignFileError(f"duplicate block {block}", line_no)
        seen.add(block.elements)
        blocks.append(block)
    if header is None:
        raise DesignFileError("missing header line")
    params, kind, connected = header
    return DesignDocument(DesignFamily(params, kind, tuple(blocks)), connected)


def serialize_design(fam: DesignFamily, connected: bool = False) -> str:
    p = fam.params
    a, b = (p.k, p.r) if isinstance(p, CoverParams) else (p.m, p.p)
    head = f"{p.n} {a} {b} {fam.kind}"
    if connected:
        head += f" {CONNECTED_FLAG}"
    lines = [head] + [str(blk) for blk in fam.blocks]
    return '\n'.join(lines) + '\n'


def read_design(path: Path) -> DesignDocument:
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise DesignFileError(f"cannot read {path}: {e}") from None
    try:
        text = raw.decode('utf-8')
    except UnicodeDecodeError as e:
        line_no = raw.count(b'\n', 0, e.start) + 1
        raise DesignFileError(f"{path}: not UTF-8 text (byte offset {e.start})", line_no) from None
    return parse_design(text)


def write_design(path: Path, fam: DesignFamily, connected: bool = False) -> Path:
    """Atomic write: temporary sibling then os.replace."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + '.tmp')
    tmp.write_text(serialize_design(fam, connected), encoding='utf-8')
    os.replace(tmp, path)
    return path
