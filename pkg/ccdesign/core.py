# -*- coding: utf-8 -*-
"""基础类型：参数、区组、设计族、二项式系数

- CoverParams (n,k,r) 与 TuranParams (n,m,p)，构造时校验 n >= k >= r >= 0
- Block：元素严格递增的 [n] 子集，同时携带 bit mask（n <= 64）
- DesignFamily：规范化（字典序、去重校验）的区组集合，集合相等即族相等
- binom(a, b)：b < 0 或 b > a 时为 0；BinomialTable 为带上限的 Pascal 表
- 异常层次：DesignError / ParamError / VerificationError / DesignFileError / SearchError
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

COVERING = 'covering'
TURAN = 'turan'
KINDS = (COVERING, TURAN)

MAX_MASK_N = 64


# ------------------------- Errors -------------------------
class DesignError(ValueError):
    """Base class for every error raised by ccdesign."""


class ParamError(DesignError):
    pass


class VerificationError(DesignError):
    pass


class DesignFileError(DesignError):
    """Malformed design file (header, block line, range)."""

    def __init__(self, msg: str, line_no: int | None = None):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {msg}" if line_no is not None else msg)


class SearchError(RuntimeError):
    pass


# ------------------------- Binomials -------------------------
def binom(a: int, b: int) -> int:
    """C(a, b) with C(a, b) = 0 when b < 0 or b > a."""
    if a < 0:
        raise ParamError(f"binom: a must be >= 0, got {a}")
    if b < 0 or b > a:
        return 0
    if a <= BINOMIALS.cap:
        return BINOMIALS.rows[a][b]
    return math.comb(a, b)


class BinomialTable:
    """Pascal's triangle up to a fixed cap, exact big integers."""

    def __init__(self, cap: int = 128):
        if cap < 0:
            raise ParamError(f"binomial table cap must be >= 0, got {cap}")
        self.cap = cap
        rows: list[list[int]] = [[1]]
        for a in range(1, cap + 1):
            prev = rows[-1]
            row = [1] * (a + 1)
            for b in range(1, a):
                row[b] = prev[b - 1] + prev[b]
            rows.append(row)
        self.rows = rows

    def __call__(self, a: int, b: int) -> int:
        if not 0 <= a <= self.cap:
            raise ParamError(f"binomial table covers 0..{self.cap}, got a={a}")
        if b < 0 or b > a:
            return 0
        return self.rows[a][b]

    def check_pascal(self) -> bool:
        for a in range(1, self.cap + 1):
            for b in range(1, a + 1):
                if self(a, b) != self(a - 1, b - 1) + self(a - 1, b):
                    return False
        return True


BINOMIALS = BinomialTable()


# ------------------------- Params -------------------------
@dataclass(frozen=True)
class CoverParams:
    n: int
    k: int
    r: int

    def __post_init__(self):
        if self.n < 1:
            raise ParamError(f"n must be positive, got {self.n}")
        if not self.n >= self.k >= self.r >= 0:
            raise ParamError(f"need n >= k >= r >= 0, got (n,k,r)=({self.n},{self.k},{self.r})")

    @property
    def block_size(self) -> int:
        return self.k

    def __str__(self) -> str:
        return f"({self.n},{self.k},{self.r})"


@dataclass(frozen=True)
class TuranParams:
    # p = 0 is accepted so that dualizing the single-block (n,n,r) covering stays total
    n: int
    m: int
    p: int

    def __post_init__(self):
        if self.n < 1:
            raise ParamError(f"n must be positive, got {self.n}")
        if not self.n >= self.m >= self.p >= 0:
            raise ParamError(f"need n >= m >= p >= 0, got (n,m,p)=({self.n},{self.m},{self.p})")

    @property
    def block_size(self) -> int:
        return self.p

    @property
    def threshold(self) -> int:
        """Adjacency threshold 2p - m of the connected Turán notion."""
        return 2 * self.p - self.m

    def __str__(self) -> str:
        return f"({self.n},{self.m},{self.p})"


Params = CoverParams | TuranParams


# ------------------------- Blocks -------------------------
def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def iter_subsets(n: int, r: int) -> Iterator[int]:
    """Masks of all r-subsets of [n], lexicographic on the element tuples."""
    for combo in combinations(range(1, n + 1), r):
        yield mask_of(combo)


@dataclass(frozen=True, order=True)
class Block:
    elements: tuple[int, ...]
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elems = tuple(sorted(int(e) for e in self.elements))
        if len(set(elems)) != len(elems):
            raise DesignError(f"block has repeated elements: {self.elements}")
        if elems and elems[0] < 1:
            raise DesignError(f"block elements start at 1: {self.elements}")
        if elems and elems[-1] > MAX_MASK_N:
            raise ParamError(f"block element {elems[-1]} exceeds {MAX_MASK_N}: blocks are bit masks, "
                             f"so designs are limited to ground sets n <= {MAX_MASK_N}")
        object.__setattr__(self, 'elements', elems)
        object.__setattr__(self, 'mask', mask_of(elems))

    @classmethod
    def of(cls, *elements: int) -> 'Block':
        return cls(tuple(elements))

    @classmethod
    def from_mask(cls, mask: int) -> 'Block':
        return cls(elements_of(mask))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e: object) -> bool:
        return e in self.elements

    def __str__(self) -> str:
        return ' '.join(str(e) for e in self.elements)


def complement_block(b: Block, n: int) -> Block:
    if b.elements and b.elements[-1] > n:
        raise ParamError(f"block {b} is not a subset of [{n}]")
    full = (1 << n) - 1
    return Block.from_mask(full & ~b.mask)


# ------------------------- Families -------------------------
@dataclass(frozen=True)
class DesignFamily:
    """A set of blocks over [n]; blocks kept sorted lexicographically."""

    params: Params
    kind: str
    blocks: tuple[Block, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParamError(f"unknown design kind: {self.kind!r}")
        if self.kind == COVERING and not isinstance(self.params, CoverParams):
            raise ParamError("covering family needs CoverParams")
        if self.kind == TURAN and not isinstance(self.params, TuranParams):
            raise ParamError("turan family needs TuranParams")
        blocks = tuple(sorted(self.blocks))
        size = self.params.block_size
        n = self.params.n
        for prev, cur in zip(blocks, blocks[1:]):
            if prev == cur:
                raise DesignError(f"duplicate block {cur}")
        for b in blocks:
            if len(b) != size:
                raise DesignError(f"block {b} has size {len(b)}, expected {size}")
            if b.elements and b.elements[-1] > n:
                raise DesignError(f"block {b} is not a subset of [{n}]")
        object.__setattr__(self, 'blocks', blocks)

    @classmethod
    def covering(cls, n: int, k: int, r: int, blocks: Iterable[Iterable[int]]) -> 'DesignFamily':
        return cls(CoverParams(n, k, r), COVERING, tuple(_as_block(b) for b in blocks))

    @classmethod
    def turan(cls, n: int, m: int, p: int, blocks: Iterable[Iterable[int]]) -> 'DesignFamily':
        return cls(TuranParams(n, m, p), TURAN, tuple(_as_block(b) for b in blocks))

    @classmethod
    def from_masks(cls, params: Params, masks: Iterable[int]) -> 'DesignFamily':
        kind = COVERING if isinstance(params, CoverParams) else TURAN
        return cls(params, kind, tuple(Block.from_mask(m) for m in masks))

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def masks(self) -> list[int]:
        return [b.mask for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def with_blocks(self, blocks: Iterable[Block]) -> 'DesignFamily':
        return DesignFamily(self.params, self.kind, tuple(blocks))


def _as_block(b: Iterable[int] | Block) -> Block:
    return b if isinstance(b, Block) else Block(tuple(b))


def delete_element(fam: DesignFamily, e: int) -> DesignFamily:
    """Drop every block containing e and relabel [n] minus e onto [n-1].

    An (n,m,p)-Turán system becomes an (n-1,m,p)-Turán system. On the covering
    side only the relabelling is guaranteed: r-subsets whose blocks all held e
    are left uncovered, so callers must verify the result.
    """
    n = fam.n
    if not 1 <= e <= n:
        raise ParamError(f"element {e} outside [1,{n}]")
    if n < 2:
        raise ParamError("cannot delete from a ground set of size 1")
    p = fam.params
    if isinstance(p, CoverParams):
        if p.k > n - 1:
            raise ParamError(f"deleting from {p} leaves blocks larger than the ground set")
        new_params: Params = CoverParams(n - 1, p.k, p.r)
    else:
        if p.m > n - 1:
            raise ParamError(f"deleting from {p} leaves m larger than the ground set")
        new_params = TuranParams(n - 1, p.m, p.p)
    kept = []
    for b in fam.blocks:
        if e in b:
            continue
        kept.append(Block(tuple(x if x < e else x - 1 for x in b.elements)))
    return DesignFamily(new_params, fam.kind, tuple(kept))
