# -*- coding: utf-8 -*-
"""设计校验：覆盖性、Turán 性、区组图与连通性、补集对偶

- is_covering / is_turan_system 给出字典序最小的反例子集
- block_graph(fam, threshold)：|A ∩ B| >= threshold 即相邻
- connectivity：并查集求连通分量，分量按最小顶点排序
- dualize：区组取补，(n,k,r)-覆盖 <-> (n,n-r,n-k)-Turán 系统，对合
- 随机抽样复核（第二个独立判定器）
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

from .core import (
    COVERING,
    CoverParams,
    DesignFamily,
    ParamError,
    TuranParams,
    binom,
    complement_block,
    elements_of,
    iter_subsets,
    mask_of,
)

logger = logging.getLogger(__name__)


# ------------------------- Union-find -------------------------
class UnionFind:
    """Disjoint sets over 0..n-1 with union by rank and path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def unite(self, a: int, b: int) -> bool:
        """Returns False if a and b were already in the same set."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def groups(self) -> list[list[int]]:
        by_root: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            by_root.setdefault(self.find(x), []).append(x)
        return sorted(by_root.values(), key=lambda g: g[0])


# ------------------------- Covering / Turán -------------------------
def sub_masks(mask: int, t: int):
    """Masks of the t-subsets of a block; drops elements instead of picking when that is shorter."""
    bits = []
    m = mask
    while m:
        low = m & -m
        bits.append(low)
        m ^= low
    drop = len(bits) - t
    if drop < 0:
        return
    if drop < t:
        for out in combinations(bits, drop):
            yield mask ^ sum(out)
    else:
        for keep in combinations(bits, t):
            yield sum(keep)


def _covered_rsets(masks: list[int], r: int) -> set[int]:
    covered: set[int] = set()
    for m in masks:
        covered.update(sub_masks(m, r))
    return covered


def _supersets(mask: int, n: int, extra: int):
    outside = [e for e in range(1, n + 1) if not mask & (1 << (e - 1))]
    for add in combinations(outside, extra):
        yield mask | mask_of(add)


def _same_params(params: CoverParams | TuranParams, fam: DesignFamily) -> None:
    if params != fam.params:
        raise ParamError(f"params {params} do not match the family's {fam.params}")


def is_covering(params: CoverParams, fam: DesignFamily) -> tuple[bool, tuple[int, ...] | None]:
    """Every r-subset of [n] lies in some block.

    Returns (True, None) or (False, lexicographically first uncovered r-subset).
    Raises ParamError when params do not describe fam.
    """
    _same_params(params, fam)
    n, k, r = params.n, params.k, params.r
    masks = fam.masks
    total = binom(n, r)
    by_blocks = len(masks) * binom(k, r)
    by_supersets = total * binom(n - r, k - r)
    if by_blocks <= by_supersets:
        covered = _covered_rsets(masks, r)
        if len(covered) == total:
            return True, None
        for t in iter_subsets(n, r):
            if t not in covered:
                return False, elements_of(t)
        return True, None  # unreachable
    block_set = set(masks)
    for t in iter_subsets(n, r):
        if not any(s in block_set for s in _supersets(t, n, k - r)):
            return False, elements_of(t)
    return True, None


def is_turan_system(params: TuranParams, fam: DesignFamily) -> tuple[bool, tuple[int, ...] | None]:
    """Every m-subset of [n] contains some block."""
    _same_params(params, fam)
    n, m, p = params.n, params.m, params.p
    block_set = set(fam.masks)
    if p == 0:
        return (bool(block_set), None if block_set else tuple(range(1, m + 1)))
    for q in combinations(range(1, n + 1), m):
        if not any(mask_of(sub) in block_set for sub in combinations(q, p)):
            return False, q
    return True, None


# ------------------------- Block graph -------------------------
@dataclass(frozen=True)
class BlockGraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    threshold: int

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def block_graph(fam: DesignFamily, threshold: int) -> BlockGraph:
    size = fam.params.block_size
    if not 0 <= threshold <= size:
        raise ParamError(f"threshold {threshold} outside [0, {size}]")
    masks = fam.masks
    edges = []
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            if (a & masks[j]).bit_count() >= threshold:
                edges.append((i, j))
    return BlockGraph(len(masks), tuple(edges), threshold)


def components_of(masks: list[int], threshold: int, block_size: int | None = None) -> list[list[int]]:
    """Connected components of the block graph given as raw masks.

    Blocks meeting in >= threshold elements share a threshold-subset, so when
    blocks have few such subsets the pairs are found through a subset owner map.
    """
    uf = UnionFind(len(masks))
    size = block_size if block_size is not None else (masks[0].bit_count() if masks else 0)
    if len(masks) > 1 and 2 * binom(size, threshold) < len(masks):
        owner: dict[int, int] = {}
        for i, m in enumerate(masks):
            for sub in sub_masks(m, threshold):
                j = owner.setdefault(sub, i)
                if j != i:
                    uf.unite(i, j)
        return uf.groups()
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            if (a & masks[j]).bit_count() >= threshold:
                uf.unite(i, j)
    return uf.groups()


def connectivity(g: BlockGraph) -> tuple[bool, list[list[int]]]:
    uf = UnionFind(g.vertex_count)
    for i, j in g.edges:
        uf.unite(i, j)
    comps = uf.groups()
    return len(comps) == 1, comps


# ------------------------- Duality -------------------------
def dual_params(params: CoverParams | TuranParams) -> CoverParams | TuranParams:
    n = params.n
    if isinstance(params, CoverParams):
        return TuranParams(n, n - params.r, n - params.k)
    return CoverParams(n, n - params.p, n - params.m)


def dualize(fam: DesignFamily) -> DesignFamily:
    n = fam.n
    blocks = tuple(complement_block(b, n) for b in fam.blocks)
    params = dual_params(fam.params)
    kind = 'turan' if fam.kind == COVERING else COVERING
    return DesignFamily(params, kind, blocks)


def complement_preserves_adjacency(fam: DesignFamily) -> bool:
    """Adjacency at threshold r on the covering side equals adjacency at n-2k+r on the dual."""
    if fam.kind != COVERING:
        fam = dualize(fam)
    p = fam.params
    t_dual = p.n - 2 * p.k + p.r
    if not 0 <= t_dual <= p.n - p.k:
        raise ParamError(f"dual threshold {t_dual} undefined for {p}")
    full = (1 << p.n) - 1
    edges = {frozenset((fam.blocks[i].mask, fam.blocks[j].mask)) for i, j in block_graph(fam, p.r).edges}
    dual = dualize(fam)
    dual_edges = {
        frozenset((full & ~dual.blocks[i].mask, full & ~dual.blocks[j].mask))
        for i, j in block_graph(dual, t_dual).edges
    }
    return edges == dual_edges


# ------------------------- Reports -------------------------
@dataclass(frozen=True)
class VerifyReport:
    is_valid_design: bool
    first_uncovered_witness: tuple[int, ...] | None
    is_connected: bool
    component_count: int
    component_sizes: tuple[int, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.is_valid_design and self.is_connected


def verify_connected_covering(params: CoverParams, fam: DesignFamily) -> VerifyReport:
    valid, witness = is_covering(params, fam)
    comps = components_of(fam.masks, params.r, params.k)
    ok = len(comps) == 1
    report = VerifyReport(valid, witness, ok, len(comps), tuple(len(c) for c in comps))
    logger.debug("verify %s covering: valid=%s connected=%s components=%d",
                 params, valid, ok, len(comps))
    return report


def verify_connected_turan(params: TuranParams, fam: DesignFamily) -> VerifyReport:
    valid, witness = is_turan_system(params, fam)
    t = params.threshold
    if t < 0:
        # every pair of blocks meets in >= 0 elements
        t = 0
    comps = components_of(fam.masks, t, params.p)
    ok = len(comps) == 1
    return VerifyReport(valid, witness, ok, len(comps), tuple(len(c) for c in comps))


def verify_family(fam: DesignFamily) -> VerifyReport:
    if fam.kind == COVERING:
        return verify_connected_covering(fam.params, fam)
    return verify_connected_turan(fam.params, fam)


def spot_check_covering(params: CoverParams, fam: DesignFamily, samples: int, rng) -> tuple[int, ...] | None:
    """Random r-subsets checked by brute containment; returns an uncovered one if seen.

    `rng` is any object with randbelow(n) (see solver.SplitMix64).
    """
    n, r = params.n, params.r
    masks = fam.masks
    for _ in range(samples):
        pool = list(range(1, n + 1))
        pick = []
        for _i in range(r):
            pick.append(pool.pop(rng.randbelow(len(pool))))
        t = mask_of(pick)
        if not any(t & m == t for m in masks):
            return tuple(sorted(pick))
    return None
