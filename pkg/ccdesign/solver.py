# -*- coding: utf-8 -*-
"""见证搜索：贪心、随机局部搜索（模拟退火）、小实例穷举

- 线程安全：每个重启在后台线程运行，只通过 Queue 发事件（log / progress / done），
  调用线程负责取出事件并写日志；取消用 threading.Event
- 可复现：随机源是 SplitMix64（更新规则见 SplitMix64 文档），重启种子由主种子派生，
  每轮并行重启的结果按 (大小, 区组字典序) 取最小，与线程调度无关
- 只有当见证大小等于下界时才标记为 exact；exhaustive_min 另外以穷尽证明最小性
"""

from __future__ import annotations

import logging
import math
import queue
import threading
import time
from dataclasses import dataclass
from itertools import combinations

from . import bounds
from .core import (
    CoverParams,
    DesignFamily,
    ParamError,
    binom,
    elements_of,
    iter_subsets,
    mask_of,
)
from .verify import UnionFind, verify_connected_covering

logger = logging.getLogger(__name__)

STATUS_EXACT = 'exact'
STATUS_UPPER = 'upper-bound-only'
STATUS_FAILED = 'failed'

_MASK64 = (1 << 64) - 1
_PROGRESS_EVERY = 5000
_MAX_COMPLETIONS = 48


# ------------------------- Random source -------------------------
class SplitMix64:
    """64-bit SplitMix generator.

    Update rule (all arithmetic mod 2**64):
        state += 0x9E3779B97F4A7C15
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        output z ^ (z >> 31)
    randbelow(n) reduces an output modulo n; random() keeps its top 53 bits.
    """

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randbelow needs n > 0")
        return self.next_u64() % n

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


def derive_seed(seed: int, index: int) -> int:
    """Seed of restart `index`, independent of how restarts are scheduled."""
    return SplitMix64((seed + index * SplitMix64.GAMMA) & _MASK64).next_u64()


# ------------------------- Config / outcome -------------------------
@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    budget: int = 200_000          # annealing moves over all restarts
    target_size: int | None = None
    require_connected: bool = False
    parallelism: int = 1
    restarts: int = 8
    lower_bound: int | None = None  # overrides the bound computed from params
    t_start: float = 0.6
    t_end: float = 0.02
    node_budget: int = 2_000_000    # exhaustive search


@dataclass
class SearchOutcome:
    witness: DesignFamily | None
    status: str
    lower_bound_used: int
    iterations: int = 0
    restarts_used: int = 0
    elapsed: float = 0.0
    cancelled: bool = False

    @property
    def size(self) -> int | None:
        return len(self.witness) if self.witness is not None else None


def default_lower_bound(params: CoverParams, require_connected: bool) -> int:
    n, k, r = params.n, params.k, params.r
    best = bounds.schoenheim_general(n, k, r)
    if require_connected:
        if k == r + 1 and r >= 1:
            best = max(best, bounds.cc_lower(n, r))
        best = max(best, bounds.connected_counting_bound(n, k, r))
    return best


# ------------------------- Search space -------------------------
class _IndexedSet:
    """Set of ints with O(1) add/remove/random pick."""

    def __init__(self):
        self.items: list[int] = []
        self.pos: dict[int, int] = {}

    def add(self, x: int) -> None:
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x: int) -> None:
        i = self.pos.pop(x, None)
        if i is None:
            return
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def __len__(self) -> int:
        return len(self.items)

    def pick(self, rng: SplitMix64) -> int:
        return self.items[rng.randbelow(len(self.items))]


class _Space:
    """r-subsets of [n] numbered lexicographically, and the blocks through them."""

    def __init__(self, params: CoverParams):
        self.params = params
        self.n, self.k, self.r = params.n, params.k, params.r
        self.rsets: list[int] = list(iter_subsets(self.n, self.r))
        self.rank: dict[int, int] = {m: i for i, m in enumerate(self.rsets)}
        self._parts: dict[int, tuple[int, ...]] = {}
        self._supers: dict[int, list[int]] = {}
        self.per_block = binom(self.k, self.r)

    def parts(self, block: int) -> tuple[int, ...]:
        got = self._parts.get(block)
        if got is None:
            got = tuple(self.rank[mask_of(c)] for c in combinations(elements_of(block), self.r))
            self._parts[block] = got
        return got

    def completions(self, t: int, rng: SplitMix64 | None = None) -> list[int]:
        """Blocks containing r-subset t (all of them, or a random sample when there are many)."""
        extra = self.k - self.r
        base = self.rsets[t]
        outside = [e for e in range(1, self.n + 1) if not base & (1 << (e - 1))]
        if binom(len(outside), extra) <= _MAX_COMPLETIONS or rng is None:
            got = self._supers.get(t)
            if got is None:
                got = [base | mask_of(c) for c in combinations(outside, extra)]
                self._supers[t] = got
            return got
        out = set()
        while len(out) < _MAX_COMPLETIONS:
            pool = outside[:]
            rng.shuffle(pool)
            out.add(base | mask_of(pool[:extra]))
        return sorted(out)


class _State:
    """A family of a fixed number of blocks with incremental coverage counts."""

    def __init__(self, space: _Space, masks: list[int], connected: bool):
        self.space = space
        self.connected = connected
        self.masks: list[int] = []
        self.present: set[int] = set()
        self.count = [0] * len(space.rsets)
        self.uncovered = _IndexedSet()
        for t in range(len(space.rsets)):
            self.uncovered.add(t)
        for m in masks:
            self._put(m)
            self.masks.append(m)

    def _put(self, m: int) -> None:
        self.present.add(m)
        for t in self.space.parts(m):
            if self.count[t] == 0:
                self.uncovered.discard(t)
            self.count[t] += 1

    def _take(self, m: int) -> None:
        self.present.discard(m)
        for t in self.space.parts(m):
            self.count[t] -= 1
            if self.count[t] == 0:
                self.uncovered.add(t)

    def replace(self, pos: int, new: int) -> int:
        old = self.masks[pos]
        self._take(old)
        self._put(new)
        self.masks[pos] = new
        return old

    def pop(self, pos: int) -> int:
        old = self.masks[pos]
        self._take(old)
        last = self.masks.pop()
        if pos < len(self.masks):
            self.masks[pos] = last
        return old

    def loss(self, pos: int, keep: tuple[int, ...] = ()) -> int:
        """r-subsets that become uncovered if block `pos` goes (ignoring those in `keep`)."""
        return sum(1 for t in self.space.parts(self.masks[pos]) if self.count[t] == 1 and t not in keep)

    def components(self) -> list[list[int]]:
        uf = UnionFind(len(self.masks))
        owner: dict[int, int] = {}
        for p, m in enumerate(self.masks):
            for t in self.space.parts(m):
                q = owner.setdefault(t, p)
                if q != p:
                    uf.unite(p, q)
        return uf.groups()

    def cost(self) -> int:
        c = len(self.uncovered)
        if self.connected and self.masks:
            c += len(self.components()) - 1
        return c


# ------------------------- Greedy -------------------------
def greedy_cover(params: CoverParams, config: SearchConfig | None = None) -> DesignFamily:
    """Repeatedly add the block covering most uncovered r-subsets; ties go to the lexicographically first block."""
    space = _Space(params)
    cands = list(iter_subsets(params.n, params.k))
    inv: list[list[int]] = [[] for _ in space.rsets]
    gains = []
    for ci, c in enumerate(cands):
        parts = space.parts(c)
        gains.append(len(parts))
        for t in parts:
            inv[t].append(ci)
    covered = [False] * len(space.rsets)
    left = len(space.rsets)
    chosen: list[int] = []
    while left:
        best_i, best_g = -1, 0
        for ci, g in enumerate(gains):
            if g > best_g:
                best_i, best_g = ci, g
        chosen.append(cands[best_i])
        for t in space.parts(cands[best_i]):
            if not covered[t]:
                covered[t] = True
                left -= 1
                for ci in inv[t]:
                    gains[ci] -= 1
    fam = DesignFamily.from_masks(params, chosen)
    report = verify_connected_covering(params, fam)
    if not report.is_valid_design:  # pragma: no cover
        raise AssertionError(f"greedy produced an invalid covering for {params}")
    return fam


def connected_growth(space: _Space, rng: SplitMix64) -> list[int]:
    """Random construction sequence: every block after the first shares a covered r-subset."""
    n_sets = len(space.rsets)
    count = [0] * n_sets
    uncovered = _IndexedSet()
    for t in range(n_sets):
        uncovered.add(t)
    chosen: list[int] = []
    present: set[int] = set()

    def put(m: int) -> None:
        chosen.append(m)
        present.add(m)
        for t in space.parts(m):
            if count[t] == 0:
                uncovered.discard(t)
            count[t] += 1

    put(rng.choice(space.completions(uncovered.pick(rng), rng)))
    while len(uncovered):
        order = uncovered.items[:]
        rng.shuffle(order)
        best: list[int] = []
        best_gain = 0
        for t in order[:24]:
            for b in space.completions(t, rng):
                if b in present:
                    continue
                parts = space.parts(b)
                if not any(count[x] for x in parts):
                    continue
                gain = sum(1 for x in parts if count[x] == 0)
                if gain > best_gain:
                    best, best_gain = [b], gain
                elif gain == best_gain:
                    best.append(b)
            if best_gain == space.per_block - 1:
                break
        if not best:
            # nothing adjacent reaches the sampled subsets; widen to every uncovered one
            for t in uncovered.items:
                for b in space.completions(t):
                    if b not in present and any(count[x] for x in space.parts(b)):
                        best.append(b)
            if not best:  # pragma: no cover
                best = [space.completions(uncovered.pick(rng), rng)[0]]
        put(rng.choice(best))
    return chosen


# ------------------------- Annealing -------------------------
def _cover_move(state: _State, rng: SplitMix64) -> tuple[int, int] | None:
    space = state.space
    t = state.uncovered.pick(rng)
    cands = [b for b in space.completions(t, rng) if b not in state.present]
    if not cands:
        return None
    if rng.random() < 0.8:
        scored = [(sum(1 for x in space.parts(b) if state.count[x] == 0), b) for b in cands]
        top = max(s for s, _ in scored)
        cands = [b for s, b in scored if s == top]
    new = rng.choice(cands)
    return _pick_victim(state, new, rng), new


def _connect_move(state: _State, rng: SplitMix64) -> tuple[int, int] | None:
    """Swap in a block that touches the two largest components."""
    space = state.space
    comps = sorted(state.components(), key=lambda c: (-len(c), c[0]))
    if len(comps) < 2:
        return None
    first, second = comps[0], comps[1]
    second_sets = {t for p in second for t in space.parts(state.masks[p])}
    sample = first[:]
    rng.shuffle(sample)
    cands: list[int] = []
    for p in sample[:12]:
        for t in space.parts(state.masks[p]):
            for b in space.completions(t, rng):
                if b in state.present:
                    continue
                if any(x in second_sets for x in space.parts(b) if x != t):
                    cands.append(b)
    if not cands:
        return None
    new = rng.choice(cands)
    return _pick_victim(state, new, rng), new


def _pick_victim(state: _State, new: int, rng: SplitMix64) -> int:
    size = len(state.masks)
    if rng.random() < 0.2:
        return rng.randbelow(size)
    keep = state.space.parts(new)
    sample = range(size) if size <= 16 else [rng.randbelow(size) for _ in range(16)]
    best: list[int] = []
    best_loss = None
    for p in sample:
        lo = state.loss(p, keep)
        if best_loss is None or lo < best_loss:
            best, best_loss = [p], lo
        elif lo == best_loss:
            best.append(p)
    return rng.choice(best)


def _trim(state: _State, target: int, rng: SplitMix64) -> None:
    while len(state.masks) > target:
        losses = [state.loss(p) for p in range(len(state.masks))]
        low = min(losses)
        state.pop(rng.choice([p for p, v in enumerate(losses) if v == low]))


def _anneal(space: _Space, config: SearchConfig, target: int, seed: int, budget: int,
            initial: list[int] | None, cancel: threading.Event, emit, index: int) -> tuple[list[int] | None, int]:
    rng = SplitMix64(seed)
    if initial is not None:
        masks = list(initial)
    elif config.require_connected:
        masks = connected_growth(space, rng)
    else:
        masks = _random_greedy(space, rng)
    state = _State(space, masks, config.require_connected)
    _trim(state, target, rng)
    cost = state.cost()
    temp = config.t_start
    alpha = (config.t_end / config.t_start) ** (1.0 / max(budget, 1))
    it = 0
    while cost and it < budget:
        if cancel.is_set():
            break
        it += 1
        move = _cover_move(state, rng) if len(state.uncovered) else _connect_move(state, rng)
        temp *= alpha
        if move is None:
            continue
        pos, new = move
        old = state.replace(pos, new)
        new_cost = state.cost()
        delta = new_cost - cost
        if delta <= 0 or rng.random() < math.exp(-delta / temp):
            cost = new_cost
        else:
            state.replace(pos, old)
        if it % _PROGRESS_EVERY == 0:
            emit({'type': 'progress', 'restart': index, 'iteration': it, 'cost': cost})
    return (state.masks[:] if cost == 0 else None), it


def _random_greedy(space: _Space, rng: SplitMix64) -> list[int]:
    """Greedy cover with random ties and random candidate sampling (restart seed)."""
    count = [0] * len(space.rsets)
    uncovered = _IndexedSet()
    for t in range(len(space.rsets)):
        uncovered.add(t)
    chosen: list[int] = []
    while len(uncovered):
        t = uncovered.pick(rng)
        scored = [(sum(1 for x in space.parts(b) if count[x] == 0), b) for b in space.completions(t, rng)]
        top = max(s for s, _ in scored)
        b = rng.choice([b for s, b in scored if s == top])
        chosen.append(b)
        for x in space.parts(b):
            if count[x] == 0:
                uncovered.discard(x)
            count[x] += 1
    return chosen


# ------------------------- Worker pool -------------------------
_TAG_LEVEL = {
    'info': logging.INFO,
    'success': logging.INFO,
    'warning': logging.WARNING,
    'error': logging.ERROR,
    'skip': logging.DEBUG,
}


def _drain(q: queue.Queue, results: dict, expected: int) -> None:
    """Forward worker events to the logger until every restart reported done."""
    while len(results) < expected:
        try:
            ev = q.get(timeout=0.25)
        except queue.Empty:
            continue
        et = ev.get('type')
        if et == 'log':
            logger.log(_TAG_LEVEL.get(ev.get('tag', 'info'), logging.INFO), ev.get('msg', ''))
        elif et == 'progress':
            logger.debug("restart %d: %d moves, cost %d", ev['restart'], ev['iteration'], ev['cost'])
        elif et == 'done':
            results[ev['restart']] = ev


def _run_round(space: _Space, config: SearchConfig, target: int, jobs: list[tuple[int, int]],
               budget: int, initial: list[int] | None, cancel: threading.Event) -> list[dict]:
    q: queue.Queue = queue.Queue()

    def q_put(event: dict) -> None:
        q.put(event)

    def worker(index: int, seed: int) -> None:
        try:
            q_put({'type': 'log', 'tag': 'info', 'msg': f"restart {index}: target {target}, seed {seed:#x}"})
            masks, its = _anneal(space, config, target, seed, budget, initial, cancel, q_put, index)
            if masks is not None:
                q_put({'type': 'log', 'tag': 'success', 'msg': f"restart {index}: reached {target} after {its} moves"})
            q_put({'type': 'done', 'restart': index, 'masks': masks, 'iterations': its})
        except Exception as e:
            q_put({'type': 'log', 'tag': 'error', 'msg': f"restart {index} crashed: {e}"})
            q_put({'type': 'done', 'restart': index, 'masks': None, 'iterations': 0})

    threads = [threading.Thread(target=worker, args=job, daemon=True) for job in jobs]
    for th in threads:
        th.start()
    results: dict[int, dict] = {}
    _drain(q, results, len(jobs))
    for th in threads:
        th.join()
    return [results[i] for i, _ in jobs]


def _search_at(space: _Space, config: SearchConfig, target: int, budget: int,
               initial: list[int] | None, cancel: threading.Event, first_restart: int) -> tuple[DesignFamily | None, int, int]:
    """Restarts in rounds of `parallelism`; returns (witness, moves used, restarts used)."""
    restarts = max(1, config.restarts)
    per_restart = max(1, budget // restarts)
    width = max(1, config.parallelism)
    used_moves = 0
    used = 0
    for start in range(0, restarts, width):
        if cancel.is_set():
            break
        jobs = [(first_restart + i, derive_seed(config.seed, first_restart + i))
                for i in range(start, min(start + width, restarts))]
        results = _run_round(space, config, target, jobs, per_restart, initial, cancel)
        used += len(jobs)
        used_moves += sum(r['iterations'] for r in results)
        found = []
        for res in results:
            if res['masks'] is None:
                continue
            fam = DesignFamily.from_masks(space.params, res['masks'])
            report = verify_connected_covering(space.params, fam)
            if report.is_valid_design and (report.is_connected or not config.require_connected):
                found.append(fam)
            else:
                logger.error("restart %d returned a family that fails verification; dropped", res['restart'])
        if found:
            return min(found, key=lambda f: (len(f), f.blocks)), used_moves, used
    return None, used_moves, used


def local_search(params: CoverParams, config: SearchConfig, initial: DesignFamily | None = None,
                 cancel: threading.Event | None = None) -> SearchOutcome:
    """Annealing toward config.target_size (or downward from a first solution when no target is set)."""
    t0 = time.time()
    cancel = cancel or threading.Event()
    lower = config.lower_bound if config.lower_bound is not None else default_lower_bound(params, config.require_connected)
    target = config.target_size
    if target is not None and target < lower:
        raise ParamError(f"target {target} is below the lower bound {lower} for {params}")
    space = _Space(params)
    seed_masks = initial.masks if initial is not None else None

    if target is not None:
        fam, moves, used = _search_at(space, config, target, config.budget, seed_masks, cancel, 0)
        return _outcome(fam, lower, moves, used, t0, cancel)

    rng = SplitMix64(config.seed)
    start_masks = connected_growth(space, rng) if config.require_connected else greedy_cover(params).masks
    best = DesignFamily.from_masks(params, start_masks)
    if config.require_connected and not verify_connected_covering(params, best).ok:  # pragma: no cover
        raise AssertionError("growth seed is not a connected covering")
    moves_left = config.budget
    moves_total = 0
    restarts_total = 0
    while len(best) > lower and moves_left > 0 and not cancel.is_set():
        fam, moves, used = _search_at(space, config, len(best) - 1, moves_left, best.masks, cancel, restarts_total)
        moves_total += moves
        restarts_total += used
        moves_left -= max(moves, 1)
        if fam is None:
            break
        best = fam
    return _outcome(best, lower, moves_total, restarts_total, t0, cancel)


def _outcome(fam: DesignFamily | None, lower: int, moves: int, restarts: int, t0: float,
             cancel: threading.Event) -> SearchOutcome:
    if fam is None:
        status = STATUS_FAILED
    else:
        status = STATUS_EXACT if len(fam) == lower else STATUS_UPPER
    return SearchOutcome(fam, status, lower, moves, restarts, time.time() - t0, cancel.is_set())


# ------------------------- Exhaustive -------------------------
def exhaustive_min(params: CoverParams, require_connected: bool = False, size_cap: int | None = None,
                   config: SearchConfig | None = None) -> SearchOutcome:
    """Smallest (connected) covering by iterative deepening branch and bound.

    The first block is fixed to {1..k}; each node covers the lexicographically
    first uncovered r-subset. When everything is covered but the family is
    disconnected, further blocks adjacent to the first component are tried.
    """
    t0 = time.time()
    config = config or SearchConfig()
    n, k = params.n, params.k
    space = _Space(params)
    n_sets = len(space.rsets)
    per_block = space.per_block
    lower = config.lower_bound if config.lower_bound is not None else default_lower_bound(params, require_connected)
    cap = size_cap if size_cap is not None else binom(n, k)
    all_blocks = list(iter_subsets(n, k))

    count = [0] * n_sets
    chosen: list[int] = []
    state = {'uncovered': n_sets, 'nodes': 0}

    def put(m: int) -> None:
        chosen.append(m)
        for t in space.parts(m):
            if count[t] == 0:
                state['uncovered'] -= 1
            count[t] += 1

    def take() -> None:
        m = chosen.pop()
        for t in space.parts(m):
            count[t] -= 1
            if count[t] == 0:
                state['uncovered'] += 1

    def first_component() -> set[int]:
        uf = UnionFind(len(chosen))
        owner: dict[int, int] = {}
        for p, m in enumerate(chosen):
            for t in space.parts(m):
                q = owner.setdefault(t, p)
                if q != p:
                    uf.unite(p, q)
        root = uf.find(0)
        return {p for p in range(len(chosen)) if uf.find(p) == root}

    def dfs(s: int) -> bool:
        state['nodes'] += 1
        if state['nodes'] > config.node_budget:
            raise _BudgetExceeded
        left = state['uncovered']
        if left == 0:
            if not require_connected:
                return True
            comp = first_component()
            if len(comp) == len(chosen):
                return True
            if len(chosen) >= s:
                return False
            comp_sets = {t for p in comp for t in space.parts(chosen[p])}
            present = set(chosen)
            for b in all_blocks:
                if b in present or not any(t in comp_sets for t in space.parts(b)):
                    continue
                put(b)
                if dfs(s):
                    return True
                take()
            return False
        if len(chosen) + -(-left // per_block) > s:
            return False
        t = next(i for i in range(n_sets) if count[i] == 0)
        for b in space.completions(t):
            put(b)
            if dfs(s):
                return True
            take()
        return False

    s = max(lower, 1)
    while s <= cap:
        try:
            put(all_blocks[0])
            ok = dfs(s)
        except _BudgetExceeded:
            logger.warning("exhaustive search for %s stopped after %d nodes at size %d", params, config.node_budget, s)
            return SearchOutcome(None, STATUS_FAILED, s, state['nodes'], 0, time.time() - t0)
        if ok:
            fam = DesignFamily.from_masks(params, chosen)
            report = verify_connected_covering(params, fam)
            if not report.is_valid_design or (require_connected and not report.is_connected):  # pragma: no cover
                raise AssertionError("exhaustive search produced an invalid family")
            logger.info("exhaustive minimum for %s: %d blocks (%d nodes)", params, s, state['nodes'])
            return SearchOutcome(fam, STATUS_EXACT, s, state['nodes'], 0, time.time() - t0)
        chosen.clear()
        count[:] = [0] * n_sets
        state['uncovered'] = n_sets
        s += 1
    return SearchOutcome(None, STATUS_FAILED, s, state['nodes'], 0, time.time() - t0)


class _BudgetExceeded(Exception):
    pass
