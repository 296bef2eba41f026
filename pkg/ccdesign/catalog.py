# -*- coding: utf-8 -*-
"""覆盖数目录：闭式值、论文表中的文献下界、见证文件支持的上界

- C(n,k,r) 与 CC(n,r) 的最佳已知区间，每个数值都带来源标签
- 见证文件（设计文件格式）每个 (n,k,r,connected) 保存一个最优者，加载时重新校验
- sqlite 台账 ledger.db 记录每次登记（WAL，尽力而为，失败不影响见证文件）
- Turán 数通过补集对偶查询：T(n,m,p) = C(n, n-p, n-m)
"""

from __future__ import annotations

import hashlib
import logging
import sqlite3
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from . import bounds
from .core import (
    TURAN,
    CoverParams,
    DesignError,
    DesignFamily,
    ParamError,
    VerificationError,
    binom,
)
from .designfile import read_design, write_design
from .verify import dualize, verify_connected_covering

logger = logging.getLogger(__name__)

# literature lower bounds for C(n, r+1, r) printed with tag 'a' in the table of CC(n,r)
EMBEDDED_C_LOWER: dict[tuple[int, int, int], int] = {
    (11, 6, 5): 96,
    (11, 7, 6): 84,
    (12, 7, 6): 165,
    (12, 8, 7): 126,
    (13, 8, 7): 269,
    (13, 9, 8): 185,
    (14, 9, 8): 419,
}

TAG_CLOSED = 'closed-form'
TAG_EMBEDDED = 'table-embedded'
TAG_SCHOENHEIM = bounds.SRC_SCHOENHEIM
TAG_STEP = bounds.SRC_STEP
TAG_GORDON = 'gordon'
TAG_TURAN_VERIFIED = 'turan-verified'
TAG_TURAN_CONSTRUCTION = 'turan-construction'
TAG_ALL_BLOCKS = 'all-blocks'
WITNESS_PREFIX = 'witness:'

_LEDGER_FILENAME = 'ledger.db'
_WITNESS_SUFFIX = '.design'


@dataclass(frozen=True)
class CoveringNumberEntry:
    n: int
    k: int
    r: int
    connected: bool
    lower: int
    upper: int | None
    lower_tags: tuple[str, ...] = ()
    upper_tags: tuple[str, ...] = ()

    @property
    def is_exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    @property
    def status(self) -> str:
        return 'exact' if self.is_exact else 'interval'

    @property
    def value(self) -> int | None:
        return self.lower if self.is_exact else None

    @property
    def provenance(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.lower_tags + self.upper_tags))

    @property
    def label(self) -> str:
        return f"{'CC' if self.connected else 'C'}({self.n},{self.k},{self.r})"

    def describe(self) -> str:
        if self.is_exact:
            return f"{self.label} = {self.lower}  [{', '.join(self.provenance)}]"
        hi = '·' if self.upper is None else str(self.upper)
        return (f"{self.label} in [{self.lower}, {hi}]  "
                f"lower: {', '.join(self.lower_tags)}; upper: {', '.join(self.upper_tags) or '-'}")

    def to_json(self) -> dict:
        return {
            'n': self.n, 'k': self.k, 'r': self.r, 'connected': self.connected,
            'status': self.status, 'lower': self.lower, 'upper': self.upper,
            'lower_tags': list(self.lower_tags), 'upper_tags': list(self.upper_tags),
        }


@dataclass
class _Witness:
    family: DesignFamily
    file: str


def witness_filename(n: int, k: int, r: int, connected: bool) -> str:
    return f"{'CC' if connected else 'C'}-n{n}-k{k}-r{r}{_WITNESS_SUFFIX}"


def _pick(cands: list[tuple[int, str]], best) -> tuple[int, tuple[str, ...]]:
    value = best(v for v, _ in cands)
    return value, tuple(dict.fromkeys(t for v, t in cands if v == value))


# ------------------------- Ledger (sqlite) -------------------------
def _init_ledger_db(conn: sqlite3.Connection) -> None:
    conn.execute('PRAGMA journal_mode=WAL;')
    conn.execute('PRAGMA synchronous=NORMAL;')
    conn.execute('PRAGMA busy_timeout=2000;')
    conn.execute(
        """
        CREATE TABLE IF NOT EXISTS witness_ledger (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            key TEXT,
            size INTEGER,
            file TEXT,
            sha256 TEXT,
            created_at TEXT
        )
        """
    )
    conn.execute('CREATE INDEX IF NOT EXISTS idx_witness_ledger_key ON witness_ledger(key);')
    conn.commit()


class Catalog:
    """Best known bounds on C(n,k,r) and CC(n,r), backed by a witness directory.

    Registration is serialized by a lock; readers see an immutable snapshot of
    the witness map that is swapped on every accepted registration.
    """

    def __init__(self, witness_dir: Path | None = None, *, load: bool = True):
        self.witness_dir = Path(witness_dir) if witness_dir is not None else None
        self._lock = threading.Lock()
        self._witnesses: dict[tuple[int, int, int, bool], _Witness] = {}
        self._c_cache: dict[tuple[int, int, int], tuple] = {}
        self._cc_cache: dict[tuple[int, int], tuple] = {}
        if load and self.witness_dir is not None:
            self.reload()

    # ---- persistence ----
    def reload(self) -> int:
        """Re-read and re-verify every witness file; returns how many were accepted."""
        found: dict[tuple[int, int, int, bool], _Witness] = {}
        if self.witness_dir is None or not self.witness_dir.is_dir():
            self._swap(found)
            return 0
        for path in sorted(self.witness_dir.glob(f'*{_WITNESS_SUFFIX}')):
            try:
                doc = read_design(path)
            except DesignError as e:
                logger.warning("skipping witness %s: %s", path.name, e)
                continue
            fam = doc.family
            if fam.kind == TURAN:
                fam = dualize(fam)
            report = verify_connected_covering(fam.params, fam)
            if not report.is_valid_design or (doc.connected and not report.is_connected):
                logger.warning("skipping witness %s: failed re-verification", path.name)
                continue
            p = fam.params
            key = (p.n, p.k, p.r, doc.connected)
            cur = found.get(key)
            if cur is None or (len(fam), fam.blocks) < (len(cur.family), cur.family.blocks):
                found[key] = _Witness(fam, path.name)
        self._swap(found)
        logger.info("catalog loaded %d witness(es) from %s", len(found), self.witness_dir)
        return len(found)

    def _swap(self, witnesses: dict) -> None:
        self._witnesses = witnesses
        self._c_cache = {}
        self._cc_cache = {}

    def _ledger_append(self, key: str, size: int, file: str, payload: bytes) -> None:
        if self.witness_dir is None:
            return
        try:
            conn = sqlite3.connect(str(self.witness_dir / _LEDGER_FILENAME))
            try:
                _init_ledger_db(conn)
                with conn:
                    conn.execute(
                        'INSERT INTO witness_ledger(key, size, file, sha256, created_at) VALUES (?,?,?,?,?)',
                        (key, size, file, hashlib.sha256(payload).hexdigest(),
                         datetime.now().isoformat(timespec='seconds')),
                    )
            finally:
                conn.close()
        except Exception as e:
            logger.warning("ledger update failed (%s); witness file kept", e)

    def history(self) -> list[dict]:
        """Ledger rows, oldest first; empty when there is no ledger."""
        if self.witness_dir is None or not (self.witness_dir / _LEDGER_FILENAME).exists():
            return []
        try:
            conn = sqlite3.connect(str(self.witness_dir / _LEDGER_FILENAME))
            try:
                _init_ledger_db(conn)
                rows = conn.execute(
                    'SELECT key, size, file, sha256, created_at FROM witness_ledger ORDER BY id ASC'
                ).fetchall()
            finally:
                conn.close()
        except Exception as e:
            logger.warning("cannot read ledger: %s", e)
            return []
        return [dict(zip(('key', 'size', 'file', 'sha256', 'created_at'), row)) for row in rows]

    # ---- witnesses ----
    def register_witness(self, fam: DesignFamily, connected_required: bool) -> CoveringNumberEntry:
        if fam.kind == TURAN:
            fam = dualize(fam)
        report = verify_connected_covering(fam.params, fam)
        if not report.is_valid_design:
            raise VerificationError(f"not a covering, uncovered subset {report.first_uncovered_witness}")
        if connected_required and not report.is_connected:
            raise VerificationError(f"covering is disconnected ({report.component_count} components)")
        p = fam.params
        key = (p.n, p.k, p.r, connected_required)
        with self._lock:
            cur = self._witnesses.get(key)
            if cur is None or len(fam) < len(cur.family):
                name = witness_filename(p.n, p.k, p.r, connected_required)
                if self.witness_dir is not None:
                    path = write_design(self.witness_dir / name, fam, connected=connected_required)
                    self._ledger_append(name[:-len(_WITNESS_SUFFIX)], len(fam), name, path.read_bytes())
                updated = dict(self._witnesses)
                updated[key] = _Witness(fam, name)
                self._swap(updated)
                logger.info("registered %s witness with %d blocks", name, len(fam))
            else:
                logger.info("witness for %s not better than %d blocks, kept", p, len(cur.family))
        if connected_required and p.k == p.r + 1:
            return self.connected_covering_number(p.n, p.r)
        return self.covering_number(p.n, p.k, p.r)

    def best_witness(self, n: int, k: int, r: int, connected: bool = False) -> DesignFamily | None:
        snap = self._witnesses
        cands = [snap.get((n, k, r, True))]
        if not connected:
            cands.append(snap.get((n, k, r, False)))
        cands = [w for w in cands if w is not None]
        if not cands:
            return None
        return min(cands, key=lambda w: (len(w.family), w.family.blocks)).family

    def _witness_bound(self, n: int, k: int, r: int, connected: bool) -> tuple[int, str] | None:
        snap = self._witnesses
        keys = [(n, k, r, True)] if connected else [(n, k, r, True), (n, k, r, False)]
        found = [snap[key] for key in keys if key in snap]
        if not found:
            return None
        w = min(found, key=lambda w: len(w.family))
        return len(w.family), WITNESS_PREFIX + w.file

    def witness_keys(self) -> list[tuple[int, int, int, bool]]:
        return sorted(self._witnesses)

    # ---- C(n,k,r) ----
    def _c_bounds(self, n: int, k: int, r: int) -> tuple:
        key = (n, k, r)
        cached = self._c_cache.get(key)
        if cached is not None:
            return cached
        CoverParams(n, k, r)  # validates
        lows: list[tuple[int, str]] = [(bounds.schoenheim_general(n, k, r), TAG_SCHOENHEIM)]
        highs: list[tuple[int, str]] = [(binom(n, k), TAG_ALL_BLOCKS)]

        exact = _closed_form_c(n, k, r)
        if exact is not None:
            lows.append((exact, TAG_CLOSED))
            highs.append((exact, TAG_CLOSED))
        if r >= 1 and n >= 2:
            prev = self.covering_lower(n - 1, k - 1, r - 1)
            lows.append((bounds.schoenheim_step(n, k - 1, prev), TAG_STEP))
        if key in EMBEDDED_C_LOWER:
            lows.append((EMBEDDED_C_LOWER[key], TAG_EMBEDDED))
        if n >= 4 and k == n - 3 and r == n - 4:
            f = bounds.kostochka_formula(n)
            highs.append((f, TAG_TURAN_CONSTRUCTION))
            if n <= bounds.TURAN_VERIFIED_MAX_N:
                lows.append((f, TAG_TURAN_VERIFIED))
        if k == r + 1 and n - 2 >= k:
            highs.append((binom(n - 2, r - 1) + self.covering_upper(n - 2, k, r), TAG_GORDON))
        wit = self._witness_bound(n, k, r, connected=False)
        if wit is not None:
            highs.append(wit)

        lo, lo_tags = _pick(lows, max)
        hi, hi_tags = _pick(highs, min)
        if lo > hi:
            logger.error("inconsistent bounds for C%s: %d > %d", (n, k, r), lo, hi)
        result = (lo, lo_tags, hi, hi_tags)
        self._c_cache[key] = result
        return result

    def covering_number(self, n: int, k: int, r: int) -> CoveringNumberEntry:
        lo, lo_tags, hi, hi_tags = self._c_bounds(n, k, r)
        return CoveringNumberEntry(n, k, r, False, lo, hi, lo_tags, hi_tags)

    def covering_lower(self, n: int, k: int, r: int) -> int:
        return self._c_bounds(n, k, r)[0]

    def covering_upper(self, n: int, k: int, r: int) -> int | None:
        return self._c_bounds(n, k, r)[2]

    def turan_number(self, n: int, m: int, p: int) -> CoveringNumberEntry:
        """T(n,m,p) answered through its dual covering number C(n, n-p, n-m)."""
        if not n >= m >= p >= 0:
            raise ParamError(f"need n >= m >= p >= 0, got ({n},{m},{p})")
        return self.covering_number(n, n - p, n - m)

    @staticmethod
    def embedded_lower(n: int, k: int, r: int) -> int | None:
        return EMBEDDED_C_LOWER.get((n, k, r))

    @staticmethod
    def embedded_table() -> list[CoveringNumberEntry]:
        return [
            CoveringNumberEntry(n, k, r, False, v, None, (TAG_EMBEDDED,), ())
            for (n, k, r), v in sorted(EMBEDDED_C_LOWER.items())
        ]

    # ---- CC(n,r) ----
    def _cc_bounds(self, n: int, r: int) -> tuple:
        key = (n, r)
        cached = self._cc_cache.get(key)
        if cached is not None:
            return cached
        if not (r >= 0 and n >= r + 1):
            raise ParamError(f"CC(n,r) needs n >= r+1 >= 1, got ({n},{r})")
        lows: list[tuple[int, str]] = []
        highs: list[tuple[int, str]] = []
        lo_cf, hi_cf = bounds.closed_form_cc(n, r)
        if lo_cf is not None:
            lows.append((lo_cf.value, lo_cf.source))
        if hi_cf is not None:
            highs.append((hi_cf.value, hi_cf.source))
        if r == 2 and n >= 3 and lo_cf is not None and lo_cf.source != bounds.SRC_R2:
            # Mantel and r = 2 overlap at n = 5
            lows.append((bounds.r2_closed_form(n), bounds.SRC_R2))
            highs.append((bounds.r2_closed_form(n), bounds.SRC_R2))
        if r >= 1:
            lows.append((bounds.cc1_lower(n, r)[1], bounds.SRC_CC1))
            c_lo, c_lo_tags, c_hi, _ = self._c_bounds(n, r + 1, r)
            lows.append((c_lo, 'C:' + c_lo_tags[0]))
            highs.append((bounds.two_c_bound(c_hi), bounds.SRC_TWO_C))
        if n >= r + 2:
            lows.append((bounds.cc2_lower(n, r)[1], bounds.SRC_CC2))
        if n >= r + 1 >= 3:
            highs.append((bounds.upper_s(n, r), bounds.SRC_S))
            c_sub = self.covering_upper(n - 2, r - 1, r - 2) if bounds.parity_flag(n, r) else None
            highs.append((bounds.upper_n(n, r, c_sub), bounds.SRC_N))
        if r >= 1 and n >= r + 2:
            prev = self.cc_upper(n - 1, r)
            c_prev = self.covering_upper(n - 1, r, r - 1)
            highs.append((bounds.recursive_cc_upper(prev, c_prev), bounds.SRC_RECURSIVE))
        if not lows:
            lows.append((1, bounds.SRC_TRIVIAL))
        wit = self._witness_bound(n, r + 1, r, connected=True)
        if wit is not None:
            highs.append(wit)

        lo, lo_tags = _pick(lows, max)
        hi, hi_tags = _pick(highs, min)
        if lo > hi:
            logger.error("inconsistent bounds for CC(%d,%d): %d > %d", n, r, lo, hi)
        result = (lo, lo_tags, hi, hi_tags)
        self._cc_cache[key] = result
        return result

    def connected_covering_number(self, n: int, r: int) -> CoveringNumberEntry:
        lo, lo_tags, hi, hi_tags = self._cc_bounds(n, r)
        return CoveringNumberEntry(n, r + 1, r, True, lo, hi, lo_tags, hi_tags)

    def cc_lower(self, n: int, r: int) -> int:
        return self._cc_bounds(n, r)[0]

    def cc_upper(self, n: int, r: int) -> int | None:
        return self._cc_bounds(n, r)[2]


def _closed_form_c(n: int, k: int, r: int) -> int | None:
    """Exact C(n,k,r) for the families with a closed form."""
    if r == 0 or k == n:
        return 1
    if k == r:
        return binom(n, r)
    if r == 1:
        return -(-n // k)
    if r == 2 and k == 3:
        return bounds.fort_hedlund(n)
    if k == n - 1 and r == n - 2:
        return n - 1
    if k == n - 2 and r == n - 3:
        return bounds.mantel_c(n)
    return None
