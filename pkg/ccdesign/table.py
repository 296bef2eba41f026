# -*- coding: utf-8 -*-
"""CC(n,r) 表（n <= 14）的重现与逐格比对

- 内嵌参考表：每格保存原始文本（含来源字母），如 "12^{p,u}"、"[95^l,97^r]"
- 逐格计算目录中的最佳上下界，并映射成同一套来源字母
- 比对结果：agree / within-interval / insufficient-data / mismatch；数据不足只用于来源为递推 r 的上界
- 来源字母逐格比对：缺少的印刷字母与多出的推导字母分别列出（provenance same / differs）
- 输出 text / csv / json；附带每行数列的单峰性、对数凹性检查
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass

from . import bounds
from .catalog import (
    TAG_EMBEDDED,
    TAG_STEP,
    TAG_TURAN_VERIFIED,
    WITNESS_PREFIX,
    Catalog,
)
from .core import ParamError

MATCH_AGREE = 'agree'
MATCH_WITHIN = 'within-interval'
MATCH_INSUFFICIENT = 'insufficient-data'
MATCH_MISMATCH = 'mismatch'

PRINTED_N_MAX = 14
# printed uppers obtained from the recursion over literature C values
RECURSIVE_LETTERS = frozenset({'r'})

PROVENANCE_SAME = 'same'
PROVENANCE_DIFFERS = 'differs'

CSV_COLUMNS = ('n', 'r', 'lower', 'lower_source', 'upper', 'upper_source', 'exact', 'cell', 'printed', 'match',
               'provenance', 'letters_missing', 'letters_extra')

LETTER_KEY = {
    'e': 'CC(n,2) closed form',
    't': 'CC(n,n-3), Mantel construction',
    'u': 'CC(n,n-4), Kostochka construction / Turán value',
    'p': 'CC(n,3), explicit witness',
    'l': 'counting lower bound CC*1',
    's': 'Schönheim step on C(n,r)',
    'a': 'literature lower bound on C(n,r)',
    'r': 'recursive upper bound',
    'w': 'explicit witness',
}

# rows by r; entry j is the cell for n = r + 1 + j
_PRINTED_ROWS: dict[int, tuple[str, ...]] = {
    0: ('1',) * 14,
    1: tuple(str(v) for v in range(1, 14)),
    2: ('1', '3', '5^{e,t}', '7^e', '10^e', '14^e', '18^e', '22^e', '27^e', '33^e', '39^e', '45^e'),
    3: ('1', '4', '7^{p,t}', '12^{p,u}', '19^p', '28^p', '40^p', '55^p', '73^p', '[95^l,97^r]', '[121^l,123^r]'),
    4: ('1', '5', '10^t', '[20,21^u]', '[32^l,35^r]', '[53^l,59^r]', '[83^l,89^r]', '[124^l,136^r]',
        '[179^l,193^r]', '[250^l,271^r]'),
    5: ('1', '6', '13^t', '31^u', '[51^l,61^r]', '[96^a,111^r]', '[159^l,177^r]', '[258^l,290^r]', '[401^l,447^r]'),
    6: ('1', '7', '17^t', '45^u', '[84^a,95^r]', '[165^a,195^r]', '[286^l,327^r]', '[501^l,572^r]'),
    7: ('1', '8', '21^t', '63^u', '[126^a,147^r]', '[269^a,323^r]', '[491^l,587^r]'),
    8: ('1', '9', '26^t', '84^u', '[185^a,210^r]', '[419^a,505^r]'),
    9: ('1', '10', '31^t', '112^u', '[259^s,297^r]'),
    10: ('1', '11', '37^t', '[143^s,144^u]'),
    11: ('1', '12', '43^t'),
    12: ('1', '13'),
    13: ('1',),
}

PRINTED_TABLE: dict[tuple[int, int], str] = {
    (r + 1 + j, r): text for r, row in _PRINTED_ROWS.items() for j, text in enumerate(row)
}

_VALUE_RE = re.compile(r'^\s*(\d+)(?:\^(?:\{([a-z,]+)\}|([a-z])))?\s*$')


@dataclass(frozen=True)
class PrintedCell:
    text: str
    lower: int
    upper: int
    lower_letters: tuple[str, ...] = ()
    upper_letters: tuple[str, ...] = ()

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper


def _value(text: str) -> tuple[int, tuple[str, ...]]:
    m = _VALUE_RE.match(text)
    if not m:
        raise ParamError(f"cannot parse table value {text!r}")
    letters = m.group(2) or m.group(3) or ''
    return int(m.group(1)), tuple(x for x in letters.split(',') if x)


def parse_printed_cell(text: str) -> PrintedCell:
    """'7^{p,t}' or '[95^l,97^r]' style cell text."""
    s = text.strip()
    if s.startswith('['):
        if not s.endswith(']'):
            raise ParamError(f"unterminated interval {text!r}")
        inner = s[1:-1]
        # split on the comma that is not inside braces
        depth = 0
        cut = -1
        for i, ch in enumerate(inner):
            if ch == '{':
                depth += 1
            elif ch == '}':
                depth -= 1
            elif ch == ',' and depth == 0:
                cut = i
                break
        if cut < 0:
            raise ParamError(f"interval without two values {text!r}")
        lo, lo_l = _value(inner[:cut])
        hi, hi_l = _value(inner[cut + 1:])
        return PrintedCell(text, lo, hi, lo_l, hi_l)
    v, letters = _value(s)
    return PrintedCell(text, v, v, letters, letters)


# ------------------------- Toolkit cells -------------------------
def letter_for(tag: str, r: int) -> str:
    """Table key letter for a catalog provenance tag ('' when the key has none)."""
    if tag == bounds.SRC_CC1:
        return 'l'
    if tag == 'C:' + TAG_STEP:
        return 's'
    if tag == 'C:' + TAG_EMBEDDED:
        return 'a'
    if tag in ('C:' + TAG_TURAN_VERIFIED, bounds.SRC_KOSTOCHKA):
        return 'u'
    if tag == bounds.SRC_RECURSIVE:
        return 'r'
    if tag == bounds.SRC_R2:
        return 'e'
    if tag == bounds.SRC_MANTEL:
        return 't'
    if tag.startswith(WITNESS_PREFIX):
        return 'p' if r == 3 else 'w'
    return ''


def _letters(tags: tuple[str, ...], r: int) -> tuple[str, ...]:
    return tuple(sorted({x for x in (letter_for(t, r) for t in tags) if x}))


def _fmt(value: int, letters: tuple[str, ...]) -> str:
    if not letters:
        return str(value)
    if len(letters) == 1:
        return f"{value}^{letters[0]}"
    return f"{value}^{{{','.join(letters)}}}"


@dataclass(frozen=True)
class TableCell:
    n: int
    r: int
    lower: int
    lower_source: str
    upper: int
    upper_source: str
    lower_letters: tuple[str, ...] = ()
    upper_letters: tuple[str, ...] = ()
    printed: str | None = None
    match: str | None = None
    letters_missing: tuple[str, ...] = ()
    letters_extra: tuple[str, ...] = ()

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.lower_letters) | set(self.upper_letters)))

    @property
    def text(self) -> str:
        if self.exact:
            return _fmt(self.lower, self.letters)
        return f"[{_fmt(self.lower, self.lower_letters)},{_fmt(self.upper, self.upper_letters)}]"

    @property
    def provenance(self) -> str | None:
        if self.printed is None:
            return None
        if self.letters_missing or self.letters_extra:
            return PROVENANCE_DIFFERS
        return PROVENANCE_SAME

    def to_json(self) -> dict:
        return {
            'n': self.n, 'r': self.r,
            'lower': self.lower, 'lower_source': self.lower_source,
            'upper': self.upper, 'upper_source': self.upper_source,
            'exact': self.exact, 'cell': self.text,
            'printed': self.printed, 'match': self.match,
            'provenance': self.provenance,
            'letters_missing': ' '.join(self.letters_missing),
            'letters_extra': ' '.join(self.letters_extra),
        }


def compare_cell(lower: int, upper: int, printed: PrintedCell) -> str:
    """Value comparison only; an upper looser than a printed recursive one is insufficient-data."""
    if lower > printed.upper or upper < printed.lower:
        return MATCH_MISMATCH
    if lower == printed.lower and upper == printed.upper:
        return MATCH_AGREE
    if lower < printed.lower:
        return MATCH_MISMATCH
    if upper > printed.upper:
        return MATCH_INSUFFICIENT if set(printed.upper_letters) & RECURSIVE_LETTERS else MATCH_MISMATCH
    return MATCH_WITHIN


def compare_letters(lower_letters: tuple[str, ...], upper_letters: tuple[str, ...], exact: bool,
                    printed: PrintedCell) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(printed letters the toolkit did not derive, derived letters not printed), side by side.

    An exact cell carries the union of its letters on both sides, printed or derived.
    """
    mine_lo, mine_hi = set(lower_letters), set(upper_letters)
    if exact:
        mine_lo = mine_hi = mine_lo | mine_hi
    printed_lo, printed_hi = set(printed.lower_letters), set(printed.upper_letters)
    if printed.is_exact:
        printed_lo = printed_hi = printed_lo | printed_hi
    missing = (printed_lo - mine_lo) | (printed_hi - mine_hi)
    extra = (mine_lo - printed_lo) | (mine_hi - printed_hi)
    return tuple(sorted(missing)), tuple(sorted(extra))


def table_cell(n: int, r: int, catalog: Catalog) -> TableCell:
    entry = catalog.connected_covering_number(n, r)
    printed_text = PRINTED_TABLE.get((n, r)) if n <= PRINTED_N_MAX else None
    lower_letters = _letters(entry.lower_tags, r)
    upper_letters = _letters(entry.upper_tags, r)
    match = None
    missing: tuple[str, ...] = ()
    extra: tuple[str, ...] = ()
    if printed_text is not None:
        printed = parse_printed_cell(printed_text)
        match = compare_cell(entry.lower, entry.upper, printed)
        missing, extra = compare_letters(lower_letters, upper_letters, entry.is_exact, printed)
    return TableCell(
        n=n, r=r,
        lower=entry.lower, lower_source=','.join(entry.lower_tags),
        upper=entry.upper, upper_source=','.join(entry.upper_tags),
        lower_letters=lower_letters, upper_letters=upper_letters,
        printed=printed_text, match=match,
        letters_missing=missing, letters_extra=extra,
    )


def build_table(n_max: int, catalog: Catalog) -> list[TableCell]:
    """Cells for 0 <= r < n <= n_max, ordered by r then n."""
    if n_max < 1:
        raise ParamError(f"n_max must be >= 1, got {n_max}")
    return [table_cell(n, r, catalog) for r in range(n_max) for n in range(r + 1, n_max + 1)]


def summarize(cells: list[TableCell]) -> dict[str, int]:
    counts = {MATCH_AGREE: 0, MATCH_WITHIN: 0, MATCH_INSUFFICIENT: 0, MATCH_MISMATCH: 0}
    for c in cells:
        if c.match is not None:
            counts[c.match] += 1
    return counts


def provenance_summary(cells: list[TableCell]) -> dict[str, int]:
    counts = {PROVENANCE_SAME: 0, PROVENANCE_DIFFERS: 0}
    for c in cells:
        if c.provenance is not None:
            counts[c.provenance] += 1
    return counts


# ------------------------- Row shape -------------------------
def _unimodal(seq: list[int]) -> bool:
    i = 0
    while i + 1 < len(seq) and seq[i] <= seq[i + 1]:
        i += 1
    while i + 1 < len(seq) and seq[i] >= seq[i + 1]:
        i += 1
    return i == len(seq) - 1


def _log_concave(seq: list[int]) -> bool:
    return all(seq[i] * seq[i] >= seq[i - 1] * seq[i + 1] for i in range(1, len(seq) - 1))


def shape_report(cells: list[TableCell]) -> list[dict]:
    """For each n, whether CC(n,0), ..., CC(n,n-1) is unimodal / log-concave (only when every value is exact)."""
    rows: dict[int, dict[int, TableCell]] = {}
    for c in cells:
        rows.setdefault(c.n, {})[c.r] = c
    out = []
    for n in sorted(rows):
        row = rows[n]
        if len(row) != n or not all(c.exact for c in row.values()):
            out.append({'n': n, 'unimodal': 'undetermined', 'log_concave': 'undetermined'})
            continue
        seq = [row[r].lower for r in range(n)]
        out.append({'n': n, 'unimodal': _unimodal(seq), 'log_concave': _log_concave(seq), 'values': seq})
    return out


# ------------------------- Rendering -------------------------
def render_text(cells: list[TableCell], n_max: int) -> str:
    """Grid with r down and n across, like the printed table."""
    by = {(c.n, c.r): c for c in cells}
    width = max([len(c.text) for c in cells] + [3]) + 1
    lines = ['r\\n'.ljust(4) + ''.join(str(n).rjust(width) for n in range(1, n_max + 1))]
    for r in range(n_max):
        row = []
        for n in range(1, n_max + 1):
            c = by.get((n, r))
            row.append((c.text if c else '').rjust(width))
        lines.append(str(r).ljust(4) + ''.join(row))
    flagged = [c for c in cells if c.match in (MATCH_MISMATCH, MATCH_INSUFFICIENT)]
    if flagged:
        lines.append('')
        for c in flagged:
            lines.append(f"({c.n},{c.r}) {c.match}: toolkit {c.text}, printed {c.printed}")
    unexplained = [c for c in cells if c.letters_missing]
    if unexplained:
        lines.append('')
        for c in unexplained:
            lines.append(f"({c.n},{c.r}) printed letters not derived: {','.join(c.letters_missing)} "
                         f"(toolkit {c.text}, printed {c.printed})")
    return '\n'.join(lines) + '\n'


def render_csv(cells: list[TableCell]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(CSV_COLUMNS)
    for c in cells:
        d = c.to_json()
        w.writerow(['' if d[k] is None else d[k] for k in CSV_COLUMNS])
    return buf.getvalue()


def render_json(cells: list[TableCell], n_max: int) -> str:
    doc = {
        'n_max': n_max,
        'cells': [c.to_json() for c in cells],
        'summary': summarize(cells),
        'provenance': provenance_summary(cells),
        'shape': shape_report(cells),
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + '\n'
