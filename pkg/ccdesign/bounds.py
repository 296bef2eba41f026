# -*- coding: utf-8 -*-
"""连通覆盖数的上下界（精确有理数运算）

下界：CC*1 = (C(n,r)-1)/r，CC*2 = ((r+1)/(r+2))·C(n,r+1)/(n-r-1)，Schönheim 迭代界与单步界。
上界：S(n,r)、N(n,r)、递推界 CC(n-1,r)+C(n-1,r-1)、求和界、2C-1、
      Mantel (r = n-3)、Kostochka (r = n-4)、r = 2 的闭式。
恒等式：S 与 N 的差（与 c_sub 无关），以及偶数情形的不等式。
所有比较使用 fractions.Fraction，从不使用浮点数。
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol

from .core import ParamError, binom

# source ids, also used as provenance tags by catalog and table
SRC_CC1 = 'cc1'
SRC_CC2 = 'cc2'
SRC_SCHOENHEIM = 'schoenheim'
SRC_STEP = 'schoenheim-step'
SRC_S = 'S'
SRC_N = 'N'
SRC_RECURSIVE = 'recursive'
SRC_SUM = 'sum'
SRC_TWO_C = '2C-1'
SRC_MANTEL = 'mantel'
SRC_KOSTOCHKA = 'kostochka'
SRC_R2 = 'r2-closed-form'
SRC_FORT_HEDLUND = 'fort-hedlund'
SRC_TRIVIAL = 'trivial'

# n at which CC(n, n-4) is one larger than the Turán value
KOSTOCHKA_PLUS_ONE = frozenset({5, 6, 9})
# Turán's (n,4,3) conjecture has been checked by computer up to this n
TURAN_VERIFIED_MAX_N = 13


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ParamError(msg)


# ------------------------- Lower bounds -------------------------
def cc1_lower(n: int, r: int) -> tuple[Fraction, int]:
    _need(r >= 1, f"cc1 needs r >= 1, got r={r} (CC(n,0)=1)")
    _need(n >= r + 1, f"cc1 needs n >= r+1, got (n,r)=({n},{r})")
    q = Fraction(binom(n, r) - 1, r)
    return q, ceil_frac(q)


def cc2_lower(n: int, r: int) -> tuple[Fraction, int]:
    _need(r >= 0, f"r must be >= 0, got {r}")
    _need(n >= r + 2, f"cc2 needs n >= r+2, got (n,r)=({n},{r}) (CC(r+1,r)=1)")
    q = Fraction(r + 1, r + 2) * Fraction(binom(n, r + 1), n - r - 1)
    return q, ceil_frac(q)


def cc_lower(n: int, r: int) -> int:
    """max(CC*1, CC*2) after ceiling; CC*2 dropped when n = r+1."""
    best = cc1_lower(n, r)[1]
    if n >= r + 2:
        best = max(best, cc2_lower(n, r)[1])
    return best


def lower_threshold_holds(n: int, r: int) -> bool:
    """CC*2 > CC*1 exactly when r >= 2(n-1)/3 (rational values, strict)."""
    second_wins = cc2_lower(n, r)[0] > cc1_lower(n, r)[0]
    return second_wins == (3 * r >= 2 * (n - 1))


def schoenheim_general(n: int, k: int, r: int) -> int:
    """Iterated Schönheim bound for C(n,k,r), innermost ceiling first."""
    _need(n >= k >= r >= 0, f"need n >= k >= r >= 0, got ({n},{k},{r})")
    val = 1
    for i in range(r - 1, -1, -1):
        val = _ceil_div((n - i) * val, k - i)
    return val


def schoenheim_L(n: int, r: int) -> int:
    _need(n >= r + 1 >= 2, f"schoenheim_L needs n >= r+1 >= 2, got ({n},{r})")
    return schoenheim_general(n, r + 1, r)


def schoenheim_step(n: int, r: int, c_lower_prev: int) -> int:
    """C(n,r) >= ceil(n/(r+1) * C(n-1,r-1))."""
    return _ceil_div(n * c_lower_prev, r + 1)


def connected_counting_bound(n: int, k: int, r: int) -> int:
    """Each block after the first shares an r-subset with an earlier one."""
    per_block = binom(k, r)
    total = binom(n, r)
    if per_block <= 1:
        return total
    return max(1, _ceil_div(total - 1, per_block - 1))


# ------------------------- Closed forms -------------------------
def fort_hedlund(n: int) -> int:
    """C(n,3,2) = ceil(n/3 * ceil((n-1)/2))."""
    _need(n >= 3, f"C(n,3,2) needs n >= 3, got {n}")
    return _ceil_div(n * _ceil_div(n - 1, 2), 3)


def r2_closed_form(n: int) -> int:
    """CC(n,2) = ceil((C(n,2)-1)/2)."""
    _need(n >= 3, f"CC(n,2) needs n >= 3, got {n}")
    return _ceil_div(binom(n, 2) - 1, 2)


def mantel_c(n: int) -> int:
    """T(n,3,2) = C(n,n-2,n-3): two near-equal cliques."""
    _need(n >= 3, f"mantel_c needs n >= 3, got {n}")
    return binom((n + 1) // 2, 2) + binom(n // 2, 2)


def mantel_cc(n: int) -> int:
    _need(n >= 4, f"mantel_cc needs n >= 4, got {n}")
    return mantel_c(n) + 1


def kostochka_formula(n: int) -> int:
    """Turán's value for T(n,4,3) = C(n,n-3,n-4)."""
    _need(n >= 4, f"kostochka_formula needs n >= 4, got {n}")
    m, rem = divmod(n, 3)
    if rem == 0:
        return m * (m - 1) * (2 * m - 1)
    if rem == 1:
        return m * m * (2 * m - 1)
    return m * m * (2 * m + 1)


def kostochka_cc_upper(n: int) -> int:
    _need(n >= 4, f"kostochka_cc_upper needs n >= 4, got {n}")
    if n == 8:
        return 21
    return kostochka_formula(n) + (1 if n in KOSTOCHKA_PLUS_ONE else 0)


def kostochka_cc_range(n: int) -> tuple[int | None, int]:
    """Claimed (lower, upper) for CC(n, n-4); lower is None past the verified range."""
    upper = kostochka_cc_upper(n)
    if n == 8:
        return 20, upper
    if n <= TURAN_VERIFIED_MAX_N:
        return upper, upper
    return None, upper


# ------------------------- Upper bounds -------------------------
def parity_flag(n: int, r: int) -> int:
    """delta0 = 1 iff n - r is even."""
    return 1 if (n - r) % 2 == 0 else 0


def upper_s(n: int, r: int) -> int:
    _need(n >= r + 1 >= 3, f"S(n,r) needs n >= r+1 >= 3, got ({n},{r})")
    total = sum(binom(n - 2 * i, r - 1) for i in range(1, (n - r + 1) // 2 + 1))
    return total + (n - r) // 2


def upper_n(n: int, r: int, c_sub: int | None = None) -> int:
    _need(n >= r + 1 >= 3, f"N(n,r) needs n >= r+1 >= 3, got ({n},{r})")
    h = _ceil_div(n - r, 2)
    total = sum((n - r - 2 * i) * binom(r - 2 + 2 * i, r - 2) for i in range(h))
    total += h - 1
    if parity_flag(n, r):
        if c_sub is None:
            raise ParamError(f"N({n},{r}) needs the size of an ({n - 2},{r - 1},{r - 2})-covering")
        total += c_sub
    return total


def recursive_cc_upper(cc_prev: int, c_value: int) -> int:
    return cc_prev + c_value


def sum_upper(n: int, r: int, c_values: list[int]) -> int:
    if len(c_values) != n - r:
        raise ParamError(f"sum bound needs {n - r} values C(i,{r - 1}) for i={r}..{n - 1}, got {len(c_values)}")
    return sum(c_values)


def two_c_bound(c_value: int) -> int:
    _need(c_value >= 1, f"2C-1 needs C >= 1, got {c_value}")
    return 2 * c_value - 1


def gordon_size(v: int, t: int) -> int:
    """Size of the recursive (v,t+1,t)-covering built by construct.construct_gordon."""
    _need(v >= t + 1 and t >= 0, f"gordon covering needs v >= t+1 >= 1, got ({v},{t})")
    if (v - t) % 2 == 1:
        size = 1
        start = t + 3
    else:
        size = t + 1
        start = t + 4
    for w in range(start, v + 1, 2):
        size += binom(w - 2, t - 1)
    return size


# ------------------------- Identities -------------------------
def thm1_gap(n: int, r: int, c_sub: int) -> int:
    half = (n - r) // 2
    gap = sum((half - i) * binom(r - 2 + 2 * i, r - 3) for i in range(half))
    return gap + parity_flag(n, r) * (1 - c_sub)


def thm1_check(n: int, r: int, c_sub_provider) -> bool:
    """S(n,r) = N(n,r) + gap, with the same c_sub on both sides.

    `c_sub_provider` is an int or a callable (n-2, r-1, r-2) -> int.
    """
    _need(n >= r + 1 >= 3, f"thm1 needs n >= r+1 >= 3, got ({n},{r})")
    c_sub = c_sub_provider(n - 2, r - 1, r - 2) if callable(c_sub_provider) else int(c_sub_provider)
    return upper_s(n, r) == upper_n(n, r, c_sub) + thm1_gap(n, r, c_sub)


def thgen_check(n: int, r: int, c_sub: int | None = None) -> bool:
    """S(n,r) >= N(n,r) + sum for n - r even; c_sub defaults to the recursive covering size."""
    _need((n - r) % 2 == 0 and n >= r + 2 >= 5, f"thgen needs n-r even and n >= r+2 >= 5, got ({n},{r})")
    if c_sub is None:
        c_sub = gordon_size(n - 2, r - 2)
    half = (n - r) // 2
    extra = sum((half - i - 1) * binom(r - 2 + 2 * i, r - 3) for i in range(half - 1))
    return upper_s(n, r) >= upper_n(n, r, c_sub) + extra


# ------------------------- Records -------------------------
class CoveringProvider(Protocol):
    def covering_lower(self, n: int, k: int, r: int) -> int: ...
    def covering_upper(self, n: int, k: int, r: int) -> int | None: ...
    def cc_upper(self, n: int, r: int) -> int | None: ...


@dataclass(frozen=True)
class BoundValue:
    value: int
    source: str
    exact: Fraction | None = None

    def to_json(self) -> dict:
        d = {'value': self.value, 'source': self.source}
        if self.exact is not None:
            d['rational'] = str(self.exact)
        return d


@dataclass(frozen=True)
class BoundRecord:
    n: int
    r: int
    delta0: int
    lower_cc1: BoundValue | None = None
    lower_cc2: BoundValue | None = None
    lower_schoenheim: BoundValue | None = None
    upper_s: BoundValue | None = None
    upper_n: BoundValue | None = None
    upper_recursive: BoundValue | None = None
    upper_2c_minus_1: BoundValue | None = None
    upper_sum: BoundValue | None = None
    closed_lower: BoundValue | None = None
    closed_upper: BoundValue | None = None

    LOWER_FIELDS = ('lower_cc1', 'lower_cc2', 'lower_schoenheim', 'closed_lower')
    UPPER_FIELDS = ('upper_s', 'upper_n', 'upper_recursive', 'upper_2c_minus_1', 'upper_sum', 'closed_upper')

    def lowers(self) -> list[BoundValue]:
        return [v for v in (getattr(self, f) for f in self.LOWER_FIELDS) if v is not None]

    def uppers(self) -> list[BoundValue]:
        return [v for v in (getattr(self, f) for f in self.UPPER_FIELDS) if v is not None]

    @property
    def best_lower(self) -> BoundValue | None:
        return max(self.lowers(), key=lambda v: v.value, default=None)

    @property
    def best_upper(self) -> BoundValue | None:
        return min(self.uppers(), key=lambda v: v.value, default=None)

    @property
    def is_exact(self) -> bool:
        lo, hi = self.best_lower, self.best_upper
        return lo is not None and hi is not None and lo.value == hi.value

    def to_json(self) -> dict:
        out: dict = {'n': self.n, 'r': self.r, 'delta0': self.delta0}
        for f in self.LOWER_FIELDS + self.UPPER_FIELDS:
            v = getattr(self, f)
            out[f] = v.to_json() if v is not None else None
        lo, hi = self.best_lower, self.best_upper
        out['best_lower'] = lo.to_json() if lo else None
        out['best_upper'] = hi.to_json() if hi else None
        out['exact'] = self.is_exact
        return out


def closed_form_cc(n: int, r: int) -> tuple[BoundValue | None, BoundValue | None]:
    """Closed-form (lower, upper) for CC(n,r) from the exact theorems, if any applies."""
    if r == 0 or r == n - 1:
        v = BoundValue(1, SRC_TRIVIAL)
        return v, v
    if r == 1 or r == n - 2:
        v = BoundValue(n - 1, SRC_TRIVIAL)
        return v, v
    if r == n - 3 and n >= 4:
        v = BoundValue(mantel_cc(n), SRC_MANTEL)
        return v, v
    if r == 2:
        v = BoundValue(r2_closed_form(n), SRC_R2)
        return v, v
    if r == n - 4 and n >= 4:
        lo, hi = kostochka_cc_range(n)
        return (BoundValue(lo, SRC_KOSTOCHKA) if lo is not None else None), BoundValue(hi, SRC_KOSTOCHKA)
    return None, None


def build_bound_record(n: int, r: int, provider: CoveringProvider | None = None) -> BoundRecord:
    """Every bound of CC(n,r) that applies, tagged with its source."""
    _need(n >= r + 1 and r >= 0, f"CC(n,r) needs n >= r+1 >= 1, got ({n},{r})")
    fields: dict = {}
    if r >= 1:
        q, c = cc1_lower(n, r)
        fields['lower_cc1'] = BoundValue(c, SRC_CC1, q)
    if n >= r + 2:
        q, c = cc2_lower(n, r)
        fields['lower_cc2'] = BoundValue(c, SRC_CC2, q)
    if r >= 1:
        best, src = schoenheim_L(n, r), SRC_SCHOENHEIM
        if provider is not None and r >= 1 and n - 1 >= r:
            step = schoenheim_step(n, r, provider.covering_lower(n - 1, r, r - 1))
            if step > best:
                best, src = step, SRC_STEP
        fields['lower_schoenheim'] = BoundValue(best, src)
    if n >= r + 1 >= 3:
        fields['upper_s'] = BoundValue(upper_s(n, r), SRC_S)
        c_sub = None
        if parity_flag(n, r):
            c_sub = provider.covering_upper(n - 2, r - 1, r - 2) if provider is not None else None
            if c_sub is None:
                c_sub = gordon_size(n - 2, r - 2)
        fields['upper_n'] = BoundValue(upper_n(n, r, c_sub), SRC_N)
    if provider is not None and r >= 1:
        c_here = provider.covering_upper(n, r + 1, r)
        if c_here is not None and c_here >= 1:
            fields['upper_2c_minus_1'] = BoundValue(two_c_bound(c_here), SRC_TWO_C)
        if n >= r + 2:
            cc_prev = provider.cc_upper(n - 1, r)
            c_prev = provider.covering_upper(n - 1, r, r - 1)
            if cc_prev is not None and c_prev is not None:
                fields['upper_recursive'] = BoundValue(recursive_cc_upper(cc_prev, c_prev), SRC_RECURSIVE)
        values = [provider.covering_upper(i, r, r - 1) for i in range(r, n)]
        if all(v is not None for v in values):
            fields['upper_sum'] = BoundValue(sum_upper(n, r, values), SRC_SUM)
    lo, hi = closed_form_cc(n, r)
    if lo is not None:
        fields['closed_lower'] = lo
    if hi is not None:
        fields['closed_upper'] = hi
    return BoundRecord(n=n, r=r, delta0=parity_flag(n, r), **fields)


def asymptotic_ratios(n: int, r: int, record: BoundRecord | None = None) -> dict[str, Fraction]:
    """Bounds divided by C(n,r), with the limits they are compared against."""
    total = binom(n, r)
    out: dict[str, Fraction] = {}
    if record is None:
        record = build_bound_record(n, r)
    lo, hi = record.best_lower, record.best_upper
    if lo is not None:
        out['lower'] = Fraction(lo.value, total)
    if hi is not None:
        out['upper'] = Fraction(hi.value, total)
    if record.upper_s is not None:
        out['S'] = Fraction(record.upper_s.value, total)
    if record.upper_n is not None:
        out['N'] = Fraction(record.upper_n.value, total)
    if r >= 1:
        out['cc1'] = Fraction(total - 1, r * total)
        out['limit_lower'] = Fraction(1, r + 1)
        out['limit_upper'] = Fraction(2, r + 1)
    out['limit_S'] = Fraction(1, 2)
    return out
