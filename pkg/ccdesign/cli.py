# -*- coding: utf-8 -*-
"""命令行入口

子命令：bounds / construct / verify / table / search / dualize / catalog
- 退出码：0 成功或有效；1 领域失败（设计无效、目标被否定、表格不一致、搜索失败）；2 用法或解析错误
- 提示文字来自 TEXTS（en / zh），JSON 与 CSV 输出与语言无关
- 日志只写标准错误；-v / -vv 提高级别，默认级别来自 CCDESIGN_LOG_LEVEL
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import threading
from dataclasses import replace
from pathlib import Path

from . import __version__, bounds, construct, solver, table
from .catalog import Catalog, witness_filename
from .config import Settings, ensure_witness_dir, load_settings
from .core import (
    COVERING,
    MAX_MASK_N,
    CoverParams,
    DesignError,
    DesignFamily,
    DesignFileError,
    ParamError,
    SearchError,
    VerificationError,
)
from .designfile import read_design, serialize_design, write_design
from .verify import complement_preserves_adjacency, dualize, spot_check_covering, verify_family

logger = logging.getLogger('ccdesign')

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

N_HELP = f'ground set size; blocks are bit masks, so n <= {MAX_MASK_N}'

FORMATS = ('text', 'json', 'csv')

METHODS = ('trivial', 'r2', 'N', 'gordon', 'mantel', 'turan', 'kostochka', 'kostochka9a', 'cn3')


TEXTS = {
    'en': {
        'bounds_title': 'Bounds for CC({n},{r})',
        'bounds_lower': 'lower',
        'bounds_upper': 'upper',
        'bounds_best': 'best: [{lo}, {hi}]',
        'bounds_exact': 'exact: {v} ({src})',
        'catalog_line': 'catalog: {}',
        'written': '{label}: {size} blocks, {state} -> {path}',
        'kept': '{label}: {size} blocks, {state}; catalog already holds {best} blocks at {path}',
        'state_connected': 'valid, connected',
        'state_disconnected': 'valid, disconnected ({c} components)',
        'state_invalid': 'INVALID, uncovered {w}',
        'variant': 'variant: {}',
        'open_note': 'optimality open: CC(8,4) is 20 or 21',
        'verify_ok': 'valid {kind} {params}: {size} blocks',
        'verify_bad': 'not a valid {kind} {params}: first failing subset {w}',
        'verify_conn': 'block graph: connected',
        'verify_disc': 'block graph: {c} components, sizes {s}',
        'verify_needs_conn': 'header requires a connected design',
        'spot_ok': 'spot check: {n} random subsets covered',
        'spot_bad': 'spot check: {} uncovered',
        'parse_error': 'cannot read design: {}',
        'param_error': 'invalid parameters: {}',
        'verify_error': 'verification failed: {}',
        'search_refused': 'target {t} is below the lower bound {lo}; refused',
        'search_result': 'search {params}: {status}, size {size}, lower bound {lo}, {it} moves, {el:.1f}s',
        'search_failed': 'search {params}: no witness found (lower bound {lo}, {it} moves)',
        'search_error': 'search failed: {}',
        'table_summary': 'agree {agree}, within-interval {within}, insufficient-data {insufficient}, mismatch {mismatch}',
        'table_mismatch': 'table has {} mismatching cell(s)',
        'table_provenance': 'key letters: same {same}, differs {differs}',
        'shape_line': 'n={n}: unimodal {u}, log-concave {l}',
        'dual_written': 'dual {kind} {params} -> {path}',
        'dual_iso_ok': 'block graphs correspond under complementation',
        'dual_iso_bad': 'block graphs do NOT correspond under complementation',
        'catalog_empty': 'no witnesses in {}',
        'history_empty': 'ledger is empty',
        'interrupted': 'interrupted',
    },
    'zh': {
        'bounds_title': 'CC({n},{r}) 的上下界',
        'bounds_lower': '下界',
        'bounds_upper': '上界',
        'bounds_best': '最佳区间：[{lo}, {hi}]',
        'bounds_exact': '精确值：{v}（{src}）',
        'catalog_line': '目录：{}',
        'written': '{label}：{size} 个区组，{state} -> {path}',
        'kept': '{label}：{size} 个区组，{state}；目录中已有 {best} 个区组的见证 {path}',
        'state_connected': '有效，连通',
        'state_disconnected': '有效，不连通（{c} 个分量）',
        'state_invalid': '无效，未覆盖 {w}',
        'variant': '变体：{}',
        'open_note': '最优性未定：CC(8,4) 为 20 或 21',
        'verify_ok': '有效的 {kind} {params}：{size} 个区组',
        'verify_bad': '不是有效的 {kind} {params}：第一个反例 {w}',
        'verify_conn': '区组图：连通',
        'verify_disc': '区组图：{c} 个分量，大小 {s}',
        'verify_needs_conn': '文件头要求连通设计',
        'spot_ok': '抽样复核：{n} 个随机子集均被覆盖',
        'spot_bad': '抽样复核：{} 未被覆盖',
        'parse_error': '无法读取设计文件：{}',
        'param_error': '参数无效：{}',
        'verify_error': '校验失败：{}',
        'search_refused': '目标 {t} 低于下界 {lo}，拒绝搜索',
        'search_result': '搜索 {params}：{status}，大小 {size}，下界 {lo}，{it} 步，{el:.1f} 秒',
        'search_failed': '搜索 {params}：未找到见证（下界 {lo}，{it} 步）',
        'search_error': '搜索失败：{}',
        'table_summary': '一致 {agree}，区间内 {within}，数据不足 {insufficient}，不一致 {mismatch}',
        'table_mismatch': '表格有 {} 个不一致的格子',
        'table_provenance': '来源字母：相同 {same}，不同 {differs}',
        'shape_line': 'n={n}：单峰 {u}，对数凹 {l}',
        'dual_written': '对偶 {kind} {params} -> {path}',
        'dual_iso_ok': '补集下区组图对应一致',
        'dual_iso_bad': '补集下区组图不对应',
        'catalog_empty': '{} 中没有见证',
        'history_empty': '台账为空',
        'interrupted': '已中断',
    },
}


def _setup_logging(settings: Settings, verbose: int) -> None:
    level = getattr(logging, settings.log_level, logging.WARNING)
    if verbose == 1:
        level = min(level, logging.INFO)
    elif verbose >= 2:
        level = logging.DEBUG
    root = logging.getLogger('ccdesign')
    root.setLevel(level)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
        root.addHandler(handler)


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _state(fam: DesignFamily, t: dict) -> tuple[str, bool]:
    report = verify_family(fam)
    if not report.is_valid_design:
        return t['state_invalid'].format(w=report.first_uncovered_witness), False
    if report.is_connected:
        return t['state_connected'], True
    return t['state_disconnected'].format(c=report.component_count), False


def _label(fam: DesignFamily) -> str:
    return f"{fam.kind} {fam.params}"


def _turan_filename(fam: DesignFamily, connected: bool) -> str:
    p = fam.params
    return f"{'CT' if connected else 'T'}-n{p.n}-m{p.m}-p{p.p}.design"


def _emit_family(fam: DesignFamily, out: Path | None, catalog: Catalog, t: dict) -> None:
    """Write a verified family to `out`, or register it in the catalog when no path is given."""
    state, connected = _state(fam, t)
    if out is not None:
        path = write_design(out, fam, connected=connected)
        print(t['written'].format(label=_label(fam), size=len(fam), state=state, path=path))
        return
    if fam.kind != COVERING:
        path = write_design(catalog.witness_dir / _turan_filename(fam, connected), fam, connected=connected)
        print(t['written'].format(label=_label(fam), size=len(fam), state=state, path=path))
        return
    p = fam.params
    catalog.register_witness(fam, connected_required=connected)
    best = catalog.best_witness(p.n, p.k, p.r, connected=connected)
    path = catalog.witness_dir / witness_filename(p.n, p.k, p.r, connected)
    if best is not None and len(best) < len(fam):
        print(t['kept'].format(label=_label(fam), size=len(fam), state=state, best=len(best), path=path))
    else:
        print(t['written'].format(label=_label(fam), size=len(fam), state=state, path=path))


def _search_config(args, settings: Settings, **overrides) -> solver.SearchConfig:
    cfg = solver.SearchConfig(
        seed=args.seed,
        budget=args.budget,
        parallelism=args.workers or settings.workers,
        restarts=args.restarts,
    )
    return replace(cfg, **overrides)


# ------------------------- Commands -------------------------
def cmd_bounds(args, settings: Settings, catalog: Catalog, t: dict) -> int:
    rec = bounds.build_bound_record(args.n, args.r, provider=catalog)
    entry = catalog.connected_covering_number(args.n, args.r)
    if args.format == 'json':
        doc = rec.to_json()
        doc['catalog'] = entry.to_json()
        print(json.dumps(doc, ensure_ascii=False, indent=2))
        return EXIT_OK
    print(t['bounds_title'].format(n=args.n, r=args.r))
    for name in rec.LOWER_FIELDS:
        v = getattr(rec, name)
        if v is not None:
            extra = f" ({v.exact})" if v.exact is not None else ''
            print(f"  {t['bounds_lower']:<6} {v.source:<16} {v.value}{extra}")
    for name in rec.UPPER_FIELDS:
        v = getattr(rec, name)
        if v is not None:
            print(f"  {t['bounds_upper']:<6} {v.source:<16} {v.value}")
    lo, hi = rec.best_lower, rec.best_upper
    if rec.is_exact:
        print(t['bounds_exact'].format(v=lo.value, src=', '.join(sorted({lo.source, hi.source}))))
    else:
        print(t['bounds_best'].format(lo=lo.value if lo else '-', hi=hi.value if hi else '-'))
    print(t['catalog_line'].format(entry.describe()))
    return EXIT_OK


def cmd_construct(args, settings: Settings, catalog: Catalog, t: dict) -> int:
    m, n, r = args.method, args.n, args.r
    out = Path(args.out) if args.out else None
    turan_out = Path(args.turan_out) if args.turan_out else None
    families: list[DesignFamily] = []
    if m in ('trivial', 'N', 'gordon') and r is None:
        raise ParamError(f"--r is required for method {m}")
    if m != 'kostochka9a' and n is None:
        raise ParamError(f"--n is required for method {m}")
    if m == 'trivial':
        families.append(construct.trivial_cases(n, r))
    elif m == 'r2':
        families.append(construct.construct_r2(n))
    elif m == 'N':
        sub = read_design(Path(args.sub)).family if args.sub else None
        families.append(construct.construct_N(n, r, sub))
    elif m == 'gordon':
        families.append(construct.construct_gordon(n, r))
    elif m == 'mantel':
        families += [construct.construct_mantel_dual(n), construct.mantel_turan(n)]
    elif m == 'turan':
        tur = construct.construct_turan(n)
        families += [dualize(tur), tur]
    elif m == 'kostochka':
        res = construct.construct_kostochka(n)
        families += [res.covering, res.turan]
        print(t['variant'].format(res.variant))
        if res.optimality_open:
            print(t['open_note'])
    elif m == 'kostochka9a':
        tur = construct.kostochka_first_system_9()
        families += [dualize(tur), tur]
    elif m == 'cn3':
        fam = construct.construct_cc_n3(n, catalog, _search_config(args, settings))
        _emit_family(fam, out, catalog, t)
        return EXIT_OK
    _emit_family(families[0], out, catalog, t)
    if len(families) > 1:
        _emit_family(families[1], turan_out, catalog, t)
    return EXIT_OK


def cmd_verify(args, settings: Settings, catalog: Catalog, t: dict) -> int:
    doc = read_design(Path(args.file))
    fam = doc.family
    report = verify_family(fam)
    spot = None
    if args.spot_check and fam.kind == COVERING:
        spot = spot_check_covering(fam.params, fam, args.spot_check, solver.SplitMix64(args.seed))
    ok = report.is_valid_design and (report.is_connected or not doc.connected) and spot is None
    if args.format == 'json':
        print(json.dumps({
            'kind': fam.kind, 'params': list(_param_tuple(fam)), 'size': len(fam),
            'connected_required': doc.connected,
            'is_valid_design': report.is_valid_design,
            'first_uncovered_witness': list(report.first_uncovered_witness) if report.first_uncovered_witness else None,
            'is_connected': report.is_connected,
            'component_count': report.component_count,
            'component_sizes': list(report.component_sizes),
            'spot_check_failure': list(spot) if spot else None,
            'ok': ok,
        }, indent=2))
        return EXIT_OK if ok else EXIT_FAIL
    if report.is_valid_design:
        print(t['verify_ok'].format(kind=fam.kind, params=fam.params, size=len(fam)))
    else:
        print(t['verify_bad'].format(kind=fam.kind, params=fam.params, w=report.first_uncovered_witness))
    if report.is_connected:
        print(t['verify_conn'])
    else:
        print(t['verify_disc'].format(c=report.component_count, s=list(report.component_sizes)))
        if doc.connected:
            print(t['verify_needs_conn'])
    if args.spot_check and fam.kind == COVERING:
        print(t['spot_bad'].format(spot) if spot else t['spot_ok'].format(n=args.spot_check))
    return EXIT_OK if ok else EXIT_FAIL


def _param_tuple(fam: DesignFamily) -> tuple[int, int, int]:
    p = fam.params
    return (p.n, p.k, p.r) if fam.kind == COVERING else (p.n, p.m, p.p)


def cmd_table(args, settings: Settings, catalog: Catalog, t: dict) -> int:
    cells = table.build_table(args.n_max, catalog)
    if args.format == 'json':
        sys.stdout.write(table.render_json(cells, args.n_max))
    elif args.format == 'csv':
        sys.stdout.write(table.render_csv(cells))
    else:
        sys.stdout.write(table.render_text(cells, args.n_max))
        counts = table.summarize(cells)
        if any(counts.values()):
            print(t['table_summary'].format(
                agree=counts[table.MATCH_AGREE], within=counts[table.MATCH_WITHIN],
                insufficient=counts[table.MATCH_INSUFFICIENT], mismatch=counts[table.MATCH_MISMATCH]))
            prov = table.provenance_summary(cells)
            print(t['table_provenance'].format(
                same=prov[table.PROVENANCE_SAME], differs=prov[table.PROVENANCE_DIFFERS]))
        if args.shape:
            for row in table.shape_report(cells):
                print(t['shape_line'].format(n=row['n'], u=row['unimodal'], l=row['log_concave']))
    mismatches = table.summarize(cells)[table.MATCH_MISMATCH]
    if mismatches:
        _err(t['table_mismatch'].format(mismatches))
        return EXIT_FAIL
    return EXIT_OK


def cmd_search(args, settings: Settings, catalog: Catalog, t: dict) -> int:
    params = CoverParams(args.n, args.k, args.r)
    if args.connected and params.k == params.r + 1:
        lower = max(catalog.cc_lower(params.n, params.r), solver.default_lower_bound(params, True))
    elif args.connected:
        lower = solver.default_lower_bound(params, True)
    else:
        lower = catalog.covering_lower(params.n, params.k, params.r)
    if args.target is not None and args.target < lower:
        _err(t['search_refused'].format(t=args.target, lo=lower))
        return EXIT_FAIL
    config = _search_config(args, settings, target_size=args.target,
                            require_connected=args.connected, lower_bound=lower)
    cancel = threading.Event()
    try:
        if args.exhaustive:
            outcome = solver.exhaustive_min(params, args.connected, args.size_cap, config)
        else:
            outcome = solver.local_search(params, config, cancel=cancel)
    except KeyboardInterrupt:
        cancel.set()
        _err(t['interrupted'])
        return EXIT_FAIL
    if outcome.witness is None:
        _err(t['search_failed'].format(params=params, lo=outcome.lower_bound_used, it=outcome.iterations))
        return EXIT_FAIL
    print(t['search_result'].format(params=params, status=outcome.status, size=outcome.size,
                                    lo=outcome.lower_bound_used, it=outcome.iterations, el=outcome.elapsed))
    _emit_family(outcome.witness, Path(args.out) if args.out else None, catalog, t)
    return EXIT_OK


def cmd_dualize(args, settings: Settings, catalog: Catalog, t: dict) -> int:
    doc = read_design(Path(args.file))
    dual = dualize(doc.family)
    text = serialize_design(dual, connected=doc.connected)
    if args.out:
        path = write_design(Path(args.out), dual, connected=doc.connected)
        print(t['dual_written'].format(kind=dual.kind, params=dual.params, path=path))
    else:
        sys.stdout.write(text)
    report = verify_family(dual)
    if not report.is_valid_design:
        _err(t['verify_error'].format(report.first_uncovered_witness))
        return EXIT_FAIL
    cov = doc.family if doc.family.kind == COVERING else dual
    p = cov.params
    if p.k == p.r + 1 and p.n >= p.k + 1:
        same = complement_preserves_adjacency(cov)
        _err(t['dual_iso_ok'] if same else t['dual_iso_bad'])
        if not same:
            return EXIT_FAIL
    return EXIT_OK


def cmd_catalog(args, settings: Settings, catalog: Catalog, t: dict) -> int:
    if args.action == 'history':
        rows = catalog.history()
        if args.format == 'json':
            print(json.dumps(rows, indent=2))
            return EXIT_OK
        if not rows:
            print(t['history_empty'])
        for row in rows:
            print(f"{row['created_at']}  {row['key']:<18} {row['size']:>6}  {row['sha256'][:12]}")
        return EXIT_OK
    if args.action == 'show':
        if args.n is None or args.r is None:
            raise ParamError("catalog show needs --n and --r")
        k = args.r + 1 if args.k is None else args.k
        if args.connected and k == args.r + 1:
            entries = [catalog.connected_covering_number(args.n, args.r)]
        else:
            entries = [catalog.covering_number(args.n, k, args.r)]
    else:
        keys = catalog.witness_keys()
        if not keys:
            print(t['catalog_empty'].format(catalog.witness_dir))
            return EXIT_OK
        entries = []
        for n, k, r, connected in keys:
            if connected and k == r + 1:
                entries.append(catalog.connected_covering_number(n, r))
            else:
                entries.append(catalog.covering_number(n, k, r))
    if args.format == 'json':
        print(json.dumps([e.to_json() for e in entries], indent=2))
    else:
        for e in entries:
            print(e.describe())
    return EXIT_OK


# ------------------------- Parser -------------------------
def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='ccdesign', description='Connected covering designs: bounds, constructions, search, tables.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more log output on stderr (-vv for debug)')
    parser.add_argument('--lang', choices=('en', 'zh'), default=None, help='message language (default: CCDESIGN_LANG or en)')
    parser.add_argument('--witness-dir', default=None, help='witness directory (default: CCDESIGN_WITNESS_DIR or ./witnesses)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('bounds', help='every bound on CC(n,r)')
    p.add_argument('--n', type=_positive, required=True)
    p.add_argument('--r', type=_positive, required=True)
    p.add_argument('--format', choices=('text', 'json'), default='text')
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser('construct', help='run an explicit construction and write the verified design')
    p.add_argument('--method', choices=METHODS, required=True)
    p.add_argument('--n', type=_positive, help=N_HELP)
    p.add_argument('--r', type=_positive, help='r (trivial, N) or t (gordon)')
    p.add_argument('--sub', help='design file with the (n-2, r-1, r-2)-covering for N when n-r is even')
    p.add_argument('--out', help='output file for the covering (default: register in the witness directory)')
    p.add_argument('--turan-out', help='output file for the Turán side, where there is one')
    _add_search_options(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser('verify', help='check a design file')
    p.add_argument('file')
    p.add_argument('--spot-check', type=_positive, default=0, help='also test this many random r-subsets')
    p.add_argument('--seed', type=_positive, default=0)
    p.add_argument('--format', choices=('text', 'json'), default='text')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('table', help='table of CC(n,r) with provenance letters')
    p.add_argument('--n-max', type=_positive, default=table.PRINTED_N_MAX)
    p.add_argument('--format', choices=FORMATS, default='text')
    p.add_argument('--shape', action='store_true', help='report unimodality / log-concavity per n')
    p.set_defaults(func=cmd_table)

    p = sub.add_parser('search', help='search for a (connected) covering')
    p.add_argument('--n', type=_positive, required=True, help=N_HELP)
    p.add_argument('--k', type=_positive, required=True)
    p.add_argument('--r', type=_positive, required=True)
    p.add_argument('--target', type=_positive, default=None)
    p.add_argument('--connected', action='store_true')
    p.add_argument('--exhaustive', action='store_true', help='provably minimum size (tiny instances)')
    p.add_argument('--size-cap', type=_positive, default=None)
    p.add_argument('--out', help='output file (default: register in the witness directory)')
    _add_search_options(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser('dualize', help='complement every block (covering <-> Turán system)')
    p.add_argument('file')
    p.add_argument('--out', help='output file (default: stdout)')
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser('catalog', help='known values and stored witnesses')
    p.add_argument('action', choices=('list', 'show', 'history'))
    p.add_argument('--n', type=_positive)
    p.add_argument('--k', type=_positive)
    p.add_argument('--r', type=_positive)
    p.add_argument('--connected', action='store_true')
    p.add_argument('--format', choices=('text', 'json'), default='text')
    p.set_defaults(func=cmd_catalog)
    return parser


def _add_search_options(p: argparse.ArgumentParser) -> None:
    p.add_argument('--seed', type=_positive, default=0)
    p.add_argument('--budget', type=_positive, default=solver.SearchConfig.budget)
    p.add_argument('--restarts', type=_positive, default=solver.SearchConfig.restarts)
    p.add_argument('--workers', type=_positive, default=None, help='parallel restarts (default: CCDESIGN_WORKERS)')


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = load_settings()
    if args.lang:
        settings = replace(settings, language=args.lang)
    if args.witness_dir:
        settings = replace(settings, witness_dir=Path(args.witness_dir))
    _setup_logging(settings, args.verbose)
    t = TEXTS.get(settings.language, TEXTS['en'])
    catalog = Catalog(ensure_witness_dir(settings))
    try:
        return args.func(args, settings, catalog, t)
    except DesignFileError as e:
        _err(t['parse_error'].format(e))
        return EXIT_USAGE
    except ParamError as e:
        _err(t['param_error'].format(e))
        return EXIT_USAGE
    except VerificationError as e:
        _err(t['verify_error'].format(e))
        return EXIT_FAIL
    except SearchError as e:
        _err(t['search_error'].format(e))
        return EXIT_FAIL
    except DesignError as e:
        _err(t['param_error'].format(e))
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
