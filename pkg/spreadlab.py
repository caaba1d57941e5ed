#!/usr/bin/env python3
"""
一维反应扩散传播速度实验室命令行入口

模拟合作型 Lotka-Volterra 系统及 Fisher / 三次反应项的单物种对照，
测量前沿传播速度并与理论界比较，运行性质检查套件与参数扫描。
"""

import argparse
import json
import os
import sys

from pydantic import ValidationError

from configs.general_constants import DEFAULT_JOBS, FIT_T_MIN, FIT_WINDOW_FRACTION, SUITES, check_essential_dirs
from configs.logging_config import logger
from src.exceptions import ConfigError, SpreadLabError
from src.models.schemas import CoopParams, CubicParams, FisherParams
from src.runner.config import describe_validation_error, parse_config
from src.runner.run import plot_ready_fronts, run, speeds_from_fronts_csv
from src.runner.scenarios import scenario, scenario_names
from src.runner.sweep import parse_sweep_spec, sweep
from src.theory.summary import theory_summary
from src.verify.suites import suite_run, summary_table
from utils.artifacts import write_frame, write_jsonl
from utils.flat_config import parse_value

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

PARAMS_BY_KIND = {
    'coop': CoopParams,
    'fisher': FisherParams,
    'cubic': CubicParams,
}


def report_outcome(outcome) -> int:
    report = outcome.report()
    for entry in report.entries:
        bounds = f'lower={entry.lower}, upper={entry.upper}'
        print(f'{entry.species}: speed={entry.measured:.4f} ({bounds}) {"PASS" if entry.passed else "FAIL"}')
    if outcome.result.diagnostics.boundary_contaminated:
        print('warning: front reached the boundary guard; speeds may be contaminated')
    print(f'artifacts: {outcome.out_dir}')
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_simulate(args) -> int:
    return report_outcome(run(parse_config(args.config), args.out))


def cmd_scenario(args) -> int:
    if args.list:
        print('\n'.join(scenario_names()))
        return EXIT_OK
    if not args.name:
        raise ConfigError('scenario name is required (use --list to see presets)')
    return report_outcome(run(scenario(args.name), args.out))


def cmd_speed(args) -> int:
    if not 0 < args.window <= 1 or args.t_min < 0:
        raise ConfigError(f'need 0 < --window <= 1 and --t-min >= 0 (got {args.window}, {args.t_min})')
    table = speeds_from_fronts_csv(args.fronts, args.window, args.t_min)
    sys.stdout.write(table.to_csv(index=False, float_format='%.6f', lineterminator='\n'))
    return EXIT_OK if (table['status'] == 'ok').all() else EXIT_FAILED


def parse_params(text, kind):
    """'d1=1,r1=2' -> 模型参数"""
    values = {'kind': kind}
    for item in filter(None, (part.strip() for part in text.split(','))):
        if '=' not in item:
            raise ConfigError(f'--params entries must look like key=value (got {item!r})')
        key, value = item.split('=', 1)
        values[key.strip()] = parse_value(value)
    try:
        return PARAMS_BY_KIND[kind].model_validate(values)
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e, '--params')) from e


def cmd_theory(args) -> int:
    if args.c and args.kind != 'coop':
        raise ConfigError(f'--c applies to the cooperative model only (got --kind {args.kind})')
    if any(c <= 0 for c in args.c or ()):
        raise ConfigError(f'--c values must be > 0 (got {args.c})')
    params = parse_params(args.params, args.kind)
    print(json.dumps(theory_summary(params, args.c or ()), ensure_ascii=False, indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    results = suite_run(args.suite, args.jobs)
    if args.out:
        write_jsonl(args.out, results)
    else:
        for result in results:
            print(result.model_dump_json())
    print(summary_table(results))
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILED


def cmd_sweep(args) -> int:
    table = sweep(parse_sweep_spec(args.spec, args.jobs), args.out)
    print(f'aggregate: {os.path.join(args.out, "aggregate.csv")}')
    ok = bool((table['status'] == 'ok').all())
    if 'passed' in table:
        ok = ok and bool(table['passed'].fillna(False).astype(bool).all())
    return EXIT_OK if ok else EXIT_FAILED


def cmd_plot_csv(args) -> int:
    out = args.out or os.path.join(args.run, 'fronts_plot.csv')
    write_frame(out, plot_ready_fronts(args.run))
    print(out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        description='一维反应扩散传播速度实验室',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  # 运行预设场景（Fisher 前沿速度）
  python spreadlab.py scenario fisher --out runs/fisher

  # 按配置文件模拟
  python spreadlab.py simulate --config my_run.cfg --out runs/my_run

  # 从前沿轨迹重新拟合速度
  python spreadlab.py speed --fronts runs/fisher/fronts.csv

  # 理论量与行波判定
  python spreadlab.py theory --params d1=1,d2=1,r1=1,r2=0.8,b1=0.2,b2=0.5 --c 2.1 --c 3

  # 性质检查套件
  python spreadlab.py verify --suite smoke

  # 参数扫描
  python spreadlab.py sweep --spec b2_sweep.cfg --out runs/b2 --jobs 4

退出码: 0 成功，1 性质或验收失败，2 配置错误
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    simulate_parser = subparsers.add_parser('simulate', help='按配置文件模拟并写出产物')
    simulate_parser.add_argument('--config', '-c', required=True, help='扁平键值格式的配置文件')
    simulate_parser.add_argument('--out', '-o', default=None, help='输出目录')
    simulate_parser.set_defaults(handler=cmd_simulate)

    scenario_parser = subparsers.add_parser('scenario', help='运行预设场景')
    scenario_parser.add_argument('name', nargs='?', help='场景名称')
    scenario_parser.add_argument('--out', '-o', default=None, help='输出目录')
    scenario_parser.add_argument('--list', '-l', action='store_true', help='列出所有预设场景')
    scenario_parser.set_defaults(handler=cmd_scenario)

    speed_parser = subparsers.add_parser('speed', help='从 fronts.csv 拟合前沿速度')
    speed_parser.add_argument('--fronts', required=True, help='fronts.csv 路径')
    speed_parser.add_argument('--window', type=float, default=FIT_WINDOW_FRACTION,
                              help=f'拟合取样本末尾的比例 (默认: {FIT_WINDOW_FRACTION})')
    speed_parser.add_argument('--t-min', type=float, default=FIT_T_MIN,
                              help=f'拟合样本的最早时间 (默认: {FIT_T_MIN})')
    speed_parser.set_defaults(handler=cmd_speed)

    theory_parser = subparsers.add_parser('theory', help='打印理论速度、情形与行波判定')
    theory_parser.add_argument('--params', required=True, help='逗号分隔的 key=value')
    theory_parser.add_argument('--kind', choices=sorted(PARAMS_BY_KIND), default='coop', help='模型类型 (默认: coop)')
    theory_parser.add_argument('--c', type=float, action='append', help='要判定的行波速度，可重复')
    theory_parser.set_defaults(handler=cmd_theory)

    verify_parser = subparsers.add_parser('verify', help='运行性质检查套件')
    verify_parser.add_argument('--suite', required=True, choices=sorted(SUITES), help='套件名称')
    verify_parser.add_argument('--jobs', '-j', type=int, default=DEFAULT_JOBS, help=f'并发进程数 (默认: {DEFAULT_JOBS})')
    verify_parser.add_argument('--out', '-o', default=None, help='逐行结果写入的文件')
    verify_parser.set_defaults(handler=cmd_verify)

    sweep_parser = subparsers.add_parser('sweep', help='参数扫描')
    sweep_parser.add_argument('--spec', required=True, help='扫描描述文件')
    sweep_parser.add_argument('--out', '-o', required=True, help='输出目录')
    sweep_parser.add_argument('--jobs', '-j', type=int, default=None, help='并发进程数，覆盖描述文件')
    sweep_parser.set_defaults(handler=cmd_sweep)

    plot_parser = subparsers.add_parser('plot-csv', help='把前沿轨迹整理成便于画图的宽表 CSV')
    plot_parser.add_argument('--run', required=True, help='一次运行的输出目录')
    plot_parser.add_argument('--out', '-o', default=None, help='输出文件 (默认: RUN/fronts_plot.csv)')
    plot_parser.set_defaults(handler=cmd_plot_csv)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    check_essential_dirs()
    try:
        return args.handler(args)
    except ConfigError as e:
        logger.error(f'configuration error: {e}')
        print(f'configuration error: {e}', file=sys.stderr)
        return EXIT_CONFIG
    except SpreadLabError as e:
        logger.error(f'{type(e).__name__}: {e}')
        print(f'error: {e}', file=sys.stderr)
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
