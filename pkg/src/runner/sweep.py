import itertools
import os
from concurrent.futures import ProcessPoolExecutor

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from configs.general_constants import DEFAULT_JOBS
from configs.logging_config import logger
from src.exceptions import ConfigError, SpreadLabError
from src.fronts.tracking import species_label
from src.runner.config import RunConfig, config_from_flat
from src.runner.run import run
from src.runner.scenarios import scenario_flat
from src.theory.summary import theory_columns
from utils.artifacts import ensure_dir, write_frame
from utils.flat_config import read_flat


class SweepSpec(BaseModel):
    """基础配置加若干扫描轴，按笛卡尔积展开"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    base: RunConfig
    # 扁平键 -> 取值列表，例如 {'model.b2': [0, 0.25, 0.5]}
    axes: dict[str, list] = Field(min_length=1)
    jobs: int = Field(default=DEFAULT_JOBS, ge=1)

    @field_validator('axes')
    @classmethod
    def check_axes(cls, axes):
        for key, values in axes.items():
            if not values:
                raise ValueError(f'axis {key} has no values')
        return axes

    def points(self) -> list:
        keys = list(self.axes)
        return [dict(zip(keys, combo)) for combo in itertools.product(*self.axes.values())]


def format_axis_value(value) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    return f'{float(value):.4f}'


def point_dirname(assignment: dict) -> str:
    """目录名按轴取值固定小数位编码，例如 model.b2=0.5000"""
    return '__'.join(f'{key}={format_axis_value(value)}' for key, value in assignment.items())


def point_flat(base: RunConfig, assignment: dict) -> dict:
    flat = base.echo()
    flat.pop('output.dir', None)
    if any(key.startswith('grid.') for key in assignment):
        # 改了区间或 dx 时由 dx 重新推出节点数
        flat.pop('grid.n', None)
    flat.update(assignment)
    return flat


def run_point(assignment: dict, flat: dict, out_dir) -> dict:
    """跑一个扫描点并返回聚合表的一行；失败只记在这一行"""
    row = {**assignment, 'dir': os.path.basename(out_dir), 'status': 'ok', 'error': ''}
    try:
        config = config_from_flat(flat, source=point_dirname(assignment))
        outcome = run(config, out_dir)
    except (SpreadLabError, ValueError) as e:
        logger.error(f'sweep point {assignment} failed: {e}')
        row.update(status='failed', error=str(e).splitlines()[0])
        return row

    report = outcome.report()
    for index in range(config.build_model().n_species):
        label = species_label(index)
        row[f'speed_{label}'] = outcome.speed(index)
        entry = report.for_species(label)
        row[f'passed_{label}'] = None if entry is None else entry.passed
    row.update(theory_columns(config.model))
    row['passed'] = report.passed
    row['boundary_contaminated'] = outcome.result.diagnostics.boundary_contaminated
    return row


def sweep(spec: SweepSpec, out) -> pd.DataFrame:
    """
    展开并运行所有扫描点，写出 aggregate.csv

    每个点只写自己的子目录；聚合表在所有点结束后由当前进程一次写出。
    """
    ensure_dir(out)
    points = spec.points()
    tasks = [(assignment, point_flat(spec.base, assignment), os.path.join(out, point_dirname(assignment)))
             for assignment in points]
    logger.info(f'sweep: {len(tasks)} points, jobs={spec.jobs}, out={out}')

    if spec.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as executor:
            rows = list(executor.map(run_point, *zip(*tasks)))
    else:
        rows = [run_point(*task) for task in tasks]

    table = pd.DataFrame(rows)
    write_frame(os.path.join(out, 'aggregate.csv'), table)
    failed = int((table['status'] != 'ok').sum())
    logger.info(f'sweep finished: {len(rows) - failed} ok, {failed} failed')
    return table


def parse_sweep_spec(path, jobs=None) -> SweepSpec:
    """
    读取扫描描述文件

    格式与运行配置相同：
        sweep.scenario = "remark_r3"   # 可选，以预设为基础
        base.step.t_end = 60           # 覆盖基础配置
        axes.model.b2 = [0, 0.5]       # 扫描轴
        sweep.jobs = 2
    """
    if not os.path.isfile(path):
        raise ConfigError(f'sweep spec not found: {path}')
    try:
        flat = read_flat(path)
    except ValueError as e:
        raise ConfigError(f'malformed sweep spec: {e}') from e

    unknown = [key for key in flat if not key.startswith(('base.', 'axes.', 'sweep.'))]
    if unknown:
        raise ConfigError(f'{path}: schema violation: unknown keys {", ".join(unknown)}')
    name = flat.get('sweep.scenario')
    base_flat = scenario_flat(name) if name else {}
    base_flat.update({key[len('base.'):]: value for key, value in flat.items() if key.startswith('base.')})
    base = config_from_flat(base_flat, source=f'{path} (base)')

    axes = {}
    for key, values in flat.items():
        if key.startswith('axes.'):
            axes[key[len('axes.'):]] = values if isinstance(values, list) else [values]
    try:
        return SweepSpec(base=base, axes=axes, jobs=jobs or flat.get('sweep.jobs', DEFAULT_JOBS))
    except ValueError as e:
        raise ConfigError(f'{path}: invariant violation: {e}') from e
