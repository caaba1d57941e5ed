import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from configs.general_constants import DOMAIN_MARGIN_CELLS, OUTPUT_ROOT
from configs.logging_config import logger
from src.exceptions import ConfigError
from src.fronts.speed import SpeedRecord, check_against_bounds, estimate_speed, spreading_verdict
from src.fronts.tracking import FrontTrace, species_label
from src.runner.config import RunConfig
from src.solver.observers import ConeMonitor, FrontRecorder, SnapshotRecorder
from src.solver.stepper import IntegrationResult, integrate
from src.theory.bounds import speed_bounds
from utils.artifacts import ensure_dir, write_frame, write_jsonl, write_text
from utils.flat_config import dump_flat

ARTIFACTS = ('config.echo', 'snapshots.csv', 'fronts.csv', 'speeds.jsonl', 'diagnostics.log')
# 配置了 observers.cone_slopes 时才写出
CONE_ARTIFACT = 'cones.csv'


@dataclass
class RunOutcome:
    config: RunConfig
    result: IntegrationResult
    bounds: object
    # (species, direction) -> SpeedEstimate，样本不足时为 None
    estimates: dict = field(default_factory=dict)
    margin_ok: bool = True
    out_dir: Optional[str] = None

    @property
    def snapshots(self):
        return self.result.records.get('snapshots', [])

    @property
    def traces(self):
        return self.result.records.get('fronts', [])

    @property
    def cones(self):
        return self.result.records.get('cones', [])

    def primary_estimates(self) -> dict:
        """每个物种取向右前沿的估计，没有时退回向左前沿"""
        chosen = {}
        for (species, direction), estimate in sorted(self.estimates.items(), key=lambda item: item[0][1] != 'right'):
            if estimate is not None and species not in chosen:
                chosen[species] = estimate
        return chosen

    def speed(self, species) -> Optional[float]:
        estimate = self.primary_estimates().get(species)
        return None if estimate is None else abs(estimate.speed)

    def report(self):
        return spreading_verdict(self.primary_estimates(), self.bounds)


def required_half_width(config: RunConfig, bounds) -> float:
    """区间半宽须不小于 c*t_end + 20*dx + w，c 取理论速度中最大者"""
    speeds = [value for value in bounds.lower + bounds.upper if value is not None]
    support = config.initial.width + config.initial.sigma if config.initial.kind == 'compact_bump' else 0.0
    return max(speeds) * config.step.t_end + DOMAIN_MARGIN_CELLS * config.grid.dx + support


def simulate(config: RunConfig) -> RunOutcome:
    """按配置推进并估计各前沿速度，不写文件"""
    model = config.build_model()
    bounds = speed_bounds(config.model)

    half_width = min(-config.grid.x_min, config.grid.x_max)
    needed = required_half_width(config, bounds)
    margin_ok = half_width >= needed
    if not margin_ok:
        logger.warning(f'domain half-width {half_width} is below the required {needed:.2f}; '
                       f'fronts may reach the boundary before t_end={config.step.t_end}')

    observers = [
        SnapshotRecorder(),
        FrontRecorder(config.front_levels(), config.observers.directions),
    ]
    if config.observers.cone_slopes:
        observers.append(ConeMonitor(config.observers.cone_slopes))
    result = integrate(model, config.initial, config.grid, config.step, observers)

    estimates = {}
    for trace in result.records['fronts']:
        try:
            estimates[(trace.species, trace.direction)] = estimate_speed(
                trace, config.observers.window_fraction, config.observers.fit_t_min
            )
        except ValueError as e:
            logger.warning(f'no speed estimate for {trace.label}/{trace.direction}: {e}')
            estimates[(trace.species, trace.direction)] = None
    return RunOutcome(config=config, result=result, bounds=bounds, estimates=estimates, margin_ok=margin_ok)


def snapshots_frame(snapshots) -> pd.DataFrame:
    """长表：每个快照的每个节点一行，列为 t, x, u1[, u2]"""
    frames = []
    for state in snapshots:
        columns = {'t': np.full(state.grid.n, state.t), 'x': state.x}
        for index, values in enumerate(state.species):
            columns[species_label(index)] = values
        frames.append(pd.DataFrame(columns))
    return pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=['t', 'x'])


def fronts_frame(traces) -> pd.DataFrame:
    rows = [
        {'species': trace.label, 'direction': trace.direction, 'lambda': trace.level, 't': t, 'x': x}
        for trace in traces
        for t, x in trace.samples
    ]
    return pd.DataFrame(rows, columns=['species', 'direction', 'lambda', 't', 'x'])


def cones_frame(cones) -> pd.DataFrame:
    rows = [
        {'t': t, 'c': cone.c, 'species': species_label(index), 'inf': low, 'sup': high}
        for cone in cones
        for t, pairs in cone.samples
        for index, (low, high) in enumerate(pairs)
    ]
    return pd.DataFrame(rows, columns=['t', 'c', 'species', 'inf', 'sup'])


def speed_records(outcome: RunOutcome) -> list:
    records = []
    for trace in outcome.traces:
        estimate = outcome.estimates.get((trace.species, trace.direction))
        if estimate is None:
            continue
        bounds = outcome.bounds
        records.append(SpeedRecord(
            species=trace.label,
            direction=trace.direction,
            level=trace.level,
            speed=estimate.speed,
            residual_rms=estimate.residual_rms,
            window_start=estimate.fit_window[0],
            window_end=estimate.fit_window[1],
            verdicts=check_against_bounds(
                abs(estimate.speed), bounds.lower[trace.species], bounds.upper[trace.species],
                lower_source=bounds.lower_source[trace.species],
                upper_source=bounds.upper_source[trace.species],
            ),
        ))
    return records


def diagnostics_text(outcome: RunOutcome) -> str:
    diagnostics = outcome.result.diagnostics
    lines = [
        f'dt = {diagnostics.dt!r}',
        f'steps = {diagnostics.steps}',
        f'clamp_count = {diagnostics.clamp_count}',
        f'boundary_contaminated = {str(diagnostics.boundary_contaminated).lower()}',
        f'domain_margin_ok = {str(outcome.margin_ok).lower()}',
    ]
    for entry in outcome.report().entries:
        lines.append(f'verdict {entry.species}: measured={entry.measured:.6f} '
                     f'lower={entry.lower} upper={entry.upper} passed={str(entry.passed).lower()}')
    for snap in diagnostics.snapshots:
        lines.append(f'snapshot t={snap.t!r} steps={snap.steps} clamped={snap.clamped} '
                     f'boundary_contaminated={str(snap.boundary_contaminated).lower()}')
    return '\n'.join(lines) + '\n'


def write_artifacts(outcome: RunOutcome, out) -> str:
    ensure_dir(out)
    existing = [name for name in ARTIFACTS + (CONE_ARTIFACT,) if os.path.exists(os.path.join(out, name))]
    if existing:
        logger.warning(f'overwriting existing artifacts in {out}: {", ".join(existing)}')

    echo = outcome.config.echo()
    echo['output.dir'] = out
    write_text(os.path.join(out, 'config.echo'), dump_flat(echo, header='fully resolved configuration'))
    write_frame(os.path.join(out, 'snapshots.csv'), snapshots_frame(outcome.snapshots))
    write_frame(os.path.join(out, 'fronts.csv'), fronts_frame(outcome.traces))
    write_jsonl(os.path.join(out, 'speeds.jsonl'), speed_records(outcome))
    write_text(os.path.join(out, 'diagnostics.log'), diagnostics_text(outcome))
    if outcome.cones:
        write_frame(os.path.join(out, CONE_ARTIFACT), cones_frame(outcome.cones))
    outcome.out_dir = out
    logger.info(f'artifacts written to {out}')
    return out


def run(config: RunConfig, out=None) -> RunOutcome:
    """
    模拟并把五个产物写入输出目录

    Args:
        config: 已验证的配置
        out: 输出目录；为空时依次取 config.output.dir 和 OUTPUT_ROOT/run

    Raises:
        ArtifactWriteError: 目录不可写或写文件失败，信息中带路径
    """
    out = out or config.output.dir or os.path.join(OUTPUT_ROOT, 'run')
    # 先确认目录可写，避免白跑一次模拟
    ensure_dir(out)
    outcome = simulate(config)
    write_artifacts(outcome, out)
    return outcome


FRONTS_COLUMNS = ('species', 'direction', 'lambda', 't', 'x')


def read_fronts_csv(path) -> pd.DataFrame:
    """
    读取一次运行写出的 fronts.csv

    Raises:
        ConfigError: 文件不存在、无法解析或缺少列
    """
    if not os.path.isfile(path):
        raise ConfigError(f'fronts file not found: {path}')
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
    except (OSError, ValueError) as e:
        raise ConfigError(f'cannot read fronts file {path}: {e}') from e
    missing = [column for column in FRONTS_COLUMNS if column not in frame.columns]
    if missing:
        raise ConfigError(f'{path}: missing columns {", ".join(missing)}')
    return frame


def traces_from_fronts_csv(path) -> list:
    frame = read_fronts_csv(path)
    traces = []
    for (label, direction, level), group in frame.groupby(['species', 'direction', 'lambda'], sort=True):
        try:
            trace = FrontTrace(species=int(str(label).lstrip('u')) - 1, direction=direction, level=float(level))
            for t, x in group.sort_values('t')[['t', 'x']].itertuples(index=False):
                trace.add(t, x)
        except ValueError as e:
            raise ConfigError(f'{path}: bad trace {label}/{direction}: {e}') from e
        traces.append(trace)
    return traces


def speeds_from_fronts_csv(path, window_fraction, t_min) -> pd.DataFrame:
    """
    对 fronts.csv 中的每条前沿重新拟合速度

    样本不足的前沿只在自己那一行记为 failed，其余照常拟合。
    """
    rows = []
    for trace in traces_from_fronts_csv(path):
        row = {'species': trace.label, 'direction': trace.direction, 'lambda': trace.level,
               'status': 'ok', 'error': ''}
        try:
            estimate = estimate_speed(trace, window_fraction, t_min)
        except ValueError as e:
            logger.warning(f'no speed estimate for {trace.label}/{trace.direction}: {e}')
            row.update(status='failed', error=str(e))
            rows.append(row)
            continue
        row.update({
            'speed': estimate.speed, 'residual_rms': estimate.residual_rms,
            'window_start': estimate.fit_window[0], 'window_end': estimate.fit_window[1],
            'n_points': estimate.n_points,
        })
        rows.append(row)
    return pd.DataFrame(rows, columns=['species', 'direction', 'lambda', 'status', 'error', 'speed',
                                       'residual_rms', 'window_start', 'window_end', 'n_points'])


def plot_ready_fronts(run_dir) -> pd.DataFrame:
    """宽表：t 加上每个 物种_方向 一列前沿位置，便于直接画图"""
    frame = read_fronts_csv(os.path.join(run_dir, 'fronts.csv'))
    frame['column'] = frame['species'] + '_' + frame['direction']
    wide = frame.pivot_table(index='t', columns='column', values='x', aggfunc='first')
    wide.columns.name = None
    return wide.reset_index()
