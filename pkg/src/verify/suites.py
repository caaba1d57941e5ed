import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from configs.general_constants import ACCEPTANCE, DEFAULT_JOBS, ORDER_TOLERANCE, SUITES
from configs.logging_config import logger
from src.exceptions import ConfigError
from src.model_factory import ModelFactory
from src.models.schemas import CoopParams, FisherParams
from src.runner.run import simulate
from src.runner.scenarios import scenario, scenario_names
from src.solver.grid import build_grid
from src.solver.initial import InitialCondition
from src.solver.stepper import StepControl
from src.theory.bounds import coop_lower_speed, fisher_speed
from src.theory.regime import REGIME_ORDER, classify_regime, satisfied_regimes, theorem_holds
from src.theory.waves import wave_verdict
from src.verify.properties import (
    PropertyResult, bounds_invariant_check, clamp_free_check, comparison_order_check,
    convergence_to_K_check, dominating_fisher_model, outer_decay_check, snapshots_of,
    speed_window_check, u1_floor_check, upper_comparison_check
)

THEORY_SEED = 20240607
GAMMA_TOLERANCE = 1e-10

# 小区间短时间的比较原理检查
SHORT_GRID = dict(x_min=-60.0, x_max=60.0, n=601)
SHORT_STEP = StepControl(t_end=20.0, snapshot_every=1.0)
BUMP = InitialCondition(kind='compact_bump', amplitudes=[0.5], width=5.0, sigma=1.0)
REMARK_R3 = CoopParams(d1=1.0, d2=1.0, r1=1.0, r2=0.8, b1=0.2, b2=0.5)
UNIT_FISHER = FisherParams(d=1.0, r=1.0, K=1.0)


# 全分辨率场景的模拟结果，键为 (场景名, dx)；suite_run 在父进程中预先填充
OUTCOME_CACHE = {}


def simulate_scenario(name, dx=None):
    overrides = {'grid.dx': dx} if dx is not None else None
    return simulate(scenario(name, overrides))


def scenario_outcome(name, dx=None):
    key = (name, dx)
    if key not in OUTCOME_CACHE:
        OUTCOME_CACHE[key] = simulate_scenario(name, dx)
    return OUTCOME_CACHE[key]


def order_identical():
    model = ModelFactory.create_model(UNIT_FISHER)
    g = build_grid(**SHORT_GRID)
    return comparison_order_check(model, BUMP, BUMP, g, SHORT_STEP, name='order_identical')


def order_fisher_scaled():
    model = ModelFactory.create_model(UNIT_FISHER)
    g = build_grid(**SHORT_GRID)
    upper = BUMP.model_copy(update={'amplitudes': [0.55]})
    return comparison_order_check(model, BUMP, upper, g, SHORT_STEP, name='order_fisher_scaled')


def coop_box_pair():
    box = ModelFactory.create_model(REMARK_R3).upper_box((0.5, 0.5))
    lower = BUMP.model_copy(update={'amplitudes': [0.5, 0.5]})
    upper = InitialCondition(kind='constant', amplitudes=list(box.bounds))
    return lower, upper


def order_coop_box():
    model = ModelFactory.create_model(REMARK_R3)
    lower, upper = coop_box_pair()
    return comparison_order_check(model, lower, upper, build_grid(**SHORT_GRID), SHORT_STEP, name='order_coop_box')


def order_swap_symmetry():
    """交换两组初值并反转期望顺序，违反量应完全一致"""
    model = ModelFactory.create_model(REMARK_R3)
    lower, upper = coop_box_pair()
    g = build_grid(**SHORT_GRID)
    forward = comparison_order_check(model, lower, upper, g, SHORT_STEP, order='below')
    swapped = comparison_order_check(model, upper, lower, g, SHORT_STEP, order='above')
    worst = max(forward.worst_violation, swapped.worst_violation,
                abs(forward.worst_violation - swapped.worst_violation))
    return PropertyResult.from_violation('order_swap_symmetry', worst, ORDER_TOLERANCE,
                                         detail=f'below={forward.worst_violation}, above={swapped.worst_violation}')


def box_remark_r3_short():
    model = ModelFactory.create_model(REMARK_R3)
    ic = BUMP.model_copy(update={'amplitudes': [0.5, 0.5]})
    snapshots = snapshots_of(model, ic, build_grid(-100.0, 100.0, 1001), SHORT_STEP)
    box = model.upper_box(tuple(values.max() for values in snapshots[0].species))
    return bounds_invariant_check(snapshots, box, name='box_remark_r3_short')


def scenario_box(name):
    outcome = scenario_outcome(name)
    model = outcome.config.build_model()
    box = model.upper_box(tuple(values.max() for values in outcome.snapshots[0].species))
    return bounds_invariant_check(outcome.snapshots, box, name=f'box_{name}')


def box_scenarios():
    return [scenario_box(name) for name in scenario_names()]


def positivity_scenarios():
    return [clamp_free_check(scenario_outcome(name).result.diagnostics, name=f'positivity_{name}')
            for name in scenario_names()]


def acceptance_speed(key):
    entry = ACCEPTANCE[key]
    measured = scenario_outcome(entry['scenario']).speed(entry['species'])
    if measured is None:
        return PropertyResult.from_violation(key, math.inf, 0.0, detail='no speed estimate')
    return speed_window_check(key, measured, entry['low'], entry['high'])


def separation_remark_r2():
    outcome = scenario_outcome('remark_r2')
    fast, slow = outcome.speed(0), outcome.speed(1)
    if fast is None or slow is None:
        return PropertyResult.from_violation('separation_remark_r2', math.inf, 0.0, detail='no speed estimate')
    return speed_window_check('separation_remark_r2', fast - slow, 1.8, None)


def convergence_remark_r3():
    outcome = scenario_outcome('remark_r3')
    return convergence_to_K_check(outcome.snapshots, outcome.config.model, c=1.0, t_tail=60.0,
                                  name='convergence_remark_r3')


def u1_floor_remark_r3():
    outcome = scenario_outcome('remark_r3')
    return u1_floor_check(outcome.snapshots, outcome.config.model, c=1.0, t_tail=60.0, name='u1_floor_remark_r3')


def upper_comparison_remark_r2():
    """u2 始终不超过以 u2 初值出发的 logistic 上解"""
    outcome = scenario_outcome('remark_r2')
    config = outcome.config
    dominating = dominating_fisher_model(config.model)
    phi2 = config.initial.model_copy(update={'amplitudes': [config.initial.amplitudes_for(2)[1]]})
    w_snapshots = snapshots_of(dominating, phi2, config.grid, config.step)
    return upper_comparison_check(outcome.snapshots, w_snapshots, species=1, name='upper_comparison_remark_r2')


def outer_decay_fisher():
    outcome = scenario_outcome('fisher')
    p = outcome.config.model
    return outer_decay_check(outcome.snapshots, 0, fisher_speed(p.d, p.r) + 0.2, t_tail=60.0, tolerance=1e-3,
                             name='outer_decay_fisher')


def refinement_fisher():
    """dx 减半（dt 随 CFL 缩小）后测得速度的变化不超过 0.02"""
    coarse = scenario_outcome('fisher').speed(0)
    fine = scenario_outcome('fisher', dx=0.1).speed(0)
    if coarse is None or fine is None:
        return PropertyResult.from_violation('refinement_fisher', math.inf, 0.02, detail='no speed estimate')
    return PropertyResult.from_violation('refinement_fisher', abs(coarse - fine), 0.02,
                                         detail=f'dx=0.2: {coarse:.6f}, dx=0.1: {fine:.6f}')


def random_coop_params(rng, equal_diffusion_chance=0.0, equal_rate_chance=0.0) -> CoopParams:
    d1, d2, r1, r2 = rng.uniform(0.2, 3.0, size=4)
    if rng.random() < equal_diffusion_chance:
        d2 = d1
    if rng.random() < equal_rate_chance:
        r2 = r1
    b1 = rng.uniform(0.0, 1.5)
    # b1*b2 < 1
    b2 = rng.uniform(0.0, min(1.5, 0.95 / b1)) if b1 > 0 else rng.uniform(0.0, 1.5)
    return CoopParams(d1=d1, d2=d2, r1=r1, r2=r2, b1=b1, b2=b2)


def oracle_window(d, r, c):
    """np.roots 求 d*g^2 - c*g + r 的根，复根返回 None"""
    roots = np.roots([d, -c, r])
    if np.iscomplexobj(roots) and np.any(np.abs(roots.imag) > 0):
        return None
    low, high = sorted(roots.real)
    return low, high


def theory_gamma_oracle():
    rng = np.random.default_rng(THEORY_SEED)
    worst = 0.0
    mismatches = 0
    for _ in range(20):
        p = random_coop_params(rng)
        c_max = 3.0 * max(fisher_speed(p.d1, p.r1), fisher_speed(p.d2, p.r2))
        for c in np.linspace(0.05, c_max, 200):
            verdict = wave_verdict(p, float(c))
            for window, (d, r) in ((verdict.gamma1, (p.d1, p.r1)), (verdict.gamma2, (p.d2, p.r2))):
                expected = oracle_window(d, r, float(c))
                if (window is None) != (expected is None):
                    mismatches += 1
                elif window is not None:
                    worst = max(worst, *(abs(a - b) / max(1.0, abs(b)) for a, b in zip(window, expected)))
            if (verdict.verdict == 'not_exists') != (c < fisher_speed(p.d1, p.r1)):
                mismatches += 1
    worst = math.inf if mismatches else worst
    return PropertyResult.from_violation('theory_gamma_oracle', worst, GAMMA_TOLERANCE,
                                         detail=f'mismatches={mismatches}')


def independent_regime(p: CoopParams) -> str:
    k2 = (1 + p.b2) / (1 - p.b1 * p.b2)
    tags = []
    if p.d1 == p.d2 and p.r1 == p.r2:
        tags.append('remark_r1')
    if p.d1 * p.r1 > p.d2 * p.r2 * k2:
        tags.append('remark_r2')
    if p.d1 == p.d2 and p.r2 < p.r1 <= p.r2 * (1 + p.b2):
        tags.append('remark_r3')
    if tags:
        return tags[0]
    return 'theorem_only' if p.d1 * p.r1 > p.d2 * p.r2 else 'outside'


def theory_regime_oracle():
    rng = np.random.default_rng(THEORY_SEED + 1)
    mismatches = 0
    for _ in range(1000):
        p = random_coop_params(rng, equal_diffusion_chance=0.5, equal_rate_chance=0.2)
        tag = classify_regime(p)
        matched = satisfied_regimes(p)
        if tag != independent_regime(p) or (matched and matched[0] != tag):
            mismatches += 1
        if [t for t in REGIME_ORDER if t in matched] != matched:
            mismatches += 1
    return PropertyResult.from_violation('theory_regime_oracle', mismatches, 0.0)


def theory_wave_monotone():
    """'exists' 对 c 向上封闭：一旦存在，更大的 c 也存在"""
    rng = np.random.default_rng(THEORY_SEED + 2)
    reversals = 0
    for _ in range(50):
        p = random_coop_params(rng, equal_diffusion_chance=0.5)
        c_max = 3.0 * max(fisher_speed(p.d1, p.r1), fisher_speed(p.d2, p.r2))
        seen_exists = False
        for c in np.linspace(0.05, c_max, 200):
            exists = wave_verdict(p, float(c)).verdict == 'exists'
            if seen_exists and not exists:
                reversals += 1
            seen_exists |= exists
    return PropertyResult.from_violation('theory_wave_monotone', reversals, 0.0)


def theory_lower_speed_floor():
    """c* 介于 u2 单独的线性速度与 2*sqrt(d1 r1) 之间，且随 b2 不减"""
    rng = np.random.default_rng(THEORY_SEED + 3)
    worst = 0.0
    checked = 0
    while checked < 200:
        p = random_coop_params(rng)
        if not theorem_holds(p):
            continue
        checked += 1
        c_star = coop_lower_speed(p)
        worst = max(worst, fisher_speed(p.d2, p.r2) - c_star, c_star - fisher_speed(p.d1, p.r1))
        weaker = p.model_copy(update={"b2": p.b2 * 0.5})
        worst = max(worst, coop_lower_speed(weaker) - c_star)
    return PropertyResult.from_violation('theory_lower_speed_floor', max(worst, 0.0), 1e-12)


PROPERTIES = {
    'order_identical': order_identical,
    'order_fisher_scaled': order_fisher_scaled,
    'order_coop_box': order_coop_box,
    'order_swap_symmetry': order_swap_symmetry,
    'box_remark_r3_short': box_remark_r3_short,
    'box_scenarios': box_scenarios,
    'positivity_scenarios': positivity_scenarios,
    'separation_remark_r2': separation_remark_r2,
    'convergence_remark_r3': convergence_remark_r3,
    'u1_floor_remark_r3': u1_floor_remark_r3,
    'upper_comparison_remark_r2': upper_comparison_remark_r2,
    'outer_decay_fisher': outer_decay_fisher,
    'refinement_fisher': refinement_fisher,
    'theory_gamma_oracle': theory_gamma_oracle,
    'theory_regime_oracle': theory_regime_oracle,
    'theory_wave_monotone': theory_wave_monotone,
    'theory_lower_speed_floor': theory_lower_speed_floor,
}


# 依赖全分辨率场景的性质 -> 所需的 (场景名, dx)
SCENARIO_DEPENDENCIES = {
    'separation_remark_r2': [('remark_r2', None)],
    'convergence_remark_r3': [('remark_r3', None)],
    'u1_floor_remark_r3': [('remark_r3', None)],
    'upper_comparison_remark_r2': [('remark_r2', None)],
    'outer_decay_fisher': [('fisher', None)],
    'refinement_fisher': [('fisher', None), ('fisher', 0.1)],
}


def property_scenarios(name) -> list:
    """性质读取的场景模拟；不依赖场景的性质返回空列表"""
    if name in ACCEPTANCE:
        return [(ACCEPTANCE[name]['scenario'], None)]
    if name in ('box_scenarios', 'positivity_scenarios'):
        return [(scenario, None) for scenario in scenario_names()]
    return SCENARIO_DEPENDENCIES.get(name, [])


def run_property(name) -> list:
    """运行单个性质；检查本身抛出的异常记为失败结果"""
    try:
        if name in ACCEPTANCE:
            outcome = acceptance_speed(name)
        elif name in PROPERTIES:
            outcome = PROPERTIES[name]()
        else:
            raise ConfigError(f'unknown property {name!r}')
    except Exception as e:
        logger.error(f'property {name} raised {type(e).__name__}: {e}')
        return [PropertyResult.from_violation(name, math.inf, 0.0, detail=f'{type(e).__name__}: {e}')]
    return outcome if isinstance(outcome, list) else [outcome]


def suite_run(name, jobs=DEFAULT_JOBS) -> list:
    """
    运行命名套件中的全部性质

    jobs > 1 时每个场景只在进程池中模拟一次，与不依赖场景的性质并发；
    依赖场景的性质随后在当前进程中读取 OUTCOME_CACHE。结果按套件中的顺序合并。

    Raises:
        ConfigError: 套件名未知
    """
    if name not in SUITES:
        raise ConfigError(f'unknown suite {name!r}; available: {", ".join(SUITES)}')
    names = SUITES[name]
    logger.info(f'suite {name}: {len(names)} properties, jobs={jobs}')
    if jobs <= 1 or len(names) <= 1:
        return [result for item in names for result in run_property(item)]

    needed = list(dict.fromkeys(
        key for item in names for key in property_scenarios(item) if key not in OUTCOME_CACHE
    ))
    standalone = [item for item in names if not property_scenarios(item)]
    batches = {}
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        simulations = {key: executor.submit(simulate_scenario, *key) for key in needed}
        futures = {item: executor.submit(run_property, item) for item in standalone}
        for (scenario, dx), future in simulations.items():
            try:
                OUTCOME_CACHE[(scenario, dx)] = future.result()
            except Exception as e:
                # 留给依赖它的性质在当前进程重跑并记为失败
                logger.error(f'scenario {scenario} (dx={dx}) failed: {type(e).__name__}: {e}')
        for item, future in futures.items():
            batches[item] = future.result()
    for item in names:
        if item not in batches:
            batches[item] = run_property(item)
    return [result for item in names for result in batches[item]]


def summary_table(results) -> str:
    width = max([len(result.name) for result in results] + [8])
    lines = [f'{"property":<{width}}  {"status":<6}  {"worst":>12}  {"tolerance":>10}  location']
    for result in results:
        location = '' if result.location is None else f't={result.location[0]:g}, x={result.location[1]:g}'
        status = 'PASS' if result.passed else 'FAIL'
        lines.append(f'{result.name:<{width}}  {status:<6}  {result.worst_violation:>12.4e}  '
                     f'{result.tolerance:>10.1e}  {location}')
    passed = sum(result.passed for result in results)
    lines.append(f'{passed}/{len(results)} passed')
    return '\n'.join(lines)
