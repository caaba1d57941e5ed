from src.model_factory import ModelFactory
from src.models.schemas import CoopParams
from src.theory.bounds import coop_lower_speed, fisher_speed, r2_upper_speed, speed_bounds
from src.theory.regime import classify_regime, satisfied_regimes, theorem_holds
from src.theory.waves import wave_verdict


def theory_columns(params) -> dict:
    """聚合表里的理论列；每一列都直接来自 theory 模块的调用"""
    bounds = speed_bounds(params)
    columns = {}
    for index, (low, high) in enumerate(zip(bounds.lower, bounds.upper)):
        columns[f'lower_u{index + 1}'] = low
        columns[f'upper_u{index + 1}'] = high
    if isinstance(params, CoopParams):
        columns['regime'] = classify_regime(params)
        columns['c_star'] = coop_lower_speed(params) if theorem_holds(params) else None
    return columns


def theory_summary(params, c_values=()) -> dict:
    model = ModelFactory.create_model(params)
    equilibria = model.equilibria()
    summary = {
        'kind': params.kind,
        'equilibria': [
            {'point': list(point), 'stability': tag}
            for point, tag in zip(equilibria.points, equilibria.stability)
        ],
        **theory_columns(params),
    }
    if isinstance(params, CoopParams):
        summary.update({
            'k1': params.k1,
            'k2': params.k2,
            'coexistence_stability': equilibria.tag_of(model.target_state()),
            'satisfied_regimes': satisfied_regimes(params),
            'linear_speed_u1': fisher_speed(params.d1, params.r1),
            'linear_speed_u2': fisher_speed(params.d2, params.r2),
            'r2_upper_speed': r2_upper_speed(params),
        })
        summary['waves'] = [wave_verdict(params, c).model_dump() for c in c_values]
    elif c_values:
        raise ValueError('wave verdicts are defined for the cooperative model only')
    return summary
