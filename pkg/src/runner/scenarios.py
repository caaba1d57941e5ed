from configs.general_constants import SCENARIOS
from src.exceptions import ConfigError
from src.runner.config import RunConfig, config_from_flat


def scenario_names() -> list:
    return list(SCENARIOS)


def scenario_flat(name, overrides=None) -> dict:
    if name not in SCENARIOS:
        raise ConfigError(f'unknown scenario {name!r}; available: {", ".join(SCENARIOS)}')
    flat = dict(SCENARIOS[name])
    flat.update(overrides or {})
    return flat


def scenario(name, overrides=None) -> RunConfig:
    """
    按名称取预设配置

    Args:
        name: scenario_config.json 中 SCENARIOS 的键
        overrides: 扁平键值覆盖，例如 {'grid.dx': 0.1}
    """
    return config_from_flat(scenario_flat(name, overrides), source=f'scenario {name}')
