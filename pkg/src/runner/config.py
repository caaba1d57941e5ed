import os
from typing import Annotated, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from configs.general_constants import DEFAULT_DX, FIT_T_MIN, FIT_WINDOW_FRACTION, FRONT_LEVEL_FRACTION
from src.exceptions import ConfigError
from src.fronts.tracking import Direction
from src.model_factory import ModelFactory
from src.models.schemas import CoopParams, CubicParams, FisherParams
from src.solver.grid import Grid1D
from src.solver.initial import InitialCondition
from src.solver.stepper import StepControl
from utils.flat_config import flatten, nest, read_flat

ModelSpec = Annotated[Union[CoopParams, FisherParams, CubicParams], Field(discriminator='kind')]

# 这些错误类型说明字段取值违反约束，其余（缺字段、类型不符、多余字段）属于结构错误
INVARIANT_ERROR_TYPES = {
    'value_error', 'greater_than', 'greater_than_equal', 'less_than', 'less_than_equal',
    'too_short', 'too_long',
}


class ObserverSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    levels: Optional[list[float]] = None
    directions: list[Direction] = Field(default_factory=lambda: ['left', 'right'], min_length=1)
    cone_slopes: list[float] = Field(default_factory=list)
    window_fraction: float = Field(default=FIT_WINDOW_FRACTION, gt=0, le=1)
    fit_t_min: float = Field(default=FIT_T_MIN, ge=0)

    @field_validator('levels')
    @classmethod
    def check_levels(cls, levels):
        if levels is not None and any(level <= 0 for level in levels):
            raise ValueError(f'front levels must be > 0 (got {levels})')
        return levels

    @field_validator('cone_slopes')
    @classmethod
    def check_slopes(cls, slopes):
        if any(c < 0 for c in slopes):
            raise ValueError(f'cone slopes must be >= 0 (got {slopes})')
        return slopes


class OutputSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    dir: Optional[str] = None


class RunConfig(BaseModel):
    """一次模拟的完整配置"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    model: ModelSpec
    grid: Grid1D
    step: StepControl
    initial: InitialCondition = Field(default_factory=InitialCondition)
    observers: ObserverSpec = Field(default_factory=ObserverSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode='before')
    @classmethod
    def default_resolution(cls, data):
        if isinstance(data, dict) and isinstance(data.get('grid'), dict):
            grid = data['grid']
            if grid.get('n') is None and grid.get('dx') is None:
                data = {**data, 'grid': {**grid, 'dx': DEFAULT_DX}}
        return data

    @model_validator(mode='after')
    def check_consistency(self):
        model = self.build_model()
        # CFLViolationError 的信息里带有 cfl_max_dt
        self.step.resolve_dt(self.grid, model.max_diffusion)
        self.initial.amplitudes_for(model.n_species)
        if self.observers.levels is not None and len(self.observers.levels) != model.n_species:
            raise ValueError(f'expected {model.n_species} front levels, got {len(self.observers.levels)}')
        if self.initial.kind == 'compact_bump':
            edge = self.initial.width + self.initial.sigma
            if -edge < self.grid.x_min or edge > self.grid.x_max:
                raise ValueError(f'bump support [-{edge}, {edge}] exceeds the domain '
                                 f'[{self.grid.x_min}, {self.grid.x_max}]')
        if self.output.dir is not None:
            check_output_dir(self.output.dir)
        return self

    def build_model(self):
        return ModelFactory.create_model(self.model)

    def front_levels(self) -> tuple:
        if self.observers.levels is not None:
            return tuple(self.observers.levels)
        return self.build_model().front_levels(FRONT_LEVEL_FRACTION)

    def echo(self) -> dict:
        """完全展开后的扁平配置，包括所有默认值"""
        return flatten(self.model_dump(mode='json'))


def check_output_dir(path):
    """输出目录已存在时须可写，不存在时须能在最近的已存在父目录下创建"""
    existing = os.path.abspath(path)
    while not os.path.exists(existing):
        parent = os.path.dirname(existing)
        if parent == existing:
            break
        existing = parent
    if os.path.exists(existing) and (not os.path.isdir(existing) or not os.access(existing, os.W_OK)):
        raise ValueError(f'output directory {path} is not writable ({existing})')


def error_path(loc) -> str:
    # 判别联合会把标签插进路径：('model', 'coop', 'b1') -> model.b1
    parts = [str(part) for part in loc]
    if len(parts) >= 2 and parts[0] == 'model' and parts[1] in ModelFactory.kind_to_model:
        del parts[1]
    return '.'.join(parts) or '<root>'


def describe_validation_error(error: ValidationError, source) -> str:
    lines = []
    for item in error.errors():
        kind = 'invariant violation' if item['type'] in INVARIANT_ERROR_TYPES else 'schema violation'
        message = item['msg'].removeprefix('Value error, ')
        lines.append(f'{source}: {kind} at {error_path(item["loc"])}: {message}')
    return '\n'.join(lines)


def config_from_flat(flat: dict, source='<config>') -> RunConfig:
    try:
        nested = nest(flat)
    except ValueError as e:
        raise ConfigError(f'{source}: schema violation: {e}') from e
    try:
        return RunConfig.model_validate(nested)
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e, source)) from e


def parse_config(path) -> RunConfig:
    """
    读取并验证扁平键值格式的运行配置

    Raises:
        ConfigError: 文件不存在、格式错误或字段违反约束，信息中带字段路径
    """
    if not os.path.isfile(path):
        raise ConfigError(f'config file not found: {path}')
    try:
        flat = read_flat(path)
    except ValueError as e:
        raise ConfigError(f'malformed config: {e}') from e
    except OSError as e:
        raise ConfigError(f'cannot read config {path}: {e}') from e
    return config_from_flat(flat, source=str(path))
