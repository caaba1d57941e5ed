class SpreadLabError(Exception):
    """实验室所有自定义异常的基类"""


class ConfigError(SpreadLabError, ValueError):
    """配置文件缺失、格式错误或不满足约束（命令行退出码 2）"""


class HypothesisNotMetError(SpreadLabError, ValueError):
    """定理前提不成立，无法给出对应的速度界"""

    def __init__(self, condition, detail=''):
        self.condition = condition
        super().__init__(f'hypothesis not met: {condition}' + (f' ({detail})' if detail else ''))


class CFLViolationError(SpreadLabError, ValueError):
    def __init__(self, dt, dt_max):
        self.dt = dt
        self.dt_max = dt_max
        super().__init__(f'dt={dt!r} exceeds CFL limit cfl_max_dt={dt_max!r}')


class NonFiniteStateError(SpreadLabError, ArithmeticError):
    """显式推进后出现 NaN/Inf，记录首个坏节点的位置"""

    def __init__(self, t, species, x):
        self.t = t
        self.species = species
        self.x = x
        super().__init__(f'non-finite value in u{species + 1} at t={t!r}, x={x!r}')


class ArtifactWriteError(SpreadLabError, OSError):
    def __init__(self, path, reason):
        self.path = str(path)
        super().__init__(f'failed to write {self.path}: {reason}')
