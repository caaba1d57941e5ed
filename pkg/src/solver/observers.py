from src.fronts.tracking import ConeRecord, FrontTrace, cone_infimum, level_position


class BaseObserver:
    name = None

    def observe(self, state):
        raise NotImplementedError

    def records(self):
        raise NotImplementedError


class SnapshotRecorder(BaseObserver):
    """在内存中保留每个快照，供写 CSV 和事后性质检查"""
    name = 'snapshots'

    def __init__(self):
        self._snapshots = []

    def observe(self, state):
        self._snapshots.append(state)

    def records(self):
        return list(self._snapshots)


class FrontRecorder(BaseObserver):
    name = 'fronts'

    def __init__(self, levels, directions=('left', 'right')):
        self._traces = [
            FrontTrace(species=species, direction=direction, level=level)
            for species, level in enumerate(levels)
            for direction in directions
        ]

    def observe(self, state):
        for trace in self._traces:
            position = level_position(state, trace.species, trace.level, trace.direction)
            if position is not None:
                trace.add(state.t, position)

    def records(self):
        return list(self._traces)


class ConeMonitor(BaseObserver):
    name = 'cones'

    def __init__(self, slopes):
        self._cones = [ConeRecord(c=c) for c in slopes]

    def observe(self, state):
        for cone in self._cones:
            # 锥还没覆盖到一个网格间距时跳过
            if cone.c * state.t < state.grid.dx:
                continue
            pairs = tuple(cone_infimum(state, k, cone.c) for k in range(len(state.species)))
            cone.add(state.t, pairs)

    def records(self):
        return list(self._cones)
