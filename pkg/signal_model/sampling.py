"""
Segmented samples of a real potential on a gap-skipping uniform lattice

Every sample sits at an integer multiple of the signal's step dx, so
segments of different signals built with the same step can be compared,
restricted or laid out densely without interpolation.
"""

try:
    import csv
    import functools
    import logging
    import math
    from dataclasses import dataclass, field

    import numpy as np
    from scipy import integrate

    from utilities_common import constants
    from utilities_common.exception import GridMismatchError, ResolutionError, SamplingError
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

log = logging.getLogger(constants.SYSLOG_IDENTIFIER)


@dataclass(frozen=True)
class SampledGrid:
    origin: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise SamplingError("Grid step must be positive, got {!r}".format(self.step))
        if self.count < 2:
            raise SamplingError("Grid needs at least 2 points, got {}".format(self.count))

    @property
    def end(self):
        return self.origin + self.step * (self.count - 1)

    def positions(self):
        return self.origin + self.step * np.arange(self.count)


def _frozen(values):
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """
    Real samples of a potential, one segment per support interval

    labels   block index per segment (ascending position)
    offsets  lattice index of each segment's first sample
    values   sample arrays, odd length
    k_max    largest |k| whose phase the step resolves
    """
    dx: float
    labels: tuple
    offsets: tuple
    values: tuple
    k_max: float
    n: int = None
    a: float = None
    policy: str = 'phase-step'
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.labels) != len(self.offsets) or len(self.labels) != len(self.values):
            raise SamplingError("Segment labels, offsets and values differ in length")
        object.__setattr__(self, 'values', tuple(_frozen(v) for v in self.values))
        previous_end = None
        for offset, values in zip(self.offsets, self.values):
            if values.size < 3 or values.size % 2 == 0:
                raise SamplingError("Segment sample counts must be odd and >= 3, got {}".format(values.size))
            if previous_end is not None and offset <= previous_end:
                raise SamplingError("Segments overlap or are out of order at lattice index {}".format(offset))
            previous_end = offset + values.size - 1

    # ----- layout -----

    @property
    def segment_count(self):
        return len(self.labels)

    @property
    def grids(self):
        return tuple(SampledGrid(offset * self.dx, self.dx, values.size)
                     for offset, values in zip(self.offsets, self.values))

    def segment_positions(self, index):
        return (self.offsets[index] + np.arange(self.values[index].size)) * self.dx

    def segments(self):
        for index, label in enumerate(self.labels):
            yield label, self.segment_positions(index), self.values[index]

    @functools.cached_property
    def x(self):
        out = np.concatenate([self.segment_positions(i) for i in range(self.segment_count)])
        out.setflags(write=False)
        return out

    @functools.cached_property
    def f(self):
        out = np.concatenate(self.values)
        out.setflags(write=False)
        return out

    @property
    def size(self):
        return sum(v.size for v in self.values)

    @property
    def support_length(self):
        return sum((v.size - 1) * self.dx for v in self.values)

    def same_grid(self, other):
        return (self.dx == other.dx and self.offsets == other.offsets and
                tuple(v.size for v in self.values) == tuple(v.size for v in other.values))

    def require_same_grid(self, other):
        if not self.same_grid(other):
            raise GridMismatchError("Signals are not sampled on the same grid")

    def resolves(self, k):
        return abs(k) <= self.k_max * (1.0 + 1e-12)

    def require_resolved(self, k):
        if not self.resolves(k):
            raise ResolutionError("k={!r} outside the resolved window |k| <= {!r}".format(k, self.k_max))

    # ----- derived signals -----

    def _derive(self, labels, offsets, values, **changes):
        kwargs = dict(dx=self.dx, labels=tuple(labels), offsets=tuple(offsets), values=tuple(values),
                      k_max=self.k_max, n=self.n, a=self.a, policy=self.policy, meta=dict(self.meta))
        kwargs.update(changes)
        return SampledSignal(**kwargs)

    def block(self, j):
        """Block j alone, on its own segment"""
        if j not in self.labels:
            raise SamplingError("Block {} is not part of this signal".format(j))
        index = self.labels.index(j)
        return self._derive([j], [self.offsets[index]], [self.values[index]])

    def restrict(self, blocks, grid_blocks=None):
        """
        Keep the samples of `blocks`, zero the rest

        The result lives on the segments of `grid_blocks` (all segments by
        default), so signals restricted from one parent share a grid.
        """
        blocks = set(blocks)
        keep = self.labels if grid_blocks is None else [label for label in self.labels if label in set(grid_blocks)]
        if not keep:
            raise SamplingError("Restriction leaves no segments")
        labels, offsets, values = [], [], []
        for index, label in enumerate(self.labels):
            if label not in keep:
                continue
            labels.append(label)
            offsets.append(self.offsets[index])
            values.append(self.values[index] if label in blocks else np.zeros(self.values[index].size))
        return self._derive(labels, offsets, values)

    def scaled(self, factor):
        return self._derive(self.labels, self.offsets, [factor * v for v in self.values])

    # ----- norms and layouts -----

    def l1_norm(self):
        return float(sum(integrate.simpson(np.abs(v), dx=self.dx) for v in self.values))

    def l2_norm_sq(self):
        return float(sum(integrate.simpson(v * v, dx=self.dx) for v in self.values))

    def integral(self):
        return float(sum(integrate.simpson(v, dx=self.dx) for v in self.values))

    def dense(self):
        """(first lattice index, samples with gaps filled by zeros)"""
        start = self.offsets[0]
        stop = self.offsets[-1] + self.values[-1].size
        out = np.zeros(stop - start)
        for offset, values in zip(self.offsets, self.values):
            out[offset - start:offset - start + values.size] = values
        return start, out

    def to_csv(self, stream):
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['j', 'x', 'F'])
        for label, x, values in self.segments():
            for position, value in zip(x, values):
                writer.writerow([label, '{:.17g}'.format(position), '{:.17g}'.format(value)])


# ===== Builders =====

def phase_step(k_max, a, oversample):
    """Largest dx keeping (2 k_max + 4 A) dx <= 0.2 / oversample"""
    return constants.PHASE_STEP / (oversample * (2.0 * k_max + 4.0 * a))


def _segment_count(length, dx_target):
    return 2 * int(math.ceil(length / (2.0 * dx_target))) + 1


def chirp_layout(spec, k_max, oversample):
    """(dx, samples per block) of the chirp grid"""
    width = 2.0 * spec.n * spec.bump.radius
    count = _segment_count(width, phase_step(k_max, spec.a, oversample))
    return width / (count - 1), count


def _check_sampling(spec, k_max, oversample):
    if k_max < 3.0 * spec.a * (1.0 - 1e-12):
        raise SamplingError("k_max={!r} must cover 3A={!r}".format(k_max, 3.0 * spec.a))
    if not oversample > 0:
        raise SamplingError("oversample must be positive, got {!r}".format(oversample))
    if oversample < 1.0:
        dx, _ = chirp_layout(spec, k_max, oversample)
        raise ResolutionError("oversample={!r} gives dx={!r}, above the phase-resolution step {!r}".format(
            oversample, dx, phase_step(k_max, spec.a, 1.0)))


def sample_signal(spec, k_max, oversample=1.0, memory_budget=constants.DEFAULT_MEMORY_BUDGET, blocks=None):
    """
    Sample the chirp on its block supports

    :param spec: ChirpSpec
    :param k_max: largest frequency that downstream integrands may use
    :param oversample: refinement factor, dx shrinks proportionally
    :param blocks: restrict sampling to these blocks (all by default)
    """
    _check_sampling(spec, k_max, oversample)
    dx, count = chirp_layout(spec, k_max, oversample)
    blocks = list(spec.blocks) if blocks is None else sorted(blocks)

    required = len(blocks) * count
    if required * constants.PROFILE_BYTES_PER_POINT > memory_budget:
        raise SamplingError("Grid of {} points at dx={!r} exceeds the memory budget of {} bytes".format(
            required, dx, memory_budget), required_dx=dx, required_count=required)

    half_span = (count - 1) // 2
    offsets, values = [], []
    for j in blocks:
        offset = 2 * j * (count - 1) - half_span
        x = (offset + np.arange(count)) * dx
        samples = spec.block(j, x)
        samples[0] = samples[-1] = 0.0
        offsets.append(offset)
        values.append(samples)

    log.debug("Sampled chirp N={} on {} blocks: dx={!r}, {} points per block".format(
        spec.n, len(blocks), dx, count))
    return SampledSignal(dx=dx, labels=tuple(blocks), offsets=tuple(offsets), values=tuple(values),
                         k_max=float(k_max), n=spec.n, a=spec.a, meta={'oversample': oversample})


def sample_function(func, intervals, dx, k_max, labels=None):
    """
    Sample a user function on lattice-aligned segments covering `intervals`

    Each interval is widened to whole lattice steps with an odd sample
    count; the function should vanish at the interval ends.
    """
    if not dx > 0:
        raise SamplingError("dx must be positive, got {!r}".format(dx))
    intervals = sorted(intervals)
    labels = list(range(len(intervals))) if labels is None else list(labels)
    offsets, values = [], []
    for lo, hi in intervals:
        if not hi > lo:
            raise SamplingError("Empty interval [{!r}, {!r}]".format(lo, hi))
        first = int(math.floor(lo / dx + 1e-9))
        steps = int(math.ceil(hi / dx - 1e-9)) - first
        if steps % 2:
            steps += 1
        steps = max(steps, 2)
        x = (first + np.arange(steps + 1)) * dx
        offsets.append(first)
        values.append(np.asarray(func(x), dtype=float))
    return SampledSignal(dx=float(dx), labels=tuple(labels), offsets=tuple(offsets), values=tuple(values),
                         k_max=float(k_max), policy='fixed')


def sample_block(spec, j, k_max, oversample=1.0):
    """Block j alone on the same lattice as sample_signal(spec, k_max, oversample)"""
    return sample_signal(spec, k_max, oversample, blocks=[j])
