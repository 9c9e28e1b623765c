"""Forward semi-orbits, backward (anti-)semi-orbits and schedule lifts.

Infinite schedules are handled through finite prefixes.  A discrete orbit for
a schedule of K+1 masks has values x_{-1} = mu, x_0, ..., x_K; a timed
signal holds its last value forever after the last event.

Anti-semi-orbits are relations: each backward step is a preimage
computation, which may fail or branch, so ``anti_orbit_branches`` returns
every surviving branch.
"""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Literal

from .core import (
    BijectionTable,
    StateVector,
    TruthTable,
    _same_dim,
    bitstring,
)
from .errors import (
    BadSyntax,
    BranchExplosion,
    DimensionMismatch,
    LengthMismatch,
    NotAnAntiOrbit,
    TooLarge,
)

DEFAULT_BRANCH_CAP = 1 << 20
DEFAULT_PREFIX_GUARD = 1 << 24


@dataclass(frozen=True)
class SchedulePrefix:
    """Masks alpha^0, ..., alpha^K; an empty prefix has horizon K = -1."""

    n: int
    steps: tuple[StateVector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for s in self.steps:
            if s.n != self.n:
                raise DimensionMismatch(f"schedule step {s} is not of dimension {self.n}")

    @classmethod
    def parse_steps(cls, n: int, *masks: str) -> SchedulePrefix:
        return cls(n, tuple(StateVector.parse(m) for m in masks))

    @property
    def horizon(self) -> int:
        return len(self.steps) - 1

    def __len__(self) -> int:
        return len(self.steps)

    def reversed(self) -> SchedulePrefix:
        return SchedulePrefix(self.n, self.steps[::-1])


@dataclass(frozen=True)
class TimedSchedule:
    """A schedule prefix with strictly increasing event instants t_0 < ... < t_K."""

    schedule: SchedulePrefix
    times: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        if len(self.times) != len(self.schedule.steps):
            raise LengthMismatch(f"{len(self.times)} times for {len(self.schedule.steps)} events")
        if any(a >= b for a, b in zip(self.times, self.times[1:])):
            raise ValueError("event times must be strictly increasing")

    @property
    def n(self) -> int:
        return self.schedule.n

    @property
    def events(self) -> list[tuple[float, StateVector]]:
        return list(zip(self.times, self.schedule.steps))

    def value_at(self, t: float) -> StateVector:
        """rho(t): the event mask at an event instant, (0,...,0) elsewhere."""
        i = bisect.bisect_left(self.times, t)
        if i < len(self.times) and self.times[i] == t:
            return self.schedule.steps[i]
        return StateVector.zeros(self.n)


@dataclass(frozen=True)
class OrbitPrefix:
    """Values x_{-1}, x_0, ..., x_K of a (anti-)semi-orbit, with x_{-1} the start."""

    start: StateVector
    values: tuple[StateVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise LengthMismatch("an orbit prefix holds at least its start value")
        if self.values[0] != self.start:
            raise ValueError("the first value of an orbit prefix is its start")
        if any(v.n != self.start.n for v in self.values):
            raise DimensionMismatch("orbit values of mixed dimension")

    @classmethod
    def of(cls, values: Iterable[StateVector]) -> OrbitPrefix:
        values = tuple(values)
        return cls(values[0], values)

    @property
    def horizon(self) -> int:
        return len(self.values) - 2

    def at(self, k: int) -> StateVector:
        """The value at discrete time k, k >= -1."""
        if k < -1:
            raise IndexError(k)
        return self.values[k + 1]

    def indices(self) -> tuple[int, ...]:
        return tuple(v.index for v in self.values)

    def __str__(self) -> str:
        return " ".join(map(str, self.values))


@dataclass(frozen=True)
class PiecewiseSignal:
    """A right-continuous piecewise-constant signal R -> B^n.

    The value is ``initial`` on (-inf, t_0), the k-th breakpoint value on
    [t_k, t_{k+1}) and the last value on [t_K, inf).
    """

    initial: StateVector
    breakpoints: tuple[tuple[float, StateVector], ...] = ()

    def __post_init__(self):
        bps = tuple((float(t), v) for t, v in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        times = [t for t, _ in bps]
        if any(a >= b for a, b in zip(times, times[1:])):
            raise ValueError("breakpoint times must be strictly increasing")
        if any(v.n != self.initial.n for _, v in bps):
            raise DimensionMismatch("signal values of mixed dimension")

    @property
    def times(self) -> list[float]:
        return [t for t, _ in self.breakpoints]

    def __call__(self, t: float) -> StateVector:
        i = bisect.bisect_right(self.times, t)
        return self.initial if i == 0 else self.breakpoints[i - 1][1]

    value_at = __call__

    def sample_points(self) -> list[float]:
        """One instant before t_0, every breakpoint, and one interior point per interval."""
        times = self.times
        if not times:
            return [0.0]
        points = [times[0] - 1.0]
        for a, b in zip(times, times[1:]):
            points += [a, (a + b) / 2]
        points += [times[-1], times[-1] + 1.0]
        return points

    def collapsed(self) -> tuple[StateVector, ...]:
        return stutter_collapse((self.initial, *(v for _, v in self.breakpoints)))

    def to_json(self) -> dict:
        return {
            "initial": str(self.initial),
            "breakpoints": [[t, str(v)] for t, v in self.breakpoints],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> PiecewiseSignal:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            StateVector.parse(data["initial"]),
            tuple((t, StateVector.parse(v)) for t, v in data["breakpoints"]),
        )


@dataclass(frozen=True)
class SystemPrefixSet:
    """Finite-horizon view of a universal (anti-)semi-regular system.

    ``sequences`` holds stutter-collapsed value sequences as tuples of state
    indices.  Two sets compare equal iff they have the same dimension and
    the same sequences.
    """

    n: int
    horizon: int
    sequences: frozenset[tuple[int, ...]] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.sequences)

    def __contains__(self, seq) -> bool:
        return tuple(s.index if isinstance(s, StateVector) else s for s in seq) in self.sequences

    def same_system(self, other: SystemPrefixSet) -> bool:
        return self.n == other.n and self.sequences == other.sequences

    def as_strings(self) -> list[list[str]]:
        return [[bitstring(self.n, s) for s in seq] for seq in sorted(self.sequences)]


def stutter_collapse(values):
    """Merge runs of equal consecutive values."""
    out = []
    for v in values:
        if not out or out[-1] != v:
            out.append(v)
    return tuple(out)


def _nu_step(phi: TruthTable, mask: int, x: int) -> int:
    return (x & ~mask) | (phi.rows[x] & mask)


def discrete_orbit(phi: TruthTable, mu: StateVector, alpha: SchedulePrefix) -> OrbitPrefix:
    """x_{-1} = mu and x_{k+1} = Phi^{alpha^{k+1}}(x_k); the first mask alpha^0 produces x_0."""
    _same_dim(phi.n, mu.n, alpha.n)
    x = mu.index
    values = [mu]
    for step in alpha.steps:
        x = _nu_step(phi, step.index, x)
        values.append(StateVector.from_index(phi.n, x))
    return OrbitPrefix(mu, tuple(values))


def _signal(values: tuple[StateVector, ...], rho: TimedSchedule) -> PiecewiseSignal:
    return PiecewiseSignal(values[0], tuple(zip(rho.times, values[1:])))


def continuous_orbit(phi: TruthTable, mu: StateVector, rho: TimedSchedule) -> PiecewiseSignal:
    orbit = discrete_orbit(phi, mu, rho.schedule)
    return _signal(orbit.values, rho)


def preimages_nu(phi: TruthTable, nu: StateVector, x: StateVector) -> set[StateVector]:
    """All y with Phi^nu(y) = x."""
    _same_dim(phi.n, nu.n, x.n)
    return {StateVector.from_index(phi.n, y) for y in _preimages(phi, nu.index, x.index)}


def _preimages(phi: TruthTable, mask: int, x: int) -> list[int]:
    # y must agree with x outside the mask; only 2^popcount(mask) candidates.
    base = x & ~mask
    found = []
    sub = mask
    while True:
        y = base | sub
        if _nu_step(phi, mask, y) == x:
            found.append(y)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    found.sort()
    return found


def anti_orbit_branches(
    phi: TruthTable,
    mu: StateVector,
    alpha: SchedulePrefix,
    *,
    cap: int = DEFAULT_BRANCH_CAP,
) -> set[OrbitPrefix]:
    """Every (y_{-1} = mu, y_0, ..., y_K) with Phi^{alpha^k}(y_k) = y_{k-1} for k = 0..K."""
    _same_dim(phi.n, mu.n, alpha.n)
    frontier: list[tuple[int, ...]] = [(mu.index,)]
    for step in alpha.steps:
        nxt = []
        for branch in frontier:
            for y in _preimages(phi, step.index, branch[-1]):
                nxt.append(branch + (y,))
        if len(nxt) > cap:
            raise BranchExplosion(f"more than {cap} anti-orbit branches")
        frontier = nxt
        if not frontier:
            break
    n = phi.n
    return {
        OrbitPrefix(mu, tuple(StateVector.from_index(n, y) for y in branch))
        for branch in frontier
    }


def is_anti_orbit(phi: TruthTable, alpha: SchedulePrefix, seq: OrbitPrefix) -> bool:
    _same_dim(phi.n, alpha.n, seq.start.n)
    if len(seq.values) != len(alpha.steps) + 1:
        raise LengthMismatch(
            f"sequence of {len(seq.values)} values does not fit a schedule of {len(alpha.steps)} masks"
        )
    ys = seq.indices()
    return all(
        _nu_step(phi, step.index, ys[k + 1]) == ys[k] for k, step in enumerate(alpha.steps)
    )


def continuous_anti_orbit(
    phi: TruthTable, branch: OrbitPrefix, rho: TimedSchedule
) -> PiecewiseSignal:
    if not is_anti_orbit(phi, rho.schedule, branch):
        raise NotAnAntiOrbit(f"{branch} is not an anti-semi-orbit for the given schedule")
    return _signal(branch.values, rho)


def lift_hat(g: BijectionTable, alpha: SchedulePrefix) -> SchedulePrefix:
    """Apply g to every mask of the schedule."""
    _same_dim(g.n, alpha.n)
    return SchedulePrefix(alpha.n, tuple(g(s) for s in alpha.steps))


def lift_tilde(g: BijectionTable, rho: TimedSchedule) -> TimedSchedule:
    """Apply g to every nonzero event value; zero events stay zero."""
    _same_dim(g.n, rho.n)
    steps = tuple(s if s.index == 0 else g(s) for s in rho.schedule.steps)
    return TimedSchedule(SchedulePrefix(rho.n, steps), rho.times)


def _prefix_guard(n: int, horizon: int, guard: int) -> None:
    if horizon < -1:
        raise ValueError(f"horizon must be >= -1, got {horizon}")
    if (1 << n) ** (horizon + 2) > guard:
        raise TooLarge(
            f"(2^{n})^{horizon + 2} prefixes exceed the enumeration guard of {guard}"
        )


def system_prefixes(
    phi: TruthTable,
    horizon: int,
    mode: Literal["forward", "anti"] = "forward",
    *,
    guard: int = DEFAULT_PREFIX_GUARD,
) -> SystemPrefixSet:
    """All stutter-collapsed (anti-)semi-orbit prefixes of length horizon+2.

    Raw sequences are grown level by level and deduplicated at each level,
    which is equivalent to enumerating every start state with every mask
    sequence of length horizon+1.
    """
    if mode not in ("forward", "anti"):
        raise ValueError(f"mode must be 'forward' or 'anti', got {mode!r}")
    _prefix_guard(phi.n, horizon, guard)
    size = phi.size
    level: set[tuple[int, ...]] = {(m,) for m in range(size)}
    for _ in range(horizon + 1):
        nxt: set[tuple[int, ...]] = set()
        for seq in level:
            last = seq[-1]
            for mask in range(size):
                if mode == "forward":
                    nxt.add(seq + (_nu_step(phi, mask, last),))
                else:
                    for y in _preimages(phi, mask, last):
                        nxt.add(seq + (y,))
        level = nxt
    return SystemPrefixSet(phi.n, horizon, frozenset(stutter_collapse(s) for s in level))


def enumerate_schedules(n: int, length: int):
    """Every mask sequence of the given length, in lexicographic index order."""
    for combo in product(range(1 << n), repeat=length):
        yield SchedulePrefix(n, tuple(StateVector.from_index(n, c) for c in combo))


# --- schedule / signal files ----------------------------------------------


def parse_schedule(text: str) -> SchedulePrefix | TimedSchedule:
    """Parse a schedule file: ``n=<int>`` then ``<t> <bits>`` or bare ``<bits>`` lines."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise BadSyntax("empty schedule: expected a header line 'n=<int>'")
    lineno, header = lines[0]
    head = header.replace(" ", "")
    if not head.startswith("n="):
        raise BadSyntax(f"expected header 'n=<int>', got {header!r}", lineno)
    try:
        n = int(head[2:])
    except ValueError:
        raise BadSyntax(f"dimension is not an integer: {head[2:]!r}", lineno) from None

    times: list[float] = []
    steps: list[StateVector] = []
    timed = None
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) not in (1, 2):
            raise BadSyntax(f"expected '<t> <bits>' or '<bits>', got {line!r}", lineno)
        this_timed = len(parts) == 2
        if timed is None:
            timed = this_timed
        elif timed != this_timed:
            raise BadSyntax("cannot mix timed and untimed schedule lines", lineno)
        bits = parts[-1]
        try:
            mask = StateVector.parse(bits)
        except BadSyntax:
            raise BadSyntax(f"not a bit string: {bits!r}", lineno) from None
        if mask.n != n:
            raise DimensionMismatch(f"line {lineno}: mask {bits} does not have {n} bits")
        if this_timed:
            try:
                t = float(parts[0])
            except ValueError:
                raise BadSyntax(f"not a time: {parts[0]!r}", lineno) from None
            if times and t <= times[-1]:
                raise BadSyntax(f"time {t} does not exceed the previous time {times[-1]}", lineno)
            times.append(t)
        steps.append(mask)
    schedule = SchedulePrefix(n, tuple(steps))
    return TimedSchedule(schedule, tuple(times)) if timed else schedule


def serialize_schedule(schedule: SchedulePrefix | TimedSchedule) -> str:
    if isinstance(schedule, TimedSchedule):
        lines = [f"n={schedule.n}"] + [f"{t!r} {s}" for t, s in schedule.events]
    else:
        lines = [f"n={schedule.n}"] + [str(s) for s in schedule.steps]
    return "\n".join(lines) + "\n"
