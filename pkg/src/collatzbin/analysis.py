"""Orbit statistics, length accounting, and the periodic-orbit exclusion scan.

The analyses here are the quantitative core of the package: trajectory
records with stopping times and hailstone iterates, the head/tail table
bounding per-step length changes, exact error bounds between the interval
map and its circle-map companion, the scan for the first horizon k* where
those bounds stop excluding periodic points, exhaustive convergence checks
over all odd starts below a power of two, and probes of the structured
start families.
"""

from __future__ import annotations

from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .exact import BinaryFraction
from .harness import _orbit_extents, derive_seed, sample_fraction
from .maps import (
    Branch,
    Family,
    _binary_step_raw,
    classify_branch,
    collatz_step,
    critical_point,
    embed,
    family_member,
    reduced_step,
)

__all__ = [
    "AuditSummary",
    "DELTA_TABLE",
    "DivergenceError",
    "FamilyProbe",
    "HeadTailReport",
    "KStarReport",
    "MapKind",
    "RangeVerification",
    "TrajectoryRecord",
    "audit_length_deltas",
    "epsilon_bound",
    "family_orbit_probe",
    "head_tail_classify",
    "kstar_scan",
    "run_trajectory",
    "verify_range",
]


class MapKind(Enum):
    """Which map drives a trajectory: interval, reduced integer, or classic."""

    BINARY = "b"
    REDUCED = "r"
    COLLATZ = "c"


class DivergenceError(Exception):
    """An orbit exceeded its step cap before reaching the ground state."""

    def __init__(self, start: int, step_cap: int):
        super().__init__(start, step_cap)
        self.start = start
        self.step_cap = step_cap

    def __str__(self) -> str:
        return f"orbit of {self.start} exceeded the step cap of {self.step_cap}"


@dataclass
class TrajectoryRecord:
    """A finite orbit with its length profile and landmark statistics.

    ``stopping_time`` is the number of steps to first reach the ground state
    (1/2 for the interval map, 1 for the integer maps); None means the step
    budget ran out first.  The hailstone is the first iterate of maximal
    length.
    """

    map_kind: MapKind
    iterates: list
    lengths: list[int]
    stopping_time: int | None
    hailstone_index: int
    max_length: int

    @property
    def start(self):
        return self.iterates[0]

    @property
    def hailstone(self):
        return self.iterates[self.hailstone_index]

    @property
    def capped(self) -> bool:
        return self.stopping_time is None


def run_trajectory(
    start: int | BinaryFraction,
    map_kind: MapKind = MapKind.BINARY,
    max_steps: int = 10**6,
) -> TrajectoryRecord:
    """Follow one orbit until the ground state or the step budget.

    Integer starts for the interval map are embedded first.  A start that
    already sits at the ground state gets stopping time 0 but is still
    followed for the full budget, which makes the classic map's terminal
    cycle visible instead of producing an empty record.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if map_kind is MapKind.BINARY:
        y0 = embed(start) if isinstance(start, int) else start
        state = (y0.numerator, y0.length)
        step = lambda s: _binary_step_raw(*s)
        grounded = lambda s: s == (1, 1)
        wrap = lambda s: BinaryFraction(*s)
        length_of = lambda s: s[1]
    else:
        if not isinstance(start, int) or start < 1:
            raise ValueError(f"integer maps need a positive integer start, got {start!r}")
        if map_kind is MapKind.REDUCED and start % 2 == 0:
            raise ValueError(f"the reduced map needs an odd start, got {start}")
        state = start
        step = reduced_step if map_kind is MapKind.REDUCED else collatz_step
        grounded = lambda s: s == 1
        wrap = lambda s: s
        length_of = lambda s: s.bit_length()

    iterates = [wrap(state)]
    lengths = [length_of(state)]
    if grounded(state):
        # already at the ground state: follow anyway to expose cycles
        stopping_time = 0
        for _ in range(max_steps):
            state = step(state)
            iterates.append(wrap(state))
            lengths.append(length_of(state))
    else:
        stopping_time = None
        for n in range(1, max_steps + 1):
            state = step(state)
            iterates.append(wrap(state))
            lengths.append(length_of(state))
            if grounded(state):
                stopping_time = n
                break

    max_length = max(lengths)
    return TrajectoryRecord(
        map_kind=map_kind,
        iterates=iterates,
        lengths=lengths,
        stopping_time=stopping_time,
        hailstone_index=lengths.index(max_length),
        max_length=max_length,
    )


_HEAD_LABELS = {"100": "h1", "101": "h2", "110": "h3", "111": "h4"}
_TAIL_LABELS = {"001": "t1", "011": "t2", "101": "t3", "111": "t4"}

# Per-step length change (min, max) keyed by (head, tail) of the digit
# string.  A None minimum means unbounded below: tail 101 makes 3n+1 end in
# 000, and the run of zeros swallowed by renormalization can be arbitrarily
# long.  The other tails fix the swallowed run exactly (tail 001 -> two
# zeros, tails 011 and 111 -> one), which is why those cells are so tight.
DELTA_TABLE: dict[tuple[str, str], tuple[int | None, int]] = {
    ("h1", "t1"): (-1, -1),
    ("h1", "t2"): (0, 0),
    ("h1", "t3"): (None, -2),
    ("h1", "t4"): (0, 0),
    ("h2", "t1"): (-1, 0),
    ("h2", "t2"): (0, 1),
    ("h2", "t3"): (None, -1),
    ("h2", "t4"): (0, 1),
    ("h3", "t1"): (0, 0),
    ("h3", "t2"): (1, 1),
    ("h3", "t3"): (None, -1),
    ("h3", "t4"): (1, 1),
    ("h4", "t1"): (0, 0),
    ("h4", "t2"): (1, 1),
    ("h4", "t3"): (None, -1),
    ("h4", "t4"): (1, 1),
}


@dataclass
class HeadTailReport:
    """Classification of one point against the head/tail length table."""

    y: BinaryFraction
    head: str
    tail: str
    branch: Branch
    predicted_min: int | None
    predicted_max: int
    observed_delta: int

    def within_bounds(self) -> bool:
        if self.predicted_min is not None and self.observed_delta < self.predicted_min:
            return False
        return self.observed_delta <= self.predicted_max


def head_tail_classify(y: BinaryFraction) -> HeadTailReport:
    """Locate y in the head/tail table and record its actual length change.

    The head is the first three digits (which of the two arms applies and
    how much headroom the leading digits leave), the tail is the last three
    (which fixes, or fails to fix, the power of two stripped after
    tripling).  Needs at least six digits so head and tail do not overlap.
    """
    if y.length < 6:
        raise ValueError("head/tail classification needs at least 6 digits")
    bits = y.to_bits()
    head = _HEAD_LABELS[bits[:3]]
    tail = _TAIL_LABELS[bits[-3:]]
    lo, hi = DELTA_TABLE[(head, tail)]
    stepped = BinaryFraction(*_binary_step_raw(y.numerator, y.length))
    return HeadTailReport(
        y=y,
        head=head,
        tail=tail,
        branch=classify_branch(y),
        predicted_min=lo,
        predicted_max=hi,
        observed_delta=stepped.length - y.length,
    )


@dataclass
class AuditSummary:
    """Result of a randomized audit of the head/tail table at one length."""

    ell: int
    samples: int
    seed: int
    cell_counts: dict[tuple[str, str], int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_length_deltas(samples: int, ell: int, seed: int = 0) -> AuditSummary:
    """Check random length-ell points against the head/tail table.

    For every sample the observed length change must fall inside its table
    cell, and away from the ground-state predecessors it must decompose as
    the arm's contribution (+1 low, +2 high) minus the 2-adic valuation of
    3n+1.  Violations are collected with their digit-string witnesses.
    """
    if ell < 6:
        raise ValueError("audit needs ell >= 6")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    summary = AuditSummary(ell=ell, samples=samples, seed=seed)
    counts = summary.cell_counts
    for idx in range(samples):
        y = sample_fraction(ell, derive_seed(seed, 0, idx))
        report = head_tail_classify(y)
        cell = (report.head, report.tail)
        counts[cell] = counts.get(cell, 0) + 1
        if not report.within_bounds():
            summary.violations.append(
                f"{y.to_bits()}: delta {report.observed_delta} outside "
                f"{cell} bounds ({report.predicted_min}, {report.predicted_max})"
            )
        if report.branch is not Branch.PREDECESSOR:
            t = 3 * y.numerator + 1
            arm = 1 if report.branch is Branch.LOW else 2
            expected = arm - ((t & -t).bit_length() - 1)
            if report.observed_delta != expected:
                summary.violations.append(
                    f"{y.to_bits()}: delta {report.observed_delta} != "
                    f"arm {arm} minus valuation decomposition {expected}"
                )
    return summary


def epsilon_bound(k: int, ell: int) -> Fraction:
    """Worst-case gap between k interval-map steps and k circle-map steps.

    The bound for all length-ell starts, in closed form: with n = floor(k/2)
    and growth g = (9/8)**n - 1, it is 7g * 2**-ell for even k and
    ((15/2)g + 1/2) * 2**-ell for odd k.  Grows like (9/8)**(k/2) while the
    distance from the critical points shrinks like (8/9)**k, which is what
    eventually ends the periodic-orbit exclusion.
    """
    if k < 1:
        raise ValueError("epsilon_bound needs k >= 1")
    if ell < 1:
        raise ValueError("epsilon_bound needs ell >= 1")
    n, odd = divmod(k, 2)
    growth = Fraction(9, 8) ** n - 1
    if odd:
        coefficient = Fraction(15, 2) * growth + Fraction(1, 2)
    else:
        coefficient = 7 * growth
    return coefficient / (1 << ell)


@dataclass
class KStarReport:
    """Outcome of the exclusion-horizon scan at one digit length."""

    ell: int
    k_max: int
    k_star: int | None
    critical: Fraction | None
    epsilon: Fraction | None
    margins: list[Fraction] | None = None

    @property
    def excluded_all(self) -> bool:
        return self.k_star is None


def kstar_scan(ell: int, k_max: int = 1000, collect_margins: bool = False) -> KStarReport:
    """Find the first k where the error bound can reach past the critical point.

    For each k the scan compares 1/2 + epsilon_bound(k, ell) against the
    critical point c_k exactly.  While the sum stays at or below c_k, no
    orbit of a length-ell start can close up in k steps; the first strict
    reversal is k*, returned with its critical point and bound.  If no
    reversal occurs by k_max the report says every k was excluded.
    """
    if ell < 1:
        raise ValueError("kstar_scan needs ell >= 1")
    if k_max < 1:
        raise ValueError("kstar_scan needs k_max >= 1")
    half = Fraction(1, 2)
    margins: list[Fraction] | None = [] if collect_margins else None
    for k in range(1, k_max + 1):
        c = critical_point(k)
        eps = epsilon_bound(k, ell)
        margin = c - half - eps
        if margins is not None:
            margins.append(margin)
        if margin < 0:
            return KStarReport(ell, k_max, k, c, eps, margins)
    return KStarReport(ell, k_max, None, None, None, margins)


@dataclass
class RangeVerification:
    """Exhaustive convergence summary for all odd starts below 2**ell."""

    ell: int
    verified_count: int
    max_stopping_time: int
    worst_start: int


def _verify_chunk(args: tuple[int, int, int, int]) -> tuple[int, int, int]:
    """Walk odd starts in [lo, hi); returns (count, max stop time, worst start)."""
    lo, hi, ell, step_cap = args
    bound = 1 << ell
    # memoized stop times for odd values below the bound, indexed by (v-1)/2
    memo = array("q", [-1]) * (1 << (ell - 1))
    memo[0] = 0
    best = -1
    worst = 0
    count = 0
    for x in range(lo, hi, 2):
        path = []
        v = x
        while True:
            if v < bound:
                s = memo[(v - 1) >> 1]
                if s >= 0:
                    break
            path.append(v)
            if len(path) > step_cap:
                raise DivergenceError(x, step_cap)
            t = 3 * v + 1
            v = t >> ((t & -t).bit_length() - 1)
        for u in reversed(path):
            s += 1
            if u < bound:
                memo[(u - 1) >> 1] = s
        count += 1
        if s > best or (s == best and x < worst):
            best = s
            worst = x
    return count, best, worst


def verify_range(ell: int, workers: int = 1, step_cap: int = 10**6) -> RangeVerification:
    """Prove every odd start below 2**ell reaches the ground state.

    Reduced-map stopping times are computed with path memoization; the
    worst start is the smallest one attaining the maximum.  An orbit that
    exceeds the step cap raises :class:`DivergenceError` with its start as
    witness.  Worker count affects speed only, never the summary.
    """
    if not 1 <= ell <= 34:
        raise ValueError("verify_range supports 1 <= ell <= 34")
    if step_cap < 1:
        raise ValueError("step_cap must be >= 1")
    odd_count = 1 << (ell - 1)
    n_chunks = max(1, min(workers, odd_count))
    edges = [1 + 2 * (odd_count * i // n_chunks) for i in range(n_chunks + 1)]
    jobs = [(edges[i], edges[i + 1], ell, step_cap) for i in range(n_chunks)]
    if n_chunks > 1:
        with ProcessPoolExecutor(max_workers=n_chunks) as pool:
            results = list(pool.map(_verify_chunk, jobs))
    else:
        results = [_verify_chunk(jobs[0])]
    total = 0
    best = -1
    worst = 0
    for count, chunk_best, chunk_worst in results:
        total += count
        if chunk_best > best or (chunk_best == best and chunk_worst < worst):
            best = chunk_best
            worst = chunk_worst
    return RangeVerification(
        ell=ell,
        verified_count=total,
        max_stopping_time=best,
        worst_start=worst,
    )


@dataclass
class FamilyProbe:
    """Stopping times across one structured start family."""

    kind: Family
    k_max: int
    step_cap: int
    stopping_times: dict[int, int] = field(default_factory=dict)
    unresolved: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.unresolved

    @property
    def max_stop(self) -> int | None:
        return max(self.stopping_times.values()) if self.stopping_times else None


def family_orbit_probe(kind: Family, k_max: int, step_cap: int = 10**6) -> FamilyProbe:
    """Stopping times of the 111000-block family members for 1 <= k <= k_max.

    Members whose orbits outlast the step cap are flagged as unresolved
    rather than treated as failures.
    """
    if k_max < 1:
        raise ValueError("family_orbit_probe needs k_max >= 1")
    probe = FamilyProbe(kind=kind, k_max=k_max, step_cap=step_cap)
    for k in range(1, k_max + 1):
        y = family_member(kind, k)
        _, steps, capped = _orbit_extents(y.numerator, y.length, step_cap)
        if capped:
            probe.unresolved.append(k)
        else:
            probe.stopping_times[k] = steps
    return probe
