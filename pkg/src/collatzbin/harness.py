"""Reproducible random-orbit experiments over fixed-length binary fractions.

Randomness comes from a small splitmix64 generator with per-sample seeds
derived from (master seed, run index, sample index), so results are
identical across platforms and across worker counts: every sample is a pure
function of its coordinates, and cell statistics are maxima, which merge in
any order.
"""

from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .exact import BinaryFraction
from .maps import _binary_step_raw

__all__ = [
    "CSV_HEADER",
    "CellSummary",
    "ExperimentConfig",
    "ExperimentSummary",
    "RNG_ID",
    "derive_seed",
    "run_cell",
    "run_table",
    "sample_fraction",
]

RNG_ID = "splitmix64"

CSV_HEADER = "length,samples,runs,max_length_delta,max_stop_time,seed,rng_id,capped_count"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 finalizer: one 64-bit state word to one output word."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, run: int, index: int) -> int:
    """Seed for one sample, a pure function of its (run, index) coordinates."""
    z = master & _MASK64
    z = _mix64((z + (run + 1) * _GOLDEN) & _MASK64)
    z = _mix64((z + (index + 1) * _GOLDEN) & _MASK64)
    return z


def _bit_stream(seed: int, nbits: int) -> int:
    """nbits pseudo-random bits (as an integer) from repeated splitmix64 draws."""
    out = 0
    got = 0
    state = seed & _MASK64
    while got < nbits:
        state = (state + _GOLDEN) & _MASK64
        out = (out << 64) | _mix64(state)
        got += 64
    return out >> (got - nbits)


def sample_fraction(ell: int, seed: int) -> BinaryFraction:
    """A uniform random length-ell binary fraction.

    First and last digits are pinned to 1 (normal form), the ell-2 middle
    digits are independent fair bits.
    """
    if ell < 3:
        raise ValueError("sample_fraction needs ell >= 3")
    middle = _bit_stream(seed, ell - 2)
    num = (1 << (ell - 1)) | (middle << 1) | 1
    return BinaryFraction(num, ell)


def _orbit_extents(num: int, ell: int, step_cap: int) -> tuple[int, int, bool]:
    """(max length seen, steps to ground, capped?) for one interval-map orbit."""
    max_len = ell
    steps = 0
    while not (num == 1 and ell == 1):
        if steps >= step_cap:
            return max_len, steps, True
        num, ell = _binary_step_raw(num, ell)
        steps += 1
        if ell > max_len:
            max_len = ell
    return max_len, steps, False


@dataclass
class CellSummary:
    """Worst-case orbit statistics for one (length, samples, runs) cell."""

    length: int
    samples: int
    runs: int
    max_length_delta: int
    max_stop_time: int
    seed: int
    rng_id: str
    capped_count: int

    def csv_row(self) -> str:
        return (
            f"{self.length},{self.samples},{self.runs},{self.max_length_delta},"
            f"{self.max_stop_time},{self.seed},{self.rng_id},{self.capped_count}"
        )


def _run_one(args: tuple[int, int, int, int, int]) -> tuple[int, int, int]:
    """One run of `samples` orbits; returns (max length delta, max stop, capped)."""
    ell, samples, master_seed, run, step_cap = args
    max_delta = 0
    max_stop = 0
    capped = 0
    for idx in range(samples):
        y = sample_fraction(ell, derive_seed(master_seed, run, idx))
        max_len, steps, hit_cap = _orbit_extents(y.numerator, ell, step_cap)
        if hit_cap:
            capped += 1
            continue
        if max_len - ell > max_delta:
            max_delta = max_len - ell
        if steps > max_stop:
            max_stop = steps
    return max_delta, max_stop, capped


def run_cell(
    ell: int,
    samples: int,
    runs: int,
    master_seed: int,
    step_cap: int = 10**6,
    workers: int = 1,
) -> CellSummary:
    """Worst case over `runs` independent runs of `samples` random orbits each.

    Orbits that hit the step cap are counted in ``capped_count`` and excluded
    from the maxima.  Results do not depend on ``workers``.
    """
    if ell < 3:
        raise ValueError("run_cell needs ell >= 3")
    if samples < 1 or runs < 1 or step_cap < 1:
        raise ValueError("samples, runs, and step_cap must be >= 1")
    jobs = [(ell, samples, master_seed, run, step_cap) for run in range(runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    max_delta = max(r[0] for r in results)
    max_stop = max(r[1] for r in results)
    capped = sum(r[2] for r in results)
    return CellSummary(
        length=ell,
        samples=samples,
        runs=runs,
        max_length_delta=max_delta,
        max_stop_time=max_stop,
        seed=master_seed,
        rng_id=RNG_ID,
        capped_count=capped,
    )


@dataclass
class ExperimentConfig:
    """Configuration for a multi-length experiment table."""

    lengths: tuple[int, ...] = (50, 100)
    samples: int = 500
    runs: int = 10
    master_seed: int = 20250815
    step_cap: int = 10**6

    def __post_init__(self) -> None:
        if not self.lengths or any(ell < 3 for ell in self.lengths):
            raise ValueError("lengths must be nonempty with every entry >= 3")
        if self.samples < 1 or self.runs < 1 or self.step_cap < 1:
            raise ValueError("samples, runs, and step_cap must be >= 1")


@dataclass
class ExperimentSummary:
    """One CellSummary per configured length, in configuration order."""

    config: ExperimentConfig
    cells: list[CellSummary] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for cell in self.cells:
            buf.write(cell.csv_row() + "\n")
        return buf.getvalue()


def run_table(config: ExperimentConfig, workers: int = 1) -> ExperimentSummary:
    """Run every cell of the configured table; deterministic given the config."""
    summary = ExperimentSummary(config=config)
    for ell in config.lengths:
        summary.cells.append(
            run_cell(
                ell,
                config.samples,
                config.runs,
                config.master_seed,
                step_cap=config.step_cap,
                workers=workers,
            )
        )
    return summary


def write_csv(summary: ExperimentSummary, path: str) -> None:
    """Write the table as UTF-8 CSV with LF line endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(summary.to_csv())
