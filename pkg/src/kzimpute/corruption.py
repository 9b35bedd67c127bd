"""Artificial missingness with preserved ground truth.

Blanking is MCAR: gap sizes are drawn from a weighted mix (weights count
gaps, not missing cells) and start positions are sampled uniformly over the
slots that keep every injected gap separated by at least one surviving
value, so a later scan recovers exactly the planned gap sizes. Everything
is a pure function of (series, plan); the plan's seed drives a PCG64
generator whose name is echoed into reports.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .errors import InfeasiblePlanError, SeriesHasMissingError
from .series import TimeSeries

GENERATOR_NAME = "numpy.random.PCG64"

#: Missing-data percentages commonly exercised by the bench presets.
PRESET_FRACTIONS = (0.05, 0.10, 0.20, 0.50)

_MAX_GAP_SIZE = 5
_REJECTION_FACTOR = 10


class Placement(enum.Enum):
    ANYWHERE = "anywhere"
    LEFT_ONLY = "left_only"
    MIDDLE_ONLY = "middle_only"
    RIGHT_ONLY = "right_only"


@dataclass(frozen=True)
class CorruptionPlan:
    """Seedable description of which cells to blank.

    gap_mix maps gap size (1..5) to a non-negative draw weight; the realized
    missing count lands within (largest size - 1) of
    round(target_fraction * n) because gaps blank whole runs.
    """

    seed: int
    target_fraction: float
    gap_mix: dict = dc_field(default_factory=lambda: {1: 1.0})
    placement: Placement = Placement.ANYWHERE

    def __post_init__(self):
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not 0.0 < self.target_fraction < 1.0:
            raise ValueError("target_fraction must lie in (0, 1)")
        if not self.gap_mix:
            raise ValueError("gap_mix must not be empty")
        for size, weight in self.gap_mix.items():
            if not isinstance(size, int) or isinstance(size, bool) or not 1 <= size <= _MAX_GAP_SIZE:
                raise ValueError(f"gap_mix sizes must be integers in 1..{_MAX_GAP_SIZE}")
            if weight < 0:
                raise ValueError("gap_mix weights must be non-negative")
        if not any(w > 0 for w in self.gap_mix.values()):
            raise ValueError("gap_mix needs at least one positive weight")
        if not isinstance(self.placement, Placement):
            raise ValueError("placement must be a Placement")

    def with_seed(self, seed: int) -> "CorruptionPlan":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "target_fraction": self.target_fraction,
            "gap_mix": {str(k): float(v) for k, v in sorted(self.gap_mix.items())},
            "placement": self.placement.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CorruptionPlan":
        return cls(
            seed=int(data.get("seed", 0)),
            target_fraction=float(data["target_fraction"]),
            gap_mix={int(k): float(v) for k, v in data["gap_mix"].items()},
            placement=Placement(data.get("placement", "anywhere")),
        )

    def describe(self) -> str:
        mix = ",".join(f"{k}:{v:g}" for k, v in sorted(self.gap_mix.items()))
        return f"f={self.target_fraction:g} mix[{mix}] {self.placement.value}"


@dataclass(frozen=True)
class CorruptedPair:
    """Blanked series plus the (index, true value) pairs needed to score it."""

    corrupted: TimeSeries
    truth: tuple[tuple[int, float], ...]
    plan_echo: CorruptionPlan
    drawn_sizes: tuple[int, ...] = ()

    def restore(self) -> TimeSeries:
        """Reapply the truth; reconstructs the original series exactly."""
        out = self.corrupted.values.copy()
        for idx, value in self.truth:
            out[idx] = value
        return TimeSeries(out)


def _positive_sizes(gap_mix: dict) -> list[int]:
    return sorted(s for s, w in gap_mix.items() if w > 0)


def feasible_mass(n: int, gap_mix: dict, placement: Placement = Placement.ANYWHERE) -> int:
    """Maximum number of cells blankable under the no-merge rule.

    Boundary-only placements host a single gap, so their mass is the largest
    mix size that still leaves one survivor. The interior cases are a small
    best-packing recursion over the admissible window.
    """
    sizes = _positive_sizes(gap_mix)
    if not sizes or n < 1:
        return 0
    if placement in (Placement.LEFT_ONLY, Placement.RIGHT_ONLY):
        fitting = [s for s in sizes if s <= n - 1]
        return max(fitting, default=0)

    lo, hi = (0, n) if placement is Placement.ANYWHERE else (1, n - 1)
    width = max(0, hi - lo)
    # reach[i] is a bitset of blanked-cell totals achievable from offset i on;
    # gaps are atomic, so the survivor rule needs the full achievable set, not
    # just the best packing.
    reach = [1] * (width + 2)
    for i in range(width - 1, -1, -1):
        bits = reach[i + 1]
        for s in sizes:
            if i + s <= width:
                bits |= reach[i + s + 1] << s
        reach[i] = bits
    limit = min(n - 1, width)
    masked = reach[0] & ((1 << (limit + 1)) - 1)
    return masked.bit_length() - 1


def _draw_sizes(rng: np.random.Generator, plan: CorruptionPlan, n: int, target: int) -> list[int]:
    """Weighted gap sizes totalling >= target, kept packable at every step."""
    sizes = _positive_sizes(plan.gap_mix)
    weights = np.array([plan.gap_mix[s] for s in sizes], dtype=float)

    if plan.placement in (Placement.LEFT_ONLY, Placement.RIGHT_ONLY):
        largest = max(sizes)
        allowed = [s for s in sizes if s <= n - 1 and abs(s - target) <= largest - 1]
        if not allowed:
            raise InfeasiblePlanError(
                "boundary placement hosts one gap; no mix size is both placeable "
                f"and within {largest - 1} of the target of {target} cells"
            )
        w = np.array([plan.gap_mix[s] for s in allowed], dtype=float)
        return [int(rng.choice(allowed, p=w / w.sum()))]

    cap = n if plan.placement is Placement.ANYWHERE else n - 2
    drawn: list[int] = []
    mass = 0
    while mass < target:
        allowed_idx = [
            i
            for i, s in enumerate(sizes)
            if mass + s <= n - 1 and mass + s + len(drawn) <= cap
        ]
        if not allowed_idx:
            break
        w = weights[allowed_idx]
        pick = int(rng.choice(allowed_idx, p=w / w.sum()))
        drawn.append(sizes[pick])
        mass += sizes[pick]
    return drawn


def _bounds(placement: Placement, n: int, size: int) -> tuple[int, int]:
    if placement is Placement.ANYWHERE:
        return 0, n - size
    if placement is Placement.MIDDLE_ONLY:
        return 1, n - 1 - size
    if placement is Placement.LEFT_ONLY:
        return 0, 0
    return n - size, n - size


def _tight_pack(sizes: list[int], placement: Placement, n: int) -> list[tuple[int, int]]:
    """Deterministic fallback: largest gaps first, packed left to right."""
    start_at = 1 if placement is Placement.MIDDLE_ONLY else 0
    end_limit = n - 1 if placement is Placement.MIDDLE_ONLY else n
    cursor = start_at
    placed = []
    for s in sorted(sizes, reverse=True):
        if cursor + s > end_limit:
            raise InfeasiblePlanError("drawn gaps cannot be packed with separation")
        placed.append((cursor, s))
        cursor += s + 1
    return placed


def corrupt(series: TimeSeries, plan: CorruptionPlan) -> CorruptedPair:
    """Blank cells of a complete series according to the plan.

    Deterministic given (series, plan). Start positions are rejection-sampled
    uniformly over in-bounds slots; after 10*n conflicts a gap takes the
    leftmost free slot, and if random placement dead-ends entirely the whole
    layout is redone as a deterministic tight pack.
    """
    values = series.values
    n = series.n
    if np.isnan(values).any():
        raise SeriesHasMissingError("corruption requires a complete series")

    target = round(plan.target_fraction * n)
    if target > feasible_mass(n, plan.gap_mix, plan.placement):
        raise InfeasiblePlanError(
            f"{target} missing cells do not fit a series of length {n} "
            "with one survivor between gaps"
        )

    rng = np.random.default_rng(plan.seed)
    placed: list[tuple[int, int]] = []
    if target > 0:
        sizes = _draw_sizes(rng, plan, n, target)
        blocked = np.zeros(n, dtype=bool)
        need_restart = False
        for s in sizes:
            lo, hi = _bounds(plan.placement, n, s)
            spot = -1
            if lo <= hi:
                for _ in range(_REJECTION_FACTOR * n):
                    a = int(rng.integers(lo, hi + 1))
                    if not blocked[a : a + s].any():
                        spot = a
                        break
                else:
                    for a in range(lo, hi + 1):
                        if not blocked[a : a + s].any():
                            spot = a
                            break
            if spot < 0:
                need_restart = True
                break
            placed.append((spot, s))
            blocked[max(0, spot - 1) : min(n, spot + s + 1)] = True
        if need_restart:
            placed = _tight_pack(sizes, plan.placement, n)

    blank = sorted(idx for a, s in placed for idx in range(a, a + s))
    corrupted = values.copy()
    truth = tuple((idx, float(values[idx])) for idx in blank)
    corrupted[blank] = np.nan
    return CorruptedPair(
        corrupted=TimeSeries(corrupted),
        truth=truth,
        plan_echo=plan,
        drawn_sizes=tuple(s for _, s in placed),
    )


__all__ = [
    "GENERATOR_NAME",
    "PRESET_FRACTIONS",
    "Placement",
    "CorruptionPlan",
    "CorruptedPair",
    "corrupt",
    "feasible_mass",
]
