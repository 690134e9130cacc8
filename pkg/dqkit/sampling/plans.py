"""
Seeded sample pairs and triples for the criterion checks.

Float plans draw from numpy's PCG64 generator, with independent streams
spawned from the plan seed for the stratified overlay and for the random
fill. Exact plans enumerate the user's pool instead of inventing numbers.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from scalars.core import Mode, QRootTwo, Scalar, format_scalar, is_rational, to_mode
from scalars.exceptions import InfeasibleGap, InsufficientPool

logger = logging.getLogger(__name__)

DECILES = 10
MAX_SEED = 2**64 - 1
MAX_REDRAWS = 1000

Pair = tuple[Scalar, Scalar]
Triple = tuple[Scalar, Scalar, Scalar]


@dataclass(frozen=True)
class SamplingPlan:
    seed: int = 42
    count: int = 64
    min_gap: float = 1e-3
    mode: Mode = Mode.FLOAT
    include_endpoints: bool = True
    exact_pool: Optional[tuple[QRootTwo, ...]] = None

    def __post_init__(self):
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.count < 0:
            raise ValueError(f"count must be nonnegative, got {self.count}")
        if self.min_gap < 0:
            raise ValueError(f"min_gap must be nonnegative, got {self.min_gap}")
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.exact_pool is not None:
            pool = tuple(to_mode(value, Mode.EXACT) for value in self.exact_pool)
            object.__setattr__(self, "exact_pool", pool)

    @property
    def exact_gap(self) -> QRootTwo:
        return QRootTwo(Fraction(self.min_gap))

    def streams(self, n: int) -> list[np.random.Generator]:
        """``n`` independent generators split off the plan seed."""
        children = np.random.SeedSequence(self.seed).spawn(n)
        return [np.random.Generator(np.random.PCG64(child)) for child in children]

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "min_gap": self.min_gap,
            "mode": self.mode.value,
            "include_endpoints": self.include_endpoints,
            "exact_pool": (
                None
                if self.exact_pool is None
                else [format_scalar(value) for value in self.exact_pool]
            ),
        }


def _uniform(rng: np.random.Generator, low: float, high: float) -> float:
    if high <= low:
        return low
    return float(rng.uniform(low, high))


def _away(value: float, anchor: float, gap: float, limit: float) -> float:
    """Steps ``value`` toward ``limit`` one ulp at a time until it is ``gap`` from ``anchor``."""
    while abs(value - anchor) < gap and value != limit:
        value = math.nextafter(value, limit)
    return value


def _below(high: float, gap: float) -> float:
    """Largest point not above ``high`` that still leaves ``gap`` before 1."""
    while 1.0 - high < gap:
        high = math.nextafter(high, 0.0)
    return high


def _spread(points: Sequence[Scalar], gap: Scalar, low: Scalar, high: Scalar) -> bool:
    if points[0] < low or points[-1] > high:
        return False
    steps = zip(points, points[1:])
    return all(right - left >= gap and right > left for left, right in steps)


def _draw(draw: Callable[[], tuple], valid: Callable[[tuple], bool]) -> tuple:
    for _ in range(MAX_REDRAWS):
        sample = draw()
        if valid(sample):
            return sample
    raise InfeasibleGap("could not draw a sample honouring the minimum gap")


def _float_pairs(plan: SamplingPlan) -> list[Pair]:
    gap = plan.min_gap
    if gap > 1:
        raise InfeasibleGap(f"no pair in [0, 1] is {gap!r} apart")
    overlay, fill = plan.streams(2)
    valid = lambda pair: _spread(pair, gap, 0.0, 1.0)  # noqa: E731

    def around(low: float, high: float) -> Pair:
        middle = _uniform(overlay, low, high)
        half = _uniform(overlay, gap / 2, min(middle, 1 - middle))
        a, b = max(0.0, middle - half), min(1.0, middle + half)
        b = _away(b, a, gap, 1.0)
        return _away(a, b, gap, 0.0), b

    def anywhere() -> Pair:
        a = _uniform(fill, 0.0, 1 - gap)
        b = _away(min(1.0, _uniform(fill, a + gap, 1.0)), a, gap, 1.0)
        return _away(a, b, gap, 0.0), b

    pairs = [(0.0, 1.0)] if plan.include_endpoints else []
    if plan.count >= DECILES:
        # one pair per decile band of the midpoint
        for band in range(DECILES):
            low = max(band / DECILES, gap / 2)
            high = min((band + 1) / DECILES, 1 - gap / 2)
            if low > high:
                raise InfeasibleGap(
                    f"no pair with gap {gap!r} has its midpoint in decile {band}"
                )
            pairs.append(_draw(lambda: around(low, high), valid))
    while len(pairs) < plan.count:
        pairs.append(_draw(anywhere, valid))
    return pairs[: plan.count]


def _float_triples(plan: SamplingPlan, anchored: bool = False) -> list[Triple]:
    gap = plan.min_gap
    if 2 * gap > 1:
        raise InfeasibleGap(f"no triple in [0, 1] has gaps of {gap!r}")
    overlay, fill = plan.streams(2)
    valid = lambda triple: _spread(triple, gap, 0.0, 1.0)  # noqa: E731

    def around(rng: np.random.Generator, middle: float) -> Triple:
        a = 0.0 if anchored else _away(_uniform(rng, 0.0, middle - gap), middle, gap, 0.0)
        c = _away(min(1.0, _uniform(rng, middle + gap, 1.0)), middle, gap, 1.0)
        return a, middle, c

    triples = [(0.0, 0.5, 1.0)] if plan.include_endpoints else []
    if plan.count >= DECILES:
        # one triple per decile band of the middle point
        for band in range(DECILES):
            low = max(band / DECILES, gap)
            high = min((band + 1) / DECILES, 1 - gap)
            if low > high:
                raise InfeasibleGap(
                    f"no triple with gaps {gap!r} has its middle point in decile {band}"
                )
            high = _below(high, gap)
            low = min(low, high)
            triples.append(
                _draw(lambda: around(overlay, _uniform(overlay, low, high)), valid)
            )
    fill_high = _below(1 - gap, gap)
    while len(triples) < plan.count:
        triples.append(_draw(lambda: around(fill, _uniform(fill, gap, fill_high)), valid))
    return triples[: plan.count]


def _pool(plan: SamplingPlan, needed: int, positive: bool = False) -> list[QRootTwo]:
    if plan.exact_pool is None:
        raise InsufficientPool("exact sampling needs an exact pool")
    zero, one = QRootTwo(0), QRootTwo(1)
    usable = {
        value
        for value in plan.exact_pool
        if zero <= value <= one and (value or not positive)
    }
    members = sorted(usable)
    if len(members) < needed:
        raise InsufficientPool(
            f"exact pool has {len(members)} distinct usable members in [0, 1], "
            f"{needed} needed"
        )
    return members


def _signature(sample: tuple[QRootTwo, ...]) -> tuple[bool, ...]:
    return tuple(is_rational(value) for value in sample)


def _subsample(
    plan: SamplingPlan, candidates: list[tuple], keep_first: bool
) -> list[tuple]:
    """
    Deterministic choice of ``plan.count`` candidates.

    Picks go round-robin over the rationality signatures, shuffled by the plan
    seed within each signature; the result keeps enumeration order.
    """
    if plan.count >= len(candidates):
        if plan.count > len(candidates):
            logger.info(
                "exact pool yields only %d samples (%d requested)",
                len(candidates),
                plan.count,
            )
        return candidates
    (rng,) = plan.streams(1)
    chosen = [0] if keep_first else []
    groups: dict[tuple[bool, ...], list[int]] = {}
    for index in range(len(chosen), len(candidates)):
        groups.setdefault(_signature(candidates[index]), []).append(index)
    queues = [[int(i) for i in rng.permutation(groups[key])] for key in sorted(groups)]
    while len(chosen) < plan.count:
        for queue in queues:
            if queue and len(chosen) < plan.count:
                chosen.append(queue.pop(0))
    return [candidates[index] for index in sorted(chosen)]


def _exact_samples(
    plan: SamplingPlan, size: int, endpoint: tuple, anchored: bool
) -> list:
    gap = plan.exact_gap
    zero, one = QRootTwo(0), QRootTwo(1)
    members = _pool(plan, size, positive=anchored)
    # anchored pairs are checked as the triple (0, b, c)
    anchor = (zero,) if anchored else ()
    candidates = [
        sample
        for sample in combinations(members, size)
        if _spread(anchor + sample, gap, zero, one)
    ]
    if not candidates:
        raise InfeasibleGap(f"no pool samples are {plan.min_gap!r} apart")
    endpoint = tuple(QRootTwo(value) for value in endpoint)
    keep_first = plan.include_endpoints and endpoint in candidates
    if keep_first:
        candidates.remove(endpoint)
        candidates.insert(0, endpoint)
    return _subsample(plan, candidates, keep_first)


def gen_pairs(plan: SamplingPlan) -> list[Pair]:
    """Pairs 0 <= a < b <= 1 with b - a >= min_gap."""
    if plan.count == 0:
        return []
    if plan.mode is Mode.EXACT:
        pairs = _exact_samples(plan, 2, (0, 1), anchored=False)
    else:
        pairs = _float_pairs(plan)
    logger.debug("drew %d %s pairs (seed %d)", len(pairs), plan.mode.value, plan.seed)
    return pairs


def gen_triples(plan: SamplingPlan) -> list[Triple]:
    """Triples 0 <= a < b < c <= 1 with consecutive gaps >= min_gap."""
    if plan.count == 0:
        return []
    if plan.mode is Mode.EXACT:
        triples = _exact_samples(plan, 3, (0, Fraction(1, 2), 1), anchored=False)
    else:
        triples = _float_triples(plan)
    logger.debug(
        "drew %d %s triples (seed %d)", len(triples), plan.mode.value, plan.seed
    )
    return triples


def gen_anchored_pairs(plan: SamplingPlan) -> list[Pair]:
    """Pairs 0 < b < c <= 1 such that (0, b, c) honours min_gap."""
    if plan.count == 0:
        return []
    if plan.mode is Mode.EXACT:
        pairs = _exact_samples(plan, 2, (Fraction(1, 2), 1), anchored=True)
    else:
        pairs = [(b, c) for _, b, c in _float_triples(plan, anchored=True)]
    logger.debug("drew %d anchored pairs (seed %d)", len(pairs), plan.seed)
    return pairs
