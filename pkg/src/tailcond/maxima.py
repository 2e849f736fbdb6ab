"""Normalized componentwise maxima for both steps of the simulation pipeline.

Two normalizations coexist.  Unconditional maxima of a raw copula sample are
centered at the upper endpoint and scaled so the per-coordinate limit is the
standard negative exponential: ``n * (max - 1) <= 0``.  A ``literal_scale``
flag instead divides by ``n``, reproducing the alternative affine convention;
every downstream statistic is rank-based, so the choice is immaterial there.
Conditional maxima of a slice sample are scaled by ``c * a_k`` without
recentering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numeric import fmt17
from .copulas import NormingConstants
from .errors import EmptySampleError, ShortfallError
from .sampling import SampleMatrix, SliceSample


@dataclass(frozen=True)
class MaximaSample:
    """N x m matrix of normalized maxima plus its norming metadata."""

    data: np.ndarray
    norming: str                    # "unconditional" | "conditional"
    block_size: int
    constants: dict = field(default_factory=dict)

    @property
    def n_blocks(self) -> int:
        return self.data.shape[0]

    @property
    def n_coords(self) -> int:
        return self.data.shape[1]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            const = ",".join(f"{k}={fmt17(v)}" for k, v in sorted(self.constants.items()))
            fh.write(f"# norming={self.norming},block_size={self.block_size},{const}\n")
            fh.write(",".join(f"m{i + 1}" for i in range(self.n_coords)) + "\n")
            for row in self.data:
                fh.write(",".join(fmt17(v) for v in row) + "\n")


def componentwise_max_unconditional(sample: SampleMatrix | np.ndarray,
                                    *, literal_scale: bool = False) -> np.ndarray:
    """Vector of normalized per-coordinate maxima of a raw sample.

    Default scale is ``n * (max - 1)``; ``literal_scale`` uses ``(max - 1)/n``.
    """
    data = sample.data if isinstance(sample, SampleMatrix) else np.asarray(sample)
    if data.size == 0:
        raise EmptySampleError("cannot take maxima of an empty sample")
    n = data.shape[0]
    raw = data.max(axis=0)
    if literal_scale:
        return (raw - 1.0) / n
    return n * (raw - 1.0)


def componentwise_max_conditional(sl: SliceSample, nc: NormingConstants,
                                  *, allow_short: bool = False) -> np.ndarray:
    """Per-coordinate maxima of a slice, scaled by ``1 / (c * a_k)``.

    A shortfall (``achieved_k < requested_k``) raises unless the caller opts
    in to the lenient path used by the experiment driver after its retry.
    """
    if sl.short and not allow_short:
        raise ShortfallError(
            f"slice holds {sl.achieved_k} rows, {sl.requested_k} requested")
    if sl.rows.size == 0:
        raise EmptySampleError("slice contains no rows")
    return sl.rows.max(axis=0) / nc.scale


def stack_unconditional(rows, block_size: int) -> MaximaSample:
    """Bundle per-repetition unconditional maxima vectors into one sample."""
    return MaximaSample(data=np.vstack(rows), norming="unconditional",
                        block_size=int(block_size),
                        constants={"a": block_size, "b": 1.0})


def stack_conditional(rows, nc: NormingConstants) -> MaximaSample:
    return MaximaSample(data=np.vstack(rows), norming="conditional",
                        block_size=nc.n,
                        constants={"c": nc.c, "a_n": nc.a_n, "n": nc.n,
                                   "u": nc.u})
