"""Exact frailty sampling for the three proper Archimedean families.

The Marshall-Olkin construction is used throughout: draw a positive frailty
``V`` whose Laplace transform is the generator inverse, then set
``U_i = psi(E_i / V)`` with i.i.d. unit exponentials ``E_i``.  The frailty is
positive alpha-stable for Gumbel-Hougaard (Kanter's closed-form transform),
Gamma for Clayton and logarithmic-series for Frank, so no rejection loops are
involved and the cost is O(n * d).

All randomness flows through counter-based Philox streams derived from
``numpy.random.SeedSequence``, which keeps per-repetition streams in the
experiment driver independent by construction and the whole pipeline
reproducible regardless of parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .copulas import CopulaModel
from .errors import DomainError, UnsupportedModelError
from .generators import Family

_ONE_BELOW = np.nextafter(1.0, 0.0)
_TINY = np.finfo(float).tiny


def rng_from_key(seed: int, *key: int) -> np.random.Generator:
    """Philox stream for ``(seed, key...)``; distinct keys give independent streams."""
    return np.random.Generator(np.random.Philox(
        np.random.SeedSequence(entropy=int(seed) & (2 ** 64 - 1),
                               spawn_key=tuple(int(k) for k in key))))


@dataclass(frozen=True)
class SampleMatrix:
    """n x d matrix of copula observations plus its provenance."""

    data: np.ndarray
    model: CopulaModel
    seed: int

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class SliceSample:
    """Rows whose conditioned coordinate fell inside the window [u-eps, u+eps]."""

    rows: np.ndarray          # k x (d-1), conditioned coordinate removed
    level: float
    window: float
    j: int
    requested_k: int
    achieved_k: int

    @property
    def short(self) -> bool:
        return self.achieved_k < self.requested_k


def positive_stable(rng: np.random.Generator, alpha: float, size: int) -> np.ndarray:
    """Positive alpha-stable variates with Laplace transform exp(-t^alpha).

    Kanter's transform: no rejection, closed form in one uniform angle and one
    unit exponential.  ``alpha = 1`` is the degenerate point mass at 1.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError("positive stable requires 0 < alpha <= 1")
    if alpha == 1.0:
        return np.ones(size)
    theta = rng.uniform(0.0, np.pi, size)
    w = rng.standard_exponential(size)
    sin_t = np.sin(theta)
    a = np.sin(alpha * theta) / sin_t ** (1.0 / alpha)
    b = (np.sin((1.0 - alpha) * theta) / w) ** ((1.0 - alpha) / alpha)
    return a * b


def _frailty(family: Family, theta: float, rng: np.random.Generator,
             size: int) -> np.ndarray:
    if family is Family.GUMBEL_HOUGAARD:
        return positive_stable(rng, 1.0 / theta, size)
    if family is Family.CLAYTON:
        return rng.gamma(1.0 / theta, 1.0, size)
    if family is Family.FRANK:
        return rng.logseries(-np.expm1(-theta), size).astype(float)
    raise UnsupportedModelError(f"no sampler for family {family!r}")


def sample_rows(model: CopulaModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. rows from the model's Archimedean copula (no wrapper object)."""
    gen = model.generator
    family = getattr(gen, "family", None)
    if family not in (Family.GUMBEL_HOUGAARD, Family.CLAYTON, Family.FRANK):
        raise UnsupportedModelError(
            "sampling is available only for the Gumbel-Hougaard, Clayton "
            "and Frank families")
    th = gen.theta
    d = model.dim
    # draw order is part of the determinism contract: exponentials then frailty
    e = rng.standard_exponential((n, d))
    if family is Family.GUMBEL_HOUGAARD and th == 1.0:
        u = np.exp(-e)
    else:
        v = _frailty(family, th, rng, n)
        t = e / v[:, None]
        if family is Family.GUMBEL_HOUGAARD:
            u = np.exp(-(t ** (1.0 / th)))
        elif family is Family.CLAYTON:
            # frailty LT (1+t)^(-1/theta): same copula as the scaled generator
            u = np.exp(-np.log1p(t) / th)
        else:
            u = -np.log1p(np.expm1(-th) * np.exp(-t)) / th
    return np.clip(u, _TINY, _ONE_BELOW)


def sample_archimedean(model: CopulaModel, n: int, seed: int) -> SampleMatrix:
    """n i.i.d. observations from the model, deterministic in ``seed``."""
    if n < 1:
        raise DomainError("sample size must be at least 1")
    data = sample_rows(model, n, rng_from_key(seed))
    return SampleMatrix(data=data, model=model, seed=int(seed))


def conditional_slice(sample: SampleMatrix | np.ndarray, j: int, u: float,
                      eps: float, k: int) -> SliceSample:
    """First ``k`` rows (in order) with coordinate ``j`` inside [u-eps, u+eps].

    Returns the d-1 remaining coordinates; a shortfall is recorded in
    ``achieved_k``, never silently padded.
    """
    data = sample.data if isinstance(sample, SampleMatrix) else np.asarray(sample)
    if not (0.0 < u - eps and u + eps < 1.0):
        raise DomainError("window [u-eps, u+eps] must stay inside (0, 1)")
    if k < 1:
        raise DomainError("requested slice size must be at least 1")
    if not 0 <= j < data.shape[1]:
        raise DomainError("conditioned coordinate out of range")
    mask = np.abs(data[:, j] - u) <= eps
    hits = data[mask]
    achieved = min(len(hits), k)
    rows = np.delete(hits[:achieved], j, axis=1)
    return SliceSample(rows=rows, level=float(u), window=float(eps), j=int(j),
                       requested_k=int(k), achieved_k=int(achieved))


def accumulate_slice(model: CopulaModel, j: int, u: float, eps: float, k: int,
                     rng: np.random.Generator, batch_n: int,
                     max_batches: int | None = None) -> SliceSample:
    """Draw fresh batches of ``batch_n`` rows until ``k`` window hits accumulate.

    The expected hit count of a single batch is ``2 * eps * batch_n``, which
    for sharp windows is far below ``k``; accumulating over independent
    batches keeps the conditioning window sharp without inflating any single
    sample.  ``max_batches`` defaults to twice the expected requirement; if
    the cap is reached the shortfall is recorded in the result.
    """
    if not (0.0 < u - eps and u + eps < 1.0):
        raise DomainError("window [u-eps, u+eps] must stay inside (0, 1)")
    if k < 1 or batch_n < 1:
        raise DomainError("slice size and batch size must be at least 1")
    if max_batches is None:
        expected = 2.0 * eps * batch_n
        max_batches = max(1, int(np.ceil(2.0 * k / expected)))
    collected = []
    total = 0
    for _ in range(max_batches):
        data = sample_rows(model, batch_n, rng)
        hits = data[np.abs(data[:, j] - u) <= eps]
        if len(hits):
            collected.append(hits)
            total += len(hits)
        if total >= k:
            break
    rows = (np.vstack(collected) if collected
            else np.empty((0, model.dim)))
    achieved = min(total, k)
    rows = np.delete(rows[:achieved], j, axis=1)
    return SliceSample(rows=rows, level=float(u), window=float(eps), j=int(j),
                       requested_k=int(k), achieved_k=int(achieved))
