"""Archimedean and Archimax distribution functions and their conditionals.

The model evaluated here is ``C(u) = phi_inv(||(phi(u_1), ..., phi(u_d))||_D)``
on an upper validity region ``[u0, 1]``.  With the sum norm this is the plain
Archimedean form, for which the exact conditional distribution given one
component, the associated univariate margin, the norming constants of the
conditional maxima limit, and convergence probes toward both the
unconditional and the conditional extreme value limits are provided.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dnorms import DNorm, NormKind, power_transform, sum_norm
from .errors import (DegeneratePointError, DimensionError, DomainError,
                     RegionError, UnsupportedModelError)
from .generators import Family, Generator, PowerGenerator, generator_from_dict

_CLAMP_MARGIN = 1e-12


@dataclass(frozen=True)
class NormingConstants:
    """Scale constants of the conditional maxima limit at level ``u``."""

    c: float
    a_n: float
    n: int
    u: float
    j: int

    @property
    def scale(self) -> float:
        return self.c * self.a_n


@dataclass(frozen=True)
class CopulaModel:
    generator: Generator | PowerGenerator
    dnorm: DNorm
    dim: int
    lower_valid: tuple

    def __post_init__(self):
        if self.dim < 2:
            raise DimensionError("dimension must be at least 2")
        if self.dnorm.dim != self.dim:
            raise DimensionError("D-norm dimension must match the model dimension")
        lv = tuple(float(v) for v in np.atleast_1d(self.lower_valid))
        if len(lv) == 1:
            lv = lv * self.dim
        if len(lv) != self.dim:
            raise DimensionError("lower_valid must have one entry per coordinate")
        if any(not (0.0 < v < 1.0) for v in lv):
            raise DomainError("lower_valid must lie componentwise in (0, 1)")
        object.__setattr__(self, "lower_valid", lv)

    def to_dict(self) -> dict:
        return {"generator": self.generator.to_dict(),
                "dnorm": self.dnorm.to_dict(),
                "dim": self.dim,
                "lower_valid": list(self.lower_valid)}

    @classmethod
    def from_dict(cls, d: dict) -> "CopulaModel":
        return cls(generator_from_dict(d["generator"]),
                   DNorm.from_dict(d["dnorm"]),
                   int(d["dim"]),
                   tuple(d["lower_valid"]))


def default_lower_valid(generator, dim: int) -> float:
    """Per-family default for the validity threshold u0.

    Generators with an unbounded range are valid Archimedean forms on all of
    (0, 1]^d, so 0.5 is a sound (arbitrary) choice.  Bounded generators
    (logistic) are kept inside the branch where the summed generator values
    stay within the invertible range: d * phi(u0) = 1.
    """
    if getattr(generator, "bounded_inverse", False):
        return float(generator.phi_inverse(1.0 / dim))
    return 0.5


def make_model(family, theta, dim: int, *, norm_kind="sum", q: float = 1.0,
               lower_valid=None) -> CopulaModel:
    """Convenience constructor used by the CLI and the experiment driver."""
    gen = Generator(Family(family), float(theta))
    dn = DNorm(NormKind(norm_kind), dim, q)
    if lower_valid is None:
        lower_valid = default_lower_valid(gen, dim)
    return CopulaModel(gen, dn, dim, tuple(np.broadcast_to(lower_valid, (dim,))))


def _check_region(m: CopulaModel, u, *, upper_open=False):
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != m.dim:
        raise DimensionError(f"expected vectors of length {m.dim}")
    lo = np.asarray(m.lower_valid)
    if np.any(u < lo - _CLAMP_MARGIN):
        raise RegionError("argument below the model's validity region [u0, 1]")
    if np.any(u > 1.0) or (upper_open and np.any(u >= 1.0)):
        raise DomainError("copula arguments must not exceed 1")
    return u


def cdf(m: CopulaModel, u):
    """Distribution function at ``u`` (componentwise in [u0, 1]).

    ``u`` may carry leading batch axes.  For the sup norm the value collapses
    to ``min(u)`` for any strictly decreasing generator, which is returned
    directly so the identity is exact in floating point.
    """
    u = _check_region(m, u)
    if m.dnorm.kind is NormKind.SUP:
        return u.min(axis=-1)
    phis = m.generator.phi(u)
    y = m.dnorm.evaluate(phis)
    val, _ = m.generator.phi_inverse_flagged(y)
    return val


def _sum_generator(m: CopulaModel):
    """Generator of the equivalent sum-norm (Archimedean) model, or raise."""
    if m.dnorm.kind is NormKind.SUM or (m.dnorm.kind is NormKind.LOGISTIC
                                        and m.dnorm.q == 1.0):
        return m.generator
    if m.dnorm.kind is NormKind.LOGISTIC:
        return archimax_logistic_reduction(m.generator, m.dnorm.q)
    raise UnsupportedModelError(
        "conditioning is defined only for sum-norm and logistic-norm models")


def conditional_cdf(m: CopulaModel, j: int, u: float, v):
    """P(U_i <= v_i, i != j | U_j = u) for an Archimedean-structure model.

    ``v`` holds the d-1 unconditioned coordinates in ascending coordinate
    order with slot ``j`` removed.  Raises ``DegeneratePointError`` when the
    full vector leaves the support of the distribution (C(.) = 0).
    """
    gen = _sum_generator(m)
    if not 0 <= j < m.dim:
        raise DimensionError("conditioned coordinate out of range")
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != m.dim - 1:
        raise DimensionError(f"expected {m.dim - 1} unconditioned coordinates")
    full = np.concatenate([v[..., :j], np.broadcast_to(u, v.shape[:-1] + (1,)),
                           v[..., j:]], axis=-1)
    _check_region(m, full)
    if not u < 1.0:
        raise DomainError("conditioning level must satisfy u < 1")
    total = gen.phi(u) + gen.phi(v).sum(axis=-1)
    c_val, clamped = gen.phi_inverse_flagged(total)
    if clamped or np.any(np.asarray(c_val) <= 0.0):
        raise DegeneratePointError(
            "C(u) = 0 at this point; the conditional df is not defined")
    dp_u = gen.phi_prime(u)
    if dp_u == 0.0 or not np.isfinite(dp_u):
        raise DegeneratePointError("phi'(u) must be finite and nonzero")
    out = dp_u / gen.phi_prime(c_val)
    return np.minimum(out, 1.0) if isinstance(out, np.ndarray) else min(out, 1.0)


def conditional_margin(m: CopulaModel, u: float, v):
    """The common univariate upper-tail margin H_u(v) of the conditional df."""
    gen = _sum_generator(m)
    v0 = max(m.lower_valid)
    v_arr = np.asarray(v, dtype=float)
    if np.any(v_arr < v0 - _CLAMP_MARGIN) or np.any(v_arr > 1.0):
        raise RegionError("margin argument must lie in [max(u0), 1]")
    if not (v0 <= u < 1.0):
        raise DomainError("conditioning level must lie in [max(u0), 1)")
    total = gen.phi(u) + gen.phi(v)
    c_val, clamped = gen.phi_inverse_flagged(total)
    if clamped or np.any(np.asarray(c_val) <= 0.0):
        raise DegeneratePointError("H_u undefined where the df degenerates")
    out = gen.phi_prime(u) / gen.phi_prime(c_val)
    return np.minimum(out, 1.0) if isinstance(out, np.ndarray) else min(out, 1.0)


def norming_constants(m: CopulaModel, u: float, j: int, n: int) -> NormingConstants:
    """Constants c and a_n of the conditional maxima normalization.

    c = (phi'(u)^2 / phi''(u))^(1/p) with p the generator tail index, and
    a_n = 1 - phi_inverse(1/n).
    """
    gen = _sum_generator(m)
    if n < 1:
        raise DomainError("block size must be at least 1")
    if not 0 <= j < m.dim:
        raise DimensionError("conditioned coordinate out of range")
    dp = gen.phi_prime(u)
    dpp = gen.phi_second(u)
    if dpp <= 0.0 or not np.isfinite(dpp):
        raise DegeneratePointError(
            "phi''(u) must be positive; the norming constant c is undefined")
    if dp == 0.0:
        raise DegeneratePointError("phi'(u) must be nonzero")
    p = gen.tail_index
    c = (dp * dp / dpp) ** (1.0 / p)
    a_n = gen.one_minus_inverse(1.0 / n)
    return NormingConstants(c=float(c), a_n=float(a_n), n=int(n), u=float(u), j=int(j))


def doa_limit(m: CopulaModel, x) -> float:
    """Limit of the domain-of-attraction probe: ||(|x_i|^p)||_D^(1/p)."""
    p = m.generator.tail_index
    return float(power_transform(m.dnorm, p).evaluate(np.asarray(x, dtype=float))
                 if p != 1.0 else m.dnorm.evaluate(np.asarray(x, dtype=float)))


def doa_convergence_probe(m: CopulaModel, x, n_grid):
    """n * (1 - C(1 + x/n)) along ``n_grid`` (x <= 0 componentwise).

    Approaches :func:`doa_limit` as n grows; raises ``RegionError`` when the
    grid starts so small that 1 + x/n leaves the validity region.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (m.dim,):
        raise DimensionError(f"x must have length {m.dim}")
    if np.any(x > 0.0):
        raise DomainError("probe requires x <= 0 componentwise")
    n_grid = np.asarray(n_grid)
    out = np.empty(n_grid.shape, dtype=float)
    lo = np.asarray(m.lower_valid)
    for i, n in enumerate(n_grid):
        s = -x / float(n)
        if np.any(1.0 - s < lo - _CLAMP_MARGIN):
            raise RegionError(f"1 + x/n leaves the validity region at n={n}")
        phis = m.generator.phi_one_minus(s)
        y = m.dnorm.evaluate(phis)
        out[i] = float(n) * m.generator.one_minus_inverse(y)
    return out


def conditional_limit_probe(m: CopulaModel, u: float, j: int, x, n_grid):
    """n * (1 - H_{j,u}(1 + c a_n x)) along ``n_grid``.

    Returns ``(values, clamped)``: the probe sequence, approaching
    ``sum(|x_i|^p)``, and a flag set when any argument had to be clamped into
    [u0 + eps, 1) at early grid points.
    """
    gen = _sum_generator(m)
    x = np.asarray(x, dtype=float)
    if x.shape != (m.dim - 1,):
        raise DimensionError(f"x must have length {m.dim - 1}")
    if np.any(x > 0.0):
        raise DomainError("probe requires x <= 0 componentwise")
    dp_u = gen.phi_prime(u)
    phi_u = gen.phi(u)
    lo = max(m.lower_valid)
    n_grid = np.asarray(n_grid)
    out = np.empty(n_grid.shape, dtype=float)
    clamped = False
    for i, n in enumerate(n_grid):
        nc = norming_constants(m, u, j, int(n))
        s = -nc.scale * x
        s_max = 1.0 - lo - _CLAMP_MARGIN
        if np.any(s > s_max):
            clamped = True
            s = np.minimum(s, s_max)
        total = phi_u + gen.phi_one_minus(s).sum()
        c_val, was_clamped = gen.phi_inverse_flagged(total)
        if was_clamped or c_val <= 0.0:
            raise DegeneratePointError("conditional df degenerates on the probe")
        ratio = gen.phi_prime(c_val) / dp_u
        out[i] = float(n) * (ratio - 1.0) / ratio
    return out, clamped


def archimax_logistic_reduction(generator, q: float):
    """Collapse a logistic-norm Archimax model into an Archimedean one.

    Returns the composite generator ``psi = phi**q`` whose plain Archimedean
    distribution coincides with the Archimax distribution built from
    ``generator`` and the logistic norm with exponent ``q``.
    """
    if q < 1.0:
        raise DomainError("reduction requires q >= 1")
    if q == 1.0:
        return generator
    return PowerGenerator(generator, q)


def reduce_to_archimedean(m: CopulaModel) -> CopulaModel:
    """Sum-norm model equivalent to ``m`` (logistic-norm models only)."""
    gen = _sum_generator(m)
    return CopulaModel(gen, sum_norm(m.dim), m.dim, m.lower_valid)
