"""Archimedean generator families and numerical tail-behavior probes.

Four families are supported: Gumbel-Hougaard, Clayton, Frank and the
logistic generator ``(1 - s)**p``.  Every generator exposes pointwise
evaluation, its first two derivatives, the analytic inverse, and stable
variants parametrized by the distance ``s`` to the upper endpoint
(``phi_one_minus(s)`` is ``phi(1 - s)`` without cancellation).  The stable
variants matter because all tail diagnostics evaluate the generator within
1e-10 of 1, where the direct closed forms lose most of their digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._numeric import aitken_limit
from .errors import DomainError, ParameterError

#: geometric grid used by the numeric limit probes
PROBE_GRID = np.logspace(-2.0, -10.0, 9)


class Family(str, Enum):
    GUMBEL_HOUGAARD = "gumbel"
    CLAYTON = "clayton"
    FRANK = "frank"
    LOGISTIC = "logistic"


def _check_range(x, lo, hi, name, *, lo_open=True, hi_open=False):
    arr = np.asarray(x, dtype=float)
    bad_lo = arr <= lo if lo_open else arr < lo
    bad_hi = arr >= hi if hi_open else arr > hi
    if np.any(bad_lo) or np.any(bad_hi):
        raise DomainError(f"{name} must lie in the interval ({lo}, {hi}]"
                          if lo_open and not hi_open else
                          f"{name} outside admissible range ({lo}, {hi})")
    return arr


def _ret(arr, scalar_input):
    return float(arr) if scalar_input else arr


@dataclass(frozen=True)
class ConditionReport:
    """Numerically probed limits behind the generator's tail conditions."""

    tail_index: float
    slope_const: float | None
    c1_limit: float
    c1_holds: bool
    c2_limit: float
    c2_holds: bool
    c3_limit: float
    c3_converged: bool


@dataclass(frozen=True)
class Generator:
    """A parametrized Archimedean generator.

    ``theta`` is the family parameter (the exponent itself for the logistic
    family).  Construction validates the parameter domain; evaluation never
    re-validates it.
    """

    family: Family
    theta: float

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        th = float(self.theta)
        object.__setattr__(self, "theta", th)
        if fam is Family.GUMBEL_HOUGAARD and th < 1.0:
            raise ParameterError("Gumbel-Hougaard requires theta >= 1")
        if fam is Family.CLAYTON and th <= 0.0:
            raise ParameterError("Clayton requires theta > 0")
        if fam is Family.FRANK and th <= 0.0:
            raise ParameterError("Frank requires theta > 0")
        if fam is Family.LOGISTIC and th < 1.0:
            raise ParameterError("logistic generator requires p >= 1")

    # -- tail characteristics -------------------------------------------------

    @property
    def tail_index(self) -> float:
        """Exponent p governing phi(1-s) ~ A * s**p as s -> 0."""
        if self.family is Family.GUMBEL_HOUGAARD:
            return self.theta
        if self.family is Family.LOGISTIC:
            return self.theta
        return 1.0

    @property
    def slope_const(self) -> float:
        """The constant A in phi(1-s) ~ A * s**p."""
        if self.family is Family.FRANK:
            return self.theta / np.expm1(self.theta)
        return 1.0

    @property
    def bounded_inverse(self) -> bool:
        """True when phi maps into [0, 1] so the inverse needs clamping."""
        return self.family is Family.LOGISTIC

    # -- pointwise evaluation -------------------------------------------------

    def phi(self, t):
        scalar = np.isscalar(t)
        t = _check_range(t, 0.0, 1.0, "t")
        th = self.theta
        if self.family is Family.GUMBEL_HOUGAARD:
            out = (-np.log1p(t - 1.0)) ** th
        elif self.family is Family.CLAYTON:
            out = np.expm1(-th * np.log(t)) / th
        elif self.family is Family.FRANK:
            # phi(t) = -log(expm1(-th*t)/expm1(-th)), rearranged so the
            # argument of log1p vanishes as t -> 1 (full precision in the tail)
            out = -np.log1p(np.exp(-th) * np.expm1(th * (1.0 - t))
                            / np.expm1(-th))
        else:
            out = (1.0 - t) ** th
        return _ret(out, scalar)

    def phi_prime(self, t):
        scalar = np.isscalar(t)
        t = _check_range(t, 0.0, 1.0, "t", hi_open=True)
        th = self.theta
        if self.family is Family.GUMBEL_HOUGAARD:
            out = -th * (-np.log1p(t - 1.0)) ** (th - 1.0) / t
        elif self.family is Family.CLAYTON:
            out = -np.exp(-(th + 1.0) * np.log(t))
        elif self.family is Family.FRANK:
            out = th * np.exp(-th * t) / np.expm1(-th * t)
        else:
            out = -th * (1.0 - t) ** (th - 1.0)
        return _ret(out, scalar)

    def phi_second(self, t):
        scalar = np.isscalar(t)
        t = _check_range(t, 0.0, 1.0, "t", hi_open=True)
        th = self.theta
        if self.family is Family.GUMBEL_HOUGAARD:
            ell = -np.log1p(t - 1.0)
            out = th * ell ** (th - 2.0) * ((th - 1.0) + ell) / (t * t)
        elif self.family is Family.CLAYTON:
            out = (th + 1.0) * np.exp(-(th + 2.0) * np.log(t))
        elif self.family is Family.FRANK:
            w = np.exp(-th * t)
            out = th * th * w / np.expm1(-th * t) ** 2
        else:
            out = th * (th - 1.0) * (1.0 - t) ** (th - 2.0)
        return _ret(out, scalar)

    # -- inverse --------------------------------------------------------------

    def phi_inverse(self, y):
        """Analytic inverse of phi.

        For the logistic family, arguments above 1 are clamped to the lower
        branch value 0.0 (the max(0, .) convention); use
        :meth:`phi_inverse_flagged` when the caller needs to know whether
        clamping fired.
        """
        return self.phi_inverse_flagged(y)[0]

    def phi_inverse_flagged(self, y):
        scalar = np.isscalar(y)
        y = np.asarray(y, dtype=float)
        if np.any(y < 0.0):
            raise DomainError("phi_inverse requires y >= 0")
        th = self.theta
        clamped = False
        if self.family is Family.GUMBEL_HOUGAARD:
            out = np.exp(-(y ** (1.0 / th)))
        elif self.family is Family.CLAYTON:
            out = np.exp(-np.log1p(th * y) / th)
        elif self.family is Family.FRANK:
            out = -np.log1p(np.expm1(-th) * np.exp(-y)) / th
        else:
            over = y > 1.0
            clamped = bool(np.any(over))
            out = np.where(over, 0.0, 1.0 - np.minimum(y, 1.0) ** (1.0 / th))
        return _ret(out, scalar), clamped

    # -- stable tail forms ----------------------------------------------------

    def phi_one_minus(self, s):
        """phi(1 - s) computed without cancellation, s in [0, 1)."""
        scalar = np.isscalar(s)
        s = _check_range(s, 0.0, 1.0, "s", lo_open=False, hi_open=True)
        th = self.theta
        if self.family is Family.GUMBEL_HOUGAARD:
            out = (-np.log1p(-s)) ** th
        elif self.family is Family.CLAYTON:
            out = np.expm1(-th * np.log1p(-s)) / th
        elif self.family is Family.FRANK:
            out = -np.log1p(np.exp(-th) * np.expm1(th * s) / np.expm1(-th))
        else:
            out = s ** th
        return _ret(out, scalar)

    def phi_prime_one_minus(self, s):
        """phi'(1 - s), s in (0, 1)."""
        scalar = np.isscalar(s)
        s = _check_range(s, 0.0, 1.0, "s", hi_open=True)
        th = self.theta
        if self.family is Family.GUMBEL_HOUGAARD:
            out = -th * (-np.log1p(-s)) ** (th - 1.0) / (1.0 - s)
        elif self.family is Family.CLAYTON:
            out = -np.exp(-(th + 1.0) * np.log1p(-s))
        elif self.family is Family.FRANK:
            out = th * np.exp(-th * (1.0 - s)) / np.expm1(-th * (1.0 - s))
        else:
            out = -th * s ** (th - 1.0)
        return _ret(out, scalar)

    def one_minus_inverse(self, y):
        """1 - phi_inverse(y) without cancellation (logistic clamps at y > 1)."""
        scalar = np.isscalar(y)
        y = np.asarray(y, dtype=float)
        if np.any(y < 0.0):
            raise DomainError("one_minus_inverse requires y >= 0")
        th = self.theta
        if self.family is Family.GUMBEL_HOUGAARD:
            out = -np.expm1(-(y ** (1.0 / th)))
        elif self.family is Family.CLAYTON:
            out = -np.expm1(-np.log1p(th * y) / th)
        elif self.family is Family.FRANK:
            out = np.log1p(-np.expm1(th) * np.expm1(-y)) / th
        else:
            out = np.minimum(y, 1.0) ** (1.0 / th)
        return _ret(out, scalar)

    # -- probes ---------------------------------------------------------------

    def tail_index_probe(self, x: float, s_grid=None):
        """Ratios phi(1-s*x)/phi(1-s) along a decreasing grid of s values.

        The final ratio approaches x**tail_index; used by the diagnostics and
        the test suite, never by the evaluation hot path.
        """
        if x <= 0.0:
            raise DomainError("probe requires x > 0")
        s = PROBE_GRID if s_grid is None else np.asarray(s_grid, dtype=float)
        if np.any(s <= 0.0) or np.any(s * x >= 1.0) or np.any(s >= 1.0):
            raise DomainError("probe grid must keep both 1-s and 1-s*x in (0, 1)")
        return self.phi_one_minus(s * x) / self.phi_one_minus(s)

    def condition_report(self, s_grid=None) -> ConditionReport:
        """Numerically evaluate the three slope/limit conditions at s -> 0.

        Probes run on a geometric grid with Aitken extrapolation; a probe that
        fails to settle is reported with its flag cleared rather than raising.
        """
        s = PROBE_GRID if s_grid is None else np.asarray(s_grid, dtype=float)
        p = self.tail_index
        phi_s = self.phi_one_minus(s)
        dphi_s = self.phi_prime_one_minus(s)
        c1_vals = phi_s / s ** p
        c2_vals = -dphi_s / s ** (p - 1.0)
        c3_vals = -s * dphi_s / phi_s
        c1_limit, c1_ok = aitken_limit(c1_vals)
        c2_limit, c2_ok = aitken_limit(c2_vals)
        c3_limit, c3_ok = aitken_limit(c3_vals)
        c1_holds = c1_ok and np.isfinite(c1_limit) and c1_limit > 0.0
        c2_holds = c2_ok and np.isfinite(c2_limit) and c2_limit > 0.0
        return ConditionReport(
            tail_index=p,
            slope_const=c1_limit if c1_holds else None,
            c1_limit=c1_limit,
            c1_holds=c1_holds,
            c2_limit=c2_limit,
            c2_holds=c2_holds,
            c3_limit=c3_limit,
            c3_converged=c3_ok,
        )

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {"family": self.family.value, "theta": self.theta}

    @classmethod
    def from_dict(cls, d: dict) -> "Generator":
        return cls(Family(d["family"]), float(d["theta"]))


@dataclass(frozen=True)
class PowerGenerator:
    """The composite generator ``psi = phi**q`` (q >= 1).

    This is what a logistic D-norm collapses an Archimax model into: the
    Archimax distribution with base generator ``phi`` and logistic norm
    exponent ``q`` equals the Archimedean distribution generated by ``psi``.
    Shares the full :class:`Generator` evaluation protocol via duck typing.
    """

    base: Generator
    q: float

    def __post_init__(self):
        if self.q < 1.0:
            raise ParameterError("power transform requires q >= 1")
        object.__setattr__(self, "q", float(self.q))

    @property
    def tail_index(self) -> float:
        return self.base.tail_index * self.q

    @property
    def slope_const(self) -> float:
        return self.base.slope_const ** self.q

    @property
    def bounded_inverse(self) -> bool:
        return self.base.bounded_inverse

    def phi(self, t):
        return self.base.phi(t) ** self.q

    def phi_prime(self, t):
        return self.q * self.base.phi(t) ** (self.q - 1.0) * self.base.phi_prime(t)

    def phi_second(self, t):
        q = self.q
        f = self.base.phi(t)
        fp = self.base.phi_prime(t)
        fpp = self.base.phi_second(t)
        return q * (q - 1.0) * f ** (q - 2.0) * fp * fp + q * f ** (q - 1.0) * fpp

    def phi_inverse(self, y):
        return self.phi_inverse_flagged(y)[0]

    def phi_inverse_flagged(self, y):
        scalar = np.isscalar(y)
        y = np.asarray(y, dtype=float)
        if np.any(y < 0.0):
            raise DomainError("phi_inverse requires y >= 0")
        root = y ** (1.0 / self.q)
        return self.base.phi_inverse_flagged(float(root) if scalar else root)

    def phi_one_minus(self, s):
        return self.base.phi_one_minus(s) ** self.q

    def phi_prime_one_minus(self, s):
        return (self.q * self.base.phi_one_minus(s) ** (self.q - 1.0)
                * self.base.phi_prime_one_minus(s))

    def one_minus_inverse(self, y):
        scalar = np.isscalar(y)
        y = np.asarray(y, dtype=float)
        if np.any(y < 0.0):
            raise DomainError("one_minus_inverse requires y >= 0")
        out = self.base.one_minus_inverse(y ** (1.0 / self.q))
        return float(out) if scalar else out

    def tail_index_probe(self, x, s_grid=None):
        return self.base.tail_index_probe(x, s_grid) ** self.q

    def condition_report(self, s_grid=None) -> ConditionReport:
        return Generator.condition_report(self, s_grid)

    def to_dict(self) -> dict:
        return {"family": self.base.family.value, "theta": self.base.theta,
                "power": self.q}


def generator_from_dict(d: dict):
    g = Generator(Family(d["family"]), float(d["theta"]))
    if "power" in d and float(d["power"]) != 1.0:
        return PowerGenerator(g, float(d["power"]))
    return g
