"""D-norms: axioms, the sandwich property and the power transform."""

import numpy as np
import pytest

from tailcond.dnorms import (DNorm, NormKind, PowerNorm, logistic_norm,
                             power_transform, sum_norm, sup_norm)
from tailcond.errors import ParameterError


def _rand_vectors(d, n=200, seed=7):
    rng = np.random.default_rng(seed)
    return rng.random((n, d)) * 3.0


@pytest.mark.parametrize("norm", [
    sum_norm(3), sup_norm(3), logistic_norm(3, 2.0), logistic_norm(4, 7.5),
])
def test_norm_axioms(norm):
    x = _rand_vectors(norm.dim)
    vals = norm.evaluate(x)
    assert np.all(vals > 0.0)
    # homogeneity
    np.testing.assert_allclose(norm.evaluate(2.5 * x), 2.5 * vals, rtol=1e-12)
    # triangle inequality
    y = _rand_vectors(norm.dim, seed=8)
    assert np.all(norm.evaluate(x + y) <= vals + norm.evaluate(y) + 1e-12)
    # standardized: unit vectors have norm 1
    np.testing.assert_allclose(norm.evaluate(np.eye(norm.dim)), 1.0,
                               rtol=1e-12)


@pytest.mark.parametrize("norm", [
    sum_norm(3), sup_norm(3), logistic_norm(3, 1.5), logistic_norm(3, 40.0),
])
def test_sandwich_between_sup_and_sum(norm):
    x = _rand_vectors(3)
    vals = norm.evaluate(x)
    assert np.all(vals <= x.sum(axis=1) + 1e-12)
    assert np.all(vals >= x.max(axis=1) - 1e-12)


def test_logistic_interpolates():
    x = _rand_vectors(3)
    # q = 1 is the sum norm, q -> infinity approaches the sup norm
    np.testing.assert_allclose(logistic_norm(3, 1.0).evaluate(x),
                               x.sum(axis=1), rtol=1e-12)
    np.testing.assert_allclose(logistic_norm(3, 200.0).evaluate(x),
                               x.max(axis=1), rtol=2e-2)


def test_logistic_overflow_safe():
    big = np.array([1e300, 2e300, 5e299])
    val = logistic_norm(3, 3.0).evaluate(big)
    assert np.isfinite(val)
    np.testing.assert_allclose(
        val, 2e300 * ((0.5 ** 3 + 1.0 + 0.25 ** 3) ** (1.0 / 3.0)),
        rtol=1e-12)


def test_power_transform_logistic():
    base = logistic_norm(3, 2.0)
    tr = power_transform(base, 3.0)
    assert isinstance(tr, DNorm) and tr.kind is NormKind.LOGISTIC
    assert tr.q == pytest.approx(6.0)
    x = _rand_vectors(3)
    np.testing.assert_allclose(tr.evaluate(x),
                               (x ** 3.0).sum(axis=1) ** 0.0 * 0.0
                               + ((x ** 6.0).sum(axis=1)) ** (1.0 / 6.0),
                               rtol=1e-12)


def test_power_transform_sum_and_sup():
    x = _rand_vectors(3)
    tr = power_transform(sum_norm(3), 2.0)
    np.testing.assert_allclose(tr.evaluate(x),
                               ((x ** 2.0).sum(axis=1)) ** 0.5, rtol=1e-12)
    tr = power_transform(sup_norm(3), 2.0)
    assert isinstance(tr, PowerNorm)
    np.testing.assert_allclose(tr.evaluate(x), x.max(axis=1), rtol=1e-12)
    # identity at p = 1
    assert power_transform(sum_norm(3), 1.0) is sum_norm(3) or \
        power_transform(sum_norm(3), 1.0) == sum_norm(3)


def test_validation():
    with pytest.raises(ParameterError):
        DNorm(NormKind.LOGISTIC, 3, 0.5)
    with pytest.raises(ParameterError):
        DNorm(NormKind.SUM, 0)


def test_serialization_round_trip():
    for norm in (sum_norm(2), sup_norm(4), logistic_norm(3, 2.5)):
        assert DNorm.from_dict(norm.to_dict()) == norm
