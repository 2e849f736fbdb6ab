"""Generator families: closed forms, derivatives, inverses, tail probes."""

import numpy as np
import pytest

from tailcond.errors import DomainError, ParameterError
from tailcond.generators import (Family, Generator, PowerGenerator,
                                 generator_from_dict)

ALL_GENERATORS = [
    Generator(Family.GUMBEL_HOUGAARD, 1.0),
    Generator(Family.GUMBEL_HOUGAARD, 1.5),
    Generator(Family.GUMBEL_HOUGAARD, 3.0),
    Generator(Family.CLAYTON, 0.5),
    Generator(Family.CLAYTON, 2.0),
    Generator(Family.FRANK, 1.0),
    Generator(Family.FRANK, 5.0),
    Generator(Family.LOGISTIC, 1.0),
    Generator(Family.LOGISTIC, 2.5),
]


def _interior_grid():
    return np.linspace(0.05, 0.999, 41)


@pytest.mark.parametrize("gen", ALL_GENERATORS, ids=str)
def test_phi_boundary_and_monotonicity(gen):
    assert gen.phi(1.0) == pytest.approx(0.0, abs=1e-15)
    t = _interior_grid()
    vals = gen.phi(t)
    assert np.all(np.diff(vals) < 0.0)
    assert np.all(vals >= 0.0)


@pytest.mark.parametrize("gen", ALL_GENERATORS, ids=str)
def test_phi_prime_matches_finite_difference(gen):
    t = np.linspace(0.1, 0.95, 30)
    h = 1e-6
    fd = (gen.phi(t + h) - gen.phi(t - h)) / (2.0 * h)
    np.testing.assert_allclose(gen.phi_prime(t), fd, rtol=5e-8)


@pytest.mark.parametrize("gen", ALL_GENERATORS, ids=str)
def test_phi_second_matches_finite_difference(gen):
    t = np.linspace(0.1, 0.95, 30)
    h = 1e-5
    fd = (gen.phi(t + h) - 2.0 * gen.phi(t) + gen.phi(t - h)) / (h * h)
    np.testing.assert_allclose(gen.phi_second(t), fd, rtol=1e-4, atol=1e-5)


@pytest.mark.parametrize("gen", ALL_GENERATORS, ids=str)
def test_inverse_round_trip(gen):
    t = _interior_grid()
    np.testing.assert_allclose(gen.phi_inverse(gen.phi(t)), t, rtol=1e-12)


@pytest.mark.parametrize("gen", ALL_GENERATORS, ids=str)
def test_stable_tail_forms_agree_with_direct(gen):
    s = np.logspace(-1, -8, 15)
    np.testing.assert_allclose(gen.phi_one_minus(s), gen.phi(1.0 - s),
                               rtol=1e-7)
    np.testing.assert_allclose(gen.phi_prime_one_minus(s),
                               gen.phi_prime(1.0 - s), rtol=1e-7)
    y = gen.phi_one_minus(s)
    np.testing.assert_allclose(gen.one_minus_inverse(y), s, rtol=1e-10)


@pytest.mark.parametrize("gen", ALL_GENERATORS, ids=str)
def test_stable_tail_forms_deep_tail_precision(gen):
    # far beyond where the naive forms lose all digits
    s = np.logspace(-10, -14, 5)
    y = gen.phi_one_minus(s)
    np.testing.assert_allclose(gen.one_minus_inverse(y), s, rtol=1e-9)
    # the slope constant emerges cleanly from the stable form
    p = gen.tail_index
    np.testing.assert_allclose(y / s ** p, gen.slope_const, rtol=1e-4)


@pytest.mark.parametrize("gen", ALL_GENERATORS, ids=str)
def test_tail_index_probe_limit(gen):
    ratios = gen.tail_index_probe(2.0)
    assert ratios[-1] == pytest.approx(2.0 ** gen.tail_index, rel=1e-6)


@pytest.mark.parametrize("gen", ALL_GENERATORS, ids=str)
def test_condition_report(gen):
    rep = gen.condition_report()
    assert rep.tail_index == gen.tail_index
    assert rep.c1_holds and rep.c2_holds
    assert rep.slope_const == pytest.approx(gen.slope_const, rel=1e-6)
    assert rep.c2_limit == pytest.approx(gen.tail_index * gen.slope_const,
                                         rel=1e-6)
    assert rep.c3_converged
    assert rep.c3_limit == pytest.approx(gen.tail_index, rel=1e-6)


def test_parameter_validation():
    with pytest.raises(ParameterError):
        Generator(Family.GUMBEL_HOUGAARD, 0.5)
    with pytest.raises(ParameterError):
        Generator(Family.CLAYTON, 0.0)
    with pytest.raises(ParameterError):
        Generator(Family.FRANK, -1.0)
    with pytest.raises(ParameterError):
        Generator(Family.LOGISTIC, 0.9)


def test_domain_validation():
    g = Generator(Family.GUMBEL_HOUGAARD, 2.0)
    with pytest.raises(DomainError):
        g.phi(0.0)
    with pytest.raises(DomainError):
        g.phi(1.5)
    with pytest.raises(DomainError):
        g.phi_prime(1.0)
    with pytest.raises(DomainError):
        g.phi_inverse(-0.1)


def test_logistic_bounded_inverse_clamps():
    g = Generator(Family.LOGISTIC, 2.0)
    assert g.bounded_inverse
    val, clamped = g.phi_inverse_flagged(1.5)
    assert clamped and val == 0.0
    val, clamped = g.phi_inverse_flagged(0.25)
    assert not clamped and val == pytest.approx(0.5)
    assert not Generator(Family.CLAYTON, 1.0).bounded_inverse


def test_frank_slope_constant():
    th = 5.0
    g = Generator(Family.FRANK, th)
    assert g.slope_const == pytest.approx(th / np.expm1(th), rel=1e-12)


def test_power_generator_composite_forms():
    base = Generator(Family.GUMBEL_HOUGAARD, 2.0)
    pg = PowerGenerator(base, 3.0)
    t = _interior_grid()
    np.testing.assert_allclose(pg.phi(t), base.phi(t) ** 3.0, rtol=1e-13)
    h = 1e-6
    fd = (pg.phi(t) - pg.phi(t - 2 * h)) / (2.0 * h)
    np.testing.assert_allclose(pg.phi_prime(t - h), fd, rtol=1e-5, atol=1e-12)
    np.testing.assert_allclose(pg.phi_inverse(pg.phi(t)), t, rtol=1e-12)
    assert pg.tail_index == pytest.approx(6.0)
    # Gumbel(2)^3 is exactly Gumbel(6)
    g6 = Generator(Family.GUMBEL_HOUGAARD, 6.0)
    np.testing.assert_allclose(pg.phi(t), g6.phi(t), rtol=1e-12)
    rep = pg.condition_report()
    assert rep.c1_holds and rep.tail_index == pytest.approx(6.0)


def test_power_generator_validation():
    base = Generator(Family.CLAYTON, 1.0)
    with pytest.raises(ParameterError):
        PowerGenerator(base, 0.5)


def test_serialization_round_trip():
    for gen in ALL_GENERATORS:
        back = generator_from_dict(gen.to_dict())
        assert back == gen
    pg = PowerGenerator(Generator(Family.FRANK, 2.0), 2.5)
    back = generator_from_dict(pg.to_dict())
    assert isinstance(back, PowerGenerator)
    assert back.q == 2.5 and back.base == pg.base
