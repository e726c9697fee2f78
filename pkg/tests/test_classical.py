import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaudin_sov.classical import (
    BMVector,
    ConfigError,
    DegenerateSpectrum,
    HitchVector,
    NilpotentTuple,
    NotInDomain,
    SeparatedPoint,
    SystemConfig,
    alpha,
    beta,
    bm_involutivity,
    check_diagram,
    eta,
    eta_inv,
    evaluate_bm,
    evaluate_hitchin,
    gamma_act,
    random_separated_point,
)

CFG1 = SystemConfig(1, (0, 1, 2, 3))
P1 = SeparatedPoint(((Fraction(3, 2), Fraction(-3, 4)),))
T1 = NilpotentTuple(
    tuple(Fraction(x) for x in ("1/4", "-1/4", "-1/4", "1/4")),
    tuple(Fraction(x) for x in ("1/8", "-3/8", "3/8", "-1/8")),
)


def test_bm_at_worked_point():
    assert evaluate_bm(CFG1, P1).h == (1,)


def test_hitchin_at_worked_tuple():
    assert evaluate_hitchin(CFG1, T1).h == tuple(Fraction(x) for x in ("-1/6", "1/2", "-1/2", "1/6"))
    zero_v = NilpotentTuple(T1.u, (0, 0, 0, 0))
    assert evaluate_hitchin(CFG1, zero_v).h == (0, 0, 0, 0)


def test_alpha_examples():
    assert alpha(CFG1, NilpotentTuple((1, -1, -1, 1), (1, -1, 0, 0))) == P1
    p = alpha(CFG1, NilpotentTuple((1, -1, -1, 1), (0, 0, 0, 0)))
    assert p.y == [0]


def test_beta_examples():
    assert beta(CFG1, P1) == T1
    assert beta(CFG1, SeparatedPoint(((Fraction(3, 2), 0),))).v == (0, 0, 0, 0)


def test_eta_examples():
    assert eta(CFG1, HitchVector((-1, 3, -3, 1))).h == (6,)
    assert eta(CFG1, HitchVector((0, 0, 0, 0))).h == (0,)
    assert eta_inv(CFG1, BMVector((6,))).h == (-1, 3, -3, 1)


def test_diagram_examples():
    assert check_diagram(CFG1, P1)
    assert check_diagram(CFG1, SeparatedPoint(((Fraction(7, 2), 0),)))


def test_alpha_rejects_boundary():
    # sum a^2 u = 0 is outside the domain of alpha
    with pytest.raises(NotInDomain):
        alpha(CFG1, NilpotentTuple((0, 0, 0, 0), (0, 0, 0, 0)))


def test_config_validation():
    with pytest.raises(ConfigError):
        SystemConfig(1, (0, 1, 2))
    with pytest.raises(ConfigError):
        SystemConfig(1, (0, 1, 1, 3))
    with pytest.raises(DegenerateSpectrum):
        SeparatedPoint(((1, 2), (1, 3)))


def test_bm_involutive_genus_two():
    cfg = SystemConfig(2, (0, 1, 2, 3, 5))
    assert all(b.is_zero() for b in bm_involutivity(cfg).values())


configs = st.sampled_from([CFG1, SystemConfig(2, (-1, 0, 2, 3, 7)), SystemConfig(3, (0, 1, 2, 4, 5, 9))])


@settings(max_examples=30, deadline=None)
@given(configs, st.integers(0, 10**6))
def test_alpha_inverts_beta(cfg, seed):
    p = random_separated_point(cfg, random.Random(seed))
    t = beta(cfg, p)
    assert t.violations(cfg) == []
    assert sum(a * a * u for a, u in zip(cfg.a, t.u)) == 1
    assert alpha(cfg, t) == p


@settings(max_examples=20, deadline=None)
@given(configs, st.integers(0, 10**6), st.fractions(min_value=1, max_value=5, max_denominator=3))
def test_alpha_is_gauge_invariant(cfg, seed, scale):
    p = random_separated_point(cfg, random.Random(seed))
    t = gamma_act(cfg, beta(cfg, p), scale, Fraction(1, 2), Fraction(-1, 3))
    assert alpha(cfg, t) == p


@settings(max_examples=20, deadline=None)
@given(configs, st.integers(0, 10**6))
def test_diagram_commutes(cfg, seed):
    assert check_diagram(cfg, random_separated_point(cfg, random.Random(seed)))


@settings(max_examples=20, deadline=None)
@given(configs, st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=3, max_size=3))
def test_eta_round_trip(cfg, hs):
    b = BMVector(tuple(hs[: cfg.g]))
    h = eta_inv(cfg, b)
    assert h.satisfies_relations(cfg)
    assert eta(cfg, h) == b
