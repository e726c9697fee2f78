from gaudin_sov.classical import SystemConfig
from gaudin_sov.ringed import (
    check_bracket_identities,
    gauge_shift,
    k_ring,
    lambda1,
    lambda_inv,
    lambda_morphism_checks,
    normalizer_checks,
    correspondence_checks,
    prop_a_checks,
    y_phi,
)

CFG1 = SystemConfig(1, (0, 1, 2, 3))


def statuses(checks):
    return {c.name: c for c in checks}


def test_x_side_and_u_side_brackets():
    got = statuses(check_bracket_identities(CFG1))
    for name in (
        "generating-series/X-side/Y-X-bracket",
        "generating-series/X-side/Y-Y-bracket",
        "generating-series/U-side/U-U-bracket",
        "generating-series/U-side/W-U-bracket",
        "generating-series/U-side/derivative-interpolation",
    ):
        assert got[name].passed, got[name].witness


def test_w_w_bracket_holds_only_with_opposite_sign():
    c = statuses(check_bracket_identities(CFG1))["generating-series/U-side/W-W-bracket"]
    assert not c.passed
    assert c.detail["holds_with_opposite_sign"] is True
    assert c.detail["residual_gauge_multiple"] is False


def test_poisson_morphism_sign():
    c = statuses(lambda_morphism_checks(CFG1))["lambda/poisson-morphism-sign"]
    assert c.passed and c.detail["poisson_sign"] == -1


def test_normalizer_sum_rule_holds_everywhere():
    got = statuses(normalizer_checks(CFG1))
    assert all(c.passed for c in got.values())
    assert got["normalizer/sum-u-U-at-points"].detail["vanishes_off_surface"] is True


def test_a_side_bracket():
    got = statuses(prop_a_checks(CFG1))
    assert all(c.passed for c in got.values()), [c.name for c in got.values() if not c.passed]


def test_lambda_inverse_on_w_phi():
    for phi in ([1], [0, 1], [1, 0, 1]):
        w = lambda1(CFG1, phi)
        _, y = lambda_inv(CFG1, w)
        assert (y - y_phi(CFG1, phi)).is_zero()
        _, y2 = lambda_inv(CFG1, gauge_shift(CFG1, w, k_ring(CFG1).var("ub1")))
        assert (y2 - y).is_zero()


def test_w_of_zero_is_zero():
    w = lambda1(CFG1, [0])
    assert all(c.is_zero() for c in w.deg1)


def test_hamiltonian_correspondence():
    for g, pts in ((1, (0, 1, 2, 3)), (2, (0, 1, 2, 3, 5))):
        assert all(c.passed for c in correspondence_checks(SystemConfig(g, pts)))
