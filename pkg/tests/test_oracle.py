import math
import warnings

import numpy as np
import pytest

from dirac1d.analytic import bound_state, normalize, spectrum
from dirac1d.core import PhysicalParams, PotentialParams, classify_case
from dirac1d.errors import DomainError, InvalidCaseError, ResolutionError, TruncationWarning
from dirac1d.oracle import (
    ChannelSpec,
    FdGrid,
    channel_spec,
    channels,
    default_grid,
    extrapolate_limit,
    fd_effective_levels,
    fd_matrix,
    hermiticity_wronskian,
    match_common_levels,
    nr_kratzer_levels,
    wronskian_report_from_profiles,
)

PHYS = PhysicalParams()


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_grid_guards():
    with pytest.raises(ResolutionError):
        FdGrid(10.0, 50)
    g = FdGrid(10.0, 99 + 1)
    assert g.h == pytest.approx(10.0 / 101)
    assert g.nodes[0] == g.offset == g.h
    assert g.refined().h == pytest.approx(g.h / 2)
    with pytest.raises(DomainError):
        FdGrid(-1.0, 200)


def test_channel_spec_bound():
    with pytest.raises(DomainError):
        ChannelSpec(1.0, -0.2, 1.0)
    ch = ChannelSpec(1.0, 0.0, 1.0)
    assert ch.exponent == 1.0
    assert ch.analytic_levels(2) == pytest.approx([-0.5, -0.125])


def test_pure_coulomb_channel():
    # the a = 0 channel of (q=1, V0=1): strength 1/sqrt2, m_eff = sqrt2, s = 1
    ch = channel_spec(PHYS, PotentialParams(1, 1), "upper_left")
    assert ch.inv_square_coeff == 0.0
    assert ch.coulomb_strength == pytest.approx(1 / math.sqrt(2))
    lv = fd_effective_levels(ch, FdGrid(60.0, 4000), 2)
    assert _rel(lv[0], -math.sqrt(2) / 4) < 1e-3
    # the B = 2 level is the one shared with the partner channel
    assert _rel(lv[1], -math.sqrt(2) / 16) < 1e-3


def test_resolution_guard():
    ch = channel_spec(PHYS, PotentialParams(1, 1), "upper_left")
    with pytest.raises(ResolutionError):
        fd_effective_levels(ch, FdGrid(2000.0, 200), 1)


def test_truncation_warning():
    ch = channel_spec(PHYS, PotentialParams(1, 1), "upper_left")
    with pytest.warns(TruncationWarning):
        fd_effective_levels(ch, FdGrid(12.0, 2000), 3)


def test_repulsive_channel_has_no_negative_levels():
    ch = ChannelSpec(0.0, 0.5, 1.0)
    assert fd_effective_levels(ch, FdGrid(50.0, 500), 3) == []


def test_near_critical_channel_stable():
    ch = channel_spec(PHYS, PotentialParams(0.5, 1.0), "upper_left")
    assert ch.exponent == pytest.approx(0.5)
    g = default_grid(ch, 3, npts=4000)
    a = fd_effective_levels(ch, g, 3)
    b = fd_effective_levels(ch, g.refined(), 3)
    ref = ch.analytic_levels(3)
    assert min(a) > -1.0 and min(b) > -1.0
    for x, y, r in zip(a, b, ref):
        assert _rel(y, r) < _rel(x, r) < 1e-2


def test_singular_correction_only_for_attractive_channels():
    pos = channel_spec(PHYS, PotentialParams(1, 1), "upper_right")
    neg = channel_spec(PHYS, PotentialParams(0.6, 1), "upper_left")
    g = FdGrid(50.0, 500)
    d_plain, _ = fd_matrix(pos, g)
    x = g.nodes
    t = 1 / (2 * pos.m_eff * g.h**2)
    np.testing.assert_array_equal(d_plain, 2 * t - pos.coulomb_strength / x + pos.inv_square_coeff / x**2)
    d_neg, _ = fd_matrix(neg, g)
    d_neg_plain, _ = fd_matrix(neg, g, singular_correction=False)
    assert not np.array_equal(d_neg, d_neg_plain)
    # correction is concentrated at the origin
    assert abs(d_neg[-1] - d_neg_plain[-1]) < 1e-6 * abs(d_neg[0] - d_neg_plain[0])


def test_channel_mirror_bit_for_bit():
    chs = channels(PHYS, PotentialParams(2.5, 0.7))
    g = default_grid(chs["upper_left"], 3, npts=4000)
    assert fd_effective_levels(chs["upper_left"], g, 3) == fd_effective_levels(chs["lower_right"], g, 3)


def test_match_examples():
    mc = math.sqrt(2.0) * 0.5  # m_eff q_eff^2 c^2 for q=1, V0=1
    lower = [-mc / (2 * (1 + k) ** 2) for k in range(4)]
    upper = [-mc / (2 * (2 + k) ** 2) for k in range(4)]
    rep = match_common_levels(upper, lower, 1e-6)
    assert rep.unmatched_lower == [0]
    assert rep.offsets() == [1, 1, 1]
    same = match_common_levels(upper, upper, 1e-12)
    assert [g for _, _, g in same.matched] == [0.0] * 4


def test_match_subcritical_has_no_pairs():
    pot = PotentialParams(0.3, 1.0)
    chs = channels(PHYS, pot)
    levels = {n: fd_effective_levels(ch, default_grid(ch, 3), 3) for n, ch in chs.items()}
    rep = match_common_levels(levels["upper_right"], levels["lower_right"], 1e-4)
    assert rep.matched == []


def test_zero_background_no_negative_levels():
    for ch in channels(PHYS, PotentialParams(1.0, 0.0)).values():
        assert ch.coulomb_strength == 0.0
        assert fd_effective_levels(ch, default_grid(ch, 3, npts=800), 3) == []


def test_extrapolate_limit_geometric():
    seq = [1 + 0.5**k for k in range(6)]
    assert extrapolate_limit(seq) == pytest.approx(1.0, abs=1e-12)
    assert extrapolate_limit([2.0, 3.0]) == 3.0


def _normed(n):
    pot = PotentialParams(1, 1)
    return normalize(bound_state(PHYS, pot, n), PHYS, pot, 1), pot


def test_wronskian_distinct_levels():
    a, pot = _normed(1)
    b, _ = _normed(2)
    xs = np.geomspace(1e-2, 1e-7, 11) / a.kappa
    for comp in ("upper", "lower"):
        rep = hermiticity_wronskian(a, b, PHYS, pot, xs, comp)
        assert rep.passed and rep.decreasing


def test_wronskian_self_is_zero():
    a, pot = _normed(2)
    rep = hermiticity_wronskian(a, a, PHYS, pot, np.geomspace(1, 1e-4, 6))
    assert np.all(rep.values == 0)


def test_wronskian_negative_control():
    s = 0.3
    # below s = 1/2 both x**s and x**(1-s) are square integrable and their
    # Wronskian is the constant 1 - 2s
    f = lambda x: x**s
    df = lambda x: s * x ** (s - 1)
    g = lambda x: x ** (1 - s)
    dg = lambda x: (1 - s) * x ** (-s)
    rep = wronskian_report_from_profiles(f, df, g, dg, np.geomspace(1e-2, 1e-7, 11), scale=1.0)
    assert not rep.passed


def test_nr_levels():
    pot = PotentialParams(1.0, 1e-3)
    nr = nr_kratzer_levels(PHYS, pot, 1)
    assert nr[0] == pytest.approx(0.5e-6 * 0.75, rel=1e-14)
    exact = spectrum(PHYS, pot, 1)[0].E_abs - 1.0
    assert _rel(exact, nr[0]) < 1e-5
    strong = nr_kratzer_levels(PHYS, PotentialParams(1, 1), 1)[0]
    assert strong == 0.375
    assert abs(spectrum(PHYS, PotentialParams(1, 1), 1)[0].E_abs - 1 - strong) > 0.05
    assert max(nr_kratzer_levels(PHYS, PotentialParams(1.0, 1e-150), 3)) < 1e-299
    with pytest.raises(InvalidCaseError):
        nr_kratzer_levels(PHYS, PotentialParams(1.0, 0.0), 2)
