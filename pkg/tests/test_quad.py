import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadapn import field as fld
from quadapn import kernels
from quadapn.apncore import family_is_apn
from quadapn.quad import (CoeffTriple, epsilons, eval_f, normalize_a1, nu_rational_check,
                          nus, nus_from_thetas, theta_identity_holds, thetas, varphis)


def _grid(ctx):
    a1, a2, a3 = np.meshgrid(np.arange(ctx.q), np.arange(ctx.q2), np.arange(ctx.q2), indexing="ij")
    return CoeffTriple.make(ctx, a1.ravel(), a2.ravel(), a3.ravel())


def test_eval_f_matches_power_form(ctx3):
    # f written with explicit exponents: xbar = x^(2^m)
    x = np.arange(ctx3.q2)
    c = CoeffTriple.make(ctx3, 3, 0x2a, 0x11)
    q = ctx3.q
    want = (fld.t_pow(ctx3, x, 3 * q) ^ fld.t_mul(ctx3, c.a1, fld.t_pow(ctx3, x, 2 * q + 1))
            ^ fld.t_mul(ctx3, c.a2, fld.t_pow(ctx3, x, q + 2)) ^ fld.t_mul(ctx3, c.a3, fld.t_pow(ctx3, x, 3)))
    assert np.array_equal(eval_f(ctx3, c, x), want)
    assert np.array_equal(kernels.f_tables(ctx3, c.a1, c.a2, c.a3)[0], want)


def test_make_rejects_out_of_range(ctx3):
    with pytest.raises(ValueError):
        CoeffTriple.make(ctx3, 0, 64, 0)
    assert not CoeffTriple.make(ctx3, 9, 0, 0).a1_in_subfield


def test_thetas_need_normalized_a1(ctx3):
    with pytest.raises(ValueError):
        thetas(ctx3, CoeffTriple.make(ctx3, 9, 0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 255), st.integers(0, 255), st.integers(0, 255))
def test_normalization_is_an_equivalence(a1, a2, a3):
    """f(bx) / bbar^3 is the normalised member, and APN status survives."""
    ctx = fld.make_field(4)
    raw = CoeffTriple.make(ctx, a1, a2, a3)
    c, b = normalize_a1(ctx, raw)
    assert c.a1_in_subfield and int(c.a1) < ctx.q
    x = np.arange(ctx.q2)
    lhs = eval_f(ctx, raw, fld.t_mul(ctx, b, x))
    rhs = fld.t_mul(ctx, fld.t_pow(ctx, fld.bar(ctx, b), 3), eval_f(ctx, c, x))
    assert np.array_equal(lhs, rhs)
    assert family_is_apn(ctx, raw)[0] == family_is_apn(ctx, c)[0]


@pytest.mark.parametrize("m", [3, 4])
def test_theta_identity_everywhere(m):
    ctx = fld.make_field(m)
    assert np.all(theta_identity_holds(ctx, thetas(ctx, _grid(ctx))))


@pytest.mark.parametrize("m", [3, 4])
def test_varphi12_in_subfield(m):
    ctx = fld.make_field(m)
    p = varphis(ctx, thetas(ctx, _grid(ctx)))
    assert np.all(p.phi1 < ctx.q) and np.all(p.phi2 < ctx.q)


def test_epsilon_sum_and_nu_paths(ctx3):
    c = _grid(ctx3)
    for a in fld.unit_circle(ctx3):
        e = epsilons(ctx3, c, a)
        assert np.all(e.eps1 ^ e.eps2 ^ e.eps3 ^ e.eps4 == 0)
        got = nus(ctx3, c, a, check=True)       # raises on disagreement
        alt = nus_from_thetas(ctx3, thetas(ctx3, c), a)
        assert np.array_equal(got.nu1, alt.nu1)


def test_epsilons_reject_points_off_the_circle(ctx3):
    with pytest.raises(ValueError):
        epsilons(ctx3, CoeffTriple.make(ctx3, 0, 0, 0), 2)


def test_nu_rational_forms_m3(ctx3):
    c = _grid(ctx3)
    for A in range(ctx3.q):
        assert np.all(nu_rational_check(ctx3, c, A))
