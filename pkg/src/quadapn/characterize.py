"""Membership tests for the coefficient sets Gamma_1, Gamma_2 (APN) and Gamma
(permutation), and the resulting APN verdicts.

Polynomial conditions are evaluated division-free exactly as written; a trace
argument is always checked to lie in GF(2^m) before tr_m is applied.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from quadapn import field as fld
from quadapn.field import bar, t_mul, t_sq
from quadapn.quad import CoeffTriple, ThetaSet, thetas, varphis

THEOREM_MIN_M = 4


def traced(ctx, x, where=True):
    """tr_m(x), asserting that x is bar-fixed wherever ``where`` holds."""
    x = np.asarray(x, dtype=np.int64)
    if np.any(((x >> ctx.m) != 0) & where):
        raise AssertionError("trace argument is not in GF(2^m)")
    return fld.tr_m(ctx, x & ctx.mask)


def _ratio(ctx, num, den):
    """num / den in the tower with den a subfield value; 0 where den = 0."""
    return fld.t_scale(ctx, ctx.inv[den], num)


def gamma1_poly(ctx, t: ThetaSet):
    """theta1^2 theta4 + theta1 theta2 bar(theta2) + theta2^2 theta3 + bar(theta2)^2 bar(theta3)."""
    t2b = bar(ctx, t.theta2)
    s = t_mul(ctx, t_sq(ctx, t.theta2), t.theta3)
    return (t_mul(ctx, t_sq(ctx, t.theta1), t.theta4) ^ t_mul(ctx, t.theta1, t_mul(ctx, t.theta2, t2b))
            ^ s ^ bar(ctx, s))


def gamma2_poly(ctx, t: ThetaSet):
    """theta1^2 theta3 + theta1 bar(theta2)^2 + theta2^2 theta3 + bar(theta2)^2 bar(theta3)."""
    t2b = bar(ctx, t.theta2)
    s = t_mul(ctx, t_sq(ctx, t.theta2), t.theta3)
    return (t_mul(ctx, t_sq(ctx, t.theta1), t.theta3) ^ t_mul(ctx, t.theta1, t_sq(ctx, t2b))
            ^ s ^ bar(ctx, s))


def theta_trace_term(ctx, t: ThetaSet):
    """tr_m(theta2 bar(theta2) / theta1^2); 0 where theta1 = 0."""
    nz = t.theta1 != 0
    arg = _ratio(ctx, t_mul(ctx, t.theta2, bar(ctx, t.theta2)), fld.gf_sq(ctx, t.theta1))
    return np.where(nz, traced(ctx, arg, nz), 0)


@dataclass(frozen=True)
class GammaVerdict:
    theta1_nonzero: object
    trace_term: object
    gamma1_poly_zero: object
    gamma2_poly_zero: object
    in_gamma1: object
    in_gamma2: object
    in_gamma_perm: object


def in_gamma1(ctx, t: ThetaSet):
    return (t.theta1 != 0) & (theta_trace_term(ctx, t) == 0) & (gamma1_poly(ctx, t) == 0)


def in_gamma2(ctx, t: ThetaSet):
    return (t.theta1 != 0) & (theta_trace_term(ctx, t) == 0) & (gamma2_poly(ctx, t) == 0)


def in_gamma_perm(ctx, t: ThetaSet):
    """theta1 != 0, tr_m(theta4 / theta1) = 1 and theta2^2 = theta1 bar(theta3)."""
    nz = t.theta1 != 0
    tr = traced(ctx, _ratio(ctx, t.theta4, t.theta1), nz)
    return nz & (tr == 1) & (t_sq(ctx, t.theta2) == t_mul(ctx, t.theta1, bar(ctx, t.theta3)))


def gamma_verdict(ctx, t: ThetaSet) -> GammaVerdict:
    nz = t.theta1 != 0
    tt = theta_trace_term(ctx, t)
    g1 = gamma1_poly(ctx, t) == 0
    g2 = gamma2_poly(ctx, t) == 0
    pre = nz & (tt == 0)
    return GammaVerdict(nz, tt, g1, g2, pre & g1, pre & g2, in_gamma_perm(ctx, t))


def in_theorem_range(ctx) -> bool:
    return ctx.m >= THEOREM_MIN_M


def _verdict_from_gammas(ctx, v: GammaVerdict):
    return (v.in_gamma1 | v.in_gamma2) if ctx.m % 2 == 0 else v.in_gamma1


def theorem_verdict(ctx, c: CoeffTriple):
    """APN verdict from the Gamma sets: Gamma_1 or Gamma_2 for even m, Gamma_1 for odd m.

    The characterisation is proved for m >= 4; smaller m is evaluated anyway
    and callers should tag it with ``in_theorem_range``.
    """
    return _verdict_from_gammas(ctx, gamma_verdict(ctx, thetas(ctx, c)))


def final_form_verdict(ctx, c: CoeffTriple):
    """The same verdict with the extra requirement phi1 * phi2 != 0 kept in."""
    t = thetas(ctx, c)
    p = varphis(ctx, t)
    v = gamma_verdict(ctx, t)
    return _verdict_from_gammas(ctx, v) & (p.phi1 != 0) & (p.phi2 != 0)
