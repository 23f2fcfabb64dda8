"""The quadrinomial f(x) = xbar^3 + a1 xbar^2 x + a2 xbar x^2 + a3 x^3 and its
derived quantities (theta, epsilon, nu, phi).

Every function is vectorised: a CoeffTriple may hold scalars or equal-shape
numpy arrays, and the returned dataclasses then hold arrays of the same shape.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from quadapn import field as fld
from quadapn.field import bar, t_mul, t_norm, t_sq


@dataclass(frozen=True)
class CoeffTriple:
    a1: object
    a2: object
    a3: object
    a1_in_subfield: bool = False

    @classmethod
    def make(cls, ctx, a1, a2, a3) -> "CoeffTriple":
        a1, a2, a3 = (np.asarray(v, dtype=np.int64)[()] for v in (a1, a2, a3))
        for v in (a1, a2, a3):
            if np.any(v < 0) or np.any(v >= ctx.q2):
                raise ValueError(f"coefficient out of range for m={ctx.m}")
        return cls(a1, a2, a3, bool(np.all(fld.in_subfield(ctx, a1))))

    def __len__(self):
        return int(np.broadcast(self.a1, self.a2, self.a3).size)


@dataclass(frozen=True)
class ThetaSet:
    theta1: object
    theta2: object
    theta3: object
    theta4: object
    m: int

    # coordinates with respect to (w, 1)
    @property
    def theta21(self):
        return self.theta2 >> self.m

    @property
    def theta22(self):
        return self.theta2 & ((1 << self.m) - 1)

    @property
    def theta31(self):
        return self.theta3 >> self.m

    @property
    def theta32(self):
        return self.theta3 & ((1 << self.m) - 1)


@dataclass(frozen=True)
class EpsilonSet:
    eps1: object
    eps2: object
    eps3: object
    eps4: object


@dataclass(frozen=True)
class NuSet:
    nu1: object
    nu2: object
    nu3: object


@dataclass(frozen=True)
class PhiSet:
    phi1: object
    phi2: object
    phi3: object
    phi4: object
    m: int

    @property
    def phi31(self):
        return self.phi3 >> self.m

    @property
    def phi32(self):
        return self.phi3 & ((1 << self.m) - 1)

    @property
    def phi41(self):
        return self.phi4 >> self.m

    @property
    def phi42(self):
        return self.phi4 & ((1 << self.m) - 1)


def eval_f(ctx, c: CoeffTriple, x):
    xb = bar(ctx, x)
    xb2, x2 = t_sq(ctx, xb), t_sq(ctx, x)
    return (t_mul(ctx, xb2, xb) ^ t_mul(ctx, c.a1, t_mul(ctx, xb2, x))
            ^ t_mul(ctx, c.a2, t_mul(ctx, xb, x2)) ^ t_mul(ctx, c.a3, t_mul(ctx, x2, x)))


def normalize_a1(ctx, c: CoeffTriple):
    """Move a1 into GF(2^m) by the substitution x -> b x with b = a1^(2^(m-1)).

    Returns (normalized triple, b).  The new function is f(bx) / bbar^3, which
    is CCZ-equivalent and has the same APN status.  b = 1 where a1 = 0.
    """
    a1 = np.asarray(c.a1, dtype=np.int64)
    b = fld.t_pow(ctx, a1, 1 << (ctx.m - 1))
    b = np.where(a1 == 0, 1, b)
    u = t_mul(ctx, b, fld.t_inv(ctx, bar(ctx, b)))
    u2 = t_sq(ctx, u)
    a1n = t_mul(ctx, a1, u)
    if np.any(a1n >> ctx.m):
        raise AssertionError("normalised a1 left the subfield")
    out = CoeffTriple(np.asarray(a1n)[()], np.asarray(t_mul(ctx, c.a2, u2))[()],
                      np.asarray(t_mul(ctx, c.a3, t_mul(ctx, u2, u)))[()], True)
    return out, b[()]


def _require_normalized(c):
    if not c.a1_in_subfield:
        raise ValueError("a1 must lie in GF(2^m); call normalize_a1 first")


def thetas(ctx, c: CoeffTriple) -> ThetaSet:
    _require_normalized(c)
    a1, a2, a3 = c.a1, c.a2, c.a3
    a1sq = fld.gf_sq(ctx, a1)
    n2 = t_norm(ctx, a2)
    ab2 = bar(ctx, a2)
    th1 = 1 ^ a1sq ^ n2 ^ t_norm(ctx, a3)
    th2 = a1 ^ t_mul(ctx, ab2, a3)
    th3 = ab2 ^ t_mul(ctx, a1, bar(ctx, a3))
    th4 = a1sq ^ n2
    return ThetaSet(th1, th2, th3, th4, ctx.m)


def theta_identity_holds(ctx, t: ThetaSet):
    """theta2 bar(theta2) + theta3 bar(theta3) = theta1 theta4 + theta4^2."""
    lhs = t_mul(ctx, t.theta2, bar(ctx, t.theta2)) ^ t_mul(ctx, t.theta3, bar(ctx, t.theta3))
    rhs = t_mul(ctx, t.theta1, t.theta4) ^ t_sq(ctx, t.theta4)
    return lhs == rhs


def epsilons(ctx, c: CoeffTriple, a) -> EpsilonSet:
    if not np.all(fld.on_unit_circle(ctx, a)):
        raise ValueError("a must satisfy a * bar(a) = 1")
    ab = bar(ctx, a)
    ab2, asq = t_sq(ctx, ab), t_sq(ctx, a)
    ab3 = t_mul(ctx, ab2, ab)
    w1 = t_mul(ctx, c.a1, t_mul(ctx, ab2, a))
    w2 = t_mul(ctx, c.a2, t_mul(ctx, ab, asq))
    w3 = t_mul(ctx, c.a3, t_mul(ctx, asq, a))
    return EpsilonSet(ab3 ^ w1, ab3 ^ w2, w2 ^ w3, w1 ^ w3)


def _nus_from_eps(ctx, e: EpsilonSet) -> NuSet:
    e1b, e2b, e3b, e4b = (bar(ctx, v) for v in (e.eps1, e.eps2, e.eps3, e.eps4))
    nu1 = t_mul(ctx, e.eps3, e3b) ^ t_mul(ctx, e1b, e.eps1)
    nu2 = t_mul(ctx, e.eps2, e3b) ^ t_mul(ctx, e4b, e.eps1)
    nu3 = t_mul(ctx, e.eps4, e3b) ^ t_mul(ctx, e2b, e.eps1)
    return NuSet(nu1, nu2, nu3)


def nus_from_thetas(ctx, t: ThetaSet, a) -> NuSet:
    """The nu values as combinations of the thetas with monomials in a, abar."""
    ab = bar(ctx, a)
    a2, ab2 = t_sq(ctx, a), t_sq(ctx, ab)
    a3 = t_mul(ctx, a2, a)
    m42 = t_mul(ctx, t_sq(ctx, a2), ab2)             # a^4 abar^2
    m33 = t_mul(ctx, a3, t_mul(ctx, ab2, ab))         # a^3 abar^3
    m24 = t_mul(ctx, a2, t_sq(ctx, ab2))              # a^2 abar^4
    m15 = t_mul(ctx, a, t_mul(ctx, t_sq(ctx, ab2), ab))  # a abar^5
    t2b = bar(ctx, t.theta2)
    nu1 = t_mul(ctx, m42, t.theta2) ^ t_mul(ctx, m33, t.theta1) ^ t_mul(ctx, m24, t2b)
    nu2 = t_mul(ctx, m33, t.theta4) ^ t_mul(ctx, m24, t2b) ^ t_mul(ctx, m15, t.theta3)
    nu3 = (t_mul(ctx, m42, t.theta2) ^ t_mul(ctx, m33, t.theta1 ^ t.theta4)
           ^ t_mul(ctx, m15, t.theta3))
    return NuSet(nu1, nu2, nu3)


def nus(ctx, c: CoeffTriple, a, check: bool = True) -> NuSet:
    """nu values through the epsilons; with ``check`` they are recomputed from
    the thetas and any disagreement raises AssertionError."""
    got = _nus_from_eps(ctx, epsilons(ctx, c, a))
    if check:
        alt = nus_from_thetas(ctx, thetas(ctx, c), a)
        for name in ("nu1", "nu2", "nu3"):
            if not np.array_equal(getattr(got, name), getattr(alt, name)):
                raise AssertionError(f"{name}: epsilon and theta expansions disagree")
    return got


def varphis(ctx, t: ThetaSet) -> PhiSet:
    t2b = bar(ctx, t.theta2)
    phi1 = t.theta1 ^ t.theta2 ^ t2b
    phi2 = (fld.gf_mul(ctx, phi1, ctx.k) ^ t_mul(ctx, ctx.omega, t.theta2)
            ^ t_mul(ctx, ctx.omega_bar, t2b))
    phi3 = t.theta3 ^ t2b ^ t.theta4
    phi4 = (t_mul(ctx, phi3, ctx.k) ^ t_mul(ctx, ctx.omega, t.theta4)
            ^ t_mul(ctx, ctx.omega_bar, t.theta3))
    if np.any(phi1 >> ctx.m) or np.any(phi2 >> ctx.m):
        raise AssertionError("phi1 and phi2 must lie in GF(2^m)")
    return PhiSet(phi1, phi2, phi3, phi4, ctx.m)


def nu_rational_forms(ctx, t: ThetaSet, A):
    """nu1 and nu2 at a = a_from_A(A) through their rational forms in A."""
    p = varphis(ctx, t)
    A = np.asarray(A, dtype=np.int64)
    A2 = fld.gf_sq(ctx, A)
    num1 = fld.gf_mul(ctx, p.phi1, A2) ^ fld.gf_mul(ctx, t.theta1, A) ^ p.phi2
    den1 = A2 ^ A ^ ctx.k
    num2 = fld.t_scale(ctx, A2, p.phi3) ^ fld.t_scale(ctx, A, bar(ctx, t.theta2)) ^ p.phi4
    den2 = A2 ^ ctx.k ^ ctx.omega
    nu1 = fld.gf_mul(ctx, num1, fld.gf_inv(ctx, den1))
    nu2 = t_mul(ctx, num2, fld.t_inv(ctx, den2))
    return nu1, nu2


def nu_rational_check(ctx, c: CoeffTriple, A):
    """True where the rational forms agree with the epsilon route."""
    t = thetas(ctx, c)
    direct = nus(ctx, c, fld.a_from_A(ctx, A), check=False)
    r1, r2 = nu_rational_forms(ctx, t, A)
    return (direct.nu1 == r1) & (direct.nu2 == r2)
