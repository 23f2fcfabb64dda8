"""Exhaustive small-field oracles for the supporting statements behind the
Gamma characterisation.

Every oracle derives its hypotheses from raw field values, checks the claimed
conclusion on every instance that meets them and reports violations.  An
oracle whose hypotheses are never met is VACUOUS; ``expected_vacuous`` marks
the cases where that is forced by the parity of m (statements that only
apply to odd m, evaluated at even m).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from quadapn import field as fld
from quadapn import kernels
from quadapn.characterize import gamma1_poly, gamma2_poly, traced
from quadapn.field import bar, gf_mul, gf_sq, t_mul, t_norm
from quadapn.quad import (CoeffTriple, PhiSet, ThetaSet, epsilons, eval_f, nus,
                          thetas, varphis)

PASS, FAIL, VACUOUS = "PASS", "FAIL", "VACUOUS"
MAX_STORED_VIOLATIONS = 25


@dataclass
class OracleResult:
    name: str
    m: int
    instances_checked: int = 0
    violation_count: int = 0
    violations: list = field(default_factory=list)
    expected_vacuous: bool = False
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.violation_count:
            return FAIL
        if self.instances_checked == 0:
            return VACUOUS
        return PASS

    @property
    def ok(self) -> bool:
        """Passing, or vacuous for a parity reason."""
        return self.status == PASS or (self.status == VACUOUS and self.expected_vacuous)

    def add(self, checked: int, nbad: int, records):
        """Merge one block; only the first MAX_STORED_VIOLATIONS records are kept."""
        self.instances_checked += int(checked)
        self.violation_count += int(nbad)
        room = MAX_STORED_VIOLATIONS - len(self.violations)
        if room > 0:
            self.violations.extend(records[:room])

    def to_dict(self) -> dict:
        return {
            "name": self.name, "m": self.m, "status": self.status,
            "instances_checked": self.instances_checked,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "expected_vacuous": self.expected_vacuous,
            "details": self.details,
        }


@dataclass(frozen=True)
class LPolyCoeffs:
    """L1(Y) = l11 Y^4 + ... + l15 and L2(Y) = phi1 Y^2 + theta1 Y + phi2."""
    l11: object
    l12: object
    l13: object
    l14: object
    l15: object
    phi1: object
    theta1: object
    phi2: object
    solution: object = None


# ---------------------------------------------------------------- helpers


def all_triples(ctx, chunk: int = 1 << 18):
    """Yield CoeffTriple blocks covering every (a1 in GF(2^m), a2, a3)."""
    q, q2 = ctx.q, ctx.q2
    total = q * q2 * q2
    for s in range(0, total, chunk):
        idx = np.arange(s, min(s + chunk, total), dtype=np.int64)
        a3 = idx % q2
        a2 = (idx // q2) % q2
        a1 = idx // (q2 * q2)
        yield CoeffTriple(a1, a2, a3, True)


def sample_triples(ctx, count: int, seed: int = 0) -> CoeffTriple:
    rng = np.random.default_rng(seed)
    return CoeffTriple(rng.integers(0, ctx.q, count, dtype=np.int64),
                       rng.integers(0, ctx.q2, count, dtype=np.int64),
                       rng.integers(0, ctx.q2, count, dtype=np.int64), True)


def _select(c: CoeffTriple, mask) -> CoeffTriple:
    return CoeffTriple(c.a1[mask], c.a2[mask], c.a3[mask], True)


def _records(ctx, c: CoeffTriple, mask, **extra):
    idx = np.flatnonzero(mask)[:MAX_STORED_VIOLATIONS]
    out = []
    for i in idx:
        rec = {"a1": fld.fmt_sub(c.a1[i]), "a2": fld.fmt_tower(ctx, c.a2[i]),
               "a3": fld.fmt_tower(ctx, c.a3[i])}
        for key, arr in extra.items():
            rec[key] = np.asarray(arr)[i].item()
        out.append(rec)
    return out, int(np.count_nonzero(mask))


def _report(res: OracleResult, ctx, c, hyp, bad, **extra):
    recs, nbad = _records(ctx, c, bad & hyp, **extra)
    res.add(np.count_nonzero(hyp), nbad, recs)


def _tr_ratio(ctx, num, den, where):
    """tr_m(num / den) for a subfield denominator, 0 where den = 0."""
    val = fld.t_scale(ctx, ctx.inv[den], num)
    where = where & (den != 0)
    return np.where(where, traced(ctx, val, where), 0)


def _poly(ctx, coeffs: dict, terms):
    """Sum of monomials; terms are exponent tuples over the keys of coeffs."""
    keys = list(coeffs)
    total = 0
    for term in terms:
        mono = 1
        for key, e in zip(keys, term):
            if e:
                mono = gf_mul(ctx, mono, fld.gf_pow(ctx, coeffs[key], e))
        total = total ^ mono
    return total


def _coords(t: ThetaSet, ctx):
    return {"t1": t.theta1, "t21": t.theta21, "t22": t.theta22, "t31": t.theta31,
            "t32": t.theta32, "t4": t.theta4, "k": np.full_like(t.theta1, ctx.k)}


# exponent tuples over (theta1, theta21, theta22, theta31, theta32, theta4, k)
S1_TERMS = [
    (2, 2, 0, 0, 0, 0, 3), (2, 1, 1, 0, 0, 0, 2), (2, 1, 0, 0, 1, 0, 2),
    (2, 1, 0, 0, 0, 1, 2), (2, 1, 0, 0, 0, 1, 1), (2, 0, 2, 0, 0, 0, 2),
    (2, 0, 1, 1, 0, 0, 2), (2, 0, 1, 0, 1, 0, 1), (2, 0, 1, 0, 0, 1, 1),
    (2, 0, 0, 2, 0, 0, 3), (2, 0, 0, 1, 1, 0, 2), (2, 0, 0, 1, 0, 1, 2),
    (2, 0, 0, 1, 0, 1, 1), (2, 0, 0, 0, 2, 0, 2), (2, 0, 0, 0, 1, 1, 0),
    (2, 0, 0, 0, 0, 2, 2), (0, 2, 0, 0, 2, 0, 2), (0, 2, 0, 0, 0, 2, 2),
    (0, 2, 0, 0, 0, 2, 0), (0, 0, 2, 2, 0, 0, 2), (0, 0, 2, 0, 2, 0, 0),
    (0, 0, 2, 0, 0, 2, 0),
]
S2_TERMS = [
    (3, 1, 0, 1, 0, 0, 1), (3, 1, 0, 0, 1, 0, 1), (3, 1, 0, 0, 0, 1, 1),
    (3, 0, 1, 1, 0, 0, 1), (3, 0, 0, 1, 0, 1, 0), (2, 2, 0, 1, 0, 0, 0),
    (2, 2, 0, 0, 1, 0, 1), (2, 2, 0, 0, 1, 0, 0), (2, 2, 0, 0, 0, 1, 1),
    (2, 1, 1, 1, 0, 0, 1), (2, 1, 1, 1, 0, 0, 0), (2, 1, 1, 0, 1, 0, 0),
    (2, 1, 1, 0, 0, 1, 0), (1, 4, 0, 0, 0, 0, 1), (1, 3, 1, 0, 0, 0, 0),
    (1, 3, 0, 1, 0, 0, 1), (1, 3, 0, 0, 1, 0, 1), (1, 3, 0, 0, 0, 1, 1),
    (1, 2, 2, 0, 0, 0, 0), (1, 2, 1, 1, 0, 0, 1), (1, 2, 0, 2, 0, 0, 1),
    (1, 2, 0, 2, 0, 0, 0), (1, 2, 0, 1, 1, 0, 0), (1, 0, 2, 2, 0, 0, 0),
    (0, 4, 0, 0, 1, 0, 1), (0, 4, 0, 0, 0, 1, 1), (0, 4, 0, 0, 0, 1, 0),
    (0, 3, 1, 1, 0, 0, 1), (0, 3, 1, 0, 1, 0, 0), (0, 3, 1, 0, 0, 1, 0),
]
S3_TERMS = [
    (1, 0, 0, 0, 0, 1, 0), (0, 2, 0, 0, 0, 0, 1), (0, 1, 1, 0, 0, 0, 0),
    (0, 0, 2, 0, 0, 0, 0), (0, 0, 0, 2, 0, 0, 1), (0, 0, 0, 1, 1, 0, 0),
    (0, 0, 0, 0, 2, 0, 0), (0, 0, 0, 0, 0, 2, 0),
]
# the three k-polynomials of the phi1 != 0, phi2 = 0 branch
D2_TERMS = (
    [(0, 1, 0, 0, 0, 0, 3), (0, 0, 0, 1, 0, 0, 3), (0, 0, 1, 0, 0, 0, 2),
     (0, 0, 0, 0, 0, 1, 1), (0, 1, 0, 0, 0, 0, 1), (0, 1, 0, 0, 0, 0, 0),
     (0, 0, 1, 0, 0, 0, 0)],
    [(0, 1, 0, 0, 0, 0, 2), (0, 0, 0, 1, 0, 0, 2), (0, 1, 0, 0, 0, 0, 1),
     (0, 0, 1, 0, 0, 0, 1), (0, 0, 0, 1, 0, 0, 1), (0, 0, 0, 0, 1, 0, 0)],
    [(0, 2, 0, 0, 0, 0, 1), (0, 1, 0, 1, 0, 0, 1), (0, 1, 0, 1, 0, 0, 0),
     (0, 0, 1, 1, 0, 0, 0)],
)


def s_polys(ctx, t: ThetaSet):
    co = _coords(t, ctx)
    return tuple(_poly(ctx, co, terms) for terms in (S1_TERMS, S2_TERMS, S3_TERMS))


def d2_polys(ctx, t: ThetaSet):
    co = _coords(t, ctx)
    return tuple(_poly(ctx, co, terms) for terms in D2_TERMS)


def l_coeffs(ctx, t: ThetaSet, p: PhiSet) -> LPolyCoeffs:
    # y + bar(y) is the w-coordinate of y, so rel_trace gives each pairing directly
    l12 = fld.rel_trace(ctx, t_mul(ctx, t.theta2, p.phi3))
    l13 = t_norm(ctx, t.theta2) ^ fld.rel_trace(ctx, t_mul(ctx, p.phi3, bar(ctx, p.phi4)))
    l14 = fld.rel_trace(ctx, t_mul(ctx, t.theta2, p.phi4))
    return LPolyCoeffs(t_norm(ctx, p.phi3), l12, l13, l14, t_norm(ctx, p.phi4),
                       p.phi1, t.theta1, p.phi2)


def _nu_grid(ctx, c: CoeffTriple):
    """nu1, nu2 through the epsilons at a = a_from_A(A) for all A; shape (N, q)."""
    circle = fld.unit_circle(ctx)[1:]
    cc = CoeffTriple(c.a1[:, None], c.a2[:, None], c.a3[:, None], True)
    nu = nus(ctx, cc, circle[None, :], check=False)
    return nu.nu1, nu.nu2, circle


# ---------------------------------------------------------------- oracles


def key_lemma_oracle(ctx) -> OracleResult:
    """x^2 + tau xbar + (1 + tau) x = 0 has 2 or 4 roots; exactly 2 iff
    1 + tau + bar(tau) = 0, or it is nonzero and tr_m(tau bar(tau)) = 0."""
    if ctx.m > 5:
        raise ValueError("key_lemma_oracle enumerates GF(2^2m) exhaustively; need m <= 5")
    res = OracleResult("key_lemma", ctx.m)
    tau = np.arange(1, ctx.q2, dtype=np.int64)
    C = np.stack([np.zeros_like(tau), tau, np.ones_like(tau), 1 ^ tau], axis=1)
    counts = kernels.linform_root_counts(ctx, C)[:, 0]
    s = 1 ^ fld.rel_trace(ctx, tau)            # 1 + tau + bar(tau)
    pred_two = (s == 0) | ((s != 0) & (fld.tr_m(ctx, t_norm(ctx, tau)) == 0))
    bad = ~np.isin(counts, (2, 4)) | ((counts == 2) != pred_two)
    res.add(len(tau), bad.sum(), [{"tau": fld.fmt_tower(ctx, x), "roots": int(n)}
                                  for x, n in zip(tau[bad][:MAX_STORED_VIOLATIONS], counts[bad])])
    res.details = {"two_roots": int((counts == 2).sum()), "four_roots": int((counts == 4).sum())}
    return res


def _prop_a1_predict(ctx, c, t, p):
    one_plus = 1 ^ c.a1 ^ c.a2 ^ c.a3
    t2b = bar(ctx, t.theta2)
    x = t2b ^ t.theta3 ^ t.theta4
    s3 = t.theta1 ^ fld.rel_trace(ctx, t.theta3)
    phi1 = p.phi1
    case1 = (phi1 == 0) & (x != 0) & (one_plus != 0)
    case2 = (phi1 != 0) & (s3 == 0)
    where3 = (phi1 != 0) & (s3 != 0)
    tr3 = _tr_ratio(ctx, t_mul(ctx, x, bar(ctx, x)), gf_sq(ctx, phi1), where3)
    case3 = where3 & (tr3 == 0)
    return case1 | case2 | case3


def prop_a1_oracle(ctx, sample: int | None = None, seed: int = 0) -> OracleResult:
    """f(x+1) + f(x) + f(1) = 0 has only x = 0, 1 iff the three-case criterion holds."""
    if sample is None and ctx.m > 4:
        raise ValueError("exhaustive prop_a1_oracle needs m <= 4; pass sample=")
    res = OracleResult("prop_a1", ctx.m)
    blocks = [sample_triples(ctx, sample, seed)] if sample else all_triples(ctx)
    for c in blocks:
        t = thetas(ctx, c)
        p = varphis(ctx, t)
        pred = _prop_a1_predict(ctx, c, t, p)
        roots = kernels.deriv_root_counts(ctx, c.a1, c.a2, c.a3, [1])[:, 0]
        _report(res, ctx, c, np.ones(len(pred), bool), (roots == 2) != pred,
                roots=roots, predicted_two=pred)
    return res


def _z_predict(ctx, t, p):
    phi1, th1 = p.phi1, t.theta1
    tt = _tr_ratio(ctx, t_norm(ctx, t.theta2), gf_sq(ctx, th1), th1 != 0)
    z = np.full(np.shape(th1), -1, dtype=np.int64)
    z = np.where((phi1 == 0) & (th1 == 0) & (t.theta2 == 0), ctx.q, z)
    z = np.where((phi1 == 0) & (th1 == 0) & (t.theta2 != 0), 0, z)
    z = np.where((phi1 == 0) != (th1 == 0), 1, z)
    z = np.where((phi1 != 0) & (th1 != 0) & (tt == 0), 0, z)
    z = np.where((phi1 != 0) & (th1 != 0) & (tt == 1), 2, z)
    return z


def z_nu1_oracle(ctx) -> OracleResult:
    """Number of A in GF(2^m) with nu1 = 0 against its five-case prediction."""
    if ctx.m > 4:
        raise ValueError("z_nu1_oracle is exhaustive; need m <= 4")
    res = OracleResult("z_nu1", ctx.m)
    hist = {}
    for c in all_triples(ctx, chunk=1 << 16):
        t = thetas(ctx, c)
        p = varphis(ctx, t)
        nu1, _, _ = _nu_grid(ctx, c)
        z = np.count_nonzero(nu1 == 0, axis=1)
        pred = _z_predict(ctx, t, p)
        for v in np.unique(z):
            hist[int(v)] = hist.get(int(v), 0) + int((z == v).sum())
        _report(res, ctx, c, np.ones(len(z), bool), z != pred, observed=z, predicted=pred)
    res.details = {"z_histogram": hist}
    return res


def sum_eq_equivalence_oracle(ctx, sample: int | None = None, seed: int = 0) -> OracleResult:
    """Where nu1 != 0, eps1 xbar^2 + eps2 xbar + eps3 x^2 + eps4 x = 0 and
    nu1 x^2 + nu2 xbar + nu3 x = 0 have the same solution set.

    Both solution sets are GF(2)-subspaces, so they coincide exactly when the
    two kernels and their intersection share one dimension.  Exhaustive over
    every triple and circle point unless ``sample`` pairs are requested.
    """
    if sample is None and ctx.m > 4:
        raise ValueError("exhaustive sum_eq_equivalence_oracle needs m <= 4; pass sample=")
    res = OracleResult("sum_eq_equivalence", ctx.m)
    circle = fld.unit_circle(ctx)
    if sample is None:
        blocks = ((c, None) for c in all_triples(ctx, chunk=1 << 14))
    else:
        rng = np.random.default_rng(seed)
        blocks = [(sample_triples(ctx, sample, seed), circle[rng.integers(0, len(circle), sample)])]
    for c, a in blocks:
        if a is None:
            nc = len(circle)
            c = CoeffTriple(np.repeat(c.a1, nc), np.repeat(c.a2, nc), np.repeat(c.a3, nc), True)
            a = np.tile(circle, len(c.a1) // nc)
        e = epsilons(ctx, c, a)
        nu = nus(ctx, c, a, check=True)
        hyp = nu.nu1 != 0
        C = np.stack([e.eps1, e.eps2, e.eps3, e.eps4], axis=1)[hyp]
        D = np.stack([np.zeros_like(nu.nu1), nu.nu2, nu.nu1, nu.nu3], axis=1)[hyp]
        dims = kernels.linform_kernel_dims(ctx, C, D)
        bad = np.zeros(len(hyp), bool)
        bad[hyp] = (dims[:, 0] != dims[:, 2]) | (dims[:, 1] != dims[:, 2])
        _report(res, ctx, c, hyp, bad, a=a)
    res.details = {"mode": "exhaustive" if sample is None else "sampled"}
    return res


def four_cases_prediction(ctx, t: ThetaSet, p: PhiSet):
    """Predicted solvability of the five-equation system and the case label (1..4)."""
    phi1, phi2, th1 = p.phi1, p.phi2, t.theta1
    odd = ctx.m % 2 == 1
    case = np.where(phi1 != 0, np.where(phi2 != 0, 1, 2), np.where(phi2 != 0, 3, 4))
    T3 = _tr_ratio(ctx, t_norm(ctx, p.phi3), gf_sq(ctx, phi1), phi1 != 0)
    g = (gamma1_poly(ctx, t) == 0) | (gamma2_poly(ctx, t) == 0)
    pred1 = (th1 != 0) & g & (T3 == 0)
    q1, q2, q3 = d2_polys(ctx, t)
    pred2 = odd & (q1 == 0) & (q2 == 0) & (q3 == 0)
    pred4 = odd & (t.theta4 == (t.theta32 ^ t.theta21))
    pred = np.select([case == 1, case == 2, case == 3, case == 4],
                     [pred1, pred2, np.zeros_like(pred1), pred4])
    return pred.astype(bool), case


def four_cases_oracle(ctx, sample: int | None = None, seed: int = 0) -> OracleResult:
    """Search GF(2^m)^3 for (l1, l2, l3) and compare with the four-case criterion."""
    if sample is None and ctx.m > 4:
        raise ValueError("exhaustive four_cases_oracle needs m <= 4; pass sample=")
    res = OracleResult("four_cases", ctx.m)
    per_case = {c: {"instances": 0, "solvable": 0, "mismatch": 0, "mismatch_theta1_zero": 0}
                for c in (1, 2, 3, 4)}
    blocks = [sample_triples(ctx, sample, seed)] if sample else all_triples(ctx)
    for c in blocks:
        t = thetas(ctx, c)
        p = varphis(ctx, t)
        L = l_coeffs(ctx, t, p)
        coef = np.stack([p.phi1, t.theta1, p.phi2, L.l11, L.l12, L.l13, L.l14, L.l15])
        # many triples share one coefficient row; solve each distinct row once
        uniq, inv = np.unique(coef, axis=1, return_inverse=True)
        sol = kernels.dsystem_solve(ctx, uniq)
        found = sol[np.ravel(inv), 0].astype(bool)
        pred, case = four_cases_prediction(ctx, t, p)
        for k in per_case:
            sel = case == k
            per_case[k]["instances"] += int(sel.sum())
            per_case[k]["solvable"] += int((found & sel).sum())
            per_case[k]["mismatch"] += int(((found != pred) & sel).sum())
            per_case[k]["mismatch_theta1_zero"] += int(((found != pred) & sel & (t.theta1 == 0)).sum())
        _report(res, ctx, c, np.ones(len(found), bool), found != pred,
                case=case, solvable=found, predicted=pred)
    res.details = {"cases": per_case}
    return res


def _circle_failure(ctx, c: CoeffTriple):
    """Per triple: (number of A with nu1 = 0, whether some such a breaks
    'nu2 != 0 and f(a) != 0')."""
    nu1, nu2, circle = _nu_grid(ctx, c)
    cc = CoeffTriple(c.a1[:, None], c.a2[:, None], c.a3[:, None], True)
    fa = eval_f(ctx, cc, circle[None, :])
    z = nu1 == 0
    broken = z & ((nu2 == 0) | (fa == 0))
    return z.sum(axis=1), broken.any(axis=1)


LEMMA_IDS = ("3.4", "3.5", "3.6", "3.7", "3.8", "3.9", "3.10", "3.11")
ODD_ONLY = {"3.10", "3.11"}


def _lemma_hyp_d2(ctx, t, p):
    """phi1 != 0, (theta1 + theta21) k + theta21 + theta22 = 0, S1 = S2 = S3 = 0."""
    base = (p.phi1 != 0) & ((gf_mul(ctx, t.theta1 ^ t.theta21, ctx.k) ^ t.theta21 ^ t.theta22) == 0)
    s1, s2, s3 = s_polys(ctx, t)
    return base & (s1 == 0) & (s2 == 0) & (s3 == 0)


def _lemma_hyp_d4(ctx, t, p):
    t2b = bar(ctx, t.theta2)
    th1 = t.theta1
    h = (th1 == (t.theta2 ^ t2b)) & (th1 != 0)
    h &= t_mul(ctx, ctx.omega, t.theta2) == t_mul(ctx, ctx.omega_bar, t2b)
    th1s = gf_sq(ctx, th1)
    for ph in (p.phi3, p.phi4):
        lhs = gf_mul(ctx, th1s, t_norm(ctx, ph))
        rhs = fld.t_sq(ctx, t_mul(ctx, t.theta2, ph))
        h &= lhs == (rhs ^ bar(ctx, rhs))
    return h


def _lemma_block(ctx, lemma, c, t, p):
    """(hypothesis mask, violation mask, extra columns) for one block."""
    odd = ctx.m % 2 == 1
    phi1, th1 = p.phi1, t.theta1
    t2b = bar(ctx, t.theta2)
    T3 = lambda where: _tr_ratio(ctx, t_norm(ctx, p.phi3), gf_sq(ctx, phi1), where)
    if lemma == "3.4":
        s = t_mul(ctx, fld.t_sq(ctx, t.theta2), t.theta3)
        hyp = (phi1 != 0) & (th1 == 0) & ((s ^ bar(ctx, s)) == 0)
        return hyp, hyp & (T3(hyp) != 1), {}
    if lemma in ("3.5", "3.10"):
        hyp = _lemma_hyp_d2(ctx, t, p)
        q1, q2, q3 = d2_polys(ctx, t)
        polys = (q1 == 0) & (q2 == 0) & (q3 == 0)
        if lemma == "3.5":
            return hyp, hyp & ((T3(hyp) == 0) != (odd & polys)), {}
        hyp = hyp & odd & polys
        return hyp, hyp, {}       # conclusion checked on the circle by the caller
    if lemma == "3.6":
        s = fld.t_sq(ctx, t.theta2)
        u = t_mul(ctx, s, p.phi3) ^ t_mul(ctx, fld.t_sq(ctx, t2b), bar(ctx, p.phi3))
        r2 = fld.rel_trace(ctx, t.theta2)          # theta2 + bar(theta2)
        w = r2 ^ fld.rel_trace(ctx, t.theta3)      # ... + theta3 + bar(theta3)
        eq1 = t_mul(ctx, u, w) == 0
        kk = gf_sq(ctx, ctx.k) ^ ctx.k ^ ctx.omega
        inner = (t_mul(ctx, gf_mul(ctx, r2, w), kk) ^ t_mul(ctx, t.theta2, t.theta3)
                 ^ t2b ^ t_mul(ctx, t2b, t.theta3))
        eq2 = t_mul(ctx, u, inner) == 0
        hyp = (th1 == r2) & (p.phi2 != 0) & eq1 & eq2
        T4 = _tr_ratio(ctx, t_norm(ctx, p.phi4), gf_sq(ctx, p.phi2), hyp)
        return hyp, hyp & (T4 != 1), {}
    if lemma in ("3.7", "3.11"):
        hyp = _lemma_hyp_d4(ctx, t, p)
        cond = odd & (t.theta4 == (t.theta32 ^ t.theta21))
        if lemma == "3.7":
            num = t_norm(ctx, t.theta2) ^ fld.rel_trace(ctx, t_mul(ctx, p.phi3, bar(ctx, p.phi4)))
            T = _tr_ratio(ctx, num, gf_sq(ctx, th1), hyp)
            return hyp, hyp & ((T == 0) != cond), {}
        hyp = hyp & cond
        return hyp, hyp & ((1 ^ c.a1 ^ c.a2 ^ c.a3) != 0), {}
    if lemma == "3.8":
        hyp = (phi1 != 0) & (th1 != 0) & (gamma1_poly(ctx, t) == 0)
        Tt = _tr_ratio(ctx, t_norm(ctx, t.theta2), gf_sq(ctx, th1), hyp)
        return hyp, hyp & (Tt != T3(hyp)), {}
    if lemma == "3.9":
        hyp = ((phi1 != 0) & (th1 != 0) & (gamma2_poly(ctx, t) == 0)
               & (gamma1_poly(ctx, t) != 0))
        Tt = _tr_ratio(ctx, t_norm(ctx, t.theta2), gf_sq(ctx, th1), hyp)
        return hyp, hyp & ((Tt ^ T3(hyp)) != fld.tr_m(ctx, 1)), {"part2": hyp & odd & (T3(hyp) == 0)}
    raise ValueError(f"unknown lemma id {lemma!r}; expected one of {LEMMA_IDS}")


def trace_lemma_oracle(ctx, which: str) -> OracleResult:
    """Check one of the trace/branch statements on every triple meeting its
    hypotheses.  Ids: 3.4 ... 3.11 (see LEMMA_IDS)."""
    if which not in LEMMA_IDS:
        raise ValueError(f"unknown lemma id {which!r}; expected one of {LEMMA_IDS}")
    if ctx.m > 4:
        raise ValueError("trace_lemma_oracle is exhaustive; need m <= 4")
    res = OracleResult(f"trace_lemma_{which}", ctx.m)
    res.expected_vacuous = which in ODD_ONLY and ctx.m % 2 == 0
    part2_checked = part2_bad = 0
    for c in all_triples(ctx):
        t = thetas(ctx, c)
        p = varphis(ctx, t)
        hyp, bad, extra = _lemma_block(ctx, which, c, t, p)
        if which == "3.10" and hyp.any():
            sub = _select(c, hyp)
            _, broken = _circle_failure(ctx, sub)
            bad = np.zeros_like(hyp)
            bad[hyp] = ~broken
        _report(res, ctx, c, hyp, bad)
        if which == "3.9" and extra["part2"].any():
            sel = extra["part2"]
            sub = _select(c, sel)
            _, broken = _circle_failure(ctx, sub)
            part2_checked += int(sel.sum())
            part2_bad += int((~broken).sum())
            bad2 = np.zeros_like(sel)
            bad2[sel] = ~broken
            recs, nbad = _records(ctx, c, bad2)
            # part (2) instances are a subset of part (1) ones: count the
            # violations, not the instances, a second time
            res.add(0, nbad, recs)
    if which == "3.9":
        res.details = {"part2_instances": part2_checked, "part2_violations": part2_bad,
                       "part2_expected_vacuous": ctx.m % 2 == 0}
    return res


def condition13_oracle(ctx) -> OracleResult:
    """For a != 1 on the circle with nu1 = 0: the kernel equation has exactly
    two roots iff nu2 != 0 and f(a) != 0."""
    if ctx.m > 4:
        raise ValueError("condition13_oracle is exhaustive; need m <= 4")
    res = OracleResult("condition13", ctx.m)
    both_zero_seen = 0
    for c in all_triples(ctx, chunk=1 << 16):
        nu1, nu2, circle = _nu_grid(ctx, c)
        ti, ai = np.nonzero(nu1 == 0)
        if not len(ti):
            continue
        a = circle[ai]
        sub = CoeffTriple(c.a1[ti], c.a2[ti], c.a3[ti], True)
        e = epsilons(ctx, sub, a)
        dim = kernels.linform_kernel_dim(ctx, np.stack([e.eps1, e.eps2, e.eps3, e.eps4], axis=1))
        pred_two = (nu2[ti, ai] != 0) & (eval_f(ctx, sub, a) != 0)
        both_zero_seen += int(((nu2[ti, ai] == 0) & (dim > 1)).sum())
        _report(res, ctx, sub, np.ones(len(ti), bool), (dim == 1) != pred_two,
                a=a, roots=2 ** dim.astype(np.int64))
    res.details = {"nu1_nu2_zero_with_extra_roots": both_zero_seen}
    return res


ORACLES = {
    "key_lemma": key_lemma_oracle,
    "prop_a1": prop_a1_oracle,
    "z_nu1": z_nu1_oracle,
    "sum_eq_equivalence": sum_eq_equivalence_oracle,
    "four_cases": four_cases_oracle,
    "condition13": condition13_oracle,
}


def run_oracle(ctx, name: str) -> list[OracleResult]:
    """Run one oracle by name; ``trace_lemma`` runs every lemma id and
    ``trace_lemma_3.x`` a single one."""
    if name in ORACLES:
        return [ORACLES[name](ctx)]
    if name == "trace_lemma":
        return [trace_lemma_oracle(ctx, w) for w in LEMMA_IDS]
    if name.startswith("trace_lemma_"):
        return [trace_lemma_oracle(ctx, name[len("trace_lemma_"):])]
    if name == "all":
        return [r for n in list(ORACLES) + ["trace_lemma"] for r in run_oracle(ctx, n)]
    raise KeyError(name)


def oracle_names() -> list[str]:
    return list(ORACLES) + ["trace_lemma"] + [f"trace_lemma_{w}" for w in LEMMA_IDS] + ["all"]
