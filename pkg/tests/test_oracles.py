"""Oracle machinery, plus the counterexamples the oracles found, frozen as
single triples and re-derived here by scalar arithmetic."""
import itertools

import numpy as np
import pytest

from quadapn import field as fld
from quadapn import kernels
from quadapn.oracles import (FAIL, LEMMA_IDS, PASS, VACUOUS, OracleResult, _lemma_block,
                             four_cases_prediction, key_lemma_oracle, l_coeffs, oracle_names,
                             run_oracle, sample_triples, sum_eq_equivalence_oracle,
                             trace_lemma_oracle, z_nu1_oracle, condition13_oracle, prop_a1_oracle)
from quadapn.quad import CoeffTriple, thetas, varphis


def _one(m, a1, a2, a3):
    ctx = fld.make_field(m)
    c = CoeffTriple.make(ctx, [a1], [fld.parse_tower(ctx, a2)], [fld.parse_tower(ctx, a3)])
    t = thetas(ctx, c)
    return ctx, c, t, varphis(ctx, t)


def _coef(ctx, t, p):
    L = l_coeffs(ctx, t, p)
    return [int(np.asarray(v)[0]) for v in (p.phi1, t.theta1, p.phi2, L.l11, L.l12, L.l13, L.l14, L.l15)]


def _scalar_solvable(ctx, coef):
    f1, t1, f2, r4, r3, r2, r1, r0 = coef
    mul = lambda a, b: int(fld.gf_mul(ctx, a, b))
    for l1, l2, l3 in itertools.product(range(ctx.q), repeat=3):
        if (mul(l1, l1) ^ mul(f1, l1) == r4 and mul(t1, l1) ^ mul(f1, l2) == r3
                and mul(f2, l1) ^ mul(t1, l2) ^ mul(f1, l3) ^ mul(l2, l2) == r2
                and mul(f2, l2) ^ mul(t1, l3) == r1 and mul(l3, l3) ^ mul(f2, l3) == r0):
            return True
    return False


def test_result_status():
    r = OracleResult("x", 3)
    assert r.status == VACUOUS and not r.ok
    r.expected_vacuous = True
    assert r.ok
    r.add(10, 0, [])
    assert r.status == PASS and r.ok
    r.add(5, 40, [{"i": i} for i in range(40)])
    assert r.status == FAIL and not r.ok
    assert r.violation_count == 40 and len(r.violations) == 25
    assert r.to_dict()["status"] == FAIL


def test_names_and_dispatch(ctx3):
    names = oracle_names()
    for want in ("key_lemma", "prop_a1", "z_nu1", "sum_eq_equivalence", "four_cases",
                 "condition13", "trace_lemma", "all"):
        assert want in names
    assert len(run_oracle(ctx3, "trace_lemma")) == len(LEMMA_IDS)
    with pytest.raises(KeyError):
        run_oracle(ctx3, "nope")
    with pytest.raises(ValueError):
        trace_lemma_oracle(ctx3, "9.9")


@pytest.mark.parametrize("fn", [key_lemma_oracle, z_nu1_oracle, condition13_oracle, prop_a1_oracle,
                                sum_eq_equivalence_oracle])
def test_structural_oracles_pass_m3(ctx3, fn):
    r = fn(ctx3)
    assert r.status == PASS, r.to_dict()


def test_sampled_modes_m5(ctx5):
    assert prop_a1_oracle(ctx5, sample=3000, seed=1).status == PASS
    assert sum_eq_equivalence_oracle(ctx5, sample=3000, seed=1).status == PASS


def test_sample_triples_reproducible(ctx4):
    a, b = sample_triples(ctx4, 50, seed=9), sample_triples(ctx4, 50, seed=9)
    assert np.array_equal(a.a2, b.a2) and np.all(a.a1 < ctx4.q)


def test_parity_vacuity(ctx4):
    for w in ("3.10", "3.11"):
        r = trace_lemma_oracle(ctx4, w)
        assert r.expected_vacuous and r.status == VACUOUS and r.ok


def test_l_coefficients_against_trace_identity(ctx3):
    """tr(nu2 nu2bar / nu1^2) = tr(L1(A) / L2(A)^2) wherever nu1 != 0."""
    from quadapn.quad import nu_rational_forms
    rng = np.random.default_rng(0)
    c = CoeffTriple.make(ctx3, rng.integers(0, 8, 400), rng.integers(0, 64, 400), rng.integers(0, 64, 400))
    t = thetas(ctx3, c)
    p = varphis(ctx3, t)
    L = l_coeffs(ctx3, t, p)
    for A in range(ctx3.q):
        nu1, nu2 = nu_rational_forms(ctx3, t, A)
        A2 = int(fld.gf_sq(ctx3, A))
        A4 = int(fld.gf_sq(ctx3, A2))
        A3 = int(fld.gf_mul(ctx3, A2, A))
        g = fld.gf_mul
        L1 = (g(ctx3, L.l11, A4) ^ g(ctx3, L.l12, A3) ^ g(ctx3, L.l13, A2) ^ g(ctx3, L.l14, A) ^ L.l15)
        L2 = g(ctx3, p.phi1, A2) ^ g(ctx3, t.theta1, A) ^ p.phi2
        ok = (nu1 != 0) & (L2 != 0)   # inv[0] = 0 fills the excluded slots
        lhs = fld.tr_m(ctx3, g(ctx3, fld.t_norm(ctx3, nu2), ctx3.inv[fld.gf_sq(ctx3, nu1)]))
        rhs = fld.tr_m(ctx3, g(ctx3, L1, ctx3.inv[fld.gf_sq(ctx3, L2)]))
        assert np.array_equal(lhs[ok], rhs[ok])


# ---- counterexamples found by the oracles; see the decisions ledger

FOUR_CASE_WITNESSES = [
    # m, a1, a2, a3, case label, predicted solvable, actually solvable
    (4, 0, "0:0", "0:1", 4, False, True),    # theta1 = 0: every equation is a square root
    (3, 0, "1:1", "0:0", 4, False, True),
    (3, 0, "1:1", "1:0", 4, True, False),    # odd m, theta1 != 0: l3 is forced to 0 and to 1
    (3, 0, "2:1", "2:0", 3, False, True),    # the "never solvable" case has solutions at m=3
    (3, 2, "2:0", "1:3", 4, True, False),
]


@pytest.mark.parametrize("m,a1,a2,a3,case,pred,solvable", FOUR_CASE_WITNESSES)
def test_four_case_witnesses(m, a1, a2, a3, case, pred, solvable):
    ctx, c, t, p = _one(m, a1, a2, a3)
    got_pred, got_case = four_cases_prediction(ctx, t, p)
    assert int(got_case[0]) == case and bool(got_pred[0]) == pred
    coef = _coef(ctx, t, p)
    assert _scalar_solvable(ctx, coef) == solvable
    assert bool(kernels.dsystem_solve(ctx, np.array(coef)[:, None])[0, 0]) == solvable


@pytest.mark.parametrize("m,a1,a2,a3,lemmas", [
    (4, 8, "2:4", "2:d", ("3.6",)),          # needs k = 1; at m = 4 k = 8
    (3, 2, "2:0", "1:3", ("3.7", "3.11")),
])
def test_trace_lemma_witnesses(m, a1, a2, a3, lemmas):
    ctx, c, t, p = _one(m, a1, a2, a3)
    for w in lemmas:
        hyp, bad, _ = _lemma_block(ctx, w, c, t, p)
        assert bool(hyp[0]) and bool(bad[0]), w
        assert any(v["a2"] == a2 and v["a3"] == a3 for v in trace_lemma_oracle(ctx, w).violations)


def test_lemma_d3_witness_by_hand():
    """Recompute the d3 witness trace from field arithmetic alone: tr(N(phi4)/phi2^2) = 0."""
    ctx, c, t, p = _one(4, 8, "2:4", "2:d")
    phi2 = int(p.phi2[0])
    val = int(fld.gf_mul(ctx, fld.t_norm(ctx, int(p.phi4[0])), fld.gf_inv(ctx, fld.gf_sq(ctx, phi2))))
    assert phi2 != 0 and fld.tr_m(ctx, val) == 0
