import numpy as np
import pytest

from quadapn import field as fld
from quadapn import kernels
from quadapn.apncore import (FuncTable, differential_uniformity, family_apn_mask, family_is_apn,
                             func_table, gf2_rank, is_permutation, main_eq_kernel_dim,
                             quad_is_apn_generic)
from quadapn.quad import CoeffTriple


def _naive_du(values):
    """Differential uniformity by direct counting over every (a, x)."""
    v = np.asarray(values)
    x = np.arange(len(v))
    best = 0
    for a in range(1, len(v)):
        best = max(best, np.bincount(v ^ v[x ^ a]).max())
    return best


def test_gf2_rank():
    assert gf2_rank([]) == 0
    assert gf2_rank([1, 2, 3]) == 2
    assert gf2_rank([0b1010, 0b0101, 0b1111, 0b1000]) == 3
    rng = np.random.default_rng(5)
    for _ in range(20):
        rows = rng.integers(0, 2, (6, 8))
        packed = [int("".join(map(str, r)), 2) for r in rows]
        # rank over GF(2) via numpy elimination on a copy
        a = rows.copy() % 2
        r = 0
        for col in range(a.shape[1]):
            piv = np.flatnonzero(a[r:, col])
            if len(piv) == 0:
                continue
            a[[r, r + piv[0]]] = a[[r + piv[0], r]]
            for i in range(a.shape[0]):
                if i != r and a[i, col]:
                    a[i] ^= a[r]
            r += 1
            if r == a.shape[0]:
                break
        assert gf2_rank(packed) == r


def test_gold_cube_is_apn_not_permutation_even_n():
    ctx = fld.make_field(3)
    x = np.arange(ctx.q2)
    t = FuncTable(6, fld.t_pow(ctx, x, 3))
    prof = differential_uniformity(t)
    assert prof.du == 2 and _naive_du(t.values) == 2
    assert sum(prof.spectrum.values()) == 63 * 64
    assert quad_is_apn_generic(t)
    assert not is_permutation(t)          # gcd(3, 63) = 3


def test_identity_is_permutation_not_apn():
    t = FuncTable(4, np.arange(16))
    assert is_permutation(t)
    assert differential_uniformity(t).du == 16


def test_table_length_checked():
    with pytest.raises(ValueError):
        FuncTable(3, np.arange(7))


def test_family_mask_matches_naive_du(ctx3):
    rng = np.random.default_rng(11)
    a1 = rng.integers(0, ctx3.q, 60)
    a2 = rng.integers(0, ctx3.q2, 60)
    a3 = rng.integers(0, ctx3.q2, 60)
    a2[:6], a3[:6] = 0, 0                   # a few a2 = a3 = 0 rows, which are often APN
    mask = family_apn_mask(ctx3, a1, a2, a3)
    tables = kernels.f_tables(ctx3, a1, a2, a3)
    naive = np.array([_naive_du(t) == 2 for t in tables])
    assert np.array_equal(mask, naive)
    assert mask.any() and not mask.all()


def test_family_is_apn_witness(ctx4):
    ok, w = family_is_apn(ctx4, CoeffTriple.make(ctx4, 0, 0, 0))
    assert ok and w is None
    c = CoeffTriple.make(ctx4, 1, 1, 1)
    ok, w = family_is_apn(ctx4, c)
    assert not ok
    assert fld.on_unit_circle(ctx4, w)
    assert main_eq_kernel_dim(ctx4, c, w) > 1
    with pytest.raises(ValueError):
        family_is_apn(ctx4, CoeffTriple.make(ctx4, [0, 0], [0, 1], [0, 0]))


def test_circle_kernel_dims_decide_apn(ctx3):
    """APN iff every circle direction gives a one-dimensional kernel."""
    rng = np.random.default_rng(3)
    for _ in range(25):
        c = CoeffTriple.make(ctx3, *(int(v) for v in (rng.integers(8), rng.integers(64), rng.integers(64))))
        dims = [main_eq_kernel_dim(ctx3, c, a) for a in fld.unit_circle(ctx3)]
        assert family_is_apn(ctx3, c)[0] == all(d == 1 for d in dims)
        assert quad_is_apn_generic(func_table(ctx3, c)) == all(d == 1 for d in dims)
