"""Pure numpy versions of the compiled kernels in ``_ext.pyx``.

Each function takes the same arguments and fills the same output buffers, so
``kernels`` can swap one module for the other without the callers noticing.
"""
from __future__ import annotations

import numpy as np


class _Fld:
    __slots__ = ("exp", "log", "m", "mask", "lk")

    def __init__(self, exp, log, m, k):
        self.exp = np.asarray(exp)
        self.log = np.asarray(log)
        self.m = m
        self.mask = (1 << m) - 1
        self.lk = self.log[k]

    def mul(self, a, b):
        return self.exp[self.log[a] + self.log[b]]

    def sq(self, a):
        return self.exp[2 * self.log[a]]

    def tmul(self, x, y):
        m, mask, exp, log = self.m, self.mask, self.exp, self.log
        lx1, lx2 = log[x >> m], log[x & mask]
        ly1, ly2 = log[y >> m], log[y & mask]
        p = exp[lx1 + ly1]
        hi = exp[lx1 + ly2] ^ exp[lx2 + ly1] ^ p
        lo = exp[lx2 + ly2] ^ exp[log[p] + self.lk]
        return (hi << m) | lo

    def tsq(self, x):
        s1 = self.sq(x >> self.m)
        return (s1 << self.m) | (self.exp[self.log[s1] + self.lk] ^ self.sq(x & self.mask))

    def bar(self, x):
        return x ^ (x >> self.m)

    def norm(self, x):
        x1, x2 = x >> self.m, x & self.mask
        return self.exp[self.log[self.sq(x1)] + self.lk] ^ self.mul(x1, x2) ^ self.sq(x2)

    def scale(self, c, x):
        return (self.mul(c, x >> self.m) << self.m) | self.mul(c, x & self.mask)


def gf2_rank_rows(rows: np.ndarray, nbits: int) -> np.ndarray:
    """Row-rank over GF(2) for a batch: rows has shape (B, r) of int bit vectors."""
    rows = np.array(rows, dtype=np.int64, copy=True)
    B, r = rows.shape
    rank = np.zeros(B, dtype=np.int64)
    idx = np.arange(B)
    for bit in range(nbits):
        sel = 1 << bit
        has = (rows & sel) != 0
        # pivot: first row (among unused ones) holding this bit
        cand = has & (np.arange(r)[None, :] >= rank[:, None])
        ok = cand.any(axis=1)
        if not ok.any():
            continue
        piv_pos = np.argmax(cand, axis=1)
        piv = rows[idx, piv_pos]
        # swap pivot into slot `rank`
        tgt = np.minimum(rank, r - 1)
        tmp = rows[idx, tgt].copy()
        rows[idx[ok], piv_pos[ok]] = tmp[ok]
        rows[idx[ok], tgt[ok]] = piv[ok]
        # clear the bit from every other row
        clear = ((rows & sel) != 0) & ok[:, None]
        clear[idx[ok], tgt[ok]] = False
        rows ^= np.where(clear, piv[:, None], 0)
        rank += ok
    return rank


def _theorem_codes(F, inv, tr, a1, a2, a3):
    a1 = np.asarray(a1, dtype=np.int64)
    ab2 = F.bar(a2)
    n2 = F.norm(a2)
    a1s = F.sq(a1)
    th1 = 1 ^ a1s ^ n2 ^ F.norm(a3)
    th2 = a1 ^ F.tmul(ab2, a3)
    nt2 = F.norm(th2)
    it1 = inv[th1]
    pre = (th1 != 0) & (tr[F.mul(nt2, F.sq(it1))] == 0)
    th3 = ab2 ^ F.tmul(a1, F.bar(a3))
    th4 = a1s ^ n2
    th1s = F.sq(th1)
    t2s = F.tsq(th2)
    T = F.tmul(t2s, th3) >> F.m
    g1 = (F.mul(th1s, th4) ^ F.mul(th1, nt2) ^ T) == 0
    g2 = (F.scale(th1s, th3) ^ F.scale(th1, F.bar(t2s)) ^ T) == 0
    code = pre.astype(np.uint8) * 4 + (pre & g1) * np.uint8(1) + (pre & g2) * np.uint8(2)
    return code.astype(np.uint8)


def theorem_grid(exp, log, inv, tr, m, k, a1, a2s, out):
    F = _Fld(exp, log, m, k)
    inv, tr = np.asarray(inv), np.asarray(tr)
    a3 = np.arange(out.shape[1], dtype=np.int64)
    for i, a2 in enumerate(np.asarray(a2s)):
        out[i, :] = _theorem_codes(F, inv, tr, a1, np.int64(a2), a3)


def theorem_triples(exp, log, inv, tr, m, k, a1s, a2s, a3s, out):
    F = _Fld(exp, log, m, k)
    out[:] = _theorem_codes(F, np.asarray(inv), np.asarray(tr),
                            np.asarray(a1s), np.asarray(a2s), np.asarray(a3s))


def family_apn_witness(exp, log, m, k, cw, xb2, xb, x2, a1s, a2s, a3s, out, chunk=4096):
    F = _Fld(exp, log, m, k)
    cw = np.asarray(cw)
    n = 2 * m
    basis = (np.int64(1) << np.arange(n, dtype=np.int64))
    bxb2, bxb, bx2 = np.asarray(xb2)[basis], np.asarray(xb)[basis], np.asarray(x2)[basis]
    a1s, a2s, a3s = np.asarray(a1s), np.asarray(a2s), np.asarray(a3s)
    out[:] = -1
    for s in range(0, len(a1s), chunk):
        sl = slice(s, s + chunk)
        a1, a2, a3 = a1s[sl, None], a2s[sl, None], a3s[sl, None]
        t1 = F.tmul(a1, cw[1][None, :])
        t2 = F.tmul(a2, cw[2][None, :])
        t3 = F.tmul(a3, cw[3][None, :])
        e1, e2 = cw[0][None, :] ^ t1, cw[0][None, :] ^ t2
        e3, e4 = t2 ^ t3, t1 ^ t3
        B, C = e1.shape
        rows = (F.tmul(e1[..., None], bxb2) ^ F.tmul(e2[..., None], bxb)
                ^ F.tmul(e3[..., None], bx2) ^ F.tmul(e4[..., None], basis))
        rank = gf2_rank_rows(rows.reshape(B * C, n), n).reshape(B, C)
        bad = rank != n - 1
        first = np.where(bad.any(axis=1), np.argmax(bad, axis=1), -1)
        out[sl] = first


def _ftab(F, ptab, a1, a2, a3):
    return (ptab[0] ^ F.tmul(a1, ptab[1]) ^ F.tmul(a2, ptab[2]) ^ F.tmul(a3, ptab[3]))


def f_tables(exp, log, m, k, ptab, a1s, a2s, a3s, out):
    F = _Fld(exp, log, m, k)
    ptab = np.asarray(ptab)
    for i in range(len(a1s)):
        out[i, :] = _ftab(F, ptab, np.int64(a1s[i]), np.int64(a2s[i]), np.int64(a3s[i]))


def deriv_root_counts(exp, log, m, k, ptab, a1s, a2s, a3s, avals, out):
    F = _Fld(exp, log, m, k)
    ptab = np.asarray(ptab)
    xs = np.arange(ptab.shape[1], dtype=np.int64)
    for i in range(len(a1s)):
        ft = _ftab(F, ptab, np.int64(a1s[i]), np.int64(a2s[i]), np.int64(a3s[i]))
        for t, a in enumerate(np.asarray(avals)):
            y = F.tmul(np.int64(a), xs)
            out[i, t] = np.count_nonzero((ft[y ^ a] ^ ft[y] ^ ft[a]) == 0)


def linform_root_counts(exp, log, m, k, xb2, xb, x2, C, D, has_d, out):
    F = _Fld(exp, log, m, k)
    xb2, xb, x2 = np.asarray(xb2), np.asarray(xb), np.asarray(x2)
    xs = np.arange(len(xb), dtype=np.int64)

    def zeros(c):
        return (F.tmul(np.int64(c[0]), xb2) ^ F.tmul(np.int64(c[1]), xb)
                ^ F.tmul(np.int64(c[2]), x2) ^ F.tmul(np.int64(c[3]), xs)) == 0

    C, D = np.asarray(C), np.asarray(D)
    for i in range(len(C)):
        zc = zeros(C[i])
        out[i, 0] = np.count_nonzero(zc)
        if has_d:
            zd = zeros(D[i])
            out[i, 1] = np.count_nonzero(zd)
            out[i, 2] = np.count_nonzero(zc & zd)
        else:
            out[i, 1] = out[i, 2] = 0


def diff_spectrum(values, hist):
    v = np.asarray(values)
    N = len(v)
    xs = np.arange(N, dtype=np.int64)
    for a in range(1, N):
        cnt = np.bincount(v[xs ^ a] ^ v, minlength=N)
        hist += np.bincount(cnt, minlength=len(hist))[: len(hist)]


def quad_apn_generic(values, n):
    v = np.asarray(values)
    N = len(v)
    basis = np.int64(1) << np.arange(n, dtype=np.int64)
    a = np.arange(1, N, dtype=np.int64)
    rows = v[basis[None, :] ^ a[:, None]] ^ v[basis][None, :] ^ v[a][:, None] ^ v[0]
    rank = gf2_rank_rows(rows, n)
    bad = np.flatnonzero(rank != n - 1)
    return int(a[bad[0]]) if len(bad) else 0


def dsystem_solve(exp, log, m, coef, out):
    F = _Fld(exp, log, m, 1)
    q = 1 << m
    L = np.arange(q, dtype=np.int64)
    coef = np.asarray(coef)
    out[:] = 0
    for i in range(coef.shape[1]):
        p1, t1, p2, r4, r3, r2, r1, r0 = (np.int64(c) for c in coef[:, i])
        l1s = L[(F.sq(L) ^ F.mul(p1, L)) == r4]
        l3s = L[(F.sq(L) ^ F.mul(p2, L)) == r0]
        if not len(l1s) or not len(l3s):
            continue
        g1, g3, g2 = np.meshgrid(l1s, l3s, L, indexing="ij")
        ok = ((F.mul(t1, g1) ^ F.mul(p1, g2)) == r3)
        ok &= (F.mul(p2, g2) ^ F.mul(t1, g3)) == r1
        ok &= (F.mul(p2, g1) ^ F.mul(t1, g2) ^ F.mul(p1, g3) ^ F.sq(g2)) == r2
        hit = np.flatnonzero(ok.ravel())
        if len(hit):
            j = hit[0]
            out[i] = (1, g1.ravel()[j], g2.ravel()[j], g3.ravel()[j])


def linform_kernel_dim(exp, log, m, k, xb2, xb, x2, C, out, chunk=1 << 16):
    F = _Fld(exp, log, m, k)
    n = 2 * m
    basis = np.int64(1) << np.arange(n, dtype=np.int64)
    bxb2, bxb, bx2 = np.asarray(xb2)[basis], np.asarray(xb)[basis], np.asarray(x2)[basis]
    C = np.asarray(C)
    for s in range(0, len(C), chunk):
        c = C[s:s + chunk]
        rows = (F.tmul(c[:, 0:1], bxb2) ^ F.tmul(c[:, 1:2], bxb)
                ^ F.tmul(c[:, 2:3], bx2) ^ F.tmul(c[:, 3:4], basis))
        out[s:s + chunk] = n - gf2_rank_rows(rows, n)


def linform_kernel_dims(exp, log, m, k, xb2, xb, x2, C, D, out, chunk=1 << 15):
    F = _Fld(exp, log, m, k)
    n = 2 * m
    basis = np.int64(1) << np.arange(n, dtype=np.int64)
    bxb2, bxb, bx2 = np.asarray(xb2)[basis], np.asarray(xb)[basis], np.asarray(x2)[basis]
    C, D = np.asarray(C), np.asarray(D)

    def rows(c):
        return (F.tmul(c[:, 0:1], bxb2) ^ F.tmul(c[:, 1:2], bxb)
                ^ F.tmul(c[:, 2:3], bx2) ^ F.tmul(c[:, 3:4], basis))

    for s in range(0, len(C), chunk):
        rc, rd = rows(C[s:s + chunk]), rows(D[s:s + chunk])
        out[s:s + chunk, 0] = n - gf2_rank_rows(rc, n)
        out[s:s + chunk, 1] = n - gf2_rank_rows(rd, n)
        out[s:s + chunk, 2] = n - gf2_rank_rows((rc << n) | rd, 2 * n)
