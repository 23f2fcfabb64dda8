# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  Signatures and results mirror quadapn._pyimpl exactly.

Tower elements are packed words (x1 << m) | x2, subfield products go through
zero-safe log/antilog tables (exp[log[a] + log[b]] is 0 when either is 0).
"""
from libc.stdint cimport int64_t, int32_t, uint8_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

ctypedef int64_t i64


cdef struct Fld:
    const i64* exp
    const i64* log
    int m
    i64 mask
    i64 lk


cdef inline void make_fld(Fld* F, const i64[::1] exp, const i64[::1] log, int m, i64 k) noexcept:
    F.exp = &exp[0]
    F.log = &log[0]
    F.m = m
    F.mask = (<i64>1 << m) - 1
    F.lk = log[k]


cdef inline i64 fmul(const Fld* F, i64 a, i64 b) noexcept nogil:
    return F.exp[F.log[a] + F.log[b]]


cdef inline i64 fsq(const Fld* F, i64 a) noexcept nogil:
    return F.exp[2 * F.log[a]]


cdef inline i64 tmul(const Fld* F, i64 x, i64 y) noexcept nogil:
    cdef i64 lx1 = F.log[x >> F.m]
    cdef i64 lx2 = F.log[x & F.mask]
    cdef i64 ly1 = F.log[y >> F.m]
    cdef i64 ly2 = F.log[y & F.mask]
    cdef i64 lp = lx1 + ly1
    cdef i64 p = F.exp[lp]
    cdef i64 hi = F.exp[lx1 + ly2] ^ F.exp[lx2 + ly1] ^ p
    cdef i64 lo = F.exp[lx2 + ly2] ^ F.exp[F.log[p] + F.lk]
    return (hi << F.m) | lo


cdef inline i64 tsq(const Fld* F, i64 x) noexcept nogil:
    cdef i64 s1 = fsq(F, x >> F.m)
    return (s1 << F.m) | (F.exp[F.log[s1] + F.lk] ^ fsq(F, x & F.mask))


cdef inline i64 tbar(const Fld* F, i64 x) noexcept nogil:
    return x ^ (x >> F.m)


cdef inline i64 tnorm(const Fld* F, i64 x) noexcept nogil:
    cdef i64 x1 = x >> F.m
    cdef i64 x2 = x & F.mask
    return F.exp[F.log[fsq(F, x1)] + F.lk] ^ fmul(F, x1, x2) ^ fsq(F, x2)


cdef inline i64 tscale(const Fld* F, i64 c, i64 x) noexcept nogil:
    return (fmul(F, c, x >> F.m) << F.m) | fmul(F, c, x & F.mask)


cdef inline int gf2_rank(i64* rows, int nrows) noexcept nogil:
    """Rank over GF(2) of int-encoded row vectors; destroys rows."""
    cdef int rank = 0
    cdef int r, i
    cdef i64 piv, low
    for r in range(nrows):
        piv = rows[r]
        if piv == 0:
            continue
        rank += 1
        low = piv & (-piv)
        for i in range(r + 1, nrows):
            if rows[i] & low:
                rows[i] ^= piv
    return rank


cdef inline uint8_t theorem_code(const Fld* F, const i64* inv, const uint8_t* tr,
                                 i64 a1, i64 a2, i64 a3) noexcept nogil:
    # bit 0: Gamma_1, bit 1: Gamma_2, bit 2: theta1 != 0 with the trace term zero
    cdef i64 ab2 = tbar(F, a2)
    cdef i64 n2 = tnorm(F, a2)
    cdef i64 a1s = fsq(F, a1)
    cdef i64 th1 = 1 ^ a1s ^ n2 ^ tnorm(F, a3)
    if th1 == 0:
        return 0
    cdef i64 th2 = a1 ^ tmul(F, ab2, a3)
    cdef i64 nt2 = tnorm(F, th2)
    cdef i64 it1 = inv[th1]
    if tr[fmul(F, nt2, fsq(F, it1))]:
        return 0
    cdef i64 th3 = ab2 ^ tscale(F, a1, tbar(F, a3))
    cdef i64 th4 = a1s ^ n2
    cdef i64 th1s = fsq(F, th1)
    cdef i64 t2s = tsq(F, th2)
    cdef i64 T = tmul(F, t2s, th3) >> F.m
    cdef uint8_t code = 4
    if (fmul(F, th1s, th4) ^ fmul(F, th1, nt2) ^ T) == 0:
        code |= 1
    if (tscale(F, th1s, th3) ^ tscale(F, th1, tbar(F, t2s)) ^ T) == 0:
        code |= 2
    return code


def theorem_grid(const i64[::1] exp, const i64[::1] log, const i64[::1] inv,
                 const uint8_t[::1] tr, int m, i64 k, i64 a1,
                 const i64[::1] a2s, uint8_t[:, ::1] out):
    """out[i, a3] = theorem code of (a1, a2s[i], a3) for every a3."""
    cdef Fld F
    make_fld(&F, exp, log, m, k)
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n2 = out.shape[1]
    cdef const i64* pinv = &inv[0]
    cdef const uint8_t* ptr = &tr[0]
    with nogil:
        for i in range(a2s.shape[0]):
            for j in range(n2):
                out[i, j] = theorem_code(&F, pinv, ptr, a1, a2s[i], j)


def theorem_triples(const i64[::1] exp, const i64[::1] log, const i64[::1] inv,
                    const uint8_t[::1] tr, int m, i64 k,
                    const i64[::1] a1s, const i64[::1] a2s, const i64[::1] a3s,
                    uint8_t[::1] out):
    cdef Fld F
    make_fld(&F, exp, log, m, k)
    cdef Py_ssize_t i
    with nogil:
        for i in range(a1s.shape[0]):
            out[i] = theorem_code(&F, &inv[0], &tr[0], a1s[i], a2s[i], a3s[i])


def family_apn_witness(const i64[::1] exp, const i64[::1] log, int m, i64 k,
                       const i64[:, ::1] cw, const i64[::1] xb2, const i64[::1] xb,
                       const i64[::1] x2, const i64[::1] a1s, const i64[::1] a2s,
                       const i64[::1] a3s, int32_t[::1] out):
    """For each triple: -1 if every circle point gives a rank 2m-1 kernel map,
    else the index of the first circle point that does not.

    cw rows hold abar^3, abar^2 a, abar a^2, a^3 for each circle point a.
    """
    cdef Fld F
    make_fld(&F, exp, log, m, k)
    cdef int n = 2 * m
    cdef i64 rows[64]
    cdef Py_ssize_t i, c, j
    cdef i64 t1, t2, t3, e1, e2, e3, e4, b
    with nogil:
        for i in range(a1s.shape[0]):
            out[i] = -1
            for c in range(cw.shape[1]):
                t1 = tmul(&F, a1s[i], cw[1, c])
                t2 = tmul(&F, a2s[i], cw[2, c])
                t3 = tmul(&F, a3s[i], cw[3, c])
                e1 = cw[0, c] ^ t1
                e2 = cw[0, c] ^ t2
                e3 = t2 ^ t3
                e4 = t1 ^ t3
                for j in range(n):
                    b = <i64>1 << j
                    rows[j] = (tmul(&F, e1, xb2[b]) ^ tmul(&F, e2, xb[b])
                               ^ tmul(&F, e3, x2[b]) ^ tmul(&F, e4, b))
                if gf2_rank(rows, n) != n - 1:
                    out[i] = <int32_t>c
                    break


def f_tables(const i64[::1] exp, const i64[::1] log, int m, i64 k,
             const i64[:, ::1] ptab, const i64[::1] a1s, const i64[::1] a2s,
             const i64[::1] a3s, i64[:, ::1] out):
    """out[i, x] = f(x) for triple i; ptab rows are xbar^3, xbar^2 x, xbar x^2, x^3."""
    cdef Fld F
    make_fld(&F, exp, log, m, k)
    cdef Py_ssize_t i, x
    with nogil:
        for i in range(a1s.shape[0]):
            for x in range(ptab.shape[1]):
                out[i, x] = (ptab[0, x] ^ tmul(&F, a1s[i], ptab[1, x])
                             ^ tmul(&F, a2s[i], ptab[2, x]) ^ tmul(&F, a3s[i], ptab[3, x]))


def deriv_root_counts(const i64[::1] exp, const i64[::1] log, int m, i64 k,
                      const i64[:, ::1] ptab, const i64[::1] a1s, const i64[::1] a2s,
                      const i64[::1] a3s, const i64[::1] avals, int32_t[:, ::1] out):
    """out[i, t] = #{x : f(a x + a) + f(a x) + f(a) = 0} with a = avals[t]."""
    cdef Fld F
    make_fld(&F, exp, log, m, k)
    cdef Py_ssize_t q2 = ptab.shape[1]
    cdef i64* ft = <i64*>malloc(q2 * sizeof(i64))
    if ft == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, t, x
    cdef i64 a, fa, y
    cdef int32_t cnt
    try:
        with nogil:
            for i in range(a1s.shape[0]):
                for x in range(q2):
                    ft[x] = (ptab[0, x] ^ tmul(&F, a1s[i], ptab[1, x])
                             ^ tmul(&F, a2s[i], ptab[2, x]) ^ tmul(&F, a3s[i], ptab[3, x]))
                for t in range(avals.shape[0]):
                    a = avals[t]
                    fa = ft[a]
                    cnt = 0
                    for x in range(q2):
                        y = tmul(&F, a, x)
                        if (ft[y ^ a] ^ ft[y] ^ fa) == 0:
                            cnt += 1
                    out[i, t] = cnt
    finally:
        free(ft)


def linform_root_counts(const i64[::1] exp, const i64[::1] log, int m, i64 k,
                        const i64[::1] xb2, const i64[::1] xb, const i64[::1] x2,
                        const i64[:, ::1] C, const i64[:, ::1] D, bint has_d,
                        int32_t[:, ::1] out):
    """Root counts of c1 xbar^2 + c2 xbar + c3 x^2 + c4 x over GF(2^2m).

    out[i] = (#roots of C[i], #roots of D[i], #common roots); the last two are 0
    when has_d is false.
    """
    cdef Fld F
    make_fld(&F, exp, log, m, k)
    cdef Py_ssize_t q2 = xb.shape[0]
    cdef Py_ssize_t i, x
    cdef int32_t nc, nd, nb
    cdef bint zc, zd
    with nogil:
        for i in range(C.shape[0]):
            nc = 0
            nd = 0
            nb = 0
            for x in range(q2):
                zc = (tmul(&F, C[i, 0], xb2[x]) ^ tmul(&F, C[i, 1], xb[x])
                      ^ tmul(&F, C[i, 2], x2[x]) ^ tmul(&F, C[i, 3], x)) == 0
                if zc:
                    nc += 1
                if has_d:
                    zd = (tmul(&F, D[i, 0], xb2[x]) ^ tmul(&F, D[i, 1], xb[x])
                          ^ tmul(&F, D[i, 2], x2[x]) ^ tmul(&F, D[i, 3], x)) == 0
                    if zd:
                        nd += 1
                        if zc:
                            nb += 1
            out[i, 0] = nc
            out[i, 1] = nd
            out[i, 2] = nb


def diff_spectrum(const i64[::1] values, i64[::1] hist):
    """hist[c] = number of (a != 0, b) whose derivative equation has c solutions."""
    cdef Py_ssize_t N = values.shape[0]
    cdef int32_t* cnt = <int32_t*>malloc(N * sizeof(int32_t))
    if cnt == NULL:
        raise MemoryError()
    cdef Py_ssize_t a, x
    try:
        with nogil:
            for a in range(1, N):
                memset(cnt, 0, N * sizeof(int32_t))
                for x in range(N):
                    cnt[values[x ^ a] ^ values[x]] += 1
                for x in range(N):
                    hist[cnt[x]] += 1
    finally:
        free(cnt)


def quad_apn_generic(const i64[::1] values, int n):
    """0 if the quadratic table is APN, else the first failing direction a."""
    cdef Py_ssize_t N = values.shape[0]
    cdef i64 rows[64]
    cdef Py_ssize_t a
    cdef int j
    cdef i64 v0 = values[0]
    cdef i64 bad = 0
    with nogil:
        for a in range(1, N):
            for j in range(n):
                rows[j] = values[(<i64>1 << j) ^ a] ^ values[<i64>1 << j] ^ values[a] ^ v0
            if gf2_rank(rows, n) != n - 1:
                bad = a
                break
    return bad


def dsystem_solve(const i64[::1] exp, const i64[::1] log, int m,
                  const i64[:, ::1] coef, i64[:, ::1] out):
    """Search GF(2^m)^3 for (l1, l2, l3) solving the five-equation system.

    coef rows: phi1, theta1, phi2, r4, r3, r2, r1, r0.  out[i] = (found, l1, l2, l3).
    """
    cdef Fld F
    make_fld(&F, exp, log, m, 1)
    cdef i64 q = (<i64>1) << m
    cdef Py_ssize_t i
    cdef i64 l1, l2, l3, p1, t1, p2
    cdef bint found
    with nogil:
        for i in range(coef.shape[1]):
            p1 = coef[0, i]
            t1 = coef[1, i]
            p2 = coef[2, i]
            out[i, 0] = 0
            out[i, 1] = 0
            out[i, 2] = 0
            out[i, 3] = 0
            found = False
            for l1 in range(q):
                if (fsq(&F, l1) ^ fmul(&F, p1, l1)) != coef[3, i]:
                    continue
                for l3 in range(q):
                    if (fsq(&F, l3) ^ fmul(&F, p2, l3)) != coef[7, i]:
                        continue
                    for l2 in range(q):
                        if (fmul(&F, t1, l1) ^ fmul(&F, p1, l2)) != coef[4, i]:
                            continue
                        if (fmul(&F, p2, l2) ^ fmul(&F, t1, l3)) != coef[6, i]:
                            continue
                        if (fmul(&F, p2, l1) ^ fmul(&F, t1, l2) ^ fmul(&F, p1, l3)
                                ^ fsq(&F, l2)) != coef[5, i]:
                            continue
                        found = True
                        out[i, 0] = 1
                        out[i, 1] = l1
                        out[i, 2] = l2
                        out[i, 3] = l3
                        break
                    if found:
                        break
                if found:
                    break


def linform_kernel_dim(const i64[::1] exp, const i64[::1] log, int m, i64 k,
                       const i64[::1] xb2, const i64[::1] xb, const i64[::1] x2,
                       const i64[:, ::1] C, int32_t[::1] out):
    """Kernel dimension over GF(2) of c1 xbar^2 + c2 xbar + c3 x^2 + c4 x."""
    cdef Fld F
    make_fld(&F, exp, log, m, k)
    cdef int n = 2 * m
    cdef i64 rows[64]
    cdef Py_ssize_t i
    cdef int j
    cdef i64 b
    with nogil:
        for i in range(C.shape[0]):
            for j in range(n):
                b = <i64>1 << j
                rows[j] = (tmul(&F, C[i, 0], xb2[b]) ^ tmul(&F, C[i, 1], xb[b])
                           ^ tmul(&F, C[i, 2], x2[b]) ^ tmul(&F, C[i, 3], b))
            out[i] = n - gf2_rank(rows, n)


def linform_kernel_dims(const i64[::1] exp, const i64[::1] log, int m, i64 k,
                        const i64[::1] xb2, const i64[::1] xb, const i64[::1] x2,
                        const i64[:, ::1] C, const i64[:, ::1] D, int32_t[:, ::1] out):
    """Kernel dimensions of the forms C, D and of the pair (C, D) taken together."""
    cdef Fld F
    make_fld(&F, exp, log, m, k)
    cdef int n = 2 * m
    cdef i64 rc[64]
    cdef i64 rd[64]
    cdef i64 rj[64]
    cdef Py_ssize_t i
    cdef int j
    cdef i64 b
    with nogil:
        for i in range(C.shape[0]):
            for j in range(n):
                b = <i64>1 << j
                rc[j] = (tmul(&F, C[i, 0], xb2[b]) ^ tmul(&F, C[i, 1], xb[b])
                         ^ tmul(&F, C[i, 2], x2[b]) ^ tmul(&F, C[i, 3], b))
                rd[j] = (tmul(&F, D[i, 0], xb2[b]) ^ tmul(&F, D[i, 1], xb[b])
                         ^ tmul(&F, D[i, 2], x2[b]) ^ tmul(&F, D[i, 3], b))
                rj[j] = (rc[j] << n) | rd[j]
            out[i, 0] = n - gf2_rank(rc, n)
            out[i, 1] = n - gf2_rank(rd, n)
            out[i, 2] = n - gf2_rank(rj, n)
