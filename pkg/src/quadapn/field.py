"""Arithmetic in GF(2^m) and in its quadratic extension GF(2^2m) = GF(2^m)(w).

Subfield elements are ints below 2^m; bit i is the coefficient of z^i in the
polynomial basis modulo the reduction polynomial.  Extension elements are
packed words ``(x1 << m) | x2`` standing for ``x1*w + x2`` where
``w^2 + w + k = 0`` and ``tr_m(k) = 1``.  A subfield element ``c`` embeds as
the same int ``c``, so bit ``m + i`` of a packed word is the coefficient of
``z^i * w`` and bit ``i`` the coefficient of ``z^i``.

All arithmetic functions accept python ints or numpy integer arrays and
broadcast like numpy ufuncs.  Scalar inputs come back as numpy integers.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

# lowest-weight irreducible of each degree, numerically smallest among those
DEFAULT_POLYS = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}

MIN_M = 2
MAX_M = 16


def clmul_mod(a: int, b: int, poly: int) -> int:
    """Carry-less product of ``a`` and ``b`` reduced modulo ``poly``."""
    deg = poly.bit_length() - 1
    top = 1 << deg
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return r


def poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree at most deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for f in range(2, 1 << (deg // 2 + 1)):
        if poly_mod(poly, f) == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _pow_mod(a: int, e: int, poly: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = clmul_mod(r, a, poly)
        a = clmul_mod(a, a, poly)
        e >>= 1
    return r


class FieldCtx:
    """Immutable description of GF(2^m) and the tower GF(2^2m) = GF(2^m)(w).

    ``exp`` has length ``4q`` with zeros from index ``2q - 2`` on and
    ``log[0] = 2q - 2``, so ``exp[log[a] + log[b]]`` is the product for all
    ``a, b`` including zero, with no branch.
    """

    __slots__ = (
        "m", "n", "q", "q2", "mask", "poly", "k", "gen",
        "exp", "log", "inv", "trace_table", "_cache",
    )

    def __init__(self, m, poly, k, gen, exp, log, inv, trace_table):
        for name, value in (
            ("m", m), ("n", 2 * m), ("q", 1 << m), ("q2", 1 << (2 * m)),
            ("mask", (1 << m) - 1), ("poly", poly), ("k", k), ("gen", gen),
            ("exp", exp), ("log", log), ("inv", inv),
            ("trace_table", trace_table), ("_cache", {}),
        ):
            object.__setattr__(self, name, value)
        for arr in (exp, log, inv, trace_table):
            arr.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("FieldCtx is immutable")

    def __repr__(self):
        return f"FieldCtx(m={self.m}, poly={self.poly:#x}, k={self.k:#x})"

    @property
    def omega(self) -> int:
        return 1 << self.m

    @property
    def omega_bar(self) -> int:
        return (1 << self.m) | 1

    def cached(self, key, build):
        """Per-context memo for derived tables (powers, unit circle, ...)."""
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = build()
            return value


def make_field(m: int, poly: int | None = None, k: int | None = None) -> FieldCtx:
    """Field context for GF(2^m) with its quadratic tower.

    ``k`` defaults to 1 for odd m and to the smallest scalar of trace one
    otherwise.  ``poly`` overrides the built-in reduction polynomial.
    """
    if not isinstance(m, (int, np.integer)) or not MIN_M <= m <= MAX_M:
        raise ValueError(f"unsupported m={m!r}: need {MIN_M} <= m <= {MAX_M}")
    return _make_field(int(m), None if poly is None else int(poly),
                       None if k is None else int(k))


@lru_cache(maxsize=None)
def _make_field(m, poly, k):
    if poly is None:
        poly = DEFAULT_POLYS[m]
    elif poly.bit_length() - 1 != m or not is_irreducible(poly):
        raise ValueError(f"{poly:#x} is not an irreducible polynomial of degree {m}")
    q = 1 << m
    order = q - 1
    factors = _prime_factors(order)
    gen = next(
        g for g in range(2, q)
        if all(_pow_mod(g, order // p, poly) != 1 for p in factors)
    ) if q > 2 else 1

    exp = np.zeros(4 * q, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    x = 1
    for i in range(order):
        exp[i] = x
        log[x] = i
        x = clmul_mod(x, gen, poly)
    exp[order:2 * order] = exp[:order]
    log[0] = 2 * order
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = exp[order - log[1:]]

    # tr_m is GF(2)-linear: tr(a) = parity(a & trmask)
    trmask = 0
    for i in range(m):
        y, t = 1 << i, 0
        for _ in range(m):
            t ^= y
            y = clmul_mod(y, y, poly)
        if t not in (0, 1):
            raise AssertionError("trace left the prime field")
        trmask |= t << i
    bits = np.arange(q, dtype=np.int64) & trmask
    parity = np.zeros(q, dtype=np.uint8)
    for i in range(m):
        parity ^= ((bits >> i) & 1).astype(np.uint8)

    if k is None:
        k = 1 if m % 2 else int(np.flatnonzero(parity)[0])
    if not 0 <= k < q or parity[k] != 1:
        raise ValueError(f"k={k:#x} must be an element of GF(2^{m}) with trace 1")
    return FieldCtx(m, poly, k, gen, exp, log, inv, parity)


# ---------------------------------------------------------------- subfield


def gf_add(ctx, a, b):
    return a ^ b


def gf_mul(ctx, a, b):
    return ctx.exp[ctx.log[a] + ctx.log[b]]


def gf_sq(ctx, a):
    return ctx.exp[2 * ctx.log[a]]


def gf_inv(ctx, a):
    if np.any(np.asarray(a) == 0):
        raise ZeroDivisionError("inverse of zero in GF(2^m)")
    return ctx.inv[a]


def gf_div(ctx, a, b):
    return gf_mul(ctx, a, gf_inv(ctx, b))


def gf_pow(ctx, a, e: int):
    if e < 0:
        return gf_pow(ctx, gf_inv(ctx, a), -e)
    a = np.asarray(a)
    if e == 0:
        return np.ones_like(a)[()]
    r = ctx.exp[(ctx.log[a] * e) % (ctx.q - 1)]
    return np.where(a == 0, 0, r)[()]


def tr_m(ctx, a):
    """Absolute trace GF(2^m) -> GF(2) as 0/1."""
    return ctx.trace_table[a]


# ---------------------------------------------------------------- tower


def split(ctx, x):
    """Coordinates (x1, x2) of x = x1*w + x2."""
    return x >> ctx.m, x & ctx.mask


def join(ctx, x1, x2):
    return (x1 << ctx.m) | x2


def t_add(ctx, x, y):
    return x ^ y


def t_mul(ctx, x, y):
    """(x1 w + x2)(y1 w + y2) = (x1y2 + x2y1 + x1y1) w + (x2y2 + k x1y1)."""
    m, mask, exp, log = ctx.m, ctx.mask, ctx.exp, ctx.log
    lx1, lx2 = log[x >> m], log[x & mask]
    ly1, ly2 = log[y >> m], log[y & mask]
    p = exp[lx1 + ly1]
    hi = exp[lx1 + ly2] ^ exp[lx2 + ly1] ^ p
    lo = exp[lx2 + ly2] ^ exp[log[p] + log[ctx.k]]
    return (hi << m) | lo


def t_sq(ctx, x):
    x1, x2 = split(ctx, x)
    s1 = gf_sq(ctx, x1)
    return (s1 << ctx.m) | (gf_mul(ctx, ctx.k, s1) ^ gf_sq(ctx, x2))


def t_scale(ctx, c, x):
    """Subfield scalar c times tower element x."""
    x1, x2 = split(ctx, x)
    return (gf_mul(ctx, c, x1) << ctx.m) | gf_mul(ctx, c, x2)


def bar(ctx, x):
    """Frobenius x -> x^(2^m): (x1, x2) -> (x1, x1 + x2)."""
    return x ^ (x >> ctx.m)


def t_norm(ctx, x):
    """x * bar(x) = k x1^2 + x1 x2 + x2^2, a subfield element."""
    x1, x2 = split(ctx, x)
    return gf_mul(ctx, ctx.k, gf_sq(ctx, x1)) ^ gf_mul(ctx, x1, x2) ^ gf_sq(ctx, x2)


def rel_trace(ctx, x):
    """x + bar(x), which equals the w-coordinate x1."""
    return x >> ctx.m


def abs_trace(ctx, x):
    """Absolute trace of GF(2^2m), tr_m(x + bar(x))."""
    return ctx.trace_table[x >> ctx.m]


def in_subfield(ctx, x):
    return (x >> ctx.m) == 0


def t_inv(ctx, x):
    if np.any(np.asarray(x) == 0):
        raise ZeroDivisionError("inverse of zero in GF(2^2m)")
    return t_scale(ctx, ctx.inv[t_norm(ctx, x)], bar(ctx, x))


def t_inv0(ctx, x):
    """Like t_inv but maps 0 to 0; for masked vector code."""
    return t_scale(ctx, ctx.inv[t_norm(ctx, x)], bar(ctx, x))


def t_div(ctx, x, y):
    return t_mul(ctx, x, t_inv(ctx, y))


def t_pow(ctx, x, e: int):
    if e < 0:
        return t_pow(ctx, t_inv(ctx, x), -e)
    x = np.asarray(x, dtype=np.int64)
    r = np.ones_like(x)
    while e:
        if e & 1:
            r = t_mul(ctx, r, x)
        e >>= 1
        if e:
            x = t_sq(ctx, x)
    return r[()]


def t_sqrt(ctx, x):
    """x^(2^(2m-1)), the unique square root."""
    x = np.asarray(x, dtype=np.int64)
    for _ in range(2 * ctx.m - 1):
        x = t_sq(ctx, x)
    return x[()]


# ---------------------------------------------------------------- unit circle


def a_from_A(ctx, A):
    """The a in mu_{2^m+1} \\ {1} with a^2 = (A + w) / (A + bar(w))."""
    A = np.asarray(A, dtype=np.int64)
    num = ctx.omega | A
    den = ctx.omega | (A ^ 1)
    return t_sqrt(ctx, t_mul(ctx, num, t_inv(ctx, den)))


def A_from_a(ctx, a):
    """Inverse of a_from_A: A = (w + s bar(w)) / (s + 1) with s = a^2."""
    a = np.asarray(a, dtype=np.int64)
    if np.any(a == 1):
        raise ValueError("a = 1 has no A-parameter")
    s = t_sq(ctx, a)
    A = t_mul(ctx, ctx.omega ^ t_mul(ctx, s, ctx.omega_bar), t_inv(ctx, s ^ 1))
    if np.any(A >> ctx.m):
        raise ValueError("argument is not on the unit circle")
    return A[()]


def unit_circle(ctx) -> np.ndarray:
    """All x with x * bar(x) = 1: first 1, then a_from_A(A) for A = 0, 1, ..."""
    def build():
        circle = np.empty(ctx.q + 1, dtype=np.int64)
        circle[0] = 1
        circle[1:] = a_from_A(ctx, np.arange(ctx.q, dtype=np.int64))
        circle.setflags(write=False)
        return circle
    return ctx.cached("unit_circle", build)


def on_unit_circle(ctx, a):
    return t_mul(ctx, a, bar(ctx, a)) == 1


# ---------------------------------------------------------------- equations


def _xor_basis_solve(images: list[int], target: int) -> int | None:
    """Find y with sum_{i in y} images[i] == target over GF(2), or None."""
    pivots: dict[int, tuple[int, int]] = {}
    for i, v in enumerate(images):
        pre = 1 << i
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = (v, pre)
                break
            pv, pp = pivots[top]
            v ^= pv
            pre ^= pp
    y = 0
    while target:
        top = target.bit_length() - 1
        if top not in pivots:
            return None
        pv, pp = pivots[top]
        target ^= pv
        y ^= pp
    return y


def solve_artin_schreier(ctx, c) -> frozenset[int]:
    """All y in GF(2^m) with y^2 + y = c; empty when tr_m(c) = 1."""
    c = int(c)
    if tr_m(ctx, c):
        return frozenset()
    if ctx.m % 2:
        # half-trace
        y, t = 0, c
        for _ in range((ctx.m + 1) // 2):
            y ^= t
            t = int(gf_sq(ctx, gf_sq(ctx, t)))
    else:
        images = [int(gf_sq(ctx, 1 << i)) ^ (1 << i) for i in range(ctx.m)]
        y = _xor_basis_solve(images, c)
        if y is None:
            raise AssertionError("trace-zero right side without a root")
    return frozenset({y, y ^ 1})


# ---------------------------------------------------------------- text encoding


def fmt_sub(a) -> str:
    return format(int(a), "x")


def fmt_tower(ctx, x) -> str:
    x = int(x)
    return f"{x >> ctx.m:x}:{x & ctx.mask:x}"


def parse_sub(ctx, text: str) -> int:
    v = int(text, 16)
    if not 0 <= v < ctx.q:
        raise ValueError(f"{text!r} is not an element of GF(2^{ctx.m})")
    return v


def parse_tower(ctx, text: str) -> int:
    """Parse ``"x1:x2"`` (hex coordinates) or a bare hex subfield element."""
    if ":" in text:
        hi, lo = text.split(":", 1)
        return join(ctx, parse_sub(ctx, hi), parse_sub(ctx, lo))
    return parse_sub(ctx, text)
