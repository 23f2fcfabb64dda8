"""Backend selection for the hot loops.

The compiled module ``quadapn._ext`` is used when it imports; otherwise the
numpy fallback ``quadapn._pyimpl`` takes over.  Setting ``QUADAPN_BACKEND=python``
forces the fallback.  The helpers here take a FieldCtx and numpy arrays and
hide the raw table plumbing from the rest of the package.
"""
from __future__ import annotations

import contextlib
import os

import numpy as np

from quadapn import _pyimpl
from quadapn import field as fld

try:
    from quadapn import _ext
except ImportError:  # pragma: no cover - exercised only without a build
    _ext = None

BACKENDS = {"python": _pyimpl}
if _ext is not None:
    BACKENDS["compiled"] = _ext

_forced = os.environ.get("QUADAPN_BACKEND", "").strip().lower()
if _forced and _forced not in ("python", "compiled"):
    raise ImportError(f"QUADAPN_BACKEND={_forced!r}: expected 'python' or 'compiled'")
if _forced == "compiled" and _ext is None:
    raise ImportError("QUADAPN_BACKEND=compiled but quadapn._ext is not built")
_active = "python" if _forced == "python" or _ext is None else "compiled"


def backend_name() -> str:
    return _active


def available() -> list[str]:
    return sorted(BACKENDS)


@contextlib.contextmanager
def use(name: str):
    """Temporarily switch backend (tests and benchmarks)."""
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available()}")
    old, _active = _active, name
    try:
        yield
    finally:
        _active = old


def _impl():
    return BACKENDS[_active]


def _i64(x):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.int64)))


# ---------------------------------------------------------------- tables

MAX_TABLE_M = 10


def power_tables(ctx):
    """Tables over GF(2^2m): xbar^2, xbar, x^2 and the four cubic monomials."""
    if ctx.m > MAX_TABLE_M:
        raise ValueError(f"power tables need m <= {MAX_TABLE_M}")

    def build():
        x = np.arange(ctx.q2, dtype=np.int64)
        xb = fld.bar(ctx, x)
        xb2 = fld.t_sq(ctx, xb)
        x2 = fld.t_sq(ctx, x)
        ptab = np.stack([
            fld.t_mul(ctx, xb2, xb),
            fld.t_mul(ctx, xb2, x),
            fld.t_mul(ctx, xb, x2),
            fld.t_mul(ctx, x2, x),
        ])
        for t in (xb, xb2, x2, ptab):
            t.setflags(write=False)
        return {"xb": xb, "xb2": xb2, "x2": x2, "ptab": np.ascontiguousarray(ptab)}

    return ctx.cached("power_tables", build)


def circle_weights(ctx):
    """Rows abar^3, abar^2 a, abar a^2, a^3 for each point of the unit circle."""
    def build():
        a = fld.unit_circle(ctx)
        ab = fld.bar(ctx, a)
        ab2, a2 = fld.t_sq(ctx, ab), fld.t_sq(ctx, a)
        cw = np.ascontiguousarray(np.stack([
            fld.t_mul(ctx, ab2, ab), fld.t_mul(ctx, ab2, a),
            fld.t_mul(ctx, ab, a2), fld.t_mul(ctx, a2, a),
        ]))
        cw.setflags(write=False)
        return cw
    return ctx.cached("circle_weights", build)


# ---------------------------------------------------------------- wrappers

GAMMA1_BIT = 1
GAMMA2_BIT = 2
PRECOND_BIT = 4


def theorem_grid(ctx, a1: int, a2s) -> np.ndarray:
    """Theorem codes for (a1, a2, a3) over all a3; shape (len(a2s), 2^2m)."""
    if not 0 <= int(a1) < ctx.q:
        raise ValueError("theorem kernels need a1 in the subfield")
    a2s = _i64(a2s)
    out = np.zeros((len(a2s), ctx.q2), dtype=np.uint8)
    _impl().theorem_grid(ctx.exp, ctx.log, ctx.inv, ctx.trace_table,
                         ctx.m, ctx.k, int(a1), a2s, out)
    return out


def theorem_triples(ctx, a1s, a2s, a3s) -> np.ndarray:
    a1s, a2s, a3s = np.broadcast_arrays(_i64(a1s), _i64(a2s), _i64(a3s))
    a1s, a2s, a3s = (np.ascontiguousarray(v) for v in (a1s, a2s, a3s))
    if np.any(a1s >> ctx.m):
        raise ValueError("theorem kernels need a1 in the subfield")
    out = np.zeros(len(a1s), dtype=np.uint8)
    _impl().theorem_triples(ctx.exp, ctx.log, ctx.inv, ctx.trace_table,
                            ctx.m, ctx.k, a1s, a2s, a3s, out)
    return out


def _triples(a1s, a2s, a3s):
    a1s, a2s, a3s = np.broadcast_arrays(_i64(a1s), _i64(a2s), _i64(a3s))
    return tuple(np.ascontiguousarray(v) for v in (a1s, a2s, a3s))


def family_apn_witness(ctx, a1s, a2s, a3s) -> np.ndarray:
    """-1 per APN triple, else index (into unit_circle) of a failing point."""
    a1s, a2s, a3s = _triples(a1s, a2s, a3s)
    pt = power_tables(ctx)
    out = np.zeros(len(a1s), dtype=np.int32)
    _impl().family_apn_witness(ctx.exp, ctx.log, ctx.m, ctx.k, circle_weights(ctx),
                               pt["xb2"], pt["xb"], pt["x2"], a1s, a2s, a3s, out)
    return out


def f_tables(ctx, a1s, a2s, a3s) -> np.ndarray:
    a1s, a2s, a3s = _triples(a1s, a2s, a3s)
    pt = power_tables(ctx)
    out = np.zeros((len(a1s), ctx.q2), dtype=np.int64)
    _impl().f_tables(ctx.exp, ctx.log, ctx.m, ctx.k, pt["ptab"], a1s, a2s, a3s, out)
    return out


def deriv_root_counts(ctx, a1s, a2s, a3s, avals) -> np.ndarray:
    a1s, a2s, a3s = _triples(a1s, a2s, a3s)
    avals = _i64(avals)
    pt = power_tables(ctx)
    out = np.zeros((len(a1s), len(avals)), dtype=np.int32)
    _impl().deriv_root_counts(ctx.exp, ctx.log, ctx.m, ctx.k, pt["ptab"],
                              a1s, a2s, a3s, avals, out)
    return out


def linform_root_counts(ctx, C, D=None) -> np.ndarray:
    """Rows (roots of C, roots of D, common roots) for c1 xbar^2 + c2 xbar + c3 x^2 + c4 x."""
    C = np.ascontiguousarray(np.atleast_2d(np.asarray(C, dtype=np.int64)))
    has_d = D is not None
    D = C if D is None else np.ascontiguousarray(np.atleast_2d(np.asarray(D, dtype=np.int64)))
    if C.shape[1] != 4 or D.shape != C.shape:
        raise ValueError("coefficient arrays must have shape (N, 4)")
    pt = power_tables(ctx)
    out = np.zeros((len(C), 3), dtype=np.int32)
    _impl().linform_root_counts(ctx.exp, ctx.log, ctx.m, ctx.k, pt["xb2"], pt["xb"],
                                pt["x2"], C, D, has_d, out)
    return out


def diff_spectrum(values) -> np.ndarray:
    values = _i64(values)
    N = len(values)
    hist = np.zeros(N + 1, dtype=np.int64)
    _impl().diff_spectrum(values, hist)
    return hist


def quad_apn_generic(values, n: int) -> int:
    values = _i64(values)
    if len(values) != 1 << n:
        raise ValueError("table length must be 2^n")
    return int(_impl().quad_apn_generic(values, int(n)))


def dsystem_solve(ctx, coef) -> np.ndarray:
    """coef has rows phi1, theta1, phi2, r4, r3, r2, r1, r0; see ``dsystem_solve``."""
    coef = np.ascontiguousarray(np.atleast_2d(np.asarray(coef, dtype=np.int64)))
    if coef.shape[0] != 8:
        raise ValueError("need eight coefficient rows")
    out = np.zeros((coef.shape[1], 4), dtype=np.int64)
    _impl().dsystem_solve(ctx.exp, ctx.log, ctx.m, coef, out)
    return out


def linform_kernel_dim(ctx, C) -> np.ndarray:
    """GF(2) kernel dimension of c1 xbar^2 + c2 xbar + c3 x^2 + c4 x per row of C."""
    C = np.ascontiguousarray(np.atleast_2d(np.asarray(C, dtype=np.int64)))
    if C.shape[1] != 4:
        raise ValueError("coefficient array must have shape (N, 4)")
    pt = power_tables(ctx)
    out = np.zeros(len(C), dtype=np.int32)
    _impl().linform_kernel_dim(ctx.exp, ctx.log, ctx.m, ctx.k, pt["xb2"], pt["xb"],
                               pt["x2"], C, out)
    return out


def linform_kernel_dims(ctx, C, D) -> np.ndarray:
    """Rows (dim ker C, dim ker D, dim of the common kernel)."""
    C = np.ascontiguousarray(np.atleast_2d(np.asarray(C, dtype=np.int64)))
    D = np.ascontiguousarray(np.atleast_2d(np.asarray(D, dtype=np.int64)))
    if C.shape[1] != 4 or D.shape != C.shape:
        raise ValueError("coefficient arrays must have shape (N, 4)")
    pt = power_tables(ctx)
    out = np.zeros((len(C), 3), dtype=np.int32)
    _impl().linform_kernel_dims(ctx.exp, ctx.log, ctx.m, ctx.k, pt["xb2"], pt["xb"],
                                pt["x2"], C, D, out)
    return out
