"""Brute-force APN and permutation tests."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from quadapn import field as fld
from quadapn import kernels
from quadapn.quad import CoeffTriple, epsilons

MAX_DU_N = 12


@dataclass(frozen=True)
class FuncTable:
    """Values of a function on GF(2^n), indexed by the packed input."""
    n: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != 1 << self.n:
            raise ValueError("table length must be 2^n")


@dataclass(frozen=True)
class DiffProfile:
    du: int
    spectrum: dict = field(default_factory=dict)  # solution count -> number of (a, b)

    @property
    def uniformity(self) -> int:
        return self.du


def gf2_rank(vectors) -> int:
    """Rank over GF(2) of a list of int-encoded bit vectors."""
    pivots = {}
    for v in vectors:
        v = int(v)
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def func_table(ctx, c: CoeffTriple) -> FuncTable:
    vals = kernels.f_tables(ctx, c.a1, c.a2, c.a3)[0]
    return FuncTable(ctx.n, vals)


def differential_uniformity(table: FuncTable) -> DiffProfile:
    if table.n > MAX_DU_N:
        raise ValueError(f"differential spectrum limited to n <= {MAX_DU_N}")
    hist = kernels.diff_spectrum(table.values)
    spec = {int(c): int(h) for c, h in enumerate(hist) if h}
    return DiffProfile(max(spec), spec)


def main_eq_kernel_dim(ctx, c: CoeffTriple, a) -> int:
    """Dimension of the solution space of
    eps1 xbar^2 + eps2 xbar + eps3 x^2 + eps4 x = 0 for a on the unit circle."""
    e = epsilons(ctx, c, a)
    rows = []
    for j in range(ctx.n):
        b = 1 << j
        bb = fld.bar(ctx, b)
        rows.append(fld.t_mul(ctx, e.eps1, fld.t_sq(ctx, bb)) ^ fld.t_mul(ctx, e.eps2, bb)
                    ^ fld.t_mul(ctx, e.eps3, fld.t_sq(ctx, b)) ^ fld.t_mul(ctx, e.eps4, b))
    return ctx.n - gf2_rank(rows)


def family_apn_mask(ctx, a1s, a2s, a3s) -> np.ndarray:
    """Boolean APN flag for every triple; only circle directions are needed
    because f(cx) = c^3 f(x) for c in GF(2^m)."""
    return kernels.family_apn_witness(ctx, a1s, a2s, a3s) < 0


def family_is_apn(ctx, c: CoeffTriple):
    """(True, None) when APN, else (False, a) with a the first failing point
    of the unit circle in its canonical order."""
    if len(c) != 1:
        raise ValueError("family_is_apn takes a single triple; use family_apn_mask")
    w = int(kernels.family_apn_witness(ctx, c.a1, c.a2, c.a3)[0])
    if w < 0:
        return True, None
    return False, int(fld.unit_circle(ctx)[w])


def quad_is_apn_generic(table: FuncTable) -> bool:
    """APN test for any quadratic table: every derivative has a 1-dim kernel."""
    return kernels.quad_apn_generic(table.values, table.n) == 0


def is_permutation(table: FuncTable) -> bool:
    v = np.asarray(table.values)
    return len(np.unique(v)) == len(v)
