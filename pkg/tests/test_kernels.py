import os
import subprocess
import sys

import numpy as np
import pytest

from quadapn import field as fld
from quadapn import kernels

needs_ext = pytest.mark.skipif("compiled" not in kernels.available(), reason="extension not built")


def _both(fn):
    with kernels.use("compiled"):
        a = fn()
    with kernels.use("python"):
        b = fn()
    return a, b


@needs_ext
@pytest.mark.parametrize("m", [3, 4, 5])
def test_backends_agree(m):
    ctx = fld.make_field(m)
    rng = np.random.default_rng(m)
    N = 700
    a1 = rng.integers(0, ctx.q, N)
    a1f = rng.integers(0, ctx.q2, N)
    a2 = rng.integers(0, ctx.q2, N)
    a3 = rng.integers(0, ctx.q2, N)
    C = rng.integers(0, ctx.q2, (N, 4))
    D = rng.integers(0, ctx.q2, (N, 4))
    C[:50, 2:] = 0                         # degenerate forms
    coef = rng.integers(0, ctx.q, (8, N))
    coef[1, :100] = 0
    avals = fld.unit_circle(ctx)[:5]
    calls = {
        "grid": lambda: kernels.theorem_grid(ctx, 3 % ctx.q, np.arange(40)),
        "triples": lambda: kernels.theorem_triples(ctx, a1, a2, a3),
        "witness": lambda: kernels.family_apn_witness(ctx, a1f, a2, a3),
        "tables": lambda: kernels.f_tables(ctx, a1f[:30], a2[:30], a3[:30]),
        "deriv": lambda: kernels.deriv_root_counts(ctx, a1[:30], a2[:30], a3[:30], avals),
        "roots": lambda: kernels.linform_root_counts(ctx, C[:80], D[:80]),
        "dim": lambda: kernels.linform_kernel_dim(ctx, C),
        "dims": lambda: kernels.linform_kernel_dims(ctx, C, D),
        "dsys": lambda: kernels.dsystem_solve(ctx, coef),
        "spectrum": lambda: kernels.diff_spectrum(kernels.f_tables(ctx, 1, 5, 9)[0]),
        "generic": lambda: kernels.quad_apn_generic(kernels.f_tables(ctx, 0, 0, 0)[0], ctx.n),
    }
    for name, fn in calls.items():
        a, b = _both(fn)
        assert np.array_equal(a, b), name


def test_kernel_dims_count_roots(ctx4):
    rng = np.random.default_rng(7)
    C = rng.integers(0, 256, (300, 4))
    D = rng.integers(0, 256, (300, 4))
    C[:40, :2] = 0
    D[:40] = C[:40]
    dims = kernels.linform_kernel_dims(ctx4, C, D)
    roots = kernels.linform_root_counts(ctx4, C, D)
    assert np.array_equal(2 ** dims.astype(np.int64), roots)
    assert np.array_equal(kernels.linform_kernel_dim(ctx4, C), dims[:, 0])


def test_dsystem_solution_satisfies_equations(ctx3):
    """Every reported (l1, l2, l3) solves the five equations; checked by scalar arithmetic."""
    rng = np.random.default_rng(1)
    coef = rng.integers(0, ctx3.q, (8, 3000))
    sol = kernels.dsystem_solve(ctx3, coef)
    mul = lambda a, b: int(fld.gf_mul(ctx3, a, b))
    found = 0
    for j in np.flatnonzero(sol[:, 0]):
        f1, t1, f2, r4, r3, r2, r1, r0 = (int(v) for v in coef[:, j])
        _, l1, l2, l3 = (int(v) for v in sol[j])
        assert mul(l1, l1) ^ mul(f1, l1) == r4
        assert mul(t1, l1) ^ mul(f1, l2) == r3
        assert mul(f2, l1) ^ mul(t1, l2) ^ mul(f1, l3) ^ mul(l2, l2) == r2
        assert mul(f2, l2) ^ mul(t1, l3) == r1
        assert mul(l3, l3) ^ mul(f2, l3) == r0
        found += 1
    assert found > 0


def test_dsystem_unsolvable_is_exhaustive(ctx3):
    rng = np.random.default_rng(4)
    coef = rng.integers(0, ctx3.q, (8, 40))
    sol = kernels.dsystem_solve(ctx3, coef)
    mul = lambda a, b: int(fld.gf_mul(ctx3, a, b))
    for j in np.flatnonzero(sol[:, 0] == 0):
        f1, t1, f2, r4, r3, r2, r1, r0 = (int(v) for v in coef[:, j])
        for l1 in range(8):
            for l2 in range(8):
                for l3 in range(8):
                    assert not (mul(l1, l1) ^ mul(f1, l1) == r4 and mul(t1, l1) ^ mul(f1, l2) == r3
                                and mul(f2, l1) ^ mul(t1, l2) ^ mul(f1, l3) ^ mul(l2, l2) == r2
                                and mul(f2, l2) ^ mul(t1, l3) == r1 and mul(l3, l3) ^ mul(f2, l3) == r0)


def test_shape_checks(ctx3):
    with pytest.raises(ValueError):
        kernels.linform_root_counts(ctx3, np.zeros((2, 3)))
    with pytest.raises(ValueError):
        kernels.dsystem_solve(ctx3, np.zeros((7, 2)))
    with pytest.raises(ValueError):
        kernels.theorem_grid(ctx3, 9, [0])
    with pytest.raises(ValueError):
        kernels.quad_apn_generic(np.arange(10), 3)
    with pytest.raises(ValueError):
        with kernels.use("gpu"):
            pass


def test_env_forces_fallback():
    env = dict(os.environ, QUADAPN_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import quadapn; print(quadapn.backend_name())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env["QUADAPN_BACKEND"] = "fortran"
    bad = subprocess.run([sys.executable, "-c", "import quadapn"], env=env, capture_output=True)
    assert bad.returncode != 0
