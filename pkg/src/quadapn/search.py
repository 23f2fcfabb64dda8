"""Enumeration engine, cross-validation, spectra and invariant buckets.

The coefficient space is split into shards by ``a2 mod shards``.  Each shard
is processed independently and produces one JSON-able record; the report is
the merge of those records in shard order, so merging is associative and a
resumed run gives the same report as an uninterrupted one.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from quadapn import field as fld
from quadapn import kernels
from quadapn.apncore import FuncTable, differential_uniformity, is_permutation
from quadapn.characterize import in_theorem_range
from quadapn.quad import CoeffTriple, normalize_a1

METHODS = ("theorem", "bruteforce", "both")
A1_DOMAINS = ("subfield", "full")
MAX_BRUTEFORCE_M = 5
MAX_THEOREM_M = 8
MAX_LITERAL_FULL_M = 4
MAX_STORED_MISMATCHES = 100
BLOCK_CELLS = 1 << 21          # theorem grid cells handled per kernel call
CSV_HEADER = ("m", "a1", "a2", "a3", "theorem", "gamma1", "gamma2")


class CostGuardError(ValueError):
    """The requested run is above the default size limits; pass force=True."""


class CheckpointError(RuntimeError):
    """The checkpoint file belongs to a different search."""


@dataclass(frozen=True)
class SearchSpec:
    m: int
    method: str = "theorem"
    a1_domain: str = "subfield"
    shards: int = 1
    shard_indices: tuple | None = None
    checkpoint: str | None = None
    dump: str | None = None
    sample: int | None = None
    seed: int = 0
    force: bool = False
    workers: int = 1
    k: int | None = None
    poly: int | None = None
    timing: bool = True
    full_mode: str = "auto"     # literal | fiber | auto

    def validate(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.a1_domain not in A1_DOMAINS:
            raise ValueError(f"a1_domain must be one of {A1_DOMAINS}")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")
        for i in self.selected_shards():
            if not 0 <= i < self.shards:
                raise ValueError(f"shard index {i} outside 0..{self.shards - 1}")
        if self.full_mode not in ("literal", "fiber", "auto"):
            raise ValueError("full_mode must be literal, fiber or auto")
        if self.sample is not None and self.sample < 1:
            raise ValueError("sample must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not self.force:
            if self.method != "theorem" and self.m > MAX_BRUTEFORCE_M:
                raise CostGuardError(f"brute force above m={MAX_BRUTEFORCE_M} needs force")
            if self.m > MAX_THEOREM_M:
                raise CostGuardError(f"enumeration above m={MAX_THEOREM_M} needs force")
            if self.literal_full() and self.m > MAX_LITERAL_FULL_M:
                raise CostGuardError(f"literal full-domain runs above m={MAX_LITERAL_FULL_M} need force")
        return self

    def selected_shards(self):
        if self.shard_indices is None:
            return tuple(range(self.shards))
        return tuple(sorted(set(self.shard_indices)))

    def literal_full(self) -> bool:
        if self.a1_domain != "full" or self.sample is not None:
            return False
        if self.full_mode == "auto":
            return self.m <= MAX_LITERAL_FULL_M
        return self.full_mode == "literal"

    def fingerprint(self) -> dict:
        """Fields that decide the result; the checkpoint must match them."""
        d = asdict(self)
        for key in ("checkpoint", "dump", "workers", "timing", "shard_indices", "force"):
            d.pop(key)
        d["literal_full"] = self.literal_full()
        return d


@dataclass
class SearchReport:
    spec: dict
    convention: str
    total_checked: int = 0
    apn_count: int | None = None
    apn_count_bruteforce: int | None = None
    mismatch_count: int = 0
    mismatches: list = field(default_factory=list)
    apn_by_a1: dict = field(default_factory=dict)
    shards: list = field(default_factory=list)
    in_theorem_range: bool = True
    elapsed_seconds: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.mismatch_count == 0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class SpectrumRecord:
    label: str
    differential: dict
    walsh: dict                 # signed value -> multiplicity over a, b != 0
    extended_walsh: dict        # |value| -> multiplicity
    parseval_ok: bool
    plateaued: bool

    def key(self):
        return (tuple(sorted(self.differential.items())),
                tuple(sorted(self.extended_walsh.items())))


# ---------------------------------------------------------------- blocks


def shard_a2(ctx, spec: SearchSpec, shard: int) -> np.ndarray:
    return np.arange(shard, ctx.q2, spec.shards, dtype=np.int64)


def iter_shard_blocks(ctx, spec: SearchSpec, shard: int):
    """Yield (a1, a2s) pairs; each stands for every (a1, a2, a3) with a2 in
    a2s and a3 over all of GF(2^2m).  a1 runs over GF(2^m) or, for literal
    full-domain runs, over GF(2^2m)."""
    a2 = shard_a2(ctx, spec, shard)
    rows = max(1, BLOCK_CELLS // ctx.q2)
    a1_range = ctx.q2 if spec.literal_full() else ctx.q
    for a1 in range(a1_range):
        for s in range(0, len(a2), rows):
            yield a1, a2[s:s + rows]


def _norm_factor(ctx, a1: int):
    """(a1 normalised into GF(2^m), u) with a1 u in the subfield; see normalize_a1."""
    c, b = normalize_a1(ctx, CoeffTriple(np.int64(a1), np.int64(0), np.int64(0)))
    b = int(b)
    u = int(fld.t_mul(ctx, b, fld.t_inv(ctx, fld.bar(ctx, b))))
    return int(c.a1), u


def _verdict(ctx, codes):
    g1 = (codes & kernels.GAMMA1_BIT) != 0
    g2 = (codes & kernels.GAMMA2_BIT) != 0
    return (g1 | g2) if ctx.m % 2 == 0 else g1, g1, g2


def _process_block(ctx, spec, a1, a2s):
    """Verdicts on the grid a2s x GF(2^2m) for one a1 value; rows/cols are the
    caller's coordinates even when a1 had to be normalised first."""
    a3 = np.arange(ctx.q2, dtype=np.int64)
    if a1 >> ctx.m:
        a1n, u = _norm_factor(ctx, a1)
        u2 = int(fld.t_sq(ctx, u))
        u3 = int(fld.t_mul(ctx, u2, u))
        a2n = fld.t_mul(ctx, a2s, u2)
        a3n = fld.t_mul(ctx, a3, u3)
    else:
        a1n, a2n, a3n = a1, a2s, a3
    out = {}
    need_codes = spec.method != "bruteforce" or spec.dump is not None
    if need_codes:
        codes = kernels.theorem_grid(ctx, a1n, a2n)[:, a3n]
        out["theorem"], out["gamma1"], out["gamma2"] = _verdict(ctx, codes)
    if spec.method != "theorem":
        # the circle test is valid for any a1, so brute force sees the raw triple
        A2, A3 = np.meshgrid(a2s, a3, indexing="ij")
        w = kernels.family_apn_witness(ctx, np.int64(a1), A2.ravel(), A3.ravel())
        out["bruteforce"] = (w < 0).reshape(A2.shape)
    return out


def _mismatch_records(ctx, a1, a2s, res):
    bad = res["theorem"] != res["bruteforce"]
    recs = []
    for i, j in zip(*np.nonzero(bad)):
        recs.append({"a1": fld.fmt_tower(ctx, a1) if a1 >> ctx.m else fld.fmt_sub(a1),
                     "a2": fld.fmt_tower(ctx, a2s[i]), "a3": fld.fmt_tower(ctx, j),
                     "theorem": bool(res["theorem"][i, j]),
                     "bruteforce": bool(res["bruteforce"][i, j])})
    return recs, int(bad.sum())


def _dump_rows(ctx, a1, a2s, res, primary):
    i, j = np.nonzero(primary)
    a1s = fld.fmt_tower(ctx, a1) if a1 >> ctx.m else fld.fmt_sub(a1)
    for r, c in zip(i, j):
        yield (ctx.m, a1s, fld.fmt_tower(ctx, a2s[r]), fld.fmt_tower(ctx, c),
               int(res["theorem"][r, c]), int(res["gamma1"][r, c]), int(res["gamma2"][r, c]))


def _primary(spec, res):
    return res["bruteforce"] if spec.method == "bruteforce" else res["theorem"]


def run_shard(ctx, spec: SearchSpec, shard: int) -> dict:
    """Process one shard and return its record (plus dump rows, if asked)."""
    rec = {"shard": shard, "total": 0, "apn_count": 0, "done": False,
           "apn_count_bruteforce": 0 if spec.method == "both" else None,
           "apn_by_a1": {}, "mismatch_count": 0, "mismatches": []}
    rows = [] if spec.dump else None
    by_a1 = Counter()
    for a1, a2s in iter_shard_blocks(ctx, spec, shard):
        res = _process_block(ctx, spec, a1, a2s)
        prim = _primary(spec, res)
        n = int(prim.sum())
        rec["total"] += prim.size
        rec["apn_count"] += n
        by_a1[a1] += n
        if spec.method == "both":
            rec["apn_count_bruteforce"] += int(res["bruteforce"].sum())
            recs, nbad = _mismatch_records(ctx, a1, a2s, res)
            rec["mismatch_count"] += nbad
            room = MAX_STORED_MISMATCHES - len(rec["mismatches"])
            rec["mismatches"].extend(recs[:max(room, 0)])
        if rows is not None:
            mask = prim | res.get("theorem", prim) | res.get("bruteforce", prim)
            rows.extend(_dump_rows(ctx, a1, a2s, res, mask))
    rec["apn_by_a1"] = {str(k): v for k, v in sorted(by_a1.items())}
    rec["done"] = True
    return rec, rows


# ---------------------------------------------------------------- checkpoint


def _read_checkpoint(path, fingerprint):
    if not path or not os.path.exists(path):
        return {}
    with open(path) as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or lines[0].get("spec") != fingerprint:
        raise CheckpointError(f"{path} was written for a different search")
    return {r["shard"]: r for r in lines[1:] if r.get("done")}


def _write_atomic(path, text):
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _write_checkpoint(path, fingerprint, records):
    lines = [json.dumps({"spec": fingerprint}, sort_keys=True)]
    lines += [json.dumps(records[s], sort_keys=True) for s in sorted(records)]
    _write_atomic(path, "\n".join(lines) + "\n")


def _part_path(dump, shard):
    return f"{dump}.part{shard}"


def _write_part(dump, shard, rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    _write_atomic(_part_path(dump, shard), buf.getvalue())


def _assemble_dump(dump, shards):
    with open(f"{dump}.tmp", "w") as out:
        out.write(",".join(CSV_HEADER) + "\n")
        for s in shards:
            with open(_part_path(dump, s)) as fh:
                out.write(fh.read())
    os.replace(f"{dump}.tmp", dump)
    for s in shards:
        os.remove(_part_path(dump, s))


# ---------------------------------------------------------------- enumerate


def _fiber_weights(ctx) -> Counter:
    """How many a1 in GF(2^2m) normalise to each value of GF(2^m)."""
    def build():
        return Counter(_norm_factor(ctx, a1)[0] for a1 in range(ctx.q2))
    return ctx.cached("fiber_weights", build)


def _convention(spec) -> str:
    if spec.a1_domain == "subfield":
        return "a1 in GF(2^m), a2 and a3 in GF(2^2m)"
    how = "literal" if spec.literal_full() else "fiber-weighted"
    return f"a1 in GF(2^2m) normalised into GF(2^m) ({how}), a2 and a3 in GF(2^2m)"


def _sampled(ctx, spec, t0) -> SearchReport:
    rng = np.random.default_rng(spec.seed)     # PCG64, numpy's default generator
    hi = ctx.q2 if spec.a1_domain == "full" else ctx.q
    a1 = rng.integers(0, hi, spec.sample, dtype=np.int64)
    a2 = rng.integers(0, ctx.q2, spec.sample, dtype=np.int64)
    a3 = rng.integers(0, ctx.q2, spec.sample, dtype=np.int64)
    c, _ = normalize_a1(ctx, CoeffTriple(a1, a2, a3))
    rep = SearchReport(spec=_spec_echo(spec), convention=_convention(spec) + " [sampled]",
                       in_theorem_range=in_theorem_range(ctx))
    th = bf = None
    if spec.method != "bruteforce":
        th, _, _ = _verdict(ctx, kernels.theorem_triples(ctx, c.a1, c.a2, c.a3))
    if spec.method != "theorem":
        bf = kernels.family_apn_witness(ctx, c.a1, c.a2, c.a3) < 0
    rep.total_checked = int(spec.sample)
    rep.apn_count = int((bf if th is None else th).sum())
    if th is not None and bf is not None:
        rep.apn_count_bruteforce = int(bf.sum())
        bad = np.flatnonzero(th != bf)
        rep.mismatch_count = len(bad)
        rep.mismatches = [{"a1": fld.fmt_tower(ctx, a1[i]), "a2": fld.fmt_tower(ctx, a2[i]),
                           "a3": fld.fmt_tower(ctx, a3[i]), "theorem": bool(th[i]),
                           "bruteforce": bool(bf[i])} for i in bad[:MAX_STORED_MISMATCHES]]
    rep.elapsed_seconds = round(time.perf_counter() - t0, 3) if spec.timing else None
    return rep


def _spec_echo(spec) -> dict:
    d = asdict(spec)
    d["shard_indices"] = list(spec.selected_shards())
    return d


def enumerate_triples(ctx, spec: SearchSpec, progress=None) -> SearchReport:
    """Count APN triples of the family under ``spec``; see SearchSpec."""
    spec.validate()
    if ctx.m != spec.m:
        raise ValueError("spec.m does not match the field")
    t0 = time.perf_counter()
    if spec.sample is not None:
        return _sampled(ctx, spec, t0)
    fp = spec.fingerprint()
    done = _read_checkpoint(spec.checkpoint, fp)
    todo = [s for s in spec.selected_shards() if s not in done]
    records = dict(done)

    def work(s):
        return s, run_shard(ctx, spec, s)

    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        for s, (rec, rows) in pool.map(work, todo):
            # the main thread is the only writer of the checkpoint and dump parts
            if spec.dump:
                _write_part(spec.dump, s, rows)
            records[s] = rec
            if spec.checkpoint:
                _write_checkpoint(spec.checkpoint, fp, records)
            if progress:
                progress(rec)
    chosen = spec.selected_shards()
    if spec.dump:
        _assemble_dump(spec.dump, chosen)
    return _merge(ctx, spec, [records[s] for s in chosen], t0)


def _merge(ctx, spec, recs, t0) -> SearchReport:
    rep = SearchReport(spec=_spec_echo(spec), convention=_convention(spec),
                       in_theorem_range=in_theorem_range(ctx))
    by_a1 = Counter()
    for r in recs:
        rep.total_checked += r["total"]
        rep.apn_count = (rep.apn_count or 0) + r["apn_count"]
        if r["apn_count_bruteforce"] is not None:
            rep.apn_count_bruteforce = (rep.apn_count_bruteforce or 0) + r["apn_count_bruteforce"]
        rep.mismatch_count += r["mismatch_count"]
        room = MAX_STORED_MISMATCHES - len(rep.mismatches)
        rep.mismatches.extend(r["mismatches"][:max(room, 0)])
        by_a1.update({int(k): v for k, v in r["apn_by_a1"].items()})
        rep.shards.append({k: r[k] for k in ("shard", "total", "apn_count", "done")})
    if spec.a1_domain == "full" and not spec.literal_full():
        # every a1 in GF(2^2m) maps to its normalised value by a bijection of
        # the (a2, a3) plane that preserves APN-ness, so each subfield slice
        # counts once per preimage
        w = _fiber_weights(ctx)
        rep.details["fiber_weights"] = {str(k): v for k, v in sorted(w.items())}
        rep.details["subfield_apn_count"] = rep.apn_count
        rep.apn_count = sum(w[a] * n for a, n in by_a1.items())
        if rep.apn_count_bruteforce is not None:
            rep.details["subfield_apn_count_bruteforce"] = rep.apn_count_bruteforce
            rep.apn_count_bruteforce = None
        rep.total_checked *= ctx.q2 // ctx.q
        rep.details["total_checked_note"] = "fiber-weighted; the slices tested are the subfield ones"
    rep.apn_by_a1 = {str(k): v for k, v in sorted(by_a1.items())}
    rep.elapsed_seconds = round(time.perf_counter() - t0, 3) if spec.timing else None
    return rep


# ---------------------------------------------------------------- crosscheck


def crosscheck(ctx, sample_size: int = 1000, seed: int = 0, du_samples: int = 64,
               workers: int = 1) -> SearchReport:
    """Theorem verdict against the brute-force APN test.

    m <= 4: every subfield triple, both methods.  m = 5: all theorem positives
    are brute-forced and checked to be non-permutations, plus ``sample_size``
    random triples compared both ways.  Below m = 4 the result is reported,
    tagged out of the theorem's range.
    """
    if ctx.m > MAX_BRUTEFORCE_M:
        raise CostGuardError(f"crosscheck needs m <= {MAX_BRUTEFORCE_M}")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    if ctx.m <= 4:
        spec = SearchSpec(m=ctx.m, method="both", workers=workers, timing=False)
        rep = enumerate_triples(ctx, spec)
        pos = _positives(ctx)
    else:
        spec = SearchSpec(m=ctx.m, method="theorem", workers=workers, timing=False)
        rep = enumerate_triples(ctx, spec)
        pos = _positives(ctx)
        bf = kernels.family_apn_witness(ctx, *pos) < 0
        rep.details["positives_bruteforce_confirmed"] = int(bf.sum())
        perms = [i for i in range(len(pos[0]))
                 if is_permutation(FuncTable(ctx.n, kernels.f_tables(ctx, *(p[i] for p in pos))[0]))]
        rep.details["positives_that_permute"] = len(perms)
        samp = enumerate_triples(ctx, SearchSpec(m=ctx.m, method="both", sample=sample_size,
                                                 seed=seed, timing=False))
        rep.details["sample"] = {"size": samp.total_checked, "mismatches": samp.mismatch_count}
        rep.mismatch_count = int((~bf).sum()) + samp.mismatch_count + len(perms)
        rep.mismatches = samp.mismatches + [
            {"a1": fld.fmt_sub(pos[0][i]), "a2": fld.fmt_tower(ctx, pos[1][i]),
             "a3": fld.fmt_tower(ctx, pos[2][i]), "theorem": True, "bruteforce": False}
            for i in np.flatnonzero(~bf)[:MAX_STORED_MISMATCHES]]
    # differential uniformity on a sample of positives, as an independent check
    pick = rng.choice(len(pos[0]), size=min(du_samples, len(pos[0])), replace=False) if len(pos[0]) else []
    du = [differential_uniformity(FuncTable(ctx.n, kernels.f_tables(ctx, *(p[i] for p in pos))[0])).du
          for i in pick]
    rep.details["du_checked"] = len(du)
    rep.details["du_not_two"] = sum(d != 2 for d in du)
    rep.mismatch_count += rep.details["du_not_two"]
    if not rep.in_theorem_range:
        total = rep.total_checked
        rep.details["agreement_rate"] = (total - rep.mismatch_count) / total if total else None
    rep.elapsed_seconds = round(time.perf_counter() - t0, 3)
    return rep


def _positives(ctx):
    """All subfield triples with a positive theorem verdict, as three arrays."""
    def build():
        out = ([], [], [])
        a2 = np.arange(ctx.q2, dtype=np.int64)
        rows = max(1, BLOCK_CELLS // ctx.q2)
        for a1 in range(ctx.q):
            for s in range(0, ctx.q2, rows):
                v, _, _ = _verdict(ctx, kernels.theorem_grid(ctx, a1, a2[s:s + rows]))
                i, j = np.nonzero(v)
                out[0].append(np.full(len(i), a1, dtype=np.int64))
                out[1].append(a2[s:s + rows][i])
                out[2].append(j.astype(np.int64))
        return tuple(np.concatenate(x) for x in out)
    return ctx.cached("theorem_positives", build)


def theorem_positives(ctx):
    return _positives(ctx)


def bruteforce_positives(ctx):
    """All subfield triples the unit-circle test finds APN (m <= MAX_BRUTEFORCE_M)."""
    if ctx.m > MAX_BRUTEFORCE_M:
        raise CostGuardError(f"brute force above m={MAX_BRUTEFORCE_M} needs force")

    def build():
        out = ([], [], [])
        a2, a3 = (g.ravel() for g in np.meshgrid(np.arange(ctx.q2, dtype=np.int64),
                                                  np.arange(ctx.q2, dtype=np.int64), indexing="ij"))
        for a1 in range(ctx.q):
            ok = kernels.family_apn_witness(ctx, a1, a2, a3) < 0
            out[0].append(np.full(int(ok.sum()), a1, dtype=np.int64))
            out[1].append(a2[ok])
            out[2].append(a3[ok])
        return tuple(np.concatenate(x) for x in out)
    return ctx.cached("bruteforce_positives", build)


# ---------------------------------------------------------------- spectra


def _fwht(a: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform of each row of a (B, 2^n) array."""
    a = np.array(a, dtype=np.int64)
    B, N = a.shape
    h = 1
    while h < N:
        a = a.reshape(B, N // (2 * h), 2, h)
        a = np.stack([a[:, :, 0] + a[:, :, 1], a[:, :, 0] - a[:, :, 1]], axis=2).reshape(B, N)
        h *= 2
    return a


def _parity(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    for s in (32, 16, 8, 4, 2, 1):
        v ^= v >> s
    return v & 1


MAX_WALSH_N = 14


def walsh_spectrum(table: FuncTable, label: str = "", batch: int = 256) -> SpectrumRecord:
    """Walsh values W(a, b) = sum_x (-1)^(b.F(x) + a.x) for all a and b != 0.

    The dot product stands in for tr(b F(x) + a x): both are nondegenerate
    bilinear forms, related by an invertible change of the b and a
    coordinates, so the multisets (and everything derived here) agree.
    """
    n = table.n
    if n > MAX_WALSH_N:
        raise ValueError(f"walsh spectrum limited to n <= {MAX_WALSH_N}")
    N = 1 << n
    vals = np.asarray(table.values, dtype=np.int64)
    hist = Counter()
    parseval = plateaued = True
    for s in range(1, N, batch):
        b = np.arange(s, min(s + batch, N), dtype=np.int64)
        comp = 1 - 2 * _parity(vals[None, :] & b[:, None])
        W = _fwht(comp)
        parseval &= bool(np.all((W * W).sum(axis=1) == N * N))
        absw = np.abs(W)
        top = absw.max(axis=1, keepdims=True)
        plateaued &= bool(np.all((absw == 0) | (absw == top)))
        u, c = np.unique(W, return_counts=True)
        hist.update(dict(zip(u.tolist(), c.tolist())))
    ext = Counter()
    for v, c in hist.items():
        ext[abs(v)] += c
    diff = differential_uniformity(table).spectrum if n <= 12 else {}
    return SpectrumRecord(label, diff, dict(sorted(hist.items())), dict(sorted(ext.items())),
                          parseval, plateaued)


def triple_spectrum(ctx, c: CoeffTriple, label: str | None = None) -> SpectrumRecord:
    vals = kernels.f_tables(ctx, c.a1, c.a2, c.a3)[0]
    return walsh_spectrum(FuncTable(ctx.n, vals), label or _triple_label(ctx, c))


def _triple_label(ctx, c):
    a1 = int(c.a1)
    return ",".join([fld.fmt_tower(ctx, a1) if a1 >> ctx.m else fld.fmt_sub(a1),
                     fld.fmt_tower(ctx, int(c.a2)), fld.fmt_tower(ctx, int(c.a3))])


def power_table(ctx, e: int) -> FuncTable:
    x = np.arange(ctx.q2, dtype=np.int64)
    return FuncTable(ctx.n, fld.t_pow(ctx, x, e))


def gold_exponents(n: int) -> list[int]:
    """2^i + 1 for 1 <= i <= n/2 with gcd(i, n) = 1: the APN Gold powers up to equivalence."""
    from math import gcd
    return [(1 << i) + 1 for i in range(1, n // 2 + 1) if gcd(i, n) == 1]


CCZ_BUCKET_NOTE = "CCZ-invariant buckets: a lower bound on the number of classes, not a classification"


def classify(ctx, triples, references: dict | None = None) -> dict:
    """Group APN triples by (differential spectrum, extended Walsh multiset).

    ``references`` maps a name to a FuncTable whose invariants are reported
    next to the buckets (by default the Gold powers x^3 and x^(2^i+1)).
    """
    if references is None:
        references = {f"x^{e}": power_table(ctx, e) for e in gold_exponents(ctx.n)}
    buckets = {}
    a1s, a2s, a3s = (np.atleast_1d(np.asarray(v, dtype=np.int64)) for v in triples)
    tables = kernels.f_tables(ctx, a1s, a2s, a3s)
    for i in range(len(a1s)):
        c = CoeffTriple(a1s[i], a2s[i], a3s[i], True)
        rec = walsh_spectrum(FuncTable(ctx.n, tables[i]), _triple_label(ctx, c))
        b = buckets.setdefault(rec.key(), {"differential": rec.differential,
                                            "extended_walsh": rec.extended_walsh,
                                            "members": 0, "representative": rec.label})
        b["members"] += 1
    refs = {name: walsh_spectrum(t, name).key() for name, t in references.items()}
    out = []
    for key, b in buckets.items():
        b["matches"] = sorted(n for n, k in refs.items() if k == key)
        out.append(b)
    out.sort(key=lambda b: (-b["members"], b["representative"]))
    return {"note": CCZ_BUCKET_NOTE, "bucket_count": len(out), "buckets": out,
            "references": sorted(refs)}


def shard_keys(ctx, spec: SearchSpec, shard: int) -> np.ndarray:
    """Packed (a1, a2, a3) keys of every triple a shard visits (small m only)."""
    a3 = np.arange(ctx.q2, dtype=np.int64)
    keys = []
    for a1, a2s in iter_shard_blocks(ctx, spec, shard):
        A2, A3 = np.meshgrid(a2s, a3, indexing="ij")
        keys.append(((np.int64(a1) << (4 * ctx.m)) | (A2 << (2 * ctx.m)) | A3).ravel())
    return np.concatenate(keys) if keys else np.zeros(0, dtype=np.int64)
