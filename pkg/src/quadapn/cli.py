"""Command line entry point: ``quadapn <command> ...``.

Exit codes: 0 on success, 1 when a property fails (mismatch, oracle
violation), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys


from quadapn import field as fld
from quadapn import kernels
from quadapn.apncore import FuncTable, differential_uniformity, family_is_apn, is_permutation
from quadapn.characterize import gamma_verdict, in_theorem_range
from quadapn.oracles import oracle_names, run_oracle
from quadapn.quad import CoeffTriple, normalize_a1, thetas
from quadapn.search import (METHODS, A1_DOMAINS, CostGuardError, CheckpointError, SearchSpec,
                            classify, crosscheck, enumerate_triples, power_table,
                            bruteforce_positives, theorem_positives, triple_spectrum, walsh_spectrum)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _field(args):
    poly = int(args.poly, 0) if args.poly else None
    k = int(args.k, 0) if args.k else None
    return fld.make_field(args.m, poly, k)


def _triple(ctx, args) -> CoeffTriple:
    try:
        vals = [fld.parse_tower(ctx, s) for s in (args.a1, args.a2, args.a3)]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return CoeffTriple.make(ctx, *vals)


def _emit(obj, path=None):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    ctx = _field(args)
    raw = _triple(ctx, args)
    c, b = normalize_a1(ctx, raw)
    v = gamma_verdict(ctx, thetas(ctx, c))
    g1, g2 = bool(v.in_gamma1), bool(v.in_gamma2)
    theorem = (g1 or g2) if ctx.m % 2 == 0 else g1
    apn, witness = family_is_apn(ctx, c)
    out = {
        "m": ctx.m, "k": fld.fmt_sub(ctx.k), "poly": hex(ctx.poly),
        "triple": [args.a1, args.a2, args.a3],
        "normalized": [fld.fmt_sub(c.a1), fld.fmt_tower(ctx, c.a2), fld.fmt_tower(ctx, c.a3)],
        "gamma1": g1, "gamma2": g2, "gamma_perm": bool(v.in_gamma_perm),
        "theorem": bool(theorem), "in_theorem_range": in_theorem_range(ctx),
        "apn": bool(apn), "witness": None if witness is None else fld.fmt_tower(ctx, witness),
    }
    if ctx.n <= 12:
        table = FuncTable(ctx.n, kernels.f_tables(ctx, c.a1, c.a2, c.a3)[0])
        out["differential_uniformity"] = differential_uniformity(table).du
        out["permutation"] = is_permutation(table)
    _emit(out)
    # a disagreement only counts as a failure where the theorem claims to apply
    return EXIT_FAIL if in_theorem_range(ctx) and theorem != apn else EXIT_OK


def cmd_enumerate(args) -> int:
    ctx = _field(args)
    spec = SearchSpec(m=args.m, method=args.method, a1_domain=args.a1_domain,
                      shards=args.shards,
                      shard_indices=None if args.shard_index is None else tuple(args.shard_index),
                      checkpoint=args.checkpoint, dump=args.dump, sample=args.sample,
                      seed=args.seed, force=args.force, workers=args.workers,
                      k=ctx.k, poly=ctx.poly, timing=not args.no_timing,
                      full_mode=args.full_mode)
    progress = None
    if args.progress:
        def progress(rec):
            print(f"shard {rec['shard']}: {rec['apn_count']} / {rec['total']}", file=sys.stderr)
    rep = enumerate_triples(ctx, spec, progress)
    _emit(rep.to_json(), args.out)
    return EXIT_OK if rep.passed or not rep.in_theorem_range else EXIT_FAIL


def cmd_crosscheck(args) -> int:
    ctx = _field(args)
    rep = crosscheck(ctx, sample_size=args.sample, seed=args.seed, workers=args.workers)
    _emit(rep.to_json(), args.out)
    return EXIT_OK if rep.passed or not rep.in_theorem_range else EXIT_FAIL


def cmd_oracle(args) -> int:
    ctx = _field(args)
    if args.name not in oracle_names():
        raise UsageError(f"unknown oracle {args.name!r}; choose from {', '.join(oracle_names())}")
    results = run_oracle(ctx, args.name)
    _emit([r.to_dict() for r in results], args.out)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_spectrum(args) -> int:
    ctx = _field(args)
    if args.power is not None:
        rec = walsh_spectrum(power_table(ctx, args.power), f"x^{args.power}")
    else:
        if None in (args.a1, args.a2, args.a3):
            raise UsageError("give --a1 --a2 --a3, or --power")
        rec = triple_spectrum(ctx, _triple(ctx, args))
    _emit({"label": rec.label, "differential": {str(k): v for k, v in rec.differential.items()},
           "walsh": {str(k): v for k, v in rec.walsh.items()},
           "extended_walsh": {str(k): v for k, v in rec.extended_walsh.items()},
           "parseval_ok": rec.parseval_ok, "plateaued": rec.plateaued}, args.out)
    return EXIT_OK if rec.parseval_ok else EXIT_FAIL


def cmd_classify(args) -> int:
    ctx = _field(args)
    if args.source == "theorem":
        pos = theorem_positives(ctx)
    else:
        if ctx.m > 4 and not args.force:
            raise UsageError("brute-force positives are limited to m <= 4 without --force")
        pos = bruteforce_positives(ctx)
    if args.limit:
        pos = tuple(p[:args.limit] for p in pos)
    res = classify(ctx, pos)
    res["m"] = ctx.m
    res["apn_triples"] = int(len(pos[0]))
    res["source"] = args.source
    _emit(res, args.out)
    return EXIT_OK


def _common(p, m_required=True):
    p.add_argument("--m", type=int, required=m_required, help="half degree: the family lives on GF(2^2m)")
    p.add_argument("--k", help="trace-one constant defining the tower (default: smallest valid)")
    p.add_argument("--poly", help="reduction polynomial of GF(2^m), e.g. 0x13")
    p.add_argument("--out", help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadapn", description=__doc__.splitlines()[0])
    ap.add_argument("--backend", choices=kernels.available(), help="kernel backend override")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verdicts for one coefficient triple")
    _common(p)
    for name in ("a1", "a2", "a3"):
        p.add_argument(f"--{name}", required=True, help="hex, or x1:x2 for x1*w + x2")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="count APN triples")
    _common(p)
    p.add_argument("--method", choices=METHODS, default="theorem")
    p.add_argument("--a1-domain", choices=A1_DOMAINS, default="subfield")
    p.add_argument("--full-mode", choices=("auto", "literal", "fiber"), default="auto")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--shard-index", type=int, action="append")
    p.add_argument("--checkpoint")
    p.add_argument("--dump", help="CSV of positive triples")
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int, default=0, help="seed for numpy's PCG64 generator")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--force", action="store_true", help="lift the cost guards")
    p.add_argument("--no-timing", action="store_true", help="omit wall time (byte-stable reports)")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("crosscheck", help="theorem against brute force")
    _common(p)
    p.add_argument("--sample", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("oracle", help="run a small-field oracle")
    p.add_argument("name", help=", ".join(oracle_names()))
    _common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("spectrum", help="differential and Walsh spectra")
    _common(p)
    for name in ("a1", "a2", "a3"):
        p.add_argument(f"--{name}")
    p.add_argument("--power", type=int, help="use x^e instead of a triple")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("classify", help="invariant buckets of the theorem positives")
    _common(p)
    p.add_argument("--source", choices=("theorem", "bruteforce"), default="theorem",
                   help="where the APN triples come from; below m=4 the two differ")
    p.add_argument("--limit", type=int, help="only the first N positives")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_classify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.backend:
            with kernels.use(args.backend):
                return args.func(args)
        return args.func(args)
    except (UsageError, CostGuardError, CheckpointError, ValueError) as exc:
        print(f"quadapn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
