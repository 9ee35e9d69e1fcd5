"""Command line front end. Every command prints JSON on stdout.

Exit codes: 0 success, 1 invalid input (diagnostic on stderr), 2 when two
conditions that must be equivalent disagree at runtime.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from . import star as S
from .generate import MAX_GROUP_ORDER, MAX_POINTS, MAX_STALK, BoundsExceeded, case_seed, random_instance
from .gset import label_str
from .properties import PROPERTIES

FUNCTORS = ("star", "set", "et", "G", "fix", "const-star", "smI")


def apply_functor(name: str, ctx, D):
    if name == "star":
        return S.star_part(ctx, D)
    if name == "set":
        return S.set_part(ctx, D)[0]
    if name == "et":
        return S.et_part(ctx, D)[0]
    if name == "G":
        return S.quotient_sheaf(D)[0]
    if name == "fix":
        return S.fixed_subsheaf(D)
    if name == "const-star":
        return S.star_constant(ctx, S.generic_stalk(D))
    if name == "smI":
        return S.smI_part(ctx, D)
    raise ValueError(f"unknown functor {name!r}")


def report_doc(ctx, D) -> dict:
    r = S.classify(ctx, D)
    return {
        "classification": {
            "is_star": r.is_star,
            "is_et": r.is_et,
            "is_set": r.is_set,
            "is_loc": r.is_loc,
            "ladder3": r.ladder3,
            "ladder4": r.ladder4,
            "pi0_size": r.pi0_size,
            "supp": list(ctx.site.ordered(r.supp)),
        },
        "pi0": [label_str(c) for c in S.pi0(D)],
        "support": list(ctx.site.ordered(r.supp)),
        "digest": io.digest(D),
    }


def _out(doc):
    sys.stdout.buffer.write(io.canonical_bytes(doc))


def cmd_validate(args):
    inst = io.parse(args.file)
    _out({"valid": True, "is_star": S.is_star(inst.ctx, inst.sheaf), "digest": io.digest(inst.sheaf)})


def cmd_classify(args):
    inst = io.parse(args.file)
    _out(report_doc(inst.ctx, inst.sheaf))


def cmd_apply(args):
    inst = io.parse(args.file)
    out = apply_functor(args.functor, inst.ctx, inst.sheaf)
    _out({"functor": args.functor, "digest": io.digest(out), "instance": io.instance_doc(inst.ctx, out)})


def cmd_decompose(args):
    inst = io.parse(args.file)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    for i, (c, comp) in enumerate(zip(S.pi0(inst.sheaf), S.decompose(inst.sheaf))):
        p = outdir / f"component_{i}.json"
        p.write_bytes(io.emit((inst.ctx, comp)))
        files.append({"component": label_str(c), "file": str(p), "digest": io.digest(comp)})
    _out({"components": files})


def cmd_espace(args):
    inst = io.parse(args.file)
    E = S.espace_etale(inst.sheaf)
    name = {pt: f"{pt[0]}:{label_str(pt[1])}" for pt in E.points}
    order = [[name[a], name[b]] for a in E.points for b in E.points if a != b and E.le(a, b)]
    _out({
        "points": [name[p] for p in E.points],
        "order": sorted(order),
        "projection": {name[p]: p[0] for p in E.points},
        "local_isomorphism": E.is_local_isomorphism(),
    })


def cmd_gen(args):
    ctx, D = random_instance(args.seed, args.points, args.group_order, args.max_stalk, star=not args.non_star)
    sys.stdout.buffer.write(io.emit((ctx, D)))


def cmd_selftest(args):
    results = {}
    ok = True
    for name, (module, fn) in PROPERTIES.items():
        passed = failed = 0
        for i in range(args.cases):
            try:
                good = fn(case_seed(args.seed, i))
            except S.LadderDisagreement:
                good = False
            if good:
                passed += 1
            else:
                failed += 1
        ok = ok and failed == 0
        results[name] = {"module": module, "pass": passed, "fail": failed}
    _out({"seed": args.seed, "cases": args.cases, "properties": results, "ok": ok})
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="starsheaf", description="Sheaves of G-sets with inertia on finite sites.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in (("validate", cmd_validate), ("classify", cmd_classify), ("espace", cmd_espace)):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.set_defaults(func=fn)
    p = sub.add_parser("apply")
    p.add_argument("--functor", required=True, choices=FUNCTORS)
    p.add_argument("file")
    p.set_defaults(func=cmd_apply)
    p = sub.add_parser("decompose")
    p.add_argument("file")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_decompose)
    p = sub.add_parser("gen")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--points", type=int, default=MAX_POINTS)
    p.add_argument("--group-order", type=int, default=MAX_GROUP_ORDER)
    p.add_argument("--max-stalk", type=int, default=MAX_STALK)
    p.add_argument("--non-star", action="store_true", help="skip the inertia condition when building stalks")
    p.set_defaults(func=cmd_gen)
    p = sub.add_parser("selftest")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cases", type=int, default=100)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except S.LadderDisagreement as exc:
        print(json.dumps({"error": "ladder disagreement", "detail": str(exc)}), file=sys.stderr)
        return 2
    except (io.ParseError, io.SchemaError, BoundsExceeded, S.NotStar, S.NontrivialAction, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return 1
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
