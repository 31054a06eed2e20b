"""Command-line front end: one subcommand per pipeline, JSON on demand.

Every subcommand prints a human-readable table by default and JSON
lines with --json.  Exit codes: 0 for success or a verified check, 1
when a check subcommand finds a violation, 2 for usage errors (argparse
default), 3 for an internal cross-oracle disagreement.  Long scans
write JSON lines incrementally and can resume by skipping inputs
already present in the output file.  CM_THREADS caps the worker count
for the scan subcommands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from multiprocessing import Pool

from .changemakers import (
    Changemaker,
    cm_torsion_profile,
    complement_lattice,
    enumerate_changemakers,
)
from .d_invariants import (
    AlexanderPoly,
    check_sharp_inequality,
    d_connected_sum,
    d_lens,
    d_lens_sharp,
    slope_bound_check,
    torsion_coeffs,
)
from .lattices import discriminant, indecomposable_summands
from .lens_spaces import (
    LensSpace,
    is_changemaker_realizable,
    linear_lattice,
    neg_cf,
    parse_lens_sum,
)
from .plumbing import verify_fiber_surgery

EXIT_OK = 0
EXIT_OBSTRUCTED = 1
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3


def _worker_count():
    try:
        return max(1, int(os.environ.get("CM_THREADS", "1")))
    except ValueError:
        return 1


def _emit(args, obj, human):
    if args.json:
        print(json.dumps(obj, separators=(",", ":")))
    else:
        print(human)


def _parse_int_vector(text):
    cleaned = text.strip().strip("[]")
    parts = cleaned.replace(",", " ").split()
    return tuple(int(x) for x in parts)


# -- subcommand handlers ----------------------------------------------------


def _cmd_cf(args):
    terms = neg_cf(args.p, args.q)
    _emit(
        args,
        {"p": args.p, "q": args.q, "terms": terms},
        json.dumps(terms, separators=(",", ":")),
    )
    return EXIT_OK


def _cmd_lens_lattice(args):
    lattice = linear_lattice(LensSpace(args.p, args.q))
    rows = lattice.to_rows()
    if args.json:
        print(json.dumps(rows, separators=(",", ":")))
    else:
        for row in rows:
            print(" ".join(f"{x:4d}" for x in row))
        print(f"# rank {lattice.rank}, discriminant {discriminant(lattice)}")
    return EXIT_OK


def _cmd_realize(args):
    sum_ = parse_lens_sum(args.lens_sum)
    t0 = time.perf_counter()
    result = _realize(sum_, args.pad)
    wall = round(time.perf_counter() - t0, 3)
    outcome = list(result.witness.sigma) if result.witness else "none"
    record = {
        "input": sum_.spec_text(),
        "norm": result.norm,
        "rank": result.rank,
        "pad": result.pad,
        "outcome": outcome,
        "candidates": result.candidates,
        "wall_time_s": wall,
    }
    if result.witness:
        human = f"sigma = {list(result.witness.sigma)} (candidates={result.candidates})"
    else:
        human = f"none (obstructed), candidates={result.candidates}"
    _emit(args, record, human)
    return EXIT_OK


def _realize_probe(payload):
    sigma, target_rows = payload
    from .lattices import GramLattice, is_isometric

    comp = complement_lattice(Changemaker(sigma))
    return is_isometric(comp, GramLattice(target_rows)) is not None


def _realize(sum_, pad):
    workers = _worker_count()
    if workers == 1:
        return is_changemaker_realizable(sum_, pad=pad)
    # parallel probe, deterministic first witness by candidate order
    from .lattices import GramLattice
    from .lens_spaces import RealizabilityResult, connected_sum_lattice, h1_order

    target = connected_sum_lattice(sum_)
    for _ in range(pad):
        target = target.direct_sum(GramLattice([[-1]]))
    norm = h1_order(sum_)
    rank = target.rank + 1
    candidates = enumerate_changemakers(norm, rank)
    rows = target.to_rows()
    found = None
    tested = 0
    with Pool(workers) as pool:
        for cm, hit in zip(
            candidates,
            pool.imap(_realize_probe, ((c.sigma, rows) for c in candidates)),
        ):
            tested += 1
            if hit:
                found = cm
                break
    return RealizabilityResult(found, tested, norm, rank, pad)


def _cmd_enum_cm(args):
    for cm in enumerate_changemakers(args.norm, args.rank):
        _emit(
            args,
            {"sigma": list(cm.sigma), "norm": cm.norm, "rank": cm.rank},
            json.dumps(list(cm.sigma), separators=(",", ":")),
        )
    return EXIT_OK


def _summand_record(sigma):
    t0 = time.perf_counter()
    cm = Changemaker(sigma)
    lattice = complement_lattice(cm)
    summands = indecomposable_summands(lattice, max_rank=max(16, lattice.rank))
    return {
        "sigma": list(sigma),
        "norm": cm.norm,
        "rank": cm.rank,
        "summands": len(summands),
        "disc": discriminant(lattice),
        "wall_time_s": round(time.perf_counter() - t0, 3),
    }


def _cmd_summand_scan(args):
    done = set()
    out = None
    if args.out:
        if os.path.exists(args.out):
            with open(args.out) as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        done.add(tuple(json.loads(line)["sigma"]))
        out = open(args.out, "a", buffering=1)
    todo = []
    for norm in range(1, args.max_norm + 1):
        for rank in range(1, norm + 1):
            for cm in enumerate_changemakers(norm, rank):
                if args.zero_free and 0 in cm.sigma:
                    continue
                if cm.sigma not in done:
                    todo.append(cm.sigma)
    workers = _worker_count()
    records = (
        map(_summand_record, todo)
        if workers == 1
        else Pool(workers).imap(_summand_record, todo)
    )
    worst = 0
    for rec in records:
        worst = max(worst, rec["summands"])
        line = json.dumps(rec, separators=(",", ":"))
        if out:
            out.write(line + "\n")
        if args.json or not out:
            print(line)
    if out:
        out.close()
    if not args.json:
        print(
            f"# scanned {len(todo)} changemakers (skipped {len(done)}), "
            f"max summands {worst}",
            file=sys.stderr,
        )
    return EXIT_OK


def _print_table(args, table, extra=None):
    obj = table.to_json_obj()
    if extra:
        obj.update(extra)
    if args.json:
        print(json.dumps(obj, separators=(",", ":")))
    else:
        for i, v in enumerate(table.values):
            print(f"{i:4d}  {v.numerator}/{v.denominator}")


def _cmd_dinv(args):
    ls = LensSpace(args.p, args.q)
    recursion = d_lens(ls)
    if args.sharp:
        sharp = d_lens_sharp(ls)
        if sharp.values != recursion.values:
            print("cross-oracle disagreement between recursion and sharp maxima", file=sys.stderr)
            return EXIT_INCONSISTENT
        _print_table(args, sharp, {"route": "sharp"})
    else:
        _print_table(args, recursion)
    return EXIT_OK


def _cmd_dinv_sum(args):
    table = d_connected_sum(parse_lens_sum(args.lens_sum))
    _print_table(args, table)
    return EXIT_OK


def _cmd_torsion(args):
    poly = AlexanderPoly(_parse_int_vector(args.coeffs))
    profile = torsion_coeffs(poly)
    obj = {
        "t": list(profile.t),
        "g": profile.g,
        "f": profile.f,
        "nonincreasing": profile.nonincreasing,
        "vanishes_exactly_at_g": profile.vanishes_exactly_at_g,
    }
    human = (
        f"t = {list(profile.t)}, g = {profile.g}, f = {profile.f}"
        + ("" if profile.nonincreasing else "  [warning: not nonincreasing]")
        + (
            ""
            if profile.vanishes_exactly_at_g
            else "  [warning: interior zero coefficient]"
        )
    )
    _emit(args, obj, human)
    return EXIT_OK


def _cmd_lemma9(args):
    sigma = _parse_int_vector(args.sigma)
    cm = Changemaker(sigma)
    profile = cm_torsion_profile(cm, box=args.box)
    report = check_sharp_inequality(cm, profile, box=args.box)
    obj = {
        "sigma": list(sigma),
        "norm": cm.norm,
        "t": list(profile.t),
        "passed": report.passed,
        "equality_everywhere": report.equality_everywhere(),
        "certified": report.all_certified,
        "classes": [
            {"i": i, "defect": defect, "bound": bound, "ok": ok, "equality": eq}
            for i, defect, bound, ok, eq in report.rows
        ],
    }
    lines = [
        f"norm {cm.norm}, profile t = {list(profile.t)} (g = {profile.g})",
    ]
    for i, defect, bound, ok, eq in report.rows:
        mark = "=" if eq else ("<" if ok else "VIOLATION")
        lines.append(f"  i={i:3d}  defect {defect:5d}  bound {bound:5d}  {mark}")
    lines.append("PASS" if report.passed else "FAIL")
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_OBSTRUCTED


def _cmd_verify_figure1(args):
    report = verify_fiber_surgery()
    obj = {
        "passed": report.passed,
        "moves": list(report.moves),
        "h1": {"left": report.left_h1, "right": report.right_h1},
        "summands": {
            "left": repr(report.left_summands),
            "right": repr(report.right_summands),
        },
        "failures": list(report.failures),
    }
    lines = [
        f"moves: {', '.join(report.moves)}",
        f"summands: {report.left_summands}",
        f"|H1| = {report.left_h1} (left), {report.right_h1} (right)",
        "PASS" if report.passed else "FAIL: " + "; ".join(report.failures),
    ]
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_OBSTRUCTED


def _cmd_slope_check(args):
    verdict = slope_bound_check(args.p, args.q, args.g, args.m)
    slope = Fraction(args.p, args.q)
    _emit(
        args,
        {"p": args.p, "q": args.q, "g": args.g, "m": args.m, "verdict": verdict},
        f"{slope} vs 2g-1 = {2 * args.g - 1}: {verdict}",
    )
    return EXIT_OK if verdict == "consistent" else EXIT_OBSTRUCTED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cmlat",
        description="exact lattice obstructions for lens space surgeries",
    )
    parser.add_argument("--json", action="store_true", help="emit JSON lines")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cf", help="negative continued fraction of p/q")
    s.add_argument("p", type=int)
    s.add_argument("q", type=int)
    s.set_defaults(func=_cmd_cf)

    s = sub.add_parser("lens-lattice", help="linear lattice of L(p,q)")
    s.add_argument("p", type=int)
    s.add_argument("q", type=int)
    s.set_defaults(func=_cmd_lens_lattice)

    s = sub.add_parser("realize", help="changemaker realizability of a lens sum")
    s.add_argument("lens_sum", help='e.g. "2/1+3/2+5/4"')
    s.add_argument("--pad", type=int, default=0, help="extra diagonal padding (<= 3)")
    s.set_defaults(func=_cmd_realize)

    s = sub.add_parser("enum-cm", help="enumerate changemakers")
    s.add_argument("--norm", type=int, required=True)
    s.add_argument("--rank", type=int, required=True)
    s.set_defaults(func=_cmd_enum_cm)

    s = sub.add_parser("summand-scan", help="complement summand counts up to a norm")
    s.add_argument("--max-norm", type=int, required=True)
    s.add_argument("--out", help="JSON-lines output file (resumable)")
    s.add_argument(
        "--zero-free",
        action="store_true",
        help="skip changemakers with zero entries",
    )
    s.set_defaults(func=_cmd_summand_scan)

    s = sub.add_parser("dinv", help="correction terms of L(p,q)")
    s.add_argument("p", type=int)
    s.add_argument("q", type=int)
    s.add_argument(
        "--sharp",
        action="store_true",
        help="use the covector maxima route and cross-check the recursion",
    )
    s.set_defaults(func=_cmd_dinv)

    s = sub.add_parser("dinv-sum", help="correction terms of a connected sum")
    s.add_argument("lens_sum")
    s.set_defaults(func=_cmd_dinv_sum)

    s = sub.add_parser("torsion", help="torsion coefficients of a symmetric polynomial")
    s.add_argument("coeffs", help='coefficients a_{-g}..a_g, e.g. "1 -1 1"')
    s.set_defaults(func=_cmd_torsion)

    s = sub.add_parser(
        "lemma9",
        help="sharp covector inequality for a changemaker against its profile",
    )
    s.add_argument("--sigma", required=True, help='e.g. "1,1,1"')
    s.add_argument("--box", type=int, default=5)
    s.set_defaults(func=_cmd_lemma9)

    s = sub.add_parser(
        "verify-figure1",
        help="reduce the built-in fiber surgery diagram and compare summands",
    )
    s.set_defaults(func=_cmd_verify_figure1)

    s = sub.add_parser("slope-check", help="strict slope bound p/q > 2g-1")
    s.add_argument("p", type=int)
    s.add_argument("q", type=int)
    s.add_argument("g", type=int)
    s.add_argument("m", type=int)
    s.set_defaults(func=_cmd_slope_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
