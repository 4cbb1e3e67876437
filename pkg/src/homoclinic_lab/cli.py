"""Command-line front end.

Every subcommand prints a JSON document (default) or CSV (--format csv)
with the resolved configuration echoed back, to stdout or --out.  Exit
codes: 0 success, 1 a statistical or acceptance gate failed, 2 usage error.
Output is deterministic for fixed flags.
"""

import argparse
import csv
import io
import json
import os
import sys

from . import acceptance, groups, montecarlo, rng, spectral, symbolic
from .groups import F2
from .homoclinic import Configuration, kernel
from .montecarlo import ExperimentConfig
from .ring import PolyF, parse_ring_element
from .spectral import InIdeal


def _default_jobs():
    env = os.environ.get("HOMOCLINIC_LAB_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _emit(doc, args, csv_rows=None):
    fmt = getattr(args, "format", "json")
    if fmt == "csv":
        if csv_rows is None:
            print("this subcommand has no CSV form", file=sys.stderr)
            raise SystemExit(2)
        buf = io.StringIO()
        writer = csv.writer(buf)
        for row in csv_rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _doc(command, config, **payload):
    doc = {"schema": "1", "command": command, "config": config}
    doc.update(payload)
    return doc


def _load_config_arg(args, group, default_window, default_alphabet):
    """Input configuration: --config FILE (JSON; '-' for stdin) or a seeded
    random fill of the default window."""
    if args.config:
        if args.config == "-":
            raw = json.load(sys.stdin)
        else:
            with open(args.config) as fh:
                raw = json.load(fh)
        return Configuration.from_json_dict(raw)
    lo, hi = default_alphabet
    ids = rng.element_ids(group, default_window)
    vals = rng.symbols(args.seed, 0, ids, hi - lo + 1)
    return Configuration(group, {s: int(v) + lo for s, v in
                                 zip(default_window, vals)}, (lo, hi))


def _cmd_patterns(args):
    table = symbolic.allowed_patterns(args.M, args.range)
    rows = sorted(table.allowed)
    doc = _doc("patterns", {"M": args.M, "range": args.range},
               count=len(rows), patterns=[list(r) for r in rows])
    _emit(doc, args, csv_rows=[("k", "l", "m")] + rows)
    return 0


def _cmd_trees(args):
    count = len(symbolic.enumerate_trees(args.size))
    config = {"size": args.size, "count_only": bool(args.count_only)}
    if args.count_only:
        _emit(_doc("trees", config, count=count), args,
              csv_rows=[("size", "count"), (args.size, count)])
        return 0
    trees = [t.sorted_words() for t in symbolic.enumerate_trees(args.size)]
    trees.sort()
    doc = _doc("trees", config, count=count, trees=trees)
    _emit(doc, args, csv_rows=[("words",)] + [(" ".join(t),) for t in trees])
    return 0


def _cmd_kernel(args):
    k = kernel(args.M, args.group, args.radius)
    ring = k.truncated_ring()
    doc = _doc("kernel",
               {"M": args.M, "group": args.group, "radius": args.radius},
               partial_l1=str(k.partial_l1(args.radius)),
               full_l1=str(k.full_l1),
               element=ring.to_json_dict())
    rows = [("w", "num", "den")] + [
        (t["w"], t["num"], t["den"]) for t in ring.to_json_dict()["terms"]]
    _emit(doc, args, csv_rows=rows)
    return 0


def _cmd_cover(args):
    window = groups.ball(args.group, args.radius)
    d = _load_config_arg(args, args.group, window, (0, args.M))
    res = symbolic.reduce_cover(d, args.M)
    doc = _doc("cover",
               {"M": args.M, "group": args.group, "radius": args.radius,
                "seed": args.seed},
               output=res.config.to_json_dict(),
               carry=res.carry.to_json_dict(),
               spill={groups.format_element(d.group, s): v
                      for s, v in sorted(res.spill.items())})
    _emit(doc, args)
    return 0


def _cmd_tau(args):
    window = groups.negative_monoid(F2, args.radius)
    d = _load_config_arg(args, F2, window, (0, args.M - 1))
    site = groups.parse_element(F2, args.site)
    try:
        res = symbolic.carry_add(d, site, args.M)
    except symbolic.BoundaryOverflow as exc:
        _emit(_doc("tau", {"M": args.M, "radius": args.radius,
                           "site": args.site, "seed": args.seed},
                   error="boundary overflow", overflow_site=str(exc)), args)
        return 1
    doc = _doc("tau", {"M": args.M, "radius": args.radius,
                       "site": args.site, "seed": args.seed},
               output=res.config.to_json_dict(),
               carry=res.carry.to_json_dict())
    _emit(doc, args)
    return 0


def _cmd_percolation(args):
    if args.ones or not args.config:
        window = groups.ball(F2, args.radius)
        c = Configuration(F2, {s: 1 for s in window}, (-1, 1))
    else:
        c = _load_config_arg(args, F2, groups.ball(F2, args.radius), (-1, 1))
    start = groups.parse_element(F2, args.start)
    rep = symbolic.percolation_path(c, start, args.n, args.M)
    doc = _doc("percolation",
               {"M": args.M, "n": args.n, "start": args.start,
                "ones": bool(args.ones), "radius": args.radius},
               path=rep["path"], steps=rep["steps"])
    _emit(doc, args)
    return 0


def _cmd_fourier(args):
    f = PolyF.standard(args.M, args.group)
    g = parse_ring_element(args.g, group=args.group)
    verdict = spectral.rational_witness(g, f)
    member = isinstance(verdict, InIdeal)
    if args.radius is not None:
        radius = args.radius
    elif member:
        radius = max(1, verdict.quotient.max_word_length() or 0)
    else:
        radius = max(1, groups.word_length(args.group, verdict.site))
    value = spectral.mu_hat(g, f, radius)
    doc = _doc("fourier",
               {"M": args.M, "group": args.group, "g": args.g,
                "radius": radius})
    doc["zero"] = value.exact_zero
    doc["witness"] = (None if member
                      else verdict.to_json_dict(args.group))
    doc["member"] = member
    doc["mu_hat"] = value.to_json_dict()
    if member:
        doc["quotient"] = verdict.quotient.to_json_dict()
    _emit(doc, args)
    return 0


def _cmd_divide(args):
    f = PolyF.standard(args.M, args.group)
    g = parse_ring_element(args.g, group=args.group)
    verdict = spectral.rational_witness(g, f)
    member = isinstance(verdict, InIdeal)
    doc = _doc("divide", {"M": args.M, "group": args.group, "g": args.g},
               divisible=member,
               quotient=verdict.quotient.to_json_dict() if member else None,
               witness=None if member else verdict.to_json_dict(args.group))
    _emit(doc, args)
    return 0


def _experiment_config(args):
    return ExperimentConfig(seed=args.seed, samples=args.samples, M=args.M,
                            group=args.group, sample_radius=args.radius,
                            eval_radius=args.eval_radius, bins=args.bins)


def _cmd_haar_test(args):
    cfg = _experiment_config(args)
    rep = montecarlo.haar_window_test(cfg, jobs=args.jobs)
    rep["schema"] = "1"
    rows = [("site", "bin", "count")]
    for c in rep["coordinates"]:
        for b, n in enumerate(c["histogram"]):
            rows.append((c["site"], b, n))
    _emit(rep, args, csv_rows=rows)
    return 0 if rep["passed"] else 1


def _cmd_tau_test(args):
    cfg = ExperimentConfig(seed=args.seed, samples=args.samples, M=args.M,
                           group=F2, sample_radius=args.radius,
                           eval_radius=args.eval_radius)
    rep = montecarlo.tau_invariance_test(cfg)
    rep["schema"] = "1"
    _emit(rep, args)
    return 0 if rep["passed"] else 1


def _cmd_collisions(args):
    cfg = ExperimentConfig(seed=args.seed, samples=args.samples, M=args.M,
                           group=args.group, sample_radius=args.radius,
                           eval_radius=args.eval_radius)
    rep = montecarlo.collision_search(cfg)
    rep["schema"] = "1"
    _emit(rep, args)
    return 0 if rep["passed"] else 1


def _cmd_report(args):
    rep = acceptance.run_all(seed=args.seed, jobs=args.jobs)
    rows = [("number", "name", "passed")] + [
        (c["number"], c["name"], c["passed"]) for c in rep["criteria"]]
    _emit(rep, args, csv_rows=rows)
    return 0 if rep["passed"] else 1


def _add_common(p, radius=None, experiment=False):
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--group", choices=[groups.F2, groups.Z2], default=groups.F2)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    if radius is not None:
        p.add_argument("--radius", type=int, default=radius)
    if experiment:
        p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
        p.add_argument("--samples", type=int, default=10_000)
        p.add_argument("--eval-radius", dest="eval_radius", type=int, default=1)
        p.add_argument("--bins", type=int, default=30)
        p.add_argument("--jobs", type=int, default=_default_jobs())


def build_parser():
    top = argparse.ArgumentParser(
        prog="homoclinic-lab",
        description="Exact and statistical experiments on the principal "
                    "algebraic action of f = M - a - b")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("patterns", help="allowed local SFT patterns")
    _add_common(p)
    p.add_argument("--range", type=int, default=2)
    p.set_defaults(fn=_cmd_patterns)

    p = sub.add_parser("trees", help="enumerate carry trees")
    _add_common(p)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--count-only", action="store_true", dest="count_only")
    p.set_defaults(fn=_cmd_trees)

    p = sub.add_parser("kernel", help="truncated kernel coefficients")
    _add_common(p, radius=4)
    p.set_defaults(fn=_cmd_kernel)

    p = sub.add_parser("cover", help="reduce a window to the M-letter alphabet")
    _add_common(p, radius=3)
    p.add_argument("--config", help="input configuration JSON ('-' = stdin)")
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.set_defaults(fn=_cmd_cover)

    p = sub.add_parser("tau", help="add one at a site and carry")
    _add_common(p, radius=6)
    p.add_argument("--config", help="input configuration JSON ('-' = stdin)")
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.add_argument("--site", default="")
    p.set_defaults(fn=_cmd_tau)

    p = sub.add_parser("percolation", help="forced path in a difference "
                                           "configuration")
    _add_common(p, radius=4)
    p.add_argument("--config", help="input configuration JSON ('-' = stdin)")
    p.add_argument("--ones", action="store_true",
                   help="use the all-ones configuration")
    p.add_argument("--start", default="")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.set_defaults(fn=_cmd_percolation)

    p = sub.add_parser("fourier", help="certified transform value at a "
                                       "character")
    _add_common(p)
    p.add_argument("--g", required=True, help="ring element, e.g. '1 + a'")
    p.add_argument("--radius", type=int, default=None)
    p.set_defaults(fn=_cmd_fourier)

    p = sub.add_parser("divide", help="exact division by f with witness")
    _add_common(p)
    p.add_argument("--g", required=True)
    p.set_defaults(fn=_cmd_divide)

    p = sub.add_parser("haar-test", help="coordinate uniformity experiment")
    _add_common(p, radius=12, experiment=True)
    p.set_defaults(fn=_cmd_haar_test)

    p = sub.add_parser("tau-test", help="carry invariance experiment")
    _add_common(p, radius=14, experiment=True)
    p.set_defaults(fn=_cmd_tau_test)

    p = sub.add_parser("collisions", help="parametrization collision search")
    _add_common(p, radius=12, experiment=True)
    p.set_defaults(fn=_cmd_collisions)

    p = sub.add_parser("report", help="run the full acceptance suite")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(fn=_cmd_report)

    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, symbolic.ConstraintViolated,
            spectral.RadiusInsufficient) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
