"""Command-line front end.

Subcommands: check | tor | rigidity | ratio | balance | resolve | search.
Ring arguments are file paths or bundled corpus names; modules are
declared names or inline "coker [[...], ...]" expressions.

Exit codes: 0 = success (or a consistent probe), 1 = input error,
2 = the computed data contradicts a structural fact, which in a correct
engine signals an implementation bug.  `search` always exits 0.
"""

import argparse
import json
import sys

from . import corpus, invariants, randgen
from .errors import CapTooSmall, FrobtorError, NotApplicable
from .resolve import ModulePresentation, minimal_free_resolution
from .ringkit import parse_inline_module
from .tor import (
    balance_lengths,
    ratio_report,
    require_twist_cap,
    rigidity_probe,
    tor_frobenius,
)

N_CEILING = 12
DIM_WARNING = 10 ** 4


def _bounded_int(name, low, high):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer")
        if not low <= value <= high:
            raise argparse.ArgumentTypeError(
                f"{name} must be between {low} and {high}")
        return value

    return parse


def _load(args):
    algebra, pres = corpus.load_ring(args.ring)
    cap = getattr(args, "cap", None)
    if cap is not None:
        if algebra.artinian:
            raise NotApplicable("--cap has no effect on an Artinian ring")
        algebra = algebra.at_cap(cap)
    return algebra, pres


def _module(algebra, pres, spec):
    if spec.lstrip().startswith("coker"):
        rows = parse_inline_module(spec, algebra.variables, algebra.p)
        return ModulePresentation(algebra, corpus.thaw_matrix(algebra, rows))
    return corpus.module_named(algebra, pres, spec)


def _expanded_dim(algebra):
    if algebra.artinian:
        return algebra.dim
    return algebra.verification_algebra().dim


def _warn_if_large(algebra, ranks):
    total = sum(ranks) * _expanded_dim(algebra)
    if total > DIM_WARNING:
        print(f"warning: total expanded matrix dimensions {total} exceed "
              f"{DIM_WARNING}; this may be slow", file=sys.stderr)


def _emit(args, payload, text):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_check(args):
    algebra, _ = _load(args)
    report = invariants.full_report(algebra)
    _emit(args, report.to_dict(), report.to_text())
    return 0


def cmd_tor(args):
    algebra, pres = _load(args)
    mod = _module(algebra, pres, args.module)
    table = tor_frobenius(mod, args.r, args.N)
    _warn_if_large(algebra, table.betti())
    _emit(args, table.to_dict(), table.to_text())
    return 0


def cmd_rigidity(args):
    algebra, pres = _load(args)
    mod = _module(algebra, pres, args.module)
    report = rigidity_probe(mod, args.r, args.N)
    _warn_if_large(algebra, report.table.betti())
    _emit(args, report.to_dict(), report.to_text())
    return 2 if report.flagged else 0


def cmd_ratio(args):
    algebra, pres = _load(args)
    mod = _module(algebra, pres, args.module)
    report = ratio_report(mod, args.r, args.N)
    _warn_if_large(algebra, report.table.betti())
    _emit(args, report.to_dict(), report.to_text())
    return 0


def cmd_balance(args):
    algebra, pres = _load(args)
    mod = _module(algebra, pres, args.module)
    table = tor_frobenius(mod, args.r, args.N)
    other = balance_lengths(mod, args.r, args.N)
    lengths = table.lengths()
    equal = [lengths[j] == other[j] for j in range(args.N + 1)]
    payload = {
        "module": table.module,
        "ring": table.ring,
        "r": args.r,
        "twist_route": [row.to_dict()["length"] for row in table.rows],
        "module_route": other,
        "equal": equal,
        "all_equal": all(equal),
    }
    lines = [f"ring:   {table.ring}", f"module: {table.module}",
             f"twist:  r = {args.r}", "",
             f"{'j':>3}  {'twisted':>8}  {'other':>8}  agree"]
    for j in range(args.N + 1):
        lines.append(f"{j:>3}  {payload['twist_route'][j]:>8}  "
                     f"{other[j]:>8}  {'yes' if equal[j] else 'NO'}")
    lines.append("")
    lines.append("balanced: " + ("yes" if all(equal) else "NO"))
    _emit(args, payload, "\n".join(lines))
    return 0 if all(equal) else 2


def cmd_resolve(args):
    algebra, pres = _load(args)
    mod = _module(algebra, pres, args.module)
    res = minimal_free_resolution(mod, args.N, strict=False)
    _warn_if_large(algebra, res.ranks)
    payload = {
        "ring": repr(algebra),
        "module": getattr(mod, "name", None) or f"coker({mod.g}x{mod.h})",
        "betti": list(res.ranks),
        "stable": list(res.stable),
        "graded": res.shifts is not None,
        "shifts": [list(s) for s in res.shifts] if res.shifts is not None else None,
    }
    lines = [f"ring:   {payload['ring']}", f"module: {payload['module']}", "",
             "betti:  " + " ".join(str(b) for b in res.ranks)]
    if not all(res.stable):
        first = res.stable.index(False)
        lines.append(f"unstable from stage {first + 1}: increase the cap")
    if res.shifts is not None:
        for i, s in enumerate(res.shifts):
            lines.append(f"F_{i} generator degrees: "
                         + (" ".join(str(t) for t in s) if s else "-"))
    _emit(args, payload, "\n".join(lines))
    return 0


def _allowed_twists(algebra, r_max=2):
    out = []
    for r in range(1, r_max + 1):
        try:
            require_twist_cap(algebra, r)
        except CapTooSmall:
            continue
        out.append(r)
    return out


def cmd_search(args):
    rng = randgen.rng_from(args.seed)
    records = []
    counts = {"witness": 0, "vacuous": 0, "flagged": 0}
    window = {"checked": 0, "finite_pd": 0}
    for trial in range(args.trials):
        algebra, _ = randgen.random_ring(rng)
        mod = randgen.random_module(algebra, rng)
        twists = _allowed_twists(algebra) if args.r is None else [args.r]
        r = rng.choice(twists)
        try:
            probe = rigidity_probe(mod, r, args.N)
        except CapTooSmall:
            counts["vacuous"] += 1
            continue
        witness = probe.first_vanishing is not None and not probe.free
        if witness:
            counts["witness"] += 1
            prof = invariants.depth(algebra)
            rec = {
                "trial": trial,
                "ring": probe.ring,
                "module": probe.module,
                "r": r,
                "first_vanishing": probe.first_vanishing,
                "later_nonvanishing": probe.later_nonvanishing,
                "depth": prof,
                "flagged": probe.flagged,
            }
            # a window of depth+1 consecutive vanishing positions must
            # pin the projective dimension down to a finite value
            run = 0
            hit = False
            for row in probe.table.rows:
                if row.j < 1:
                    continue
                run = run + 1 if row.length == 0 else 0
                if run >= prof + 1:
                    hit = True
                    break
            if hit:
                window["checked"] += 1
                if any(b == 0 for b in probe.table.betti()[1:]):
                    window["finite_pd"] += 1
            records.append(rec)
        else:
            counts["vacuous"] += 1
        if probe.flagged:
            counts["flagged"] += 1
    records.sort(key=lambda rec: rec["trial"])
    payload = {
        "trials": args.trials,
        "seed": args.seed,
        "N": args.N,
        "counts": counts,
        "window": window,
        "witnesses": records,
    }
    lines = [f"trials: {args.trials} (seed {args.seed}, N = {args.N})",
             f"witnesses (some Tor_j = 0, module not free): "
             f"{counts['witness']}",
             f"vacuous trials: {counts['vacuous']}",
             f"flagged contradictions: {counts['flagged']}"]
    if window["checked"]:
        lines.append(f"vanishing windows checked: {window['checked']}, "
                     f"finite pd confirmed: {window['finite_pd']}")
    for rec in records:
        lines.append(f"  trial {rec['trial']}: {rec['ring']} "
                     f"module {rec['module']} r={rec['r']} "
                     f"Tor_{rec['first_vanishing']} = 0"
                     + (" FLAGGED" if rec["flagged"] else ""))
    _emit(args, payload, "\n".join(lines))
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _parser():
    top = argparse.ArgumentParser(
        prog="frobtor",
        description="Exact Frobenius-twisted Tor computations over local "
                    "F_p algebras.")
    sub = top.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    ring = argparse.ArgumentParser(add_help=False)
    ring.add_argument("ring", help="ring file path or bundled name")
    ring.add_argument("--cap", type=_bounded_int("--cap", 2, 64),
                      help="override the degree cap (capped rings only)")

    mod = argparse.ArgumentParser(add_help=False)
    mod.add_argument("--module", default="k",
                     help='declared module name or inline "coker [[...]]"')
    mod.add_argument("--r", type=_bounded_int("--r", 1, 3), default=1,
                     help="Frobenius twist exponent")
    mod.add_argument("--N", type=_bounded_int("--N", 0, N_CEILING), default=6,
                     help="largest homological degree")

    p = sub.add_parser("check", parents=[ring, common],
                       help="ring invariants: socle, condition (1), depth, c")
    p.set_defaults(fn=cmd_check)
    p = sub.add_parser("tor", parents=[ring, mod, common],
                       help="table of Tor_j(M, twisted R) lengths")
    p.set_defaults(fn=cmd_tor)
    p = sub.add_parser("rigidity", parents=[ring, mod, common],
                       help="vanishing pattern vs the structural facts")
    p.set_defaults(fn=cmd_rigidity)
    p = sub.add_parser("ratio", parents=[ring, mod, common],
                       help="length-to-Betti ratios with constancy verdict")
    p.set_defaults(fn=cmd_ratio)
    p = sub.add_parser("balance", parents=[ring, mod, common],
                       help="cross-check the two routes to the Tor lengths")
    p.set_defaults(fn=cmd_balance)
    p = sub.add_parser("resolve", parents=[ring, mod, common],
                       help="minimal free resolution ranks and degrees")
    p.set_defaults(fn=cmd_resolve)

    p = sub.add_parser("search", parents=[common],
                       help="randomized vanishing-witness sweep")
    p.add_argument("--trials", type=_bounded_int("--trials", 0, 100000),
                   default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=_bounded_int("--r", 1, 3), default=None)
    p.add_argument("--N", type=_bounded_int("--N", 0, N_CEILING), default=6)
    p.set_defaults(fn=cmd_search)
    return top


def main(argv=None):
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; exit 2 is reserved for
        # inconsistency flags, so remap (--help stays 0)
        return 0 if e.code == 0 else 1
    try:
        return args.fn(args)
    except NotApplicable as e:
        print(f"not applicable: {e}")
        return 0
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return 1
    except FrobtorError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
