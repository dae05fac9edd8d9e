"""cartankit command line: batch verification with text and JSON reports.

Exit status: 0 all checks pass, 1 some check fails, 2 usage error,
3 model file cannot be read or parsed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from . import BACKEND, __version__, reports
from .flatmodels import ModelError, model_from_json


def _max_n():
    return int(os.environ.get("CARTANKIT_MAX_N", "5"))


def load_model_file(path):
    """Read a model JSON file; bare preset names resolve inside the package."""
    candidates = [path]
    base = os.path.basename(path)
    if not base.endswith(".json"):
        base += ".json"
    candidates.append(resources.files("cartankit") / "presets" / base)
    for c in candidates:
        try:
            with open(c) as fh:
                doc = json.load(fh)
            break
        except FileNotFoundError:
            continue
        except (OSError, json.JSONDecodeError) as exc:
            raise ModelError(f"cannot read {path}: {exc}") from exc
    else:
        raise ModelError(f"model file not found: {path}")
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    n = doc.get("n")
    if isinstance(n, int) and n > _max_n():
        raise ModelError(f"n = {n} exceeds CARTANKIT_MAX_N = {_max_n()}")
    return model_from_json(doc), os.path.splitext(base)[0]


def build_parser():
    p = argparse.ArgumentParser(prog="cartankit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cartankit {__version__} ({BACKEND} kernel)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write the reports as JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--verbose", "-v", action="store_true", help="print payloads")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-all", parents=[common], help="run every check")
    h = sub.add_parser("homology", parents=[common], help="H_2(p_perp, g) for one rank")
    h.add_argument("--n", type=int, required=True)
    o = sub.add_parser("octonion", parents=[common], help="split octonion checks")
    o.add_argument("what", choices=["table", "derivations", "classify"])
    o.add_argument("--planes", type=int, default=20)
    i = sub.add_parser("inclusions", parents=[common], help="Fefferman-type inclusions")
    i.add_argument("--case", default="all",
                   choices=["all", "spinorial", "cr", "lagrangian", "exceptional", "fourform"])
    m = sub.add_parser("holonomy", parents=[common], help="curvature and holonomy of a model file")
    m.add_argument("--model", required=True)
    sub.add_parser("conformal3", parents=[common], help="n = 3 conformal construction")
    sub.add_parser("tractor", parents=[common], help="pointwise tractor algebra")
    return p


def run(args):
    cmd = args.command
    if cmd == "verify-all":
        return reports.verify_all(args.seed, args.trials, min(5, _max_n()))
    if cmd == "homology":
        if not 2 <= args.n <= _max_n():
            raise SystemExit(_usage_error(f"--n must lie in 2..{_max_n()} (CARTANKIT_MAX_N)"))
        out = [reports.homology_check(args.n)]
        if args.n <= 4:
            out.append(reports.codiff_check(args.n))
        return out
    if cmd == "octonion":
        if args.what == "table":
            return [reports.octonion_table(args.seed)]
        if args.what == "derivations":
            return [reports.octonion_derivations(), reports.octonion_properties(args.seed, args.trials)]
        return [reports.octonion_classify(args.seed, args.planes)]
    if cmd == "inclusions":
        return reports.inclusion_checks(args.case)
    if cmd == "holonomy":
        model, name = load_model_file(args.model)
        expect = None
        if model.mod.kind == "single_y34" and model.n == 4:
            expect = {"dim": 1, "basis": [{"Y34": "1"}]}
        return [reports.holonomy_checks(model, name, expect, args.seed)]
    if cmd == "conformal3":
        return reports.conformal_checks()
    if cmd == "tractor":
        return [reports.tractor_check(args.seed, args.trials)]
    raise SystemExit(_usage_error(f"unknown command {cmd}"))


def _usage_error(msg):
    print(f"cartankit: error: {msg}", file=sys.stderr)
    return 2


def _print(rep, verbose):
    print(f"[{rep.status.upper():4}] {rep.id:28} {rep.anchor}  ({rep.seconds}s)")
    p = rep.payload
    if verbose or rep.status != "pass":
        text = json.dumps(p, indent=2, sort_keys=True)
        print("\n".join("       " + line for line in text.splitlines()))
    else:
        brief = {k: v for k, v in p.items() if not isinstance(v, (dict, list)) or k in (
            "dims_by_homogeneity", "holonomy_basis", "carrier_types") or (
            isinstance(v, list) and all(isinstance(x, (int, str)) for x in v))}
        if brief:
            print("       " + json.dumps(brief, sort_keys=True))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        reps = run(args)
    except ModelError as exc:
        print(f"cartankit: model error: {exc}", file=sys.stderr)
        return 3
    for r in reps:
        _print(r, args.verbose)
    failed = [r.id for r in reps if r.status == "fail"]
    print(f"{len(reps) - len(failed)}/{len(reps)} checks passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"version": __version__, "backend": BACKEND, "seed": args.seed,
                       "reports": [r.to_json() for r in reps]}, fh, indent=2, sort_keys=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
