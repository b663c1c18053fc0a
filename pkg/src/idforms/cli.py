"""Command-line front end.

Single results are printed as one JSON document carrying the tool version and
the SHA-256 of the input; sweeps stream JSON lines followed by a summary line.

Exit codes: 0 success or consistent verdict, 2 inconsistent verdict, 3 verdict
resting on a sampled nonvanishing check, 64 malformed input, 65 violated
mathematical precondition.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .counterexamples import certify, haar_construction, identity_construction, prop2_construction
from .distributions import Pmf, classify, uniform
from .elimination import eliminate, reduce_coefficients
from .engine import DEFAULT_SWEEP, special_case_derivations, summarize, sweep, verify
from .errors import GroupMismatchError, PreconditionError, SchemaError
from .forms import FormSystem, identically_distributed, joint_pmf
from .groups import admissible
from .schema import load_element, load_group, load_instance, load_pmf, load_presentation, load_system, parse_int_list, read_json

EXIT_SCHEMA = 64
EXIT_PRECONDITION = 65


def _emit(command: str, digest: str | None, body: dict, out=None) -> None:
    out = out or sys.stdout
    doc = {"tool": "idforms", "version": __version__, "command": command}
    if digest:
        doc["input_sha256"] = digest
    doc.update(body)
    json.dump(doc, out, indent=2)
    out.write("\n")


def cmd_admissible(args) -> int:
    group, _ = read_json(args.group)
    G = load_group(group)
    print("true" if admissible(G, args.a) else "false")
    return 0


def cmd_classify(args) -> int:
    obj, digest = read_json(args.pmf)
    mu = load_pmf(obj)
    _emit("classify", digest, {"classification": classify(mu).to_json()})
    return 0


def cmd_joint(args) -> int:
    obj, digest = read_json(args.spec)
    spec = load_instance(obj)
    s = spec.system
    first = joint_pmf(s.a, s.b, spec.dists)
    second = joint_pmf(s.c, s.d, spec.dists)
    _emit("joint", digest, {"L1_L2": first.to_json(), "L3_L4": second.to_json(), "equal": first == second})
    return 0


def cmd_check(args) -> int:
    obj, digest = read_json(args.spec)
    spec = load_instance(obj)
    _emit("check", digest, {"identically_distributed": identically_distributed(spec)})
    return 0


def cmd_verify(args) -> int:
    obj, digest = read_json(args.spec)
    spec = load_instance(obj)
    verdict = verify(spec, args.grid)
    _emit("verify", digest, {"verdict": verdict.to_json()})
    for note in verdict.notes:
        print(f"note: {note}", file=sys.stderr)
    return verdict.exit_code


def _system_from_args(args) -> tuple[FormSystem, str | None]:
    if args.system is not None:
        obj, digest = read_json(args.system)
        return load_system(obj), digest
    rows = [args.a, args.b, args.c, args.d]
    if any(r is None for r in rows):
        raise SchemaError("give a SYSTEM document or all of --a, --b, --c, --d")
    return FormSystem(*(parse_int_list(r) for r in rows)), None


def cmd_eliminate(args) -> int:
    system, digest = _system_from_args(args)
    if args.m is not None and not 1 <= args.m <= system.n:
        raise PreconditionError(f"--m must be between 1 and {system.n}")
    derivation = eliminate(system, args.m, args.q_degree)
    if args.format == "text":
        for j in derivation.operators:
            print("\n".join(derivation.trace(j)))
            print()
        return 0
    _emit("eliminate", digest, {"derivation": derivation.to_json()})
    return 0


def cmd_reduce(args) -> int:
    obj, digest = read_json(args.system)
    system = load_system(obj)
    group, _ = read_json(args.group)
    G = load_group(group)
    result = reduce_coefficients(system, G, args.m)
    _emit("reduce", digest, {"reduction": result.to_json()})
    return 0


def _default_x0(G):
    for x in G.elements():
        o = x.order()
        if o and o > 1 and all(o % q for q in range(2, o)):
            return x
    raise PreconditionError(f"{G.label} has no element of prime order")


def cmd_counterexample(args) -> int:
    if args.family == "prop2":
        pres = load_presentation(read_json(args.group)[0])
        x0 = load_element(json.loads(args.x0), pres) if args.x0 is not None else _default_x0(pres.group)
        spec = prop2_construction(pres.group, x0, Fraction(args.m), 2)
    elif args.family == "haar":
        pres = load_presentation(read_json(args.group)[0])
        if args.leading:
            leading = [load_pmf(read_json(t)[0], pres) for t in args.leading]
        else:
            G = pres.group
            elems = G.elements()
            den = 4 * (len(elems) - 1)
            lead = Pmf(G, {x: Fraction(3, 4) if i == 0 else Fraction(1, den) for i, x in enumerate(elems)})
            leading = [lead] * (args.n - 2)
        spec = haar_construction(pres.group, args.n, leading)
    else:
        if args.pmf is not None:
            mu = load_pmf(read_json(args.pmf)[0])
        else:
            mu = uniform(load_group(read_json(args.group)[0]))
        spec = identity_construction(mu)
    json.dump(spec.to_json(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    if args.certify:
        print(json.dumps({"certificate": certify(spec).to_json()}), file=sys.stderr)
    return 0


def cmd_sweep(args) -> int:
    cfg = dict(DEFAULT_SWEEP)
    digest = None
    if args.config is not None:
        obj, digest = read_json(args.config)
        if not isinstance(obj, dict):
            raise SchemaError("sweep config must be a JSON object")
        unknown = set(obj) - set(DEFAULT_SWEEP)
        if unknown:
            raise SchemaError(f"unknown sweep settings {sorted(unknown)}")
        cfg.update(obj)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.instances is not None:
        cfg["instances"] = args.instances
    records = []
    out = sys.stdout
    for rec in sweep(cfg, args.workers):
        records.append(rec)
        if not args.summary_only:
            out.write(json.dumps(rec, sort_keys=True) + "\n")
    summary = summarize(records, cfg)
    if digest:
        summary["input_sha256"] = digest
    out.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")
    return 2 if summary["inconsistent"] else 0


def cmd_special(args) -> int:
    report = special_case_derivations(args.kind, args.m, None, args.denominator)
    _emit("special-case", None, {"report": report.to_json()})
    return 0 if report.ok else 2


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the malformed-input code rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="idforms", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"idforms {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("admissible", help="is a admissible for GROUP (aX != 0)?")
    p.add_argument("group", help="group as JSON or text such as Z5, Z^2xZ4")
    p.add_argument("a", type=int)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("classify", help="degenerate / shifted Haar / other")
    p.add_argument("pmf", nargs="?", help="distribution JSON, file, or - for stdin")
    p.set_defaults(func=cmd_classify)

    for name, func, text in (("joint", cmd_joint, "exact joint laws of (L1,L2) and (L3,L4)"),
                             ("check", cmd_check, "are (L1,L2) and (L3,L4) identically distributed?"),
                             ("verify", cmd_verify, "full verdict for an instance")):
        p = sub.add_parser(name, help=text)
        p.add_argument("spec", nargs="?", help="instance JSON, file, or - for stdin (default)")
        if name == "verify":
            p.add_argument("--grid", type=int, default=64, help="torus mesh for sampled nonvanishing checks")
        p.set_defaults(func=func)

    p = sub.add_parser("eliminate", help="finite-difference elimination for the functional equation")
    p.add_argument("system", nargs="?", help="system JSON {a,b,c,d} or file")
    for row in "abcd":
        p.add_argument(f"--{row}", help=f"comma-separated coefficients {row}_1,...,{row}_n")
    p.add_argument("--m", type=int, help="number of left-hand functions (default n)")
    p.add_argument("--q-degree", type=int, dest="q_degree", help="degree bound of the polynomial q (omit when q = 0)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("reduce", help="coefficient normalisation on GROUP")
    p.add_argument("system")
    p.add_argument("group")
    p.add_argument("--m", type=int, help="treat the first m variables as the condition set")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("counterexample", help="emit a certified counterexample instance")
    p.add_argument("family", choices=("prop2", "haar", "identity"))
    p.add_argument("--group", default="Z3")
    p.add_argument("--x0", help="prop2: element of prime order as JSON (default: first such element)")
    p.add_argument("--m", default="3/5", help="prop2: weight of the atom at zero, in (1/2, 1)")
    p.add_argument("--n", type=int, default=3, help="haar: number of variables")
    p.add_argument("--leading", nargs="*", help="haar: n-2 distribution JSONs")
    p.add_argument("--pmf", help="identity: distribution JSON (default: Haar on --group)")
    p.add_argument("--certify", action="store_true", help="also print the certificate to stderr")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("sweep", help="seeded randomized consistency sweep (JSON lines)")
    p.add_argument("config", nargs="?", help="JSON object overriding sweep settings")
    p.add_argument("--seed", type=int)
    p.add_argument("--instances", type=int)
    p.add_argument("--workers", type=int, help="worker processes (default: IDFORMS_WORKERS or 1)")
    p.add_argument("--summary-only", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("special-case", help="unit-coefficient special-case derivations")
    p.add_argument("kind", choices=("x3_heyde", "x2_darmois"))
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--denominator", type=int, default=12)
    p.set_defaults(func=cmd_special)
    return parser


def _join_coefficient_flags(argv: Sequence[str]) -> list[str]:
    """Turn ``--d -1,1`` into ``--d=-1,1`` so negative lists are not read as options."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--a", "--b", "--c", "--d"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_coefficient_flags(sys.argv[1:] if argv is None else argv))
    try:
        return args.func(args)
    except (SchemaError, GroupMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
