"""Command line entry point.

Exit codes: 0 verified, 1 mathematical failure or obstruction (witnesses are
printed), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from importlib import resources

from . import formats
from .cocycle import check_identity
from .errors import RigidityError
from .geometry import CayleyExplorer
from .rigidity import RigidityOptions, check_cohomology, rigidify

log = logging.getLogger("cocycle_rigidity")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_WITNESSES = 5


def fixture_path(name: str):
    return resources.files("cocycle_rigidity") / "fixtures" / name


def _max_radius(args) -> int | None:
    if args.max_radius is not None:
        return args.max_radius
    env = os.environ.get("COCYCLE_MAX_RADIUS")
    return int(env) if env else None


def _words(E, elements) -> str:
    return ", ".join(E.word_label(g) for g in elements)


def cmd_group_info(args) -> int:
    G = formats.parse_group(args.group)
    E = CayleyExplorer(G, _max_radius(args))
    R_max = args.R_max if args.R_max is not None else 2 * args.r + 4
    print(f"group: {G.spec}")
    print(f"generators: {' '.join(G.generator_names)}")
    sizes = E.sphere_sizes(R_max)
    print(f"sphere sizes |S(0..{R_max})|: {' '.join(map(str, sizes))}")
    if E.exhausted:
        print(f"finite group of order {sum(sizes)}")
    for r in range(args.r + 1):
        rep = E.component_report(r, max(R_max, 2 * r + 4) if r < args.r else R_max)
        caveat = "cutoff-limited" if rep.caveat else "exact"
        print(
            f"r={r} R_max={rep.R_max} unbounded components: {rep.unbounded}, N({r})={rep.N_of_r}, "
            f"bounded components: {rep.bounded}, classification: {caveat}"
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    c = formats.load_cocycle(args.rule_file, _max_radius(args))
    log.debug("loaded %s: %d positive generators, window of %d sites", args.rule_file, len(c.positive), len(c.window))
    exhaustive = True if args.exhaustive else None
    report = check_identity(c, args.r_check, samples=args.samples, seed=args.seed, exhaustive=exhaustive)
    E, H, A = c.explorer, c.target, c.alphabet
    print(f"cocycle: {c.group.spec} -> {c.target.spec}, window L={c.L}, alphabet {''.join(A.symbols)}")
    print(f"identity check on B({args.r_check}) x B({args.r_check}): seed {args.seed}")
    print(
        f"pairs: {report.checked_pairs} ({report.exhaustive_pairs} exhaustive, {report.sampled_pairs} sampled), "
        f"evaluations: {report.checked}, failures: {len(report.failures)}"
    )
    for f in report.failures[:MAX_WITNESSES]:
        window = sorted(f.window, key=E.order_key)
        pattern = "".join(A.symbols[f.window[s]] for s in window)
        print(
            f"  witness: g={E.word_label(f.g)} h={E.word_label(f.h)} window[{_words(E, window)}]={pattern} "
            f"c(gh,x)={H.label(f.left)} c(g,hx)c(h,x)={H.label(f.right)}"
        )
    if len(report.failures) > MAX_WITNESSES:
        print(f"  ... {len(report.failures) - MAX_WITNESSES} more")
    print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_FAIL


def _options(args) -> RigidityOptions:
    return RigidityOptions(
        r_phi=args.r_phi,
        r_cohomology=args.r_phi,
        samples=args.samples,
        seed=args.seed,
        exhaustive=True if args.exhaustive else None,
        threads=args.threads,
    )


def _print_result(c, result) -> None:
    E, H = c.explorer, c.target
    opts = result.options
    print(f"cocycle: {c.group.spec} -> {c.target.spec}, window L={c.L}")
    print(f"seed: {opts.seed}")
    print("N values: " + " ".join(f"N({r})={n}" for r, n in sorted(result.N_values.items())))
    print(f"phi on B({opts.r_phi}): {len(result.phi_table)} entries")
    for g, v in sorted(result.phi_table.items(), key=lambda kv: E.order_key(kv[0])):
        if E.word_norm(g) <= 1:
            print(f"  phi({E.word_label(g)}) = {H.label(v)}")
    print(f"phi homomorphism on B({opts.r_hom}): {len(result.phi_report.failures)} failures / {result.phi_report.checked}")
    print(f"independence sweep: {len(result.independence.witnesses)} failures / {result.independence.checked}")
    print(f"locality sweep: {len(result.locality.witnesses)} failures / {result.locality.checked}")
    table = result.b_table
    print(f"b-table on B({3 * c.L}): {len(table.entries)} entries, {'complete' if table.complete else 'on demand'}")
    ver = result.verification
    mode = "exhaustive" if ver.exhaustive else f"sampled, seed {opts.seed}"
    print(f"cohomology check ({mode}): {len(ver.failures)} failures / {ver.checked}")
    if result.obstruction is not None:
        _print_witness(c, result.obstruction)
        print("OBSTRUCTION")
    else:
        print("PASS")


def _print_witness(c, w) -> None:
    E, H = c.explorer, c.target
    doc = formats.witness_doc(c, w)
    x = doc["x"]
    sites = " ".join(f"{k}:{v}" for k, v in x["sites"].items()) or "(none)"
    print(f"obstruction: {w.kind}")
    print(f"  x: default {x['default']}, sites {sites}")
    for key, value in doc["details"].items():
        if isinstance(value, dict):
            value = " ".join(f"{k}:{v}" for k, v in value["sites"].items()) or "(zero)"
        print(f"  {key}: {value}")


def cmd_rigidify(args) -> int:
    c = formats.load_cocycle(args.rule_file, _max_radius(args))
    log.debug("loaded %s: %d positive generators, window of %d sites", args.rule_file, len(c.positive), len(c.window))
    result = rigidify(c, _options(args))
    _print_result(c, result)
    if args.output:
        formats.save_result(c, result, args.output)
        print(f"wrote {args.output}")
    return EXIT_OK if result.ok else EXIT_FAIL


def cmd_check(args) -> int:
    c = formats.load_cocycle(args.rule_file, _max_radius(args))
    doc = formats.load_result(args.result_file)
    phi, table = doc.tables(c)
    log.debug("result file holds %d phi values and %d b entries", len(phi), len(table.entries))
    E, H, A = c.explorer, c.target, c.alphabet
    r = max(E.word_norm(g) for g in phi)
    report = check_cohomology(c, phi, table, r, samples=args.samples, seed=args.seed, threads=args.threads)
    mode = "exhaustive" if report.exhaustive else f"sampled, seed {args.seed}"
    print(f"cohomology check on B({r}) ({mode}): {len(report.failures)} failures / {report.checked}")
    for f in report.failures[:MAX_WITNESSES]:
        doc_f = formats.cohomology_failure_doc(c, f)
        print(f"  witness: g={doc_f['g']} window={doc_f['window']} c(g,x)={doc_f['left']} b(gx)phi(g)b(x)^-1={doc_f['right']}")
    if len(report.failures) > MAX_WITNESSES:
        print(f"  ... {len(report.failures) - MAX_WITNESSES} more")
    print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_demo(args) -> int:
    text = fixture_path("z_counterexample.cocycle.json").read_text(encoding="utf-8")
    c = formats.loads_cocycle(text, _max_radius(args))
    print("Z with c(+1, x) = u^x(0): Z has two ends, so the construction must fail")
    result = rigidify(c, _options(args))
    _print_result(c, result)
    if args.output:
        formats.save_result(c, result, args.output)
        print(f"wrote {args.output}")
    return EXIT_OK if result.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-radius", type=int, default=None, help="exploration cap (default: $COCYCLE_MAX_RADIUS or 64)")
    common.add_argument("--threads", type=int, default=1, help="worker threads; never changes output")
    common.add_argument("-v", "--verbose", action="store_true")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--samples", type=int, default=10_000)
    sampling.add_argument("--seed", type=int, default=0)
    sampling.add_argument("--exhaustive", action="store_true", help="force exhaustive enumeration")

    parser = argparse.ArgumentParser(
        prog="cocycle-rigidity",
        description="Build and verify phi and b with c(g, x) = b(gx) phi(g) b(x)^-1 for local cocycles.",
        epilog="exit codes: 0 verified, 1 failure or obstruction, 2 usage or I/O error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group-info", parents=[common], help="spheres, ends and N(r) of a group")
    p.add_argument("--group", required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--R-max", dest="R_max", type=int, default=None, help="default 2r+4")
    p.set_defaults(func=cmd_group_info)

    p = sub.add_parser("verify-cocycle", parents=[common, sampling], help="check the cocycle identity")
    p.add_argument("rule_file")
    p.add_argument("--r-check", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rigidify", parents=[common, sampling], help="compute phi and b and verify them")
    p.add_argument("rule_file")
    p.add_argument("--r-phi", type=int, default=4)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_rigidify)

    p = sub.add_parser("check-cohomology", parents=[common, sampling], help="re-verify a saved result")
    p.add_argument("result_file")
    p.add_argument("rule_file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("demo-counterexample", parents=[common, sampling], help="the two-ended failure on Z")
    p.add_argument("--r-phi", type=int, default=4)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (RigidityError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
