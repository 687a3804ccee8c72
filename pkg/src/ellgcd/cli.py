"""Command line entry point: ``ellgcd <subcommand> [options]``.

Exit codes: 0 success, 2 schema or usage error, 3 resource cap hit (partial
output flagged), 64 unknown subcommand.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from . import __version__
from .ar_baseline import ArConfig, ar_bound_scan
from .corpus import EXAMPLES, example_config
from .errors import DependentInputs, EllGcdError, IdenticallyZeroSection, ResourceCap, SchemaError
from .gcd_engine import (
    SectionPair,
    bounding_divisor,
    gcd_degree_table,
    locus_height_stats,
    multiplicity_bound_scan,
    relation_locus,
    stability_scan,
)
from .reports import Report, divisor_cell, fmt_float, gcd_report, place_compact, place_json, render, stability_report
from .serialize import (
    RunConfig,
    config_digest,
    divisor_to_json,
    fraction_str,
    load_config,
    parse_coeff_list,
    point_to_json,
    poly_to_json,
    surface_to_json,
)
from .specialization import (
    canonical_height_q,
    fiber_height_trace,
    simultaneous_relation_scan,
    specialize_curve,
    specialize_point,
    torsion_order,
)
from .surface import canonical_height_ff

log = logging.getLogger("ellgcd")

EXIT_OK, EXIT_SCHEMA, EXIT_CAP, EXIT_USAGE = 0, 2, 3, 64
SUBCOMMANDS = ("gcd-table", "stability", "mult-bound", "locus", "heights", "specialize", "relations", "ar")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _common(p: argparse.ArgumentParser, needs_config: bool = True):
    if needs_config:
        src = p.add_mutually_exclusive_group()
        src.add_argument("--config", help="TOML run configuration")
        src.add_argument("--example", choices=sorted(EXAMPLES), help="built-in example family")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write here instead of stdout")
    p.add_argument("--workers", type=int, default=None, help="process pool size (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellgcd", description="GCD divisors of sections on elliptic surfaces")
    parser.add_argument("--version", action="version", version=f"ellgcd {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")

    p = sub.add_parser("gcd-table", help="degrees of GCD([n1]P1 - Q1, [n2]P2 - Q2)")
    _common(p)
    p.add_argument("--n-max", type=int)
    p.add_argument("--diagonal", action="store_true")

    p = sub.add_parser("stability", help="n_gamma law, density bound and stable primes")
    _common(p)
    p.add_argument("--n-max", type=int)
    p.add_argument("--prime-max", type=int)

    p = sub.add_parser("mult-bound", help="per-place maximal multiplicities over n")
    _common(p)
    p.add_argument("--curve", type=int, choices=(1, 2))
    p.add_argument("--n-max", type=int)
    p.add_argument("--n-min", type=int)

    p = sub.add_parser("locus", help="locus of [m]P = Q and its root-height statistics")
    _common(p)
    p.add_argument("--curve", type=int, choices=(1, 2))
    p.add_argument("--m", type=int)

    p = sub.add_parser("heights", help="canonical height and its trace over fibres")
    _common(p)
    p.add_argument("--curve", type=int, choices=(1, 2))
    p.add_argument("--depth", type=int)
    p.add_argument("--t", type=_rational, nargs="*", help="fibre parameters for the trace")

    p = sub.add_parser("specialize", help="fibre and points at t")
    _common(p)
    p.add_argument("--curve", type=int, choices=(1, 2))
    p.add_argument("--t", type=_rational)
    p.add_argument("--depth", type=int)

    p = sub.add_parser("relations", help="rational t where both relations hold")
    _common(p)
    p.add_argument("--t-height-cap", type=float)

    p = sub.add_parser("ar", help="gcd(a^n - 1, b^n - 1) baseline")
    _common(p)
    p.add_argument("--a", help='coefficients lowest degree first, e.g. "0,1"')
    p.add_argument("--b")
    p.add_argument("--n-max", type=int)
    return parser


def _param(args, cfg: RunConfig, name: str, default):
    val = getattr(args, name, None)
    if val is None:
        val = cfg.params.get(name, default)
    return val


def _load(args) -> RunConfig:
    if getattr(args, "config", None):
        return load_config(args.config)
    if getattr(args, "example", None):
        return example_config(args.example)
    return RunConfig()


def _pair(cfg: RunConfig) -> SectionPair:
    if set(cfg.members) != {"E1", "E2"}:
        raise SchemaError("this subcommand needs both [E1] and [E2]")
    (E1, P1, Q1), (E2, P2, Q2) = cfg.members["E1"], cfg.members["E2"]
    return SectionPair(E1, P1, E2, P2, Q1, Q2, cfg.independence_asserted)


def _member(cfg: RunConfig, curve: int):
    key = f"E{curve}"
    if key not in cfg.members:
        raise SchemaError(f"config has no [{key}]")
    return cfg.members[key]


# -- subcommand bodies; each returns a Report ------------------------------------

def _cmd_gcd_table(args, cfg):
    n_max = int(_param(args, cfg, "n_max", 10))
    workers = int(_param(args, cfg, "workers", 1))
    rep = gcd_degree_table(_pair(cfg), n_max, diagonal_only=args.diagonal, workers=workers)
    out = gcd_report(rep)
    if rep.rows:
        out.summary["bounding_divisor"] = divisor_cell(bounding_divisor(rep))
        out.json_body["bounding_divisor"] = divisor_to_json(bounding_divisor(rep))
    return out


def _cmd_stability(args, cfg):
    n_max = int(_param(args, cfg, "n_max", 30))
    prime_max = int(_param(args, cfg, "prime_max", n_max))
    workers = int(_param(args, cfg, "workers", 1))
    return stability_report(stability_scan(_pair(cfg), n_max, prime_max, workers=workers))


def _cmd_mult_bound(args, cfg):
    E, P, Q = _member(cfg, int(_param(args, cfg, "curve", 1)))
    n_max = int(_param(args, cfg, "n_max", 10))
    n_min = int(_param(args, cfg, "n_min", 1))
    workers = int(_param(args, cfg, "workers", 1))
    scan = multiplicity_bound_scan(E, P, Q, n_max, n_min=n_min, workers=workers)
    items = sorted(scan.items(), key=lambda kv: kv[0])
    rows = [[place_compact(p), p.degree, m, n] for p, (m, n) in items]
    body = {"n_min": n_min, "n_max": n_max,
            "places": [{"place": place_json(p), "max_multiplicity": m, "argmax_n": n} for p, (m, n) in items]}
    return Report("mult-bound", ["place", "place_degree", "max_multiplicity", "argmax_n"], rows, body)


def _cmd_locus(args, cfg):
    E, P, Q = _member(cfg, int(_param(args, cfg, "curve", 1)))
    m = int(_param(args, cfg, "m", 2))
    D, f = relation_locus(E, P, Q, m)
    stats = locus_height_stats(f)
    rows = [[place_compact(p), p.degree, k] for p, k in D.places()]
    summary = {"m": m, "locus_polynomial": " ".join(poly_to_json(f)),
               "mean_height": fmt_float(stats.mean_height), "max_height": fmt_float(stats.max_height),
               "degree": stats.degree, "error": fmt_float(stats.error)}
    body = {"m": m, "divisor": divisor_to_json(D), "locus_polynomial": poly_to_json(f),
            "stats": {"mean_height": fmt_float(stats.mean_height), "max_height": fmt_float(stats.max_height),
                      "degree": stats.degree, "error": fmt_float(stats.error)}}
    return Report("locus", ["place", "place_degree", "multiplicity"], rows, body, summary)


def _cmd_heights(args, cfg):
    E, P, _ = _member(cfg, int(_param(args, cfg, "curve", 1)))
    depth = int(_param(args, cfg, "depth", 4))
    ts = args.t if args.t else [Fraction(x) for x in cfg.params.get("t", [])]
    h = canonical_height_ff(E, P, depth)
    trace = fiber_height_trace(E, P, ts)
    rows = [[fraction_str(r.t), fmt_float(r.h_base), fmt_float(r.fiber_height), fmt_float(r.ratio), r.marker]
            for r in trace]
    summary = {"canonical_height": fmt_float(h.value), "error": fmt_float(h.error), "depth": depth}
    body = {"canonical_height": fmt_float(h.value), "error": fmt_float(h.error), "depth": depth,
            "estimates": [fraction_str(e) for e in h.estimates],
            "trace": [dict(zip(("t", "h_base", "fiber_height", "ratio", "marker"), row)) for row in rows]}
    return Report("heights", ["t", "h_base", "fiber_height", "ratio", "marker"], rows, body, summary)


def _cmd_specialize(args, cfg):
    E, P, Q = _member(cfg, int(_param(args, cfg, "curve", 1)))
    t = args.t if args.t is not None else Fraction(cfg.params.get("t", 0))
    depth = int(_param(args, cfg, "depth", 5))
    Et = specialize_curve(E, t)
    rows = []
    body = {"t": fraction_str(t), "a": fraction_str(Et.a), "b": fraction_str(Et.b), "points": {}}
    for name, S in (("P", P), ("Q", Q)):
        try:
            St = specialize_point(S, t)
        except EllGcdError:
            St = None
        if St is None or St.is_identity:
            rows.append([name, "identity", "", 1, "0"])
            body["points"][name] = {"point": "identity", "torsion_order": 1, "height": "0"}
            continue
        order = torsion_order(Et, St)
        h = canonical_height_q(Et, St, depth)
        rows.append([name, fraction_str(St.x), fraction_str(St.y), "" if order is None else order, fmt_float(h.value)])
        body["points"][name] = {"x": fraction_str(St.x), "y": fraction_str(St.y),
                                "torsion_order": order, "height": fmt_float(h.value)}
    summary = {"t": fraction_str(t), "a": fraction_str(Et.a), "b": fraction_str(Et.b)}
    return Report("specialize", ["point", "x", "y", "torsion_order", "height"], rows, body, summary)


def _cmd_relations(args, cfg):
    cap = float(_param(args, cfg, "t_height_cap", 2.0))
    workers = int(_param(args, cfg, "workers", 1))
    ws = simultaneous_relation_scan(_pair(cfg), cap, workers=workers)
    rows = [[fraction_str(w.t), w.m1, w.m2, fmt_float(w.h_base),
             fmt_float(w.fiber_heights[0]), fmt_float(w.fiber_heights[1])] for w in ws]
    header = ["t", "m1", "m2", "h_base", "fiber_height_1", "fiber_height_2"]
    body = {"t_height_cap": cap, "witnesses": [dict(zip(header, r)) for r in rows]}
    return Report("relations", header, rows, body)


def _cmd_ar(args, cfg):
    if args.a or args.b:
        if not (args.a and args.b):
            raise SchemaError("--a and --b go together")
        a, b = parse_coeff_list(args.a), parse_coeff_list(args.b)
        cfg.ar = (a, b)
    if cfg.ar is None:
        raise SchemaError("ar needs --a/--b or an [ar] table")
    n_max = int(_param(args, cfg, "n_max", 36))
    try:
        ac = ArConfig(*cfg.ar)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    scan = ar_bound_scan(ac, n_max)
    rows = [[r.n1, r.n2, r.degree, " ".join(poly_to_json(r.gcd))] for r in scan.rows]
    h = ",".join(poly_to_json(scan.h_candidate))
    body = {"h_candidate": poly_to_json(scan.h_candidate),
            "rows": [{"n1": r.n1, "n2": r.n2, "deg_gcd": r.degree, "gcd": poly_to_json(r.gcd)} for r in scan.rows]}
    return Report("ar", ["n1", "n2", "deg_gcd", "gcd"], rows, body, {"h_candidate": h})


COMMANDS = {
    "gcd-table": _cmd_gcd_table,
    "stability": _cmd_stability,
    "mult-bound": _cmd_mult_bound,
    "locus": _cmd_locus,
    "heights": _cmd_heights,
    "specialize": _cmd_specialize,
    "relations": _cmd_relations,
    "ar": _cmd_ar,
}


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    first = next((a for a in argv if not a.startswith("-")), None)
    if first not in SUBCOMMANDS:
        if argv and argv[0] in ("-h", "--help", "--version"):
            try:
                parser.parse_args(argv)
            except SystemExit as exc:
                return int(exc.code or 0)
        parser.print_usage(sys.stderr)
        print(f"ellgcd: unknown or missing subcommand; choose from {', '.join(SUBCOMMANDS)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    try:
        cfg = _load(args)
    except (SchemaError, KeyError) as exc:
        print(f"ellgcd: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    meta_base = {"tool": "ellgcd", "version": __version__, "command": args.command}
    try:
        report = COMMANDS[args.command](args, cfg)
    except ResourceCap as exc:
        print(f"ellgcd: resource cap: {exc}", file=sys.stderr)
        partial = exc.partial
        if partial is not None and hasattr(partial, "rows") and hasattr(partial, "bad_places"):
            report = gcd_report(partial)
            report.complete = False
            _emit(render(report, args.format, _meta(meta_base, args, cfg)), args.out)
        return EXIT_CAP
    except (SchemaError, DependentInputs, IdenticallyZeroSection, ValueError) as exc:
        print(f"ellgcd: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    _emit(render(report, args.format, _meta(meta_base, args, cfg)), args.out)
    return EXIT_OK


def _meta(base: dict, args, cfg: RunConfig) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items())
             if k not in ("command", "config", "example", "out", "format", "workers") and v not in (None, False, [])}
    canon = cfg.canonical()
    canon["flags"] = {k: (str(v) if not isinstance(v, (int, float, bool, str, list)) else
                          [str(x) for x in v] if isinstance(v, list) else v) for k, v in flags.items()}
    return dict(base, config_digest=config_digest(canon))


def main():
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
