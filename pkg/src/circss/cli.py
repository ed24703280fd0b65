"""Command-line front end.

Subcommands: height, graph, beta, scan, tables, verify. Data goes to stdout
(or --output), diagnostics to stderr. Exit codes: 0 success, 1 usage or
domain errors, 2 a CSS counterexample found by scan/verify (which would be
the most important possible output of this tool and gets a full certificate).

The CLI does no arithmetic of its own beyond formatting; every number comes
from a library call. The default exact-solver cap can be set with the
CIRCSS_EXACT_CAP environment variable and overridden per run with --exact-cap.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence, TextIO

from . import __version__
from .cayley import (
    DEFAULT_EXACT_CAP,
    circulant,
    cycle_certificate,
    graph_report,
)
from .errors import CircssError
from .fas import beta_exact, from_graph
from .heights import canonicalize, height, height_bound, nonzero_count, parse_coords
from .residues import make_modulus
from .scanner import (
    ScanConfig,
    VERDICT_EXACT_FAIL,
    records_to_csv,
    records_to_json,
    reproduce_tables,
    scan,
    scan_summary,
    verify_css_up_to,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COUNTEREXAMPLE = 2

ENV_EXACT_CAP = "CIRCSS_EXACT_CAP"


def _default_cap() -> int:
    raw = os.environ.get(ENV_EXACT_CAP)
    if raw is None:
        return DEFAULT_EXACT_CAP
    try:
        return int(raw)
    except ValueError:
        print(
            f"warning: ignoring non-integer {ENV_EXACT_CAP}={raw!r}",
            file=sys.stderr,
        )
        return DEFAULT_EXACT_CAP


def _parse_n_range(text: str) -> tuple[int, int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--n-range wants LO:HI or a single N, got {text!r}"
        ) from None
    return lo, hi


def _reduce_with_note(values: list[int], n: int, what: str) -> list[int]:
    reduced = [v % n for v in values]
    changed = [(v, r) for v, r in zip(values, reduced) if v != r]
    if changed:
        notes = ", ".join(f"{v} -> {r}" for v, r in changed)
        print(f"note: reduced {what} mod {n}: {notes}", file=sys.stderr)
    return reduced


def _dedupe_with_warning(values: list[int]) -> list[int]:
    seen: list[int] = []
    dupes = []
    for v in values:
        if v in seen:
            dupes.append(v)
        else:
            seen.append(v)
    if dupes:
        print(
            f"warning: dropped duplicate connection elements {sorted(set(dupes))}",
            file=sys.stderr,
        )
    return seen


def _open_output(args) -> TextIO:
    if args.output is None or args.output == "-":
        return sys.stdout
    return open(args.output, "w", encoding="utf-8", newline="")


def _emit(args, text: str) -> None:
    out = _open_output(args)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()


def _format_tuple(values: Sequence[int]) -> str:
    return "<" + ",".join(str(v) for v in values) + ">"


# --- subcommands --------------------------------------------------------------

def cmd_height(args) -> int:
    m = make_modulus(args.mod)
    coords = _reduce_with_note(parse_coords(args.coords), m.n, "coordinates")
    tup = canonicalize(coords, m)
    res = height(tup)
    if args.format == "json":
        obj = {
            "n": m.n,
            "coords": list(tup.coords),
            "canonical": list(tup.canonical),
            "height": res.value,
            "witness": res.witness,
            "per_term": list(res.per_term),
            "nonzero_count": nonzero_count(tup),
            "height_bound": height_bound(tup),
        }
        _emit(args, json.dumps(obj, indent=2) + "\n")
    elif args.format == "csv":
        _emit(
            args,
            "n,coords,canonical,height,witness,nonzero_count,height_bound\n"
            f"{m.n},{'|'.join(map(str, tup.coords))},"
            f"{'|'.join(map(str, tup.canonical))},{res.value},{res.witness},"
            f"{nonzero_count(tup)},{height_bound(tup)}\n",
        )
    else:
        lines = [
            f"h_{m.n}({_format_tuple(tup.coords)}) = {res.value} (witness k={res.witness})",
            f"terms at witness: {'+'.join(map(str, res.per_term))}",
            f"canonical class: {_format_tuple(tup.canonical)}",
            f"bound floor(d*.N/2) = {height_bound(tup)} with d* = {nonzero_count(tup)}",
        ]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_graph(args) -> int:
    m = make_modulus(args.mod)
    conn = _dedupe_with_warning(
        _reduce_with_note(parse_coords(args.conn), m.n, "connection set")
    )
    g = circulant(m, conn)
    rep = graph_report(g, cap=args.exact_cap)
    certs = {l: cycle_certificate(g, l) for l in (1, 2, 3)}
    if args.format == "json":
        obj = {
            "n": rep.n,
            "d": rep.d,
            "conn": list(g.conn),
            "has_loop": rep.has_loop,
            "has_digon": rep.has_digon,
            "has_triangle": rep.has_triangle,
            "triangle_free": rep.triangle_free,
            "gamma": rep.gamma,
            "height_bound_beta": rep.height_bound_beta,
            "css_fast_path": rep.css_fast_path,
            "cycle_certificates": {
                str(l): (list(c) if c else None) for l, c in certs.items()
            },
        }
        _emit(args, json.dumps(obj, indent=2) + "\n")
    elif args.format == "csv":
        _emit(
            args,
            "n,d,conn,has_loop,has_digon,has_triangle,triangle_free,gamma,"
            "height_bound_beta,css_fast_path\n"
            f"{rep.n},{rep.d},{'|'.join(map(str, g.conn))},"
            f"{str(rep.has_loop).lower()},{str(rep.has_digon).lower()},"
            f"{str(rep.has_triangle).lower()},{str(rep.triangle_free).lower()},"
            f"{'' if rep.gamma is None else rep.gamma},"
            f"{rep.height_bound_beta},{str(rep.css_fast_path).lower()}\n",
        )
    else:
        lines = [f"Cay(Z/{rep.n}, {{{','.join(map(str, g.conn))}}}): n={rep.n} d={rep.d}"]
        names = {1: "loop", 2: "digon", 3: "triangle"}
        for l in (1, 2, 3):
            cert = certs[l]
            if cert is None:
                lines.append(f"{names[l]}: none")
            else:
                total = sum(cert)
                lines.append(
                    f"{names[l]}: yes ({'+'.join(map(str, cert))} = {total} "
                    f"= 0 mod {rep.n})"
                )
        lines.append(f"triangle-free: {'yes' if rep.triangle_free else 'no'}")
        if rep.gamma is None:
            lines.append(f"gamma: not computed (digon present and N > cap {args.exact_cap})")
        else:
            lines.append(f"gamma: {rep.gamma}")
        lines.append(f"height bound on beta: {rep.height_bound_beta}")
        lines.append(
            f"fast path (4d <= N-1): {'yes' if rep.css_fast_path else 'no'}"
        )
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_beta(args) -> int:
    m = make_modulus(args.mod)
    conn = _dedupe_with_warning(
        _reduce_with_note(parse_coords(args.conn), m.n, "connection set")
    )
    g = circulant(m, conn)
    res = beta_exact(from_graph(g), cap=args.exact_cap)
    bound = graph_report(g, cap=args.exact_cap).height_bound_beta
    if args.format == "json":
        obj = {
            "n": g.n,
            "conn": list(g.conn),
            "beta": res.beta,
            "height_bound": bound,
        }
        if args.certificate:
            obj["ordering"] = list(res.ordering)
            obj["removed"] = [list(e) for e in res.removed]
        _emit(args, json.dumps(obj, indent=2) + "\n")
    elif args.format == "csv":
        header = "n,conn,beta,height_bound"
        row = f"{g.n},{'|'.join(map(str, g.conn))},{res.beta},{bound}"
        if args.certificate:
            header += ",ordering,removed"
            row += (
                f",{'|'.join(map(str, res.ordering))},"
                f"{'|'.join(f'{u}>{v}' for u, v in res.removed)}"
            )
        _emit(args, header + "\n" + row + "\n")
    else:
        lines = [
            f"beta(Cay(Z/{g.n}, {{{','.join(map(str, g.conn))}}})) = {res.beta}",
            f"height bound: {bound}",
            f"ordering: {' '.join(map(str, res.ordering))}",
            f"removed ({len(res.removed)}): "
            + " ".join(f"({u},{v})" for u, v in res.removed),
        ]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _report_counterexamples(failing, exact_cap) -> None:
    print("CSS COUNTEREXAMPLE FOUND", file=sys.stderr)
    for rec in failing:
        cert = beta_exact(
            from_graph(circulant(rec.n, rec.conn)), cap=exact_cap
        )
        print(
            f"  N={rec.n} A={{{','.join(map(str, rec.conn))}}} "
            f"beta={cert.beta} gamma_num={rec.gamma_num} "
            f"(needs 4*beta <= gamma_num)",
            file=sys.stderr,
        )
        print(f"  ordering: {' '.join(map(str, cert.ordering))}", file=sys.stderr)
        print(
            "  removed: " + " ".join(f"({u},{v})" for u, v in cert.removed),
            file=sys.stderr,
        )


def cmd_scan(args) -> int:
    lo, hi = args.n_range
    cfg = ScanConfig(
        d=args.d,
        n_lo=lo,
        n_hi=hi,
        mode="exact" if args.exact else "bound-only",
        exact_cap=args.exact_cap,
        dedupe=args.dedupe,
    )
    records = scan(cfg, jobs=args.jobs)
    if args.format == "json":
        _emit(args, records_to_json(records))
    elif args.format == "csv":
        _emit(args, records_to_csv(records))
    else:
        lines = []
        for r in records:
            beta = "-" if r.beta is None else str(r.beta)
            lines.append(
                f"N={r.n} A={{{','.join(map(str, r.conn))}}} "
                f"tf={'yes' if r.triangle_free else 'no'} h={r.height} "
                f"gamma/2={r.gamma_num}/4 beta={beta} {r.verdict}"
            )
        summary = scan_summary(records)
        lines.append("summary: " + " ".join(f"{k}={v}" for k, v in summary.items()))
        _emit(args, "\n".join(lines) + "\n")
    failing = [r for r in records if r.verdict == VERDICT_EXACT_FAIL]
    if failing:
        _report_counterexamples(failing, args.exact_cap)
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_tables(args) -> int:
    tables = reproduce_tables()
    if args.format == "json":
        obj = [
            {
                "d": d,
                "n": n,
                "rows": [
                    {
                        "rep": list(row.rep),
                        "height": row.height,
                        "triangle_free": row.triangle_free,
                        "in_reference": row.in_reference,
                    }
                    for row in rows
                ],
            }
            for (d, n), rows in tables.items()
        ]
        _emit(args, json.dumps(obj, indent=2) + "\n")
    elif args.format == "csv":
        lines = ["d,n,rep,height,triangle_free,in_reference"]
        for (d, n), rows in tables.items():
            for row in rows:
                lines.append(
                    f"{d},{n},{'|'.join(map(str, row.rep))},{row.height},"
                    f"{str(row.triangle_free).lower()},{str(row.in_reference).lower()}"
                )
        _emit(args, "\n".join(lines) + "\n")
    else:
        lines = []
        for (d, n), rows in tables.items():
            lines.append(f"d={d} N={n} ({len(rows)} classes)")
            for row in rows:
                star = "*" if row.triangle_free else " "
                ref = "" if row.in_reference else "  [beyond reference table]"
                lines.append(
                    f"  {_format_tuple(row.rep)}{star} h={row.height}{ref}"
                )
        lines.append("all reference rows reproduced exactly")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    outcome = verify_css_up_to(args.n_max, exact_cap=args.exact_cap)
    if args.format == "json":
        _emit(args, json.dumps(outcome.to_obj(), indent=2) + "\n")
    elif args.format == "csv":
        lines = ["n,d,instances"]
        for (n, d), c in outcome.counts:
            lines.append(f"{n},{d},{c}")
        ratio = outcome.max_ratio
        lines.append(
            f"# summary n_max={outcome.n_max} instances={outcome.instances} "
            f"failures={len(outcome.failures)} "
            f"hamidoune_violations={len(outcome.hamidoune_violations)} "
            f"max_ratio={'' if ratio is None else f'{ratio.numerator}/{ratio.denominator}'}"
        )
        _emit(args, "\n".join(lines) + "\n")
    else:
        lines = [
            f"verified beta <= gamma/2 for every triangle-free Cay(Z/N, A), N <= {outcome.n_max}",
            f"instances checked: {outcome.instances}",
        ]
        for (n, d), c in outcome.counts:
            lines.append(f"  N={n} d={d}: {c}")
        if outcome.max_ratio is not None:
            n, conn = outcome.max_ratio_at
            lines.append(
                f"max beta/(gamma/2) = {outcome.max_ratio} "
                f"~ {float(outcome.max_ratio):.4f} at N={n} "
                f"A={{{','.join(map(str, conn))}}}"
            )
        lines.append(f"failures: {len(outcome.failures)}")
        lines.append(
            f"triangle-free sets with 3d >= N: {len(outcome.hamidoune_violations)}"
        )
        _emit(args, "\n".join(lines) + "\n")
    if outcome.failures:
        print("CSS COUNTEREXAMPLE FOUND", file=sys.stderr)
        for f in outcome.failures:
            print(
                f"  N={f.n} A={{{','.join(map(str, f.conn))}}} beta={f.beta} "
                f"gamma_num={f.gamma_num}",
                file=sys.stderr,
            )
            print(f"  ordering: {' '.join(map(str, f.ordering))}", file=sys.stderr)
            print(
                "  removed: " + " ".join(f"({u},{v})" for u, v in f.removed),
                file=sys.stderr,
            )
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circss",
        description=(
            "Heights of projective classes over Z/NZ, circulant Cayley "
            "digraphs, exact minimum feedback arc sets, and exhaustive "
            "verification of the CSS inequality beta <= gamma/2."
        ),
        epilog=f"Default exact cap comes from ${ENV_EXACT_CAP} (fallback {DEFAULT_EXACT_CAP}).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, jobs=False):
        p.add_argument(
            "--format", choices=("text", "csv", "json"), default="text",
            help="output format (default text)",
        )
        p.add_argument(
            "--output", metavar="PATH", default=None,
            help="write data here instead of stdout",
        )
        p.add_argument(
            "--exact-cap", type=int, default=_default_cap(), metavar="N",
            help="largest N the exact solver and edge materialization accept",
        )
        if jobs:
            p.add_argument(
                "--jobs", type=int, default=os.cpu_count() or 1, metavar="J",
                help="worker processes for the scan (default: available parallelism)",
            )

    p = sub.add_parser(
        "height",
        help="height of a projective class: min over units k of sum (k*a_i mod N)",
    )
    p.add_argument("--mod", type=int, required=True, metavar="N")
    p.add_argument(
        "--coords", required=True, metavar="a1,a2,...",
        help="tuple coordinates; reduced mod N with a note if that changes them",
    )
    add_common(p)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser(
        "graph",
        help="inspect Cay(Z/NZ, A): short cycles with certificates, gamma, bounds",
    )
    p.add_argument("--mod", type=int, required=True, metavar="N")
    p.add_argument("--conn", required=True, metavar="a1,a2,...")
    add_common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser(
        "beta",
        help="exact minimum feedback arc set size with an optimal-ordering certificate",
    )
    p.add_argument("--mod", type=int, required=True, metavar="N")
    p.add_argument("--conn", required=True, metavar="a1,a2,...")
    p.add_argument(
        "--certificate", action="store_true",
        help="include ordering and removed edges in csv/json output too",
    )
    add_common(p)
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser(
        "scan",
        help="enumerate all size-d connection sets over an N range and "
             "settle beta <= gamma/2 for each",
    )
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-range", type=_parse_n_range, required=True, metavar="LO:HI")
    p.add_argument(
        "--exact", action="store_true",
        help="resolve bound failures with the exact solver",
    )
    p.add_argument(
        "--dedupe", action="store_true",
        help="keep one connection set per projective tuple class",
    )
    add_common(p, jobs=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser(
        "tables",
        help="regenerate the small height tables and diff them against the "
             "embedded reference rows",
    )
    add_common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser(
        "verify",
        help="exhaustively check beta <= gamma/2 for every triangle-free "
             "circulant digraph with N up to --n-max",
    )
    p.add_argument("--n-max", type=int, required=True)
    add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; this tool reserves 2 for a CSS
        # counterexample, so usage problems map to 1.
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except CircssError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
