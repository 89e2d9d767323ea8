"""pstiefel command line.

Exit codes: 0 success (or some theorem applies), 1 no theorem applies or
oracle mismatches, 2 usage errors, 3 parameters outside the supported regime.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import textwrap
from typing import Sequence

from .algebra import graded_table
from .config import GridConfig, OutputConfig, TableConfig
from .errors import DomainError, UnsupportedRegime
from .grid import TABLE_COLUMNS, verdict_table, verify_grid, verify_pw, verify_wm
from .plocal import check_prime, is_odd_prime
from .spaces import SpaceDescriptor, presentation
from .verdict import SCHEMA_VERSION, full_verdict

EXIT_OK, EXIT_NONE, EXIT_USAGE, EXIT_REGIME = 0, 1, 2, 3

SPACES = ("PW", "W", "PLW", "WM", "Y", "Lens", "CP")


class UsageError(Exception):
    pass


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dump_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow({c: _cell(row.get(c)) for c in columns})
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return str(v)


def _mark(ok: bool, out: OutputConfig) -> str:
    word = "pass" if ok else "fail"
    if out.color:
        return f"\x1b[{32 if ok else 31}m{word}\x1b[0m"
    return word


def _wrap(text: str, out: OutputConfig) -> str:
    return "\n".join(textwrap.wrap(text, out.width)) if len(text) > out.width else text


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _int_range(text: str) -> tuple[int, ...]:
    """'2..8', '2-8' or '3' (inclusive) or a comma list."""
    for sep in ("..", "-"):
        if sep in text:
            a, b = text.split(sep, 1)
            try:
                lo, hi = int(a), int(b)
            except ValueError as exc:
                raise argparse.ArgumentTypeError(f"bad range {text!r}") from exc
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {text!r}")
            return tuple(range(lo, hi + 1))
    return _int_list(text)


def _add_space_args(sp: argparse.ArgumentParser, choices: Sequence[str] = SPACES) -> None:
    sp.add_argument("--space", required=True, choices=choices)
    sp.add_argument("--n", type=int, help="n (for Lens: the odd dimension)")
    sp.add_argument("--k", type=int)
    sp.add_argument("--l", type=_int_list, help="weights for PLW, e.g. 1,2")
    sp.add_argument("--m", type=int)
    sp.add_argument("--p", type=int, required=True)


def _add_format(sp: argparse.ArgumentParser, default: str = "json") -> None:
    sp.add_argument("--format", choices=("json", "markdown", "csv"), default=default)


def _descriptor(args) -> SpaceDescriptor:
    s = args.space
    if s == "Lens":
        return SpaceDescriptor("Lens", n=args.n, m=args.m)
    if s == "CP":
        return SpaceDescriptor("CP", n=args.n)
    return SpaceDescriptor(s, n=args.n, k=args.k, l=args.l if s == "PLW" else None,
                           m=args.m if s == "WM" else None)


def _prime(p: int) -> int:
    check_prime(p)
    return p


def cmd_cohomology(args, out: OutputConfig) -> tuple[str, int]:
    p = _prime(args.p)
    s = _descriptor(args)
    P = presentation(s, p)
    table = graded_table(P, args.top_degree)
    if out.fmt == "json":
        data = {
            "schema_version": SCHEMA_VERSION,
            "space": s.to_json(),
            "prime": p,
            "presentation": P.to_json(),
            "table": table.to_json(),
        }
        return dump_json(data), EXIT_OK
    rows = [
        {"degree": d, "free_rank": table.rank(d), "torsion": list(table.torsion_at(d)),
         "module": table.describe(d, p)}
        for d in range(table.top_degree + 1)
        if table.rank(d) or table.torsion_at(d)
    ]
    if out.fmt == "csv":
        return dump_csv(rows, ("degree", "free_rank", "torsion")), EXIT_OK
    lines = [f"## H^*({s.label()}; Z_({p}))", "", _wrap(P.render(), out), ""]
    if P.notice:
        lines += [f"> {P.notice}", ""]
    lines += ["| degree | module |", "|---|---|"]
    lines += [f"| {r['degree']} | {r['module']} |" for r in rows]
    lines += ["", f"zero in degrees {table.top_nonzero_degree() + 1}..{table.top_degree}"
              if table.top_nonzero_degree() < table.top_degree else ""]
    return "\n".join(lines).rstrip() + "\n", EXIT_OK


def cmd_verdict(args, out: OutputConfig) -> tuple[str, int]:
    p = _prime(args.p)
    v = full_verdict(_descriptor(args), p)
    code = EXIT_OK if v.applies else EXIT_NONE
    if out.fmt == "json":
        return dump_json(v.to_json()), code
    if out.fmt == "csv":
        rows = [
            {"theorem": t.theorem, "hypothesis": h.name, "check": h.formula, "pass": h.passed,
             "theorem_pass": t.passed, "stable": t.stable}
            for t in v.evaluated for h in t.hypotheses
        ]
        return dump_csv(rows, ("theorem", "hypothesis", "check", "pass", "theorem_pass", "stable")), code
    text = v.to_markdown()
    if out.color:
        text = text.replace("(pass)", f"({_mark(True, out)})").replace("(fail)", f"({_mark(False, out)})")
    return text, code


def _verify_render(rows: list[dict], out: OutputConfig, header: dict) -> str:
    mism = [r for r in rows if not r["ok"]]
    if out.fmt == "json":
        return dump_json({"schema_version": SCHEMA_VERSION, **header, "points": rows,
                          "mismatches": len(mism)})
    cols = ("space", "n", "k", "p", "m", "truncation", "equal", "dd_checks", "dd_failures",
            "converged", "ok", "first_mismatch")
    if out.fmt == "csv":
        return dump_csv(rows, cols)
    lines = [f"## oracle verification: {len(rows)} points, {len(mism)} mismatches", ""]
    lines += ["| space | n | k | p | result | first mismatch |", "|---|---|---|---|---|---|"]
    for r in rows:
        fm = r["first_mismatch"]
        where = "" if fm is None else f"degree {fm['degree']}: {fm['left']} vs {fm['right']}"
        lines.append(f"| {r['space']} | {r['n']} | {r['k']} | {r['p']} | {_mark(r['ok'], out)} | {where} |")
    return "\n".join(lines) + "\n"


def cmd_verify(args, out: OutputConfig) -> tuple[str, int]:
    if args.grid:
        n_max, p_max = args.grid
        cfg = GridConfig(n_max=n_max, p_max=p_max, workers=args.workers, max_degree=args.max_degree)
        if not cfg.within_cap():
            raise UsageError(f"grid ({n_max}, {p_max}) exceeds the safety cap "
                             f"(n <= {cfg.n_cap}, p <= {cfg.p_cap})")
        if args.perturb is not None:
            raise UsageError("--perturb applies to single-point verification")
        rows = verify_grid(cfg.points(), cfg.workers, cfg.max_degree)
        header = {"grid": {"n_max": n_max, "p_max": p_max}}
    else:
        if args.space is None or args.n is None or args.k is None or args.p is None:
            raise UsageError("verify needs --grid NMAX PMAX or --space/--n/--k/--p")
        p = _prime(args.p)
        if args.space == "PW":
            res = verify_pw(args.n, args.k, p, args.max_degree, args.perturb)
        else:
            if args.m is None:
                raise UsageError("WM verification needs --m")
            res = verify_wm(args.n, args.k, args.m, p, args.max_degree, args.perturb)
        rows = [res.to_json()]
        header = {"point": {"space": args.space, "n": args.n, "k": args.k, "p": p}}
    code = EXIT_OK if all(r["ok"] for r in rows) else EXIT_NONE
    return _verify_render(rows, out, header), code


def cmd_table(args, out: OutputConfig) -> tuple[str, int]:
    primes = tuple(sorted(set(args.p_set)))
    for p in primes:
        if not is_odd_prime(p):
            raise UsageError(f"--p-set entry {p} is not an odd prime")
    if not args.n_range or not primes:
        raise UsageError("ranges must be nonempty")
    cfg = TableConfig(args.space, args.n_range, args.k_range, primes, args.m, args.workers)
    rows = verdict_table(cfg.space, cfg.points(), cfg.m, cfg.workers)
    if out.fmt == "json":
        return dump_json({"schema_version": SCHEMA_VERSION, "columns": list(TABLE_COLUMNS), "rows": rows}), EXIT_OK
    if out.fmt == "csv":
        return dump_csv(rows, TABLE_COLUMNS), EXIT_OK
    lines = ["| " + " | ".join(TABLE_COLUMNS) + " |", "|" + "---|" * len(TABLE_COLUMNS)]
    lines += ["| " + " | ".join(_cell(r[c]) for c in TABLE_COLUMNS) + " |" for r in rows]
    return "\n".join(lines) + "\n", EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pstiefel", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", help="presentation and per-degree table")
    _add_space_args(c)
    _add_format(c)
    c.add_argument("--top-degree", type=int, default=None)

    v = sub.add_parser("verdict", help="decide the splitting theorems")
    _add_space_args(v, ("PW", "PLW", "W", "WM"))
    _add_format(v)

    f = sub.add_parser("verify", help="spectral-sequence oracle against the presentation")
    f.add_argument("--grid", nargs=2, type=int, metavar=("NMAX", "PMAX"))
    f.add_argument("--space", choices=("PW", "WM"))
    f.add_argument("--n", type=int)
    f.add_argument("--k", type=int)
    f.add_argument("--m", type=int)
    f.add_argument("--p", type=int)
    f.add_argument("--max-degree", type=int, default=None,
                   help="truncation degree (default: dimension + 2)")
    f.add_argument("--perturb", type=int, default=None, metavar="DEGREE",
                   help="self-test: add a free summand to the expected table in DEGREE")
    f.add_argument("--workers", type=int, default=1)
    _add_format(f, "csv")

    t = sub.add_parser("table", help="verdict matrix over a parameter grid")
    t.add_argument("--space", choices=("PW", "W", "WM"), default="PW")
    t.add_argument("--n-range", type=_int_range, default=tuple(range(2, 9)))
    t.add_argument("--k-range", type=_int_range, default=None)
    t.add_argument("--p-set", type=_int_list, default=(5, 7, 11, 13))
    t.add_argument("--m", type=int, default=None)
    t.add_argument("--workers", type=int, default=1)
    _add_format(t, "csv")
    return ap


COMMANDS = {"cohomology": cmd_cohomology, "verdict": cmd_verdict, "verify": cmd_verify, "table": cmd_table}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = OutputConfig.from_env(args.format)
    try:
        text, code = COMMANDS[args.command](args, out)
    except UnsupportedRegime as exc:
        print(f"pstiefel: unsupported regime: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (UsageError, DomainError) as exc:
        ap.print_usage(sys.stderr)
        print(f"pstiefel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
