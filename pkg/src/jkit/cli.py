"""Command line: ``jkit check``, ``jkit eval`` and ``jkit poissonize``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import jacobi
from .dsl import StructureFile, eval_expr, parse, run_directive
from .errors import JkitError, ParseError


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _run_one(source: str, index: int, max_degree: int, timing: bool) -> list[dict]:
    # Worker entry point: each process re-parses the file so nothing unpicklable crosses over.
    sf = parse(source)
    return [r.to_dict(timing) for r in run_directive(sf, sf.checks[index], max_degree)]


def collect(source: str, max_degree: int = 1, parallel: bool = False, timing: bool = False) -> list[dict]:
    """Run every check directive and return report dicts in directive order."""
    sf = parse(source)
    n = len(sf.checks)
    if parallel and n > 1:
        with ProcessPoolExecutor() as pool:
            futures = [pool.submit(_run_one, source, i, max_degree, timing) for i in range(n)]
            chunks = [f.result() for f in futures]
    else:
        chunks = [[r.to_dict(timing) for r in run_directive(sf, d, max_degree)] for d in sf.checks]
    return [r for chunk in chunks for r in chunk]


def to_json(reports: list[dict]) -> str:
    return json.dumps({"checks": reports}, sort_keys=True, indent=2) + "\n"


def to_text(reports: list[dict]) -> str:
    lines = []
    for r in reports:
        lines.append(f"{'PASS' if r['pass'] else 'FAIL'} {r['name']}")
        for res in r["residuals"]:
            mark = "ok" if res["zero"] else "NZ"
            lines.append(f"  {mark} {res['label']} (deg {res['degree']}): {res['expr']}")
    return "\n".join(lines) + "\n"


def poissonized_source(sf: StructureFile, name: str) -> str:
    """A ``.jk`` file for the Poissonization of structure ``name`` on the lifted chart."""
    v = sf.value(name)
    if isinstance(v, jacobi.TlcsStructure):
        v = jacobi.tlcs_to_twisted_jacobi(v)
    if not isinstance(v, jacobi.TwistedJacobiStructure):
        raise JkitError(f"{name!r} is not a twisted Jacobi structure")
    h = jacobi.poissonize(v)
    ch = h.chart
    coords = " ".join(ch.names)
    t = ch.names[ch.tvar]
    return "\n".join([
        f"# Poissonization of {name}; {t} is the R factor and carries the exp weights.",
        f"manifold {sf.name}_{t} dim {ch.dim} coords {coords} weight {t};",
        "",
        f"let {name}_L : mv2 = {h.lam};",
        f"let {name}_Z : mv1 = {h.z};",
        f"let {name}_w : form2 = {h.omega};",
        f"structure {name}_P = homog_poisson({name}_L, {name}_Z, {name}_w);",
        "",
        f"check homog-poisson {name}_P;",
        "",
    ])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jkit", description="Exact checks for twisted Jacobi structures.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the check directives of a .jk file")
    c.add_argument("file")
    c.add_argument("--json", action="store_true", help="emit one JSON document")
    c.add_argument("--max-test-degree", type=int, default=1, metavar="N",
                   help="largest degree of the multiplier functions (default 1)")
    c.add_argument("--parallel", action="store_true", help="run directives in worker processes")
    c.add_argument("--timing", action="store_true", help="record wall time per check (output no longer reproducible)")

    e = sub.add_parser("eval", help="evaluate an expression over the bindings of a .jk file")
    e.add_argument("file")
    e.add_argument("--expr", required=True)

    q = sub.add_parser("poissonize", help="write the Poissonization of a structure as a .jk file")
    q.add_argument("file")
    q.add_argument("--structure", required=True)
    q.add_argument("--out", required=True)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        source = _read(args.file)
        if args.command == "check":
            if args.max_test_degree < 0:
                raise JkitError("--max-test-degree must be non-negative")
            reports = collect(source, args.max_test_degree, args.parallel, args.timing)
            sys.stdout.write(to_json(reports) if args.json else to_text(reports))
            return 0 if all(r["pass"] for r in reports) else 1
        sf = parse(source)
        if args.command == "eval":
            print(eval_expr(sf, args.expr))
            return 0
        if args.structure not in sf.bindings:
            raise JkitError(f"unbound name {args.structure!r}")
        text = poissonized_source(sf, args.structure)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return 0
    except ParseError as exc:
        print(f"{args.file}:{exc}", file=sys.stderr)
        return 2
    except (JkitError, OSError) as exc:
        print(f"jkit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
