"""Command-line front end.

Exit codes: 0 success, 1 verification or acceptance failure, 2 usage error
(including malformed spec files).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import acceptance
from .core import ContinuityAssumption, DeFinettiQuery, chi_from_mu, definetti_bracket, definetti_lower
from .intervals import as_rational, parse_set_tuple
from .oracles import MarginalOracle, constraint_matrix
from .processes import (SamplerState, SpecError, as_marginal_oracle, as_mu_oracle,
                        sample_sequence)
from .specio import (fmt_rational, load_json, measure_from_json, process_from_json,
                     render_json, render_tsv, table_from_json, table_rows, transform_to_json,
                     dumps)
from .transform import CLOSED_FORM, transform

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_fuels(text: str) -> List[int]:
    """``"1,2,5"``, ``"1..6"`` or a mix such as ``"1..4,8,16"``; strictly increasing."""
    fuels: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                fuels.extend(range(int(lo), int(hi) + 1))
            else:
                fuels.append(int(part))
    except ValueError:
        raise UsageError("bad fuel list %r" % text) from None
    if not fuels or fuels[0] < 1:
        raise UsageError("fuels must be positive integers")
    if any(a >= b for a, b in zip(fuels, fuels[1:])):
        raise UsageError("fuels must be strictly increasing")
    return fuels


def parse_constraints(text: str):
    """Rows separated by ``;``, thresholds within a row by ``,``."""
    try:
        return constraint_matrix([[as_rational(c.strip()) for c in row.split(",")]
                                  for row in text.split(";")])
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("bad constraint matrix %r: %s" % (text, exc)) from None


def parse_domain(text: Optional[str]):
    if text is None:
        return None
    try:
        lo, hi = (as_rational(v.strip()) for v in text.split(","))
    except ValueError:
        raise UsageError("--domain takes LO,HI") from None
    if not lo < hi:
        raise UsageError("--domain needs LO < HI")
    return lo, hi


def _sets(text: str, domain):
    try:
        return parse_set_tuple(text, domain)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("bad set tuple %r: %s" % (text, exc)) from None


def marginal_oracle(obj) -> MarginalOracle:
    if isinstance(obj, dict) and obj.get("process") == "table":
        return table_from_json(obj)
    return as_marginal_oracle(process_from_json(obj))


def _emit(rows, fmt: str, out) -> None:
    out.write(render_tsv(rows) if fmt == "tsv" else render_json(rows))


# commands

def cmd_query(args, out) -> int:
    chi = marginal_oracle(load_json(args.spec))
    pi = _sets(args.pi, parse_domain(args.domain))
    C = parse_constraints(args.constraints)
    if len(C[0]) != len(pi):
        raise UsageError("arity mismatch: %d sets but %d constraint columns" % (len(pi), len(C[0])))
    q = DeFinettiQuery(pi, C)
    fuels = parse_fuels(args.fuel)
    if args.assume_continuous:
        pairs = [definetti_bracket(chi, q, ContinuityAssumption(True), f) for f in fuels]
        lowers = [p[0] for p in pairs]
        # keep the upper column nested even across non-nested internal grids
        uppers, best = [], Fraction(1)
        for lo, hi in pairs:
            best = min(best, hi)
            uppers.append(max(best, lo))
        rows = table_rows(fuels, lowers, uppers)
    else:
        rows = table_rows(fuels, [definetti_lower(chi, q, f) for f in fuels])
    _emit(rows, args.format, out)
    return EXIT_OK


def cmd_transform(args, out) -> int:
    spec = process_from_json(load_json(args.spec))
    result = transform(spec, depth=args.depth)
    text = dumps(transform_to_json(result))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_forward(args, out) -> int:
    measure = measure_from_json(load_json(args.spec))
    mu = as_mu_oracle(measure, allow_moments=True)
    box = _sets(args.box, parse_domain(args.domain))
    fuels = parse_fuels(args.fuel)
    rows = table_rows(fuels, [chi_from_mu(mu, box, f) for f in fuels])
    _emit(rows, args.format, out)
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    ids = [int(i) for i in args.only.split(",")] if args.only else None
    ok = acceptance.run(ids, emit=lambda line: print(line, file=out, flush=True))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sample(args, out) -> int:
    spec = process_from_json(load_json(args.spec))
    if args.n < 1:
        raise UsageError("-n must be at least 1")
    state = SamplerState(spec, args.seed)
    draws = sample_sequence(state, args.n)
    for x in draws:
        if isinstance(x, Fraction):
            text = fmt_rational(x)
        else:
            text = str(x) if isinstance(x, int) else repr(x)
        out.write(text + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="definetti",
                                description="Computable de Finetti measures: bounds, transforms, checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, box=False):
        sp.add_argument("--spec", required=True, help="JSON spec file, or inline JSON")
        sp.add_argument("--fuel", required=True, help='fuel schedule, e.g. "1..6" or "1,2,4,8"')
        sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
        sp.add_argument("--domain", help="LO,HI: rescale interval endpoints from [LO,HI] to [0,1]")

    q = sub.add_parser("query", help="lower bounds (or brackets) on a de Finetti measure query")
    common(q)
    q.add_argument("--pi", required=True, help='sets, e.g. "(1/2,1];(0,1/4)|(3/4,1]"')
    q.add_argument("--constraints", required=True, help='thresholds, e.g. "1/4,1/2;3/4,-1"')
    q.add_argument("--assume-continuous", action="store_true",
                   help="assert the directing measure is a.s. continuous; adds upper bounds")
    q.set_defaults(func=cmd_query)

    t = sub.add_parser("transform", help="replace a sequential sampler by a directing-measure spec")
    t.add_argument("--spec", required=True)
    t.add_argument("--depth", type=int, default=8)
    t.add_argument("--out")
    t.set_defaults(func=cmd_transform)

    f = sub.add_parser("forward", help="box probabilities of the sequence from a measure spec")
    common(f)
    f.add_argument("--box", required=True)
    f.set_defaults(func=cmd_forward)

    s = sub.add_parser("selftest", help="run the acceptance checks")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_selftest)

    d = sub.add_parser("sample", help="draw from a process with the seeded Philox generator")
    d.add_argument("--spec", required=True)
    d.add_argument("-n", type=int, default=10)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_sample)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, SpecError) as exc:
        print("definetti: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
