"""Command line: build a scheme, print parameter tables, run verification suites.

Exit codes: 0 success, 1 a verification found a mismatch, 2 usage error,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from .closed_form import char2_vanishing_check, closed_form_tensor
from .document import SchemeDocument
from .errors import ASTError
from .field import MAX_Q, is_prime, prime_power
from .hypermatrix import cube_identity, verify_structure_constants
from .scheme import (
    EXHAUSTIVE_MAX_Q,
    PERMUTATIONS,
    Check,
    Scheme,
    group_orbit_check,
    oracle_tensor,
    permutation_table,
    scheme_for,
    verify_axioms,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUITES = ("axioms", "oracle-vs-closed", "hypermatrix", "char2", "all")
TABLES = ("valencies", "relations", "permutation-action")


class UsageError(Exception):
    pass


def parse_q(text: str) -> int:
    """Accepts an integer prime power or "p^e"."""
    try:
        if "^" in text:
            p, e = (int(t) for t in text.split("^"))
            if not is_prime(p) or e < 1:
                raise UsageError(f"{text!r} is not of the form p^e with p prime")
            q = p**e
        else:
            q = int(text)
    except ValueError:
        raise UsageError(f"cannot read q from {text!r}") from None
    if prime_power(q) is None:
        raise UsageError(f"q = {q} is not a prime power")
    if q > MAX_Q:
        raise UsageError(f"q = {q} exceeds the supported maximum {MAX_Q}")
    return q


class Session:
    """Lazily computed artifacts shared between the checks of one run."""

    def __init__(self, scheme: Scheme, threads: int = 1):
        self.scheme = scheme
        self.threads = threads
        self._oracle = None
        self._closed = None

    @property
    def oracle(self):
        if self._oracle is None:
            self._oracle = oracle_tensor(self.scheme, threads=self.threads)
        return self._oracle

    @property
    def closed(self):
        if self._closed is None:
            self._closed = closed_form_tensor(self.scheme)
        return self._closed


# -- verification suites ---------------------------------------------------------


def suite_axioms(s: Session, args) -> list[Check]:
    if s.scheme.q <= EXHAUSTIVE_MAX_Q:
        rep = verify_axioms(s.scheme, "exhaustive", tensor=s.oracle)
    else:
        rep = verify_axioms(s.scheme, "sampled", samples=args.sample_size, seed=args.seed, tensor=s.oracle)
    return [Check(f"axioms/{c.name}", c.passed, f"{rep.mode}: {c.detail}", c.witness) for c in rep.checks]


def suite_oracle_vs_closed(s: Session, args) -> list[Check]:
    q, R = s.scheme.q, s.scheme.n_relations
    cf = s.closed
    diff = cf.tensor.first_difference(s.oracle)
    checks = [
        Check("oracle-vs-closed/tensor", diff is None, f"{R**4} cells compared", diff),
        Check(
            "oracle-vs-closed/existential-scans",
            not cf.violations,
            f"{len(cf.violations)} scans with more than one witness",
            cf.violations[0] if cf.violations else None,
        ),
    ]
    sums = s.oracle.slice_sums()
    bad = [l for l in range(R) if sums[l] != q**3 + 1]
    checks.append(Check("oracle-vs-closed/conservation", not bad, f"{R} slices sum to {q**3 + 1}", bad[:1] or None))
    return checks


def suite_hypermatrix(s: Session, args) -> list[Check]:
    sch = s.scheme
    rep = verify_structure_constants(sch, s.oracle, cells=args.cells, seed=args.seed)
    checks = [
        Check(
            "hypermatrix/structure-constants",
            rep.passed,
            f"{rep.mode}: {rep.triples_checked} index triples, {rep.cells_checked} cells",
            rep.mismatch,
        )
    ]
    ok = cube_identity(sch, 4, sch.q - 2, seed=args.seed)
    checks.append(Check("hypermatrix/A4-cubed", ok, f"A4^3 = {sch.q - 2} A4"))
    return checks


def suite_char2(s: Session, args) -> list[Check]:
    checks = []
    for name, tensor in (("closed-form", s.closed.tensor), ("oracle", s.oracle)):
        rep = char2_vanishing_check(s.scheme, tensor)
        checks.append(
            Check(
                f"char2/{name}",
                rep.passed,
                f"{rep.checked} cells vanish",
                rep.failures[0] if rep.failures else None,
            )
        )
    return checks


def run_suite(suite: str, s: Session, args) -> list[Check]:
    if suite == "char2" and s.scheme.ctx.p != 2:
        raise UsageError(f"the char2 suite needs even q, got q = {s.scheme.q}")
    runners = {
        "axioms": suite_axioms,
        "oracle-vs-closed": suite_oracle_vs_closed,
        "hypermatrix": suite_hypermatrix,
        "char2": suite_char2,
    }
    if suite != "all":
        return runners[suite](s, args)
    checks = []
    for name in ("axioms", "oracle-vs-closed", "hypermatrix"):
        checks += runners[name](s, args)
    if s.scheme.ctx.p == 2:
        checks += suite_char2(s, args)
    if s.scheme.q == 2:
        checks.append(group_orbit_check(s.scheme))
    return checks


# -- tables ----------------------------------------------------------------------


def table_valencies(sch: Scheme) -> list[str]:
    R = sch.n_relations
    out = [f"n{i}={sch.valencies[i]}" for i in range(4, R)]
    rest = set(sch.valencies[5:])
    if len(rest) == 1:
        out.append(f"n4={sch.valencies[4]}, n5..n{R - 1}={rest.pop()}")
    return out


def table_relations(sch: Scheme) -> list[str]:
    ctx = sch.ctx
    out = [f"# q={sch.q} modulus={','.join(str(c) for c in ctx.modulus)} a={ctx.fmt(sch.a)}"]
    for l, triple in enumerate(sch.rel_triples):
        rep = ", ".join("[" + ":".join(ctx.fmt(c) for c in L) + "]" for L in triple)
        params = f"b={ctx.fmt(sch.b(l))} c={ctx.fmt(sch.c(l))}" if l >= 5 else ""
        out.append(f"R{l}  ({rep})  {params}".rstrip())
    return out


def table_permutation_action(sch: Scheme, seed: int) -> list[str]:
    R = sch.n_relations
    table = permutation_table(sch, seed=seed)
    width = len(str(R - 1))
    out = ["perm  " + " ".join(str(l).rjust(width) for l in range(R))]
    for p, row in zip(PERMUTATIONS, table):
        name = "".join(str(t + 1) for t in p)
        out.append(f"{name}   " + " ".join(str(x).rjust(width) for x in row))
    return out


# -- commands --------------------------------------------------------------------


def cmd_build(args) -> int:
    sch = scheme_for(args.q)
    doc = SchemeDocument.from_scheme(sch, closed_form_tensor(sch))
    text = doc.to_json() if args.format == "json" else doc.to_csv()
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_verify(args) -> int:
    s = Session(scheme_for(args.q), threads=args.threads)
    checks = run_suite(args.suite, s, args)
    failed = False
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
        if not c.passed and not failed:
            print(f"  first counterexample: {c.witness}")
            failed = True
    print(f"q={args.q} suite={args.suite}: {sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_table(args) -> int:
    sch = scheme_for(args.q)
    if args.which == "valencies":
        lines = table_valencies(sch)
    elif args.which == "relations":
        lines = table_relations(sch)
    else:
        lines = table_permutation_action(sch, args.seed)
    print("\n".join(lines))
    return EXIT_OK


def _q_arg(text: str) -> int:
    try:
        return parse_q(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ast-unitary", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--q", type=_q_arg, required=True, help='prime power, as an integer or "p^e"')
        p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    b = sub.add_parser("build", help="compute the scheme and write its intersection numbers")
    common(b)
    b.add_argument("--format", choices=("json", "csv"), default="json")
    b.add_argument("--out", help="output path (default: standard output)")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run a verification suite")
    common(v)
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--sample-size", type=int, default=200, help="members drawn per relation when sampling")
    v.add_argument("--cells", type=int, default=10_000, help="cells checked by the sampled hypermatrix suite")
    v.add_argument("--threads", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="print a parameter table")
    common(t)
    t.add_argument("which", choices=TABLES)
    t.set_defaults(func=cmd_table)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ASTError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
