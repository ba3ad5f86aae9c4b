"""Command line front end.

Exit codes: 0 success, 1 usage, 2 invalid input, 3 closed dividing curves,
4 property failure.
"""

import argparse
import json
import sys

from . import corpus
from .branched import amputate_boundary, build_from_prisms, load_branched, validate
from .carried import classify, enumerate_carried, report_line, surface_from_weight
from .diophantine import (brute_force_basis, equations_from, hilbert_basis, is_solution,
                          load_equations)
from .dividing import detect_closed, load_dividing, tb_total
from .errors import CarrierError, OvertwistedHint, PropertyFailure
from .lutz import cover_check, cover_plan, decompose, derive_generators, realize
from .normalize import DEFAULT_C, extract_prisms, normalize
from .tri import load_triangulation


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _positive(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _weight(s):
    try:
        return tuple(int(x) for x in s.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight {s!r}")


class Out:
    """Collects records; text and json-lines carry the same fields."""

    def __init__(self, fmt):
        self.fmt = fmt

    def emit(self, text, **fields):
        if self.fmt == "json":
            print(json.dumps(fields, sort_keys=True))
        else:
            print(text)

    def block(self, kind, body):
        if self.fmt == "json":
            print(json.dumps({"kind": kind, "text": body}))
        else:
            sys.stdout.write(body)


def _load_pair(args, require_negative_tb=False):
    T = load_triangulation(corpus.text(args.tri))
    D = load_dividing(T, corpus.text(args.div), require_negative_tb=require_negative_tb)
    return T, D


def _system(path):
    src = corpus.text(path)
    if str(path).endswith(".eqs"):
        return load_equations(src), None
    B = load_branched(src)
    return equations_from(B), B


def cmd_check(args, out):
    T, D = _load_pair(args, args.strict)
    bad = detect_closed(D)
    if bad:
        raise OvertwistedHint(f"closed dividing curves on faces {bad}")
    V, E, F, Tn = T.skeleton_counts()
    out.emit(f"tetrahedra={Tn} faces={F} edges={E} vertices={V} "
             f"endpoints={D.endpoint_total()} tb={tb_total(D)}",
             tetrahedra=Tn, faces=F, edges=E, vertices=V,
             endpoints=D.endpoint_total(), tb=tb_total(D))


def cmd_normalize(args, out):
    T, D = _load_pair(args)
    N, moves = normalize(D)
    if args.moves:
        for m in moves:
            out.emit(m.to_line(), move=m.to_line())
    out.emit(f"moves={len(moves)} tb={tb_total(N)}", moves=len(moves), tb=tb_total(N))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(N.serialize())


def _prisms(args):
    T, D = _load_pair(args)
    N, _ = normalize(D)
    return T, extract_prisms(N, C=args.C)


def cmd_prisms(args, out):
    T, P = _prisms(args)
    for line in P.report_lines():
        out.emit(line, tet=line)
    out.emit(f"prisms={P.prism_count()} C={args.C}", prisms=P.prism_count(), C=args.C)


def cmd_build(args, out):
    T, P = _prisms(args)
    B = build_from_prisms(T, P)
    _write_complex(B, args, out)


def _write_complex(B, args, out):
    rep = validate(B)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(B.serialize())
    else:
        out.block("bs", B.serialize())
    out.emit(f"sectors={B.d} closed={'yes' if rep.closed else 'no'} "
             f"violations={len(rep.violations)}",
             sectors=B.d, closed=rep.closed, violations=len(rep.violations))
    if rep.violations:
        raise PropertyFailure("INVALID_COMPLEX", "; ".join(f"{c} {m}" for c, m in rep.violations))


def cmd_amputate(args, out):
    B = load_branched(corpus.text(args.bs))
    A, ledger = amputate_boundary(B)
    for n, ids in enumerate(ledger):
        out.emit(f"removed {' '.join(map(str, ids))}", step=n, removed=list(ids))
    _write_complex(A, args, out)


def cmd_equations(args, out):
    B = load_branched(corpus.text(args.bs))
    out.block("eqs", equations_from(B).serialize())


def cmd_hilbert(args, out):
    S, _ = _system(args.input)
    H = hilbert_basis(S)
    oracle = brute_force_basis(S, args.bound)
    if set(H.restricted(args.bound)) != set(oracle.members):
        raise PropertyFailure("ORACLE_DISAGREEMENT",
                              f"completion {H.restricted(args.bound)} vs box {oracle.members}")
    for u in H.members:
        out.emit(" ".join(map(str, u)), u=list(u))


def cmd_carried(args, out):
    B = load_branched(corpus.text(args.bs))
    if args.weight is not None:
        surf = surface_from_weight(B, args.weight)
        s = surf.summary()
        out.emit(report_line(s), **s)
        if args.emit_complex:
            out.block("bs", surf.to_complex().serialize())
        return
    for w, s in enumerate_carried(B, args.bound):
        out.emit(report_line(s), **s)


def cmd_classify(args, out):
    B = load_branched(corpus.text(args.bs))
    for n, chi, orientable, verdict in classify(B, args.weight):
        out.emit(f"component={n} chi={chi} orientable={'yes' if orientable else 'no'} "
                 f"verdict={verdict}", component=n, chi=chi, orientable=orientable,
                 verdict=verdict)


def cmd_decompose(args, out):
    S, _ = _system(args.input)
    H = hilbert_basis(S)
    c = decompose(S, H, args.weight)
    for u, n in zip(H.members, c):
        out.emit(f"{n} x ({' '.join(map(str, u))})", n=n, u=list(u))


def cmd_lutz(args, out):
    B = load_branched(corpus.text(args.bs))
    S = equations_from(B)
    H = hilbert_basis(S)
    G = derive_generators(B, H)
    if args.action == "realize":
        if not args.plan:
            raise CarrierError("USAGE", "realize needs a plan file")
        w = realize(corpus.plan(args.plan), G)
        out.emit(" ".join(map(str, w)), w=list(w))
    elif args.action == "decompose":
        if args.weight is None:
            raise CarrierError("USAGE", "decompose needs --weight")
        if len(args.weight) != S.d or not is_solution(S, args.weight):
            raise CarrierError("NOT_IN_CONE", f"{args.weight} is not a solution")
        p = cover_plan(G, args.weight)
        if p is None:
            raise PropertyFailure("INCOMPLETE_BASIS", f"{args.weight} is not covered")
        out.block("plan", p.serialize())
    else:
        rep = cover_check(S, G, args.bound)
        for line in rep.lines():
            out.emit(line, line=line)
        if not rep.ok:
            raise PropertyFailure("UNCOVERED", f"{len(rep.uncovered)} weights uncovered")


def cmd_selftest(args, out):
    from .selftest import run

    failed = 0
    for name, ok, detail in run(seed=args.seed, C=args.C, bound=args.bound):
        failed += not ok
        out.emit(f"{'PASS' if ok else 'FAIL'} {name} {detail}", name=name, ok=ok, detail=detail)
    if failed:
        raise PropertyFailure("SELFTEST", f"{failed} checks failed")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--C", type=_positive, default=DEFAULT_C,
                        help="leftover bound per face (default 12)")
    common.add_argument("--bound", type=_positive, default=5, help="box bound (default 5)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="carrier", description="Dividing sets, prisms and carried surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(func=func)
        return s

    for name, func, help_ in (("check", cmd_check, "validate a dividing set"),
                              ("normalize", cmd_normalize, "push edges across bypasses"),
                              ("prisms", cmd_prisms, "pack normal arcs into prisms"),
                              ("build", cmd_build, "assemble a branched complex")):
        s = add(name, func, help_)
        s.add_argument("tri")
        s.add_argument("div")
        if name == "check":
            s.add_argument("--strict", action="store_true",
                           help="require two endpoints per edge on every face")
        if name == "normalize":
            s.add_argument("--moves", action="store_true", help="list every move")
        if name in ("normalize", "build"):
            s.add_argument("-o", "--output")
    s = add("amputate", cmd_amputate, "remove boundary sectors")
    s.add_argument("bs")
    s.add_argument("-o", "--output")
    add("equations", cmd_equations, "branch equations of a complex").add_argument("bs")
    add("hilbert", cmd_hilbert, "minimal solutions").add_argument("input")
    s = add("carried", cmd_carried, "surfaces carried by a complex")
    s.add_argument("bs")
    s.add_argument("--weight", type=_weight)
    s.add_argument("--emit-complex", action="store_true")
    s = add("classify", cmd_classify, "components of a carried surface")
    s.add_argument("bs")
    s.add_argument("--weight", type=_weight, required=True)
    s = add("decompose", cmd_decompose, "write a weight over the basis")
    s.add_argument("input")
    s.add_argument("--weight", type=_weight, required=True)
    s = add("lutz", cmd_lutz, "twist plans: realize, decompose, cover")
    s.add_argument("action", choices=("realize", "decompose", "cover"))
    s.add_argument("bs")
    s.add_argument("plan", nargs="?")
    s.add_argument("--weight", type=_weight)
    add("selftest", cmd_selftest, "run the oracle suites")
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code
    out = Out(args.format)
    try:
        args.func(args, out)
    except FileNotFoundError as e:
        print(f"error: no such file: {e}", file=sys.stderr)
        return 1
    except CarrierError as e:
        if e.code == "USAGE":
            print(f"error: {e.message}", file=sys.stderr)
            return 1
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
