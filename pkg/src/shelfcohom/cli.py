"""Command-line front end: ``shelfcohom <command> [options]``.

Exit codes: 0 success, 1 a mathematical verification failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

import numpy as np

from . import bases
from .cohomology import Cochain, cohomology_report, differential_matrix, identity_checks
from .homalg import Coefficients, LimitError, smith_normal_form
from .shelf import (
    EShelfParams,
    Shelf,
    ShelfError,
    find_isomorphism,
    laver_rows,
    make_cyclic,
    make_e_shelf,
    make_laver,
    make_named,
    orbits,
    parse,
    serialize,
    validate,
)
from .translations import classify_projectors, idempotent_retracts, iterated_reduce, rack_type, translation_semigroup

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument plumbing ------------------------------------------------------------------------


def _source_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--laver", type=int, metavar="N")
    g.add_argument("--cyclic", type=int, nargs=2, metavar=("R", "M"))
    g.add_argument("--eshelf", metavar="FILE", help="JSON with n, rho, mu, starred")
    g.add_argument("--left-trivial", type=int, metavar="N")
    g.add_argument("--right-trivial", type=int, metavar="N")
    g.add_argument("--table", metavar="FILE", help="table file, or - for stdin")


def _common_args(p: argparse.ArgumentParser, degrees: bool = True) -> None:
    if degrees:
        p.add_argument("-k", "--degree", default="0:2", metavar="A[:B]")
    p.add_argument("--coeff", default="Z", metavar="Z|Q|F<p>")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-cells", type=int, metavar="N")
    p.add_argument("--raw-labels", action="store_true")


def parse_degrees(text: str) -> list[int]:
    try:
        parts = [int(x) for x in text.split(":")]
    except ValueError:
        raise UsageError(f"bad degree range {text!r}; use K or A:B") from None
    if len(parts) == 1:
        parts *= 2
    if len(parts) != 2 or parts[0] < 0 or parts[1] < parts[0]:
        raise UsageError(f"bad degree range {text!r}; need 0 <= A <= B")
    return list(range(parts[0], parts[1] + 1))


def parse_coeffs(text: str) -> Coefficients:
    try:
        return Coefficients.parse(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def eshelf_from_json(text: str) -> Shelf:
    try:
        d = json.loads(text)
        n = int(d["n"])
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"E-shelf file must be JSON with keys n, rho, mu ({e})") from None
    size = 1 << n
    rho, mu = d.get("rho", 0), d.get("mu", 1)
    rho = tuple(rho) if isinstance(rho, list) else (int(rho),) * size
    mu = tuple(mu) if isinstance(mu, list) else (int(mu),) * size
    return make_e_shelf(EShelfParams(n, rho, mu, bool(d.get("starred", False))))


def load_shelf(args) -> Shelf:
    if args.laver is not None:
        return make_laver(args.laver)
    if args.cyclic is not None:
        return make_cyclic(*args.cyclic)
    if args.left_trivial is not None:
        return make_named("left_trivial", args.left_trivial)
    if args.right_trivial is not None:
        return make_named("right_trivial", args.right_trivial)
    if args.eshelf is not None:
        return eshelf_from_json(_read(args.eshelf))
    return parse(_read(args.table))


def _family(args) -> tuple[str, tuple[int, ...]]:
    if args.laver is not None:
        return "laver", (args.laver,)
    if args.cyclic is not None:
        return "cyclic", tuple(args.cyclic)
    raise UsageError("this command needs --laver N or --cyclic R M")


def _labels(S: Shelf, raw: bool) -> list[str]:
    return [str(i) if raw else S.label(i) for i in range(S.size)]


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    else:
        print(text)


# -- commands ------------------------------------------------------------------------------------


def cmd_gen(args) -> int:
    kind, params = args.kind, args.params
    need = {"laver": 1, "cyclic": 2, "left-trivial": 1, "right-trivial": 1}
    if kind == "eshelf":
        if len(params) != 1:
            raise UsageError("gen eshelf FILE")
        S = eshelf_from_json(_read(params[0]))
    else:
        if len(params) != need[kind]:
            raise UsageError(f"gen {kind} takes {need[kind]} integer argument(s)")
        try:
            nums = [int(x) for x in params]
        except ValueError:
            raise UsageError("gen parameters must be integers") from None
        S = {"laver": lambda: make_laver(*nums), "cyclic": lambda: make_cyclic(*nums),
             "left-trivial": lambda: make_named("left_trivial", *nums),
             "right-trivial": lambda: make_named("right_trivial", *nums)}[kind]()
    sys.stdout.write(serialize(S, with_labels=not args.raw_labels))
    return OK


def cmd_analyze(args) -> int:
    S = load_shelf(args)
    v = validate(S)
    labels = _labels(S, args.raw_labels)
    out = {
        "size": S.size, "labels": labels,
        "is_shelf": v.is_shelf, "is_rack": v.is_rack, "is_quandle": v.is_quandle,
        "witness": list(v.witness) if v.witness else None,
    }
    if v.is_shelf:
        orb = orbits(S)
        sg = translation_semigroup(S)
        rets = idempotent_retracts(S, sg)
        out.update({
            "generators": [labels[g] for g in v.generators],
            "monogenic": v.is_monogenic,
            "orbits": [[labels[x] for x in b] for b in orb.blocks()],
            "semigroup_size": len(sg),
            "retracts": [{"carrier": [labels[x] for x in r.carrier], "is_rack": r.is_rack} for r in rets],
            "projector": classify_projectors(S, sg).to_json(),
        })
    if args.json:
        _emit(out, True, "")
    else:
        lines = [f"size {S.size}; shelf {v.is_shelf}; rack {v.is_rack}; quandle {v.is_quandle}"]
        if not v.is_shelf:
            lines.append("self-distributivity fails at (a, b, c) = " + ", ".join(labels[x] for x in v.witness))
        else:
            lines += [
                "generators: " + " ".join(out["generators"]),
                f"orbits ({len(out['orbits'])}): " + " | ".join(" ".join(b) for b in out["orbits"]),
                f"translation semigroup: {out['semigroup_size']} elements",
                f"idempotent retracts: {len(rets)} ({sum(r.is_rack for r in rets)} racks)",
                f"projector option: {out['projector']['option']}",
            ]
        print("\n".join(lines))
    return OK if v.is_shelf else FAILED


def cmd_cohom(args) -> int:
    S = load_shelf(args)
    ks = parse_degrees(args.degree)
    rep = cohomology_report(S, ks, parse_coeffs(args.coeff), args.max_cells)
    if args.json:
        if len(ks) == 1:
            d = rep.degrees[0]
            obj = {"rank_Z": d.rank_Z, "rank_B": d.rank_B, "H": d.H.to_json()}
        else:
            obj = rep.to_json(args.raw_labels)
        _emit(obj, True, "")
    else:
        lines = [f"{'k':>3} {'dim C':>9} {'rank Z':>9} {'rank B':>9}  H^k"]
        for d in rep.degrees:
            lines.append(f"{d.k:>3} {d.dim_C:>9} {d.rank_Z:>9} {d.rank_B:>9}  {d.H}")
        print("\n".join(lines))
    return OK


def cmd_basis(args) -> int:
    fam, params = _family(args)
    ks = parse_degrees(args.degree)
    rows = []
    status = OK
    for k in ks:
        if k < 1:
            raise UsageError("bases are defined for k >= 1")
        try:
            b = bases.make_bundle(fam, params, k, verify=True)
            M = bases.evaluation_matrix(b)
            det = bases.determinant(M)
            ok = True
        except bases.BasisError as e:
            rows.append({"k": k, "verified": False, "error": str(e)})
            status = FAILED
            continue
        rows.append({"k": k, "basis_size": len(b.coboundary_basis), "P_k": bases.pk(k, b.shelf.size),
                     "index_set_size": len(b.index_set), "determinant": det,
                     "i0": [b.shelf.label(x) if not args.raw_labels else str(x) for x in b.index_set.i0],
                     "verified": ok})
    if args.json:
        _emit({"family": fam, "params": list(params), "degrees": rows}, True, "")
    else:
        for r in rows:
            if r["verified"]:
                print(f"k={r['k']}: {r['basis_size']} coboundary maps (P_k = {r['P_k']}), "
                      f"|I| = {r['index_set_size']}, det = {r['determinant']}, i0 = ({', '.join(r['i0'])})")
            else:
                print(f"k={r['k']}: FAILED {r['error']}")
    return status


def cmd_verify(args) -> int:
    ks = parse_degrees(args.degree)
    results = []
    if args.what == "theorem-a":
        S = load_shelf(args)
        coeffs = parse_coeffs(args.coeff)
        for k in ks:
            try:
                results.append(bases.verify_theorem_a(S, k, coeffs).to_json())
            except ShelfError as e:
                raise UsageError(str(e)) from None
    elif args.what == "proof-scheme":
        fam, params = _family(args)
        for k in ks:
            if k < 1:
                raise UsageError("the proof scheme needs k >= 1")
            results.append(bases.proof_scheme_check(fam, params, k).to_json())
    elif args.what == "const-class":
        fam, params = _family(args)
        if fam != "cyclic" or params[0] != 0:
            raise UsageError("const-class needs --cyclic 0 M")
        m = params[1]
        for k in ks:
            alpha = bases.const_class_coefficient(m, k)
            want = m ** (k // 2)
            results.append({"m": m, "k": k, "coefficient": alpha, "expected": want, "passed": alpha == want})
    else:  # identities
        S = load_shelf(args)
        rng = np.random.default_rng(args.seed)
        for k in ks:
            if k < 1:
                continue
            fails: dict[str, int] = {}
            for _ in range(args.samples):
                phi = Cochain.from_values(k, S.size, rng.integers(-9, 10, S.size**k).tolist())
                a = int(rng.integers(S.size))
                for name, ok in identity_checks(S, phi, a).items():
                    fails[name] = fails.get(name, 0) + (not ok)
            results.append({"k": k, "samples": args.samples, "failures": fails,
                            "passed": not any(fails.values())})
    passed = all(r["passed"] for r in results)
    if args.json:
        _emit({"check": args.what, "results": results, "passed": passed}, True, "")
    else:
        for r in results:
            print(f"{args.what} k={r['k']}: {'ok' if r['passed'] else 'FAILED'}")
            if not r["passed"]:
                print("  " + json.dumps(r, sort_keys=True))
    return OK if passed else FAILED


def cmd_reduce(args) -> int:
    S = load_shelf(args)
    R, proj, trace = iterated_reduce(S)
    T = rack_type(R)
    cyclic = T.size <= 12 and find_isomorphism(T, make_cyclic(0, T.size)) is not None
    labels = _labels(S, args.raw_labels)
    out = {"trace": trace, "projection": {labels[i]: proj[i] for i in range(S.size)},
           "reduced_size": R.size, "rack_type_size": T.size, "rack_type_cyclic": cyclic}
    if args.json:
        _emit(out, True, "")
    else:
        print("sizes: " + " -> ".join(map(str, trace)))
        print(f"rack type: {T.size} elements{' (cyclic rack)' if cyclic else ''}")
        sys.stdout.write(serialize(R, with_labels=not args.raw_labels))
    return OK


def cmd_bench(args) -> int:
    if args.what is None:
        args.bench_parser.print_usage(sys.stderr)
        return USAGE
    if args.what == "laver-gen":
        t0 = time.perf_counter()
        L = laver_rows(args.n)
        dt = time.perf_counter() - t0
        first = " ".join(str(int(x) + 1) for x in L[0][: min(32, L.shape[1])])
        print(f"A_{args.n}: {L.shape[0]}x{L.shape[1]} in {dt:.3f}s")
        print(f"row 1: {first}{' ...' if L.shape[1] > 32 else ''}")
        return OK
    S = load_shelf(args)
    coeffs = parse_coeffs(args.coeff)
    for k in parse_degrees(args.degree):
        t0 = time.perf_counter()
        D = differential_matrix(S, k, args.max_cells)
        t1 = time.perf_counter()
        if args.what == "snf":
            if coeffs.is_field:
                coeffs.rank(D)
            else:
                smith_normal_form(D)
        t2 = time.perf_counter()
        print(f"k={k}: d is {D.rows}x{D.cols} nnz={D.nnz}; assembly {t1 - t0:.3f}s"
              + (f", {args.what} {t2 - t1:.3f}s" if args.what == "snf" else ""))
    return OK


# -- entry point -----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shelfcohom", description="Finite shelves, translations and rack cohomology.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="emit a shelf table")
    g.add_argument("kind", choices=["laver", "cyclic", "left-trivial", "right-trivial", "eshelf"])
    g.add_argument("params", nargs="*")
    g.add_argument("--raw-labels", action="store_true")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="validate, orbits, semigroup, retracts, projector option")
    _source_args(a)
    _common_args(a, degrees=False)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("cohom", help="Z^k, B^k and H^k")
    _source_args(c)
    _common_args(c)
    c.set_defaults(func=cmd_cohom)

    b = sub.add_parser("basis", help="explicit bases for cyclic shelves and Laver tables")
    _source_args(b)
    _common_args(b)
    b.set_defaults(func=cmd_basis, degree="1:2")

    v = sub.add_parser("verify", help="run a verification")
    v.add_argument("what", choices=["theorem-a", "proof-scheme", "const-class", "identities"])
    _source_args(v)
    _common_args(v)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=100)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="iterated reduction and rack type")
    _source_args(r)
    _common_args(r, degrees=False)
    r.set_defaults(func=cmd_reduce)

    bp = sub.add_parser("bench", help="timings")
    bsub = bp.add_subparsers(dest="what", parser_class=_Parser)
    lg = bsub.add_parser("laver-gen")
    lg.add_argument("n", type=int)
    for name in ("snf", "diff"):
        q = bsub.add_parser(name)
        _source_args(q)
        _common_args(q)
        q.add_argument("--seed", type=int, default=0)
    bp.set_defaults(func=cmd_bench, bench_parser=bp)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except (ShelfError, LimitError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())
