"""Command-line front end.

Exit codes: 0 on success, 1 for a semantic negative (not equal, not sound,
not certified), 2 for bad arguments or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import euler, incompleteness, io, rules, search, soundness
from .diagram import DiagramError
from .semantics import DEFAULT_TOL, Mode, compare, format_matrix, interpret

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, doc: dict, text: str) -> None:
    if getattr(args, "out", None):
        io.dump_json(doc, args.out)
    if args.json:
        print(io.dump_json(doc))
    else:
        print(text)


def _load(path: str):
    try:
        return io.load_diagram(path)
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None
    except (DiagramError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_doc(path: str) -> dict:
    try:
        return io.load_json(path)
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


# ------------------------------------------------------------ commands

def cmd_eval(args) -> int:
    d = _load(args.file)
    m = interpret(d, args.k)
    _emit(args, io.matrix_to_json(m), format_matrix(m))
    return EXIT_OK


def cmd_equal(args) -> int:
    a, b = _load(args.a), _load(args.b)
    ma, mb = interpret(a, args.k), interpret(b, args.k)
    if ma.shape != mb.shape:
        eq = None
        text = f"not equal: shapes {ma.shape} and {mb.shape} differ"
    else:
        eq = compare(ma, mb, args.mode, args.tol)
        text = (f"{'equal' if eq else 'not equal'} ({eq.mode.value}, k={args.k}): "
                f"residual {eq.residual:.3e}, tolerance {eq.tolerance:.3e}")
        if eq.mode != Mode.EXACT:
            text += f", witness {eq.witness.real:+.9f}{eq.witness.imag:+.9f}j"
    doc = {
        "equal": bool(eq),
        "mode": Mode(args.mode).value,
        "k": args.k,
        "residual": None if eq is None else eq.residual,
        "witness": None if eq is None else [eq.witness.real, eq.witness.imag],
    }
    _emit(args, doc, text)
    return EXIT_OK if eq else EXIT_NEGATIVE


def cmd_simplify(args) -> int:
    d = _load(args.file)
    out, used = rules.simplify(d)
    doc = io.diagram_to_json(out)
    if args.output:
        io.dump_json(doc, args.output)
        print(f"{len(d.interior())} -> {len(out.interior())} interior nodes, "
              f"{len(used)} rewrites; written to {args.output}")
    else:
        print(io.dump_json(doc))
    return EXIT_OK


def cmd_rules(args) -> int:
    cat = rules.catalog()
    width = max(len(r["name"]) for r in cat)
    lines = [f"{r['name']:<{width}}  {r['mode']:<6}  {r['description']}" for r in cat]
    _emit(args, {"rules": cat}, "\n".join(lines))
    return EXIT_OK


def cmd_rules_check(args) -> int:
    ks = args.k or [1, -3, 5, 9]
    spec = soundness.SampleSpec(n_random=args.samples, seed=args.seed, tol=args.tol)
    report = soundness.check_all(ks, spec)
    _emit(args, report.to_json(), report.table())
    return EXIT_OK if all(report.is_sound(k) for k in ks) else EXIT_NEGATIVE


def cmd_cert(args) -> int:
    cert = incompleteness.verify(tol=args.tol, floor=args.floor)
    if args.write_diagrams:
        outdir = Path(args.write_diagrams)
        outdir.mkdir(parents=True, exist_ok=True)
        io.save_diagram(cert.d1, outdir / "d1.zx")
        io.save_diagram(cert.d2, outdir / "d2.zx")
    _emit(args, cert.to_json(), cert.summary())
    return EXIT_OK if cert.certified else EXIT_NEGATIVE


def _parse_matrix_doc(doc) -> np.ndarray:
    if isinstance(doc, dict) and "data" in doc:
        return io.matrix_from_json(doc)
    # plain nested list of [re, im] pairs or numbers
    arr = np.array([[complex(*c) if isinstance(c, list) else complex(c) for c in row] for row in doc])
    return arr


def cmd_euler(args) -> int:
    try:
        if args.matrix:
            u = _parse_matrix_doc(_load_doc(args.matrix))
            t = euler.decompose(u, args.order)
        else:
            src = euler.EulerTriple.from_json(_load_doc(args.triple))
            u = euler.recompose(src)
            t = euler.color_swap(src) if src.order != args.order else src
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    err = float(np.linalg.norm(euler.recompose(t) - u))
    doc = {"triple": t.to_json(), "matrix": io.matrix_to_json(u), "reconstruction_error": err}
    if args.diagram_out:
        d, omitted = euler.as_diagram(t, realize_phase=args.realize_phase)
        io.save_diagram(d, args.diagram_out)
        doc["omitted_global_phase"] = omitted.to_json()
    names = ("Z", "X") if t.order == euler.ZXZ else ("X", "Z")
    pi = lambda p: f"{p.value / np.pi:.9f}pi"
    text = (f"{t.order}: {names[0]}({pi(t.alpha)}) then {names[1]}({pi(t.beta)}) then "
            f"{names[0]}({pi(t.gamma)}), global phase {pi(t.global_phase)}\n"
            f"reconstruction error {err:.3e}")
    _emit(args, doc, text)
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        cfg = search.SearchConfig.from_json(_load_doc(args.config))
    except (search.ConfigError, DiagramError, FileNotFoundError) as exc:
        raise UsageError(f"{args.config}: {exc}") from None
    cands = search.find_gaps(cfg)
    if args.output_dir:
        outdir = Path(args.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        for i, c in enumerate(cands):
            io.save_diagram(c.d1, outdir / f"candidate_{i:03d}_lhs.zx")
            io.save_diagram(c.d2, outdir / f"candidate_{i:03d}_rhs.zx")
    if cands:
        lines = [f"{'#':>3}  {'nodes':>7}  {'k':>3}  {'separation':>10}  {'std residual':>12}  hash"]
        for i, c in enumerate(cands):
            sizes = f"{len(c.d1.interior())}/{len(c.d2.interior())}"
            lines.append(f"{i:>3}  {sizes:>7}  {c.k:>3}  {c.separation:>10.4f}  "
                         f"{c.residual:>12.3e}  {c.semantics_hash}")
        lines.append(f"{len(cands)} candidate(s)")
    else:
        lines = ["none found within budget"]
    doc = {"config": cfg.to_json(), "candidates": [c.to_json() for c in cands]}
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_fixture(args) -> int:
    try:
        lhs, rhs = search.load_fixture(args.name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    cfg = search.SearchConfig(probes=args.k or search.DEFAULT_PROBES, tol=args.tol)
    try:
        cfg.validate()
    except search.ConfigError as exc:
        raise UsageError(str(exc)) from None
    rep = search.check_fixture_pair(lhs, rhs, cfg, name=args.name)
    _emit(args, rep.to_json(), rep.summary())
    return EXIT_OK


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zxcheck", description="ZX diagram evaluation and model checking")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--json", action="store_true", help="print the machine document instead of a summary")
        return sp

    sp = add("eval", cmd_eval, "print the interpretation matrix of a diagram")
    sp.add_argument("file")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--out", help="also write the matrix document here")

    sp = add("equal", cmd_equal, "compare two diagrams (exit 0 iff equivalent)")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.EXACT.value)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)

    sp = add("simplify", cmd_simplify, "fuse spiders, drop identities and loops")
    sp.add_argument("file")
    sp.add_argument("-o", "--output")

    add("rules", cmd_rules, "list the rewrite rules")

    sp = add("rules-check", cmd_rules_check, "soundness of every rule under models k")
    sp.add_argument("--k", type=int, action="append", help="model parameter (repeatable)")
    sp.add_argument("--samples", type=int, default=50, help="random angle samples per rule")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--out")

    sp = add("incompleteness-cert", cmd_cert, "check the counterexample certificate")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--floor", type=float, default=incompleteness.SEPARATION_FLOOR)
    sp.add_argument("--write-diagrams", metavar="DIR", help="save d1.zx and d2.zx here")
    sp.add_argument("--out")

    sp = add("euler", cmd_euler, "Euler decomposition and colour swap")
    sp.add_argument("--order", choices=[euler.ZXZ, euler.XZX], required=True)
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="2x2 unitary document")
    src.add_argument("--triple", help="Euler triple document")
    sp.add_argument("--diagram-out", help="write the spider chain here")
    sp.add_argument("--realize-phase", action="store_true", help="include the global phase as a scalar gadget")
    sp.add_argument("--out")

    sp = add("search", cmd_search, "look for gap candidates")
    sp.add_argument("--config", required=True)
    sp.add_argument("--output-dir", help="write candidate diagram pairs here")
    sp.add_argument("--out")

    sp = add("fixture", cmd_fixture, "evaluate a shipped candidate equality")
    sp.add_argument("name", choices=search.FIXTURES)
    sp.add_argument("--k", type=int, action="append")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"zxcheck {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DiagramError, ValueError) as exc:
        print(f"zxcheck {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
