"""Command-line front end.

Exit codes: 0 ok, 1 I/O, 2 usage, 3 admissibility or other precondition,
4 verification failure, 5 pole or divergence.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import PoleError, YokotaError
from .qarith import ColorSpec, RootContext, parse_color

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    ns: tuple = ()
    epsilon: Fraction = Fraction(1, 10**30)
    precision: int = 80
    output: str | None = None
    workers: int = 1

    def context(self, n: int) -> RootContext:
        try:
            return RootContext(n, self.epsilon, self.precision)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def default_precision() -> int:
    raw = os.environ.get("YOKOTA_PRECISION")
    if raw is None:
        return 80
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"YOKOTA_PRECISION must be an integer, got {raw!r}") from None


def parse_epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid epsilon {text!r}") from None
    if eps <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return eps


def parse_n_list(text: str) -> tuple:
    """``"5..12"``, ``"24,48,120"`` or a mix such as ``"5..8,10"``; may be empty."""
    out = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid n list {text!r}") from None
    if any(n < 2 for n in out):
        raise argparse.ArgumentTypeError("every n must be at least 2")
    return tuple(sorted(set(out)))


def _num(x, digits: int) -> str:
    with mpmath.workdps(digits + 10):
        x = mpmath.mpc(x)
        if x.imag == 0:
            return mpmath.nstr(x.real, digits)
        return mpmath.nstr(x, digits)


# ---------------------------------------------------------------------------
# sixj


def _sixj_colors(text: str) -> list:
    parts = [p for p in text.split(",")]
    if len(parts) != 6 or any(not p.strip() for p in parts):
        raise UsageError(f"--colors needs six comma-separated colors, got {len(parts)}")
    cols = [parse_color(p) for p in parts]
    if all(c.eps_coeff == 0 for c in cols):
        # distinct multiples forced by the four vertex conditions
        ma, mb, md = 1, 2, 4
        ms = (ma, mb, ma + mb, md, ma + mb + md, mb + md)
        cols = [ColorSpec(c.n_coeff, c.const_off, m) for c, m in zip(cols, ms)]
    return cols


def cmd_sixj(args, cfg: RunConfig) -> int:
    from .sixj import TET_VERTICES, admissible_integer_triple, admissible_vertex, sixj_general, sixj_integer, tet

    n = cfg.ns[0]
    cols = _sixj_colors(args.colors)
    ctx = cfg.context(n)
    integral = [c.at(n) for c in cols]
    is_int = all(isinstance(x, int) or getattr(x, "denominator", 0) == 1 for x in integral)
    if args.strict:
        from .errors import NotAdmissible

        for tri in TET_VERTICES:
            a, b, c = (cols[i] for i in tri)
            # the last color of each triple points away from its vertex
            ok = admissible_vertex(a, b, c.bar(), n)
            if ok and is_int:
                ok = admissible_integer_triple(*(int(integral[i]) for i in tri), n)
            if not ok:
                raise NotAdmissible(f"colors ({a}, {b}, {c}) are not admissible at n={n}")
    digits = cfg.precision - 20
    print(f"colors\t{', '.join(str(c) for c in cols)}")
    print(f"tet\t{_num(tet(cols, ctx), digits)}")
    try:
        print(f"sixj\t{_num(sixj_general(cols, ctx), digits)}")
    except PoleError:
        print("sixj\tpole")
    if is_int:
        try:
            v = sixj_integer(*(int(x) for x in integral), ctx)
            print(f"integer\t{_num(v, digits)}")
        except YokotaError as exc:
            print(f"integer\tNA ({exc})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval


def _load_graph(args):
    from .graph import parse_graph
    from .pyramids import builtin

    if args.builtin:
        try:
            return args.builtin, builtin(args.builtin)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    with open(args.graph, encoding="utf-8") as fh:
        return args.graph, parse_graph(fh.read())


def cmd_eval(args, cfg: RunConfig) -> int:
    from .evaluator import yokota
    from .volume import growth_estimate

    name, g = _load_graph(args)
    digits = max(15, cfg.precision - 20)
    for n in cfg.ns:
        ctx = cfg.context(n)
        res = yokota(g, ctx, workers=cfg.workers, route=args.route)
        with mpmath.workdps(cfg.precision):
            print(f"graph\t{name}")
            print(f"n\t{n}")
            print(f"epsilon\t{mpmath.nstr(mpmath.mpf(cfg.epsilon.numerator) / cfg.epsilon.denominator, 6)}")
            print(f"log_abs\t{mpmath.nstr(res.log_abs, digits)}")
            print(f"growth\t{mpmath.nstr(growth_estimate(res, n), digits)}")
            print(f"phase\t{mpmath.nstr(res.phase, 20)}")
            print(f"terms\t{res.n_terms}")
            print(f"digits\t{res.digits:.1f}")
            if res.perturbation:
                pert = " ".join(f"{k}={v}" for k, v in sorted(res.perturbation.items()))
                print(f"perturbation\t{pert}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


ALL_SUITES = ("orthogonality", "symmetry", "bar-product", "tree-shape", "oracle")


def _suite_ns(name, ns):
    from .pyramids import builtin

    if name == "tree-shape":
        return [n for n in ns if n % 3 == 0 or n % 8 == 0]
    if name == "oracle":
        keep = []
        for n in ns:
            if any(all((e.color.n_coeff * n).denominator == 1 for e in builtin(k).edges)
                   for k in ("gamma1", "gamma2", "gamma3", "gamma4")):
                keep.append(n)
        return keep
    return list(ns)


def cmd_verify(args, cfg: RunConfig) -> int:
    from .suites import SUITES

    names = []
    for s in args.suite or ["all"]:
        names.extend(ALL_SUITES if s == "all" else s.split(","))
    for s in names:
        if s not in SUITES:
            raise UsageError(f"unknown suite {s!r}; choose from {', '.join(ALL_SUITES)}")
    results = []
    for s in dict.fromkeys(names):
        ns = _suite_ns(s, cfg.ns)
        if not ns:
            print(f"{s}\tskipped (no applicable n)")
            continue
        kw = {"precision": cfg.precision}
        if s in ("orthogonality", "symmetry", "bar-product"):
            kw.update(count=args.count, seed=args.seed)
        results.extend(SUITES[s](ns, **kw))
    if args.inject_error and results:
        results[0].value += 1
    failed = 0
    for r in results:
        print(f"{r.suite}\t{r.label}\t{mpmath.nstr(r.value, 3)}\t{'PASS' if r.ok else 'FAIL'}")
        failed += not r.ok
    print(f"{len(results) - failed}/{len(results)} residuals below threshold")
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# table


def cmd_table(args, cfg: RunConfig) -> int:
    from .pyramids import BUILTINS
    from .volume import TSV_HEADER, sweep

    for b in args.builtin:
        if b.lower() not in BUILTINS:
            raise UsageError(f"unknown builtin graph {b!r}; choose from {', '.join(BUILTINS)}")
    chunks, failures = [], []
    for b in args.builtin:
        rep = sweep(b.lower(), cfg.ns, epsilon=cfg.epsilon, precision=cfg.precision,
                    workers=cfg.workers)
        text = rep.to_tsv()
        if len(args.builtin) > 1:
            text = f"# {b}\n" + text
        chunks.append(text)
        failures += [f"{b} n={r.n}: {r.error}" for r in rep.rows if not r.ok]
    out = "".join(chunks) if chunks else "\t".join(TSV_HEADER) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    for f in failures:
        print(f"error: {f}", file=sys.stderr)
    return 3 if failures else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=parse_epsilon, default=Fraction(1, 10**30),
                        help="perturbation size epsilon (default 1e-30)")
    common.add_argument("--precision", type=int, default=None,
                        help="significant digits (default 80 or $YOKOTA_PRECISION)")
    common.add_argument("--workers", type=int, default=1, help="worker processes")

    p = argparse.ArgumentParser(prog="yokota", description="Quantum 6j-symbols and Yokota invariants "
                                "of colored plane graphs at roots of unity.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sixj", parents=[common], help="one tetrahedron / 6j-symbol")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--colors", required=True, help='six colors a..f, e.g. "3,3,3,3,3,3" or "3n/8+3e,..."')
    s.add_argument("--strict", action="store_true", help="check vertex admissibility first")

    e = sub.add_parser("eval", parents=[common], help="evaluate <<G>> for a graph")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", help="gamma1 .. gamma4")
    src.add_argument("--graph", help="graph description file")
    e.add_argument("--n", type=parse_n_list, required=True)
    e.add_argument("--route", choices=("table", "direct"), default="table")

    v = sub.add_parser("verify", parents=[common], help="run the identity suites")
    v.add_argument("--n", type=parse_n_list, default=parse_n_list("5..12"))
    v.add_argument("--suite", action="append",
                   help=f"one of {', '.join(ALL_SUITES)} or all (repeatable)")
    v.add_argument("--count", type=int, default=20, help="random tuples per n")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-error", action="store_true", help="corrupt one residual (self-test)")

    t = sub.add_parser("table", parents=[common], help="growth-estimate TSV for builtin graphs")
    t.add_argument("--builtin", nargs="+", required=True)
    t.add_argument("--n", type=parse_n_list, default=())
    t.add_argument("--output", "-o")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        precision = args.precision if args.precision is not None else default_precision()
        ns = args.n if isinstance(args.n, tuple) else (args.n,)
        cfg = RunConfig(args.command, getattr(args, "graph", None), ns, args.eps, precision,
                        getattr(args, "output", None), max(1, args.workers))
        cfg.context(2)  # validates epsilon against precision
        handler = {"sixj": cmd_sixj, "eval": cmd_eval, "verify": cmd_verify, "table": cmd_table}
        return handler[args.command](args, cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except YokotaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
