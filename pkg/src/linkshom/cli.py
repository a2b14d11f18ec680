"""Command line entry point: ``linkshom <command> [options]``.

Exit codes: 0 success, 1 a verify suite failed, 2 invalid parameters,
3 an internal invariant failed (boundary squared nonzero, negative
homology dimension, ill-defined boundary).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .arnold import GenParity, enumerate_basis, format_monomial
from .cache import RankCache
from .errors import InvariantError

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linkshom", description="Betti numbers of spaces of long links modulo immersions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("json",)):
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("--seed", type=int, default=0, help="seed for prime selection")
        return p

    p = common(sub.add_parser("basis", help="admissible monomial basis of H^*(Conf(n, R^d))"), ("json", "md"))
    p.add_argument("--n", type=_nonneg, required=True, help="number of points")
    p.add_argument("--t", type=_nonneg, required=True, help="word length")

    p = sub.add_parser("model", help="dump a simplicial wedge of spheres")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--p", type=_nonneg, required=True, help="highest level")

    p = common(sub.add_parser("betti", help="Betti table by total degree"), ("json", "csv", "md"))
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--u-max", type=int, required=True)
    p.add_argument("--p-max", type=int, default=None, help="truncation for n >= 2")
    p.add_argument("--exact", action="store_true", help="use fraction-free elimination for ranks")
    p.add_argument("--policy", choices=("multimodular", "exact", "both"), default=None)
    p.add_argument("--cache-dir", default=None, help="overrides LINKSHOM_CACHE")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--compare-knots", action="store_true",
                   help="also report the retraction inequality against the knot table")

    p = common(sub.add_parser("euler", help="closed-form Euler series"), ("json", "md"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--terms", type=int, required=True, help="number of coefficients")
    p.add_argument("--check", type=int, default=None, metavar="T_MAX",
                   help="compare against alternating sums of normalized dimensions up to word length T_MAX")

    p = common(sub.add_parser("series", help="Euler series of the pair, or a Poincare series"), ("json", "md"))
    p.add_argument("--kind", choices=("links", "pair", "poincare"), default="pair")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--order", type=_nonneg, required=True)

    p = common(sub.add_parser("radius", help="radius of convergence bounds"), ("json", "md"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = common(sub.add_parser("verify", help="run invariant suites"), ("json", "md"))
    p.add_argument("--suite", choices=("arnold", "gamma", "simplicial", "complex", "euler", "all"), default="all")
    p.add_argument("--m", type=_nonneg, default=None, help="restrict complex/euler suites to this m")
    return parser


# ------------------------------------------------------------------ commands

def _basis(args) -> tuple[int, str]:
    monos = [format_monomial(m.factors) for m in enumerate_basis(args.n, args.t)]
    if args.format == "md":
        return EXIT_OK, "\n".join(f"- {m}" for m in monos) + "\n"
    return EXIT_OK, json.dumps({"n": args.n, "t": args.t, "dimension": len(monos), "basis": monos}) + "\n"


def _model(args) -> tuple[int, str]:
    from .simplicial import wedge_model

    if args.n < 1:
        raise UsageError("n must be at least 1")
    return EXIT_OK, wedge_model(args.m, args.n, args.p).dumps() + "\n"


def _betti(args) -> tuple[int, str]:
    from .engine import betti_table

    policy = args.policy or ("exact" if args.exact else "multimodular")
    if args.n >= 2 and args.p_max is None:
        raise UsageError("n >= 2 requires --p-max")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    cache = RankCache.from_env(args.cache_dir)
    table = betti_table(args.m, args.n, args.d, args.u_max, p_max=args.p_max, policy=policy,
                        seed=args.seed, cache=cache, jobs=args.jobs)
    if args.compare_knots:
        report = retraction_report(table, policy=policy, seed=args.seed, cache=cache)
        if args.format == "json":
            data = table.to_json()
            data["retraction"] = report
            return EXIT_OK, json.dumps(data, indent=2, sort_keys=True) + "\n"
        extra = "\n".join(f"u={r['u']}: links {r['links']} >= product {r['product']}: {r['holds']}" for r in report)
        text = table.to_csv() if args.format == "csv" else table.to_markdown()
        return EXIT_OK, text + "\n" + extra + "\n"
    if args.format == "csv":
        return EXIT_OK, table.to_csv()
    if args.format == "md":
        return EXIT_OK, table.to_markdown()
    return EXIT_OK, table.dumps()


def retraction_report(table, policy="multimodular", seed=0, cache=None) -> list[dict]:
    """b_u(links) against the m-fold convolution of knot Betti numbers, within complete degrees."""
    from .engine import betti_table

    knots = betti_table(1, table.n, table.d, len(table.entries) - 1, policy=policy, seed=seed, cache=cache)
    conv = [1] + [0] * (len(knots.entries) - 1)
    for _ in range(table.m):
        nxt = [0] * len(conv)
        for i, a in enumerate(conv):
            for j, e in enumerate(knots.entries[: len(conv) - i]):
                nxt[i + j] += a * e.betti
        conv = nxt
    out = []
    for e, k in zip(table.entries, knots.entries):
        if e.complete and k.complete:
            out.append({"u": e.u, "links": e.betti, "product": conv[e.u], "holds": e.betti >= conv[e.u]})
    return out


def _euler(args) -> tuple[int, str]:
    from .series import euler_series_links

    if args.terms < 1:
        raise UsageError("--terms must be at least 1")
    if args.m < 1 or args.d < 4:
        raise UsageError("need m >= 1 and d >= 4")
    series = euler_series_links(args.m, args.d, args.terms - 1)
    data = series.to_json()
    if args.check is not None:
        from .engine import euler_check

        if args.check < 0:
            raise UsageError("--check must be non-negative")
        data["check"] = [r.to_json() for r in euler_check(args.m, args.d, args.check)]
    if args.format == "md":
        lines = [f"Euler series 1/((1-y)(1-2y)...(1-{args.m}y)), y = x^{args.d - 1}", "",
                 "| degree | coefficient |", "|---|---|"]
        lines += [f"| {i} | {c} |" for i, c in enumerate(data["coeffs"])]
        for r in data.get("check", []):
            lines.append(f"\nt={r['t']}: computed {r['computed']}, expected {r['expected']}, pass {r['pass']}")
        return EXIT_OK, "\n".join(lines) + "\n"
    return EXIT_OK, json.dumps(data, sort_keys=True) + "\n"


def _series(args) -> tuple[int, str]:
    from .series import euler_series_links, euler_series_pair, poincare_series

    if args.kind == "poincare":
        from .engine import betti_table

        series = poincare_series(betti_table(args.m, 1, args.d, args.order, seed=args.seed), args.order)
    else:
        if args.m < 1 or args.d < 4:
            raise UsageError("need m >= 1 and d >= 4")
        fn = euler_series_pair if args.kind == "pair" else euler_series_links
        series = fn(args.m, args.d, args.order)
    data = series.to_json()
    data["kind"] = args.kind
    if args.format == "md":
        lines = ["| degree | coefficient |", "|---|---|"] + [f"| {i} | {c} |" for i, c in enumerate(data["coeffs"])]
        return EXIT_OK, "\n".join(lines) + "\n"
    return EXIT_OK, json.dumps(data, sort_keys=True) + "\n"


def _radius(args) -> tuple[int, str]:
    from .series import radius_report

    if args.m < 1 or args.d < 4:
        raise UsageError("need m >= 1 and d >= 4")
    data = radius_report(args.m, args.d).to_json()
    if args.format == "md":
        lines = [f"| quantity | value |", "|---|---|"]
        lines += [f"| {k} | {data[k]!r} |" for k in ("link_bound", "knot_bound", "minimum", "link_bound_is_smaller")]
        lines += ["", *data["formulas"].values(), data["growth_rate"]]
        return EXIT_OK, "\n".join(lines) + "\n"
    return EXIT_OK, json.dumps(data, indent=2, sort_keys=True) + "\n"


def _verify(args) -> tuple[int, str]:
    from .verify import run_suite

    checks = run_suite(args.suite, m=args.m, seed=args.seed)
    ok = all(c.passed for c in checks)
    if args.format == "md":
        lines = ["| suite | check | pass | seconds | detail |", "|---|---|---|---|---|"]
        lines += [f"| {c.suite} | {c.name} | {c.passed} | {c.seconds} | {c.detail} |" for c in checks]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"passed": ok, "checks": [c.to_json() for c in checks]}, indent=2) + "\n"
    return (EXIT_OK if ok else EXIT_VERIFY), text


COMMANDS = {
    "basis": _basis,
    "model": _model,
    "betti": _betti,
    "euler": _euler,
    "series": _series,
    "radius": _radius,
    "verify": _verify,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        code, text = COMMANDS[args.command](args)
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=err)
        return EXIT_INVARIANT
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    out.write(text)
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
