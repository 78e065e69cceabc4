"""Command line entry point: ``adelharm verify|fourier|poisson|dual <scenario>``.

Exit codes: 0 all cases pass, 1 failures, 2 usage or schema error, 3 resource
limit reached (partial report).
"""

from __future__ import annotations

import argparse
import json
import sys

from .filtered import build_graded_model, dual_filtration, lex_window, standard_splitting, total_filtration
from .finab import FinAbGroup
from .fourier import TRANSFORMS, fourier
from .funcspace import FnOnGroup
from .scenario import SUITES, ScenarioError, parse_scenario
from .schwartz import SchwartzFunction, indicator_fourier, poisson_eval
from .smooth import TRANSFORM_FLAVOR, fourier_n, germ_from_literal
from .suites import check_literals, emit_report, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="adelharm", description="Exact checks of Fourier analysis identities on finite and filtered abelian groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run verification suites on a scenario")
    v.add_argument("scenario")
    v.add_argument("--suite", default=None, help=f"one of {', '.join(SUITES)} (default: the scenario's, else all)")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--format", choices=("json", "md"), default="json")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    for name, text in (("fourier", "transform the functions and germs of a scenario"),
                       ("poisson", "evaluate both sides of Poisson summation for the scenario's Schwartz function"),
                       ("dual", "describe the dual filtration of the scenario's model")):
        c = sub.add_parser(name, help=text)
        c.add_argument("scenario")
    return p


def _print_json(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _model_of(sc):
    if sc.model is None:
        raise ScenarioError([("model", "this command needs a model")])
    return build_graded_model(dict(sc.model.components), sc.model.level)


def cmd_verify(args) -> int:
    sc = check_literals(parse_scenario(args.scenario))
    if args.suite is not None and args.suite not in SUITES:
        raise ScenarioError([("--suite", f"unknown suite {args.suite!r}; valid suites are {', '.join(SUITES)}")])
    if args.workers < 1:
        raise ScenarioError([("--workers", "must be at least 1")])
    report = run_suite(sc, args.suite, args.seed, args.workers)
    data = emit_report(report, args.format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if report.truncated:
        return EXIT_LIMIT
    return EXIT_FAIL if report.failures else EXIT_OK


def cmd_fourier(args) -> int:
    sc = check_literals(parse_scenario(args.scenario))
    out = {"functions": [], "germs": []}
    for spec in sc.functions:
        f = FnOnGroup.from_literal(FinAbGroup(spec.group), spec.values)
        out["functions"].append({"group": spec.group, **{w: fourier(f, w).to_literal() for w in TRANSFORMS}})
    if sc.germs:
        _, X = _model_of(sc)
        for spec in sc.germs:
            g = germ_from_literal(X, spec.model_dump(mode="json"))
            which = next(w for w, (src, _) in TRANSFORM_FLAVOR.items() if src == g.flavor)
            out["germs"].append({"transform": which, "result": fourier_n(g, which).to_json()})
    _print_json(out)
    return EXIT_OK


def cmd_poisson(args) -> int:
    sc = check_literals(parse_scenario(args.scenario))
    m, X = _model_of(sc)
    if sc.model.cut is None or not sc.schwartz:
        raise ScenarioError([("schwartz", "the poisson command needs a cut and Schwartz terms")])
    seq = standard_splitting(m, sc.model.cut)
    s = SchwartzFunction.from_literal(X, [t.model_dump() for t in sc.schwartz])
    res = poisson_eval(s, seq)
    out = res.to_json()
    out["transform"] = indicator_fourier(s, seq).to_literal()
    _print_json(out)
    return EXIT_OK if res.equal else EXIT_FAIL


def cmd_dual(args) -> int:
    sc = check_literals(parse_scenario(args.scenario))
    m, X = _model_of(sc)
    rows = []
    for z in lex_window(X):
        F = total_filtration(X, z)
        Fh = dual_filtration(X, z)
        rows.append({"z": list(z), "F": F.order, "F_hat": Fh.order, "perp": Fh == F.perp()})
    _print_json({"ambient": list(m.ambient.orders), "levels": rows})
    return EXIT_OK if all(r["perp"] for r in rows) else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "fourier": cmd_fourier, "poisson": cmd_poisson, "dual": cmd_dual}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ScenarioError as exc:
        for loc, msg in exc.problems:
            print(f"{args.scenario}: {loc}: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
