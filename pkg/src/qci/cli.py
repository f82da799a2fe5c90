"""``qci`` command line.

Algebras and modules are read as JSON from a file, ``-`` for stdin, or an
inline JSON string.  Every verb exits 0 on PASS and 1 on any violation;
malformed input exits 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import algebra as alg
from .campaigns import CAMPAIGNS, ExperimentSpec, proper_splits, run_campaign
from .errors import BadParams, InvariantViolation, QciError, SpecParse
from .homology import Budget, ext_dims, hochschild_dims
from .module import GradedModule, trivial_module
from .twist import qci_decomposition_check

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _read_json(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise SpecParse(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParse(f"invalid JSON in {source}: {exc}") from exc


def _load_algebra(args) -> alg.QciAlgebra:
    if args.algebra is None:
        raise SpecParse("--algebra is required")
    return alg.QciAlgebra.from_json(_read_json(args.algebra))


def _load_module(A, source: Optional[str]) -> GradedModule:
    if source is None or source == "trivial":
        return trivial_module(A)
    if source == "regular":
        from .module import regular_module

        return regular_module(A)
    return GradedModule.from_json(A, _read_json(source))


def _parse_split(text: str) -> list[int]:
    try:
        return [int(x) - 1 for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise SpecParse(f"bad --split {text!r}: expected comma-separated 1-based indices") from exc


def _emit(args, payload: dict, table: Optional[str] = None):
    if args.format == "table" and table is not None:
        sys.stdout.write(table)
    else:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _verdict(ok: bool) -> int:
    return EXIT_PASS if ok else EXIT_FAIL


# -- verbs --------------------------------------------------------------------


def cmd_example(args) -> int:
    name = args.name
    if name == "exterior":
        A = alg.exterior_algebra(args.c, args.p)
    elif name == "root-of-unity":
        if args.q is None:
            raise BadParams("root-of-unity needs --q")
        A = alg.root_of_unity_algebra(args.c, args.a, args.q, args.p)
    elif name == "truncated":
        a = [args.a] * args.c if args.exponents is None else [int(x) for x in args.exponents.split(",")]
        A = alg.truncated_polynomial(a, args.p)
    else:  # argparse restricts choices
        raise BadParams(f"unknown example {name!r}")
    sys.stdout.write(json.dumps(A.to_json(), sort_keys=True) + "\n")
    return EXIT_PASS


def cmd_nakayama(args) -> int:
    A = _load_algebra(args)
    nu = alg.nakayama(A)
    form = alg.frobenius_form(A)
    ok = nu.satisfies_identity(form)
    payload = {
        "gamma": [g.value for g in nu.gamma],
        "identity_holds": ok,
        "is_identity": nu.is_identity(),
        "symmetric": alg.is_symmetric(A),
    }
    table = (
        f"gamma: {' '.join(str(g.value) for g in nu.gamma)}\n"
        f"identity holds: {ok}\nsymmetric: {alg.is_symmetric(A)}\n"
    )
    _emit(args, payload, table)
    return _verdict(ok)


def cmd_double(args) -> int:
    A = _load_algebra(args)
    D = alg.symmetric_double(A)
    sys.stdout.write(json.dumps(D.to_json(), sort_keys=True) + "\n")
    return _verdict(alg.is_symmetric(D))


def cmd_decompose(args) -> int:
    A = _load_algebra(args)
    splits = [_parse_split(args.split)] if args.split else proper_splits(A.c)
    results = {",".join(str(i + 1) for i in I): qci_decomposition_check(A, I) for I in splits}
    table = "".join(f"split {{{k}}}: {'ok' if v else 'FAILED'}\n" for k, v in results.items())
    _emit(args, {"splits": results}, table)
    return _verdict(all(results.values()))


def cmd_ext(args) -> int:
    A = _load_algebra(args)
    M = _load_module(A, args.module)
    N = _load_module(A, args.target)
    t = ext_dims(M, N, args.window, Budget(max_algebra_dim=args.budget_dim))
    _emit(args, t.to_json(), "".join(f"Ext^{i}: {d}\n" for i, d in enumerate(t.dims)))
    return EXIT_PASS


def cmd_hochschild(args) -> int:
    A = _load_algebra(args)
    # the enveloping algebra has dimension dim(A)^2
    t = hochschild_dims(A, args.window, Budget(max_algebra_dim=args.budget_dim**2))
    _emit(args, t.to_json(), "".join(f"HH^{i}: {d}\n" for i, d in enumerate(t.dims)))
    return EXIT_PASS


def _campaign_verb(campaign: str):
    def run(args) -> int:
        algebra = _load_algebra(args).to_json() if args.algebra is not None else None
        spec = ExperimentSpec(
            campaign=campaign,
            algebra=algebra,
            window=args.window,
            corpus=args.corpus,
            seed=args.seed,
            budget_dim=args.budget_dim,
        )
        return _run_spec(args, spec)

    return run


def _run_spec(args, spec: ExperimentSpec) -> int:
    report = run_campaign(spec, jobs=args.jobs)
    sys.stdout.write(report.to_table() if args.format == "table" else report.to_jsonl())
    return _verdict(report.verdict == "PASS")


def cmd_verify(args) -> int:
    if args.spec is not None:
        data = _read_json(args.spec)
        if not isinstance(data, dict):
            raise SpecParse("spec must be a JSON object")
        if isinstance(data.get("algebra"), str):
            data["algebra"] = _read_json(data["algebra"])
        spec = ExperimentSpec.from_json(data)
    else:
        if args.campaign is None:
            raise SpecParse("verify needs --spec or --campaign")
        algebra = _load_algebra(args).to_json() if args.algebra is not None else None
        spec = ExperimentSpec(
            campaign=args.campaign,
            algebra=algebra,
            window=args.window,
            corpus=args.corpus,
            seed=args.seed,
            budget_dim=args.budget_dim,
        )
    return _run_spec(args, spec)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="algebra JSON: file path, '-' for stdin, or inline JSON")
    common.add_argument("--window", type=int, default=None, help="largest cohomological degree W")
    common.add_argument("--corpus", type=int, default=20, help="number of cases in a campaign")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-dim", type=int, default=64, help="largest algebra dimension in generated corpora")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for campaigns")

    parser = argparse.ArgumentParser(prog="qci", description="Quantum complete intersections: constructions and Ext checks.")
    sub = parser.add_subparsers(dest="verb", required=True)

    ex = sub.add_parser("example", parents=[common], help="emit a canned algebra")
    ex.add_argument("name", choices=("exterior", "root-of-unity", "truncated"))
    ex.add_argument("--c", type=int, default=2)
    ex.add_argument("--a", type=int, default=2)
    ex.add_argument("--q", type=int, default=None)
    ex.add_argument("--p", type=int, default=5)
    ex.add_argument("--exponents", default=None, help="comma-separated exponents (truncated only)")
    ex.set_defaults(func=cmd_example)

    sub.add_parser("nakayama", parents=[common], help="Nakayama automorphism").set_defaults(func=cmd_nakayama)
    sub.add_parser("double", parents=[common], help="symmetric double").set_defaults(func=cmd_double)

    dec = sub.add_parser("decompose", parents=[common], help="twisted tensor decomposition check")
    dec.add_argument("--split", default=None, help="1-based generator indices of the left factor, e.g. 1,3")
    dec.set_defaults(func=cmd_decompose)

    sub.add_parser("kunneth", parents=[common], help="Kunneth campaign").set_defaults(func=_campaign_verb("kunneth"))

    ext = sub.add_parser("ext", parents=[common], help="dimensions of Ext^i(M, N)")
    ext.add_argument("--module", default=None, help="module JSON, or 'trivial' / 'regular' (default trivial)")
    ext.add_argument("--target", default=None, help="target module JSON, or 'trivial' / 'regular'")
    ext.set_defaults(func=cmd_ext)

    sub.add_parser("hochschild", parents=[common], help="dimensions of HH^i(A)").set_defaults(func=cmd_hochschild)

    ver = sub.add_parser("verify", parents=[common], help="run a verification campaign")
    ver.add_argument("--campaign", choices=CAMPAIGNS, default=None)
    ver.add_argument("--spec", default=None, help="experiment spec JSON")
    ver.set_defaults(func=cmd_verify)
    return parser


DEFAULT_WINDOWS = {"kunneth": 4}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.window is None:
        args.window = DEFAULT_WINDOWS.get(args.verb, 10)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        sys.stderr.write(f"qci: invariant violated: {exc}\n")
        return EXIT_FAIL
    except QciError as exc:
        sys.stderr.write(f"qci: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
