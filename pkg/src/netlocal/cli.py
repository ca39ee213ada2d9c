"""Command-line surface: every capability as a subcommand over the JSON formats.

Exit codes: 0 success; 1 negative mathematical result on decision-shaped
queries (nonlocal behavior, infeasible support, no model found, failed
identity); 2 usage error; 3 resource cap exceeded.  Results are emitted as
JSON on stdout (or --out).  Input paths that do not exist on disk are looked
up among the shipped example files (see ``netlocal.data_path``).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import bell, bilocal, models, network, quantum, serialize, triangle
from .network import ResourceCapError


class UsageError(Exception):
    pass


def data_path(name: str) -> Path:
    """Path of a shipped example file (triangle.json, pr-box.json, ...)."""
    return Path(resources.files("netlocal").joinpath("data", name))


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    shipped = data_path(path)
    if shipped.exists():
        return shipped
    raise UsageError(f"no such file: {path} (also not a shipped example)")


def _load(path: str, loader):
    p = _resolve(path)
    try:
        return loader(p)
    except json.JSONDecodeError as err:
        raise UsageError(f"{p}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}")
    except (KeyError, ValueError, TypeError) as err:
        raise UsageError(f"{p}: {err}")


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _frac(v) -> str:
    return serialize.format_rational(v)


def cmd_bound(args) -> int:
    net = _load(args.network, serialize.load_network)
    per_source = [network.cardinality_bound_refined(net, j) for j in range(net.n)]
    _emit(
        {
            "basic_bound": network.cardinality_bound_basic(net),
            "refined_bounds": per_source,
            "affine_dimension": network.affine_dimension(net.inputs, net.outputs),
        },
        args.out,
    )
    return 0


def cmd_relax_size(args) -> int:
    dof, side = network.relaxation_size(args.rank)
    _emit({"rank": args.rank, "degrees_of_freedom": dof, "moment_matrix_side": side}, args.out)
    return 0


def cmd_eval(args) -> int:
    model = _load(args.model, serialize.load_model)
    beh = models.evaluate(model, cap=args.cap)
    _emit(serialize.behavior_to_dict(beh), args.out)
    return 0


def cmd_compress(args) -> int:
    model = _load(args.model, serialize.load_model)
    out = models.compress_source(model, args.source, cap=args.cap)
    _emit(serialize.model_to_dict(out), args.out)
    return 0


def cmd_bell_test(args) -> int:
    beh = _load(args.behavior, serialize.load_behavior)
    result = bell.membership_lp(beh)
    if isinstance(result, bell.Decomposition):
        _emit(
            {"local": True, "weights": [_frac(w) for w in result.weights]},
            args.out,
        )
        return 0
    _emit(
        {
            "local": False,
            "certificate": {
                "xi": [_frac(v) for v in result.xi],
                "value": _frac(result.value),
                "tightStrategies": list(result.tight_strategies),
            },
        },
        args.out,
    )
    return 1


def cmd_bell_facets(args) -> int:
    net = _load(args.network, serialize.load_network)
    facets = bell.facet_enumeration(net, cap=args.cap)
    _emit(
        {
            "coordinates": ["/".join(map(str, lab)) for lab in bell.cg_labels(net)],
            "facets": [
                {"coeffs": [_frac(c) for c in f.coeffs], "offset": _frac(f.offset)}
                for f in facets
            ],
        },
        args.out,
    )
    return 0


def _parse_cards(text: str) -> tuple:
    try:
        cards = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad cards {text!r}; expected e.g. 2,2,2")
    if len(cards) != 3:
        raise UsageError("cards must have three components")
    return cards


def cmd_triangle_search(args) -> int:
    target = _load(args.target, serialize.load_behavior)
    cards = _parse_cards(args.cards)
    if cards != (2, 2, 2):
        raise UsageError("the pattern search runs at cards 2,2,2")
    survivors = triangle.enumerate_and_prune(target, threads=args.threads)
    found = None
    tried = 0
    for pattern in survivors:
        tried += 1
        model = triangle.numeric_feasibility(
            triangle.FeasibilityProblem(pattern), target, starts=args.starts, seed=args.seed
        )
        if model is not None:
            found = model
            break
    payload = {
        "survivors": len(survivors),
        "patterns": [[list(row) for row in p] for p in survivors],
        "model": serialize.model_to_dict(found) if found else None,
    }
    _emit(payload, args.out)
    return 0 if found else 1


def cmd_possibilistic(args) -> int:
    outcomes = []
    for token in args.support.split(","):
        token = token.strip()
        if len(token) != 3 or any(ch not in "01" for ch in token):
            raise UsageError(f"bad outcome {token!r}; expected three bits like 011")
        outcomes.append(tuple(int(ch) for ch in token))
    cards = _parse_cards(args.cards)
    witness = triangle.possibilistic_feasible(
        frozenset(outcomes), cards, cell_cap=args.cell_cap
    )
    payload = {
        "feasible": witness is not None,
        "witness": [[int(m) for m in row] for row in witness] if witness else None,
    }
    _emit(payload, args.out)
    return 0 if witness is not None else 1


def cmd_sos_verify(args) -> int:
    try:
        report = bilocal.verify_bilocal_certificate()
    except bilocal.CertificateError as err:
        _emit({"verified": False, "error": str(err)}, args.out)
        return 1
    payload = {"verified": True, **report.as_dict()}
    _emit(payload, args.out)
    if not args.out:
        print(f"# bound: detection efficiency <= {report.bound}", file=sys.stderr)
    return 0


def cmd_quantum_table(args) -> int:
    try:
        table = quantum.full_table(args.eta)
    except AssertionError as err:
        _emit({"eta": args.eta, "verified": False, "error": str(err)}, args.out)
        return 1
    def key(part):
        return "1" if part == () else "".join(str(k) for k in part)
    payload = {
        "eta": args.eta,
        "verified": True,
        "entries": {
            f"A{key(ap)}|B{key(bp)}|C{key(cp)}": v for (ap, bp, cp), v in table.items()
        },
    }
    _emit(payload, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netlocal",
        description="finite local models, cardinality bounds, Bell polytopes, "
        "triangle search, and bilocal certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON result to this path")

    p = sub.add_parser("bound", help="basic and refined cardinality bounds per source")
    p.add_argument("network")
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("relax-size", help="degree-2 relaxation sizes for a source rank")
    p.add_argument("rank", type=int)
    common(p)
    p.set_defaults(func=cmd_relax_size)

    p = sub.add_parser("eval", help="behavior of a finite model")
    p.add_argument("model")
    p.add_argument("--cap", type=int, default=models.GRID_CAP)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compress", help="reduce one source's cardinality exactly")
    p.add_argument("model")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--cap", type=int, default=models.GRID_CAP)
    common(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("bell-test", help="exact Bell-locality membership with certificate")
    p.add_argument("behavior")
    common(p)
    p.set_defaults(func=cmd_bell_test)

    p = sub.add_parser("bell-facets", help="facets of the local polytope (desk scale)")
    p.add_argument("network")
    p.add_argument("--cap", type=int, default=64)
    common(p)
    p.set_defaults(func=cmd_bell_facets)

    p = sub.add_parser("triangle-search", help="pattern search for a finite triangle model")
    p.add_argument("--target", required=True)
    p.add_argument("--cards", default="2,2,2")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--starts", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_triangle_search)

    p = sub.add_parser("possibilistic", help="support-level feasibility on the triangle")
    p.add_argument("--support", required=True, help="comma list of outcomes, e.g. 001,010,100")
    p.add_argument("--cards", default="2,2,2")
    p.add_argument("--cell-cap", type=int, default=12)
    common(p)
    p.set_defaults(func=cmd_possibilistic)

    p = sub.add_parser("sos-verify", help="verify the bilocal efficiency certificate")
    common(p)
    p.set_defaults(func=cmd_sos_verify)

    p = sub.add_parser("quantum-table", help="numeric correlator table at an efficiency")
    p.add_argument("--eta", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_quantum_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ResourceCapError as err:
        print(f"resource cap: {err}", file=sys.stderr)
        return 3
    except (ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
