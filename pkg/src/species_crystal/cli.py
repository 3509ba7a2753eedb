"""Command-line entry point.  Exit status: 0 success, 1 domain error, 2 usage error."""

from __future__ import annotations

import argparse
import json
import sys

from . import presets
from .errors import SpeciesError


def _weight(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"weight must be comma-separated integers, got {text!r}") from exc


def _load(args):
    params = {}
    if getattr(args, "z", None) is not None:
        params["z"] = args.z
    return presets.load(args.preset, **params)


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def cmd_validate(args):
    g = _load(args)
    _emit({"valid": True, "name": g.name, "vertices": list(g.names),
           "arrows": [[g.names[i], g.names[j]] for i, j in g.arrows]})


def cmd_cartan(args):
    _emit(_load(args).cartan.to_json())


def cmd_algebra_dims(args):
    from .algebra import graded_dimensions

    _emit(graded_dimensions(_load(args), args.max_degree).to_json())


def cmd_roots(args):
    from .roots import is_finite_type, positive_roots

    g = _load(args)
    verdict = is_finite_type(g.cartan)
    out = {"finite": verdict.finite, "type": verdict.label}
    if verdict.finite:
        out["positive_roots"] = [list(b) for b in positive_roots(g.cartan).roots]
    _emit(out)


def cmd_kostant(args):
    from .roots import kostant_count

    print(kostant_count(_load(args).cartan, args.weight))


def cmd_ext(args):
    from .homology import ext1_space, hom_space
    from .reps import load_module

    g = _load(args)
    A = load_module(g, args.module_a)
    B = load_module(g, args.module_b)
    ext = ext1_space(A, B)
    _emit({"dim_ext1": ext.dim, "dim_hom": hom_space(A, B).dim, "dim_cocycles": ext.cocycle_dim,
           "dim_coboundaries": ext.coboundary_rank, "over": "base field",
           "convention": "extensions 0 -> module_b -> E -> module_a -> 0"})


def cmd_crystal(args):
    from .crystal import enumerate_crystal

    cg = enumerate_crystal(_load(args), args.depth, args.seed, args.samples)
    if args.format == "dot":
        sys.stdout.write(cg.to_dot())
    else:
        print(cg.to_json_text())


def cmd_check_axioms(args):
    from .crystal import check_axioms, enumerate_crystal

    cg = enumerate_crystal(_load(args), args.depth, args.seed, args.samples)
    _emit(check_axioms(cg).to_json())


def cmd_selftest(args):
    from .acceptance import run_all

    return 0 if run_all() else 1


def build_parser() -> argparse.ArgumentParser:
    def flags(defaults):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--seed", type=int, default=0 if defaults else argparse.SUPPRESS,
                       help="master random seed (default 0)")
        p.add_argument("--samples", type=int, default=3 if defaults else argparse.SUPPRESS,
                       help="genericity sample budget (default 3)")
        return p

    # subcommands repeat the flags without defaults so a value given before the command survives
    common = flags(False)
    parser = argparse.ArgumentParser(prog="species-crystal", parents=[flags(True)],
                                     description="Preprojective algebras of modulated graphs and B(-infinity).")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_preset(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("preset", help="preset name or path to a preset JSON file")
        p.add_argument("--z", help="deformation parameter for sl2hat-z (rational)")
        p.set_defaults(func=func)
        return p

    with_preset("validate", cmd_validate, "validate a preset")
    with_preset("cartan", cmd_cartan, "print the Cartan matrix and symmetrizer")
    p = with_preset("algebra-dims", cmd_algebra_dims, "graded dimensions of the preprojective algebra")
    p.add_argument("--max-degree", type=int, default=8)
    with_preset("roots", cmd_roots, "finite-type verdict and positive roots")
    p = with_preset("kostant", cmd_kostant, "Kostant partition count")
    p.add_argument("--weight", type=_weight, required=True)
    p = with_preset("ext", cmd_ext, "dimension of Ext^1 between two module files")
    p.add_argument("--module-a", required=True)
    p.add_argument("--module-b", required=True)
    p = with_preset("crystal", cmd_crystal, "enumerate the crystal")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p = with_preset("check-axioms", cmd_check_axioms, "enumerate and check the crystal axioms")
    p.add_argument("--depth", type=int, required=True)
    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except SpeciesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
