"""Command-line entry point: rinfinity <command> [options].

Exit codes: 0 success, 1 invalid input, 2 internal verification failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from .appendix_maps import appendix_pairs, check_pair, space_versus_group
from .catalog import SolTorusBundle, decide
from .config import APPENDIX_SAMPLES, APPENDIX_SEED, DATA_DIR, LOG_FORMAT, LOG_LEVEL, ORACLE_BOUND
from .documents import (
    count_value,
    frame_records,
    load_input,
    matrix_value,
    nil_frame,
    reverser_document,
    root_document,
    table_frame,
    to_json,
    to_text,
    verdict_document,
    write_csv,
)
from .errors import InputError, MalformedInput, WitnessVerificationError
from .exact_linear import IntMatrix, mat_det, parse_matrix
from .glz_conjugacy import (
    bruteforce_conjugator_search,
    commutant_lattice,
    det_minus_one_root,
    find_reverser,
    fundamental_unit,
    gl2z_conjugate,
    literal_shapes,
    primitive_root,
    reverser_family,
)
from .reidemeister import (
    LatticeAut,
    SolAut,
    finite_quotient_sol_oracle,
    matrix_order_mod,
    reidemeister_lattice,
    reidemeister_sol,
    smallest_valid_modulus,
    sol_terms,
)

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 1, not argparse's 2."""

    def error(self, message):
        raise MalformedInput(message)


def matrix(text: str) -> IntMatrix:
    return parse_matrix(text)


# --- commands ------------------------------------------------------------------


def cmd_decide(args) -> Dict:
    if args.stdin:
        text = sys.stdin.read()
    else:
        path = Path(args.input)
        if not path.exists():
            raise MalformedInput(f"input file not found: {path}")
        text = path.read_text(encoding="utf-8")
    return verdict_document(decide(load_input(text)))


def cmd_sol(args) -> Dict:
    return verdict_document(decide(SolTorusBundle(args.matrix)))


def cmd_conj(args) -> Dict:
    found = gl2z_conjugate(args.a, args.b, prefer_det=args.prefer_det)
    doc = {
        "a": matrix_value(args.a),
        "b": matrix_value(args.b),
        "conjugate": found is not None,
        "conjugator": matrix_value(found.matrix) if found else None,
        "det": found.det if found else None,
        "route": found.route if found else None,
    }
    if args.oracle:
        witness = bruteforce_conjugator_search(args.a, args.b, bound=args.bound)
        doc["oracle"] = {
            "bound": args.bound,
            "witness": matrix_value(witness.matrix) if witness else None,
            "word": witness.word if witness else None,
        }
    return doc


def cmd_reverser(args) -> Dict:
    report = find_reverser(args.matrix)
    doc = {"matrix": matrix_value(args.matrix), **reverser_document(report)}
    doc["literal_shapes"] = sorted(literal_shapes(args.matrix))
    if args.family and report.exists:
        doc["family"] = [matrix_value(s) for s in reverser_family(args.matrix, span=args.family)]
    return doc


def cmd_root(args) -> Dict:
    a = args.matrix
    lattice = commutant_lattice(a)
    units = fundamental_unit(lattice)
    doc = {
        "matrix": matrix_value(a),
        "lattice": {"g": lattice.g, "m1": matrix_value(lattice.m1), "discriminant": lattice.discriminant},
        "fundamental_unit": {
            "epsilon": matrix_value(units.epsilon),
            "det": units.det,
            "exponent": units.exponent,
            "sign": units.sign,
        },
    }
    if mat_det(a) == 1:
        root = primitive_root(a)
        doc["primitive_root"] = {"root": matrix_value(root.root), "exponent": root.exponent, "sign": root.sign}
        doc["det_minus_one_root"] = root_document(det_minus_one_root(a))
    return doc


def cmd_reidemeister(args) -> Dict:
    if args.sol is not None:
        if args.base is None:
            raise MalformedInput("--sol needs --base")
        phi = SolAut(s=args.sol, eps=args.eps, base=args.base)
        terms = sol_terms(phi) if phi.eps == -1 else ()
        return {
            "s": matrix_value(phi.s),
            "eps": phi.eps,
            "base": matrix_value(phi.base),
            "terms": [count_value(t) for t in terms],
            "reidemeister_number": count_value(reidemeister_sol(phi)),
        }
    if args.matrix is None:
        raise MalformedInput("reidemeister needs --matrix or --sol with --base")
    return {
        "matrix": matrix_value(args.matrix),
        "reidemeister_number": count_value(reidemeister_lattice(LatticeAut(args.matrix))),
    }


def cmd_table(args):
    df = nil_frame(args.k) if args.geometry == "nil" and args.k is not None else table_frame(args.geometry)
    if args.csv is not None:
        path = args.csv or DATA_DIR / f"{args.geometry}.csv"
        write_csv(df, path)
    if args.json:
        return {"table": args.geometry, "rows": frame_records(df)}
    return df


def cmd_verify_appendix(args) -> Dict:
    pairs = []
    for pair in appendix_pairs():
        report = check_pair(pair, n=args.samples, seed=args.seed).report()
        comparison = space_versus_group(pair.forward)
        report["reverser_exists"] = comparison.reverser_exists
        report["reverser"] = matrix_value(comparison.reverser)
        report["space_r_infinity"] = comparison.space_r_infinity
        report["group_r_infinity"] = comparison.group_r_infinity
        pairs.append(report)
    passed = all(p["passed"] for p in pairs)
    if not passed:
        raise WitnessVerificationError("a reference map pair failed the composition check")
    return {"samples": args.samples, "seed": args.seed, "pairs": pairs, "passed": passed}


def cmd_oracle(args) -> Dict:
    a = args.matrix
    if args.s is not None:
        phi = SolAut(s=args.s, eps=args.eps, base=a)
    else:
        reverser = find_reverser(a)
        if reverser.exists:
            phi = SolAut(s=reverser.witness, eps=-1, base=a)
        else:
            phi = SolAut(s=IntMatrix.identity(2), eps=1, base=a)
    m = args.mod if args.mod is not None else smallest_valid_modulus(a, phi)[0]
    classes = finite_quotient_sol_oracle(a, phi, m)
    k = matrix_order_mod(a, m)
    return {
        "matrix": matrix_value(a),
        "s": matrix_value(phi.s),
        "eps": phi.eps,
        "modulus": m,
        "order_k": k,
        "group_order": m * m * k,
        "finite_classes": classes,
        "reidemeister_number": count_value(reidemeister_sol(phi)),
    }


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document")

    parser = _Parser(prog="rinfinity", description="R-infinity decisions for geometric 3-manifold groups")
    parser.add_argument("--verbose", "-v", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("decide", parents=[common], help="decide a descriptor given as a JSON document")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="path to the input document")
    source.add_argument("--stdin", action="store_true", help="read the input document from stdin")
    p.set_defaults(handler=cmd_decide)

    p = sub.add_parser("sol", parents=[common], help="decide Z^2 x|_A Z for an Anosov matrix")
    p.add_argument("--matrix", type=matrix, required=True, help='e.g. "2,1;1,1"')
    p.set_defaults(handler=cmd_sol)

    p = sub.add_parser("conj", parents=[common], help="GL(2,Z) conjugacy of two Anosov matrices")
    p.add_argument("--a", type=matrix, required=True)
    p.add_argument("--b", type=matrix, required=True)
    p.add_argument("--prefer-det", type=int, choices=(1, -1), default=1)
    p.add_argument("--oracle", action="store_true", help="also run the bounded brute-force search")
    p.add_argument("--bound", type=int, default=ORACLE_BOUND, help="word length bound for --oracle")
    p.set_defaults(handler=cmd_conj)

    p = sub.add_parser("reverser", parents=[common], help="find S with S A S^-1 = A^-1")
    p.add_argument("--matrix", type=matrix, required=True)
    p.add_argument("--family", type=int, default=0, help="list reversers +-eps^n S1 with |n| <= N")
    p.set_defaults(handler=cmd_reverser)

    p = sub.add_parser("root", parents=[common], help="commutant lattice, fundamental unit and roots")
    p.add_argument("--matrix", type=matrix, required=True)
    p.set_defaults(handler=cmd_root)

    p = sub.add_parser("reidemeister", parents=[common], help="Reidemeister number of an automorphism")
    p.add_argument("--matrix", type=matrix, help="lattice automorphism of Z^n")
    p.add_argument("--sol", type=matrix, help="fibre part S of a torus-bundle automorphism")
    p.add_argument("--base", type=matrix, help="monodromy A of the torus bundle")
    p.add_argument("--eps", type=int, choices=(1, -1), default=-1)
    p.set_defaults(handler=cmd_reidemeister)

    p = sub.add_parser("table", parents=[common], help="print one of the static tables")
    p.add_argument("--geometry", choices=("flat", "nil", "s2xr", "summary", "exceptions"), required=True)
    p.add_argument("--k", type=int, help="Euler number substituted into the Nil invariants")
    p.add_argument("--csv", nargs="?", const="", default=None,
                   help="also write CSV (to the given path, or under the data directory)")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("verify-appendix", parents=[common], help="check the reference maps of S^3 x S^3")
    p.add_argument("--samples", type=int, default=APPENDIX_SAMPLES)
    p.add_argument("--seed", type=int, default=APPENDIX_SEED)
    p.set_defaults(handler=cmd_verify_appendix)

    p = sub.add_parser("oracle", parents=[common], help="twisted classes on a finite quotient")
    p.add_argument("--matrix", type=matrix, required=True)
    p.add_argument("--mod", type=int, help="modulus m (default: smallest admissible)")
    p.add_argument("--s", type=matrix, help="fibre part S (default: a reverser, else the identity)")
    p.add_argument("--eps", type=int, choices=(1, -1), default=-1)
    p.set_defaults(handler=cmd_oracle)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        logging.getLogger().setLevel(logging.INFO if args.verbose else LOG_LEVEL)
        result = args.handler(args)
    except InputError as e:
        print(f"error: {e.precondition}: {e}", file=sys.stderr)
        return 1
    except AssertionError as e:
        logger.error(f"verification failed: {e}")
        print(f"internal error: {e}", file=sys.stderr)
        return 2

    if args.json:
        sys.stdout.write(to_json(result))
    elif hasattr(result, "to_string"):
        sys.stdout.write(result.to_string(index=False) + "\n")
    else:
        sys.stdout.write(to_text(result))
    return 0


def main() -> None:
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr)
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
