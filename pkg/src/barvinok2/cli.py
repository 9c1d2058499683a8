"""Command-line interface.

Three subcommands:

* ``rank FILE`` — decide whether the rational matrix in FILE has
  Barvinok rank at most 2; print the canonical form, the first spanning
  column pair, and the balanced composition of the induced tree.
* ``homology -d D -n N`` — compute the homology of the tree-space
  manifold by up to four independent methods and report whether they
  agree (they must; disagreement exits 4).
* ``export -d D -n N`` — write the simplicial complex or its boundary
  matrices to files.

All stdout output is JSON with sorted keys so identical inputs yield
byte-identical reports; timing information goes to stderr.

Exit codes: 0 success, 2 unparsable input, 3 degenerate (zero) matrix
class, 4 method disagreement, 5 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .canonical import canonicalize
from .equivariant import (
    hemispherical,
    hemispherical_structured,
    plus_part,
    plus_tensor_hemispherical,
    tensor,
)
from .errors import DomainError, RankError, ResourceError, ZeroClassError
from .formulas import field_betti_formula, homology_formula
from .homology import homology_field, homology_Z, simplicial_chain_complex
from .morse import morse_reduce, standard_splitting
from .tree_complex import DEFAULT_SIMPLEX_CAP, build_complex, tree_from_matrix
from .trop import RationalMatrix, barvinok_rank_le2

METHODS = ("simplicial", "cellular", "morse", "formula")
COEFFS = {"z": None, "q": 0, "z2": 2, "z3": 3}


def _print_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def cmd_rank(args) -> int:
    try:
        with open(args.matrix, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        sys.stderr.write("error: cannot read %s: %s\n" % (args.matrix, exc))
        return 2
    try:
        M = RationalMatrix.from_csv(text)
    except DomainError as exc:
        sys.stderr.write("error: cannot parse %s: %s\n" % (args.matrix, exc))
        return 2
    try:
        cm = canonicalize(M)
    except ZeroClassError as exc:
        sys.stderr.write("error: %s\n" % (exc,))
        return 3
    pair = barvinok_rank_le2(cm.as_rational_matrix())
    payload = {
        "command": "rank",
        "input": args.matrix,
        "d": cm.d,
        "n": cm.n,
        "canonical": json.loads(cm.to_json()),
        "rank_le_2": pair is not None,
        "pair": list(pair) if pair is not None else None,
        "composition": None,
    }
    if pair is not None and cm.d >= 2 and cm.n >= 2:
        payload["composition"] = str(tree_from_matrix(cm))
    _print_json(payload)
    return 0


def _profile_payload(profile) -> dict:
    return json.loads(profile.to_json())


def _field_payload(betti: dict) -> dict:
    return {str(k): v for k, v in sorted(betti.items()) if v}


def _reduce_field(betti: dict) -> dict:
    out = dict(betti)
    if out.get(0, 0) < 1:
        raise DomainError("cannot reduce: no class in degree 0")
    out[0] -= 1
    return out


def _unreduce_field(betti: dict) -> dict:
    out = dict(betti)
    out[0] = out.get(0, 0) + 1
    return out


def _homology_method(method: str, d: int, n: int, char, reduced: bool, cap: int):
    """One method's profile payload, aligned to the requested form."""
    if method == "formula":
        if char is None:
            profile = homology_formula(d, n).profile  # reduced
            if not reduced:
                profile = profile.unreduced_from_reduced()
            return _profile_payload(profile)
        betti = field_betti_formula(d, n, char)  # reduced
        if not reduced:
            betti = _unreduce_field(betti)
        return _field_payload(betti)
    if method == "simplicial":
        K = build_complex(d, n, cap=cap)
        C = simplicial_chain_complex(K.simplices_by_dim)
    elif method == "cellular":
        C = plus_part(tensor(hemispherical(d - 2), hemispherical(n - 2)))
    elif method == "morse":
        D, N = max(d, n) - 2, min(d, n) - 2
        S = hemispherical_structured(N)
        C, _layout = plus_tensor_hemispherical(D, S)
        C = morse_reduce(C, standard_splitting(D, S)).complex
    else:
        raise DomainError("unknown method %r" % (method,))
    if char is None:
        profile = homology_Z(C)  # unreduced
        if reduced:
            profile = profile.reduced_from_unreduced()
        return _profile_payload(profile)
    betti = homology_field(C, char)  # unreduced
    if reduced:
        betti = _reduce_field(betti)
    return _field_payload(betti)


def cmd_homology(args) -> int:
    if args.d < 3 or args.n < 3:
        sys.stderr.write("error: homology requires d, n >= 3\n")
        return 2
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            sys.stderr.write(
                "error: unknown method %r (choose from %s)\n"
                % (m, ", ".join(METHODS))
            )
            return 2
    if not methods:
        sys.stderr.write("error: no methods requested\n")
        return 2
    char = COEFFS[args.coeff]
    results = {}
    for m in methods:
        t0 = time.time()
        try:
            results[m] = _homology_method(m, args.d, args.n, char, args.reduced, args.cap)
        except ResourceError as exc:
            sys.stderr.write("error: %s\n" % (exc,))
            return 5
        sys.stderr.write("# %s: %.2fs\n" % (m, time.time() - t0))
    profiles = list(results.values())
    agree = all(p == profiles[0] for p in profiles[1:])
    payload = {
        "command": "homology",
        "d": args.d,
        "n": args.n,
        "coefficients": args.coeff,
        "reduced": bool(args.reduced),
        "methods": results,
        "agree": agree,
    }
    _print_json(payload)
    return 0 if agree else 4


def cmd_export(args) -> int:
    if args.d < 3 or args.n < 3:
        sys.stderr.write("error: export requires d, n >= 3\n")
        return 2
    try:
        K = build_complex(args.d, args.n, cap=args.cap)
    except ResourceError as exc:
        sys.stderr.write("error: %s\n" % (exc,))
        return 5
    os.makedirs(args.output, exist_ok=True)
    files = []
    if args.what == "complex":
        path = os.path.join(
            args.output, "complex_d%d_n%d.json" % (args.d, args.n)
        )
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(K.to_json() + "\n")
        files.append(path)
    else:
        C = simplicial_chain_complex(K.simplices_by_dim)
        for k in sorted(C.boundaries):
            path = os.path.join(
                args.output,
                "boundary_d%d_n%d_deg%d.csv" % (args.d, args.n, k),
            )
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(C.boundary(k).to_csv())
            files.append(path)
    payload = {
        "command": "export",
        "d": args.d,
        "n": args.n,
        "what": args.what,
        "files": sorted(files),
    }
    _print_json(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barvinok2",
        description="Barvinok rank <= 2 decisions and tree-space homology.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser(
        "rank", help="decide Barvinok rank <= 2 for a rational matrix CSV"
    )
    p_rank.add_argument("matrix", help="path to a CSV matrix file")
    p_rank.set_defaults(func=cmd_rank)

    p_hom = sub.add_parser(
        "homology", help="compute homology by several methods and compare"
    )
    p_hom.add_argument("-d", type=int, required=True)
    p_hom.add_argument("-n", type=int, required=True)
    p_hom.add_argument(
        "--methods",
        default=",".join(METHODS),
        help="comma-separated subset of: %s" % ", ".join(METHODS),
    )
    p_hom.add_argument(
        "--coeff", choices=sorted(COEFFS), default="z",
        help="coefficients: z (integral), q, z2, z3",
    )
    p_hom.add_argument("--reduced", action="store_true", help="report reduced homology")
    p_hom.add_argument(
        "--cap", type=int, default=DEFAULT_SIMPLEX_CAP,
        help="resource cap on the simplicial face count",
    )
    p_hom.set_defaults(func=cmd_homology)

    p_exp = sub.add_parser("export", help="write complex data to files")
    p_exp.add_argument("-d", type=int, required=True)
    p_exp.add_argument("-n", type=int, required=True)
    p_exp.add_argument("--what", choices=("complex", "boundaries"), required=True)
    p_exp.add_argument("-o", "--output", default=".")
    p_exp.add_argument("--cap", type=int, default=DEFAULT_SIMPLEX_CAP)
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
