"""Command-line front end.  Every subcommand prints one JSON document.

Exit codes: 0 success or pass, 1 a check failed (or ``distinguish`` found
the shifts different), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import acoe, battery, ck, groupoid, ktheory, sft, zeta


def load_matrix(arg: str) -> sft.SftMatrix:
    """A file path or an inline matrix (JSON, or rows separated by ``;``)."""
    if os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
    else:
        text = arg.replace(";", "\n")
    return sft.parse_matrix(text)


def shift_presentation(m: sft.SftMatrix) -> tuple[sft.SftMatrix, bool]:
    """The 0-1 matrix itself, or the edge shift of an integer matrix."""
    if m.zero_one:
        return sft.validate(m), False
    return sft.edge_shift(m)[0], True


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False, default=str)
    sys.stdout.write("\n")


def cmd_zeta(args) -> int:
    m = load_matrix(args.matrix)
    series = zeta.zeta_series(m, args.order)
    _dump({"rational": zeta.zeta_rational(m).to_json(), "series": series.as_strings(),
           "order": args.order})
    return 0


def cmd_periodic(args) -> int:
    m = load_matrix(args.matrix)
    _dump({"counts": [sft.periodic_count(m, n) for n in range(1, args.order + 1)]})
    return 0


def cmd_orbits(args) -> int:
    m, edge = shift_presentation(load_matrix(args.matrix))
    orbits = sft.periodic_orbits(m, args.order)
    _dump({"edge_shift": edge, "orbits": [list(o.word) for o in orbits],
           "count_by_length": {str(L): sum(1 for o in orbits if o.length == L)
                               for L in range(1, args.order + 1)}})
    return 0


def cmd_kgroups(args) -> int:
    m = load_matrix(args.matrix)
    out = {"bowen_franks": ktheory.bowen_franks(m).to_json()}
    n = battery.full_shift_size(m)
    if n:
        k0, k1 = ktheory.ruelle_k_groups_full_shift(n)
        out["ruelle_full_shift"] = {"K0": k0.to_json(), "K1": k1.to_json()}
    out["stagewise"] = ktheory.ruelle_k0_stagewise(m, args.max_stage).to_json()
    out["perron"] = ktheory.perron_data(m).to_json()
    _dump(out)
    return 0


def cmd_ck_verify(args) -> int:
    m = sft.validate(load_matrix(args.matrix))
    report = ck.verify_lemmas(m, max_len=args.depth, sample=args.sample)
    _dump(report.to_json())
    return 0 if report.passed else 1


def cmd_acoe_check(args) -> int:
    a, _ = shift_presentation(load_matrix(args.a))
    b, _ = shift_presentation(load_matrix(args.b))
    witness = acoe.load_witness(args.witness)
    if args.depth is not None:
        witness = acoe.CocycleWitness(**{**witness.__dict__, "depth": args.depth})
    report = acoe.check_acoe(witness, a, b)
    _dump(report.to_json())
    return 0 if report.passed else 1


def cmd_freeness(args) -> int:
    m, _ = shift_presentation(load_matrix(args.matrix))
    word = tuple(int(s) for s in args.word.replace(",", " ").split())
    cert = groupoid.freeness_certificate(m, args.n, word, args.depth)
    out = {"n": args.n, "word": list(word), "certificate": str(cert) if cert else None}
    if cert is not None:
        space = sft.SftSpace(m, Fraction(args.lambda0))
        out["distance_to_shift"] = str(sft.metric(sft.shift(cert, args.n), cert, space))
    _dump(out)
    return 0 if cert is not None else 1


def cmd_distinguish(args) -> int:
    verdict = battery.distinguish(load_matrix(args.a), load_matrix(args.b))
    _dump(verdict.to_json())
    return 1 if verdict.distinguished else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sftacoe", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def matrix_cmd(name, func, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("matrix", help="matrix file, JSON, or rows separated by ';'")
        s.set_defaults(func=func)
        return s

    matrix_cmd("zeta", cmd_zeta, "zeta function").add_argument("--order", type=int, default=12)
    matrix_cmd("periodic", cmd_periodic, "periodic point counts").add_argument(
        "--order", type=int, default=10)
    matrix_cmd("orbits", cmd_orbits, "periodic orbits").add_argument("--order", type=int, default=6)
    matrix_cmd("kgroups", cmd_kgroups, "K-theory invariants").add_argument(
        "--max-stage", type=int, default=4)
    s = matrix_cmd("ck-verify", cmd_ck_verify, "Cuntz-Krieger lemma suite")
    s.add_argument("--depth", type=int, default=3, help="maximal word length")
    s.add_argument("--sample", type=int, default=None, help="random monomials instead of all")
    s = matrix_cmd("freeness", cmd_freeness, "essential freeness certificate")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--depth", type=int, default=6)
    s.add_argument("--lambda0", type=str, default="1/2")

    s = sub.add_parser("acoe-check", help="verify an orbit-equivalence witness")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("witness")
    s.add_argument("--depth", type=int, default=None)
    s.set_defaults(func=cmd_acoe_check)

    s = sub.add_parser("distinguish", help="invariant battery for two matrices")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_distinguish)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (sft.SftError, ValueError, KeyError, OSError) as err:
        _dump({"error": type(err).__name__, "message": str(err)})
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
