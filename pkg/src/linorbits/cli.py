"""Command-line front end: group/permutation file formats, catalog
verification runs, machine-readable reports.

Exit codes: 0 success, 1 mathematical mismatch, 2 usage or data error.
JSON output is deterministic for fixed seed and flags: keys are emitted in
a fixed order and timing is reported only in table format.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .catalog import catalog as catalog_entry
from .catalog import catalog_verify, entry_names
from .errors import (
    GroupTooLarge,
    LinorbitsError,
    ParseError,
    SpaceTooLarge,
    TooManySubsets,
    UnknownEntry,
)
from .field import Field, GF
from .jordan import jordan_tensor
from .matgroup import (
    DEFAULT_MAX_ELEMENTS,
    DEFAULT_MAX_VECTORS,
    MatGroup,
    is_half_transitive,
    is_p_exceptional,
    is_semiregular_nonzero,
    is_transitive_nonzero,
)
from .matrix import Matrix, blowup, blowup_semilinear
from .permgroup import PermGroup, binom_p_valuation, subset_orbits

JSON_INT_LIMIT = 2**53


def _jsonable_int(n):
    """Integers that may exceed 2^53 go out as decimal strings."""
    if n is None:
        return None
    n = int(n)
    return str(n) if abs(n) > JSON_INT_LIMIT else n


def _dump(obj, out):
    text = json.dumps(obj, indent=1)
    out.write(text + "\n")


# -- group file format ---------------------------------------------------------


def parse_group_file(doc: dict) -> MatGroup:
    """Parse the JSON group format into a MatGroup.

    Semilinear generators (nonzero frobenius power) force the whole group
    into its GF(p) blow-up, where every generator is honestly linear.
    """
    try:
        fdoc = doc["field"]
        p = int(fdoc["p"])
        degree = int(fdoc.get("degree", 1))
        poly = fdoc.get("poly")
        dim = int(doc["dim"])
        gens_raw = doc["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed group file: {exc}") from exc
    field = Field(p, degree, tuple(poly) if poly else None) if poly else GF(p, degree)
    semilinear = doc.get("semilinear") or [0] * len(gens_raw)
    if len(semilinear) != len(gens_raw):
        raise ParseError("semilinear flag list length must match generators")
    mats = []
    for idx, flat in enumerate(gens_raw):
        if len(flat) != dim * dim:
            raise ParseError(f"generator {idx}: expected {dim * dim} entries")
        try:
            M = Matrix(field, np.array(flat, dtype=np.int64).reshape(dim, dim))
        except ValueError as exc:
            raise ParseError(f"generator {idx}: {exc}") from exc
        if not M.is_invertible():
            raise ParseError(f"generator {idx} is not invertible")
        mats.append(M)
    label = doc.get("label")
    if any(semilinear):
        blown = [
            blowup_semilinear(M, f) if f else blowup(M)
            for M, f in zip(mats, semilinear)
        ]
        return MatGroup(GF(p), dim * degree, blown, label=label)
    return MatGroup(field, dim, mats, label=label)


def write_group_file(G: MatGroup, label=None) -> dict:
    return {
        "label": label or G.label,
        "field": {"p": G.field.p, "degree": G.field.a, "poly": list(G.field.poly)},
        "dim": G.dim,
        "generators": [g.to_list() for g in G.generators],
        "semilinear": [0] * len(G.generators),
    }


def parse_perm_file(doc: dict) -> PermGroup:
    try:
        return PermGroup(int(doc["degree"]),
                         tuple(tuple(int(x) for x in g) for g in doc["generators"]),
                         label=doc.get("label"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed permutation file: {exc}") from exc


# -- reports ---------------------------------------------------------------------


def orbit_report(G: MatGroup, p: int | None, max_vectors: int,
                 skip_order: bool = False, elapsed_ms=None) -> dict:
    part = G.orbit_partition(max_vectors)
    order = None if skip_order else G.group_order(max_vectors)
    verdict = None
    if p is not None:
        v = is_p_exceptional(G, p, max_vectors)
        verdict = {
            "status": v.status,
            "witness": (
                None if v.witness is None
                else {"representative": _jsonable_int(v.witness[0]),
                      "size": _jsonable_int(v.witness[1])}
            ),
        }
    report = {
        "label": G.label,
        "field": {"p": G.field.p, "degree": G.field.a, "poly": list(G.field.poly)},
        "dim": G.dim,
        "order": _jsonable_int(order),
        "orbit_sizes": {str(k): v for k, v in sorted(part.sizes.items())},
        "p": p,
        "verdict": verdict,
        "half_transitive": is_half_transitive(G, max_vectors),
        "transitive": is_transitive_nonzero(G, max_vectors),
        "semiregular": (
            None if skip_order else is_semiregular_nonzero(G, max_vectors)
        ),
        "elapsed_ms": None,  # kept out of JSON so reports are byte-identical
    }
    return report


def _print_table(rows, out):
    if not rows:
        return
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        out.write("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# -- subcommands -------------------------------------------------------------------


def cmd_catalog(args, out) -> int:
    if args.action == "list":
        if args.format == "json":
            listing = [
                {"name": n, "citation": catalog_entry(n).citation}
                for n in entry_names()
            ]
            _dump(listing, out)
        else:
            _print_table([(n, catalog_entry(n).citation) for n in entry_names()], out)
        return 0
    # verify
    names = entry_names() if args.all else [args.name]
    if not args.all and args.name is None:
        print("catalog verify needs --name or --all", file=sys.stderr)
        return 2
    reports = []
    for name in names:
        try:
            rep = catalog_verify(name, seed=args.seed, max_vectors=args.max_vectors)
        except UnknownEntry:
            print(f"UnknownEntry: {name}", file=sys.stderr)
            return 2
        reports.append(rep)
    ok = all(r.passed for r in reports)
    if args.format == "json":
        _dump([
            {
                "name": r.name,
                "passed": r.passed,
                "expected_orbit_sizes": {str(k): v for k, v in sorted(r.expected_sizes.items())},
                "computed_orbit_sizes": {str(k): v for k, v in sorted(r.computed_sizes.items())},
                "order": _jsonable_int(r.order),
                "verdict": r.verdict_status,
                "irreducible": r.irreducible,
                "half_transitive": r.half_transitive,
                "transitive": r.transitive,
                "messages": r.messages,
            }
            for r in reports
        ], out)
    else:
        rows = [(r.name, "PASS" if r.passed else "FAIL",
                 f"order={r.order}", r.verdict_status,
                 f"{r.elapsed_ms:.0f}ms",
                 "; ".join(r.messages)) for r in reports]
        _print_table(rows, out)
    return 0 if ok else 1


def _load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def cmd_orbits(args, out, need_p=False, predicates_only=False) -> int:
    doc = _load_json(args.group)
    G = parse_group_file(doc)
    if need_p and args.p is None:
        print("this command requires --p", file=sys.stderr)
        return 2
    report = orbit_report(G, args.p, args.max_vectors, skip_order=args.skip_order)
    if args.format == "json":
        _dump(report, out)
    else:
        rows = [(k, json.dumps(v)) for k, v in report.items() if k != "elapsed_ms"]
        _print_table(rows, out)
    return 0


def cmd_concealed(args, out) -> int:
    doc = _load_json(args.perm)
    H = parse_perm_file(doc)
    rep = subset_orbits(H, args.p, max_subsets=args.max_subsets)
    payload = {
        "label": H.label,
        "n": rep.n,
        "p": rep.p,
        "order": _jsonable_int(rep.order),
        "levels": {
            str(k): {str(s): m for s, m in sorted(sizes.items())}
            for k, sizes in rep.levels.items()
        },
        "concealed": rep.concealed,
        "witness": (
            None if rep.witness is None
            else {"subset": list(rep.witness[0]), "orbit_size": _jsonable_int(rep.witness[1])}
        ),
    }
    if args.format == "json":
        _dump(payload, out)
    else:
        _print_table([(k, json.dumps(v)) for k, v in payload.items()], out)
    return 0


def cmd_jordan(args, out) -> int:
    jt = jordan_tensor(args.a, args.b, args.p)
    _dump({"a": args.a, "b": args.b, "p": args.p, "blocks": list(jt.blocks)}, out)
    return 0


def cmd_binom(args, out) -> int:
    v = binom_p_valuation(args.n, args.k, args.p)
    _dump({"n": args.n, "k": args.k, "p": args.p, "valuation": v}, out)
    return 0


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="linorbits",
        description="Exact orbit computations for finite linear groups",
    )
    ap.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    ap.add_argument("--max-vectors", type=int, default=DEFAULT_MAX_VECTORS)
    ap.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
    ap.add_argument("--max-subsets", type=int, default=2**24)
    ap.add_argument("--format", choices=["json", "table"], default="json")
    ap.add_argument("--out", default=None, help="write output to a file")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("catalog", help="list or verify catalog entries")
    pc.add_argument("action", choices=["list", "verify"])
    pc.add_argument("--name", default=None)
    pc.add_argument("--all", action="store_true")

    for name, help_text in [
        ("orbits", "orbit partition of a group file"),
        ("pexc", "p-exceptionality verdict of a group file"),
        ("half", "transitivity predicates of a group file"),
    ]:
        po = sub.add_parser(name, help=help_text)
        po.add_argument("--group", required=True)
        po.add_argument("--p", type=int, default=None)
        po.add_argument("--skip-order", action="store_true")

    pk = sub.add_parser("concealed", help="subset orbits and p-concealment")
    pk.add_argument("--perm", required=True)
    pk.add_argument("--p", type=int, required=True)

    pj = sub.add_parser("jordan", help="Jordan type of J_a tensor J_b mod p")
    pj.add_argument("--a", type=int, required=True)
    pj.add_argument("--b", type=int, required=True)
    pj.add_argument("--p", type=int, required=True)

    pb = sub.add_parser("binom", help="p-adic valuation of C(n, k)")
    pb.add_argument("--n", type=int, required=True)
    pb.add_argument("--k", type=int, required=True)
    pb.add_argument("--p", type=int, required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    out = sys.stdout
    close = False
    if args.out:
        out = open(args.out, "w")
        close = True
    try:
        if args.command == "catalog":
            return cmd_catalog(args, out)
        if args.command == "orbits":
            return cmd_orbits(args, out)
        if args.command == "pexc":
            return cmd_orbits(args, out, need_p=True)
        if args.command == "half":
            return cmd_orbits(args, out)
        if args.command == "concealed":
            return cmd_concealed(args, out)
        if args.command == "jordan":
            return cmd_jordan(args, out)
        if args.command == "binom":
            return cmd_binom(args, out)
        print(f"unknown command {args.command}", file=sys.stderr)
        return 2
    except (ParseError, UnknownEntry, SpaceTooLarge, TooManySubsets, GroupTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LinorbitsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
