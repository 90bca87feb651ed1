"""Command-line front end.  Every command prints one JSON document.

Exit status: 0 on success, 1 on a domain error (JSON with the error name),
2 on a usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import boundary, caps, chaingroup, containment, deltamatroid, fmatrix, linking, tuttebridge, widths
from .errors import ParseError, PivotLabError


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def parse_matrix_file(path: str) -> fmatrix.LabeledMatrix:
    return fmatrix.parse_matrix(_read(path))


def _sha(path: str) -> str:
    return hashlib.sha256(_read(path).encode("utf-8")).hexdigest()


def _labels(text: str | None) -> list[str]:
    if not text:
        return []
    return [t for t in text.replace(",", " ").split() if t]


def _matrix_dict(M: fmatrix.LabeledMatrix) -> dict:
    return {"field": M.field.q, "kind": M.kind.value if M.kind else None,
            "elements": list(M.ground), "rows": M.entries.tolist()}


def _load_chaingroup(path: str) -> chaingroup.ChainGroup:
    text = _read(path)
    heads = {line.split()[0] for line in text.splitlines() if line.strip() and not line.startswith("#")}
    if "form" in heads:
        return chaingroup.parse_chaingroup(text)
    return chaingroup.from_matrix(fmatrix.parse_matrix(text))


def _jsonable(x):
    from fractions import Fraction
    return str(x) if isinstance(x, Fraction) else int(x)


# --- commands -----------------------------------------------------------------------

def cmd_rankwidth(args):
    M = parse_matrix_file(args.file)
    rep = widths.rank_width(M, args.max_n)
    d = rep.to_dict()
    return {"rank_width": d["width"], "tree": d["tree"], "edges": d["edges"]}


def cmd_pivot(args):
    M = parse_matrix_file(args.file)
    Y = _labels(args.block)
    P = fmatrix.signed_pivot(M, Y) if args.signed else fmatrix.pivot(M, Y)
    return {"block": Y, "matrix": _matrix_dict(P)}


def cmd_schur(args):
    M = parse_matrix_file(args.file)
    Y = _labels(args.block)
    return {"block": Y, "matrix": _matrix_dict(fmatrix.schur(M, Y))}


def cmd_chaingroup_info(args):
    N = _load_chaingroup(args.file)
    out = {"form": N.form.value, "field": N.field.q, "elements": list(N.ground), "dim": N.dim,
           "isotropic": chaingroup.is_isotropic(N), "lagrangian": chaingroup.is_lagrangian(N),
           "basis": N.basis.reshape(N.dim, N.n, 2).tolist()}
    if out["isotropic"]:
        a = chaingroup.special_eulerian(N)
        out["special_eulerian"] = a.pairs.tolist()
        rep = widths.branch_width(N, args.max_n)
        out["branch_width"] = _jsonable(rep.width)
        out["tree"] = rep.tree_string()
        if out["lagrangian"]:
            r = chaingroup.to_matrix(N, a, _default_b(N, a))
            out["fundamental_matrix"] = _matrix_dict(r.matrix)
    return out


def _default_b(N, a):
    """The supplementary partner swapping (1,0) and (0,1), signed for the skew form."""
    import numpy as np
    swapped = a.pairs[:, ::-1].copy()
    if N.form is chaingroup.FormKind.MINUS:
        # <(1,0),(0,1)> = 1 and <(0,1),(-1,0)> = 1
        is_bottom = a.pairs[:, 1] != 0
        swapped[is_bottom] = N.field.neg_table[swapped[is_bottom]]
    return chaingroup.Chain(N.ground, N.field, np.ascontiguousarray(swapped).reshape(-1))


def cmd_linking(args):
    N = _load_chaingroup(args.file)
    res = linking.linking_equal(N, _labels(args.x), _labels(args.y), mode=args.mode,
                                max_gap=args.max_gap)
    return res.to_dict()


def cmd_deltamatroid(args):
    if args.family:
        D = deltamatroid.parse_family(_read(args.file))
        source = "family"
    else:
        M = parse_matrix_file(args.file)
        D = deltamatroid.from_matrix(M, args.max_n)
        source = "matrix"
    return {"source": source, "elements": list(D.ground),
            "feasible": [list(S) for S in D.feasible],
            "even": deltamatroid.is_even(D), "symmetric_exchange": deltamatroid.check_sea(D)}


def cmd_matroid(args):
    N = tuttebridge.parse_tutte(_read(args.file))
    M = tuttebridge.matroid_from(N, args.max_n)
    rep = tuttebridge.matroid_branch_width(M, args.max_n)
    lifted = widths.branch_width(tuttebridge.lift(N), args.max_n)
    return {"elements": list(M.ground), "rank": M.full_rank,
            "circuits": [list(c) for c in M.circuits()],
            "branch_width": int(rep.width), "tree": rep.tree_string(),
            "lift_branch_width": _jsonable(lifted.width)}


def cmd_contain(args):
    M1, M2 = parse_matrix_file(args.small), parse_matrix_file(args.large)
    w = containment.pivot_minor_contained(M1, M2, args.max_n)
    return {"contained": w is not None, "witness": None if w is None else w.to_dict()}


def cmd_wqo_scan(args):
    if args.universe:
        parts = args.universe.split(",")
        if len(parts) != 3:
            raise ParseError("--universe expects q,kind,n")
        mats = containment.universe_upto(int(parts[0]), parts[1], int(parts[2]))
    else:
        mats = [parse_matrix_file(p) for p in args.files]
    return containment.quasi_order_report(mats, max_n=args.max_n)


def cmd_sum_roundtrip(args):
    N = _load_chaingroup(args.file)
    P = boundary.make_boundaried(N)
    V1 = _labels(args.part)
    P1, P2, ct = boundary.sum_decompose(P, V1)
    Q = boundary.sum_reconstruct(P1, P2, ct, P.ground)
    return {"part": V1, "boundary_size": P.size,
            "part_sizes": [P1.size, P2.size], "part_dims": [P1.N.dim, P2.N.dim],
            "connection_type": ct.to_dict(), "roundtrip": Q == P}


COMMANDS = {
    "rankwidth": cmd_rankwidth,
    "pivot": cmd_pivot,
    "schur": cmd_schur,
    "chaingroup-info": cmd_chaingroup_info,
    "linking": cmd_linking,
    "deltamatroid": cmd_deltamatroid,
    "matroid": cmd_matroid,
    "contain": cmd_contain,
    "wqo-scan": cmd_wqo_scan,
    "sum-roundtrip": cmd_sum_roundtrip,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pivotlab", description=__doc__.splitlines()[0])
    p.add_argument("--pretty", action="store_true", help="indent the JSON output")
    p.add_argument("--timing", action="store_true",
                   help="add wall-clock seconds (output is then no longer byte-stable)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, max_default=None):
        sp = sub.add_parser(name, help=help_)
        if max_default is not None:
            sp.add_argument("--max-n", type=int, default=None,
                            help=f"ground-set cap (default {max_default}, or ${caps.ENV_VAR})")
        return sp

    sp = add("rankwidth", "exact rank-width of a matrix file", caps.WIDTH)
    sp.add_argument("file")
    for name in ("pivot", "schur"):
        sp = add(name, f"{name} on a principal block")
        sp.add_argument("file")
        sp.add_argument("--block", required=True, help="comma-separated labels")
        if name == "pivot":
            sp.add_argument("--signed", action="store_true",
                            help="negate the block rows (symmetric output for symmetric input)")
    sp = add("chaingroup-info", "dimensions, eulerian chain and branch-width", caps.WIDTH)
    sp.add_argument("file", help="chain-group file or matrix file")
    sp = add("linking", "both sides of the linking identity")
    sp.add_argument("file")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--mode", choices=["brute", "inductive"], default="brute")
    sp.add_argument("--max-gap", type=int, default=None,
                    help=f"cap on the gap size (default {caps.GAP}, or ${caps.ENV_VAR})")
    sp = add("deltamatroid", "feasible sets of a matrix or family file", caps.ENUMERATION)
    sp.add_argument("file")
    sp.add_argument("--family", action="store_true", help="read a family file instead of a matrix")
    sp = add("matroid", "matroid of a 'kind tutte' file", caps.MATROID)
    sp.add_argument("file")
    sp = add("contain", "pivot-minor containment witness", caps.MINOR_SEARCH)
    sp.add_argument("small")
    sp.add_argument("large")
    sp = add("wqo-scan", "pairwise containment table and antichains", caps.MINOR_SEARCH)
    sp.add_argument("files", nargs="*")
    sp.add_argument("--universe", help="q,kind,n: every class up to n elements")
    sp = add("sum-roundtrip", "decompose along a part and rebuild")
    sp.add_argument("file")
    sp.add_argument("--part", required=True)
    return p


def _input_files(args) -> list[str]:
    files = []
    for attr in ("file", "small", "large"):
        if getattr(args, attr, None):
            files.append(getattr(args, attr))
    files += list(getattr(args, "files", []) or [])
    return files


def run(args) -> dict:
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "pretty", "timing", "file", "files", "small", "large")}
    start = time.perf_counter()
    result = COMMANDS[args.command](args)
    out = {"command": args.command,
           "inputs": [{"path": p, "sha256": _sha(p)} for p in _input_files(args)],
           "parameters": params, "result": result}
    if args.timing:
        out["wall_time_s"] = round(time.perf_counter() - start, 6)
    return out


def _dump(obj, pretty: bool) -> str:
    if pretty:
        return json.dumps(obj, indent=2, sort_keys=True)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = run(args)
    except PivotLabError as exc:
        print(_dump({"error": exc.name, "message": str(exc)}, args.pretty))
        return 1
    print(_dump(out, args.pretty))
    return 0


if __name__ == "__main__":
    sys.exit(main())
