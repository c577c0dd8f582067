"""Command-line front end.

    facetlab analyze FILE [--assume-simple | --dim3] [--with-top]
    facetlab mobius FILE [--table]
    facetlab oracle euler FILE
    facetlab graph FILE [--dot]
    facetlab circulant recognize FILE
    facetlab reconstruct FILE (--assume-simple | --dim3) [--with-top]
    facetlab generate EXPR [--ground-truth] [-o OUT]
    facetlab generate circulant N D

Global flags (accepted before or after the command): --json, --one-indexed,
--strict, --force, --limit MEMBERS, --chain-limit COUNT.  FILE may be ``-`` for stdin.

Exit codes: 0 success, 1 input error, 2 validation failure under --strict,
3 failed precondition of a requested reconstruction, 4 resource limit hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from facetlab.boundedness import analyze_boundedness
from facetlab.circulant import circulant, recognize_circulant
from facetlab.errors import (
    Ambiguous,
    BadFarFace,
    BadParameters,
    Degenerate,
    EmptyFacet,
    FacetlabError,
    GrammarError,
    NoArrangement,
    NotSimple,
    OutOfRange,
    ParseError,
    PreconditionFailed,
    ResourceLimit,
    UnboundedInput,
)
from facetlab.generators import parse_expression
from facetlab.graph import classify_graph, vertex_graph
from facetlab.incidence import IncidenceMatrix, parse_incidence, serialize_incidence, validate
from facetlab.moebius import DEFAULT_CHAIN_LIMIT, euler_oracle, moebius_table
from facetlab.poset import DEFAULT_MEMBER_LIMIT, vertex_set_closure
from facetlab.reconstruct import ReconstructedFacePoset, face_poset_dim3, face_poset_simple

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INPUT, EXIT_INVALID, EXIT_PRECONDITION, EXIT_LIMIT = 0, 1, 2, 3, 4

_INPUT_ERRORS = (ParseError, EmptyFacet, OutOfRange, GrammarError, BadParameters, BadFarFace,
                 UnboundedInput, OSError)
_PRECONDITION_ERRORS = (NotSimple, Degenerate, PreconditionFailed, Ambiguous, NoArrangement)


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class AnalysisReport:
    validation: dict
    closure_size: int
    mobius: int
    bounded: bool
    facet_bounded: list
    graph_class: str
    circulant: list | None
    simple_simplicial: int | None
    dim3: str
    dim_from_bounded_facet: int | None
    low_dim_hint: int | None = None
    reconstruction: dict | None = None
    schema_version: int = SCHEMA_VERSION

    @property
    def geometric_guarantee(self) -> bool:
        """The decisions only mean something for genuine incidence matrices."""
        return bool(self.validation["overall"])

    def to_dict(self) -> dict:
        d = asdict(self)
        d["geometric_guarantee"] = self.geometric_guarantee
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> AnalysisReport:
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {d.get('schema_version')!r}")
        fields = {k: v for k, v in d.items() if k != "geometric_guarantee"}
        return cls(**fields)

    def to_text(self) -> str:
        lines = []
        if not self.geometric_guarantee:
            lines.append("WARNING: validation failed; no geometric guarantee for the values below")
        for c in self.validation["checks"]:
            lines.append(f"{c['id']}: {'pass' if c['passed'] else 'FAIL'} ({c['message']})")
        lines += [
            f"closure members: {self.closure_size}",
            f"mobius: {self.mobius}",
            f"bounded: {str(self.bounded).lower()}",
            f"facet bounded: {' '.join('1' if b else '0' for b in self.facet_bounded)}",
            f"graph class: {self.graph_class}",
            f"circulant: {'M(%d,%d)' % tuple(self.circulant) if self.circulant else 'no'}",
            f"simple and simplicial: {self.simple_simplicial if self.simple_simplicial is not None else 'no'}",
            f"dim3: {self.dim3}",
            f"dimension from bounded facet: {_opt(self.dim_from_bounded_facet)}",
        ]
        if self.low_dim_hint is not None:
            lines.append(f"low dimension hint: {self.low_dim_hint}")
        if self.reconstruction is not None:
            r = self.reconstruction
            lines.append(f"reconstruction ({r['method']}): {r['faces']} faces, {r['rays']} rays")
        return "\n".join(lines)


def _opt(x) -> str:
    return "absent" if x is None else str(x)


def analyze(A: IncidenceMatrix, limit: int = DEFAULT_MEMBER_LIMIT, reconstruct: str | None = None,
            with_top: bool = False) -> AnalysisReport:
    F = vertex_set_closure(A, limit)
    report = validate(A, F)
    b = analyze_boundedness(A, F)
    w = recognize_circulant(A)
    summary = None
    if reconstruct is not None:
        P = _reconstruct(A, reconstruct, with_top)
        summary = {"method": reconstruct, "faces": len(P), "rays": len(P.rays)}
    return AnalysisReport(
        validation=report.to_dict(),
        closure_size=len(F),
        mobius=b.mobius,
        bounded=b.bounded,
        facet_bounded=list(b.facet_bounded),
        graph_class=classify_graph(vertex_graph(F)).value,
        circulant=[w.n, w.d] if w is not None else None,
        simple_simplicial=w.d if w is not None else None,
        dim3=b.dim3.value,
        dim_from_bounded_facet=b.dim_from_bounded_facet,
        low_dim_hint=b.low_dim_hint,
        reconstruction=summary,
    )


def _reconstruct(A: IncidenceMatrix, method: str, with_top: bool) -> ReconstructedFacePoset:
    if method == "simple":
        return face_poset_simple(A, with_top)
    return face_poset_dim3(A, with_top)


def _read_matrix(path: str) -> IncidenceMatrix:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_incidence(text)


def _strict_failures(args, checks: list[dict]) -> list[str]:
    failed = [c["id"] for c in checks if not c["passed"]]
    if args.force:
        failed = [c for c in failed if c != "C2"]
    return failed


def _check_strict(args, A: IncidenceMatrix):
    if not args.strict:
        return
    report = validate(A, vertex_set_closure(A, args.limit)).to_dict()
    failed = _strict_failures(args, report["checks"])
    if failed:
        raise _Exit(EXIT_INVALID, f"validation failed: {', '.join(failed)}")


def _shift_sets(obj, off: int):
    """Add ``off`` to vertex lists inside a MoebiusTable dict."""
    for e in obj["values"]:
        if isinstance(e["element"], list):
            e["element"] = [v + off for v in e["element"]]
    if obj["top_member"] is not None:
        obj["top_member"] = [v + off for v in obj["top_member"]]
    return obj


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# --- commands -----------------------------------------------------------------

def cmd_analyze(args) -> str:
    A = _read_matrix(args.file)
    method = "simple" if args.assume_simple else "dim3" if args.dim3 else None
    rep = analyze(A, args.limit, method, args.with_top)
    failed = _strict_failures(args, rep.validation["checks"]) if args.strict else []
    if failed:
        raise _Exit(EXIT_INVALID, f"validation failed: {', '.join(failed)}")
    return rep.to_json() if args.json else rep.to_text()


def cmd_mobius(args) -> str:
    A = _read_matrix(args.file)
    _check_strict(args, A)
    T = moebius_table(vertex_set_closure(A, args.limit))
    if args.table:
        return _dump(_shift_sets(T.to_dict(), 1 if args.one_indexed else 0))
    if args.json:
        return _dump({"mobius": T.top_value, "schema_version": SCHEMA_VERSION})
    return str(T.top_value)


def cmd_oracle(args) -> str:
    A = _read_matrix(args.file)
    _check_strict(args, A)
    chi = euler_oracle(vertex_set_closure(A, args.limit), args.chain_limit)
    if args.json:
        return _dump({"reduced_euler_characteristic": chi, "schema_version": SCHEMA_VERSION})
    return str(chi)


def cmd_graph(args) -> str:
    A = _read_matrix(args.file)
    _check_strict(args, A)
    G = vertex_graph(vertex_set_closure(A, args.limit))
    if args.dot:
        return G.to_dot(args.one_indexed)
    adj = G.adjacency_lists(args.one_indexed)
    if args.json:
        return _dump({"graph_class": classify_graph(G).value,
                      "adjacency": {str(v): ws for v, ws in adj.items()},
                      "schema_version": SCHEMA_VERSION})
    lines = [f"{v}: {' '.join(map(str, ws))}".rstrip() for v, ws in adj.items()]
    lines.append(f"class: {classify_graph(G).value}")
    return "\n".join(lines)


def cmd_circulant(args) -> str:
    A = _read_matrix(args.file)
    w = recognize_circulant(A)
    off = 1 if args.one_indexed else 0
    if args.json:
        body = None if w is None else {
            "n": w.n, "d": w.d,
            "row_perm": [i + off for i in w.row_perm],
            "col_perm": [j + off for j in w.col_perm],
        }
        return _dump({"witness": body, "schema_version": SCHEMA_VERSION})
    if w is None:
        return "not a circulant"
    return "\n".join([
        f"M({w.n},{w.d})",
        "rows: " + " ".join(str(i + off) for i in w.row_perm),
        "columns: " + " ".join(str(j + off) for j in w.col_perm),
    ])


def cmd_reconstruct(args) -> str:
    A = _read_matrix(args.file)
    _check_strict(args, A)
    P = _reconstruct(A, "simple" if args.assume_simple else "dim3", args.with_top)
    d = P.to_dict(args.one_indexed)
    if args.json:
        d["schema_version"] = SCHEMA_VERSION
        return _dump(d)
    off = 1 if args.one_indexed else 0
    lines = []
    for i, face in enumerate(d["faces"]):
        rays = " ".join(f"r({r['vertex']};{','.join(map(str, r['facets']))})" for r in face["rays"])
        lines.append(f"{i + off}: {{{','.join(map(str, face['verts']))}}} {rays}".rstrip())
    kinds = P.counts_by_kind()
    lines.append(f"{len(P)} faces ({kinds['vertices']} vertices, {kinds['rays']} rays, "
                 f"{kinds['other']} others), {len(P.rays)} extremal rays")
    return "\n".join(lines)


def cmd_generate(args) -> str:
    words = args.expr
    if words[0] == "circulant" and len(words) == 3:
        try:
            n, d = int(words[1]), int(words[2])
        except ValueError:
            raise GrammarError(0, "circulant needs two integers") from None
        A = circulant(n, d)
        meta = {"provenance": f"circulant({n}, {d})", "n": n, "d": d}
    else:
        G = parse_expression(" ".join(words))
        A = G.matrix
        meta = G.to_dict()
    text = serialize_incidence(A, "json" if args.json else "vfi") + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        if args.ground_truth:
            with open(args.output + ".json", "w", encoding="utf-8") as fh:
                fh.write(_dump(meta) + "\n")
        return ""
    if args.ground_truth:
        return _dump(meta)
    return text.rstrip("\n")


# --- argument parsing ----------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=default(False), help="machine-readable output")
    parser.add_argument("--one-indexed", action="store_true", default=default(False),
                        help="number vertices and facets from 1")
    parser.add_argument("--strict", action="store_true", default=default(False),
                        help="exit 2 if the input fails validation")
    parser.add_argument("--force", action="store_true", default=default(False),
                        help="with --strict, tolerate duplicate columns (C2)")
    parser.add_argument("--limit", type=int, default=default(DEFAULT_MEMBER_LIMIT), metavar="MEMBERS",
                        help="maximum closure size")
    parser.add_argument("--chain-limit", type=int, default=default(DEFAULT_CHAIN_LIMIT), metavar="COUNT",
                        help="maximum number of chains the Euler oracle enumerates")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="facetlab",
                                     description="Combinatorics of pointed polyhedra from vertex-facet incidences.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def recon_flags(p, required):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--assume-simple", action="store_true", help="reconstruct assuming a simple polyhedron")
        g.add_argument("--dim3", action="store_true", help="reconstruct assuming a 3-polyhedron")
        p.add_argument("--with-top", action="store_true", help="include the improper face")

    p = sub.add_parser("analyze", parents=[common], help="full report")
    p.add_argument("file")
    recon_flags(p, required=False)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mobius", parents=[common], help="Möbius number of the closure family")
    p.add_argument("file")
    p.add_argument("--table", action="store_true", help="dump every μ value as JSON")
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("oracle", parents=[common], help="independent oracles")
    osub = p.add_subparsers(dest="oracle", required=True)
    q = osub.add_parser("euler", parents=[common], help="reduced Euler characteristic by chain enumeration")
    q.add_argument("file")
    q.set_defaults(func=cmd_oracle)

    p = sub.add_parser("graph", parents=[common], help="vertex graph")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true", help="emit DOT text")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("circulant", parents=[common], help="circulant matrices")
    csub = p.add_subparsers(dest="circ", required=True)
    q = csub.add_parser("recognize", parents=[common], help="find permutations onto some M(n, d)")
    q.add_argument("file")
    q.set_defaults(func=cmd_circulant)

    p = sub.add_parser("reconstruct", parents=[common], help="face poset with extremal rays")
    p.add_argument("file")
    recon_flags(p, required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("generate", parents=[common], help="write an instance from an expression")
    p.add_argument("expr", nargs="+", help="expression, or: circulant N D")
    p.add_argument("--ground-truth", action="store_true", help="emit the ground-truth metadata JSON")
    p.add_argument("-o", "--output", help="write the matrix here (metadata to OUTPUT.json)")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except _Exit as e:
        print(f"facetlab: {e}", file=sys.stderr)
        return e.code
    except _PRECONDITION_ERRORS as e:
        print(f"facetlab: reconstruction precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ResourceLimit as e:
        print(f"facetlab: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except _INPUT_ERRORS as e:
        print(f"facetlab: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FacetlabError as e:
        print(f"facetlab: {e}", file=sys.stderr)
        return EXIT_INPUT
    if out:
        print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
