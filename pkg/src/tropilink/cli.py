"""Command-line front end.

Subcommands: link, verify, enumerate, movegraph, polygon, poset,
check-codim1.  All output is deterministic for fixed inputs; graphs and
certificates use the JSON schemas of graphs.py and certificates.py.
Errors surface as a JSON object on stdout and a nonzero exit status.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import atlas, moduli
from .canonical import canonical_hash
from .certificates import (certificate_from_json_dict, certificate_to_json_dict,
                           verify_certificate)
from .graphs import (GraphError, dumps_canonical, from_json_dict, to_dot,
                     to_json_dict, underlying_graph)
from .linkage import link, link_with_legs
from .normal_form import build_polygon


def _load_graph(path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from exc
    return underlying_graph(from_json_dict(data))


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_link(args) -> int:
    g1 = _load_graph(args.g1)
    g2 = _load_graph(args.g2)
    if g1.legs or g2.legs:
        cert = link_with_legs(g1, g2)
    else:
        cert = link(g1, g2, args.mode)
    report = verify_certificate(cert, endpoints=(g1, g2))
    if not report.valid:
        raise GraphError(f"produced certificate fails to verify: {report}")
    _emit(dumps_canonical(certificate_to_json_dict(cert)), args.output)
    return 0


def _cmd_verify(args) -> int:
    try:
        with open(args.cert) as fh:
            cert = certificate_from_json_dict(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphError(f"cannot read certificate {args.cert}: {exc}") from exc
    report = verify_certificate(cert, p=args.p, mode=args.mode)
    sys.stdout.write(dumps_canonical(report.to_json_dict()))
    return 0 if report.valid else 1


def _cmd_enumerate(args) -> int:
    classes = atlas.enumerate_p_regular(
        args.p, args.genus, "3ec" if args.three_ec else "all", legs=args.legs
    )
    payload = [to_json_dict(g) for g in classes]
    _emit(dumps_canonical(payload), args.output)
    return 0


def _cmd_movegraph(args) -> int:
    classes = atlas.enumerate_p_regular(
        args.p, args.genus, "3ec" if args.three_ec else "all", legs=args.legs
    )
    adj = atlas.move_graph(classes, three_ec_middles=args.three_ec)
    ids = [canonical_hash(g) for g in classes]
    if args.format == "json":
        payload = {
            "classes": [
                {"index": i, "id": ids[i], "graph": to_json_dict(g)}
                for i, g in enumerate(classes)
            ],
            "edges": sorted([i, j] for i in adj for j in adj[i] if i < j),
            "connected": atlas.is_connected_adjacency(adj),
        }
        _emit(dumps_canonical(payload), args.output)
    else:
        lines = ["graph moves {"]
        for i in range(len(classes)):
            lines.append(f'  n{ids[i]} [label="{ids[i]}"];')
        for i in sorted(adj):
            for j in sorted(adj[i]):
                if i < j:
                    lines.append(f"  n{ids[i]} -- n{ids[j]};")
        lines.append("}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_polygon(args) -> int:
    g = build_polygon(args.p, args.gamma)
    if args.format == "dot":
        _emit(to_dot(g), args.output)
    else:
        _emit(dumps_canonical(to_json_dict(g)), args.output)
    return 0


def _cmd_poset(args) -> int:
    poset = moduli.build_poset(args.genus, args.legs, args.locus)
    if args.format == "dot":
        _emit(moduli.poset_to_dot(poset), args.output)
    else:
        _emit(dumps_canonical(moduli.poset_to_json_dict(poset)), args.output)
    return 0


def _cmd_check_codim1(args) -> int:
    poset = moduli.build_poset(args.genus, args.legs, args.locus)
    connected, components = moduli.connected_through_codim_one(poset)
    payload = {
        "genus": args.genus,
        "legs": args.legs,
        "locus": args.locus,
        "connected": connected,
        "top_dimension": poset.max_dimension,
        "components": components,
        "pure_dimension_violations": poset.pure_dimension_violations(),
    }
    sys.stdout.write(dumps_canonical(payload))
    return 0 if connected else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tropilink",
        description="certified linkage of regular multigraphs and "
                    "tropical moduli stratifications",
    )
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker cap (the current implementation is sequential)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("link", help="link two p-regular graphs by a certificate")
    p.add_argument("g1")
    p.add_argument("g2")
    p.add_argument("--mode", choices=["plain", "3ec"], default="plain")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_link)

    p = sub.add_parser("verify", help="verify a linkage certificate")
    p.add_argument("cert")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--mode", choices=["plain", "3ec"], default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("enumerate", help="enumerate p-regular classes")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--3ec", dest="three_ec", action="store_true")
    p.add_argument("--legs", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("movegraph", help="strong-link move graph over classes")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--legs", type=int, default=0)
    p.add_argument("--3ec", dest="three_ec", action="store_true")
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_movegraph)

    p = sub.add_parser("polygon", help="build the p-polygon on gamma vertices")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_polygon)

    p = sub.add_parser("poset", help="stratification poset of a moduli locus")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--legs", type=int, default=0)
    p.add_argument("--locus", default="all",
                   help="all | pure | 3ec | preg:P")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_poset)

    p = sub.add_parser("check-codim1",
                       help="is the locus connected through codimension one?")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--legs", type=int, default=0)
    p.add_argument("--locus", default="all")
    p.set_defaults(func=_cmd_check_codim1)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        sys.stdout.write(dumps_canonical({"error": "--jobs must be >= 1"}))
        return 2
    try:
        return args.func(args)
    except GraphError as exc:
        sys.stdout.write(dumps_canonical({"error": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
