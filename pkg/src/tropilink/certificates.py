"""Strong-link steps, linkage certificates, and their verifier.

Two graphs are strongly linked when each has a non-loop edge whose
contraction yields the same graph, with the two contracted edges landing on
the same vertex.  A certificate is an alternating chain of such steps; the
verifier re-derives every contraction and re-checks every witness, so a
certificate can be audited without trusting the code that produced it.

Contraction keeps the ids of everything it does not consume (see graphs),
so a witness is a plain triple of id maps from the right contraction to the
left one; corrupting any entry breaks bijectivity or endpoint compatibility
and is caught by the verifier.
"""

from __future__ import annotations

from .canonical import _match_edges, _match_legs, are_isomorphic, canonical_labeling
from .connectivity import edge_connectivity_capped
from .graphs import (Graph, GraphError, contract, from_json_dict, to_json_dict,
                     underlying_graph)


class StrongLinkStep:
    """One strong link: left/left_edge and right/right_edge contract to the
    same graph, witnessed by an isomorphism onto the left contraction."""

    __slots__ = ("left", "left_edge", "right", "right_edge", "witness", "cert_cycles")

    def __init__(self, left, left_edge, right, right_edge, witness, cert_cycles=None):
        self.left = left
        self.left_edge = left_edge
        self.right = right
        self.right_edge = right_edge
        self.witness = witness  # (alpha_V, alpha_E, alpha_L): right/re -> left/le
        self.cert_cycles = cert_cycles  # optional pair of edge-key tuples in `right`

    def reversed(self) -> "StrongLinkStep":
        av, ae, al = self.witness
        inv = (
            {v: k for k, v in av.items()},
            {v: k for k, v in ae.items()},
            {v: k for k, v in al.items()},
        )
        return StrongLinkStep(self.right, self.right_edge, self.left,
                              self.left_edge, inv)

    def __repr__(self):
        return (f"StrongLinkStep(e_left={self.left_edge}, "
                f"e_right={self.right_edge})")


class StrongLinkFailure:
    """Structured failure: the two contractions are not isomorphic, or no
    isomorphism matches the contracted-vertex images."""

    __slots__ = ("kind", "message")

    def __init__(self, kind: str, message: str):
        self.kind = kind  # "not_isomorphic" | "no_marked_witness" | "bad_edge"
        self.message = message

    def __repr__(self):
        return f"StrongLinkFailure({self.kind}: {self.message})"


def strong_link_check(left: Graph, left_edge: int, right: Graph,
                      right_edge: int, leg_mode: str = "labeled"):
    """Check a strong link and produce a witnessed step, or a failure."""
    for g, e, side in ((left, left_edge, "left"), (right, right_edge, "right")):
        if e not in g.edges:
            raise GraphError(f"{side} edge {e} does not exist")
        if g.is_loop(e):
            raise GraphError(f"{side} edge {e} is a loop; not contractible here")

    mid_l, cm_l = contract(left, {left_edge})
    mid_r, cm_r = contract(right, {right_edge})
    ml = cm_l.image_vertex(left_edge)
    mr = cm_r.image_vertex(right_edge)

    enc_l, order_l = canonical_labeling(mid_l, leg_mode, marked={ml})
    enc_r, order_r = canonical_labeling(mid_r, leg_mode, marked={mr})
    if enc_l != enc_r:
        if are_isomorphic(mid_l, mid_r, leg_mode):
            return StrongLinkFailure(
                "no_marked_witness",
                "contractions isomorphic but never matching the contracted vertices",
            )
        return StrongLinkFailure("not_isomorphic", "contractions are not isomorphic")

    alpha_v = dict(zip(order_r, order_l))
    alpha_e = _match_edges(mid_r, mid_l, alpha_v)
    alpha_l = _match_legs(mid_r, mid_l, alpha_v, leg_mode)
    return StrongLinkStep(left, left_edge, right, right_edge,
                          (alpha_v, alpha_e, alpha_l))


class LinkageCertificate:
    """Chain of p-regular graphs with a strong-link step between neighbours."""

    __slots__ = ("graphs", "steps", "mode", "p", "leg_mode")

    def __init__(self, graphs, steps, mode: str, p: int, leg_mode: str = "labeled"):
        if mode not in ("plain", "3ec"):
            raise GraphError(f"unknown certificate mode {mode!r}")
        if len(steps) != max(len(graphs) - 1, 0):
            raise GraphError("a chain of n graphs needs n-1 steps")
        self.graphs = list(graphs)
        self.steps = list(steps)
        self.mode = mode
        self.p = p
        self.leg_mode = leg_mode

    def reversed(self) -> "LinkageCertificate":
        return LinkageCertificate(
            list(reversed(self.graphs)),
            [s.reversed() for s in reversed(self.steps)],
            self.mode, self.p, self.leg_mode,
        )

    def __repr__(self):
        return (f"LinkageCertificate(mode={self.mode}, p={self.p}, "
                f"graphs={len(self.graphs)}, steps={len(self.steps)})")


class VerificationReport:
    """Outcome of verify_certificate: valid flag plus located violations."""

    __slots__ = ("valid", "problems", "checked_steps")

    def __init__(self, problems, checked_steps):
        self.problems = list(problems)
        self.checked_steps = checked_steps
        self.valid = not self.problems

    @property
    def first_violation(self):
        return self.problems[0] if self.problems else None

    def to_json_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checked_steps": self.checked_steps,
            "problems": [
                {"step": step, "code": code, "message": msg}
                for step, code, msg in self.problems
            ],
        }

    def __repr__(self):
        if self.valid:
            return f"VerificationReport(valid, {self.checked_steps} steps)"
        return f"VerificationReport(invalid: {self.first_violation})"


def _check_witness(problems, idx, left, left_edge, right, right_edge,
                   witness, leg_mode):
    mid_l, cm_l = contract(left, {left_edge})
    mid_r, cm_r = contract(right, {right_edge})
    alpha_v, alpha_e, alpha_l = witness

    if set(alpha_v) != set(mid_r.vertices) or \
            sorted(alpha_v.values()) != list(mid_l.vertices):
        problems.append((idx, "witness_vertices",
                         "vertex map is not a bijection onto the left contraction"))
        return
    if set(alpha_e) != set(mid_r.edges) or \
            sorted(alpha_e.values()) != list(mid_l.edges):
        problems.append((idx, "witness_edges",
                         "edge map is not a bijection onto the left contraction"))
        return
    if set(alpha_l) != set(mid_r.legs) or \
            sorted(alpha_l.values()) != list(mid_l.legs):
        problems.append((idx, "witness_legs",
                         "leg map is not a bijection onto the left contraction"))
        return

    for e in mid_r.edges:
        a, b = mid_r.edge_ends(e)
        ta, tb = alpha_v[a], alpha_v[b]
        want = (ta, tb) if ta <= tb else (tb, ta)
        if mid_l.edge_ends(alpha_e[e]) != want:
            problems.append((idx, "witness_endpoints",
                             f"edge {e} maps to {alpha_e[e]} with wrong endpoints"))
            return
    for h in mid_r.legs:
        if mid_l.endpoint[alpha_l[h]] != alpha_v[mid_r.endpoint[h]]:
            problems.append((idx, "witness_leg_endpoints",
                             f"leg {h} maps to a leg at the wrong vertex"))
            return
        if leg_mode == "labeled" and \
                mid_l.leg_labels[alpha_l[h]] != mid_r.leg_labels[h]:
            problems.append((idx, "witness_leg_labels",
                             f"leg {h} maps to a differently labeled leg"))
            return

    if alpha_v[cm_r.image_vertex(right_edge)] != cm_l.image_vertex(left_edge):
        problems.append((idx, "marked_vertex",
                         "witness does not match the contracted-vertex images"))


def _check_cert_cycles(problems, idx, graph, edge, cycles):
    from .connectivity import Cycle  # local import to avoid a cycle

    sets = []
    for which, keys in zip(("first", "second"), cycles):
        try:
            verts = []
            k = len(keys)
            if k == 1:
                a, b = graph.edge_ends(keys[0])
                if a != b:
                    raise GraphError("one-edge cycle must be a loop")
                verts = [a]
            else:
                a0, b0 = graph.edge_ends(keys[0])
                a1, b1 = graph.edge_ends(keys[1])
                first = a0 if a0 in (a1, b1) else b0
                prev = b0 if first == a0 else a0
                verts = [prev]
                cur = first
                for e in keys[1:]:
                    verts.append(cur)
                    cur = graph.other_end(e, cur)
                if cur != prev:
                    raise GraphError("edge sequence does not close up")
            Cycle(graph, verts, keys)
            sets.append(frozenset(keys))
        except GraphError as exc:
            problems.append((idx, "cert_cycles",
                             f"{which} recorded cycle invalid: {exc}"))
            return
    if sets[0] & sets[1] != {edge}:
        problems.append((idx, "cert_cycles",
                         "recorded cycles do not meet exactly in the step edge"))


def verify_certificate(cert: LinkageCertificate, p: int | None = None,
                       mode: str | None = None, endpoints=None,
                       leg_mode: str | None = None) -> VerificationReport:
    """Re-derive every contraction and recheck every witness in cert.

    When endpoints=(a, b) is given, also checks that the chain starts and
    ends at graphs isomorphic to a and b.
    """
    p = cert.p if p is None else p
    mode = cert.mode if mode is None else mode
    leg_mode = cert.leg_mode if leg_mode is None else leg_mode
    problems: list[tuple[int | None, str, str]] = []

    if not cert.graphs:
        problems.append((None, "empty", "certificate contains no graphs"))
        return VerificationReport(problems, 0)

    g0 = cert.graphs[0]
    shape = (len(g0.vertices), len(g0.edges), len(g0.legs))
    for i, g in enumerate(cert.graphs):
        for v in g.vertices:
            if g.valency(v) != p:
                problems.append((i, "regularity",
                                 f"graph {i} is not {p}-regular at vertex {v}"))
                break
        if (len(g.vertices), len(g.edges), len(g.legs)) != shape:
            problems.append((i, "shape",
                             "vertex/edge/leg counts change along the chain"))
        if mode == "3ec" and edge_connectivity_capped(g) != 3:
            problems.append((i, "three_ec", f"graph {i} is not 3-edge-connected"))

    for i, step in enumerate(cert.steps):
        left, right = cert.graphs[i], cert.graphs[i + 1]
        if step.left is not left and step.left != left:
            problems.append((i, "chain", "step left graph is not chain graph i"))
            continue
        if step.right is not right and step.right != right:
            problems.append((i, "chain", "step right graph is not chain graph i+1"))
            continue
        ok = True
        for g, e, side in ((left, step.left_edge, "left"),
                           (right, step.right_edge, "right")):
            if e not in g.edges:
                problems.append((i, "edge", f"{side} edge {e} does not exist"))
                ok = False
            elif g.is_loop(e):
                problems.append((i, "edge", f"{side} edge {e} is a loop"))
                ok = False
        if not ok:
            continue
        _check_witness(problems, i, left, step.left_edge, right,
                       step.right_edge, step.witness, leg_mode)
        if mode == "3ec":
            mid, _ = contract(left, {step.left_edge})
            if edge_connectivity_capped(mid) != 3:
                problems.append((i, "three_ec",
                                 f"middle graph of step {i} is not 3-edge-connected"))
        if step.cert_cycles is not None:
            _check_cert_cycles(problems, i, right, step.right_edge,
                               step.cert_cycles)

    if endpoints is not None:
        a, b = endpoints
        if not are_isomorphic(cert.graphs[0], a, leg_mode):
            problems.append((None, "endpoint", "chain does not start at the first endpoint"))
        if not are_isomorphic(cert.graphs[-1], b, leg_mode):
            problems.append((None, "endpoint", "chain does not end at the second endpoint"))

    return VerificationReport(problems, len(cert.steps))


# -- JSON ---------------------------------------------------------------------


def certificate_to_json_dict(cert: LinkageCertificate) -> dict:
    steps = []
    for i, s in enumerate(cert.steps):
        av, ae, al = s.witness
        entry = {
            "left_index": i,
            "left_edge": s.left_edge,
            "right_edge": s.right_edge,
            "witness": {
                "vertices": {str(k): v for k, v in sorted(av.items())},
                "edges": {str(k): v for k, v in sorted(ae.items())},
                "legs": {str(k): v for k, v in sorted(al.items())},
            },
        }
        if s.cert_cycles is not None:
            entry["cycles"] = [list(c) for c in s.cert_cycles]
        steps.append(entry)
    return {
        "mode": cert.mode,
        "p": cert.p,
        "leg_mode": cert.leg_mode,
        "graphs": [to_json_dict(g) for g in cert.graphs],
        "steps": steps,
    }


def certificate_from_json_dict(d: dict) -> LinkageCertificate:
    try:
        graphs = []
        for gd in d["graphs"]:
            graphs.append(underlying_graph(from_json_dict(gd)))
        steps = []
        for s in d["steps"]:
            i = s["left_index"]
            w = s["witness"]
            witness = (
                {int(k): v for k, v in w["vertices"].items()},
                {int(k): v for k, v in w["edges"].items()},
                {int(k): v for k, v in w.get("legs", {}).items()},
            )
            cycles = None
            if "cycles" in s:
                cycles = tuple(tuple(c) for c in s["cycles"])
            steps.append(StrongLinkStep(graphs[i], s["left_edge"], graphs[i + 1],
                                        s["right_edge"], witness, cycles))
        return LinkageCertificate(graphs, steps, d["mode"], d["p"],
                                  d.get("leg_mode", "labeled"))
    except (KeyError, TypeError, IndexError) as exc:
        raise GraphError(f"malformed certificate JSON: {exc}") from exc
