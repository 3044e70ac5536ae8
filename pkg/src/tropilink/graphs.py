"""Half-edge multigraphs with legs, weights and lengths.

A graph is stored as a finite set of vertex ids, a finite set of half-edge
ids, an involution pairing half-edges into edges (its fixed points are the
legs, i.e. marked half-edges), and an endpoint map attaching every half-edge
to a vertex.  Loops and parallel edges are allowed; the underlying
topological graph must be connected.

Edges are referenced by a stable *key*: the smaller of the two half-edge ids
forming the edge.  Legs are referenced by their half-edge id.  Contraction
keeps the ids of everything it does not touch, so edge keys survive through
contraction maps; this is what makes transformation certificates auditable.

All values are immutable after construction; every operation returns fresh
objects.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Mapping


class GraphError(ValueError):
    """Malformed graph data or an operation applied out of its domain."""


class InternalConsistencyError(RuntimeError):
    """A structural guarantee the algorithms rely on failed to hold."""


class Graph:
    """Connected multigraph with legs, in the half-edge representation."""

    __slots__ = (
        "vertices",
        "half_edges",
        "involution",
        "endpoint",
        "leg_labels",
        "edges",
        "legs",
        "_at_vertex",
        "_canon_cache",
    )

    def __init__(
        self,
        vertices: Iterable[int],
        involution: Mapping[int, int],
        endpoint: Mapping[int, int],
        leg_labels: Mapping[int, int] | None = None,
    ):
        vs = tuple(sorted(vertices))
        if not vs:
            raise GraphError("a graph needs at least one vertex")
        if len(set(vs)) != len(vs):
            raise GraphError("duplicate vertex ids")
        inv = dict(involution)
        hs = tuple(sorted(inv))
        ep = dict(endpoint)
        if set(ep) != set(hs):
            raise GraphError("endpoint map must cover exactly the half-edges")
        for h, h2 in inv.items():
            if h2 not in inv or inv[h2] != h:
                raise GraphError("involution is not an involution")
        vset = set(vs)
        for h, v in ep.items():
            if v not in vset:
                raise GraphError(f"half-edge {h} attached to unknown vertex {v}")

        legs = tuple(sorted(h for h in hs if inv[h] == h))
        labels = dict(leg_labels) if leg_labels else {}
        if set(labels) != set(legs):
            raise GraphError("leg labels must cover exactly the legs")
        if len(set(labels.values())) != len(labels):
            raise GraphError("leg labels must be distinct")

        self.vertices = vs
        self.half_edges = hs
        self.involution = inv
        self.endpoint = ep
        self.leg_labels = labels
        self.legs = legs
        self.edges = tuple(sorted(h for h in hs if inv[h] > h))
        at: dict[int, list[int]] = {v: [] for v in vs}
        for h in hs:
            at[ep[h]].append(h)
        self._at_vertex = {v: tuple(sorted(at[v])) for v in vs}
        self._canon_cache: dict = {}

        if not self._connected():
            raise GraphError("graph is not connected")

    # -- basic accessors ---------------------------------------------------

    def edge_halves(self, key: int) -> tuple[int, int]:
        h2 = self.involution[key]
        if h2 == key:
            raise GraphError(f"{key} is a leg, not an edge")
        return (key, h2) if key < h2 else (h2, key)

    def edge_ends(self, key: int) -> tuple[int, int]:
        h1, h2 = self.edge_halves(key)
        a, b = self.endpoint[h1], self.endpoint[h2]
        return (a, b) if a <= b else (b, a)

    def is_loop(self, key: int) -> bool:
        a, b = self.edge_ends(key)
        return a == b

    def half_edges_at(self, v: int) -> tuple[int, ...]:
        return self._at_vertex[v]

    def valency(self, v: int) -> int:
        return len(self._at_vertex[v])

    def loops_at(self, v: int) -> int:
        return sum(1 for e in self.edges if self.edge_ends(e) == (v, v))

    def legs_at(self, v: int) -> tuple[int, ...]:
        return tuple(h for h in self._at_vertex[v] if self.involution[h] == h)

    def edges_at(self, v: int) -> tuple[int, ...]:
        """Edge keys incident to v (a loop listed once)."""
        seen = []
        for h in self._at_vertex[v]:
            if self.involution[h] != h:
                k = min(h, self.involution[h])
                if k not in seen:
                    seen.append(k)
        return tuple(seen)

    def other_end(self, key: int, v: int) -> int:
        a0, b0 = self.edge_ends(key)
        if v == a0:
            return b0
        if v == b0:
            return a0
        raise GraphError(f"vertex {v} is not an end of edge {key}")

    @property
    def b1(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def is_regular(self) -> int | None:
        """The common valency, or None if the graph is not regular."""
        vals = {self.valency(v) for v in self.vertices}
        return vals.pop() if len(vals) == 1 else None

    def _connected(self) -> bool:
        start = self.vertices[0]
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for h in self._at_vertex[v]:
                u = self.endpoint[self.involution[h]]
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.vertices)

    # -- structural identity ----------------------------------------------

    def _key(self):
        return (
            self.vertices,
            tuple(sorted(self.involution.items())),
            tuple(sorted(self.endpoint.items())),
            tuple(sorted(self.leg_labels.items())),
        )

    def __eq__(self, other):
        return isinstance(other, Graph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)}, "
            f"legs={len(self.legs)}, b1={self.b1})"
        )

    # -- derived copies ----------------------------------------------------

    def with_endpoints(self, reassign: Mapping[int, int]) -> "Graph":
        """Fresh graph with some half-edges re-attached to other vertices."""
        ep = dict(self.endpoint)
        for h, v in reassign.items():
            ep[h] = v
        return Graph(self.vertices, self.involution, ep, self.leg_labels)


class WeightedGraph:
    """Graph together with a nonnegative integer vertex weight."""

    __slots__ = ("graph", "weight")

    def __init__(self, graph: Graph, weight: Mapping[int, int] | None = None):
        w = {v: 0 for v in graph.vertices}
        if weight:
            for v, x in weight.items():
                if v not in w:
                    raise GraphError(f"weight on unknown vertex {v}")
                if x < 0:
                    raise GraphError("weights must be nonnegative")
                w[v] = int(x)
        self.graph = graph
        self.weight = w

    @property
    def total_weight(self) -> int:
        return sum(self.weight.values())

    def is_stable(self) -> bool:
        g = self.graph
        for v in g.vertices:
            if self.weight[v] == 0 and g.valency(v) < 3:
                return False
            if self.weight[v] == 1 and g.valency(v) < 1:
                return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, WeightedGraph)
            and self.graph == other.graph
            and self.weight == other.weight
        )

    def __hash__(self):
        return hash((self.graph, tuple(sorted(self.weight.items()))))

    def __repr__(self):
        return f"WeightedGraph({self.graph!r}, total_weight={self.total_weight})"


class TropicalCurve:
    """Weighted graph with positive (possibly infinite) edge and leg lengths.

    A length is +inf exactly on the legs and on the edges adjacent to a
    1-valent vertex of weight 0.
    """

    __slots__ = ("wgraph", "length")

    def __init__(self, wgraph: WeightedGraph, length: Mapping[int, float]):
        g = wgraph.graph
        keys = set(g.edges) | set(g.legs)
        ln = {k: float(x) for k, x in length.items()}
        if set(ln) != keys:
            raise GraphError("lengths must cover exactly the edges and legs")
        for k, x in ln.items():
            if not x > 0:
                raise GraphError("lengths must be positive")
            if k in g.legs:
                must_inf = True
            else:
                must_inf = any(
                    g.valency(v) == 1 and wgraph.weight[v] == 0
                    for v in g.edge_ends(k)
                )
            if must_inf != math.isinf(x):
                raise GraphError(
                    f"length of {k} must be {'infinite' if must_inf else 'finite'}"
                )
        self.wgraph = wgraph
        self.length = ln

    def __repr__(self):
        return f"TropicalCurve({self.wgraph!r})"


def genus(wg: WeightedGraph | Graph) -> int:
    """First Betti number plus total vertex weight."""
    if isinstance(wg, Graph):
        return wg.b1
    return wg.graph.b1 + wg.total_weight


# -- construction helpers ---------------------------------------------------


def build_graph(
    edge_list: Iterable[tuple[int, int]],
    legs: Iterable[tuple[int, int]] = (),
    weights: Mapping[int, int] | None = None,
    isolated: Iterable[int] = (),
):
    """Build a graph from (u, v) edge pairs and (vertex, label) legs.

    Edge i gets half-edges 2i and 2i+1, so its key is 2i; legs get the ids
    after the edges.  Returns a WeightedGraph when weights are given.
    """
    edge_list = list(edge_list)
    legs = list(legs)
    inv: dict[int, int] = {}
    ep: dict[int, int] = {}
    vs = set(isolated)
    for i, (u, v) in enumerate(edge_list):
        a, b = 2 * i, 2 * i + 1
        inv[a], inv[b] = b, a
        ep[a], ep[b] = u, v
        vs.update((u, v))
    base = 2 * len(edge_list)
    labels = {}
    for j, (v, label) in enumerate(legs):
        h = base + j
        inv[h] = h
        ep[h] = v
        labels[h] = label
        vs.add(v)
    g = Graph(vs, inv, ep, labels)
    if weights is not None:
        return WeightedGraph(g, weights)
    return g


def theta_graph() -> Graph:
    """Two vertices joined by three parallel edges."""
    return build_graph([(0, 1), (0, 1), (0, 1)])


def dumbbell_graph() -> Graph:
    """Two loop vertices joined by a bridge."""
    return build_graph([(0, 0), (0, 1), (1, 1)])


def k4_graph() -> Graph:
    return build_graph([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def cycle_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("cycle length must be >= 1")
    if n == 1:
        return build_graph([(0, 0)])
    return build_graph([(i, (i + 1) % n) for i in range(n)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(outer + spokes + inner)


# -- contraction -------------------------------------------------------------


class ContractionMap:
    """Record of a contraction: source, target and the id correspondences.

    Edge and leg correspondences are identity maps on ids because contraction
    keeps the ids it does not consume; target vertices are named by the
    smallest source vertex in their preimage component.
    """

    __slots__ = ("source", "target", "contracted_set", "vertex_map",
                 "edge_correspondence", "leg_correspondence")

    def __init__(self, source, target, contracted_set, vertex_map,
                 edge_correspondence, leg_correspondence):
        self.source = source
        self.target = target
        self.contracted_set = frozenset(contracted_set)
        self.vertex_map = dict(vertex_map)
        self.edge_correspondence = dict(edge_correspondence)
        self.leg_correspondence = dict(leg_correspondence)

    def image_vertex(self, key: int) -> int:
        """Target vertex a contracted edge was collapsed to."""
        if key not in self.contracted_set:
            raise GraphError(f"edge {key} was not contracted")
        return self.vertex_map[self.source.edge_ends(key)[0]]


def contract(g: Graph, S: Iterable[int]) -> tuple[Graph, ContractionMap]:
    """Collapse the edges in S, leaving everything else unchanged."""
    S = frozenset(S)
    bad = S - set(g.edges)
    if bad:
        raise GraphError(f"not contractible edges (legs or unknown keys): {sorted(bad)}")

    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for key in S:
        a, b = g.edge_ends(key)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    vmap = {v: find(v) for v in g.vertices}
    new_vertices = sorted(set(vmap.values()))

    drop = set()
    for key in S:
        drop.update(g.edge_halves(key))
    inv = {h: p for h, p in g.involution.items() if h not in drop}
    ep = {h: vmap[g.endpoint[h]] for h in inv}
    target = Graph(new_vertices, inv, ep, g.leg_labels)

    kept = [e for e in g.edges if e not in S]
    cmap = ContractionMap(
        g, target, S, vmap,
        {e: e for e in kept},
        {h: h for h in g.legs},
    )
    return target, cmap


def b1_of_edge_subset(g: Graph, S: Iterable[int]) -> int:
    """First Betti number of the subgraph (V(g), S), summed over components.

    Equals sum over target vertices of b1 of their preimage component when S
    is the contracted set.
    """
    S = list(S)
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    comps = 0
    for key in S:
        a, b = g.edge_ends(key)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = {find(v) for v in g.vertices}
    comps = len(roots)
    return len(S) - len(g.vertices) + comps


def weighted_contract(wg: WeightedGraph, S: Iterable[int]) -> tuple[WeightedGraph, ContractionMap]:
    """Contract S and fold the collapsed Betti number into the weights."""
    S = frozenset(S)
    g = wg.graph
    target, cmap = contract(g, S)

    comp_vertices: dict[int, list[int]] = {v: [] for v in target.vertices}
    for v in g.vertices:
        comp_vertices[cmap.vertex_map[v]].append(v)
    comp_edges: dict[int, int] = {v: 0 for v in target.vertices}
    for key in S:
        comp_edges[cmap.vertex_map[g.edge_ends(key)[0]]] += 1

    w = {}
    for vbar in target.vertices:
        b1_comp = comp_edges[vbar] - len(comp_vertices[vbar]) + 1
        w[vbar] = b1_comp + sum(wg.weight[v] for v in comp_vertices[vbar])
    out = WeightedGraph(target, w)
    cmap = ContractionMap(wg, out, S, cmap.vertex_map,
                          cmap.edge_correspondence, cmap.leg_correspondence)
    return out, cmap


# -- stabilization ------------------------------------------------------------


def stabilize(tc: TropicalCurve) -> TropicalCurve:
    """Unique stable representative of the tropical equivalence class.

    Removes 1-valent weight-0 vertices together with their edge, and smooths
    2-valent weight-0 vertices by merging the two incident edges into one
    edge whose length is the sum.  Idempotent.
    """
    wg = tc.wgraph
    g = wg.graph
    n = len(g.legs)
    if 2 * genus(wg) - 2 + n <= 0:
        raise GraphError("no stable representative: 2g-2+n <= 0")

    vertices = set(g.vertices)
    inv = dict(g.involution)
    ep = dict(g.endpoint)
    weight = dict(wg.weight)
    length = dict(tc.length)

    def halves_at(v):
        return [h for h in ep if ep[h] == v]

    changed = True
    while changed:
        changed = False
        # prune 1-valent weight-0 ends first: the pruned edges are exactly
        # the ones allowed to be infinite, so later merges stay finite
        for v in sorted(vertices):
            hs = halves_at(v)
            if weight[v] == 0 and len(hs) == 1 and inv[hs[0]] != hs[0]:
                h = hs[0]
                h2 = inv[h]
                key = min(h, h2)
                del inv[h], inv[h2], ep[h], ep[h2]
                del length[key]
                vertices.remove(v)
                del weight[v]
                changed = True
                break
        if changed:
            continue
        for v in sorted(vertices):
            hs = halves_at(v)
            if weight[v] == 0 and len(hs) == 2:
                ha, hb = sorted(hs)
                if inv[ha] == hb:
                    raise GraphError("2-valent loop vertex cannot be stabilized")
                if inv[ha] == ha or inv[hb] == hb:
                    continue  # legs are marked points, not removable
                pa, pb = inv[ha], inv[hb]
                ka, kb = min(ha, pa), min(hb, pb)
                merged = length[ka] + length[kb]
                del length[ka], length[kb]
                del inv[ha], inv[hb], ep[ha], ep[hb]
                inv[pa], inv[pb] = pb, pa
                length[min(pa, pb)] = merged
                vertices.remove(v)
                del weight[v]
                changed = True
                break

    labels = {h: g.leg_labels[h] for h in g.leg_labels if h in inv}
    out_g = Graph(vertices, inv, ep, labels)
    out = WeightedGraph(out_g, weight)
    if not out.is_stable():
        raise GraphError("stabilization did not reach a stable graph")
    return TropicalCurve(out, length)


# -- JSON and DOT -------------------------------------------------------------


def to_json_dict(obj) -> dict:
    """Bit-stable JSON form of a Graph, WeightedGraph or TropicalCurve."""
    if isinstance(obj, TropicalCurve):
        wg, lengths = obj.wgraph, obj.length
    elif isinstance(obj, WeightedGraph):
        wg, lengths = obj, None
    elif isinstance(obj, Graph):
        wg, lengths = WeightedGraph(obj), None
    else:
        raise GraphError(f"cannot serialize {type(obj).__name__}")
    g = wg.graph
    d = {
        "vertices": [{"id": v, "weight": wg.weight[v]} for v in g.vertices],
        "half_edges": [
            {"id": h, "vertex": g.endpoint[h], "partner": g.involution[h]}
            for h in g.half_edges
        ],
        "legs": [
            {"half_edge": h, "label": g.leg_labels[h]} for h in g.legs
        ],
    }
    if lengths is not None:
        d["lengths"] = {
            str(k): ("inf" if math.isinf(x) else x)
            for k, x in sorted(lengths.items())
        }
    return d


def from_json_dict(d: dict):
    """Inverse of to_json_dict; returns the most specific of the three types."""
    try:
        vertices = [v["id"] for v in d["vertices"]]
        weights = {v["id"]: v.get("weight", 0) for v in d["vertices"]}
        inv = {h["id"]: h["partner"] for h in d["half_edges"]}
        ep = {h["id"]: h["vertex"] for h in d["half_edges"]}
        labels = {leg["half_edge"]: leg["label"] for leg in d.get("legs", [])}
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc
    g = Graph(vertices, inv, ep, labels)
    if "lengths" in d:
        lengths = {
            int(k): (math.inf if x == "inf" else float(x))
            for k, x in d["lengths"].items()
        }
        return TropicalCurve(WeightedGraph(g, weights), lengths)
    if any(weights.values()):
        return WeightedGraph(g, weights)
    return g


def dumps_canonical(d) -> str:
    """Serialize a JSON value with a fixed layout so round trips are byte-identical."""
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def underlying_graph(obj) -> Graph:
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, WeightedGraph):
        return obj.graph
    if isinstance(obj, TropicalCurve):
        return obj.wgraph.graph
    raise GraphError(f"no underlying graph for {type(obj).__name__}")


def to_dot(obj, name: str = "G") -> str:
    """DOT rendering: parallel edges drawn separately, weights as labels,
    legs as arrowless stubs."""
    if isinstance(obj, (WeightedGraph, TropicalCurve)):
        wg = obj.wgraph if isinstance(obj, TropicalCurve) else obj
    else:
        wg = WeightedGraph(obj)
    g = wg.graph
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        w = wg.weight[v]
        label = f"{v}" if w == 0 else f"{v} (w={w})"
        lines.append(f'  v{v} [label="{label}"];')
    for e in g.edges:
        a, b = g.edge_ends(e)
        lines.append(f"  v{a} -- v{b} [label=\"e{e}\"];")
    for h in g.legs:
        stub = f"leg{h}"
        lines.append(f'  {stub} [shape=none, label="leg {g.leg_labels[h]}"];')
        lines.append(f"  v{g.endpoint[h]} -- {stub};")
    lines.append("}")
    return "\n".join(lines) + "\n"
