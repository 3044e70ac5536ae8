"""Valency and connectivity predicates, and exhaustive cycle search.

Edge connectivity is computed exactly, capped at 3, by brute force over
removal sets; cycle search is a DFS enumeration with canonical-start
pruning.  Both are meant for desk-scale graphs (tens of edges), where
exactness beats asymptotics.

Cycles are 2-regular subgraphs, so in a multigraph a single loop is a valid
cycle of length 1 and a pair of parallel edges a valid cycle of length 2.
"""

from __future__ import annotations

from itertools import combinations

from .graphs import Graph, GraphError


class CycleSearchBudgetExceeded(RuntimeError):
    """The cycle DFS hit its node budget; results would be incomplete."""


class Cycle:
    """A cycle as an ordered vertex list with the edges joining them."""

    __slots__ = ("vertices", "edge_keys")

    def __init__(self, g: Graph, vertices, edge_keys):
        vertices = tuple(vertices)
        edge_keys = tuple(edge_keys)
        if len(vertices) != len(edge_keys) or not vertices:
            raise GraphError("cycle needs as many edges as vertices")
        if len(set(vertices)) != len(vertices):
            raise GraphError("cycle vertices must be distinct")
        if len(set(edge_keys)) != len(edge_keys):
            raise GraphError("cycle edges must be distinct")
        k = len(vertices)
        for i in range(k):
            a, b = vertices[i], vertices[(i + 1) % k]
            ends = g.edge_ends(edge_keys[i])
            if ends != ((a, b) if a <= b else (b, a)):
                raise GraphError(f"edge {edge_keys[i]} does not join {a},{b}")
        self.vertices = vertices
        self.edge_keys = edge_keys

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edge_keys)

    def canonical_vertices(self) -> tuple[int, ...]:
        """Least vertex tuple over all rotations and the two directions."""
        best = None
        vs = self.vertices
        k = len(vs)
        for seq in (vs, vs[::-1]):
            for r in range(k):
                cand = seq[r:] + seq[:r]
                if best is None or cand < best:
                    best = cand
        return best

    def __repr__(self):
        return f"Cycle(len={self.length}, vertices={self.vertices})"


def is_p_regular(g: Graph, p: int) -> bool:
    """Every vertex has valency p; legs count once, loops twice."""
    if p < 1:
        raise GraphError("p must be >= 1")
    return all(g.valency(v) == p for v in g.vertices)


def _connected_without(g: Graph, removed: frozenset) -> bool:
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges:
        if e in removed:
            continue
        a, b = g.edge_ends(e)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    root = find(g.vertices[0])
    return all(find(v) == root for v in g.vertices)


def edge_connectivity_capped(g: Graph, cap: int = 3) -> int:
    """Largest k <= cap such that no removal of fewer than k edges
    disconnects g.  Exact by exhaustion; legs are never removed."""
    if len(g.vertices) == 1:
        return cap
    for size in range(1, cap):
        for F in combinations(g.edges, size):
            if not _connected_without(g, frozenset(F)):
                return size
    return cap


def all_cycles(g: Graph, budget: int = 2_000_000) -> list[Cycle]:
    """Every cycle of g, each exactly once.

    Raises CycleSearchBudgetExceeded instead of silently truncating.
    """
    cycles: list[Cycle] = []
    steps = 0

    for e in g.edges:
        if g.is_loop(e):
            cycles.append(Cycle(g, (g.edge_ends(e)[0],), (e,)))

    nonloop_at: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    for e in sorted(g.edges):
        if not g.is_loop(e):
            a, b = g.edge_ends(e)
            nonloop_at[a].append((e, b))
            nonloop_at[b].append((e, a))

    def extend(start, v, path_v, path_e, on_path):
        nonlocal steps
        for e, u in nonloop_at[v]:
            steps += 1
            if steps > budget:
                raise CycleSearchBudgetExceeded(f"budget {budget} exhausted")
            if e in path_e:
                continue
            if u == start:
                if len(path_e) >= 1 and path_e[0] < e:
                    cycles.append(Cycle(g, tuple(path_v), tuple(path_e) + (e,)))
                continue
            if u < start or u in on_path:
                continue
            path_v.append(u)
            path_e.append(e)
            on_path.add(u)
            extend(start, u, path_v, path_e, on_path)
            path_v.pop()
            path_e.pop()
            on_path.remove(u)

    for s in g.vertices:
        extend(s, s, [s], [], {s})
    return cycles


def longest_cycle(g: Graph, budget: int = 2_000_000) -> Cycle | None:
    """A maximum-length cycle, or None if g has none.

    Ties are broken by the lexicographically least canonical vertex
    sequence, so the result is deterministic.
    """
    best = None
    best_key = None
    for c in all_cycles(g, budget):
        key = (-c.length, c.canonical_vertices(), c.edge_keys)
        if best_key is None or key < best_key:
            best, best_key = c, key
    return best


def is_hamiltonian(g: Graph, budget: int = 2_000_000) -> bool:
    """True iff |V| >= 2 and some cycle passes through every vertex."""
    if len(g.vertices) < 2:
        return False
    c = longest_cycle(g, budget)
    return c is not None and c.length == len(g.vertices)


def two_cycle_criterion(g: Graph, budget: int = 2_000_000) -> bool:
    """True iff every edge lies in two cycles meeting only in that edge.

    Sufficient for 3-edge-connectivity.  A loop lies in a single cycle, so
    any loop makes the criterion fail.
    """
    cycles = all_cycles(g, budget)
    by_edge: dict[int, list[frozenset]] = {e: [] for e in g.edges}
    for c in cycles:
        for e in c.edge_keys:
            by_edge[e].append(c.edge_set)
    for e in g.edges:
        found = False
        sets = by_edge[e]
        for s1, s2 in combinations(sets, 2):
            if s1 & s2 == {e}:
                found = True
                break
        if not found:
            return False
    return True
