"""Stratification posets of tropical moduli loci and the codimension-one
connectivity check.

A stratum is an isomorphism class of stable weighted graphs with labeled
legs; its dimension is the edge count.  Covers are one-edge weighted
contractions.  A locus restricts the strata: all of them, the pure ones
(weight zero everywhere), those with 3-edge-connected underlying graph
(the combinatorial stand-in for the Schottky image), or the downward
closure of the p-regular pure classes.
"""

from __future__ import annotations

from .atlas import enumerate_stable
from .canonical import canonical_form, canonical_hash
from .connectivity import edge_connectivity_capped, is_p_regular
from .graphs import GraphError, WeightedGraph, genus, weighted_contract


class Stratum:
    __slots__ = ("wgraph", "key")

    def __init__(self, wgraph: WeightedGraph):
        self.wgraph = wgraph
        self.key = canonical_form(wgraph, "labeled")

    @property
    def dimension(self) -> int:
        return len(self.wgraph.graph.edges)

    def __repr__(self):
        return f"Stratum(dim={self.dimension}, genus={genus(self.wgraph)})"


class StrataPoset:
    """Strata plus the one-edge-contraction cover relation."""

    __slots__ = ("g", "n", "locus", "strata", "covers", "_index")

    def __init__(self, g, n, locus, strata, covers):
        self.g = g
        self.n = n
        self.locus = locus
        self.strata = strata
        self.covers = sorted(covers)
        self._index = {s.key: i for i, s in enumerate(strata)}

    @property
    def max_dimension(self) -> int:
        return max(s.dimension for s in self.strata)

    def dimension_profile(self) -> dict[int, int]:
        prof: dict[int, int] = {}
        for s in self.strata:
            prof[s.dimension] = prof.get(s.dimension, 0) + 1
        return prof

    def maximal_strata(self) -> list[int]:
        top = self.max_dimension
        return [i for i, s in enumerate(self.strata) if s.dimension == top]

    def pure_dimension_violations(self) -> list[int]:
        """Strata not below any maximal stratum (empty on a pure-dimensional
        locus; reported, never assumed)."""
        up: dict[int, set[int]] = {i: set() for i in range(len(self.strata))}
        for a, b in self.covers:
            up[b].add(a)
        tops = set(self.maximal_strata())
        bad = []
        for i in range(len(self.strata)):
            frontier = {i}
            seen: set[int] = set()
            reached = False
            while frontier:
                x = frontier.pop()
                if x in tops:
                    reached = True
                    break
                seen.add(x)
                frontier |= up[x] - seen
            if not reached:
                bad.append(i)
        return bad

    def __repr__(self):
        return (f"StrataPoset(g={self.g}, n={self.n}, locus={self.locus}, "
                f"strata={len(self.strata)}, covers={len(self.covers)})")


def _parse_locus(locus) -> tuple[str, int | None]:
    if isinstance(locus, tuple):
        return locus
    if locus in ("all", "pure", "3ec", "three_ec"):
        return ("3ec" if locus == "three_ec" else locus, None)
    if isinstance(locus, str) and locus.startswith("preg:"):
        return ("preg", int(locus.split(":", 1)[1]))
    raise GraphError(f"unknown locus {locus!r}")


def _in_locus(wg: WeightedGraph, kind: str) -> bool:
    if kind == "all":
        return True
    if kind == "pure":
        return wg.total_weight == 0
    if kind == "3ec":
        return edge_connectivity_capped(wg.graph) == 3
    raise GraphError(f"unknown locus kind {kind!r}")


def build_poset(g: int, n: int, locus="all") -> StrataPoset:
    """Stratification poset of the chosen locus inside M_{g,n}.

    The 3ec and p-regular loci are defined for unpointed curves only.
    """
    if 2 * g - 2 + n <= 0:
        raise GraphError("moduli need 2g-2+n > 0")
    kind, p = _parse_locus(locus)
    if kind in ("3ec", "preg") and n != 0:
        raise GraphError(f"locus {kind} is defined for n = 0 only")

    everything = enumerate_stable(g, n)
    if kind == "preg":
        # downward closure of the p-regular pure classes
        maximal = [
            wg for wg in everything
            if wg.total_weight == 0 and is_p_regular(wg.graph, p)
        ]
        if not maximal:
            raise GraphError(f"no {p}-regular pure classes at genus {g}")
        keep: dict[tuple, WeightedGraph] = {}
        frontier = list(maximal)
        while frontier:
            nxt = []
            for wg in frontier:
                key = canonical_form(wg, "labeled")
                if key in keep:
                    continue
                keep[key] = wg
                for e in wg.graph.edges:
                    smaller, _ = weighted_contract(wg, {e})
                    nxt.append(smaller)
            frontier = nxt
        chosen = [wg for wg in everything
                  if canonical_form(wg, "labeled") in keep]
    else:
        chosen = [wg for wg in everything if _in_locus(wg, kind)]

    strata = [Stratum(wg) for wg in chosen]
    index = {s.key: i for i, s in enumerate(strata)}
    covers = set()
    for i, s in enumerate(strata):
        for e in s.wgraph.graph.edges:
            smaller, _ = weighted_contract(s.wgraph, {e})
            j = index.get(canonical_form(smaller, "labeled"))
            if j is not None and j != i:
                covers.add((i, j))
    return StrataPoset(g, n, locus, strata, covers)


def connected_through_codim_one(poset: StrataPoset):
    """Restrict to strata of dimension >= d-1 (d the top dimension), join
    them along covers, and report (connected?, components)."""
    if not poset.strata:
        raise GraphError("empty poset")
    d = poset.max_dimension
    keep = [i for i, s in enumerate(poset.strata) if s.dimension >= d - 1]
    keepset = set(keep)
    adj: dict[int, set[int]] = {i: set() for i in keep}
    for a, b in poset.covers:
        if a in keepset and b in keepset:
            adj[a].add(b)
            adj[b].add(a)
    components = []
    seen: set[int] = set()
    for start in keep:
        if start in seen:
            continue
        comp = set()
        stack = [start]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(adj[v] - comp)
        seen |= comp
        components.append(sorted(comp))
    return len(components) == 1, components


def check_schottky_codim1(g: int) -> bool:
    """Codimension-one connectivity of the 3-edge-connected locus, the
    combinatorial stand-in for the genus-g Schottky image."""
    if g < 2:
        raise GraphError("the Schottky check needs g >= 2")
    connected, _ = connected_through_codim_one(build_poset(g, 0, "3ec"))
    return connected


def poset_to_json_dict(poset: StrataPoset) -> dict:
    from .graphs import to_json_dict
    return {
        "genus": poset.g,
        "legs": poset.n,
        "locus": str(poset.locus),
        "strata": [
            {
                "index": i,
                "dimension": s.dimension,
                "id": canonical_hash(s.wgraph),
                "graph": to_json_dict(s.wgraph),
            }
            for i, s in enumerate(poset.strata)
        ],
        "covers": [list(c) for c in poset.covers],
    }


def poset_to_dot(poset: StrataPoset) -> str:
    """DOT rendering ranked by dimension, nodes named by canonical hash."""
    lines = ["digraph strata {", "  rankdir=BT;"]
    by_dim: dict[int, list[int]] = {}
    ids = [canonical_hash(s.wgraph) for s in poset.strata]
    for i, s in enumerate(poset.strata):
        by_dim.setdefault(s.dimension, []).append(i)
        lines.append(f'  n{ids[i]} [label="dim {s.dimension}\\n{ids[i]}"];')
    for dim, nodes in sorted(by_dim.items()):
        row = "; ".join(f"n{ids[i]}" for i in nodes)
        lines.append(f"  {{ rank=same; {row}; }}")
    for a, b in poset.covers:
        lines.append(f"  n{ids[b]} -> n{ids[a]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
