"""Normalized forms of p-hamiltonian graphs and the p-polygon family.

A p-hamiltonian graph (p-regular, loop-free, hamiltonian) is normalized by
fixing a hamiltonian cycle, labeling the vertices v_1..v_gamma along it, and
listing the remaining b-1 edges as chords (i, j) with i < j.  The amplitude
of a chord is its shorter distance along the cycle; chords of amplitude at
most gamma/2 - 1 are short.  The defect epsilon sums floor(gamma/2) minus
amplitude over all chords and vanishes exactly on the p-polygon, the unique
p-hamiltonian graph without short chords.
"""

from __future__ import annotations

from .connectivity import Cycle, is_p_regular, longest_cycle
from .graphs import Graph, GraphError, InternalConsistencyError, build_graph


class NormalizedForm:
    """Hamiltonian ordering of a p-hamiltonian graph with its chord list.

    Positions are 1-based: order[i-1] is v_i, cycle_edges[i-1] is the cycle
    edge e_i joining v_i and v_{i+1} (cyclically).  Chords are (i, j, key)
    with i < j.
    """

    __slots__ = ("base", "order", "cycle_edges", "chords", "pos")

    def __init__(self, base: Graph, order, cycle_edges):
        gamma = len(base.vertices)
        order = tuple(order)
        cycle_edges = tuple(cycle_edges)
        if sorted(order) != list(base.vertices) or len(cycle_edges) != gamma:
            raise GraphError("order must list every vertex once")
        if len(set(cycle_edges)) != gamma:
            raise GraphError("cycle edges must be distinct")
        for t in range(gamma):
            a, b = order[t], order[(t + 1) % gamma]
            if base.edge_ends(cycle_edges[t]) != ((a, b) if a <= b else (b, a)):
                raise GraphError(f"cycle edge {cycle_edges[t]} does not join {a},{b}")
        self.base = base
        self.order = order
        self.cycle_edges = cycle_edges
        self.pos = {v: i + 1 for i, v in enumerate(order)}
        chords = []
        cyc = set(cycle_edges)
        for e in base.edges:
            if e in cyc:
                continue
            a, b = base.edge_ends(e)
            i, j = sorted((self.pos[a], self.pos[b]))
            if i == j:
                raise GraphError("loops have no normalized form")
            chords.append((i, j, e))
        self.chords = tuple(sorted(chords))

    @property
    def gamma(self) -> int:
        return len(self.order)

    def vertex(self, i: int) -> int:
        return self.order[(i - 1) % self.gamma]

    def cycle_edge(self, i: int) -> int:
        """Key of e_i, the cycle edge joining v_i and v_{i+1}."""
        return self.cycle_edges[(i - 1) % self.gamma]

    def chord_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, _ in self.chords]

    def chords_at(self, i: int) -> list[tuple[int, int, int]]:
        return [c for c in self.chords if i in (c[0], c[1])]

    def __repr__(self):
        return f"NormalizedForm(gamma={self.gamma}, chords={self.chord_positions()})"


def _check_p_hamiltonian(g: Graph, delta: Cycle):
    p = g.is_regular()
    if p is None:
        raise GraphError("graph is not regular")
    if any(g.is_loop(e) for e in g.edges):
        raise GraphError("graph has loops; not p-hamiltonian")
    if delta.length != len(g.vertices):
        raise GraphError("the given cycle is not hamiltonian")
    return p


def normalize(g: Graph, delta: Cycle | None = None) -> NormalizedForm:
    """Normalized form with a deterministic compatible labeling.

    Among the 2*gamma compatible labelings of the chosen hamiltonian cycle,
    the one minimizing the sorted chord position list (then the vertex id
    sequence) is used, so equal inputs yield identical forms.
    """
    if delta is None:
        delta = longest_cycle(g)
        if delta is None or delta.length != len(g.vertices):
            raise GraphError("graph is not hamiltonian")
    _check_p_hamiltonian(g, delta)

    gamma = delta.length
    vs, es = delta.vertices, delta.edge_keys
    best = None
    for direction in (1, -1):
        for r in range(gamma):
            if direction == 1:
                order = vs[r:] + vs[:r]
                edges = es[r:] + es[:r]
            else:
                # reversed traversal: v_r, v_{r-1}, ...; e_i precedes v_i
                order = tuple(vs[(r - t) % gamma] for t in range(gamma))
                edges = tuple(es[(r - 1 - t) % gamma] for t in range(gamma))
            nf = NormalizedForm(g, order, edges)
            key = (nf.chord_positions(), order)
            if best is None or key < best[0]:
                best = (key, nf)
    return best[1]


def amplitude(nf: NormalizedForm, chord: tuple[int, int]) -> int:
    """Shorter cycle-distance between the chord endpoints."""
    i, j = chord[0], chord[1]
    if not 1 <= i < j <= nf.gamma:
        raise GraphError(f"bad chord positions {chord}")
    return min(j - i, nf.gamma - j + i)


def is_short(nf: NormalizedForm, chord: tuple[int, int]) -> bool:
    return amplitude(nf, chord) <= nf.gamma // 2 - 1


def short_arc(nf: NormalizedForm, chord: tuple[int, int]) -> tuple[int, ...]:
    """Positions on the strictly shorter side of a chord, endpoints included.

    Defined whenever the two sides have different lengths (always, except
    for maximal-amplitude chords on an even cycle).
    """
    i, j = chord[0], chord[1]
    if 2 * amplitude(nf, chord) == nf.gamma:
        raise GraphError(f"chord {chord} has two sides of equal length")
    if j - i < nf.gamma - j + i:
        return tuple(range(i, j + 1))
    return tuple(range(j, nf.gamma + 1)) + tuple(range(1, i + 1))


def epsilon(nf: NormalizedForm) -> int:
    """Sum over chords of floor(gamma/2) minus amplitude; zero iff no short
    chord, iff the graph is the p-polygon."""
    half = nf.gamma // 2
    return sum(half - amplitude(nf, (i, j)) for i, j, _ in nf.chords)


def find_partner_short_chord(nf: NormalizedForm, chord) -> tuple[int, int, int]:
    """A partner chord not crossing the given short one, with disjoint
    shorter sides.  Deterministic: smallest (k, l, key) among the partners.

    A short partner always exists when the cycle length is even.  When it is
    odd, the guaranteed partner may instead have maximal amplitude
    floor(gamma/2) (its near side still strictly the shorter one); short
    partners are preferred when present.
    """
    i, j = chord[0], chord[1]
    if not is_short(nf, (i, j)):
        raise GraphError(f"chord {chord} is not short")
    mine = [c for c in nf.chords if (c[0], c[1]) == (i, j)]
    if not mine:
        raise GraphError(f"no chord at {chord}")
    key = chord[2] if len(chord) > 2 else mine[0][2]
    arc = set(short_arc(nf, (i, j)))
    fallback = None
    for k, l, ckey in nf.chords:
        if ckey == key or 2 * amplitude(nf, (k, l)) >= nf.gamma:
            continue
        if arc & set(short_arc(nf, (k, l))):
            continue
        if is_short(nf, (k, l)):
            return (k, l, ckey)
        if fallback is None:
            fallback = (k, l, ckey)
    if fallback is not None:
        return fallback
    raise InternalConsistencyError(
        f"no partner chord for {chord} in {nf!r}"
    )


def build_polygon(p: int, gamma: int) -> Graph:
    """The p-polygon: gamma-cycle whose chords all have maximal amplitude.

    gamma even: p-2 parallel chords on each antipodal vertex pair.
    gamma odd (needs p even): (p-2)/2 chords from each vertex to each of the
    two almost-antipodal vertices.
    """
    if p < 3:
        raise GraphError("p must be >= 3")
    if gamma < 2:
        raise GraphError("gamma must be >= 2")
    if gamma % 2 == 1 and p % 2 == 1:
        raise GraphError("an odd cycle length requires even p")

    edges = [(i, (i + 1) % gamma) for i in range(gamma)]
    if gamma % 2 == 0:
        half = gamma // 2
        for i in range(half):
            edges.extend([(i, i + half)] * (p - 2))
    else:
        step = (gamma - 1) // 2
        r = (p - 2) // 2
        for i in range(gamma):
            edges.extend([(i, (i + step) % gamma)] * r)
    g = build_graph(edges)
    if not is_p_regular(g, p):
        raise InternalConsistencyError("polygon construction is not p-regular")
    return g
