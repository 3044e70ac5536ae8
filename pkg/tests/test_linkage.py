import itertools
import random

import pytest

from tropilink.canonical import are_isomorphic
from tropilink.certificates import (LinkageCertificate, StrongLinkFailure,
                                    StrongLinkStep, strong_link_check,
                                    verify_certificate)
from tropilink.connectivity import edge_connectivity_capped, is_hamiltonian
from tropilink.graphs import (GraphError, build_graph, dumbbell_graph,
                              k4_graph, petersen_graph, theta_graph)
from tropilink.hamiltonize import hamiltonize
from tropilink.linkage import (_apply_claim_3ec, _apply_claim_plain, _Ring,
                               _select_claim_pair, factor_twist, link,
                               reduce_to_polygon, twist, twist_3ec)
from tropilink.normal_form import NormalizedForm, build_polygon, epsilon, normalize

from test_normal_form import nf_with_chords, p_hamiltonian_classes


# -- twist ---------------------------------------------------------------------


def chord_multiset(ring, g):
    return sorted((i, j) for i, j, _ in ring.chords(g))


def test_twist_k4():
    nf = normalize(k4_graph())
    out = twist(nf, (1, 3), (2, 4), swap=(3, 4))
    nf2 = NormalizedForm(out, nf.order, nf.cycle_edges)
    assert nf2.chord_positions() == [(1, 4), (2, 3)]


def test_twist_schematic_pattern():
    # (d_{1,j}, d_{k,l}) into (d_{1,k}, d_{j,l})
    nf = nf_with_chords(8, [(1, 3), (4, 6), (2, 7), (5, 8)])
    out = twist(nf, (1, 3), (4, 6), swap=(3, 4))
    nf2 = NormalizedForm(out, nf.order, nf.cycle_edges)
    assert (1, 4) in nf2.chord_positions()
    assert (3, 6) in nf2.chord_positions()


def test_twist_is_involution():
    nf = normalize(k4_graph())
    out = twist(nf, (1, 3), (2, 4), swap=(3, 4))
    nf2 = NormalizedForm(out, nf.order, nf.cycle_edges)
    back = twist(nf2, (1, 4), (2, 3), swap=(4, 3))
    assert back == nf.base


def test_twist_rejects_loops():
    nf = nf_with_chords(6, [(1, 3), (3, 5), (2, 6)])
    with pytest.raises(GraphError):
        twist(nf, (1, 3), (3, 5), swap=(3, 5))  # would close (3, 3)


# -- strong links --------------------------------------------------------------


def test_strong_link_fig1_pattern():
    p = petersen_graph()
    h, steps = hamiltonize(p)
    step = steps[0]
    redo = strong_link_check(step.left, step.left_edge, step.right,
                             step.right_edge)
    assert isinstance(redo, StrongLinkStep)
    assert is_hamiltonian(step.right)


def test_strong_link_self():
    k = k4_graph()
    s = strong_link_check(k, k.edges[0], k, k.edges[0])
    assert isinstance(s, StrongLinkStep)


def test_strong_link_theta_dumbbell():
    t, d = theta_graph(), dumbbell_graph()
    bridge = next(e for e in d.edges if not d.is_loop(e))
    s = strong_link_check(t, t.edges[0], d, bridge)
    assert isinstance(s, StrongLinkStep)


def test_strong_link_failure_kinds():
    t, k = theta_graph(), k4_graph()
    r = strong_link_check(t, t.edges[0], k, k.edges[0])
    assert isinstance(r, StrongLinkFailure) and r.kind == "not_isomorphic"

    # both contract to the doubled path, but the merged vertex sits at the
    # middle on one side and at an end on the other
    g1 = build_graph([(0, 1), (0, 1), (1, 2), (2, 3), (2, 3)])
    g2 = build_graph([(0, 1), (1, 2), (1, 2), (2, 3), (2, 3)])
    e1 = next(e for e in g1.edges if g1.edge_ends(e) == (1, 2))
    e2 = next(e for e in g2.edges if g2.edge_ends(e) == (0, 1))
    r2 = strong_link_check(g1, e1, g2, e2)
    assert isinstance(r2, StrongLinkFailure) and r2.kind == "no_marked_witness"

    with pytest.raises(GraphError):
        d = dumbbell_graph()
        loop = next(e for e in d.edges if d.is_loop(e))
        strong_link_check(d, loop, d, loop)


# -- factoring -----------------------------------------------------------------


def _steps_cert(first, steps, mode="plain", p=3):
    return LinkageCertificate([first] + [s.right for s in steps], steps, mode, p)


def test_factor_consecutive_is_single_step():
    nf = nf_with_chords(6, [(1, 2), (3, 4), (5, 6)])
    steps = factor_twist(nf, (1, 2), (3, 4), swap=(2, 3))
    assert len(steps) == 1
    assert verify_certificate(_steps_cert(nf.base, steps)).valid


def test_factor_distance_two_gives_three_steps():
    nf = nf_with_chords(8, [(1, 2), (4, 5), (3, 7), (6, 8)])
    steps = factor_twist(nf, (1, 2), (4, 5), swap=(2, 4))
    assert len(steps) == 3
    assert verify_certificate(_steps_cert(nf.base, steps)).valid
    end = steps[-1].right
    want = twist(nf, (1, 2), (4, 5), swap=(2, 4))
    assert are_isomorphic(end, want)


def test_factor_matches_twist_on_random_claim_pairs(rng):
    cases = 0
    for g in p_hamiltonian_classes(3, 4):
        nf = normalize(g)
        ring = _Ring(nf.order, nf.cycle_edges)
        sel = _select_claim_pair(nf.gamma, nf.chords)
        if sel is None:
            continue
        cases += 1
        cur, steps = _apply_claim_plain(ring, nf.base, sel)
        assert len(steps) == 2 * (sel.k - sel.j) - 1
        assert verify_certificate(_steps_cert(nf.base, steps)).valid
    assert cases > 0


# -- the 3ec twist -------------------------------------------------------------


def test_twist_3ec_case_a_cycles():
    # chord_b starts at j+1 and does not cross chord_a
    nf = nf_with_chords(8, [(1, 4), (5, 8), (2, 6), (3, 7)])
    assert edge_connectivity_capped(nf.base) == 3
    ka = next(k for i, j, k in nf.chords if (i, j) == (1, 4))
    kb = next(k for i, j, k in nf.chords if (i, j) == (5, 8))
    g2, step = twist_3ec(nf, (1, 4), (5, 8))
    assert edge_connectivity_capped(g2) == 3
    cyc1, cyc2 = step.cert_cycles
    assert list(cyc1) == [nf.cycle_edge(4), ka] + \
        [nf.cycle_edge(t) for t in (1, 2, 3)]
    assert list(cyc2) == [nf.cycle_edge(t) for t in (4, 5, 6, 7)] + [kb]
    assert set(cyc1) & set(cyc2) == {nf.cycle_edge(4)}
    assert verify_certificate(_steps_cert(nf.base, [step])).valid
    nf2 = NormalizedForm(g2, nf.order, nf.cycle_edges)
    assert (1, 5) in nf2.chord_positions()
    assert (4, 8) in nf2.chord_positions()


def test_twist_3ec_case_b():
    # chord_b = d_{3,6} crosses chord_a = d_{1,5}; d_{4,8} witnesses case (b)
    nf2 = nf_with_chords(8, [(1, 5), (3, 6), (4, 8), (2, 7)])
    assert edge_connectivity_capped(nf2.base) == 3
    ka = next(k for i, j, k in nf2.chords if (i, j) == (1, 5))
    kb = next(k for i, j, k in nf2.chords if (i, j) == (3, 6))
    kw = next(k for i, j, k in nf2.chords if (i, j) == (4, 8))
    g2, step = twist_3ec(nf2, (1, 5), (3, 6))
    cyc1, cyc2 = step.cert_cycles
    assert list(cyc1) == [nf2.cycle_edge(5), ka, nf2.cycle_edge(1),
                          nf2.cycle_edge(2), kb]
    assert list(cyc2) == [nf2.cycle_edge(5), nf2.cycle_edge(6),
                          nf2.cycle_edge(7), kw, nf2.cycle_edge(4)]
    assert edge_connectivity_capped(g2) == 3
    assert verify_certificate(_steps_cert(nf2.base, [step])).valid


def test_twist_3ec_rejects_when_no_case_applies():
    nf = nf_with_chords(6, [(1, 4), (2, 5), (3, 6)])
    with pytest.raises(GraphError):
        twist_3ec(nf, (1, 4), (3, 6))  # second chord not at j+1


def test_twist_3ec_preserves_3ec_exhaustively():
    checked = 0
    for b in (3, 4):
        for g in p_hamiltonian_classes(3, b):
            if edge_connectivity_capped(g) != 3:
                continue
            nf = normalize(g)
            for i, j, key in nf.chords:
                for c2 in nf.chords_at(j + 1):
                    if c2[2] == key:
                        continue
                    try:
                        g2, step = twist_3ec(nf, (i, j, key), c2)
                    except GraphError:
                        continue
                    checked += 1
                    assert edge_connectivity_capped(g2) == 3
    assert checked > 0


# -- descent -------------------------------------------------------------------


def test_reduce_polygon_is_empty():
    for p, gamma in [(3, 4), (3, 6), (4, 6)]:
        cert = reduce_to_polygon(build_polygon(p, gamma))
        assert cert.steps == []
        assert verify_certificate(cert).valid


def test_reduce_exhaustive_3_3_plain_and_3ec():
    poly = build_polygon(3, 4)
    for g in p_hamiltonian_classes(3, 3):
        trace = []
        cert = reduce_to_polygon(g, epsilon_trace=trace)
        assert are_isomorphic(cert.graphs[-1], poly)
        assert verify_certificate(cert, endpoints=(g, poly)).valid
        assert all(b - a <= -1 for a, b in zip(trace, trace[1:]))
        if edge_connectivity_capped(g) == 3:
            cert3 = reduce_to_polygon(g, "3ec")
            rep = verify_certificate(cert3, endpoints=(g, poly))
            assert rep.valid
            for gr in cert3.graphs:
                assert edge_connectivity_capped(gr) == 3


def test_claim_decrease_at_least_two():
    for b in (3, 4):
        for g in p_hamiltonian_classes(3, b):
            trace = []
            reduce_to_polygon(g, epsilon_trace=trace)
            assert all(b2 - a2 <= -2 for a2, b2 in zip(trace, trace[1:]))


def test_schedules_compose_to_claim_twist():
    for g in p_hamiltonian_classes(3, 4):
        if edge_connectivity_capped(g) != 3:
            continue
        nf = normalize(g)
        ring = _Ring(nf.order, nf.cycle_edges)
        sel = _select_claim_pair(nf.gamma, nf.chords)
        if sel is None:
            continue
        plain_end, _ = _apply_claim_plain(ring, nf.base, sel)
        sched_end, _ = _apply_claim_3ec(ring, nf.base, sel)
        assert chord_multiset(ring, plain_end) == chord_multiset(ring, sched_end)
        assert are_isomorphic(plain_end, sched_end)


# -- full linkage --------------------------------------------------------------


def test_link_theta_dumbbell():
    t, d = theta_graph(), dumbbell_graph()
    cert = link(t, d)
    assert cert.steps
    assert verify_certificate(cert, endpoints=(t, d)).valid


def test_link_petersen_polygon_3ec():
    p = petersen_graph()
    poly = build_polygon(3, 10)
    cert = link(p, poly, "3ec")
    rep = verify_certificate(cert, p=3, mode="3ec", endpoints=(p, poly))
    assert rep.valid
    # first step realizes the Petersen-to-hamiltonian strong link
    first = cert.steps[0]
    assert first.left == p
    assert is_hamiltonian(first.right)


def test_link_identity():
    k = k4_graph()
    cert = link(k, k)
    assert cert.steps == []
    assert verify_certificate(cert, endpoints=(k, k)).valid


def test_link_rejects_mismatches():
    with pytest.raises(GraphError):
        link(theta_graph(), k4_graph())  # different genus
    with pytest.raises(GraphError):
        link(theta_graph(), build_graph([(0, 1), (0, 1), (0, 1), (0, 1)]))
    with pytest.raises(GraphError):
        link(dumbbell_graph(), theta_graph(), "3ec")  # dumbbell has a bridge


def test_link_symmetric_and_reversal_valid():
    t, d = theta_graph(), dumbbell_graph()
    cert = link(t, d)
    rev = cert.reversed()
    assert verify_certificate(rev, endpoints=(d, t)).valid


def test_chain_counts_constant():
    cert = link(petersen_graph(), build_polygon(3, 10), "3ec")
    counts = {(len(g.vertices), len(g.edges)) for g in cert.graphs}
    assert len(counts) == 1


# -- verifier hardening ---------------------------------------------------------


def test_empty_certificate_on_isomorphic_endpoints():
    k = k4_graph()
    cert = LinkageCertificate([k], [], "plain", 3)
    assert verify_certificate(cert, endpoints=(k, build_polygon(3, 4))).valid


def test_verifier_rejects_wrong_endpoints():
    k = k4_graph()
    cert = LinkageCertificate([k], [], "plain", 3)
    rep = verify_certificate(cert, endpoints=(k, theta_graph()))
    assert not rep.valid
    assert rep.first_violation[1] == "endpoint"


def test_witness_corruption_detected_and_located():
    t, d = theta_graph(), dumbbell_graph()
    cert = link(t, d)
    target = 1 if len(cert.steps) > 1 else 0
    step = cert.steps[target]
    av, ae, al = step.witness
    bad_av = dict(av)
    key = sorted(bad_av)[0]
    others = [v for v in bad_av.values() if v != bad_av[key]]
    bad_av[key] = others[0] if others else bad_av[key] + 1
    step.witness = (bad_av, ae, al)
    rep = verify_certificate(cert)
    assert not rep.valid
    assert rep.first_violation[0] == target


def test_factor_matches_twist_on_random_configs(rng):
    # random supported endpoint swaps across the (3,4) hamiltonian classes
    done = 0
    for g in p_hamiltonian_classes(3, 4):
        nf = normalize(g)
        chords = list(nf.chords)
        for (c1, c2) in itertools.combinations(chords, 2):
            for pa in (c1[0], c1[1]):
                for pb in (c2[0], c2[1]):
                    keep_a = c1[0] + c1[1] - pa
                    keep_b = c2[0] + c2[1] - pb
                    if keep_a == pb or keep_b == pa or pa == pb:
                        continue
                    try:
                        steps = factor_twist(nf, c1, c2, swap=(pa, pb))
                    except GraphError:
                        continue  # blocked in both directions: out of scope
                    done += 1
                    want = twist(nf, c1, c2, swap=(pa, pb))
                    assert are_isomorphic(steps[-1].right, want)
                    assert verify_certificate(
                        _steps_cert(nf.base, steps)).valid
    assert done > 20


def _claim_sel(nf, pair1, pair2, j, k, l):
    from tropilink.linkage import _ClaimSelection

    key1 = next(key for i, jj, key in nf.chords if (i, jj) == pair1)
    key2 = next(key for i, jj, key in nf.chords if (i, jj) == pair2)
    return _ClaimSelection(j, k, l, 1, 1, key1, key2)


def _run_schedules(nf, sel):
    ring = _Ring(nf.order, nf.cycle_edges)
    plain_end, _ = _apply_claim_plain(ring, nf.base, sel)
    end, steps = _apply_claim_3ec(ring, nf.base, sel)
    cert = _steps_cert(nf.base, steps, "3ec", p=nf.base.is_regular())
    assert verify_certificate(cert, mode="3ec").valid
    assert chord_multiset(ring, end) == chord_multiset(ring, plain_end)
    return end, steps


def test_schedule_ii_mid_ending_at_k():
    # 4-regular: the interior mid chord (3,4) ends exactly at k = 4
    nf = nf_with_chords(8, [(1, 2), (4, 6), (3, 4), (3, 7), (1, 5), (2, 8),
                            (5, 8), (6, 7)])
    assert edge_connectivity_capped(nf.base) == 3
    sel = _claim_sel(nf, (1, 2), (4, 6), j=2, k=4, l=6)
    end, steps = _run_schedules(nf, sel)
    assert len(steps) == 2 * (4 - 2) - 1


def test_schedule_ii_mid_between_k_and_l():
    # the interior mid chord (3,5) has k < 5 < l
    nf = nf_with_chords(8, [(1, 2), (4, 6), (3, 5), (3, 7), (1, 8), (5, 8),
                            (2, 6), (4, 7)])
    assert edge_connectivity_capped(nf.base) == 3
    sel = _claim_sel(nf, (1, 2), (4, 6), j=2, k=4, l=6)
    _run_schedules(nf, sel)


def test_descent_with_single_short_chord_odd_gamma():
    # at odd gamma the defect can be positive with only one short chord; the
    # selected partner then has maximal amplitude and the defect drops by 1
    nf = nf_with_chords(5, [(1, 3), (1, 3), (1, 3), (1, 4), (2, 4), (2, 4),
                            (2, 5), (2, 5), (3, 5), (4, 5)])
    g = nf.base
    assert g.is_regular() == 6
    assert epsilon(nf) == 1
    trace = []
    cert = reduce_to_polygon(g, epsilon_trace=trace)
    assert trace == [1, 0]
    assert verify_certificate(cert).valid
    assert are_isomorphic(cert.graphs[-1], build_polygon(6, 5))
    cert3 = reduce_to_polygon(g, "3ec")
    assert verify_certificate(cert3, mode="3ec").valid


def test_partner_fallback_at_odd_gamma():
    from tropilink.normal_form import find_partner_short_chord, amplitude

    nf = nf_with_chords(5, [(1, 3), (1, 3), (1, 3), (1, 4), (2, 4), (2, 4),
                            (2, 5), (2, 5), (3, 5), (4, 5)])
    k, l, _ = find_partner_short_chord(nf, (4, 5))
    assert amplitude(nf, (k, l)) == nf.gamma // 2  # no short partner exists
    assert l - k == amplitude(nf, (k, l))          # near side is the short one
