from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from conftest import emb
from timevortex.dem import (
    CELLS, GRAPHLIKE, _propagate, build_memory_experiment, classify_em3, combine,
    decompose_hyperedges, edge_weight, from_text, logical_label, to_text,
)
from timevortex.errors import InvalidEmbedding, InvalidProbability
from timevortex.lattice import FundamentalDomain, bond_step, make_embedding
from timevortex.metric import EDGES18, edge_class

FREE42 = emb((4, 1, 0), (1, -5, 0))
VORT30 = emb((3, 0, -6), (1, -5, 0))
N6 = emb((1, 1, 0), (2, -1, 0))


def _in_lattice(e, w):
    det = e.L1[0] * e.L2[1] - e.L2[0] * e.L1[1]
    m1 = Fraction(w[0] * e.L2[1] - e.L2[0] * w[1], det)
    m2 = Fraction(e.L1[0] * w[1] - w[0] * e.L1[1], det)
    return m1.denominator == m2.denominator == 1 and m1 * e.L1[2] + m2 * e.L2[2] == w[2]


def _weights(classes):
    c = Counter()
    for oc in classes:
        c[oc.category] += oc.weight
    return c


@pytest.mark.parametrize("d", range(3))
@pytest.mark.parametrize("i,j", [(0, 0), (0, 1), (0, 2), (5, -3)])
def test_classification_weights(i, j, d):
    x = _weights(classify_em3((i, j, d), "X"))
    assert sum(x.values()) == 1
    assert x == {"trivial": Fraction(1, 8), "E1": Fraction(1, 8), "E2": Fraction(1, 2),
                 "E3": Fraction(1, 8), "hyperedge": Fraction(1, 8)}
    z = _weights(classify_em3((i, j, d), "Z"))
    assert z == {"trivial": Fraction(1, 2), "E2": Fraction(1, 2)}


def test_classification_named_outcomes():
    from timevortex.lattice import bond_color
    bond = (0, 1, 0)
    step = bond_step(bond_color(*bond), "X")
    assert _propagate(bond, "X", step, "II", 0) == ()
    zi = _propagate(bond, "X", step, "ZI", 0)
    assert len(zi) == 2 and edge_class(np_sub(zi)) == "E2"
    assert len(_propagate(bond, "X", step, "ZZ", 1)) == 4
    flip = _propagate(bond, "X", step, "II", 1)
    assert len(flip) == 2 and edge_class(np_sub(flip)) == "E1"
    zz = _propagate(bond, "X", step, "ZZ", 0)
    assert len(zz) == 2 and edge_class(np_sub(zz)) == "E3"
    # Y acts like Z on X detectors
    assert _propagate(bond, "X", step, "YI", 0) == zi


def np_sub(pts):
    a, b = pts
    return tuple(y - x for x, y in zip(a, b))


def test_pure_x_errors_are_invisible():
    from timevortex.lattice import bond_color
    for d in range(3):
        bond = (0, 0, d)
        for basis in "XZ":
            step = bond_step(bond_color(*bond), basis)
            for pa in ("XI", "IX", "XX"):
                assert _propagate(bond, basis, step, pa, 0) == ()


def test_cells_cover_all_colours():
    assert len(CELLS) == 3
    for s0, c0, s1, c1 in CELLS:
        assert s1 > s0 and c0 != c1


@pytest.mark.parametrize("e", [FREE42, VORT30], ids=["free42", "vort30"])
def test_mechanism_shapes(e):
    g = build_memory_experiment(e, 3, 0.01)
    dom = FundamentalDomain(e)
    for m in g.mechanisms:
        assert len(m.detectors) in (0, 2, 4)
        assert 0 < m.probability <= 0.5
        if m.category in GRAPHLIKE:
            assert len(m.detectors) == 2
        if len(m.detectors) == 4:
            assert m.category == "hyperedge"
    # every displacement between quotient detectors lifts to an edge of the lattice
    coords = g.detector_coords
    for m in g.mechanisms:
        if len(m.detectors) != 2:
            continue
        a, b = coords[m.detectors[0]], coords[m.detectors[1]]
        d = tuple(int(b[k] - a[k]) for k in range(3))
        assert any(_in_lattice(e, tuple(x - y for x, y in zip(d, E))) for E in EDGES18)


def test_bulk_degree_18():
    g = build_memory_experiment(FREE42, 5, 0.01)
    nbrs = {n: set() for n in range(g.num_detectors)}
    for m in g.mechanisms:
        if len(m.detectors) == 2:
            u, v = m.detectors
            nbrs[u].add((v, m.logical))
            nbrs[v].add((u, m.logical))
    t = g.detector_coords[:, 2]
    bulk = [n for n in range(g.num_detectors) if 12 <= t[n] < 18]
    assert bulk
    assert {len(nbrs[n]) for n in bulk} == {18}
    assert len(EDGES18) == 18


@pytest.mark.parametrize("rounds,count", [(1, 35), (2, 56), (3, 77)])
def test_detector_counts(rounds, count):
    # N/2 plaquettes per period plus boundary cells closed by the noiseless readout
    g = build_memory_experiment(FREE42, rounds, 0.01)
    assert g.num_detectors == count


def test_probability_conservation_single_event():
    # one noisy period on the N=6 torus: total mechanism mass equals p per measurement
    for basis in "XZ":
        for d in range(3):
            tot = sum(oc.weight for oc in classify_em3((0, 0, d), basis))
            assert tot == 1


def test_p_zero_and_rounds_zero():
    g = build_memory_experiment(FREE42, 2, 0.0)
    assert g.mechanisms and all(m.probability == 0 for m in g.mechanisms)
    g0 = build_memory_experiment(FREE42, 0, 0.01)
    assert g0.num_detectors == 0 and g0.mechanisms == []


def test_errors():
    with pytest.raises(InvalidProbability):
        build_memory_experiment(FREE42, 1, 0.5)
    with pytest.raises(InvalidProbability):
        build_memory_experiment(FREE42, 1, -0.1)
    with pytest.raises(InvalidEmbedding):
        build_memory_experiment(emb((1, 1, -30), (2, -1, 0)), 1, 0.01)


def test_logical_label_examples():
    dom = FundamentalDomain(FREE42)
    assert logical_label(dom, [(0, 0, 0), (1, 1, 0)]) in (0, 1, 2, 3)
    p = (0, 0, 0)
    L1 = FREE42.L1
    L2 = FREE42.L2
    assert logical_label(dom, [p, p]) == 0
    assert logical_label(dom, [p, L1]) == 1
    assert logical_label(dom, [p, L2]) == 2
    q = tuple(a + 2 * b for a, b in zip(L1, L2))
    assert logical_label(dom, [p, q]) == 1


def test_label_additivity_on_random_chains():
    dom = FundamentalDomain(VORT30)
    rng = np.random.default_rng(3)
    pts = [tuple(int(x) for x in rng.integers(-20, 20, 3)) for _ in range(40)]
    for a, b, c in zip(pts, pts[1:], pts[2:]):
        assert logical_label(dom, [a, c]) == logical_label(dom, [a, b]) ^ logical_label(dom, [b, c])


def test_shortest_cycle_vortexed_rounds3():
    from timevortex.cover import shortest_nontrivial_cycle
    g = build_memory_experiment(VORT30, 3, 0.01)
    eu, ev, el, loops = [], [], [], []
    for m in g.mechanisms:
        if m.category in GRAPHLIKE:
            if len(m.detectors) == 2:
                eu.append(m.detectors[0]); ev.append(m.detectors[1]); el.append(m.logical)
            elif not m.detectors:
                loops.append(m.logical)
    c = shortest_nontrivial_cycle(g.num_detectors, eu, ev, el, list(range(g.num_detectors)), loops)
    assert c == 3


def test_decomposition():
    g = build_memory_experiment(VORT30, 3, 0.01)
    dg = decompose_hyperedges(g)
    assert dg.decomposed and dg.mechanisms is g.mechanisms
    for (u, v, lab), q in dg.edges.items():
        assert u < v and 0 < q < 0.5
        assert 0 < edge_weight(q) < float("inf")
    hyper = [m for m in g.mechanisms if len(m.detectors) == 4]
    assert hyper
    total_g = sum(g.edges.values())
    total_d = sum(dg.edges.values())
    assert total_d > total_g
    # no hyperedges: nothing changes
    only = build_memory_experiment(VORT30, 3, 0.01)
    only.mechanisms = [m for m in only.mechanisms if len(m.detectors) != 4]
    assert decompose_hyperedges(only).edges == only.edges


def test_combine():
    assert combine(0.0, 0.3) == 0.3
    assert combine(0.5, 0.2) == pytest.approx(0.5)
    assert combine(0.1, 0.1) == pytest.approx(0.18)


def test_text_roundtrip_and_determinism():
    g = build_memory_experiment(VORT30, 2, 0.003)
    text = to_text(g)
    assert text == to_text(build_memory_experiment(VORT30, 2, 0.003))
    back = from_text(text)
    assert back.same_model(g)
    assert back.rounds == 2 and back.p == 0.003 and back.embedding == VORT30
    assert to_text(back) == text
    for line in text.splitlines():
        assert line.startswith(("#", "detector(", "error("))


def test_detector_order_sorted_by_time():
    g = build_memory_experiment(VORT30, 3, 0.01)
    t = g.detector_coords[:, 2]
    assert (np.diff(t) >= 0).all()


def test_n6_builds():
    g = build_memory_experiment(N6, 1, 0.01)
    assert g.num_detectors > 0
    assert any(m.logical for m in g.mechanisms)
    # with superlattice form the vortex delay is exactly zero here
    e = make_embedding(1, 0, 0, -1, 1, 0)
    assert e == N6
