"""Detector error model of an X-basis memory experiment under EM3 noise.

Mechanisms are derived by pushing every EM3 outcome (two-qubit Pauli plus an
optional outcome flip) through the measurement schedule in lifted,
vortex-free coordinates and recording which X detection cells change parity.
The vortex enters only through the torus identification ``L1, L2`` and
through the actual-time window that decides which measurements are noisy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import InvalidEmbedding, InvalidProbability, UndecomposableHyperedge
from .lattice import (
    PERIOD,
    Embedding,
    FundamentalDomain,
    SpacetimeVec,
    bond_center2,
    bond_color,
    bond_qubits,
    bond_step,
    check_vortex_constraints,
    color_of,
    plaquette_bonds,
    qubit_plaquettes,
    vortex_delay,
)
from .metric import edge_class

PAULIS = "IXYZ"
GRAPHLIKE = ("E1", "E2", "E3")


def _cells_for_color(c: int) -> tuple[int, int, int, int]:
    """Detection cell of an X plaquette stabiliser of colour ``c``.

    Returns ``(start_step, start_color, end_step, end_color)``: the stabiliser
    is inferred from X checks of the two other colours on its boundary and
    randomised by Z checks of its own colour; a cell joins two consecutive
    inferences with no randomisation between them.
    """
    events = []
    for s in range(2 * PERIOD):
        for col in range(3):
            if s % PERIOD == bond_step(col, "X") and col != c:
                events.append((s, "infer", col))
            if s % PERIOD == bond_step(col, "Z") and col == c:
                events.append((s, "random", col))
    for (s0, k0, c0), (s1, k1, c1) in zip(events, events[1:]):
        if k0 == "infer" and k1 == "infer":
            return s0, c0, s1, c1
    raise AssertionError("no detection cell")


CELLS = tuple(_cells_for_color(c) for c in range(3))


def detector_time(i: int, j: int, cycle: int) -> int:
    s0, _, s1, _ = CELLS[color_of(i, j)]
    return (s0 + s1) // 2 + PERIOD * cycle


def _cell_measurements(i: int, j: int, cycle: int):
    """The six X measurements ``(bond, lifted time)`` making up a detector."""
    s0, c0, s1, c1 = CELLS[color_of(i, j)]
    out = []
    for b in plaquette_bonds(i, j):
        col = bond_color(*b)
        if col == c0:
            out.append((b, s0 + PERIOD * cycle))
        elif col == c1:
            out.append((b, s1 + PERIOD * cycle))
    assert len(out) == 6
    return out


class OutcomeClass(NamedTuple):
    weight: Fraction  # probability in units of p
    detectors: tuple  # lifted detector points, sorted
    category: str  # trivial, E1, E2, E3 or hyperedge


def _categorize(points) -> str:
    if not points:
        return "trivial"
    if len(points) == 2:
        cls = edge_class(SpacetimeVec(*points[1]) - points[0])
        if cls is None:
            raise AssertionError(f"unexpected two-detector displacement {points}")
        return cls
    if len(points) == 4:
        return "hyperedge"
    raise AssertionError(f"unexpected detector set {points}")


def _propagate(bond, basis: str, time: int, paulis: str, flip: int):
    """Lifted X detectors flipped by one EM3 outcome on the measurement of
    ``bond`` in ``basis`` at lifted ``time``."""
    q1, q2 = bond_qubits(*bond)
    zq = {q1: paulis[0] in "ZY", q2: paulis[1] in "ZY"}

    def flipped(b, t):
        # Z components act before the measurement at ``time`` and flip every
        # later X check on the same qubit
        par = 0
        if t >= time:
            for q in bond_qubits(*b):
                par ^= zq.get(q, False)
        if flip and basis == "X" and b == bond and t == time:
            par ^= 1
        return par

    k0 = time // PERIOD
    hits = set()
    for p in set(qubit_plaquettes(*q1)) | set(qubit_plaquettes(*q2)):
        for cyc in range(k0 - 2, k0 + 3):
            par = 0
            for b, t in _cell_measurements(p[0], p[1], cyc):
                par ^= flipped(b, t)
            if par:
                hits.add(SpacetimeVec(p[0], p[1], detector_time(p[0], p[1], cyc)))
    return tuple(sorted(hits))


@lru_cache(maxsize=None)
def _classify_at_origin(d: int, color0: int, basis: str):
    # representative bond whose base plaquette has colour ``color0``
    base = (0, color0, d)
    step = bond_step(bond_color(*base), basis)
    groups: dict[tuple, Fraction] = {}
    for p1, p2, f in product(PAULIS, PAULIS, (0, 1)):
        pts = _propagate(base, basis, step, p1 + p2, f)
        rel = tuple(SpacetimeVec(i, j - color0, t) for (i, j, t) in pts)
        groups[rel] = groups.get(rel, Fraction(0)) + Fraction(1, 32)
    return tuple(OutcomeClass(w, pts, _categorize(pts)) for pts, w in sorted(groups.items()))


def classify_em3(bond, basis: str, cycle: int = 0) -> list[OutcomeClass]:
    """All 32 equiprobable EM3 outcomes of one noisy measurement, grouped by
    the X detectors they flip.

    ``bond`` is a lifted bond ``(i, j, d)`` and ``cycle`` the period index of
    the measurement; weights are fractions of ``p`` and sum to 1.
    """
    i, j, d = bond
    c0 = color_of(i, j)
    shift = SpacetimeVec(i, j, PERIOD * cycle)
    return [
        OutcomeClass(oc.weight, tuple(pt + shift for pt in oc.detectors), oc.category)
        for oc in _classify_at_origin(d, c0, basis)
    ]


# ---------------------------------------------------------------------------
# finite quotient graph


@dataclass
class Mechanism:
    probability: float
    detectors: tuple[int, ...]
    logical: int  # bit 0: observable 1, bit 1: observable 2
    category: str

    @property
    def logical_flip(self) -> tuple[int, int]:
        return self.logical & 1, self.logical >> 1


def combine(q1: float, q2: float) -> float:
    """Probability that exactly one of two independent events happens."""
    return q1 * (1 - q2) + q2 * (1 - q1)


def edge_weight(q: float) -> float:
    return math.log((1 - q) / q)


@dataclass
class DetectorGraph:
    embedding: Embedding | None
    rounds: int
    p: float
    detector_coords: np.ndarray  # (V, 3): canonical lifted (i, j, t)
    mechanisms: list[Mechanism]
    edges: dict = field(default_factory=dict)  # (u, v, logical) -> q, u < v
    decomposed: bool = False

    @property
    def num_detectors(self) -> int:
        return len(self.detector_coords)

    def same_model(self, other: "DetectorGraph") -> bool:
        if not np.array_equal(self.detector_coords, other.detector_coords):
            return False
        a = [(m.probability, m.detectors, m.logical) for m in self.mechanisms]
        b = [(m.probability, m.detectors, m.logical) for m in other.mechanisms]
        return a == b

    def incidence(self):
        """CSR arrays ``(indptr, indices)`` of mechanism -> detectors."""
        indptr = np.zeros(len(self.mechanisms) + 1, dtype=np.int64)
        for k, m in enumerate(self.mechanisms):
            indptr[k + 1] = indptr[k] + len(m.detectors)
        indices = np.fromiter((d for m in self.mechanisms for d in m.detectors),
                              dtype=np.int64, count=int(indptr[-1]))
        return indptr, indices

    def probabilities(self) -> np.ndarray:
        return np.array([m.probability for m in self.mechanisms], dtype=np.float64)

    def logicals(self) -> np.ndarray:
        return np.array([m.logical for m in self.mechanisms], dtype=np.int64)


def logical_label(dom: FundamentalDomain, points) -> int:
    """Homology label of a set of lifted detector points (even size).

    Bit ``k`` is the parity of the sum of integer parts of the ``L_{k+1}``
    coordinates of the points. For an edge this counts crossings of the
    cuts between copies of the fundamental cell, so a closed lifted path
    winding ``(m1, m2)`` gets ``(m1 mod 2, m2 mod 2)``.
    """
    f1 = f2 = 0
    for (i, j, _t) in points:
        a, b = dom.winding_floor(i, j)
        f1 += a
        f2 += b
    return (f1 & 1) | ((f2 & 1) << 1)


def noisy_cycles(emb: Embedding, bond, basis: str, rounds: int) -> range:
    """Lifted cycle indices of the measurements of ``bond`` falling in the
    noisy actual-time window ``[0, 6 * rounds)``."""
    i, j, d = bond
    step = bond_step(bond_color(i, j, d), basis)
    delay = vortex_delay(emb, *bond_center2(i, j, d))
    # smallest k with step + 6k + delay >= 0
    k_lo = math.ceil((-(step + delay)) / PERIOD)
    return range(k_lo, k_lo + rounds)


_CAT_RANK = {"E1": 0, "E2": 1, "E3": 2, "hyperedge": 3, "trivial": 4}


def build_memory_experiment(emb: Embedding, rounds: int, p: float) -> DetectorGraph:
    """Detector error model of ``rounds`` noisy periods on the torus ``emb``.

    Initialisation and readout are noiseless, so every detector touched by a
    noisy measurement is a genuine detector and no boundary node is needed.
    Outcomes of one measurement with the same detector set and label are
    mutually exclusive and their probabilities add; identical mechanisms from
    different measurements combine as independent events.
    """
    if not check_vortex_constraints(emb):
        raise InvalidEmbedding(f"{emb.label()} violates the vortex order constraints")
    if not (0 <= p < 0.5):
        raise InvalidProbability(f"p={p} outside [0, 1/2)")
    if rounds < 0:
        raise InvalidEmbedding("rounds must be non-negative")
    dom = FundamentalDomain(emb)
    det_index: dict[tuple, int] = {}
    agg: dict[tuple, list] = {}  # (det keys, label) -> [q, category]

    for (i, j) in dom.points():
        for d in range(3):
            for basis in ("X", "Z"):
                for cyc in noisy_cycles(emb, (i, j, d), basis, rounds):
                    local: dict[tuple, list] = {}
                    for oc in classify_em3((i, j, d), basis, cyc):
                        keys = set()
                        for pt in oc.detectors:
                            key = dom.reduce_point(*pt)
                            keys ^= {key}
                        label = logical_label(dom, oc.detectors)
                        if not keys and not label:
                            continue
                        k = (tuple(sorted(keys)), label)
                        ent = local.setdefault(k, [Fraction(0), oc.category])
                        ent[0] += oc.weight
                        if _CAT_RANK[oc.category] < _CAT_RANK[ent[1]]:
                            ent[1] = oc.category
                    for k, (w, cat) in local.items():
                        q = float(w) * p
                        if k in agg:
                            agg[k][0] = combine(agg[k][0], q)
                            if _CAT_RANK[cat] < _CAT_RANK[agg[k][1]]:
                                agg[k][1] = cat
                        else:
                            agg[k] = [q, cat]
                        for key in k[0]:
                            det_index.setdefault(key, -1)

    ordered = sorted(det_index, key=lambda key: (key[2], dom.index(key[0], key[1])))
    det_index = {key: n for n, key in enumerate(ordered)}
    coords = np.array(ordered, dtype=np.int64).reshape(-1, 3)
    mechs = []
    for (keys, label), (q, cat) in agg.items():
        dets = tuple(sorted(det_index[key] for key in keys))
        mechs.append(Mechanism(q, dets, label, cat))
    mechs.sort(key=lambda m: (m.detectors, m.logical))
    g = DetectorGraph(emb, rounds, p, coords, mechs)
    g.edges = graphlike_edges(g)
    return g


def graphlike_edges(g: DetectorGraph) -> dict:
    edges = {}
    for m in g.mechanisms:
        if len(m.detectors) == 2:
            key = (m.detectors[0], m.detectors[1], m.logical)
            edges[key] = combine(edges.get(key, 0.0), m.probability)
    return edges


def decompose_hyperedges(g: DetectorGraph) -> DetectorGraph:
    """Decoding graph in which every 4-detector mechanism is split into two
    existing edges covering its detectors with labels adding up to its label.

    Among valid splits the one of least total weight is chosen. Sampling is
    unaffected: ``mechanisms`` is shared with the input graph.
    """
    base = graphlike_edges(g)
    by_pair: dict[tuple, list] = {}
    for (u, v, lab), q in base.items():
        by_pair.setdefault((u, v), []).append((lab, q))
    edges = dict(base)
    for m in g.mechanisms:
        if len(m.detectors) != 4:
            continue
        a, b, c, d = m.detectors
        best = None
        for (x, y), (z, w) in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
            for lab1, q1 in by_pair.get((x, y), ()):
                for lab2, q2 in by_pair.get((z, w), ()):
                    if lab1 ^ lab2 != m.logical or q1 <= 0 or q2 <= 0:
                        continue
                    cost = edge_weight(min(q1, 0.5 - 1e-12)) + edge_weight(min(q2, 0.5 - 1e-12))
                    if best is None or cost < best[0] - 1e-12:
                        best = (cost, (x, y, lab1), (z, w, lab2))
        if best is None:
            if m.probability == 0:
                continue
            raise UndecomposableHyperedge(f"no covering edge pair for detectors {m.detectors}")
        for key in best[1:]:
            edges[key] = combine(edges[key], m.probability)
    out = DetectorGraph(g.embedding, g.rounds, g.p, g.detector_coords, g.mechanisms, edges, True)
    return out


# ---------------------------------------------------------------------------
# text format


def to_text(g: DetectorGraph) -> str:
    """Line-oriented export, one ``error(q) D.. [L0] [L1]`` line per mechanism."""
    lines = ["# timevortex detector error model v1"]
    if g.embedding is not None:
        lines.append("# embedding " + g.embedding.to_json())
    lines.append(f"# rounds {g.rounds}")
    lines.append(f"# p {g.p!r}")
    for n, (i, j, t) in enumerate(g.detector_coords.tolist()):
        lines.append(f"detector({i}, {j}, {t}) D{n}")
    for m in g.mechanisms:
        parts = [f"error({m.probability!r})"] + [f"D{d}" for d in m.detectors]
        if m.logical & 1:
            parts.append("L0")
        if m.logical & 2:
            parts.append("L1")
        lines.append(" ".join(parts) + f"  # {m.category}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> DetectorGraph:
    import json

    emb = None
    rounds = 0
    p = 0.0
    coords = []
    mechs = []
    for raw in text.splitlines():
        line, _, comment = raw.partition("#")
        line = line.strip()
        if not line:
            c = comment.strip()
            if c.startswith("embedding "):
                emb = Embedding.from_dict(json.loads(c[len("embedding "):]))
            elif c.startswith("rounds "):
                rounds = int(c.split()[1])
            elif c.startswith("p "):
                p = float(c.split()[1])
            continue
        if line.startswith("detector("):
            inside = line[len("detector("):line.index(")")]
            coords.append([int(x) for x in inside.split(",")])
        elif line.startswith("error("):
            q = float(line[len("error("):line.index(")")])
            dets = []
            lab = 0
            for tok in line[line.index(")") + 1:].split():
                if tok.startswith("D"):
                    dets.append(int(tok[1:]))
                elif tok == "L0":
                    lab |= 1
                elif tok == "L1":
                    lab |= 2
            mechs.append(Mechanism(q, tuple(dets), lab, comment.strip() or "unknown"))
        else:
            raise ValueError(f"cannot parse line: {raw!r}")
    g = DetectorGraph(emb, rounds, p, np.array(coords, dtype=np.int64).reshape(-1, 3), mechs)
    g.edges = graphlike_edges(g)
    return g
