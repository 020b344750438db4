"""Time vortices in simpler codes, plus the idle-noise tradeoff estimate.

Both distance functions build the quotient matching graph over a finite
window and search for the shortest closed walk with odd winding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .cover import NO_CYCLE, shortest_nontrivial_cycle
from .errors import InvalidParams, WindowTooShort


@dataclass(frozen=True)
class RepetitionSpec:
    qubits: int
    rounds: int
    vortices: int = 0

    def __post_init__(self):
        if self.qubits < 4 or self.qubits % 2:
            raise InvalidParams(f"ring size must be even and at least 4, got {self.qubits}")
        if self.rounds < 1:
            raise InvalidParams("rounds must be positive")
        if 2 * abs(self.vortices) >= self.qubits:
            raise InvalidParams("too many vortices: neighbouring checks would reorder")


@dataclass(frozen=True)
class ToricSpec:
    Lx: int
    Ly: int
    rounds: int
    vortices_x: int = 0

    def __post_init__(self):
        if self.Lx < 2 or self.Ly < 2:
            raise InvalidParams("torus dimensions must be at least 2")
        if self.rounds < 1:
            raise InvalidParams("rounds must be positive")


class _Graph:
    def __init__(self):
        self.ids: dict = {}
        self.eu: list[int] = []
        self.ev: list[int] = []
        self.el: list[int] = []
        self.loops: list[int] = []

    def node(self, key) -> int:
        return self.ids.setdefault(key, len(self.ids))

    def edge(self, keys, label: int):
        keys = [k for k in keys]
        # detectors flipped twice cancel
        odd = [k for k in set(keys) if keys.count(k) % 2]
        if len(odd) == 2:
            a, b = sorted(odd)
            self.eu.append(self.node(a))
            self.ev.append(self.node(b))
            self.el.append(label)
        elif not odd:
            self.loops.append(label)
        else:
            raise AssertionError(f"mechanism with detectors {odd}")

    def shortest(self) -> int:
        return shortest_nontrivial_cycle(len(self.ids), self.eu, self.ev, self.el,
                                         list(range(len(self.ids))), self.loops)


def repetition_graph(spec: RepetitionSpec) -> _Graph:
    """Matching graph of the ring repetition code with a brick-wall schedule.

    Check ``b`` measures ``Z_b Z_{b+1}``; even checks at step 0, odd at step 1
    of a period of 2, each delayed by ``2 n b / Q``. A detector ``(b, k)``
    compares the ``k``-th and ``(k-1)``-th outcomes of check ``b`` (index 0 is
    the noiseless initialisation). Noise: an outcome flip on each noisy
    measurement, and one bit flip per qubit per period placed after its
    odd-check measurement. Bit flips on qubit 0 cross the logical cut.
    """
    Q, n, R = spec.qubits, spec.vortices, spec.rounds
    T = 2

    def mtime(b, k):
        return T * k + (b % 2) + Fraction(T * n * b, Q)

    def k_first(b, t):
        # first measurement index of check b at actual time >= t
        return math.ceil((t - (b % 2) - Fraction(T * n * b, Q)) / T)

    end = T * R
    g = _Graph()
    for b in range(Q):
        k0 = k_first(b, 0)
        k = max(k0, 1)
        while mtime(b, k) < end:
            g.edge([(b, k), (b, k + 1)], 0)
            k += 1
    for i in range(Q):
        be, bo = (i - 1) % Q, i
        if be % 2:
            be, bo = bo, be
        # slot just after each odd-check measurement of qubit i
        k = k_first(bo, 0)
        while mtime(bo, k) < end:
            slot = mtime(bo, k)
            dets = [(bo, k + 1), (be, k_first(be, slot))]
            g.edge(dets, 1 if i == 0 else 0)
            k += 1
    return g


def repetition_distance(spec: RepetitionSpec) -> int:
    """Shortest odd-winding cycle of the repetition-code matching graph."""
    d = repetition_graph(spec).shortest()
    if d == NO_CYCLE:
        raise WindowTooShort(f"{spec.rounds} rounds contain no logical cycle")
    return d


# time displacement of each edge type as (dx, dy, dt)
_TORIC_BASIC = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
_TORIC_DIAG = ((1, 0, -1), (0, 1, -1), (1, 1, -1))


def toric_graph(spec: ToricSpec, include_diagonals: bool = True) -> _Graph:
    """Z-detector matching graph of the toric code on a cubic lattice.

    Circuit-level errors add the diagonals ``(1,0,-1)``, ``(0,1,-1)`` and the
    hook diagonal ``(1,1,-1)``. Going once around ``x`` shifts time by
    ``-vortices_x`` periods. Edges crossing the ``x`` cut carry label 1.
    """
    Lx, Ly, R, n = spec.Lx, spec.Ly, spec.rounds, spec.vortices_x
    steps = _TORIC_BASIC + (_TORIC_DIAG if include_diagonals else ())
    g = _Graph()
    for x in range(Lx):
        for y in range(Ly):
            for t in range(R):
                for dx, dy, dt in steps:
                    x2, y2, t2 = x + dx, y + dy, t + dt
                    lab = 0
                    if x2 >= Lx:
                        x2 -= Lx
                        t2 -= n
                        lab = 1
                    y2 %= Ly
                    if 0 <= t2 < R:
                        g.edge([(x, y, t), (x2, y2, t2)], lab)
    return g


def toric_distance(spec: ToricSpec, include_diagonals: bool = True) -> int:
    """Shortest cycle winding an odd number of times around ``x``."""
    d = toric_graph(spec, include_diagonals).shortest()
    if d == NO_CYCLE:
        raise WindowTooShort(f"{spec.rounds} rounds contain no x-winding cycle")
    return d


@dataclass(frozen=True)
class IdleParams:
    p: float
    alpha: float
    y: float
    z: float
    D0: int

    def __post_init__(self):
        if not (0 < self.p < 1):
            raise InvalidParams("p must lie in (0, 1)")
        if self.alpha < 0 or self.y <= 0 or self.z <= 0 or self.D0 < 1:
            raise InvalidParams("need alpha >= 0, y > 0, z > 0, D0 >= 1")


class IdleTradeoff(NamedTuple):
    exponent: float
    base: float
    beneficial: bool


def idle_tradeoff(params: IdleParams) -> IdleTradeoff:
    """Scaling ``base ** exponent`` of the logical error rate when vortices
    of density ``alpha`` lengthen the distance but add idling noise."""
    P = params
    return IdleTradeoff(P.D0 * (1 + P.alpha * P.y) / 2, P.p * (1 + P.alpha * P.z),
                        P.y * math.log(P.p) + P.z < 0)
