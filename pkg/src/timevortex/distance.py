"""Code distance as a shortest-vector problem in the graph norm.

The distance is the least graph norm over torus vectors ``m1 L1 + m2 L2``
with ``(m1, m2)`` not both even. Since every edge moves at most 2 in each
spatial coordinate and 4 in time, a vector of norm ``D`` has Euclidean length
at most ``sqrt(24) D``; enumerating a Euclidean ball of that radius around a
Gauss-reduced basis is therefore exhaustive.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ._accel import USE_NUMBA, njit
from .errors import DegenerateBasis, TooLarge
from .lattice import PERIOD, CodeParams, Embedding, SpacetimeVec
from .metric import _norm_nb, graph_norm

SPEED2 = 24  # max ||w||^2 / norm(w)^2


def _dot(u, v) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


class ReducedBasis(NamedTuple):
    u: SpacetimeVec
    v: SpacetimeVec
    T: tuple[tuple[int, int], tuple[int, int]]  # rows: u, v in terms of L1, L2


def reduce_basis(L1, L2) -> ReducedBasis:
    """Lagrange-Gauss reduction in the Euclidean norm, in exact integers."""
    u, v = SpacetimeVec(*L1), SpacetimeVec(*L2)
    cross = (u.j * v.t - u.t * v.j, u.t * v.i - u.i * v.t, u.i * v.j - u.j * v.i)
    if cross == (0, 0, 0):
        raise DegenerateBasis(f"{tuple(u)} and {tuple(v)} are linearly dependent")
    tu, tv = (1, 0), (0, 1)
    if _dot(u, u) > _dot(v, v):
        u, v, tu, tv = v, u, tv, tu
    while True:
        n = _dot(u, u)
        q = (2 * _dot(u, v) + n) // (2 * n)  # nearest integer
        v = v - q * u
        tv = (tv[0] - q * tu[0], tv[1] - q * tu[1])
        if _dot(v, v) < n:
            u, v, tu, tv = v, u, tv, tu
        else:
            return ReducedBasis(u, v, (tu, tv))


class DistanceResult(NamedTuple):
    distance: int
    minimizers: list  # [(m1, m2, w)] with (m1, m2) in the original basis
    unrestricted_min: int  # least norm over all nonzero torus vectors


def _ball(rb: ReducedBasis, R2: int):
    """Coefficients ``(k1, k2)`` in the reduced basis with
    ``||k1 u + k2 v||^2 <= R2``, one of each ``+-`` pair."""
    g11, g12, g22 = _dot(rb.u, rb.u), _dot(rb.u, rb.v), _dot(rb.v, rb.v)
    delta = g11 * g22 - g12 * g12
    k2max = math.isqrt(g11 * R2 // delta) + 1
    for k2 in range(0, k2max + 1):
        disc = g11 * R2 - delta * k2 * k2
        if disc < 0:
            continue
        s = math.isqrt(disc) + 1
        lo = (-g12 * k2 - s) // g11
        hi = (-g12 * k2 + s) // g11 + 1
        for k1 in range(lo, hi + 1):
            if k2 == 0 and k1 <= 0:
                continue
            if g11 * k1 * k1 + 2 * g12 * k1 * k2 + g22 * k2 * k2 <= R2:
                yield k1, k2


def distance_details(emb: Embedding, window: int = 1) -> DistanceResult:
    """Distance, all minimising ``(m1, m2)`` up to sign, and the least norm
    over all nonzero torus vectors. ``window`` scales the enumeration radius
    (values above 1 only cost time)."""
    L1, L2 = emb.L1, emb.L2
    rb = reduce_basis(L1, L2)
    (t11, t12), (t21, t22) = rb.T

    def orig(k1, k2):
        return k1 * t11 + k2 * t21, k1 * t12 + k2 * t22

    # reduced basis vectors have odd coefficients in any basis, so they seed the bound
    best = min(graph_norm(rb.u), graph_norm(rb.v))
    found = []
    unrestricted = best
    for k1, k2 in _ball(rb, SPEED2 * (window * best) ** 2):
        m1, m2 = orig(k1, k2)
        w = k1 * rb.u + k2 * rb.v
        nrm = graph_norm(w)
        if nrm < unrestricted:
            unrestricted = nrm
        if m1 % 2 == 0 and m2 % 2 == 0:
            continue
        if nrm < best:
            best, found = nrm, []
        if nrm == best:
            if m1 < 0 or (m1 == 0 and m2 < 0):
                m1, m2, w = -m1, -m2, -w
            found.append((m1, m2, w))
    found.sort()
    return DistanceResult(best, found, unrestricted)


@njit
def _isqrt_nb(x):
    r = np.int64(np.sqrt(np.float64(x)))
    while r * r > x:
        r -= 1
    while (r + 1) * (r + 1) <= x:
        r += 1
    return r


@njit
def _distance_nb(u0, u1, u2, v0, v1, v2, t11, t12, t21, t22):
    # inputs: a Gauss-reduced basis and its transform from (L1, L2)
    best = min(_norm_nb(u0, u1, u2), _norm_nb(v0, v1, v2))
    g11 = u0 * u0 + u1 * u1 + u2 * u2
    g12 = u0 * v0 + u1 * v1 + u2 * v2
    g22 = v0 * v0 + v1 * v1 + v2 * v2
    delta = g11 * g22 - g12 * g12
    k2 = 0
    while True:
        R2 = 24 * best * best
        if delta * k2 * k2 > g11 * R2:
            break
        disc = g11 * R2 - delta * k2 * k2
        s = _isqrt_nb(disc) + 1
        lo = (-g12 * k2 - s) // g11
        hi = (-g12 * k2 + s) // g11 + 1
        for k1 in range(lo, hi + 1):
            if k2 == 0 and k1 <= 0:
                continue
            m1 = k1 * t11 + k2 * t21
            m2 = k1 * t12 + k2 * t22
            if m1 % 2 == 0 and m2 % 2 == 0:
                continue
            if g11 * k1 * k1 + 2 * g12 * k1 * k2 + g22 * k2 * k2 > R2:
                continue
            nrm = _norm_nb(k1 * u0 + k2 * v0, k1 * u1 + k2 * v1, k1 * u2 + k2 * v2)
            if nrm < best:
                best = nrm
        k2 += 1
    return best


def code_distance(emb: Embedding) -> int:
    """Least graph norm of an odd torus vector (a logical X string)."""
    if USE_NUMBA:
        rb = reduce_basis(emb.L1, emb.L2)
        (t11, t12), (t21, t22) = rb.T
        return int(_distance_nb(*rb.u, *rb.v, t11, t12, t21, t22))
    return distance_details(emb).distance


def code_params(emb: Embedding) -> CodeParams:
    return CodeParams(emb.num_qubits, code_distance(emb))


def rate(emb: Embedding) -> Fraction:
    """Encoding rate ``N / D^2`` (two logical qubits are implied)."""
    return code_params(emb).R


# ---------------------------------------------------------------------------
# independent oracle: shortest nontrivial cycle in the derived matching graph

ORACLE_MAX_QUBITS = 200


def distance_cycle_oracle(emb: Embedding, max_qubits: int = ORACLE_MAX_QUBITS) -> int:
    """Distance from the derived detector error model by breadth-first search.

    Builds the graphlike part of the memory-experiment error model, then finds
    the shortest closed walk with nonzero logical label through a detector in
    a middle period. The window is widened until it provably contains every
    walk of that length, using the fact that one edge changes actual time by
    at most ``4 + 2 (|g_i| + |g_j|)`` where ``g`` is the vortex delay gradient.
    """
    from .cover import NO_CYCLE, shortest_nontrivial_cycle
    from .dem import build_memory_experiment
    from .lattice import vortex_delay

    if emb.num_qubits > max_qubits:
        raise TooLarge(f"N={emb.num_qubits} exceeds the oracle limit {max_qubits}")
    # delay change per unit step along i and j
    gi = abs(vortex_delay(emb, 2, 0))
    gj = abs(vortex_delay(emb, 0, 2))
    step = 4 + 2 * (gi + gj)
    rounds = 4
    while True:
        g = build_memory_experiment(emb, rounds, 0.01)
        eu, ev, el, loops = [], [], [], []
        for m in g.mechanisms:
            if m.category not in ("E1", "E2", "E3"):
                continue
            if len(m.detectors) == 2:
                eu.append(m.detectors[0])
                ev.append(m.detectors[1])
                el.append(m.logical)
            elif not m.detectors:
                loops.append(m.logical)
        mid = PERIOD * (rounds // 2)
        sources = []
        for n, (i, j, t) in enumerate(g.detector_coords.tolist()):
            actual = t + vortex_delay(emb, 2 * i, 2 * j)
            if mid <= actual < mid + PERIOD:
                sources.append(n)
        c = shortest_nontrivial_cycle(g.num_detectors, eu, ev, el, sources, loops)
        if c == NO_CYCLE:
            raise AssertionError("matching graph has no nontrivial cycle")
        # a walk of length c from a source stays within c*step of its time
        need = 2 * math.ceil(Fraction(c) * step / PERIOD) + 4
        if rounds >= need:
            return c
        rounds = need
