"""Exhaustive search for qubit-optimal torus embeddings.

Every embedding is equivalent, by a unimodular change of its basis, to one
whose spatial part is in Hermite normal form. In superlattice coordinates
``(c, d)`` that form is ``(c1, d1) = (A, B)``, ``(c2, d2) = (0, C)`` with
``A C = N / 6`` and ``0 <= B < C``. Vortex counts range over the integer
points of an explicit polygon cut out by the delay constraints.
"""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._accel import USE_NUMBA, njit
from .distance import _distance_nb, code_distance, reduce_basis
from .lattice import Embedding, check_vortex_constraints, hermite_normal_form

log = logging.getLogger(__name__)

MAX_D = 128

# point group generators acting on column vectors (i, j, t)
_REFLECT = ((-1, 0, 0), (1, 1, 0), (0, 0, 1))
_ROTATE = ((0, -1, 0), (1, 1, 0), (0, 0, -1))


def _matmul(A, B):
    return tuple(tuple(sum(A[r][k] * B[k][c] for k in range(3)) for c in range(3)) for r in range(3))


def _close_group(gens):
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                x = _matmul(h, g)
                if x not in group:
                    group.add(x)
                    nxt.append(x)
        frontier = nxt
    return sorted(group)


POINT_GROUP = _close_group((_REFLECT, _ROTATE))
assert len(POINT_GROUP) == 12


def _apply(g, v):
    return tuple(sum(g[r][k] * v[k] for k in range(3)) for r in range(3))


def canonical_key(emb: Embedding) -> tuple:
    """Lexicographically least HNF of the 2x3 basis matrix over the point group."""
    best = None
    for g in POINT_GROUP:
        H, _ = hermite_normal_form([_apply(g, emb.L1), _apply(g, emb.L2)])
        key = tuple(x for row in H for x in row)
        if best is None or key < best:
            best = key
    return best


def canonical_form(emb: Embedding) -> bytes:
    """Byte-string key; equal keys mean equivalent embeddings."""
    return ",".join(map(str, canonical_key(emb))).encode()


# ---------------------------------------------------------------------------
# enumeration


def spatial_lattices(max_qubits: int) -> np.ndarray:
    """Rows ``(A, B, C)`` of every spatial superlattice with ``6 A C <= max_qubits``,
    sorted by ``A C``."""
    rows = []
    for M in range(1, max_qubits // 6 + 1):
        for A in range(1, M + 1):
            if M % A:
                continue
            C = M // A
            for B in range(C):
                rows.append((A, B, C))
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


# corners of the allowed region of the delay gradient (doubled-offset units)
_G_CORNERS = ((-1, 1), (-1, -2), (2, 1))


def _n_range(a: int, b: int) -> tuple[int, int]:
    """Integers strictly inside the image of the gradient triangle under
    ``g -> (a g_i + b g_j) / 3``."""
    vals = [a * gi + b * gj for gi, gj in _G_CORNERS]
    return min(vals) // 3 + 1, -((-max(vals)) // 3) - 1


@njit
def _constraints_nb(a1, b1, n1, a2, b2, n2, det):
    # delays at doubled offsets (1,0), (-1,1), (0,-1), times det; require -1 < d < 5
    s = 1 if det > 0 else -1
    ad = abs(det)
    x1 = 3 * (n1 * b2 - n2 * b1) * s
    x2 = 3 * (n1 * (-b2 - a2) + n2 * (a1 + b1)) * s
    x3 = 3 * (n1 * a2 - n2 * a1) * s
    return (-ad < x1 < 5 * ad) and (-ad < x2 < 5 * ad) and (-ad < x3 < 5 * ad)


@njit
def _gauss_nb(u0, u1, u2, v0, v1, v2):
    t11, t12, t21, t22 = 1, 0, 0, 1
    if u0 * u0 + u1 * u1 + u2 * u2 > v0 * v0 + v1 * v1 + v2 * v2:
        u0, u1, u2, v0, v1, v2 = v0, v1, v2, u0, u1, u2
        t11, t12, t21, t22 = 0, 1, 1, 0
    while True:
        n = u0 * u0 + u1 * u1 + u2 * u2
        q = (2 * (u0 * v0 + u1 * v1 + u2 * v2) + n) // (2 * n)
        v0 -= q * u0
        v1 -= q * u1
        v2 -= q * u2
        t21 -= q * t11
        t22 -= q * t12
        if v0 * v0 + v1 * v1 + v2 * v2 < n:
            u0, u1, u2, v0, v1, v2 = v0, v1, v2, u0, u1, u2
            t11, t12, t21, t22 = t21, t22, t11, t12
        else:
            return u0, u1, u2, v0, v1, v2, t11, t12, t21, t22


@njit
def _search_nb(lats, allow_vortices, max_d, cap):
    min_n = np.full(max_d + 1, np.int64(1) << 62)
    out = np.empty((cap, 7), dtype=np.int64)
    count = 0
    total = 0
    for k in range(lats.shape[0]):
        A = lats[k, 0]
        B = lats[k, 1]
        C = lats[k, 2]
        c1, d1, c2, d2 = A, B, 0, C
        a1 = c1 + 3 * d1
        b1 = c1
        a2 = c2 + 3 * d2
        b2 = c2
        det = 3 * (d1 * c2 - d2 * c1)
        N = 2 * abs(det)
        if allow_vortices:
            lo1, hi1, lo2, hi2 = _n_box_nb(a1, b1, a2, b2)
        else:
            lo1, hi1, lo2, hi2 = 0, 0, 0, 0
        for n1 in range(lo1, hi1 + 1):
            for n2 in range(lo2, hi2 + 1):
                if not _constraints_nb(a1, b1, n1, a2, b2, n2, det):
                    continue
                total += 1
                u0, u1, u2, v0, v1, v2, t11, t12, t21, t22 = _gauss_nb(a1, b1, -6 * n1, a2, b2, -6 * n2)
                D = _distance_nb(u0, u1, u2, v0, v1, v2, t11, t12, t21, t22)
                if D > max_d or N > min_n[D]:
                    continue
                min_n[D] = N
                if count < cap:
                    out[count, 0] = D
                    out[count, 1] = c1
                    out[count, 2] = d1
                    out[count, 3] = n1
                    out[count, 4] = c2
                    out[count, 5] = d2
                    out[count, 6] = n2
                count += 1
    return out, count, total


@njit
def _n_box_nb(a1, b1, a2, b2):
    # corners (-1, 1), (-1, -2), (2, 1) of the gradient triangle
    lo = np.empty(2, dtype=np.int64)
    hi = np.empty(2, dtype=np.int64)
    for r in range(2):
        a = a1 if r == 0 else a2
        b = b1 if r == 0 else b2
        x = -a + b
        y = -a - 2 * b
        z = 2 * a + b
        mn = min(x, min(y, z))
        mx = max(x, max(y, z))
        lo[r] = mn // 3 + 1
        hi[r] = -((-mx) // 3) - 1
    return lo[0], hi[0], lo[1], hi[1]


def _iter_embeddings(lats, allow_vortices):
    for A, B, C in lats.tolist():
        a1, b1, a2, b2 = A + 3 * B, A, 3 * C, 0
        if allow_vortices:
            lo1, hi1 = _n_range(a1, b1)
            lo2, hi2 = _n_range(a2, b2)
        else:
            lo1 = hi1 = lo2 = hi2 = 0
        for n1 in range(lo1, hi1 + 1):
            for n2 in range(lo2, hi2 + 1):
                emb = Embedding(A, B, n1, 0, C, n2)
                if check_vortex_constraints(emb):
                    yield emb


def _search_py(lats, allow_vortices):
    min_n: dict[int, int] = {}
    rows = []
    total = 0
    for emb in _iter_embeddings(lats, allow_vortices):
        total += 1
        D = code_distance(emb)
        N = emb.num_qubits
        if N > min_n.get(D, N):
            continue
        min_n[D] = N
        rows.append((D, emb))
    return rows, total


@dataclass
class SearchResult:
    distance: int
    n_min: int
    configurations: list = field(default_factory=list)  # canonical representatives

    @property
    def rate(self) -> Fraction:
        return Fraction(self.n_min, self.distance ** 2)


def _reduced(emb: Embedding) -> Embedding:
    rb = reduce_basis(emb.L1, emb.L2)
    u, v = rb.u, rb.v
    # orient so the spatial parts point into the right half-plane
    if (u.i, u.j) < (0, 0):
        u = -u
    if (v.i, v.j) < (0, 0):
        v = -v
    return Embedding.from_vectors(u, v)


def _representative(members) -> Embedding:
    # shortest basis first, then a fixed tie-break
    def score(e):
        L1, L2 = e.L1, e.L2
        return (sum(x * x for x in L1) + sum(x * x for x in L2), tuple(L1) + tuple(L2))

    return min((_reduced(e) for e in members), key=score)


def search_optimal(max_qubits: int, allow_vortices: bool) -> list[SearchResult]:
    """Minimal qubit count for every achievable distance, with all optimal
    configurations up to symmetry."""
    lats = spatial_lattices(max_qubits)
    if USE_NUMBA:
        cap = 1 << 16
        while True:
            out, count, total = _search_nb(lats, allow_vortices, MAX_D, cap)
            if count <= cap:
                break
            cap = int(count)
        rows = [(int(r[0]), Embedding(*map(int, r[1:]))) for r in out[:count]]
    else:
        rows, total = _search_py(lats, allow_vortices)
    log.info("searched %d embeddings (vortices=%s, N<=%d)", total, allow_vortices, max_qubits)

    min_n: dict[int, int] = {}
    for D, emb in rows:
        min_n[D] = min(min_n.get(D, emb.num_qubits), emb.num_qubits)
    classes: dict[int, dict[tuple, list]] = {}
    for D, emb in rows:
        if emb.num_qubits != min_n[D]:
            continue
        classes.setdefault(D, {}).setdefault(canonical_key(emb), []).append(emb)
    results = []
    for D in sorted(classes):
        confs = [_representative(classes[D][key]) for key in sorted(classes[D])]
        results.append(SearchResult(D, min_n[D], confs))
    return results


# ---------------------------------------------------------------------------
# tabular output


def table_rows(results: list[SearchResult], family: str):
    for r in results:
        for emb in r.configurations:
            yield {
                "family": family,
                "D": r.distance,
                "N": r.n_min,
                "L1": "({},{},{})".format(*emb.L1),
                "L2": "({},{},{})".format(*emb.L2),
                "R": str(r.rate),
            }


def table_csv(free: list[SearchResult] | None, vortexed: list[SearchResult] | None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["family", "D", "N", "L1", "L2", "R"], lineterminator="\n")
    w.writeheader()
    for fam, res in (("vortex-free", free), ("vortexed", vortexed)):
        if res:
            w.writerows(table_rows(res, fam))
    return buf.getvalue()


def rate_curve_csv(free: list[SearchResult], vortexed: list[SearchResult]) -> str:
    """``D, R`` pairs for both families (rate versus distance)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "D", "N", "R", "R_float"])
    for fam, res in (("vortex-free", free), ("vortexed", vortexed)):
        for r in res:
            w.writerow([fam, r.distance, r.n_min, str(r.rate), f"{float(r.rate):.6f}"])
    return buf.getvalue()


def results_to_json(results: list[SearchResult]) -> list[dict]:
    return [
        {"D": r.distance, "N": r.n_min, "R": str(r.rate),
         "configurations": [e.to_dict() for e in r.configurations]}
        for r in results
    ]
