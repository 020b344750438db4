"""Integer algebra of the Floquet color code space-time lattice.

Coordinates
-----------
Plaquettes of the honeycomb sit on a triangular lattice with integer
coordinates ``(i, j)``; nearest neighbours differ by ``±(1,0), ±(0,1),
±(1,-1)``. A plaquette's colour index is ``(j - i) mod 3`` with
``0, 1, 2 = r, g, b``. Qubits are the triangles of this lattice and bonds are
its edges. Time is measured in schedule steps; one period is ``PERIOD = 6``.

An X detector of plaquette ``(i, j)`` sits at lifted time
``t = 2(i - j) + 6k`` (the midpoint of its detection cell). With time vortices
the actual time of anything at spatial position ``r`` is the lifted time plus
``vortex_delay(r)``, which makes the space-time picture periodic under the
torus vectors ``L1, L2``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import DegenerateBasis, InvalidVortexCount, NotSuperlattice

PERIOD = 6
COLORS = "rgb"

# edge directions of the triangular plaquette lattice; a bond is (i, j, d)
DIRS = ((1, 0), (0, 1), (1, -1))

# rx -> gz -> bx -> rz -> gx -> bz
SEQUENCE = (("r", "X"), ("g", "Z"), ("b", "X"), ("r", "Z"), ("g", "X"), ("b", "Z"))

# doubled spatial offsets between consecutively measured bonds around a qubit
QUBIT_STEP_OFFSETS2 = ((1, 0), (-1, 1), (0, -1))


class SpacetimeVec(NamedTuple):
    i: int
    j: int
    t: int

    def __add__(self, other):
        return SpacetimeVec(self.i + other[0], self.j + other[1], self.t + other[2])

    def __sub__(self, other):
        return SpacetimeVec(self.i - other[0], self.j - other[1], self.t - other[2])

    def __neg__(self):
        return SpacetimeVec(-self.i, -self.j, -self.t)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return SpacetimeVec(k * self.i, k * self.j, k * self.t)

    __rmul__ = __mul__

    def is_detector_displacement(self) -> bool:
        return (self.t - 2 * (self.i - self.j)) % PERIOD == 0


@dataclass(frozen=True)
class Embedding:
    """Torus vectors ``L_k = (c_k + 3 d_k, c_k, -6 n_k)`` with vortex counts ``n_k``."""

    c1: int
    d1: int
    n1: int
    c2: int
    d2: int
    n2: int

    def __post_init__(self):
        if self.det == 0:
            raise DegenerateBasis(f"torus vectors {self.L1} and {self.L2} are parallel")

    @classmethod
    def from_vectors(cls, L1, L2) -> "Embedding":
        vals = []
        for a, b, t in (L1, L2):
            if (a - b) % 3 or t % PERIOD:
                raise NotSuperlattice(f"({a}, {b}, {t}) is not a colour-periodic torus vector")
            vals += [b, (a - b) // 3, -t // PERIOD]
        return cls(*vals)

    @property
    def a1(self) -> int:
        return self.c1 + 3 * self.d1

    @property
    def b1(self) -> int:
        return self.c1

    @property
    def a2(self) -> int:
        return self.c2 + 3 * self.d2

    @property
    def b2(self) -> int:
        return self.c2

    @property
    def L1(self) -> SpacetimeVec:
        return SpacetimeVec(self.a1, self.b1, -PERIOD * self.n1)

    @property
    def L2(self) -> SpacetimeVec:
        return SpacetimeVec(self.a2, self.b2, -PERIOD * self.n2)

    @property
    def det(self) -> int:
        """Spatial determinant ``a1 b2 - a2 b1``, equal to ``3 (d1 c2 - d2 c1)``."""
        return 3 * (self.d1 * self.c2 - self.d2 * self.c1)

    @property
    def num_qubits(self) -> int:
        return 2 * abs(self.det)

    @property
    def has_vortices(self) -> bool:
        return bool(self.n1 or self.n2)

    def to_dict(self) -> dict:
        return {
            "c1": self.c1, "d1": self.d1, "n1": self.n1,
            "c2": self.c2, "d2": self.d2, "n2": self.n2,
            "L1": list(self.L1), "L2": list(self.L2), "N": self.num_qubits,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Embedding":
        return cls(*(int(d[k]) for k in ("c1", "d1", "n1", "c2", "d2", "n2")))

    def label(self) -> str:
        return "L1=({},{},{});L2=({},{},{})".format(*self.L1, *self.L2)


@dataclass(frozen=True)
class CodeParams:
    N: int
    D: int
    K: int = 2

    @property
    def R(self) -> Fraction:
        return Fraction(self.N, self.D * self.D)


def make_embedding(c1: int, d1: int, n1: int, c2: int, d2: int, n2: int) -> Embedding:
    return Embedding(c1, d1, n1, c2, d2, n2)


def qubit_count(emb: Embedding) -> int:
    return emb.num_qubits


def vortex_delay(emb: Embedding, di2: int, dj2: int) -> Fraction:
    """Delay between two points separated by the doubled spatial offset ``(di2, dj2)``."""
    num = emb.n1 * (emb.b2 * di2 - emb.a2 * dj2) + emb.n2 * (emb.a1 * dj2 - emb.b1 * di2)
    return Fraction(3 * num, emb.det)


def vortex_delays(emb: Embedding) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(vortex_delay(emb, *off) for off in QUBIT_STEP_OFFSETS2)


def check_vortex_constraints(emb: Embedding) -> bool:
    return all(-1 < dt < 5 for dt in vortex_delays(emb))


# ---------------------------------------------------------------------------
# Hermite normal form and the spatial fundamental domain


def hermite_normal_form(rows):
    """Row-style HNF of an integer matrix.

    Returns ``(H, U)`` with ``H = U @ rows``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots and entries above each pivot reduced
    into ``[0, pivot)``. Zero rows are kept at the bottom.
    """
    A = [[int(x) for x in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def sub(k, r, q):
        A[k] = [x - q * y for x, y in zip(A[k], A[r])]
        U[k] = [x - q * y for x, y in zip(U[k], U[r])]

    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [k for k in range(r, m) if A[k][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda k: (abs(A[k][c]), k))
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            for k in range(r + 1, m):
                q = A[k][c] // A[r][c]
                if q:
                    sub(k, r, q)
            if all(A[k][c] == 0 for k in range(r + 1, m)):
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for k in range(r):
            q = A[k][c] // A[r][c]
            if q:
                sub(k, r, q)
        r += 1
    return A, U


class FundamentalDomain:
    """Canonical representatives of ``Z^2`` modulo the spatial torus lattice.

    The representative set is ``{(i, j): 0 <= i < A, 0 <= j < C}`` where
    ``[[A, B], [0, C]]`` is the HNF of the spatial parts of ``L1, L2``.
    """

    def __init__(self, emb: Embedding):
        self.emb = emb
        (h1, h2), U = hermite_normal_form([[emb.a1, emb.b1], [emb.a2, emb.b2]])
        self.A, self.B = h1
        self.C = h2[1]
        self.U = U
        self.size = self.A * self.C
        assert self.size == abs(emb.det)

    def reduce(self, i: int, j: int) -> tuple[int, int, int, int]:
        """Return ``(i0, j0, m1, m2)`` with ``(i, j) = (i0, j0) + m1 L1 + m2 L2`` spatially."""
        q1 = i // self.A
        i0 = i - q1 * self.A
        j1 = j - q1 * self.B
        q2 = j1 // self.C
        j0 = j1 - q2 * self.C
        U = self.U
        return i0, j0, q1 * U[0][0] + q2 * U[1][0], q1 * U[0][1] + q2 * U[1][1]

    def reduce_point(self, i: int, j: int, t: int) -> tuple[int, int, int]:
        """Canonical lift of a space-time point modulo ``L1, L2``."""
        i0, j0, m1, m2 = self.reduce(i, j)
        return i0, j0, t + PERIOD * (m1 * self.emb.n1 + m2 * self.emb.n2)

    def index(self, i0: int, j0: int) -> int:
        return i0 * self.C + j0

    def points(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.A) for j in range(self.C)]

    def winding_floor(self, i: int, j: int) -> tuple[int, int]:
        """Integer parts of the coordinates of ``(i, j)`` in the ``(L1, L2)`` basis."""
        e = self.emb
        return ((i * e.b2 - j * e.a2) // e.det, (e.a1 * j - e.b1 * i) // e.det)


# ---------------------------------------------------------------------------
# Honeycomb geometry in lifted (vortex-free) coordinates


def color_of(i: int, j: int) -> int:
    return (j - i) % 3


def bond_color(i: int, j: int, d: int) -> int:
    di, dj = DIRS[d]
    return (-(color_of(i, j) + color_of(i + di, j + dj))) % 3


def bond_step(color: int, basis: str) -> int:
    """Step within the period at which bonds of ``color`` are measured in ``basis``."""
    return (-2 * color + (3 if basis == "Z" else 0)) % PERIOD


def bond_qubits(i: int, j: int, d: int):
    """The two qubits (triangles) on bond ``(i, j, d)``; a qubit is ``(i, j, kind)``."""
    if d == 0:
        return (i, j, 0), (i, j, 1)
    if d == 1:
        return (i, j, 0), (i - 1, j + 1, 1)
    return (i, j, 1), (i, j - 1, 0)


def qubit_bonds(i: int, j: int, kind: int):
    """Bonds of a qubit (triangle), as ``(i, j, d)`` tuples."""
    if kind == 0:
        return (i, j, 0), (i, j, 1), (i, j + 1, 2)
    return (i, j, 0), (i, j, 2), (i + 1, j - 1, 1)


def qubit_plaquettes(i: int, j: int, kind: int):
    if kind == 0:
        return (i, j), (i + 1, j), (i, j + 1)
    return (i, j), (i + 1, j), (i + 1, j - 1)


def plaquette_bonds(i: int, j: int):
    """The six bonds on the boundary of plaquette ``(i, j)``."""
    out = []
    for d, (di, dj) in enumerate(DIRS):
        out.append((i, j, d))
        out.append((i - di, j - dj, d))
    return out


def bond_center2(i: int, j: int, d: int) -> tuple[int, int]:
    di, dj = DIRS[d]
    return 2 * i + di, 2 * j + dj


# ---------------------------------------------------------------------------
# Schedule


class ScheduleEntry(NamedTuple):
    bond_id: int
    color: str
    basis: str
    time: Fraction  # time within the cycle, in [0, 6)


def _delay_at(emb: Embedding, c2: tuple[int, int]) -> Fraction:
    return vortex_delay(emb, c2[0], c2[1])


def measurement_time(emb: Embedding, bond, basis: str, cycle: int = 0) -> Fraction:
    """Actual time of the ``cycle``-th measurement of a lifted bond."""
    i, j, d = bond
    return bond_step(bond_color(i, j, d), basis) + PERIOD * cycle + _delay_at(emb, bond_center2(i, j, d))


def schedule(emb: Embedding) -> list[ScheduleEntry]:
    """Measurement times within one cycle for every bond of the fundamental domain.

    Bond ids are ``3 * plaquette_index + d`` for the bond joining domain
    plaquette ``p`` to ``p + DIRS[d]``.
    """
    if not check_vortex_constraints(emb):
        raise InvalidVortexCount(f"vortex counts ({emb.n1}, {emb.n2}) break local measurement order")
    dom = FundamentalDomain(emb)
    out = []
    for (i, j) in dom.points():
        pidx = dom.index(i, j)
        for d in range(3):
            col = bond_color(i, j, d)
            for basis in ("X", "Z"):
                t = measurement_time(emb, (i, j, d), basis) % PERIOD
                out.append(ScheduleEntry(3 * pidx + d, COLORS[col], basis, t))
    out.sort(key=lambda e: (e.bond_id, e.time))
    return out


def local_order_ok(emb: Embedding, qubit) -> bool:
    """True if the six measurements on ``qubit`` keep the vortex-free cyclic
    order ``rx gz bx rz gx bz`` with strictly positive gaps."""
    bonds = {COLORS[bond_color(*b)]: b for b in qubit_bonds(*qubit)}
    # step s of the sequence happens at s + delay(centre of its bond)
    actual = [s + _delay_at(emb, bond_center2(*bonds[col])) for s, (col, _) in enumerate(SEQUENCE)]
    gaps = [actual[s + 1] - actual[s] for s in range(5)] + [actual[0] + PERIOD - actual[5]]
    return all(g > 0 for g in gaps)


def qubits_of_domain(emb: Embedding) -> list[tuple[int, int, int]]:
    dom = FundamentalDomain(emb)
    return [(i, j, k) for (i, j) in dom.points() for k in (0, 1)]


def schedule_csv(entries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bond_id", "color", "basis", "time_in_cycle_numerator", "denominator"])
    for e in entries:
        w.writerow([e.bond_id, e.color, e.basis, e.time.numerator, e.time.denominator])
    return buf.getvalue()
