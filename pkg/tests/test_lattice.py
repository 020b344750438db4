from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import emb
from timevortex.errors import DegenerateBasis, InvalidVortexCount, NotSuperlattice
from timevortex.lattice import (
    PERIOD, SEQUENCE, CodeParams, Embedding, FundamentalDomain, SpacetimeVec,
    check_vortex_constraints, hermite_normal_form, local_order_ok, make_embedding,
    measurement_time, qubit_count, qubits_of_domain, schedule, schedule_csv,
    vortex_delay, vortex_delays,
)

small = st.integers(-6, 6)


def valid_embeddings():
    return st.tuples(small, small, st.integers(-4, 4), small, small, st.integers(-4, 4)).filter(
        lambda v: 3 * (v[1] * v[3] - v[4] * v[0]) != 0).map(lambda v: make_embedding(*v))


@pytest.mark.parametrize("args,L1,L2,N", [
    ((0, 1, 0, 3, -1, 0), (3, 0, 0), (0, 3, 0), 18),
    ((0, 1, 1, -5, 2, 0), (3, 0, -6), (1, -5, 0), 30),
    ((1, 0, 0, -1, 1, 0), (1, 1, 0), (2, -1, 0), 6),
])
def test_make_embedding_examples(args, L1, L2, N):
    e = make_embedding(*args)
    assert e.L1 == L1 and e.L2 == L2 and qubit_count(e) == N


def test_degenerate_basis():
    with pytest.raises(DegenerateBasis):
        make_embedding(1, 0, 0, 2, 0, 0)


def test_from_vectors_rejects_non_superlattice():
    with pytest.raises(NotSuperlattice):
        Embedding.from_vectors((1, 0, 0), (0, 3, 0))
    with pytest.raises(NotSuperlattice):
        Embedding.from_vectors((3, 0, 2), (0, 3, 0))


@pytest.mark.parametrize("x", [1, 2, 3])
def test_qubit_count_scaling_family(x):
    e = emb((19 * x, x, 36 * x), (x, -20 * x, -72 * x))
    assert qubit_count(e) == 762 * x * x


@given(valid_embeddings())
def test_qubit_count_identity(e):
    assert e.num_qubits == 6 * abs(e.d1 * e.c2 - e.d2 * e.c1)
    assert e.num_qubits % 6 == 0


@given(valid_embeddings())
def test_json_roundtrip(e):
    assert Embedding.from_dict(e.to_dict()) == e


def test_vortex_delay_examples():
    e = emb((3, 0, -6), (1, -5, 0))
    assert vortex_delay(e, 1, 0) == 1
    assert vortex_delay(e, 0, -1) == Fraction(-1, 5)
    free = emb((4, 1, 0), (1, -5, 0))
    assert all(vortex_delay(free, a, b) == 0 for a in range(-3, 4) for b in range(-3, 4))


def test_check_vortex_constraints_examples():
    e = emb((3, 0, -6), (1, -5, 0))
    assert vortex_delays(e) == (1, Fraction(-4, 5), Fraction(-1, 5))
    assert check_vortex_constraints(e)
    bad = emb((1, 1, -30), (2, -1, 0))
    assert vortex_delays(bad)[0] == 5
    assert not check_vortex_constraints(bad)


@given(valid_embeddings(), small, small, small, small)
def test_vortex_delay_linear(e, a, b, c, d):
    assert vortex_delay(e, a + c, b + d) == vortex_delay(e, a, b) + vortex_delay(e, c, d)


@given(valid_embeddings(), st.integers(2, 3))
def test_scaling_keeps_delays(e, k):
    big = make_embedding(k * e.c1, k * e.d1, k * e.n1, k * e.c2, k * e.d2, k * e.n2)
    assert big.num_qubits == k * k * e.num_qubits
    assert vortex_delays(big) == vortex_delays(e)


@given(valid_embeddings())
def test_winding_delay_is_vortex_count(e):
    assert vortex_delay(e, 2 * e.a1, 2 * e.b1) == PERIOD * e.n1
    assert vortex_delay(e, 2 * e.a2, 2 * e.b2) == PERIOD * e.n2


@settings(max_examples=60, deadline=None)
@given(valid_embeddings())
def test_constraints_iff_local_order(e):
    ok = all(local_order_ok(e, q) for q in qubits_of_domain(e))
    assert ok == check_vortex_constraints(e)


def test_schedule_vortex_free_steps():
    e = emb((3, 0, 0), (0, 3, 0))
    entries = schedule(e)
    assert len(entries) == 2 * 3 * 9
    step = {(c, b): s for s, (c, b) in enumerate(SEQUENCE)}
    for en in entries:
        assert en.time == step[(en.color, en.basis)]


def test_schedule_vortexed_and_rejection():
    e = emb((3, 0, -6), (1, -5, 0))
    entries = schedule(e)
    assert all(0 <= en.time < PERIOD for en in entries)
    assert len(entries) == 2 * 3 * 15
    with pytest.raises(InvalidVortexCount):
        schedule(emb((1, 1, -30), (2, -1, 0)))
    csv_text = schedule_csv(entries)
    assert csv_text.splitlines()[0] == "bond_id,color,basis,time_in_cycle_numerator,denominator"
    assert len(csv_text.splitlines()) == len(entries) + 1


def test_measurement_time_winds_once():
    e = emb((3, 0, -6), (1, -5, 0))
    b = (0, 0, 0)
    shifted = (3, 0, 0)
    assert measurement_time(e, shifted, "X") - measurement_time(e, b, "X") == 6


@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=2, max_size=2))
def test_hnf_properties(rows):
    H, U = hermite_normal_form(rows)
    prod = [[sum(U[r][k] * rows[k][c] for k in range(2)) for c in range(3)] for r in range(2)]
    assert prod == H
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
    assert abs(det) == 1


@given(valid_embeddings(), st.integers(-40, 40), st.integers(-40, 40))
def test_fundamental_domain_reduce(e, i, j):
    dom = FundamentalDomain(e)
    i0, j0, m1, m2 = dom.reduce(i, j)
    assert 0 <= i0 < dom.A and 0 <= j0 < dom.C
    assert (i0 + m1 * e.a1 + m2 * e.a2, j0 + m1 * e.b1 + m2 * e.b2) == (i, j)
    assert dom.size == e.num_qubits // 2


def test_code_params_rational():
    p = CodeParams(18, 2)
    assert p.K == 2 and p.R == Fraction(9, 2)


def test_spacetime_vec_algebra():
    a, b = SpacetimeVec(1, 2, 3), SpacetimeVec(-1, 0, 4)
    assert a + b == (0, 2, 7) and a - b == (2, 2, -1) and -a == (-1, -2, -3)
    assert 2 * a == (2, 4, 6) and a * 2 == (2, 4, 6)
    assert SpacetimeVec(1, 0, 2).is_detector_displacement()
    assert not SpacetimeVec(1, 0, 0).is_detector_displacement()
