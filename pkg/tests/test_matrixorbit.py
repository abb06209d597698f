import random

import pytest

from orbitkit.decision import InputError
from orbitkit.matrixorbit import (
    FINITE_ORDER,
    HYPERBOLIC,
    PARABOLIC,
    OrbitQuery,
    classify_gl2,
    orbit_coset_decide,
    orbit_equality_decide,
    power,
)
from orbitkit.zlattice import Lattice, identity, matmul, matvec

import oracles


def Q(A, x, u, gens, **kw):
    n = len(A)
    return OrbitQuery(A, x, u, Lattice(gens, n), **kw)


def check_yes(q, d):
    assert d.is_yes
    k = d.witness
    off = [a - b for a, b in zip(matvec(power(q.A, k), q.x), q.u)]
    c = d.certificate["coefficients"]
    if q.L.generators:
        assert oracles.vecmat(c, q.L.generators) == off
    else:
        assert not any(off)


# -- basics --------------------------------------------------------------------

def test_power_examples():
    A = [[2, 1], [1, 1]]
    assert power(A, 0) == identity(2)
    assert power(A, 2) == [[5, 3], [3, 2]]
    assert power(A, -1) == [[1, -1], [-1, 2]]


def test_power_inverse_pairs():
    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(1, 4)
        A = oracles.random_unimodular(rng, n, steps=5)
        k = rng.randint(-20, 20)
        assert matmul(power(A, k), power(A, -k)) == identity(n)
        assert power(A, k) == oracles.mat_power(A, k)


def test_classify_examples():
    c = classify_gl2([[0, -1], [1, 0]])
    assert c.kind == FINITE_ORDER and c.order == 4
    assert classify_gl2([[1, 1], [0, 1]]).kind == PARABOLIC
    c = classify_gl2([[2, 1], [1, 1]])
    assert c.kind == HYPERBOLIC and c.trace == 3 and c.discriminant == 5
    with pytest.raises(InputError):
        classify_gl2(identity(3))
    with pytest.raises(InputError):
        classify_gl2([[2, 0], [0, 1]])


def test_classify_is_exact():
    rng = random.Random(1)
    for _ in range(200):
        A = oracles.random_gl2(rng)
        c = classify_gl2(A)
        finite = any(oracles.mat_power(A, m) == oracles.eye(2) for m in range(1, 13))
        assert (c.kind == FINITE_ORDER) == finite
        if c.kind == FINITE_ORDER:
            assert oracles.mat_power(A, c.order) == oracles.eye(2)
            assert all(oracles.mat_power(A, m) != oracles.eye(2) for m in range(1, c.order))
        if c.kind == PARABOLIC:
            assert abs(c.trace) == 2


def test_query_validation():
    with pytest.raises(InputError):
        Q([[2, 0], [0, 1]], [1, 0], [0, 0], [])
    with pytest.raises(InputError):
        Q([[1, 1], [0, 1]], [1, 0, 0], [0, 0], [])
    with pytest.raises(InputError):
        OrbitQuery.from_json({"A": [[1, 1], [0, 1]]})
    q = OrbitQuery.from_json({"A": [[1, 1], [0, 1]], "x": [0, 1], "u": [2, 1], "L": [[5, 0], [0, 5]]})
    assert OrbitQuery.from_json(q.to_json()).to_json() == q.to_json()


# -- examples --------------------------------------------------------------------

def test_coset_examples():
    A = [[1, 1], [0, 1]]
    d = orbit_coset_decide(Q(A, [0, 1], [2, 1], [[5, 0], [0, 5]]))
    assert d.is_yes and d.witness == 2
    d = orbit_coset_decide(Q(A, [0, 1], [0, 0], [[5, 0], [0, 5]]))
    assert d.is_no and d.certificate["kind"] == "period-exhausted"
    d = orbit_coset_decide(Q(A, [3, 7], [3, 7], [[1, 2]]))
    assert d.is_yes and d.witness == 0


def test_equality_examples():
    A = [[2, 1], [1, 1]]
    d = orbit_equality_decide(A, [1, 0], matvec(power(A, 2), [1, 0]))
    assert d.is_yes and d.witness == 2
    d = orbit_equality_decide([[0, -1], [1, 0]], [1, 0], [-1, 0])
    assert d.is_yes and d.witness == 2
    d = orbit_equality_decide(identity(2), [1, 0], [0, 1])
    assert d.is_no


def test_negative_exponent_and_tie_break():
    A = [[2, 1], [1, 1]]
    d = orbit_equality_decide(A, [1, 0], matvec(power(A, -7), [1, 0]))
    assert d.is_yes and d.witness == -7
    # rotation by a quarter turn: k = 1 and k = -3 both work; smallest |k| wins
    d = orbit_equality_decide([[0, -1], [1, 0]], [1, 0], [0, 1])
    assert d.witness == 1
    d = orbit_equality_decide([[0, -1], [1, 0]], [1, 0], [0, -1])
    assert d.witness == -1


def test_parabolic_far_witness():
    A = [[1, 1], [0, 1]]
    d = orbit_equality_decide(A, [0, 1], [1234, 1])
    assert d.is_yes and d.witness == 1234
    # A^k x = (-1)^k (-k, 1): the sign of the second entry fixes the parity of k
    B = [[-1, 1], [0, -1]]
    d = orbit_equality_decide(B, [0, 1], [301, -1])
    assert d.is_yes and d.witness == 301
    d = orbit_equality_decide(B, [0, 1], [-301, -1])
    assert d.is_yes and d.witness == -301
    d = orbit_equality_decide(B, [0, 1], [-301, 1])
    assert d.is_no and d.certificate["kind"] == "affine-unsolvable"


def test_hyperbolic_no_is_certified():
    d = orbit_coset_decide(Q([[2, 1], [1, 1]], [1, 0], [0, 0], [[1, 1]]))
    assert d.is_no and d.certificate["kind"] == "growth-bound"


def test_zero_vector_orbit():
    d = orbit_equality_decide([[2, 1], [1, 1]], [0, 0], [1, 0])
    assert d.is_no
    d = orbit_equality_decide([[2, 1], [1, 1]], [0, 0], [0, 0])
    assert d.is_yes and d.witness == 0


# -- completeness cross-checks ---------------------------------------------------------

def test_full_rank_matches_brute_force():
    rng = random.Random(2)
    for _ in range(80):
        n = rng.choice([2, 3])
        A = oracles.random_unimodular(rng, n, steps=rng.randint(1, 6))
        gens = oracles.random_lattice_gens(rng, n, n)
        x = [rng.randint(-5, 5) for _ in range(n)]
        u = [rng.randint(-5, 5) for _ in range(n)]
        q = Q(A, x, u, gens)
        d = orbit_coset_decide(q)
        member = oracles.membership_fn(gens, n)
        T = oracles.mod_order(A, abs(oracles.det(gens)))
        hits = oracles.brute_hits(A, x, u, member, 3 * T)
        if hits:
            check_yes(q, d)
            assert d.witness == hits[0]
        else:
            assert d.is_no


def test_dimension_two_matches_brute_force():
    rng = random.Random(3)
    seen = set()
    for _ in range(200):
        A = oracles.random_gl2(rng)
        rank = rng.choice([0, 1, 1, 2])
        gens = oracles.random_lattice_gens(rng, 2, rank) if rank else []
        x = [rng.randint(-4, 4) for _ in range(2)]
        if rng.random() < 0.3:
            # plant a solution
            k = rng.randint(-15, 15)
            off = oracles.vecmat([rng.randint(-2, 2) for _ in gens], gens) if gens else [0, 0]
            u = [a - b for a, b in zip(oracles.orbit_vectors(A, x, abs(k))[k], off)]
        else:
            u = [rng.randint(-4, 4) for _ in range(2)]
        q = Q(A, x, u, gens)
        d = orbit_coset_decide(q)
        assert not d.is_unknown
        seen.add(d.certificate.get("case") or d.certificate.get("kind"))
        hits = oracles.brute_hits(A, x, u, oracles.membership_fn(gens, 2), 200)
        if hits:
            check_yes(q, d)
            assert d.witness == hits[0]
        elif d.is_yes:
            assert abs(d.witness) > 200
            check_yes(q, d)
    assert {"parabolic", "hyperbolic", "finite-order"} & seen


def test_sieve_obstruction_is_sound():
    rng = random.Random(4)
    obstructions = 0
    for _ in range(60):
        A = oracles.random_unimodular(rng, 3, steps=rng.randint(2, 6))
        rank = rng.choice([0, 1, 2])
        gens = oracles.random_lattice_gens(rng, 3, rank) if rank else []
        x = [rng.randint(-3, 3) for _ in range(3)]
        u = [rng.randint(-3, 3) for _ in range(3)]
        q = Q(A, x, u, gens, max_exponent=60)
        d = orbit_coset_decide(q)
        if d.is_yes:
            check_yes(q, d)
        elif d.is_no and d.certificate["kind"] == "modular-obstruction":
            obstructions += 1
            assert not oracles.brute_hits(A, x, u, oracles.lattice_oracle(gens, 3), 500)
        elif d.is_unknown:
            assert d.bound == 60
            assert not oracles.brute_hits(A, x, u, oracles.lattice_oracle(gens, 3), 60)
    assert obstructions > 0


def test_sieve_example():
    A = [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    x = [0, 0, 1]
    d = orbit_equality_decide(A, x, matvec(power(A, 2), x))
    assert d.is_yes and d.witness == 2
    d = orbit_equality_decide(A, x, [1, 0, 1])
    assert d.is_no or d.is_unknown


def test_three_dimensional_finite_order():
    P = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    d = orbit_equality_decide(P, [1, 2, 3], [2, 3, 1])
    assert d.is_yes
    assert matvec(power(P, d.witness), [1, 2, 3]) == [2, 3, 1]
    d = orbit_equality_decide(P, [1, 2, 3], [2, 1, 3])
    assert d.is_no and d.certificate["kind"] == "period-exhausted"
