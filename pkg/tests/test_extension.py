import random

import pytest

from orbitkit.decision import InputError
from orbitkit.extension import GElement, ZnByZ, action_subgroup_od, cp_znbyz
from orbitkit.matrixorbit import power
from orbitkit.zlattice import identity, matvec

import oracles


def G2(A):
    return ZnByZ(A)


def random_element(rng, n=2, pmax=3):
    return GElement([rng.randint(-3, 3) for _ in range(n)], rng.randint(-pmax, pmax))


# -- group law ------------------------------------------------------------------

def test_group_examples():
    G = G2([[2, 1], [1, 1]])
    assert G.multiply(GElement([1, 2], 0), GElement([3, 4], 0)) == GElement([4, 6], 0)
    assert G.invert(GElement([0, 0], 1)) == GElement([0, 0], -1)
    g = G.conjugate(GElement([1, 2], 3), GElement([5, -1], -4))
    assert g.p == 3
    assert str(G.identity()) == "((0, 0), t^0)"


def test_group_law_matches_oracle():
    rng = random.Random(0)
    for _ in range(100):
        A = oracles.random_A(rng)
        G = G2(A)
        g, h = random_element(rng), random_element(rng)
        ref = oracles.oracle_mul(A, (g.u, g.p), (h.u, h.p))
        assert G.multiply(g, h) == GElement(*ref)
        assert G.invert(g) == GElement(*oracles.oracle_inv(A, (g.u, g.p)))


def test_associativity_and_inverses():
    rng = random.Random(1)
    for _ in range(100):
        n = rng.randint(1, 3)
        G = ZnByZ(oracles.random_unimodular(rng, n, steps=4))
        a, b, c = (random_element(rng, n) for _ in range(3))
        assert G.multiply(G.multiply(a, b), c) == G.multiply(a, G.multiply(b, c))
        assert G.multiply(a, G.invert(a)) == G.identity()
        assert G.multiply(G.invert(a), a) == G.identity()
        assert G.invert(G.multiply(a, G.invert(a))) == G.identity()


def test_conjugation_formula():
    rng = random.Random(2)
    for _ in range(100):
        A = oracles.random_A(rng)
        G = G2(A)
        g, h = random_element(rng), random_element(rng)
        Ap = power(A, g.p)
        expect = [s + t - r for s, t, r in zip(matvec(power(A, h.p), g.u), h.u, matvec(Ap, h.u))]
        assert G.conjugate(g, h) == GElement(expect, g.p)


def test_action_subgroup_is_generated_by_A():
    rng = random.Random(3)
    for _ in range(50):
        A = oracles.random_A(rng)
        G = G2(A)
        a = [rng.randint(-5, 5) for _ in range(2)]
        k = rng.randint(-6, 6)
        assert G.conjugate(GElement(a, 0), GElement([0, 0], k)) == GElement(matvec(power(A, k), a), 0)


def test_dimension_checks():
    G = G2([[2, 1], [1, 1]])
    with pytest.raises(InputError):
        G.multiply(GElement([1], 0), GElement([1, 2], 0))
    with pytest.raises(InputError):
        cp_znbyz(G, GElement([1, 2, 3], 0), GElement([1, 2], 0))
    with pytest.raises(InputError):
        action_subgroup_od(G, [1], [1, 2])
    with pytest.raises(InputError):
        ZnByZ([[2, 0], [0, 1]])
    with pytest.raises(InputError):
        ZnByZ.from_json({"n": 3, "A": [[1, 0], [0, 1]]})


def test_json_round_trip():
    G = ZnByZ.from_json('{"n": 2, "A": [[2, 1], [1, 1]]}')
    assert G.to_json() == {"n": 2, "A": [[2, 1], [1, 1]]}
    assert GElement([1, -2], 3).to_json() == {"u": [1, -2], "p": 3}


# -- conjugacy --------------------------------------------------------------------

def test_cp_examples():
    A = [[2, 1], [1, 1]]
    G = G2(A)
    d = cp_znbyz(G, GElement([7, 3], 1), GElement([0, 0], 1))
    assert d.is_yes
    assert G.conjugate(GElement([7, 3], 1), d.witness) == GElement([0, 0], 1)
    assert d.witness.p == 0
    y = matvec(power(A, 2), [1, 0])
    d = cp_znbyz(G, GElement([1, 0], 0), GElement(y, 0))
    assert d.is_yes and d.witness == GElement([0, 0], 2)
    d = cp_znbyz(G, GElement([0, 0], 1), GElement([0, 0], 2))
    assert d.is_no and d.certificate["kind"] == "exponent-differs"


def test_cp_coset_exhaustion():
    # A = I: conjugation never changes u when p != 0
    G = G2(identity(2))
    d = cp_znbyz(G, GElement([1, 0], 2), GElement([0, 1], 2))
    assert d.is_no and d.certificate["kind"] == "twisted-conjugacy-cosets-exhausted"
    assert d.certificate["cosets"] == 2


def test_cp_needs_nonzero_twist():
    # only k = 1 mod 2 works: A swaps coordinates, I - A^2 = 0
    G = G2([[0, 1], [1, 0]])
    d = cp_znbyz(G, GElement([1, 0], 2), GElement([0, 1], 2))
    assert d.is_yes and d.witness.p == 1
    assert G.conjugate(GElement([1, 0], 2), d.witness) == GElement([0, 1], 2)


def test_action_subgroup_examples():
    G = G2(identity(2))
    d = action_subgroup_od(G, [1, 2], [1, 2])
    assert d.is_yes and d.witness == 0
    assert action_subgroup_od(G, [1, 0], [2, 0]).is_no
    assert action_subgroup_od(G2([[0, -1], [1, 0]]), [1, 0], [0, 1]).is_yes


def test_cp_matches_brute_force():
    rng = random.Random(4)
    for _ in range(150):
        A = oracles.random_A(rng)
        G = G2(A)
        g1 = random_element(rng)
        if rng.random() < 0.5:
            h = GElement([rng.randint(-3, 3) for _ in range(2)], rng.randint(-4, 4))
            g2 = G.conjugate(g1, h)
        else:
            g2 = GElement([rng.randint(-3, 3) for _ in range(2)], g1.p if rng.random() < 0.8 else rng.randint(-3, 3))
        d = cp_znbyz(G, g1, g2)
        brute = oracles.brute_conjugate(A, g1, g2)
        if brute is not None:
            assert d.is_yes
        if d.is_yes:
            assert G.conjugate(g1, d.witness) == g2
        if d.is_no:
            assert brute is None


def test_zero_exponent_cp_matches_action_orbit():
    rng = random.Random(5)
    for _ in range(150):
        A = oracles.random_A(rng)
        G = G2(A)
        u = [rng.randint(-3, 3) for _ in range(2)]
        v = matvec(power(A, rng.randint(-5, 5)), u) if rng.random() < 0.5 else [rng.randint(-3, 3) for _ in range(2)]
        od = action_subgroup_od(G, u, v)
        cp = cp_znbyz(G, GElement(u, 0), GElement(v, 0))
        if od.decided:
            assert od.outcome == cp.outcome
        if cp.is_yes:
            assert cp.witness == GElement([0, 0], od.witness)
