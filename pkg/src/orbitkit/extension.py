"""Conjugacy in G = Z^n x|_A Z, split into twisted conjugacy in Z^n and orbit
decidability of the action subgroup <A>.

Elements are pairs ``(u, p)`` standing for ``u t^p``.  With ``t`` acting on the
column vector ``u`` by ``A``, the product is

    (u, p) (v, q) = (A^q u + v, p + q),

so conjugating ``(a, 0)`` by ``(0, k)`` gives ``(A^k a, 0)``: the action subgroup is
exactly ``<A>``.  Only the cyclic top group Z is handled; a free top group of
higher rank would need coset representatives this module does not compute.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .decision import Decision, InputError
from .matrixorbit import DEFAULT_MAX_EXPONENT, DEFAULT_MODULI, orbit_equality_decide, power
from .zlattice import Lattice, as_matrix, identity, matvec, require_unimodular, transpose


@dataclass(frozen=True)
class GElement:
    u: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(int(x) for x in self.u))
        object.__setattr__(self, "p", int(self.p))

    def to_json(self) -> dict:
        return {"u": list(self.u), "p": self.p}

    def __str__(self):
        return f"(({', '.join(map(str, self.u))}), t^{self.p})"


class ZnByZ:
    """The semidirect product ``Z^n x|_A Z`` for a unimodular ``A``."""

    def __init__(self, A):
        self.A = as_matrix(A)
        self.n = len(self.A)
        require_unimodular(self.A)
        self._powers = {}

    @classmethod
    def from_json(cls, data) -> "ZnByZ":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            G = cls(data["A"])
            n = data.get("n", G.n)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed group JSON: {data!r}") from exc
        if n != G.n:
            raise InputError(f"n = {n} does not match the {G.n}x{G.n} matrix")
        return G

    def to_json(self) -> dict:
        return {"n": self.n, "A": self.A}

    def action(self, k: int) -> list:
        if k not in self._powers:
            self._powers[k] = power(self.A, k)
        return self._powers[k]

    def element(self, u, p: int = 0) -> GElement:
        g = GElement(u, p)
        self._check(g)
        return g

    def identity(self) -> GElement:
        return GElement((0,) * self.n, 0)

    def _check(self, *gs):
        for g in gs:
            if len(g.u) != self.n:
                raise InputError(f"dimension mismatch: element of length {len(g.u)} in Z^{self.n} x| Z")

    def multiply(self, g: GElement, h: GElement) -> GElement:
        self._check(g, h)
        return GElement([a + b for a, b in zip(matvec(self.action(h.p), g.u), h.u)], g.p + h.p)

    def invert(self, g: GElement) -> GElement:
        self._check(g)
        return GElement([-a for a in matvec(self.action(-g.p), g.u)], -g.p)

    def conjugate(self, g: GElement, h: GElement) -> GElement:
        """``h^-1 g h``."""
        return self.multiply(self.multiply(self.invert(h), g), h)


def _fiber_target(G: ZnByZ, g1: GElement, g2: GElement, k: int) -> list:
    # conjugating (u, p) by (x, k) gives (A^k u + (I - A^p) x, p)
    return [b - a for a, b in zip(matvec(G.action(k), g1.u), g2.u)]


def cp_znbyz(G: ZnByZ, g1: GElement, g2: GElement, max_exponent: int = DEFAULT_MAX_EXPONENT,
             moduli=DEFAULT_MODULI) -> Decision:
    """Decide whether ``h^-1 g1 h = g2`` for some ``h = (x, k)`` in G.

    For ``p = q != 0`` only ``k mod |p|`` matters, so ``|p|`` twisted-conjugacy
    instances settle it.  For ``p = q = 0`` the question is orbit equality under
    ``<A>`` and inherits that decider's completeness.
    """
    G._check(g1, g2)
    p, q = g1.p, g2.p
    if p != q:
        return Decision.no("exponent-differs", exponents=[p, q])
    n = G.n
    if p == 0:
        d = orbit_equality_decide(G.A, list(g1.u), list(g2.u), max_exponent, moduli)
        if not d.is_yes:
            return Decision(d.outcome, None, {**d.certificate, "reduction": "action-subgroup-od"}, d.bound)
        h = GElement((0,) * n, d.witness)
        assert G.conjugate(g1, h) == g2
        return Decision.yes(h, reduction="action-subgroup-od")
    B = [[int(i == j) - a for j, a in enumerate(row)] for i, row in enumerate(G.action(p))]
    image = Lattice(transpose(B), n)
    for k in range(abs(p)):
        x = image.coefficients(_fiber_target(G, g1, g2, k))
        if x is not None:
            h = GElement(x, k)
            assert G.conjugate(g1, h) == g2
            return Decision.yes(h, reduction="twisted-conjugacy", cosets=abs(p))
    return Decision.no("twisted-conjugacy-cosets-exhausted", cosets=abs(p))


def action_subgroup_od(G: ZnByZ, x, y, max_exponent: int = DEFAULT_MAX_EXPONENT,
                       moduli=DEFAULT_MODULI) -> Decision:
    """Orbit decidability of the action subgroup ``<A>``: is ``y = A^k x``?"""
    if len(x) != G.n or len(y) != G.n:
        raise InputError("dimension mismatch")
    return orbit_equality_decide(G.A, list(x), list(y), max_exponent, moduli)
