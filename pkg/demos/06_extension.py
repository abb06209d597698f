"""Conjugacy in the semidirect product Z^2 x| Z twisted by a matrix.

Elements are pairs (u, p); conjugation keeps p and moves u, so the problem
splits into a twisted-conjugacy question for each residue of the twist.

Run:  python demos/06_extension.py
"""
from orbitkit import GElement, ZnByZ, cp_znbyz

G = ZnByZ([[2, 1], [1, 1]])
g, h = GElement([3, -1], 1), GElement([5, 2], -2)
print("g*h =", G.multiply(g, h), "  g^-1 =", G.invert(g))

d = cp_znbyz(G, GElement([7, 3], 1), GElement([0, 0], 1))
print(d.outcome, "conjugator", d.witness,
      "check:", G.conjugate(GElement([7, 3], 1), d.witness))

# Different exponents can never be conjugate; the image in Z detects that.
print(cp_znbyz(G, GElement([0, 0], 1), GElement([0, 0], 2)))

# The swap matrix: only an odd twist exchanges the coordinates.
S = ZnByZ([[0, 1], [1, 0]])
print(cp_znbyz(S, GElement([1, 0], 2), GElement([0, 1], 2)))
