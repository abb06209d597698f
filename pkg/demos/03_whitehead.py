"""Whitehead's algorithm: when are two words related by an automorphism?

Run:  python demos/03_whitehead.py
"""
from orbitkit import (
    Automorphism,
    aut_orbit_decide,
    cyclic_od_bounded,
    is_primitive,
    parse_word,
    whitehead_minimize,
)

w = parse_word("aabaBAbA", 2)
shortest, moves = whitehead_minimize(w)
print(f"{w} shrinks to {shortest} after {len(moves.moves)} moves")

# Primitive means: part of some free basis.  Powers and commutators never are.
for text in ("aab", "aabb", "abAB", "aaab"):
    print(f"  {text:5s} primitive? {is_primitive(parse_word(text, 2))}")

# A yes answer carries an explicit composite of elementary moves.
u, v = parse_word("abb", 2), parse_word("aab", 2)
d = aut_orbit_decide(u, v)
print("abb ~ aab?", d.outcome, "; witness maps u to", d.witness.apply(u))
print("aa ~ abAB?", aut_orbit_decide(parse_word("aa", 2), parse_word("abAB", 2)).outcome)

# Iterating one fixed automorphism (a -> ab, b -> a) only reaches some of the orbit.
phi = Automorphism([parse_word("ab", 2), parse_word("a", 2)])
print(cyclic_od_bounded(phi, parse_word("a", 2), parse_word("aab", 2), 10))
