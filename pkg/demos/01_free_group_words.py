"""Conjugacy in a free group, and what a certificate looks like.

Run:  python demos/01_free_group_words.py
"""
from orbitkit import conjugacy_decide, parse_word, word_root

u = parse_word("aabAB", 2)
v = parse_word("bABaa", 2)
print("u =", u, "  v =", v)

d = conjugacy_decide(u, v)
x = d.witness
print("conjugate?", d.outcome, "via x =", x)
# the certificate is checkable by hand: x^-1 u x really is v
print("x^-1 u x =", x.inverse() * u * x)

# Non-conjugate words share a cyclic normal form only if they are conjugate.
print(conjugacy_decide(parse_word("ab", 2), parse_word("aB", 2)))

# Roots: abab is the square of ab
print("root of abab:", word_root(parse_word("abab", 2)))
