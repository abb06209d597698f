"""Folding a subgroup into its core graph, then asking membership questions.

Run:  python demos/02_subgroups.py
"""
from orbitkit import build_subgroup_graph, enumerate_subgroup_elements, member, parse_word, subgroup_basis

H = build_subgroup_graph([parse_word(w, 2) for w in ("aa", "ab", "ba")], 2)
print(f"core graph: {H.num_vertices} vertices, {H.num_edges} edges")
print("free basis:", [str(w) for w in subgroup_basis(H)])

for text in ("aabb", "ab", "a", "bb"):
    d = member(H, parse_word(text, 2))
    print(f"  {text:5s} in H? {d.outcome}")

# every element up to length 2, listed in shortlex order
print("short elements:", [str(w) for w in enumerate_subgroup_elements(H, 2)])
