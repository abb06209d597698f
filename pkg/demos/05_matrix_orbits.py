"""Does the orbit of x under a unimodular matrix ever land in u + L?

Run:  python demos/05_matrix_orbits.py
"""
from orbitkit import Lattice, OrbitQuery, classify_gl2, orbit_coset_decide, orbit_equality_decide, power
from orbitkit.zlattice import matvec

cat_map = [[2, 1], [1, 1]]
print(classify_gl2(cat_map))

# Hyperbolic orbits grow geometrically, so a bounded window settles "no".
y = matvec(power(cat_map, -9), [1, 0])
print("A^-9 (1,0) =", y, "->", orbit_equality_decide(cat_map, [1, 0], y))
print(orbit_equality_decide(cat_map, [1, 0], [7, 7]))

# Shears are parabolic: the orbit is an arithmetic progression, solved in closed form.
shear = [[1, 1], [0, 1]]
print(orbit_equality_decide(shear, [0, 1], [10**12, 1]).witness)

# A full-rank lattice reduces everything to a finite orbit modulo L.
q = OrbitQuery(shear, [0, 1], [2, 1], Lattice([[5, 0], [0, 5]], 2))
print(orbit_coset_decide(q))
q = OrbitQuery(shear, [0, 1], [0, 0], Lattice([[5, 0], [0, 5]], 2))
print(orbit_coset_decide(q))
