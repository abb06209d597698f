"""Normal forms over the integers and the orbit questions they settle.

Run:  python demos/04_lattices.py
"""
from orbitkit import Lattice, hnf, snf, sod_gl, tcp_abelian
from orbitkit.zlattice import matmul, vecmat

M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
H, U = hnf(M)
print("Hermite form:", H, " U*M == H:", matmul(U, M) == H)
D, P, Q = snf(M)
print("Smith diagonal:", [D[i][i] for i in range(3)])

# GL_n(Z) moves a vector to any other vector with the same content (gcd of entries),
# so some image of x lies in L exactly when the first invariant factor of L divides it.
L = Lattice([[4, 0], [0, 6]], 2)
for x in ([2, 6], [12, 0], [3, 9]):
    d = sod_gl(x, L)
    extra = f" via alpha={d.witness} -> {vecmat(x, d.witness)}" if d.is_yes else ""
    print(f"  some image of {x} in L? {d.outcome}{extra}")

# Twisted conjugacy: is v = u + (I - A) x for some integer x?
A = [[0, 1], [1, 0]]
print(tcp_abelian(A, [1, 0], [0, 1]))
print(tcp_abelian(A, [1, 0], [0, 0]))
