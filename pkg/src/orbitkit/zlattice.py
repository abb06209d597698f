"""Exact integer linear algebra on Z^n: normal forms, lattices, and the
abelian orbit problems built on them.

Matrices are lists of rows of Python ints.  Lattices are row spans.
"""

from __future__ import annotations

import math
import threading
from functools import reduce

from .decision import CapacityError, Decision, InputError

MAX_ORDER = 10**6


# -- basic matrix helpers -------------------------------------------------

def as_matrix(rows, ncols: int | None = None) -> list:
    m = [[int(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if any(len(r) != ncols for r in m):
        raise InputError(f"ragged matrix: expected {ncols} columns")
    return m


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list:
    return [[0] * n for _ in range(m)]


def transpose(M) -> list:
    return [list(c) for c in zip(*M)]


def matmul(A, B) -> list:
    if A and len(A[0]) != len(B):
        raise InputError(f"shape mismatch: {len(A)}x{len(A[0])} times {len(B)}x{len(B[0]) if B else 0}")
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vecmat(x, A) -> list:
    """Row vector times matrix."""
    if len(x) != len(A):
        raise InputError(f"dimension mismatch: vector {len(x)}, matrix {len(A)} rows")
    return [sum(x[i] * A[i][j] for i in range(len(x))) for j in range(len(A[0]))] if A else []


def matvec(A, x) -> list:
    """Matrix times column vector."""
    if A and len(A[0]) != len(x):
        raise InputError(f"dimension mismatch: matrix {len(A[0])} columns, vector {len(x)}")
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def det(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [r[:] for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(M) -> bool:
    return len(M) > 0 and all(len(r) == len(M) for r in M) and abs(det(M)) == 1


def require_unimodular(A):
    if not is_unimodular(A):
        raise InputError("matrix is not unimodular (|det| != 1)")


def xgcd(a: int, b: int) -> tuple:
    """``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# -- normal forms ---------------------------------------------------------

def hnf(M) -> tuple:
    """Row Hermite normal form: ``(H, U)`` with ``U`` unimodular and ``U M = H``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)``, zero rows last.
    """
    H = [r[:] for r in M]
    m = len(H)
    n = len(H[0]) if H else 0
    U = identity(m)
    row = 0
    for col in range(n):
        if row == m:
            break
        for i in range(row + 1, m):
            if H[i][col] == 0:
                continue
            a, b = H[row][col], H[i][col]
            g, s, t = xgcd(a, b)
            p, q = a // g, b // g
            # [[s, t], [-q, p]] has determinant 1
            for X in (H, U):
                r0, r1 = X[row], X[i]
                X[row] = [s * x + t * y for x, y in zip(r0, r1)]
                X[i] = [p * y - q * x for x, y in zip(r0, r1)]
        if H[row][col] == 0:
            continue
        if H[row][col] < 0:
            H[row] = [-x for x in H[row]]
            U[row] = [-x for x in U[row]]
        piv = H[row][col]
        for i in range(row):
            f = H[i][col] // piv
            if f:
                H[i] = [x - f * y for x, y in zip(H[i], H[row])]
                U[i] = [x - f * y for x, y in zip(U[i], U[row])]
        row += 1
    return H, U


def hnf_rank(H) -> int:
    return sum(1 for r in H if any(r))


def snf(M) -> tuple:
    """Smith normal form: ``(D, U, V)`` with ``U M V = D``, ``d_1 | d_2 | ...``, all ``d_i >= 0``."""
    D = [r[:] for r in M]
    m = len(D)
    n = len(D[0]) if D else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for X in (D, V):
            for r in X:
                r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                return D, U, V
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    D[i] = [x - q * y for x, y in zip(D[i], D[t])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    for X in (D, V):
                        for r in X:
                            r[j] -= q * r[t]
                if D[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            # pull the offending row into row t so the next pass lowers the pivot
            i, _ = bad
            D[t] = [x + y for x, y in zip(D[t], D[i])]
            U[t] = [x + y for x, y in zip(U[t], U[i])]
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


def elementary_divisors(M) -> list:
    D, _, _ = snf(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def unimodular_inverse(A) -> list:
    """Exact inverse of a unimodular matrix (its HNF is the identity, so ``U = A^-1``)."""
    require_unimodular(A)
    H, U = hnf(A)
    assert H == identity(len(A))
    return U


def complete_to_basis(v) -> list:
    """Unimodular matrix whose first row is the primitive vector ``v``."""
    if content(v) != 1:
        raise InputError(f"vector {list(v)} is not primitive")
    H, U = hnf([[x] for x in v])
    return transpose(unimodular_inverse(U))


# -- vectors and lattices -------------------------------------------------

def content(v) -> int:
    """gcd of the entries (0 for the zero vector)."""
    return reduce(math.gcd, (abs(int(x)) for x in v), 0)


def root_abelian(v) -> tuple:
    c = content(v)
    if c == 0:
        raise InputError("the zero vector has no root")
    return [x // c for x in v], c


class Lattice:
    """Sublattice of Z^n spanned by the rows of ``generators``.

    The Hermite and Smith forms are computed lazily and published once.
    """

    def __init__(self, generators, dim: int | None = None):
        gens = [list(map(int, g)) for g in generators]
        if dim is None:
            if not gens:
                raise InputError("dimension required for a lattice with no generators")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise InputError(f"generator of wrong dimension (expected {dim})")
        self.dim = dim
        self.generators = gens
        self._hnf = None
        self._snf = None
        self._lock = threading.Lock()

    @classmethod
    def full(cls, n: int, scale: int = 1) -> "Lattice":
        return cls([[scale * x for x in r] for r in identity(n)], n)

    @property
    def hnf(self) -> tuple:
        if self._hnf is None:
            value = hnf(self.generators) if self.generators else ([], [])
            with self._lock:
                if self._hnf is None:
                    self._hnf = value
        return self._hnf

    @property
    def basis(self) -> list:
        H, _ = self.hnf
        return [r for r in H if any(r)]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def snf(self) -> tuple:
        if self._snf is None:
            value = snf(self.generators) if self.generators else ([], [], identity(self.dim))
            with self._lock:
                if self._snf is None:
                    self._snf = value
        return self._snf

    def elementary_divisors(self) -> list:
        D, _, _ = self.snf
        return [D[i][i] for i in range(min(len(D), self.dim)) if D[i][i]]

    def d1(self) -> int:
        """First elementary divisor, as the gcd of all generator entries."""
        return reduce(math.gcd, (abs(x) for g in self.generators for x in g), 0)

    def is_full_rank(self) -> bool:
        return self.rank == self.dim

    def coefficients(self, v):
        """Integer ``c`` with ``c . generators == v``, or None."""
        if len(v) != self.dim:
            raise InputError(f"dimension mismatch: lattice in Z^{self.dim}, vector of length {len(v)}")
        H, U = self.hnf
        rest = list(map(int, v))
        ch = [0] * len(H)
        col = 0
        for r, row in enumerate(H):
            if not any(row):
                break
            while row[col] == 0:
                if rest[col]:
                    return None
                col += 1
            q, rem = divmod(rest[col], row[col])
            if rem:
                return None
            ch[r] = q
            if q:
                rest = [x - q * y for x, y in zip(rest, row)]
            col += 1
        if any(rest):
            return None
        return vecmat(ch, U) if U else []

    def __contains__(self, v) -> bool:
        return self.coefficients(v) is not None

    def __repr__(self):
        return f"Lattice({self.generators}, dim={self.dim})"


def lattice_member(L: Lattice, v) -> Decision:
    c = L.coefficients(v)
    if c is None:
        return Decision.no("hnf-back-substitution")
    return Decision.yes(c)


def quotient_exponent(L: Lattice) -> int:
    """Largest elementary divisor ``d`` of a full-rank lattice; ``d Z^n`` lies in ``L``."""
    if not L.is_full_rank():
        raise InputError("quotient exponent needs a full-rank lattice")
    return L.elementary_divisors()[-1]


def order_mod(A, m: int, cap: int = MAX_ORDER) -> int:
    """Least ``T >= 1`` with ``A^T = I (mod m)``."""
    require_unimodular(A)
    if m < 2:
        raise InputError("modulus must be at least 2")
    n = len(A)
    I = identity(n)
    Am = [[x % m for x in r] for r in A]
    P = Am
    for T in range(1, cap + 1):
        if P == I:
            return T
        P = [[sum(P[i][k] * Am[k][j] for k in range(n)) % m for j in range(n)] for i in range(n)]
    raise CapacityError(f"order of matrix mod {m} exceeds cap {cap}")


# -- abelian orbit problems -----------------------------------------------

def sod_gl(x, L: Lattice) -> Decision:
    """Decide whether ``x . alpha`` lies in ``L`` for some ``alpha`` in GL_n(Z).

    Such ``alpha`` exists iff ``x = 0`` or the gcd of the generator entries of
    ``L`` divides the content of ``x``.  A yes carries a unimodular witness.
    """
    x = list(map(int, x))
    if len(x) != L.dim:
        raise InputError(f"dimension mismatch: x has length {len(x)}, lattice in Z^{L.dim}")
    n = L.dim
    c = content(x)
    if c == 0:
        return Decision.yes(identity(n), image=x)
    d1 = L.d1()
    if d1 == 0:
        return Decision.no("zero-lattice")
    if c % d1:
        return Decision.no("gcd", content=c, d1=d1)
    _, _, V = L.snf
    h0 = unimodular_inverse(V)[0]
    h = [c * t for t in h0]
    P = complete_to_basis([t // c for t in x])
    Q = complete_to_basis(h0)
    alpha = matmul(unimodular_inverse(P), Q)
    assert vecmat(x, alpha) == h
    return Decision.yes(alpha, image=h, coefficients=L.coefficients(h))


def tcp_abelian(A, u, v) -> Decision:
    """Twisted conjugacy in Z^n: find ``x`` with ``(I - A) x = v - u`` (column action)."""
    require_unimodular(A)
    n = len(A)
    if len(u) != n or len(v) != n:
        raise InputError("dimension mismatch")
    B = [[int(i == j) - A[i][j] for j in range(n)] for i in range(n)]
    # columns of B span the image; as rows, they are the rows of B^T
    c = Lattice(transpose(B), n).coefficients([b - a for a, b in zip(u, v)])
    if c is None:
        return Decision.no("not-in-image")
    return Decision.yes(c)
