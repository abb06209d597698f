"""Orbits of a single unimodular matrix: does ``A^k x`` ever land in ``u + L``?

Vectors are columns here: the orbit of ``x`` under ``<A>`` is ``{A^k x : k in Z}``.
The decider is complete when ``L`` has full rank, and for every ``L`` in
dimension 2 (via the finite-order / parabolic / hyperbolic split of GL_2(Z));
otherwise it sieves residues modulo small integers and searches a bounded window.

The dimension-2 case analysis is a reconstruction: the classical literature
treats it as routine and gives no details.  In dimension 3 and up with a
lower-rank ``L`` an ``unknown`` answer is possible; whether every subgroup of
GL_3(Z) has decidable orbits is open, so no complete procedure is claimed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .decision import CapacityError, Decision, InputError
from .zlattice import (
    MAX_ORDER,
    Lattice,
    as_matrix,
    identity,
    matmul,
    matvec,
    order_mod,
    quotient_exponent,
    require_unimodular,
    unimodular_inverse,
)

DEFAULT_MAX_EXPONENT = 10**4
DEFAULT_MODULI = (4, 9, 5, 7, 11)
FINITE_ORDER_PROBE = 60

FINITE_ORDER = "FiniteOrder"
PARABOLIC = "Parabolic"
HYPERBOLIC = "Hyperbolic"


def power(A, k: int) -> list:
    """Exact ``A^k`` by binary powering; negative ``k`` uses the integer inverse."""
    require_unimodular(A)
    base = A if k >= 0 else unimodular_inverse(A)
    k = abs(k)
    result = identity(len(A))
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


@dataclass(frozen=True)
class GL2Class:
    kind: str
    trace: int
    det: int
    order: int | None = None

    @property
    def discriminant(self) -> int:
        return self.trace ** 2 - 4 * self.det


def classify_gl2(A) -> GL2Class:
    """Finite order (``A^12 = I``), parabolic (discriminant 0) or hyperbolic."""
    if len(A) != 2 or any(len(r) != 2 for r in A):
        raise InputError("classify_gl2 needs a 2x2 matrix")
    require_unimodular(A)
    t = A[0][0] + A[1][1]
    d = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    I = identity(2)
    if power(A, 12) == I:
        order = next(m for m in (1, 2, 3, 4, 6, 12) if power(A, m) == I)
        return GL2Class(FINITE_ORDER, t, d, order)
    if t * t - 4 * d == 0:
        return GL2Class(PARABOLIC, t, d)
    return GL2Class(HYPERBOLIC, t, d)


@dataclass
class OrbitQuery:
    """Is ``A^k x - u`` in ``L`` for some integer ``k``?"""

    A: list
    x: list
    u: list
    L: Lattice
    max_exponent: int = DEFAULT_MAX_EXPONENT
    moduli: tuple = DEFAULT_MODULI
    order_cap: int = MAX_ORDER

    def __post_init__(self):
        self.A = as_matrix(self.A)
        n = len(self.A)
        if any(len(r) != n for r in self.A):
            raise InputError("A must be square")
        require_unimodular(self.A)
        self.x = [int(t) for t in self.x]
        self.u = [int(t) for t in self.u]
        if not isinstance(self.L, Lattice):
            self.L = Lattice(self.L, n)
        if len(self.x) != n or len(self.u) != n or self.L.dim != n:
            raise InputError(f"dimension mismatch: A is {n}x{n}")
        if self.max_exponent < 0:
            raise InputError("max_exponent must be non-negative")

    @property
    def n(self) -> int:
        return len(self.A)

    @classmethod
    def from_json(cls, data) -> "OrbitQuery":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            A = as_matrix(data["A"])
            n = len(A)
            kwargs = {}
            if "max_exponent" in data:
                kwargs["max_exponent"] = int(data["max_exponent"])
            if "moduli" in data:
                kwargs["moduli"] = tuple(int(m) for m in data["moduli"])
            return cls(A, data["x"], data.get("u", [0] * n), Lattice(data.get("L", []), n), **kwargs)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed orbit query: {exc}") from exc

    def to_json(self) -> dict:
        return {"A": self.A, "x": self.x, "u": self.u, "L": self.L.generators,
                "max_exponent": self.max_exponent, "moduli": list(self.moduli)}


def _exponent_key(k: int):
    return (abs(k), k < 0)


def _smallest_in_progression(k0: int, step: int) -> int:
    if step == 0:
        return k0
    r = k0 % step
    return min(r, r - step, key=_exponent_key)


def _offset(q: OrbitQuery, k: int) -> list:
    return [a - b for a, b in zip(matvec(power(q.A, k), q.x), q.u)]


def _yes(q: OrbitQuery, k: int, case: str) -> Decision:
    c = q.L.coefficients(_offset(q, k))
    assert c is not None, f"witness k={k} failed exact verification"
    return Decision.yes(k, coefficients=c, case=case)


def _hits(q: OrbitQuery, ks) -> int | None:
    for k in ks:
        if _offset(q, k) in q.L:
            return k
    return None


def _window(K: int):
    yield 0
    for k in range(1, K + 1):
        yield k
        yield -k


def _finite_order(A, probe: int = FINITE_ORDER_PROBE) -> int | None:
    I = identity(len(A))
    P = A
    for m in range(1, probe + 1):
        if P == I:
            return m
        P = matmul(P, A)
    return None


def _decide_periodic(q: OrbitQuery, period: int, case: str) -> Decision:
    hits = [r for r in range(period) if _offset(q, r) in q.L]
    if not hits:
        return Decision.no("period-exhausted", period=period, case=case)
    k = min((c for r in hits for c in (r, r - period)), key=_exponent_key)
    return _yes(q, k, case)


def _full_rank(q: OrbitQuery) -> Decision:
    d = quotient_exponent(q.L)
    if d == 1:
        return _yes(q, 0, "full-rank")
    T = order_mod(q.A, d, q.order_cap)
    n = q.n
    Ad = [[a % d for a in r] for r in q.A]
    w = [a % d for a in q.x]
    hits = []
    for r in range(T):
        if [(a - b) % d for a, b in zip(w, q.u)] in q.L:
            hits.append(r)
        w = [sum(Ad[i][j] * w[j] for j in range(n)) % d for i in range(n)]
    if not hits:
        return Decision.no("period-exhausted", period=T, modulus=d, case="full-rank")
    k = min((c for r in hits for c in (r, r - T)), key=_exponent_key)
    return _yes(q, k, "full-rank")


def _affine_solutions(a, b, L: Lattice):
    """``(k0, step)`` with ``{k : a + k b in L} = k0 + step Z``, or None if empty."""
    n = len(a)
    rows = Lattice([list(b)] + L.generators, n)
    e = rows.coefficients([-t for t in a])
    if e is None:
        return None
    H, U = rows.hnf
    step = 0
    for hr, ur in zip(H, U):
        if not any(hr):
            step = math.gcd(step, ur[0])
    return e[0], step


def _parabolic(q: OrbitQuery, cls: GL2Class) -> Decision:
    eps = cls.trace // 2
    N = [[eps * t for t in r] for r in q.A]
    w = [s - t for s, t in zip(matvec(N, q.x), q.x)]
    # A^k x = eps^k (x + k w)
    candidates = []
    parities = (None,) if eps == 1 else (0, 1)
    for par in parities:
        s = 1 if par in (None, 0) else -1
        a = [s * xi - ui for xi, ui in zip(q.x, q.u)]
        b = [s * wi for wi in w]
        sol = _affine_solutions(a, b, q.L)
        if sol is None:
            continue
        k0, step = sol
        if par is not None:
            if step % 2 == 0:
                if k0 % 2 != par:
                    continue
            else:
                if k0 % 2 != par:
                    k0 += step
                step *= 2
        candidates.append(_smallest_in_progression(k0, step))
    if not candidates:
        return Decision.no("affine-unsolvable", case="parabolic")
    return _yes(q, min(candidates, key=_exponent_key), "parabolic")


def _sqrt_bounds(D: int, bits: int) -> tuple:
    s = math.isqrt(D << (2 * bits))
    return Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits)


def _abs_bounds(lo: Fraction, hi: Fraction) -> tuple:
    if lo > 0:
        return lo, hi
    if hi < 0:
        return -hi, -lo
    return Fraction(0), max(-lo, hi)


def _growth_bound(t: int, det: int, g0: int, g1: int, c: int) -> int:
    """``K0`` such that ``|g(k)| > |c|`` whenever ``|k| > K0``.

    ``g`` satisfies ``g(k+2) = t g(k+1) - det g(k)`` with ``|det| = 1`` and
    irrational eigenvalues, so ``g(k) = alpha lam^k + beta lam'^k`` with
    ``|lam| > 1 = |lam lam'|``.  Bounds use rational enclosures of ``sqrt(D)``
    rounded outward, refined until ``alpha`` and ``beta`` are separated from 0.
    """
    D = t * t - 4 * det
    sigma = 1 if t > 0 else -1
    bits = 32
    while True:
        s_lo, s_hi = _sqrt_bounds(D, bits)
        # lam' = (t - sigma s)/2 ; alpha sqrt(D) = sigma (g1 - lam' g0); beta sqrt(D) = sigma (lam g0 - g1)
        a_ends = [g1 - Fraction(t - sigma * s, 2) * g0 for s in (s_lo, s_hi)]
        b_ends = [Fraction(t + sigma * s, 2) * g0 - g1 for s in (s_lo, s_hi)]
        a_lo, a_hi = _abs_bounds(min(a_ends), max(a_ends))
        b_lo, b_hi = _abs_bounds(min(b_ends), max(b_ends))
        if a_lo > 0 and b_lo > 0:
            break
        bits *= 2
    alpha_lo, alpha_hi = a_lo / s_hi, a_hi / s_lo
    beta_lo, beta_hi = b_lo / s_hi, b_hi / s_lo
    lam_lo = (abs(t) + s_lo) / 2
    assert lam_lo > 1

    def first_escape(lead: Fraction, tail: Fraction) -> int:
        k, val = 0, lead
        while val <= abs(c) + tail:
            k += 1
            val *= lam_lo
        return k

    return max(first_escape(alpha_lo, beta_hi), first_escape(beta_lo, alpha_hi))


def _det2(v, h) -> int:
    return v[0] * h[1] - v[1] * h[0]


def _hyperbolic(q: OrbitQuery, cls: GL2Class) -> Decision:
    if not any(q.x):
        return Decision.no("period-exhausted", period=1, case="hyperbolic-zero-orbit")
    h = q.L.basis[0] if q.L.rank == 1 else [0, 1]
    g0 = _det2(q.x, h)
    g1 = _det2(matvec(q.A, q.x), h)
    c = _det2(q.u, h)
    K0 = _growth_bound(cls.trace, cls.det, g0, g1, c)
    k = _hits(q, _window(K0))
    if k is None:
        return Decision.no("growth-bound", bound=K0, case="hyperbolic")
    return _yes(q, k, "hyperbolic")


def _dimension_two(q: OrbitQuery) -> Decision:
    cls = classify_gl2(q.A)
    if cls.kind == FINITE_ORDER:
        return _decide_periodic(q, cls.order, "finite-order")
    if cls.kind == PARABOLIC:
        return _parabolic(q, cls)
    return _hyperbolic(q, cls)


def _residues(q: OrbitQuery, m: int) -> tuple:
    """``(T, admissible)``: residues of ``k`` mod ``T`` allowed by reduction mod ``m``."""
    T = order_mod(q.A, m, q.order_cap)
    n = q.n
    target = Lattice(q.L.generators + [[m * e for e in r] for r in identity(n)], n)
    Am = [[a % m for a in r] for r in q.A]
    w = [a % m for a in q.x]
    ok = set()
    for r in range(T):
        if [(a - b) % m for a, b in zip(w, q.u)] in target:
            ok.add(r)
        w = [sum(Am[i][j] * w[j] for j in range(n)) % m for i in range(n)]
    return T, ok


def _sieve_search(q: OrbitQuery) -> Decision:
    sieves = []
    for m in q.moduli:
        try:
            T, ok = _residues(q, m)
        except CapacityError:
            continue
        if not ok:
            return Decision.no("modular-obstruction", modulus=m, period=T, case="sieve")
        sieves.append((T, ok))
    K = q.max_exponent
    fwd = list(q.x)
    bwd = list(q.x)
    Ainv = unimodular_inverse(q.A)
    for k in range(0, K + 1):
        if k:
            fwd = matvec(q.A, fwd)
            bwd = matvec(Ainv, bwd)
        for kk, vec in ((k, fwd), (-k, bwd)) if k else ((0, fwd),):
            if all(kk % T in ok for T, ok in sieves):
                if [a - b for a, b in zip(vec, q.u)] in q.L:
                    return _yes(q, kk, "sieve")
    return Decision.unknown(K, moduli=[m for m in q.moduli])


def orbit_coset_decide(q: OrbitQuery) -> Decision:
    """Decide whether ``A^k x`` lies in ``u + L`` for some integer ``k``.

    A yes carries the exponent of least absolute value (positive on ties) and
    the lattice coefficients of ``A^k x - u``.
    """
    if _offset(q, 0) in q.L:
        return _yes(q, 0, "trivial")
    if q.L.is_full_rank():
        return _full_rank(q)
    if q.n == 2:
        return _dimension_two(q)
    period = _finite_order(q.A)
    if period is not None:
        return _decide_periodic(q, period, "finite-order")
    return _sieve_search(q)


def orbit_equality_decide(A, x, y, max_exponent: int = DEFAULT_MAX_EXPONENT,
                          moduli=DEFAULT_MODULI) -> Decision:
    """Decide whether ``A^k x = y`` for some ``k`` (orbit decidability of ``<A>``)."""
    A = as_matrix(A)
    n = len(A)
    q = OrbitQuery(A, x, y, Lattice([], n), max_exponent, tuple(moduli))
    if q.x == q.u:
        return _yes(q, 0, "trivial")
    if n != 2:
        # a finite orbit returns to x; one period then settles the question
        w = q.x
        for m in range(1, FINITE_ORDER_PROBE + 1):
            w = matvec(A, w)
            if w == q.x:
                return _decide_periodic(q, m, "finite-orbit")
    return orbit_coset_decide(q)
