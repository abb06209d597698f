"""Whitehead's algorithm for Aut(F_n)-orbits of elements, and searches built on it.

Automorphisms act on the right and compose left to right: applying the
sequence ``[m1, m2]`` to ``w`` means ``apply(m2, apply(m1, w))``.
"""

from __future__ import annotations

import itertools
import json
import threading
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .decision import CapacityError, Decision, InputError
from .stallings import StallingsGraph, build_subgroup_graph, enumerate_subgroup_elements
from .words import (
    Word,
    canonical_cyclic,
    conjugacy_decide,
    cyclic_reduce,
    letter_char,
    letter_key,
    parse_word,
)

MAX_RANK = 4
MAX_MIN_LENGTH = 12


def _substitute(images, w: Word) -> Word:
    out = []
    for x in w.letters:
        if x > 0:
            out.extend(images[x - 1])
        else:
            out.extend(-y for y in reversed(images[-x - 1]))
    return Word(tuple(out), w.rank)


@dataclass(frozen=True)
class WhiteheadMove:
    """A Whitehead automorphism.

    Type ``"I"``: generator ``i`` maps to ``signs[i-1] * perm[i-1]``.
    Type ``"II"``: ``multiplier`` is a signed letter ``a`` and ``cut`` a set of
    letters containing ``a`` but not ``a^-1``; a letter ``x != a^{+-1}`` maps to
    ``a^-1 x`` / ``x a`` / ``a^-1 x a`` according to whether ``x^-1``, ``x`` or
    both lie in the cut.
    """

    kind: str
    rank: int
    perm: tuple = ()
    signs: tuple = ()
    multiplier: int = 0
    cut: frozenset = frozenset()

    def __post_init__(self):
        n = self.rank
        if self.kind == "I":
            if sorted(self.perm) != list(range(1, n + 1)) or len(self.signs) != n:
                raise InputError(f"bad type I move {self.perm!r} {self.signs!r}")
            if any(s not in (1, -1) for s in self.signs):
                raise InputError(f"bad signs {self.signs!r}")
        elif self.kind == "II":
            a = self.multiplier
            if not 1 <= abs(a) <= n:
                raise InputError(f"multiplier {a} out of range")
            object.__setattr__(self, "cut", frozenset(self.cut))
            if a not in self.cut or -a in self.cut:
                raise InputError("cut set must contain the multiplier and not its inverse")
            if any(x == 0 or abs(x) > n for x in self.cut):
                raise InputError(f"cut letter out of range in {sorted(self.cut)!r}")
        else:
            raise InputError(f"unknown move kind {self.kind!r}")

    @property
    def images(self) -> tuple:
        return _move_images(self)

    def apply(self, w: Word) -> Word:
        if w.rank != self.rank:
            raise InputError(f"rank mismatch: move rank {self.rank}, word rank {w.rank}")
        return _substitute(self.images, w)

    def inverse(self) -> "WhiteheadMove":
        if self.kind == "I":
            perm = [0] * self.rank
            signs = [0] * self.rank
            for i, (p, s) in enumerate(zip(self.perm, self.signs), start=1):
                perm[p - 1] = i
                signs[p - 1] = s
            return WhiteheadMove("I", self.rank, tuple(perm), tuple(signs))
        a = self.multiplier
        return WhiteheadMove("II", self.rank, multiplier=-a, cut=(self.cut - {a}) | {-a})

    def to_json(self) -> dict:
        if self.kind == "I":
            return {"type": "I", "perm": list(self.perm), "signs": list(self.signs)}
        cut = sorted(self.cut, key=letter_key)
        return {"type": "II", "multiplier": letter_char(self.multiplier),
                "cut": [letter_char(x) for x in cut]}

    @classmethod
    def from_json(cls, data: dict, rank: int) -> "WhiteheadMove":
        try:
            if data["type"] == "I":
                return cls("I", rank, tuple(data["perm"]), tuple(data["signs"]))
            if data["type"] == "II":
                a = _single_letter(data["multiplier"], rank)
                cut = frozenset(_single_letter(c, rank) for c in data["cut"])
                return cls("II", rank, multiplier=a, cut=cut)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed move {data!r}") from exc
        raise InputError(f"unknown move type in {data!r}")

    def __repr__(self):
        return f"WhiteheadMove({self.to_json()})"


def _single_letter(text: str, rank: int) -> int:
    w = parse_word(text, rank)
    if len(w) != 1:
        raise InputError(f"expected a single letter, got {text!r}")
    return w[0]


@lru_cache(maxsize=None)
def _move_images(m: WhiteheadMove) -> tuple:
    if m.kind == "I":
        return tuple((s * p,) for p, s in zip(m.perm, m.signs))
    a = m.multiplier
    images = []
    for x in range(1, m.rank + 1):
        if x == abs(a):
            images.append((x,))
            continue
        pre = (-a,) if -x in m.cut else ()
        post = (a,) if x in m.cut else ()
        images.append(pre + (x,) + post)
    return tuple(images)


def inner_move(letter: int, rank: int) -> WhiteheadMove:
    """The type II move acting as ``w -> letter^-1 w letter``."""
    cut = frozenset(x for i in range(1, rank + 1) for x in (i, -i) if x != -letter)
    return WhiteheadMove("II", rank, multiplier=letter, cut=cut)


@lru_cache(maxsize=None)
def type_two_moves(rank: int) -> tuple:
    """Non-trivial type II moves: multiplier ascending (a < A < b ...), then cut bitmask."""
    letters = sorted((s * i for i in range(1, rank + 1) for s in (1, -1)), key=letter_key)
    moves = []
    for a in letters:
        others = [x for x in letters if x not in (a, -a)]
        for mask in range(1, 1 << len(others)):
            cut = {a} | {x for j, x in enumerate(others) if mask >> j & 1}
            moves.append(WhiteheadMove("II", rank, multiplier=a, cut=frozenset(cut)))
    return tuple(moves)


@lru_cache(maxsize=None)
def type_one_moves(rank: int) -> tuple:
    moves = []
    for perm in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            if perm == tuple(range(1, rank + 1)) and all(s == 1 for s in signs):
                continue
            moves.append(WhiteheadMove("I", rank, perm, signs))
    return tuple(moves)


class MoveSequence:
    """A composable certificate: a list of Whitehead moves applied in order."""

    def __init__(self, moves=(), rank: int | None = None):
        self.moves = tuple(moves)
        if rank is None:
            if not self.moves:
                raise InputError("rank required for an empty move sequence")
            rank = self.moves[0].rank
        self.rank = rank
        if any(m.rank != rank for m in self.moves):
            raise InputError("moves of different ranks")

    def __len__(self):
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def __add__(self, other: "MoveSequence") -> "MoveSequence":
        return MoveSequence(self.moves + other.moves, self.rank)

    def __eq__(self, other):
        return isinstance(other, MoveSequence) and self.moves == other.moves and self.rank == other.rank

    def apply(self, w: Word) -> Word:
        for m in self.moves:
            w = m.apply(w)
        return w

    def inverse(self) -> "MoveSequence":
        return MoveSequence([m.inverse() for m in reversed(self.moves)], self.rank)

    def automorphism(self) -> "Automorphism":
        gens = [Word.generator(i, self.rank) for i in range(1, self.rank + 1)]
        inv = self.inverse()
        return Automorphism([self.apply(g) for g in gens], [inv.apply(g) for g in gens])

    def to_json(self) -> list:
        return [m.to_json() for m in self.moves]

    @classmethod
    def from_json(cls, data, rank: int) -> "MoveSequence":
        if isinstance(data, str):
            data = json.loads(data)
        return cls([WhiteheadMove.from_json(d, rank) for d in data], rank)

    def __repr__(self):
        return f"MoveSequence({self.to_json()})"


class Automorphism:
    """An endomorphism of F_n given by generator images, optionally with its inverse.

    When ``inverse_images`` are supplied both composites are checked to be the
    identity on every generator.
    """

    def __init__(self, images, inverse_images=None):
        self.images = tuple(images)
        if not self.images:
            raise InputError("an automorphism needs at least one generator image")
        self.rank = self.images[0].rank
        if any(w.rank != self.rank for w in self.images) or len(self.images) != self.rank:
            raise InputError("need one image per generator, all of the same rank")
        self.inverse_images = None if inverse_images is None else tuple(inverse_images)
        if self.inverse_images is not None:
            if len(self.inverse_images) != self.rank or any(w.rank != self.rank for w in self.inverse_images):
                raise InputError("need one inverse image per generator")
            for i in range(1, self.rank + 1):
                g = Word.generator(i, self.rank)
                if _substitute(self._raw_inv, _substitute(self._raw, g)) != g or \
                        _substitute(self._raw, _substitute(self._raw_inv, g)) != g:
                    raise InputError("inverse_images do not invert images")

    @property
    def _raw(self):
        return tuple(w.letters for w in self.images)

    @property
    def _raw_inv(self):
        return tuple(w.letters for w in self.inverse_images)

    @classmethod
    def identity(cls, rank: int) -> "Automorphism":
        gens = [Word.generator(i, rank) for i in range(1, rank + 1)]
        return cls(gens, gens)

    @classmethod
    def from_json(cls, data) -> "Automorphism":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            images = data["images"]
            rank = int(data.get("rank", len(images)))
            inv = data.get("inverse_images")
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"malformed automorphism JSON: {data!r}") from exc
        parse = lambda w: w if isinstance(w, Word) else parse_word(w, rank)
        return cls([parse(w) for w in images], None if inv is None else [parse(w) for w in inv])

    def to_json(self) -> dict:
        out = {"images": [str(w) for w in self.images]}
        if self.inverse_images is not None:
            out["inverse_images"] = [str(w) for w in self.inverse_images]
        return out

    def apply(self, w: Word) -> Word:
        if w.rank != self.rank:
            raise InputError(f"rank mismatch: automorphism rank {self.rank}, word rank {w.rank}")
        return _substitute(self._raw, w)

    def inverse(self) -> "Automorphism":
        if self.inverse_images is None:
            raise InputError("inverse images not supplied")
        return Automorphism(self.inverse_images, self.images)

    def then(self, other: "Automorphism") -> "Automorphism":
        """Composite ``w -> other(self(w))``."""
        imgs = [other.apply(w) for w in self.images]
        inv = None
        if self.inverse_images is not None and other.inverse_images is not None:
            inv = [self.inverse().apply(w) for w in other.inverse_images]
        return Automorphism(imgs, inv)

    def is_automorphism(self) -> bool:
        """Exact test: the images generate F_n (free groups are Hopfian)."""
        return build_subgroup_graph(self.images, self.rank).is_whole_group()

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.images == other.images

    def __repr__(self):
        return f"Automorphism({self.to_json()})"


def apply(aut, w: Word) -> Word:
    """Image of ``w`` under an Automorphism, WhiteheadMove or MoveSequence."""
    return aut.apply(w)


def cyclic_length(w: Word) -> int:
    return len(cyclic_reduce(w)[0])


def whitehead_minimize(w: Word) -> tuple:
    """Return ``(w_min, moves)``: ``moves`` sends ``w`` to a conjugate of ``w_min``,
    a cyclically reduced word of minimal length in the Aut(F_n)-orbit of ``w``.

    At each step the first strictly shortening type II move (canonical order) is taken.
    """
    core = cyclic_reduce(w)[0]
    moves = []
    table = type_two_moves(w.rank)
    improved = True
    while improved and len(core) > 1:
        improved = False
        for m in table:
            img = cyclic_reduce(m.apply(core))[0]
            if len(img) < len(core):
                core = img
                moves.append(m)
                improved = True
                break
    return core, MoveSequence(moves, w.rank)


def is_primitive(w: Word) -> bool:
    return len(whitehead_minimize(w)[0]) == 1


class _Component:
    """BFS tree of one connected component of the level graph."""

    def __init__(self, root: Word):
        self.root = root
        self.parent = {root: None}

    def path_from_root(self, node: Word) -> list:
        moves = []
        while self.parent[node] is not None:
            prev, m = self.parent[node]
            moves.append(m)
            node = prev
        return moves[::-1]


_components: dict = {}
_components_lock = threading.Lock()


def _bfs(comp: _Component, moves) -> _Component:
    queue = deque([comp.root])
    n = len(comp.root)
    while queue:
        node = queue.popleft()
        for m in moves:
            img = canonical_cyclic(m.apply(node))
            if len(img) == n and img not in comp.parent:
                comp.parent[img] = (node, m)
                queue.append(img)
    return comp


def _level_component(start: Word) -> _Component:
    """Component of ``start`` among cyclic words of its length joined by length-preserving moves."""
    hit = _components.get(start)
    if hit is not None:
        return hit
    moves = type_one_moves(start.rank) + type_two_moves(start.rank)
    # root the tree at the shortlex-least node so certificates never depend on query order
    probe = _bfs(_Component(start), moves)
    root = min(probe.parent, key=Word.sort_key)
    comp = probe if root == start else _bfs(_Component(root), moves)
    with _components_lock:
        existing = _components.get(start)
        if existing is not None:
            return existing
        for node in comp.parent:
            _components.setdefault(node, comp)
    return comp


def _chain(frm: Word, to: Word) -> MoveSequence | None:
    """Level moves taking the cyclic word ``frm`` to a conjugate of ``to`` (both canonical)."""
    comp = _level_component(frm)
    if to not in comp.parent:
        return None
    back = MoveSequence(comp.path_from_root(frm), frm.rank).inverse()
    return back + MoveSequence(comp.path_from_root(to), frm.rank)


def aut_orbit_decide(u: Word, v: Word, max_rank: int = MAX_RANK, max_length: int = MAX_MIN_LENGTH) -> Decision:
    """Decide whether ``apply(alpha, u) == v`` for some automorphism ``alpha``; complete.

    A yes carries a MoveSequence sending ``u`` exactly to ``v``.
    """
    if u.rank != v.rank:
        raise InputError(f"rank mismatch: {u.rank} vs {v.rank}")
    rank = u.rank
    if rank > max_rank:
        raise CapacityError(f"orbit decision limited to rank <= {max_rank}")
    u_min, sigma_u = whitehead_minimize(u)
    v_min, sigma_v = whitehead_minimize(v)
    if len(u_min) != len(v_min):
        return Decision.no("minimal-lengths-differ", lengths=[len(u_min), len(v_min)])
    if len(u_min) > max_length:
        raise CapacityError(f"minimal length {len(u_min)} exceeds cap {max_length}")
    chain = _chain(canonical_cyclic(u_min), canonical_cyclic(v_min))
    if chain is None:
        return Decision.no("level-component-exhausted", length=len(u_min))
    beta = sigma_u + chain + sigma_v.inverse()
    image = beta.apply(u)
    conj = conjugacy_decide(image, v)
    assert conj.is_yes, "moves preserve conjugacy classes"
    inner = MoveSequence([inner_move(x, rank) for x in conj.witness.letters], rank)
    alpha = beta + inner
    assert alpha.apply(u) == v
    return Decision.yes(alpha, minimal_length=len(u_min))


def sod_aut_bounded(x: Word, H: StallingsGraph, L: int) -> Decision:
    """Search for ``h`` in ``H`` with ``|h| <= L`` in the Aut-orbit of ``x``.

    Returns yes with ``{"h": h, "moves": alpha}`` or unknown(L); never no, since
    no general procedure for this orbit problem is known.
    """
    if x.rank != H.rank:
        raise InputError(f"rank mismatch: word rank {x.rank}, subgroup rank {H.rank}")
    x_len = len(whitehead_minimize(x)[0])
    for h in enumerate_subgroup_elements(H, L):
        if len(whitehead_minimize(h)[0]) != x_len:
            continue
        d = aut_orbit_decide(x, h)
        if d.is_yes:
            return Decision.yes({"h": h, "moves": d.witness})
    return Decision.unknown(L)


def contains_primitive_bounded(H: StallingsGraph, L: int) -> Decision:
    return sod_aut_bounded(Word.generator(1, H.rank), H, L)


def cyclic_od_bounded(phi: Automorphism, u: Word, v: Word, K: int) -> Decision:
    """Search ``k = 0, 1, -1, ..., K, -K`` for ``phi^k(u)`` conjugate to ``v``.

    Without inverse images only ``k >= 0`` is searched and the unknown verdict
    says so.  Never answers no.
    """
    if K < 0:
        raise InputError("exponent bound must be non-negative")
    if u.rank != phi.rank or v.rank != phi.rank:
        raise InputError("rank mismatch")
    backward = phi.inverse_images is not None
    inv = phi.inverse() if backward else None
    fwd = bwd = u
    for k in range(0, K + 1):
        if k > 0:
            fwd = phi.apply(fwd)
        d = conjugacy_decide(fwd, v)
        if d.is_yes:
            return Decision.yes({"k": k, "conjugator": d.witness})
        if k > 0 and backward:
            bwd = inv.apply(bwd)
            d = conjugacy_decide(bwd, v)
            if d.is_yes:
                return Decision.yes({"k": -k, "conjugator": d.witness})
    if backward:
        return Decision.unknown(K)
    return Decision.unknown(K, restricted="k>=0")
