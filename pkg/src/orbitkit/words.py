"""Elements of the free group F_n as freely reduced words.

A letter is a nonzero int: ``i`` is the i-th generator and ``-i`` its inverse.
Text form uses ``a..z`` for generators and ``A..Z`` for inverses; the identity
is written ``1``.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from typing import Iterable, Sequence

from .decision import Decision, InputError

MAX_TEXT_RANK = 26


def letter_key(letter: int) -> int:
    """Position of a letter in the order a < A < b < B < ..."""
    return 2 * (abs(letter) - 1) + (letter < 0)


def letter_char(letter: int) -> str:
    c = string.ascii_lowercase[abs(letter) - 1]
    return c if letter > 0 else c.upper()


def free_reduce(letters: Iterable[int]) -> tuple:
    out: list = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word over a rank-``rank`` alphabet.

    The constructor reduces its input, so ``Word((1, -1), 2)`` is the identity.
    """

    letters: tuple
    rank: int

    def __post_init__(self):
        if not 1 <= self.rank:
            raise InputError(f"rank must be positive, got {self.rank}")
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) > self.rank:
                raise InputError(f"letter {x} out of range for rank {self.rank}")
        object.__setattr__(self, "letters", free_reduce(letters))

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    @classmethod
    def generator(cls, i: int, rank: int) -> "Word":
        return cls((i,), rank)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        return self.letters[item]

    def __bool__(self):
        return bool(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return "".join(letter_char(x) for x in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r}, rank={self.rank})"

    def _check(self, other: "Word"):
        if not isinstance(other, Word):
            raise TypeError(f"expected Word, got {type(other).__name__}")
        if other.rank != self.rank:
            raise InputError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(self.letters + other.letters, self.rank)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k), self.rank)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)), self.rank)

    __invert__ = inverse

    def sort_key(self):
        """Shortlex key with letters ordered a < A < b < B < ..."""
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))

    def __lt__(self, other: "Word"):
        return self.sort_key() < other.sort_key()

    def to_json(self) -> dict:
        return {"rank": self.rank, "letters": [[abs(x), 1 if x > 0 else -1] for x in self.letters]}


def parse_word(text: str, rank: int) -> Word:
    """Parse ``a..z``/``A..Z`` text (``""`` or ``"1"`` for the identity)."""
    if not 1 <= rank <= MAX_TEXT_RANK:
        raise InputError(f"text words support rank 1..{MAX_TEXT_RANK}, got {rank}")
    text = text.strip()
    if text in ("", "1"):
        return Word((), rank)
    letters = []
    for ch in text:
        if ch in string.ascii_lowercase:
            i = ord(ch) - ord("a") + 1
            sign = 1
        elif ch in string.ascii_uppercase:
            i = ord(ch) - ord("A") + 1
            sign = -1
        else:
            raise InputError(f"illegal character {ch!r} in word {text!r}")
        if i > rank:
            raise InputError(f"letter {ch!r} in word {text!r} is out of range for rank {rank}")
        letters.append(sign * i)
    return Word(tuple(letters), rank)


def word_from_json(data) -> Word:
    """Inverse of :meth:`Word.to_json`; accepts a dict or a JSON string."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        rank = int(data["rank"])
        letters = []
        for i, s in data["letters"]:
            if s not in (1, -1) or int(i) < 1:
                raise InputError(f"bad letter entry {[i, s]!r}")
            letters.append(int(i) * s)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed word JSON: {data!r}") from exc
    return Word(tuple(letters), rank)


def concat(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


def cyclic_reduce(w: Word) -> tuple:
    """Return ``(core, c)`` with ``w = c * core * c^-1`` and ``core`` cyclically reduced."""
    x = w.letters
    i, j = 0, len(x) - 1
    while i < j and x[i] == -x[j]:
        i += 1
        j -= 1
    return Word(x[i:j + 1], w.rank), Word(x[:i], w.rank)


def is_cyclically_reduced(w: Word) -> bool:
    return len(w) < 2 or w[0] != -w[-1]


def rotate(w: Word, j: int) -> Word:
    return Word(w.letters[j:] + w.letters[:j], w.rank)


def canonical_cyclic(w: Word) -> Word:
    """Least rotation (shortlex) of the cyclic reduction: a conjugacy-class key."""
    core, _ = cyclic_reduce(w)
    if len(core) < 2:
        return core
    keys = [letter_key(x) for x in core.letters]
    n = len(keys)
    best = min(range(n), key=lambda j: keys[j:] + keys[:j])
    return rotate(core, best)


def conjugacy_decide(u: Word, v: Word) -> Decision:
    """Decide whether ``x^-1 u x = v`` for some ``x``; complete.

    The witness is the shortlex-least among the shortest conjugators produced
    by the rotations matching the two cyclic cores.
    """
    u._check(v)
    core_u, cu = cyclic_reduce(u)
    core_v, cv = cyclic_reduce(v)
    if len(core_u) != len(core_v):
        return Decision.no("cyclic-words-differ")
    n = len(core_u)
    if n == 0:
        x = cu * cv.inverse()
        return Decision.yes(x, offset=0)
    candidates = []
    for j in range(n):
        if core_u.letters[j:] + core_u.letters[:j] != core_v.letters:
            continue
        # core_u = p s, core_v = s p = p^-1 core_u p = s core_u s^-1
        p = Word(core_u.letters[:j], u.rank)
        s = Word(core_u.letters[j:], u.rank)
        for piece in (p, s.inverse()):
            candidates.append((cu * piece * cv.inverse(), j))
    if not candidates:
        return Decision.no("cyclic-words-differ")
    x, j = min(candidates, key=lambda c: c[0].sort_key())
    return Decision.yes(x, offset=j)


def is_conjugate_by(u: Word, v: Word, x: Word) -> bool:
    return x.inverse() * u * x == v


def word_root(w: Word) -> tuple:
    """Return ``(root, m)`` with ``w = root**m`` and ``m`` maximal."""
    if not w:
        raise InputError("the identity has no root")
    core, c = cyclic_reduce(w)
    x = core.letters
    n = len(x)
    for d in range(1, n + 1):
        if n % d == 0 and x[:d] * (n // d) == x:
            r = Word(x[:d], w.rank)
            return c * r * c.inverse(), n // d
    raise AssertionError("unreachable")
