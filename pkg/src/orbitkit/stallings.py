"""Finitely generated subgroups of F_n as folded core graphs (Stallings graphs)."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .decision import CapacityError, Decision, InputError
from .words import Word, letter_key

MAX_ENUMERATION_LENGTH = 16


def _labels(rank: int):
    """Signed labels in the canonical order a < A < b < B < ..."""
    return sorted((s * i for i in range(1, rank + 1) for s in (1, -1)), key=letter_key)


@dataclass(frozen=True)
class StallingsGraph:
    """Folded, cored, BFS-numbered graph of a subgroup; basepoint is vertex 0.

    ``edges`` holds positive-label edges ``(src, dst, label)``; ``out`` maps each
    vertex to ``{signed label: target}`` including the implicit inverse edges.
    """

    rank: int
    num_vertices: int
    edges: tuple
    out: tuple

    basepoint = 0

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def read(self, w: Word, start: int = 0):
        """Follow ``w`` from ``start``; return the vertex path, or None if it falls off."""
        if w.rank != self.rank:
            raise InputError(f"rank mismatch: graph rank {self.rank}, word rank {w.rank}")
        path = [start]
        v = start
        for x in w.letters:
            v = self.out[v].get(x)
            if v is None:
                return None
            path.append(v)
        return path

    def is_whole_group(self) -> bool:
        return self.num_vertices == 1 and len(self.out[0]) == 2 * self.rank

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "vertices": self.num_vertices,
            "basepoint": 0,
            "edges": [list(e) for e in self.edges],
        }


def graph_from_json(data) -> StallingsGraph:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        rank = int(data["rank"])
        nv = int(data["vertices"])
        base = int(data.get("basepoint", 0))
        edges = [(int(s), int(d), int(l)) for s, d, l in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph JSON: {data!r}") from exc
    for s, d, l in edges:
        if not (0 <= s < nv and 0 <= d < nv and 1 <= l <= rank):
            raise InputError(f"bad edge {[s, d, l]!r}")
    return _fold(rank, nv, base, edges)


class _Folder:
    def __init__(self, rank: int):
        self.rank = rank
        self.parent: list = []
        self.out: list = []

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def add_edge(self, u: int, label: int, v: int):
        pending = [(u, label, v)]
        while pending:
            a, l, b = pending.pop()
            a, b = self.find(a), self.find(b)
            c = self.out[a].get(l)
            if c is not None:
                self._merge(self.find(c), b, pending)
                continue
            d = self.out[b].get(-l)
            if d is not None:
                self._merge(self.find(d), a, pending)
                continue
            self.out[a][l] = b
            self.out[b][-l] = a

    def _merge(self, keep: int, gone: int, pending: list):
        if keep == gone:
            return
        edges = list(self.out[gone].items())
        self.out[gone] = {}
        for l, t in edges:
            t = self.find(t)
            if t != gone:
                del self.out[t][-l]
        self.parent[gone] = keep
        for l, t in edges:
            pending.append((keep, l, self.find(t)))

    def canonical(self) -> dict:
        """Adjacency of representatives, with every target resolved."""
        adj = {}
        for v in range(len(self.parent)):
            if self.find(v) == v:
                adj[v] = {l: self.find(t) for l, t in self.out[v].items()}
        return adj


def _core(adj: dict, base: int) -> dict:
    """Drop degree-1 vertices (other than the basepoint) and unreachable parts."""
    reach = {base}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for t in adj[v].values():
            if t not in reach:
                reach.add(t)
                queue.append(t)
    adj = {v: dict(e) for v, e in adj.items() if v in reach}
    stack = [v for v in adj if v != base and len(adj[v]) == 1]
    while stack:
        v = stack.pop()
        if v not in adj or len(adj[v]) != 1 or v == base:
            continue
        (l, t), = adj[v].items()
        del adj[v]
        del adj[t][-l]
        if t != base and len(adj[t]) == 1:
            stack.append(t)
    return adj


def _renumber(rank: int, adj: dict, base: int) -> StallingsGraph:
    labels = _labels(rank)
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for l in labels:
            t = adj[v].get(l)
            if t is not None and t not in order:
                order[t] = len(order)
                queue.append(t)
    n = len(order)
    out = [None] * n
    for v, i in order.items():
        out[i] = {l: order[t] for l, t in sorted(adj[v].items(), key=lambda e: letter_key(e[0]))}
    edges = tuple(
        (i, out[i][l], l) for i in range(n) for l in range(1, rank + 1) if l in out[i]
    )
    return StallingsGraph(rank, n, edges, tuple(out))


def _fold(rank: int, nv: int, base: int, edges) -> StallingsGraph:
    f = _Folder(rank)
    for _ in range(nv):
        f.new_vertex()
    for s, d, l in edges:
        f.add_edge(s, l, d)
    root = f.find(base)
    return _renumber(rank, _core(f.canonical(), root), root)


def build_subgroup_graph(gens, rank: int | None = None) -> StallingsGraph:
    """Stallings graph of ``<gens>``: wedge of loops, folded, cored, BFS-numbered.

    ``rank`` is needed only when ``gens`` is empty.
    """
    gens = list(gens)
    if not gens and rank is None:
        raise InputError("rank required for an empty generating set")
    if rank is None:
        rank = gens[0].rank
    for g in gens:
        if g.rank != rank:
            raise InputError(f"rank mismatch: {g.rank} vs {rank}")
    f = _Folder(rank)
    base = f.new_vertex()
    for g in gens:
        if not g:
            continue
        v = base
        for i, x in enumerate(g.letters):
            t = base if i == len(g) - 1 else f.new_vertex()
            f.add_edge(v, x, t)
            v = t
    root = f.find(base)
    return _renumber(rank, _core(f.canonical(), root), root)


def member(g: StallingsGraph, w: Word) -> Decision:
    """Complete membership test; a yes carries the closed vertex path."""
    path = g.read(w)
    if path is not None and path[-1] == 0:
        return Decision.yes(path)
    if path is None:
        return Decision.no("path-leaves-graph")
    return Decision.no("path-not-closed", end=path[-1])


def _tree_words(g: StallingsGraph) -> list:
    """Label of the BFS-tree path from the basepoint to each vertex."""
    labels = _labels(g.rank)
    paths = [None] * g.num_vertices
    paths[0] = ()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for l in labels:
            t = g.out[v].get(l)
            if t is not None and paths[t] is None:
                paths[t] = paths[v] + (l,)
                queue.append(t)
    return paths


def subgroup_basis(g: StallingsGraph) -> list:
    """Free basis: one word per positive edge outside the BFS spanning tree."""
    paths = _tree_words(g)
    tree = set()
    for v in range(1, g.num_vertices):
        p = paths[v]
        # the last tree edge into v, stored as a positive-label edge
        u = g.read(Word(p[:-1], g.rank))[-1]
        l = p[-1]
        tree.add((u, v, l) if l > 0 else (v, u, -l))
    basis = []
    for s, d, l in g.edges:
        if (s, d, l) in tree:
            continue
        basis.append(Word(paths[s] + (l,), g.rank) * Word(paths[d], g.rank).inverse())
    return basis


def enumerate_subgroup_elements(g: StallingsGraph, L: int, max_length: int = MAX_ENUMERATION_LENGTH) -> list:
    """All elements of length <= L, sorted shortlex (a < A < b < B ...)."""
    if L < 0:
        raise InputError("length bound must be non-negative")
    if L > max_length:
        raise CapacityError(f"enumeration length {L} exceeds cap {max_length}")
    found = []
    stack = [(0, ())]
    while stack:
        v, word = stack.pop()
        if v == 0:
            found.append(word)
        if len(word) == L:
            continue
        last = word[-1] if word else 0
        for l, t in g.out[v].items():
            if l != -last:
                stack.append((t, word + (l,)))
    words = [Word(w, g.rank) for w in found]
    words.sort(key=Word.sort_key)
    return words
