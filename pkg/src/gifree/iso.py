"""Canonical labelling and isomorphism testing.

Individualization-refinement: equitable colour refinement on ordered
partitions, individualizing vertices of the first smallest non-singleton
cell and keeping the largest leaf under a relabelling-invariant order.
Automorphisms discovered at equivalent leaves, plus transpositions of twin
vertices, prune sibling subtrees.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .graph import Graph, GraphError, iter_bits

DEFAULT_LIMIT = 512


class SizeLimitError(GraphError):
    """Raised when a graph exceeds the canonical labelling size limit."""


@dataclass(frozen=True)
class Canon:
    """``canonical_order[i]`` is the input vertex placed at position ``i``."""

    canonical_order: tuple[int, ...]
    certificate: bytes

    def hex(self) -> str:
        return self.certificate.hex()


def refine(adj: tuple[int, ...], cells: list[int], splitters: list[int]) -> tuple[list[int], tuple]:
    """Equitable refinement of the ordered partition ``cells`` (vertex masks).

    A cell splits by the number of neighbours each vertex has in a splitter;
    fragments are ordered by that number. Returns the refined cells and a
    trace of the splits, which is invariant under relabelling.
    """
    queue = deque(splitters)
    pending = set(splitters)
    trace = []
    while queue:
        W = queue.popleft()
        if W not in pending:
            continue
        pending.discard(W)
        touched = 0
        for w in iter_bits(W):
            touched |= adj[w]
        out = []
        for C in cells:
            if not C & (C - 1) or not C & touched:
                out.append(C)
                continue
            groups: dict[int, int] = {}
            for v in iter_bits(C):
                c = (adj[v] & W).bit_count()
                groups[c] = groups.get(c, 0) | (1 << v)
            if len(groups) == 1:
                out.append(C)
                continue
            keys = sorted(groups)
            frags = [groups[k] for k in keys]
            trace.append((len(out), tuple(keys), tuple(f.bit_count() for f in frags)))
            out.extend(frags)
            if C in pending:
                pending.discard(C)
                add = frags
            else:
                sizes = [f.bit_count() for f in frags]
                skip = sizes.index(max(sizes))
                add = frags[:skip] + frags[skip + 1:]
            for f in add:
                if f not in pending:
                    pending.add(f)
                    queue.append(f)
        cells = out
    return cells, tuple(trace)


def _leaf_cert(adj: tuple[int, ...], order: list[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    cert = []
    for v in order:
        m = 0
        for u in iter_bits(adj[v]):
            m |= 1 << pos[u]
        cert.append(m)
    return tuple(cert)


def _pack(n: int, cert: tuple[int, ...]) -> bytes:
    bits = 0
    for i in range(n):
        bits = (bits << (n - i - 1)) | (cert[i] >> (i + 1))
    nbits = n * (n - 1) // 2
    return n.to_bytes(4, "big") + bits.to_bytes((nbits + 7) // 8, "big")


class _Search:
    def __init__(self, G: Graph):
        self.adj = G.adj
        self.n = G.n
        self.best_key = None
        self.best_order = None
        self.first_key = None
        self.first_order = None
        self.first_prefix: list[int] = []
        self.best_prefix: list[int] = []
        self.generators: list[list[int]] = []
        self.nodes = 0

    def run(self) -> tuple[list[int], tuple[int, ...]]:
        full = (1 << self.n) - 1
        cells, trace = refine(self.adj, [full] if self.n else [], [full] if self.n else [])
        self.visit(cells, [], (trace,))
        return self.best_order, self.best_key[1]

    def _orbit_blocked(self, v: int, explored: list[int], prefix: list[int]) -> bool:
        adj = self.adj
        for u in explored:
            # a twin transposition fixes everything else
            if adj[u] & ~(1 << v) == adj[v] & ~(1 << u):
                return True
        gens = [g for g in self.generators if all(g[x] == x for x in prefix)]
        if not gens:
            return False
        # orbit of v under the pointwise stabilizer of the prefix
        seen = {v}
        frontier = [v]
        targets = set(explored)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = g[x]
                if y not in seen:
                    if y in targets:
                        return True
                    seen.add(y)
                    frontier.append(y)
        return False

    def visit(self, cells: list[int], prefix: list[int], invpath: tuple) -> int | None:
        """Explore a node; a returned depth asks ancestors to unwind to it."""
        self.nodes += 1
        d = len(prefix)
        if self.best_key is not None:
            ref = self.best_key[0][: len(invpath)]
            if invpath < ref:
                return None
        target_idx = -1
        target_size = 0
        for i, C in enumerate(cells):
            if C & (C - 1):
                s = C.bit_count()
                if target_idx < 0 or s < target_size:
                    target_idx, target_size = i, s
        if target_idx < 0:
            return self.leaf(cells, prefix, invpath)
        C = cells[target_idx]
        explored: list[int] = []
        for v in iter_bits(C):
            if self._orbit_blocked(v, explored, prefix):
                continue
            vm = 1 << v
            child = cells[:target_idx] + [vm, C ^ vm] + cells[target_idx + 1:]
            child, trace = refine(self.adj, child, [vm])
            jump = self.visit(child, prefix + [v], invpath + ((target_idx, trace),))
            if jump is not None and jump < d:
                return jump
            explored.append(v)
        return None

    def leaf(self, cells: list[int], prefix: list[int], invpath: tuple) -> int | None:
        order = [c.bit_length() - 1 for c in cells]
        key = (invpath, _leaf_cert(self.adj, order))
        if self.first_key is None:
            self.first_key, self.first_order, self.first_prefix = key, order, prefix
            self.best_key, self.best_order, self.best_prefix = key, order, prefix
            return None
        jump = None
        for ref_key, ref_order, ref_prefix in (
            (self.first_key, self.first_order, self.first_prefix),
            (self.best_key, self.best_order, self.best_prefix),
        ):
            if key != ref_key:
                continue
            gamma = [0] * self.n
            for a, b in zip(ref_order, order):
                gamma[a] = b
            self.generators.append(gamma)
            # the subtree below the divergence point is the image of an
            # already explored sibling subtree under gamma
            k = 0
            while k < len(prefix) and prefix[k] == ref_prefix[k]:
                k += 1
            jump = k if jump is None else min(jump, k)
        if key > self.best_key:
            self.best_key, self.best_order, self.best_prefix = key, order, prefix
        return jump


@lru_cache(maxsize=4096)
def _canon_cached(G: Graph) -> Canon:
    search = _Search(G)
    order, cert = search.run()
    return Canon(tuple(order), _pack(G.n, cert))


def canonical_form(G: Graph, limit: int = DEFAULT_LIMIT) -> Canon:
    """Relabelling-invariant certificate plus the ordering that produced it."""
    if G.n > limit:
        raise SizeLimitError(f"graph has {G.n} vertices, canonical labelling limit is {limit}")
    return _canon_cached(G)


def canonical_graph(G: Graph, limit: int = DEFAULT_LIMIT) -> Graph:
    order = canonical_form(G, limit).canonical_order
    pos = [0] * G.n
    for i, v in enumerate(order):
        pos[v] = i
    from .graph import relabel

    return relabel(G, pos)


def is_isomorphism(G: Graph, H: Graph, f) -> bool:
    """True iff ``f`` (sequence or dict) is an isomorphism from ``G`` to ``H``."""
    if G.n != H.n or len(f) != G.n:
        return False
    img = [f[v] for v in range(G.n)]
    if sorted(img) != list(range(H.n)):
        return False
    for v in range(G.n):
        m = 0
        for u in iter_bits(G.adj[v]):
            m |= 1 << img[u]
        if m != H.adj[img[v]]:
            return False
    return True


def are_isomorphic(G: Graph, H: Graph, limit: int = DEFAULT_LIMIT) -> tuple[int, ...] | None:
    """An isomorphism ``f`` from ``G`` to ``H`` as a tuple, or ``None``."""
    if G.n != H.n or G.m != H.m or G.degree_sequence() != H.degree_sequence():
        return None
    cg = canonical_form(G, limit)
    ch = canonical_form(H, limit)
    if cg.certificate != ch.certificate:
        return None
    f = [0] * G.n
    for a, b in zip(cg.canonical_order, ch.canonical_order):
        f[a] = b
    if not is_isomorphism(G, H, f):
        raise AssertionError("canonical labelling produced an invalid isomorphism")
    return tuple(f)
