"""Immutable simple graphs on vertices ``0..n-1`` with bitset adjacency.

Every operation here is a pure function returning a new :class:`Graph`.
Adjacency of vertex ``v`` is stored as a Python ``int`` whose bit ``u`` is set
iff ``uv`` is an edge, which keeps neighbourhood intersections cheap.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Raised for malformed graph input (bad endpoints, loops, overlaps)."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def iter_bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in ascending order."""
    return list(_bits(mask))


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """A finite simple undirected graph.

    Equality and hashing are by exact adjacency, not up to isomorphism.
    """

    __slots__ = ("_n", "_adj", "_hash")

    def __init__(self, n: int, adj: Sequence[int]):
        # trusted constructor; use build() for validated input
        self._n = n
        self._adj = tuple(adj)
        self._hash = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def adj(self) -> tuple[int, ...]:
        """Adjacency bitmasks, one per vertex."""
        return self._adj

    def __len__(self) -> int:
        return self._n

    def vertices(self) -> range:
        return range(self._n)

    def neighbors(self, v: int) -> list[int]:
        return iter_bits(self._adj[v])

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self._adj]

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(self.degrees(), reverse=True))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    @property
    def m(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        out = []
        for u, a in enumerate(self._adj):
            for v in _bits(a >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def closed_neighborhood(self, v: int) -> int:
        return self._adj[v] | (1 << v)

    def full_mask(self) -> int:
        return (1 << self._n) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, self._adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={self.edges()})"


def build(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Graph on ``n`` vertices with the given edges; duplicates collapse."""
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    adj = [0] * n
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"edge {(u, v)} is a self-loop")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, adj)


def from_adjacency(adj: Sequence[int]) -> Graph:
    """Validated construction from adjacency bitmasks."""
    n = len(adj)
    full = (1 << n) - 1
    for v, a in enumerate(adj):
        if a & ~full:
            raise GraphError(f"vertex {v} has a neighbour outside 0..{n - 1}")
        if a >> v & 1:
            raise GraphError(f"vertex {v} has a self-loop")
        for u in _bits(a):
            if not adj[u] >> v & 1:
                raise GraphError(f"adjacency is not symmetric on {(v, u)}")
    return Graph(n, adj)


def empty(n: int) -> Graph:
    return Graph(n, [0] * n)


def _check_vertices(G: Graph, S: Iterable[int]) -> list[int]:
    verts = sorted(set(S))
    for v in verts:
        if not 0 <= v < G.n:
            raise GraphError(f"vertex {v} is outside 0..{G.n - 1}")
    return verts


def complement(G: Graph) -> Graph:
    full = G.full_mask()
    return Graph(G.n, [full & ~a & ~(1 << v) for v, a in enumerate(G.adj)])


def disjoint_union(G: Graph, H: Graph) -> Graph:
    """``G + H``; vertices of ``H`` are shifted up by ``|V(G)|``."""
    k = G.n
    return Graph(G.n + H.n, list(G.adj) + [a << k for a in H.adj])


def union_all(graphs: Iterable[Graph]) -> Graph:
    out = empty(0)
    for H in graphs:
        out = disjoint_union(out, H)
    return out


def relabel(G: Graph, perm: Sequence[int]) -> Graph:
    """Graph with vertex ``v`` renamed ``perm[v]``; ``perm`` must be a bijection."""
    n = G.n
    if sorted(perm) != list(range(n)):
        raise GraphError("relabelling is not a permutation of the vertex set")
    adj = [0] * n
    for v, a in enumerate(G.adj):
        m = 0
        for u in _bits(a):
            m |= 1 << perm[u]
        adj[perm[v]] = m
    return Graph(n, adj)


def induced(G: Graph, S: Iterable[int]) -> Graph:
    """``G[S]`` with the vertices of ``S`` renumbered ``0..|S|-1`` in order."""
    verts = _check_vertices(G, S)
    index = {v: i for i, v in enumerate(verts)}
    adj = []
    for v in verts:
        m = 0
        for u in _bits(G.adj[v]):
            i = index.get(u)
            if i is not None:
                m |= 1 << i
        adj.append(m)
    return Graph(len(verts), adj)


def induced_mask(G: Graph, mask: int) -> Graph:
    return induced(G, _bits(mask))


def delete_vertices(G: Graph, S: Iterable[int]) -> Graph:
    drop = set(_check_vertices(G, S))
    return induced(G, [v for v in range(G.n) if v not in drop])


def subgraph_complementation(G: Graph, S: Iterable[int]) -> Graph:
    """Flip every adjacency with both ends in ``S``."""
    sm = mask_of(_check_vertices(G, S))
    adj = list(G.adj)
    for v in _bits(sm):
        adj[v] ^= sm & ~(1 << v)
    return Graph(G.n, adj)


def bipartite_complementation(G: Graph, S: Iterable[int], T: Iterable[int]) -> Graph:
    """Flip every adjacency with one end in ``S`` and the other in ``T``."""
    sm = mask_of(_check_vertices(G, S))
    tm = mask_of(_check_vertices(G, T))
    if sm & tm:
        raise GraphError(f"sets overlap on {iter_bits(sm & tm)}")
    adj = list(G.adj)
    for v in _bits(sm):
        adj[v] ^= tm
    for v in _bits(tm):
        adj[v] ^= sm
    return Graph(G.n, adj)


def add_dominating_clique(G: Graph, k: int) -> Graph:
    """Append ``k`` pairwise adjacent vertices, each adjacent to everything."""
    if k < 0:
        raise GraphError(f"k must be non-negative, got {k}")
    n = G.n + k
    full = (1 << n) - 1
    new = full ^ G.full_mask()
    adj = [a | new for a in G.adj]
    adj += [full & ~(1 << v) for v in range(G.n, n)]
    return Graph(n, adj)


class Component(tuple):
    """Sorted vertex tuple of one connected component."""

    @property
    def trivial(self) -> bool:
        return len(self) == 1

    @property
    def mask(self) -> int:
        return mask_of(self)


def component_masks(G: Graph, within: int | None = None) -> list[int]:
    """Connected components of ``G[within]`` as bitmasks, by smallest vertex."""
    todo = G.full_mask() if within is None else within
    out = []
    while todo:
        seed = todo & -todo
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= G.adj[v]
            nxt &= todo & ~comp
            comp |= nxt
            frontier = nxt
        out.append(comp)
        todo &= ~comp
    return out


def components(G: Graph) -> list[Component]:
    return [Component(iter_bits(c)) for c in component_masks(G)]


def is_connected(G: Graph) -> bool:
    return len(component_masks(G)) <= 1


def is_connected_mask(G: Graph, mask: int) -> bool:
    return len(component_masks(G, mask)) <= 1


def is_clique_mask(G: Graph, mask: int) -> bool:
    return all((G.adj[v] | (1 << v)) & mask == mask for v in _bits(mask))


def is_independent_mask(G: Graph, mask: int) -> bool:
    return all(G.adj[v] & mask == 0 for v in _bits(mask))


def is_complete_multipartite(G: Graph) -> list[list[int]] | None:
    """The partition into independent classes, or ``None``.

    Non-adjacency is an equivalence relation exactly on complete multipartite
    graphs, so the classes are the components of the complement and each must
    be independent in ``G``. Classes are listed by smallest vertex.
    """
    co = complement(G)
    classes = component_masks(co)
    for c in classes:
        if not is_independent_mask(G, c):
            return None
    return [iter_bits(c) for c in classes]


def false_twin_classes(G: Graph) -> list[int]:
    """Class id per vertex, grouping vertices with equal open neighbourhoods."""
    seen: dict[int, int] = {}
    return [seen.setdefault(a, len(seen)) for a in G.adj]


def twin_classes(G: Graph) -> list[int]:
    """Class id per vertex for the (true or false) twin relation.

    ``u ~ v`` iff ``N(u) - {v} == N(v) - {u}``; this is an equivalence
    relation whose classes are cliques or independent sets.
    """
    cls = [-1] * G.n
    nxt = 0
    # false twins share N(v); true twins share N[v]
    by_open: dict[int, list[int]] = {}
    by_closed: dict[int, list[int]] = {}
    for v, a in enumerate(G.adj):
        by_open.setdefault(a, []).append(v)
        by_closed.setdefault(a | (1 << v), []).append(v)
    for group in list(by_open.values()) + list(by_closed.values()):
        if len(group) < 2:
            continue
        ids = {cls[v] for v in group if cls[v] >= 0}
        cid = min(ids) if ids else nxt
        if not ids:
            nxt += 1
        for v in group:
            cls[v] = cid
    for v in range(G.n):
        if cls[v] < 0:
            cls[v] = nxt
            nxt += 1
    return cls
