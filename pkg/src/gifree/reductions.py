"""Gadget constructions mapping arbitrary graphs into restricted classes.

Each construction ``q`` satisfies ``G ≅ H  <=>  q(G) ≅ q(H)`` (for the
diamond/P6 and gem constructions after adding a dominating K4), and its
output avoids a fixed pair of induced subgraphs:

* ``diamond-2p3``: (diamond, 2P3)-free
* ``diamond-p6``: (diamond, P6)-free
* ``gem-p1-2p2``: (gem, P1+2P2)-free
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .graph import Graph, GraphError, add_dominating_clique, build

REDUCTIONS = ("diamond-2p3", "diamond-p6", "gem-p1-2p2")

FORBIDDEN_PAIRS = {
    "diamond-2p3": ("diamond", "2P3"),
    "diamond-p6": ("diamond", "P6"),
    "gem-p1-2p2": ("gem", "P1+2P2"),
}


@dataclass(frozen=True)
class GadgetGraph:
    """Reduction output with a role (``A``, ``B`` or ``C``) per vertex.

    ``part_classes[v]`` is the index of the source vertex (role ``A``) or
    source edge (roles ``B`` and ``C``) that ``v`` was created for; edges are
    indexed in the lexicographic order of ``G.edges()``.
    """

    graph: Graph
    parts: tuple[str, ...]
    part_classes: tuple[int, ...]

    def role_set(self, role: str) -> list[int]:
        return [v for v, r in enumerate(self.parts) if r == role]

    def classes(self, role: str) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, r in enumerate(self.parts):
            if r == role:
                out.setdefault(self.part_classes[v], []).append(v)
        return out

    def sidecar(self) -> str:
        """Lines ``vertex role class``."""
        return "".join(f"{v} {r} {c}\n" for v, (r, c) in enumerate(zip(self.parts, self.part_classes)))


def reduce_diamond_2p3(G: Graph) -> GadgetGraph:
    """Clique on ``V(G)``; each edge ``vw`` becomes a path ``v - v_w - w_v - w``."""
    n = G.n
    E = G.edges()
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    parts = ["A"] * n
    classes = list(range(n))
    for k, (v, w) in enumerate(E):
        vw, wv = n + 2 * k, n + 2 * k + 1
        edges += [(v, vw), (vw, wv), (wv, w)]
        parts += ["B", "B"]
        classes += [k, k]
    return GadgetGraph(build(n + 2 * len(E), edges), tuple(parts), tuple(classes))


def reduce_diamond_p6(G: Graph) -> GadgetGraph:
    """Independent ``A = V(G)`` complete to independent ``C = E(G)``; each
    edge ``e = vw`` becomes a path ``v - v_w - e - w_v - w``."""
    n = G.n
    E = G.edges()
    m = len(E)
    edges = [(a, n + k) for a in range(n) for k in range(m)]
    parts = ["A"] * n + ["C"] * m
    classes = list(range(n)) + list(range(m))
    for k, (v, w) in enumerate(E):
        e = n + k
        vw, wv = n + m + 2 * k, n + m + 2 * k + 1
        edges += [(v, vw), (vw, e), (e, wv), (wv, w)]
        parts += ["B", "B"]
        classes += [k, k]
    return GadgetGraph(build(n + 3 * m, edges), tuple(parts), tuple(classes))


def reduce_gem_p1_2p2(G: Graph, edge_order: Sequence[int] | None = None) -> GadgetGraph:
    """Complete multipartite ``A`` with ``|A_i| = d(v_i)``, complete
    multipartite ``B`` with one pair ``B_k`` per edge, and a perfect matching
    sending the two vertices of ``B_k`` into the classes of the endpoints of
    edge ``k``.

    Edges are processed in ascending order (or in ``edge_order``) and each
    takes the lowest free slot of the endpoint's class.
    """
    deg = G.degrees()
    isolated = [v for v in range(G.n) if deg[v] == 0]
    if isolated:
        raise GraphError(f"gem reduction needs a graph without isolated vertices, found {isolated}")
    E = G.edges()
    m = len(E)
    start = [0] * G.n
    for i in range(1, G.n):
        start[i] = start[i - 1] + deg[i - 1]
    na = 2 * m
    a_cls = [i for i in range(G.n) for _ in range(deg[i])]
    b_cls = [k for k in range(m) for _ in range(2)]
    cls = a_cls + b_cls
    N = na + 2 * m
    edges = []
    for x in range(N):
        for y in range(x + 1, N):
            same_side = (x < na) == (y < na)
            if same_side and cls[x] != cls[y]:
                edges.append((x, y))
    order = list(range(m)) if edge_order is None else list(edge_order)
    if sorted(order) != list(range(m)):
        raise GraphError("edge_order must be a permutation of the edge indices")
    nxt = list(start)
    for k in order:
        i1, i2 = E[k]
        b1, b2 = na + 2 * k, na + 2 * k + 1
        edges.append((b1, nxt[i1]))
        edges.append((b2, nxt[i2]))
        nxt[i1] += 1
        nxt[i2] += 1
    parts = ("A",) * na + ("B",) * (2 * m)
    return GadgetGraph(build(N, edges), parts, tuple(cls))


def reduce(G: Graph, which: str) -> GadgetGraph:
    if which == "diamond-2p3":
        return reduce_diamond_2p3(G)
    if which == "diamond-p6":
        return reduce_diamond_p6(G)
    if which == "gem-p1-2p2":
        return reduce_gem_p1_2p2(G)
    raise GraphError(f"unknown reduction {which!r}; expected one of {', '.join(REDUCTIONS)}")


def hardness_instance(G: Graph, which: str) -> GadgetGraph:
    """The gadget used to transfer isomorphism hardness.

    The diamond/P6 and gem constructions are applied to ``G`` plus a
    dominating K4, which fixes the roles of the parts under any isomorphism.
    """
    if which == "diamond-2p3":
        return reduce_diamond_2p3(G)
    if which not in REDUCTIONS:
        raise GraphError(f"unknown reduction {which!r}; expected one of {', '.join(REDUCTIONS)}")
    return reduce(add_dominating_clique(G, 4), which)
