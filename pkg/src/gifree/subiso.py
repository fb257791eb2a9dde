"""Induced subgraph search: ``H ⊆_i G`` and H-freeness."""

from __future__ import annotations

from collections.abc import Iterable
from functools import lru_cache

from .graph import Graph, complement, is_connected

Embedding = tuple[int, ...]


def search_order(H: Graph) -> list[int]:
    """Connectivity-respecting order of the vertices of ``H``.

    Each component starts at its highest-degree vertex; afterwards the vertex
    with most already-ordered neighbours goes next. Ties go to higher degree,
    then smaller index.
    """
    deg = H.degrees()
    placed = 0
    order: list[int] = []
    while len(order) < H.n:
        # pick the next vertex among those adjacent to the placed ones
        best = None
        best_key = None
        for v in range(H.n):
            if placed >> v & 1:
                continue
            key = ((H.adj[v] & placed).bit_count(), deg[v], -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        order.append(best)
        placed |= 1 << best
    return order


def _candidates(G: Graph, H: Graph) -> list[int]:
    """Per H-vertex mask of G-vertices passing the degree filters."""
    gdeg = G.degrees()
    hdeg = H.degrees()
    out = []
    for u in range(H.n):
        need = hdeg[u]
        need_co = H.n - 1 - hdeg[u]
        m = 0
        for c in range(G.n):
            if gdeg[c] >= need and G.n - 1 - gdeg[c] >= need_co:
                m |= 1 << c
        out.append(m)
    return out


def iter_induced(G: Graph, H: Graph) -> Iterable[Embedding]:
    """All induced embeddings of ``H`` into ``G`` in search order."""
    nh = H.n
    if nh == 0:
        yield ()
        return
    if nh > G.n:
        return
    order = search_order(H)
    pos = {u: k for k, u in enumerate(order)}
    nbrs = [[p for p in range(k) if H.adj[order[k]] >> order[p] & 1] for k in range(nh)]
    non = [[p for p in range(k) if not H.adj[order[k]] >> order[p] & 1] for k in range(nh)]
    base = [c for c in (_candidates(G, H)[u] for u in order)]
    gadj = G.adj
    full = G.full_mask()
    img = [0] * nh
    used = 0

    def cand(k: int) -> int:
        m = base[k] & ~used
        for p in nbrs[k]:
            m &= gadj[img[p]]
        for p in non[k]:
            m &= full & ~gadj[img[p]]
        return m

    stack = [cand(0)]
    while stack:
        k = len(stack) - 1
        m = stack[k]
        if not m:
            stack.pop()
            if stack:
                used &= ~(1 << img[k - 1])
            continue
        low = m & -m
        stack[k] = m ^ low
        img[k] = low.bit_length() - 1
        if k + 1 == nh:
            emb = [0] * nh
            for u in range(nh):
                emb[u] = img[pos[u]]
            yield tuple(emb)
            continue
        used |= low
        stack.append(cand(k + 1))


def find_induced(G: Graph, H: Graph) -> Embedding | None:
    """First induced embedding of ``H`` into ``G``, or ``None``.

    ``emb[u]`` is the image of vertex ``u`` of ``H``.
    """
    for emb in iter_induced(G, H):
        return emb
    return None


# --- existence search ---------------------------------------------------------
#
# Existence only needs one embedding up to automorphisms of H, so the search
# below breaks the symmetry of H with ordering conditions img[a] < img[b],
# picks the pattern vertex with the fewest candidates next, and prunes as soon
# as any unplaced vertex runs out of candidates. A disconnected pattern is
# searched as its (connected) complement inside the complement of G.


def _complement_adj(G: Graph) -> tuple[int, ...]:
    full = G.full_mask()
    return tuple(full & ~a & ~(1 << v) for v, a in enumerate(G.adj))


def _search(gadj, nadj, H: Graph, cand: list[int], order_conds: tuple[tuple[int, int], ...]) -> bool:
    """True iff the pattern embeds with each vertex inside its mask."""
    nh = H.n
    hadj = H.adj
    hdeg = H.degrees()
    placed = [False] * nh
    after = [[] for _ in range(nh)]  # u placed -> (w, True) means img[w] > img[u]
    for a, b in order_conds:
        after[a].append((b, True))
        after[b].append((a, False))

    def go(cand: list[int], left: int) -> bool:
        if left == 0:
            return True
        u = -1
        best = None
        for w in range(nh):
            if placed[w]:
                continue
            c = cand[w]
            if not c:
                return False
            key = (c.bit_count(), -hdeg[w], w)
            if best is None or key < best:
                u, best = w, key
        m = cand[u]
        placed[u] = True
        while m:
            low = m & -m
            m ^= low
            g = low.bit_length() - 1
            nxt = list(cand)
            ok = True
            for w in range(nh):
                if placed[w]:
                    continue
                c = nxt[w] & ~low & (gadj[g] if hadj[u] >> w & 1 else nadj[g])
                nxt[w] = c
                if not c:
                    ok = False
                    break
            if ok:
                for w, greater in after[u]:
                    if placed[w]:
                        continue
                    nxt[w] &= ~((low << 1) - 1) if greater else low - 1
                    if not nxt[w]:
                        ok = False
                        break
            if ok and go(nxt, left - 1):
                placed[u] = False
                return True
        placed[u] = False
        return False

    return go(cand, nh)


@lru_cache(maxsize=1024)
def symmetry_conditions(H: Graph) -> tuple[tuple[int, int], ...]:
    """Pairs ``(a, b)`` such that every embedding of ``H`` composed with a
    unique automorphism of ``H`` satisfies ``img[a] < img[b]`` for all pairs."""
    hadj = H.adj
    nadj = _complement_adj(H)
    full = H.full_mask()
    fixed: list[int] = []
    conds: list[tuple[int, int]] = []
    while True:
        base = [full] * H.n
        for v in fixed:
            base[v] = 1 << v
        chosen = None
        for v in range(H.n):
            if v in fixed:
                continue
            orbit = []
            for w in range(H.n):
                if w == v or w in fixed:
                    continue
                cand = list(base)
                cand[v] = 1 << w
                if _search(hadj, nadj, H, cand, ()):
                    orbit.append(w)
            if orbit:
                chosen = (v, orbit)
                break
        if chosen is None:
            return tuple(conds)
        v, orbit = chosen
        conds += [(v, w) for w in orbit]
        fixed.append(v)


@lru_cache(maxsize=1 << 16)
def contains_induced(G: Graph, H: Graph) -> bool:
    """``H ⊆_i G``."""
    if H.n > G.n or H.m > G.m:
        return False
    if H.n == 0:
        return True
    use_complement = not is_connected(H) or (
        is_connected(complement(H)) and 4 * G.m > G.n * (G.n - 1)
    )
    if use_complement:
        G, H = complement(G), complement(H)
    cand = _candidates(G, H)
    return _search(G.adj, _complement_adj(G), H, cand, symmetry_conditions(H))


def is_free(G: Graph, family: Iterable[Graph]) -> bool:
    return not any(contains_induced(G, H) for H in family)


def find_forbidden(G: Graph, family: Iterable[Graph]) -> tuple[int, Embedding] | None:
    """Index of the first contained member and its embedding, or ``None``."""
    for i, H in enumerate(family):
        emb = find_induced(G, H)
        if emb is not None:
            return i, emb
    return None


def is_induced_embedding(G: Graph, H: Graph, emb: Embedding) -> bool:
    if len(emb) != H.n or len(set(emb)) != H.n:
        return False
    if any(not 0 <= x < G.n for x in emb):
        return False
    for u in range(H.n):
        for v in range(u + 1, H.n):
            if H.has_edge(u, v) != G.has_edge(emb[u], emb[v]):
                return False
    return True
