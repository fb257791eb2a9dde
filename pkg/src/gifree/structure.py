"""K5-extension partitions and structural isomorphism drivers for
(crossed-house, P5)-free and (crossed-house, P2+P3)-free graphs.

Subroutines whose polynomial-time algorithms live elsewhere (isomorphism of
(K_t, P5)-free graphs, of (K_t, P2+P3)-free graphs, and of graphs of bounded
clique-width) are answered by the general isomorphism solver; every such
call is recorded in the returned :class:`GiDriverTrace` and logged.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field

from .catalog import make
from .graph import (
    Graph,
    GraphError,
    build,
    component_masks,
    induced,
    induced_mask,
    is_complete_multipartite,
    iter_bits,
    mask_of,
)
from .iso import are_isomorphic, is_isomorphism
from .subiso import find_forbidden, find_induced

log = logging.getLogger(__name__)


class PreconditionError(GraphError):
    """Input lies outside the class a routine is defined on."""

    def __init__(self, message: str, witness: tuple[int, ...] | None = None):
        super().__init__(message)
        self.witness = witness


class ClaimError(AssertionError):
    """A structural property that must hold on admissible input failed."""


# --- cliques ------------------------------------------------------------------


def iter_k5(G: Graph) -> Iterator[tuple[int, ...]]:
    """All vertex sets inducing K5, in lexicographic order."""
    adj = G.adj

    def go(clique: list[int], cand: int):
        if len(clique) == 5:
            yield tuple(clique)
            return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            # need enough candidates left to finish the clique
            rest = cand & adj[v]
            if rest.bit_count() >= 4 - len(clique):
                clique.append(v)
                yield from go(clique, rest)
                clique.pop()

    yield from go([], G.full_mask())


def find_k5(G: Graph) -> tuple[int, ...] | None:
    for K in iter_k5(G):
        return K
    return None


# --- K5-extension partition ---------------------------------------------------


@dataclass(frozen=True)
class K5Partition:
    """``V = A_1 + ... + A_p + N_1 + ... + N_p + B`` around a chosen K5.

    ``G[L]`` (``L`` the union of the ``A_i``) is complete multipartite with
    classes ``A_i``; vertices of ``N_i`` see ``A_i`` and no other class; ``B``
    sees no class. Classes are ordered by descending size, then smallest
    vertex.
    """

    K: tuple[int, ...]
    A: tuple[tuple[int, ...], ...]
    N: tuple[tuple[int, ...], ...]
    B: tuple[int, ...]

    @property
    def p(self) -> int:
        return len(self.A)

    @property
    def L(self) -> tuple[int, ...]:
        return tuple(sorted(v for a in self.A for v in a))

    @property
    def D(self) -> tuple[int, ...]:
        return tuple(sorted([v for nn in self.N for v in nn] + list(self.B)))


def crossed_house() -> Graph:
    return make("crossed-house")


def _canonical_classes(pairs: list[tuple[tuple[int, ...], tuple[int, ...]]]):
    return sorted(pairs, key=lambda an: (-len(an[0]), an[0][0]))


def partition_from_L(G: Graph, K: tuple[int, ...], L: int) -> K5Partition:
    classes = is_complete_multipartite(induced_mask(G, L))
    if classes is None:
        raise ClaimError(f"G[L] is not complete multipartite for K={K}")
    Lv = iter_bits(L)
    A = [tuple(Lv[i] for i in c) for c in classes]
    amask = [mask_of(a) for a in A]
    N: list[list[int]] = [[] for _ in A]
    B = []
    for v in range(G.n):
        if L >> v & 1:
            continue
        hits = [i for i, m in enumerate(amask) if G.adj[v] & m]
        if not hits:
            B.append(v)
        elif len(hits) == 1:
            N[hits[0]].append(v)
        else:
            raise ClaimError(f"vertex {v} outside L sees classes {hits} for K={K}")
    pairs = _canonical_classes([(a, tuple(nn)) for a, nn in zip(A, N)])
    return K5Partition(tuple(K), tuple(a for a, _ in pairs), tuple(nn for _, nn in pairs), tuple(B))


def extension_set(G: Graph, K: tuple[int, ...]) -> int:
    """``L``: the vertices of K plus those with at most one non-neighbour in K."""
    km = mask_of(K)
    L = km
    for v in range(G.n):
        if (km & ~G.adj[v] & ~(1 << v)).bit_count() <= 1:
            L |= 1 << v
    return L


def partition_violations(G: Graph, P: K5Partition) -> list[str]:
    """Every failed invariant of ``P`` (empty when the partition is valid)."""
    out = []
    sets = list(P.A) + list(P.N) + [P.B]
    allv = [v for s in sets for v in s]
    if sorted(allv) != list(range(G.n)):
        out.append("sets do not partition the vertex set")
    if P.p < 5:
        out.append(f"only {P.p} classes")
    L = mask_of(P.L)
    if not set(P.K) <= set(P.L):
        out.append("K is not inside L")
    amask = [mask_of(a) for a in P.A]
    for i, a in enumerate(amask):
        for v in iter_bits(a):
            if G.adj[v] & a:
                out.append(f"class {i} is not independent")
                break
            if G.adj[v] & L != L & ~a:
                out.append(f"class {i} is not complete to the other classes")
                break
    for i, nn in enumerate(P.N):
        for v in nn:
            if not G.adj[v] & amask[i]:
                out.append(f"vertex {v} of N_{i} has no neighbour in A_{i}")
            if G.adj[v] & (L & ~amask[i]):
                out.append(f"vertex {v} of N_{i} sees another class")
    for v in P.B:
        if G.adj[v] & L:
            out.append(f"vertex {v} of B sees L")
    return out


def k5_extension_partition(G: Graph, K, check_precondition: bool = True) -> K5Partition:
    """The partition around the K5 on ``K`` of a crossed-house-free graph."""
    K = tuple(sorted(K))
    km = mask_of(K)
    if len(K) != 5 or any(v < 0 or v >= G.n for v in K):
        raise PreconditionError(f"K must be five vertices of G, got {K}")
    if any(G.adj[v] & km != km & ~(1 << v) for v in K):
        raise PreconditionError(f"{K} does not induce K5")
    if check_precondition:
        emb = find_induced(G, crossed_house())
        if emb is not None:
            raise PreconditionError(f"graph contains an induced crossed house on {emb}", emb)
    P = partition_from_L(G, K, extension_set(G, K))
    bad = partition_violations(G, P)
    if bad:
        raise ClaimError("; ".join(bad))
    return P


def add_false_twin(G: Graph, x: int) -> Graph:
    """Append a vertex with the same open neighbourhood as ``x``."""
    if not 0 <= x < G.n:
        raise GraphError(f"vertex {x} is outside 0..{G.n - 1}")
    return build(G.n + 1, G.edges() + [(u, G.n) for u in G.neighbors(x)])


def distinct_partitions(G: Graph) -> list[K5Partition]:
    """One partition per distinct ``L`` over all K5s of ``G``.

    Any K5 inside an already found ``L`` yields the same ``L`` (it takes one
    vertex from five classes), so those are skipped.
    """
    seen: list[int] = []
    out = []
    for K in iter_k5(G):
        km = mask_of(K)
        if any(km & ~L == 0 for L in seen):
            continue
        L = extension_set(G, K)
        seen.append(L)
        out.append(partition_from_L(G, K, L))
    return out


# --- traces -------------------------------------------------------------------


@dataclass(frozen=True)
class OracleCall:
    reason: str
    citation: str
    sizes: tuple[int, int]
    result: bool


@dataclass
class GiDriverTrace:
    """Branches taken (one per connected component pair examined), oracle
    calls, and transformations applied."""

    branches: list[str] = field(default_factory=list)
    oracle_calls: list[OracleCall] = field(default_factory=list)
    transformations: list[str] = field(default_factory=list)

    def oracle(self, G: Graph, H: Graph, reason: str, citation: str) -> bool:
        result = are_isomorphic(G, H) is not None
        log.debug("oracle call (%s) on %d/%d vertices -> %s", reason, G.n, H.n, result)
        self.oracle_calls.append(OracleCall(reason, citation, (G.n, H.n), result))
        return result

    def summary(self) -> dict:
        return {
            "branches": dict(Counter(self.branches)),
            "oracle_calls": len(self.oracle_calls),
            "transformations": len(self.transformations),
        }


CITE_KT_P5 = "isomorphism is polynomial on (K_t, P5)-free graphs"
CITE_KT_P2P3 = "isomorphism is polynomial on (K_t, 2K_{1,t})-free graphs, which covers (K_t, P2+P3)-free"
CITE_BOUNDED_CW = "isomorphism is polynomial on graphs of bounded clique-width"


def _check_class(G: Graph, second: str, name: str) -> None:
    hit = find_forbidden(G, [crossed_house(), make(second)])
    if hit is not None:
        which = "crossed-house" if hit[0] == 0 else second
        raise PreconditionError(f"{name} contains an induced {which} on {hit[1]}", hit[1])


def _componentwise(G: Graph, H: Graph, connected, trace: GiDriverTrace) -> bool:
    cg = [induced_mask(G, c) for c in component_masks(G)]
    ch = [induced_mask(H, c) for c in component_masks(H)]
    if len(cg) != len(ch):
        trace.branches.append("component-count-mismatch")
        return False
    if len(cg) == 1:
        return connected(cg[0], ch[0], trace)
    free = list(range(len(ch)))
    for X in cg:
        for idx in free:
            Y = ch[idx]
            if X.n == Y.n and X.m == Y.m and connected(X, Y, trace):
                free.remove(idx)
                break
        else:
            return False
    return True


# --- (crossed-house, P5)-free ---------------------------------------------------


def _type_parts(P: K5Partition) -> tuple[int, tuple[int, ...]]:
    """``L'`` (classes without attachments) as a mask, and its type."""
    lp = 0
    sizes = []
    for a, nn in zip(P.A, P.N):
        if not nn:
            lp |= mask_of(a)
            sizes.append(len(a))
    return lp, tuple(sorted(sizes))


def type_gadget_graph(G: Graph, parts: list[K5Partition], numbering: dict, size: int) -> Graph:
    """Replace every ``L'`` of type ``j`` by ``K_{size+j,size+j}`` complete
    to the rest of its ``L``."""
    drop = 0
    for P in parts:
        drop |= _type_parts(P)[0]
    keep = [v for v in range(G.n) if not drop >> v & 1]
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in G.edges() if u in index and v in index]
    n = len(keep)
    for P in parts:
        lp, typ = _type_parts(P)
        j = numbering[typ]
        rest = [index[v] for v in P.L if not lp >> v & 1]
        left = list(range(n, n + size + j))
        right = list(range(n + size + j, n + 2 * (size + j)))
        n += 2 * (size + j)
        edges += [(x, y) for x in left for y in right]
        edges += [(x, r) for x in left + right for r in rest]
    return build(n, edges)


def _k5_free_routine(G: Graph, H: Graph, trace: GiDriverTrace, cite: str) -> bool | None:
    kg, kh = find_k5(G), find_k5(H)
    if kg is None and kh is None:
        trace.branches.append("k5-free")
        return trace.oracle(G, H, "k5-free", cite)
    if (kg is None) != (kh is None):
        trace.branches.append("k5-mismatch")
        return False
    return None


def _p5_connected(G: Graph, H: Graph, trace: GiDriverTrace) -> bool:
    res = _k5_free_routine(G, H, trace, CITE_KT_P5)
    if res is not None:
        return res
    pg, ph = distinct_partitions(G), distinct_partitions(H)
    rich_g = any(sum(1 for nn in P.N if nn) >= 3 for P in pg)
    rich_h = any(sum(1 for nn in P.N if nn) >= 3 for P in ph)
    if rich_g:
        trace.branches.append("bounded-cw")
        return trace.oracle(G, H, "bounded-cw", CITE_BOUNDED_CW)
    if rich_h:
        trace.branches.append("bounded-cw-mismatch")
        return False
    trace.branches.append("type-gadget")
    for X, parts in ((G, pg), (H, ph)):
        _check_type_claims(X, parts)
    census_g = Counter(_type_parts(P)[1] for P in pg)
    census_h = Counter(_type_parts(P)[1] for P in ph)
    if census_g != census_h:
        trace.transformations.append("type census differs")
        return False
    numbering = {t: j for j, t in enumerate(sorted(census_g), 1)}
    size = max(G.n, H.n)
    Gp = type_gadget_graph(G, pg, numbering, size)
    Hp = type_gadget_graph(H, ph, numbering, size)
    trace.transformations.append(f"replaced {len(pg)} attachment-free class sets by typed bicliques")
    for X in (Gp, Hp):
        if find_k5(X) is not None:
            raise ClaimError("typed biclique replacement left a K5")
    return trace.oracle(Gp, Hp, "type-gadget", CITE_KT_P5)


def _check_type_claims(G: Graph, parts: list[K5Partition]) -> None:
    """Each ``L`` has the form ``N(x) + twins(x)``; the ``L'`` are disjoint
    and avoid every other ``L``'s attached classes."""
    used = 0
    for P in parts:
        L = mask_of(P.L)
        lp, _ = _type_parts(P)
        if lp & used:
            raise ClaimError("attachment-free class sets overlap")
        used |= lp
        ok = False
        for x in iter_bits(lp):
            twins = mask_of(y for y in range(G.n) if G.adj[y] == G.adj[x])
            if G.adj[x] | twins == L:
                ok = True
                break
        if not ok:
            raise ClaimError("an L set is not of the form N(x) plus twins of x")
        if sum(1 for a, nn in zip(P.A, P.N) if not nn) < 3:
            raise ClaimError("fewer than three attachment-free classes")
    for P in parts:
        lp, _ = _type_parts(P)
        rest = mask_of(P.L) & ~lp
        if rest & used:
            raise ClaimError("an attached class lies in another L'")


def solve_gi_cohouse_p5(G: Graph, H: Graph) -> tuple[bool, GiDriverTrace]:
    """Isomorphism for (crossed-house, P5)-free graphs."""
    _check_class(G, "P5", "first graph")
    _check_class(H, "P5", "second graph")
    trace = GiDriverTrace()
    if G.n != H.n or G.m != H.m:
        trace.branches.append("size-mismatch")
        return False, trace
    return _componentwise(G, H, _p5_connected, trace), trace


# --- (crossed-house, P2+P3)-free -----------------------------------------------


@dataclass
class _Shape:
    P: K5Partition
    D: int
    comps: list[int]
    case: str


def _d_components(G: Graph, P: K5Partition) -> list[int]:
    return component_masks(G, mask_of(P.D))


def claim_violations(G: Graph, P: K5Partition) -> list[str]:
    """The four structural claims on ``D`` for a connected admissible graph."""
    out = []
    D = mask_of(P.D)
    comps = component_masks(G, D)
    adj = G.adj
    # 1: G[D] is a disjoint union of cliques
    for c in comps:
        if any(adj[v] & c != c & ~(1 << v) for v in iter_bits(c)):
            out.append("G[D] contains an induced P3")
            break
    # 2: a vertex of N_j is complete to every edge of D outside N_j
    for nn in P.N:
        nm = mask_of(nn)
        rest = D & ~nm
        for v in nn:
            for u in iter_bits(rest):
                for w in iter_bits(adj[u] & rest):
                    if u < w and not (adj[v] >> u & 1 and adj[v] >> w & 1):
                        out.append(f"vertex {v} misses part of edge {(u, w)}")
    # 3: a component of size >= 3 next to another one is nearly inside one N_i
    if len(comps) >= 2:
        for c in comps:
            if c.bit_count() < 3:
                continue
            bmask = mask_of(P.B)
            ok = any(
                (D & ~c) & ~(mask_of(nn) | bmask) == 0 and (c & ~mask_of(nn)).bit_count() <= 1
                for nn in P.N
            )
            if not ok:
                out.append("large D component is not attached through a single class")
    # 4: vertices missing two vertices of one component
    nontrivial = [c for c in comps if c & (c - 1)]
    if len(nontrivial) >= 2:
        for i, a in enumerate(P.A):
            special = [v for v in a if any((c & ~adj[v]).bit_count() >= 2 for c in comps)]
            for v in special:
                if adj[v] & D:
                    out.append(f"vertex {v} of A_{i} misses two vertices of a component but sees D")
            if len(special) > 1:
                out.append(f"class A_{i} has {len(special)} vertices missing two vertices of a component")
    return out


def _shape(G: Graph, P: K5Partition) -> _Shape:
    bad = claim_violations(G, P)
    if bad:
        raise ClaimError("; ".join(bad))
    D = mask_of(P.D)
    comps = component_masks(G, D)
    nontrivial = [c for c in comps if c & (c - 1)]
    if len(nontrivial) <= 1:
        case = "case1"
    elif max(c.bit_count() for c in comps) <= 3:
        case = "case2"
    else:
        case = "case3"
    return _Shape(P, D, comps, case)


def _profile(P: K5Partition) -> list[tuple[int, int]]:
    return sorted((len(a), len(nn)) for a, nn in zip(P.A, P.N))


def _interchangeable(G: Graph, P: K5Partition) -> list[int]:
    """Vertices whose closed neighbourhood is exactly ``L``."""
    L = mask_of(P.L)
    return [v for v in P.L if G.adj[v] | (1 << v) == L]


def _case2(G: Graph, H: Graph, sg: _Shape, sh: _Shape, trace: GiDriverTrace) -> bool:
    ig, ih = _interchangeable(G, sg.P), _interchangeable(H, sh.P)
    if len(ig) != len(ih):
        return False
    special_g = sg.P.p - len(ig)
    if special_g > 2:
        raise ClaimError(f"{special_g} classes are not interchangeable singletons")
    keep = max(0, 5 - special_g)
    drop_g, drop_h = ig[keep:], ih[keep:]
    keep_g = [v for v in range(G.n) if v not in set(drop_g)]
    keep_h = [v for v in range(H.n) if v not in set(drop_h)]
    Gp, Hp = induced(G, keep_g), induced(H, keep_h)
    trace.transformations.append(f"deleted {len(drop_g)} interchangeable vertices")
    if find_induced(Gp, make("K6")) is not None:
        raise ClaimError("reduced graph still contains K6")
    f = are_isomorphic(Gp, Hp)
    trace.oracle_calls.append(OracleCall("case2", CITE_KT_P2P3, (Gp.n, Hp.n), f is not None))
    if f is None:
        return False
    full = [0] * G.n
    for i, v in enumerate(keep_g):
        full[v] = keep_h[f[i]]
    # remaining interchangeable vertices map in ascending order
    for a, b in zip(drop_g, drop_h):
        full[a] = b
    if not is_isomorphism(G, H, full):
        raise ClaimError("extending the reduced isomorphism failed")
    trace.transformations.append("extended reduced isomorphism and verified it")
    return True


def _case3_parts(G: Graph, s: _Shape):
    P = s.P
    attached = [i for i, nn in enumerate(P.N) if nn]
    if len(attached) != 1:
        raise ClaimError(f"expected one attached class, found {len(attached)}")
    i = attached[0]
    A1 = P.A[i]
    nontrivial = [c for c in s.comps if c & (c - 1)]
    xs = [v for v in A1 if any((c & ~G.adj[v]).bit_count() >= 2 for c in nontrivial)]
    if len(xs) > 1:
        raise ClaimError("more than one vertex misses two vertices of a component")
    a_star = [v for v in A1 if v not in xs]
    small = 0
    large = []
    for c in s.comps:
        if c.bit_count() <= 3:
            small |= c
        else:
            large.append(c)
    keep = small | (mask_of(P.L) & ~mask_of(xs))
    bmask = mask_of(P.B)
    census = sorted((c.bit_count(), (c & bmask).bit_count()) for c in large)
    return keep, a_star, xs, census, i


def _case3(G: Graph, H: Graph, sg: _Shape, sh: _Shape, trace: GiDriverTrace) -> bool:
    kg, ag, xg, census_g, ig = _case3_parts(G, sg)
    kh, ah, xh, census_h, ih = _case3_parts(H, sh)
    Gp, Hp = induced_mask(G, kg), induced_mask(H, kh)
    small_g = mask_of(v for c in sg.comps if c.bit_count() <= 3 for v in iter_bits(c))
    if small_g:
        prop1 = trace.oracle(Gp, Hp, "case3-property1", CITE_KT_P2P3)
    else:
        # G' is complete multipartite with A*_1 as a marked class
        cg = is_complete_multipartite(Gp)
        ch = is_complete_multipartite(Hp)
        if cg is None or ch is None:
            raise ClaimError("reduced graph without small components is not complete multipartite")
        prop1 = (
            sorted(len(c) for c in cg) == sorted(len(c) for c in ch) and len(ag) == len(ah)
        )
    prop2 = len(xg) == len(xh)
    prop3 = census_g == census_h
    trace.transformations.append(f"properties 1/2/3: {prop1}/{prop2}/{prop3}")
    return prop1 and prop2 and prop3


def _p2p3_connected(G: Graph, H: Graph, trace: GiDriverTrace) -> bool:
    res = _k5_free_routine(G, H, trace, CITE_KT_P2P3)
    if res is not None:
        return res
    PG = k5_extension_partition(G, find_k5(G), check_precondition=False)
    sg = _shape(G, PG)
    if sg.case == "case1":
        trace.branches.append("case1")
        return trace.oracle(G, H, "case1", CITE_BOUNDED_CW)
    trace.branches.append(sg.case)
    for PH in distinct_partitions(H):
        if _profile(PH) != _profile(PG) or len(PH.B) != len(PG.B):
            continue
        sh = _shape(H, PH)
        if sh.case != sg.case:
            continue
        if sg.case == "case2":
            ok = _case2(G, H, sg, sh, trace)
        else:
            ok = _case3(G, H, sg, sh, trace)
        if ok:
            return True
    return False


def solve_gi_cohouse_p2p3(G: Graph, H: Graph) -> tuple[bool, GiDriverTrace]:
    """Isomorphism for (crossed-house, P2+P3)-free graphs."""
    _check_class(G, "P2+P3", "first graph")
    _check_class(H, "P2+P3", "second graph")
    trace = GiDriverTrace()
    if G.n != H.n or G.m != H.m:
        trace.branches.append("size-mismatch")
        return False, trace
    return _componentwise(G, H, _p2p3_connected, trace), trace


# --- guard re-verification ------------------------------------------------------


def branch_guard(driver: str, branch: str, G: Graph, H: Graph) -> bool:
    """Re-derive from scratch whether ``branch`` applies to the connected
    pair ``(G, H)`` under ``driver`` (``"p5"`` or ``"p2p3"``)."""
    kg, kh = find_k5(G), find_k5(H)
    if branch == "k5-free":
        return kg is None and kh is None
    if branch == "k5-mismatch":
        return (kg is None) != (kh is None)
    if kg is None:
        return False
    if driver == "p5":
        rich = lambda X: any(sum(1 for nn in P.N if nn) >= 3 for P in distinct_partitions(X))
        if branch == "bounded-cw":
            return rich(G)
        if branch == "bounded-cw-mismatch":
            return not rich(G) and rich(H)
        if branch == "type-gadget":
            return not rich(G) and not rich(H)
        return False
    P = k5_extension_partition(G, kg, check_precondition=False)
    comps = _d_components(G, P)
    nontrivial = [c for c in comps if c & (c - 1)]
    if branch == "case1":
        return len(nontrivial) <= 1
    if branch == "case2":
        return len(nontrivial) >= 2 and find_induced(induced(G, P.D), make("K4")) is None
    if branch == "case3":
        return len(nontrivial) >= 2 and find_induced(induced(G, P.D), make("K4")) is not None
    return False
