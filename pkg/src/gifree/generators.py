"""Graph corpora: exhaustive small graphs, seeded random graphs, and
constructive instances shaped around a complete multipartite core."""

from __future__ import annotations

import random
from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache

from .catalog import make
from .graph import Graph, build, relabel
from .iso import canonical_form
from .subiso import is_free

DEFAULT_SEED = 20240917


@lru_cache(maxsize=None)
def graphs_on(n: int) -> tuple[Graph, ...]:
    """One graph per isomorphism class on exactly ``n`` vertices.

    Built by adding a vertex with every possible neighbourhood to each graph
    on ``n - 1`` vertices and keeping one per canonical certificate.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return (build(0, []),)
    seen = {}
    for G in graphs_on(n - 1):
        base = G.edges()
        for nb in range(1 << (n - 1)):
            H = build(n, base + [(u, n - 1) for u in range(n - 1) if nb >> u & 1])
            cert = canonical_form(H).certificate
            if cert not in seen:
                seen[cert] = H
    return tuple(sorted(seen.values(), key=lambda H: (H.m, H.degree_sequence(), H.adj)))


def small_graphs(max_n: int) -> list[Graph]:
    """All graphs on 1..max_n vertices up to isomorphism."""
    return [G for n in range(1, max_n + 1) for G in graphs_on(n)]


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return build(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_relabel(rng: random.Random, G: Graph) -> Graph:
    perm = list(range(G.n))
    rng.shuffle(perm)
    return relabel(G, perm)


def random_corpus(seed: int, count: int, n_min: int, n_max: int) -> list[Graph]:
    rng = random.Random(seed)
    return [random_graph(rng, rng.randint(n_min, n_max), rng.uniform(0.2, 0.8)) for _ in range(count)]


# --- constructive instances ---------------------------------------------------


@dataclass(frozen=True)
class Blob:
    """A clique attached to class ``cls`` of the core.

    ``mode`` is one of ``full`` (complete to the class), ``first`` (adjacent
    to the class's first vertex only), ``match`` (k-th clique vertex sees the
    k-th class vertex), ``skip-last`` (complete to the class except its last
    vertex) or ``tail`` (complete to the class except one clique vertex,
    which sees no class).
    """

    cls: int
    size: int
    mode: str = "full"


def shaped_graph(sizes: tuple[int, ...], blobs: tuple[Blob, ...]) -> Graph:
    """Complete multipartite core with class sizes ``sizes`` plus cliques."""
    classes = []
    n = 0
    for s in sizes:
        classes.append(list(range(n, n + s)))
        n += s
    edges = [
        (u, v)
        for i, a in enumerate(classes)
        for b in classes[i + 1:]
        for u in a
        for v in b
    ]
    for blob in blobs:
        verts = list(range(n, n + blob.size))
        n += blob.size
        edges += [(u, v) for i, u in enumerate(verts) for v in verts[i + 1:]]
        a = classes[blob.cls]
        for k, v in enumerate(verts):
            if blob.mode == "full":
                edges += [(x, v) for x in a]
            elif blob.mode == "first":
                edges.append((a[0], v))
            elif blob.mode == "match":
                if k < len(a):
                    edges.append((a[k], v))
            elif blob.mode == "skip-last":
                edges += [(x, v) for x in a[:-1]]
            elif blob.mode == "tail":
                if k:
                    edges += [(x, v) for x in a]
            else:
                raise ValueError(f"unknown blob mode {blob.mode!r}")
    return build(n, edges)


def _sizes(rng: random.Random, p_min: int, p_max: int, s_max: int) -> list[int]:
    return [rng.randint(1, s_max) for _ in range(rng.randint(p_min, p_max))]


def _k5_free_instance(rng: random.Random, second: str) -> Graph:
    forb = [make("crossed-house"), make(second), make("K5")]
    while True:
        G = random_graph(rng, rng.randint(4, 9), rng.uniform(0.25, 0.75))
        if is_free(G, forb):
            return G


def _shape_p5(rng: random.Random, kind: str):
    if kind == "bounded-cw":
        sizes = _sizes(rng, 5, 6, 2)
        cls = rng.sample(range(len(sizes)), 3)
        blobs = [Blob(c, rng.randint(1, 2), rng.choice(["full", "first"])) for c in cls]
        return sizes, blobs
    if kind == "type-gadget":
        sizes = _sizes(rng, 5, 7, 3)
        k = rng.randint(1, 2)
        cls = rng.sample(range(len(sizes)), k)
        blobs = [Blob(c, rng.randint(1, 3), rng.choice(["full", "first", "match"])) for c in cls]
        return sizes, blobs
    raise ValueError(kind)


def _shape_p2p3(rng: random.Random, kind: str):
    if kind == "case1":
        sizes = _sizes(rng, 5, 6, 3)
        blobs = [Blob(0, rng.randint(1, 4), rng.choice(["full", "first", "tail"]))]
        return sizes, blobs
    if kind == "case2":
        sizes = [rng.randint(1, 3)] + [1] * rng.randint(4, 7)
        if rng.random() < 0.5:
            sizes[1] = rng.randint(1, 2)
            blobs = [Blob(0, rng.randint(2, 3)), Blob(1, rng.randint(2, 3))]
        else:
            blobs = [Blob(0, rng.randint(2, 3)), Blob(0, rng.randint(2, 3))]
        return sizes, blobs
    if kind == "case3":
        sizes = [rng.randint(2, 3)] + [rng.randint(1, 2)] + [1] * rng.randint(3, 4)
        mode = rng.choice(["full", "full", "skip-last"])
        blobs = [Blob(0, 4, rng.choice([mode, "tail"])), Blob(0, rng.randint(2, 5), mode)]
        if rng.random() < 0.5:
            blobs.append(Blob(0, rng.randint(1, 3), mode))
        return sizes, blobs
    raise ValueError(kind)


P5_KINDS = ("k5-free", "bounded-cw", "type-gadget")
P2P3_KINDS = ("k5-free", "case1", "case2", "case3")


def admissible_instance(rng: random.Random, driver: str, kind: str) -> Graph:
    """A randomly relabelled graph of the driver's class built for ``kind``."""
    second = "P5" if driver == "p5" else "P2+P3"
    if kind == "k5-free":
        return random_relabel(rng, _k5_free_instance(rng, second))
    shape = _shape_p5 if driver == "p5" else _shape_p2p3
    forb = [make("crossed-house"), make(second)]
    for _ in range(1000):
        sizes, blobs = shape(rng, kind)
        G = shaped_graph(tuple(sizes), tuple(blobs))
        if is_free(G, forb):
            return random_relabel(rng, G)
    raise RuntimeError(f"no admissible {kind} instance found for {driver}")


def admissible_pairs(
    seed: int, driver: str, count: int, pool: int = 60
) -> Iterator[tuple[str, Graph, Graph, bool]]:
    """``(kind, G, H, built_isomorphic)``; even positions are relabellings,
    odd positions pair two draws of the same kind, preferring a partner
    with the same vertex and edge counts from a per-kind pool."""
    rng = random.Random(seed)
    kinds = P5_KINDS if driver == "p5" else P2P3_KINDS
    pools = {k: [admissible_instance(rng, driver, k) for _ in range(pool)] for k in kinds}
    for i in range(count):
        kind = kinds[(i // 2) % len(kinds)]
        G = admissible_instance(rng, driver, kind)
        if i % 2 == 0:
            yield kind, G, random_relabel(rng, G), True
            continue
        same = [H for H in pools[kind] if H.n == G.n and H.m == G.m]
        if same:
            H = rng.choice(same)
        else:
            H = min(pools[kind], key=lambda X: (abs(X.n - G.n), abs(X.m - G.m)))
        yield kind, G, random_relabel(rng, H), False


def crossed_house_free_with_k5(seed: int, count: int) -> list[Graph]:
    """Crossed-house-free graphs containing K5, from all instance shapes."""
    rng = random.Random(seed)
    out = []
    shapes = [("p5", k) for k in P5_KINDS[1:]] + [("p2p3", k) for k in P2P3_KINDS[1:]]
    ch = [make("crossed-house")]
    while len(out) < count:
        driver, kind = shapes[len(out) % len(shapes)]
        shape = _shape_p5 if driver == "p5" else _shape_p2p3
        sizes, blobs = shape(rng, kind)
        G = shaped_graph(tuple(sizes), tuple(blobs))
        if is_free(G, ch):
            out.append(random_relabel(rng, G))
    return out
