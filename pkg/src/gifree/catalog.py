"""Named graphs, a small name grammar, and structural class recognizers.

Grammar (whitespace ignored)::

    expr := term ('+' term)*
    term := [multiplier] atom
    atom := P<k> | C<k> | K<k> | K_{a,b,...} | K_{1,t}^+ | K_{1,t}^{++}
          | S_{h,i,j} | claw | diamond | paw | gem | crossed-house
          | grid_<n> | petersen | co(expr) | (expr)

Vertex conventions: ``P<k>`` is the path ``0-1-...-(k-1)``; ``K_{1,t}`` has
centre 0 and leaves ``1..t``; ``K_{1,t}^+`` has centre 0, subdivided arm
``0-1-2`` and leaves ``3..t+1``; ``K_{1,t}^{++}`` has arm ``0-1-2-3`` and
leaves ``4..t+2``; ``S_{h,i,j}`` has centre 0 followed by its three arms in
order; ``grid_<n>`` is indexed row-major.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .graph import (
    Graph,
    GraphError,
    build,
    complement,
    component_masks,
    disjoint_union,
    empty,
    union_all,
)
from .subiso import contains_induced


class CatalogError(GraphError):
    """Raised for unparsable names or out-of-range parameters."""


# --- constructors -----------------------------------------------------------


def path(k: int) -> Graph:
    if k < 1:
        raise CatalogError(f"P_k needs k >= 1, got {k}")
    return build(k, [(i, i + 1) for i in range(k - 1)])


def cycle(k: int) -> Graph:
    if k < 3:
        raise CatalogError(f"C_k needs k >= 3, got {k}")
    return build(k, [(i, (i + 1) % k) for i in range(k)])


def clique(k: int) -> Graph:
    if k < 1:
        raise CatalogError(f"K_k needs k >= 1, got {k}")
    return complement(empty(k))


def edgeless(k: int) -> Graph:
    return empty(k)


def complete_multipartite(sizes: list[int]) -> Graph:
    if not sizes or any(s < 1 for s in sizes):
        raise CatalogError(f"complete multipartite parts must be positive, got {sizes}")
    cls = [i for i, s in enumerate(sizes) for _ in range(s)]
    n = len(cls)
    return build(n, [(u, v) for u in range(n) for v in range(u + 1, n) if cls[u] != cls[v]])


def star(t: int) -> Graph:
    """``K_{1,t}``."""
    return complete_multipartite([1, t])


def star_plus(t: int) -> Graph:
    """``K_{1,t}^+``: one edge of ``K_{1,t}`` subdivided once."""
    if t < 1:
        raise CatalogError(f"K_{{1,t}}^+ needs t >= 1, got {t}")
    edges = [(0, 1), (1, 2)] + [(0, v) for v in range(3, t + 2)]
    return build(t + 2, edges)


def star_plus_plus(t: int) -> Graph:
    """``K_{1,t}^{++}``: one edge of ``K_{1,t}`` subdivided twice."""
    if t < 1:
        raise CatalogError(f"K_{{1,t}}^{{++}} needs t >= 1, got {t}")
    edges = [(0, 1), (1, 2), (2, 3)] + [(0, v) for v in range(4, t + 3)]
    return build(t + 3, edges)


def subdivided_claw(h: int, i: int, j: int) -> Graph:
    """``S_{h,i,j}``: three paths of lengths h, i, j joined at a centre."""
    if not 1 <= h <= i <= j:
        raise CatalogError(f"S_{{h,i,j}} needs 1 <= h <= i <= j, got {(h, i, j)}")
    edges = []
    nxt = 1
    for length in (h, i, j):
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return build(nxt, edges)


def grid(n: int) -> Graph:
    """The ``n x n`` grid, vertex ``(i, j)`` (0-based) at index ``i*n + j``."""
    if n < 1:
        raise CatalogError(f"grid needs n >= 1, got {n}")
    edges = []
    for i in range(n):
        for j in range(n):
            v = i * n + j
            if j + 1 < n:
                edges.append((v, v + 1))
            if i + 1 < n:
                edges.append((v, v + n))
    return build(n * n, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build(10, outer + spokes + inner)


def _small(name: str) -> Graph:
    # each named small graph is the complement of a linear forest
    base = {
        "claw": "co(K3+P1)",
        "diamond": "co(2P1+P2)",
        "paw": "co(P1+P3)",
        "gem": "co(P1+P4)",
        "crossed-house": "co(2P1+P3)",
    }[name]
    return make(base)


# --- parser -----------------------------------------------------------------

_WORDS = ("crossed-house", "petersen", "diamond", "claw", "paw", "gem")


class _Parser:
    def __init__(self, text: str):
        self.src = text
        self.s = re.sub(r"\s+", "", text)
        self.i = 0

    def fail(self, msg: str) -> CatalogError:
        return CatalogError(f"cannot parse graph name {self.src!r}: {msg} at offset {self.i}")

    def peek(self, token: str) -> bool:
        return self.s.startswith(token, self.i)

    def eat(self, token: str) -> bool:
        if self.peek(token):
            self.i += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.eat(token):
            raise self.fail(f"expected {token!r}")

    def number(self) -> int:
        m = re.compile(r"\d+").match(self.s, self.i)
        if not m:
            raise self.fail("expected a number")
        self.i = m.end()
        return int(m.group())

    def number_list(self) -> list[int]:
        self.expect("{")
        nums = [self.number()]
        while self.eat(","):
            nums.append(self.number())
        self.expect("}")
        return nums

    def parse(self) -> Graph:
        g = self.expr()
        if self.i != len(self.s):
            raise self.fail("unexpected trailing input")
        return g

    def expr(self) -> Graph:
        parts = [self.term()]
        while self.eat("+"):
            parts.append(self.term())
        return union_all(parts)

    def term(self) -> Graph:
        mult = 1
        if self.i < len(self.s) and self.s[self.i].isdigit():
            mult = self.number()
            if mult < 1:
                raise self.fail("multiplier must be positive")
        atom = self.atom()
        return union_all([atom] * mult)

    def atom(self) -> Graph:
        if self.eat("co("):
            g = self.expr()
            self.expect(")")
            return complement(g)
        if self.eat("("):
            g = self.expr()
            self.expect(")")
            return g
        for w in _WORDS:
            if self.eat(w):
                return petersen() if w == "petersen" else _small(w)
        if self.eat("grid_") or self.eat("grid"):
            return grid(self.number())
        if self.eat("S_"):
            nums = self.number_list()
            if len(nums) != 3:
                raise self.fail("S_{h,i,j} takes three parameters")
            return subdivided_claw(*nums)
        if self.eat("K_"):
            nums = self.number_list()
            sup = self.superscript()
            if sup:
                if len(nums) != 2 or nums[0] != 1:
                    raise self.fail("only K_{1,t} may carry a ^+ or ^{++}")
                return star_plus(nums[1]) if sup == 1 else star_plus_plus(nums[1])
            return complete_multipartite(nums)
        for letter, ctor in (("P", path), ("C", cycle), ("K", clique)):
            if self.eat(letter):
                return ctor(self.number())
        raise self.fail("unknown graph name")

    def superscript(self) -> int:
        for tok, val in (("^{++}", 2), ("^++", 2), ("^{+}", 1), ("^+", 1)):
            if self.eat(tok):
                return val
        return 0


@lru_cache(maxsize=None)
def make(name: str) -> Graph:
    """Graph for a catalog name such as ``"gem"`` or ``"P1+2P2"``."""
    return _Parser(name).parse()


def make_grid(n: int) -> Graph:
    return grid(n)


# --- recognizers ------------------------------------------------------------


def is_forest(H: Graph) -> bool:
    return H.m == H.n - len(component_masks(H))


def is_linear_forest(H: Graph) -> bool:
    return is_forest(H) and all(d <= 2 for d in H.degrees())


def is_path_star_forest(H: Graph) -> bool:
    """Forest whose components each have at most one vertex of degree >= 3."""
    if not is_forest(H):
        return False
    deg = H.degrees()
    for comp in component_masks(H):
        high = sum(1 for v in range(H.n) if comp >> v & 1 and deg[v] >= 3)
        if high > 1:
            return False
    return True


def in_class_S(H: Graph) -> bool:
    """Every component is a path or a subdivided claw."""
    if not is_forest(H):
        return False
    deg = H.degrees()
    if any(d > 3 for d in deg):
        return False
    # a tree with max degree 3 and one branch vertex has exactly three leaves
    for comp in component_masks(H):
        if sum(1 for v in range(H.n) if comp >> v & 1 and deg[v] == 3) > 1:
            return False
    return True


# --- parametric families ----------------------------------------------------
#
# Every family F(t) below contains F(t') as an induced subgraph for t' < t
# (delete leaves, isolated vertices or clique vertices). Conversely an induced
# copy of a v-vertex graph in F(t) touches at most v of those deletable units,
# so it survives deleting the others down to F(v). Hence H embeds in some
# F(t) iff it embeds in F(|V(H)|).

FAMILIES = {
    "K_{1,t}+P1": lambda t: disjoint_union(star(t), path(1)),
    "tP1+P3": lambda t: disjoint_union(edgeless(t), path(3)),
    "K_t": clique,
    "tP1": edgeless,
    "2K_{1,t}": lambda t: disjoint_union(star(t), star(t)),
    "K_{1,t}^+": star_plus,
    "K_{1,t}^{++}+P1": lambda t: disjoint_union(star_plus_plus(t), path(1)),
    "K_{1,t}^{++}": star_plus_plus,
    "K_{1,t}": star,
}


def family_instance(family: str, t: int) -> Graph:
    try:
        ctor = FAMILIES[family]
    except KeyError:
        raise CatalogError(f"unknown family {family!r}; known: {sorted(FAMILIES)}") from None
    return ctor(t)


def in_monotone_family(H: Graph, family: str, t: int | None = None) -> bool:
    """True iff ``H`` is an induced subgraph of ``family`` at some ``t``.

    ``t`` defaults to ``|V(H)|``; a larger value may be passed when several
    guards must share one parameter.
    """
    t = max(H.n, 1) if t is None else max(t, H.n, 1)
    return contains_induced(family_instance(family, t), H)
