"""Clique-width: k-expressions, exact computation on tiny graphs, and
grid-partition lower-bound certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .catalog import grid
from .graph import (
    Graph,
    GraphError,
    build,
    component_masks,
    iter_bits,
    subgraph_complementation,
)
from .reductions import reduce_gem_p1_2p2

EXACT_CAP = 10


class CliqueWidthError(GraphError):
    """Raised for malformed expressions or inputs beyond the exact cap."""


# --- expressions ------------------------------------------------------------


@dataclass(frozen=True)
class Create:
    label: int
    vertex: int | None = None


@dataclass(frozen=True)
class Union:
    left: "CwExpression"
    right: "CwExpression"


@dataclass(frozen=True)
class Join:
    i: int
    j: int
    child: "CwExpression"


@dataclass(frozen=True)
class Rename:
    i: int
    j: int
    child: "CwExpression"


CwExpression = Create | Union | Join | Rename


def labels_used(expr: CwExpression) -> set[int]:
    out: set[int] = set()
    stack = [expr]
    while stack:
        e = stack.pop()
        if isinstance(e, Create):
            out.add(e.label)
        elif isinstance(e, Union):
            stack += [e.left, e.right]
        else:
            out |= {e.i, e.j}
            stack.append(e.child)
    return out


def _eval(expr: CwExpression, k: int | None) -> tuple[list[int], list[tuple[int, int]], list[int | None]]:
    """Labels per created vertex, edge list, and the ``vertex`` tags."""

    def check(lbl: int) -> None:
        if lbl < 1 or (k is not None and lbl > k):
            bound = "" if k is None else f"1..{k}"
            raise CliqueWidthError(f"label {lbl} out of range {bound}".rstrip())

    def go(e: CwExpression):
        if isinstance(e, Create):
            check(e.label)
            return [e.label], set(), [e.vertex]
        if isinstance(e, Union):
            la, ea, ta = go(e.left)
            lb, eb, tb = go(e.right)
            off = len(la)
            return la + lb, ea | {(u + off, v + off) for u, v in eb}, ta + tb
        labels, edges, tags = go(e.child)
        check(e.i)
        check(e.j)
        if e.i == e.j:
            raise CliqueWidthError(f"{type(e).__name__.lower()} with equal labels {e.i}")
        if isinstance(e, Join):
            xs = [v for v, lb in enumerate(labels) if lb == e.i]
            ys = [v for v, lb in enumerate(labels) if lb == e.j]
            edges = edges | {(min(x, y), max(x, y)) for x in xs for y in ys}
            return labels, edges, tags
        return [e.j if lb == e.i else lb for lb in labels], edges, tags

    labels, edges, tags = go(expr)
    return labels, sorted(edges), tags


def evaluate(expr: CwExpression, k: int | None = None) -> Graph:
    """The graph built by ``expr``.

    Created vertices are numbered by their ``vertex`` tag when every leaf
    carries a distinct one, otherwise in left-to-right leaf order.
    """
    labels, edges, tags = _eval(expr, k)
    n = len(labels)
    if all(t is not None for t in tags) and sorted(tags) == list(range(n)):
        edges = [(tags[u], tags[v]) for u, v in edges]
    return build(n, edges)


def expression_text(expr: CwExpression) -> str:
    """Compact form: ``1(v0)`` creates, ``(a + b)`` unions, ``j1,2[...]``
    joins and ``r1>2[...]`` renames."""
    if isinstance(expr, Create):
        tag = "" if expr.vertex is None else f"v{expr.vertex}"
        return f"{expr.label}({tag})"
    if isinstance(expr, Union):
        return f"({expression_text(expr.left)} + {expression_text(expr.right)})"
    op = "j" if isinstance(expr, Join) else "r"
    sep = "," if isinstance(expr, Join) else ">"
    return f"{op}{expr.i}{sep}{expr.j}[{expression_text(expr.child)}]"


def clique_expression(n: int) -> CwExpression:
    """2-expression for ``K_n``: add a label-2 vertex, join, rename 2 -> 1."""
    if n < 1:
        raise CliqueWidthError("K_n needs n >= 1")
    e: CwExpression = Create(1, 0)
    for v in range(1, n):
        e = Rename(2, 1, Join(1, 2, Union(e, Create(2, v))))
    return e


# --- exact clique-width -------------------------------------------------------
#
# Normal form: every edge is created by a join placed directly after the
# union where its two ends first meet, so every subexpression on vertex set
# S builds exactly G[S]. A state is (S, P) where P is the partition of S into
# label classes; each class must have a common neighbourhood outside S,
# because later operations treat a label class uniformly. A partition P of S
# with at most k classes is reachable from a split S = S1 + S2 iff P|S1 and
# P|S2 are reachable, no class of P contains an S1-S2 edge, and any two
# classes joined by an S1-S2 edge are completely adjacent. Renames then allow
# every coarsening that still respects the outside neighbourhoods.


Partition = tuple[int, ...]  # sorted class masks


def _norm(classes) -> Partition:
    return tuple(sorted(c for c in classes if c))


def _restrict(P: Partition, mask: int) -> Partition:
    return _norm(c & mask for c in P)


def _outside_classes(G: Graph, S: int) -> list[int]:
    """Vertices of S grouped by their neighbourhood outside S."""
    groups: dict[int, int] = {}
    out = G.full_mask() & ~S
    for v in iter_bits(S):
        key = G.adj[v] & out
        groups[key] = groups.get(key, 0) | (1 << v)
    return list(groups.values())


def _set_partitions(items: list[int], max_blocks: int):
    """Partitions of ``items`` (vertex ids) into at most ``max_blocks`` masks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest, max_blocks):
        for i in range(len(part)):
            yield part[:i] + [part[i] | (1 << first)] + part[i + 1:]
        if len(part) < max_blocks:
            yield part + [1 << first]


def _refinements(T: list[int], k: int):
    """Partitions refining ``T`` with at most ``k`` classes."""

    def go(idx: int, budget: int):
        if idx == len(T):
            yield []
            return
        # each remaining class needs at least one block
        room = budget - (len(T) - idx - 1)
        for part in _set_partitions(iter_bits(T[idx]), room):
            for rest in go(idx + 1, budget - len(part)):
                yield part + rest

    yield from go(0, k)


@dataclass
class _Table:
    G: Graph
    k: int
    reach: dict[int, dict[Partition, tuple]] = field(default_factory=dict)


def _split_ok(G: Graph, P: Partition, S1: int, S2: int) -> bool:
    adj = G.adj
    for X in P:
        for x in iter_bits(X & S1):
            if adj[x] & X & S2:
                return False
    for a, b in combinations(P, 2):
        cross = False
        for x in iter_bits(a):
            other = S2 if S1 >> x & 1 else S1
            if adj[x] & b & other:
                cross = True
                break
        if not cross:
            continue
        for x in iter_bits(a):
            if adj[x] & b != b:
                return False
    return True


def _coarsenings(G: Graph, S: int, P: Partition, k: int, T: list[int]):
    """Merges of two classes inside one outside-neighbourhood class."""
    for a, b in combinations(P, 2):
        if any(a & t and b & t for t in T) and any((a | b) & ~t == 0 for t in T):
            yield _norm([c for c in P if c not in (a, b)] + [a | b]), (a, b)


def _fill(table: _Table, S: int) -> None:
    G, k = table.G, table.k
    T = _outside_classes(G, S)
    reach: dict[Partition, tuple] = {}
    if len(T) <= k:
        if S & (S - 1) == 0:
            reach[(S,)] = ("create",)
        else:
            low = S & -S
            rest = S ^ low
            subs = []
            sub = rest
            # S1 always contains the lowest vertex of S
            while True:
                S1 = low | sub
                if S1 != S:
                    subs.append(S1)
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            for P in _refinements(T, k):
                P = _norm(P)
                for S1 in subs:
                    S2 = S ^ S1
                    r1 = table.reach.get(S1)
                    r2 = table.reach.get(S2)
                    if not r1 or not r2:
                        continue
                    P1, P2 = _restrict(P, S1), _restrict(P, S2)
                    if P1 in r1 and P2 in r2 and _split_ok(G, P, S1, S2):
                        reach[P] = ("union", S1, P1, P2)
                        break
            # close upward under admissible renames
            todo = list(reach)
            while todo:
                P = todo.pop()
                for Q, pair in _coarsenings(G, S, P, k, T):
                    if Q not in reach:
                        reach[Q] = ("rename", P, pair)
                        todo.append(Q)
    table.reach[S] = reach


def _build(table: _Table, S: int, P: Partition, label: dict[int, int]) -> CwExpression:
    how = table.reach[S][P]
    if how[0] == "create":
        v = S.bit_length() - 1
        return Create(label[S], v)
    if how[0] == "rename":
        _, fine, (a, b) = how
        merged = a | b
        lab = {c: label[c] for c in fine if c not in (a, b)}
        lab[a] = label[merged]
        free = set(range(1, table.k + 1)) - set(lab.values())
        lab[b] = min(free)
        return Rename(lab[b], lab[a], _build(table, S, fine, lab))
    _, S1, P1, P2 = how
    S2 = S ^ S1
    lab1 = {c & S1: label[c] for c in P if c & S1}
    lab2 = {c & S2: label[c] for c in P if c & S2}
    e: CwExpression = Union(_build(table, S1, P1, lab1), _build(table, S2, P2, lab2))
    adj = table.G.adj
    for a, b in combinations(P, 2):
        if any(adj[x] & b & (S2 if S1 >> x & 1 else S1) for x in iter_bits(a)):
            e = Join(label[a], label[b], e)
    return e


def cw_at_most(G: Graph, k: int) -> CwExpression | None:
    """A k-expression for ``G`` or ``None`` if none exists."""
    if G.n > EXACT_CAP:
        raise CliqueWidthError(f"exact clique-width is capped at {EXACT_CAP} vertices, got {G.n}")
    if G.n == 0:
        return None
    table = _Table(G, k)
    full = G.full_mask()
    for size in range(1, G.n + 1):
        for combo in combinations(range(G.n), size):
            S = 0
            for v in combo:
                S |= 1 << v
            _fill(table, S)
    top = table.reach[full]
    if not top:
        return None
    P = min(top, key=len)
    label = {c: i + 1 for i, c in enumerate(P)}
    return _build(table, full, P, label)


@dataclass(frozen=True)
class CwResult:
    width: int | None
    expression: CwExpression | None
    limit: int

    @property
    def exceeds_limit(self) -> bool:
        return self.width is None


def exact_cliquewidth(G: Graph, limit: int = EXACT_CAP) -> CwResult:
    """Minimum number of labels needed to build ``G``, with a witness.

    Every smaller label count has been ruled out by exhaustive search.
    ``width`` is ``None`` when it exceeds ``limit``.
    """
    if G.n > EXACT_CAP:
        raise CliqueWidthError(f"exact clique-width is capped at {EXACT_CAP} vertices, got {G.n}")
    if G.n == 0:
        return CwResult(0, None, limit)
    for k in range(1, limit + 1):
        expr = cw_at_most(G, k)
        if expr is not None:
            return CwResult(k, expr, limit)
    return CwResult(None, None, limit)


# --- grid certificates --------------------------------------------------------


PREMISES = {
    0: "partition covers every vertex with cells in 1..n",
    1: "every cell is non-empty",
    2: "every row induces a connected graph",
    3: "every column induces a connected graph",
    4: "adjacent cells differ by at most m in row and column",
}


class CertificateError(CliqueWidthError):
    """A grid certificate premise fails; ``premise`` is the first failing one."""

    def __init__(self, violations: list[tuple[int, str]]):
        self.violations = violations
        self.premise = violations[0][0]
        first = violations[0]
        more = f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        super().__init__(f"premise {first[0]} ({PREMISES[first[0]]}) fails: {first[1]}{more}")


@dataclass(frozen=True)
class GridPartitionCertificate:
    """``partition[v] = (i, j)`` with 1-based row ``i`` and column ``j``."""

    partition: tuple[tuple[int, int], ...]
    m: int
    n: int

    def to_text(self) -> str:
        return "".join(f"{v} {i} {j}\n" for v, (i, j) in enumerate(self.partition))


def parse_partition(text: str) -> dict[int, tuple[int, int]]:
    out: dict[int, tuple[int, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) != 3:
            raise CliqueWidthError(f"partition line {lineno}: expected 'vertex i j', got {line!r}")
        try:
            v, i, j = (int(p) for p in parts)
        except ValueError:
            raise CliqueWidthError(f"partition line {lineno}: expected integers, got {line!r}") from None
        if v in out:
            raise CliqueWidthError(f"partition line {lineno}: vertex {v} listed twice")
        out[v] = (i, j)
    return out


def certificate_from_mapping(mapping: dict[int, tuple[int, int]], m: int, n: int | None = None) -> GridPartitionCertificate:
    """Certificate from a vertex -> cell map; ``n`` defaults to the largest index used."""
    if n is None:
        n = max((max(c) for c in mapping.values()), default=0)
    size = max(mapping, default=-1) + 1
    cells = tuple(mapping.get(v, (0, 0)) for v in range(size))
    return GridPartitionCertificate(cells, m, n)


def grid_violations(G: Graph, cert: GridPartitionCertificate) -> list[tuple[int, str]]:
    """Every failing premise with a description, in premise order."""
    n, m = cert.n, cert.m
    out: list[tuple[int, str]] = []
    if len(cert.partition) != G.n:
        out.append((0, f"partition lists {len(cert.partition)} vertices, graph has {G.n}"))
        return out
    for v, (i, j) in enumerate(cert.partition):
        if not (1 <= i <= n and 1 <= j <= n):
            out.append((0, f"vertex {v} assigned to cell {(i, j)} outside the {n}x{n} grid"))
    if out:
        return out
    cell = {}
    for v, ij in enumerate(cert.partition):
        cell[ij] = cell.get(ij, 0) | (1 << v)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if (i, j) not in cell:
                out.append((1, f"cell {(i, j)} is empty"))
    for i in range(1, n + 1):
        row = 0
        for j in range(1, n + 1):
            row |= cell.get((i, j), 0)
        if len(component_masks(G, row)) > 1:
            out.append((2, f"row {i} is disconnected"))
    for j in range(1, n + 1):
        col = 0
        for i in range(1, n + 1):
            col |= cell.get((i, j), 0)
        if len(component_masks(G, col)) > 1:
            out.append((3, f"column {j} is disconnected"))
    for u, v in G.edges():
        (i, j), (k, l) = cert.partition[u], cert.partition[v]
        if abs(k - i) > m or abs(l - j) > m:
            out.append((4, f"edge {(u, v)} joins cells {(i, j)} and {(k, l)}"))
    return out


def verify_grid_certificate(G: Graph, cert: GridPartitionCertificate) -> int:
    """Check the four premises and return the certified lower bound
    ``floor((n-1)/(m+1)) + 1`` on the clique-width of ``G``."""
    if cert.m < 1 or cert.n <= cert.m + 1:
        raise CliqueWidthError(f"certificate needs m >= 1 and n > m + 1, got m={cert.m}, n={cert.n}")
    violations = grid_violations(G, cert)
    if violations:
        raise CertificateError(violations)
    return (cert.n - 1) // (cert.m + 1) + 1


def build_hn_prime(n: int) -> tuple[Graph, GridPartitionCertificate]:
    """The gem gadget of the n x n grid with both sides complemented, and
    its grid partition: cell (i, j) holds the class of grid vertex (i, j)
    together with the B-vertices matched into that class."""
    if n < 3:
        raise CliqueWidthError(f"H_n' needs n >= 3, got {n}")
    gadget = reduce_gem_p1_2p2(grid(n))
    A = gadget.role_set("A")
    B = gadget.role_set("B")
    Hp = subgraph_complementation(subgraph_complementation(gadget.graph, A), B)
    a_mask = sum(1 << a for a in A)
    cells = []
    for v in range(Hp.n):
        if gadget.parts[v] == "A":
            k = gadget.part_classes[v]
        else:
            (a,) = iter_bits(gadget.graph.adj[v] & a_mask)
            k = gadget.part_classes[a]
        cells.append((k // n + 1, k % n + 1))
    return Hp, GridPartitionCertificate(tuple(cells), 1, n)
