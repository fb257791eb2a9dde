"""graph6 and plain edge-list serialization."""

from __future__ import annotations

from .graph import Graph, GraphError, build

HEADER = ">>graph6<<"


class FormatError(GraphError):
    """Raised when a serialized graph cannot be parsed."""


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(63 + n)
    if n <= 258047:
        return "~" + "".join(chr(63 + (n >> s & 63)) for s in (12, 6, 0))
    if n < 1 << 36:
        return "~~" + "".join(chr(63 + (n >> s & 63)) for s in (30, 24, 18, 12, 6, 0))
    raise FormatError(f"graph too large for graph6: n={n}")


def to_graph6(G: Graph) -> str:
    """graph6 string (no header, no trailing newline)."""
    out = [_encode_n(G.n)]
    adj = G.adj
    acc = 0
    nbits = 0
    for j in range(1, G.n):
        row = adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(63 + acc))
                acc = 0
                nbits = 0
    if nbits:
        out.append(chr(63 + (acc << (6 - nbits))))
    return "".join(out)


def _decode_n(s: str) -> tuple[int, int]:
    """Vertex count and the offset where the adjacency bytes start."""
    if not s:
        raise FormatError("empty graph6 string")
    vals = [ord(c) - 63 for c in s[:8]]
    if vals[0] < 63:
        return vals[0], 1
    if len(s) >= 2 and vals[1] == 63:
        if len(s) < 8:
            raise FormatError(f"truncated graph6 size field in {s!r}")
        n = 0
        for v in vals[2:8]:
            n = n << 6 | v
        return n, 8
    if len(s) < 4:
        raise FormatError(f"truncated graph6 size field in {s!r}")
    n = 0
    for v in vals[1:4]:
        n = n << 6 | v
    return n, 4


def _expected_length(n: int, offset: int) -> int:
    return offset + (n * (n - 1) // 2 + 5) // 6


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    for pos, c in enumerate(s):
        if not 63 <= ord(c) <= 126:
            raise FormatError(f"invalid graph6 character {c!r} at position {pos}")
    n, off = _decode_n(s)
    if len(s) != _expected_length(n, off):
        raise FormatError(
            f"graph6 string for n={n} needs {_expected_length(n, off)} characters, got {len(s)}"
        )
    adj = [0] * n
    k = 0
    data = s[off:]
    for j in range(1, n):
        for i in range(j):
            byte = ord(data[k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    # padding bits must be zero for a bit-exact round trip
    if k % 6 and (ord(data[-1]) - 63) & ((1 << (6 - k % 6)) - 1):
        raise FormatError("graph6 padding bits are not zero")
    return Graph(n, adj)


def looks_like_graph6(text: str) -> bool:
    """True if ``text`` is a syntactically valid graph6 string."""
    try:
        from_graph6(text)
    except FormatError:
        return False
    return True


def to_edge_list(G: Graph) -> str:
    edges = G.edges()
    lines = [f"{G.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln[0].startswith("#")]
    if not lines:
        raise FormatError("edge list is empty")
    try:
        n, m = (int(x) for x in lines[0])
    except ValueError:
        raise FormatError(f"edge list header must be 'n m', got {' '.join(lines[0])!r}")
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"edge list declares {m} edges but has {len(body)} lines")
    edges = []
    for ln in body:
        if len(ln) != 2:
            raise FormatError(f"edge line must be 'u v', got {' '.join(ln)!r}")
        try:
            edges.append((int(ln[0]), int(ln[1])))
        except ValueError:
            raise FormatError(f"edge line must be 'u v', got {' '.join(ln)!r}")
    return build(n, edges)
