"""Complexity status of Graph Isomorphism and boundedness of clique-width
for (H1, H2)-free graphs.

Rules are static data: an identifier, the part they belong to, a guard on
an ordered pair and a short description in ``<=`` (induced subgraph of) and
``>=`` (contains induced) notation. A pair is classified by evaluating every
rule on every member of its equivalence closure in both orders.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

from .catalog import in_class_S, in_monotone_family, is_path_star_forest, make
from .graph import Graph, GraphError, complement
from .iso import are_isomorphic, canonical_form
from .subiso import contains_induced

MAX_VERTICES = 12


class ClassifierError(GraphError):
    """Input outside the supported size range."""


class ContradictionError(AssertionError):
    """Both a positive and a negative rule fired for the same pair."""


class GiStatus(str, Enum):
    POLYNOMIAL = "Polynomial"
    GI_COMPLETE = "GIComplete"
    OPEN = "Open"


class CwStatus(str, Enum):
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    OPEN = "Open"


Guard = Callable[[Graph, Graph, int], bool]


@dataclass(frozen=True)
class Rule:
    id: str
    part: int
    description: str
    guard: Guard


@dataclass(frozen=True)
class Member:
    """A pair in an equivalence closure and the operations that produced it."""

    h1: Graph
    h2: Graph
    ops: tuple[str, ...]


@dataclass(frozen=True)
class Verdict:
    status: str
    rule: str
    witness: Member
    swapped: bool
    description: str

    def label(self) -> str:
        return {
            "Polynomial": "POLYNOMIAL",
            "GIComplete": "GI-COMPLETE",
            "Bounded": "BOUNDED",
            "Unbounded": "UNBOUNDED",
            "Open": "OPEN",
        }[self.status]


# --- guard builders ------------------------------------------------------------


def _sub(*names: str) -> Callable[[Graph], bool]:
    graphs = [make(n) for n in names]
    return lambda H: any(contains_induced(X, H) for X in graphs)


def _sup(*names: str) -> Callable[[Graph], bool]:
    graphs = [make(n) for n in names]
    return lambda H: any(contains_induced(H, X) for X in graphs)


def _fam(name: str) -> Callable[[Graph, int], bool]:
    return lambda H, t: in_monotone_family(H, name, t)


def _co(pred: Callable[[Graph], bool]) -> Callable[[Graph], bool]:
    return lambda H: pred(complement(H))


def _both(p1, p2) -> Guard:
    return lambda a, b, t: p1(a) and p2(b)


_P4 = _sub("P4")

GI_RULES: tuple[Rule, ...] = (
    Rule("T10.1.i", 1, "H1 <= P4 or H2 <= P4", lambda a, b, t: _P4(a) or _P4(b)),
    Rule(
        "T10.1.ii", 1, "co(H1) <= K_{1,t}+P1 and H2 <= K_{1,t}+P1",
        lambda a, b, t: _fam("K_{1,t}+P1")(complement(a), t) and _fam("K_{1,t}+P1")(b, t),
    ),
    Rule(
        "T10.1.iii", 1, "co(H1) <= tP1+P3 and H2 <= tP1+P3",
        lambda a, b, t: _fam("tP1+P3")(complement(a), t) and _fam("tP1+P3")(b, t),
    ),
    Rule(
        "T10.1.iv", 1, "H1 <= K_t and H2 <= 2K_{1,t}, K_{1,t}^+ or P5",
        lambda a, b, t: _fam("K_t")(a, t)
        and (_fam("2K_{1,t}")(b, t) or _fam("K_{1,t}^+")(b, t) or _sub("P5")(b)),
    ),
    Rule(
        "T10.1.v", 1, "H1 <= paw and H2 <= P2+P4, P6, S_{1,2,2} or K_{1,t}^{++}+P1",
        lambda a, b, t: _sub("paw")(a)
        and (_sub("P2+P4", "P6", "S_{1,2,2}")(b) or _fam("K_{1,t}^{++}+P1")(b, t)),
    ),
    Rule("T10.1.vi", 1, "H1 <= diamond and H2 <= P1+2P2", _both(_sub("diamond"), _sub("P1+2P2"))),
    Rule("T10.1.vii", 1, "H1 <= gem and H2 <= P1+P4 or P5", _both(_sub("gem"), _sub("P1+P4", "P5"))),
    Rule(
        "T10.1.viii", 1, "H1 <= crossed-house and H2 <= P2+P3 or P5",
        _both(_sub("crossed-house"), _sub("P2+P3", "P5")),
    ),
    Rule(
        "T10.2.i", 2, "neither H1 nor H2 is a path star forest",
        lambda a, b, t: not is_path_star_forest(a) and not is_path_star_forest(b),
    ),
    Rule(
        "T10.2.ii", 2, "neither co(H1) nor co(H2) is a path star forest",
        lambda a, b, t: not is_path_star_forest(complement(a)) and not is_path_star_forest(complement(b)),
    ),
    Rule(
        "T10.2.iii", 2, "H1 >= K3 and H2 >= 2P1+2P2, P1+2P3, 2P1+P4 or 3P2",
        _both(_sup("K3"), _sup("2P1+2P2", "P1+2P3", "2P1+P4", "3P2")),
    ),
    Rule(
        "T10.2.iv", 2, "H1 >= K4 and H2 >= K_{1,4}^{++}, P1+2P2 or P1+P4",
        _both(_sup("K4"), _sup("K_{1,4}^{++}", "P1+2P2", "P1+P4")),
    ),
    Rule("T10.2.v", 2, "H1 >= K5 and H2 >= K_{1,3}^{++}", _both(_sup("K5"), _sup("K_{1,3}^{++}"))),
    Rule(
        "T10.2.vi", 2, "H1 >= C4 and H2 >= K_{1,3}, 3P1+P2 or 2P2",
        _both(_sup("C4"), _sup("K_{1,3}", "3P1+P2", "2P2")),
    ),
    Rule(
        "T10.2.vii", 2, "H1 >= diamond and H2 >= K_{1,3}, P2+P4, 2P3 or P6",
        _both(_sup("diamond"), _sup("K_{1,3}", "P2+P4", "2P3", "P6")),
    ),
    Rule("T10.2.viii", 2, "H1 >= gem and H2 >= P1+2P2", _both(_sup("gem"), _sup("P1+2P2"))),
)

GI_OPEN: tuple[tuple[str, tuple[str, str]], ...] = (
    ("OP-GI.i", ("K3", "P7")),
    ("OP-GI.i", ("K3", "S_{1,2,3}")),
    ("OP-GI.ii", ("K4", "S_{1,1,3}")),
    ("OP-GI.iii", ("diamond", "P1+P2+P3")),
    ("OP-GI.iii", ("diamond", "P1+P5")),
    ("OP-GI.iv", ("gem", "P2+P3")),
)


def _complete(H: Graph) -> bool:
    return H.n >= 1 and H.m == H.n * (H.n - 1) // 2


def _edgeless(H: Graph) -> bool:
    return H.n >= 1 and H.m == 0


CW_RULES: tuple[Rule, ...] = (
    Rule("T9.1.i", 1, "H1 <= P4 or H2 <= P4", lambda a, b, t: _P4(a) or _P4(b)),
    Rule("T9.1.ii", 1, "H1 = K_s and H2 = tP1", _both(_complete, _edgeless)),
    Rule(
        "T9.1.iii", 1,
        "H1 <= paw and H2 <= K_{1,3}+3P1, K_{1,3}+P2, P1+P2+P3, P1+P5, P1+S_{1,1,2}, P2+P4, P6, "
        "S_{1,1,3} or S_{1,2,2}",
        _both(
            _sub("paw"),
            _sub(
                "K_{1,3}+3P1", "K_{1,3}+P2", "P1+P2+P3", "P1+P5", "P1+S_{1,1,2}",
                "P2+P4", "P6", "S_{1,1,3}", "S_{1,2,2}",
            ),
        ),
    ),
    Rule(
        "T9.1.iv", 1, "H1 <= diamond and H2 <= P1+2P2, 3P1+P2 or P2+P3",
        _both(_sub("diamond"), _sub("P1+2P2", "3P1+P2", "P2+P3")),
    ),
    Rule("T9.1.v", 1, "H1 <= gem and H2 <= P1+P4 or P5", _both(_sub("gem"), _sub("P1+P4", "P5"))),
    Rule("T9.1.vi", 1, "H1 <= K3+P1 and H2 <= K_{1,3}", _both(_sub("K3+P1"), _sub("K_{1,3}"))),
    Rule(
        "T9.1.vii", 1, "H1 <= crossed-house and H2 <= 2P1+P3",
        _both(_sub("crossed-house"), _sub("2P1+P3")),
    ),
    Rule(
        "T9.2.i", 2, "H1 and H2 are not in S",
        lambda a, b, t: not in_class_S(a) and not in_class_S(b),
    ),
    Rule(
        "T9.2.ii", 2, "co(H1) and co(H2) are not in S",
        lambda a, b, t: not in_class_S(complement(a)) and not in_class_S(complement(b)),
    ),
    Rule(
        "T9.2.iii", 2, "H1 >= K3+P1 or C4 and H2 >= 4P1 or 2P2",
        _both(_sup("K3+P1", "C4"), _sup("4P1", "2P2")),
    ),
    Rule(
        "T9.2.iv", 2, "H1 >= diamond and H2 >= K_{1,3}, 5P1, P2+P4 or P6",
        _both(_sup("diamond"), _sup("K_{1,3}", "5P1", "P2+P4", "P6")),
    ),
    Rule(
        "T9.2.v", 2, "H1 >= K3 and H2 >= 2P1+2P2, 2P1+P4, 4P1+P2, 3P2 or 2P3",
        _both(_sup("K3"), _sup("2P1+2P2", "2P1+P4", "4P1+P2", "3P2", "2P3")),
    ),
    Rule("T9.2.vi", 2, "H1 >= K4 and H2 >= P1+P4 or 3P1+P2", _both(_sup("K4"), _sup("P1+P4", "3P1+P2"))),
    Rule("T9.2.vii", 2, "H1 >= gem and H2 >= P1+2P2", _both(_sup("gem"), _sup("P1+2P2"))),
)

CW_OPEN: tuple[tuple[str, tuple[str, str]], ...] = (
    ("OP-CW.i", ("K3", "P1+S_{1,1,3}")),
    ("OP-CW.i", ("K3", "S_{1,2,3}")),
    ("OP-CW.ii", ("diamond", "P1+P2+P3")),
    ("OP-CW.ii", ("diamond", "P1+P5")),
    ("OP-CW.iii", ("gem", "P2+P3")),
)

RULE_DESCRIPTIONS = {r.id: r.description for r in GI_RULES + CW_RULES}
RULE_DESCRIPTIONS.update({rid: f"H1 = {a} and H2 = {b}" for rid, (a, b) in GI_OPEN + CW_OPEN})


# --- equivalence closure -----------------------------------------------------


def _key(G: Graph) -> bytes:
    return canonical_form(G).certificate


def _pair_key(a: Graph, b: Graph) -> tuple[bytes, bytes]:
    return tuple(sorted((_key(a), _key(b))))


def _swap_triangle(H: Graph) -> Graph | None:
    if H.n != 3 and H.n != 4:
        return None
    if are_isomorphic(H, make("K3")) is not None:
        return make("paw")
    if are_isomorphic(H, make("paw")) is not None:
        return make("K3")
    return None


def equivalence_closure(H1: Graph, H2: Graph) -> list[Member]:
    """All pairs reachable by complementing both graphs and by swapping a
    K3 coordinate with the paw (either direction), up to isomorphism."""
    start = Member(H1, H2, ())
    seen = {_pair_key(H1, H2)}
    out = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            cand = [Member(complement(m.h1), complement(m.h2), m.ops + ("complement both",))]
            for idx in (0, 1):
                pair = [m.h1, m.h2]
                s = _swap_triangle(pair[idx])
                if s is not None:
                    pair[idx] = s
                    cand.append(Member(pair[0], pair[1], m.ops + (f"swap K3/paw in H{idx + 1}",)))
            for c in cand:
                k = _pair_key(c.h1, c.h2)
                if k not in seen:
                    seen.add(k)
                    out.append(c)
                    nxt.append(c)
        frontier = nxt
    return out


# --- classification ----------------------------------------------------------


@dataclass(frozen=True)
class Firing:
    rule: Rule
    member: Member
    swapped: bool


def _check_size(H1: Graph, H2: Graph) -> None:
    for i, H in enumerate((H1, H2), 1):
        if H.n > MAX_VERTICES:
            raise ClassifierError(f"H{i} has {H.n} vertices; classification supports at most {MAX_VERTICES}")


def firings(rules: tuple[Rule, ...], closure: list[Member]) -> list[Firing]:
    """Every (rule, member, orientation) that fires, in table order."""
    out = []
    for rule in rules:
        for m in closure:
            t = max(m.h1.n, m.h2.n, 1)
            for swapped, (a, b) in ((False, (m.h1, m.h2)), (True, (m.h2, m.h1))):
                if rule.guard(a, b, t):
                    out.append(Firing(rule, m, swapped))
    return out


def _open_match(table, closure: list[Member]):
    keys = {_pair_key(m.h1, m.h2): m for m in closure}
    for rid, (a, b) in table:
        m = keys.get(_pair_key(make(a), make(b)))
        if m is not None:
            return rid, m, f"H1 = {a} and H2 = {b}"
    return None


def _classify(H1, H2, rules, open_table, statuses) -> Verdict:
    _check_size(H1, H2)
    closure = equivalence_closure(H1, H2)
    fired = firings(rules, closure)
    pos = [f for f in fired if f.rule.part == 1]
    neg = [f for f in fired if f.rule.part == 2]
    opened = _open_match(open_table, closure)
    if pos and neg:
        raise ContradictionError(f"rules {pos[0].rule.id} and {neg[0].rule.id} both fire")
    if (pos or neg) and opened:
        raise ContradictionError(f"rule {(pos or neg)[0].rule.id} fires on open pair {opened[0]}")
    if pos or neg:
        f = (pos or neg)[0]
        status = statuses[0] if pos else statuses[1]
        return Verdict(status, f.rule.id, f.member, f.swapped, f.rule.description)
    if opened:
        rid, m, desc = opened
        return Verdict(statuses[2], rid, m, False, desc)
    raise ContradictionError("no rule and no open case matches; the classification should be total")


def classify_gi(H1: Graph, H2: Graph) -> Verdict:
    return _classify(H1, H2, GI_RULES, GI_OPEN, ("Polynomial", "GIComplete", "Open"))


def classify_cw(H1: Graph, H2: Graph) -> Verdict:
    return _classify(H1, H2, CW_RULES, CW_OPEN, ("Bounded", "Unbounded", "Open"))


def rule_guard_holds(rule_id: str, verdict: Verdict) -> bool:
    """Re-evaluate the verdict's rule on its witness pair."""
    for rule in GI_RULES + CW_RULES:
        if rule.id == rule_id:
            m = verdict.witness
            a, b = (m.h2, m.h1) if verdict.swapped else (m.h1, m.h2)
            return rule.guard(a, b, max(a.n, b.n, 1))
    for rid, (x, y) in GI_OPEN + CW_OPEN:
        if rid == rule_id and _pair_key(make(x), make(y)) == _pair_key(verdict.witness.h1, verdict.witness.h2):
            return True
    return False
