"""Rectangle labeling and transition skeleton for a Farey pair.

Puncturing the torus on a pair of coexisting orbits with Farey-neighbor
rotation numbers q1/p1 (long, period p1) and q2/p2 (short, period p2) and
thickening the invariant graph yields a decomposition into N = 3*p1 + 3*p2 + 1
rectangles.  They are indexed 1..N and grouped by edge kind:

    D   1 .. p2                   segments joining short-orbit loops to diagonals
    C   p2+1 .. 2*p2              loops around the short-orbit points
    L   2*p2+1 .. 3*p2            one diagonal of each twice-punctured rectangle
    K   3*p2+1 .. 4*p2            the other diagonal of those rectangles
    A   4*p2+1 .. 4*p2+p1         long vertical edges
    B   4*p2+p1+1 .. 4*p2+2*p1+1  short vertical edges; the final one is split
                                  in two (lower, upper) so no rectangle meets an
                                  inverse image twice
    M   4*p2+2*p1+2 .. N          diagonals of once-punctured rectangles

Which of the two diagonals is called L depends on the pair's case (the short
orbit attaching from below or above); the index bookkeeping is identical, so
both cases share one skeleton and the case lives only in FareyPair.direction.

The transition skeleton is the subgraph carrying the two-loop cycle family:

    B-loop     r_{p1+4*p2+1} -> ... -> r_{2*p1+4*p2} -> back     (length p1)
    D-loop     r_1 -> ... -> r_{p2} -> back                      (length p2)
    entry      r_{2*p1+4*p2} -> r_1
    exit       r_{p2} -> r_{2*p2+1}
    skip       r_{2*p1+4*p2} -> r_{2*p2+1}   (bypasses the D-loop entirely)
    connector  r_{2*p2+1} -> ... -> r_{3*p2} -> r_{p1+4*p2+1}    (the L chain)

A cycle O(n, m) runs n times around the B-loop, m-1 times around the D-loop
(skipping it when m = 1) and returns through the connector: length
n*p1 + m*p2.  Displacement bookkeeping: each B-loop pass advances q1 cells
and each D-loop pass or connector pass advances q2 cells, so O(n, m) has
rotation number (n*q1 + m*q2)/(n*p1 + m*p2).  (An alternative reading
assigns the connector an advance of q1; that convention cannot reproduce the
rotation-number total above and is not used here — both readings are noted
for the record.)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from .forcing import SimpleOrbit, forced_set
from .rationals import FareyPair, Rational, weighted_mediant

MAX_CYCLE_LEN = 64


class RectangleKind(Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    K = "K"
    L = "L"
    M = "M"


@dataclass(frozen=True)
class RectangleId:
    index: int
    kind: RectangleKind


def n_rectangles(pair: FareyPair) -> int:
    return 3 * pair.p1 + 3 * pair.p2 + 1


def kind_ranges(pair: FareyPair) -> dict[RectangleKind, range]:
    """Index ranges of each rectangle kind (1-based, end-exclusive ranges)."""
    p1, p2 = pair.p1, pair.p2
    return {
        RectangleKind.D: range(1, p2 + 1),
        RectangleKind.C: range(p2 + 1, 2 * p2 + 1),
        RectangleKind.L: range(2 * p2 + 1, 3 * p2 + 1),
        RectangleKind.K: range(3 * p2 + 1, 4 * p2 + 1),
        RectangleKind.A: range(4 * p2 + 1, 4 * p2 + p1 + 1),
        RectangleKind.B: range(4 * p2 + p1 + 1, 4 * p2 + 2 * p1 + 2),
        RectangleKind.M: range(4 * p2 + 2 * p1 + 2, 3 * p1 + 3 * p2 + 2),
    }


def label_rectangles(pair: FareyPair) -> list[RectangleId]:
    """All 3*p1 + 3*p2 + 1 rectangle ids in index order."""
    out = []
    for kind, rng in kind_ranges(pair).items():
        out.extend(RectangleId(i, kind) for i in rng)
    out.sort(key=lambda r: r.index)
    return out


@dataclass(frozen=True)
class TransitionGraph:
    """Allowed-transition skeleton over the rectangle indices of a pair."""

    pair: FareyPair
    n_rectangles: int
    edges: frozenset[tuple[int, int]]


def _b_loop(pair: FareyPair) -> list[int]:
    p1, p2 = pair.p1, pair.p2
    return list(range(p1 + 4 * p2 + 1, 2 * p1 + 4 * p2 + 1))


def _d_loop(pair: FareyPair) -> list[int]:
    return list(range(1, pair.p2 + 1))


def _connector(pair: FareyPair) -> list[int]:
    p2 = pair.p2
    return list(range(2 * p2 + 1, 3 * p2 + 1))


def build_skeleton_graph(pair: FareyPair) -> TransitionGraph:
    """The two loops, their entry/exit/skip edges and the connector chain."""
    b = _b_loop(pair)
    d = _d_loop(pair)
    l = _connector(pair)
    edges = set()
    for nodes in (b, d):
        for u, v in zip(nodes, nodes[1:]):
            edges.add((u, v))
        edges.add((nodes[-1], nodes[0]))
    for u, v in zip(l, l[1:]):
        edges.add((u, v))
    edges.add((l[-1], b[0]))  # connector back into the B-loop
    edges.add((b[-1], d[0]))  # entry into the D-loop
    edges.add((d[-1], l[0]))  # exit to the connector
    edges.add((b[-1], l[0]))  # skip edge, used when the D-loop is bypassed
    return TransitionGraph(pair, n_rectangles(pair), frozenset(edges))


class SymbolicCycle:
    """Cyclic word of rectangle ids; equality and hashing are rotation-free."""

    def __init__(self, word: Sequence[RectangleId]):
        if not word:
            raise ValueError("a symbolic cycle must be nonempty")
        self.word = tuple(word)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(r.index for r in self.word)

    @cached_property
    def canonical(self) -> tuple[int, ...]:
        """Lexicographically minimal rotation of the index sequence."""
        idx = self.indices
        return min(idx[i:] + idx[:i] for i in range(len(idx)))

    def __len__(self) -> int:
        return len(self.word)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolicCycle) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __repr__(self) -> str:
        return f"SymbolicCycle({list(self.indices)})"


def _ids_for(pair: FareyPair, indices: Iterable[int]) -> list[RectangleId]:
    by_index = {r.index: r for r in label_rectangles(pair)}
    return [by_index[i] for i in indices]


def build_Onm(pair: FareyPair, n: int, m: int) -> SymbolicCycle:
    """The cycle O(n, m): n B-loop passes, m-1 D-loop passes, one connector."""
    if n < 1 or m < 1:
        raise ValueError(f"loop counts must be positive, got ({n}, {m})")
    indices = _b_loop(pair) * n + _d_loop(pair) * (m - 1) + _connector(pair)
    return SymbolicCycle(_ids_for(pair, indices))


def cycle_rotation_number(cycle: SymbolicCycle, pair: FareyPair) -> Rational:
    """Rotation number of an allowed cycle of the pair's skeleton.

    The skeleton forces B symbols to come in full B-loop passes and D/L
    symbols in full p2-blocks, so the total displacement is a*q1 + b*q2 over
    a*p1 + b*p2 steps with a = (#B)/p1, b = (#D + #L)/p2.
    """
    graph = build_skeleton_graph(pair)
    idx = cycle.indices
    valid = {r.index: r.kind for r in label_rectangles(pair)}
    for r in cycle.word:
        if valid.get(r.index) is not r.kind:
            raise ValueError(f"rectangle {r} does not belong to pair {pair}")
    for u, v in zip(idx, idx[1:] + idx[:1]):
        if (u, v) not in graph.edges:
            raise ValueError(f"transition {u} -> {v} is not allowed for {pair}")
    counts = {kind: 0 for kind in RectangleKind}
    for r in cycle.word:
        counts[r.kind] += 1
    nb, nd, nl = counts[RectangleKind.B], counts[RectangleKind.D], counts[RectangleKind.L]
    if nb % pair.p1 or (nd + nl) % pair.p2:
        raise ValueError("cycle does not decompose into loop/connector blocks")
    a = nb // pair.p1
    b = (nd + nl) // pair.p2
    return weighted_mediant(pair.long, pair.short, a, b)


def enumerate_cycles(graph: TransitionGraph, max_len: int) -> list[SymbolicCycle]:
    """All block cycles of the skeleton up to length max_len.

    The skeleton is two loops joined by a chain, so up to cyclic rotation its
    primitive cycles with a single connector pass are exactly: the pure
    B-loop, the pure D-loop and the O(n, m) family.  Cycles passing the
    connector more than once realize no displacement/length ratio not already
    realized by some O(n, m), so this family is what gets enumerated.
    """
    if max_len < 0:
        raise ValueError(f"max_len must be non-negative, got {max_len}")
    if max_len > MAX_CYCLE_LEN:
        raise ValueError(f"max_len {max_len} exceeds guard {MAX_CYCLE_LEN}")
    pair = graph.pair
    p1, p2 = pair.p1, pair.p2
    out = []
    if p2 <= max_len:
        out.append(SymbolicCycle(_ids_for(pair, _d_loop(pair))))
    if p1 <= max_len:
        out.append(SymbolicCycle(_ids_for(pair, _b_loop(pair))))
    n = 1
    while n * p1 + p2 <= max_len:
        m = 1
        while n * p1 + m * p2 <= max_len:
            out.append(build_Onm(pair, n, m))
            m += 1
        n += 1
    allowed = [c for c in out if _cycle_allowed(c, graph)]
    allowed.sort(key=lambda c: (len(c), c.canonical))
    return allowed


def _cycle_allowed(cycle: SymbolicCycle, graph: TransitionGraph) -> bool:
    idx = cycle.indices
    return all((u, v) in graph.edges for u, v in zip(idx, idx[1:] + idx[:1]))


def realized_rotation_numbers(pair: FareyPair, max_period: int) -> set[Rational]:
    """Rotation numbers of all enumerated cycles up to the given period."""
    graph = build_skeleton_graph(pair)
    return {cycle_rotation_number(c, pair) for c in enumerate_cycles(graph, max_period)}


def verify_against_forcing(pair: FareyPair, max_den: int) -> tuple[bool, set[Rational]]:
    """Cross-check: every orbit in the forcing closure (denominator <= max_den)
    must have a realizing symbolic cycle.  Returns (ok, missing rotations)."""
    closure = {
        e.rotation for e in forced_set(pair, max_den) if isinstance(e, SimpleOrbit)
    }
    max_period = max(max_den, pair.p1, pair.p2)
    realized = realized_rotation_numbers(pair, max_period)
    missing = closure - realized
    return not missing, missing


def graph_to_dot(graph: TransitionGraph) -> str:
    """DOT rendering; node labels are "r<i>:<kind>"."""
    lines = ["digraph transitions {"]
    for r in label_rectangles(graph.pair):
        lines.append(f'  r{r.index} [label="r{r.index}:{r.kind.value}"];')
    for u, v in sorted(graph.edges):
        lines.append(f"  r{u} -> r{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
