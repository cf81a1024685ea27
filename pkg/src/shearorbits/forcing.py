"""The forcing order on simple-orbit data.

Elements are either a single orbit (one rotation number) or a pair of
coexisting orbits (a Farey-neighbor pair).  A pair dominates exactly the
orbits whose rotation number lies in its closed endpoint interval and the
pairs whose endpoints both do; a lone orbit dominates only itself.  The
relation is reflexive, antisymmetric and transitive, so enumerating what a
pair dominates up to a denominator bound gives a finite slice of its
(infinite) forced set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .rationals import (
    FareyPair,
    Rational,
    is_farey_neighbor,
    mediant,
    parse_pair,
    parse_rational,
    rationals_between,
)

MAX_TREE_DEPTH = 32


@dataclass(frozen=True)
class SimpleOrbit:
    rotation: Rational

    def __str__(self) -> str:
        return str(self.rotation)


@dataclass(frozen=True)
class SimplePair:
    pair: FareyPair

    def __str__(self) -> str:
        return str(self.pair)


ForcingElement = Union[SimpleOrbit, SimplePair]


def parse_element(text: str) -> ForcingElement:
    """An element is either 'q/p' or 'q1/p1 v q2/p2'."""
    if "v" in text.split():
        return SimplePair(parse_pair(text))
    return SimpleOrbit(parse_rational(text))


def forces(a: ForcingElement, b: ForcingElement) -> bool:
    """Reflexive closure of the dominance relation.

    Pair >= Orbit(t)  iff t lies in the pair's closed interval;
    Pair >= Pair      iff both endpoints lie in the closed interval;
    Orbit >= Orbit    iff equal;  an orbit never forces a pair.
    """
    if isinstance(a, SimpleOrbit):
        return isinstance(b, SimpleOrbit) and a.rotation == b.rotation
    lo, hi = a.pair.lo, a.pair.hi
    if isinstance(b, SimpleOrbit):
        return lo <= b.rotation <= hi
    return lo <= b.pair.lo and b.pair.hi <= hi


def forced_set(p: FareyPair, max_den: int) -> set[ForcingElement]:
    """Finite truncation of everything p forces: all orbits in the closed
    interval with denominator <= max_den, all Farey-neighbor pairs among
    them, plus p itself and its endpoint orbits."""
    if max_den < 1:
        raise ValueError(f"max_den must be positive, got {max_den}")
    lo, hi = p.lo, p.hi
    orbits = {lo, hi} | set(rationals_between(lo, hi, max_den))
    bounded = sorted(t for t in orbits if t.den <= max_den)
    result: set[ForcingElement] = {SimpleOrbit(t) for t in orbits}
    result.add(SimplePair(p))
    for i, s in enumerate(bounded):
        for t in bounded[i + 1 :]:
            if is_farey_neighbor(s, t):
                result.add(SimplePair(FareyPair.of(s, t)))
    return result


@dataclass(frozen=True)
class MediantTree:
    """Binary Farey subdivision rooted at a pair.

    The node's mediant splits its interval; the children (when depth > 0)
    are the sub-pairs (lo, mediant) and (mediant, hi), each again a
    Farey-neighbor pair.
    """

    pair: FareyPair
    mediant: Rational
    children: "tuple[MediantTree, MediantTree] | None"


def mediant_tree(p: FareyPair, depth: int) -> MediantTree:
    """Farey subdivision tree of `depth` levels below p."""
    if depth < 0:
        raise ValueError(f"depth must be non-negative, got {depth}")
    if depth > MAX_TREE_DEPTH:
        raise ValueError(f"depth {depth} exceeds guard {MAX_TREE_DEPTH}")
    lo, hi = p.lo, p.hi
    med = mediant(lo, hi)
    if depth == 0:
        return MediantTree(p, med, None)
    left = mediant_tree(FareyPair.of(lo, med), depth - 1)
    right = mediant_tree(FareyPair.of(med, hi), depth - 1)
    return MediantTree(p, med, (left, right))


def forcing_chain(p: FareyPair, target: Rational) -> list[FareyPair]:
    """Witness path for forces(p, target): mediant-tree pairs descending from
    p to the pair whose mediant is the target."""
    if not (p.lo < target < p.hi):
        raise ValueError(f"{target} is not strictly between {p.lo} and {p.hi}")
    chain = []
    cur = p
    while True:
        chain.append(cur)
        med = mediant(cur.lo, cur.hi)
        if med == target:
            return chain
        if target < med:
            cur = FareyPair.of(cur.lo, med)
        else:
            cur = FareyPair.of(med, cur.hi)


def element_to_json(e: ForcingElement) -> dict:
    if isinstance(e, SimpleOrbit):
        return {"kind": "orbit", "value": str(e.rotation)}
    return {"kind": "pair", "endpoints": [str(e.pair.long), str(e.pair.short)]}


def forced_set_to_json(elems: set[ForcingElement]) -> list[dict]:
    """Stable serialization: orbits ascending, then pairs by interval."""
    orbits = sorted((e.rotation for e in elems if isinstance(e, SimpleOrbit)))
    pairs = sorted(
        (e.pair for e in elems if isinstance(e, SimplePair)),
        key=lambda q: (q.lo, q.hi),
    )
    return [element_to_json(SimpleOrbit(r)) for r in orbits] + [
        element_to_json(SimplePair(q)) for q in pairs
    ]
