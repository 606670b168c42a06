"""Named small structures used throughout the tests and demos."""
from __future__ import annotations

from .finorder import (Relation, chain, joins_from_order,
                       poset_from_covers)
from .spec import (SpecPoset, SpecSemilattice, close_specialization,
                   from_operator, preorder_close)

DIAMOND_COVERS = [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]


def diamond_spec_poset() -> SpecPoset:
    """0 < a, b < 1 with x [= y for x, y in {0, a, b} and x [= 1 for all x.

    A specialization poset that is not principal: {x | x [= 0} has no maximum.
    """
    p = poset_from_covers(["0", "a", "b", "1"], DIAMOND_COVERS)
    gens = Relation.from_pairs(p.carrier, [("a", "0"), ("b", "0")])
    return SpecPoset(p, preorder_close(p, gens))


def diamond_spec_semilattice() -> SpecSemilattice:
    """Same relation read over joins; S3 fails since a v b = 1 is not [= 0."""
    sp = diamond_spec_poset()
    return SpecSemilattice(joins_from_order(sp.poset), sp.sqle)


def chain_with_two_links() -> SpecSemilattice:
    """Chain 0 < 1 < 2 < 3 with join = max and extra pairs 1 [= 0, 3 [= 2."""
    c = chain(4)
    sq = Relation(c.carrier, c.matrix | Relation.from_pairs(c.carrier, [(1, 0), (3, 2)]).bits)
    return SpecSemilattice(c, sq)


def nonadditive_principal() -> SpecSemilattice:
    """a, b < c < 1 with 1 [= c: principal, Ka = a, Kb = b, Kc = K1 = 1, not additive."""
    s = joins_from_order(poset_from_covers(["a", "b", "c", "1"],
                                           [("a", "c"), ("b", "c"), ("c", "1")]))
    gens = Relation.from_pairs(s.carrier, [("1", "c")])
    return SpecSemilattice(s, close_specialization(s, gens))


def nonadditive_extension(side: str = "a") -> SpecSemilattice:
    """One of the two incomparable principal additive extensions of
    :func:`nonadditive_principal`: add x1 with x < x1 < 1 and x1 [= x, for x = a or b."""
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    new = side + "1"
    s = joins_from_order(poset_from_covers(
        ["a", "b", "c", "1", new],
        [("a", "c"), ("b", "c"), ("c", "1"), (side, new), (new, "1")]))
    gens = Relation.from_pairs(s.carrier, [("1", "c"), (new, side)])
    return SpecSemilattice(s, close_specialization(s, gens))


def pentagon_identity() -> SpecSemilattice:
    """The 5-element nondistributive lattice N5 with K = identity."""
    s = joins_from_order(poset_from_covers(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]))
    return from_operator(s, list(range(5)))


def two_chain_identity() -> SpecSemilattice:
    """0 < 1 with [= equal to <=."""
    c = chain(2)
    return SpecSemilattice(c, Relation(c.carrier, c.matrix))


def one_point() -> SpecSemilattice:
    c = chain(1)
    return SpecSemilattice(c, Relation(c.carrier, c.matrix))


def antichain_poset(names=("a", "b")) -> SpecPoset:
    p = poset_from_covers(list(names), [])
    return SpecPoset(p, Relation(p.carrier, p.matrix))


__all__ = [
    "diamond_spec_poset", "diamond_spec_semilattice", "chain_with_two_links",
    "nonadditive_principal", "nonadditive_extension", "pentagon_identity",
    "two_chain_identity", "one_point", "antichain_poset",
]
