from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectopo import fixtures as fx
from spectopo.enumeration import (enum_join_semilattices, enum_posets,
                                  enum_spec_posets, enum_spec_semilattices)
from spectopo.errors import (BaseMismatch, InvalidStructure, NotExtensive,
                             NotIdempotent, NotIsotone, NotJoinHom,
                             NotMonotone, NotPrincipal, NotTolerance)
from spectopo.finorder import (Carrier, JoinSemilattice, Relation, chain,
                               semilattice_from_covers)
from spectopo.spec import (SpecPoset, SpecSemilattice, cech_check,
                           check_axioms, close_specialization, compute_kmap,
                           from_hom, from_operator, from_tolerance,
                           from_weight, is_additive, law_holds_at,
                           order_spec_reduct, spec_lattice_ops)

import oracles

SMALL = ([s for n in range(1, 5) for s in enum_spec_semilattices(n)]
         + [p for n in range(1, 5) for p in enum_spec_posets(n)])


def _lists(s):
    j = s.join.tolist() if s.has_join else None
    return s.le.tolist(), s.sq.tolist(), j


# -- axioms -------------------------------------------------------------------

def test_diamond_fails_s3_at_atoms_over_bottom():
    s = fx.diamond_spec_semilattice()
    rep = check_axioms(s)
    assert not rep.laws["S3"].ok
    assert rep.laws["S3"].witness == (s.carrier.index("a"), s.carrier.index("b"), 0)
    assert rep.laws["S1"].ok and rep.laws["S2"].ok
    assert not rep.is_specialization


def test_order_as_specialization_passes_everything():
    for j in enum_join_semilattices(4):
        rep = check_axioms(SpecSemilattice(j, Relation(j.carrier, j.matrix)))
        assert all(v.ok for v in rep.laws.values())


def test_chain_with_links_is_specialization():
    rep = check_axioms(fx.chain_with_two_links())
    assert rep.is_specialization and all(v.ok for v in rep.laws.values())


@pytest.mark.parametrize("idx", range(len(SMALL)))
def test_vectorised_laws_match_python_loops(idx):
    s = SMALL[idx]
    le, q, j = _lists(s)
    rep = check_axioms(s)
    for name, verdict in rep.laws.items():
        if verdict is None:
            continue
        assert verdict.witness == oracles.law(name, le, q, j)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 1 << 16), st.integers(0, 4))
def test_laws_on_arbitrary_relations(bits, which):
    bases = [chain(3), fx.diamond_spec_semilattice().semilattice, chain(4),
             chain(2),
             fx.pentagon_identity().semilattice]
    base = bases[which]
    n = base.size
    q = np.array([[bool(bits >> ((a * n + b) % 16) & 1) for b in range(n)] for a in range(n)])
    s = SpecSemilattice(base, Relation(base.carrier, q))
    rep = check_axioms(s)
    le, ql, j = _lists(s)
    for name, verdict in rep.laws.items():
        assert verdict.witness == oracles.law(name, le, ql, j)
        if verdict.witness is not None:
            assert not law_holds_at(name, s, verdict.witness)


def test_derived_laws_follow_from_defining_ones():
    for s in SMALL:
        rep = check_axioms(s)
        assert rep.is_specialization
        assert all(v.ok for v in rep.laws.values() if v is not None)


# -- closing generators -------------------------------------------------------

def test_generator_below_bottom_on_two_chain_gives_universal():
    c = chain(2)
    r = close_specialization(c, Relation.from_pairs(c.carrier, [(1, 0)]))
    assert r == Relation.universal(c.carrier)


def test_no_generators_gives_order():
    for j in enum_join_semilattices(3):
        assert close_specialization(j, Relation(j.carrier, np.zeros((3, 3), bool))).bits.tolist() \
            == j.matrix.tolist()


def test_closed_input_unchanged():
    s = fx.chain_with_two_links()
    assert close_specialization(s.semilattice, s.sqle) == s.sqle


@pytest.mark.parametrize("n", [2, 3])
def test_closure_is_least_specialization_containing_generators(n):
    for base in enum_join_semilattices(n) + enum_posets(n):
        le = base.matrix.tolist()
        j = base.join.tolist() if isinstance(base, JoinSemilattice) else None
        specs = oracles.specializations(le, j)
        for bits in range(0, 1 << (n * n), 7):
            gens = [[bool(bits >> (a * n + b) & 1) for b in range(n)] for a in range(n)]
            above = [q for q in specs if all(q[a][b] for a in range(n) for b in range(n) if gens[a][b])]
            least = [[all(q[a][b] for q in above) for b in range(n)] for a in range(n)]
            got = close_specialization(base, Relation(base.carrier, np.array(gens)))
            assert got.bits.tolist() == least


# -- K map ---------------------------------------------------------------------

def test_nonadditive_fixture_k_values():
    k = compute_kmap(fx.nonadditive_principal())
    assert k.named() == {"a": "a", "b": "b", "c": "1", "1": "1"}


def test_diamond_poset_has_no_k_at_bottom():
    k = compute_kmap(fx.diamond_spec_poset())
    assert not k.is_total and k.undefined == (0, 1, 2)


def test_order_gives_identity_k():
    for p in enum_posets(4):
        k = compute_kmap(SpecPoset(p, Relation(p.carrier, p.matrix)))
        assert k.values == tuple(range(4))


def test_k_requires_preorder():
    c = chain(2)
    with pytest.raises(InvalidStructure):
        compute_kmap(SpecSemilattice(c, Relation(c.carrier, np.zeros((2, 2), bool))))


def test_every_finite_spec_semilattice_is_principal():
    for n in range(1, 5):
        for s in enum_spec_semilattices(n):
            assert compute_kmap(s).is_total


def test_additivity_examples():
    v = is_additive(fx.nonadditive_principal())
    assert not v.ok and v.witness == (0, 1)
    s = fx.chain_with_two_links()
    assert compute_kmap(s).values == (1, 1, 3, 3)
    assert is_additive(s).ok
    assert is_additive(fx.pentagon_identity()).ok


def test_additivity_needs_principal():
    s = fx.nonadditive_principal()
    k = compute_kmap(fx.diamond_spec_poset())
    with pytest.raises(NotPrincipal):
        is_additive(s, k)


# -- Cech -----------------------------------------------------------------------

def test_valid_structures_are_cech():
    assert all(cech_check(s) for s in SMALL)


def test_non_idempotent_operator_is_cech_but_not_transitive():
    s = from_operator(chain(3), [1, 2, 2], require_idempotent=False)
    assert cech_check(s)
    assert not check_axioms(s).laws["S2"].ok


def test_empty_relation_is_not_cech():
    c = chain(2)
    s = SpecSemilattice(c, Relation(c.carrier, np.zeros((2, 2), bool)))
    assert not check_axioms(s).laws["S1"].ok
    assert not cech_check(s)


# -- constructors -------------------------------------------------------------

def test_identity_operator_gives_order():
    for p in enum_posets(3):
        assert from_operator(p, range(3)).sq.tolist() == p.matrix.tolist()


def test_top_operator_fixing_bottom():
    lattice = fx.pentagon_identity().semilattice
    s = from_operator(lattice, [0, 4, 4, 4, 4])
    expect = [[b != 0 or a == 0 for b in range(5)] for a in range(5)]
    assert s.sq.tolist() == expect


def test_operator_errors():
    c = chain(3)
    with pytest.raises(NotExtensive):
        from_operator(c, [0, 0, 2])
    with pytest.raises(NotIsotone):
        from_operator(c, [2, 1, 2])
    with pytest.raises(NotIdempotent):
        from_operator(c, [1, 2, 2])


def test_operator_round_trip_on_principal_structures():
    for s in SMALL:
        k = compute_kmap(s)
        if k.is_total:
            base = s.semilattice if s.has_join else s.poset
            assert from_operator(base, k.values) == s


def test_hom_identity_and_constant():
    c = chain(3)
    assert from_hom(c, c, [0, 1, 2]).sq.tolist() == c.matrix.tolist()
    assert from_hom(c, chain(1), [0, 0, 0]).sq.all()


def test_hom_collapsing_top_pair_relates_top_to_middle():
    s = fx.nonadditive_principal().semilattice
    t = semilattice_from_covers(["a", "b", "t"], [("a", "t"), ("b", "t")])
    u = from_hom(s, t, [0, 1, 2, 2])
    assert u.is_sq(s.carrier.index("1"), s.carrier.index("c"))


def test_hom_must_preserve_joins():
    with pytest.raises(NotJoinHom):
        from_hom(chain(3), chain(3), [0, 2, 1])


def test_tolerance_examples():
    g = Carrier(("1", "2", "3"))
    ident = from_tolerance(g, Relation.identity(g))
    assert ident.sq.tolist() == ident.le.tolist()
    univ = from_tolerance(g, Relation.universal(g))
    assert all(univ.sq[a, b] for a in range(1, 8) for b in range(1, 8))
    assert univ.sq[0].all() and not univ.sq[1:, 0].any()
    path = Relation.from_pairs(g, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)])
    s = from_tolerance(g, path)
    assert s.is_sq(1, 2) and not s.is_sq(2, 1)
    assert check_axioms(s).is_specialization


def test_tolerance_must_be_reflexive_and_symmetric():
    g = Carrier(("1", "2"))
    with pytest.raises(NotTolerance):
        from_tolerance(g, Relation.from_pairs(g, [(0, 0)]))
    with pytest.raises(NotTolerance):
        from_tolerance(g, Relation.from_pairs(g, [(0, 0), (1, 1), (0, 1)]))


POWER12 = [set(), {1}, {2}, {1, 2}]


def test_counting_measure_breaks_s3():
    r = from_weight(POWER12, [0, 1, 1, 2])
    assert r.semilattice is None
    assert r.s3_witness == (1, 2, 1)
    assert "S3 fails" in r.advisory


def test_two_valued_measure_gives_semilattice():
    r = from_weight(POWER12, [0, 1, 1, 1])
    assert r.semilattice is not None
    assert check_axioms(r.semilattice).is_specialization


def test_constant_measure_gives_universal_relation():
    r = from_weight(POWER12, [Fraction(1, 2), (1, 2), Fraction(1, 2), Fraction(2, 4)])
    assert r.poset.sq.all()


def test_measure_must_be_monotone():
    with pytest.raises(NotMonotone):
        from_weight(POWER12, [1, 0, 1, 1])


def test_specialization_lattice_operations():
    s = fx.chain_with_two_links()
    base = s.semilattice
    univ = spec_lattice_ops(base, [], "finest")
    order = spec_lattice_ops(base, [], "coarsest")
    assert spec_lattice_ops(base, [s.sqle, univ], "meet") == s.sqle
    assert spec_lattice_ops(base, [order, order], "join") == order
    other = close_specialization(base, Relation.from_pairs(base.carrier, [(2, 1)]))
    meet = spec_lattice_ops(base, [s.sqle, other], "meet")
    assert meet.bits.tolist() == (s.sq & other.bits).tolist()
    assert check_axioms(SpecSemilattice(base, meet)).is_specialization


def test_lattice_operations_reject_foreign_carrier():
    s = fx.chain_with_two_links()
    with pytest.raises(BaseMismatch):
        spec_lattice_ops(s.semilattice, [Relation.identity(Carrier.of_size(3))], "meet")


def test_reduct_keeps_relation():
    r = order_spec_reduct(fx.chain_with_two_links())
    assert r.kind == "poset" and check_axioms(r).is_specialization
    one = fx.one_point()
    assert order_spec_reduct(one).size == 1
    for n in range(1, 5):
        for s in enum_spec_semilattices(n):
            assert check_axioms(order_spec_reduct(s)).is_specialization
