import random

import numpy as np
import pytest

from spectopo.closure import ClosureSpace
from spectopo.enumeration import (canonical_form, enum_join_semilattices,
                                  enum_moore_families, enum_posets,
                                  enum_spec_posets, enum_spec_semilattices,
                                  enum_specializations, enum_topologies,
                                  is_isomorphic, pipeline_sweep, relabel)
from spectopo.errors import SizeGuard
from spectopo.finorder import JoinSemilattice, Relation, chain
from spectopo.spec import check_axioms, make_spec
from spectopo.sst import parse_document

import oracles


def test_small_poset_counts():
    assert len(enum_posets(1)) == 1
    assert len(enum_posets(3)) == 5
    assert len(enum_posets(4)) == 16
    assert [len(enum_posets(n)) for n in (5, 6)] == [63, 318]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_poset_counts_match_brute_force(n):
    assert len(enum_posets(n)) == oracles.count_posets(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_semilattice_counts_match_brute_force(n):
    assert len(enum_join_semilattices(n)) == oracles.count_join_semilattices(n)


def test_semilattice_counts():
    assert [len(enum_join_semilattices(n)) for n in range(1, 6)] == [1, 1, 2, 5, 15]


@pytest.mark.parametrize("n", [4, 5])
def test_enumerated_posets_pairwise_non_isomorphic(n):
    ps = enum_posets(n)
    keys = {oracles.iso_key([p.matrix.tolist()], n) for p in ps} if n == 4 else {canonical_form(p) for p in ps}
    assert len(keys) == len(ps)


def test_specializations_of_small_bases():
    assert len(enum_specializations(chain(1))) == 1
    rels = enum_specializations(chain(2))
    assert len(rels) == 2
    assert rels[0].bits.tolist() == chain(2).matrix.tolist()
    assert rels[-1] == Relation.universal(chain(2).carrier)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_specializations_match_filter_oracle(n):
    for base in enum_posets(n) + enum_join_semilattices(n):
        le = base.matrix.tolist()
        j = base.join.tolist() if isinstance(base, JoinSemilattice) else None
        expect = sorted(tuple(map(tuple, q)) for q in oracles.specializations(le, j))
        got = enum_specializations(base)
        assert sorted(tuple(map(tuple, r.bits.tolist())) for r in got) == expect
        for r in got:
            assert check_axioms(make_spec(base, r)).is_specialization


def test_specializations_of_size_four_are_valid():
    for base in enum_join_semilattices(4):
        rels = enum_specializations(base)
        assert rels[0].bits.tolist() == base.matrix.tolist()
        assert rels[-1].bits.all()
        assert len(set(rels)) == len(rels)


def test_spec_structure_enumeration_is_principal_and_distinct():
    for n in range(1, 5):
        ss = enum_spec_semilattices(n)
        assert len({canonical_form(s) for s in ss}) == len(ss)
    assert [len(enum_spec_semilattices(n)) for n in range(1, 5)] == [1, 2, 7, 31]
    assert [len(enum_spec_posets(n)) for n in range(1, 4)] == [1, 5, 35]


def test_spec_counts_match_naive_iso_classes():
    for n in (2, 3):
        keys = set()
        for base in enum_join_semilattices(n):
            le = base.matrix.tolist()
            for q in oracles.specializations(le, base.join.tolist()):
                keys.add(oracles.iso_key([le, q], n))
        assert len(keys) == len(enum_spec_semilattices(n))


def test_moore_family_counts():
    assert [len(enum_moore_families(m)) for m in range(5)] == [1, 2, 7, 61, 2480]
    assert enum_moore_families(0)[0].closed == (0,)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_moore_families_match_filter_oracle(m):
    got = {x.closed for x in enum_moore_families(m)}
    assert got == {tuple(sorted(f)) for f in oracles.moore_families(m)}


def test_topology_counts():
    assert len(enum_topologies(3)) == 29
    assert len(enum_topologies(4, guard=4)) == 355
    expect = [f for f in oracles.moore_families(3) if oracles.is_topology_family(f)]
    assert {x.closed for x in enum_topologies(3)} == {tuple(sorted(f)) for f in expect}


def test_iso_classes_of_families():
    assert len(enum_moore_families(2, up_to_iso=True)) == 5
    assert len(enum_topologies(3, up_to_iso=True)) == 9


def test_size_guards():
    with pytest.raises(SizeGuard):
        enum_posets(7)
    with pytest.raises(SizeGuard):
        enum_join_semilattices(6)
    with pytest.raises(SizeGuard):
        enum_specializations(chain(5))
    with pytest.raises(SizeGuard):
        enum_moore_families(5)
    with pytest.raises(SizeGuard):
        enum_topologies(4)


def test_canonical_form_is_permutation_invariant():
    rng = random.Random(1234)
    pool = ([s for n in range(2, 5) for s in enum_spec_semilattices(n)]
            + [s for n in range(2, 5) for s in enum_spec_posets(n)]
            + enum_posets(5))
    for _ in range(1000):
        s = rng.choice(pool)
        p = list(range(s.size))
        rng.shuffle(p)
        assert canonical_form(relabel(s, p)) == canonical_form(s)


def test_canonical_form_of_families_is_permutation_invariant():
    rng = random.Random(7)
    fams = enum_moore_families(3)
    for _ in range(200):
        x = rng.choice(fams)
        p = list(range(3))
        rng.shuffle(p)
        assert canonical_form(relabel(x, p)) == canonical_form(x)


def test_relabel_preserves_axioms_and_joins():
    s = enum_spec_semilattices(4)[5]
    t = relabel(s, [3, 1, 0, 2])
    assert check_axioms(t).is_specialization
    assert is_isomorphic(s, t)


def test_streams_are_deterministic():
    a = [canonical_form(s) for s in enum_spec_semilattices(4)]
    assert a == sorted(a)
    assert a == [canonical_form(s) for s in enum_spec_semilattices(4)]


def test_semilattice_sweep_is_clean():
    for n in (1, 2, 3):
        rep = pipeline_sweep("semilattice", n)
        assert rep.ok and rep.passed == rep.total


def test_poset_sweep_is_clean():
    for n in (1, 2, 3):
        rep = pipeline_sweep("poset", n)
        assert rep.ok


def test_paper_literal_sweep_reports_outcomes():
    rep = pipeline_sweep("semilattice", 2, variant="paper_literal")
    assert rep.total == 2
    assert "topologize.embedding" in rep.outcomes
    assert "size 2" in rep.table()
    for f in rep.failures:
        assert f.replay.startswith("structure failing")
        assert "--variant paper-literal" in f.replay
        assert parse_document(f.replay)["failing"] == f.structure


def test_sample_is_deterministic():
    a = pipeline_sweep("semilattice", 4, sample=10, seed=3)
    b = pipeline_sweep("semilattice", 4, sample=10, seed=3)
    assert a.total == 10 and a.outcomes == b.outcomes
