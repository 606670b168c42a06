"""End-to-end acceptance runs, each timed against its budget.

Every test appends one PASS/FAIL line to ``conftest.ACCEPTANCE_LINES``; the
lines are printed in the terminal summary.
"""
import json
import random
import time
from contextlib import contextmanager
from itertools import product

import pytest

import conftest
import oracles
from conftest import DATA, GOLDEN
from spectopo import fixtures as fx
from spectopo.closure import (PointMap, all_point_maps, obs44_roundtrip, prop24_check,
                              spec_of, ternary_model, topology_tag, two_closed_points)
from spectopo.embed import (EquivRelation, alt_principalize, poset_topologize, principalize,
                            quotient, topologize_full)
from spectopo.enumeration import (deterministic_sample, enum_moore_families,
                                  enum_spec_posets, enum_spec_semilattices,
                                  enum_topologies, is_isomorphic)
from spectopo.errors import Condition44Violated, ParseError
from spectopo.folang import BUILTINS, builtin, evaluate, parse, to_text
from spectopo.spec import check_axioms, compute_kmap, is_additive
from spectopo.sst import format_document, parse_document


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        took = time.perf_counter() - start
        if status == "PASS" and took >= limit:
            status = "FAIL"
        line = f"{status} criterion {number}: {title} ({took:.2f}s, limit {limit:g}s)"
        conftest.ACCEPTANCE_LINES.append(line)
        print(line)
    assert took < limit, f"criterion {number} took {took:.2f}s"


def _sweep_inputs():
    small = [s for n in range(1, 4) for s in enum_spec_semilattices(n)]
    return small + deterministic_sample(enum_spec_semilattices(4), 200, seed=0)


# -- 1 -------------------------------------------------------------------------

def test_fixtures_reproduce():
    with criterion(1, "worked fixtures", 1.0):
        diamond = fx.diamond_spec_semilattice()
        rep = check_axioms(diamond)
        assert rep.laws["S3"].witness == (1, 2, 0)
        assert diamond.names[diamond.join_of(1, 2)] == "1"
        prep = check_axioms(fx.diamond_spec_poset())
        assert prep.principal is False and prep.principal_witness == 0

        linked = fx.chain_with_two_links()
        rep = check_axioms(linked)
        assert all(rep.laws[law].ok for law in ("S1", "S2", "S3"))
        e = EquivRelation(((0,), (1, 2), (3,)))
        with pytest.raises(Condition44Violated):
            quotient(linked, e)
        forced = quotient(linked, e, force=True).structure
        assert not check_axioms(forced).laws["S2"].ok

        np_ = fx.nonadditive_principal()
        k = compute_kmap(np_)
        assert k.is_total and k.named() == {"a": "a", "b": "b", "c": "1", "1": "1"}
        add = is_additive(np_)
        assert not add.ok and add.witness == (0, 1)


# -- 2 -------------------------------------------------------------------------

def test_principalize_sweep():
    with criterion(2, "principalize sweep, sizes 1-3 plus 200 at size 4", 60.0):
        failures = []
        for s in _sweep_inputs():
            res = principalize(s)
            cert = res.certificate
            good = (res.principal and res.additive and cert.is_embedding
                    and check_axioms(res.structure).is_specialization
                    and is_isomorphic(res.structure, alt_principalize(s)))
            if not good:
                failures.append(s)
        assert not failures


# -- 3 -------------------------------------------------------------------------

def _oracle_semilattice_embedding(s, space, send):
    """Recheck a map into the subsets of a space with brute-force closures."""
    fam, full = list(space.closed), space.full
    if not oracles.is_topology_family(fam):
        return False
    if len(set(send)) != s.size:
        return False
    for a in range(s.size):
        for b in range(s.size):
            if send[s.join_of(a, b)] != send[a] | send[b]:
                return False
            k = oracles.closure(fam, send[b], full)
            if bool(s.is_sq(a, b)) != (send[a] & ~k == 0):
                return False
    return True


def test_topologize_sweep():
    with criterion(3, "topologize_full sweep, character variant", 120.0):
        failures = []
        for s in _sweep_inputs():
            full = topologize_full(s, "character")
            ok = (full.ok and topology_tag(full.space).is_topology
                  and full.certificate.is_embedding
                  and _oracle_semilattice_embedding(s, full.space, full.composite.send))
            if not ok:
                failures.append(s)
        assert not failures


# -- 4 -------------------------------------------------------------------------

def test_poset_sweep():
    with criterion(4, "spec-poset embedding sweep, sizes 1-3", 120.0):
        failures = []
        for n in range(1, 4):
            for p in enum_spec_posets(n):
                pe = poset_topologize(p)
                send, space = pe.composite.send, pe.space
                fam, fullset = list(space.closed), space.full
                ok = pe.ok and oracles.is_topology_family(fam) and len(set(send)) == p.size
                for a, b in product(range(p.size), repeat=2):
                    k = oracles.closure(fam, send[b], fullset)
                    ok = ok and bool(p.is_le(a, b)) == (send[a] & ~send[b] == 0)
                    ok = ok and bool(p.is_sq(a, b)) == (send[a] & ~k == 0)
                if not ok:
                    failures.append(p)
        assert not failures


# -- 5 -------------------------------------------------------------------------

def test_continuity_equivalences():
    with criterion(5, "continuity equivalences, all maps on grounds up to 2 and 500 at 3",
                   60.0):
        cases = []
        fams = [x for k in range(3) for x in enum_moore_families(k)]
        for x in fams:
            for y in fams:
                cases.extend(all_point_maps(x, y))
        three = enum_moore_families(3)
        rng = random.Random(0)
        for _ in range(500):
            x, y = rng.choice(three), rng.choice(three)
            cases.append(PointMap(x, y, tuple(rng.randrange(3) for _ in range(3))))
        bad = 0
        for f in cases:
            v = prop24_check(f)
            brute = oracles.continuous(set(f.source.closed), f.target.closed, f.send,
                                       f.source.size)
            if not (v.holds and v.continuous == v.s_hom == v.p_hom == brute):
                bad += 1
        assert len(cases) == 252 + 500 and bad == 0


# -- 6 -------------------------------------------------------------------------

def test_moore_family_round_trip():
    with criterion(6, "Moore family round trip on 3 points", 10.0):
        fams = enum_moore_families(3)
        assert len(fams) == 61
        verdicts = [obs44_roundtrip(x) for x in fams]
        assert all(v.holds for v in verdicts)
        tops = [v for v in verdicts if v.is_topology]
        assert len(tops) == 29
        assert all((v.additive and v.strict_empty) == v.is_topology for v in verdicts)


# -- 7 -------------------------------------------------------------------------

def test_sentence_suite():
    with criterion(7, "sentence suite against native checks", 60.0):
        structs = ([s for n in range(1, 5) for s in enum_spec_semilattices(n)]
                   + [p for n in range(1, 5) for p in enum_spec_posets(n)])
        for s in structs:
            rep = check_axioms(s)
            for law, v in rep.laws.items():
                if v is not None:
                    assert evaluate(builtin(law), s).truth == v.ok
            assert evaluate(builtin("4.2"), s).truth == rep.principal
            if s.has_join:
                assert evaluate(builtin("4.3"), s).truth == is_additive(s).ok
        for x in enum_topologies(3):
            assert evaluate(builtin("4.5"), spec_of(x)[0]).truth
        assert not evaluate(builtin("4.5"), spec_of(two_closed_points())[0]).truth
        for m in range(4):
            for x in enum_topologies(m):
                assert evaluate(builtin("6.1"), ternary_model(x)).truth
        assert not evaluate(builtin("6.1"), ternary_model(two_closed_points())).truth


# -- 8 -------------------------------------------------------------------------

def test_parser_round_trips():
    with criterion(8, "sentence and document round trips, golden error positions", 1.0):
        for name in BUILTINS:
            s = builtin(name)
            assert parse(to_text(s)) == s
            assert to_text(parse(to_text(s))) == to_text(s)
        for path in sorted(DATA.glob("*.fo")):
            s = parse(path.read_text())
            assert parse(to_text(s)) == s
        for path in sorted(DATA.glob("*.sst")):
            doc = parse_document(path.read_text())
            assert parse_document(format_document(doc)) == doc
        for raw in (GOLDEN / "parse_errors.jsonl").read_text().splitlines():
            case = json.loads(raw)
            with pytest.raises(ParseError) as exc:
                parse(case["input"])
            assert (exc.value.line, exc.value.column) == (case["line"], case["column"])


# -- 9 -------------------------------------------------------------------------

def test_meet_behaviour():
    with criterion(9, "meet preservation of principalize, recorded composite failure", 5.0):
        for s in (s for n in range(1, 4) for s in enum_spec_semilattices(n)):
            assert principalize(s).certificate.preserves_existing_binary_meets
        pent = fx.pentagon_identity()
        assert compute_kmap(pent).values == tuple(range(pent.size))
        assert principalize(pent).certificate.preserves_existing_binary_meets
        res = topologize_full(pent)
        assert res.ok and not res.certificate.preserves_existing_binary_meets
