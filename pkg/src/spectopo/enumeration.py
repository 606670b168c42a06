"""Exhaustive generation of small structures up to isomorphism.

Canonical forms minimise a byte encoding over the carrier permutations that
respect a colour refinement of the elements; streams are sorted by canonical
form, so every listing is deterministic.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Sequence

import numpy as np

from .closure import ClosureSpace, topology_tag
from .errors import SizeGuard, SpectopoError
from .finorder import (Carrier, JoinSemilattice, Poset, Relation,
                       joins_from_order)
from .spec import (SpecPoset, SpecSemilattice, SpecStructure, check_axioms,
                   close_specialization, compute_kmap)

POSET_GUARD = 6
SEMILATTICE_GUARD = 5
SPEC_BASE_GUARD = 4
MOORE_GUARD = 4
TOPOLOGY_GUARD = 3


def _guard(n: int, limit: int, what: str):
    if n < 0:
        raise ValueError("size must be non-negative")
    if n > limit:
        raise SizeGuard(f"{what} of size {n} exceeds the guard {limit}")


# ---------------------------------------------------------------------------
# canonical forms

def _matrices(struct) -> list:
    if isinstance(struct, SpecStructure):
        return [struct.le, struct.sq]
    if isinstance(struct, Poset):
        return [struct.matrix]
    if isinstance(struct, JoinSemilattice):
        return [struct.matrix]
    raise TypeError(f"no canonical form for {type(struct).__name__}")


def _refine(mats: list) -> list:
    """Stable colouring of the elements, computed from labels-free data only."""
    n = mats[0].shape[0]
    colour = [0] * n
    while True:
        sigs = [(colour[i],
                 tuple(bool(m[i, i]) for m in mats),
                 tuple(sorted((colour[j],) + tuple(bool(m[i, j]) for m in mats)
                              + tuple(bool(m[j, i]) for m in mats) for j in range(n))))
                for i in range(n)]
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(set(new)) == len(set(colour)):
            return new
        colour = new


def _candidate_orders(colour: list):
    cells = [[i for i in range(len(colour)) if colour[i] == c] for c in sorted(set(colour))]
    for parts in product(*(permutations(c) for c in cells)):
        yield [i for part in parts for i in part]


def canonical_labeling(struct) -> tuple:
    """(form, perm): new element i is old element perm[i] in the canonical copy."""
    mats = [np.asarray(m, dtype=bool) for m in _matrices(struct)]
    n = mats[0].shape[0]
    if n == 0:
        return b"", ()
    best = best_perm = None
    for p in _candidate_orders(_refine(mats)):
        code = b"".join(np.packbits(m[np.ix_(p, p)]).tobytes() for m in mats)
        if best is None or code < best:
            best, best_perm = code, tuple(p)
    return bytes([n]) + best, best_perm


def canonical_form(struct) -> bytes:
    """Byte string equal for two structures iff they are isomorphic."""
    if isinstance(struct, ClosureSpace):
        return _family_form(struct)
    return canonical_labeling(struct)[0]


def _permute_mask(mask: int, p: Sequence[int]) -> int:
    # point p[i] moves to position i
    return sum(1 << i for i, old in enumerate(p) if mask >> old & 1)


def _family_form(x: ClosureSpace) -> bytes:
    n = x.size
    best = min(tuple(sorted(_permute_mask(c, p) for c in x.closed))
               for p in permutations(range(n)))
    return bytes([n]) + b"".join(c.to_bytes(2, "big") for c in best)


def relabel(struct, perm: Sequence[int]):
    """Copy of ``struct`` whose element i is the old element perm[i]."""
    p = list(perm)
    if isinstance(struct, ClosureSpace):
        ground = Carrier(tuple(struct.ground.names[i] for i in p))
        return ClosureSpace(ground, tuple(sorted(_permute_mask(c, p) for c in struct.closed)))
    carrier = Carrier(tuple(struct.carrier.names[i] for i in p))
    ix = np.ix_(p, p)
    if isinstance(struct, Poset):
        return Poset(carrier, Relation(carrier, struct.matrix[ix]))
    if isinstance(struct, JoinSemilattice):
        inv = np.argsort(p)
        return JoinSemilattice(carrier, inv[struct.join[ix]])
    if isinstance(struct, SpecSemilattice):
        base = relabel(struct.semilattice, p)
        return SpecSemilattice(base, Relation(base.carrier, struct.sq[ix]))
    if isinstance(struct, SpecPoset):
        base = relabel(struct.poset, p)
        return SpecPoset(base, Relation(base.carrier, struct.sq[ix]))
    raise TypeError(type(struct).__name__)


def canonical_copy(struct):
    return relabel(struct, canonical_labeling(struct)[1])


def is_isomorphic(a, b) -> bool:
    return canonical_form(a) == canonical_form(b)


def _fresh_names(struct):
    """Rename carrier to 0..n-1 after relabelling."""
    names = tuple(str(i) for i in range(struct.size))
    carrier = Carrier(names)
    if isinstance(struct, Poset):
        return Poset(carrier, Relation(carrier, struct.matrix))
    return JoinSemilattice(carrier, struct.join)


# ---------------------------------------------------------------------------
# posets and semilattices

def _natural_posets(n: int) -> Iterator[np.ndarray]:
    """All orders on 0..n-1 in which a < b implies a precedes b numerically.

    Element k is added as a maximal element over some downset of 0..k-1.
    """
    def grow(m: np.ndarray, k: int):
        if k == n:
            yield m
            return
        for bits in range(1 << k):
            below = [i for i in range(k) if bits >> i & 1]
            sel = np.zeros(k, dtype=bool)
            sel[below] = True
            # downset: anything below a member is a member
            if np.any(m[:k, :k][:, sel].any(axis=1) & ~sel):
                continue
            nxt = np.zeros((k + 1, k + 1), dtype=bool)
            nxt[:k, :k] = m[:k, :k]
            nxt[:k, k] = sel
            nxt[k, k] = True
            yield from grow(nxt, k + 1)

    yield from grow(np.zeros((0, 0), dtype=bool), 0)


def enum_posets(n: int) -> list:
    """All posets of size n up to isomorphism, in canonical labelling and order."""
    _guard(n, POSET_GUARD, "poset enumeration")
    carrier = Carrier.of_size(n)
    seen = {}
    for m in _natural_posets(n):
        p = Poset(carrier, Relation(carrier, m))
        form, perm = canonical_labeling(p)
        if form not in seen:
            seen[form] = _fresh_names(relabel(p, perm))
    return [seen[k] for k in sorted(seen)]


def enum_join_semilattices(n: int) -> list:
    _guard(n, SEMILATTICE_GUARD, "semilattice enumeration")
    out = []
    for p in enum_posets(n):
        try:
            out.append(joins_from_order(p))
        except SpectopoError:
            continue
    return out


# ---------------------------------------------------------------------------
# specializations over a base

def enum_specializations(base) -> list:
    """Every relation making ``base`` a specialization poset / semilattice.

    NextClosure over the pairs outside the order, with close_specialization
    as the closure operator; output in lectic order, starting at the order
    itself and ending at the universal relation.
    """
    n = base.size
    _guard(n, SPEC_BASE_GUARD, "specialization enumeration")
    le = base.matrix
    free = [(a, b) for a in range(n) for b in range(n) if not le[a, b]]
    m = len(free)

    def close(sel: int) -> int:
        gens = Relation.from_pairs(base.carrier, [free[i] for i in range(m) if sel >> i & 1])
        r = close_specialization(base, gens).bits
        return sum(1 << i for i, (a, b) in enumerate(free) if r[a, b])

    def to_rel(sel: int) -> Relation:
        bits = le.copy()
        for i, (a, b) in enumerate(free):
            if sel >> i & 1:
                bits[a, b] = True
        return Relation(base.carrier, bits)

    out = []
    cur = close(0)
    full = (1 << m) - 1
    while True:
        out.append(to_rel(cur))
        if cur == full:
            return out
        # NextClosure, bit i is element i; lower bits are the smaller elements
        for i in reversed(range(m)):
            bit = 1 << i
            if cur & bit:
                continue
            lower = bit - 1
            cand = close((cur & lower) | bit)
            if (cand & ~cur) & lower == 0:
                cur = cand
                break


def _dedup(structs) -> list:
    seen = {}
    for s in structs:
        form, perm = canonical_labeling(s)
        if form not in seen:
            seen[form] = relabel(s, perm)
    return [seen[k] for k in sorted(seen)]


def enum_spec_posets(n: int) -> list:
    _guard(n, SPEC_BASE_GUARD, "specialization poset enumeration")
    return _dedup(SpecPoset(p, r) for p in enum_posets(n) for r in enum_specializations(p))


def enum_spec_semilattices(n: int) -> list:
    """All specialization semilattices of size n up to isomorphism.

    Each is checked to be principal, since cones {a | a [= b} of a finite
    specialization semilattice are closed under joins.
    """
    _guard(n, SPEC_BASE_GUARD, "specialization semilattice enumeration")
    out = _dedup(SpecSemilattice(j, r) for j in enum_join_semilattices(n)
                 for r in enum_specializations(j))
    for s in out:
        if not compute_kmap(s).is_total:
            raise AssertionError(f"non-principal finite specialization semilattice: {s!r}")
    return out


# ---------------------------------------------------------------------------
# Moore families and topologies

def _moore_masks(m: int) -> Iterator[tuple]:
    full = (1 << m) - 1
    order = sorted(range(full), key=lambda s: (-bin(s).count("1"), -s))

    def grow(i: int, chosen: list):
        if i == len(order):
            yield tuple(sorted(chosen))
            return
        s = order[i]
        forced = any(a & b == s for a in chosen for b in chosen)
        if forced:
            yield from grow(i + 1, chosen + [s])
            return
        yield from grow(i + 1, chosen)
        yield from grow(i + 1, chosen + [s])

    yield from grow(0, [full])


def enum_moore_families(m: int, names: Sequence[str] | None = None,
                        up_to_iso: bool = False) -> list:
    """All intersection-closed families on an m-point ground containing the ground."""
    _guard(m, MOORE_GUARD, "Moore family enumeration")
    ground = Carrier(tuple(names) if names else tuple(str(i + 1) for i in range(m)))
    spaces = [ClosureSpace(ground, fam) for fam in sorted(_moore_masks(m))]
    if up_to_iso:
        seen = {}
        for x in spaces:
            seen.setdefault(canonical_form(x), x)
        spaces = [seen[k] for k in sorted(seen)]
    return spaces


def enum_topologies(m: int, guard: int = TOPOLOGY_GUARD, names=None,
                    up_to_iso: bool = False) -> list:
    _guard(m, guard, "topology enumeration")
    return [x for x in enum_moore_families(m, names, up_to_iso) if topology_tag(x).is_topology]


# ---------------------------------------------------------------------------
# pipeline sweep

@dataclass
class SweepFailure:
    index: int
    structure: object
    problems: list
    replay: str


@dataclass
class SweepReport:
    kind: str
    size: int
    variant: str
    total: int = 0
    passed: int = 0
    outcomes: dict = field(default_factory=dict)  # check name -> [pass, fail]
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def tally(self, name: str, good: bool):
        row = self.outcomes.setdefault(name, [0, 0])
        row[0 if good else 1] += 1

    def table(self) -> str:
        lines = [f"{self.kind} size {self.size} variant {self.variant}: "
                 f"{self.passed}/{self.total} clean in {self.seconds:.2f}s"]
        for name, (good, bad) in sorted(self.outcomes.items()):
            lines.append(f"  {name}: {good} pass, {bad} fail")
        return "\n".join(lines)


def deterministic_sample(items: list, k: int | None, seed: int = 0) -> list:
    if k is None or k >= len(items):
        return list(items)
    picks = sorted(random.Random(seed).sample(range(len(items)), k))
    return [items[i] for i in picks]


def _replay_script(struct, method: str, variant: str) -> str:
    from .sst import Block, Document, format_document
    doc = Document([Block("failing", struct)])
    return (format_document(doc)
            + f"# spectopo embed --method {method} --variant {variant.replace('_', '-')} failing.sst\n")


def _semilattice_checks(s, variant: str) -> dict:
    from .embed import alt_principalize, principalize, topologize_full
    pr = principalize(s)
    out = {
        "principalize.principal": pr.principal,
        "principalize.additive": pr.additive,
        "principalize.closure-formula": pr.closure_formula_ok,
        "principalize.embedding": pr.certificate.is_embedding,
        "principalize.meets": pr.certificate.preserves_existing_binary_meets,
        "alt-principalize.isomorphic": is_isomorphic(pr.structure, alt_principalize(s)),
    }
    full = topologize_full(s, variant)
    out["topologize.topology"] = full.topologized.tag.is_topology
    out["topologize.embedding"] = full.topologized.certificate.is_embedding
    out["full.embedding"] = full.certificate.is_embedding
    return out


def _poset_checks(p, variant: str) -> dict:
    from .embed import poset_topologize
    pe = poset_topologize(p, variant)
    return {
        "downset.embedding": pe.downset.certificate.is_embedding,
        "full.topology": pe.full.topologized.tag.is_topology,
        "full.embedding": pe.certificate.is_embedding,
    }


def pipeline_sweep(kind: str, n: int, variant: str = "character",
                   sample: int | None = None, seed: int = 0,
                   structures: list | None = None) -> SweepReport:
    """Run the embedding pipeline over every enumerated structure of size n.

    ``kind`` is "semilattice" (principalize, alt_principalize and
    topologize_full) or "poset" (downset embedding then topologize_full).
    """
    if kind not in ("semilattice", "poset"):
        raise ValueError(kind)
    start = time.perf_counter()
    if structures is None:
        structures = enum_spec_semilattices(n) if kind == "semilattice" else enum_spec_posets(n)
    structures = deterministic_sample(structures, sample, seed)
    rep = SweepReport(kind, n, variant)
    checks = _semilattice_checks if kind == "semilattice" else _poset_checks
    method = "full" if kind == "semilattice" else "poset-full"
    for i, s in enumerate(structures):
        rep.total += 1
        try:
            res = checks(s, variant)
        except SpectopoError as exc:
            res = {f"raised {type(exc).__name__}": False}
        for name, good in res.items():
            rep.tally(name, bool(good))
        bad = [k for k, v in res.items() if not v]
        if bad:
            rep.failures.append(SweepFailure(i, s, bad, _replay_script(s, method, variant)))
        else:
            rep.passed += 1
    rep.seconds = time.perf_counter() - start
    return rep
