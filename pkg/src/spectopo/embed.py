"""Homomorphism/embedding certificates and the constructive embeddings.

Every construction here returns its map together with a Certificate that was
recomputed by exhaustive scan; nothing is trusted from the construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .closure import ClosureSpace, ClosureSpecView, TopologyTag, complete_family, topology_tag
from .errors import (Condition44Violated, InvalidStructure, KindMismatch,
                     NotCongruence, PreconditionFailed)
from .finorder import Carrier, JoinSemilattice, Relation, first_true
from .spec import (AxiomReport, SpecPoset, SpecSemilattice, check_axioms,
                   compute_kmap, is_additive, mask_name, order_spec_reduct,
                   require_valid)


@dataclass(frozen=True)
class StructMap:
    source: object
    target: object
    send: tuple

    def __post_init__(self):
        object.__setattr__(self, "send", tuple(int(v) for v in self.send))
        if len(self.send) != self.source.size:
            raise ValueError("map must be total on the source carrier")

    def __call__(self, a: int) -> int:
        return self.send[a]

    def then(self, other: "StructMap") -> "StructMap":
        """Composite: first self, then other."""
        return StructMap(self.source, other.target, tuple(other.send[v] for v in self.send))


FLAGS = ("is_order_or_join_hom", "reflects_order", "satisfies_M", "is_injective",
         "satisfies_E", "preserves_existing_binary_meets")


@dataclass
class Certificate:
    kind: str
    is_order_or_join_hom: bool
    reflects_order: bool
    satisfies_M: bool
    is_injective: bool
    satisfies_E: bool
    preserves_existing_binary_meets: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def is_hom(self) -> bool:
        return self.is_order_or_join_hom and self.satisfies_M

    @property
    def is_embedding(self) -> bool:
        order_part = self.is_order_or_join_hom and self.is_injective
        if self.kind == "poset":
            order_part = order_part and self.reflects_order
        return order_part and self.satisfies_M and self.satisfies_E

    def summary(self) -> str:
        return " ".join(f"{f}={'yes' if getattr(self, f) else 'no'}" for f in FLAGS)


def _kind(struct) -> str:
    return struct.kind


def verify_map(m: StructMap, mode: str = "hom") -> Certificate:
    """Recompute every certificate flag by scanning all pairs of the source."""
    if mode not in ("hom", "embedding"):
        raise ValueError(mode)
    src, tgt, f = m.source, m.target, m.send
    kind = _kind(src)
    if kind != _kind(tgt) or kind not in ("poset", "semilattice"):
        raise KindMismatch(f"cannot map a {kind} structure into a {_kind(tgt)} structure")
    n = src.size
    wit = {}

    def first(pred):
        for a in range(n):
            for b in range(n):
                if pred(a, b):
                    return (a, b)
        return None

    if kind == "semilattice":
        w = first(lambda a, b: f[src.join_of(a, b)] != tgt.join_of(f[a], f[b]))
    else:
        w = first(lambda a, b: src.is_le(a, b) and not tgt.is_le(f[a], f[b]))
    hom = w is None
    if w:
        wit["is_order_or_join_hom"] = w
    w = first(lambda a, b: tgt.is_le(f[a], f[b]) and not src.is_le(a, b))
    refl = w is None
    if w:
        wit["reflects_order"] = w
    w = first(lambda a, b: src.is_sq(a, b) and not tgt.is_sq(f[a], f[b]))
    sat_m = w is None
    if w:
        wit["satisfies_M"] = w
    w = first(lambda a, b: a != b and f[a] == f[b])
    inj = w is None
    if w:
        wit["is_injective"] = w
    w = first(lambda a, b: tgt.is_sq(f[a], f[b]) and not src.is_sq(a, b))
    sat_e = w is None
    if w:
        wit["satisfies_E"] = w

    def meet_broken(a, b):
        c = src.meet_of(a, b)
        return c is not None and tgt.meet_of(f[a], f[b]) != f[c]

    w = first(meet_broken)
    meets = w is None
    if w:
        wit["preserves_existing_binary_meets"] = w
    return Certificate(kind, hom, refl, sat_m, inj, sat_e, meets, wit)


# ---------------------------------------------------------------------------
# congruence quotients

@dataclass(frozen=True)
class EquivRelation:
    """Partition of range(n), classes ordered by least member."""

    classes: tuple

    def __post_init__(self):
        classes = tuple(sorted((tuple(sorted(int(x) for x in c)) for c in self.classes if c),
                               key=lambda c: c[0]))
        flat = [x for c in classes for x in c]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("classes must be disjoint and cover 0..n-1")
        object.__setattr__(self, "classes", classes)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "EquivRelation":
        groups = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        return cls(tuple(groups.values()))

    @classmethod
    def identity(cls, n: int) -> "EquivRelation":
        return cls(tuple((i,) for i in range(n)))

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.classes)

    @property
    def class_of(self) -> tuple:
        out = [0] * self.size
        for k, c in enumerate(self.classes):
            for x in c:
                out[x] = k
        return tuple(out)


@dataclass
class QuotientResult:
    structure: SpecSemilattice
    projection: StructMap
    report: AxiomReport
    certificate: Certificate | None


def _class_name(names, cls):
    return "+".join(names[x] for x in cls)


def quotient(s: SpecSemilattice, e: EquivRelation, force: bool = False) -> QuotientResult:
    """Quotient by a join-congruence whose classes are mutually [=-related.

    With ``force`` the relation-on-classes is formed from *some* pair of
    representatives even when a class is not mutually related, and the
    resulting axiom failures are returned in the report.
    """
    n = s.size
    if e.size != n:
        raise ValueError("partition size does not match the structure")
    cls = np.array(e.class_of, dtype=np.intp)
    j, q = s.join, s.sq
    # a ~ b implies a v c ~ b v c
    same = cls[:, None] == cls[None, :]
    bad = same[:, :, None] & (cls[j][:, None, :] != cls[j][None, :, :])
    w = first_true(bad)
    if w is not None:
        raise NotCongruence("not a congruence for the join", w)
    w = first_true(same & ~q)
    if w is not None and not force:
        raise Condition44Violated("identified elements are not mutually [=-related", w)
    k = len(e.classes)
    reps = [c[0] for c in e.classes]
    table = cls[j[np.ix_(reps, reps)]]
    carrier = Carrier(tuple(_class_name(s.names, c) for c in e.classes))
    sq = np.zeros((k, k), dtype=bool)
    for a in range(n):
        for b in range(n):
            if q[a, b]:
                sq[cls[a], cls[b]] = True
    u = SpecSemilattice(JoinSemilattice(carrier, table), Relation(carrier, sq))
    rep = check_axioms(u)
    proj = StructMap(s, u, tuple(cls))
    cert = verify_map(proj, "hom")
    return QuotientResult(u, proj, rep, cert)


# ---------------------------------------------------------------------------
# principalization

@dataclass
class PrincipalizeResult:
    structure: SpecSemilattice
    kappa: StructMap
    certificate: Certificate
    principal: bool
    additive: bool
    closure_formula_ok: bool
    product: SpecSemilattice = field(repr=False, default=None)

    @property
    def ok(self) -> bool:
        return (self.principal and self.additive and self.closure_formula_ok
                and self.certificate.is_embedding)


def _product_with_two(s: SpecSemilattice) -> SpecSemilattice:
    """S x {0,1} with max on the second factor and [= read off the first.

    Pair (a, t) has index a + n*t.
    """
    n = s.size
    idx = np.arange(2 * n)
    first, second = idx % n, idx // n
    table = s.join[first[:, None], first[None, :]] + n * np.maximum(second[:, None], second[None, :])
    sq = s.sq[first[:, None], first[None, :]]
    carrier = Carrier(tuple(f"{s.names[a]}~{t}" for t in (0, 1) for a in range(n)))
    return SpecSemilattice(JoinSemilattice(carrier, table), Relation(carrier, sq))


def principalize(s: SpecSemilattice) -> PrincipalizeResult:
    """Embed ``s`` into a principal additive specialization semilattice.

    Take S x {0,1} (second factor with the universal specialization),
    identify (a,1) with (b,1) whenever a and b are mutually [=-related, and
    send a to the class of (a,0).  The closure in the quotient is
    K[a, t] = [a, 1].
    """
    try:
        require_valid(s)
    except InvalidStructure as exc:
        raise InvalidStructure("input is not a specialization semilattice",
                               exc.witness, exc.report) from None
    n = s.size
    prod = _product_with_two(s)
    q = s.sq
    mutual = q & q.T
    labels = list(range(n))
    for a in range(n):
        for b in range(a):
            if mutual[a, b]:
                labels.append(labels[n + b])
                break
        else:
            labels.append(n + a)
    e = EquivRelation.from_labels(labels)
    qr = quotient(prod, e)
    u = qr.structure
    kappa = StructMap(s, u, tuple(qr.projection.send[a] for a in range(n)))
    cert = verify_map(kappa, "embedding")
    k = compute_kmap(u)
    principal = k.is_total
    additive = principal and is_additive(u, k).ok
    proj = qr.projection.send
    formula = principal and all(k(proj[a + n * t]) == proj[a + n] for a in range(n) for t in (0, 1))
    # class names: use the representative pair
    return PrincipalizeResult(u, kappa, cert, principal, additive, formula, prod)


def alt_principalize(s: SpecSemilattice) -> SpecSemilattice:
    """Same extension built directly: S disjoint-union S/Theta, Theta the mutual
    [=-relation, with s v [t] = [s v t] and [=-relation read off representatives."""
    require_valid(s)
    n = s.size
    q, j = s.sq, s.join
    theta = EquivRelation.from_labels(
        [min(b for b in range(n) if q[a, b] and q[b, a]) for a in range(n)])
    cls = theta.class_of
    reps = [c[0] for c in theta.classes]
    m = len(reps)
    size = n + m
    rep_of = list(range(n)) + reps
    table = np.zeros((size, size), dtype=np.intp)
    for x in range(size):
        for y in range(size):
            v = j[rep_of[x], rep_of[y]]
            table[x, y] = v if (x < n and y < n) else n + cls[v]
    sq = q[np.ix_(rep_of, rep_of)]
    names = tuple(s.names) + tuple("[" + "+".join(s.names[x] for x in c) + "]" for c in theta.classes)
    carrier = Carrier(names)
    return SpecSemilattice(JoinSemilattice(carrier, table), Relation(carrier, sq))


# ---------------------------------------------------------------------------
# zero adjunction and topologization

def strict_zero(s) -> int | None:
    """Index of a minimum z with a [= z iff a = z, or None."""
    le, q = s.le, s.sq
    for z in range(s.size):
        if np.all(le[z]):
            col = q[:, z].copy()
            col[z] = False
            return None if col.any() else z
    return None


def _fresh_name(names, base="z0"):
    name = base
    while name in names:
        name += "'"
    return name


def adjoin_zero(s: SpecSemilattice):
    """Add a new join-neutral bottom 0 with 0 [= a for all a and a not [= 0 for a != 0.

    Returned unchanged (identity inclusion) when a strict zero already exists.
    The new element is appended as the last index.
    """
    n = s.size
    if strict_zero(s) is not None:
        return s, StructMap(s, s, tuple(range(n)))
    z = n
    table = np.zeros((n + 1, n + 1), dtype=np.intp)
    table[:n, :n] = s.join
    table[z, :n] = table[:n, z] = np.arange(n)
    table[z, z] = z
    sq = np.zeros((n + 1, n + 1), dtype=bool)
    sq[:n, :n] = s.sq
    sq[z, :] = True
    carrier = Carrier(tuple(s.names) + (_fresh_name(s.names),))
    s0 = SpecSemilattice(JoinSemilattice(carrier, table), Relation(carrier, sq))
    return s0, StructMap(s, s0, tuple(range(n)))


VARIANTS = ("character", "paper_literal")


@dataclass
class TopologizeResult:
    space: ClosureSpace
    tag: TopologyTag
    phi: StructMap
    certificate: Certificate
    variant: str

    @property
    def ok(self) -> bool:
        return self.tag.is_topology and self.certificate.is_embedding


def topologize(s: SpecSemilattice, variant: str = "character") -> TopologizeResult:
    """Embed a principal additive structure with strict zero into S(X), X a topology on its carrier.

    ``character``: phi(a) = {b | a not<= b}.  ``paper_literal``:
    phi(a) = {b | a not[= b}.  Closed sets are intersections of the base
    {phi(Kc)}.  The certificate is computed against S(X) through
    closure_of, independently of the construction.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    failed = []
    rep = check_axioms(s)
    if not rep.is_specialization:
        failed.append("axioms")
    if not rep.principal:
        failed.append("principal")
    elif not rep.additive:
        failed.append("additive")
    if strict_zero(s) is None:
        failed.append("strict-zero")
    if failed:
        raise PreconditionFailed("topologize needs " + ", ".join(failed), failed=failed)
    n = s.size
    rel = ~s.le if variant == "character" else ~s.sq
    phi = [sum(1 << b for b in range(n) if rel[a, b]) for a in range(n)]
    k = compute_kmap(s)
    base = [phi[k(c)] for c in range(n)]
    space = complete_family(s.carrier, base)
    tag = topology_tag(space)
    target = ClosureSpecView(space, "semilattice")
    m = StructMap(s, target, tuple(phi))
    return TopologizeResult(space, tag, m, verify_map(m, "embedding"), variant)


@dataclass
class FullEmbedding:
    source: object
    principalized: PrincipalizeResult
    zeroed: SpecSemilattice
    topologized: TopologizeResult
    composite: StructMap
    certificate: Certificate
    steps: list = field(default_factory=list)

    @property
    def space(self) -> ClosureSpace:
        return self.topologized.space

    @property
    def ok(self) -> bool:
        return (self.principalized.ok and self.topologized.tag.is_topology
                and self.certificate.is_embedding)


def topologize_full(s: SpecSemilattice, variant: str = "character") -> FullEmbedding:
    """principalize, adjoin a zero if needed, then topologize; certificate on the composite."""
    pr = principalize(s)
    u = pr.structure
    u0, incl = adjoin_zero(u)
    tr = topologize(u0, variant)
    left = pr.kappa.then(incl).then(tr.phi)
    right = pr.kappa.then(incl.then(tr.phi))
    if left.send != right.send:
        raise AssertionError("map composition is not associative")
    cert = verify_map(left, "embedding")
    return FullEmbedding(s, pr, u0, tr, left, cert, [pr.kappa, incl, tr.phi])


# ---------------------------------------------------------------------------
# specialization posets

@dataclass
class DownsetResult:
    structure: SpecSemilattice
    iota: StructMap
    certificate: Certificate
    downsets: tuple  # bitmask over the poset carrier for each element


def downset_embed(p: SpecPoset) -> DownsetResult:
    """Embed a specialization poset into the downset semilattice.

    Carrier: all finite unions of principal downsets (the empty union included),
    join = union, X [= Y iff every c in X has some d in Y with c [= d.
    """
    try:
        require_valid(p)
    except InvalidStructure as exc:
        raise InvalidStructure("input is not a specialization poset", exc.witness, exc.report) from None
    n = p.size
    le, q = p.le, p.sq
    down = [sum(1 << b for b in range(n) if le[b, a]) for a in range(n)]
    fam = {0} | set(down)
    frontier = set(fam)
    while frontier:
        new = {x | y for x in frontier for y in fam} - fam
        fam |= new
        frontier = new
    sets = sorted(fam, key=lambda x: (bin(x).count("1"), x))
    index = {x: i for i, x in enumerate(sets)}
    size = len(sets)
    table = np.array([[index[x | y] for y in sets] for x in sets], dtype=np.intp)
    # reach[c] = points d with c [= d, as a mask
    reach = [sum(1 << d for d in range(n) if q[c, d]) for c in range(n)]
    sq = np.zeros((size, size), dtype=bool)
    for i, x in enumerate(sets):
        pts = [c for c in range(n) if x >> c & 1]
        for k, y in enumerate(sets):
            sq[i, k] = all(reach[c] & y for c in pts)
    carrier = Carrier(tuple("(" + mask_name(p.names, x)[1:-1] + ")" for x in sets))
    s = SpecSemilattice(JoinSemilattice(carrier, table), Relation(carrier, sq))
    iota = StructMap(p, order_spec_reduct(s), tuple(index[d] for d in down))
    return DownsetResult(s, iota, verify_map(iota, "embedding"), tuple(sets))


@dataclass
class PosetEmbedding:
    downset: DownsetResult
    full: FullEmbedding
    composite: StructMap
    certificate: Certificate

    @property
    def space(self):
        return self.full.space

    @property
    def ok(self) -> bool:
        return self.downset.certificate.is_embedding and self.full.ok and self.certificate.is_embedding


def poset_topologize(p: SpecPoset, variant: str = "character") -> PosetEmbedding:
    """Specialization poset into P(X) for a topology X: downsets, then topologize_full."""
    d = downset_embed(p)
    full = topologize_full(d.structure, variant)
    target = full.topologized.phi.target.reduct()
    comp = StructMap(p, target, tuple(full.composite.send[v] for v in d.iota.send))
    return PosetEmbedding(d, full, comp, verify_map(comp, "embedding"))
