"""Specialization posets and semilattices.

A specialization is a preorder ``[=`` on a poset (or join-semilattice) that
contains the order and, for semilattices, is closed under joins on the left.
The classes here are *candidate* structures: they accept any relation, and
:func:`check_axioms` decides whether the laws hold.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (BaseMismatch, ConsistencyError, GroundTooLarge,
                     InvalidStructure, NotExtensive, NotIdempotent,
                     NotIsotone, NotJoinHom, NotMonotone, NotPrincipal,
                     NotTolerance)
from .finorder import (Carrier, JoinSemilattice, Poset, Relation, first_true,
                       order_from_join, validate_poset)

POWERSET_GUARD = 5


class SpecStructure:
    """Shared read access for both structure kinds."""

    kind = ""
    has_join = False

    @property
    def carrier(self) -> Carrier:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def names(self):
        return self.carrier.names

    @property
    def le(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def sq(self) -> np.ndarray:
        return self.sqle.bits

    def is_le(self, a, b) -> bool:
        return bool(self.le[a, b])

    def is_sq(self, a, b) -> bool:
        return bool(self.sq[a, b])

    def meet_of(self, a, b):
        le = self.le
        lower = le[:, a] & le[:, b]
        for c in np.flatnonzero(lower):
            if np.all(le[lower, c]):
                return int(c)
        return None

    def elements(self):
        return range(self.size)

    def __eq__(self, other):
        return (type(self) is type(other) and self.carrier == other.carrier
                and np.array_equal(self.le, other.le)
                and np.array_equal(self.sq, other.sq))

    def __hash__(self):
        return hash((self.kind, self.carrier, self.le.tobytes(), self.sq.tobytes()))

    def __repr__(self):
        extra = [f"{self.names[a]}[={self.names[b]}" for a, b in np.argwhere(self.sq & ~self.le)]
        return f"{type(self).__name__}({' '.join(self.names)}; {', '.join(extra)})"


class SpecPoset(SpecStructure):
    kind = "poset"

    def __init__(self, poset: Poset, sqle: Relation):
        if sqle.carrier != poset.carrier:
            raise BaseMismatch("specialization and poset live on different carriers")
        self.poset = poset
        self.sqle = sqle

    @property
    def carrier(self):
        return self.poset.carrier

    @property
    def le(self):
        return self.poset.leq.bits


class SpecSemilattice(SpecStructure):
    kind = "semilattice"
    has_join = True

    def __init__(self, semilattice: JoinSemilattice, sqle: Relation):
        if sqle.carrier != semilattice.carrier:
            raise BaseMismatch("specialization and semilattice live on different carriers")
        self.semilattice = semilattice
        self.sqle = sqle

    @property
    def carrier(self):
        return self.semilattice.carrier

    @property
    def le(self):
        return self.semilattice.matrix

    @property
    def join(self) -> np.ndarray:
        return self.semilattice.join

    def join_of(self, a, b) -> int:
        return int(self.semilattice.join[a, b])


def make_spec(base, sqle) -> SpecStructure:
    """Wrap ``sqle`` (Relation or bool matrix) over a Poset or JoinSemilattice."""
    if not isinstance(sqle, Relation):
        sqle = Relation(base.carrier, sqle)
    if isinstance(base, JoinSemilattice):
        return SpecSemilattice(base, sqle)
    return SpecPoset(base, sqle)


def base_of(struct: SpecStructure):
    return struct.semilattice if struct.has_join else struct.poset


# ---------------------------------------------------------------------------
# axioms

LAW_ARITY = {"S1": 2, "S2": 3, "S3": 3, "S4": 1, "S5": 3, "S6": 3,
             "S7": 4, "S8": 2, "S9": 3}
POSET_LAWS = ("S1", "S2", "S4", "S5", "S6")
SEMILATTICE_ONLY = ("S3", "S7", "S8", "S9")
# variable order of each law's witness tuple
LAW_VARS = {"S1": ("a", "b"), "S2": ("a", "b", "c"), "S3": ("a", "a1", "b"),
            "S4": ("a",), "S5": ("a", "b", "c"), "S6": ("a", "b", "c"),
            "S7": ("a", "a1", "b", "b1"), "S8": ("a", "b"), "S9": ("a", "b", "a1")}


def _violations(law: str, le, q, j=None) -> np.ndarray:
    """Boolean array over the law's variable tuple marking violations."""
    if law == "S1":
        return le & ~q
    if law == "S2":
        return q[:, :, None] & q[None, :, :] & ~q[:, None, :]
    if law == "S3":
        return q[:, None, :] & q[None, :, :] & ~q[j]
    if law == "S4":
        return ~np.diag(q)
    if law == "S5":
        return q[:, :, None] & le[None, :, :] & ~q[:, None, :]
    if law == "S6":
        return le[:, :, None] & q[None, :, :] & ~q[:, None, :]
    if law == "S7":
        return (q[:, None, :, None] & q[None, :, None, :]
                & ~q[j[:, :, None, None], j[None, None, :, :]])
    if law == "S8":
        n = q.shape[0]
        return q & ~q[j, np.arange(n)[None, :]]
    if law == "S9":
        return q[:, :, None] & ~q[j[:, None, :], j[None, :, :]]
    raise KeyError(law)


def law_holds_at(law: str, struct: SpecStructure, witness) -> bool:
    """Evaluate one law at one tuple (replay of a witness)."""
    j = struct.join if struct.has_join else None
    return not bool(_violations(law, struct.le, struct.sq, j)[tuple(witness)])


@dataclass(frozen=True)
class LawVerdict:
    ok: bool
    witness: tuple | None = None


@dataclass
class AxiomReport:
    kind: str
    laws: dict
    principal: bool
    principal_witness: int | None
    additive: bool | None
    additive_witness: tuple | None
    cech_poset: bool
    cech_semilattice: bool | None

    @property
    def defining_laws(self) -> tuple:
        return ("S1", "S2", "S3") if self.kind == "semilattice" else ("S1", "S2")

    @property
    def is_specialization(self) -> bool:
        return all(self.laws[k].ok for k in self.defining_laws)

    def failures(self) -> list:
        return [(k, v.witness) for k, v in self.laws.items() if v is not None and not v.ok]


def check_axioms(struct: SpecStructure) -> AxiomReport:
    """Verdicts for S1-S9 (S1-S6 minus S3 for posets), principality,
    additivity and the Cech variants, each failure with its least witness."""
    le, q = struct.le, struct.sq
    j = struct.join if struct.has_join else None
    laws = {}
    for law in LAW_ARITY:
        if law in SEMILATTICE_ONLY and j is None:
            laws[law] = None
            continue
        w = first_true(_violations(law, le, q, j))
        laws[law] = LawVerdict(w is None, w)
    k = _max_of_cones(le, q)
    missing = [b for b, v in enumerate(k) if v is None]
    principal = not missing
    additive = add_w = None
    if j is not None and principal:
        add_w = _additivity_witness(j, k)
        additive = add_w is None
    cech_poset = all(laws[x].ok for x in ("S1", "S5", "S6"))
    cech_semi = None if j is None else cech_poset and laws["S3"].ok
    return AxiomReport(struct.kind, laws, principal, missing[0] if missing else None,
                       additive, add_w, cech_poset, cech_semi)


def require_valid(struct: SpecStructure) -> AxiomReport:
    rep = check_axioms(struct)
    if not rep.is_specialization:
        law, w = next((k, rep.laws[k].witness) for k in rep.defining_laws if not rep.laws[k].ok)
        raise InvalidStructure(f"{law} fails", w, report=rep)
    return rep


def cech_check(struct: SpecStructure) -> bool:
    """Cech-poset (S1, S5, S6) or Cech-semilattice (adds S3) verdict."""
    rep = check_axioms(struct)
    return rep.cech_semilattice if struct.has_join else rep.cech_poset


# ---------------------------------------------------------------------------
# closing generators

def close_specialization(base, generators: Relation) -> Relation:
    """Least relation containing ``generators`` satisfying S1, S2 (and S3 on semilattices)."""
    le = base.matrix
    r = generators.bits | le
    join = base.join if isinstance(base, JoinSemilattice) else None
    while True:
        before = r.copy()
        for k in range(r.shape[0]):
            r |= r[:, k:k + 1] & r[k:k + 1, :]
        if join is not None:
            for b in range(r.shape[0]):
                col = r[:, b]
                while True:
                    idx = np.flatnonzero(col)
                    closed = col.copy()
                    closed[join[np.ix_(idx, idx)].ravel()] = True
                    if np.array_equal(closed, col):
                        break
                    col = closed
                r[:, b] = col
        if np.array_equal(r, before):
            return Relation(base.carrier, r)


def preorder_close(base, generators: Relation) -> Relation:
    """Close under S1 and S2 only."""
    r = generators.bits | base.matrix
    for k in range(r.shape[0]):
        r |= r[:, k:k + 1] & r[k:k + 1, :]
    return Relation(base.carrier, r)


# ---------------------------------------------------------------------------
# K map

def _max_of_cones(le, q) -> list:
    """For each b, the <=-maximum of {a | a [= b}, or None."""
    out = []
    for b in range(q.shape[0]):
        cone = q[:, b]
        top = None
        for m in np.flatnonzero(cone):
            if np.all(le[cone, m]):
                top = int(m)
                break
        out.append(top)
    return out


def _additivity_witness(join, k):
    n = len(k)
    for a in range(n):
        for b in range(n):
            if k[join[a, b]] != join[k[a], k[b]]:
                return (a, b)
    return None


@dataclass(frozen=True)
class KMap:
    base: SpecStructure = field(repr=False)
    values: tuple

    @property
    def is_total(self) -> bool:
        return None not in self.values

    @property
    def undefined(self) -> tuple:
        return tuple(b for b, v in enumerate(self.values) if v is None)

    def __call__(self, b: int):
        return self.values[b]

    def named(self) -> dict:
        names = self.base.names
        return {names[b]: (None if v is None else names[v]) for b, v in enumerate(self.values)}


def compute_kmap(struct: SpecStructure) -> KMap:
    """K(b) = max{a | a [= b} where it exists; re-verifies the K laws wherever defined."""
    le, q = struct.le, struct.sq
    for law in ("S1", "S2"):
        w = first_true(_violations(law, le, q))
        if w is not None:
            raise InvalidStructure(f"{law} fails; K map undefined", w)
    k = _max_of_cones(le, q)
    for b, kb in enumerate(k):
        if kb is None:
            continue
        # a [= b  <=>  a <= Kb  <=>  a [= Kb
        if not (np.array_equal(q[:, b], le[:, kb]) and np.array_equal(q[:, b], q[:, kb])):
            raise ConsistencyError("K characterisation fails", (b,))
        if k[kb] != kb:
            raise ConsistencyError("K not idempotent", (b,))
        if not le[b, kb]:
            raise ConsistencyError("K not extensive", (b,))
    for a, ka in enumerate(k):
        for b, kb in enumerate(k):
            if ka is None or kb is None:
                continue
            # a [= b <=> Ka <= Kb <=> Ka [= Kb
            if not (q[a, b] == le[ka, kb] == q[ka, kb]):
                raise ConsistencyError("K order characterisation fails", (a, b))
    return KMap(struct, tuple(k))


@dataclass(frozen=True)
class AdditivityVerdict:
    ok: bool
    witness: tuple | None
    fixed_point_ok: bool
    fixed_point_witness: tuple | None


def is_additive(struct: SpecSemilattice, k: KMap | None = None) -> AdditivityVerdict:
    """K(a v b) = Ka v Kb for all pairs, cross-checked against the
    criterion that joins of K-fixed points are K-fixed."""
    if k is None:
        k = compute_kmap(struct)
    if not k.is_total:
        raise NotPrincipal("K undefined", k.undefined)
    j = struct.join
    kv = k.values
    w = _additivity_witness(j, kv)
    fixed = [c for c in range(struct.size) if kv[c] == c]
    fw = None
    for c in fixed:
        for d in fixed:
            cd = j[c, d]
            if kv[cd] != cd:
                fw = (c, d)
                break
        if fw:
            break
    verdict = AdditivityVerdict(w is None, w, fw is None, fw)
    if verdict.ok != verdict.fixed_point_ok:
        raise ConsistencyError("additivity criteria disagree", w or fw)
    return verdict


# ---------------------------------------------------------------------------
# constructors

def from_operator(base, k: Sequence[int], require_idempotent: bool = True) -> SpecStructure:
    """Specialization a [= b iff a <= k(b) for an isotone extensive operator."""
    le = base.matrix
    k = np.asarray(k, dtype=np.intp)
    n = le.shape[0]
    w = first_true(~le[np.arange(n), k])
    if w is not None:
        raise NotExtensive("operator not extensive", w)
    w = first_true(le & ~le[k[:, None], k[None, :]])
    if w is not None:
        raise NotIsotone("operator not isotone", w)
    if require_idempotent:
        w = first_true(k[k] != k)
        if w is not None:
            raise NotIdempotent("operator not idempotent", w)
    return make_spec(base, le[:, k])


def from_hom(s: JoinSemilattice, t: JoinSemilattice, phi: Sequence[int]) -> SpecSemilattice:
    """a [= b iff phi(a) <= phi(b) for a join-homomorphism phi."""
    phi = np.asarray(phi, dtype=np.intp)
    w = first_true(phi[s.join] != t.join[phi[:, None], phi[None, :]])
    if w is not None:
        raise NotJoinHom("map does not preserve joins", w)
    return SpecSemilattice(s, Relation(s.carrier, t.matrix[np.ix_(phi, phi)]))


def mask_name(ground_names: Sequence[str], mask: int) -> str:
    return "{" + ".".join(ground_names[i] for i in range(len(ground_names)) if mask >> i & 1) + "}"


def powerset_semilattice(ground: Carrier, guard: int = POWERSET_GUARD) -> JoinSemilattice:
    """Powerset of ``ground`` with union; element index = bitmask."""
    if ground.size > guard:
        raise GroundTooLarge(f"ground size {ground.size} exceeds guard {guard}")
    n = 1 << ground.size
    idx = np.arange(n)
    carrier = Carrier(tuple(mask_name(ground.names, m) for m in range(n)))
    return JoinSemilattice(carrier, idx[:, None] | idx[None, :])


def subset_matrix(n: int) -> np.ndarray:
    idx = np.arange(n)
    return (idx[:, None] & ~idx[None, :]) == 0


def from_tolerance(ground: Carrier, tau: Relation, guard: int = POWERSET_GUARD) -> SpecSemilattice:
    """a [= b iff tau(a) is contained in tau(b), over the powerset with union."""
    t = tau.bits
    w = first_true(~np.diag(t))
    if w is not None:
        raise NotTolerance("tolerance not reflexive", w)
    w = first_true(t & ~t.T)
    if w is not None:
        raise NotTolerance("tolerance not symmetric", w)
    ps = powerset_semilattice(ground, guard)
    m = ground.size
    nbhd = [sum(1 << x for x in range(m) if t[y, x]) for y in range(m)]
    tau_of = np.zeros(1 << m, dtype=np.int64)
    for a in range(1 << m):
        acc = 0
        for y in range(m):
            if a >> y & 1:
                acc |= nbhd[y]
        tau_of[a] = acc
    q = (tau_of[:, None] & ~tau_of[None, :]) == 0
    return SpecSemilattice(ps, Relation(ps.carrier, q))


def _weight(w) -> Fraction:
    if isinstance(w, tuple):
        return Fraction(w[0], w[1])
    return Fraction(w)


@dataclass
class WeightResult:
    poset: SpecPoset
    semilattice: SpecSemilattice | None
    advisory: str | None = None
    s3_witness: tuple | None = None


def from_weight(family: Sequence, mu: Sequence) -> WeightResult:
    """Specialization a [= b iff mu(a) <= mu(b) on a family of sets ordered by inclusion.

    ``family`` holds sets (any iterables of hashable points); ``mu`` holds
    weights as ints, Fractions or (numerator, denominator) pairs.
    """
    sets = [frozenset(a) for a in family]
    if len(set(sets)) != len(sets):
        raise ValueError("family contains duplicate sets")
    weights = [_weight(w) for w in mu]
    if len(weights) != len(sets):
        raise ValueError("one weight per set required")
    points = sorted(set().union(*sets), key=str) if sets else []
    names = tuple(mask_name([str(p) for p in points],
                            sum(1 << points.index(x) for x in a)) for a in sets)
    carrier = Carrier(names)
    n = len(sets)
    le = np.array([[sets[a] <= sets[b] for b in range(n)] for a in range(n)], dtype=bool)
    q = np.array([[weights[a] <= weights[b] for b in range(n)] for a in range(n)], dtype=bool)
    w = first_true(le & ~q)
    if w is not None:
        raise NotMonotone("weight decreases along inclusion", w)
    poset = validate_poset(Relation(carrier, le))
    sp = SpecPoset(poset, Relation(carrier, q))
    union_closed = all(sets[a] | sets[b] in sets for a in range(n) for b in range(n))
    if not union_closed:
        return WeightResult(sp, None, "family not closed under union")
    j = np.array([[sets.index(sets[a] | sets[b]) for b in range(n)] for a in range(n)], dtype=np.intp)
    s3w = first_true(_violations("S3", le, q, j))
    if len(set(weights)) <= 2:
        semi = SpecSemilattice(JoinSemilattice(carrier, j), Relation(carrier, q))
        return WeightResult(sp, semi, None, s3w)
    note = "weights not two-valued"
    if s3w is not None:
        note += "; S3 fails at (%s, %s, %s)" % tuple(names[i] for i in s3w)
    return WeightResult(sp, None, note, s3w)


# ---------------------------------------------------------------------------
# the lattice of specializations over a fixed base

def finest(base) -> Relation:
    return Relation.universal(base.carrier)


def coarsest(base) -> Relation:
    return Relation(base.carrier, base.matrix)


def _check_inputs(base, rels):
    for r in rels:
        if r.carrier != base.carrier:
            raise BaseMismatch("specialization over a different carrier")
        require_valid(make_spec(base, r))


def spec_meet(base, rels: Sequence[Relation]) -> Relation:
    _check_inputs(base, rels)
    bits = np.ones((base.carrier.size,) * 2, dtype=bool)
    for r in rels:
        bits &= r.bits
    out = Relation(base.carrier, bits)
    require_valid(make_spec(base, out))
    return out


def spec_join(base, rels: Sequence[Relation]) -> Relation:
    _check_inputs(base, rels)
    bits = base.matrix.copy()
    for r in rels:
        bits |= r.bits
    return close_specialization(base, Relation(base.carrier, bits))


def spec_lattice_ops(base, rels: Sequence[Relation], op: str) -> Relation:
    """One operation of the lattice of specializations over ``base``:
    "finest", "coarsest", "meet" or "join".  The empty meet is the universal
    relation and the empty join is the order."""
    if op == "finest":
        return finest(base)
    if op == "coarsest":
        return coarsest(base)
    if op == "meet":
        return spec_meet(base, rels) if rels else finest(base)
    if op == "join":
        return spec_join(base, rels) if rels else coarsest(base)
    raise ValueError(f"unknown operation {op!r}")


def order_spec_reduct(s: SpecSemilattice) -> SpecPoset:
    return SpecPoset(order_from_join(s.semilattice), s.sqle)
