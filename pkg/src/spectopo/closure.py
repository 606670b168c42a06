"""Finite closure spaces (Moore families), topologies and their specialization structures.

Subsets of the ground set are int bitmasks: bit i set means point i is in.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import (ConsistencyError, GroundTooLarge, NotMorphism,
                     OpenMapNeedsTopology)
from .finorder import Carrier, JoinSemilattice, Poset, Relation
from .spec import (SpecPoset, SpecSemilattice, compute_kmap, from_operator,
                   is_additive, mask_name, powerset_semilattice,
                   subset_matrix)

SPACE_GUARD = 5


def popcount(x: int) -> int:
    return bin(x).count("1")


def to_mask(ground: Carrier, subset) -> int:
    """Bitmask of ``subset`` (an int, or an iterable of point names/indices)."""
    if isinstance(subset, (int, np.integer)):
        return int(subset)
    m = 0
    for p in subset:
        i = p if isinstance(p, (int, np.integer)) else ground.index(p)
        m |= 1 << i
    return m


def members(mask: int) -> list:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class ClosureSpace:
    """Ground set plus a Moore family of closed sets, stored sorted and deduplicated."""

    ground: Carrier
    closed: tuple

    def __post_init__(self):
        closed = tuple(sorted(set(int(c) for c in self.closed)))
        object.__setattr__(self, "closed", closed)
        full = self.full
        if full not in closed:
            raise ValueError("ground set must be closed")
        cs = set(closed)
        for a in closed:
            if a & ~full:
                raise ValueError(f"closed set {a:#b} not inside the ground set")
            for b in closed:
                if a & b not in cs:
                    raise ValueError("family not closed under intersection")

    @property
    def size(self) -> int:
        return self.ground.size

    @property
    def full(self) -> int:
        return (1 << self.ground.size) - 1

    def is_closed(self, a: int) -> bool:
        return a in self._closed_set

    @cached_property
    def _closed_set(self) -> frozenset:
        return frozenset(self.closed)

    @cached_property
    def _cache(self) -> dict:
        return {}

    def name(self, mask: int) -> str:
        return mask_name(self.ground.names, mask)

    def __repr__(self):
        return f"ClosureSpace({' '.join(self.ground.names)}; {' '.join(self.name(c) for c in self.closed)})"


def complete_family(ground: Carrier, sets: Iterable) -> ClosureSpace:
    """Least intersection-closed family containing ``sets`` and the ground set.

    Closing pairwise and adding the ground set (the empty intersection)
    yields closure under arbitrary intersections on a finite ground.
    """
    full = (1 << ground.size) - 1
    fam = {full} | {to_mask(ground, s) for s in sets}
    frontier = set(fam)
    while frontier:
        new = set()
        for a in frontier:
            for b in fam:
                c = a & b
                if c not in fam:
                    new.add(c)
        fam |= new
        frontier = new
    return ClosureSpace(ground, tuple(fam))


def closure_of(x: ClosureSpace, a) -> int:
    """Intersection of all closed supersets of ``a``."""
    a = to_mask(x.ground, a)
    cache = x._cache
    if a in cache:
        return cache[a]
    k = x.full
    for c in x.closed:
        if a & ~c == 0:
            k &= c
    cache[a] = k
    return k


@dataclass(frozen=True)
class TopologyTag:
    is_topology: bool
    witness: tuple | None = None  # ("empty-not-closed",) or ("union", c1, c2)


def topology_tag(x: ClosureSpace) -> TopologyTag:
    if not x.is_closed(0):
        return TopologyTag(False, ("empty-not-closed",))
    for a in x.closed:
        for b in x.closed:
            if not x.is_closed(a | b):
                return TopologyTag(False, ("union", a, b))
    return TopologyTag(True)


class ClosureSpecView:
    """S(X) or P(X) evaluated lazily: elements are subset bitmasks, [= via closure_of.

    Used as a certificate target where the powerset is too large to tabulate.
    """

    def __init__(self, space: ClosureSpace, kind: str = "semilattice"):
        if kind not in ("semilattice", "poset"):
            raise ValueError(kind)
        self.space = space
        self.kind = kind
        self.has_join = kind == "semilattice"

    def reduct(self) -> "ClosureSpecView":
        return ClosureSpecView(self.space, "poset")

    def is_le(self, a, b) -> bool:
        return a & ~b == 0

    def is_sq(self, a, b) -> bool:
        return a & ~closure_of(self.space, b) == 0

    def join_of(self, a, b) -> int:
        return a | b

    def meet_of(self, a, b) -> int:
        return a & b

    def name(self, a) -> str:
        return self.space.name(a)


def spec_of(x: ClosureSpace, guard: int = SPACE_GUARD):
    """(S(X), P(X)): powerset with union / inclusion and a [= b iff a is inside K(b).

    Element index equals subset bitmask.
    """
    if x.size > guard:
        raise GroundTooLarge(f"ground size {x.size} exceeds guard {guard}")
    ps = powerset_semilattice(x.ground, guard)
    n = 1 << x.size
    k = np.array([closure_of(x, a) for a in range(n)], dtype=np.int64)
    idx = np.arange(n)
    q = (idx[:, None] & ~k[None, :]) == 0
    sq = Relation(ps.carrier, q)
    poset = Poset(ps.carrier, Relation(ps.carrier, subset_matrix(n)))
    return SpecSemilattice(ps, sq), SpecPoset(poset, sq)


def subspace(x: ClosureSpace, z) -> ClosureSpace:
    """Closed sets {z & c}; points of z are renumbered in increasing order."""
    z = to_mask(x.ground, z)
    pts = members(z)
    ground = Carrier(tuple(x.ground.names[i] for i in pts))
    return ClosureSpace(ground, tuple({compress(c & z, pts) for c in x.closed}))


def compress(mask: int, pts: Sequence[int]) -> int:
    """Re-index ``mask`` (inside the points ``pts``) onto 0..len(pts)-1."""
    return sum(1 << i for i, p in enumerate(pts) if mask >> p & 1)


def expand(mask: int, pts: Sequence[int]) -> int:
    return sum(1 << p for i, p in enumerate(pts) if mask >> i & 1)


# ---------------------------------------------------------------------------
# maps between closure spaces

@dataclass(frozen=True)
class PointMap:
    source: ClosureSpace
    target: ClosureSpace
    send: tuple

    def __post_init__(self):
        send = tuple(int(v) for v in self.send)
        object.__setattr__(self, "send", send)
        if len(send) != self.source.size:
            raise ValueError("map must be total on the source ground set")
        if any(not 0 <= v < self.target.size for v in send):
            raise ValueError("map sends a point outside the target")

    def image(self, a: int) -> int:
        out = 0
        for i in members(a):
            out |= 1 << self.send[i]
        return out

    def preimage(self, b: int) -> int:
        return sum(1 << i for i, v in enumerate(self.send) if b >> v & 1)

    @property
    def injective(self) -> bool:
        return len(set(self.send)) == len(self.send)


@dataclass(frozen=True)
class ContinuityVerdict:
    continuous: bool
    closed_witness: int | None    # closed set of the target with non-closed preimage
    operator_witness: int | None  # subset z with image(K z) not inside K image(z)


def is_continuous(f: PointMap) -> ContinuityVerdict:
    """Continuity decided twice: preimages of closed sets, and the image-operator inclusion."""
    cw = next((c for c in f.target.closed if not f.source.is_closed(f.preimage(c))), None)
    ow = None
    for z in range(1 << f.source.size):
        if f.image(closure_of(f.source, z)) & ~closure_of(f.target, f.image(z)):
            ow = z
            break
    if (cw is None) != (ow is None):
        raise ConsistencyError("continuity criteria disagree", (cw, ow))
    return ContinuityVerdict(cw is None, cw, ow)


@dataclass(frozen=True)
class MapVerdict:
    ok: bool
    witness: int | None = None


def is_closed_map(f: PointMap) -> MapVerdict:
    w = next((c for c in f.source.closed if not f.target.is_closed(f.image(c))), None)
    return MapVerdict(w is None, w)


def is_open_map(f: PointMap) -> MapVerdict:
    if not topology_tag(f.target).is_topology:
        raise OpenMapNeedsTopology("open maps are only checked into topological spaces")
    sfull, tfull = f.source.full, f.target.full
    for c in f.source.closed:
        img = f.image(sfull & ~c)
        if not f.target.is_closed(tfull & ~img):
            return MapVerdict(False, sfull & ~c)
    return MapVerdict(True)


def is_space_embedding(f: PointMap) -> bool:
    """Injective, and the source carries the topology induced from the target."""
    if not f.injective:
        return False
    induced = {f.preimage(c) for c in f.target.closed}
    return induced == set(f.source.closed)


def image_struct_map(f: PointMap, guard: int = 4):
    """The image function between S(X) and S(Y), and between P(X) and P(Y)."""
    from .embed import StructMap
    sx, px = spec_of(f.source, guard)
    sy, py = spec_of(f.target, guard)
    send = tuple(f.image(a) for a in range(1 << f.source.size))
    return StructMap(sx, sy, send), StructMap(px, py, send)


@dataclass(frozen=True)
class Prop24Verdict:
    continuous: bool
    s_hom: bool
    p_hom: bool
    embedding: bool
    s_embedding: bool
    p_embedding: bool
    m_witness: tuple | None
    proof_witness: tuple | None

    @property
    def holds(self) -> bool:
        return (self.continuous == self.s_hom == self.p_hom
                and self.embedding == self.s_embedding == self.p_embedding)


def prop24_check(f: PointMap, guard: int = 4) -> Prop24Verdict:
    """Continuity vs. the image function being a homomorphism of S(-) and of P(-),
    and the same with embeddings."""
    from .embed import verify_map
    cont = is_continuous(f)
    sm, pm = image_struct_map(f, guard)
    s_cert = verify_map(sm, "hom")
    p_cert = verify_map(pm, "hom")
    s_emb = verify_map(sm, "embedding").is_embedding
    p_emb = verify_map(pm, "embedding").is_embedding
    proof_w = None
    if not cont.continuous:
        b = cont.operator_witness
        kb = closure_of(f.source, b)
        # (K b, b) is related in S(X); its image pair must fail to be related in S(Y)
        if sm.target.is_sq(f.image(kb), f.image(b)):
            raise ConsistencyError("discontinuity witness does not break (M)", (kb, b))
        proof_w = (kb, b)
    return Prop24Verdict(cont.continuous, s_cert.is_hom, p_cert.is_hom,
                         is_space_embedding(f), s_emb, p_emb,
                         s_cert.witnesses.get("satisfies_M"), proof_w)


# ---------------------------------------------------------------------------
# closure posets

@dataclass(frozen=True)
class ClosurePoset:
    base: object  # Poset or JoinSemilattice
    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        # from_operator raises on a non-closure operator
        from_operator(self.base, self.k)

    @property
    def size(self) -> int:
        return self.base.carrier.size

    def spec(self):
        return from_operator(self.base, self.k)


@dataclass(frozen=True)
class ClosurePosetVerdict:
    continuous: bool
    hom: bool
    witness: int | None

    @property
    def holds(self) -> bool:
        return self.continuous == self.hom


def _is_morphism(psi, p, q):
    lp, lq = p.base.matrix, q.base.matrix
    if isinstance(p.base, JoinSemilattice) and isinstance(q.base, JoinSemilattice):
        jp, jq = p.base.join, q.base.join
        for a in range(p.size):
            for b in range(p.size):
                if psi[jp[a, b]] != jq[psi[a], psi[b]]:
                    return (a, b)
        return None
    for a in range(p.size):
        for b in range(p.size):
            if lp[a, b] and not lq[psi[a], psi[b]]:
                return (a, b)
    return None


def closure_poset_continuity(psi: Sequence[int], p: ClosurePoset, q: ClosurePoset) -> ClosurePosetVerdict:
    """psi(K_P a) <= K_Q psi(a) for all a, against psi being a homomorphism of
    the associated specialization structures."""
    from .embed import StructMap, verify_map
    psi = tuple(int(v) for v in psi)
    w = _is_morphism(psi, p, q)
    if w is not None:
        raise NotMorphism("map is not a morphism of the underlying orders/joins", w)
    lq = q.base.matrix
    cw = next((a for a in range(p.size) if not lq[psi[p.k[a]], q.k[psi[a]]]), None)
    cert = verify_map(StructMap(p.spec(), q.spec(), psi), "hom")
    return ClosurePosetVerdict(cw is None, cert.is_hom, cw)


# ---------------------------------------------------------------------------
# the closure-space / principal-powerset-specialization bijection

@dataclass(frozen=True)
class Obs44Verdict:
    principal: bool
    roundtrip: bool
    is_topology: bool
    additive: bool
    strict_empty: bool

    @property
    def holds(self) -> bool:
        return (self.principal and self.roundtrip
                and self.is_topology == (self.additive and self.strict_empty))


def obs44_roundtrip(x: ClosureSpace, guard: int = 4) -> Obs44Verdict:
    """Rebuild X from the K-fixed subsets of S(X) and compare."""
    s, _ = spec_of(x, guard)
    k = compute_kmap(s)
    if not k.is_total:
        return Obs44Verdict(False, False, topology_tag(x).is_topology, False, False)
    fixed = tuple(b for b in range(s.size) if k(b) == b)
    rebuilt = ClosureSpace(x.ground, fixed)
    additive = is_additive(s, k).ok
    strict = all(not s.sq[a, 0] for a in range(1, s.size))
    return Obs44Verdict(True, rebuilt == x, topology_tag(x).is_topology, additive, strict)


# ---------------------------------------------------------------------------
# ternary model

class TernaryModel:
    """Powerset with union and R(a; b, c) iff a is inside K(b) | K(c)."""

    kind = "ternary"
    has_join = True

    def __init__(self, space: ClosureSpace, guard: int = 4):
        if space.size > guard:
            raise GroundTooLarge(f"ground size {space.size} exceeds guard {guard}")
        self.space = space
        n = 1 << space.size
        self.size = n
        self.carrier = powerset_semilattice(space.ground, guard).carrier
        k = np.array([closure_of(space, a) for a in range(n)], dtype=np.int64)
        kk = k[:, None] | k[None, :]
        self.r = (np.arange(n)[:, None, None] & ~kk[None, :, :]) == 0
        self.r.flags.writeable = False

    @property
    def names(self):
        return self.carrier.names

    def elements(self):
        return range(self.size)

    def is_le(self, a, b) -> bool:
        return a & ~b == 0

    def join_of(self, a, b) -> int:
        return a | b

    def rel(self, a, b, c) -> bool:
        return bool(self.r[a, b, c])


def ternary_model(x: ClosureSpace, guard: int = 4) -> TernaryModel:
    return TernaryModel(x, guard)


# ---------------------------------------------------------------------------
# named spaces

def discrete(names: Sequence[str]) -> ClosureSpace:
    g = Carrier(tuple(names))
    return ClosureSpace(g, tuple(range(1 << g.size)))


def indiscrete(names: Sequence[str]) -> ClosureSpace:
    g = Carrier(tuple(names))
    return ClosureSpace(g, (0, (1 << g.size) - 1))


def sierpinski() -> ClosureSpace:
    """Points 0, 1; closed sets {}, {0}, {0 1}."""
    return ClosureSpace(Carrier(("0", "1")), (0, 1, 3))


def two_closed_points() -> ClosureSpace:
    """Ground {1,2,3} with closed sets {}, {1}, {2}, X: a closure space
    with strict zero whose closed sets are not union-closed."""
    g = Carrier(("1", "2", "3"))
    return ClosureSpace(g, (0, 1, 2, 7))


def all_point_maps(x: ClosureSpace, y: ClosureSpace):
    for send in product(range(y.size), repeat=x.size):
        yield PointMap(x, y, send)
