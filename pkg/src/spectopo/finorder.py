"""Finite carriers, relations as boolean matrices, posets and join-semilattices.

Elements are addressed by index; names are for presentation only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (MissingJoin, NotAntisymmetric, NotReflexive,
                     NotSemilattice, NotTransitive)


def frozen(arr) -> np.ndarray:
    """Copy ``arr`` and make the copy read-only."""
    out = np.array(arr, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Carrier:
    names: tuple

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if len(set(names)) != len(names):
            raise ValueError(f"carrier names not distinct: {names}")
        object.__setattr__(self, "names", names)

    @classmethod
    def of_size(cls, n: int) -> "Carrier":
        return cls(tuple(str(i) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name) -> int:
        return self.names.index(str(name))

    def __len__(self):
        return len(self.names)


class Relation:
    """A binary relation on a carrier; ``bits[i, j]`` means i is related to j."""

    __slots__ = ("carrier", "bits")

    def __init__(self, carrier: Carrier, bits):
        bits = np.asarray(bits, dtype=bool)
        n = carrier.size
        if bits.shape != (n, n):
            raise ValueError(f"relation shape {bits.shape} does not match carrier size {n}")
        self.carrier = carrier
        self.bits = frozen(bits)

    @classmethod
    def from_pairs(cls, carrier: Carrier, pairs: Iterable[tuple]) -> "Relation":
        bits = np.zeros((carrier.size, carrier.size), dtype=bool)
        for a, b in pairs:
            ia = a if isinstance(a, (int, np.integer)) else carrier.index(a)
            ib = b if isinstance(b, (int, np.integer)) else carrier.index(b)
            bits[ia, ib] = True
        return cls(carrier, bits)

    @classmethod
    def identity(cls, carrier: Carrier) -> "Relation":
        return cls(carrier, np.eye(carrier.size, dtype=bool))

    @classmethod
    def universal(cls, carrier: Carrier) -> "Relation":
        return cls(carrier, np.ones((carrier.size, carrier.size), dtype=bool))

    def pairs(self) -> list[tuple[int, int]]:
        return [tuple(int(x) for x in p) for p in np.argwhere(self.bits)]

    def __eq__(self, other):
        return (isinstance(other, Relation) and self.carrier == other.carrier
                and np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.carrier, self.bits.tobytes()))

    def __repr__(self):
        names = self.carrier.names
        body = ", ".join(f"{names[a]}~{names[b]}" for a, b in self.pairs())
        return f"Relation({{{body}}})"


def refl_trans_close(rel: Relation) -> Relation:
    """Least reflexive and transitive relation containing ``rel`` (Warshall)."""
    r = rel.bits.copy()
    np.fill_diagonal(r, True)
    for k in range(r.shape[0]):
        r |= r[:, k:k + 1] & r[k:k + 1, :]
    return Relation(rel.carrier, r)


def first_true(arr: np.ndarray):
    """Lexicographically least index tuple where ``arr`` is true, or None."""
    hits = np.argwhere(arr)
    if len(hits) == 0:
        return None
    return tuple(int(x) for x in hits[0])


@dataclass(frozen=True, eq=False)
class Poset:
    carrier: Carrier
    leq: Relation

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def matrix(self) -> np.ndarray:
        return self.leq.bits

    def meet(self, a: int, b: int):
        """Greatest lower bound of a and b, or None."""
        m = self.leq.bits
        lower = m[:, a] & m[:, b]
        for c in np.flatnonzero(lower):
            if np.all(m[lower, c]):
                return int(c)
        return None

    def join(self, a: int, b: int):
        m = self.leq.bits
        upper = m[a] & m[b]
        for c in np.flatnonzero(upper):
            if np.all(m[c, upper]):
                return int(c)
        return None

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (a, b) with a < b and nothing strictly between."""
        m = self.leq.bits
        strict = m & ~np.eye(self.size, dtype=bool)
        between = (strict.astype(np.uint8) @ strict.astype(np.uint8)) > 0
        return [tuple(int(x) for x in p) for p in np.argwhere(strict & ~between)]

    def __eq__(self, other):
        return isinstance(other, Poset) and self.leq == other.leq

    def __hash__(self):
        return hash(self.leq)

    def __repr__(self):
        names = self.carrier.names
        covers = ", ".join(f"{names[a]}<{names[b]}" for a, b in self.covers())
        return f"Poset({' '.join(names)}; {covers})"


def validate_poset(rel: Relation) -> Poset:
    """Return ``rel`` as a Poset or raise naming the first broken law.

    Reflexivity is checked first, then antisymmetry, then transitivity.
    """
    m = rel.bits
    n = m.shape[0]
    for a in range(n):
        if not m[a, a]:
            raise NotReflexive(f"{rel.carrier.names[a]} is not related to itself", (a,))
    w = first_true(m & m.T & ~np.eye(n, dtype=bool))
    if w is not None:
        a, b = w
        names = rel.carrier.names
        raise NotAntisymmetric(f"{names[a]} and {names[b]} related both ways", w)
    w = first_true(m[:, :, None] & m[None, :, :] & ~m[:, None, :])
    if w is not None:
        names = rel.carrier.names
        raise NotTransitive("transitivity fails at (%s, %s, %s)" % tuple(names[i] for i in w), w)
    return Poset(rel.carrier, rel)


def poset_from_covers(names: Sequence[str], covers: Iterable[tuple]) -> Poset:
    carrier = Carrier(tuple(names))
    return validate_poset(refl_trans_close(Relation.from_pairs(carrier, covers)))


@dataclass(frozen=True, eq=False)
class JoinSemilattice:
    carrier: Carrier
    join: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "join", frozen(np.asarray(self.join, dtype=np.intp)))

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def matrix(self) -> np.ndarray:
        """Induced order: a <= b iff a v b = b."""
        try:
            return self.__dict__["_matrix"]
        except KeyError:
            m = frozen(self.join == np.arange(self.size)[None, :])
            self.__dict__["_matrix"] = m
            return m

    def __eq__(self, other):
        return (isinstance(other, JoinSemilattice) and self.carrier == other.carrier
                and np.array_equal(self.join, other.join))

    def __hash__(self):
        return hash((self.carrier, self.join.tobytes()))


def validate_semilattice(carrier: Carrier, table) -> JoinSemilattice:
    """Check commutativity, idempotence and associativity of a join table."""
    j = np.asarray(table, dtype=np.intp)
    n = carrier.size
    if j.shape != (n, n) or (n and (j.min() < 0 or j.max() >= n)):
        raise NotSemilattice("join table has wrong shape or out-of-range entries")
    w = first_true(j != j.T)
    if w is not None:
        raise NotSemilattice("join not commutative", w)
    w = first_true(np.diag(j) != np.arange(n))
    if w is not None:
        raise NotSemilattice("join not idempotent", w)
    left = j[j[:, :, None], np.arange(n)[None, None, :]]   # (a v b) v c
    right = j[np.arange(n)[:, None, None], j[None, :, :]]  # a v (b v c)
    w = first_true(left != right)
    if w is not None:
        raise NotSemilattice("join not associative", w)
    return JoinSemilattice(carrier, j)


def joins_from_order(p: Poset) -> JoinSemilattice:
    """Tabulate binary joins of ``p``; raise MissingJoin for the first pair lacking one."""
    m = p.leq.bits
    n = p.size
    table = np.zeros((n, n), dtype=np.intp)
    names = p.carrier.names
    for a in range(n):
        for b in range(a, n):
            upper = m[a] & m[b]
            ups = np.flatnonzero(upper)
            if len(ups) == 0:
                raise MissingJoin(f"{names[a]} and {names[b]} have no upper bound",
                                  (a, b), reason="no upper bound")
            least = [int(c) for c in ups if np.all(m[c, upper])]
            if not least:
                minimal = [int(c) for c in ups if not np.any(m[upper, c] & (np.arange(n)[upper] != c))]
                raise MissingJoin(f"{names[a]} and {names[b]} have no least upper bound",
                                  (a, b), reason="no least upper bound",
                                  minimal=tuple(minimal[:2]))
            table[a, b] = table[b, a] = least[0]
    return JoinSemilattice(p.carrier, table)


def order_from_join(j: JoinSemilattice) -> Poset:
    return Poset(j.carrier, Relation(j.carrier, j.matrix))


def semilattice_from_covers(names: Sequence[str], covers: Iterable[tuple]) -> JoinSemilattice:
    return joins_from_order(poset_from_covers(names, covers))


def chain(n: int, names: Sequence[str] | None = None) -> JoinSemilattice:
    """Linear order 0 < 1 < ... < n-1 with join = max."""
    carrier = Carrier(tuple(names) if names else tuple(str(i) for i in range(n)))
    idx = np.arange(n)
    return JoinSemilattice(carrier, np.maximum(idx[:, None], idx[None, :]))
