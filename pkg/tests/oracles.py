"""Brute-force reference implementations, written without the library's
numpy kernels, enumerators or closure machinery."""
from __future__ import annotations

from itertools import permutations, product


def is_poset(rel, n):
    for a in range(n):
        if not rel[a][a]:
            return False
    for a, b in product(range(n), repeat=2):
        if a != b and rel[a][b] and rel[b][a]:
            return False
    for a, b, c in product(range(n), repeat=3):
        if rel[a][b] and rel[b][c] and not rel[a][c]:
            return False
    return True


def all_relations(n):
    for bits in range(1 << (n * n)):
        yield [[bool(bits >> (a * n + b) & 1) for b in range(n)] for a in range(n)]


def iso_key(mats, n):
    """Naive canonical key: minimum over every permutation."""
    best = None
    for p in permutations(range(n)):
        key = tuple(tuple(m[p[a]][p[b]] for a in range(n) for b in range(n)) for m in mats)
        if best is None or key < best:
            best = key
    return best


def count_posets(n):
    return len({iso_key([r], n) for r in all_relations(n) if is_poset(r, n)})


def lub(le, a, b, n):
    ups = [c for c in range(n) if le[a][c] and le[b][c]]
    least = [c for c in ups if all(le[c][d] for d in ups)]
    return least[0] if least else None


def is_join_semilattice(le, n):
    return all(lub(le, a, b, n) is not None for a in range(n) for b in range(n))


def count_join_semilattices(n):
    return len({iso_key([r], n) for r in all_relations(n)
                if is_poset(r, n) and is_join_semilattice(r, n)})


def law(name, le, q, j):
    """Python-level statement of each law; returns the least violating tuple or None."""
    n = len(le)
    arity = {"S1": 2, "S2": 3, "S3": 3, "S4": 1, "S5": 3, "S6": 3, "S7": 4, "S8": 2, "S9": 3}[name]
    for t in product(range(n), repeat=arity):
        if name == "S1":
            a, b = t
            bad = le[a][b] and not q[a][b]
        elif name == "S2":
            a, b, c = t
            bad = q[a][b] and q[b][c] and not q[a][c]
        elif name == "S3":
            a, a1, b = t
            bad = q[a][b] and q[a1][b] and not q[j[a][a1]][b]
        elif name == "S4":
            (a,) = t
            bad = not q[a][a]
        elif name == "S5":
            a, b, c = t
            bad = q[a][b] and le[b][c] and not q[a][c]
        elif name == "S6":
            a, b, c = t
            bad = le[a][b] and q[b][c] and not q[a][c]
        elif name == "S7":
            a, a1, b, b1 = t
            bad = q[a][b] and q[a1][b1] and not q[j[a][a1]][j[b][b1]]
        elif name == "S8":
            a, b = t
            bad = q[a][b] and not q[j[a][b]][b]
        else:
            a, b, a1 = t
            bad = q[a][b] and not q[j[a][a1]][j[b][a1]]
        if bad:
            return t
    return None


def specializations(le, j=None):
    """Every relation containing le, transitive, and (with j) closed under S3."""
    n = len(le)
    free = [(a, b) for a in range(n) for b in range(n) if not le[a][b]]
    out = []
    for bits in range(1 << len(free)):
        q = [row[:] for row in le]
        for i, (a, b) in enumerate(free):
            if bits >> i & 1:
                q[a][b] = True
        if law("S2", le, q, j) is None and (j is None or law("S3", le, q, j) is None):
            out.append(q)
    return out


def moore_families(m):
    subsets = list(range(1 << m))
    full = (1 << m) - 1
    out = []
    for bits in range(1 << len(subsets)):
        fam = {s for s in subsets if bits >> s & 1}
        if full in fam and all(a & b in fam for a in fam for b in fam):
            out.append(frozenset(fam))
    return out


def is_topology_family(fam):
    return 0 in fam and all(a | b in fam for a in fam for b in fam)


def closure(fam, a, full):
    k = full
    for c in fam:
        if a & c == a:
            k &= c
    return k


def continuous(src, tgt, send, m_src):
    for c in tgt:
        pre = sum(1 << i for i in range(m_src) if c >> send[i] & 1)
        if pre not in src:
            return False
    return True
