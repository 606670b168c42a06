"""The line-oriented ``.sst`` structure file format.

A document is a sequence of blocks::

    structure ex
    kind spec-semilattice
    elements 0 a b 1
    order 0 < a, 0 < b, a < 1, b < 1
    spec a [= 0, b [= 0
    option close-spec false
    end

Kinds: poset, semilattice, spec-poset, spec-semilattice, closure-space,
closure-poset, map, sentence.  ``#`` starts a comment.

``option close-spec`` controls how ``spec`` pairs are read: ``true`` (the
default) closes them under S1-S3, ``false`` closes under reflexivity,
transitivity and the order only, ``none`` takes the pairs literally.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .closure import ClosurePoset, ClosureSpace, PointMap, members, to_mask
from .errors import DocumentError, SpectopoError
from .finorder import (Carrier, JoinSemilattice, Poset, Relation,
                       joins_from_order, refl_trans_close, validate_poset)
from .folang import Sentence, parse, to_text
from .spec import (SpecPoset, SpecSemilattice, close_specialization,
                   preorder_close)

KINDS = ("poset", "semilattice", "spec-poset", "spec-semilattice", "closure-space",
         "closure-poset", "map", "sentence")
_NAME = re.compile(r"[^\s,#{}]+")
_RESERVED = {"<", "[=", "->", "=", "{", "}"}
_DIRECTIVES = {
    "poset": {"elements", "order"},
    "semilattice": {"elements", "order", "join"},
    "spec-poset": {"elements", "order", "spec", "option"},
    "spec-semilattice": {"elements", "order", "join", "spec", "option"},
    "closure-space": {"points", "closed"},
    "closure-poset": {"elements", "order", "kmap"},
    "map": {"from", "send"},
    "sentence": {"formula"},
}


@dataclass(frozen=True)
class MapBlock:
    """A map by name references; resolved against the enclosing document."""

    source: str
    target: str
    send: tuple  # ((source element, target element), ...)


@dataclass
class Block:
    name: str
    value: object


@dataclass
class Document:
    blocks: list = field(default_factory=list)

    def names(self) -> list:
        return [b.name for b in self.blocks]

    def __getitem__(self, name: str):
        for b in self.blocks:
            if b.name == name:
                return b.value
        raise KeyError(name)

    def __eq__(self, other):
        return isinstance(other, Document) and self.blocks == other.blocks

    def structures(self) -> list:
        return [b for b in self.blocks if not isinstance(b.value, (MapBlock, Sentence))]

    def resolve_map(self, name: str):
        """PointMap between spaces, StructMap between spec structures, or
        (psi, source, target) for closure posets."""
        m = self[name]
        if not isinstance(m, MapBlock):
            raise KeyError(f"{name} is not a map")
        src, tgt = self[m.source], self[m.target]
        send = dict(m.send)
        if isinstance(src, ClosureSpace):
            names, tnames = src.ground.names, tgt.ground.names
        else:
            names = _carrier(src).names
            tnames = _carrier(tgt).names
        idx = tuple(tnames.index(send[x]) for x in names)
        if isinstance(src, ClosureSpace):
            return PointMap(src, tgt, idx)
        if isinstance(src, ClosurePoset):
            return idx, src, tgt
        from .embed import StructMap
        return StructMap(src, tgt, idx)


def _carrier(value) -> Carrier:
    if isinstance(value, ClosurePoset):
        return value.base.carrier
    return value.carrier


# ---------------------------------------------------------------------------
# parsing

class _Line:
    def __init__(self, number: int, raw: str):
        self.number = number
        self.raw = raw
        self.text = raw.split("#", 1)[0].rstrip()
        words = self.text.split()
        self.head = words[0] if words else ""
        start = self.text.find(self.head) + len(self.head) if words else 0
        rest = self.text[start:]
        self.rest = rest.lstrip()
        self.rest_col = start + len(rest) - len(self.rest) + 1

    def error(self, message: str, col: int | None = None):
        if col is None:
            col = len(self.raw) - len(self.raw.lstrip()) + 1
        raise DocumentError(self.number, col, message)

    def items(self) -> list:
        """Comma-separated items of the argument part as (text, column)."""
        out, pos = [], 0
        for part in self.rest.split(","):
            stripped = part.strip()
            col = self.rest_col + pos + (len(part) - len(part.lstrip()))
            if stripped:
                out.append((stripped, col))
            elif self.rest.strip():
                self.error("empty item", col)
            pos += len(part) + 1
        return out

    def words(self) -> list:
        return [(m.group(), self.rest_col + m.start()) for m in re.finditer(r"\S+", self.rest)]


def _check_name(line: _Line, word: str, col: int):
    if not _NAME.fullmatch(word) or word in _RESERVED:
        line.error(f"bad name {word!r}", col)


class _BlockBuilder:
    def __init__(self, name: str, line: _Line):
        self.name = name
        self.start = line
        self.kind = None
        self.lines = {}

    def add(self, line: _Line):
        head = line.head
        if head == "kind":
            if self.kind is not None:
                line.error("kind given twice")
            words = line.words()
            if len(words) != 1 or words[0][0] not in KINDS:
                line.error("expected one of " + ", ".join(KINDS), line.rest_col)
            self.kind = words[0][0]
            return
        if self.kind is None:
            line.error("expected 'kind' before other lines")
        if head not in _DIRECTIVES[self.kind]:
            line.error(f"unexpected '{head}' in a {self.kind} block")
        if head in ("elements", "points", "from", "option") and head in self.lines:
            line.error(f"'{head}' given twice")
        self.lines.setdefault(head, []).append(line)

    # helpers -------------------------------------------------------------
    def elements(self, key="elements") -> Carrier:
        if key not in self.lines:
            self.start.error(f"missing '{key}' line")
        line = self.lines[key][0]
        names = []
        for w, c in line.words():
            _check_name(line, w, c)
            if w in names:
                line.error(f"duplicate element {w!r}", c)
            names.append(w)
        return Carrier(tuple(names))

    def pairs(self, key: str, sep: str, carrier: Carrier, target: Carrier | None = None):
        out = []
        for line in self.lines.get(key, []):
            for item, col in line.items():
                parts = item.split()
                if len(parts) != 3 or parts[1] != sep:
                    line.error(f"expected 'x {sep} y'", col)
                a, b = parts[0], parts[2]
                for name, car in ((a, carrier), (b, target or carrier)):
                    if name not in car.names:
                        line.error(f"unknown element {name!r}", col + item.find(name) if name == a
                                   else col + item.rfind(name))
                out.append((a, b, line, col))
        return out

    def order(self, carrier: Carrier, extra=()) -> Poset:
        pairs = [(a, b) for a, b, _, _ in self.pairs("order", "<", carrier)] + list(extra)
        rel = refl_trans_close(Relation.from_pairs(carrier, pairs))
        try:
            return validate_poset(rel)
        except SpectopoError as exc:
            line = self.lines.get("order", [self.start])[0]
            line.error(f"order is not a partial order: {exc}")

    def joins(self, carrier: Carrier):
        out = []
        for line in self.lines.get("join", []):
            words = line.words()
            if len(words) != 4 or words[2][0] != "=":
                line.error("expected 'join a b = c'", line.rest_col)
            a, b, c = words[0][0], words[1][0], words[3][0]
            for w, col in (words[0], words[1], words[3]):
                if w not in carrier.names:
                    line.error(f"unknown element {w!r}", col)
            out.append((a, b, c, line))
        return out

    def semilattice(self, carrier: Carrier) -> JoinSemilattice:
        joins = self.joins(carrier)
        extra = [(a, c) for a, _, c, _ in joins] + [(b, c) for _, b, c, _ in joins]
        p = self.order(carrier, extra)
        try:
            j = joins_from_order(p)
        except SpectopoError as exc:
            line = self.lines.get("order", [self.start])[0]
            line.error(f"order is not a join-semilattice: {exc}")
        for a, b, c, line in joins:
            if j.join[carrier.index(a), carrier.index(b)] != carrier.index(c):
                line.error(f"join {a} {b} = {c} disagrees with the order")
        return j

    def spec_relation(self, base) -> Relation:
        carrier = base.carrier
        mode = "true"
        if "option" in self.lines:
            line = self.lines["option"][0]
            words = line.words()
            if len(words) != 2 or words[0][0] != "close-spec" or words[1][0] not in ("true", "false", "none"):
                line.error("expected 'option close-spec true|false|none'", line.rest_col)
            mode = words[1][0]
        gens = Relation.from_pairs(carrier, [(a, b) for a, b, _, _ in self.pairs("spec", "[=", carrier)])
        if mode == "true":
            return close_specialization(base, gens)
        if mode == "false":
            return preorder_close(base, gens)
        return gens

    def build(self):
        kind = self.kind
        if kind is None:
            self.start.error("block has no 'kind' line")
        if kind in ("poset", "spec-poset"):
            carrier = self.elements()
            p = self.order(carrier)
            return p if kind == "poset" else SpecPoset(p, self.spec_relation(p))
        if kind in ("semilattice", "spec-semilattice"):
            carrier = self.elements()
            j = self.semilattice(carrier)
            return j if kind == "semilattice" else SpecSemilattice(j, self.spec_relation(j))
        if kind == "closure-space":
            ground = self.elements("points")
            sets = []
            for line in self.lines.get("closed", []):
                rest, pos = line.rest, 0
                for m in re.finditer(r"\{([^{}]*)\}|(\S)", rest):
                    col = line.rest_col + m.start()
                    if m.group(2) is not None:
                        line.error("expected '{...}'", col)
                    pts = m.group(1).split()
                    for p in pts:
                        if p not in ground.names:
                            line.error(f"unknown point {p!r}", col)
                    sets.append(to_mask(ground, pts))
            try:
                return ClosureSpace(ground, tuple(sets))
            except ValueError as exc:
                self.lines.get("closed", [self.start])[0].error(str(exc))
        if kind == "closure-poset":
            carrier = self.elements()
            p = self.order(carrier)
            kv = {a: b for a, b, _, _ in self.pairs("kmap", "->", carrier)}
            missing = [x for x in carrier.names if x not in kv]
            if missing:
                self.lines.get("kmap", [self.start])[0].error(f"kmap misses {missing[0]!r}")
            try:
                return ClosurePoset(p, tuple(carrier.index(kv[x]) for x in carrier.names))
            except SpectopoError as exc:
                self.lines["kmap"][0].error(f"not a closure operator: {exc}")
        if kind == "map":
            if "from" not in self.lines:
                self.start.error("missing 'from X to Y' line")
            line = self.lines["from"][0]
            words = line.words()
            if len(words) != 3 or words[1][0] != "to":
                line.error("expected 'from X to Y'", line.rest_col)
            send = []
            for sline in self.lines.get("send", []):
                for item, col in sline.items():
                    parts = item.split()
                    if len(parts) != 3 or parts[1] != "->":
                        sline.error("expected 'x -> y'", col)
                    send.append(((parts[0], parts[2]), sline, col))
            return MapBlock(words[0][0], words[2][0], tuple(p for p, _, _ in send)), line, send
        if kind == "sentence":
            lines = self.lines.get("formula", [])
            if not lines:
                self.start.error("missing 'formula' line")
            text = "\n".join(" " * (ln.rest_col - 1) + ln.rest for ln in lines)
            try:
                return parse(text)
            except SpectopoError as exc:
                ln = lines[min(exc.line, len(lines)) - 1]
                raise DocumentError(ln.number, exc.column, f"sentence: {exc}") from None
        raise AssertionError(kind)


def parse_document(text: str) -> Document:
    """Parse ``.sst`` text; errors carry 1-based line and column."""
    doc = Document()
    cur = None
    pending_maps = []
    for number, raw in enumerate(text.split("\n"), start=1):
        line = _Line(number, raw)
        if not line.head:
            continue
        if cur is None:
            if line.head != "structure":
                line.error("expected 'structure <name>'")
            words = line.words()
            if len(words) != 1:
                line.error("expected one block name", line.rest_col)
            name = words[0][0]
            _check_name(line, name, words[0][1])
            if name in doc.names():
                line.error(f"duplicate block name {name!r}", words[0][1])
            cur = _BlockBuilder(name, line)
            continue
        if line.head == "end":
            if line.words():
                line.error("unexpected text after 'end'", line.rest_col)
            value = cur.build()
            if cur.kind == "map":
                value, from_line, send = value
                pending_maps.append((value, from_line, send))
            doc.blocks.append(Block(cur.name, value))
            cur = None
            continue
        if line.head == "structure":
            line.error("missing 'end' before a new block")
        cur.add(line)
    if cur is not None:
        last = text.count("\n") + 1
        raise DocumentError(last, 1, f"missing 'end' for block {cur.name!r}")
    for m, from_line, send in pending_maps:
        _check_map(doc, m, from_line, send)
    return doc


def _check_map(doc: Document, m: MapBlock, line: _Line, send):
    ends = []
    for which, col in zip((m.source, m.target), (w[1] for w in line.words()[::2])):
        if which not in doc.names() or isinstance(doc[which], (MapBlock, Sentence)):
            line.error(f"unknown structure {which!r}", col)
        v = doc[which]
        ends.append(v.ground if isinstance(v, ClosureSpace) else _carrier(v))
    src, tgt = ends
    seen = set()
    for (a, b), sline, col in send:
        if a not in src.names:
            sline.error(f"unknown source element {a!r}", col)
        if b not in tgt.names:
            sline.error(f"unknown target element {b!r}", col)
        if a in seen:
            sline.error(f"{a!r} sent twice", col)
        seen.add(a)
    missing = [x for x in src.names if x not in seen]
    if missing:
        line.error(f"map is not total: {missing[0]!r} has no image")


# ---------------------------------------------------------------------------
# formatting

def _covers_line(p) -> list:
    poset = p if isinstance(p, Poset) else Poset(p.carrier, Relation(p.carrier, p.matrix))
    names = poset.carrier.names
    covers = poset.covers()
    return [f"order {', '.join(f'{names[a]} < {names[b]}' for a, b in covers)}"] if covers else []


def _spec_lines(s) -> list:
    names, le, q = s.names, s.le, s.sq
    is_preorder = bool((q | ~le).all()) and bool(
        (~(q[:, :, None] & q[None, :, :]) | q[:, None, :]).all())
    if is_preorder:
        pairs = [(a, b) for a in range(s.size) for b in range(s.size) if q[a, b] and not le[a, b]]
        mode = "false"
    else:
        pairs = [(a, b) for a in range(s.size) for b in range(s.size) if q[a, b]]
        mode = "none"
    out = []
    if pairs:
        out.append("spec " + ", ".join(f"{names[a]} [= {names[b]}" for a, b in pairs))
    out.append(f"option close-spec {mode}")
    return out


def _writable(names) -> None:
    for w in names:
        if not _NAME.fullmatch(w) or w in _RESERVED:
            raise ValueError(f"name {w!r} cannot be written to a document")


def format_block(block: Block, doc: Document | None = None) -> str:
    v = block.value
    if isinstance(v, (SpecPoset, SpecSemilattice)):
        _writable(v.names)
    elif isinstance(v, (Poset, JoinSemilattice)):
        _writable(v.carrier.names)
    elif isinstance(v, ClosureSpace):
        _writable(v.ground.names)
    elif isinstance(v, ClosurePoset):
        _writable(v.base.carrier.names)
    _writable([block.name])
    lines = [f"structure {block.name}"]
    if isinstance(v, (SpecPoset, SpecSemilattice)):
        lines.append(f"kind spec-{v.kind}")
        lines.append("elements " + " ".join(v.names))
        lines += _covers_line(v.poset if isinstance(v, SpecPoset) else v.semilattice)
        lines += _spec_lines(v)
    elif isinstance(v, (Poset, JoinSemilattice)):
        lines.append("kind " + ("poset" if isinstance(v, Poset) else "semilattice"))
        lines.append("elements " + " ".join(v.carrier.names))
        lines += _covers_line(v)
    elif isinstance(v, ClosureSpace):
        names = v.ground.names
        lines.append("kind closure-space")
        lines.append("points " + " ".join(names))
        lines.append("closed " + " ".join(
            "{" + " ".join(names[i] for i in members(c)) + "}" for c in v.closed))
    elif isinstance(v, ClosurePoset):
        names = v.base.carrier.names
        lines.append("kind closure-poset")
        lines.append("elements " + " ".join(names))
        lines += _covers_line(v.base)
        lines.append("kmap " + ", ".join(f"{names[a]} -> {names[b]}" for a, b in enumerate(v.k)))
    elif isinstance(v, MapBlock):
        lines.append("kind map")
        lines.append(f"from {v.source} to {v.target}")
        lines.append("send " + ", ".join(f"{a} -> {b}" for a, b in v.send))
    elif isinstance(v, Sentence):
        lines.append("kind sentence")
        lines.append("formula " + to_text(v))
    else:
        raise TypeError(type(v).__name__)
    lines.append("end")
    return "\n".join(lines) + "\n"


def format_document(doc: Document) -> str:
    return "\n".join(format_block(b, doc) for b in doc.blocks)


def map_block(name_source: str, name_target: str, source_names, target_names, send) -> MapBlock:
    """MapBlock from an index-valued map."""
    return MapBlock(name_source, name_target,
                    tuple((source_names[i], target_names[v]) for i, v in enumerate(send)))
