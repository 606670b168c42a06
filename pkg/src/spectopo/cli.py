"""Command-line front end.

Exit codes: 0 when every checked property holds, 1 when one fails (a witness
is printed), 2 for unreadable or ill-formed input. With ``--emit sst`` the
document is the only thing on stdout; the report moves to stderr.
"""
from __future__ import annotations

import argparse
import sys

from .closure import (ClosurePoset, ClosureSpace, PointMap, closure_poset_continuity,
                      is_closed_map, is_continuous, is_open_map, prop24_check,
                      spec_of, topology_tag)
from .errors import (Condition44Violated, DocumentError, InvalidStructure,
                     NotCongruence, PreconditionFailed, SpectopoError)
from .finorder import JoinSemilattice, Poset
from .folang import BUILTINS, builtin, evaluate, parse
from .spec import (LAW_VARS, SpecPoset, SpecSemilattice, SpecStructure,
                   check_axioms, compute_kmap)
from .sst import Block, Document, MapBlock, format_document, map_block, parse_document

OK, FAILED, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


class Report:
    def __init__(self, quiet: bool, stream=None):
        self.quiet = quiet
        self.stream = stream
        self.lines = []

    def line(self, text: str = ""):
        self.lines.append(text)

    def finish(self, code: int, verdict: str) -> int:
        self.flush()
        print(verdict, file=self.stream)
        return code

    def flush(self):
        if not self.quiet:
            for ln in self.lines:
                print(ln, file=self.stream)
        self.lines = []


# ---------------------------------------------------------------------------
# witness text

def explain(law: str, s: SpecStructure, w: tuple) -> str:
    """Human-readable violation of a law at its witness tuple."""
    n = s.names
    env = dict(zip(LAW_VARS[law], w))

    def j(x, y):
        return s.join_of(env[x], env[y])

    def nm(v):
        return n[env[v]]
    if law == "S1":
        return f"{nm('a')} <= {nm('b')}, {nm('a')} not [= {nm('b')}"
    if law == "S2":
        return f"{nm('a')} [= {nm('b')}, {nm('b')} [= {nm('c')}, {nm('a')} not [= {nm('c')}"
    if law == "S3":
        return (f"{nm('a')} [= {nm('b')}, {nm('a1')} [= {nm('b')}, "
                f"{nm('a')} \\/ {nm('a1')} = {n[j('a', 'a1')]} not [= {nm('b')}")
    if law == "S4":
        return f"{nm('a')} not [= {nm('a')}"
    if law == "S5":
        return f"{nm('a')} [= {nm('b')}, {nm('b')} <= {nm('c')}, {nm('a')} not [= {nm('c')}"
    if law == "S6":
        return f"{nm('a')} <= {nm('b')}, {nm('b')} [= {nm('c')}, {nm('a')} not [= {nm('c')}"
    if law == "S7":
        return (f"{nm('a')} [= {nm('b')}, {nm('a1')} [= {nm('b1')}, "
                f"{nm('a')} \\/ {nm('a1')} = {n[j('a', 'a1')]} not [= "
                f"{nm('b')} \\/ {nm('b1')} = {n[j('b', 'b1')]}")
    if law == "S8":
        return f"{nm('a')} [= {nm('b')}, {nm('a')} \\/ {nm('b')} = {n[j('a', 'b')]} not [= {nm('b')}"
    if law == "S9":
        return (f"{nm('a')} [= {nm('b')}, {nm('a')} \\/ {nm('a1')} = {n[j('a', 'a1')]} not [= "
                f"{nm('b')} \\/ {nm('a1')} = {n[j('b', 'a1')]}")
    raise KeyError(law)


def _yes(flag) -> str:
    return "n/a" if flag is None else ("yes" if flag else "no")


# ---------------------------------------------------------------------------
# input helpers

def _load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_document(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except DocumentError as exc:
        raise InputError(f"{path}:{exc}") from None


def _pick(doc: Document, name: str | None, types, what: str):
    cands = [b for b in doc.blocks if isinstance(b.value, types)]
    if name is not None:
        for b in cands:
            if b.name == name:
                return b
        if name.isdigit() and int(name) < len(cands):
            return cands[int(name)]
        raise InputError(f"no {what} named {name!r}")
    if not cands:
        raise InputError(f"document contains no {what}")
    return cands[0]


# ---------------------------------------------------------------------------
# subcommands

def _check_spec(r: Report, name: str, s: SpecStructure) -> bool:
    rep = check_axioms(s)
    r.line(f"structure {name}: spec-{s.kind}, {s.size} elements")
    for law, v in rep.laws.items():
        if v is None:
            continue
        r.line(f"  {law}: {'holds' if v.ok else 'fails'}")
    r.line(f"  principal: {_yes(rep.principal)}")
    if rep.principal and rep.laws["S1"].ok and rep.laws["S2"].ok:
        k = compute_kmap(s)
        r.line("  K: " + ", ".join(f"{a} -> {b}" for a, b in k.named().items()))
    elif rep.principal_witness is not None:
        r.line(f"  no maximum below: {s.names[rep.principal_witness]}")
    r.line(f"  additive: {_yes(rep.additive)}")
    if rep.additive is False:
        a, b = rep.additive_witness
        r.line(f"  additivity fails at: {s.names[a]}, {s.names[b]}")
    r.line(f"  cech-poset: {_yes(rep.cech_poset)}")
    if s.has_join:
        r.line(f"  cech-semilattice: {_yes(rep.cech_semilattice)}")
    ok = rep.is_specialization
    for law in rep.defining_laws:
        v = rep.laws[law]
        if not v.ok:
            r.line(f"({law}): {explain(law, s, v.witness)}")
    return ok


def cmd_check(args, r: Report) -> int:
    doc = _load(args.file)
    blocks = doc.structures()
    if args.structure is not None:
        picked = [b for b in blocks if b.name == args.structure]
        if not picked and args.structure.isdigit() and int(args.structure) < len(blocks):
            picked = [blocks[int(args.structure)]]
        if not picked:
            raise InputError(f"no structure named {args.structure!r}")
        blocks = picked
    if not blocks:
        raise InputError(f"{args.file} contains no structures")
    ok = True
    for b in blocks:
        v = b.value
        if isinstance(v, SpecStructure):
            ok &= _check_spec(r, b.name, v)
        elif isinstance(v, ClosureSpace):
            tag = topology_tag(v)
            r.line(f"structure {b.name}: closure-space, {v.size} points, "
                   f"{len(v.closed)} closed sets, topology: {_yes(tag.is_topology)}")
            if not tag.is_topology:
                r.line(f"  not a topology: {_describe_tag(v, tag)}")
        elif isinstance(v, ClosurePoset):
            r.line(f"structure {b.name}: closure-poset, {v.size} elements, closure operator: yes")
        elif isinstance(v, (Poset, JoinSemilattice)):
            kind = "poset" if isinstance(v, Poset) else "semilattice"
            r.line(f"structure {b.name}: {kind}, {v.size} elements")
    return r.finish(OK if ok else FAILED, "ok" if ok else "failed")


def _describe_tag(x: ClosureSpace, tag) -> str:
    if tag.witness[0] == "empty-not-closed":
        return "empty set not closed"
    _, a, b = tag.witness
    return f"{x.name(a)} | {x.name(b)} not closed"


def _emit(args, doc_blocks: list):
    if args.emit == "sst":
        print(format_document(Document(doc_blocks)), end="")


def cmd_embed(args, r: Report) -> int:
    from .embed import (downset_embed, poset_topologize, principalize, topologize,
                        topologize_full)
    doc = _load(args.file)
    variant = args.variant.replace("-", "_")
    want = SpecPoset if args.method in ("downset", "poset-full") else SpecSemilattice
    b = _pick(doc, args.structure, (want,), f"spec-{want.kind}")
    s = b.value
    out = [Block(b.name, s)]
    try:
        if args.method == "principalize":
            res = principalize(s)
            u = res.structure
            r.line(f"principalized {b.name}: {s.size} -> {u.size} elements")
            r.line(f"  principal: {_yes(res.principal)}, additive: {_yes(res.additive)}, "
                   f"closure formula: {_yes(res.closure_formula_ok)}")
            r.line("  certificate: " + res.certificate.summary())
            out += [Block(b.name + "-principal", u),
                    Block(b.name + "-kappa", map_block(b.name, b.name + "-principal",
                                                       s.names, u.names, res.kappa.send))]
            ok = res.ok
        elif args.method == "downset":
            res = downset_embed(s)
            u = res.structure
            r.line(f"downsets of {b.name}: {u.size} elements")
            r.line("  certificate: " + res.certificate.summary())
            out += [Block(b.name + "-downsets", u),
                    Block(b.name + "-iota", map_block(b.name, b.name + "-downsets",
                                                      s.names, u.names, res.iota.send))]
            ok = res.certificate.is_embedding
        else:
            if args.method == "topologize":
                res = topologize(s, variant)
                space, phi, cert = res.space, res.phi, res.certificate
                ok = res.ok
            elif args.method == "full":
                res = topologize_full(s, variant)
                space, phi, cert = res.space, res.composite, res.certificate
                ok = res.ok
            else:
                res = poset_topologize(s, variant)
                space, phi, cert = res.space, res.composite, res.certificate
                ok = res.ok
            tag = topology_tag(space)
            r.line(f"space for {b.name}: {space.size} points, {len(space.closed)} closed sets, "
                   f"topology: {_yes(tag.is_topology)}")
            for a in range(s.size):
                r.line(f"  {s.names[a]} -> {space.name(phi.send[a])}")
            r.line("  certificate: " + cert.summary())
            out.append(Block(b.name + "-space", space))
    except (PreconditionFailed, InvalidStructure) as exc:
        r.line(f"precondition: {exc}")
        return r.finish(FAILED, "failed")
    code = OK if ok else FAILED
    _emit(args, out)
    return r.finish(code, "ok" if ok else "failed")


def _read_sentence(args):
    if args.builtin:
        return builtin(args.builtin)
    if args.sentence_file:
        try:
            with open(args.sentence_file, encoding="utf-8") as fh:
                return parse(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read {args.sentence_file}: {exc.strerror}") from None
    return parse(args.inline)


def cmd_eval(args, r: Report) -> int:
    from .closure import ternary_model
    sentence = _read_sentence(args)
    doc = _load(args.file)
    b = _pick(doc, args.structure, (SpecPoset, SpecSemilattice, ClosureSpace), "structure")
    model = b.value
    if isinstance(model, ClosureSpace):
        model = ternary_model(model) if sentence.uses("R") else spec_of(model)[0]
    res = evaluate(sentence, model)
    r.line(f"sentence: {sentence}")
    r.line(f"structure: {b.name}")
    if res.witness is not None:
        r.line("witness: " + ", ".join(f"{k} -> {v}" for k, v in res.names.items()))
    return r.finish(OK if res.truth else FAILED, "true" if res.truth else "false")


def cmd_enum(args, r: Report) -> int:
    from . import enumeration as en
    k, n = args.kind, args.size
    gen = {
        "poset": en.enum_posets,
        "semilattice": en.enum_join_semilattices,
        "spec-poset": en.enum_spec_posets,
        "spec-semilattice": en.enum_spec_semilattices,
        "moore": en.enum_moore_families,
        "topology": en.enum_topologies,
    }[k]
    items = gen(n)
    if args.emit == "sst":
        print(format_document(Document([Block(f"{k}-{n}-{i}", x) for i, x in enumerate(items)])),
              end="")
    return r.finish(OK, f"{len(items)} {k} structures of size {n}")


def cmd_continuity(args, r: Report) -> int:
    doc = _load(args.file)
    if args.map not in doc.names() or not isinstance(doc[args.map], MapBlock):
        raise InputError(f"no map named {args.map!r}")
    f = doc.resolve_map(args.map)
    if isinstance(f, tuple):
        psi, p, q = f
        v = closure_poset_continuity(psi, p, q)
        r.line(f"continuous: {_yes(v.continuous)}")
        r.line(f"specialization homomorphism: {_yes(v.hom)}")
        if v.witness is not None:
            names = p.base.carrier.names
            r.line(f"  fails at: {names[v.witness]}")
        ok = v.continuous and v.holds
        return r.finish(OK if ok else FAILED, "continuous" if ok else "not continuous")
    if not isinstance(f, PointMap):
        raise InputError("continuity needs a map between closure spaces or closure posets")
    c = is_continuous(f)
    r.line(f"continuous: {_yes(c.continuous)}")
    if not c.continuous:
        r.line(f"  preimage of {f.target.name(c.closed_witness)} is not closed")
        r.line(f"  image of K{f.source.name(c.operator_witness)} escapes the closure of the image")
    r.line(f"closed map: {_yes(is_closed_map(f).ok)}")
    if topology_tag(f.target).is_topology:
        r.line(f"open map: {_yes(is_open_map(f).ok)}")
    v = prop24_check(f)
    r.line(f"image map on S: homomorphism {_yes(v.s_hom)}, embedding {_yes(v.s_embedding)}")
    r.line(f"image map on P: homomorphism {_yes(v.p_hom)}, embedding {_yes(v.p_embedding)}")
    r.line(f"embedding of spaces: {_yes(v.embedding)}")
    r.line(f"equivalences agree: {_yes(v.holds)}")
    ok = c.continuous and v.holds
    return r.finish(OK if ok else FAILED, "continuous" if ok else "not continuous")


def cmd_quotient(args, r: Report) -> int:
    from .embed import EquivRelation, quotient
    doc = _load(args.file)
    b = _pick(doc, args.structure, (SpecSemilattice,), "spec-semilattice")
    s = b.value
    classes = []
    for part in args.partition.split("|"):
        names = part.split()
        try:
            classes.append([s.carrier.index(x) for x in names])
        except ValueError:
            raise InputError(f"partition names an unknown element in {part.strip()!r}") from None
    try:
        e = EquivRelation(tuple(classes))
        if sorted(x for c in e.classes for x in c) != list(range(s.size)):
            raise ValueError("partition must list every element exactly once")
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        res = quotient(s, e, force=args.force)
    except NotCongruence as exc:
        a, b2, c = exc.witness
        r.line(f"not a congruence: {s.names[a]} ~ {s.names[b2]} but "
               f"{s.names[a]} \\/ {s.names[c]} and {s.names[b2]} \\/ {s.names[c]} are separated")
        return r.finish(FAILED, "failed")
    except Condition44Violated as exc:
        a, b2 = exc.witness
        r.line(f"identified but not [=-related: {s.names[a]} not [= {s.names[b2]}")
        return r.finish(FAILED, "failed")
    ok = _check_spec(r, f"{b.name}/~", res.structure)
    return r.finish(OK if ok else FAILED, "ok" if ok else "failed")


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectopo",
                                description="Specialization posets and semilattices on finite carriers.")
    p.add_argument("--quiet", action="store_true", help="print only the final verdict")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    c = sub.add_parser("check", parents=[common], help="axioms, principality, additivity, Cech variants")
    c.add_argument("file")
    c.add_argument("--structure")

    e = sub.add_parser("embed", parents=[common], help="build and certify an embedding")
    e.add_argument("--method", required=True,
                   choices=["principalize", "topologize", "downset", "full", "poset-full"])
    e.add_argument("--variant", default="character", choices=["character", "paper-literal"])
    e.add_argument("--emit", choices=["sst"])
    e.add_argument("--structure")
    e.add_argument("file")

    v = sub.add_parser("eval", parents=[common], help="evaluate a first-order sentence")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin", choices=BUILTINS)
    g.add_argument("--sentence-file")
    g.add_argument("--inline")
    v.add_argument("--structure")
    v.add_argument("file")

    n = sub.add_parser("enum", parents=[common], help="enumerate small structures up to isomorphism")
    n.add_argument("--kind", required=True,
                   choices=["poset", "semilattice", "spec-poset", "spec-semilattice",
                            "moore", "topology"])
    n.add_argument("--size", required=True, type=int)
    n.add_argument("--emit", choices=["sst"])

    m = sub.add_parser("continuity", parents=[common], help="continuity report for a map block")
    m.add_argument("--map", required=True)
    m.add_argument("file")

    q = sub.add_parser("quotient", parents=[common], help="quotient by a partition")
    q.add_argument("--partition", required=True, help='classes separated by "|"')
    q.add_argument("--force", action="store_true")
    q.add_argument("--structure")
    q.add_argument("file")
    return p


COMMANDS = {"check": cmd_check, "embed": cmd_embed, "eval": cmd_eval, "enum": cmd_enum,
            "continuity": cmd_continuity, "quotient": cmd_quotient}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    r = Report(args.quiet, sys.stderr if getattr(args, "emit", None) else None)
    try:
        return COMMANDS[args.command](args, r)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except SpectopoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
