"""Relation database: generator declarations, group tables, ground
relations, order facts, and the line-oriented file format that ships them.

File syntax (one entry per line, ``#`` starts a comment):

    family <name> base=<n> order=<k>
    gen <name> dom=<k> cod=<space> order=<d> [susp_of=<name>] [src="..."]
    group <space> k=<k> [partial=p1,p2] = Z<d>{<expr>} + ... | 0 [src="..."]
    rel <expr> = <expr> src="..."
    orderfact <expr> = <n> src="..."
    hopf0 <expr> = <expr> src="..."

A ``family`` extends an explicitly declared base generator upward: the
member one sphere higher is its suspension, with the family's default
order.  Explicit ``gen`` lines win over family synthesis, which is how
eta_2 keeps infinite order while eta_n (n >= 3) has order two.

Signs: every relation cited with a +- ambiguity is stored with "+"; all
downstream uses in this calculator depend only on orders and vanishing,
which the sign choice does not affect.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import expr as E
from . import rewrite as R
from .errors import (ConflictingRelations, RelationsFileError, UnknownGenerator)
from .groups import (GeneratorDecl, GroupTable, Space, TableGen, TableKey,
                     parse_space, sphere)
from .names import join_name, split_name
from .parser import parse


@dataclass(frozen=True)
class Family:
    name: str
    base: int
    stem: int
    default_order: int
    style: str  # '_' or '()'


@dataclass
class Relation:
    name: str
    lhs: E.Expr
    rhs: E.Expr
    provenance: str
    lhs_chain: "R.Chain" = None
    rhs_fs: dict = None


@dataclass
class OrderFact:
    expr: E.Expr
    order: int
    provenance: str
    chain: "R.Chain" = None


class RelationDB:
    """Immutable after load; every operation reading it is pure."""

    def __init__(self):
        self._decls: dict[str, GeneratorDecl] = {}
        self._families: dict[str, Family] = {}
        self._synth: dict[str, GeneratorDecl] = {}
        self._susp_links: dict[str, str] = {}  # name -> name of its suspension
        self.tables: dict[TableKey, GroupTable] = {}
        self._basis: dict[TableKey, list] = {}
        self._basis_index: dict = {}
        self.relations: list[Relation] = []
        self._rel_index: dict = {}
        self.order_facts: list[OrderFact] = []
        self._fact_index: dict = {}
        self.hopf0: dict[str, E.Expr] = {}
        self.source_path: str = ""

    # -- generator declarations -------------------------------------------

    def add_decl(self, decl: GeneratorDecl):
        if decl.name in self._decls:
            raise RelationsFileError(f"duplicate generator {decl.name!r}")
        self._decls[decl.name] = decl
        if decl.suspension_of:
            if decl.suspension_of in self._susp_links:
                raise RelationsFileError(
                    f"two suspensions declared for {decl.suspension_of!r}")
            self._susp_links[decl.suspension_of] = decl.name

    def add_family(self, fam: Family):
        if fam.name in self._families:
            raise RelationsFileError(f"duplicate family {fam.name!r}")
        self._families[fam.name] = fam

    def decl(self, name: str) -> Optional[GeneratorDecl]:
        if name in self._decls:
            return self._decls[name]
        if name in self._synth:
            return self._synth[name]
        fam_name, idx, style = split_name(name)
        fam = self._families.get(fam_name)
        if fam is None or idx is None or style != fam.style or idx <= fam.base:
            return None
        below = join_name(fam_name, idx - 1, style)
        decl = GeneratorDecl(
            name=name, source_dim=idx + fam.stem, target=sphere(idx),
            order=fam.default_order, suspension_of=below, is_suspension=True)
        self._synth[name] = decl
        return decl

    def require_decl(self, name: str) -> GeneratorDecl:
        d = self.decl(name)
        if d is None:
            raise UnknownGenerator(f"undeclared generator {name!r}")
        return d

    def susp_name(self, name: str) -> Optional[str]:
        if name in self._susp_links:
            return self._susp_links[name]
        fam_name, idx, style = split_name(name)
        fam = self._families.get(fam_name)
        if fam is not None and idx is not None and style == fam.style \
                and idx >= fam.base:
            return join_name(fam_name, idx + 1, style)
        return None

    def desusp_name(self, name: str) -> Optional[str]:
        d = self.decl(name)
        if d is not None and d.suspension_of is not None:
            return d.suspension_of
        return None

    # -- tables -------------------------------------------------------------

    def add_table(self, table: GroupTable, chains: list):
        if table.key in self.tables:
            raise RelationsFileError(f"duplicate group table for {table.key}")
        self.tables[table.key] = table
        self._basis[table.key] = chains
        for i, ch in enumerate(chains):
            k = ch.key()
            if k in self._basis_index:
                raise RelationsFileError(
                    f"generator chain {table.gens[i].label!r} already names "
                    f"a basis element")
            self._basis_index[k] = (table, i)

    def table(self, target: Space, k: int) -> Optional[GroupTable]:
        return self.tables.get(TableKey(target, k))

    def basis_chains(self, key: TableKey) -> list:
        return self._basis[key]

    def basis_lookup(self, chain) -> Optional[tuple]:
        return self._basis_index.get(chain.key())

    # -- relations and facts ------------------------------------------------

    def add_relation(self, rel: Relation):
        key = rel.lhs_chain.key()
        prior = self._rel_index.get(key)
        if prior is not None:
            raise ConflictingRelations(
                f"lhs {E.format_expr(rel.lhs)!r} already rewritten by {prior.name}")
        self._rel_index[key] = rel
        self.relations.append(rel)

    def relation_for(self, chain) -> Optional[Relation]:
        return self._rel_index.get(chain.key())

    def bracket_relation(self, left, right) -> Optional[Relation]:
        atom = R.BracketAtom(left, right)
        ch = R.Chain((atom,), atom.dom, atom.space)
        return self._rel_index.get(ch.key())

    def add_order_fact(self, fact: OrderFact):
        key = fact.chain.key()
        prior = self._fact_index.get(key)
        if prior is not None and prior.order != fact.order:
            raise ConflictingRelations(
                f"conflicting orders for {E.format_expr(fact.expr)!r}")
        hit = self.basis_lookup(fact.chain)
        if hit is not None and hit[0].orders[hit[1]] != fact.order:
            raise ConflictingRelations(
                f"order fact for {E.format_expr(fact.expr)!r} disagrees with "
                f"the {hit[0].key} table")
        if prior is None:
            self._fact_index[key] = fact
            self.order_facts.append(fact)

    def order_fact(self, chain) -> Optional[int]:
        fact = self._fact_index.get(chain.key())
        return fact.order if fact else None

    def hopf0_value(self, f: E.Expr) -> Optional[E.Expr]:
        nf = R.normalize(f, self)
        key = nf.display()
        return self.hopf0.get(key)

    def add_hopf0(self, f: E.Expr, value: E.Expr):
        nf = R.normalize(f, self)
        key = nf.display()
        if key in self.hopf0:
            raise RelationsFileError(f"duplicate hopf0 entry for {key!r}")
        self.hopf0[key] = value


# ---------------------------------------------------------------------------
# file loading

_SRC_RE = re.compile(r'\s*src="([^"]*)"\s*$')
_KV_RE = re.compile(r"^([A-Za-z_0-9]+)=(.+)$")
_ENTRY_RE = re.compile(r"^Z([0-9]*)\{(.+)\}$")


@dataclass
class _Line:
    lineno: int
    kind: str
    body: str
    src: str


def _split_lines(text: str, path: str) -> list[_Line]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        src = ""
        m = _SRC_RE.search(line)
        if m:
            src = m.group(1)
            line = line[:m.start()].rstrip()
        if "#" in line:
            line = line[:line.index("#")].rstrip()
        if not line:
            continue
        kind, _, body = line.partition(" ")
        out.append(_Line(lineno, kind, body.strip(), src))
    return out


def _parse_kv(parts: list[str], path: str, lineno: int) -> dict:
    kv = {}
    for p in parts:
        m = _KV_RE.match(p)
        if not m:
            raise RelationsFileError(f"expected key=value, found {p!r}", path, lineno)
        if m.group(1) in kv:
            raise RelationsFileError(f"duplicate key {m.group(1)!r}", path, lineno)
        kv[m.group(1)] = m.group(2)
    return kv


def _int(kv: dict, key: str, path: str, lineno: int) -> int:
    try:
        return int(kv[key])
    except KeyError:
        raise RelationsFileError(f"missing {key}=", path, lineno) from None
    except ValueError:
        raise RelationsFileError(f"{key}= wants an integer", path, lineno) from None


def _parse_expr(text: str, path: str, lineno: int) -> E.Expr:
    from .errors import ExprSyntaxError
    try:
        return parse(text)
    except ExprSyntaxError as exc:
        raise RelationsFileError(f"bad expression {text!r}: {exc}", path, lineno) from None


def _unit_chain_of(e: E.Expr, db: RelationDB, path: str, lineno: int, what: str):
    try:
        fs = R.flatten(E.expand_powers(e, db), db)
    except R.Blocked as b:
        raise RelationsFileError(f"{what} does not flatten: {b.reason}", path, lineno)
    ch = R.unit_chain(fs)
    if ch is None:
        raise RelationsFileError(
            f"{what} must be a single unit-coefficient composition", path, lineno)
    return ch


def _typecheck(e: E.Expr, db: RelationDB, path: str, lineno: int):
    from .errors import CalcError
    try:
        return E.typecheck(e, db)
    except CalcError as exc:
        raise RelationsFileError(str(exc), path, lineno) from None


def load_relations(path: str) -> RelationDB:
    """Parse a relations file and build a finalized, validated database."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return load_relations_text(text, path)


def load_relations_text(text: str, path: str = "<string>") -> RelationDB:
    db = RelationDB()
    db.source_path = path
    lines = _split_lines(text, path)

    known = {"family", "gen", "group", "rel", "orderfact", "hopf0"}
    for ln in lines:
        if ln.kind not in known:
            raise RelationsFileError(f"unknown entry kind {ln.kind!r}", path, ln.lineno)

    # pass 1: generators, then families (which need their base generator)
    for ln in lines:
        if ln.kind != "gen":
            continue
        parts = ln.body.split()
        if not parts:
            raise RelationsFileError("gen needs a name", path, ln.lineno)
        name, kv = parts[0], _parse_kv(parts[1:], path, ln.lineno)
        extra = set(kv) - {"dom", "cod", "order", "susp_of"}
        if extra:
            raise RelationsFileError(f"unknown gen attribute {extra.pop()!r}",
                                     path, ln.lineno)
        try:
            cod = parse_space(kv["cod"])
        except KeyError:
            raise RelationsFileError("missing cod=", path, ln.lineno) from None
        except Exception as exc:
            raise RelationsFileError(str(exc), path, ln.lineno) from None
        decl = GeneratorDecl(
            name=name, source_dim=_int(kv, "dom", path, ln.lineno), target=cod,
            order=_int(kv, "order", path, ln.lineno),
            suspension_of=kv.get("susp_of"))
        try:
            db.add_decl(decl)
        except RelationsFileError as exc:
            raise RelationsFileError(str(exc), path, ln.lineno) from None

    for ln in lines:
        if ln.kind != "family":
            continue
        parts = ln.body.split()
        if not parts:
            raise RelationsFileError("family needs a name", path, ln.lineno)
        name, kv = parts[0], _parse_kv(parts[1:], path, ln.lineno)
        base = _int(kv, "base", path, ln.lineno)
        default_order = _int(kv, "order", path, ln.lineno)
        for style in ("_", "()"):
            base_decl = db._decls.get(join_name(name, base, style))
            if base_decl is not None:
                break
        else:
            raise RelationsFileError(
                f"family {name!r} needs an explicit gen for its base member",
                path, ln.lineno)
        if not base_decl.target.is_sphere or base_decl.target.n != base:
            raise RelationsFileError(
                f"family base {base_decl.name!r} must live on S{base}",
                path, ln.lineno)
        fam = Family(name=name, base=base, stem=base_decl.source_dim - base,
                     default_order=default_order, style=style)
        try:
            db.add_family(fam)
        except RelationsFileError as exc:
            raise RelationsFileError(str(exc), path, ln.lineno) from None

    # validate suspension links now that families exist
    for decl in list(db._decls.values()):
        if decl.suspension_of is None:
            continue
        below = db.decl(decl.suspension_of)
        if below is None:
            raise RelationsFileError(
                f"{decl.name!r}: susp_of references undeclared "
                f"{decl.suspension_of!r}", path)
        if below.source_dim != decl.source_dim - 1 or \
                not below.target.is_sphere or not decl.target.is_sphere or \
                below.target.n != decl.target.n - 1:
            raise RelationsFileError(
                f"{decl.name!r} is not one suspension above {below.name!r}", path)

    # pass 2: group tables
    for ln in lines:
        if ln.kind != "group":
            continue
        head, eq, body = ln.body.partition(" = ")
        if not eq:
            raise RelationsFileError("group needs ' = <summands>'", path, ln.lineno)
        parts = head.split()
        if not parts:
            raise RelationsFileError("group needs a space tag", path, ln.lineno)
        try:
            target = parse_space(parts[0])
        except Exception as exc:
            raise RelationsFileError(str(exc), path, ln.lineno) from None
        kv = _parse_kv(parts[1:], path, ln.lineno)
        extra = set(kv) - {"k", "partial"}
        if extra:
            raise RelationsFileError(f"unknown group attribute {extra.pop()!r}",
                                     path, ln.lineno)
        k = _int(kv, "k", path, ln.lineno)
        completeness = "full"
        if "partial" in kv:
            try:
                completeness = frozenset(int(p) for p in kv["partial"].split(","))
            except ValueError:
                raise RelationsFileError("partial= wants primes", path, ln.lineno) from None
        gens, chains = [], []
        body = body.strip()
        if body != "0":
            for entry in _split_summands(body, path, ln.lineno):
                m = _ENTRY_RE.match(entry)
                if not m:
                    raise RelationsFileError(
                        f"bad summand {entry!r}; expected Z<d>{{<expr>}}",
                        path, ln.lineno)
                order = int(m.group(1)) if m.group(1) else 0
                label = m.group(2).strip()
                expr = _parse_expr(label, path, ln.lineno)
                sig = _typecheck(expr, db, path, ln.lineno)
                if sig is None or sig.target != target or sig.source_dim != k:
                    raise RelationsFileError(
                        f"generator {label!r} does not live in pi_{k}({target})",
                        path, ln.lineno)
                chain = _unit_chain_of(expr, db, path, ln.lineno,
                                       f"table generator {label!r}")
                gens.append(TableGen(label, order))
                chains.append(chain)
        table = GroupTable(TableKey(target, k), completeness, gens, ln.src)
        try:
            db.add_table(table, chains)
        except RelationsFileError as exc:
            raise RelationsFileError(str(exc), path, ln.lineno) from None

    # pass 3: relations, order facts, hopf invariants
    for ln in lines:
        if ln.kind == "rel":
            lhs_text, eq, rhs_text = ln.body.partition(" = ")
            if not eq:
                raise RelationsFileError("rel needs ' = '", path, ln.lineno)
            lhs = _parse_expr(lhs_text.strip(), path, ln.lineno)
            rhs = _parse_expr(rhs_text.strip(), path, ln.lineno)
            sig_l = _typecheck(lhs, db, path, ln.lineno)
            sig_r = _typecheck(rhs, db, path, ln.lineno)
            if sig_l is None:
                raise RelationsFileError("rel lhs cannot be 0", path, ln.lineno)
            if sig_r is not None and sig_r != sig_l:
                raise RelationsFileError(
                    f"rel sides disagree: {sig_l} vs {sig_r}", path, ln.lineno)
            chain = _unit_chain_of(lhs, db, path, ln.lineno, "rel lhs")
            try:
                rhs_fs = R.flatten(E.expand_powers(rhs, db), db)
            except R.Blocked as b:
                raise RelationsFileError(f"rel rhs does not flatten: {b.reason}",
                                         path, ln.lineno)
            rel = Relation(name=f"{lhs_text.strip()} = {rhs_text.strip()}",
                           lhs=lhs, rhs=rhs, provenance=ln.src,
                           lhs_chain=chain, rhs_fs=rhs_fs)
            try:
                db.add_relation(rel)
            except ConflictingRelations as exc:
                raise RelationsFileError(str(exc), path, ln.lineno) from None
        elif ln.kind == "orderfact":
            lhs_text, eq, n_text = ln.body.partition(" = ")
            if not eq:
                raise RelationsFileError("orderfact needs ' = '", path, ln.lineno)
            expr = _parse_expr(lhs_text.strip(), path, ln.lineno)
            try:
                n = int(n_text.strip())
            except ValueError:
                raise RelationsFileError("orderfact wants an integer order",
                                         path, ln.lineno) from None
            if n <= 0:
                raise RelationsFileError("orderfact order must be positive",
                                         path, ln.lineno)
            chain = _unit_chain_of(expr, db, path, ln.lineno, "orderfact expression")
            try:
                db.add_order_fact(OrderFact(expr, n, ln.src, chain))
            except ConflictingRelations as exc:
                raise RelationsFileError(str(exc), path, ln.lineno) from None
    # pass 4: hopf invariants (keyed by normalized forms, so after relations)
    for ln in lines:
        if ln.kind != "hopf0":
            continue
        lhs_text, eq, rhs_text = ln.body.partition(" = ")
        if not eq:
            raise RelationsFileError("hopf0 needs ' = '", path, ln.lineno)
        f = _parse_expr(lhs_text.strip(), path, ln.lineno)
        value = _parse_expr(rhs_text.strip(), path, ln.lineno)
        _typecheck(f, db, path, ln.lineno)
        _typecheck(value, db, path, ln.lineno)
        try:
            db.add_hopf0(f, value)
        except RelationsFileError as exc:
            raise RelationsFileError(str(exc), path, ln.lineno) from None
    return db


def _split_summands(body: str, path: str, lineno: int) -> list[str]:
    # split on '+' at brace depth zero
    out, depth, cur = [], 0, []
    for ch in body:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise RelationsFileError("unbalanced braces", path, lineno)
        if ch == "+" and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise RelationsFileError("unbalanced braces", path, lineno)
    out.append("".join(cur).strip())
    if any(not piece for piece in out):
        raise RelationsFileError("empty summand", path, lineno)
    return out
