"""Whitehead bracket calculus and higher-product operations.

``bracket`` evaluates classical products by combining bilinearity over
sphere domains, the relatively-prime-orders rule, ground bracket
relations, naturality across a common head factor, and the smash
factorization [f . Sa, g . Sb] = [f, g] . S(a ^ b), before handing the
result to the rewrite engine.  Everything that cannot be certified comes
back as a residue, never as a guess.

Higher products are set-valued; the operations here compute the three
things the coset calculus pins down exactly: emptiness (a nonvanishing
lower product), the indeterminacy subgroup, and torsion/suspension
constraints on a coset representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

from . import expr as E
from . import rewrite as R
from .errors import (DegreeMismatch, MissingTable, MixedTargets,
                     UndeterminedResult, UnknownQuery)
from .groups import (INFINITE, Coset, GroupElement, GroupTable, Space,
                     Subgroup, TableGen, TableKey, order_of, sphere,
                     subgroup_generated, torsion_family)

_MAX_DEPTH = 24


# ---------------------------------------------------------------------------
# helpers

def element_to_expr(elt: GroupElement, db) -> E.Expr:
    fs = {}
    chains = db.basis_chains(elt.table.key)
    for c, ch in zip(elt.coeffs, chains):
        if c:
            fs[ch] = c
    return R.unflatten(fs)


def normalform_to_expr(nf: R.NormalForm, db) -> E.Expr:
    if nf.is_resolved:
        if nf.element is not None:
            return element_to_expr(nf.element, db)
        return E.ZERO
    return nf.expr if nf.expr is not None else E.ZERO


def _contains_bracket(e: E.Expr) -> bool:
    if isinstance(e, E.Bracket):
        return True
    if isinstance(e, E.Compose):
        return _contains_bracket(e.f) or _contains_bracket(e.g)
    if isinstance(e, E.Susp):
        return _contains_bracket(e.e)
    if isinstance(e, E.Sum):
        return any(_contains_bracket(t) for t in e.terms)
    if isinstance(e, E.Scalar):
        return _contains_bracket(e.e)
    if isinstance(e, E.Power):
        return _contains_bracket(e.e)
    return False


def evaluate(e: E.Expr, db, *, sig_hint=None, trace: Optional[list] = None,
             _depth: int = 0) -> R.NormalForm:
    """Normalize, expanding bracket subterms by the bracket calculus
    whenever plain rewriting stalls on them."""
    if trace is None:
        trace = []
    if _depth > _MAX_DEPTH:
        return R.NormalForm("residue", None, expr=e,
                            reason="bracket recursion limit", trace=trace)
    nf = R.normalize(e, db, sig_hint=sig_hint, trace=trace)
    if nf.is_resolved:
        return nf
    base = nf.expr if nf.expr is not None else e
    if not _contains_bracket(base):
        return nf
    expanded = _expand_one_bracket(base, db, trace, _depth)
    if expanded is None or expanded == base:
        return nf
    return evaluate(expanded, db, sig_hint=sig_hint or nf.signature,
                    trace=trace, _depth=_depth + 1)


def _expand_one_bracket(e: E.Expr, db, trace, depth) -> Optional[E.Expr]:
    """Replace the leftmost innermost bracket by its evaluated value."""
    if isinstance(e, E.Bracket):
        inner_f = _expand_one_bracket(e.f, db, trace, depth)
        if inner_f is not None:
            return E.Bracket(inner_f, e.g)
        inner_g = _expand_one_bracket(e.g, db, trace, depth)
        if inner_g is not None:
            return E.Bracket(e.f, inner_g)
        nf = bracket(e.f, e.g, db, trace=trace, _depth=depth + 1)
        value = normalform_to_expr(nf, db)
        if value == e:
            return None
        return value
    if isinstance(e, E.Compose):
        f2 = _expand_one_bracket(e.f, db, trace, depth)
        if f2 is not None:
            return E.Compose(f2, e.g)
        g2 = _expand_one_bracket(e.g, db, trace, depth)
        if g2 is not None:
            return E.Compose(e.f, g2)
        return None
    if isinstance(e, E.Susp):
        inner = _expand_one_bracket(e.e, db, trace, depth)
        return E.Susp(e.count, inner) if inner is not None else None
    if isinstance(e, E.Sum):
        for i, t in enumerate(e.terms):
            t2 = _expand_one_bracket(t, db, trace, depth)
            if t2 is not None:
                return E.Sum(e.terms[:i] + (t2,) + e.terms[i + 1:])
        return None
    if isinstance(e, E.Scalar):
        inner = _expand_one_bracket(e.e, db, trace, depth)
        return E.Scalar(e.n, inner) if inner is not None else None
    return None


# ---------------------------------------------------------------------------
# the classical bracket

def bracket(f: E.Expr, g: E.Expr, db, *, trace: Optional[list] = None,
            _depth: int = 0) -> R.NormalForm:
    """Evaluate the classical Whitehead product [f, g]."""
    if trace is None:
        trace = []
    sf, sg = E.typecheck(f, db), E.typecheck(g, db)
    if sf is not None and sg is not None and sf.target != sg.target:
        raise MixedTargets(f"bracket mixes {sf.target} and {sg.target}")
    sig = None
    if sf is not None and sg is not None:
        sig = E.Signature(sf.source_dim + sg.source_dim - 1, sf.target)

    nf_f = evaluate(f, db, trace=trace, _depth=_depth + 1)
    nf_g = evaluate(g, db, trace=trace, _depth=_depth + 1)
    if nf_f.is_resolved and nf_f.is_zero or nf_g.is_resolved and nf_g.is_zero:
        trace.append(R.TraceStep("zero-factor", "bracket with a trivial class",
                                 f"[{E.format_expr(f)}, {E.format_expr(g)}]", "0"))
        table = db.table(sig.target, sig.source_dim) if sig else None
        return R.NormalForm("resolved", sig, zero=True,
                            element=table.zero() if table else None,
                            trace=trace, fs={})
    if nf_f.fs is None or nf_g.fs is None:
        return R.NormalForm(
            "residue", sig, expr=E.Bracket(f, g),
            reason="bracket arguments do not normalize to chains",
            trace=trace)

    contributions = []
    for c, u in nf_f.terms():
        for d, v in nf_g.terms():
            term = _pair_bracket(c * d, u, v, db, trace, _depth)
            if term is None:
                return R.NormalForm(
                    "residue", sig,
                    expr=E.Bracket(normalform_to_expr(nf_f, db),
                                   normalform_to_expr(nf_g, db)),
                    reason=f"no rule applies to [{E.format_expr(R.chain_to_expr(u))}, "
                           f"{E.format_expr(R.chain_to_expr(v))}]",
                    trace=trace)
            contributions.append(term)
    total = E.Sum(tuple(contributions))
    return evaluate(total, db, sig_hint=sig, trace=trace, _depth=_depth + 1)


def _chain_label(ch: R.Chain) -> str:
    return E.format_expr(R.chain_to_expr(ch))


def _pair_bracket(k: int, u: R.Chain, v: R.Chain, db, trace,
                  depth: int) -> Optional[E.Expr]:
    """One bilinear summand k*[u, v]; returns an expression or None."""
    p, q = u.dom, v.dom
    ann_u = R.chain_annihilator(u, db)
    ann_v = R.chain_annihilator(v, db)

    # bilinearity: the coefficient may sit on either factor, so it only
    # matters modulo the gcd of the two annihilators
    g = gcd(ann_u, ann_v)
    if g:
        k2 = k % g
        if k2 != k:
            if k2 == 0:
                if ann_u and ann_v and gcd(ann_u, ann_v) == 1:
                    detail = (f"coprime orders: gcd({ann_u}, {ann_v}) = 1 "
                              f"kills [{_chain_label(u)}, {_chain_label(v)}]")
                    rule = "coprime"
                else:
                    detail = (f"[{_chain_label(u)}, {k} {_chain_label(v)}] = "
                              f"[{k} {_chain_label(u)}, {_chain_label(v)}] = 0 "
                              f"({g} annihilates a factor)")
                    rule = "bilinearity"
                trace.append(R.TraceStep(
                    rule, detail,
                    f"{k} [{_chain_label(u)}, {_chain_label(v)}]", "0"))
                return E.ZERO
            trace.append(R.TraceStep(
                "bilinearity",
                f"coefficient {k} = {k2} (mod {g}) across the bracket",
                f"{k} [{_chain_label(u)}, {_chain_label(v)}]",
                f"{k2} [{_chain_label(u)}, {_chain_label(v)}]"))
            k = k2
    if k == 0:
        return E.ZERO

    ground = _ground_bracket(k, u, v, db, trace)
    if ground is not None:
        return ground

    # naturality across a common head: [h.a, h.b] = h.[a, b]
    m = 0
    while m < len(u.atoms) and m < len(v.atoms) and u.atoms[m] == v.atoms[m]:
        m += 1
    if m:
        head = u.prefix(m)
        u2, v2 = u.suffix(m), v.suffix(m)
        out = E.Compose(R.chain_to_expr(head),
                        E.Bracket(R.chain_to_expr(u2), R.chain_to_expr(v2)))
        if k != 1:
            out = E.Scalar(k, out)
        trace.append(R.TraceStep(
            "naturality",
            f"[{_chain_label(u)}, {_chain_label(v)}] = "
            f"{_chain_label(head)} . [{_chain_label(u2)}, {_chain_label(v2)}]",
            f"[{_chain_label(u)}, {_chain_label(v)}]", E.format_expr(out)))
        return out

    return _smash_split(k, u, v, db, trace)


def _ground_bracket(k: int, u: R.Chain, v: R.Chain, db, trace) -> Optional[E.Expr]:
    rel = db.bracket_relation(u, v)
    sign = 1
    if rel is None:
        rel = db.bracket_relation(v, u)
        if rel is not None:
            sign = (-1) ** (u.dom * v.dom)
    if rel is None:
        return None
    out = rel.rhs
    if k * sign != 1:
        out = E.Scalar(k * sign, out)
    note = "" if sign == 1 else f" (anticommutativity sign {sign})"
    trace.append(R.TraceStep(
        "relation", f"{rel.name}{note}",
        f"{k} [{_chain_label(u)}, {_chain_label(v)}]",
        E.format_expr(out), rel.provenance))
    return out


def _split_options(ch: R.Chain, db):
    """Decompositions ch = head . S(tail): (head chain, desuspended tail)."""
    opts = []
    if ch.atoms:
        tail = ch.suffix(1)
        if tail.is_suspension_class:
            des = _desusp_chain(tail, db)
            if des is not None:
                opts.append((ch.prefix(1), des))
    des_all = _desusp_chain(ch, db)
    if des_all is not None:
        opts.append((R.identity_chain(ch.space.n), des_all))
    return opts


def _desusp_chain(ch: R.Chain, db) -> Optional[R.Chain]:
    atoms = []
    for a in ch.atoms:
        d = R.desusp_atom(a, db)
        if d is None:
            return None
        atoms.append(d)
    return R.Chain(tuple(atoms), ch.dom - 1, sphere(ch.space.n - 1))


def _smash_split(k: int, u: R.Chain, v: R.Chain, db, trace) -> Optional[E.Expr]:
    """[head_u . Sa, head_v . Sb] = [head_u, head_v] . S(a ^ b)."""
    candidates = []
    for hu, a in _split_options(u, db):
        for hv, b in _split_options(v, db):
            if hu.atoms == u.atoms and hv.atoms == v.atoms and \
                    hu.dom == u.dom and hv.dom == v.dom:
                continue  # no progress
            candidates.append((hu, a, hv, b))
    if not candidates:
        return None

    def rank(cand):
        hu, a, hv, b = cand
        if db.bracket_relation(hu, hv) or db.bracket_relation(hv, hu):
            return 0
        au, av = R.chain_annihilator(hu, db), R.chain_annihilator(hv, db)
        if au and av and gcd(au, av) == 1:
            return 1
        return 2

    hu, a, hv, b = min(candidates, key=rank)
    a_expr, b_expr = R.chain_to_expr(a), R.chain_to_expr(b)
    realized = _smash_realize(a_expr, b_expr, db)
    inner = E.Bracket(R.chain_to_expr(hu), R.chain_to_expr(hv))
    out = E.Compose(inner, R.susp_soft(realized, 1, db))
    if k != 1:
        out = E.Scalar(k, out)
    trace.append(R.TraceStep(
        "smash",
        f"[{_chain_label(u)}, {_chain_label(v)}] = "
        f"[{_chain_label(hu)}, {_chain_label(hv)}] . "
        f"S({E.format_expr(a_expr)} ^ {E.format_expr(b_expr)})",
        f"[{_chain_label(u)}, {_chain_label(v)}]", E.format_expr(out)))
    return out


def _smash_realize(a: E.Expr, b: E.Expr, db) -> E.Expr:
    """S^q a . S^{p'} b without the public suspension-class precondition.

    Signs introduced by permuting smash coordinates are fixed to +, the
    database-wide convention.
    """
    sa, sb = E.typecheck(a, db), E.typecheck(b, db)
    if sa is None or sb is None:
        return E.ZERO
    left = R.susp_soft(a, sb.target.n, db)
    right = R.susp_soft(b, sa.source_dim, db)
    out = E.Compose(left, right)
    try:
        return R.unflatten(R.flatten(out, db))
    except R.Blocked:
        return out


# ---------------------------------------------------------------------------
# product specifications and statuses

@dataclass(frozen=True)
class ProductSpec:
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise DegreeMismatch("a product needs at least two factors")

    @property
    def r(self) -> int:
        return len(self.factors)

    def signatures(self, db) -> list:
        sigs = []
        target = None
        for f in self.factors:
            s = E.typecheck(f, db)
            if s is None:
                raise DegreeMismatch(
                    "every factor needs a signature; write 0 as 0*iota_n")
            if target is None:
                target = s.target
            elif s.target != target:
                raise MixedTargets("factors over different targets")
            sigs.append(s)
        return sigs


def product_spec(*factors: E.Expr) -> ProductSpec:
    return ProductSpec(tuple(factors))


@dataclass
class ProductStatus:
    kind: str  # empty | contains_zero | nonempty | coset | constrained_coset | undetermined
    reason: str = ""
    witness: Optional[dict] = None
    coset: Optional[Coset] = None
    candidates: Optional[list] = None
    subgroup: Optional[Subgroup] = None
    constraints: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.reason:
            out["reason"] = self.reason
        if self.witness:
            out["witness"] = self.witness
        if self.coset is not None:
            out["coset"] = {"representative": str(self.coset.representative),
                            "subgroup": self.coset.subgroup.to_json()}
        if self.candidates is not None:
            out["candidates"] = [str(c) for c in self.candidates]
        if self.subgroup is not None:
            out["subgroup"] = self.subgroup.to_json()
        if self.constraints:
            out["constraints"] = list(self.constraints)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def permutation_pullback(spec: ProductSpec, sigma: Sequence[int]):
    """Permuted factor list and sgn(sigma); sigma maps slot i to factor sigma[i]."""
    r = spec.r
    if sorted(sigma) != list(range(1, r + 1)):
        raise DegreeMismatch(f"not a permutation of 1..{r}: {sigma!r}")
    permuted = ProductSpec(tuple(spec.factors[s - 1] for s in sigma))
    inversions = sum(1 for i in range(r) for j in range(i + 1, r)
                     if sigma[i] > sigma[j])
    return permuted, (-1) ** inversions


def lower_products_vanish(spec: ProductSpec, db, *, trace=None) -> ProductStatus:
    """Check the nonemptiness criterion: all lower products contain zero."""
    if trace is None:
        trace = []
    spec.signatures(db)
    r = spec.r
    factors = spec.factors
    # proper sub-tuples only: for r = 2 the pair itself is the product
    if r > 2:
        for i in range(r):
            for j in range(i + 1, r):
                nf = bracket(factors[i], factors[j], db, trace=trace)
                if not nf.is_resolved:
                    return ProductStatus(
                        "undetermined",
                        reason=f"[{E.format_expr(factors[i])}, "
                               f"{E.format_expr(factors[j])}] did not resolve")
                if not nf.is_zero:
                    return ProductStatus(
                        "empty",
                        reason="a pairwise product is nonzero",
                        witness={"pair": (i + 1, j + 1),
                                 "bracket": f"[{E.format_expr(factors[i])}, "
                                            f"{E.format_expr(factors[j])}]",
                                 "value": nf.display()})
    for size in range(3, r):
        from itertools import combinations
        for combo in combinations(range(r), size):
            sub = ProductSpec(tuple(factors[i] for i in combo))
            status = lower_products_vanish(sub, db, trace=trace)
            if status.kind == "empty":
                status.reason = (f"sub-product {tuple(i + 1 for i in combo)} "
                                 f"is empty: {status.reason}")
                return status
            if status.kind != "contains_zero":
                return ProductStatus(
                    "undetermined",
                    reason=f"cannot certify 0 in the sub-product "
                           f"{tuple(i + 1 for i in combo)}")
    zero_slots = [i + 1 for i, f in enumerate(factors)
                  if evaluate(f, db).is_zero]
    if zero_slots:
        return ProductStatus(
            "contains_zero",
            reason=f"factor {zero_slots[0]} is trivial and all lower "
                   f"products vanish")
    return ProductStatus("nonempty",
                         reason="all lower products contain zero")


def indeterminacy(spec: ProductSpec, db) -> Subgroup:
    """The subgroup by which the product is a coset, for sphere factors."""
    sigs = spec.signatures(db)
    target = sigs[0].target
    dims = [s.source_dim for s in sigs]
    M = sum(dims)
    out_table = db.table(target, M - 1)
    if out_table is None:
        raise MissingTable(f"no table for pi_{M - 1}({target})")
    gens = []
    for i, f in enumerate(spec.factors):
        k = M - dims[i]
        t = db.table(target, k)
        if t is None:
            raise MissingTable(f"no table for pi_{k}({target})")
        if not t.is_full:
            nf = evaluate(f, db)
            if not nf.is_resolved or nf.element is None:
                raise UndeterminedResult(
                    f"factor {i + 1} does not resolve; cannot license the "
                    f"partial table pi_{k}({target})")
            o = order_of(nf.element)
            if o is INFINITE or not _prime_support_within(int(o), t.primes):
                raise UndeterminedResult(
                    f"pi_{k}({target}) is only complete at primes "
                    f"{sorted(t.primes)}; the order of factor {i + 1} does "
                    f"not license ignoring the rest")
        for j in range(t.rank()):
            gamma = R.chain_to_expr(db.basis_chains(t.key)[j])
            nf = bracket(gamma, f, db)
            if not nf.is_resolved:
                raise UndeterminedResult(
                    f"[{E.format_expr(gamma)}, {E.format_expr(f)}] "
                    f"did not resolve: {nf.reason}")
            elt = nf.element if nf.element is not None else out_table.zero()
            if elt.table != out_table:
                raise UndeterminedResult("bracket landed outside the target table")
            gens.append(elt)
    return subgroup_generated(gens, out_table)


def _prime_support_within(n: int, primes: frozenset) -> bool:
    if n == 0:
        return False
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1


def triple_coset_constraints(spec: ProductSpec, db, *,
                             _depth: int = 0) -> ProductStatus:
    """Torsion and suspension constraints on a triple-product representative."""
    if spec.r != 3:
        raise DegreeMismatch("triple constraints need exactly three factors")
    low = lower_products_vanish(spec, db)
    if low.kind in ("empty", "undetermined"):
        return low
    sigs = spec.signatures(db)
    target = sigs[0].target
    M = sum(s.source_dim for s in sigs)
    J = indeterminacy(spec, db)
    table = J.table
    constraints: list[str] = []
    notes: list[str] = []

    elements = []
    finite_orders = []
    for f in spec.factors:
        nf = evaluate(f, db)
        elements.append(nf.element if nf.is_resolved else None)
        if nf.is_resolved and nf.element is not None:
            o = order_of(nf.element)
            if o is not INFINITE:
                finite_orders.append(int(o))
    for m in sorted(set(finite_orders)):
        constraints.append(f"{m}*alpha in J")

    coprime_ms = [m for m in sorted(set(finite_orders))
                  if J.order is not INFINITE and gcd(m, int(J.order)) == 1]
    if not coprime_ms:
        return ProductStatus(
            "undetermined", subgroup=J, constraints=constraints,
            reason="no factor order is relatively prime to |J|; cannot pick "
                   "a torsion representative")
    m0 = coprime_ms[0]
    if J.order is not INFINITE:
        constraints.append(f"{m0 * int(J.order)}*alpha = 0")
    candidates = torsion_family(table, m0)
    notes.append(f"representative chosen with {m0}*alpha' = 0 "
                 f"(gcd({m0}, |J|) = 1)")

    support = [i for i, d in enumerate(table.orders) if d and gcd(m0, d) > 1]
    if support and len(candidates) > 1:
        up_target = sphere(target.n + 1)
        up_table = db.table(up_target, M)
        if up_table is None:
            raise MissingTable(
                f"suspension kill needs a table for pi_{M}({up_target})")
        susp_values = {}
        for i in support:
            chain = db.basis_chains(table.key)[i]
            nf = evaluate(E.Susp(1, R.chain_to_expr(chain)), db)
            if not nf.is_resolved or nf.element is None or \
                    nf.element.table != up_table:
                raise UndeterminedResult(
                    f"suspension of {table.gens[i].label!r} did not resolve "
                    f"in pi_{M}({up_target})")
            susp_values[i] = nf.element
        killed = []
        for i in support:
            if susp_values[i].is_zero:
                continue
            others = subgroup_generated(
                [susp_values[j] for j in support if j != i], up_table)
            if susp_values[i] not in others:
                killed.append(i)
        for i in killed:
            label = table.gens[i].label
            constraints.append(
                f"suspension-kill: {label} excluded "
                f"(S {label} = {susp_values[i]} is nonzero and independent)")
        candidates = [c for c in candidates
                      if all(c.coeffs[i] == 0 for i in killed)]

    # containment under scalar factors: [.., n*f, ..] sits inside
    # n*[.., f, ..] + J whenever the divided product itself resolves
    if _depth < 6:
        for t, elt in enumerate(elements):
            if elt is None or elt.is_zero:
                continue
            for p in (2, 3, 5, 7):
                if not all(c % p == 0 for c in elt.coeffs):
                    continue
                divided = elt.table.element(tuple(c // p for c in elt.coeffs))
                if divided.is_zero:
                    continue
                sub_factors = list(spec.factors)
                sub_factors[t] = element_to_expr(divided, db)
                try:
                    sub = triple_coset_constraints(
                        ProductSpec(tuple(sub_factors)), db, _depth=_depth + 1)
                except (MissingTable, UndeterminedResult):
                    continue
                if sub.kind == "coset":
                    sub_cands = [sub.coset.representative]
                elif sub.kind == "constrained_coset":
                    sub_cands = sub.candidates
                else:
                    continue
                before = len(candidates)
                candidates = [
                    c for c in candidates
                    if any((c - fp.scale(p)) in J for fp in sub_cands)]
                if len(candidates) != before:
                    constraints.append(
                        f"containment: family restricted by "
                        f"{p}*(family of the divided factor {t + 1}) + J")
                break

    candidates = sorted(set(candidates), key=lambda c: c.coeffs)
    if len(candidates) == 1:
        return ProductStatus("coset", coset=Coset(candidates[0], J),
                             subgroup=J, constraints=constraints, notes=notes)
    return ProductStatus("constrained_coset", candidates=candidates,
                         subgroup=J, constraints=constraints, notes=notes)


# ---------------------------------------------------------------------------
# projective spaces

def whitehead_projective(f: E.Expr, h0f: Optional[E.Expr], n: int, k: int,
                         db, *, trace: Optional[list] = None) -> R.NormalForm:
    """[gamma_nR . f, i_nR]: zero for odd n, the mod-2 correction for even n."""
    if trace is None:
        trace = []
    rp = Space("RP", n)
    sig = E.typecheck(f, db)
    if sig is not None and (not sig.target.is_sphere or sig.target.n != n
                            or sig.source_dim != k):
        raise DegreeMismatch(f"f must live in pi_{k}(S{n}), got {sig}")
    out_sig = E.Signature(k, rp)
    if n % 2 == 1:
        trace.append(R.TraceStep("projective", "odd n: the product vanishes",
                                 f"[gamma_{n}R . f, i_{n}R]", "0"))
        return R.NormalForm("resolved", out_sig, zero=True, trace=trace, fs={})
    if h0f is None:
        h0f = db.hopf0_value(f)
        if h0f is None:
            raise UndeterminedResult(
                "the 0th Hopf-Hilton invariant of f must be supplied")
    gamma = E.gen(f"gamma_{n}R")
    iota_n = E.gen(f"iota_{n}")
    correction = E.Compose(E.Bracket(iota_n, iota_n), h0f)
    body = E.Sum((E.Scalar(-2, f), correction))
    expr = E.Scalar((-1) ** k, E.Compose(gamma, body))
    trace.append(R.TraceStep(
        "projective",
        f"even n: (-1)^{k} gamma_{n}R . (-2 f + [iota_{n}, iota_{n}] . h0 f)",
        f"[gamma_{n}R . {E.format_expr(f)}, i_{n}R]", E.format_expr(expr)))
    return evaluate(expr, db, sig_hint=out_sig, trace=trace)


# ---------------------------------------------------------------------------
# catalog of named results

def known_results(db, query: str, **params):
    """Catalog lookups for the projective-space product values."""
    if query == "cp":
        r = int(params.get("r", 2))
        if r < 2:
            raise UnknownQuery("cp needs r >= 2")
        table = GroupTable(
            TableKey(Space("CP", r), 2 * r + 1), "full",
            (TableGen(f"gamma_{r}C", 0),),
            provenance="fibration S1 -> S(2r+1) -> CP^r")
        value = table.basis_element(0, math.factorial(r + 1))
        return value
    if query == "hp":
        r = int(params.get("r", 3))
        if r < 2:
            raise UnknownQuery("hp needs r >= 2")
        nf = bracket(E.gen("iota_4"), E.gen("iota_4"), db)
        if r == 2:
            return nf.element
        return ProductStatus(
            "empty",
            reason="the square bracket of the bottom inclusion is nonzero",
            witness={"pair": (1, 2),
                     "bracket": "[i_1H, i_1H] = [iota_4, iota_4]",
                     "value": nf.display(),
                     "ambient": "pi_7(S4) = Z + Z12"})
    if query == "rp2":
        nf = whitehead_projective(E.gen("iota_2"), None, 2, 2, db)
        if not nf.is_resolved or nf.element is None:
            raise UndeterminedResult("projective bracket did not resolve")
        sub = subgroup_generated([nf.element])
        return ProductStatus(
            "coset",
            coset=Coset(nf.element.table.zero(), sub),
            subgroup=sub,
            notes=["2 pi_2(RP2) = [0, 0, i_2R] = [0, i_2R, i_2R] "
                   "= [i_2R, i_2R, i_2R]",
                   "[pi_2(RP2), i_2R] is generated by "
                   f"[gamma_2R, i_2R] = {nf.display()}"])
    if query == "baues":
        dims = tuple(params["dims"])
        if sum(dims) != 4:
            return ProductStatus(
                "contains_zero",
                reason="maps to S2 have vanishing higher products unless the "
                       "total dimension is 4")
        return ProductStatus("undetermined",
                             reason="total dimension 4 over S2 is not covered")
    if query == "rpn":
        n = int(params["n"])
        r = int(params["r"])
        if r < 2 or n < 1:
            raise UnknownQuery("rpn needs n >= 1, r >= 2")
        notes = []
        if r <= n:
            notes.append("the product is zero (modulo indeterminacy)")
        if n % 2 == 0 and r < 2 * n:
            notes.append(f"2 pi_{r - 1}(RP{n}) sits inside the product")
        return ProductStatus(
            "contains_zero",
            reason="iterated bottom-cell inclusions extend over the product",
            notes=notes)
    raise UnknownQuery(f"no catalog entry for {query!r}")
