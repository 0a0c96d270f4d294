"""Inverse encoding: map simply typed answer terms back to LF objects.

Inversion is a partial, type-directed function. Checking mode consumes
the expected LF type (available from the query), synthesis mode rebuilds
it from the head's declared classifier. Answer terms produced by search
over translated programs always invert; anything else fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import hh
from . import lf
from .lf import (App, Const, Context, LFExpr, Lam, MetaVar, Pi, Signature, Var,
                 beta_normalize, canonical_type, substitute, substitute_meta)
from .frontend import Query
from .names import fresh, stem_of


class NotInvertible(lf.LfError):
    def __init__(self, reason: str, subterm=None):
        self.reason = reason
        self.subterm = subterm
        at = f" at {subterm}" if subterm is not None else ""
        super().__init__(f"{reason}{at}")


@dataclass
class InvContext:
    """Typing information steering inversion.

    ``sig`` and ``bound`` type constants and lambda-bound variables;
    ``meta`` types the logic variables that may stay in an answer. When
    ``allow_fresh_meta`` is set, an unknown variable met in checking
    position is recorded at the expected type instead of failing.
    """

    sig: Signature
    meta: dict[str, LFExpr] = field(default_factory=dict)
    bound: dict[str, LFExpr] = field(default_factory=dict)
    allow_fresh_meta: bool = True

    def with_bound(self, name: str, ty: LFExpr) -> "InvContext":
        return InvContext(self.sig, self.meta, {**self.bound, name: ty},
                          self.allow_fresh_meta)


def invert_check(t: hh.HhTerm, a: LFExpr, theta: InvContext) -> LFExpr:
    """The LF object whose encoding is ``t``, checked against type ``a``.

    ``t`` must be beta-normal and eta-long; ``a`` beta-normal and valid.
    """
    if isinstance(t, hh.Lam):
        if not isinstance(a, Pi):
            raise NotInvertible(f"abstraction checked against non-product type {a}", t)
        b = t.binder
        if b in theta.bound or b in lf.free_vars(a.body):
            nb = fresh(b)
            t = hh.Lam(nb, t.binder_ty, hh.subst_term(t.body, {b: hh.Var(nb, t.binder_ty)}))
            b = nb
        body_ty = beta_normalize(substitute(a.body, {a.binder: Var(b)}))
        inner = invert_check(t.body, body_ty, theta.with_bound(b, a.binder_type))
        return Lam(b, a.binder_type, inner)
    if isinstance(t, hh.LogicVar) and t.name not in theta.meta and theta.allow_fresh_meta:
        theta.meta[t.name] = a
        return MetaVar(t.name)
    m, found = invert_synth(t, theta)
    if not _types_agree(found, a, theta):
        raise NotInvertible(f"synthesized type {found} does not match expected {a}", t)
    return m


def invert_synth(t: hh.HhTerm, theta: InvContext) -> tuple[LFExpr, LFExpr]:
    """The LF expression for ``t`` together with its synthesized
    classifier, driven by the head's declared type."""
    head, args = hh.spine(t)
    match head:
        case hh.Const(name=n):
            if n in theta.bound:
                out: LFExpr = Var(n)
                cls = beta_normalize(theta.bound[n])
            elif n in theta.sig:
                out = Const(n)
                cls = beta_normalize(theta.sig.classifier_of(n))
            else:
                raise NotInvertible(f"unknown constant {n}", t)
        case hh.Var(name=n):
            if n not in theta.bound:
                raise NotInvertible(f"unbound variable {n}", t)
            out = Var(n)
            cls = beta_normalize(theta.bound[n])
        case hh.LogicVar(name=n):
            if n not in theta.meta:
                raise NotInvertible(f"variable {n} has no known LF type", t)
            out = MetaVar(n)
            cls = beta_normalize(theta.meta[n])
        case _:
            raise NotInvertible("cannot synthesize a type for an abstraction", t)
    for arg in args:
        if not isinstance(cls, Pi):
            raise NotInvertible(f"over-applied head in {t}", arg)
        arg_lf = invert_check(arg, cls.binder_type, theta)
        out = App(out, arg_lf)
        cls = beta_normalize(substitute(cls.body, {cls.binder: arg_lf}))
    return out, cls


def invert_substitution(bindings: dict[str, hh.HhTerm], delta: dict[str, LFExpr],
                        sig: Signature, allow_fresh_meta: bool = True) -> dict[str, LFExpr]:
    """Pointwise inversion of an answer substitution at the types the
    meta-variable environment assigns to its domain."""
    theta = InvContext(sig, meta=dict(delta), allow_fresh_meta=allow_fresh_meta)
    out: dict[str, LFExpr] = {}
    for name, term in bindings.items():
        if name not in delta:
            continue
        try:
            out[name] = invert_check(hh.eta_long(term), beta_normalize(delta[name]), theta)
        except NotInvertible as e:
            raise NotInvertible(f"answer for {name} is not invertible: {e.reason}",
                                e.subterm) from e
    return out


@dataclass
class InvertedAnswer:
    bindings: dict[str, LFExpr]
    proof: LFExpr
    proof_type: LFExpr
    meta_types: dict[str, LFExpr]  # includes any metas minted for free variables
    residues: list  # (lf pair | hh pair, inverted?) per disagreement


def invert_answer(answer, query: Query, sig: Signature, proof_name: str) -> InvertedAnswer:
    """Present a search answer in source terms: invert the meta-variable
    bindings, instantiate the query type, and invert the proof term
    against it."""
    delta = dict(query.meta_types)
    theta = InvContext(sig, meta=delta)
    bindings: dict[str, LFExpr] = {}
    for name in query.meta_types:
        if name in answer.bindings:
            bindings[name] = invert_check(hh.eta_long(answer.bindings[name]),
                                          beta_normalize(query.meta_types[name]), theta)
    inst_type = beta_normalize(substitute_meta(query.query_type, bindings))
    if proof_name in answer.bindings:
        enc_proof = hh.eta_long(answer.bindings[proof_name])
        try:
            proof = invert_check(enc_proof, inst_type, theta)
        except NotInvertible:
            if not answer.disagreements:
                raise
            # a conditional answer: residual pairs keep the query type
            # underdetermined, so settle for the proof's synthesized type
            proof, inst_type = invert_synth(enc_proof, theta)
    else:
        delta[proof_name] = inst_type
        proof = MetaVar(proof_name)
    residues = []
    for s, t in answer.disagreements:
        try:
            ls, _ = invert_synth(hh.eta_long(s), theta)
            rt, _ = invert_synth(hh.eta_long(t), theta)
            residues.append(((ls, rt), True))
        except NotInvertible:
            residues.append(((s, t), False))
    extra = {n: ty for n, ty in delta.items() if n not in query.meta_types}
    return InvertedAnswer(bindings, proof, inst_type, {**query.meta_types, **extra}, residues)


def _types_agree(found: LFExpr, expected: LFExpr, theta: InvContext) -> bool:
    ctx = Context(list(theta.bound.items()))
    try:
        return canonical_type(theta.sig, ctx, found, theta.meta) == \
            canonical_type(theta.sig, ctx, expected, theta.meta)
    except lf.LfError:
        return found == expected
