"""Validity judgments: signatures, contexts, kinds, type families, objects.

Checking is syntax directed on beta-normal input. Wherever two
classifiers must agree, the comparison is alpha-equality of beta-normal,
eta-long (canonical) forms, which covers beta-eta equality for well
typed terms.
"""

from __future__ import annotations

from .lf import (App, CategoryError, Const, Context, Lam, LfError, LFExpr, MetaVar,
                 Pi, Signature, Type, UnboundConstant, Var, beta_normalize,
                 canonical_kind, canonical_type, free_vars, fresh, meta_vars,
                 substitute)


class TypecheckError(LfError):
    pass


class TypeMismatch(TypecheckError):
    def __init__(self, expected, found, where: str = ""):
        self.expected = expected
        self.found = found
        loc = f" in {where}" if where else ""
        super().__init__(f"expected {expected} but found {found}{loc}")


class UnboundVariable(TypecheckError):
    pass


class NotAFunction(TypecheckError):
    pass


class SignatureError(TypecheckError):
    """First failing declaration of a signature check, with its reason."""

    def __init__(self, decl: str, cause: Exception):
        self.decl = decl
        self.cause = cause
        super().__init__(f"declaration {decl}: {cause}")


def check_signature(sig: Signature) -> None:
    """Every classifier is a valid kind, or a valid type of kind 'type',
    checked left to right against the preceding declarations."""
    prefix = Signature()
    for d in sig:
        try:
            if d.is_type_family:
                check_kind(prefix, Context(), d.classifier)
            else:
                check_type(prefix, Context(), d.classifier, Type())
        except LfError as e:
            raise SignatureError(d.name, e) from e
        prefix = prefix.declare(d.name, d.classifier, d.implicit)


def check_context(sig: Signature, ctx: Context) -> None:
    prefix = Context()
    for name, ty in ctx:
        check_type(sig, prefix, ty, Type())
        prefix = prefix.extend(name, ty)


def check_kind(sig: Signature, ctx: Context, k: LFExpr, meta=None) -> None:
    match k:
        case Type():
            return
        case Pi(binder=b, binder_type=t, body=m):
            check_type(sig, ctx, t, Type(), meta)
            b, m = _enter(ctx, b, m)
            check_kind(sig, ctx.extend(b, t), m, meta)
        case _:
            raise CategoryError(f"not a kind: {k}")


def check_type(sig: Signature, ctx: Context, a: LFExpr, k: LFExpr, meta=None) -> None:
    match a:
        case Pi(binder=b, binder_type=t, body=m):
            if not isinstance(k, Type):
                raise TypeMismatch(k, Type(), where=str(a))
            check_type(sig, ctx, t, Type(), meta)
            b, m = _enter(ctx, b, m)
            check_type(sig, ctx.extend(b, t), m, Type(), meta)
        case _:
            head, args = _spine(a)
            if not isinstance(head, Const):
                raise CategoryError(f"not a type family: {a}")
            if not sig.is_type_const(head.name):
                raise CategoryError(f"object constant {head.name} used as a type family")
            kind = beta_normalize(sig.classifier_of(head.name))
            for arg in args:
                if not isinstance(kind, Pi):
                    raise NotAFunction(f"type family {head.name} is over-applied")
                check_object(sig, ctx, meta, arg, kind.binder_type)
                kind = beta_normalize(substitute(kind.body, {kind.binder: arg}))
            if canonical_kind(sig, ctx, kind, meta) != canonical_kind(sig, ctx, k, meta):
                raise TypeMismatch(k, kind, where=str(a))


def check_object(sig: Signature, ctx: Context, meta, m: LFExpr, a: LFExpr) -> None:
    """Derivability of ``m : a``; ``a`` must be a valid beta-normal type."""
    meta = meta or {}
    if isinstance(m, Lam):
        if not isinstance(a, Pi):
            raise TypeMismatch(a, f"an abstraction {m}")
        if not types_equal(sig, ctx, meta, m.binder_type, a.binder_type):
            raise TypeMismatch(a.binder_type, m.binder_type, where=str(m))
        check_type(sig, ctx, m.binder_type, Type(), meta)
        b, body = _enter(ctx, m.binder, m.body)
        body_ty = beta_normalize(substitute(a.body, {a.binder: Var(b)}))
        check_object(sig, ctx.extend(b, m.binder_type), meta, body, body_ty)
        return
    found = infer_object(sig, ctx, meta, m)
    if not types_equal(sig, ctx, meta, found, a):
        raise TypeMismatch(a, found, where=str(m))


def infer_object(sig: Signature, ctx: Context, meta, m: LFExpr) -> LFExpr:
    """Synthesize the (beta-normal) type of an object."""
    meta = meta or {}
    match m:
        case Const(name=n):
            if sig.is_type_const(n):
                raise CategoryError(f"type family {n} used as an object")
            return beta_normalize(sig.classifier_of(n))
        case Var(name=n):
            ty = ctx.lookup(n)
            if ty is None:
                raise UnboundVariable(f"unbound variable {n}")
            return beta_normalize(ty)
        case MetaVar(name=n):
            if n not in meta:
                raise UnboundVariable(f"meta-variable {n} has no declared type")
            return beta_normalize(meta[n])
        case App(fn=f, arg=arg):
            fty = infer_object(sig, ctx, meta, f)
            if not isinstance(fty, Pi):
                raise NotAFunction(f"{f} of type {fty} applied to {arg}")
            check_object(sig, ctx, meta, arg, fty.binder_type)
            return beta_normalize(substitute(fty.body, {fty.binder: arg}))
        case Lam(binder=b, binder_type=t, body=body):
            check_type(sig, ctx, t, Type(), meta)
            b2, body = _enter(ctx, b, body)
            body_ty = infer_object(sig, ctx.extend(b2, t), meta, body)
            return Pi(b2, beta_normalize(t), body_ty)
        case _:
            raise CategoryError(f"not an object: {m}")


def types_equal(sig: Signature, ctx: Context, meta, a: LFExpr, b: LFExpr) -> bool:
    return canonical_type(sig, ctx, a, meta) == canonical_type(sig, ctx, b, meta)


def _enter(ctx: Context, binder: str, body: LFExpr) -> tuple[str, LFExpr]:
    # Rename on shadowing so Context keeps unique names.
    if ctx.lookup(binder) is None:
        return binder, body
    nb = fresh(binder)
    return nb, substitute(body, {binder: Var(nb)})


def _spine(e: LFExpr):
    args = []
    while isinstance(e, App):
        args.append(e.arg)
        e = e.fn
    args.reverse()
    return e, args
