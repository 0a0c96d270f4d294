"""Core term language: kinds, type families and objects in one tree.

A single node type covers all three layers of the dependently typed
language; :func:`check_category` rejects mixed-up trees when input is
elaborated. Alpha-equivalence is the only term equality used anywhere in
the package: ``__eq__`` compares nameless skeletons, so trees differing
only in bound names are interchangeable, including as dict keys.

Normalization is fuel bounded because arbitrary (ill-typed) input may
diverge; well-typed terms always normalize long before the default
budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass

from .names import assign_displays, fresh, stem_of

DEFAULT_FUEL = 10**6


class LfError(Exception):
    """Base class for everything this package raises on bad input."""


class FuelExhausted(LfError):
    """Normalization ran out of reduction budget (divergent input)."""


class UnboundConstant(LfError):
    pass


class CategoryError(LfError):
    """A kind/type/object construct was used in the wrong layer."""


# ---------------------------------------------------------------------------
# syntax trees


@dataclass(frozen=True, eq=False)
class LFExpr:
    """Base node; equality and hashing are alpha-equivalence."""

    def __eq__(self, other):
        if not isinstance(other, LFExpr):
            return NotImplemented
        return alpha_key(self) == alpha_key(other)

    def __hash__(self):
        return hash(alpha_key(self))

    def __str__(self):
        return pretty(self)

    def __repr__(self):
        return pretty(self)


@dataclass(frozen=True, eq=False)
class Type(LFExpr):
    """The kind constant classifying type families."""


@dataclass(frozen=True, eq=False)
class Const(LFExpr):
    name: str


@dataclass(frozen=True, eq=False)
class Var(LFExpr):
    name: str


@dataclass(frozen=True, eq=False)
class MetaVar(LFExpr):
    name: str


@dataclass(frozen=True, eq=False)
class App(LFExpr):
    fn: LFExpr
    arg: LFExpr


@dataclass(frozen=True, eq=False)
class Pi(LFExpr):
    binder: str
    binder_type: LFExpr
    body: LFExpr


@dataclass(frozen=True, eq=False)
class Lam(LFExpr):
    binder: str
    binder_type: LFExpr
    body: LFExpr


def app(fn: LFExpr, *args: LFExpr) -> LFExpr:
    for a in args:
        fn = App(fn, a)
    return fn


def spine(expr: LFExpr) -> tuple[LFExpr, list[LFExpr]]:
    args: list[LFExpr] = []
    while isinstance(expr, App):
        args.append(expr.arg)
        expr = expr.fn
    args.reverse()
    return expr, args


def arrow(dom: LFExpr, cod: LFExpr) -> Pi:
    """Non-dependent function type."""
    return Pi(fresh("_"), dom, cod)


def alpha_key(expr: LFExpr):
    def go(e, env, depth):
        match e:
            case Type():
                return ("type",)
            case Const(name=n):
                return ("c", n)
            case MetaVar(name=n):
                return ("m", n)
            case Var(name=n):
                i = env.get(n)
                return ("v", n) if i is None else ("b", i)
            case App(fn=f, arg=a):
                return ("@", go(f, env, depth), go(a, env, depth))
            case Pi(binder=b, binder_type=t, body=m) | Lam(binder=b, binder_type=t, body=m):
                tag = "pi" if isinstance(e, Pi) else "lam"
                inner = dict(env)
                inner[b] = depth
                return (tag, go(t, env, depth), go(m, inner, depth + 1))
        raise TypeError(f"not an LF expression: {e!r}")

    return go(expr, {}, 0)


def free_vars(expr: LFExpr) -> frozenset[str]:
    out: set[str] = set()

    def go(e, bound):
        match e:
            case Var(name=n):
                if n not in bound:
                    out.add(n)
            case App(fn=f, arg=a):
                go(f, bound)
                go(a, bound)
            case Pi(binder=b, binder_type=t, body=m) | Lam(binder=b, binder_type=t, body=m):
                go(t, bound)
                go(m, bound | {b})

    go(expr, frozenset())
    return frozenset(out)


def meta_vars(expr: LFExpr) -> list[str]:
    """Meta-variable names in first-occurrence order (left to right)."""
    out: list[str] = []
    seen: set[str] = set()

    def go(e):
        match e:
            case MetaVar(name=n):
                if n not in seen:
                    seen.add(n)
                    out.append(n)
            case App(fn=f, arg=a):
                go(f)
                go(a)
            case Pi(binder_type=t, body=m) | Lam(binder_type=t, body=m):
                go(t)
                go(m)

    go(expr)
    return out


def constants(expr: LFExpr) -> frozenset[str]:
    out: set[str] = set()

    def go(e):
        match e:
            case Const(name=n):
                out.add(n)
            case App(fn=f, arg=a):
                go(f)
                go(a)
            case Pi(binder_type=t, body=m) | Lam(binder_type=t, body=m):
                go(t)
                go(m)

    go(expr)
    return frozenset(out)


# ---------------------------------------------------------------------------
# substitution


def substitute(expr: LFExpr, bindings) -> LFExpr:
    """Simultaneous capture-avoiding substitution for free variables.

    ``bindings`` maps variable names to replacement expressions (a dict
    or a list of pairs). The result is not normalized.
    """
    smap = dict(bindings)
    if not smap:
        return expr
    return _subst(expr, smap, _range_fv(smap), meta=False)


def substitute_meta(expr: LFExpr, bindings) -> LFExpr:
    """Like :func:`substitute`, replacing meta-variable occurrences."""
    smap = dict(bindings)
    if not smap:
        return expr
    return _subst(expr, smap, _range_fv(smap), meta=True)


def _range_fv(smap) -> frozenset[str]:
    out: set[str] = set()
    for t in smap.values():
        out |= free_vars(t)
    return frozenset(out)


def _subst(e, smap, rfv, meta):
    match e:
        case Var(name=n):
            return e if meta else smap.get(n, e)
        case MetaVar(name=n):
            return smap.get(n, e) if meta else e
        case Type() | Const():
            return e
        case App(fn=f, arg=a):
            return App(_subst(f, smap, rfv, meta), _subst(a, smap, rfv, meta))
        case Pi(binder=b, binder_type=t, body=m) | Lam(binder=b, binder_type=t, body=m):
            cls = type(e)
            t2 = _subst(t, smap, rfv, meta)
            inner = smap if meta else {k: v for k, v in smap.items() if k != b}
            if not inner:
                return cls(b, t2, m)
            if b in rfv:
                nb = fresh(b)
                m = _subst(m, {b: Var(nb)}, frozenset((nb,)), meta=False)
                b = nb
            return cls(b, t2, _subst(m, inner, rfv, meta))
    raise TypeError(f"not an LF expression: {e!r}")


# ---------------------------------------------------------------------------
# beta normalization


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, left: int):
        self.left = left

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("no beta normal form reached within the fuel budget")


def beta_normalize(expr: LFExpr, fuel: int | None = None) -> LFExpr:
    """Leftmost-outermost reduction to beta normal form.

    Raises :class:`FuelExhausted` after ``fuel`` contractions; callers
    checking types treat that as a type error.
    """
    budget = DEFAULT_FUEL if fuel is None else fuel
    if budget <= 0:
        raise ValueError("fuel must be positive")
    return _norm(expr, _Fuel(budget))


def _whnf(e, f):
    while isinstance(e, App):
        fn = _whnf(e.fn, f)
        if isinstance(fn, Lam):
            f.spend()
            e = substitute(fn.body, {fn.binder: e.arg})
        else:
            return e if fn is e.fn else App(fn, e.arg)
    return e


def _norm(e, f):
    e = _whnf(e, f)
    match e:
        case App(fn=fn, arg=a):
            return App(_norm(fn, f), _norm(a, f))
        case Pi(binder=b, binder_type=t, body=m):
            return Pi(b, _norm(t, f), _norm(m, f))
        case Lam(binder=b, binder_type=t, body=m):
            return Lam(b, _norm(t, f), _norm(m, f))
        case _:
            return e


def is_beta_normal(expr: LFExpr) -> bool:
    match expr:
        case App(fn=f, arg=a):
            return not isinstance(f, Lam) and is_beta_normal(f) and is_beta_normal(a)
        case Pi(binder_type=t, body=m) | Lam(binder_type=t, body=m):
            return is_beta_normal(t) and is_beta_normal(m)
        case _:
            return True


# ---------------------------------------------------------------------------
# signatures and contexts


@dataclass(frozen=True)
class Decl:
    name: str
    classifier: LFExpr
    implicit: int = 0

    @property
    def is_type_family(self) -> bool:
        e = self.classifier
        while isinstance(e, Pi):
            e = e.body
        return isinstance(e, Type)


class Signature:
    """Ordered constant declarations; names unique, classifiers closed."""

    def __init__(self, decls=()):
        self._decls: list[Decl] = []
        self._index: dict[str, Decl] = {}
        for d in decls:
            self._add(d)

    def _add(self, decl: Decl):
        if decl.name in self._index:
            raise LfError(f"duplicate declaration of {decl.name}")
        if free_vars(decl.classifier) or meta_vars(decl.classifier):
            raise LfError(f"classifier of {decl.name} is not closed")
        self._decls.append(decl)
        self._index[decl.name] = decl

    def declare(self, name: str, classifier: LFExpr, implicit: int = 0) -> "Signature":
        sig = Signature(self._decls)
        sig._add(Decl(name, classifier, implicit))
        return sig

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self._decls)

    def __len__(self):
        return len(self._decls)

    def decl_of(self, name: str) -> Decl:
        try:
            return self._index[name]
        except KeyError:
            raise UnboundConstant(f"undeclared constant {name}") from None

    def classifier_of(self, name: str) -> LFExpr:
        return self.decl_of(name).classifier

    def is_type_const(self, name: str) -> bool:
        return self.decl_of(name).is_type_family


class Context:
    """Ordered variable typings; each type may use only earlier variables."""

    def __init__(self, entries=()):
        self._entries: list[tuple[str, LFExpr]] = list(entries)
        self._index = {n: t for n, t in self._entries}

    def extend(self, name: str, ty: LFExpr) -> "Context":
        if name in self._index:
            raise LfError(f"variable {name} already bound in context")
        return Context(self._entries + [(name, ty)])

    def lookup(self, name: str) -> LFExpr | None:
        return self._index.get(name)

    def names(self) -> list[str]:
        return [n for n, _ in self._entries]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)


# Meta-variable typings (the Delta environment) are plain dicts from
# meta-variable name to type.
MetaContext = dict


# ---------------------------------------------------------------------------
# syntactic categories


def check_category(expr: LFExpr, expected: str, sig: Signature, env=frozenset()):
    """Reject trees that mix the kind/type/object layers.

    ``expected`` is one of ``"kind"``, ``"type"``, ``"object"``. Bound
    variables (and meta-variables) live at the object layer.
    """
    match expr:
        case Type():
            if expected != "kind":
                raise CategoryError("'type' can only appear as a kind")
        case Pi(binder=b, binder_type=t, body=m):
            if expected == "object":
                raise CategoryError("dependent product used as an object")
            check_category(t, "type", sig, env)
            check_category(m, expected, sig, env | {b})
        case Lam(binder=b, binder_type=t, body=m):
            if expected != "object":
                raise CategoryError("abstraction used as a type or kind")
            check_category(t, "type", sig, env)
            check_category(m, "object", sig, env | {b})
        case _:
            head, args = spine(expr)
            for a in args:
                check_category(a, "object", sig, env)
            match head:
                case Const(name=n):
                    is_ty = sig.is_type_const(n)
                    if expected == "type" and not is_ty:
                        raise CategoryError(f"object constant {n} used as a type family")
                    if expected == "object" and is_ty:
                        raise CategoryError(f"type family {n} used as an object")
                    if expected == "kind":
                        raise CategoryError(f"constant {n} used as a kind")
                    if expected == "type":
                        arity = 0
                        k = sig.classifier_of(n)
                        while isinstance(k, Pi):
                            arity += 1
                            k = k.body
                        if len(args) != arity:
                            raise CategoryError(
                                f"type family {n} expects {arity} arguments, got {len(args)}")
                case Var(name=n) | MetaVar(name=n):
                    if expected != "object":
                        raise CategoryError(f"variable {n} used as a type or kind")
                case _:
                    raise CategoryError(f"ill-formed head {head!r}")


# ---------------------------------------------------------------------------
# canonical (eta-long) forms


def canonicalize(expr: LFExpr, classifier: LFExpr, sig: Signature,
                 ctx: Context | None = None, meta: MetaContext | None = None) -> LFExpr:
    """Eta-expand ``expr`` so every constant and variable is fully applied.

    ``classifier`` is the kind of ``expr`` when it is a type family, or
    its type when it is an object. Input must be beta-normal and well
    typed; the result is idempotent under repetition.
    """
    env = dict(ctx or ())
    if _is_kind(classifier):
        return _canon_type(expr, sig, env, meta or {})
    return _canon_obj(expr, classifier, sig, env, meta or {})


def canonical_type(sig: Signature, ctx: Context | None, a: LFExpr,
                   meta: MetaContext | None = None) -> LFExpr:
    """Canonical form of a (beta-normal, valid) type family."""
    return _canon_type(a, sig, dict(ctx or ()), meta or {})


def canonical_kind(sig: Signature, ctx: Context | None, k: LFExpr,
                   meta: MetaContext | None = None) -> LFExpr:
    return _canon_kind(k, sig, dict(ctx or ()), meta or {})


def _is_kind(e: LFExpr) -> bool:
    while isinstance(e, Pi):
        e = e.body
    return isinstance(e, Type)


def _canon_kind(k, sig, env, meta):
    match k:
        case Type():
            return k
        case Pi(binder=b, binder_type=t, body=m):
            t2 = _canon_type(t, sig, env, meta)
            return Pi(b, t2, _canon_kind(m, sig, {**env, b: t}, meta))
    raise CategoryError(f"not a kind: {k}")


def _canon_type(a, sig, env, meta):
    match a:
        case Pi(binder=b, binder_type=t, body=m):
            t2 = _canon_type(t, sig, env, meta)
            return Pi(b, t2, _canon_type(m, sig, {**env, b: t}, meta))
        case _:
            head, args = spine(a)
            if not isinstance(head, Const):
                raise CategoryError(f"not a type family: {a}")
            kind = beta_normalize(sig.classifier_of(head.name))
            return app(head, *_canon_args(args, kind, sig, env, meta))


def _canon_obj(m, a, sig, env, meta):
    if isinstance(a, Pi):
        if isinstance(m, Lam):
            b, body = m.binder, m.body
        else:
            b = fresh(a.binder)
            body = App(m, Var(b))
        body_ty = beta_normalize(substitute(a.body, {a.binder: Var(b)}))
        dom = _canon_type(a.binder_type, sig, env, meta)
        return Lam(b, dom, _canon_obj(body, body_ty, sig, {**env, b: a.binder_type}, meta))
    head, args = spine(m)
    match head:
        case Const(name=n):
            cls = beta_normalize(sig.classifier_of(n))
        case Var(name=n):
            if n not in env:
                raise LfError(f"unbound variable {n}")
            cls = beta_normalize(env[n])
        case MetaVar(name=n):
            if n not in meta:
                raise LfError(f"meta-variable {n} has no declared type")
            cls = beta_normalize(meta[n])
        case _:
            raise CategoryError(f"cannot canonicalize object {m}")
    return app(head, *_canon_args(args, cls, sig, env, meta))


def _canon_args(args, cls, sig, env, meta):
    out = []
    for arg in args:
        if not isinstance(cls, Pi):
            raise LfError("over-applied head during canonicalization")
        out.append(_canon_obj(arg, cls.binder_type, sig, env, meta))
        cls = beta_normalize(substitute(cls.body, {cls.binder: arg}))
    return out


# ---------------------------------------------------------------------------
# pretty printing (Twelf concrete syntax)

_PREC_ARROW, _PREC_APP, _PREC_ATOM = 0, 1, 2


def pretty(expr: LFExpr) -> str:
    names: list[str] = []
    consts: set[str] = set()
    seen: set[str] = set()

    def collect(e):
        match e:
            case Const(name=n):
                consts.add(n)
            case Var(name=n) | MetaVar(name=n):
                if n not in seen:
                    seen.add(n)
                    names.append(n)
            case App(fn=f, arg=a):
                collect(f)
                collect(a)
            case Pi(binder=b, binder_type=t, body=m) | Lam(binder=b, binder_type=t, body=m):
                collect(t)
                if b not in seen:
                    seen.add(b)
                    names.append(b)
                collect(m)

    collect(expr)
    disp = assign_displays(names, taken=consts | {"type"})
    disp.update({n: n for n in consts})

    def go(e, prec):
        match e:
            case Type():
                s, p = "type", _PREC_ATOM
            case Const(name=n) | Var(name=n) | MetaVar(name=n):
                s, p = disp[n], _PREC_ATOM
            case App():
                head, args = spine(e)
                parts = [go(head, _PREC_APP)] + [go(a, _PREC_ATOM) for a in args]
                s, p = " ".join(parts), _PREC_APP
            case Pi(binder=b, binder_type=t, body=m):
                if b in free_vars(m):
                    s = f"{{{disp[b]}:{go(t, _PREC_ARROW)}}} {go(m, _PREC_ARROW)}"
                else:
                    s = f"{go(t, _PREC_APP)} -> {go(m, _PREC_ARROW)}"
                p = _PREC_ARROW
            case Lam(binder=b, binder_type=t, body=m):
                s = f"[{disp[b]}:{go(t, _PREC_ARROW)}] {go(m, _PREC_ARROW)}"
                p = _PREC_ARROW
            case _:
                raise TypeError(f"not an LF expression: {e!r}")
        return f"({s})" if p < prec else s

    return go(expr, _PREC_ARROW)
