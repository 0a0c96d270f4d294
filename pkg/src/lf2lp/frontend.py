"""Reader for the Twelf-style surface syntax.

Declarations are ``name : expr.``; ``{x:A} U`` and ``[x:A] M`` bind and
extend maximally to the right, ``->`` is right-associative and binds
looser than application, ``%`` starts a line comment. Free identifiers
that begin with an uppercase letter are implicit: elaboration turns them
into leading binders (declarations) or meta-variables (queries), with
types inferred by first-order matching against the argument positions
they occupy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lf import (App, Const, Decl, LfError, LFExpr, Lam, MetaVar, Pi, Signature,
                 Type, UnboundConstant, Var, app, beta_normalize, check_category,
                 fresh, meta_vars, spine, substitute)


class ParseError(LfError):
    def __init__(self, msg: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {msg}")


class ElabError(LfError):
    pass


class AmbiguousImplicitType(ElabError):
    pass


class InferenceFailure(ElabError):
    pass


@dataclass(frozen=True)
class RawDecl:
    name: str
    classifier: LFExpr
    line: int = 0
    col: int = 0


@dataclass
class Query:
    query_type: LFExpr
    meta_types: dict[str, LFExpr] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# lexer

_PUNCT = set("{}[]():.")


@dataclass(frozen=True)
class _Token:
    kind: str  # punctuation, "->", "type", "ident", "eof"
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
        elif c.isspace():
            i += 1
            col += 1
        elif c == "%":
            while i < n and text[i] != "\n":
                i += 1
        elif c in _PUNCT:
            toks.append(_Token(c, c, line, col))
            i += 1
            col += 1
        elif text.startswith("->", i):
            toks.append(_Token("->", "->", line, col))
            i += 2
            col += 2
        elif c.isalpha() or c in "_'":
            j = i
            while j < n:
                ch = text[j]
                if ch.isalnum() or ch in "_'":
                    j += 1
                elif ch == "-" and not text.startswith("->", j):
                    j += 1
                else:
                    break
            word = text[i:j]
            kind = "type" if word == "type" else "ident"
            toks.append(_Token(kind, word, line, col))
            col += j - i
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(_Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# parser

_ATOM_START = {"ident", "type", "(", "{", "["}


class _Parser:
    def __init__(self, toks: list[_Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> _Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r} but found {t.text or t.kind!r}", t.line, t.col)
        return self.next()

    def decls(self) -> list[RawDecl]:
        out = []
        while self.peek().kind != "eof":
            name = self.expect("ident")
            self.expect(":")
            e = self.expr(frozenset())
            self.expect(".")
            out.append(RawDecl(name.text, e, name.line, name.col))
        return out

    def expr(self, scope: frozenset[str]) -> LFExpr:
        t = self.peek()
        if t.kind == "{":
            self.next()
            name = self.expect("ident").text
            self.expect(":")
            ty = self.expr(scope)
            self.expect("}")
            return Pi(name, ty, self.expr(scope | {name}))
        if t.kind == "[":
            self.next()
            name = self.expect("ident").text
            self.expect(":")
            ty = self.expr(scope)
            self.expect("]")
            return Lam(name, ty, self.expr(scope | {name}))
        left = self.application(scope)
        if self.peek().kind == "->":
            self.next()
            return Pi(fresh("_"), left, self.expr(scope))
        return left

    def application(self, scope) -> LFExpr:
        e = self.atom(scope)
        while self.peek().kind in _ATOM_START:
            nxt = self.peek()
            if nxt.kind in ("{", "["):
                raise ParseError("binder cannot appear as an argument; parenthesize it",
                                 nxt.line, nxt.col)
            e = App(e, self.atom(scope))
        return e

    def atom(self, scope) -> LFExpr:
        t = self.next()
        if t.kind == "type":
            return Type()
        if t.kind == "(":
            e = self.expr(scope)
            self.expect(")")
            return e
        if t.kind == "ident":
            if t.text in scope:
                return Var(t.text)
            if t.text[0].isupper():
                return MetaVar(t.text)
            return Const(t.text)
        raise ParseError(f"unexpected token {t.text or t.kind!r}", t.line, t.col)


def parse_signature(text: str) -> list[RawDecl]:
    return _Parser(_lex(text)).decls()


def parse_query(text: str) -> LFExpr:
    p = _Parser(_lex(text))
    e = p.expr(frozenset())
    if p.peek().kind == ".":
        p.next()
    p.expect("eof")
    return e


# ---------------------------------------------------------------------------
# implicit-argument elaboration


def elaborate_decl(raw: RawDecl, sig: Signature) -> Decl:
    """Close over the free uppercase variables of a declaration.

    Each becomes one leading binder, in order of first occurrence in a
    left-to-right traversal; its type is inferred from the argument
    positions it occupies.
    """
    _resolve_constants(raw.classifier, sig, raw.name, allow_implicit_uses=False)
    order = meta_vars(raw.classifier)
    inferred = _infer_meta_types(raw.classifier, sig)
    allowed: set[str] = set()
    for name in order:
        if name not in inferred:
            raise AmbiguousImplicitType(
                f"cannot infer a type for implicit variable {name} in {raw.name}")
        for ref in meta_vars(inferred[name]):
            if ref not in allowed:
                raise InferenceFailure(
                    f"type of implicit {name} depends on {ref}, bound later")
        allowed.add(name)
    core = raw.classifier
    for name in reversed(order):
        core = Pi(name, inferred[name], core)
    core = beta_normalize(_metas_to_vars(core, set(order)))
    check_category(core, "kind" if _targets_type(core) else "type", sig)
    return Decl(raw.name, core, implicit=len(order))


def elaborate_signature(decls: list[RawDecl]) -> Signature:
    sig = Signature()
    for raw in decls:
        d = elaborate_decl(raw, sig)
        sig = sig.declare(d.name, d.classifier, d.implicit)
    return sig


def elaborate_query(raw: LFExpr, sig: Signature) -> Query:
    """Read free uppercase variables as meta-variables to be solved.

    Explicit ``{x:A}`` binders keep their universal reading. Uses of
    constants with implicit arguments get fresh meta-variables, applied
    to all explicit binders in scope at the use site.
    """
    _resolve_constants(raw, sig, "query", allow_implicit_uses=True)
    filled, fresh_meta = _fill_implicits(raw, sig)
    inferred = _infer_meta_types(filled, sig, seed=fresh_meta)
    out: dict[str, LFExpr] = {}
    for name in meta_vars(filled):
        if name not in inferred:
            raise AmbiguousImplicitType(f"cannot infer a type for meta-variable {name}")
        out[name] = inferred[name]
    qt = beta_normalize(filled)
    check_category(qt, "type", sig)
    return Query(qt, out)


def _targets_type(e: LFExpr) -> bool:
    while isinstance(e, Pi):
        e = e.body
    return isinstance(e, Type)


def _resolve_constants(e: LFExpr, sig: Signature, where: str, allow_implicit_uses: bool):
    match e:
        case Const(name=n):
            d = sig.decl_of(n)  # raises UnboundConstant
            if d.implicit and not allow_implicit_uses:
                raise InferenceFailure(
                    f"constant {n} takes implicit arguments; only queries may use it ({where})")
        case App(fn=f, arg=a):
            _resolve_constants(f, sig, where, allow_implicit_uses)
            _resolve_constants(a, sig, where, allow_implicit_uses)
        case Pi(binder_type=t, body=m) | Lam(binder_type=t, body=m):
            _resolve_constants(t, sig, where, allow_implicit_uses)
            _resolve_constants(m, sig, where, allow_implicit_uses)


def _metas_to_vars(e: LFExpr, names: set[str]) -> LFExpr:
    match e:
        case MetaVar(name=n) if n in names:
            return Var(n)
        case App(fn=f, arg=a):
            return App(_metas_to_vars(f, names), _metas_to_vars(a, names))
        case Pi(binder=b, binder_type=t, body=m):
            return Pi(b, _metas_to_vars(t, names), _metas_to_vars(m, names))
        case Lam(binder=b, binder_type=t, body=m):
            return Lam(b, _metas_to_vars(t, names), _metas_to_vars(m, names))
        case _:
            return e


def _fill_implicits(e: LFExpr, sig: Signature) -> tuple[LFExpr, dict[str, LFExpr]]:
    new_meta: dict[str, LFExpr] = {}

    def go(e, scope):  # scope: tuple of (name, type) explicit binders
        match e:
            case Pi(binder=b, binder_type=t, body=m):
                return Pi(b, go(t, scope), go(m, scope + ((b, t),)))
            case Lam(binder=b, binder_type=t, body=m):
                return Lam(b, go(t, scope), go(m, scope + ((b, t),)))
            case _:
                head, args = spine(e)
                args = [go(a, scope) for a in args]
                if isinstance(head, Const):
                    d = sig.decl_of(head.name)
                    if d.implicit:
                        cls = d.classifier
                        inserted = []
                        for _ in range(d.implicit):
                            dom = cls.binder_type
                            name = fresh(cls.binder)
                            ty = dom
                            term: LFExpr = MetaVar(name)
                            for bn, bt in reversed(scope):
                                ty = Pi(bn, bt, ty)
                            for bn, _bt in scope:
                                term = App(term, Var(bn))
                            new_meta[name] = beta_normalize(ty)
                            inserted.append(term)
                            cls = beta_normalize(substitute(cls.body, {cls.binder: term}))
                        args = inserted + args
                return app(head, *args)

    return go(e, ()), new_meta


def _infer_meta_types(classifier: LFExpr, sig: Signature, seed=None) -> dict[str, LFExpr]:
    """First-order inference for the types of free meta-variables.

    Restricted to base types and simple function types; conflicting or
    higher-order requirements raise.
    """
    types: dict[str, LFExpr] = dict(seed or {})
    fixed = frozenset(seed or ())  # binder-raised types; occurrences cannot improve them

    def record(name, ty):
        if name in fixed:
            return
        ty = beta_normalize(ty)
        if name in types:
            if types[name] != ty:
                raise InferenceFailure(
                    f"conflicting types inferred for {name}: {types[name]} vs {ty}")
        else:
            types[name] = ty

    def synth(m, env):
        head, args = spine(m)
        match head:
            case Const(name=n):
                t = beta_normalize(sig.classifier_of(n))
            case Var(name=n):
                t = env.get(n)
            case MetaVar(name=n):
                t = types.get(n)
            case _:
                t = None
        if t is None:
            return None
        for a in args:
            if not isinstance(t, Pi):
                return None
            t = beta_normalize(substitute(t.body, {t.binder: a}))
        return t

    def visit_classifier(a, env):
        match a:
            case Type():
                pass
            case Pi(binder=b, binder_type=t, body=m):
                visit_classifier(t, env)
                visit_classifier(m, {**env, b: t})
            case _:
                head, args = spine(a)
                if isinstance(head, MetaVar):
                    raise InferenceFailure(
                        f"meta-variable {head.name} used as a type family")
                visit_spine(head, args, env)

    def visit_obj(m, expected, env):
        match m:
            case Lam(binder=b, binder_type=t, body=body):
                visit_classifier(t, env)
                inner_expected = None
                if isinstance(expected, Pi):
                    inner_expected = beta_normalize(
                        substitute(expected.body, {expected.binder: Var(b)}))
                visit_obj(body, inner_expected, {**env, b: t})
            case _:
                head, args = spine(m)
                if isinstance(head, MetaVar):
                    arg_tys = [synth(a, env) for a in args]
                    if expected is not None and all(t is not None for t in arg_tys):
                        cand = expected
                        for t in reversed(arg_tys):
                            cand = Pi(fresh("_"), t, cand)
                        record(head.name, cand)
                    for a, t in zip(args, arg_tys):
                        visit_obj(a, t, env)
                else:
                    visit_spine(head, args, env)

    def visit_spine(head, args, env):
        match head:
            case Const(name=n):
                t = beta_normalize(sig.classifier_of(n))
            case Var(name=n):
                t = env.get(n)
            case _:
                t = None
        for a in args:
            if isinstance(t, Pi):
                visit_obj(a, t.binder_type, env)
                t = beta_normalize(substitute(t.body, {t.binder: a}))
            else:
                visit_obj(a, None, env)
                t = None

    # Two passes so an occurrence can use type information discovered by a
    # later one.
    visit_classifier(classifier, {})
    visit_classifier(classifier, {})
    return types
