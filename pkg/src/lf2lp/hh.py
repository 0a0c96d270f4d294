"""Simply typed terms, program and goal formulas, and pattern unification
for the hereditary Harrop target language.

Terms are kept beta-normal. Unification solves Miller-pattern equations
eagerly and parks anything outside the pattern fragment as disagreement
pairs, to be retried whenever a new binding lands; a pair that never
becomes tractable is reported with the answer as a residual constraint.

Dependency discipline: every constant carries the level at which it
entered the signature (0 for the static signature, k for the k-th
universally introduced eigenconstant on the current branch, LOCAL for
lambda binders opened up during unification). A logic variable at level
n may only be instantiated with terms whose constants sit at levels
<= n; higher-level constants must come in through the variable's own
arguments. Where an inner variable is allowed to see more than the outer
one, pruning re-applies it to the offending constants (raising) instead
of cutting them off.
"""

from __future__ import annotations

from dataclasses import dataclass

from .names import assign_displays, fresh, stem_of

LOCAL_LEVEL = 1 << 60  # lambda binders during unification: never capturable


class HhError(Exception):
    pass


# ---------------------------------------------------------------------------
# simple types


@dataclass(frozen=True)
class HType:
    def __str__(self):
        return pretty_type(self)


@dataclass(frozen=True)
class TAtom(HType):
    name: str


@dataclass(frozen=True)
class TArrow(HType):
    dom: HType
    cod: HType


O = TAtom("o")
LF_OBJ = TAtom("lf-obj")
LF_TYPE = TAtom("lf-type")


def arrow(*tys: HType) -> HType:
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = TArrow(t, out)
    return out


def arg_types(ty: HType) -> list[HType]:
    out = []
    while isinstance(ty, TArrow):
        out.append(ty.dom)
        ty = ty.cod
    return out


def target_type(ty: HType) -> TAtom:
    while isinstance(ty, TArrow):
        ty = ty.cod
    return ty


def drop_args(ty: HType, n: int) -> HType:
    for _ in range(n):
        if not isinstance(ty, TArrow):
            raise HhError("over-applied type")
        ty = ty.cod
    return ty


def pretty_type(ty: HType) -> str:
    match ty:
        case TAtom(name=n):
            return n
        case TArrow(dom=d, cod=c):
            left = pretty_type(d)
            if isinstance(d, TArrow):
                left = f"({left})"
            return f"{left} -> {pretty_type(c)}"
    raise TypeError(f"not a simple type: {ty!r}")


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True, eq=False)
class HhTerm:
    def __eq__(self, other):
        if not isinstance(other, HhTerm):
            return NotImplemented
        return term_key(self) == term_key(other)

    def __hash__(self):
        return hash(term_key(self))

    def __str__(self):
        return pretty_term(self)

    def __repr__(self):
        return pretty_term(self)


@dataclass(frozen=True, eq=False)
class Const(HhTerm):
    name: str
    ty: HType
    level: int = 0


@dataclass(frozen=True, eq=False)
class Var(HhTerm):
    """A lambda-bound occurrence."""

    name: str
    ty: HType


@dataclass(frozen=True, eq=False)
class LogicVar(HhTerm):
    name: str
    ty: HType
    level: int = 0


@dataclass(frozen=True, eq=False)
class Lam(HhTerm):
    binder: str
    binder_ty: HType
    body: HhTerm


@dataclass(frozen=True, eq=False)
class App(HhTerm):
    fn: HhTerm
    arg: HhTerm


def app(fn: HhTerm, *args: HhTerm) -> HhTerm:
    for a in args:
        fn = App(fn, a)
    return fn


def lams(binders, body: HhTerm) -> HhTerm:
    for v in reversed(binders):
        body = Lam(v.name, v.ty, body)
    return body


def spine(t: HhTerm) -> tuple[HhTerm, list[HhTerm]]:
    args: list[HhTerm] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def term_key(t: HhTerm):
    def go(e, env, depth):
        match e:
            case Const(name=n):
                return ("c", n)
            case LogicVar(name=n):
                return ("X", n)
            case Var(name=n):
                i = env.get(n)
                return ("v", n) if i is None else ("b", i)
            case App(fn=f, arg=a):
                return ("@", go(f, env, depth), go(a, env, depth))
            case Lam(binder=b, binder_ty=ty, body=m):
                inner = dict(env)
                inner[b] = depth
                return ("lam", ty, go(m, inner, depth + 1))
        raise TypeError(f"not a term: {e!r}")

    return go(t, {}, 0)


def type_of(t: HhTerm) -> HType:
    match t:
        case Const(ty=ty) | Var(ty=ty) | LogicVar(ty=ty):
            return ty
        case Lam(binder_ty=bt, body=m):
            return TArrow(bt, type_of(m))
        case App(fn=f, arg=a):
            fty = type_of(f)
            if not isinstance(fty, TArrow):
                raise HhError(f"application of non-function {f}")
            aty = type_of(a)
            if fty.dom != aty:
                raise HhError(f"argument type mismatch: {fty.dom} vs {aty} in {t}")
            return fty.cod
    raise TypeError(f"not a term: {t!r}")


def free_logic_vars(t: HhTerm) -> dict[str, LogicVar]:
    out: dict[str, LogicVar] = {}

    def go(e):
        match e:
            case LogicVar(name=n):
                out.setdefault(n, e)
            case App(fn=f, arg=a):
                go(f)
                go(a)
            case Lam(body=m):
                go(m)

    go(t)
    return out


def subst_term(t: HhTerm, smap: dict[str, HhTerm]) -> HhTerm:
    """Capture-avoiding substitution for lambda-bound variable names."""
    if not smap:
        return t
    rfv: set[str] = set()
    for v in smap.values():
        rfv |= _term_var_names(v)

    def go(e, smap):
        match e:
            case Var(name=n):
                return smap.get(n, e)
            case Const() | LogicVar():
                return e
            case App(fn=f, arg=a):
                return App(go(f, smap), go(a, smap))
            case Lam(binder=b, binder_ty=ty, body=m):
                inner = {k: v for k, v in smap.items() if k != b}
                if not inner:
                    return e
                if b in rfv:
                    nb = fresh(b)
                    m = go(m, {b: Var(nb, ty)})
                    b = nb
                return Lam(b, ty, go(m, inner))
        raise TypeError(f"not a term: {e!r}")

    return go(t, smap)


def _term_var_names(t: HhTerm) -> set[str]:
    out: set[str] = set()

    def go(e, bound):
        match e:
            case Var(name=n):
                if n not in bound:
                    out.add(n)
            case App(fn=f, arg=a):
                go(f, bound)
                go(a, bound)
            case Lam(binder=b, body=m):
                go(m, bound | {b})

    go(t, frozenset())
    return out


def normalize(t: HhTerm) -> HhTerm:
    """Beta normal form; terminates on well-typed terms."""

    def whnf(e):
        while isinstance(e, App):
            f = whnf(e.fn)
            if isinstance(f, Lam):
                e = subst_term(f.body, {f.binder: e.arg})
            else:
                return e if f is e.fn else App(f, e.arg)
        return e

    def go(e):
        e = whnf(e)
        match e:
            case App(fn=f, arg=a):
                return App(go(f), go(a))
            case Lam(binder=b, binder_ty=ty, body=m):
                return Lam(b, ty, go(m))
            case _:
                return e

    return go(t)


def eta_long(t: HhTerm) -> HhTerm:
    """Eta-long form of a beta-normal term."""
    ty = type_of(t)
    if isinstance(ty, TArrow):
        if isinstance(t, Lam):
            return Lam(t.binder, t.binder_ty, eta_long(t.body))
        b = fresh("w")
        return Lam(b, ty.dom, eta_long(App(t, Var(b, ty.dom))))
    head, args = spine(t)
    return app(head, *[eta_long(a) for a in args])


def hh_normalize(t: HhTerm) -> HhTerm:
    """Beta-normal, eta-long form."""
    return eta_long(normalize(t))


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True, eq=False)
class Goal:
    def __eq__(self, other):
        if not isinstance(other, (Goal, Clause)):
            return NotImplemented
        return formula_key(self) == formula_key(other)

    def __hash__(self):
        return hash(formula_key(self))

    def __str__(self):
        return pretty_goal(self)

    def __repr__(self):
        return pretty_goal(self)


@dataclass(frozen=True, eq=False)
class Top(Goal):
    pass


@dataclass(frozen=True, eq=False)
class AtomGoal(Goal):
    atom: HhTerm


@dataclass(frozen=True, eq=False)
class ImpliesGoal(Goal):
    premise: "Clause"
    body: Goal


@dataclass(frozen=True, eq=False)
class ForallGoal(Goal):
    binder: str
    binder_ty: HType
    body: Goal


@dataclass(frozen=True, eq=False)
class Clause:
    def __eq__(self, other):
        if not isinstance(other, (Goal, Clause)):
            return NotImplemented
        return formula_key(self) == formula_key(other)

    def __hash__(self):
        return hash(formula_key(self))

    def __str__(self):
        return pretty_clause(self)

    def __repr__(self):
        return pretty_clause(self)


@dataclass(frozen=True, eq=False)
class AtomClause(Clause):
    atom: HhTerm


@dataclass(frozen=True, eq=False)
class ImpliesClause(Clause):
    premise: Goal
    body: "Clause"


@dataclass(frozen=True, eq=False)
class ForallClause(Clause):
    binder: str
    binder_ty: HType
    body: "Clause"


def formula_key(f):
    def go(e, env, depth):
        match e:
            case Top():
                return ("top",)
            case AtomGoal(atom=a) | AtomClause(atom=a):
                tag = "ag" if isinstance(e, AtomGoal) else "ac"
                return (tag, _term_key_env(a, env, depth))
            case ImpliesGoal(premise=p, body=b) | ImpliesClause(premise=p, body=b):
                tag = "ig" if isinstance(e, ImpliesGoal) else "ic"
                return (tag, go(p, env, depth), go(b, env, depth))
            case ForallGoal(binder=x, binder_ty=ty, body=b) | ForallClause(binder=x, binder_ty=ty, body=b):
                tag = "fg" if isinstance(e, ForallGoal) else "fc"
                inner = dict(env)
                inner[x] = depth
                return (tag, ty, go(b, inner, depth + 1))
        raise TypeError(f"not a formula: {e!r}")

    return go(f, {}, 0)


def _term_key_env(t, env, depth):
    match t:
        case Const(name=n):
            return ("c", n)
        case LogicVar(name=n):
            return ("X", n)
        case Var(name=n):
            i = env.get(n)
            return ("v", n) if i is None else ("b", i)
        case App(fn=f, arg=a):
            return ("@", _term_key_env(f, env, depth), _term_key_env(a, env, depth))
        case Lam(binder=b, binder_ty=ty, body=m):
            inner = dict(env)
            inner[b] = depth
            return ("lam", ty, _term_key_env(m, inner, depth + 1))
    raise TypeError(f"not a term: {t!r}")


def formula_subst(f, smap: dict[str, HhTerm]):
    """Substitute terms for formula-bound (term-level) variable names."""
    if not smap:
        return f
    match f:
        case Top():
            return f
        case AtomGoal(atom=a):
            return AtomGoal(subst_term(a, smap))
        case AtomClause(atom=a):
            return AtomClause(subst_term(a, smap))
        case ImpliesGoal(premise=p, body=b):
            return ImpliesGoal(formula_subst(p, smap), formula_subst(b, smap))
        case ImpliesClause(premise=p, body=b):
            return ImpliesClause(formula_subst(p, smap), formula_subst(b, smap))
        case ForallGoal(binder=x, binder_ty=ty, body=b) | ForallClause(binder=x, binder_ty=ty, body=b):
            cls = type(f)
            inner = {k: v for k, v in smap.items() if k != x}
            rfv = set()
            for v in smap.values():
                rfv |= _term_var_names(v)
            if x in rfv:
                nx = fresh(x)
                b = formula_subst(b, {x: Var(nx, ty)})
                x = nx
            return cls(x, ty, formula_subst(b, inner)) if inner else cls(x, ty, b)
    raise TypeError(f"not a formula: {f!r}")


def goal_logic_vars(f) -> dict[str, LogicVar]:
    out: dict[str, LogicVar] = {}

    def go(e):
        match e:
            case Top():
                pass
            case AtomGoal(atom=a) | AtomClause(atom=a):
                for n, v in free_logic_vars(a).items():
                    out.setdefault(n, v)
            case ImpliesGoal(premise=p, body=b) | ImpliesClause(premise=p, body=b):
                go(p)
                go(b)
            case ForallGoal(body=b) | ForallClause(body=b):
                go(b)

    go(f)
    return out


# ---------------------------------------------------------------------------
# substitutions


class Substitution:
    """Triangular binding map for logic variables.

    Stored bindings may mention variables bound later; :meth:`apply`
    chases them, so observable application is idempotent.
    """

    __slots__ = ("_map",)

    def __init__(self, m: dict[str, HhTerm] | None = None):
        self._map = dict(m) if m else {}

    def get(self, name: str) -> HhTerm | None:
        return self._map.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._map

    def __len__(self):
        return len(self._map)

    def bind(self, name: str, term: HhTerm) -> "Substitution":
        if name in self._map:
            raise HhError(f"variable {name} is already bound")
        m = dict(self._map)
        m[name] = term
        return Substitution(m)

    def apply(self, t: HhTerm) -> HhTerm:
        """Fully resolve ``t`` and beta-normalize the result."""

        def go(e):
            match e:
                case LogicVar(name=n):
                    b = self._map.get(n)
                    return e if b is None else go(b)
                case App(fn=f, arg=a):
                    return App(go(f), go(a))
                case Lam(binder=b, binder_ty=ty, body=m):
                    return Lam(b, ty, go(m))
                case _:
                    return e

        return normalize(go(t))

    def items_resolved(self, restrict=None) -> dict[str, HhTerm]:
        """Idempotent view of the bindings."""
        names = self._map.keys() if restrict is None else restrict
        return {n: self.apply(self._map[n]) for n in names if n in self._map}

    def __repr__(self):
        inner = ", ".join(f"{n} -> {t}" for n, t in self._map.items())
        return f"{{{inner}}}"


# ---------------------------------------------------------------------------
# pattern unification

DisagreementPair = tuple[HhTerm, HhTerm]


@dataclass(frozen=True)
class UnifyResult:
    subst: Substitution
    pending: tuple[DisagreementPair, ...]


class _Fail(Exception):
    """Clash, occurs-check or dependency violation."""


class _Postpone(Exception):
    """Equation left the pattern fragment; park it."""


def unify(t1: HhTerm, t2: HhTerm, subst: Substitution | None = None,
          pending=(), avoid=frozenset()) -> UnifyResult | None:
    """Most general pattern unifier of ``t1`` and ``t2``.

    Equations outside the pattern fragment are returned in ``pending``
    rather than attempted. ``avoid`` names eigenconstants that no logic
    variable may depend on, on top of the level discipline. Returns
    ``None`` on clash/occurs/dependency failure.
    """
    st = _Unifier(subst or Substitution(), avoid)
    st.work.append((normalize(t1), normalize(t2)))
    st.work.extend(pending)
    try:
        st.run()
    except _Fail:
        return None
    return UnifyResult(st.subst, tuple(st.pending))


class _Unifier:
    def __init__(self, subst: Substitution, avoid):
        self.subst = subst
        self.avoid = frozenset(avoid)
        self.work: list[DisagreementPair] = []
        self.pending: list[DisagreementPair] = []
        self.progressed = False

    # -- driver

    def run(self):
        while True:
            while self.work:
                s, t = self.work.pop()
                self.step(s, t)
            if not (self.progressed and self.pending):
                return
            self.progressed = False
            self.work.extend(self.pending)
            self.pending.clear()

    def step(self, s: HhTerm, t: HhTerm):
        s = self.devar(s)
        t = self.devar(t)
        if isinstance(s, Lam) or isinstance(t, Lam):
            bty = s.binder_ty if isinstance(s, Lam) else t.binder_ty
            c = Const(fresh(s.binder if isinstance(s, Lam) else t.binder), bty, LOCAL_LEVEL)
            self.work.append((self.open_body(s, c), self.open_body(t, c)))
            return
        hs, sargs = spine(s)
        ht, targs = spine(t)
        sflex = isinstance(hs, LogicVar)
        tflex = isinstance(ht, LogicVar)
        if sflex and tflex:
            if hs.name == ht.name:
                self.flex_same(hs, sargs, targs, s, t)
            else:
                self.flex_flex(hs, sargs, ht, targs, s, t)
        elif sflex:
            self.flex_rigid(hs, sargs, t, s)
        elif tflex:
            self.flex_rigid(ht, targs, s, t)
        else:
            if not isinstance(hs, Const) or not isinstance(ht, Const):
                raise _Fail(f"unexpected head in {s} = {t}")
            if hs.name != ht.name or len(sargs) != len(targs):
                raise _Fail(f"clash: {s} = {t}")
            self.work.extend(zip(sargs, targs))

    @staticmethod
    def open_body(t: HhTerm, c: Const) -> HhTerm:
        if isinstance(t, Lam):
            return subst_term(t.body, {t.binder: c})
        return App(t, c)

    def devar(self, t: HhTerm) -> HhTerm:
        while True:
            h, args = spine(t)
            if isinstance(h, LogicVar):
                b = self.subst.get(h.name)
                if b is not None:
                    t = normalize(app(b, *args))
                    continue
            return t

    # -- pattern machinery

    def allowed(self, c: Const, v: LogicVar) -> bool:
        return c.level <= v.level and c.name not in self.avoid

    def pattern_args(self, v: LogicVar, args, local=frozenset()):
        """The argument constants if ``v args`` is a pattern, else None."""
        seen: set[str] = set()
        out = []
        for a in args:
            a = self.devar(a)
            if isinstance(a, Const):
                if self.allowed(a, v):
                    return None  # v could also mention it directly: ambiguous
            elif not (isinstance(a, Var) and a.name in local):
                return None
            if a.name in seen:
                return None
            seen.add(a.name)
            out.append(a)
        return out

    def bind(self, v: LogicVar, t: HhTerm):
        self.subst = self.subst.bind(v.name, normalize(t))
        self.progressed = True

    def park(self, s: HhTerm, t: HhTerm):
        self.pending.append((s, t))

    def fresh_var(self, stem: str, args, cod: HType, level: int) -> LogicVar:
        return LogicVar(fresh(stem), arrow(*[type_of(a) for a in args], cod), level)

    # -- flex against rigid

    def flex_rigid(self, v: LogicVar, vargs, t: HhTerm, vterm: HhTerm):
        ph = self.pattern_args(v, vargs)
        if ph is None:
            self.park(vterm, t)
            return
        binders = {c.name: Var(fresh(stem_of(c.name)), c.ty) for c in ph}
        try:
            body = self.abstract(v, ph, binders, t, frozenset())
        except _Postpone:
            self.park(vterm, t)
            return
        self.bind(v, lams([binders[c.name] for c in ph], body))

    def abstract(self, v, ph, binders, t, local):
        """Rewrite ``t`` into the body of ``v``'s binding.

        Pattern argument constants become the binding's own binders;
        constants the variable may not depend on fail (rigid) or prune
        the inner flexible variable that carries them.
        """
        t = self.devar(t)
        if isinstance(t, Lam):
            return Lam(t.binder, t.binder_ty, self.abstract(v, ph, binders, t.body, local | {t.binder}))
        head, args = spine(t)
        match head:
            case Var(name=n):
                if n not in local:
                    raise _Fail(f"loose bound variable {n}")
                new_head = head
            case Const(name=n):
                if n in binders:
                    new_head = binders[n]
                elif self.allowed(head, v):
                    new_head = head
                else:
                    raise _Fail(f"{v.name} may not depend on {n}")
            case LogicVar(name=n):
                if n == v.name:
                    raise _Fail(f"occurs check: {v.name}")
                gph = self.pattern_args(head, args, local)
                if gph is None:
                    raise _Postpone
                return self.prune(v, ph, binders, head, gph, local)
            case _:
                raise _Fail(f"cannot abstract over {t}")
        return app(new_head, *[self.abstract(v, ph, binders, a, local) for a in args])

    def prune(self, v, ph, binders, g, gargs, local):
        """Replace inner flexible ``g gargs`` so the result fits inside
        ``v``'s binding: arguments v cannot see are dropped, constants g
        may see but v may not are re-applied (raising)."""
        in_ph = {c.name for c in ph}
        raised = [c for c in ph if self.allowed(c, g) and c.name not in {a.name for a in gargs}]
        kept = []
        for a in gargs:
            if isinstance(a, Var):
                if a.name in local:
                    kept.append(a)
            elif self.allowed(a, v) or a.name in in_ph:
                kept.append(a)
        g_args_new = raised + kept
        g2 = self.fresh_var(stem_of(g.name), g_args_new,
                            drop_args(g.ty, len(gargs)), min(v.level, g.level))
        # binding for g: abstract its original arguments, feed g2 the raised
        # constants plus the surviving arguments
        g_binders = {a.name: Var(fresh(stem_of(a.name)), type_of(a)) for a in gargs}
        g_body = app(g2, *raised, *[g_binders[a.name] for a in kept])
        self.bind(g, lams([g_binders[a.name] for a in gargs], g_body))
        # occurrence inside v's binding: map everything through v's binders
        def into_v(a):
            if isinstance(a, Const) and a.name in binders:
                return binders[a.name]
            return a
        return app(g2, *[into_v(a) for a in g_args_new])

    # -- flex against flex

    def flex_same(self, v: LogicVar, args1, args2, s, t):
        p1 = self.pattern_args(v, args1)
        p2 = self.pattern_args(v, args2)
        if p1 is None or p2 is None:
            if [self.devar(a) for a in args1] == [self.devar(a) for a in args2]:
                return
            self.park(s, t)
            return
        if [c.name for c in p1] == [c.name for c in p2]:
            return
        binders = [Var(fresh(stem_of(c.name)), c.ty) for c in p1]
        kept = [b for b, c1, c2 in zip(binders, p1, p2) if c1.name == c2.name]
        v2 = self.fresh_var(stem_of(v.name), kept, target_type(v.ty), v.level)
        self.bind(v, lams(binders, app(v2, *kept)))

    def flex_flex(self, v: LogicVar, vargs, w: LogicVar, wargs, s, t):
        pv = self.pattern_args(v, vargs)
        pw = self.pattern_args(w, wargs)
        if pv is None or pw is None:
            self.park(s, t)
            return
        vnames = {c.name for c in pv}
        wnames = {c.name for c in pw}
        shared: list[Const] = []
        for c in pv:
            if c.name in wnames or self.allowed(c, w):
                shared.append(c)
        for c in pw:
            if c.name not in vnames and self.allowed(c, v):
                shared.append(c)
        h = self.fresh_var("H", shared, target_type(v.ty), min(v.level, w.level))

        def binding(pattern):
            bmap = {c.name: Var(fresh(stem_of(c.name)), c.ty) for c in pattern}
            hargs = [bmap.get(c.name, c) for c in shared]
            return lams([bmap[c.name] for c in pattern], app(h, *hargs))

        self.bind(v, binding(pv))
        self.bind(w, binding(pw))


# ---------------------------------------------------------------------------
# pretty printing


def pretty_term(t: HhTerm) -> str:
    disp = _display_map(_collect_term_names(t, [], set()))
    return _pp_term(t, disp, atom=False)


def _collect_term_names(t, order, seen):
    match t:
        case Const(name=n) | LogicVar(name=n) | Var(name=n):
            kind = "const" if isinstance(t, Const) else ("logic" if isinstance(t, LogicVar) else "var")
            if n not in seen:
                seen.add(n)
                order.append((n, kind))
        case App(fn=f, arg=a):
            _collect_term_names(f, order, seen)
            _collect_term_names(a, order, seen)
        case Lam(binder=b, body=m):
            if b not in seen:
                seen.add(b)
                order.append((b, "var"))
            _collect_term_names(m, order, seen)
    return order


def _display_map(order) -> dict[str, str]:
    # Constants display verbatim; bound variables lowercase their stem and
    # logic variables uppercase theirs, both renamed apart from everything
    # already taken.
    out: dict[str, str] = {}
    used = {n for n, kind in order if kind == "const"}
    for n, kind in order:
        if kind == "const":
            out[n] = n
            continue
        base = stem_of(n)
        if base == "_":
            base = "x"
        base = (base[0].upper() if kind == "logic" else base[0].lower()) + base[1:]
        cand = base
        i = 0
        while cand in used:
            i += 1
            cand = f"{base}{i}"
        out[n] = cand
        used.add(cand)
    return out


def _pp_term(t, disp, atom: bool) -> str:
    match t:
        case Const(name=n) | Var(name=n) | LogicVar(name=n):
            return disp.get(n, stem_of(n))
        case Lam():
            binders = []
            while isinstance(t, Lam):
                binders.append(disp.get(t.binder, stem_of(t.binder)))
                t = t.body
            s = "\\ ".join(binders) + "\\ " + _pp_term(t, disp, atom=False)
            return f"({s})" if atom else s
        case App():
            head, args = spine(t)
            parts = [_pp_term(head, disp, atom=True)]
            parts += [_pp_term(a, disp, atom=True) for a in args]
            s = " ".join(parts)
            return f"({s})" if atom else s
    raise TypeError(f"not a term: {t!r}")


def _formula_binder_names(f, order, seen):
    match f:
        case Top():
            pass
        case AtomGoal(atom=a) | AtomClause(atom=a):
            _collect_term_names(a, order, seen)
        case ImpliesGoal(premise=p, body=b) | ImpliesClause(premise=p, body=b):
            _formula_binder_names(p, order, seen)
            _formula_binder_names(b, order, seen)
        case ForallGoal(binder=x, body=b) | ForallClause(binder=x, body=b):
            if x not in seen:
                seen.add(x)
                order.append((x, "var"))
            _formula_binder_names(b, order, seen)
    return order


def pretty_goal(g: Goal) -> str:
    disp = _display_map(_formula_binder_names(g, [], set()))
    return _pp_formula(g, disp)


def pretty_clause(c: Clause) -> str:
    disp = _display_map(_formula_binder_names(c, [], set()))
    return _pp_formula(c, disp)


def _pp_formula(f, disp) -> str:
    match f:
        case Top():
            return "true"
        case AtomGoal(atom=a) | AtomClause(atom=a):
            return _pp_term(a, disp, atom=False)
        case ImpliesGoal(premise=p, body=b) | ImpliesClause(premise=p, body=b):
            return f"({_pp_formula(p, disp)} => {_pp_formula(b, disp)})"
        case ForallGoal(binder=x, body=b) | ForallClause(binder=x, body=b):
            return f"pi {disp.get(x, stem_of(x))}\\ {_pp_formula(b, disp)}"
    raise TypeError(f"not a formula: {f!r}")
