"""Compilation of dependently typed signatures and queries into
hereditary Harrop programs.

Two translations are supported. The plain one flattens every object type
to the single simple type ``lf-obj`` and recovers the lost dependency
information with a binary ``hastype`` predicate. The optimized one gives
each type family ``a`` its own simple type ``a-type`` and predicate
``a``, and drops inhabitation premises for binders whose strict
occurrence in the rest of the type already forces any instantiation to
be well typed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import hh
from . import lf
from .lf import App, Const, Lam, LFExpr, MetaVar, Pi, Signature, Type, Var
from .frontend import Query
from .names import fresh, stem_of


class Mode(Enum):
    NAIVE = "naive"
    OPTIMIZED = "optimized"


HASTYPE = "hastype"


# ---------------------------------------------------------------------------
# type flattening and term encoding


def flatten(p: LFExpr, mode: Mode) -> hh.HType:
    """Simple type of the encodings of objects classified by ``p``
    (or of type families classified by the kind ``p``)."""
    match p:
        case Type():
            return hh.LF_TYPE
        case Pi(binder_type=t, body=b):
            return hh.TArrow(flatten(t, mode), flatten(b, mode))
        case _:
            if mode is Mode.NAIVE:
                return hh.LF_OBJ
            head, _ = lf.spine(p)
            if not isinstance(head, Const):
                raise lf.CategoryError(f"not a base type: {p}")
            return type_atom(head.name)


def type_atom(family: str) -> hh.TAtom:
    return hh.TAtom(f"{family}-type")


def predicate_type(kind: LFExpr, family: str, mode: Mode) -> hh.HType:
    """o-targeted type of the family's predicate in optimized mode."""
    doms = []
    k = kind
    while isinstance(k, Pi):
        doms.append(flatten(k.binder_type, mode))
        k = k.body
    return hh.arrow(*doms, type_atom(family), hh.O)


def encode_term(m: LFExpr, mode: Mode, sig: Signature, meta=None, bound=None) -> hh.HhTerm:
    """Structure-preserving encoding of an object (or of a base type used
    as a term argument); names are kept, binder annotations flattened."""
    meta = meta or {}
    bound = bound or {}
    match m:
        case Const(name=n):
            return hh.Const(n, flatten(sig.classifier_of(n), mode))
        case Var(name=n):
            return hh.Var(n, bound[n])
        case MetaVar(name=n):
            return hh.LogicVar(n, flatten(meta[n], mode), level=0)
        case App(fn=f, arg=a):
            return hh.App(encode_term(f, mode, sig, meta, bound),
                          encode_term(a, mode, sig, meta, bound))
        case Lam(binder=b, binder_type=t, body=body):
            ft = flatten(t, mode)
            return hh.Lam(b, ft, encode_term(body, mode, sig, meta, {**bound, b: ft}))
    raise lf.CategoryError(f"cannot encode {m}")


# ---------------------------------------------------------------------------
# strictness


def strict_in_type(gamma, x: str, a: LFExpr) -> bool:
    """Does ``x`` occur strictly in the type ``a``?

    ``gamma`` lists the (name, type) pairs bound before ``x`` plus those
    collected while descending; strictness may also flow through the
    type of another strictly occurring variable in ``gamma``.
    """
    return _strict_type(list(gamma), x, a, frozenset((x,)))


def _strict_type(gamma, x, a, banned) -> bool:
    match a:
        case Pi(binder=b, binder_type=t, body=m):
            return _strict_type(gamma + [(b, t)], x, m, banned)
        case _:
            _, args = lf.spine(a)
            pi_vars = frozenset(n for n, _ in gamma)
            if any(strict_in_term(pi_vars, frozenset(), x, arg) for arg in args):
                return True
            for i, (y, b_ty) in enumerate(gamma):
                if y in banned:
                    continue
                if _strict_type(gamma[:i], x, b_ty, banned | {y}) and \
                        _strict_type(gamma, y, a, banned | {y}):
                    return True
            return False


def strict_in_term(pi_vars, lam_vars, x: str, m: LFExpr) -> bool:
    """Does ``x`` occur strictly in the object ``m``?

    A strict occurrence sits on a rigid path and is applied to nothing
    but distinct lambda-bound variables, so whatever is substituted for
    ``x`` shows up uninstantiated in any instance of ``m``.
    """
    match m:
        case Lam(binder=b, body=body):
            if b == x:
                return False
            return strict_in_term(pi_vars, lam_vars | {b}, x, body)
        case _:
            head, args = lf.spine(m)
            match head:
                case Var(name=n) if n == x:
                    seen = set()
                    for a in args:
                        if not (isinstance(a, Var) and a.name in lam_vars and a.name not in seen):
                            return False
                        seen.add(a.name)
                    return True
                case Var(name=n):
                    rigid = n in lam_vars or n not in pi_vars
                case Const():
                    rigid = True
                case _:
                    rigid = False  # meta-variable headed: flexible
            if not rigid:
                return False
            return any(strict_in_term(pi_vars, lam_vars, x, a) for a in args)


# ---------------------------------------------------------------------------
# formula generation


def encode_type_naive(a: LFExpr, m: hh.HhTerm, sig: Signature, meta=None,
                      as_goal: bool = False):
    """Inhabitation formula for ``m`` at type ``a`` via ``hastype``."""
    return _formula(a, m, mode=Mode.NAIVE, positive=True, gamma=(), sig=sig,
                    meta=meta or {}, bound={}, as_goal=as_goal)


def _formula(a, m, *, mode, positive, gamma, sig, meta, bound, as_goal,
             keep_redundant=False):
    match a:
        case Pi(binder=b, binder_type=dom, body=body):
            if b in bound:  # shadowed binder: rename apart
                nb = lf.fresh(b)
                body = lf.substitute(body, {b: Var(nb)})
                b = nb
            ft = flatten(dom, mode)
            xvar = hh.Var(_binder_name(b, dom), ft)
            inner_bound = {**bound, b: ft}
            inner = _formula(body, hh.App(m, xvar), mode=mode, positive=positive,
                             gamma=gamma + ((b, dom),), sig=sig, meta=meta,
                             bound=inner_bound, as_goal=as_goal,
                             keep_redundant=keep_redundant)
            skip = (mode is Mode.OPTIMIZED and positive and not keep_redundant
                    and strict_in_type(gamma, b, body))
            if not skip:
                prem = _formula(dom, xvar, mode=mode, positive=not positive,
                                gamma=(), sig=sig, meta=meta, bound=inner_bound,
                                as_goal=not as_goal, keep_redundant=keep_redundant)
                inner = (hh.ImpliesGoal(prem, inner) if as_goal
                         else hh.ImpliesClause(prem, inner))
            wrap = hh.ForallGoal if as_goal else hh.ForallClause
            return wrap(xvar.name, ft, inner)
        case _:
            head, args = lf.spine(a)
            if not isinstance(head, Const):
                raise lf.CategoryError(f"not a base type: {a}")
            enc_args = [encode_term(t, mode, sig, meta, bound) for t in args]
            if mode is Mode.NAIVE:
                pred = hh.Const(HASTYPE, hh.arrow(hh.LF_OBJ, hh.LF_TYPE, hh.O))
                ty_term = hh.app(hh.Const(head.name, flatten(sig.classifier_of(head.name), mode)),
                                 *enc_args)
                atom = hh.app(pred, m, ty_term)
            else:
                pred = hh.Const(head.name,
                                predicate_type(sig.classifier_of(head.name), head.name, mode))
                atom = hh.app(pred, *enc_args, m)
            return hh.AtomGoal(atom) if as_goal else hh.AtomClause(atom)


def _binder_name(b: str, dom: LFExpr) -> str:
    """Anonymous binders take the initial of their type's head family."""
    if stem_of(b) != "_":
        return b
    d = dom
    while isinstance(d, Pi):
        d = d.body
    head, _ = lf.spine(d)
    stem = head.name[0] if isinstance(head, Const) else "x"
    return fresh(stem)


# ---------------------------------------------------------------------------
# whole-signature and query translation


@dataclass(frozen=True)
class TranslatedProgram:
    mode: Mode
    atoms: tuple[str, ...]
    constants: tuple[tuple[str, hh.HType], ...]
    clauses: tuple[hh.Clause, ...]


@dataclass(frozen=True)
class TranslatedQuery:
    goal: hh.Goal
    var_map: dict[str, hh.LogicVar]
    proof_var: hh.LogicVar


def translate_signature(sig: Signature, mode: Mode, *,
                        keep_redundant_premises: bool = False) -> TranslatedProgram:
    """One clause per object constant, in declaration order; type families
    contribute target-language types (and, in optimized mode, their
    predicates)."""
    atoms: list[str] = []
    consts: list[tuple[str, hh.HType]] = []
    clauses: list[hh.Clause] = []
    if mode is Mode.NAIVE:
        atoms += [hh.LF_OBJ.name, hh.LF_TYPE.name]
        consts.append((HASTYPE, hh.arrow(hh.LF_OBJ, hh.LF_TYPE, hh.O)))
    for d in sig:
        if d.is_type_family:
            if mode is Mode.OPTIMIZED:
                atoms.append(type_atom(d.name).name)
                consts.append((d.name, predicate_type(d.classifier, d.name, mode)))
            else:
                consts.append((d.name, flatten(d.classifier, mode)))
        else:
            consts.append((d.name, flatten(d.classifier, mode)))
            head = hh.Const(d.name, flatten(d.classifier, mode))
            clauses.append(_formula(d.classifier, head, mode=mode, positive=True,
                                    gamma=(), sig=sig, meta={}, bound={},
                                    as_goal=False,
                                    keep_redundant=keep_redundant_premises))
    return TranslatedProgram(mode, tuple(atoms), tuple(consts), tuple(clauses))


def translate_query(query: Query, mode: Mode, sig: Signature) -> TranslatedQuery:
    """Goal asking for an inhabitant of the query type: meta-variables
    become logic variables and a fresh one stands for the proof term."""
    var_map = {name: hh.LogicVar(name, flatten(ty, mode), level=0)
               for name, ty in query.meta_types.items()}
    proof = hh.LogicVar(fresh("M"), flatten(query.query_type, mode), level=0)
    goal = _formula(query.query_type, proof, mode=mode, positive=True, gamma=(),
                    sig=sig, meta=query.meta_types, bound={}, as_goal=True)
    return TranslatedQuery(goal, var_map, proof)


# ---------------------------------------------------------------------------
# textual emission


def emit_program(prog: TranslatedProgram) -> str:
    """Concrete-syntax rendering of the generated program.

    Grammar: ``kind a type.`` declares an atom, ``type c T.`` a constant,
    clauses are written with ``pi x\\`` and ``=>`` (implications always
    parenthesized), application by juxtaposition.
    """
    lines = [f"kind {a} type." for a in prog.atoms]
    lines += [f"type {n} {hh.pretty_type(t)}." for n, t in prog.constants]
    if prog.clauses:
        lines.append("")
        lines += [f"{hh.pretty_clause(c)}." for c in prog.clauses]
    return "\n".join(lines) + "\n"


def emit_module(prog: TranslatedProgram, name: str) -> tuple[str, str]:
    """Best-effort ``.sig``/``.mod`` pair for a real lambda Prolog system."""
    sig_lines = [f"sig {name}."]
    sig_lines += [f"kind {a} type." for a in prog.atoms]
    sig_lines += [f"type {n} {hh.pretty_type(t)}." for n, t in prog.constants]
    mod_lines = [f"module {name}."]
    mod_lines += [f"{hh.pretty_clause(c)}." for c in prog.clauses]
    return "\n".join(sig_lines) + "\n", "\n".join(mod_lines) + "\n"
