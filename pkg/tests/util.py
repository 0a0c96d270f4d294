"""Shared fixtures and brute-force oracles for the test suite.

The enumerators here are deliberately independent of the translator and
the search engine: they build candidate terms from declared classifiers
by first-order matching and leave judging to the typechecker, so they
can serve as ground truth for adequacy and completeness checks.

Term size = number of constant/variable/meta-variable occurrences plus
one per abstraction.
"""

from __future__ import annotations

from lf2lp import lf
from lf2lp.frontend import elaborate_signature, parse_signature
from lf2lp.lf import App, Const, Lam, LFExpr, MetaVar, Pi, Var, app, beta_normalize, spine, substitute

APPEND_SIG = """
nat : type.
z : nat.
s : nat -> nat.

list : type.
nil : list.
cons : nat -> list -> list.

append : list -> list -> list -> type.
app-nil : append nil L L.
app-cons : append L1 L2 L3 -> append (cons X L1) L2 (cons X L3).
"""

INVERSION_GAP_SIG = """
i : type.
j : type.
a : i -> j.
c : i.
"""


def append_signature() -> lf.Signature:
    return elaborate_signature(parse_signature(APPEND_SIG))


def nat_term(n: int) -> LFExpr:
    t: LFExpr = Const("z")
    for _ in range(n):
        t = App(Const("s"), t)
    return t


def list_term(xs) -> LFExpr:
    t: LFExpr = Const("nil")
    for x in reversed(xs):
        t = app(Const("cons"), nat_term(x), t)
    return t


def append_type(l1, l2, l3) -> LFExpr:
    return app(Const("append"), list_term(l1), list_term(l2), list_term(l3))


def term_size(e: LFExpr) -> int:
    match e:
        case App(fn=f, arg=a):
            return term_size(f) + term_size(a)
        case Lam(body=m) | Pi(body=m):
            return 1 + term_size(m)
        case _:
            return 1


def raw_trees(arities: dict[str, int], max_size: int) -> list[LFExpr]:
    """All fully applied application trees over the given constants with
    size (occurrence count) up to ``max_size``; no typing involved."""
    by_size: dict[int, list[LFExpr]] = {}

    def of(n: int) -> list[LFExpr]:
        if n in by_size:
            return by_size[n]
        out: list[LFExpr] = []
        for name, k in arities.items():
            if k == 0:
                if n == 1:
                    out.append(Const(name))
                continue
            for split in _compositions(n - 1, k):
                for args in _products([of(s) for s in split]):
                    out.append(app(Const(name), *args))
        by_size[n] = out
        return out

    result = []
    for n in range(1, max_size + 1):
        result.extend(of(n))
    return result


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _products(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _products(pools[1:]):
            yield (head,) + tail


def _match(pattern: LFExpr, ground: LFExpr, pat_vars: frozenset[str], bind: dict):
    """First-order matching of a classifier target against a ground base
    type; pattern variables are the classifier's own binders."""
    match pattern:
        case Var(name=n) if n in pat_vars:
            if n in bind:
                return bind if bind[n] == ground else None
            bind = dict(bind)
            bind[n] = ground
            return bind
        case Const(name=n):
            return bind if isinstance(ground, Const) and ground.name == n else None
        case App(fn=pf, arg=pa):
            if not isinstance(ground, App):
                return None
            bind = _match(pf, ground.fn, pat_vars, bind)
            if bind is None:
                return None
            return _match(pa, ground.arg, pat_vars, bind)
        case _:
            return None


def inhabitants(sig: lf.Signature, a: LFExpr, size: int, extra_heads=()) -> list[LFExpr]:
    """All canonical objects of the ground base type ``a`` with exactly
    ``size`` occurrences. ``extra_heads`` adds (name, type, node) heads,
    e.g. context variables or meta-variables."""
    key = (lf.alpha_key(a), size)
    cache = _inhab_cache.setdefault((id(sig), extra_heads), {})
    if key in cache:
        return cache[key]
    out: list[LFExpr] = []
    heads = [(d.name, d.classifier, Const(d.name)) for d in sig if not d.is_type_family]
    heads += [(n, t, node) for n, t, node in extra_heads]
    for _, cls, node in heads:
        binders = []
        target = cls
        while isinstance(target, Pi):
            binders.append((target.binder, target.binder_type))
            target = target.body
        bind = _match(target, a, frozenset(n for n, _ in binders), {})
        if bind is None:
            continue
        fixed_size = 1 + sum(term_size(bind[n]) for n, _ in binders if n in bind)
        free = [(n, t) for n, t in binders if n not in bind]
        for args_map in _fill_free(sig, free, bind, size - fixed_size, extra_heads):
            args = [args_map[n] for n, _ in binders]
            out.append(app(node, *args))
    cache[key] = out
    return out


_inhab_cache: dict = {}


def _fill_free(sig, free, bind, budget, extra_heads):
    if not free:
        if budget == 0:
            yield dict(bind)
        return
    (name, ty), rest = free[0], free[1:]
    lo, hi = 1, budget - len(rest)
    for sz in range(lo, hi + 1):
        ty_inst = beta_normalize(substitute(ty, bind))
        for cand in inhabitants(sig, ty_inst, sz, extra_heads):
            b2 = dict(bind)
            b2[name] = cand
            yield from _fill_free(sig, rest, b2, budget - sz, extra_heads)


def inhabitants_upto(sig, a, max_size, extra_heads=()) -> list[LFExpr]:
    out = []
    for n in range(1, max_size + 1):
        out.extend(inhabitants(sig, a, n, extra_heads))
    return out


def splits(xs) -> list[tuple[list, list]]:
    """Every way of writing ``xs`` as a concatenation of two lists."""
    return [(list(xs[:i]), list(xs[i:])) for i in range(len(xs) + 1)]
