"""Proof search for hereditary Harrop programs.

Depth-first with chronological backtracking: goals are simplified by
their logical structure (truth, implication pushes an assumption,
universal mints an eigenconstant), atomic goals backchain on clauses in
program order with dynamically assumed clauses tried first, most recent
first. Solutions stream lazily; a branch that exceeds the backchain
depth bound is pruned and counted, not fatal.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from typing import Iterator

from . import hh
from .names import fresh, stem_of

# Search nests one generator per backchain step; give deep derivations room.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 1 << 17))


@dataclass
class SearchStats:
    depth_exceeded: int = 0
    backchains: int = 0


@dataclass(frozen=True)
class Answer:
    bindings: dict[str, hh.HhTerm]  # free goal variables only, fully resolved
    disagreements: tuple[hh.DisagreementPair, ...]
    subst: hh.Substitution


@dataclass(frozen=True)
class ProofState:
    program: tuple[hh.Clause, ...]
    dynamic: tuple[hh.Clause, ...] = ()
    subst: hh.Substitution = field(default_factory=hh.Substitution)
    pending: tuple[hh.DisagreementPair, ...] = ()
    level: int = 0

    def assume(self, clause: hh.Clause) -> "ProofState":
        """Push a clause; it is the first one tried for matching heads."""
        return replace(self, dynamic=(clause,) + self.dynamic)

    def fresh_eigen(self, ty: hh.HType, stem: str = "c") -> tuple["ProofState", hh.Const]:
        c = hh.Const(fresh(stem), ty, level=self.level + 1)
        return replace(self, level=self.level + 1), c

    def clauses(self):
        return self.dynamic + self.program


def solve(program, goal: hh.Goal, *, depth: int = 512, max_solutions: int | None = None,
          stats: SearchStats | None = None, state: ProofState | None = None) -> Iterator[Answer]:
    """Enumerate answers for ``goal`` against ``program``.

    Yields one :class:`Answer` per derivation found, in search order;
    the substitution is restricted to the goal's own logic variables and
    residual disagreement pairs are reported with it.
    """
    stats = stats if stats is not None else SearchStats()
    st = state or ProofState(tuple(program))
    qvars = hh.goal_logic_vars(goal)
    found = 0
    for end in _prove(st, goal, depth, stats):
        bindings = {}
        for name, v in qvars.items():
            t = end.subst.apply(v)
            if isinstance(t, hh.LogicVar) and t.name == name:
                continue  # still free
            bindings[name] = t
        dis = tuple((end.subst.apply(a), end.subst.apply(b)) for a, b in end.pending)
        yield Answer(bindings, dis, end.subst)
        found += 1
        if max_solutions is not None and found >= max_solutions:
            return


def _prove(state: ProofState, goal: hh.Goal, depth: int, stats: SearchStats) -> Iterator[ProofState]:
    match goal:
        case hh.Top():
            yield state
        case hh.ImpliesGoal(premise=d, body=g):
            yield from _prove(state.assume(d), g, depth, stats)
        case hh.ForallGoal(binder=b, binder_ty=ty, body=g):
            st, c = state.fresh_eigen(ty, stem_of(b))
            yield from _prove(st, hh.formula_subst(g, {b: c}), depth, stats)
        case hh.AtomGoal(atom=atom):
            if depth <= 0:
                stats.depth_exceeded += 1
                return
            for clause in state.clauses():
                head, premises = _rename_clause(clause, state.level)
                r = hh.unify(atom, head, subst=state.subst, pending=state.pending)
                if r is None:
                    continue
                stats.backchains += 1
                st = replace(state, subst=r.subst, pending=r.pending)
                yield from _prove_all(st, premises, depth - 1, stats)
        case _:
            raise TypeError(f"not a goal: {goal!r}")


def _prove_all(state: ProofState, goals, depth: int, stats: SearchStats) -> Iterator[ProofState]:
    if not goals:
        yield state
        return
    for st in _prove(state, goals[0], depth, stats):
        yield from _prove_all(st, goals[1:], depth, stats)


def _rename_clause(clause: hh.Clause, level: int) -> tuple[hh.HhTerm, list[hh.Goal]]:
    """Head atom and body goals with the clause's binders replaced by
    fresh logic variables at the current level."""

    def peel(c, smap):
        match c:
            case hh.ForallClause(binder=b, binder_ty=ty, body=body):
                v = hh.LogicVar(fresh(stem_of(b)), ty, level)
                return peel(body, {**smap, b: v})
            case hh.ImpliesClause(premise=g, body=body):
                head, prems = peel(body, smap)
                return head, [hh.formula_subst(g, smap)] + prems
            case hh.AtomClause(atom=a):
                return hh.subst_term(a, smap), []
        raise TypeError(f"not a clause: {c!r}")

    return peel(clause, {})
