"""Rewriting under full, innermost, and rightmost-innermost strategies.

Step computation is memoized per (system, term) over interned terms, so
repeated reachability and height searches touch each distinct term once.
All searches are totalized by fuel: they finish, run out of fuel, or detect
a loop and report it with a concrete witness.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable

from .terms import (
    Fun,
    Position,
    Term,
    Trs,
    Var,
    match,
    substitute,
    term_sort_key,
)

# Deep but narrow terms (long unary chains) drive recursive folds close to
# the default interpreter limit; give them headroom once, at import.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class StrategyKind(Enum):
    FULL = "full"
    INNERMOST = "innermost"
    RIGHTMOST_INNERMOST = "rightmost-innermost"


@dataclass(eq=True)
class RewriteStep:
    """One rewrite step: rule rule_index applied with matcher at position."""

    position: Position
    rule_index: int
    matcher: dict[str, Term]
    result: Term


@dataclass(eq=True)
class LoopWitness:
    """A nonempty step sequence leading from start back to start."""

    start: Term
    trace: tuple[RewriteStep, ...]


@dataclass(eq=True)
class Finished:
    value: object


@dataclass(eq=True)
class FuelExhausted:
    pass


@dataclass(eq=True)
class LoopDetected:
    witness: LoopWitness


#: Every bounded search returns one of these three.
FuelOutcome = Finished | FuelExhausted | LoopDetected


class FuelExhaustedError(RuntimeError):
    """Raised when a closure computation exceeds its fuel."""


@lru_cache(maxsize=None)
def _root_steps(trs: Trs, t: Term) -> tuple[RewriteStep, ...]:
    out = []
    for i, rule in enumerate(trs.rules):
        sigma = match(rule.lhs, t)
        if sigma is not None:
            out.append(RewriteStep((), i, sigma, substitute(rule.rhs, sigma)))
    return tuple(out)


def _wrap(t: Fun, i: int, steps: Iterable[RewriteStep]) -> list[RewriteStep]:
    """Lift steps in argument i+1 of t to steps in t."""
    before, after = t.args[:i], t.args[i + 1 :]
    return [
        RewriteStep(
            (i + 1,) + st.position,
            st.rule_index,
            st.matcher,
            Fun(t.symbol, before + (st.result,) + after),
        )
        for st in steps
    ]


@lru_cache(maxsize=None)
def _full_steps(trs: Trs, t: Term) -> tuple[RewriteStep, ...]:
    """All steps from t, in leftmost-outermost position order then rule order."""
    if isinstance(t, Var):
        return ()
    out = list(_root_steps(trs, t))
    for i in range(len(t.args)):
        out.extend(_wrap(t, i, _full_steps(trs, t.args[i])))
    return tuple(out)


@lru_cache(maxsize=None)
def _innermost_steps(trs: Trs, t: Term) -> tuple[RewriteStep, ...]:
    """Steps contracting innermost redexes (all proper subterms normal)."""
    if isinstance(t, Var):
        return ()
    inner: list[RewriteStep] = []
    for i in range(len(t.args)):
        inner.extend(_wrap(t, i, _innermost_steps(trs, t.args[i])))
    if inner:
        return tuple(inner)
    return _root_steps(trs, t)


def clear_caches() -> None:
    """Drop the per-(system, term) step caches."""
    _root_steps.cache_clear()
    _full_steps.cache_clear()
    _innermost_steps.cache_clear()


def is_normal_form_fast(trs: Trs, t: Term) -> bool:
    """Cached normal-form test; agrees with terms.is_normal_form."""
    return not _innermost_steps(trs, t)


def redexes(trs: Trs, t: Term, kind: StrategyKind) -> list[RewriteStep]:
    """The steps available from t under the strategy, sorted by position
    (leftmost-outermost order) and rule index."""
    if kind is StrategyKind.FULL:
        return list(_full_steps(trs, t))
    inner = _innermost_steps(trs, t)
    if kind is StrategyKind.INNERMOST or not inner:
        return list(inner)
    rightmost = max(st.position for st in inner)
    return [st for st in inner if st.position == rightmost]


def rightmost_innermost_position(trs: Trs, t: Term) -> Position | None:
    """The unique innermost redex position with no redex to its right."""
    inner = _innermost_steps(trs, t)
    if not inner:
        return None
    return max(st.position for st in inner)


def successors(trs: Trs, t: Term, kind: StrategyKind) -> list[Term]:
    """Distinct one-step results from t, in step order."""
    return list(dict.fromkeys(st.result for st in redexes(trs, t, kind)))


def _closure(
    trs: Trs, start: Iterable[Term], visited: set[Term], fuel: int
) -> set[Term]:
    """All terms reachable from start by full steps; visited is shared fuel
    accounting across calls."""
    out: set[Term] = set()
    frontier = list(start)
    while frontier:
        t = frontier.pop()
        if t in out:
            continue
        out.add(t)
        if t not in visited:
            visited.add(t)
            if len(visited) > fuel:
                raise FuelExhaustedError(f"closure exceeded {fuel} distinct terms")
        for st in _full_steps(trs, t):
            if st.result not in out:
                frontier.append(st.result)
    return out


def reachable(trs: Trs, t: Term, fuel: int) -> set[Term]:
    """All terms reachable from t by full rewriting, t included."""
    return _closure(trs, [t], set(), fuel)


def relative_successors(main: Trs, modulo: Trs, t: Term, fuel: int) -> list[Term]:
    """All u with t ->modulo* . ->main . ->modulo* u, deterministically ordered.

    Fuel bounds the distinct terms visited in the modulo closures; exceeding
    it raises FuelExhaustedError.  An empty main system yields no successors
    even though the relative relation is then empty by definition rather than
    by search.
    """
    visited: set[Term] = set()
    pre = _closure(modulo, [t], visited, fuel)
    mid = {st.result for a in pre for st in _full_steps(main, a)}
    post = _closure(modulo, mid, visited, fuel)
    return sorted(post, key=term_sort_key)


def normalize(trs: Trs, t: Term, kind: StrategyKind, fuel: int) -> FuelOutcome:
    """Repeatedly apply the first available step until a normal form.

    Finished(normal form); LoopDetected as soon as a term repeats on the
    derivation; FuelExhausted after fuel steps without reaching a normal form.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    seen_at = {t: 0}
    trace: list[RewriteStep] = []
    current = t
    for _ in range(fuel):
        steps = redexes(trs, current, kind)
        if not steps:
            return Finished(current)
        st = steps[0]
        trace.append(st)
        current = st.result
        if current in seen_at:
            j = seen_at[current]
            return LoopDetected(LoopWitness(current, tuple(trace[j:])))
        seen_at[current] = len(trace)
    if not redexes(trs, current, kind):
        return Finished(current)
    return FuelExhausted()


class HeightSearch:
    """Longest-path search over a rewrite graph with a shared memo table.

    Each instance fixes a successor function; height() may be called for many
    start terms and reuses everything already explored.  Fuel counts terms
    newly explored by one call; memoized subgraphs are free.
    """

    def __init__(self, step_fn: Callable[[Term], tuple[RewriteStep, ...]]):
        self._steps_of = step_fn
        self.memo: dict[Term, int] = {}
        self._dedup: dict[Term, tuple[RewriteStep, ...]] = {}

    def _steps(self, t: Term) -> tuple[RewriteStep, ...]:
        got = self._dedup.get(t)
        if got is None:
            got = tuple({st.result: st for st in self._steps_of(t)}.values())
            self._dedup[t] = got
        return got

    def height(self, t: Term, fuel: int) -> FuelOutcome:
        memo = self.memo
        if t in memo:
            return Finished(memo[t])
        if fuel <= 0:
            raise ValueError("fuel must be positive")
        new_nodes = 1
        stack = [[t, self._steps(t), 0, 0]]
        on_stack = {t: 0}
        while stack:
            frame = stack[-1]
            steps = frame[1]
            if frame[2] < len(steps):
                st = steps[frame[2]]
                frame[2] += 1
                u = st.result
                h = memo.get(u)
                if h is not None:
                    if h + 1 > frame[3]:
                        frame[3] = h + 1
                elif u in on_stack:
                    start = on_stack[u]
                    trace = tuple(f[1][f[2] - 1] for f in stack[start:])
                    return LoopDetected(LoopWitness(u, trace))
                else:
                    new_nodes += 1
                    if new_nodes > fuel:
                        return FuelExhausted()
                    on_stack[u] = len(stack)
                    stack.append([u, self._steps(u), 0, 0])
            else:
                stack.pop()
                del on_stack[frame[0]]
                memo[frame[0]] = frame[3]
                if stack and frame[3] + 1 > stack[-1][3]:
                    stack[-1][3] = frame[3] + 1
        return Finished(memo[t])


def strategy_search(trs: Trs, kind: StrategyKind) -> HeightSearch:
    """A HeightSearch over the one-step relation of trs under kind."""
    if kind is StrategyKind.FULL:
        return HeightSearch(lambda t: _full_steps(trs, t))
    if kind is StrategyKind.INNERMOST:
        return HeightSearch(lambda t: _innermost_steps(trs, t))
    return HeightSearch(lambda t: tuple(redexes(trs, t, kind)))


def derivation_height(trs: Trs, t: Term, kind: StrategyKind, fuel: int) -> FuelOutcome:
    """The maximal m with t rewriting in m steps under the strategy.

    Finished(m) for terminating reachable graphs; LoopDetected with a witness
    when a cycle is reachable (the height is then undefined); FuelExhausted
    when more than fuel distinct terms would have to be visited.
    """
    return strategy_search(trs, kind).height(t, fuel)


class RelativeHeightSearch:
    """Height search counting main steps modulo a second system.

    Successor edges are t => u iff t ->modulo* . ->main . ->modulo* u; the
    height of t is the maximal number of main steps in any mixed derivation.
    Loop witnesses are reconstructed as concrete step traces in the disjoint
    union of the two systems, main rules first.
    """

    def __init__(self, main: Trs, modulo: Trs, fuel: int):
        self.main = main
        self.modulo = modulo
        self.fuel = fuel
        self.combined = Trs(
            main.rules + modulo.rules,
            extra_signature=main.signature | modulo.signature,
        )
        self.memo: dict[Term, int] = {}
        self._succ: dict[Term, tuple[Term, ...]] = {}

    def _successors(self, t: Term) -> tuple[Term, ...]:
        got = self._succ.get(t)
        if got is None:
            got = tuple(relative_successors(self.main, self.modulo, t, self.fuel))
            self._succ[t] = got
        return got

    def _cycle_trace(self, start: Term) -> tuple[RewriteStep, ...]:
        """A concrete combined-system step trace from start back to start
        containing at least one main step, found by bounded BFS."""
        n_main = len(self.main.rules)
        frontier: list[tuple[Term, bool, tuple[RewriteStep, ...]]] = [
            (start, False, ())
        ]
        seen: set[tuple[Term, bool]] = {(start, False)}
        while frontier and len(seen) <= 4 * self.fuel:
            t, counted, trace = frontier.pop(0)
            for st in _full_steps(self.combined, t):
                counted2 = counted or st.rule_index < n_main
                u = st.result
                if u == start and counted2:
                    return trace + (st,)
                key = (u, counted2)
                if key not in seen:
                    seen.add(key)
                    frontier.append((u, counted2, trace + (st,)))
        return ()

    def height(self, t: Term, fuel: int) -> FuelOutcome:
        memo = self.memo
        if t in memo:
            return Finished(memo[t])
        new_nodes = 1
        try:
            stack = [[t, self._successors(t), 0, 0]]
            on_stack = {t: 0}
            while stack:
                frame = stack[-1]
                succ = frame[1]
                if frame[2] < len(succ):
                    u = succ[frame[2]]
                    frame[2] += 1
                    h = memo.get(u)
                    if h is not None:
                        if h + 1 > frame[3]:
                            frame[3] = h + 1
                    elif u in on_stack:
                        return LoopDetected(LoopWitness(u, self._cycle_trace(u)))
                    else:
                        new_nodes += 1
                        if new_nodes > fuel:
                            return FuelExhausted()
                        on_stack[u] = len(stack)
                        stack.append([u, self._successors(u), 0, 0])
                else:
                    stack.pop()
                    del on_stack[frame[0]]
                    memo[frame[0]] = frame[3]
                    if stack and frame[3] + 1 > stack[-1][3]:
                        stack[-1][3] = frame[3] + 1
        except FuelExhaustedError:
            return FuelExhausted()
        return Finished(memo[t])


def detect_innermost_nontermination(
    trs: Trs, max_term_size: int, fuel: int, max_vars: int = 2
) -> LoopWitness | None:
    """Search enumerated start terms for an innermost cycle.

    Terms of size up to max_term_size over the system's signature are tried
    in enumeration order; each reachability search explores at most fuel
    distinct terms.  Returns the first innermost cycle found, or None when
    none was found at this scale (which is no proof of termination).
    """
    from .complexity import enumerate_terms

    search = strategy_search(trs, StrategyKind.INNERMOST)
    for t in enumerate_terms(trs.signature, max_term_size, max_vars):
        if t in search.memo:
            continue
        outcome = search.height(t, fuel)
        if isinstance(outcome, LoopDetected):
            return outcome.witness
    return None
