"""Derivational complexity measured by exhaustive term enumeration.

dc(n) is the maximal derivation height over all terms of size at most n; the
innermost variant restricts the rewrite strategy, the relative variant counts
main-system steps modulo a second system.  Tables are computed by brute force
over a canonical enumeration of terms, so they are exact at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .rewriting import (
    FuelExhausted,
    Finished,
    HeightSearch,
    LoopDetected,
    LoopWitness,
    RelativeHeightSearch,
    StrategyKind,
    strategy_search,
)
from .terms import Fun, Symbol, Term, Trs, Var, canonical_var_name


def _terms_of_size(
    symbols: tuple[Symbol, ...], size: int, used: int, max_vars: int
) -> Iterator[tuple[Term, int]]:
    """Canonical terms of exactly this size, threading the count of distinct
    variables used so far; variables come first, then symbols in sorted order."""
    if size < 1:
        return
    if size == 1:
        for i in range(used):
            yield Var(canonical_var_name(i)), used
        if used < max_vars:
            yield Var(canonical_var_name(used)), used + 1
    for f in symbols:
        if f.arity == 0:
            if size == 1:
                yield Fun(f), used
        elif size >= f.arity + 1:
            for args, u in _args_of_size(symbols, size - 1, f.arity, used, max_vars):
                yield Fun(f, args), u


def _args_of_size(
    symbols: tuple[Symbol, ...], budget: int, count: int, used: int, max_vars: int
) -> Iterator[tuple[tuple[Term, ...], int]]:
    if count == 1:
        for t, u in _terms_of_size(symbols, budget, used, max_vars):
            yield (t,), u
        return
    for first in range(1, budget - (count - 1) + 1):
        for t, u in _terms_of_size(symbols, first, used, max_vars):
            for rest, u2 in _args_of_size(
                symbols, budget - first, count - 1, u, max_vars
            ):
                yield (t,) + rest, u2


def terms_of_size(
    signature: Iterable[Symbol], size: int, max_vars: int = 2
) -> Iterator[Term]:
    """Canonical terms of exactly the given size over the signature."""
    symbols = tuple(sorted(set(signature)))
    for t, _ in _terms_of_size(symbols, size, 0, max_vars):
        yield t


def enumerate_terms(
    signature: Iterable[Symbol], max_size: int, max_vars: int = 2
) -> list[Term]:
    """All terms of size <= max_size with at most max_vars distinct variables,
    one representative per renaming class, in a fixed deterministic order.

    Variables are named canonically in order of first occurrence, so distinct
    listed terms are distinct modulo renaming.
    """
    symbols = tuple(sorted(set(signature)))
    out: list[Term] = []
    for size in range(1, max_size + 1):
        for t, _ in _terms_of_size(symbols, size, 0, max_vars):
            out.append(t)
    return out


@dataclass(frozen=True)
class DcRow:
    """One table row: the complexity value and a term attaining it."""

    value: int
    witness: Term | None


@dataclass
class ComplexityTable:
    """dc values per size bound, with the reason the table stopped, if any.

    rows[n] is exact over all enumerated terms of size <= n.  incomplete_at
    names the first size whose row could not be completed; loop carries the
    witness when the reason was a reachable cycle, fuel_exhausted_on names
    the starting term when the reason was fuel.
    """

    strategy: StrategyKind
    rows: dict[int, DcRow] = field(default_factory=dict)
    incomplete_at: int | None = None
    loop: LoopWitness | None = None
    fuel_exhausted_on: Term | None = None

    @property
    def complete(self) -> bool:
        return self.incomplete_at is None


def _fill_table(
    table: ComplexityTable,
    height_of,
    signature: Iterable[Symbol],
    max_size: int,
    max_vars: int,
) -> ComplexityTable:
    symbols = tuple(sorted(set(signature)))
    best = 0
    witness: Term | None = None
    for n in range(1, max_size + 1):
        for t, _ in _terms_of_size(symbols, n, 0, max_vars):
            outcome = height_of(t)
            if isinstance(outcome, Finished):
                if witness is None or outcome.value > best:
                    best = outcome.value
                    witness = t
            elif isinstance(outcome, LoopDetected):
                table.incomplete_at = n
                table.loop = outcome.witness
                return table
            else:
                table.incomplete_at = n
                table.fuel_exhausted_on = t
                return table
        table.rows[n] = DcRow(best, witness)
    return table


def dc_table(
    trs: Trs,
    max_size: int,
    kind: StrategyKind,
    fuel: int,
    max_vars: int = 2,
) -> ComplexityTable:
    """Exact dc (or innermost dc) values for sizes 1..max_size.

    Stops at the first size where a loop is detected (the value would be
    undefined) or fuel runs out; completed rows are kept either way.
    """
    search = strategy_search(trs, kind)
    table = ComplexityTable(strategy=kind)
    return _fill_table(
        table, lambda t: search.height(t, fuel), trs.signature, max_size, max_vars
    )


def dc_relative_table(
    main: Trs,
    modulo: Trs,
    max_size: int,
    fuel: int,
    max_vars: int = 2,
) -> ComplexityTable:
    """dc values counting main steps modulo the second system.

    Enumeration runs over the union signature.  With an empty main system the
    relation is empty and every row is zero.
    """
    search = RelativeHeightSearch(main, modulo, fuel)
    table = ComplexityTable(strategy=StrategyKind.FULL)
    return _fill_table(
        table,
        lambda t: search.height(t, fuel),
        main.signature | modulo.signature,
        max_size,
        max_vars,
    )
