"""Triangular matrix interpretations over the naturals.

A symbol of arity n is interpreted as x1..xn |-> F1*x1 + ... + Fn*xn + f
with square coefficient matrices Fi and a constant vector f, all entries
natural numbers.  Monotone means every Fi has top-left entry >= 1;
triangular means every Fi is upper triangular with diagonal entries <= 1.
A monotone triangular interpretation of dimension d that strictly orients
every rule bounds the derivational complexity by O(n^d).

Arithmetic is exact: plain Python integers, no overflow, no rounding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .terms import Fun, Rule, Symbol, Term, Trs, Var

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


class InterpretationError(ValueError):
    """Malformed interpretation data."""


class MissingSymbolError(InterpretationError):
    """A term uses a symbol the interpretation does not cover."""


class SearchBudgetExhausted(RuntimeError):
    """The certificate search hit its candidate budget before finishing."""

    def __init__(self, attempts: int):
        super().__init__(f"search budget exhausted after {attempts} candidates")
        self.attempts = attempts


def zero_vector(dim: int) -> Vector:
    return (0,) * dim

def zero_matrix(dim: int) -> Matrix:
    return ((0,) * dim,) * dim

def identity(dim: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))

def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))

def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(vec_add(r, s) for r, s in zip(a, b))

def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a
    )

def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)

def mat_ge(a: Matrix, b: Matrix) -> bool:
    return all(x >= y for r, s in zip(a, b) for x, y in zip(r, s))

def vec_strict_gt(u: Vector, v: Vector) -> bool:
    """First component strictly greater, the rest componentwise >=."""
    return u[0] > v[0] and all(a >= b for a, b in zip(u[1:], v[1:]))


#: Interpretation of one symbol: per-argument matrices and the constant vector.
SymbolInterp = tuple[tuple[Matrix, ...], Vector]


class MatrixInterp:
    """A matrix interpretation: dimension plus one entry per symbol."""

    __slots__ = ("dim", "entries")

    def __init__(self, dim: int, entries: Mapping[Symbol, SymbolInterp]):
        if dim < 1:
            raise InterpretationError("dimension must be at least 1")
        self.dim = dim
        self.entries: dict[Symbol, SymbolInterp] = dict(entries)
        for sym, (mats, vec) in self.entries.items():
            if len(mats) != sym.arity:
                raise InterpretationError(
                    f"{sym.name}/{sym.arity}: {len(mats)} matrices for arity {sym.arity}"
                )
            for m in mats:
                self._check_matrix(sym, m)
            self._check_vector(sym, vec)

    def _check_matrix(self, sym: Symbol, m: Matrix) -> None:
        if len(m) != self.dim or any(len(row) != self.dim for row in m):
            raise InterpretationError(f"{sym.name}: matrix is not {self.dim}x{self.dim}")
        if any(not isinstance(x, int) or x < 0 for row in m for x in row):
            raise InterpretationError(f"{sym.name}: matrix entries must be naturals")

    def _check_vector(self, sym: Symbol, v: Vector) -> None:
        if len(v) != self.dim:
            raise InterpretationError(f"{sym.name}: vector length is not {self.dim}")
        if any(not isinstance(x, int) or x < 0 for x in v):
            raise InterpretationError(f"{sym.name}: vector entries must be naturals")

    def for_symbol(self, sym: Symbol) -> SymbolInterp:
        try:
            return self.entries[sym]
        except KeyError:
            raise MissingSymbolError(
                f"no interpretation for {sym.name}/{sym.arity}"
            ) from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixInterp):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __repr__(self) -> str:
        return f"MatrixInterp(dim={self.dim}, symbols={len(self.entries)})"


@dataclass
class LinearForm:
    """A vector-valued linear polynomial: sum of coeffs[x]*x plus const."""

    coeffs: dict[str, Matrix]
    const: Vector

    def coeff(self, name: str, dim: int) -> Matrix:
        return self.coeffs.get(name, zero_matrix(dim))


def _linearize(entries: Mapping[Symbol, SymbolInterp], dim: int, t: Term) -> LinearForm:
    if isinstance(t, Var):
        return LinearForm({t.name: identity(dim)}, zero_vector(dim))
    try:
        mats, vec = entries[t.symbol]
    except KeyError:
        raise MissingSymbolError(
            f"no interpretation for {t.symbol.name}/{t.symbol.arity}"
        ) from None
    coeffs: dict[str, Matrix] = {}
    const = vec
    for m, arg in zip(mats, t.args):
        sub = _linearize(entries, dim, arg)
        const = vec_add(const, mat_vec(m, sub.const))
        for name, c in sub.coeffs.items():
            prod = mat_mul(m, c)
            coeffs[name] = mat_add(coeffs[name], prod) if name in coeffs else prod
    return LinearForm(coeffs, const)


def linearize(interp: MatrixInterp, t: Term) -> LinearForm:
    """The interpretation of t as a linear form in its variables."""
    return _linearize(interp.entries, interp.dim, t)


def evaluate(interp: MatrixInterp, t: Term, assignment: Mapping[str, Vector]) -> Vector:
    """The value of t under a concrete variable assignment."""
    if isinstance(t, Var):
        try:
            return assignment[t.name]
        except KeyError:
            raise InterpretationError(f"no value assigned to variable {t.name}") from None
    mats, vec = interp.for_symbol(t.symbol)
    out = vec
    for m, arg in zip(mats, t.args):
        out = vec_add(out, mat_vec(m, evaluate(interp, arg, assignment)))
    return out


@dataclass
class OrientationReport:
    """Whether one rule decreases strictly under the interpretation.

    variables maps each variable of the rule to whether its left coefficient
    dominates its right coefficient componentwise; constant_ok records the
    strict comparison of the constant parts.
    """

    rule: Rule
    ok: bool
    constant_ok: bool
    variables: dict[str, bool] = field(default_factory=dict)


def orientation_report(interp: MatrixInterp, rule: Rule) -> OrientationReport:
    dim = interp.dim
    left = linearize(interp, rule.lhs)
    right = linearize(interp, rule.rhs)
    variables = {}
    for name in {**left.coeffs, **right.coeffs}:
        variables[name] = mat_ge(left.coeff(name, dim), right.coeff(name, dim))
    constant_ok = vec_strict_gt(left.const, right.const)
    ok = constant_ok and all(variables.values())
    return OrientationReport(rule, ok, constant_ok, variables)


def strictly_oriented(interp: MatrixInterp, rule: Rule) -> bool:
    """True iff [lhs] > [rhs] holds for every assignment of naturals, decided
    by componentwise comparison of coefficients and constants."""
    return orientation_report(interp, rule).ok


def _monotonicity_violation(interp: MatrixInterp) -> tuple[Symbol, int] | None:
    for sym in sorted(interp.entries):
        mats, _ = interp.entries[sym]
        for i, m in enumerate(mats):
            if m[0][0] < 1:
                return sym, i
    return None


def _triangularity_violation(interp: MatrixInterp) -> tuple[Symbol, int] | None:
    for sym in sorted(interp.entries):
        mats, _ = interp.entries[sym]
        for i, m in enumerate(mats):
            for r in range(interp.dim):
                if m[r][r] > 1 or any(m[r][c] != 0 for c in range(r)):
                    return sym, i
    return None


def is_monotone(interp: MatrixInterp) -> bool:
    """Every coefficient matrix has top-left entry at least 1."""
    return _monotonicity_violation(interp) is None


def is_triangular(interp: MatrixInterp) -> bool:
    """Every coefficient matrix is upper triangular with diagonal <= 1."""
    return _triangularity_violation(interp) is None


@dataclass(frozen=True)
class Certificate:
    """A machine-checked complexity statement about a rewrite system."""

    kind: str
    degree: int | None = None
    note: str = ""


@dataclass
class TmiVerdict:
    """Outcome of checking an interpretation against a system.

    On success, certificate bounds the derivational complexity.  On failure,
    failure says which condition broke first and failing_rule_index names the
    rule when the condition was an orientation.  reports carries the per-rule
    orientation evidence whenever all symbols were covered.
    """

    ok: bool
    certificate: Certificate | None = None
    failure: str | None = None
    failing_rule_index: int | None = None
    reports: tuple[OrientationReport, ...] = ()


def check_tmi(interp: MatrixInterp, trs: Trs) -> TmiVerdict:
    """Check monotonicity, triangularity, and strict orientation of all rules.

    A symbol occurring in the rules but absent from the interpretation raises
    MissingSymbolError; that is an input mismatch, not a refutation.
    """
    bad = _monotonicity_violation(interp)
    if bad is not None:
        sym, i = bad
        return TmiVerdict(
            ok=False,
            failure=f"not monotone: argument {i + 1} of {sym.name}/{sym.arity}"
            " has top-left entry 0",
        )
    bad = _triangularity_violation(interp)
    if bad is not None:
        sym, i = bad
        return TmiVerdict(
            ok=False,
            failure=f"not triangular: argument {i + 1} of {sym.name}/{sym.arity}",
        )
    reports = tuple(orientation_report(interp, rule) for rule in trs.rules)
    for i, report in enumerate(reports):
        if not report.ok:
            if not report.constant_ok:
                detail = "constant part does not decrease strictly"
            else:
                name = sorted(n for n, ok in report.variables.items() if not ok)[0]
                detail = f"coefficient of {name} is not dominated"
            return TmiVerdict(
                ok=False,
                failure=f"rule {i + 1} not strictly oriented: {detail}",
                failing_rule_index=i,
                reports=reports,
            )
    degree = interp.dim
    cert = Certificate("upper-bound", degree, f"dc(n) in O(n^{degree})")
    return TmiVerdict(ok=True, certificate=cert, reports=reports)


def _candidate_matrices(dim: int, bound: int) -> list[Matrix]:
    """All monotone upper triangular matrices with entries up to bound,
    in a fixed order with the all-zero-off-diagonal candidates first."""
    ranges = []
    for r in range(dim):
        for c in range(dim):
            if c < r:
                ranges.append((0,))
            elif c == r:
                # monotonicity forces the top-left entry to 1, triangularity
                # caps the other diagonal entries at 1
                ranges.append((1,) if r == 0 else (0, 1))
            else:
                ranges.append(tuple(range(bound + 1)))
    out = []
    for flat in itertools.product(*ranges):
        out.append(tuple(flat[r * dim : (r + 1) * dim] for r in range(dim)))
    return out


def _candidate_vectors(dim: int, bound: int) -> list[Vector]:
    return [v for v in itertools.product(range(bound + 1), repeat=dim)]


def search_tmi(
    trs: Trs, dim: int, coeff_bound: int, budget: int
) -> MatrixInterp | None:
    """Exhaustive search for an interpretation certifying trs.

    Candidates are monotone and triangular by construction, with all entries
    bounded by coeff_bound; only strict orientation is tested.  Symbols are
    assigned in an order that makes each rule checkable as early as possible,
    and each rule is checked as soon as all its symbols are assigned.  Returns
    the first certificate in candidate order, or None once the whole space is
    refuted.  Raises SearchBudgetExhausted when more than budget candidates
    would be tried.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if coeff_bound < 1:
        raise ValueError("coefficient bound must be at least 1")
    if budget < 1:
        raise ValueError("budget must be positive")
    mats = _candidate_matrices(dim, coeff_bound)
    vecs = _candidate_vectors(dim, coeff_bound)

    rule_syms = []
    for rule in trs.rules:
        syms: set[Symbol] = set()
        for t in (rule.lhs, rule.rhs):
            stack = [t]
            while stack:
                s = stack.pop()
                if isinstance(s, Fun):
                    syms.add(s.symbol)
                    stack.extend(s.args)
        rule_syms.append(syms)

    # schedule: repeatedly complete the rule missing the fewest symbols, its
    # cheapest symbols first, so the search prunes as high up as possible
    symbols: list[Symbol] = []
    assigned: set[Symbol] = set()
    unready = list(range(len(trs.rules)))
    while True:
        unready = [i for i in unready if not rule_syms[i] <= assigned]
        if not unready:
            break
        pick = min(unready, key=lambda i: (len(rule_syms[i] - assigned), i))
        for sym in sorted(rule_syms[pick] - assigned, key=lambda s: (s.arity, s.name)):
            symbols.append(sym)
            assigned.add(sym)
    for sym in sorted(trs.signature - assigned):
        symbols.append(sym)

    # ready[k]: rules checkable once symbols[0..k] are assigned, and not sooner
    ready: list[list[int]] = [[] for _ in symbols]
    assigned = set()
    for k, sym in enumerate(symbols):
        assigned.add(sym)
        for i, syms in enumerate(rule_syms):
            if sym in syms and syms <= assigned:
                ready[k].append(i)

    entries: dict[Symbol, SymbolInterp] = {}
    attempts = [0]

    def decode(sym: Symbol, j: int) -> SymbolInterp:
        j, v = divmod(j, len(vecs))
        picked = []
        for _ in range(sym.arity):
            j, m = divmod(j, len(mats))
            picked.append(mats[m])
        return tuple(picked), vecs[v]

    def assign(k: int) -> MatrixInterp | None:
        if k == len(symbols):
            return MatrixInterp(dim, entries)
        sym = symbols[k]
        count = len(vecs) * len(mats) ** sym.arity
        for j in range(count):
            attempts[0] += 1
            if attempts[0] > budget:
                raise SearchBudgetExhausted(attempts[0])
            entries[sym] = decode(sym, j)
            if all(
                orientation_ok(trs.rules[i]) for i in ready[k]
            ):
                found = assign(k + 1)
                if found is not None:
                    return found
        del entries[sym]
        return None

    def orientation_ok(rule: Rule) -> bool:
        left = _linearize(entries, dim, rule.lhs)
        right = _linearize(entries, dim, rule.rhs)
        if not vec_strict_gt(left.const, right.const):
            return False
        for name in {**left.coeffs, **right.coeffs}:
            if not mat_ge(left.coeff(name, dim), right.coeff(name, dim)):
                return False
        return True

    return assign(0)
