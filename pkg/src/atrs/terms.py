"""First-order terms, rules, and term rewrite systems.

Terms are immutable and interned: constructing the same variable or the same
application of a symbol to the same arguments always yields the same object,
with hash and size cached at construction.  This keeps memo tables over terms
amortized O(1) per distinct term, which the derivation-height and complexity
machinery relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


@dataclass(frozen=True, order=True)
class Symbol:
    """A function symbol with a fixed arity."""

    name: str
    arity: int

    def __repr__(self) -> str:
        return f"{self.name}/{self.arity}"


class Var:
    """A variable, identified by name."""

    __slots__ = ("name", "size", "_hash")
    _intern: dict = {}

    def __new__(cls, name: str) -> "Var":
        t = cls._intern.get(name)
        if t is None:
            if not name:
                raise ValueError("variable name must be non-empty")
            t = object.__new__(cls)
            t.name = name
            t.size = 1
            t._hash = hash(("var", name))
            cls._intern[name] = t
        return t

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, Var) and other.name == self.name)

    def __repr__(self) -> str:
        return f"Var({self.name!r})"

    def __reduce__(self):
        return (Var, (self.name,))


class Fun:
    """A function symbol applied to exactly symbol.arity argument terms."""

    __slots__ = ("symbol", "args", "size", "_hash")
    _intern: dict = {}

    def __new__(cls, symbol: Symbol, args: Iterable["Term"] = ()) -> "Fun":
        args = tuple(args)
        key = (symbol, args)
        t = cls._intern.get(key)
        if t is None:
            if len(args) != symbol.arity:
                raise ValueError(
                    f"symbol {symbol} applied to {len(args)} arguments"
                )
            t = object.__new__(cls)
            t.symbol = symbol
            t.args = args
            t.size = 1 + sum(a.size for a in args)
            t._hash = hash(key)
            cls._intern[key] = t
        return t

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other or (
            isinstance(other, Fun)
            and other._hash == self._hash
            and other.symbol == self.symbol
            and other.args == self.args
        )

    def __repr__(self) -> str:
        if not self.args:
            return f"Fun({self.symbol.name})"
        return f"Fun({self.symbol.name}, {', '.join(map(repr, self.args))})"

    def __reduce__(self):
        return (Fun, (self.symbol, self.args))


Term = Union[Var, Fun]

#: A position is a path of 1-based argument indices; () is the root.
Position = tuple[int, ...]

#: A substitution maps variable names to terms; unbound names map to themselves.
Substitution = Mapping[str, Term]

#: Canonical variable names, used for enumeration and renaming-invariant equality.
CANONICAL_VAR_NAMES = ("x", "y", "z", "w")


def canonical_var_name(i: int) -> str:
    if i < len(CANONICAL_VAR_NAMES):
        return CANONICAL_VAR_NAMES[i]
    return f"v{i}"


class InvalidPositionError(ValueError):
    """Raised when a position does not exist in a term."""


def subterms(t: Term) -> Iterator[Term]:
    """All subterms of t in preorder, the term itself first."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, Fun):
            stack.extend(reversed(s.args))


def positions(t: Term) -> tuple[Position, ...]:
    """All positions of t in preorder; len(positions(t)) == t.size."""
    out: list[Position] = []
    stack: list[tuple[Position, Term]] = [((), t)]
    while stack:
        p, s = stack.pop()
        out.append(p)
        if isinstance(s, Fun):
            for i in range(len(s.args), 0, -1):
                stack.append((p + (i,), s.args[i - 1]))
    return tuple(out)


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not isinstance(t, Fun) or not 1 <= i <= len(t.args):
            raise InvalidPositionError(f"position {list(p)} not in term")
        t = t.args[i - 1]
    return t


def replace(t: Term, p: Position, s: Term) -> Term:
    """The term t with the subterm at position p replaced by s."""
    if not p:
        return s
    if not isinstance(t, Fun) or not 1 <= p[0] <= len(t.args):
        raise InvalidPositionError(f"position {list(p)} not in term")
    i = p[0] - 1
    new_arg = replace(t.args[i], p[1:], s)
    return Fun(t.symbol, t.args[:i] + (new_arg,) + t.args[i + 1 :])


def right_of(p: Position, q: Position) -> bool:
    """True iff p = p1 i p2 and q = p1 j q2 with i > j.

    A strict partial order; two distinct parallel positions are always
    comparable one way round, while a prefix is never to either side.
    """
    k = 0
    n = min(len(p), len(q))
    while k < n and p[k] == q[k]:
        k += 1
    return k < len(p) and k < len(q) and p[k] > q[k]


def parallel(p: Position, q: Position) -> bool:
    """True iff neither position is a prefix of the other."""
    return right_of(p, q) or right_of(q, p)


def variables(t: Term) -> tuple[str, ...]:
    """Variable names of t in order of first occurrence (left to right)."""
    seen: dict[str, None] = {}
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            seen.setdefault(s.name, None)
        else:
            stack.extend(reversed(s.args))
    return tuple(seen)


def variable_counts(t: Term) -> dict[str, int]:
    counts: dict[str, int] = {}
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            counts[s.name] = counts.get(s.name, 0) + 1
        else:
            stack.extend(s.args)
    return counts


def substitute(t: Term, sigma: Substitution) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if not sigma:
        return t
    return Fun(t.symbol, tuple(substitute(a, sigma) for a in t.args))


def match(pattern: Term, subject: Term) -> dict[str, Term] | None:
    """The unique substitution sigma with substitute(pattern, sigma) == subject,
    or None if there is none."""
    binding: dict[str, Term] = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = s
            elif bound != s:
                return None
        else:
            if not isinstance(s, Fun) or s.symbol != p.symbol:
                return None
            stack.extend(zip(p.args, s.args))
    return binding


def rename(t: Term, mapping: Mapping[str, str]) -> Term:
    if isinstance(t, Var):
        new = mapping.get(t.name)
        return Var(new) if new is not None else t
    return Fun(t.symbol, tuple(rename(a, mapping) for a in t.args))


def canonical(t: Term) -> Term:
    """t with variables renamed to x, y, z, ... in order of first occurrence.

    Two terms are equal modulo variable renaming iff their canonical forms
    are equal.
    """
    names = variables(t)
    mapping = {n: canonical_var_name(i) for i, n in enumerate(names)}
    if all(k == v for k, v in mapping.items()):
        return t
    return rename(t, mapping)


def term_sort_key(t: Term):
    """Deterministic total order: variables before function symbols, then
    lexicographic on (name, arity, argument keys)."""
    if isinstance(t, Var):
        return (0, t.name)
    return (1, t.symbol.name, t.symbol.arity, tuple(term_sort_key(a) for a in t.args))


class Rule:
    """A rewrite rule lhs -> rhs.

    The left-hand side must not be a variable and every variable of the
    right-hand side must occur in the left-hand side.
    """

    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: Term, rhs: Term):
        if isinstance(lhs, Var):
            raise ValueError("rule left-hand side must not be a variable")
        missing = set(variables(rhs)) - set(variables(lhs))
        if missing:
            raise ValueError(
                f"rule right-hand side has unbound variables: {sorted(missing)}"
            )
        self.lhs = lhs
        self.rhs = rhs

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Rule) and other.lhs == self.lhs and other.rhs == self.rhs
        )

    def __hash__(self) -> int:
        return hash(("rule", self.lhs, self.rhs))

    def __repr__(self) -> str:
        return f"Rule({self.lhs!r}, {self.rhs!r})"


def canonical_rule(rule: Rule) -> Rule:
    """The rule with variables renamed canonically, left side first."""
    names = variables(rule.lhs)
    mapping = {n: canonical_var_name(i) for i, n in enumerate(names)}
    return Rule(rename(rule.lhs, mapping), rename(rule.rhs, mapping))


def term_symbols(t: Term) -> set[Symbol]:
    return {s.symbol for s in subterms(t) if isinstance(s, Fun)}


class Trs:
    """A term rewrite system: an ordered list of rules over a signature.

    The signature always contains every symbol used in the rules and may
    declare further symbols.  A name may appear at several arities; symbols
    are identified by (name, arity).
    """

    __slots__ = ("rules", "signature", "_hash")

    def __init__(self, rules: Iterable[Rule], extra_signature: Iterable[Symbol] = ()):
        self.rules = tuple(rules)
        used: set[Symbol] = set(extra_signature)
        for r in self.rules:
            used |= term_symbols(r.lhs)
            used |= term_symbols(r.rhs)
        self.signature = frozenset(used)
        self._hash = hash(("trs", self.rules, self.signature))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Trs)
            and other.rules == self.rules
            and other.signature == self.signature
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Trs({len(self.rules)} rules, {len(self.signature)} symbols)"


def canonical_rules(trs: Trs | Iterable[Rule]) -> frozenset[Rule]:
    """The rule set modulo variable renaming, for order-insensitive comparison."""
    rules = trs.rules if isinstance(trs, Trs) else tuple(trs)
    return frozenset(canonical_rule(r) for r in rules)


def is_duplicating(trs: Trs) -> bool:
    """True iff some rule has more occurrences of a variable on the right
    than on the left."""
    for rule in trs.rules:
        left = variable_counts(rule.lhs)
        for name, n in variable_counts(rule.rhs).items():
            if n > left.get(name, 0):
                return True
    return False


def is_normal_form(trs: Trs, t: Term) -> bool:
    """True iff no rule of trs matches any subterm of t."""
    for s in subterms(t):
        for rule in trs.rules:
            if match(rule.lhs, s) is not None:
                return False
    return True
