"""Uncurrying applicative term rewrite systems.

An applicative TRS (ATRS) has a signature of constants plus one binary
application symbol.  Uncurrying replaces application spines f @ t1 @ ... @ tk
by applications of fresh k-ary symbols f#k, after eta-saturating the rules so
that no partially applied left-hand side is lost.  The transformed system is
the uncurried eta-saturation together with the uncurrying rules themselves.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Fun,
    Rule,
    Symbol,
    Term,
    Trs,
    Var,
    canonical_rule,
    subterms,
    variables,
)

#: The symbol the concrete syntax's infix ``@`` desugars to.
DEFAULT_APP = Symbol("app", 2)


class TransformError(ValueError):
    """Base class for errors while analysing or transforming an ATRS."""


class NotApplicativeError(TransformError):
    """The signature is not constants plus one binary application symbol."""


class AmbiguousApplicationError(TransformError):
    """Several binary symbols could serve as application; a hint is needed."""


class NotLeftHeadVariableFreeError(TransformError):
    """Some left-hand side applies a variable, so applicative arities are
    undefined and the transformation does not apply."""


class SymbolClashError(TransformError):
    """A fresh family symbol name like f#1 is already taken."""


class UnknownSymbolError(TransformError):
    """A term mentions a symbol outside the source signature and its family."""


class AtrsContext:
    """Everything fixed by detecting an ATRS: the application symbol, the
    constants, their applicative arities, and the fresh symbol family.

    The family member for (f, i) is f itself for i = 0 and a fresh symbol
    named ``f#i`` of arity i for i >= 1.
    """

    __slots__ = ("app", "constants", "aa", "constant_order", "_hash")

    def __init__(
        self,
        app: Symbol,
        constants: frozenset[Symbol],
        aa: dict[str, int],
        constant_order: tuple[str, ...],
    ):
        self.app = app
        self.constants = frozenset(constants)
        self.aa = dict(aa)
        self.constant_order = tuple(constant_order)
        self._hash = hash(
            (app, self.constants, tuple(sorted(self.aa.items())), self.constant_order)
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AtrsContext)
            and other.app == self.app
            and other.constants == self.constants
            and other.aa == self.aa
            and other.constant_order == self.constant_order
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        aa = ", ".join(f"{n}:{k}" for n, k in sorted(self.aa.items()))
        return f"AtrsContext(app={self.app.name}, aa={{{aa}}})"

    def family(self, base: str, i: int) -> Symbol:
        """The i-th family member of the constant named base."""
        if i == 0:
            return Symbol(base, 0)
        return Symbol(f"{base}#{i}", i)

    def family_index(self, symbol: Symbol) -> tuple[str, int] | None:
        """(base, i) if symbol is the i-th family member of a constant."""
        if symbol.arity == 0 and symbol in self.constants:
            return (symbol.name, 0)
        if "#" in symbol.name:
            base, _, suffix = symbol.name.rpartition("#")
            if (
                suffix.isdigit()
                and int(suffix) == symbol.arity
                and symbol.arity >= 1
                and Symbol(base, 0) in self.constants
            ):
                return (base, symbol.arity)
        return None


def spine(app: Symbol, t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Decompose t = head @ u1 @ ... @ un with a non-application head."""
    args: list[Term] = []
    while isinstance(t, Fun) and t.symbol == app:
        args.append(t.args[1])
        t = t.args[0]
    args.reverse()
    return t, tuple(args)


def detect_atrs(trs: Trs, app_hint: str | None = None) -> AtrsContext:
    """Recognise trs as an ATRS and compute applicative arities.

    The signature must consist of nullary symbols plus at most one binary
    application symbol; with several binary symbols an app_hint naming one of
    them is required.  A constants-only system is accepted and a fresh
    application symbol is synthesised for it.
    """
    binaries = sorted(s for s in trs.signature if s.arity == 2)
    bad = sorted(s for s in trs.signature if s.arity not in (0, 2))
    if bad:
        raise NotApplicativeError(
            f"non-nullary, non-application symbols in signature: {bad}"
        )
    if app_hint is not None:
        app = next((s for s in binaries if s.name == app_hint), None)
        if app is None:
            if binaries:
                raise NotApplicativeError(
                    f"hinted application symbol {app_hint!r} not in signature"
                )
            app = Symbol(app_hint, 2)
        extra = [s for s in binaries if s != app]
        if extra:
            raise NotApplicativeError(
                f"binary symbols besides application {app.name}: {extra}"
            )
    elif len(binaries) > 1:
        raise AmbiguousApplicationError(
            f"several binary symbols could be application: {binaries}"
        )
    else:
        app = binaries[0] if binaries else DEFAULT_APP

    constants = frozenset(s for s in trs.signature if s.arity == 0)
    aa = {c.name: 0 for c in constants}
    order: dict[str, None] = {}
    for rule in trs.rules:
        for side in (rule.lhs, rule.rhs):
            for s in subterms(side):
                if not isinstance(s, Fun):
                    continue
                head, args = spine(app, s)
                if isinstance(head, Fun) and head.symbol in constants:
                    name = head.symbol.name
                    if len(args) > aa[name]:
                        aa[name] = len(args)
                    order.setdefault(name, None)
    for name in sorted(aa):
        order.setdefault(name, None)

    taken = {s.name for s in trs.signature}
    for name, k in aa.items():
        for i in range(1, k + 1):
            if f"{name}#{i}" in taken:
                raise SymbolClashError(
                    f"fresh symbol name {name}#{i} already in signature"
                )
    return AtrsContext(app, constants, aa, tuple(order))


def applicative_arity_of_term(ctx: AtrsContext, t: Term) -> int | None:
    """aa(t), or None when the head is a variable or the arity runs out."""
    if isinstance(t, Var):
        return None
    if t.symbol == ctx.app:
        left = applicative_arity_of_term(ctx, t.args[0])
        if left is None or left == 0:
            return None
        return left - 1
    if t.symbol in ctx.constants:
        return ctx.aa.get(t.symbol.name, 0)
    return None


def is_head_variable_free(ctx: AtrsContext, t: Term) -> bool:
    """True iff no subterm of t applies a variable."""
    return not any(
        isinstance(s, Fun) and s.symbol == ctx.app and isinstance(s.args[0], Var)
        for s in subterms(t)
    )


def is_left_head_variable_free(ctx: AtrsContext, trs: Trs) -> bool:
    """True iff no left-hand side of trs applies a variable."""
    return all(is_head_variable_free(ctx, r.lhs) for r in trs.rules)


def currying_system(symbols: set[Symbol] | frozenset[Symbol], app: Symbol = DEFAULT_APP) -> Trs:
    """Rules flattening every n-ary symbol into applications of a constant.

    For f of arity n the rules are f_{i+1}(x1..xi, y) -> f_i(x1..xi) @ y for
    n > i >= 0, where f_n is f itself and lower members are f#i (f#0 is the
    constant f).
    """
    rules = []
    for f in sorted(symbols):
        if f == app or f.arity == 0:
            continue
        for i in range(f.arity - 1, -1, -1):
            upper = f if i + 1 == f.arity else _member(f.name, i + 1)
            lower = _member(f.name, i)
            xs = tuple(Var(f"x{j + 1}") for j in range(i))
            y = Var("y")
            rules.append(
                Rule(Fun(upper, xs + (y,)), Fun(app, (Fun(lower, xs), y)))
            )
    return Trs(rules, extra_signature=symbols | {app})


def _member(base: str, i: int) -> Symbol:
    return Symbol(base, 0) if i == 0 else Symbol(f"{base}#{i}", i)


def curry_nf(
    symbols: set[Symbol] | frozenset[Symbol], t: Term, app: Symbol = DEFAULT_APP
) -> Term:
    """The unique normal form of t under the currying system of symbols.

    Every application of an n-ary symbol from symbols, or of one of its
    family members, is flattened into a spine headed by the corresponding
    constant.
    """
    flat: dict[Symbol, str] = {}
    for f in symbols:
        if f == app or f.arity == 0:
            continue
        flat[f] = f.name
        for i in range(1, f.arity):
            flat[_member(f.name, i)] = f.name

    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return t
        args = tuple(go(a) for a in t.args)
        base = flat.get(t.symbol)
        if base is None or t.symbol == app:
            return Fun(t.symbol, args)
        out: Term = Fun(Symbol(base, 0))
        for a in args:
            out = Fun(app, (out, a))
        return out

    return go(t)


def uncurrying_system(ctx: AtrsContext) -> Trs:
    """The rules f_i(x1..xi) @ y -> f_{i+1}(x1..xi, y) for aa(f) > i >= 0.

    Confluent and terminating; every term has a unique normal form.
    """
    rules = []
    for name in ctx.constant_order:
        for i in range(ctx.aa.get(name, 0)):
            xs = tuple(Var(f"x{j + 1}") for j in range(i))
            y = Var("y")
            lhs = Fun(ctx.app, (Fun(ctx.family(name, i), xs), y))
            rules.append(Rule(lhs, Fun(ctx.family(name, i + 1), xs + (y,))))
    return Trs(rules, extra_signature=ctx.constants | {ctx.app})


def uncurry_nf(ctx: AtrsContext, t: Term) -> Term:
    """The unique normal form of t under the uncurrying rules, computed by a
    bottom-up fold collapsing application spines."""
    if isinstance(t, Var):
        return t
    args = tuple(uncurry_nf(ctx, a) for a in t.args)
    if t.symbol == ctx.app:
        left, right = args
        if isinstance(left, Fun):
            fam = ctx.family_index(left.symbol)
            if fam is not None:
                base, i = fam
                if i < ctx.aa.get(base, 0):
                    return Fun(ctx.family(base, i + 1), left.args + (right,))
    return Fun(t.symbol, args)


def eta_saturate(ctx: AtrsContext, trs: Trs) -> Trs:
    """The least extension of trs closed under adding l @ x -> r @ x for every
    rule l -> r whose left-hand side still has positive applicative arity.

    Fresh variables are drawn as _eta0, _eta1, ... skipping names present in
    the rule.  Applicative arities are the ones fixed by ctx, computed from
    the original rules.  Rules already present modulo renaming are not added
    twice.
    """
    if not is_left_head_variable_free(ctx, trs):
        raise NotLeftHeadVariableFreeError(
            "eta-saturation needs applicative arities on all left-hand sides"
        )
    out = list(trs.rules)
    seen = {canonical_rule(r) for r in out}
    queue = list(trs.rules)
    while queue:
        rule = queue.pop(0)
        k = applicative_arity_of_term(ctx, rule.lhs)
        if not k:
            continue
        used = set(variables(rule.lhs)) | set(variables(rule.rhs))
        i = 0
        while f"_eta{i}" in used:
            i += 1
        x = Var(f"_eta{i}")
        derived = Rule(
            Fun(ctx.app, (rule.lhs, x)), Fun(ctx.app, (rule.rhs, x))
        )
        if canonical_rule(derived) not in seen:
            seen.add(canonical_rule(derived))
            out.append(derived)
            queue.append(derived)
    return Trs(out, extra_signature=trs.signature)


def uncurried_trs(ctx: AtrsContext, trs: Trs) -> Trs:
    """The rules of trs with both sides in uncurrying normal form."""
    if not is_left_head_variable_free(ctx, trs):
        raise NotLeftHeadVariableFreeError(
            "uncurrying needs applicative arities on all left-hand sides"
        )
    rules = [
        Rule(uncurry_nf(ctx, r.lhs), uncurry_nf(ctx, r.rhs)) for r in trs.rules
    ]
    return Trs(rules, extra_signature=trs.signature)


@dataclass(frozen=True)
class TransformResult:
    """All systems produced by uncurrying an ATRS.

    eta is the eta-saturation, u_rules the uncurrying rules, uncurried the
    plain uncurried system, uncurried_eta the uncurried eta-saturation, and
    combined their union uncurried_eta + u_rules, in that rule order.
    """

    context: AtrsContext
    eta: Trs
    u_rules: Trs
    uncurried: Trs
    uncurried_eta: Trs
    combined: Trs


def transform(trs: Trs, app_hint: str | None = None) -> TransformResult:
    """Uncurry an ATRS: detect, eta-saturate, uncurry, and combine."""
    ctx = detect_atrs(trs, app_hint)
    if not is_left_head_variable_free(ctx, trs):
        raise NotLeftHeadVariableFreeError(
            "left-hand sides must not apply variables"
        )
    eta = eta_saturate(ctx, trs)
    u_rules = uncurrying_system(ctx)
    uncurried = uncurried_trs(ctx, trs)
    uncurried_eta = uncurried_trs(ctx, eta)
    combined = Trs(
        uncurried_eta.rules + u_rules.rules,
        extra_signature=uncurried_eta.signature | u_rules.signature,
    )
    return TransformResult(ctx, eta, u_rules, uncurried, uncurried_eta, combined)


def curry_back(ctx: AtrsContext, t: Term) -> Term:
    """Fully curry t and rename family members back to their base constants.

    Defined for terms over the source signature extended by the family;
    anything else raises UnknownSymbolError.
    """
    if isinstance(t, Var):
        return t
    if t.symbol == ctx.app:
        return Fun(ctx.app, (curry_back(ctx, t.args[0]), curry_back(ctx, t.args[1])))
    fam = ctx.family_index(t.symbol)
    if fam is None:
        raise UnknownSymbolError(f"symbol {t.symbol} outside signature and family")
    base, _ = fam
    out: Term = Fun(Symbol(base, 0))
    for a in t.args:
        out = Fun(ctx.app, (out, curry_back(ctx, a)))
    return out
