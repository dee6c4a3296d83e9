"""Small applicative systems used throughout the tests and docs.

Each system is kept as source text in the input format and parsed on
demand, so the parser is exercised everywhere and the files under trs/
stay in sync with what the tests use.
"""

from __future__ import annotations

from .parsing import InputProblem, parse_tmi, parse_trs
from .terms import Trs
from .tmi import MatrixInterp

SOURCES: dict[str, str] = {
    # id applied through itself; not terminating (f x loops via id f x)
    "id_apply": """
(VAR x)
(RULES
  id @ x -> x
  f @ x -> id @ f @ x
)
""",
    # head rewrites to itself under one argument; innermost loop appears
    # only after uncurrying
    "head_loop": """
(VAR x)
(RULES
  f @ x -> f @ x
  f -> g
)
""",
    # the head changes while the argument is also a redex
    "head_switch": """
(VAR x)
(RULES
  f -> g
  a -> b
  g @ x -> h
)
""",
    # two parallel redexes under an application; separates rightmost from
    # plain innermost simulation
    "parallel_redexes": """
(VAR x)
(RULES
  f -> g
  f @ x -> g @ x
  a -> b
)
""",
    "addition": """
(VAR x y)
(RULES
  add @ x @ 0 -> x
  add @ x @ (s @ y) -> s @ (add @ x @ y)
)
""",
    # one unary symbol doubling itself; derivation heights grow as 2^n
    # after uncurrying under the innermost strategy
    "doubling": """
(VAR x)
(RULES
  f -> s
  f @ (s @ x) -> s @ (s @ (f @ x))
)
""",
}

#: Dimension-2 interpretation certifying the uncurried addition system.
ADDITION_TMI_SOURCE = """
add#2/2 : [ [1 1; 0 1], [1 1; 0 1] ] + [0; 0]
app/2   : [ [1 1; 0 1], [1 1; 0 1] ] + [0; 0]
add#1/1 : [ [1 0; 0 1] ] + [0; 1]
s#1/1   : [ [1 0; 0 1] ] + [0; 1]
add/0   : [] + [0; 1]
s/0     : [] + [0; 1]
0/0     : [] + [0; 1]
"""


def problem(name: str) -> InputProblem:
    """The named sample system as a parsed input problem."""
    return parse_trs(SOURCES[name], origin=f"<sample:{name}>")


def system(name: str) -> Trs:
    return problem(name).trs


def id_apply() -> Trs:
    return system("id_apply")


def head_loop() -> Trs:
    return system("head_loop")


def head_switch() -> Trs:
    return system("head_switch")


def parallel_redexes() -> Trs:
    return system("parallel_redexes")


def addition() -> Trs:
    return system("addition")


def doubling() -> Trs:
    return system("doubling")


def addition_tmi() -> MatrixInterp:
    """The interpretation above, parsed."""
    return parse_tmi(ADDITION_TMI_SOURCE)
