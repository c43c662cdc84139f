"""
Boolean guard formulas

Guards label the edges of component machines. A guard is a formula over
symbol names built from the constants 1 and 0, atoms, complement (!),
product (*) and sum (+). Formulas are immutable and may be shared freely.
"""

import itertools
import sys
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Mapping, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError


Symbol = str

IDENT_PATTERN = r'[A-Za-z_][A-Za-z0-9_]*'

GUARD_GRAMMAR = r'''
?start: formula

?formula: term
    | formula "+" term          -> or_

?term: factor
    | term "*" factor           -> and_

?factor: "!" factor             -> not_
    | "(" formula ")"
    | "1"                       -> true
    | "0"                       -> false
    | IDENT                     -> atom

IDENT: /''' + IDENT_PATTERN + r'''/

%import common.WS
%ignore WS
'''


class FormulaSyntaxError(ValueError):
    """Raised when a guard string does not follow the guard grammar."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True)
class ConstTrue:
    pass


@dataclass(frozen=True, slots=True)
class ConstFalse:
    pass


@dataclass(frozen=True, slots=True)
class Atom:
    name: Symbol


@dataclass(frozen=True, slots=True)
class Not:
    arg: 'Formula'


@dataclass(frozen=True, slots=True)
class And:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True, slots=True)
class Or:
    left: 'Formula'
    right: 'Formula'


Formula = Union[ConstTrue, ConstFalse, Atom, Not, And, Or]

TRUE = ConstTrue()
FALSE = ConstFalse()


def atom(name: str) -> Atom:
    """Create an atom with an interned symbol name."""
    return Atom(sys.intern(name))


# ==================== Smart constructors ====================

def make_not(f: Formula) -> Formula:
    """Complement with constant folding and double-negation removal."""
    if isinstance(f, ConstTrue):
        return FALSE
    if isinstance(f, ConstFalse):
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def make_and(left: Formula, right: Formula) -> Formula:
    """Product with unit and zero laws applied."""
    if isinstance(left, ConstFalse) or isinstance(right, ConstFalse):
        return FALSE
    if isinstance(left, ConstTrue):
        return right
    if isinstance(right, ConstTrue):
        return left
    if left == right:
        return left
    return And(left, right)


def make_or(left: Formula, right: Formula) -> Formula:
    """Sum with unit and zero laws applied."""
    if isinstance(left, ConstTrue) or isinstance(right, ConstTrue):
        return TRUE
    if isinstance(left, ConstFalse):
        return right
    if isinstance(right, ConstFalse):
        return left
    if left == right:
        return left
    return Or(left, right)


def disjoin_all(formulas: Iterable[Formula]) -> Formula:
    result: Formula = FALSE
    for f in formulas:
        result = make_or(result, f)
    return result


# ==================== Parsing ====================

@v_args(inline=True)
class _GuardTransformer(Transformer):
    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def not_(self, arg):
        return Not(arg)

    def true(self):
        return TRUE

    def false(self):
        return FALSE

    def atom(self, token):
        return atom(str(token))


_GUARD_PARSER = Lark(GUARD_GRAMMAR, parser='lalr', transformer=_GuardTransformer())


def parse_formula(text: str) -> Formula:
    """Parse a guard string into a formula tree.

    Args:
        text: Guard text, e.g. ``"a*!b + c"``. Precedence is ! > * > +.

    Returns:
        The formula tree. No simplification is applied.

    Raises:
        FormulaSyntaxError: If the text is empty or not a well-formed guard.
    """
    if text is None or not text.strip():
        raise FormulaSyntaxError("Empty guard formula")
    try:
        return _GUARD_PARSER.parse(text)
    except UnexpectedInput as e:
        raise FormulaSyntaxError(f"Invalid guard {text!r}", e.line, e.column) from e
    except VisitError as e:
        raise FormulaSyntaxError(f"Invalid guard {text!r}: {e.orig_exc}") from e


_PRECEDENCE = {Or: 1, And: 2, Not: 3}


def print_formula(f: Formula) -> str:
    """Print a formula in guard syntax with the minimal set of parentheses."""
    return _print(f, 0)


def _print(f: Formula, context: int) -> str:
    if isinstance(f, ConstTrue):
        return '1'
    if isinstance(f, ConstFalse):
        return '0'
    if isinstance(f, Atom):
        return f.name
    level = _PRECEDENCE[type(f)]
    if isinstance(f, Not):
        text = '!' + _print(f.arg, level)
    elif isinstance(f, And):
        # the parser is left-associative
        text = _print(f.left, level) + '*' + _print(f.right, level + 1)
    else:
        text = _print(f.left, level) + ' + ' + _print(f.right, level + 1)
    if level < context:
        return '(' + text + ')'
    return text


# ==================== Semantics ====================

def support(f: Formula) -> FrozenSet[Symbol]:
    """Return the set of atom names occurring in ``f`` (syntactic support)."""
    found = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            found.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(found)


def evaluate(f: Formula, present: Union[FrozenSet[Symbol], set]) -> bool:
    """Evaluate ``f`` with every symbol in ``present`` true and all others false."""
    if isinstance(f, Atom):
        return f.name in present
    if isinstance(f, ConstTrue):
        return True
    if isinstance(f, ConstFalse):
        return False
    if isinstance(f, Not):
        return not evaluate(f.arg, present)
    if isinstance(f, And):
        return evaluate(f.left, present) and evaluate(f.right, present)
    return evaluate(f.left, present) or evaluate(f.right, present)


def restrict(f: Formula, fixed: Mapping[Symbol, bool]) -> Formula:
    """Fix some atoms to constants and simplify.

    Args:
        f: Formula to restrict
        fixed: Partial assignment of atom names to truth values

    Returns:
        A formula whose support avoids ``fixed``; a formula left without atoms
        is always reduced to TRUE or FALSE.
    """
    return _restrict(f, fixed)


def _restrict(f: Formula, fixed: Mapping[Symbol, bool]) -> Formula:
    if isinstance(f, Atom):
        if f.name in fixed:
            return TRUE if fixed[f.name] else FALSE
        return f
    if isinstance(f, (ConstTrue, ConstFalse)):
        return f
    if isinstance(f, Not):
        return make_not(_restrict(f.arg, fixed))
    if isinstance(f, And):
        left = _restrict(f.left, fixed)
        if isinstance(left, ConstFalse):
            return FALSE
        return make_and(left, _restrict(f.right, fixed))
    left = _restrict(f.left, fixed)
    if isinstance(left, ConstTrue):
        return TRUE
    return make_or(left, _restrict(f.right, fixed))


def assignments(symbols: Iterable[Symbol]):
    """Yield every subset of ``symbols`` (as a frozenset of the true ones)."""
    ordered = sorted(set(symbols))
    for bits in itertools.product((False, True), repeat=len(ordered)):
        yield frozenset(s for s, bit in zip(ordered, bits) if bit)


def is_unsatisfiable(f: Formula) -> bool:
    """Decide exactly whether no assignment of the support makes ``f`` true."""
    if isinstance(f, ConstFalse):
        return True
    if isinstance(f, (ConstTrue, Atom)):
        return False
    return not any(evaluate(f, present) for present in assignments(support(f)))


def is_satisfiable(f: Formula) -> bool:
    return not is_unsatisfiable(f)


def is_tautology(f: Formula) -> bool:
    return is_unsatisfiable(make_not(f))


def equivalent(f: Formula, g: Formula) -> bool:
    """Semantic equivalence by truth table over the joint support."""
    symbols = support(f) | support(g)
    return all(evaluate(f, p) == evaluate(g, p) for p in assignments(symbols))

