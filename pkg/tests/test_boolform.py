import random

import pytest

from boolform import (
    FALSE, TRUE, And, Atom, FormulaSyntaxError, Not, Or, assignments, equivalent, evaluate,
    is_satisfiable, is_tautology, is_unsatisfiable, make_and, make_not, make_or, parse_formula,
    print_formula, restrict, support,
)

from conftest import random_formula


class TestParse:
    def test_constant_one(self):
        assert parse_formula('1') == TRUE

    def test_constant_zero(self):
        assert parse_formula('0') == FALSE

    def test_complement(self):
        assert parse_formula('!stProc_2') == Not(Atom('stProc_2'))

    def test_precedence(self):
        expected = Or(And(Atom('a'), Not(Atom('b'))), Atom('c'))
        assert parse_formula('a*!b + c') == expected

    def test_parentheses_override_precedence(self):
        assert parse_formula('a*(b+c)') == And(Atom('a'), Or(Atom('b'), Atom('c')))

    def test_left_associative(self):
        assert parse_formula('a+b+c') == Or(Or(Atom('a'), Atom('b')), Atom('c'))

    def test_whitespace_is_insignificant(self):
        assert parse_formula('  a *\n !b ') == parse_formula('a*!b')

    @pytest.mark.parametrize('text', ['', '   ', 'a*', '(a', 'a b', 'a & b', '2', '!'])
    def test_syntax_errors(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse_formula(text)

    def test_error_carries_location(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula('a +\n* b')
        assert info.value.line == 2


class TestPrint:
    def test_minimal_parentheses(self):
        assert print_formula(parse_formula('(a*!b) + c')) == 'a*!b + c'
        assert print_formula(parse_formula('a*(b+c)')) == 'a*(b + c)'
        assert print_formula(parse_formula('!(a+b)')) == '!(a + b)'

    def test_right_nested_sum_keeps_parentheses(self):
        f = Or(Atom('a'), Or(Atom('b'), Atom('c')))
        assert parse_formula(print_formula(f)) == f

    def test_round_trip_random(self):
        rng = random.Random(7)
        for _ in range(300):
            f = random_formula(rng, ['a', 'b', 'c', 'd'])
            again = parse_formula(print_formula(f))
            assert again == f
            assert equivalent(again, f)


class TestEvaluate:
    def test_received_symbol(self):
        assert evaluate(parse_formula('stProc_2'), {'stProc_2'})

    def test_complement_of_received_symbol(self):
        assert not evaluate(parse_formula('!stProc_2'), {'stProc_2'})

    def test_constant_true_on_empty_set(self):
        assert evaluate(TRUE, frozenset())

    def test_absent_symbols_are_false(self):
        assert not evaluate(parse_formula('a + b'), {'c'})


class TestRestrict:
    def test_partial_restriction(self):
        f = restrict(parse_formula('a*!b + c'), {'a': True, 'c': False})
        assert support(f) == {'b'}
        assert equivalent(f, parse_formula('!b'))

    def test_full_restriction_gives_constant(self):
        assert restrict(Atom('x'), {'x': True}) == TRUE
        assert restrict(parse_formula('a*b'), {'a': False}) == FALSE

    def test_empty_restriction_is_equivalent(self):
        f = parse_formula('a+b')
        assert equivalent(restrict(f, {}), f)

    def test_constant_when_support_is_empty(self):
        f = And(TRUE, Not(FALSE))
        assert restrict(f, {}) == TRUE

    def test_soundness_random(self):
        rng = random.Random(11)
        atoms = ['a', 'b', 'c', 'd', 'e', 'f']
        for _ in range(300):
            f = random_formula(rng, atoms, depth=4)
            symbols = sorted(support(f))
            fixed_symbols = [s for s in symbols if rng.random() < 0.5]
            for present in assignments(symbols):
                fixed = {s: s in present for s in fixed_symbols}
                r = restrict(f, fixed)
                assert not (support(r) & set(fixed))
                assert evaluate(r, present) == evaluate(f, present)
                if not support(r):
                    assert r in (TRUE, FALSE)


class TestSatisfiability:
    def test_contradiction(self):
        assert is_unsatisfiable(parse_formula('a*!a'))

    def test_complement_is_satisfiable(self):
        assert not is_unsatisfiable(parse_formula('!stProc_2'))
        assert is_satisfiable(parse_formula('!stProc_2'))

    def test_tautology(self):
        assert is_tautology(parse_formula('x + !x'))
        assert not is_tautology(parse_formula('x'))

    def test_agrees_with_truth_table(self):
        rng = random.Random(3)
        atoms = [f"s{i}" for i in range(10)]
        for _ in range(200):
            f = random_formula(rng, atoms, depth=5)
            table = [evaluate(f, p) for p in assignments(support(f))]
            assert is_unsatisfiable(f) == (not any(table))


class TestSupport:
    def test_syntactic_support(self):
        assert support(parse_formula('a*!b + c')) == {'a', 'b', 'c'}
        assert support(TRUE) == frozenset()
        assert support(parse_formula('!x + x')) == {'x'}


class TestSmartConstructors:
    def test_unit_and_zero_laws(self):
        a = Atom('a')
        assert make_and(TRUE, a) == a
        assert make_and(a, FALSE) == FALSE
        assert make_or(FALSE, a) == a
        assert make_or(a, TRUE) == TRUE

    def test_double_negation(self):
        assert make_not(make_not(Atom('a'))) == Atom('a')
