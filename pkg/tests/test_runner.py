import pytest

from ctl import parse_ctl, print_ctl
from modelfmt import CheckSpec, parse_model
from report import render_report
from runner import UsageError, on_the_fly_applicable, require_on_the_fly, run_checks

TOY = '''
machine P { init p0; node p0 {} node p1 { emit x; } edge p0 -> p1 when "1"; edge p1 -> p1 when "1"; }
machine Q {
  init q0;
  node q0 {}
  node q1 {}
  edge q0 -> q1 when "x";
  edge q0 -> q0 when "!x";
  edge q1 -> q1 when "1";
}
machine R { init r; node r { emit x; } edge r -> r when "1"; }
system Toy { use P, Q; }
system Clash { use P, Q, R; }
check Toy "AG (in(Q.q1) | !in(P.p1) | in(Q.q0))" expect TRUE;
check Toy "EF in(Q.q1)" expect TRUE;
check Toy "AF in(Q.q1)" expect TRUE;
check Toy "AG in(Q.q0)" expect FALSE;
'''


@pytest.fixture
def model():
    return parse_model(TOY)


def test_outcomes_follow_check_order(model):
    report = run_checks(model, model.checks, workers=3)
    assert [o.formula for o in report.outcomes] == [print_ctl(parse_ctl(c.formula)) for c in model.checks]
    assert [o.verdict for o in report.outcomes] == [True, True, True, False]
    assert report.ok
    assert report.products['Toy']['states'] == 3


def test_one_product_per_system(model):
    report = run_checks(model, model.checks)
    assert list(report.products) == ['Toy']
    assert report.layers['Toy'] == (1, 1, 1)


def test_validation_errors_skip_the_checks(model):
    report = run_checks(model, [CheckSpec('Clash', 'AG true')])
    assert report.validation_errors == 1
    assert report.outcomes == []
    assert report.exit_code == 1
    assert any('duplicate producer x' in d for d in report.diagnostics)


def test_witnesses_are_rendered_and_validated(model):
    report = run_checks(model, [CheckSpec('Toy', 'AG in(Q.q0)')], want_witness=True)
    outcome = report.outcomes[0]
    assert outcome.witness_kind == 'path'
    assert outcome.witness_valid
    assert outcome.witness_text.startswith('path of 2 step(s)')


def test_on_the_fly_only_where_it_applies(model):
    report = run_checks(model, model.checks, on_the_fly=True)
    flags = [o.on_the_fly for o in report.outcomes]
    assert flags == [True, False, False, True]
    assert any('does not apply' in note for note in report.outcomes[1].notes)
    assert not report.outcomes[3].complete
    assert report.ok


def test_fair_flag_applies_to_every_check(model):
    report = run_checks(model, model.checks, fair=True)
    assert all(o.fair for o in report.outcomes)


def test_extra_systems_are_built():
    model = parse_model(TOY.replace('system Clash { use P, Q, R; }', 'system Solo { use P; }'))
    report = run_checks(model, model.checks, extra_systems=['Solo'])
    assert set(report.products) == {'Toy', 'Solo'}


def test_applicability():
    assert on_the_fly_applicable(parse_ctl('AG !in(P.p1)'), False)
    assert not on_the_fly_applicable(parse_ctl('AG !in(P.p1)'), True)
    assert not on_the_fly_applicable(parse_ctl('AG AF in(P.p1)'), False)
    assert not on_the_fly_applicable(parse_ctl('EF in(P.p1)'), False)
    with pytest.raises(UsageError):
        require_on_the_fly('EF in(P.p1)', False)


def test_repeated_runs_report_the_same(model):
    first = run_checks(model, model.checks, want_witness=True, workers=2)
    second = run_checks(model, model.checks, want_witness=True, workers=2)
    assert render_report(first, timing=False) == render_report(second, timing=False)
    assert first.to_dict(timing=False) == second.to_dict(timing=False)
