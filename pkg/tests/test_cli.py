import io
import json
import os

import pytest

import main
import settings

MODELS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'models')
PROC2 = os.path.join(MODELS, 'proc2.csm')

DEADLOCK = '''
machine M {
  init a;
  node a {}
  node b {}
  edge a -> b when "1";
}
system D { use M; }
check D "EF in(M.b)";
'''

CLASH = '''
machine A { init a; node a { emit msg_2; } edge a -> a when "msg_2"; }
machine B { init b; node b { emit msg_2; } edge b -> b when "1"; }
system Clash { use A, B; }
'''


@pytest.fixture(autouse=True)
def stored_settings(isolated_settings):
    return isolated_settings


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


class TestValidate:
    def test_clean_model(self):
        code, out, _ = run('validate', PROC2)
        assert code == 0
        assert '0 errors' in out

    def test_duplicate_producer(self, tmp_path):
        code, out, _ = run('validate', write(tmp_path, 'clash.csm', CLASH))
        assert code == 1
        assert 'duplicate producer msg_2' in out

    def test_missing_file(self, tmp_path):
        code, _, err = run('validate', str(tmp_path / 'missing.csm'))
        assert code == 2
        assert 'Failed to read input' in err

    def test_syntax_error(self, tmp_path):
        code, _, err = run('validate', write(tmp_path, 'bad.csm', 'machine {'))
        assert code == 2
        assert err.startswith('Error:')


class TestCheck:
    def test_embedded_checks_match(self):
        code, out, _ = run('check', PROC2, '--no-timing')
        assert code == 0
        assert 'Summary: 4 check(s), 0 mismatch(es)' in out

    def test_single_formula(self):
        code, out, _ = run('check', PROC2, '--formula', 'AG true', '--no-timing')
        assert code == 0
        assert '[1] Proc2: AG true  TRUE' in out

    def test_mismatch_exits_with_one(self, tmp_path):
        checks = write(tmp_path, 'wrong.checks', 'check Proc2 "AG true" expect FALSE;\n')
        code, out, _ = run('check', PROC2, '--checks', checks, '--no-timing')
        assert code == 1
        assert 'MISMATCH' in out

    def test_state_cap(self):
        code, _, err = run('check', PROC2, '--max-states', '2')
        assert code == 3
        assert 'Partial statistics' in err

    def test_deadlock(self, tmp_path):
        path = write(tmp_path, 'dead.csm', DEADLOCK)
        code, _, err = run('check', path)
        assert code == 4
        assert 'deadlock' in err
        code, out, _ = run('check', path, '--allow-deadlock', '--no-timing')
        assert code == 0
        assert 'TRUE' in out
        assert 'stutter' in out

    def test_deadlock_on_the_fly(self, tmp_path):
        path = write(tmp_path, 'dead.csm', DEADLOCK)
        code, _, err = run('check', path, '--formula', 'AG true', '--on-the-fly')
        assert code == 4
        assert 'deadlock' in err.lower()
        code, out, _ = run('check', path, '--formula', 'AG true', '--on-the-fly', '--allow-deadlock',
                           '--no-timing')
        assert code == 0
        assert 'stutter' in out

    def test_unknown_node(self):
        code, _, err = run('check', PROC2, '--formula', 'EF in(Proc_2.Nowhere)')
        assert code == 2
        assert 'Nowhere' in err

    def test_bad_formula(self):
        code, _, _ = run('check', PROC2, '--formula', 'AG AG')
        assert code == 2

    def test_on_the_fly(self):
        code, out, _ = run('check', PROC2, '--formula', 'AG !in(Proc_2.Put)', '--on-the-fly',
                           '--witness', '--no-timing')
        assert code == 0
        assert 'FALSE' in out
        assert 'on the fly' in out
        assert 'counterexample, path of 3 step(s)' in out

    def test_on_the_fly_needs_safety_formula(self):
        code, _, err = run('check', PROC2, '--formula', 'AF in(Proc_2.Put)', '--on-the-fly')
        assert code == 2
        assert '--on-the-fly' in err

    def test_repeated_runs_print_the_same(self):
        first = run('check', PROC2, '--witness', '--no-timing')
        second = run('check', PROC2, '--witness', '--no-timing')
        assert first[0] == second[0] == 0
        assert first[1] == second[1]

    def test_witness(self):
        code, out, _ = run('check', PROC2, '--formula', 'AF in(Proc_2.Put)', '--witness', '--no-timing')
        assert code == 0
        assert 'counterexample, lasso' in out

    def test_json_export(self, tmp_path):
        target = tmp_path / 'report.json'
        code, _, err = run('check', PROC2, '--json', str(target))
        assert code == 0
        data = json.loads(target.read_text(encoding='utf-8'))
        assert data['ok'] is True
        assert len(data['outcomes']) == 4
        assert data['products']['Proc2']['states'] == 5
        assert 'Report exported' in err

    def test_report_directory_setting(self, tmp_path):
        settings.set_report_directory(str(tmp_path))
        code, _, _ = run('check', PROC2, '--json', 'out.json')
        assert code == 0
        assert (tmp_path / 'out.json').exists()

    def test_nothing_to_check(self, tmp_path):
        code, _, err = run('check', write(tmp_path, 'clash.csm', CLASH.replace('msg_2; }', 'z; }', 1)))
        assert code == 2
        assert 'Nothing to check' in err


class TestOtherCommands:
    def test_product_stats(self):
        code, out, _ = run('product', PROC2, '--stats')
        assert code == 0
        assert 'states: 5' in out
        assert 'edges: 8' in out

    def test_product_plot_and_json(self, tmp_path):
        code, _, _ = run('product', PROC2, '--plot', str(tmp_path / 'profile.png'),
                         '--json', str(tmp_path / 'stats.json'))
        assert code == 0
        assert (tmp_path / 'profile.png').stat().st_size > 0
        assert json.loads((tmp_path / 'stats.json').read_text())['layers'] == [1, 1, 1, 1, 1]

    def test_product_refuses_invalid_system(self, tmp_path):
        code, _, err = run('product', write(tmp_path, 'clash.csm', CLASH))
        assert code == 1
        assert 'duplicate producer' in err

    def test_dot_machine(self):
        code, out, _ = run('dot', PROC2, '--machine', 'Proc_2')
        assert code == 0
        assert out.startswith('digraph Proc_2')

    def test_dot_product_to_file(self, tmp_path):
        target = tmp_path / 'product.dot'
        code, _, _ = run('dot', PROC2, '--system', 'Proc2', '--out', str(target))
        assert code == 0
        assert 'doublecircle' in target.read_text()

    def test_dot_refuses_invalid_system(self, tmp_path):
        target = tmp_path / 'clash.dot'
        code, _, err = run('dot', write(tmp_path, 'clash.csm', CLASH), '--system', 'Clash', '--out', str(target))
        assert code == 1
        assert 'Clash: ' in err
        assert 'duplicate producer' in err
        assert not target.exists()

    def test_settings(self, stored_settings):
        code, out, _ = run('settings', '--set', 'max_states=5000', '--set', 'log_level=info')
        assert code == 0
        assert 'max_states = 5000' in out
        assert json.loads(stored_settings.read_text())['log_level'] == 'INFO'
        code, out, _ = run('settings')
        assert code == 0
        assert "max_states: 5000" in out

    def test_bad_setting(self):
        code, _, err = run('settings', '--set', 'colour=blue')
        assert code == 2
        assert "Unknown setting 'colour'" in err

    def test_stored_cap_is_used(self):
        settings.set_max_states(2)
        code, _, _ = run('product', PROC2)
        assert code == 3

    def test_missing_command(self):
        with pytest.raises(SystemExit):
            run()
