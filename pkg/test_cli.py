"""Command-line front end: outputs, files and exit codes"""
import json

import pandas as pd
import pytest

from cli import main
from modules.code_core import code_read, read_comments
from modules.config import settings
from modules.manifest import MANIFEST_PREFIX, read_manifest


def _error_lines(err):
    return [line for line in err.splitlines() if line.startswith('error:')]


def test_construct_pseudo_product(tmp_path, capsys):
    out = tmp_path / 'pp.code'
    status = main(['construct', 'pseudo-product', '--cwc', 'builtin:cwc-4-2-2',
                   '--sys', 'builtin:lin-6-2-4', '--out', str(out)])
    assert status == 0
    code = code_read(str(out))
    assert len(code) == 16
    assert code.length == 24
    assert str(code.profile) == ','.join(['4:2'] * 6)
    assert read_comments(str(out))['provenance'].startswith('pseudo_product(')
    assert 'size=16' in capsys.readouterr().out


def test_construct_is_deterministic(tmp_path):
    first, second = tmp_path / 'a.code', tmp_path / 'b.code'
    args = ['construct', 'complement', '--code', 'builtin:lin-4-3-2']
    assert main(args + ['--out', str(first)]) == 0
    assert main(args + ['--out', str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert len(code_read(str(first))) == 8


def test_construct_to_stdout(capsys):
    assert main(['construct', 'design', '--family', 'affine', '--q', '2']) == 0
    out = capsys.readouterr().out
    assert out.startswith('# code q=2 len=8 d=4 profile=4:2,4:2')
    assert '# size=3' in out


def test_construct_expanded_reed_solomon(tmp_path):
    out = tmp_path / 'rs.code'
    assert main(['construct', 'rs', '--q', '3', '--len', '2', '--d', '2', '--expand', '--w', '1',
                 '--out', str(out)]) == 0
    code = code_read(str(out))
    assert len(code) == 3
    assert str(code.profile) == '3:1,3:1'
    assert code.claimed_distance == 4


def test_construct_failure_is_one_line(capsys):
    status = main(['construct', 'pseudo-product', '--cwc', 'builtin:sys-4-2-2', '--sys', 'builtin:lin-6-2-4'])
    assert status == 2
    lines = _error_lines(capsys.readouterr().err)
    assert len(lines) == 1
    assert lines[0].startswith('error: construction:')


def test_missing_code_file(capsys):
    assert main(['verify', 'no-such-file.code']) == 2
    assert _error_lines(capsys.readouterr().err)[0].startswith('error: code-format:')


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(['bound', '--m', 'x', '--n', '4', '--d', '4', '--w', '2'])
    assert excinfo.value.code == 2
    assert capsys.readouterr().err.startswith('error: usage:')


def test_verify_pass_and_fail(tmp_path, capsys):
    out = tmp_path / 'd.code'
    main(['construct', 'design', '--family', 'affine', '--q', '2', '--out', str(out)])
    capsys.readouterr()
    assert main(['verify', str(out)]) == 0
    report = capsys.readouterr().out
    assert report.startswith('PASS size=3 length=8 claimed_d=4 min_d=4')
    assert 'block 0: n=4 w=2 ok' in report

    assert main(['verify', str(out), '--d', '6']) == 1
    report = capsys.readouterr().out
    assert report.startswith('FAIL')
    assert 'violating pair' in report

    assert main(['verify', str(out), '--profile', '4:1,4:3']) == 1


def test_verify_json(capsys):
    assert main(['verify', 'builtin:cwc-4-2-2', '--json']) == 0
    assert '"passed": true' in capsys.readouterr().out


def test_design_generate_and_verify(tmp_path, capsys):
    out = tmp_path / 'k6.design'
    assert main(['design', 'generate', '--family', 'one-factorization', '--v', '6', '--out', str(out)]) == 0
    capsys.readouterr()
    assert main(['design', 'verify', str(out)]) == 0
    assert '"valid": true' in capsys.readouterr().out


def test_design_verify_rejects_incomplete(tmp_path, capsys):
    path = tmp_path / 'partial.design'
    path.write_text('# design v=4 k=2 t=2\n0,1|2,3\n0,2|1,3\n')
    assert main(['design', 'verify', str(path)]) == 1


def test_bound_exact(capsys):
    assert main(['bound', '--m', '2', '--n', '4', '--d', '4', '--w', '2', '--exact']) == 0
    assert capsys.readouterr().out.splitlines()[0] == 'lower=12 upper=12 exact'


def test_bound_records(capsys):
    assert main(['bound', '--m', '2', '--n', '3', '--d', '2', '--w', '1', '--records']) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == 'lower=9 upper=9 exact'
    assert 'tightness' in out


def _bound_manifest(out):
    lines = [line for line in out.splitlines() if line.startswith(MANIFEST_PREFIX)]
    assert len(lines) == 1
    return json.loads(lines[0][len(MANIFEST_PREFIX):])


def test_bound_carries_manifest(capsys):
    assert main(['bound', '--m', '2', '--n', '4', '--d', '4', '--w', '2']) == 0
    manifest = _bound_manifest(capsys.readouterr().out)
    assert manifest['subcommand'] == 'bound'
    assert manifest['params']['budget'] == settings.node_budget
    assert (manifest['params']['m'], manifest['params']['d']) == (2, 4)


def test_budget_flag_overrides_configured_budget(tmp_path, capsys):
    assert main(['--budget', '1234', 'bound', '--m', '2', '--n', '4', '--d', '4', '--w', '2']) == 0
    assert _bound_manifest(capsys.readouterr().out)['params']['budget'] == 1234
    out = tmp_path / 'bound.txt'
    assert main(['--out', str(out), 'bound', '--m', '2', '--n', '3', '--d', '2', '--w', '1']) == 0
    assert out.read_text().splitlines()[0] == 'lower=9 upper=9 exact'
    assert read_manifest(str(out))['params']['budget'] == settings.node_budget


def test_table_file(tmp_path):
    out = tmp_path / 'table.csv'
    assert main(['table', '--m', '1..2', '--n', '2..3', '--w', '1', '--out', str(out)]) == 0
    assert read_manifest(str(out))['subcommand'] == 'table'
    frame = pd.read_csv(out, comment='#')
    upper = frame['upper'].astype(str).map(float)
    assert (frame['lower'] <= upper).all()


def test_curves_file(tmp_path):
    out = tmp_path / 'curves.csv'
    assert main(['curves', '--grid-step', '0.01', '--out', str(out)]) == 0
    frame = pd.read_csv(out, comment='#')
    assert list(frame.columns) == ['curve', 'delta', 'rate']
    assert len(frame[frame['curve'] == 'gv']) == 51


def test_curves_unknown_name(capsys):
    assert main(['curves', '--curves', 'nope']) == 2
    assert _error_lines(capsys.readouterr().err)[0].startswith('error: domain:')


def test_puf_sim_is_reproducible(tmp_path):
    first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
    args = ['puf-sim', '--code', 'builtin:cwc-4-2-2', '--trials', '200', '--seed', '42']
    assert main(args + ['--out', str(first)]) == 0
    assert main(args + ['--out', str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    frame = pd.read_csv(first, comment='#')
    assert list(frame.columns) == ['pair_index', 'distance', 'flip_rate']
    assert len(frame) == 6
    assert '# summary: distance=2' in first.read_text()


def test_puf_sim_device_file(tmp_path):
    device = tmp_path / 'dev.json'
    saved, loaded = tmp_path / 'a.csv', tmp_path / 'b.csv'
    assert main(['puf-sim', '--code', 'builtin:cwc-4-2-2', '--trials', '100', '--seed', '3',
                 '--device-out', str(device), '--out', str(saved)]) == 0
    assert main(['puf-sim', '--code', 'builtin:cwc-4-2-2', '--trials', '100', '--seed', '3',
                 '--device-in', str(device), '--out', str(loaded)]) == 0
    first = pd.read_csv(saved, comment='#')
    second = pd.read_csv(loaded, comment='#')
    pd.testing.assert_frame_equal(first, second)
