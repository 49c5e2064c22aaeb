"""
test_cli.py

Tests for the quasipath command line.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from src.qpcli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, build_parser, main
from src.qpcurves import Curve, write_curve_csv
from src.qpledger import MerkleProof, ReportLedger

SCENARIOS = Path(__file__).resolve().parents[2] / 'scenarios'
DOUBLE_WELL = str(SCENARIOS / 'double_well.yaml')


def read_report(out: Path) -> dict:
    return json.loads((out / 'report.json').read_text())


class TestParser:
    """Tests for argument parsing"""

    def test_commands(self):
        """Each command takes the shared flags"""
        args = build_parser().parse_args(['minimize', '--scenario', 'x.yaml', '--nodes', '64', '--seed', '3'])
        assert args.command == 'minimize'
        assert (args.nodes, args.seed, args.tol, args.out) == (64, 3, None, None)

    def test_scenario_required(self):
        """--scenario is mandatory"""
        with pytest.raises(SystemExit):
            build_parser().parse_args(['eval'])

    def test_unknown_command(self):
        """Unknown commands are rejected by the parser"""
        with pytest.raises(SystemExit):
            build_parser().parse_args(['plot', '--scenario', 'x.yaml'])


class TestEval:
    """Tests for the eval command"""

    def test_straight_segment(self, tmp_path, capsys):
        """eval prints S and records it in report.json"""
        curve = write_curve_csv(Curve(np.column_stack([np.linspace(-1, 1, 101), np.zeros(101)])),
                                tmp_path / 'segment.csv')
        out = tmp_path / 'out'
        code = main(['eval', '--scenario', DOUBLE_WELL, '--curve', str(curve), '--out', str(out)])
        assert code == EXIT_OK
        printed = float(capsys.readouterr().out.strip().splitlines()[0])
        report = read_report(out)
        assert report['report']['action'] == pytest.approx(printed)
        assert printed > 0
        assert (out / 'ledger.json').exists()
        assert (out / 'scenario.json').exists()

    def test_wrong_dimension(self, tmp_path):
        """A 3-D curve against a planar scenario fails"""
        curve = write_curve_csv(Curve(np.column_stack([np.linspace(0, 1, 11)] * 3)), tmp_path / 'c3.csv')
        code = main(['eval', '--scenario', DOUBLE_WELL, '--curve', str(curve), '--out', str(tmp_path / 'o')])
        assert code == EXIT_FAILED

    def test_curve_required(self, tmp_path):
        """eval without --curve is a usage error"""
        assert main(['eval', '--scenario', DOUBLE_WELL, '--out', str(tmp_path)]) == EXIT_CONFIG

    def test_missing_curve_file(self, tmp_path):
        """Unreadable curve files are usage errors"""
        code = main(['eval', '--scenario', DOUBLE_WELL, '--curve', str(tmp_path / 'none.csv'),
                     '--out', str(tmp_path)])
        assert code == EXIT_CONFIG


class TestCommands:
    """Tests for minimize, criteria and verify"""

    def test_missing_scenario(self, tmp_path):
        """Missing scenario files exit with the config status"""
        assert main(['verify', '--scenario', str(tmp_path / 'none.yaml')]) == EXIT_CONFIG

    def test_invalid_scenario(self, tmp_path):
        """Scenarios failing validation exit with the config status"""
        path = tmp_path / 'bad.yaml'
        path.write_text("name: bad\naction: {variant: sde_randers}\nfield: {name: no_such_field}\n")
        assert main(['verify', '--scenario', str(path), '--out', str(tmp_path / 'o')]) == EXIT_CONFIG

    def test_minimize(self, tmp_path):
        """minimize writes the curve, its summary and the report"""
        out = tmp_path / 'dw'
        code = main(['minimize', '--scenario', DOUBLE_WELL, '--out', str(out), '--nodes', '48', '--tol', '1e-5'])
        assert code == EXIT_OK
        for name in ('double_well.csv', 'double_well.json', 'report.json', 'ledger.json', 'scenario.json'):
            assert (out / name).exists()
        report = read_report(out)
        assert report['passed'] is True
        assert report['seed'] == 20240607
        assert report['report']['problem']['nodes'] == 48

    def test_criteria(self, tmp_path):
        """criteria writes verdict files and meets the coverage target"""
        out = tmp_path / 'annulus'
        code = main(['criteria', '--scenario', str(SCENARIOS / 'limit_cycle.yaml'), '--out', str(out)])
        assert code == EXIT_OK
        assert (out / 'verdicts.csv').exists()
        verdicts = json.loads((out / 'verdicts.json').read_text())
        assert verdicts['verdicts']

    def test_verify_limit_cycle(self, tmp_path):
        """Rejected loops are the expected outcome, so verify passes"""
        out = tmp_path / 'lc'
        code = main(['verify', '--scenario', str(SCENARIOS / 'limit_cycle.yaml'), '--out', str(out)])
        assert code == EXIT_OK
        report = read_report(out)['report']
        messages = [e['message'] for e in report['events'] if e['operation'] == 'admissibility']
        assert "'loop' rejected as expected" in messages
        assert report['passed'] is True


class TestLedgerOutput:
    """Tests for the ledger checks around every run"""

    def test_report_carries_inclusion_proof(self, tmp_path):
        """report.json proves its last entry against the root of ledger.json"""
        out = tmp_path / 'lc'
        assert main(['verify', '--scenario', str(SCENARIOS / 'limit_cycle.yaml'), '--out', str(out)]) == EXIT_OK
        section = read_report(out)['ledger']
        stored = ReportLedger.read(out / 'ledger.json')

        assert section['root'] == stored.root()
        assert section['entry_id'] == stored.get_all()[-1].entry_id
        proof = MerkleProof(section['proof']['leaf_hash'], [tuple(p) for p in section['proof']['path']],
                            section['proof']['root'])
        assert proof.verify()
        assert proof.leaf_hash == stored.get(section['entry_id']).hash()

    def test_integrity_failure(self, tmp_path, monkeypatch):
        """A ledger that fails its check stops the run before any file is written"""
        monkeypatch.setattr(ReportLedger, 'verify_integrity', lambda self: False)
        out = tmp_path / 'lc'
        code = main(['verify', '--scenario', str(SCENARIOS / 'limit_cycle.yaml'), '--out', str(out)])
        assert code == EXIT_FAILED
        assert not (out / 'report.json').exists()
        assert not (out / 'ledger.json').exists()
