import json
import subprocess
import sys

import pytest
from hypothesis import given, settings

from sftacoe import cli
from sftacoe.acoe import identity_witness, inverse_witness, save_witness
from sftacoe.battery import Reason, distinguish, evidence, full_shift_size, verdict_from_evidence
from sftacoe.sft import validate

from conftest import BIG, FULL2, FULL3, GOLDEN, accepted_matrix


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, json.loads(capsys.readouterr().out)


class TestDistinguish:
    def test_full_shifts(self):
        v = distinguish(FULL2, FULL3)
        assert v.distinguished and v.reason is Reason.TRACE_PRIMES
        assert not distinguish(FULL2, [[1] * 4 for _ in range(4)]).distinguished

    def test_full_shift_vs_golden_mean(self):
        v = distinguish(FULL2, GOLDEN)
        assert v.distinguished and v.reason is Reason.PERRON_INTEGRALITY

    def test_matrix_and_transpose(self):
        v = distinguish(BIG, [list(r) for r in zip(*BIG)])
        assert not v.distinguished and v.outcome == "inconclusive"

    def test_one_by_one_full_shift(self):
        assert full_shift_size(validate([[3]], sft=False)) == 3
        assert not distinguish([[3]], FULL3).distinguished

    def test_zeta_is_never_decisive(self):
        # same Perron integrality, different zeta: stays inconclusive
        v = distinguish(GOLDEN, [[1, 1, 0], [0, 0, 1], [1, 1, 1]])
        assert not v.distinguished
        assert any("zeta" in n for n in v.evidence["notes"])

    @settings(max_examples=25, deadline=None)
    @given(accepted_matrix(max_n=3), accepted_matrix(max_n=3))
    def test_symmetric_and_reflexive(self, a, b):
        assert distinguish(a, b).outcome == distinguish(b, a).outcome
        assert distinguish(a, a).outcome == "inconclusive"

    @settings(max_examples=25, deadline=None)
    @given(accepted_matrix(max_n=3), accepted_matrix(max_n=3))
    def test_reproducible_from_serialised_evidence(self, a, b):
        v = distinguish(a, b)
        data = json.loads(json.dumps(v.to_json()))
        outcome, reason = verdict_from_evidence(data["evidence"]["a"], data["evidence"]["b"])
        assert outcome == v.outcome and reason == v.reason
        assert data["evidence"]["a"] == json.loads(json.dumps(evidence(a)))


class TestCli:
    def test_zeta(self, capsys):
        code, out = run(capsys, "zeta", "1 1;1 0", "--order", "5")
        assert code == 0
        assert out["rational"]["den"] == [1, -1, -1]
        assert out["series"] == ["1", "1", "2", "3", "5", "8"]

    def test_periodic_and_orbits(self, capsys):
        code, out = run(capsys, "periodic", "[[1,1],[1,1]]", "--order", "4")
        assert code == 0 and out["counts"] == [2, 4, 8, 16]
        code, out = run(capsys, "orbits", "19 5;4 1", "--order", "2")
        assert out["edge_shift"] is True
        assert out["count_by_length"] == {"1": 20, "2": (402 - 20) // 2}

    def test_kgroups(self, capsys):
        code, out = run(capsys, "kgroups", "1 1 1;1 1 1;1 1 1", "--max-stage", "3")
        assert code == 0
        assert out["bowen_franks"] == {"free_rank": 0, "torsion": [2]}
        assert out["ruelle_full_shift"]["K0"] == {"primes": [3]}
        assert len(out["stagewise"]["stage_groups"]) == 3

    def test_ck_verify(self, capsys):
        code, out = run(capsys, "ck-verify", "1 1;1 0", "--depth", "2")
        assert code == 0 and out["passed"]

    def test_freeness(self, capsys):
        code, out = run(capsys, "freeness", "1 1;1 0", "--n", "2", "--word", "1 2",
                        "--lambda0", "1/3")
        assert code == 0 and out["certificate"]
        assert out["distance_to_shift"] == "1/3"

    def test_acoe_check(self, capsys, tmp_path):
        w = tmp_path / "inverse.json"
        save_witness(inverse_witness(validate(GOLDEN)), w)
        code, out = run(capsys, "acoe-check", "1 1;1 0", "1 1;1 0", str(w))
        assert code == 0 and out["passed"]
        code, out = run(capsys, "acoe-check", "1 1;1 0", "1 1;1 0", str(w), "--depth", "0")
        assert code == 1 and not out["passed"]

    def test_acoe_check_from_files(self, capsys, tmp_path):
        a = tmp_path / "a.json"
        a.write_text(json.dumps({"n": 2, "rows": FULL2}))
        w = tmp_path / "id.json"
        save_witness(identity_witness(validate(FULL2)), w)
        code, out = run(capsys, "acoe-check", str(a), str(a), str(w))
        assert code == 0

    def test_distinguish_exit_codes(self, capsys):
        code, out = run(capsys, "distinguish", "1 1;1 1", "1 1 1;1 1 1;1 1 1")
        assert code == 1 and out["reason"] == "TracePrimes"
        code, out = run(capsys, "distinguish", "19 5;4 1", "19 4;5 1")
        assert code == 0 and out["outcome"] == "inconclusive"

    @pytest.mark.parametrize("argv", [
        ("zeta", "1 -1;1 0"),
        ("ck-verify", "0 1;1 0"),
        ("zeta", "1 1 1;1 1"),
        ("acoe-check", "1 1;1 0", "1 1;1 0", "/nonexistent/witness.json"),
    ])
    def test_bad_input(self, capsys, argv):
        code, out = run(capsys, *argv)
        assert code == 2 and "error" in out

    def test_console_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "sftacoe.cli", "periodic", "1 1;1 0",
                               "--order", "3"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["counts"] == [1, 3, 4]
