import json
import subprocess
import sys

import pytest

import metablock.invariants as invariants_module
from metablock.cli import build_record, main
from metablock.core import GroupParams
from metablock.invariants import InvariantSet
from metablock.report import CSV_COLUMNS, Check, ReportRecord, from_csv, to_csv, to_text


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_process(*argv):
    return subprocess.run([sys.executable, "-m", "metablock", *argv], capture_output=True, text=True)


class TestRecords:
    def test_json_round_trip(self, D125):
        rec = build_record(D125, 4)
        back = ReportRecord.from_json(rec.to_json())
        assert back == rec
        data = json.loads(rec.to_json())
        assert data["invariants"] == {"k": "26", "k0": "25", "k1": "1", "l": "4", "e": "4"}
        assert data["provenance"] == "proved"
        assert "timing_ns" not in data

    def test_timing_only_on_request(self, D27):
        rec = build_record(D27, 2)
        assert "timing_ns" in rec.to_dict(timing=True)
        assert ReportRecord.from_json(rec.to_json(timing=True)).timing_ns == rec.timing_ns

    def test_big_integers_survive(self):
        P = GroupParams(31, 8, 8, 7, allow_bigint=True)
        rec = build_record(P, 30)
        assert rec.invariants["k"] > 2**63
        assert ReportRecord.from_json(rec.to_json()).invariants == rec.invariants
        assert from_csv(to_csv([rec]))[0].invariants == rec.invariants

    def test_csv_round_trip(self, D27, D243):
        records = [build_record(D27, 2), build_record(D243, 2)]
        text = to_csv(records)
        assert text.splitlines()[0].split(",") == CSV_COLUMNS
        back = from_csv(text)
        assert [r.params for r in back] == [r.params for r in records]
        assert [[(c.name, c.passed) for c in r.checks] for r in back] == [
            [(c.name, c.passed) for c in r.checks] for r in records
        ]

    def test_text(self, D27):
        text = to_text(build_record(D27, 2))
        assert "k(B)=10" in text and "provenance: proved" in text

    def test_failed_check_flips_all_pass(self):
        rec = ReportRecord({"p": 3, "m": 2, "n": 1, "l": 1, "e": 2}, {"k": 1, "k0": 1, "k1": 0, "l": 1, "e": 2}, (Check("x", False),), "proved")
        assert not rec.all_pass


class TestCommands:
    def test_structure(self, capsys):
        code, out, _ = run(["structure", "--p", "3", "--m", "2", "--n", "1", "--l", "1"], capsys)
        assert code == 0 and "class count = 11" in out

    def test_structure_oracle(self, capsys):
        code, out, _ = run(["structure", "--p", "3", "--m", "2", "--n", "1", "--l", "1", "--oracle"], capsys)
        assert code == 0 and "closed-form = oracle: OK" in out

    def test_structure_json_general_l(self, capsys):
        code, out, _ = run(["structure", "--p", "3", "--m", "3", "--n", "2", "--l", "1", "--format", "json"], capsys)
        assert code == 0 and json.loads(out)["center"]["order"] == "3"

    def test_invalid_prime(self, capsys):
        code, _, err = run(["structure", "--p", "4", "--m", "2", "--n", "1"], capsys)
        assert code == 2 and "p must be an odd prime" in err

    def test_invariants(self, capsys):
        code, out, _ = run(["invariants", "--p", "5", "--m", "2", "--n", "1", "--e", "4", "--format", "json"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["invariants"] == {"k": "26", "k0": "25", "k1": "1", "l": "4", "e": "4"}
        assert data["provenance"] == "proved"

    def test_invariants_extrapolated(self, capsys):
        code, out, _ = run(["invariants", "--p", "7", "--m", "3", "--n", "1", "--e", "6", "--format", "csv"], capsys)
        assert code == 0 and from_csv(out)[0].provenance == "extrapolated"

    def test_invariants_p3(self, capsys):
        code, out, _ = run(["invariants", "--p", "3", "--m", "3", "--n", "2", "--e", "2", "--format", "json"], capsys)
        data = json.loads(out)
        assert data["invariants"]["k"] == "63" and data["provenance"] == "proved"

    def test_bad_e(self, capsys):
        code, _, err = run(["invariants", "--p", "5", "--m", "2", "--n", "1", "--e", "3"], capsys)
        assert code == 2 and "e must be a positive divisor" in err

    def test_fusion_listing(self, capsys):
        code, out, _ = run(["fusion", "--p", "3", "--m", "2", "--n", "1", "--e", "2", "--list", "--oracle"], capsys)
        assert code == 0
        assert "alpha-fixed D-classes: 3" in out and "orbits of length e: 4" in out
        assert out.count("orbit length 2") == 4

    def test_replay(self, capsys):
        code, out, _ = run(["replay", "--which", "primes", "--range", "5", "31"], capsys)
        assert code == 0 and "infeasible: {7, 11, 13, 17, 23, 29}" in out
        code, out, _ = run(["replay", "--which", "p5"], capsys)
        assert code == 0 and "witness=(0, 5, 0)" in out and out.count("infeasible") == 2
        code, out, _ = run(["replay", "--which", "amc", "--p", "3", "--m", "2", "--n", "1", "--e", "2", "--format", "json"], capsys)
        cert = json.loads(out)[0]["certificate"]
        assert cert["checked_values"]["L"] == "42" and cert["checked_values"]["U"] == "27"

    def test_replay_usage(self, capsys):
        assert run(["replay", "--which", "nonsense"], capsys)[0] == 2
        assert run(["replay", "--which", "amc"], capsys)[0] == 2
        assert run(["replay", "--which", "two-squares", "--p", "10007"], capsys)[0] == 2

    def test_oracle_cap(self, capsys):
        code, _, err = run(["oracle", "--p", "3", "--m", "5", "--n", "4", "--l", "4"], capsys)
        assert code == 2 and "oracle cap" in err
        code, out, _ = run(["oracle", "--p", "3", "--m", "2", "--n", "1", "--e", "2"], capsys)
        assert code == 0 and "oracle agrees" in out

    def test_verify_small(self, capsys):
        code, out, _ = run(["verify", "--sweep", "5", "3", "2"], capsys)
        assert code == 0 and "all checks passed" in out

    def test_verify_bad_bounds(self, capsys):
        assert run(["verify", "--sweep", "2", "3", "2"], capsys)[0] == 2
        assert run(["verify", "--sweep", "5", "3", "2", "--jobs", "0"], capsys)[0] == 2


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["invariants", "--p", "5", "--m", "2", "--n", "1", "--e", "4", "--format", "json"],
            ["fusion", "--p", "3", "--m", "3", "--n", "2", "--e", "2", "--list"],
            ["verify", "--sweep", "5", "3", "2", "--format", "json"],
            ["replay", "--which", "primes"],
        ],
    )
    def test_byte_identical(self, argv, capsys):
        outputs = {run(argv, capsys)[1] for _ in range(3)}
        assert len(outputs) == 1

    def test_jobs_do_not_change_output(self, capsys):
        serial = run(["verify", "--sweep", "5", "3", "2", "--format", "json"], capsys)[1]
        parallel = run(["verify", "--sweep", "5", "3", "2", "--format", "json", "--jobs", "2"], capsys)[1]
        assert serial == parallel

    def test_subprocess(self):
        first = run_process("invariants", "--p", "3", "--m", "2", "--n", "1", "--e", "2", "--format", "csv")
        second = run_process("invariants", "--p", "3", "--m", "2", "--n", "1", "--e", "2", "--format", "csv")
        assert first.returncode == 0 and first.stdout == second.stdout
        bad = run_process("structure", "--p", "9", "--m", "2", "--n", "1")
        assert bad.returncode == 2 and "p must be an odd prime" in bad.stderr


def _k1_off_by_one(real):
    def corrupted(P, e):
        inv = real(P, e)
        return InvariantSet(inv.k + 1, inv.k0, inv.k1 + 1, inv.l, inv.e, inv.source)

    return corrupted


class TestFaultInjection:
    def test_in_process(self, monkeypatch, capsys):
        monkeypatch.setattr(invariants_module, "invariants_reduction", _k1_off_by_one(invariants_module.invariants_reduction))
        code, out, _ = run(["verify", "--sweep", "3", "3", "2"], capsys)
        assert code == 1
        assert "FAIL fusion.ledger_plus_e_is_k at (p=3, m=2, n=1, l=1, e=1)" in out

    def test_corrupted_build_exits_1(self):
        script = (
            "import sys\n"
            "import metablock.invariants as inv\n"
            "real = inv.invariants_reduction\n"
            "def bad(P, e):\n"
            "    s = real(P, e)\n"
            "    return inv.InvariantSet(s.k + 1, s.k0, s.k1 + 1, s.l, s.e)\n"
            "inv.invariants_reduction = bad\n"
            "from metablock.cli import main\n"
            "sys.exit(main(['verify', '--sweep', '3', '3', '2', '--skip-oracle']))\n"
        )
        proc = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True)
        assert proc.returncode == 1
        assert "FAIL" in proc.stdout and "(p=3, m=2, n=1, l=1, e=1)" in proc.stdout


@pytest.mark.slow
def test_default_sweep_passes():
    from metablock import checks

    points = checks.grid(checks.DEFAULT_PRIMES, checks.DEFAULT_M_MAX, checks.DEFAULT_N_MAX)
    result = checks.run_sweep(points, jobs=2)
    assert result.ok, result.first_failure()
    assert len(result.results) > 9000
