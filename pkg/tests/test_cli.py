import csv
import json
import re
import shutil
from pathlib import Path

import pytest

from ptcsolve.cli import EXIT_INVARIANT, EXIT_IO, EXIT_NO_RESULT, EXIT_NOT_ELIGIBLE, EXIT_PARSE, EXIT_USAGE, main

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def files(tmp_path):
    for f in SCENARIOS.iterdir():
        shutil.copy(f, tmp_path / f.name)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_all_brooklyn(files, capsys):
    code, out, _ = run(capsys, "solve", files / "brooklyn.txt", "--method", "all")
    assert code == 0
    lines = {line.split()[0]: line for line in out.splitlines()}
    assert "cycle:2" in lines["irs"]
    assert "$5,875.00" in lines["simplified"] and "$0.00" in lines["simplified"]
    assert "$6,208.00" in lines["bisection"] and "$3,489.00" in lines["bisection"]
    assert "regime: theorem-bracket" in out


def test_json_matches_text(files, capsys):
    _, text, _ = run(capsys, "solve", files / "brooklyn.txt")
    _, js, _ = run(capsys, "solve", files / "brooklyn.txt", "--json")
    record = json.loads(js)
    for row in record["results"]:
        line = next(l for l in text.splitlines() if l.startswith(row["method"] + " "))
        amounts = [int(a.replace("$", "").replace(",", "").replace(".", "")) for a in re.findall(r"-?\$[\d,]+\.\d\d", line)]
        expected = [row["deduction_cents"], row["credit_cents"]] if row["deduction_cents"] is not None else []
        assert amounts == expected


def test_deterministic(files, capsys):
    first = run(capsys, "solve", files / "brooklyn.txt", "--json")
    second = run(capsys, "solve", files / "brooklyn.txt", "--json")
    assert first == second


def test_dutchess_fixed_deduction(files, capsys):
    code, out, _ = run(capsys, "solve", files / "dutchess.txt", "--method", "bisection", "--json")
    assert code == 0
    record = json.loads(out)
    assert record["expected_contribution_cents"] == 432000
    assert record["results"][0]["credit_cents"] == 168000
    assert record["results"][0]["deduction_cents"] == 0


def test_rounding_flag_beats_file(files, capsys):
    _, out, _ = run(capsys, "solve", files / "brooklyn.txt", "--method", "bisection", "--rounding", "exact", "--json")
    row = json.loads(out)["results"][0]
    assert row["deduction_cents"] == 620841
    assert json.loads(out)["scenario"]["rounding"] == "exact"


def test_solve_default_rounding_is_penny(files, capsys):
    (files / "nr.txt").write_text("fpl: 16240\npremium_annual: 9697\nincome: 71150\n")
    _, out, _ = run(capsys, "solve", files / "nr.txt", "--method", "simplified", "--json")
    assert json.loads(out)["scenario"]["rounding"] == "penny"
    _, out, _ = run(capsys, "trace", files / "nr.txt", "--json")
    assert json.loads(out)["scenario"]["rounding"] == "dollar"


def test_single_irs_nonconvergent_exit(files, capsys):
    code, out, _ = run(capsys, "solve", files / "brooklyn.txt", "--method", "irs")
    assert code == EXIT_NO_RESULT
    assert "cycle:2" in out


def test_oracle_method(files, capsys):
    code, out, _ = run(capsys, "solve", files / "constant_005.txt", "--method", "oracle", "--json")
    row = json.loads(out)["results"][0]
    assert code == 0 and (row["deduction_cents"], row["credit_cents"], row["feasible"]) == (142857, 357143, True)


def test_trace_brooklyn(files, capsys):
    code, out, _ = run(capsys, "trace", files / "brooklyn.txt")
    assert code == 0
    rows = [l.split() for l in out.splitlines() if re.match(r"\s+\d+\s", l)]
    assert rows == [["1", "$0.00", "$9,697.00"], ["2", "$3,822.00", "$5,875.00"], ["3", "$0.00", "$9,697.00"]]
    assert out.strip().endswith("status: cycle:2")


def test_trace_converged(files, capsys):
    _, out, _ = run(capsys, "trace", files / "constant_005.txt", "--json")
    record = json.loads(out)
    assert record["status"] == "converged"
    ds = [p["deduction_cents"] for p in record["points"]]
    # D_1 = Q, then settling oscillation around 1428.57 with shrinking amplitude
    gaps = [abs(d - 142857) for d in ds]
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))


def test_trace_one_step(files, capsys):
    _, out, _ = run(capsys, "trace", files / "brooklyn.txt", "--max-steps", "1", "--json")
    record = json.loads(out)
    assert len(record["points"]) == 1 and record["status"] == "cap"


def test_sweep(files, capsys, tmp_path):
    out_csv = tmp_path / "b.csv"
    code, out, _ = run(capsys, "sweep", files / "brooklyn.txt", "--min", "70000", "--max", "72000", "--step", "50", "--out", out_csv)
    assert code == 0
    rows = list(csv.reader(out_csv.open()))
    assert len(rows) == 42
    intervals = re.findall(r"\[\$([\d,]+)\.00, \$([\d,]+)\.00\]", out)
    assert any(int(a.replace(",", "")) <= 71150 <= int(b.replace(",", "")) for a, b in intervals)
    first = out_csv.read_bytes()
    run(capsys, "sweep", files / "brooklyn.txt", "--min", "70000", "--max", "72000", "--step", "50", "--out", out_csv)
    assert out_csv.read_bytes() == first


def test_sweep_single_row_and_empty_range(files, capsys, tmp_path):
    out_csv = tmp_path / "one.csv"
    code, _, _ = run(capsys, "sweep", files / "brooklyn.txt", "--min", "70000", "--max", "70010", "--step", "50", "--out", out_csv)
    assert code == 0 and len(list(csv.reader(out_csv.open()))) == 2
    code, _, err = run(capsys, "sweep", files / "brooklyn.txt", "--min", "72000", "--max", "70000", "--step", "50", "--out", out_csv)
    assert code == EXIT_USAGE and "empty income range" in err


def test_sweep_unwritable(files, capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", files / "brooklyn.txt", "--min", "70000", "--max", "70100", "--step", "50",
                     "--out", tmp_path / "missing" / "x.csv")
    assert code == EXIT_IO


def test_parse_error_names_line(files, capsys):
    bad = files / "bad.txt"
    bad.write_text("fpl: 16240\npremium_annual: 9697.123\nincome: 71150\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == EXIT_PARSE and "line 2" in err
    bad.write_text("fpl: 16240\nthis is not a key value line\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == EXIT_PARSE and "line 2" in err
    bad.write_text("fpl: 16240\nincome: 1\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == EXIT_PARSE and "premium_annual" in err


def test_invariant_violation(files, capsys):
    bad = files / "bad.txt"
    bad.write_text("fpl: 16240\npremium_annual: 9697\nincome: 5000\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == EXIT_INVARIANT and "line 3" in err
    (files / "gap.sched").write_text("1 2 0.02 0.03\n2.5 4 0.04 0.05\n")
    bad.write_text("fpl: 16240\npremium_annual: 9697\nincome: 71150\nschedule: gap.sched\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == EXIT_INVARIANT and "gap" in err


def test_not_eligible_exit(files, capsys):
    low = files / "low.txt"
    low.write_text("fpl: 16240\npremium_annual: 9697\nincome: 16000\n")
    code, out, _ = run(capsys, "solve", low, "--method", "bisection")
    assert code == EXIT_NOT_ELIGIBLE and "not-eligible" in out


def test_tax_brackets_key(files, capsys):
    f = files / "tax.txt"
    f.write_text("fpl: 16240\npremium_annual: 9697\nincome: 71150\nrounding: dollar\ntax_brackets: 0:0.10, 9525:0.12, 38700:0.22\n")
    code, out, _ = run(capsys, "solve", f, "--method", "bisection", "--json")
    assert code == 0 and json.loads(out)["results"][0]["credit_cents"] == 348900
    f.write_text("fpl: 16240\npremium_annual: 9697\nincome: 71150\ntax_brackets: 0:0.10, 100\n")
    code, _, err = run(capsys, "solve", f)
    assert code == EXIT_PARSE and "line 4" in err


def test_schedules_commands(files, capsys):
    code, out, _ = run(capsys, "schedules", "list")
    assert code == 0 and "builtin:2018" in out
    code, out, _ = run(capsys, "schedules", "show", "builtin:2018")
    assert "1.33 1.5 0.0302 0.0403" in out
    (files / "gap.sched").write_text("1 2 0.02 0.03\n2.5 4 0.04 0.05\n")
    code, out, _ = run(capsys, "schedules", "validate", files / "flat_005.sched", files / "gap.sched")
    assert code == EXIT_INVARIANT
    assert "flat_005.sched: ok" in out and "gap" in out
