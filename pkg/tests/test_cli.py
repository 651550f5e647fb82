import json
import subprocess
import sys
from pathlib import Path

import pytest

from multinorm.cli import EXIT_CAP, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, main
from multinorm.scenario import parse_scenario

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


@pytest.mark.parametrize(
    "name, sha, certificate",
    [
        ("biquadratic.json", [2], "single-field"),
        ("biquadratic_split.json", [], "pollio"),
        ("vanishing.json", [], "demarche-wei"),
        ("repeated_field.json", [2], "single-field"),
        ("mixed_degrees.json", [2], "single-field"),
    ],
)
def test_compute_fixtures(capsys, name, sha, certificate):
    code, report = run_json(capsys, "compute", FIXTURES / name)
    assert code == EXIT_OK
    assert report["status"] == "exact"
    assert report["sha"] == sha and report["certificate"] == certificate


def test_bounds_and_oracle_resolution(capsys):
    path = FIXTURES / "three_biquadratics.json"
    code, report = run_json(capsys, "compute", path)
    assert code == EXIT_OK and report["status"] == "bounds"
    assert report["sha"] == {"lower": [], "upper_order": 2}
    code, report = run_json(capsys, "compute", path, "--oracle")
    assert report["status"] == "exact" and report["sha"] == [] and report["certificate"] == "oracle"


def test_oracle_check_records_pass(capsys):
    code, out, _ = run(capsys, "compute", FIXTURES / "vanishing.json", "--oracle-check", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["report"]["sha"] == []
    records = doc["verification"]
    assert records and all(r["verdict"] == "pass" for r in records)


def test_nonabelian_needs_the_oracle(capsys):
    path = FIXTURES / "s3_cubic.json"
    code, _, err = run(capsys, "compute", path)
    assert code == EXIT_INPUT and "--oracle" in err
    code, report = run_json(capsys, "compute", path, "--oracle")
    assert code == EXIT_OK and report["sha"] == [] and report["s_mod_d"] is None
    assert report["tamagawa"] == {"num": 1, "den": 1}


@pytest.mark.parametrize(
    "command, name, needle",
    [
        ("compute", "bad_coordinate.json", "K[0].gens[0][1]: coordinate 5 out of range"),
        ("cyclic", "bad_place.json", "e_i_v[1]"),
        ("compute", "missing.json", "cannot read"),
    ],
)
def test_invalid_input_exits_2(capsys, command, name, needle):
    code, _, err = run(capsys, command, FIXTURES / name)
    assert code == EXIT_INPUT
    assert needle in err


def large_scenario(tmp_path):
    path = tmp_path / "large.json"
    doc = {"group": {"invariant_factors": [2, 16]}, "K": [{"name": "K", "gens": [[1, 0]]}], "Kprime": [{"name": "M", "gens": [[0, 8]]}]}
    path.write_text(json.dumps(doc))
    return path


def test_cap_exceeded_exits_3(capsys, tmp_path):
    path = large_scenario(tmp_path)
    code, _, err = run(capsys, "compute", path, "--oracle-check")
    assert code == EXIT_CAP and "--cap 32" in err
    code, out, _ = run(capsys, "compute", path)
    assert code == EXIT_OK


def test_json_output_is_byte_identical(capsys):
    outs = [run(capsys, "compute", FIXTURES / "three_biquadratics.json", "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert outs[0] == json.dumps(json.loads(outs[0]), sort_keys=True, indent=2) + "\n"


def test_human_output_mentions_the_group(capsys):
    code, out, _ = run(capsys, "compute", FIXTURES / "biquadratic.json")
    assert code == EXIT_OK and "single-field" in out and "profile_note" in out


def test_cyclic_command(capsys):
    code, report = run_json(capsys, "cyclic", FIXTURES / "cyclic_split.json")
    assert code == EXIT_OK and report["sha"] == [2]
    code, report = run_json(capsys, "cyclic", FIXTURES / "cyclic_diagonal.json", "--paranoid")
    assert report["sha"] == []


def test_reduce_writes_a_parseable_scenario(capsys, tmp_path):
    out = tmp_path / "two.json"
    code, _, _ = run(capsys, "reduce", FIXTURES / "mixed_degrees.json", "--prime", 2, "-o", out)
    assert code == EXIT_OK
    reduced = parse_scenario(out.read_text())
    assert reduced.group.invariant_factors == (2, 2)
    code, report = run_json(capsys, "compute", out)
    assert report["sha"] == [2]


def test_reduce_rejects_a_composite(capsys):
    with pytest.raises(SystemExit) as err:
        main(["reduce", str(FIXTURES / "mixed_degrees.json"), "--prime", "4"])
    assert err.value.code == 2


def test_base_change_round_trip(capsys, tmp_path):
    out = tmp_path / "base.json"
    code, _, _ = run(capsys, "reduce", FIXTURES / "biquadratic_split.json", "--base-change", "-o", out)
    assert code == EXIT_OK
    assert parse_scenario(out.read_text()).group.order == 4


def test_tamagawa_command(capsys):
    assert run(capsys, "tamagawa", FIXTURES / "mixed_degrees.json")[1].strip() == "6/1"
    assert run(capsys, "tamagawa", FIXTURES / "biquadratic.json")[1].strip() == "2/1"
    assert run(capsys, "tamagawa", FIXTURES / "three_biquadratics.json")[1].strip() == "unavailable"
    assert run(capsys, "tamagawa", FIXTURES / "three_biquadratics.json", "--oracle")[1].strip() == "1/1"


def test_oracle_command(capsys):
    code, doc = run_json(capsys, "oracle", FIXTURES / "biquadratic.json", "-q", 2, "--module", "k-torus")
    assert code == EXIT_OK and doc["cohomology"] == [2] and doc["sha"] == [2]
    code, doc = run_json(capsys, "oracle", FIXTURES / "biquadratic.json", "-q", 1, "--module", "Z[G]")
    assert doc["cohomology"] == []


def test_directory_mode(capsys, tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    for name in ("biquadratic.json", "vanishing.json"):
        (src / name).write_text((FIXTURES / name).read_text())
    out = tmp_path / "out"
    code, _, _ = run(capsys, "compute", src, "--out-dir", out)
    assert code == EXIT_OK
    written = sorted(p.name for p in out.iterdir())
    assert written == ["biquadratic.report.json", "vanishing.report.json"]
    assert json.loads((out / "biquadratic.report.json").read_text())["sha"] == [2]
    (src / "broken.json").write_text((FIXTURES / "bad_coordinate.json").read_text())
    code, _, _ = run(capsys, "compute", src, "--out-dir", out)
    assert code == EXIT_INPUT


def test_verify_scenario_file(capsys):
    code, out, _ = run(capsys, "verify", FIXTURES / "three_biquadratics.json", "--json")
    assert code == EXIT_OK
    records = json.loads(out)["verification"]
    assert records and all(r["verdict"] == "pass" for r in records)


def test_verify_named_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "snf", "--suite", "wedge", "--json")
    assert code == EXIT_OK
    assert [r["suite"] for r in json.loads(out)] == ["snf", "wedge"]


def test_selftest_passes_on_a_small_corpus(capsys):
    code, _, _ = run(capsys, "selftest", "--cap", 4)
    assert code == EXIT_OK


def test_selftest_catches_an_injected_fault(capsys):
    code, _, _ = run(capsys, "selftest", "--cap", 4, "--inject-fault", "snf")
    assert code == EXIT_INTERNAL


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "multinorm", "compute", str(FIXTURES / "biquadratic.json"), "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["sha"] == [2]
