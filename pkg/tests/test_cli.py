"""Command-line interface: exit codes, reports, determinism."""

import json

import pytest

from insertproc.cli import main
from insertproc.fixtures import fixture_names, fixture_text


@pytest.fixture()
def fixture_dir(tmp_path):
    for name in ("k2", "k3", "k4", "kite", "path4", "coloring3", "cyclic3"):
        (tmp_path / f"{name}.json").write_text(fixture_text(name))
    return tmp_path


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_fixture_registry_complete():
    names = fixture_names()
    for expected in ("k2", "k3", "k4", "k5", "k6", "k22", "k222", "k2222",
                     "kite", "path4", "cycle5", "coloring3"):
        assert expected in names
    with pytest.raises(KeyError):
        fixture_text("nope")


def test_check_c_verified(fixture_dir, capsys):
    code, out = run_cli(["check-c", "--graph", str(fixture_dir / "k3.json"),
                         "--max-n", "5"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["verified"] is True
    assert report["constants"]["1"] == "4"
    assert report["constants"]["2"] == "5"


def test_check_c_counterexample_exit(fixture_dir, capsys):
    code, out = run_cli(["check-c", "--graph", str(fixture_dir / "kite.json"),
                         "--max-n", "4"], capsys)
    assert code == 1
    report = json.loads(out)
    assert report["verified"] is False
    assert report["counterexample"]["word"] is not None


def test_check_kdep_counterexample(fixture_dir, capsys):
    code, out = run_cli(["check-kdep", "--graph", str(fixture_dir / "k3.json"),
                         "--k", "1"], capsys)
    assert code == 1
    report = json.loads(out)
    assert report["counterexample"]["x"] == [0]
    assert report["counterexample"]["y"] == [1]
    assert report["counterexample"]["lhs"] == "6"
    assert report["counterexample"]["expected"] == "8"


def test_check_kdep_verified(fixture_dir, capsys):
    code, out = run_cli(["check-kdep", "--graph", str(fixture_dir / "k4.json"),
                         "--k", "1"], capsys)
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_check_kdep_consistency_failure(fixture_dir, capsys):
    code, out = run_cli(["check-kdep", "--graph", str(fixture_dir / "kite.json"),
                         "--k", "1"], capsys)
    assert code == 1
    assert "consistency_failure" in json.loads(out)


def test_min_k(fixture_dir, capsys):
    code, out = run_cli(["min-k", "--graph", str(fixture_dir / "k4.json"),
                         "--max-k", "3"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["found"] == 1
    assert report["per_k"] == {"0": False, "1": True}

    code, out = run_cli(["min-k", "--graph", str(fixture_dir / "k2.json"),
                         "--max-k", "2"], capsys)
    assert code == 1
    assert json.loads(out)["found"] is None


def test_sample_ndjson(fixture_dir, capsys):
    code, out = run_cli(["sample", "--graph", str(fixture_dir / "k3.json"),
                         "--window", "3", "--count", "4", "--seed", "9"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    for line in lines:
        word = json.loads(line)
        assert len(word) == 3
        assert all(a != b for a, b in zip(word, word[1:]))


def test_sample_insertion_method(fixture_dir, capsys):
    code, out = run_cli(["sample", "--graph", str(fixture_dir / "k3.json"),
                         "--window", "4", "--count", "3", "--seed", "1",
                         "--method", "insertion"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 3


def test_sft_certify(fixture_dir, capsys):
    code, out = run_cli(["sft", "--file", str(fixture_dir / "coloring3.json"),
                         "--certify"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["lr"]["K"] == 2
    assert report["certificate"]["verdict"] == "not_finitely_dependent"


def test_sft_flag_alias(fixture_dir, capsys):
    code_a, out_a = run_cli(["sft", "--sft", str(fixture_dir / "cyclic3.json")],
                            capsys)
    code_b, out_b = run_cli(["sft", "--file", str(fixture_dir / "cyclic3.json")],
                            capsys)
    assert code_a == code_b == 0
    assert out_a == out_b


def test_sft_violation_exit(fixture_dir, tmp_path, capsys):
    bad = {"q": 3, "n": 2, "allowed": [[0, 1], [0, 2], [1, 0]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out = run_cli(["sft", "--sft", str(path)], capsys)
    assert code == 1
    assert json.loads(out)["lr"]["is_constant"] is False


def test_malformed_json_exit_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"vertices": 2, "weights": [[0, 1, ]}')
    code = main(["check-c", "--graph", str(path)])
    err = capsys.readouterr().err
    assert code == 2
    assert "line" in err and "column" in err


def test_missing_file_exit_two(tmp_path, capsys):
    code = main(["check-c", "--graph", str(tmp_path / "absent.json")])
    assert code == 2


def test_bound_exceeded_exit_two(fixture_dir, capsys):
    code = main(["check-c", "--graph", str(fixture_dir / "k4.json"),
                 "--max-n", "20"])
    err = capsys.readouterr().err
    assert code == 2
    assert "bound" in err


def test_usage_error_exit_two(capsys):
    assert main(["check-c"]) == 2
    assert main(["no-such-command"]) == 2


def test_analyze_report(fixture_dir, capsys):
    code, out = run_cli(["analyze", "--graph", str(fixture_dir / "kite.json")],
                        capsys)
    assert code == 0
    report = json.loads(out)
    assert report["vertices"] == 4
    assert report["kite"] == [0, 1, 2, 3]
    assert report["uniform_weight"]["is_uniform"] is True
    assert report["complete_multipartite"]["is_complete_multipartite"] is False


def test_analyze_path_graph(fixture_dir, capsys):
    code, out = run_cli(["analyze", "--graph", str(fixture_dir / "path4.json")],
                        capsys)
    report = json.loads(out)
    assert report["regular_out_degree"] is None
    assert report["directed_triangle"] is None


def test_report_determinism(fixture_dir, tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    for out in (out1, out2):
        code = main(["check-c", "--graph", str(fixture_dir / "k3.json"),
                     "--max-n", "4", "--out", str(out)])
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_pretty_flag(fixture_dir, capsys):
    code, out = run_cli(["check-c", "--graph", str(fixture_dir / "k3.json"),
                         "--max-n", "3", "--pretty"], capsys)
    assert code == 0
    assert out.startswith("{\n")
    json.loads(out)


def test_verify_identities_command(capsys):
    code, out = run_cli(["verify-identities", "--max-n", "4"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["all_passed"] is True
    assert report["closed_forms"] == {"2": True, "3": True, "4": True}
    assert all(s["ok"] for s in report["sweeps"])


def test_verify_identities_threads(capsys):
    code_a, out_a = run_cli(["verify-identities", "--max-n", "3"], capsys)
    code_b, out_b = run_cli(["verify-identities", "--max-n", "3",
                             "--threads", "2"], capsys)
    assert code_a == code_b == 0
    assert out_a == out_b
