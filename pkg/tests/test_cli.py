import json

import pytest

from daha_lab.cli import ConfigError, main, parse_q


def run(argv, tmp_path, name="out.json"):
    path = tmp_path / name
    status = main(argv + ["--emit", str(path)])
    return status, path


def test_daha_relations(tmp_path):
    status, path = run(["daha", "relations", "--rank1"], tmp_path)
    assert status == 0
    report = json.loads(path.read_text())
    assert report["schema"] == 1
    assert report["passed"] is True


def test_verlinde_report(tmp_path):
    status, path = run(["verlinde", "--N", "5", "--k", "1"], tmp_path)
    assert status == 0
    res = json.loads(path.read_text())["results"]
    assert res["dims"] == {"V": 6, "Vsym": 4}
    assert len(res["module"]["matrices"]["X"]) == 6


def test_deformed_at_root(tmp_path):
    status, path = run(["verlinde", "--m", "1", "--q", "root:5"], tmp_path)
    assert status == 0
    assert json.loads(path.read_text())["results"]["dims"] == {"V": 3, "Vsym": 2}


def test_identities_output_is_byte_identical(tmp_path):
    argv = ["identities", "--suite", "all", "--order", "80"]
    s1, p1 = run(argv, tmp_path, "a.json")
    s2, p2 = run(argv, tmp_path, "b.json")
    assert s1 == s2 == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_degenerate_and_padic(tmp_path):
    assert run(["degenerate", "--system", "A2", "--check", "rational"], tmp_path)[0] == 0
    assert run(["padic", "--check", "relations", "--ball", "8"], tmp_path)[0] == 0


def test_stdout_when_no_emit(capsys):
    assert main(["identities", "--suite", "gauss", "--N", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert all(c["verdict"] == "pass" for c in report["results"]["cases"])


@pytest.mark.parametrize("argv", [
    ["verlinde", "--N", "5", "--k", "x"],
    ["daha", "--bogus"],
])
def test_argument_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["identities", "--q", "formal", "--tol", "1e-8"],
    ["verlinde", "--N", "5"],
    ["verlinde", "--N", "4", "--k", "3"],
    ["identities", "--tol", "-1"],
    ["identities", "--order", "500"],
])
def test_configuration_errors_exit_2(argv):
    assert main(argv) == 2


def test_parse_q():
    assert parse_q("root:7").N == 7
    assert parse_q("num:0.5,0").value == 0.5
    with pytest.raises(ConfigError):
        parse_q("root:1")


def test_failing_check_exits_1(tmp_path, monkeypatch):
    from daha_lab import identities

    monkeypatch.setattr(identities, "noncyclotomic_gauss",
                        lambda m, *a, **kw: identities.IdentityCase("x", {}, 1, 2, "fail"))
    assert main(["identities", "--suite", "noncyclotomic", "--emit", str(tmp_path / "f.json")]) == 1


def test_cache_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("DAHA_LAB_CACHE", str(tmp_path))
    assert main(["daha", "macdonald", "--m", "2", "--emit", str(tmp_path / "m.json")]) == 0
    assert (tmp_path / "epsilon_A1.json").exists()
    assert main(["daha", "macdonald", "--m", "2", "--emit", str(tmp_path / "m2.json")]) == 0
