import json
import subprocess
import sys

import numpy as np
import pytest

from charvar import cli, cxla, reps
from helpers import irreducible_su


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    assert code == 0, out.err
    return json.loads(out.out)


def write_rep(path, rep):
    path.write_text(json.dumps(rep.to_json()))
    return str(path)


def test_report_envelope(capsys):
    rep = report(capsys, "homology", "--twist", "4")
    assert set(rep) == {"subcommand", "inputs_digest", "results", "warnings", "version"}
    assert rep["subcommand"] == "homology"
    assert len(rep["inputs_digest"]) == 64
    assert rep["results"]["betti"] == [1, 0, 4]
    assert rep["results"]["cells"] == [10, 16, 11]


def test_classify_diagonal(tmp_path, capsys):
    z = cxla.from_turns(0.1)
    path = write_rep(tmp_path / "d.json", reps.Representation(3, "SU(2)", cxla.diag([z, 1 / z]), cxla.diag([1j, -1j])))
    res = report(capsys, "classify", path)["results"]
    assert res["partition"] == [1, 1]
    assert res["sigma"] in ([1, 1], [2])
    assert res["irreducible"] is False


def test_classify_irreducible(tmp_path, capsys):
    path = write_rep(tmp_path / "i.json", irreducible_su(2, 5, np.random.default_rng(0)))
    res = report(capsys, "classify", path)["results"]
    assert res["partition"] == [2]
    xi = complex(*res["xi"])
    assert min(abs(xi - 1), abs(xi + 1)) < 1e-8
    assert res["canonical_form"]["sigma"] == [1, 1]


def test_classify_relation_violation_warns(tmp_path, capsys):
    a = cxla.random_unitary(2, 1, special=True)
    b = cxla.random_unitary(2, 2, special=True)
    path = write_rep(tmp_path / "v.json", reps.Representation(3, "SU(2)", a, b))
    rep = report(capsys, "classify", path)
    assert rep["results"]["relation"]["ok"] is False
    assert any("relation" in w for w in rep["warnings"])


def test_classify_sl2(tmp_path, capsys):
    path = write_rep(
        tmp_path / "s.json", reps.Representation(2, "SL(2,C)", cxla.diag([1j, -1j]), [[0, -1], [1, 0]])
    )
    res = report(capsys, "classify", path)["results"]
    assert res["partition"] == [2]
    assert res["coords"]["kind"] == "irreducible"


def test_classify_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(capsys, "classify", str(bad))
    assert code == 2
    bad.write_text(json.dumps({"n": 2, "group": "SU(2)", "A": [[[2, 0], [0, 0]], [[0, 0], [1, 0]]]}))
    assert run(capsys, "classify", str(bad))[0] == 2
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 2


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["homology", "--twist", "2", "--bogus"])
    assert exc.value.code == 2


def test_enumerate(capsys):
    res = report(capsys, "enumerate", "--rank", "2", "--twist", "5")["results"]
    row = next(c for c in res["counts"] if c["sigma"] == [1, 1])
    assert row["enumerated"] == 4 and row["status"] == "match"
    res = report(capsys, "enumerate", "-r", "3", "-n", "7")["results"]
    row = next(c for c in res["counts"] if c["sigma"] == [1, 1, 1])
    assert row["enumerated"] == 15 and row["status"] == "match"
    rep = report(capsys, "enumerate", "-r", "2", "-n", "4")
    assert all(c["status"] == "conjectural" for c in rep["results"]["counts"])
    assert rep["warnings"]


def test_enumerate_range_error(capsys):
    assert run(capsys, "enumerate", "-r", "5", "-n", "3")[0] == 2
    assert run(capsys, "enumerate", "-r", "2", "-n", "100")[0] == 2


def test_retract_su2_constant(tmp_path, capsys):
    rep = irreducible_su(2, 3, np.random.default_rng(1))
    path = write_rep(tmp_path / "r.json", rep)
    trace = tmp_path / "trace.jsonl"
    res = report(capsys, "retract", "--input", path, "--steps", "5", "--trace", str(trace))["results"]
    lines = [json.loads(x) for x in trace.read_text().splitlines()]
    assert len(lines) == res["samples"] == 18
    for rec in lines:
        assert {"stage", "t", "a", "d", "p", "residual_constraint", "residual_relation"} <= set(rec)
        assert np.allclose(rec["a"], lines[0]["a"], atol=1e-12)
        assert np.allclose(rec["d"], lines[0]["d"], atol=1e-12)
    assert res["final_partition"] == [2]


def test_retract_sl2(tmp_path, capsys):
    rng = np.random.default_rng(2)
    lam = cxla.from_turns(1 / 8)
    p = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    p /= np.sqrt(np.linalg.det(p))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b /= np.sqrt(np.linalg.det(b))
    pinv = np.linalg.inv(p)
    rep = reps.Representation(4, "SL(2,C)", p @ cxla.diag([lam, 1 / lam]) @ pinv, p @ b @ pinv)
    res = report(capsys, "retract", "--input", write_rep(tmp_path / "s.json", rep))["results"]
    final = reps.Representation.from_json(res["final_representation"])
    assert reps.member_of("SU(2)", final.B) and reps.check_relation(final, 1e-8)[0]


def test_retract_wrong_group(tmp_path, capsys):
    path = write_rep(tmp_path / "u.json", reps.Representation(1, "U(2)", np.eye(2), np.eye(2)))
    assert run(capsys, "retract", "--input", path)[0] == 2


def test_homology_range(capsys):
    assert run(capsys, "homology", "--twist", "0")[0] == 2


def test_pillowcase(capsys):
    res = report(capsys, "pillowcase", "0.25", "0.75")["results"]
    assert res == {"s": 0.25, "t": 0.75, "orbifold": False}
    assert report(capsys, "pillowcase", "0.75", "0.25")["results"] == res
    assert report(capsys, "pillowcase", "0", "0.5")["results"]["orbifold"] is True
    assert report(capsys, "pillowcase", "1/3", "0.9")["results"]["s"] == pytest.approx(1 / 3)
    assert run(capsys, "pillowcase", "abc", "0")[0] == 2


def test_sample_irreducible(tmp_path, capsys):
    out = tmp_path / "irr"
    res = report(capsys, "sample", "--group", "SU(2)", "--stratum", "irreducible", "--count", "10",
                 "--seed", "42", "--twist", "5", "--out-dir", str(out))["results"]
    assert res["count"] == 10 and len(list(out.iterdir())) == 10
    for f in res["files"]:
        rep = reps.Representation.load(f)
        assert reps.decompose(rep).partition.sizes == (2,)
        assert reps.check_relation(rep)[0]


def test_sample_reducible(tmp_path, capsys):
    res = report(capsys, "sample", "--group", "SU(2)", "--stratum", "totally-reducible", "--count", "5",
                 "--seed", "7", "--out-dir", str(tmp_path / "red"))["results"]
    assert res["partitions"] == [[1, 1]] * 5


@pytest.mark.parametrize("group", ["SU(3)", "U(2)", "U(3)"])
def test_sample_other_groups(tmp_path, capsys, group):
    res = report(capsys, "sample", "--group", group, "--stratum", "irreducible", "--count", "3",
                 "--twist", "4", "--out-dir", str(tmp_path))["results"]
    assert res["partitions"] == [[int(group[-2])]] * 3


def test_sample_empty_stratum(tmp_path, capsys):
    rep = report(capsys, "sample", "--group", "SU(2)", "--stratum", "irreducible", "--count", "3",
                 "--twist", "1", "--out-dir", str(tmp_path / "none"))
    assert rep["results"]["empty"] is True and rep["results"]["count"] == 0
    assert rep["warnings"]
    assert not (tmp_path / "none").exists()


def test_sample_rejects_sl2(capsys, tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["sample", "--group", "SL(2,C)", "--stratum", "irreducible", "--out-dir", str(tmp_path)])


def test_sample_deterministic(tmp_path, capsys, monkeypatch):
    args = ["sample", "--group", "SU(3)", "--stratum", "irreducible", "--count", "4", "--twist", "5"]
    r1 = report(capsys, *args, "--seed", "3", "--out-dir", str(tmp_path / "a"))
    r2 = report(capsys, *args, "--seed", "3", "--out-dir", str(tmp_path / "a"))
    assert r1 == r2
    a = sorted(p.read_bytes() for p in (tmp_path / "a").iterdir())
    report(capsys, *args, "--seed", "3", "--out-dir", str(tmp_path / "b"))
    assert a == sorted(p.read_bytes() for p in (tmp_path / "b").iterdir())
    monkeypatch.setenv("CHARVAR_SEED", "3")
    r3 = report(capsys, *args, "--out-dir", str(tmp_path / "a"))
    assert r3 == r1


def test_bad_env_seed(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CHARVAR_SEED", "x")
    code, _ = run(capsys, "sample", "--group", "SU(2)", "--stratum", "totally-reducible", "--out-dir", str(tmp_path))
    assert code == 2


def test_pretty_and_determinism(capsys):
    code, out1 = run(capsys, "--pretty", "enumerate", "-r", "3", "-n", "4")
    code, out2 = run(capsys, "enumerate", "-r", "3", "-n", "4", "--pretty")
    assert out1.out == out2.out and "\n  " in out1.out
    assert json.loads(out1.out)["results"]["counts"]


def test_tolerance_flags_change_digest(capsys):
    r1 = report(capsys, "homology", "--twist", "2")
    r2 = report(capsys, "homology", "--twist", "2", "--tol-cluster", "1e-6")
    assert r1["inputs_digest"] != r2["inputs_digest"] and r1["results"] == r2["results"]


def test_help_lists_defaults(capsys):
    with pytest.raises(SystemExit):
        cli.main(["retract", "--help"])
    out = capsys.readouterr().out
    assert "default: 32" in out and "--tol-relation" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "charvar", "homology", "--twist", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["betti"] == [1, 0, 3]


def test_invariant_violation_exit_code(capsys, monkeypatch):
    def broken(n):
        raise AssertionError("quotient complex is not a chain complex")

    monkeypatch.setattr(cli.homology, "build_su2_model", broken)
    assert run(capsys, "homology", "--twist", "2")[0] == 3
