import csv
import io
import json

import pytest

from unitri.cli import main, render
from unitri.spectral import cycle_l2_sum


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_tv_curve_k_at_zero(capsys):
    code, out, err = run(capsys, "tv-curve", "--walk", "K", "--p", "5", "--t-max", "0")
    assert code == 0
    assert out.splitlines()[0] == "t,tv,l2sq"
    assert float(rows(out)[0]["tv"]) == pytest.approx(0.8, abs=1e-15)
    assert json.loads(err)["states"] == 5


def test_tv_curve_t_mix(capsys):
    code, out, err = run(capsys, "tv-curve", "--walk", "P", "--n", "2", "--p", "5", "--t-max", "30", "--eps", "0.25")
    assert code == 0 and json.loads(err)["t_mix"] == 5
    assert len(rows(out)) == 31


def test_exact_and_float_agree(capsys):
    argv = ["tv-curve", "--walk", "Q", "--n", "3", "--p", "3", "--t-max", "8"]
    _, fl, _ = run(capsys, *argv)
    _, ex, _ = run(capsys, *argv, "--exact")
    for a, b in zip(rows(fl), rows(ex)):
        assert float(a["tv"]) == pytest.approx(float(b["tv"]), abs=1e-12)


def test_superclasses_n3_p3(capsys):
    code, out, err = run(capsys, "superclasses", "--n", "3", "--p", "3")
    assert code == 0
    got = rows(out)
    assert len(got) == 11
    assert sum(int(r["degree"]) for r in got) == 27
    assert json.loads(err)["degree_sum"] == 27


def test_bound_curve_k_is_cycle_sum(capsys):
    code, out, _ = run(capsys, "bound-curve", "--walk", "K", "--p", "7", "--t-max", "25")
    assert code == 0
    for r in rows(out):
        t = int(r["t"])
        assert float(r["rhs"]) == pytest.approx(cycle_l2_sum(7, 3, t), rel=1e-15)
        assert float(r["rhs"]) >= float(r["tv4sq"]) * (1 - 1e-12)


def test_bound_curve_p_dominates(capsys):
    code, out, err = run(capsys, "bound-curve", "--walk", "P", "--n", "2", "--p", "5", "--t-max", "60")
    assert code == 0 and json.loads(err)["A"] == "5"
    assert all(float(r["main_rhs"]) >= float(r["tv4sq"]) for r in rows(out))


def test_bound_curve_q_columns(capsys):
    code, out, _ = run(capsys, "bound-curve", "--n", "3", "--p", "5", "--t", "1", "--t-max", "10")
    assert code == 0
    for r in rows(out):
        assert float(r["rhs"]) >= float(r["plancherel"]) * (1 - 1e-9)
        assert float(r["plancherel"]) >= float(r["tv4sq"]) * (1 - 1e-9)


def test_spectrum_with_closed_form(capsys):
    code, out, _ = run(capsys, "spectrum", "--walk", "K", "--p", "11")
    assert code == 0
    for r in rows(out):
        assert float(r["eigenvalue"]) == pytest.approx(float(r["closed_form"]), abs=1e-9)


def test_words_and_compare(capsys):
    code, out, err = run(capsys, "words", "--n", "3", "--p", "5")
    assert code == 0 and all(r["ok"] == "true" and r["parity"] == "1" for r in rows(out))
    code, out, err = run(capsys, "compare", "--n", "2", "--p", "5")
    assert code == 0
    s = json.loads(err)
    assert s["A"] == "5" and s["spectral_ok"] is True


def test_json_mirrors_csv(capsys):
    argv = ["tv-curve", "--walk", "P", "--n", "3", "--p", "3", "--t-max", "10"]
    _, c, _ = run(capsys, *argv)
    _, j, _ = run(capsys, *argv, "--format", "json")
    recs = json.loads(j)
    assert [list(r) for r in recs][0] == ["t", "tv", "l2sq"]
    for a, b in zip(rows(c), recs):
        assert float(a["tv"]) == b["tv"] and int(a["t"]) == b["t"]


def test_reruns_are_byte_identical(tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"o{k}.csv"
        assert main(["bound-curve", "--n", "3", "--p", "3", "--t-max", "15", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1] and outs[0]


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("walk=K\np=5\nt-max=3\nformat=json\n")
    code, out, _ = run(capsys, "tv-curve", "--config", str(cfg))
    assert code == 0 and len(json.loads(out)) == 4
    code, out, _ = run(capsys, "tv-curve", "--config", str(cfg), "--p", "7", "--format", "csv")
    assert code == 0 and len(rows(out)) == 4
    assert float(rows(out)[0]["tv"]) == pytest.approx(6 / 7)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["tv-curve", "--walk", "P"],
        ["tv-curve", "--walk", "P", "--n", "2", "--p", "4"],
        ["tv-curve", "--walk", "Z", "--p", "5"],
        ["spectrum", "--config", "/nonexistent/unitri.cfg"],
        ["tv-curve", "--walk", "K", "--p", "5", "--t", "3", "--t-max", "2"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 1 and "usage error" in err


def test_capacity_error_exits_2(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("UNITRI_BUDGET_STATES", "100")
    cfg = tmp_path / "run.cfg"
    cfg.write_text("budget=100\n")
    code, _, err = run(capsys, "tv-curve", "--config", str(cfg), "--walk", "Q", "--n", "4", "--p", "3")
    assert code == 2 and "capacity error" in err


def test_invariant_failure_exits_3(capsys, monkeypatch):
    import unitri.superclass as sup

    monkeypatch.setattr(sup, "degree_identity_sum", lambda n, p: -1)
    code, out, err = run(capsys, "superclasses", "--n", "3", "--p", "3")
    assert code == 3 and out == ""
    assert json.loads(err)["failures"][0]["check"] == "degree_identity"


def test_verify_failure_exits_3(capsys, monkeypatch):
    import unitri.verify as verify

    forced = lambda: verify.CheckResult("k_spectrum", False, "forced")  # noqa: E731
    monkeypatch.setattr(verify, "CHECKS", (verify.check_degree_identity, forced))
    code, out, err = run(capsys, "verify")
    assert code == 3
    assert "k_spectrum,false,forced" in out
    assert json.loads(err)["failures"] == [{"check": "k_spectrum", "detail": "forced"}]


def test_render_formats():
    recs = [{"a": 1, "b": 0.1, "c": True}]
    assert render(recs, ["a", "b", "c"], "csv") == "a,b,c\n1,0.10000000000000001,true\n"
    assert json.loads(render(recs, ["a", "b", "c"], "json")) == recs
