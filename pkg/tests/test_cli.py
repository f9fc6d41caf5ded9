from __future__ import annotations

import csv
import io
import json

import pytest

from oracles import WELSCHINGER_P2, kontsevich
from realwdvv.cli import main
from realwdvv.potentials import InvariantTable
from realwdvv.target import model_to_json, p2, projective_space


@pytest.fixture
def run(tmp_path, capsys):
    cache = tmp_path / "cache"

    def _run(*argv, cached=True):
        pre = ["--cache-dir", str(cache)] if cached else ["--no-cache"]
        code = main(pre + [str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    _run.cache = cache
    return _run


def values(path):
    t = InvariantTable.load(p2(), path)
    return t, {k: t[k] for k in t.keys()}


def test_gw_dmax5(run, tmp_path):
    out = tmp_path / "gw.json"
    code, text, _ = run("gw", "--target", "p2", "--dmax", 5, "--out", out)
    assert code == 0
    t, _ = values(out)
    n = {k.degree[0]: t[k] for k in t.keys("complex") if any(k.degree)}
    assert n == kontsevich(5)
    assert "<pt^14>_[5] = 87304/1" in text


def test_gw_dmax1(run):
    code, text, _ = run("gw", "--dmax", 1, cached=False)
    assert code == 0 and text == "<pt^2>_[1] = 1/1\n"


def test_welschinger_dmax3(run, tmp_path):
    out = tmp_path / "w.json"
    code, text, _ = run("welschinger", "--dmax", 3, "--out", out)
    assert code == 0
    assert "parity and bound check: ok" in text
    assert "agree" in text
    t, _ = values(out)
    got = {(k.degree[0], k.k, k.insertions[2]): t[k] for k in t.keys("real") if any(k.degree)}
    assert got == {k: v for k, v in WELSCHINGER_P2.items() if k[0] <= 3}


def test_welschinger_dmax1_echoes_seeds(run):
    code, text, _ = run("welschinger", "--dmax", 1, "--no-cross-check", cached=False)
    assert code == 0
    assert text.splitlines()[:2] == ["<>_[1];k=2;default = 1/1", "<pt^1>_[1];k=0;default = 1/1"]


def test_corrupted_cache_is_recomputed(run, caplog):
    code, first, _ = run("gw", "--dmax", 3)
    files = list(run.cache.glob("complex-*.json"))
    assert code == 0 and len(files) == 1
    files[0].write_text("{truncated")
    with caplog.at_level("WARNING"):
        code, second, _ = run("gw", "--dmax", 3)
    assert code == 0 and second == first
    assert "corrupted cache" in caplog.text
    json.loads(files[0].read_text())   # rewritten


def test_cache_hit_equals_miss(run, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("welschinger", "--dmax", 2, "--out", a)[0] == 0
    assert run("welschinger", "--dmax", 2, "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.json"
    assert run("welschinger", "--dmax", 2, "--out", c, cached=False)[0] == 0
    assert a.read_bytes() == c.read_bytes()


def test_invalid_model_file(run, tmp_path):
    doc = model_to_json(p2())
    doc["pairing"][0][0] = "1/2"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run("gw", "--target", path)
    assert code == 2
    assert err.startswith("invalid model:") and "  - " in err


def test_unknown_target_and_bad_args(run):
    assert run("gw", "--target", "p9")[0] == 2
    assert run("gw", "--dmax", 0)[0] == 2
    assert run("export", "--dmax", 2)[0] == 2          # --csv or --json required


def test_inconsistent_model_exits_one(run, tmp_path):
    path = tmp_path / "plain.json"
    path.write_text(json.dumps(model_to_json(projective_space(2))))
    code, _, err = run("welschinger", "--target", path, "--dmax", 2, cached=False)
    assert code == 1 and "solve failed" in err


def test_real_solver_rejects_threefolds(run):
    assert run("welschinger", "--target", "p3", "--dmax", 1)[0] == 2


def test_verify_trr(run, tmp_path):
    rep = tmp_path / "trr.json"
    code, text, _ = run("verify", "trr", "--lmax", 6, "--real-bound", 6, "--json", rep)
    assert code == 0
    assert "mismatches: 0" in text
    doc = json.loads(rep.read_text())
    assert doc and json.dumps(doc).count('"match": false') == 0


def test_verify_thm3(run, tmp_path):
    rep = tmp_path / "thm3.json"
    code, text, _ = run("verify", "thm3", "--trials", 100, "--seed", 7, "--json", rep)
    assert code == 0
    for n in (1, 2, 3, 4):
        assert f"N={n}: 100/100 passed" in text
    assert "non-zero-divisor" in text
    first = rep.read_bytes()
    run("verify", "thm3", "--trials", 100, "--seed", 7, "--json", rep)
    assert rep.read_bytes() == first


def test_verify_wdvv(run):
    code, text, _ = run("verify", "wdvv", "--dmax", 3, "--max-degree", 8)
    assert code == 0 and "all residuals vanish" in text


def test_export_csv_and_json(run, tmp_path):
    code, text, _ = run("export", "--csv", "--dmax", 3)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert {r["value"] for r in rows if r["degree"] == "3"} == {"12/1"}
    code, text, _ = run("export", "--json", "--sector", "real", "--dmax", 2)
    assert code == 0
    entries = json.loads(text)["entries"]
    assert len(entries) == 1 + 2 + 3
    assert all(isinstance(r["value"], str) and "/" in r["value"] for r in entries)


def test_export_from_input_file(run, tmp_path):
    out = tmp_path / "gw.json"
    run("gw", "--dmax", 2, "--out", out)
    code, text, _ = run("export", "--csv", "--input", out)
    assert code == 0 and text.startswith("sector,degree,insertions")
    assert run("export", "--csv", "--input", tmp_path / "missing.json")[0] == 2


def test_outputs_are_deterministic(run, tmp_path):
    paths = [tmp_path / f"{i}.json" for i in range(2)]
    reports = [tmp_path / f"{i}.txt" for i in range(2)]
    for p, r in zip(paths, reports):
        assert run("gw", "--dmax", 4, "--out", p, "--report", r, cached=False)[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert reports[0].read_bytes() == reports[1].read_bytes()
