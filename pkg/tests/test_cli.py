import json

from endotriv import corpus as corpus_mod
from endotriv.cli import main
from endotriv.corpus import CorpusEntry, load_corpus, run_corpus


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_json_golden(capsys):
    code, out, _ = run_cli(capsys, "classify", "2", "5", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rank"] == 0 and payload["torsion"] == [2, 4]


def test_classify_verify(capsys):
    code, out, _ = run_cli(capsys, "classify", "3", "4", "3",
                           "--det", "1", "--z", "3", "--verify", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["oracle_status"] == "PASS"
    assert payload["oracle"]["n_G"] == 1


def test_json_round_trip_stability(capsys):
    for args in (("classify", "2", "5", "2"), ("classify", "2", "7", "3",
                                               "--det", "6", "--z", "6"),
                 ("params", "2", "5", "3"), ("oracle", "PSL(2,5)", "2")):
        code, out, _ = run_cli(capsys, *args, "--json")
        assert code == 0
        payload = json.loads(out)
        assert json.loads(json.dumps(payload, sort_keys=True)) == payload


def test_exit_code_domain_error(capsys):
    code, out, _ = run_cli(capsys, "classify", "2", "6", "2")
    assert code == 1
    assert json.loads(out)["error"] == "domain"


def test_exit_code_cap(capsys):
    code, out, _ = run_cli(capsys, "classify", "2", "7", "3",
                           "--det", "6", "--z", "6", "--cap", "10")
    assert code == 2
    assert json.loads(out)["error"] == "cap-exceeded"


def test_exit_code_ambiguous(capsys):
    code, out, _ = run_cli(capsys, "classify", "2", "5", "2",
                           "--det", "4", "--z", "2")
    assert code == 3
    payload = json.loads(out)
    assert payload["error"] == "ambiguous"
    assert payload["detail"] == {"r": 1, "s": 2, "t": 2, "q": 5}


def test_exit_code_usage(capsys):
    code, _, err = run_cli(capsys, "oracle", "SL(2,X)", "2")
    assert code == 64 and "usage" in err
    code2, _, err2 = run_cli(capsys, "corpus", "run", "--filter", "nonsense")
    assert code2 == 64
    code3, _, _ = run_cli(capsys, "classify", "2")
    assert code3 == 64


def test_rho_subcommand(capsys):
    code, out, _ = run_cli(capsys, "rho", "SL(2,5)", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["chain_orders"] == [8, 24, 24]
    assert payload["reached_normalizer"] is True


def test_certify_subcommand(capsys):
    code, out, _ = run_cli(capsys, "certify", "sl62", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdicts"][0]["verdict"] == "SKIPPED"


def test_sylow_subcommand(capsys):
    code, out, _ = run_cli(capsys, "sylow", "2", "5", "2", "--det", "4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["order"] == 32 and "wr" in payload["shape"]


def test_corpus_run_and_filters(capsys):
    code, out, _ = run_cli(capsys, "corpus", "run", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["counts"]["FAIL"] == 0 and report["total"] >= 20
    code2, out2, _ = run_cli(capsys, "corpus", "run",
                             "--filter", "section=n3-char3", "--json")
    report2 = json.loads(out2)
    assert 0 < report2["total"] < report["total"]
    assert all("n3-char3" in r["clause"] for r in report2["entries"])


def test_corpus_corrupted_entry_fails(monkeypatch):
    entries = load_corpus()
    bad = CorpusEntry("corrupted", 2, 5, 2, 1, 1,
                      {"rank": 0, "torsion": [2, 2]}, "DERIVED",
                      "n2-char2.B.1.a", "enumerable")
    monkeypatch.setattr(corpus_mod, "load_corpus", lambda: entries[:2] + [bad])
    report = corpus_mod.run_corpus()
    assert report["counts"]["FAIL"] == 1
    row = next(r for r in report["entries"] if r["name"] == "corrupted")
    assert row["status"] == "FAIL"
    assert row["expected"]["torsion"] == [2, 2]
    assert row["got"]["torsion"] == [2, 4]


def test_corpus_has_paper_citations():
    for e in load_corpus():
        if e.provenance == "PAPER":
            assert e.clause  # every pinned value names its clause
        assert e.cap_class in ("enumerable", "formula-only")
