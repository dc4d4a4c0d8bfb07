"""The versioned regression corpus and its runner.

Each entry pins a parameter tuple to an expected classification together
with a provenance tag (PAPER for values printed in the governing clause,
DERIVED for instantiated arithmetic), the clause tag, and whether the
quotient group is small enough for the brute-force rank oracle.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from importlib import resources

from .classify import classify, tf_rank_oracle
from .errors import EndotrivError

ORACLE_LIMIT = 100_000


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    n: int
    q: int
    p: int
    det: int
    z: int
    expected: dict
    provenance: str
    clause: str
    cap_class: str

    @property
    def section(self) -> str:
        return self.clause.split(".")[0]


def load_corpus() -> list[CorpusEntry]:
    text = resources.files("endotriv").joinpath("data/corpus.tsv").read_text()
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, tup, expected, prov, clause, cap_class = \
            (f.strip() for f in line.split("|"))
        n, q, p, det, z = (int(x) for x in tup.split())
        out.append(CorpusEntry(name, n, q, p, det, z, json.loads(expected),
                               prov, clause, cap_class))
    return out


def _matches(entry: CorpusEntry, filters: dict[str, str]) -> bool:
    for key, val in filters.items():
        if key == "name" and val.lower() not in entry.name.lower():
            return False
        if key == "clause" and entry.clause != val:
            return False
        if key == "section" and not entry.clause.startswith(val):
            return False
        if key == "provenance" and entry.provenance != val:
            return False
        if key == "cap_class" and entry.cap_class != val:
            return False
    return True


def _same_structure(expected: dict, got: dict) -> bool:
    return (expected["rank"] == got["rank"]
            and list(expected["torsion"]) == list(got["torsion"]))


def _expected_matches(expected: dict, got: dict) -> bool:
    if expected.get("kind") == "extension":
        if got.get("kind") != "extension":
            return False
        return (_same_structure(expected["sub"], got["sub"])
                and _same_structure(expected["quot"], got["quot"]))
    return got.get("kind") == "abelian" and _same_structure(expected, got)


def run_corpus(filters: dict[str, str] | None = None, oracle: bool = False,
               cap: int | None = None) -> dict:
    """Execute every matching entry; with oracle=True also diff the
    brute-force rank count on enumerable entries."""
    filters = filters or {}
    entries = [e for e in load_corpus() if _matches(e, filters)]
    results = []
    counts = {"PASS": 0, "FAIL": 0, "SKIP": 0}
    t0 = time.perf_counter()
    for e in entries:
        row = {"name": e.name, "clause": e.clause, "provenance": e.provenance}
        try:
            tc = classify(e.n, e.q, e.p, e.det, e.z, cap=cap)
            got = tc.to_json()
            ok = _expected_matches(e.expected, got)
            row["status"] = "PASS" if ok else "FAIL"
            if not ok:
                row["expected"] = e.expected
                row["got"] = {k: got.get(k) for k in
                              ("kind", "rank", "torsion", "sub", "quot")}
        except EndotrivError as exc:
            row["status"] = "FAIL"
            row["error"] = f"{type(exc).__name__}: {exc}"
        if oracle and row["status"] == "PASS":
            if e.cap_class == "enumerable":
                orc = tf_rank_oracle(e.n, e.q, e.p, e.det, e.z, cap=cap)
                agree = orc.tf_rank == tc.tf_rank
                row["oracle"] = orc.to_json()
                row["oracle_status"] = "PASS" if agree else "FAIL"
                if not agree:
                    row["status"] = "FAIL"
            else:
                row["oracle_status"] = "SKIP"
        counts[row["status"]] = counts.get(row["status"], 0) + 1
        results.append(row)
    return {
        "entries": results,
        "counts": counts,
        "total": len(results),
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }
