import csv
import io
import json

import pytest

from nagell import harness
from nagell.harness import (
    FAIL,
    PASS,
    REPORT_ONLY,
    ReportError,
    TheoremCheck,
    Witness,
    ascend,
    build_tables,
    check_bound_stability,
    check_sharpness,
    check_thm31,
    check_thm32,
    check_thm33,
    dumps_report,
    grid_rows,
    loads_report,
    run_checks,
)
from oracles import form_scan


def by_id(checks):
    return {c.theorem_id: c for c in checks}


def ks(check, n):
    return sorted({w.k for w in check.witnesses if w.n == n})


def test_thm31_odd_n():
    c = by_id(check_thm31([3, 5, 7], k_margin=8))["T31i"]
    assert c.verdict == PASS
    assert Witness(3, 6, 1, 7, 1) in c.witnesses
    assert ks(c, 3) == [6]
    assert ks(c, 5) == [6, 30]
    assert ks(c, 7) == [6, 30, 126]


def test_thm31_even_n():
    checks = by_id(check_thm31([2, 4], k_margin=8))
    c = checks["T31ii"]
    assert c.verdict == PASS
    assert ks(c, 2) == [2]
    assert all(k % 2 == 0 and k <= 14 for k in ks(c, 4))
    # odd n = 1 and the even n are skipped by part (i)
    assert checks["T31i"].skipped == [2, 4]


def test_thm31_n2_family_witness():
    c = by_id(check_thm31([2]))["T31ii"]
    (w,) = c.witnesses
    assert (w.k, w.x - w.y) == (2, 2) and w.x % 2 and w.y % 2


def test_thm32():
    checks = by_id(check_thm32([3, 4, 5], k_margin=8))
    assert checks["T32i"].verdict == PASS
    assert ks(checks["T32i"], 3) == [4, 6, 10]
    assert max(ks(checks["T32i"], 5)) == 34
    assert checks["T32i"].k_max >= 64 - 22
    assert checks["T32ii"].verdict == PASS
    assert all(k % 4 == 2 for k in ks(checks["T32ii"], 4))
    assert checks["T32i+"].verdict == REPORT_ONLY
    assert checks["T32i+"].counterexamples == []


def test_thm32_even_rule_mod4_reasoning():
    # x, y odd: x^2 + y^2 = 2 mod 8, so kxy = 2 + 2^n mod 8 forces k = 2 mod 4 when n >= 2
    for n in (2, 4, 6):
        for k in range(1, (1 << n) + 11):
            for x, y in form_scan(k, n, -1, 200):
                if x % 2 and y % 2:
                    assert k % 4 == 2


def test_thm33_part_one():
    checks = by_id(check_thm33([3, 5], p_max=50))
    c = checks["T33i"]
    assert c.verdict == PASS
    assert ks(c, 3) == [6] and ks(c, 5) == [6, 30]
    assert c.config["primes"] == [3, 5, 11, 13, 19, 29, 37, 43]


def test_thm33_part_two_is_report_only():
    c = by_id(check_thm33([3], p_max=50))["T33ii"]
    assert c.verdict == REPORT_ONLY
    assert ks(c, 3) == [4, 6, 10]
    assert c.counterexamples == []
    assert c.config["primes"] == [7, 17, 23, 31, 41, 47]


def test_thm33_part_two_lists_violations_without_failing():
    c = by_id(check_thm33([9], p_max=50))["T33ii"]
    assert c.verdict == REPORT_ONLY
    viol = {(w.n, w.k, w.p) for w in c.counterexamples}
    assert (9, 66, 17) in viol
    assert all(w.verify() for w in c.counterexamples)


def test_sharpness():
    c = check_sharpness([3, 5, 10])
    assert c.verdict == PASS
    got = {(w.n, w.k, w.sign, w.x, w.y) for w in c.witnesses}
    assert {(3, 6, 1, 7, 1), (3, 10, -1, 1, 1), (5, 30, 1, 31, 1), (10, 1022, 1, 1023, 1)} <= got


def test_sharpness_small_n():
    c = check_sharpness([0, 1, 2])
    assert c.skipped == [0, 1]
    assert c.verdict == PASS
    got = {(w.n, w.k, w.sign, w.x, w.y) for w in c.witnesses}
    # only the -2^n side exists for n < 2
    assert (0, 3, -1, 1, 1) in got and (1, 4, -1, 1, 1) in got
    assert not any(w.sign > 0 and w.n < 2 for w in c.witnesses)


def test_ascend_chain():
    assert ascend(7, 1, 6, 2) == [(7, 1), (41, 7), (239, 41)]
    assert ascend(1, 1, 10, 2) == [(1, 1), (9, 1), (89, 9)]


def test_verdict_follows_counterexamples():
    c = TheoremCheck("T31i", [3])
    c.counterexamples.append(Witness(3, 6, 1, 7, 1, reason="planted"))
    assert c.finish().verdict == FAIL
    c = TheoremCheck("T33ii", [3], report_only=True)
    c.counterexamples.append(Witness(3, 6, 1, 7, 1))
    assert c.finish().verdict == REPORT_ONLY


def test_report_roundtrip_and_schema():
    checks = run_checks("all", 6, 8, 50)
    text = dumps_report(checks)
    data = loads_report(text)
    assert [d["theorem"] for d in data] == ["T31i", "T31ii", "T32i", "T32ii", "T32i+", "T33i", "T33ii", "SHARP"]
    for entry in data:
        assert set(entry) == {"theorem", "config", "verdict", "witnesses", "counterexamples"}
        for w in entry["witnesses"]:
            assert isinstance(w["x"], str) and isinstance(w["y"], str)
            assert isinstance(w["n"], int) and isinstance(w["k"], int)


def test_report_deterministic():
    a = dumps_report(run_checks("all", 7, 8, 60))
    harness._row.cache_clear()
    b = dumps_report(run_checks("all", 7, 8, 60))
    assert a == b


def test_report_rejects_tampered_pair():
    data = json.loads(dumps_report(check_thm31([3])))
    data[0]["witnesses"][0]["x"] = "8"
    with pytest.raises(ReportError):
        loads_report(json.dumps(data))


def test_report_rejects_bad_shape():
    with pytest.raises(ReportError):
        loads_report("{}")
    with pytest.raises(ReportError):
        loads_report('[{"theorem": "T31i"}]')


def test_big_witness_serialization():
    w = Witness(20, (1 << 20) - 2, 1, (1 << 20) - 1, 1)
    assert w.verify()
    back = Witness.from_json(json.loads(json.dumps(w.to_json())))
    assert back == w


def test_build_tables():
    plus = build_tables(3, "+")
    assert plus.rows[3] == (3, [6], [6])
    minus = build_tables(3, "-")
    assert minus.rows[3][1] == [4, 6, 10]
    zero = build_tables(0, "-")
    assert zero.rows == [(0, [3], [3])]


def test_tables_csv_schema():
    table = build_tables(3, "-")
    rows = list(csv.DictReader(io.StringIO(table.to_csv())))
    assert list(rows[0]) == ["n", "k", "sign", "solvable", "odd_solution", "min_witness_x", "min_witness_y"]
    solvable = [(int(r["n"]), int(r["k"])) for r in rows if r["solvable"] == "1"]
    assert [k for n, k in solvable if n == 3] == [4, 6, 10]
    for r in rows:
        if r["solvable"] == "1":
            x, y, k, n = int(r["min_witness_x"]), int(r["min_witness_y"]), int(r["k"]), int(r["n"])
            assert x * x - k * x * y + y * y == -(1 << n)


def test_tables_consistent_with_scan():
    table = build_tables(5, "+")
    for n, solvable, odd in table.rows:
        for k in range(1, (1 << n) + 11):
            scan = form_scan(k, n, 1, 4 * ((1 << n) + k) + 16)
            assert (k in solvable) == bool(scan), (n, k)
            assert (k in odd) == any(x % 2 and y % 2 for x, y in scan), (n, k)


def test_bound_stability_sample():
    for n, sign in [(5, 1), (5, -1), (6, 1), (6, -1), (0, 1), (0, -1), (9, -1)]:
        assert check_bound_stability(n, sign, range(1, min((1 << n) + 11, 200))) == []


def test_parallel_grid_matches_serial():
    serial = grid_rows(9, -1, 600, workers=1)
    parallel = grid_rows(9, -1, 600, workers=2)
    assert serial == parallel


def test_run_checks_rejects_bad_config():
    with pytest.raises(ValueError):
        run_checks("4.1", 5)
    with pytest.raises(ValueError):
        run_checks("3.1", 0)


def test_workers_env(monkeypatch):
    monkeypatch.setenv("NAGELL_THREADS", "3")
    assert harness._workers() == 3
    monkeypatch.setenv("NAGELL_THREADS", "zero")
    with pytest.raises(ValueError):
        harness._workers()
