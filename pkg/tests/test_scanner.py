import itertools
import json
from fractions import Fraction

import pytest

from circss import (
    ConfigurationError,
    ScanConfig,
    TableMismatchError,
    canonicalize,
    circulant,
    is_triangle_free,
    make_modulus,
    records_to_csv,
    records_to_json,
    reproduce_tables,
    scan,
    scan_summary,
    triangle_free_masks,
    verify_css_up_to,
)
from circss import scanner as scanner_mod


def conn_of(mask):
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def test_tf_masks_agree_with_library_predicate():
    for n in range(2, 13):
        flagged = {int(m) for m in triangle_free_masks(n)}
        for d in range(1, n):
            for conn in itertools.combinations(range(1, n), d):
                mask = 0
                for a in conn:
                    mask |= 1 << a
                assert (mask in flagged) == is_triangle_free(circulant(n, conn))


def test_config_validation_before_any_work():
    with pytest.raises(ConfigurationError):
        ScanConfig(d=0, n_lo=4, n_hi=6).validate()
    with pytest.raises(ConfigurationError):
        ScanConfig(d=2, n_lo=1, n_hi=6).validate()
    with pytest.raises(ConfigurationError):
        ScanConfig(d=2, n_lo=8, n_hi=6).validate()
    with pytest.raises(ConfigurationError):
        ScanConfig(d=2, n_lo=4, n_hi=6, mode="fancy").validate()
    with pytest.raises(ConfigurationError):
        scan(ScanConfig(d=2, n_lo=4, n_hi=30, mode="exact", exact_cap=22))


def test_scan_d1_n4_matches_expected_ladder():
    records = scan(ScanConfig(d=1, n_lo=4, n_hi=4, mode="exact"))
    by_conn = {r.conn: r for r in records}
    assert set(by_conn) == {(1,), (2,), (3,)}
    for a in (1, 3):
        rec = by_conn[(a,)]
        assert rec.triangle_free
        # 4h equals gamma_num here, so the tie falls through to the exact rung
        assert rec.height == 1 and rec.gamma_num == 4
        assert rec.verdict == "exact-pass"
        assert rec.beta == 1
    assert by_conn[(2,)].verdict == "skipped-not-triangle-free"
    assert by_conn[(2,)].beta is None


def test_scan_d1_n4_bound_only_leaves_beta_uncomputed():
    records = scan(ScanConfig(d=1, n_lo=4, n_hi=4, mode="bound-only"))
    by_conn = {r.conn: r for r in records}
    assert by_conn[(1,)].verdict == "beta-uncomputed"
    assert by_conn[(1,)].beta is None


def test_scan_d2_n7_exact():
    records = scan(ScanConfig(d=2, n_lo=7, n_hi=7, mode="exact"))
    assert len(records) == 15
    tf = [r for r in records if r.triangle_free]
    assert len(tf) == 6
    assert {r.canonical for r in tf} == {(1, 2), (1, 4)}
    assert all(r.verdict == "height-pass" for r in tf)  # 4*3 < 14
    assert all(
        r.verdict == "skipped-not-triangle-free" for r in records if not r.triangle_free
    )


def test_scan_n14_example_bound_only_vs_exact():
    rec = next(
        r
        for r in scan(ScanConfig(d=4, n_lo=14, n_hi=14, mode="bound-only"))
        if r.conn == (1, 2, 8, 9)
    )
    assert rec.triangle_free
    assert rec.height == 20 and rec.gamma_num == 70
    assert 4 * rec.height > rec.gamma_num
    assert rec.verdict == "beta-uncomputed"

    rec = next(
        r
        for r in scan(ScanConfig(d=4, n_lo=14, n_hi=14, mode="exact"))
        if r.conn == (1, 2, 8, 9)
    )
    assert rec.beta == 12
    assert rec.verdict == "exact-pass"


def test_scan_fast_path_rung():
    records = scan(ScanConfig(d=2, n_lo=9, n_hi=12, mode="exact"))
    for r in records:
        assert r.fast_path  # 4*2 <= 8 <= N-1
        if r.triangle_free:
            assert r.verdict == "fast-pass"
            assert r.beta is None


def test_large_n_never_needs_exact_solver():
    # every triangle-free record with N >= 4d+1 needs no exact solve
    for d in (1, 2, 3):
        records = scan(ScanConfig(d=d, n_lo=4 * d + 1, n_hi=4 * d + 4))
        for r in records:
            if r.triangle_free:
                assert r.verdict in ("fast-pass", "height-pass")


def test_verdict_soundness_self_certifying():
    records = scan(ScanConfig(d=3, n_lo=10, n_hi=12, mode="exact"))
    for r in records:
        if not r.triangle_free:
            expected = "skipped-not-triangle-free"
        elif 4 * r.d <= r.n - 1:
            expected = "fast-pass"
        elif 4 * r.height < r.gamma_num:
            expected = "height-pass"
        elif r.beta is not None:
            expected = "exact-pass" if 4 * r.beta <= r.gamma_num else "exact-fail"
        else:
            expected = "beta-uncomputed"
        assert r.verdict == expected
    assert any(r.verdict == "exact-pass" for r in records)  # the h = gamma/2 ties


def test_scan_dedupe_collapses_tuple_classes():
    records = scan(ScanConfig(d=2, n_lo=7, n_hi=7, dedupe=True))
    assert len(records) == 5
    assert [r.canonical for r in records] == sorted(
        {canonicalize(c, make_modulus(7)).canonical for c in itertools.combinations(range(1, 7), 2)}
    )


def test_scan_deterministic_and_parallel_equivalent():
    cfg = ScanConfig(d=2, n_lo=5, n_hi=9, mode="exact")
    a = scan(cfg)
    b = scan(cfg)
    assert a == b
    c = scan(cfg, jobs=2)
    assert a == c
    assert records_to_csv(a) == records_to_csv(c)


def test_records_order_is_n_then_lex():
    records = scan(ScanConfig(d=2, n_lo=5, n_hi=7))
    keys = [(r.n, r.conn) for r in records]
    assert keys == sorted(keys)


def test_csv_shape():
    records = scan(ScanConfig(d=2, n_lo=7, n_hi=7, mode="exact"))
    text = records_to_csv(records)
    lines = text.splitlines()
    assert lines[0] == "n,d,conn,canonical,triangle_free,height,gamma_num,fast_path,beta,verdict"
    assert len(lines) == 1 + 15 + 1
    assert lines[1] == "7,2,1|2,1|2,true,3,14,false,,height-pass"
    assert lines[-1].startswith("# summary records=15 ")
    assert text.endswith("\n") and "\r" not in text


def test_json_shape():
    records = scan(ScanConfig(d=1, n_lo=4, n_hi=4, mode="exact"))
    payload = json.loads(records_to_json(records))
    assert isinstance(payload, list)
    *recs, summary = payload
    assert len(recs) == 3
    assert recs[0]["conn"] == [1] and recs[0]["beta"] == 1
    assert summary == {"summary": scan_summary(records)}


def test_summary_counts():
    records = scan(ScanConfig(d=2, n_lo=7, n_hi=7, mode="exact"))
    s = scan_summary(records)
    assert s["records"] == 15
    assert s["triangle_free"] == 6
    assert s["height_pass"] == 6
    assert s["skipped"] == 9
    assert s["exact_fail"] == 0


def test_verify_css_small():
    outcome = verify_css_up_to(4)
    assert outcome.ok
    assert outcome.instances == 2
    assert outcome.counts == (((4, 1), 2),)
    assert outcome.max_ratio == Fraction(1, 1)
    assert outcome.max_ratio_at == (4, (1,))
    assert outcome.hamidoune_violations == ()


def test_verify_css_up_to_8():
    outcome = verify_css_up_to(8)
    assert outcome.ok
    assert outcome.instances == 34
    counts = dict(outcome.counts)
    assert counts[(7, 2)] == 6
    assert counts[(8, 2)] == 8
    # N=3 contributes nothing: every A there closes a short cycle
    assert not any(n == 3 for (n, _), _ in outcome.counts)


def test_verify_rejects_bad_config():
    with pytest.raises(ConfigurationError):
        verify_css_up_to(30, exact_cap=22)
    with pytest.raises(ConfigurationError):
        verify_css_up_to(1)


def test_verify_serialization_round_trip():
    obj = verify_css_up_to(6).to_obj()
    blob = json.dumps(obj)
    back = json.loads(blob)
    assert back["instances"] == 8
    assert back["failures"] == []
    assert back["max_ratio"]["denominator"] >= 1


def test_reproduce_tables_reference_rows():
    tables = reproduce_tables()
    assert set(tables) == {(2, 7), (2, 8), (3, 10), (3, 11), (3, 12)}

    d2_n7 = tables[(2, 7)]
    assert len(d2_n7) == 5
    assert all(row.in_reference for row in d2_n7)
    by_rep = {row.rep: row for row in d2_n7}
    assert by_rep[(1, 2)].height == 3 and by_rep[(1, 2)].triangle_free
    assert by_rep[(1, 6)].height == 7 and not by_rep[(1, 6)].triangle_free

    d2_n8 = tables[(2, 8)]
    assert len(d2_n8) == 12
    by_rep = {row.rep: row for row in d2_n8}
    assert by_rep[(2, 5)].height == 3 and by_rep[(2, 5)].triangle_free
    assert by_rep[(1, 5)].height == 6 and by_rep[(1, 5)].triangle_free
    assert by_rep[(1, 4)].height == 5 and not by_rep[(1, 4)].triangle_free

    d3_n10 = tables[(3, 10)]
    tf_rows = [row for row in d3_n10 if row.triangle_free]
    assert {(row.rep, row.height) for row in tf_rows} == {((1, 2, 3), 6), ((1, 4, 7), 6)}
    assert all(row.in_reference for row in tf_rows)

    d3_n11 = tables[(3, 11)]
    by_rep = {row.rep: row for row in d3_n11}
    assert by_rep[(1, 6, 7)].height == 6 and by_rep[(1, 6, 7)].in_reference
    # tuple-class enumeration finds set-equivalent extras beyond the reference
    extras = [r for r in d3_n11 if r.triangle_free and not r.in_reference]
    assert {r.rep for r in extras} == {(2, 5, 8), (3, 7, 9), (4, 5, 8), (5, 8, 10)}

    d3_n12 = tables[(3, 12)]
    by_rep = {row.rep: row for row in d3_n12}
    assert by_rep[(1, 5, 9)].height == 15 and by_rep[(1, 5, 9)].triangle_free


def test_reproduce_tables_detects_corruption(monkeypatch):
    bad = dict(scanner_mod.REFERENCE_TABLES)
    bad[(2, 7)] = (((1, 2), 4, True),) + bad[(2, 7)][1:]  # wrong height
    monkeypatch.setattr(scanner_mod, "REFERENCE_TABLES", bad)
    with pytest.raises(TableMismatchError):
        reproduce_tables()

    bad = dict(scanner_mod.REFERENCE_TABLES)
    bad[(2, 7)] = bad[(2, 7)][:-1]  # drop a row from a complete table
    monkeypatch.setattr(scanner_mod, "REFERENCE_TABLES", bad)
    with pytest.raises(TableMismatchError):
        reproduce_tables()

    bad = dict(scanner_mod.REFERENCE_TABLES)
    bad[(2, 7)] = (((1, 2), 3, False),) + bad[(2, 7)][1:]  # wrong star
    monkeypatch.setattr(scanner_mod, "REFERENCE_TABLES", bad)
    with pytest.raises(TableMismatchError):
        reproduce_tables()
