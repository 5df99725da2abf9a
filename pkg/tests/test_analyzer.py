"""Pipeline verdicts, twist covariance, determinism, report contents."""

import json

from lubinlab import (
    CERTIFIED,
    Config,
    PadicNum,
    PSeries,
    REJECTED,
    analyze,
    analyze_fixture,
    batch_run,
    gm_pair,
    lt_pair,
    make_twist_fixture,
    summary_table,
)
from conftest import one_plus_x_pow, series_from_fractions

SMALL = Config(N=10, M=25)


def working(p, cfg=SMALL):
    return cfg.resolve(p).working_prec()


def test_gm_pair_certifies():
    p = 3
    f, u = gm_pair(p, SMALL.M, working(p))
    rep = analyze(f, u, SMALL, name="gm_p3")
    assert rep.verdict == CERTIFIED
    d = rep.data
    assert d["frobenius"]["pi_residue"] == "3"
    assert d["formal_group"]["min_coeff_valuation"] == 0
    assert d["hypotheses"]["root_count"] == p
    assert d["logarithm"]["methods_agree"]
    assert d["frobenius"]["lift_agrees"]


def test_lt_pair_certifies():
    p = 3
    f, u = lt_pair(p, SMALL.M, working(p))
    rep = analyze(f, u, SMALL, name="lt_p3")
    assert rep.verdict == CERTIFIED
    assert rep.data["frobenius"]["pi_residue"] == "3"


def test_additive_pair_rejected():
    p = 3
    f = series_from_fractions(p, [p], SMALL.M, working(p))
    u = series_from_fractions(p, [1 + p], SMALL.M, working(p))
    rep = analyze(f, u, SMALL, name="additive")
    assert rep.verdict == REJECTED
    assert "root-count" in rep.reason


def test_torsion_pair_rejected_with_caveat():
    p = 3
    f, _ = gm_pair(p, SMALL.M, working(p))
    u = one_plus_x_pow(p, -1, SMALL.M, working(p))
    rep = analyze(f, u, SMALL, name="torsion")
    assert rep.verdict == REJECTED
    assert "torsion" in rep.reason
    assert rep.data["hypotheses"]["torsion"]["identity_to_precision"]


def test_perturbed_pair_rejected_at_degree_two():
    p = 3
    f, u = gm_pair(p, SMALL.M, working(p))
    pert = PSeries(
        p, 1, SMALL.M, {(2,): PadicNum.from_int(p ** (SMALL.N - 1), p, working(p))}, working(p)
    )
    rep = analyze(f, u + pert, SMALL, name="perturbed")
    assert rep.verdict == REJECTED
    assert rep.data["hypotheses"]["commute"]["first_defect_degree"] == 2


def test_twist_covariance_pi_unchanged():
    p = 3
    Nw = working(p)
    base = analyze(*gm_pair(p, SMALL.M, Nw), SMALL, name="base")
    for wc in ([1, 1], [1, p, 1]):
        w = series_from_fractions(p, wc, SMALL.M, Nw)
        f, u = make_twist_fixture("gm", w)
        rep = analyze(f, u, SMALL, name="tw")
        assert rep.verdict == CERTIFIED
        assert rep.data["frobenius"]["pi_residue"] == base.data["frobenius"]["pi_residue"]


def test_identity_twist_is_base():
    p = 3
    Nw = working(p)
    w = PSeries.identity(p, SMALL.M, Nw)
    f, u = make_twist_fixture("gm", w)
    f0, u0 = gm_pair(p, SMALL.M, Nw)
    assert f.equal_to_precision(f0) and u.equal_to_precision(u0)


def test_determinism_byte_identical():
    p = 2
    cfg = Config(N=8, M=16)
    f, u = gm_pair(p, cfg.M, cfg.resolve(p).working_prec())
    r1 = analyze(f, u, cfg, name="det")
    r2 = analyze(f, u, cfg, name="det")
    assert r1.to_json() == r2.to_json()


def test_report_json_parses_and_has_config():
    p = 2
    cfg = Config(N=8, M=16)
    f, u = gm_pair(p, cfg.M, cfg.resolve(p).working_prec())
    rep = analyze(f, u, cfg)
    parsed = json.loads(rep.to_json())
    assert parsed["config"] == {"N": 8, "M": 16, "M2": 12, "guard": 20, "n_shape": 3}
    assert parsed["verdict"] == CERTIFIED


def test_batch_run_and_summary():
    fixtures = [
        {"name": "gm_p2", "p": 2, "N": 8, "M": 16, "f": "2,1@1", "u": "3,3,1@1"},
        {"name": "bad_pair", "p": 2, "N": 8, "M": 16, "f": "2,1@1", "u": "1,1@1"},
        {"name": "broken", "p": 2, "N": 8, "M": 16, "f": "2,1@1", "u": {"bogus": 1}},
    ]
    reports = batch_run(fixtures)
    names = [r.data["name"] for r in reports]
    assert names == sorted(names)
    verdicts = {r.data["name"]: r.verdict for r in reports}
    assert verdicts["gm_p2"] == CERTIFIED
    assert verdicts["bad_pair"] == REJECTED
    assert verdicts["broken"] == "INCONCLUSIVE"
    table = summary_table(reports)
    assert "gm_p2" in table and "CERTIFIED" in table
    assert len(table.splitlines()) == 2 + len(reports)


def test_batch_empty():
    assert batch_run([]) == []


def test_batch_threaded_matches_sequential(monkeypatch):
    fixtures = [
        {"name": "a_gm", "p": 2, "N": 8, "M": 16, "f": "2,1@1", "u": "3,3,1@1"},
        {"name": "b_bad", "p": 2, "N": 8, "M": 16, "f": "2,1@1", "u": "1,1@1"},
    ]
    seq = [r.to_json() for r in batch_run(fixtures)]
    monkeypatch.setenv("LUBINLAB_THREADS", "2")
    par = [r.to_json() for r in batch_run(fixtures)]
    assert seq == par


def test_fixture_roundtrip_series_json():
    p = 3
    Nw = working(p)
    f, u = gm_pair(p, SMALL.M, Nw)
    entry = {
        "name": "json_fixture",
        "p": p,
        "N": SMALL.N,
        "M": SMALL.M,
        "f": f.to_json(),
        "u": u.to_json(),
    }
    rep = analyze_fixture(entry, SMALL)
    assert rep.verdict == CERTIFIED


def test_monotone_precision_small_grid():
    p = 2
    f0, u0 = gm_pair(p, 40, 80)
    verdicts = {}
    for N in (6, 10):
        for M in (8, 16, 32):
            cfg = Config(N=N, M=M)
            rep = analyze(f0, u0, cfg)
            verdicts[(N, M)] = rep.verdict
    for (n1, m1), v1 in verdicts.items():
        for (n2, m2), v2 in verdicts.items():
            if n2 >= n1 and m2 >= m1 and v1 == CERTIFIED:
                assert v2 != REJECTED
