import json
import math
import os
from pathlib import Path

import pytest

import fieldtrend as ft

FIXTURES = Path(os.environ.get("FIELDTREND_FIXTURES", Path(__file__).resolve().parents[1] / "fixtures"))
PHARMACOLOGY = [106329, 108973, 102513, 98490, 95686, 96452, 110376]


def pharmacology_corpus():
    return ft.load_counts((FIXTURES / "pharmacology.csv").read_text())


def test_pharmacology_fit():
    corpus = pharmacology_corpus()
    assert len(corpus) == 1
    assert corpus["CA01"].counts == PHARMACOLOGY
    (fit,) = ft.fit_all(corpus)
    # closed form on T = 0..6
    t = list(range(7))
    tbar, pbar = sum(t) / 7, sum(PHARMACOLOGY) / 7
    b1 = sum((a - tbar) * (p - pbar) for a, p in zip(t, PHARMACOLOGY)) / sum((a - tbar) ** 2 for a in t)
    assert fit.b1 == pytest.approx(b1, rel=1e-12)
    assert fit.b0 == pytest.approx(pbar - b1 * tbar, rel=1e-12)
    assert fit.hc_variant == "hc1"
    assert fit.ci_b1.contains(fit.b1)
    assert ft.year_over_year(corpus["CA01"]) == [2644, -6460, -4023, -2804, 766, 13924]


def test_sandwich_hand_example():
    fit = ft.ols_fit([0.0, 0.0, 3.0])
    assert fit.b1 == pytest.approx(1.5)
    assert ft.robust_variance(fit, "hc0")[1] == pytest.approx(0.125)
    assert ft.robust_variance(fit, "hc1")[1] == pytest.approx(0.375)


def test_t_quantile():
    assert ft.t_quantile(0.975, 5) == pytest.approx(2.570582, abs=1e-4)
    assert ft.t_quantile(0.5, 3) == 0.0
    assert ft.t_cdf(ft.t_quantile(0.9, 12), 12) == pytest.approx(0.9, abs=1e-10)


def test_errors_carry_kind_and_line():
    bad = "field_id,field_name,broad_section,year,count\nA,a,BIO,2014,1\nA,a,BIO,2014,2\n"
    with pytest.raises(ft.FieldtrendError) as info:
        ft.load_counts(bad)
    assert info.value.kind == "DuplicateCell"
    assert info.value.line == 3
    with pytest.raises(ValueError):
        ft.t_quantile(1.5, 3)


def test_drilldown_percentages():
    parent = ft.load_counts((FIXTURES / "sections_2020.csv").read_text())
    ct = ft.load_ct((FIXTURES / "ct_2020.csv").read_text(), parent)
    d = ft.drilldown(ct, "CA73", 2020, 10)
    assert d.top[0].ct_name == "Photoluminescence"
    assert round(d.top[0].percent, 2) == 5.94
    assert d.parent_total == 91580
    assert math.isclose(ft.percent_of(13172, 86209), 15.279, abs_tol=1e-3)


def test_synthetic_recovery_and_tables(tmp_path):
    spec = ft.SyntheticSpec()
    spec.n_fields = 12
    spec.noise_sd = 0.0
    spec.integral_coefficients = True
    spec.intercept_range = (20000.0, 90000.0)
    corpus, truth = ft.generate(spec)
    fits = ft.fit_all(corpus)
    for fit, field in zip(fits, truth):
        assert fit.series_id == field.field_id
        assert fit.b1 == pytest.approx(field.b1, rel=1e-9)
    ranked = ft.rank_by_slope(fits)
    assert ranked[-1].series_id == max(truth, key=lambda f: f.b1).field_id
    table = json.loads(ft.summary_table(corpus, "json"))
    assert len(table["rows"]) == 7
    assert ft.spaghetti_svg(corpus).endswith("</svg>\n")

    artifacts = ft.pipeline_report(corpus, tmp_path / "report")
    names = [a.name for a in artifacts]
    assert "summary.csv" in names and "rank.json" in names
    for a in artifacts:
        assert ft.sha256_hex((tmp_path / "report" / a.name).read_bytes().decode()) == a.sha256


def test_write_counts_round_trip():
    corpus = pharmacology_corpus()
    text = ft.write_counts(corpus)
    assert ft.load_counts(text) == corpus
    assert text == (FIXTURES / "pharmacology.csv").read_text()


def test_sample_titles_deterministic():
    rows = ft.load_titles((FIXTURES / "titles_2020.csv").read_text(encoding="utf-8"))
    a = ft.sample_titles(rows, "CA52", "Electric Current-Potential Relationship", 2020, 3, 11)
    b = ft.sample_titles(rows, "CA52", "Electric Current-Potential Relationship", 2020, 3, 11)
    assert a == b and len(a) == 3
