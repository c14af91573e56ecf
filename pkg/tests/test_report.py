import json
import math

import pytest

from trialbf.effects import SEPreference, read_batch
from trialbf.export import dumps
from trialbf.report import UserPrior, build_report, human_bf, report_to_csv, report_to_table

from conftest import DATA, GOLDEN, assert_close


def two_trials_report(path=DATA / "two_trials.csv"):
    return build_report(read_batch(path), user_priors=(UserPrior(1.0, 1.0, "benefit"),))


def test_matches_golden():
    expected = json.loads((GOLDEN / "two_trials_report.json").read_text(encoding="utf-8"))
    assert_close(json.loads(dumps(two_trials_report())), expected)


def test_csv_and_json_batches_agree():
    assert dumps(two_trials_report(DATA / "two_trials.csv")) == dumps(two_trials_report(DATA / "two_trials.json"))


def test_headline_numbers_and_labels():
    trials = {t["label"]: t for t in two_trials_report()["trials"]}
    s, e = trials["screening"], trials["ecpr"]
    assert abs(s["max_bf"]["bf"] - 7.46) <= 0.01 and s["max_bf"]["category"] == "moderate_alt"
    assert abs(e["max_bf"]["bf"] - 4.31) <= 0.01 and e["max_bf"]["category"] == "moderate_alt"
    point = s["results"][0]
    assert point["name"] == "point_at_design_effect"
    assert point["bf"] < 1e-3 and point["category"] == "decisive_null"
    assert abs(point["log_bf"] + 118) <= 1
    assert e["results"][0]["bf"] == pytest.approx(2.0172119, rel=1e-6)


def test_reverse_intervals_in_report():
    trials = {t["label"]: t for t in two_trials_report()["trials"]}
    rs, re_ = trials["screening"]["reverse_point_prior"], trials["ecpr"]["reverse_point_prior"]
    assert rs["ratio_low"] == pytest.approx(0.9216, abs=1e-4) and rs["ratio_high"] == 1.0
    assert re_["ratio_low"] == 1.0 and re_["ratio_high"] == pytest.approx(2.6569, abs=1e-4)


def test_unit_information_entries(ex2):
    doc = build_report(read_batch(DATA / "two_trials.csv"), effective_n=100.0)
    ecpr = doc["trials"][1]
    names = [r["name"] for r in ecpr["results"]]
    assert names == ["unit_information", "unit_information_directional"]
    z2 = ex2.z**2
    closed = 0.5 * z2 * 100 / 101 - 0.5 * math.log(101)
    assert ecpr["results"][0]["log_bf"] == pytest.approx(closed, rel=1e-12)


def test_empty_batch(tmp_path):
    f = tmp_path / "empty.csv"
    f.write_text("label,estimate,scale,ci_lower,ci_upper,ci_level,p,direction,design_effect\n")
    doc = build_report(read_batch(f))
    assert doc["trials"] == [] and doc["schema_version"] == 1
    assert report_to_table(doc) == ""


def test_bad_rows_are_reported_not_fatal(tmp_path):
    f = tmp_path / "mixed.csv"
    f.write_text(
        "label,estimate,scale,ci_lower,ci_upper,ci_level,p,direction,design_effect\n"
        "negative,-0.5,HR,0.4,0.9,0.95,,below_one,\n"
        "fine,0.8,HR,0.6,1.05,0.95,,below_one,\n"
        "no-se,0.9,HR,,,,,below_one,\n"
    )
    doc = build_report(read_batch(f))
    status = [(t["label"], t["status"]) for t in doc["trials"]]
    assert status == [("negative", "error"), ("fine", "ok"), ("no-se", "error")]
    assert doc["trials"][0]["error"].startswith("negative:")
    assert doc["trials"][0]["error"].count("negative") == 1
    assert "no-se" in doc["trials"][2]["error"]
    rows = report_to_csv(doc).splitlines()
    assert rows[1].startswith("negative,error,")


def test_se_preference_override(tmp_path):
    f = tmp_path / "one.csv"
    f.write_text(
        "label,estimate,scale,ci_lower,ci_upper,ci_level,p,direction,design_effect\n"
        "screening,0.96,HR,0.92,1.00,0.95,0.045,below_one,0.7\n"
    )
    by_ci = build_report(read_batch(f), SEPreference.PREFER_CI)["trials"][0]
    by_p = build_report(read_batch(f), SEPreference.PREFER_P)["trials"][0]
    assert (by_ci["se_source"], by_p["se_source"]) == ("from_ci", "from_p")
    assert by_ci["sigma"] != by_p["sigma"]


def test_table_rounds_to_three_digits():
    table = report_to_table(two_trials_report())
    assert "max BF10 = 7.453 at HR 0.959" in table
    assert "4.28e-52 (decisive_null)" in table


def test_human_bf_extremes():
    assert human_bf(0.0) == "1"
    assert human_bf(-2000.0).startswith("10^-868.6")
    assert human_bf(math.log(7.4582)) == "7.46"


@pytest.mark.parametrize("text, expected", [
    ("0.7:0", UserPrior(0.7, 0.0, "none")),
    ("1:1:benefit", UserPrior(1.0, 1.0, "benefit")),
    (" 1.5 : 0.5 : above-one ", UserPrior(1.5, 0.5, "above-one")),
])
def test_user_prior_parse(text, expected):
    assert UserPrior.parse(text) == expected


@pytest.mark.parametrize("text", ["1", "1:2:3:4", "a:1"])
def test_user_prior_parse_rejects(text):
    with pytest.raises(ValueError):
        UserPrior.parse(text)
