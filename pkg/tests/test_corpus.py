import json

import pytest

from syzdisc.corpus.expected import EXPECTED_CASES, ExpectedCase, ExpectedEntry, expected_case, grid, polynomial_entries
from syzdisc.corpus.verify import verify, verify_all
from syzdisc.errors import CorpusError
from syzdisc.geometry.builtin import BUILTIN_GEOMETRIES
from syzdisc.render.tables import render_reports


@pytest.fixture(scope="module")
def reports():
    return {r.case: r for r in verify_all()}


@pytest.mark.parametrize("name", list(EXPECTED_CASES))
def test_case_passes(reports, name):
    report = reports[name]
    assert not report.mismatches, f"{name}: {[m.model_dump() for m in report.mismatches]}"
    assert report.residual_ok
    assert all(report.checks.values()), f"{name}: failed checks {report.checks}"
    assert report.passed
    assert report.runtime_seconds is None


def test_case_sizes():
    tables = {name: sum(e.target == "table" for e in case.entries) for name, case in EXPECTED_CASES.items()}
    assert tables["KP2-inner"] == 96
    assert tables["KP2-outer"] == 60
    assert tables["local-surface-A0"] == 30
    assert set(EXPECTED_CASES) == set(BUILTIN_GEOMETRIES)


def test_timing_is_opt_in():
    report = verify("C3", timing=True)
    assert report.runtime_seconds is not None
    assert report.matched == report.expected == 12


def test_unknown_case():
    with pytest.raises(CorpusError):
        expected_case("KP4")


def test_entries_must_fit_the_truncation():
    entry = ExpectedEntry(target="table", coordinates={"z2": 9}, value="1", source="test")
    with pytest.raises(CorpusError):
        ExpectedCase(name="bad", geometry=BUILTIN_GEOMETRIES["C3"], entries=(entry,))


def test_grid_shape_is_checked():
    with pytest.raises(CorpusError):
        grid(range(2), "z2", range(2), "q", [["1", "2"]], source="test")


def test_polynomial_entries():
    entries = polynomial_entries("1/2*q1**2 - q1*q2", ("q1", "q2"), {"z2": 1}, source="test")
    values = {tuple(sorted(e.coordinates.items())): e.value for e in entries}
    assert values == {
        (("q1", 2), ("q2", 0), ("z2", 1)): "1/2",
        (("q1", 1), ("q2", 1), ("z2", 1)): "-1",
    }


def test_json_report(reports):
    document = json.loads(render_reports([reports["C3"]], "json"))
    assert document[0]["case"] == "C3"
    assert document[0]["passed"] is True
    assert "runtime_seconds" not in document[0]


def test_pretty_report_lists_residual_once(reports):
    text = render_reports(list(reports.values()), "pretty")
    assert text.count("residual: ok") == len(reports), text
    without_check = reports["C3"].model_copy(update={"checks": {}})
    assert render_reports([without_check], "pretty").count("residual: ok") == 1


if __name__ == "__main__":
    pytest.main()
