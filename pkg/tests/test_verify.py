import pytest

from src.utils.errors import LabError
from src.verify import suites
from src.verify.suites import run_suite, run_suites


@pytest.mark.parametrize("name", ["core", "krawtchouk"])
def test_fast_suites_pass(name):
    reports = run_suite(name)
    assert reports
    assert all(r.name.startswith(name + ".") for r in reports)
    assert all(r.passed for r in reports), [r for r in reports if not r.passed]


@pytest.mark.slow
@pytest.mark.parametrize("name", ["lp", "noise", "transform", "distinguish", "gaussmix"])
def test_remaining_suites_pass(name):
    reports = run_suite(name, threads=2)
    assert all(r.passed for r in reports), [r for r in reports if not r.passed]


def test_raising_check_is_reported_as_failure(monkeypatch):
    def boom():
        raise ValueError("broken check")

    monkeypatch.setitem(suites._REGISTRY, "core", [boom])
    (report,) = run_suite("core")
    assert not report.passed
    assert report.name == "core.boom"
    assert report.details["error"] == "broken check"


def test_run_suites_keeps_order(monkeypatch):
    monkeypatch.setitem(suites._REGISTRY, "core", [lambda: suites._report("core.a", True)])
    monkeypatch.setitem(suites._REGISTRY, "krawtchouk", [lambda: suites._report("krawtchouk.b", False)])
    reports = run_suites(["krawtchouk", "core"])
    assert [r.name for r in reports] == ["krawtchouk.b", "core.a"]


def test_unknown_suite():
    with pytest.raises(LabError):
        run_suite("everything")
