import pytest

from relprov.errors import EmptyRange, InvalidRange, NoReleases, UnknownTag
from relprov.gitlog import RawCommitRecord
from relprov.graph import build_graph
from relprov.model import IssueKind
from relprov.reporting import changelog, project_overview, release_report, releases_by_precedence

from conftest import load_fixture_graph


def test_merge_history_overview(merge_history):
    ov = project_overview(merge_history)
    assert ov.last_release == "3.2.1"
    assert (ov.release_count, ov.commit_count, ov.developer_count, ov.linked_issue_count) == (4, 7, 3, 3)
    text = ov.render()
    assert text.startswith("Project Overview\n- 3.2.1 is the last of 4 releases\n")
    assert "- 7 commits made by 3 developers\n- 3 issues linked\n\nDevelopers\n" in text
    assert text.splitlines()[6] == "- Alice Archer <alice@example.org>"
    assert len(ov.developers) == 3


def test_empty_overview():
    ov = project_overview(build_graph([]))
    assert ov.last_release is None
    assert (ov.release_count, ov.commit_count, ov.developer_count, ov.linked_issue_count) == (0, 0, 0, 0)
    assert "0 commits made by 0 developers" in ov.render()
    with pytest.raises(NoReleases):
        project_overview(build_graph([]), strict=True)


def test_releases_ordered_by_version_not_date(merge_history):
    assert [t.name for t in releases_by_precedence(merge_history)] == ["3.0.15", "3.1.3", "3.2.0", "3.2.1"]


def test_release_report_latest(merge_history):
    report = release_report(merge_history, "3.2.1")
    assert report.base_releases == ["3.2.0", "3.1.3"]
    assert report.commit_count == 1
    assert [i.number for i in report.issues] == [3]
    assert report.authors == ["Alice Archer <alice@example.org>"]
    text = report.render()
    assert text.splitlines()[:2] == ["Information about release 3.2.1", "Based on: 3.2.0 3.1.3"]
    assert "Commits: 1\n" in text
    assert text.endswith("Issues:\n- 3: Rework the exporter (feature)\n")


def test_release_report_first_release_has_no_bases(merge_history):
    report = release_report(merge_history, "3.0.15")
    assert report.base_releases == []
    assert "Based on:\n" in report.render()


def test_release_report_issue_kinds(merge_history):
    report = release_report(merge_history, "3.1.3")
    assert [(i.number, i.kind) for i in report.issues] == [(2, IssueKind.BUGFIX)]
    with pytest.raises(UnknownTag):
        release_report(merge_history, "nosuch")


def test_full_changelog(merge_history):
    log = changelog(merge_history)
    assert [e.release for e in log.entries] == ["3.2.1", "3.2.0", "3.1.3", "3.0.15"]
    by_release = {e.release: {i.number for i in e.features + e.bugfixes} for e in log.entries}
    assert by_release == {"3.2.1": {3}, "3.2.0": {1, 3}, "3.1.3": {2}, "3.0.15": set()}
    text = log.render()
    assert text.count("\n## ") == 4
    assert "### Bugfixes\n\n- #2 Crash when a tag is missing" in text
    assert "No linked issues." in text


def test_changelog_ranges(merge_history):
    assert [e.release for e in changelog(merge_history, "3.0.15", "3.2.1").entries] == ["3.2.1", "3.2.0", "3.1.3"]
    assert [e.release for e in changelog(merge_history, to_tag="3.1.3").entries] == ["3.1.3", "3.0.15"]
    assert [e.release for e in changelog(merge_history, from_tag="3.2.0").entries] == ["3.2.1"]
    with pytest.raises(InvalidRange):
        changelog(merge_history, "3.2.1", "3.2.0")
    with pytest.raises(EmptyRange):
        changelog(merge_history, "3.2.1", "3.2.1")
    with pytest.raises(UnknownTag):
        changelog(merge_history, "0.0.1")


def test_changelog_without_releases_is_empty_range():
    with pytest.raises(EmptyRange):
        changelog(build_graph([]))


def test_single_release_changelog():
    when = "2020-01-01T00:00:00+00:00"
    g = build_graph([RawCommitRecord("a", (), "A", "a@x", when, "A", "a@x", when, "tag: 0.1.0", "init #1")])
    (entry,) = changelog(g).entries
    assert entry.release == "0.1.0"
    assert [i.subject for i in entry.features] == ["(unknown)"]


def test_rendering_is_deterministic():
    a, b = load_fixture_graph("merge_history"), load_fixture_graph("merge_history")
    assert changelog(a).render() == changelog(b).render()
    assert project_overview(a).render() == project_overview(b).render()
    assert release_report(a, "3.2.1").render() == release_report(b, "3.2.1").render()
