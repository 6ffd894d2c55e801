"""Release provenance graphs mined from git history and GitHub issues."""

from .algebra import (
    base_releases,
    commit_history,
    commits_released,
    diff_commits,
    diff_issues,
    history,
    issue_history,
    issues_released,
    reworked_issues,
    tag_history,
)
from .gitlog import RawCommitRecord, git_log_command, parse_decorations, parse_log_stream
from .graph import RepoGraph, build_graph
from .issues import IssueSourceConfig, fetch_issues, load_issues_json
from .linking import LinkConfig, classify_issue, compare_versions, extract_issue_refs, is_release_tag, parse_semver
from .model import Commit, Developer, Issue, IssueKind, ReleaseTag, SemVer
from .provn import serialize_provn, to_dot, to_prov
from .reporting import changelog, project_overview, release_report

__version__ = "0.1.0"
