"""Command-line front end.

Exit codes: 0 success, 2 ingestion or parse failure, 3 configuration error,
4 unknown release tag, 5 empty changelog range.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlparse

from . import provn, reporting
from .errors import ConfigError, EmptyRange, IngestError, InvalidRange, RelprovError, UnknownTag
from .gitlog import parse_log_stream, read_repository
from .graph import RepoGraph, build_graph
from .issues import DEFAULT_BASE_URL, IssueSourceConfig, fetch_issues, load_issues_json
from .linking import LinkConfig

log = logging.getLogger("relprov")

EXIT_OK = 0
EXIT_INGEST = 2
EXIT_CONFIG = 3
EXIT_UNKNOWN_TAG = 4
EXIT_EMPTY_RANGE = 5

FORMATS = ("provn", "dot")

# config-file key -> CliConfig attribute / LinkConfig field
_CONFIG_KEYS = {
    "repo.path": "repo_path",
    "repo.log_file": "log_file",
    "issues.file": "issues_file",
    "issue_source.url": "issue_url",
    "issue_source.base_url": "issue_base_url",
    "issue_source.repo": "issue_repo",
    "issue_source.auth_token_env": "auth_token_env",
    "issue_source.page_size": "page_size",
    "link.issue_ref_pattern": "issue_ref_pattern",
    "link.bug_label_pattern": "bug_label_pattern",
    "link.release_tag_pattern": "release_tag_pattern",
    "output.path": "output",
}


@dataclass
class CliConfig:
    repo_path: Path | None = None
    log_file: Path | None = None
    issues_file: Path | None = None
    issue_source: IssueSourceConfig | None = None
    link: LinkConfig = field(default_factory=LinkConfig)
    output: Path | None = None

    def validate(self) -> None:
        if (self.repo_path is None) == (self.log_file is None):
            raise ConfigError("exactly one of --repo or --log-file is required")
        if self.issues_file is not None and self.issue_source is not None:
            raise ConfigError("use at most one of --issues-file and --issue-url")


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``section.key = value`` lines; ``#`` starts a comment line."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unrecognized setting {line!r}")
        values[_CONFIG_KEYS[key]] = value.strip()
    return values


def parse_issue_url(url: str) -> tuple[str, str]:
    """Split an issue tracker URL into ``(api base url, "owner/name")``.

    Accepts repository pages (``https://github.com/owner/name``) and API
    URLs (``https://api.github.com/repos/owner/name``, including GitHub
    Enterprise ``/api/v3`` prefixes).
    """
    parsed = urlparse(url)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise ConfigError(f"not an http(s) URL: {url!r}")
    path = parsed.path.strip("/")
    root = f"{parsed.scheme}://{parsed.netloc}"
    if "repos/" in path:
        prefix, _, rest = path.partition("repos/")
        parts = rest.split("/")
        base = f"{root}/{prefix.strip('/')}".rstrip("/")
    else:
        parts = path.split("/")
        base = DEFAULT_BASE_URL if parsed.netloc in ("github.com", "www.github.com") else root
    if len(parts) < 2 or not parts[0] or not parts[1]:
        raise ConfigError(f"cannot find owner/name in {url!r}")
    name = parts[1][:-4] if parts[1].endswith(".git") else parts[1]
    return base, f"{parts[0]}/{name}"


def resolve_config(args: argparse.Namespace) -> CliConfig:
    settings: dict[str, str] = {}
    if args.config:
        settings.update(read_config_file(args.config))
    flags = {
        "repo_path": args.repo,
        "log_file": args.log_file,
        "issues_file": args.issues_file,
        "issue_url": args.issue_url,
        "issue_ref_pattern": args.issue_ref_regex,
        "bug_label_pattern": args.bug_label_regex,
        "release_tag_pattern": args.release_regex,
        "output": args.output,
    }
    settings.update({k: v for k, v in flags.items() if v is not None})
    # a path given on the command line replaces the other source from the file
    if args.repo is not None:
        settings.pop("log_file", None)
    if args.log_file is not None:
        settings.pop("repo_path", None)
    if args.issues_file is not None:
        for key in ("issue_url", "issue_repo"):
            settings.pop(key, None)
    if args.issue_url is not None:
        settings.pop("issues_file", None)

    link_kwargs = {
        k: settings[k] for k in ("issue_ref_pattern", "bug_label_pattern", "release_tag_pattern") if k in settings
    }
    source = None
    if "issue_url" in settings or "issue_repo" in settings:
        if "issue_url" in settings:
            base, repo = parse_issue_url(settings["issue_url"])
        else:
            base, repo = DEFAULT_BASE_URL, settings["issue_repo"]
        base = settings.get("issue_base_url", base)
        try:
            page_size = int(settings.get("page_size", 100))
        except ValueError:
            raise ConfigError(f"page_size must be an integer, got {settings['page_size']!r}") from None
        source = IssueSourceConfig(
            repo=repo, base_url=base, auth_token_env=settings.get("auth_token_env"), page_size=page_size
        )

    def path(key: str) -> Path | None:
        return Path(settings[key]) if key in settings else None

    config = CliConfig(
        repo_path=path("repo_path"),
        log_file=path("log_file"),
        issues_file=path("issues_file"),
        issue_source=source,
        link=LinkConfig(**link_kwargs),
        output=path("output"),
    )
    config.validate()
    return config


def load_graph(config: CliConfig) -> RepoGraph:
    """Ingest commits and issues (concurrently) and build the graph."""

    def commits():
        if config.log_file is not None:
            try:
                with open(config.log_file, "rb") as fh:
                    return parse_log_stream(fh), {}
            except OSError as exc:
                raise IngestError(f"cannot read log file: {exc}") from exc
        return read_repository(config.repo_path)

    def issues():
        if config.issues_file is not None:
            try:
                return load_issues_json(config.issues_file, config.link)
            except OSError as exc:
                raise IngestError(f"cannot read issues file: {exc}") from exc
        if config.issue_source is not None:
            return fetch_issues(config.issue_source, config.link)
        return []

    with ThreadPoolExecutor(max_workers=2) as pool:
        commit_job = pool.submit(commits)
        issue_job = pool.submit(issues)
        records, tag_times = commit_job.result()
        issue_list = issue_job.result()
    return build_graph(records, issue_list, config.link, tag_times=tag_times)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("sources")
    src.add_argument("--repo", metavar="PATH", help="git repository to mine")
    src.add_argument("--log-file", metavar="PATH", help="pre-dumped git log (0x1F/0x1E record format)")
    src.add_argument("--issues-file", metavar="PATH", help="JSON array of GitHub issue records")
    src.add_argument("--issue-url", metavar="URL", help="GitHub repository or API URL to fetch issues from")
    link = common.add_argument_group("conventions")
    link.add_argument("--release-regex", metavar="R", help="pattern release tag names must match")
    link.add_argument("--bug-label-regex", metavar="R", help="pattern marking an issue label as a bug")
    link.add_argument("--issue-ref-regex", metavar="R", help="pattern a commit message must match to reference issues")
    common.add_argument("--output", metavar="PATH", help="write the result here instead of stdout")
    common.add_argument("--config", metavar="PATH", help="settings file with 'section.key = value' lines")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = _Parser(prog="relprov", description="Release provenance from git history and GitHub issues.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("overview", parents=[common], help="project overview")
    release = sub.add_parser("release", parents=[common], help="information about one release")
    release.add_argument("tag")
    changelog = sub.add_parser("changelog", parents=[common], help="markdown changelog")
    changelog.add_argument("--from", dest="from_tag", metavar="TAG", help="exclusive lower bound")
    changelog.add_argument("--to", dest="to_tag", metavar="TAG", help="inclusive upper bound")
    export = sub.add_parser("export", parents=[common], help="PROV-N or DOT export")
    export.add_argument("--format", required=True, help="provn or dot")
    export.add_argument("--scope", metavar="TAG", help="restrict the export to one release")
    return parser


def _emit(text: str, config: CliConfig) -> None:
    if config.output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        config.output.write_text(text, encoding="utf-8")


def run(args: argparse.Namespace) -> int:
    try:
        if args.command == "export" and args.format not in FORMATS:
            raise ConfigError(f"unknown export format {args.format!r}; expected one of {', '.join(FORMATS)}")
        config = resolve_config(args)
    except ConfigError as exc:
        print(f"relprov: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        graph = load_graph(config)
    except ConfigError as exc:
        print(f"relprov: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RelprovError as exc:
        print(f"relprov: {exc}", file=sys.stderr)
        return EXIT_INGEST
    log.info("loaded %r", graph)

    try:
        if args.command == "overview":
            overview = reporting.project_overview(graph)
            if overview.last_release is None:
                print("relprov: warning: no release tags matched the release pattern", file=sys.stderr)
            text = overview.render()
        elif args.command == "release":
            text = reporting.release_report(graph, args.tag).render()
        elif args.command == "changelog":
            text = reporting.changelog(graph, args.from_tag, args.to_tag).render()
        else:
            if args.format == "provn":
                text = provn.serialize_provn(provn.to_prov(graph, args.scope))
            else:
                text = provn.to_dot(graph, args.scope)
    except UnknownTag as exc:
        print(f"relprov: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_TAG
    except InvalidRange as exc:
        print(f"relprov: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmptyRange as exc:
        print(f"relprov: {exc}", file=sys.stderr)
        return EXIT_EMPTY_RANGE
    except RelprovError as exc:
        print(f"relprov: {exc}", file=sys.stderr)
        return EXIT_INGEST

    try:
        _emit(text, config)
    except OSError as exc:
        print(f"relprov: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, usage errors exit EXIT_CONFIG
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
