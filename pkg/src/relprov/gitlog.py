"""Reading commit records out of ``git log``.

Each commit is emitted as ten fields separated by the ASCII unit separator
(0x1F) and terminated by the record separator (0x1E)::

    H␟P␟an␟ae␟aI␟cn␟ce␟cI␟D␟B␞

Only the body (``B``) may contain newlines. The same convention is used for
the tag-date pass over ``git for-each-ref``.
"""

from __future__ import annotations

import io
import logging
import subprocess
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator

from .errors import BadTimestamp, IngestError, MalformedRecord

log = logging.getLogger(__name__)

FIELD_SEP = b"\x1f"
RECORD_SEP = b"\x1e"
FIELD_COUNT = 10

RECORD_FORMAT = "%x1f".join(["%H", "%P", "%an", "%ae", "%aI", "%cn", "%ce", "%cI", "%D", "%B"]) + "%x1e"
TAG_FORMAT = "%1f".join(
    ["%(refname:strip=2)", "%(objecttype)", "%(taggerdate:iso-strict)", "%(*objectname)", "%(objectname)"]
) + "%1e"

_CHUNK = 1 << 16


@dataclass(frozen=True)
class RawCommitRecord:
    id: str
    parent_ids: tuple[str, ...]
    author_name: str
    author_email: str
    author_time: str
    committer_name: str
    committer_email: str
    commit_time: str
    decorations: str
    message: str


def git_log_command(repo_path: str | Path) -> list[str]:
    return [
        "git",
        "-C",
        str(repo_path),
        "log",
        "--reverse",
        "--all",
        "--date=iso-strict",
        f"--pretty=format:{RECORD_FORMAT}",
    ]


def git_tags_command(repo_path: str | Path) -> list[str]:
    return ["git", "-C", str(repo_path), "for-each-ref", "refs/tags", f"--format={TAG_FORMAT}"]


def parse_timestamp(value: str, index: int | None = None) -> datetime:
    """Parse an ISO-8601 timestamp, keeping its UTC offset as written."""
    text = value.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError:
        raise BadTimestamp(value, index) from None
    if ts.tzinfo is None:
        raise BadTimestamp(value, index)
    return ts


def _split_records(stream: BinaryIO, what: str = "record") -> Iterator[tuple[int, bytes]]:
    buf = b""
    index = 0
    while True:
        chunk = stream.read(_CHUNK)
        if not chunk:
            break
        buf += chunk
        *complete, buf = buf.split(RECORD_SEP)
        for raw in complete:
            yield index, raw
            index += 1
    if buf.strip(b"\n"):
        raise MalformedRecord(index, f"{what} is not terminated by 0x1E")


def iter_log_records(stream: BinaryIO | bytes) -> Iterator[RawCommitRecord]:
    """Yield records from a ``git log`` byte stream one at a time."""
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    for index, raw in _split_records(stream):
        # `format:` puts a newline between consecutive records
        if raw.startswith(b"\n"):
            raw = raw[1:]
        parts = raw.split(FIELD_SEP)
        if len(parts) != FIELD_COUNT:
            raise MalformedRecord(index, f"expected {FIELD_COUNT} fields, got {len(parts)}")
        text = [p.decode("utf-8", errors="replace") for p in parts]
        h, p, an, ae, ai, cn, ce, ci, d, b = text
        if not h:
            raise MalformedRecord(index, "empty commit id")
        parse_timestamp(ai, index)
        parse_timestamp(ci, index)
        yield RawCommitRecord(
            id=h,
            parent_ids=tuple(p.split(" ")) if p else (),
            author_name=an,
            author_email=ae,
            author_time=ai,
            committer_name=cn,
            committer_email=ce,
            commit_time=ci,
            decorations=d,
            message=b,
        )


def parse_log_stream(stream: BinaryIO | bytes) -> list[RawCommitRecord]:
    return list(iter_log_records(stream))


def serialize_records(records: Iterable[RawCommitRecord]) -> bytes:
    """Inverse of :func:`parse_log_stream`; used to write log-file fixtures."""
    out = []
    for r in records:
        values = [
            r.id,
            " ".join(r.parent_ids),
            r.author_name,
            r.author_email,
            r.author_time,
            r.committer_name,
            r.committer_email,
            r.commit_time,
            r.decorations,
            r.message,
        ]
        out.append(FIELD_SEP.join(v.encode("utf-8") for v in values) + RECORD_SEP)
    return b"\n".join(out)


def parse_decorations(raw: str) -> frozenset[str]:
    """Tag names in a ``%D`` decoration string.

    >>> sorted(parse_decorations("HEAD -> master, tag: 1.6.7, origin/master"))
    ['1.6.7']
    """
    names = set()
    for entry in raw.split(", "):
        entry = entry.strip()
        if entry.startswith("tag: "):
            name = entry[len("tag: "):].strip()
            if name:
                names.add(name)
    return frozenset(names)


@dataclass(frozen=True)
class TagRecord:
    name: str
    annotated: bool
    tagger_time: str
    target: str


def parse_tag_stream(stream: BinaryIO | bytes) -> list[TagRecord]:
    """Parse the output of :func:`git_tags_command`."""
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    tags = []
    for index, raw in _split_records(stream, "tag record"):
        raw = raw.lstrip(b"\n")
        parts = [p.decode("utf-8", errors="replace") for p in raw.split(FIELD_SEP)]
        if len(parts) != 5:
            raise MalformedRecord(index, f"expected 5 tag fields, got {len(parts)}")
        name, objtype, tagger_time, peeled, objectname = parts
        annotated = objtype == "tag"
        if tagger_time:
            parse_timestamp(tagger_time, index)
        tags.append(TagRecord(name, annotated, tagger_time, peeled or objectname))
    return tags


def tag_times(tags: Iterable[TagRecord]) -> dict[str, datetime]:
    """Tagger dates of annotated tags, keyed by tag name."""
    return {t.name: parse_timestamp(t.tagger_time) for t in tags if t.annotated and t.tagger_time}


def _run(cmd: list[str]) -> bytes:
    log.debug("running %s", " ".join(cmd[:5]))
    try:
        proc = subprocess.run(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, check=False)
    except FileNotFoundError as exc:
        raise IngestError("git executable not found") from exc
    if proc.returncode != 0:
        err = proc.stderr.decode("utf-8", errors="replace").strip()
        raise IngestError(f"{cmd[0]} {cmd[3]} failed ({proc.returncode}): {err}")
    return proc.stdout


def read_repository(repo_path: str | Path) -> tuple[list[RawCommitRecord], dict[str, datetime]]:
    """Run both git passes against ``repo_path``."""
    records = parse_log_stream(_run(git_log_command(repo_path)))
    tags = parse_tag_stream(_run(git_tags_command(repo_path)))
    return records, tag_times(tags)
