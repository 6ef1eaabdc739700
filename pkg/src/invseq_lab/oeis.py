"""OEIS b-file client with a local cache and bundled offline fixtures."""

from __future__ import annotations

import os
import re
import tempfile
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

OEIS_HOST = "https://oeis.org"
CACHE_ENV = "INVSEQ_LAB_CACHE"
FIXTURES = ("A002293", "A069271", "A355174")

_ID_RE = re.compile(r"^A(\d{6})$")
_LINE_RE = re.compile(r"^\s*(-?\d+)\s+(-?\d+)\s*$")

_locks: dict[str, threading.Lock] = {}
_locks_guard = threading.Lock()


class OEISError(Exception):
    pass


class Unavailable(OEISError):
    pass


class BFileFormatError(OEISError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"malformed b-file line {lineno}: {line!r}")
        self.lineno = lineno


@dataclass(frozen=True)
class BSequence:
    id: str
    entries: tuple[tuple[int, int], ...]

    @property
    def values(self) -> list[int]:
        return [v for _, v in self.entries]

    @property
    def offset(self) -> int:
        return self.entries[0][0] if self.entries else 0


def check_id(seq_id: str) -> str:
    m = _ID_RE.match(seq_id)
    if not m:
        raise ValueError(f"bad OEIS id {seq_id!r}; expected 'A' followed by six digits")
    return m.group(1)


def parse_bfile(text: str, seq_id: str) -> BSequence:
    """Parse ``index value`` lines; ``#`` lines and blank lines are skipped."""
    entries = []
    last = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise BFileFormatError(lineno, line)
        i, v = int(m.group(1)), int(m.group(2))
        if last is not None and i <= last:
            raise BFileFormatError(lineno, line)
        last = i
        entries.append((i, v))
    if not entries:
        raise OEISError(f"b-file for {seq_id} has no terms")
    return BSequence(seq_id, tuple(entries))


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "invseq_lab"


def _lock_for(seq_id: str) -> threading.Lock:
    with _locks_guard:
        return _locks.setdefault(seq_id, threading.Lock())


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fixture_text(seq_id: str) -> Optional[str]:
    if seq_id not in FIXTURES:
        return None
    return resources.files("invseq_lab").joinpath("data", f"b{seq_id[1:]}.txt").read_text(encoding="ascii")


def _download(seq_id: str, digits: str, timeout: float) -> str:
    url = f"{OEIS_HOST}/{seq_id}/b{digits}.txt"
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read().decode("ascii")
    except (urllib.error.URLError, OSError, UnicodeDecodeError) as exc:
        raise Unavailable(f"{seq_id} unavailable: {exc}") from exc


def fetch(seq_id: str, offline: bool = False, cache: Optional[Path] = None, timeout: float = 30.0) -> BSequence:
    """Return the b-file for ``seq_id``.

    A cached copy wins.  Otherwise online mode downloads and caches the
    b-file, and offline mode falls back to the bundled fixtures.
    """
    digits = check_id(seq_id)
    root = Path(cache) if cache is not None else cache_dir()
    path = root / f"b{digits}.txt"
    with _lock_for(seq_id):
        if path.exists():
            return parse_bfile(path.read_text(encoding="ascii"), seq_id)
        if offline:
            text = _fixture_text(seq_id)
            if text is None:
                raise Unavailable(f"{seq_id} has no offline fixture")
            return parse_bfile(text, seq_id)
        text = _download(seq_id, digits, timeout)
        seq = parse_bfile(text, seq_id)
        _write_atomic(path, text)
        return seq


@dataclass
class Comparison:
    id: str
    alignment: str
    start_index: int
    produced: int
    matched: int
    mismatch: Optional[tuple[int, int, int]] = None  # (index, expected, got)

    @property
    def passed(self) -> bool:
        return self.mismatch is None and self.matched == self.produced


def compare(seq: BSequence, produced: Sequence[int], start_index: Optional[int] = None,
            alignment: str = "by-index") -> Comparison:
    """Align ``produced[i]`` with b-file index ``start_index + i`` and report
    the longest matching prefix.  Produced terms beyond the b-file fail."""
    if not produced:
        raise ValueError("nothing to compare")
    start = seq.offset if start_index is None else start_index
    table = dict(seq.entries)
    matched = 0
    mismatch = None
    for i, v in enumerate(produced):
        idx = start + i
        if idx not in table:
            mismatch = (idx, None, v)
            break
        if table[idx] != v:
            mismatch = (idx, table[idx], v)
            break
        matched += 1
    return Comparison(seq.id, alignment, start, len(produced), matched, mismatch)


def triangle_rows(rows: int, entry) -> list[int]:
    """Linearize a triangle T(m, t), 0 <= t <= m < rows, by rows."""
    return [entry(m, t) for m in range(rows) for t in range(m + 1)]
