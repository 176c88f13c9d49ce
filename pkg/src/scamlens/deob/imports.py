"""Offline snapshot of externally hosted contract files."""

from __future__ import annotations

from pathlib import Path
from typing import Iterator, Optional

INDEX_NAME = "index.tsv"


class ImportStore:
    """Read-only mapping from import URL to source text.

    Backed either by an in-memory dict or by a snapshot directory holding
    an index file (one "url<TAB>filename" mapping per line) next to the
    snapshotted files. A missing URL is distinguishable from an empty
    file: lookups return None vs "".
    """

    def __init__(self, mapping: Optional[dict[str, str]] = None):
        self._sources: dict[str, str] = dict(mapping or {})
        self._parsed_cache: dict[str, object] = {}

    @classmethod
    def from_dir(cls, path: str | Path) -> "ImportStore":
        root = Path(path)
        index = root / INDEX_NAME
        if not index.is_file():
            raise FileNotFoundError(f"import store index not found: {index}")
        mapping: dict[str, str] = {}
        for lineno, line in enumerate(index.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            if "\t" not in line:
                raise ValueError(f"{index}:{lineno}: expected 'url<TAB>filename'")
            url, filename = line.split("\t", 1)
            mapping[url] = (root / filename).read_text(encoding="utf-8")
        return cls(mapping)

    def write_dir(self, path: str | Path) -> None:
        """Persist the snapshot in the on-disk layout accepted by from_dir."""
        root = Path(path)
        root.mkdir(parents=True, exist_ok=True)
        lines = []
        for i, url in enumerate(sorted(self._sources)):
            filename = f"snapshot_{i:04d}.sol"
            (root / filename).write_text(self._sources[url], encoding="utf-8")
            lines.append(f"{url}\t{filename}")
        (root / INDEX_NAME).write_text("\n".join(lines) + ("\n" if lines else ""),
                                       encoding="utf-8")

    def get(self, url: str) -> Optional[str]:
        return self._sources.get(url)

    def __contains__(self, url: str) -> bool:
        return url in self._sources

    def __len__(self) -> int:
        return len(self._sources)

    def urls(self) -> Iterator[str]:
        return iter(sorted(self._sources))
