"""Append-only, tab-separated cache of exact Marcello numbers.

Each line is ``graph6<TAB>value<TAB>version[<TAB>witness-path]`` where
``graph6`` is a canonical form and the witness (if any) is written on the
canonical representative's labels.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .canon import CanonicalForm
from .engine import GlobalPlan, emit_witness, parse_witness
from .solver import INFINITE

VERSION = "marcello-1"
ENV_VAR = "MARCELLO_CACHE"


def default_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "marcello" / "numbers.tsv"


def version_tag(restriction: str) -> str:
    return f"{VERSION}:{restriction}"


@dataclass(frozen=True)
class CacheRecord:
    form: CanonicalForm
    value: float
    version: str
    witness_path: Optional[str] = None

    def line(self) -> str:
        value = "INF" if self.value == INFINITE else str(int(self.value))
        cells = [self.form.graph6, value, self.version]
        if self.witness_path:
            cells.append(self.witness_path)
        return "\t".join(cells) + "\n"

    @classmethod
    def parse(cls, line: str) -> "CacheRecord":
        cells = line.rstrip("\n").split("\t")
        if len(cells) not in (3, 4) or not cells[0]:
            raise ValueError("expected 3 or 4 tab-separated fields")
        value = INFINITE if cells[1] == "INF" else int(cells[1])
        if value != INFINITE and value < 0:
            raise ValueError("negative value")
        return cls(CanonicalForm(cells[0]), value, cells[2], cells[3] if len(cells) == 4 else None)


class ResultCache:
    def __init__(self, path: os.PathLike | str):
        self.path = Path(path)
        self.records: dict[tuple[CanonicalForm, str], CacheRecord] = {}
        self.skipped = 0
        self._load()

    @property
    def witness_dir(self) -> Path:
        return self.path.with_name(self.path.name + ".witness")

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = CacheRecord.parse(line)
                except ValueError as exc:
                    self.skipped += 1
                    warnings.warn(f"{self.path}:{lineno}: skipping bad cache line ({exc})", stacklevel=2)
                    continue
                self.records[(rec.form, rec.version)] = rec

    def get(self, form: CanonicalForm, restriction: str) -> Optional[tuple[float, Optional[list[GlobalPlan]]]]:
        rec = self.records.get((form, version_tag(restriction)))
        if rec is None:
            return None
        witness = None
        if rec.witness_path:
            p = self.witness_dir / rec.witness_path
            try:
                witness = parse_witness(p.read_text(encoding="utf-8"))
            except (OSError, ValueError):
                return None
        return rec.value, witness

    def put(self, form: CanonicalForm, restriction: str, value: float, witness: Optional[list[GlobalPlan]]) -> None:
        rel = None
        if witness:
            self.witness_dir.mkdir(parents=True, exist_ok=True)
            rel = form.graph6.encode("ascii").hex() + f".{restriction}.plan"
            (self.witness_dir / rel).write_text(emit_witness(witness), encoding="utf-8")
        rec = CacheRecord(form, value, version_tag(restriction), rel)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(rec.line())
            fh.flush()
        self.records[(form, rec.version)] = rec
