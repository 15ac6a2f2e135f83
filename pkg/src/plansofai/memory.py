"""Case memory: the architecture's record of what it has solved, and how.

On disk the memory is a header line followed by one JSON object per record::

    SOFAI-MEM v1
    {"correctness": "1", "difficulty": 44, ...}
"""

from __future__ import annotations

import enum
import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .pddl import Instance
from .similarity import encode_set, encode_string
from .strips import Step, compute_difficulty, format_step, parse_step

HEADER = "SOFAI-MEM v1"
VERSION = "v1"


class System(str, enum.Enum):
    S1 = "S1"
    S2 = "S2"


class CaseMemoryError(Exception):
    pass


class RecordInvariantError(CaseMemoryError):
    pass


class VersionMismatchError(CaseMemoryError):
    pass


class MemoryCorruptionError(CaseMemoryError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"record {index}: {reason}")
        self.index = index


def fingerprint(encoding: str) -> str:
    return hashlib.sha256(encoding.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CaseRecord:
    domain_name: str
    instance_fingerprint: str
    formula_set: frozenset[str]
    string_encoding: str
    plan: tuple[Step, ...]
    correctness: Fraction
    system: System
    difficulty: int
    wall_time: float
    total_goals: int
    solved_goals: int

    @classmethod
    def from_solution(
        cls,
        inst: Instance,
        plan: Sequence[Sequence[str]],
        solved_goals: int,
        system: System,
        wall_time: float,
    ) -> "CaseRecord":
        encoding = encode_string(inst)
        return cls(
            domain_name=inst.domain_name,
            instance_fingerprint=fingerprint(encoding),
            formula_set=encode_set(inst),
            string_encoding=encoding,
            plan=tuple(tuple(step) for step in plan),
            correctness=Fraction(solved_goals, inst.tot_goals),
            system=System(system),
            difficulty=compute_difficulty(inst),
            wall_time=float(wall_time),
            total_goals=inst.tot_goals,
            solved_goals=solved_goals,
        )

    def check(self) -> None:
        if self.total_goals < 1:
            raise RecordInvariantError("total_goals must be positive")
        if not 0 <= self.solved_goals <= self.total_goals:
            raise RecordInvariantError("solved_goals outside [0, total_goals]")
        if self.correctness != Fraction(self.solved_goals, self.total_goals):
            raise RecordInvariantError("correctness does not equal solved_goals / total_goals")
        if self.system is System.S2 and self.correctness != 1:
            raise RecordInvariantError("S2 records must have correctness 1")
        if self.wall_time < 0 or self.difficulty < 0:
            raise RecordInvariantError("negative wall_time or difficulty")

    def to_json(self) -> str:
        return json.dumps(
            {
                "domain": self.domain_name,
                "fingerprint": self.instance_fingerprint,
                "formulas": sorted(self.formula_set),
                "encoding": self.string_encoding,
                "plan": [format_step(s) for s in self.plan],
                "correctness": str(self.correctness),
                "system": self.system.value,
                "difficulty": self.difficulty,
                "wall_time": self.wall_time,
                "total_goals": self.total_goals,
                "solved_goals": self.solved_goals,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, line: str) -> "CaseRecord":
        d = json.loads(line)
        return cls(
            domain_name=d["domain"],
            instance_fingerprint=d["fingerprint"],
            formula_set=frozenset(d["formulas"]),
            string_encoding=d["encoding"],
            plan=tuple(parse_step(s) for s in d["plan"]),
            correctness=Fraction(d["correctness"]),
            system=System(d["system"]),
            difficulty=int(d["difficulty"]),
            wall_time=float(d["wall_time"]),
            total_goals=int(d["total_goals"]),
            solved_goals=int(d["solved_goals"]),
        )


@dataclass
class CaseMemory:
    records: list[CaseRecord] = field(default_factory=list)
    version: str = VERSION

    def __len__(self) -> int:
        return len(self.records)

    def copy(self) -> "CaseMemory":
        return CaseMemory(list(self.records), self.version)

    def record(self, r: CaseRecord) -> "CaseMemory":
        r.check()
        self.records.append(r)
        return self

    def solved_instances(self, domain_name: str, system: System | str | None = None) -> list[CaseRecord]:
        system = System(system) if system is not None else None
        return [
            r
            for r in self.records
            if r.domain_name == domain_name and (system is None or r.system is system)
        ]

    def avg_t_from_diff(self, difficulty: int) -> float:
        """Mean S2 solve time for the bucket, else the nearest bucket with data, else 0."""
        buckets = self.s2_time_buckets()
        if not buckets:
            return 0.0
        if difficulty in buckets:
            times = buckets[difficulty]
        else:
            nearest = min(buckets, key=lambda b: (abs(b - difficulty), b))
            times = buckets[nearest]
        return sum(times) / len(times)

    def s2_time_buckets(self) -> dict[int, list[float]]:
        buckets: dict[int, list[float]] = {}
        for r in self.records:
            if r.system is System.S2:
                buckets.setdefault(r.difficulty, []).append(r.wall_time)
        return buckets

    def save(self, path: str | os.PathLike) -> None:
        lines = [HEADER] + [r.to_json() for r in self.records]
        tmp = Path(f"{path}.tmp")
        tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "CaseMemory":
        text = Path(path).read_text(encoding="utf-8")
        return cls.from_lines(text.splitlines(keepends=True))

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "CaseMemory":
        lines = list(lines)
        if not lines or (len(lines) == 1 and not lines[0].strip()):
            return cls()
        header = lines[0].rstrip("\n")
        if header != HEADER:
            if header.startswith("SOFAI-MEM "):
                raise VersionMismatchError(f"unsupported memory format {header!r}, expected {HEADER!r}")
            raise MemoryCorruptionError(-1, f"bad header {header!r}")
        mem = cls()
        for i, line in enumerate(lines[1:]):
            if not line.endswith("\n"):
                raise MemoryCorruptionError(i, "truncated record (no line terminator)")
            try:
                r = CaseRecord.from_json(line)
                r.check()
            except (ValueError, KeyError, TypeError, RecordInvariantError) as exc:
                raise MemoryCorruptionError(i, str(exc)) from exc
            mem.records.append(r)
        return mem
