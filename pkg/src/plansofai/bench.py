"""Blocks-World benchmark sweeps over solver configurations.

Every configuration sees the same instance list and starts from its own
copy of the same seeded memory.  Unsolved instances count as ``tl`` seconds
and correctness 0 in the aggregates.
"""

from __future__ import annotations

import csv
import enum
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import metacog
from .blocksworld import domain as bw_domain
from .blocksworld import gen_blocksworld
from .memory import CaseMemory, CaseRecord, System
from .pddl import Domain, Instance
from .retrieval import S1Kind
from .search import SearchConfig, Strategy
from .search import solve as search_solve
from .strips import compute_difficulty, ground

ROW_COLUMNS = [
    "instance_id",
    "n_blocks",
    "difficulty",
    "config",
    "status",
    "system",
    "wall_time_s",
    "correctness",
    "branch",
]
AGGREGATE_COLUMNS = ["config", "solved", "mean_time_s", "mean_corr", "s1_calls"]

# an instance counts as solved when its correctness reaches this value
SOLVED_THRESHOLD = Fraction(1, 2)
SEEDING_DEADLINE = 3600.0


class Config(str, enum.Enum):
    S2_ONLY = "S2-only"
    JAC = "Jac"
    LEV = "Lev"
    MIX = "Mix"
    RNG = "Rng"

    @classmethod
    def parse(cls, text: str) -> "Config":
        aliases = {"s2": cls.S2_ONLY, "fd": cls.S2_ONLY, "jac": cls.JAC, "lev": cls.LEV, "mix": cls.MIX, "rng": cls.RNG}
        key = text.strip().lower()
        if key in aliases:
            return aliases[key]
        for c in cls:
            if c.value.lower() == key:
                return c
        raise ValueError(f"unknown configuration {text!r}")

    @property
    def s1_kind(self) -> S1Kind | None:
        return {
            Config.JAC: S1Kind.JACCARD,
            Config.LEV: S1Kind.LEVENSHTEIN,
            Config.MIX: S1Kind.MIX,
            Config.RNG: S1Kind.RNG,
        }.get(self)


ALL_CONFIGS = tuple(Config)


@dataclass(frozen=True)
class SuiteSpec:
    blocks_counts: tuple[tuple[int, int], ...] = ((4, 50), (5, 50))
    seed: int = 0
    tl: float = 60.0
    configs: tuple[Config, ...] = ALL_CONFIGS
    memory_seed_count: int = 25
    params: metacog.MetaParams = field(default_factory=metacog.MetaParams)

    def __post_init__(self):
        if not self.tl > 0:
            raise ValueError("tl must be positive")
        for n, count in self.blocks_counts:
            if count < 1 or n < 2:
                raise ValueError(f"bad block count entry ({n}, {count})")


@dataclass(frozen=True)
class SuiteInstance:
    instance_id: str
    n_blocks: int
    instance: Instance


@dataclass(frozen=True)
class Row:
    instance_id: str
    n_blocks: int
    difficulty: int
    config: Config
    status: str
    system: str
    wall_time: float
    correctness: Fraction
    branch: str

    @property
    def solved(self) -> bool:
        return self.status == metacog.Status.SOLVED.value


@dataclass(frozen=True)
class Aggregate:
    config: Config
    solved: int
    mean_time: float
    mean_corr: float
    s1_calls: int


@dataclass
class RunResults:
    rows: list[Row] = field(default_factory=list)
    aggregates: list[Aggregate] = field(default_factory=list)
    memories: dict[Config, CaseMemory] = field(default_factory=dict)
    seed_memory: CaseMemory | None = None


def build_suite(spec: SuiteSpec, dom: Domain | None = None) -> list[SuiteInstance]:
    dom = dom or bw_domain()
    suite = []
    for n, count in spec.blocks_counts:
        for k in range(count):
            iid = f"bw{n:02d}-{k:03d}"
            suite.append(SuiteInstance(iid, n, gen_blocksworld(n, f"{spec.seed}:eval:{k}", dom, name=iid)))
    return suite


def seed_memory(spec: SuiteSpec, count: int | None = None, dom: Domain | None = None) -> CaseMemory:
    """Solve ``count`` fresh instances optimally, offline, and store them as S2 cases."""
    count = spec.memory_seed_count if count is None else count
    if count < 0:
        raise ValueError("count must be non-negative")
    dom = dom or bw_domain()
    sizes = [n for n, _ in spec.blocks_counts]
    mem = CaseMemory()
    cfg = SearchConfig(strategy=Strategy.BFS, deadline=SEEDING_DEADLINE)
    for j in range(count):
        n = sizes[j % len(sizes)]
        inst = gen_blocksworld(n, f"{spec.seed}:mem:{j}", dom, name=f"mem{n:02d}-{j:03d}")
        res = search_solve(ground(dom, inst), cfg)
        if not res.solved:
            raise RuntimeError(f"seeding instance {inst.name} failed: {res.outcome.value} {res.diagnostic}")
        mem.record(CaseRecord.from_solution(inst, res.plan, inst.tot_goals, System.S2, res.stats.wall_time))
    return mem


def run_suite(
    spec: SuiteSpec,
    instances: Sequence[SuiteInstance] | None = None,
    memory: CaseMemory | None = None,
) -> RunResults:
    dom = bw_domain()
    suite = list(instances) if instances is not None else build_suite(spec, dom)
    seeded = memory if memory is not None else seed_memory(spec, dom=dom)
    results = RunResults(seed_memory=seeded)
    for config in spec.configs:
        mem = seeded.copy()
        for item in suite:
            diff = compute_difficulty(item.instance, dom)
            if config is Config.S2_ONLY:
                outcome = metacog.solve_s2_only(dom, item.instance, spec.tl, mem)
                branch = "s2-only"
            else:
                outcome = metacog.solve(
                    dom,
                    item.instance,
                    spec.tl,
                    spec.params,
                    mem,
                    config.s1_kind,
                    rng_seed=f"{spec.seed}:{item.instance_id}",
                )
                branch = outcome.trace.branch.value
            results.rows.append(
                Row(
                    item.instance_id,
                    item.n_blocks,
                    diff,
                    config,
                    outcome.status.value,
                    outcome.system_used.value if outcome.system_used else "",
                    outcome.wall_time,
                    outcome.correctness if outcome.solved else Fraction(0),
                    branch,
                )
            )
        results.memories[config] = mem
    order = {c: i for i, c in enumerate(spec.configs)}
    results.rows.sort(key=lambda r: (r.difficulty, r.instance_id, order[r.config]))
    results.aggregates = [aggregate(results.rows, c, spec.tl) for c in spec.configs]
    return results


def aggregate(rows: Sequence[Row], config: Config, tl: float) -> Aggregate:
    mine = [r for r in rows if r.config is config]
    if not mine:
        return Aggregate(config, 0, 0.0, 0.0, 0)
    times = [r.wall_time if r.solved else tl for r in mine]
    corrs = [r.correctness if r.solved else Fraction(0) for r in mine]
    return Aggregate(
        config,
        solved=sum(1 for r, c in zip(mine, corrs) if r.solved and c >= SOLVED_THRESHOLD),
        mean_time=sum(times) / len(mine),
        mean_corr=float(sum(corrs, Fraction(0)) / len(mine)),
        s1_calls=sum(1 for r in mine if r.system == System.S1.value),
    )


def _fmt(x: float | Fraction) -> str:
    return f"{float(x):.6f}"


def emit_csv(results: RunResults, out_dir: str | os.PathLike) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows_path, agg_path = out / "rows.csv", out / "aggregates.csv"
    with open(rows_path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(ROW_COLUMNS)
        for r in results.rows:
            w.writerow(
                [
                    r.instance_id,
                    r.n_blocks,
                    r.difficulty,
                    r.config.value,
                    r.status,
                    r.system,
                    _fmt(r.wall_time),
                    _fmt(r.correctness),
                    r.branch,
                ]
            )
    with open(agg_path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(AGGREGATE_COLUMNS)
        for a in results.aggregates:
            w.writerow([a.config.value, a.solved, _fmt(a.mean_time), _fmt(a.mean_corr), a.s1_calls])
    return rows_path, agg_path
