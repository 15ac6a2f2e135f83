"""Command-line entry point: ``plansofai {solve,validate,bench,mem}``.

Exit status is 0 on success, 2 when the controller opts out, 1 on usage or
file errors.  Results go to stdout; timings go to stderr so stdout stays
reproducible for a fixed seed and memory file.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import bench, metacog
from .memory import CaseMemory, CaseMemoryError, System
from .pddl import PDDLError, parse_domain, parse_instance
from .search import ExternalPlanner, ExternalPlannerError
from .strips import format_step, ground, parse_plan, plan_to_text
from .validator import execute

EXIT_OK, EXIT_ERROR, EXIT_OPT_OUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _frac(x: Fraction) -> str:
    return f"{x} ({float(x):.6f})"


def _add_params(p: argparse.ArgumentParser) -> None:
    d = metacog.MetaParams()
    p.add_argument("--A", type=float, default=d.A, help="acceptable correctness (default %(default)s)")
    p.add_argument("--T1", type=int, default=d.T1, help="experience needed before MC-1 trusts S1")
    p.add_argument("--T2", type=int, default=d.T2, help="S1 usages before accountability applies")
    p.add_argument("--T3", type=float, default=d.T3, help="risk aversion (default %(default)s)")
    p.add_argument("--epsilon", type=float, default=d.epsilon, help="exploration scale (default %(default)s)")
    p.add_argument("--seed", default="0", help="seed for retrieval and exploration draws")
    p.add_argument("--tl", type=float, default=60.0, help="time limit in seconds (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plansofai", description="Dual-process planner: fast plan retrieval arbitrated against search.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("--domain", required=True)
    s.add_argument("--problem", required=True)
    s.add_argument("--memory", help="case memory file (read; written back with --update-memory)")
    s.add_argument("--update-memory", action="store_true", help="append the solution to --memory")
    s.add_argument("--config", default="jac", choices=["s2", "jac", "lev", "mix", "rng"])
    s.add_argument("--external", help="JSON descriptor of an external planner to use as S2")
    s.add_argument("--out", help="also write the plan to this file")
    _add_params(s)

    v = sub.add_parser("validate", help="execute a plan and report its correctness")
    v.add_argument("--domain", required=True)
    v.add_argument("--problem", required=True)
    v.add_argument("--plan", required=True)

    b = sub.add_parser("bench", help="run a Blocks-World configuration sweep")
    b.add_argument("--blocks", default="4:50,5:50", help="n_blocks:count pairs (default %(default)s)")
    b.add_argument("--config", default="s2,jac,lev,mix,rng", help="comma-separated configurations")
    b.add_argument("--memory-seed-count", type=int, default=25)
    b.add_argument("--memory", help="initial memory file instead of freshly seeded cases")
    b.add_argument("--out", required=True, help="output directory for CSVs and memories")
    _add_params(b)

    m = sub.add_parser("mem", help="summarize a case memory file")
    m.add_argument("--memory", required=True)
    return parser


def _params(args) -> metacog.MetaParams:
    try:
        return metacog.MetaParams(args.A, args.T1, args.T2, args.T3, args.epsilon)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc


def _load_task(args):
    dom = parse_domain(_read(args.domain))
    inst = parse_instance(_read(args.problem), dom)
    return dom, inst


def cmd_solve(args, out) -> int:
    params = _params(args)
    if args.tl <= 0:
        raise UsageError("--tl must be positive")
    dom, inst = _load_task(args)
    if args.memory and Path(args.memory).exists():
        mem = CaseMemory.load(args.memory)
    elif args.memory and not args.update_memory:
        raise OSError(f"memory file not found: {args.memory}")
    else:
        mem = CaseMemory()
    s2 = metacog.ExternalS2(ExternalPlanner.from_file(args.external)) if args.external else None
    if args.config == "s2":
        outcome = metacog.solve_s2_only(dom, inst, args.tl, mem, s2=s2)
    else:
        outcome = metacog.solve(dom, inst, args.tl, params, mem, args.config, rng_seed=args.seed, s2=s2)

    t = outcome.trace
    if outcome.solved:
        text = plan_to_text(outcome.plan)
        out.write(text)
        out.write(f"; system: {outcome.system_used.value}\n")
        out.write(f"; correctness: {_frac(outcome.correctness)}\n")
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write("; opt-out: no acceptable plan within the time limit\n")
    out.write(f"; branch: {t.branch.value if t.branch else 's2-only'}\n")
    if t.via:
        out.write(f"; via: {t.via.value}\n")
    print(
        f"; wall_time_s: {outcome.wall_time:.6f} s1_time_s: {t.elapsed_s1:.6f} s2_time_s: {t.s2_time:.6f}",
        file=sys.stderr,
    )
    if args.memory and args.update_memory:
        mem.save(args.memory)
    return EXIT_OK if outcome.solved else EXIT_OPT_OUT


def cmd_validate(args, out) -> int:
    dom, inst = _load_task(args)
    task = ground(dom, inst)
    try:
        plan = parse_plan(_read(args.plan))
    except ValueError as exc:
        raise UsageError(f"{args.plan}: {exc}") from exc
    trace = execute(task, plan)
    out.write(f"steps: {len(plan)}\n")
    out.write(f"executed: {trace.executed_prefix_length}\n")
    if trace.truncated_at is not None:
        step = trace.truncated_at.step
        out.write(f"truncated_at: {step} {format_step(plan[step])} ({trace.truncated_at.reason})\n")
    out.write(f"satisfied_goals: {trace.satisfied_goals}/{trace.total_goals}\n")
    out.write(f"correctness: {_frac(trace.correctness)}\n")
    out.write(f"valid: {'yes' if trace.truncated_at is None and trace.correctness == 1 else 'no'}\n")
    return EXIT_OK


def _blocks(text: str) -> tuple[tuple[int, int], ...]:
    try:
        pairs = []
        for part in text.split(","):
            n, count = part.split(":")
            pairs.append((int(n), int(count)))
        return tuple(pairs)
    except ValueError as exc:
        raise UsageError(f"--blocks expects n:count[,n:count...], got {text!r}") from exc


def cmd_bench(args, out) -> int:
    try:
        configs = tuple(bench.Config.parse(c) for c in args.config.split(","))
        spec = bench.SuiteSpec(
            blocks_counts=_blocks(args.blocks),
            seed=args.seed,
            tl=args.tl,
            configs=configs,
            memory_seed_count=args.memory_seed_count,
            params=_params(args),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    memory = CaseMemory.load(args.memory) if args.memory else None
    results = bench.run_suite(spec, memory=memory)
    rows_path, agg_path = bench.emit_csv(results, args.out)
    outdir = Path(args.out)
    results.seed_memory.save(outdir / "memory-seed.mem")
    for config, mem in results.memories.items():
        mem.save(outdir / f"memory-{config.value}.mem")
    out.write(agg_path.read_text())
    out.write(f"; rows: {rows_path}\n")
    return EXIT_OK


def cmd_mem(args, out) -> int:
    mem = CaseMemory.load(args.memory)
    counts: dict[tuple[str, str], int] = {}
    for r in mem.records:
        counts[(r.domain_name, r.system.value)] = counts.get((r.domain_name, r.system.value), 0) + 1
    out.write(f"records: {len(mem)}\n")
    for dom_name in sorted({d for d, _ in counts}):
        parts = " ".join(f"{s.value}={counts.get((dom_name, s.value), 0)}" for s in System)
        out.write(f"domain {dom_name}: {parts}\n")
    for diff, times in sorted(mem.s2_time_buckets().items()):
        out.write(f"bucket {diff}: n={len(times)} mean_s2_time_s={sum(times) / len(times):.6f}\n")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "validate": cmd_validate, "bench": cmd_bench, "mem": cmd_mem}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"plansofai: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, PDDLError, CaseMemoryError, ExternalPlannerError) as exc:
        print(f"plansofai: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
