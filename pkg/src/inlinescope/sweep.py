"""Compiler-flag sweeps: variant enumeration, isolated builds, measurement,
and greedy search toward extreme inlining.

A sweep builds a project once per flag assignment in a private work
directory, captures the inlining remark stream, measures the inlining ratio
of the produced binaries from their debug info, and reports one CSV row per
variant. The search walks one axis at a time (threshold raises first,
call-penalty drops second), keeping a move only when the measured ratio
strictly improves.
"""

from __future__ import annotations

import concurrent.futures
import glob as globmod
import itertools
import os
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import (
    ArtifactMissing,
    BuildFailed,
    BuildTimeout,
    ConfigError,
    EmptyFunctionUniverse,
    GridTooLarge,
    InlineScopeError,
    NoSuccessfulBuild,
)
from .ground_truth import compute_inlining_report
from .remarks import parse_remark_stream, summarize

REMARK_FLAGS = ["-Rpass=inline", "-Rpass-analysis=inline", "-Rpass-missed=inline"]
DEFAULT_GRID_CAP = 10_000
DEFAULT_TIMEOUT_SECONDS = 15 * 60  # "reasonable compilation time" made concrete
CC_ENV_OVERRIDE = "INLINESCOPE_CC"

THRESHOLD_AXIS = "-inline-threshold"
CALL_PENALTY_AXIS = "-inline-call-penalty"


@dataclass(frozen=True)
class FlagAxis:
    name: str
    kind: str  # "IntegerSequence" | "BooleanFlip"
    pass_via: str = "MiddleEnd"  # middle-end flags get wrapped as -mllvm name=value
    start: int = 0
    step: int = 0
    count: int = 0
    default: bool = True

    def values(self) -> list:
        if self.kind == "IntegerSequence":
            if self.count < 1 or self.step == 0:
                raise ConfigError(f"axis {self.name}: count >= 1 and step != 0 required")
            return [self.start + i * self.step for i in range(self.count)]
        if self.kind == "BooleanFlip":
            return [self.default, not self.default]
        raise ConfigError(f"axis {self.name}: unknown kind {self.kind!r}")

    def render(self, value) -> list[str]:
        if isinstance(value, bool):
            text = f"{self.name}={'true' if value else 'false'}"
        else:
            text = f"{self.name}={value}"
        if self.pass_via == "MiddleEnd":
            return ["-mllvm", text]
        return [text]


@dataclass
class Project:
    name: str
    source_dir: str
    build_command_template: str
    artifact_glob: str


@dataclass
class Toolchain:
    compiler_path: str = "clang"
    extra_env: dict[str, str] = field(default_factory=dict)

    def resolved_compiler(self) -> str:
        return os.environ.get(CC_ENV_OVERRIDE) or self.compiler_path


# Extreme-inlining recipes shipped as named presets. Middle-end values are
# rendered through -mllvm at build time.
PRESETS: dict[str, dict] = {
    "extreme-coreutils-style": {
        "base_flags": ["-O3", "-flto=full", "-fuse-ld=lld"],
        "middle_end": {THRESHOLD_AXIS: 200000},
    },
    "extreme-size-style": {
        "base_flags": ["-Oz"],
        "middle_end": {THRESHOLD_AXIS: 2225},
    },
    "extreme-o3-threshold": {
        "base_flags": ["-O3"],
        "middle_end": {THRESHOLD_AXIS: 2225},
    },
    "extreme-malware-style": {
        "base_flags": ["-O3", "-flto=full", "-fuse-ld=lld"],
        "middle_end": {THRESHOLD_AXIS: 500225},
    },
}


def preset_flags(name: str) -> list[str]:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    preset = PRESETS[name]
    flags = list(preset["base_flags"])
    for flag, value in preset["middle_end"].items():
        flags += ["-mllvm", f"{flag}={value}"]
    return flags


@dataclass
class SweepConfig:
    toolchain: Toolchain
    projects: list[Project]
    axes: list[FlagAxis] = field(default_factory=list)
    base_flags: list[str] = field(default_factory=list)
    per_build_timeout: float = DEFAULT_TIMEOUT_SECONDS
    parallelism: int = 1
    preset: str | None = None
    grid_cap: int = DEFAULT_GRID_CAP
    append_debug_flag: bool = True
    aggregate: str = "size_weighted"  # or "plain"

    def __post_init__(self):
        if self.per_build_timeout <= 0:
            raise ConfigError("per_build_timeout must be positive")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be a positive integer")
        if self.aggregate not in ("size_weighted", "plain"):
            raise ConfigError("aggregate must be 'size_weighted' or 'plain'")
        for project in self.projects:
            if project.build_command_template.count("{FLAGS}") != 1:
                raise ConfigError(
                    f"project {project.name}: build_command_template must contain "
                    "{FLAGS} exactly once"
                )

    def effective_base_flags(self) -> list[str]:
        flags = list(self.base_flags)
        if self.preset:
            flags += preset_flags(self.preset)
        return flags


def load_config(path: str | Path) -> SweepConfig:
    try:
        doc = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a mapping")
    return config_from_dict(doc)


def config_from_dict(doc: dict) -> SweepConfig:
    try:
        toolchain_doc = doc.get("toolchain", {})
        toolchain = Toolchain(
            compiler_path=toolchain_doc.get("compiler_path", "clang"),
            extra_env=dict(toolchain_doc.get("extra_env", {})),
        )
        projects = [
            Project(
                name=p["name"],
                source_dir=p["source_dir"],
                build_command_template=p["build_command_template"],
                artifact_glob=p["artifact_glob"],
            )
            for p in doc.get("projects", [])
        ]
        axes = []
        for a in doc.get("axes", []):
            kind = a["kind"]
            axes.append(
                FlagAxis(
                    name=a["name"],
                    kind=kind,
                    pass_via=a.get("pass_via", "MiddleEnd"),
                    start=a.get("start", 0),
                    step=a.get("step", 0),
                    count=a.get("count", 0),
                    default=a.get("default", True),
                )
            )
        base_flags = doc.get("base_flags", [])
        if isinstance(base_flags, str):
            base_flags = base_flags.split()
        return SweepConfig(
            toolchain=toolchain,
            projects=projects,
            axes=axes,
            base_flags=base_flags,
            per_build_timeout=doc.get("per_build_timeout", DEFAULT_TIMEOUT_SECONDS),
            parallelism=doc.get("parallelism", 1),
            preset=doc.get("preset"),
            grid_cap=doc.get("grid_cap", DEFAULT_GRID_CAP),
            append_debug_flag=doc.get("append_debug_flag", True),
            aggregate=doc.get("aggregate", "size_weighted"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad sweep config: {exc}") from exc


Assignment = tuple[tuple[FlagAxis, object], ...]


def enumerate_variants(config: SweepConfig) -> list[Assignment]:
    """Cartesian product of axis values in deterministic lexicographic order."""
    if not config.axes:
        raise ConfigError("axes must be non-empty")
    per_axis = [axis.values() for axis in config.axes]
    total = 1
    for values in per_axis:
        total *= len(values)
    if total > config.grid_cap:
        raise GridTooLarge(f"grid of {total} variants exceeds cap {config.grid_cap}")
    out: list[Assignment] = []
    for combo in itertools.product(*per_axis):
        out.append(tuple(zip(config.axes, combo)))
    return out


def assignment_flags(assignment: Assignment) -> list[str]:
    flags: list[str] = []
    for axis, value in assignment:
        flags += axis.render(value)
    return flags


@dataclass
class BuildArtifacts:
    flags: list[str]
    binaries: list[Path]
    remark_text: str
    compile_seconds: float
    workdir: Path


@dataclass
class VariantResult:
    variant_index: int
    flags: list[str]
    status: str  # Ok | BuildFailed | Timeout
    inlining_ratio: float | None = None
    total_functions: int | None = None
    inlined: int | None = None
    remaining: int | None = None
    eliminated: int | None = None
    compile_seconds: float | None = None
    binary_bytes: int | None = None
    failure_detail: str = ""
    remark_counts: tuple[int, int, int] | None = None  # passed, missed, analysis
    workdir: str | None = None


def build_variant(
    project: Project,
    flags: list[str],
    toolchain: Toolchain,
    timeout: float,
    workdir: str | Path | None = None,
    append_debug_flag: bool = True,
) -> BuildArtifacts:
    """Run one isolated build and collect its artifacts and remark stream."""
    source = Path(project.source_dir)
    if not source.is_dir():
        raise BuildFailed(f"source_dir {source} does not exist")
    compiler = toolchain.resolved_compiler()
    if os.sep in compiler and not Path(compiler).exists():
        raise BuildFailed(f"compiler {compiler} not found")

    owned = workdir is None
    work = Path(workdir) if workdir else Path(tempfile.mkdtemp(prefix="inlinescope-build-"))
    build_dir = work / "src"
    if build_dir.exists():
        shutil.rmtree(build_dir)
    shutil.copytree(source, build_dir)

    all_flags = list(flags) + REMARK_FLAGS
    if append_debug_flag:
        if "-g" not in all_flags:
            all_flags.append("-g")
    command = project.build_command_template.format(
        FLAGS=" ".join(all_flags), CC=compiler
    )
    env = dict(os.environ)
    env.update(toolchain.extra_env)
    env["CC"] = compiler

    start = time.monotonic()
    try:
        proc = subprocess.run(
            command,
            shell=True,
            cwd=build_dir,
            env=env,
            capture_output=True,
            text=True,
            timeout=timeout,
        )
    except subprocess.TimeoutExpired as exc:
        if owned:
            shutil.rmtree(work, ignore_errors=True)
        raise BuildTimeout(f"build exceeded {timeout:.0f}s: {command}") from exc
    elapsed = time.monotonic() - start

    if proc.returncode != 0:
        tail = "\n".join(proc.stderr.splitlines()[-15:])
        if owned:
            shutil.rmtree(work, ignore_errors=True)
        raise BuildFailed(
            f"build command exited {proc.returncode}",
            exit_code=proc.returncode,
            stderr_tail=tail,
        )

    binaries = sorted(Path(p) for p in globmod.glob(str(build_dir / project.artifact_glob)))
    if not binaries:
        if owned:
            shutil.rmtree(work, ignore_errors=True)
        raise ArtifactMissing(
            f"no artifact matched {project.artifact_glob!r} after a successful build"
        )
    return BuildArtifacts(
        flags=list(flags),
        binaries=binaries,
        remark_text=proc.stderr,
        compile_seconds=elapsed,
        workdir=work,
    )


def evaluate_variant(
    artifacts: BuildArtifacts, variant_index: int = 0, aggregate: str = "size_weighted"
) -> VariantResult:
    """Measure the inlining ratio of every produced binary and aggregate."""
    reports = []
    total_bytes = 0
    try:
        for binary in artifacts.binaries:
            data = binary.read_bytes()
            total_bytes += len(data)
            reports.append(compute_inlining_report(data, binary.name))
    except InlineScopeError as exc:
        return VariantResult(
            variant_index=variant_index,
            flags=artifacts.flags,
            status="BuildFailed",
            failure_detail=f"measurement failed: {exc}",
            workdir=str(artifacts.workdir),
        )

    if aggregate == "plain":
        ratio = sum(r.inlining_ratio for r in reports) / len(reports)
    else:
        weight = sum(r.total_functions for r in reports)
        ratio = sum(r.inlining_ratio * r.total_functions for r in reports) / weight

    remarks = parse_remark_stream(artifacts.remark_text)
    summary = summarize(remarks)
    return VariantResult(
        variant_index=variant_index,
        flags=artifacts.flags,
        status="Ok",
        inlining_ratio=ratio,
        total_functions=sum(r.total_functions for r in reports),
        inlined=sum(r.inlined_functions for r in reports),
        remaining=sum(r.remaining_inlined for r in reports),
        eliminated=sum(r.eliminated_inlined for r in reports),
        compile_seconds=artifacts.compile_seconds,
        binary_bytes=total_bytes,
        remark_counts=(summary.passed_count, summary.missed_count, summary.analysis_count),
        workdir=str(artifacts.workdir),
    )


def _measure_assignment(
    config: SweepConfig, flags: list[str], variant_index: int
) -> VariantResult:
    """Build + evaluate all projects for one flag list; first project for now."""
    results: list[VariantResult] = []
    for project in config.projects:
        work = Path(tempfile.mkdtemp(prefix=f"inlinescope-v{variant_index:04d}-"))
        try:
            artifacts = build_variant(
                project,
                config.effective_base_flags() + flags,
                config.toolchain,
                config.per_build_timeout,
                workdir=work,
                append_debug_flag=config.append_debug_flag,
            )
            result = evaluate_variant(artifacts, variant_index, config.aggregate)
        except BuildTimeout as exc:
            result = VariantResult(variant_index, flags, "Timeout",
                                   failure_detail=str(exc), workdir=str(work))
        except (BuildFailed, ArtifactMissing) as exc:
            result = VariantResult(variant_index, flags, "BuildFailed",
                                   failure_detail=str(exc), workdir=str(work))
        finally:
            shutil.rmtree(work, ignore_errors=True)
        results.append(result)

    ok = [r for r in results if r.status == "Ok"]
    if not ok:
        first = results[0]
        first.flags = flags
        return first
    if config.aggregate == "plain":
        ratio = sum(r.inlining_ratio for r in ok) / len(ok)
    else:
        weight = sum(r.total_functions for r in ok)
        ratio = sum(r.inlining_ratio * r.total_functions for r in ok) / weight
    merged = VariantResult(
        variant_index=variant_index,
        flags=flags,
        status="Ok",
        inlining_ratio=ratio,
        total_functions=sum(r.total_functions for r in ok),
        inlined=sum(r.inlined for r in ok),
        remaining=sum(r.remaining for r in ok),
        eliminated=sum(r.eliminated for r in ok),
        compile_seconds=sum(r.compile_seconds for r in ok),
        binary_bytes=sum(r.binary_bytes for r in ok),
        workdir=ok[0].workdir,
    )
    return merged


def run_sweep(config: SweepConfig, measure=None) -> list[VariantResult]:
    """Evaluate the full grid; results ordered by enumeration index."""
    assignments = enumerate_variants(config)
    measure = measure or (
        lambda flags, index: _measure_assignment(config, flags, index)
    )
    results: dict[int, VariantResult] = {}
    if config.parallelism > 1:
        with concurrent.futures.ThreadPoolExecutor(config.parallelism) as pool:
            futures = {
                pool.submit(measure, assignment_flags(a), i): i
                for i, a in enumerate(assignments)
            }
            for future in concurrent.futures.as_completed(futures):
                index = futures[future]
                results[index] = future.result()
    else:
        for i, assignment in enumerate(assignments):
            results[i] = measure(assignment_flags(assignment), i)
    return [results[i] for i in range(len(assignments))]


@dataclass
class SearchStep:
    axis: str
    value: object
    flags: list[str]
    ratio: float | None
    status: str
    accepted: bool


@dataclass
class SearchResult:
    best_flags: list[str]
    best_result: VariantResult
    trajectory: list[SearchStep]
    builds_used: int


def _axis_priority(axes: list[FlagAxis]) -> list[FlagAxis]:
    threshold = [a for a in axes if a.name == THRESHOLD_AXIS]
    penalty = [a for a in axes if a.name == CALL_PENALTY_AXIS]
    rest = [a for a in axes if a.name not in (THRESHOLD_AXIS, CALL_PENALTY_AXIS)]
    return threshold + penalty + rest


def _candidate_order(axis: FlagAxis) -> list:
    values = axis.values()
    if axis.name == THRESHOLD_AXIS:
        return sorted(values)
    if axis.name == CALL_PENALTY_AXIS:
        return sorted(values, reverse=True)
    return values


def search_extreme(config: SweepConfig, budget: int, measure=None) -> SearchResult:
    """Greedy coordinate ascent on the measured inlining ratio."""
    if not config.axes:
        raise ConfigError("axes must be non-empty")
    if budget < len(config.axes) + 1:
        raise ConfigError(f"budget must be at least axes+1 = {len(config.axes) + 1}")
    measure = measure or (
        lambda flags, index: _measure_assignment(config, flags, index)
    )

    trajectory: list[SearchStep] = []
    builds = 0

    def evaluate(flags: list[str]) -> VariantResult:
        nonlocal builds
        result = measure(flags, builds)
        builds += 1
        return result

    incumbent_assignment: dict[str, object] = {}

    def flags_of(assignment: dict[str, object]) -> list[str]:
        flags: list[str] = []
        for axis in config.axes:
            if axis.name in assignment:
                flags += axis.render(assignment[axis.name])
        return flags

    base_result = evaluate([])
    trajectory.append(
        SearchStep("<base>", None, [], base_result.inlining_ratio,
                   base_result.status, True)
    )
    best_result = base_result
    best_ratio = base_result.inlining_ratio if base_result.status == "Ok" else None

    for axis in _axis_priority(config.axes):
        # One pass along the axis in its preferred direction; the best strict
        # improvement (ties and failures keep the incumbent) is committed
        # before the next axis is visited.
        axis_best: tuple[float, object, VariantResult] | None = None
        for value in _candidate_order(axis):
            if builds >= budget:
                break
            candidate = dict(incumbent_assignment)
            candidate[axis.name] = value
            flags = flags_of(candidate)
            result = evaluate(flags)
            improves = (
                result.status == "Ok"
                and result.inlining_ratio is not None
                and (best_ratio is None or result.inlining_ratio > best_ratio)
                and (axis_best is None or result.inlining_ratio > axis_best[0])
            )
            trajectory.append(
                SearchStep(axis.name, value, flags, result.inlining_ratio,
                           result.status, improves)
            )
            if improves:
                axis_best = (result.inlining_ratio, value, result)
        if axis_best is not None:
            ratio, value, result = axis_best
            incumbent_assignment[axis.name] = value
            best_ratio = ratio
            best_result = result
        if builds >= budget:
            break

    if best_ratio is None:
        raise NoSuccessfulBuild("every variant evaluated in the search failed")
    return SearchResult(
        best_flags=flags_of(incumbent_assignment),
        best_result=best_result,
        trajectory=trajectory,
        builds_used=builds,
    )


CSV_COLUMNS = [
    "variant_index", "flags", "status", "total_functions", "inlined",
    "remaining", "eliminated", "ratio", "compile_seconds", "binary_bytes",
]


def emit_report(results: list[VariantResult]) -> str:
    """One CSV row per variant in enumeration order; failures keep their row."""
    lines = [",".join(CSV_COLUMNS)]
    for r in results:
        flags_text = '"%s"' % " ".join(r.flags).replace('"', '""')
        if r.status == "Ok":
            row = [
                str(r.variant_index), flags_text, r.status,
                str(r.total_functions), str(r.inlined), str(r.remaining),
                str(r.eliminated), f"{r.inlining_ratio:.4f}",
                f"{r.compile_seconds:.3f}", str(r.binary_bytes),
            ]
        else:
            row = [str(r.variant_index), flags_text, r.status,
                   "", "", "", "", "", "", ""]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def ratios_from_csv(text: str) -> list[float]:
    """Pull the ratio column back out of a sweep CSV (Ok rows only)."""
    import csv as _csv
    import io as _io

    reader = _csv.DictReader(_io.StringIO(text))
    out = []
    for row in reader:
        if row.get("status") == "Ok" and row.get("ratio"):
            out.append(float(row["ratio"]))
    return out
