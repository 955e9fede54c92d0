"""Per-chunk result reports and per-tool pass-rate aggregation.

Two delimited outputs, both with a leading ``# ... seed=`` comment so
every artifact records its provenance:

  results CSV   chunk_id,tool,test_name,min_p,verdict   (p to 6 decimals)
  summary CSV   tool,chunks,pass_rate

The pass rate for a tool is (# Pass verdicts) / (15 * chunk count);
rounding happens only at formatting time.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyGroup
from .suite import CANONICAL_ORDER, PASS, TestResult


@dataclass(frozen=True)
class ChunkReport:
    chunk_id: str
    tool: str
    results: list[TestResult]


@dataclass(frozen=True)
class StsReport:
    per_chunk: list[ChunkReport]
    per_tool_pass_rate: dict[str, float]


def aggregate_pass_rate(chunks: list[ChunkReport]) -> dict[str, float]:
    by_tool: dict[str, list[ChunkReport]] = {}
    for chunk in chunks:
        by_tool.setdefault(chunk.tool, []).append(chunk)
    rates = {}
    for tool in sorted(by_tool):
        group = by_tool[tool]
        if not group:
            raise EmptyGroup(f"no chunks for tool {tool!r}")
        passes = sum(
            1 for chunk in group for result in chunk.results if result.verdict == PASS
        )
        rates[tool] = passes / (len(CANONICAL_ORDER) * len(group))
    return rates


def build_report(chunks: list[ChunkReport]) -> StsReport:
    if not chunks:
        raise EmptyGroup("report needs at least one evaluated chunk")
    return StsReport(per_chunk=chunks, per_tool_pass_rate=aggregate_pass_rate(chunks))


def results_csv(report: StsReport, seed: str) -> str:
    lines = [f"# fragsleuth-sts-results v1 seed={seed}", "chunk_id,tool,test_name,min_p,verdict"]
    for chunk in report.per_chunk:
        for result in chunk.results:
            lines.append(
                f"{chunk.chunk_id},{chunk.tool},{result.test_name},"
                f"{result.min_p:.6f},{result.verdict}"
            )
    return "\n".join(lines) + "\n"


def summary_csv(report: StsReport, seed: str) -> str:
    counts: dict[str, int] = {}
    for chunk in report.per_chunk:
        counts[chunk.tool] = counts.get(chunk.tool, 0) + 1
    lines = [f"# fragsleuth-sts-summary v1 seed={seed}", "tool,chunks,pass_rate"]
    for tool in sorted(report.per_tool_pass_rate):
        lines.append(f"{tool},{counts[tool]},{report.per_tool_pass_rate[tool]:.6f}")
    return "\n".join(lines) + "\n"
