"""Plain-text, JSON and CSV rendering for CLI output."""

from __future__ import annotations

import csv
import io
import json

from .model import ComparisonReport, RankTable
from .sweep import SweepResult
from .validation import DivergenceReport

FORMATS = ("table", "json", "csv")


def render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(headers), fmt(["-" * w for w in widths])]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines)


def _csv(headers: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _score_str(score: float | None) -> str:
    return "" if score is None else f"{score:.6f}"


def render_rank_table(table: RankTable, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(table.to_dict(), indent=2)
    headers = ["rank", "vm", "score"]
    rows = [[str(e.rank), e.vm_id, _score_str(e.score)] for e in table.entries]
    if fmt == "csv":
        return _csv(headers, rows)
    return render_table(headers, rows)


def render_sweep(result: SweepResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.to_dict(), indent=2)
    headers = ["vm"] + [f"rank{pos}_count" for pos in range(1, result.k + 1)]
    headers += ["topk_count", "topk_frequency"]
    order = sorted(result.per_vm, key=lambda vm: (-result.top_k_count(vm), vm))
    rows = []
    for vm in order:
        counts = result.per_vm[vm]
        row = [vm] + [str(counts.get(pos, 0)) for pos in range(1, result.k + 1)]
        row += [str(result.top_k_count(vm)), f"{result.top_k_frequency(vm):.4f}"]
        rows.append(row)
    if fmt == "csv":
        return _csv(headers, rows)
    body = render_table(headers, rows)
    return (f"{body}\n\ntotal_vectors: {result.total_vectors}"
            f"  (k={result.k}, mode={result.mode.value})")


def render_comparison(report: ComparisonReport, benchmark: RankTable,
                      empirical: RankTable, divergence: DivergenceReport,
                      fmt: str) -> str:
    if fmt == "json":
        doc = report.to_dict()
        doc["benchmark"] = benchmark.to_dict()
        doc["empirical"] = empirical.to_dict()
        doc["divergence"] = divergence.to_dict()
        return json.dumps(doc, indent=2)
    bench_ranks = benchmark.ranks()
    emp_ranks = empirical.ranks()
    shared = sorted(report.per_vm_delta)
    headers = ["vm", "benchmark_rank", "empirical_rank", "delta"]
    rows = [[vm, str(bench_ranks[vm]), str(emp_ranks[vm]),
             f"{report.per_vm_delta[vm]:+d}"]
            for vm in sorted(shared, key=lambda v: bench_ranks[v])]
    if fmt == "csv":
        return _csv(headers, rows)
    head = (f"method: {report.method.value}\n"
            f"coefficient: {report.coefficient:.6f}\n"
            f"top-{report.k} overlap: {report.top_k_overlap}")
    return f"{head}\n\n{render_table(headers, rows)}\n\n{divergence.render()}"
