"""Machine-readable report files (CSV and JSON) with run metadata headers."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .census import CensusResult
from .context import DegreeReport, GeoStats, TimezoneStats
from .evolution import ChangeSummary, TransitionMatrix
from .triads import CODES, TypeMappingTable


def metadata(config: dict[str, Any] | None = None) -> dict[str, Any]:
    meta = {"tool": "trimotif", "version": __version__}
    if config:
        meta.update(config)
    return meta


def _header_lines(meta: dict[str, Any]) -> list[str]:
    return [f"# {k}: {v}" for k, v in meta.items()]


def write_csv(path: Path, meta: dict[str, Any], header: list[str],
              rows: list[list[Any]]) -> None:
    lines = _header_lines(meta)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: Path, meta: dict[str, Any], payload: Any) -> None:
    path.write_text(json.dumps({"meta": meta, "data": payload}, indent=2,
                               sort_keys=True) + "\n", encoding="utf-8")


def census_rows(result: CensusResult, mapping: TypeMappingTable
                ) -> tuple[list[str], list[list[Any]]]:
    header = ["code", "motif_type", "count", "percent"]
    freqs = result.frequencies
    rows = []
    for code in sorted(CODES, key=mapping.type_of):
        rows.append([code, mapping.type_of(code), result.counts[code],
                     f"{freqs[code]:.5f}"])
    return header, rows


def graph_overview_rows(stages: dict[str, dict[str, Any]]
                        ) -> tuple[list[str], list[list[Any]]]:
    """Table of node/edge/triangle counts per snapshot and reduction."""
    header = ["snapshot", "stage", "nodes", "edges", "triangles"]
    rows = []
    for (label, stage), info in stages.items():
        rows.append([label, stage, info["nodes"], info["edges"],
                     info.get("triangles", "")])
    return header, rows


def transition_rows(m: TransitionMatrix, view: str = "counts"
                    ) -> tuple[list[str], list[list[Any]]]:
    labels = m.type_labels
    header = ["origin_type"] + [str(t) for t in labels]
    data = {"counts": m.counts, "overall_percent": m.overall_percent,
            "row_percent": m.row_percent,
            "column_percent": m.column_percent}[view]
    rows = []
    for i, t in enumerate(labels):
        if view == "counts":
            rows.append([t] + [int(x) for x in data[i]])
        else:
            rows.append([t] + [f"{x:.3f}" for x in data[i]])
    return header, rows


def bubble_rows(m: TransitionMatrix, normalization: str = "overall",
                threshold: float = 0.5) -> tuple[list[str], list[list[Any]]]:
    header = ["origin_type", "destination_type", "percent"]
    rows = [[o, d, f"{p:.3f}"]
            for o, d, p in m.bubble_table(normalization, threshold)]
    return header, rows


def change_summary_rows(cs: ChangeSummary
                        ) -> tuple[list[str], list[list[Any]]]:
    header = ["type", "change_probability_percent",
              "most_frequent_predecessor", "most_frequent_successor"]
    rows = []
    for t in range(14):
        rows.append([t, f"{100.0 * cs.per_type_change_probability[t]:.2f}",
                     cs.most_frequent_predecessor.get(t, ""),
                     cs.most_frequent_successor.get(t, "")])
    return header, rows


def change_summary_payload(cs: ChangeSummary) -> dict[str, Any]:
    return {
        "origin_index": cs.origin_index,
        "destination_index": cs.destination_index,
        "changed_fraction": cs.changed_fraction,
        "less_connected_fraction": cs.less_connected_fraction,
        "dissolution_fraction": cs.dissolution_fraction,
        "per_type_change_probability": {
            str(t): p for t, p in cs.per_type_change_probability.items()},
        "most_frequent_predecessor": {
            str(t): v for t, v in cs.most_frequent_predecessor.items()},
        "most_frequent_successor": {
            str(t): v for t, v in cs.most_frequent_successor.items()},
    }


def timezone_rows(tz: TimezoneStats, mapping: TypeMappingTable
                  ) -> tuple[list[str], list[list[Any]]]:
    header = ["metric"] + [str(mapping.type_of(c))
                           for c in sorted(CODES, key=mapping.type_of)]
    codes = sorted(CODES, key=mapping.type_of)
    rows = []
    for k in tz.windows:
        rows.append([f"count_within_{k}"] + [tz.within[k][c] for c in codes])
        rows.append([f"percent_within_{k}"]
                    + [f"{tz.percent_within(k, c):.2f}" for c in codes])
    rows.append(["profiled_triangles"] + [tz.per_type_total[c] for c in codes])
    return header, rows


def geo_rows(geo: GeoStats, mapping: TypeMappingTable
             ) -> tuple[list[str], list[list[Any]]]:
    header = ["code", "motif_type", "population", "count", "mean_km",
              "median_km", "q1_km", "q3_km"]
    rows = []
    for code in sorted(CODES, key=mapping.type_of):
        t = mapping.type_of(code)
        s = geo.per_type_triangle_mean[code]
        rows.append([code, t, "triangle_mean", s.count, f"{s.mean:.3f}",
                     f"{s.median:.3f}", f"{s.q1:.3f}", f"{s.q3:.3f}"])
        if code in geo.per_type_symmetric_link:
            s = geo.per_type_symmetric_link[code]
            rows.append([code, t, "symmetric_link", s.count, f"{s.mean:.3f}",
                         f"{s.median:.3f}", f"{s.q1:.3f}", f"{s.q3:.3f}"])
    return header, rows


def cdf_rows(series: tuple[np.ndarray, np.ndarray]
             ) -> tuple[list[str], list[list[Any]]]:
    header = ["value", "cumulative_fraction"]
    values, frac = series
    return header, [[f"{v:.6f}", f"{f:.9f}"] for v, f in zip(values, frac)]


def degree_rows(report: DegreeReport) -> tuple[list[str], list[list[Any]]]:
    header = ["series", "direction", "degree", "cdf", "ccdf"]
    rows: list[list[Any]] = []
    for stage, dirs in report.stages.items():
        for direction, series in dirs.items():
            for v, c, cc in zip(series.values, series.cdf, series.ccdf):
                rows.append([stage, direction, int(v), f"{c:.9f}", f"{cc:.9f}"])
    for group, series in report.outdegree_by_transition.items():
        for v, c, cc in zip(series.values, series.cdf, series.ccdf):
            rows.append([f"transition_{group}", "out", int(v), f"{c:.9f}",
                         f"{cc:.9f}"])
    return header, rows


def superstar_rows(report: DegreeReport, raw_of=None
                   ) -> tuple[list[str], list[list[Any]]]:
    names = sorted({k for r in report.superstars for k in r.retention_percent})
    header = ["rank", "node", "followers_full"] + [f"percent_in_{n}" for n in names]
    rows = []
    for r in report.superstars:
        node = raw_of(r.node) if raw_of else r.node
        rows.append([r.rank, node, r.followers_full]
                    + [f"{r.retention_percent.get(n, 0.0):.2f}" for n in names])
    return header, rows
