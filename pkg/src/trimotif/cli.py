"""Command-line front end for the full analysis pipeline.

Subcommands: ingest, census, sample, transitions, geo, degrees, all.
Inputs come from a small JSON manifest listing ordered snapshot edge
lists, their labels, and an optional profile file. Every report is
written as CSV and JSON with a reproducibility header.

Exit codes: 0 success, 1 config error, 2 data error, 3 resource error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from . import reports
from .census import census, enumerate_triangles, triangle_set
from .context import degree_report, timezone_spread, triangle_geo_stats
from .evolution import change_summary, trajectories, transition_matrix
from .graph import (GraphDataError, NodeDictionary, ResourceError, Snapshot,
                    SnapshotSequence, load_profiles, load_snapshot)
from .sampling import SamplePlan, draw_seeds, filter_by_location, sample_triangle_graph
from .triads import CODES, TypeMappingTable

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_RESOURCE = 3

log = logging.getLogger("trimotif")


class ConfigError(Exception):
    pass


class RunConfig:
    """Validated CLI options for one pipeline run."""

    def __init__(self, args: argparse.Namespace):
        self.manifest_path = Path(args.manifest)
        if not self.manifest_path.is_file():
            raise ConfigError(f"manifest not found: {self.manifest_path}")
        self.out_dir = Path(args.out)
        self.seeds = args.seeds
        self.rng_seed = args.rng_seed
        self.locations_only = args.locations_only
        self.origin = args.origin
        self.destination = args.destination
        self.include_type0 = not args.without_type0
        self.threads = args.threads
        self.bubble_threshold = args.bubble_threshold
        self.timezone_windows = tuple(
            int(x) for x in args.timezone_window.split(","))
        self.top_n = args.top_n
        if args.mapping:
            if not Path(args.mapping).is_file():
                raise ConfigError(f"mapping file not found: {args.mapping}")
            self.mapping = TypeMappingTable.from_file(args.mapping)
        else:
            self.mapping = TypeMappingTable.default()
        if self.threads is not None and self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        try:
            manifest = json.loads(self.manifest_path.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"manifest is not valid JSON: {e}")
        snaps = manifest.get("snapshots")
        if not snaps or not isinstance(snaps, list):
            raise ConfigError("manifest must list snapshots")
        self.snapshot_specs = []
        base = self.manifest_path.parent
        for entry in snaps:
            path = base / entry["path"]
            if not path.is_file():
                raise ConfigError(f"snapshot file not found: {path}")
            self.snapshot_specs.append((entry.get("label", path.stem), path))
        self.profile_path = None
        if manifest.get("profiles"):
            self.profile_path = base / manifest["profiles"]
            if not self.profile_path.is_file():
                raise ConfigError(f"profile file not found: {self.profile_path}")

    def meta(self) -> dict[str, Any]:
        return reports.metadata({
            "manifest": self.manifest_path.name,
            "snapshots": ";".join(label for label, _ in self.snapshot_specs),
            "rng_seed": self.rng_seed,
            "seeds": self.seeds if self.seeds else "none (no sampling)",
            "locations_only": self.locations_only,
            "mapping": self.mapping.provenance,
            "mapping_is_reconstruction":
                self.mapping.provenance == "default reconstruction",
        })


class Pipeline:
    """Lazily computes each analysis stage on demand."""

    def __init__(self, config: RunConfig):
        self.cfg = config
        self.dictionary = NodeDictionary()
        self._loaded: list[Snapshot] | None = None
        self._profiles = None
        self._analysis: list[Snapshot] | None = None
        self._seeds: np.ndarray | None = None
        self._censuses = None
        self._trajs = None

    @property
    def loaded(self) -> list[Snapshot]:
        if self._loaded is None:
            self._loaded = [load_snapshot(str(path), self.dictionary, label=label)
                            for label, path in self.cfg.snapshot_specs]
            for s in self._loaded:
                log.info("loaded %s: %d nodes, %d edges (%d self-loops, "
                         "%d duplicates dropped)", s.label, s.node_count,
                         s.edge_count, s.self_loops, s.duplicates)
        return self._loaded

    @property
    def profiles(self):
        if self._profiles is None:
            self.loaded
            if self.cfg.profile_path:
                self._profiles = load_profiles(str(self.cfg.profile_path),
                                               self.dictionary)
            else:
                self._profiles = {}
        return self._profiles

    def analysis_graphs(self) -> list[Snapshot]:
        """Snapshots after the optional filter/sample reduction."""
        if self._analysis is None:
            snaps = self.loaded
            if self.cfg.locations_only:
                if not self.profiles:
                    raise GraphDataError(
                        "--locations-only needs a profile file in the manifest")
                snaps = [filter_by_location(s, self.profiles) for s in snaps]
            if self.cfg.seeds:
                plan = SamplePlan(self.cfg.seeds, self.cfg.rng_seed,
                                  self.cfg.locations_only)
                seeds = draw_seeds(snaps[0], plan)
                snaps = [sample_triangle_graph(s, plan, seeds=seeds)[0]
                         for s in snaps]
                self._seeds = seeds
            self._analysis = snaps
        return self._analysis

    @property
    def seeds(self) -> np.ndarray | None:
        self.analysis_graphs()
        return self._seeds

    def censuses(self):
        if self._censuses is None:
            self._censuses = [census(s, self.cfg.mapping,
                                     threads=self.cfg.threads)
                              for s in self.analysis_graphs()]
        return self._censuses

    def trajs(self):
        if self._trajs is None:
            snaps = self.analysis_graphs()
            if len(snaps) < 2:
                raise GraphDataError("transition analysis needs >= 2 snapshots")
            self._trajs = trajectories(snaps, self.cfg.mapping)
        return self._trajs

    def pair_indices(self) -> tuple[int, int]:
        n = len(self.loaded)
        o = self.cfg.origin if self.cfg.origin is not None else 0
        d = self.cfg.destination if self.cfg.destination is not None else n - 1
        if not (0 <= o < n and 0 <= d < n):
            raise GraphDataError(f"snapshot indices must lie in [0, {n - 1}]")
        if o >= d:
            raise GraphDataError("--origin must precede --destination")
        return o, d

    def destination_triangles(self):
        snaps = self.analysis_graphs()
        idx = self.pair_indices()[1] if len(snaps) > 1 else 0
        return list(enumerate_triangles(snaps[idx], self.cfg.mapping)), idx


class ReportWriter:
    """Writes report files; removes everything written if a stage fails."""

    def __init__(self, out_dir: Path, meta: dict[str, Any]):
        self.out_dir = out_dir
        self.meta = meta
        self.written: list[Path] = []

    def emit(self, name: str, header: list[str], rows: list[list[Any]],
             payload: Any = None) -> None:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = self.out_dir / f"{name}.csv"
        reports.write_csv(csv_path, self.meta, header, rows)
        self.written.append(csv_path)
        json_path = self.out_dir / f"{name}.json"
        if payload is None:
            payload = [dict(zip(header, row)) for row in rows]
        reports.write_json(json_path, self.meta, payload)
        self.written.append(json_path)

    def emit_text(self, name: str, lines: list[str]) -> None:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        self.written.append(path)

    def rollback(self) -> None:
        for path in self.written:
            try:
                path.unlink()
            except OSError:
                pass


# -- subcommand bodies -----------------------------------------------------

def cmd_ingest(pipe: Pipeline, w: ReportWriter) -> None:
    header = ["label", "nodes", "edges", "self_loops", "duplicates"]
    rows = [[s.label, s.node_count, s.edge_count, s.self_loops, s.duplicates]
            for s in pipe.loaded]
    if pipe.profiles:
        rows.append(["(profiles)", len(pipe.profiles), "", "", ""])
    w.emit("ingest", header, rows)


def cmd_census(pipe: Pipeline, w: ReportWriter, snapshot: int | None) -> None:
    results = pipe.censuses()
    indices = range(len(results)) if snapshot is None else [snapshot]
    for i in indices:
        if not (0 <= i < len(results)):
            raise GraphDataError(f"no snapshot with index {i}")
        header, rows = reports.census_rows(results[i], pipe.cfg.mapping)
        w.emit(f"census_{i}", header, rows)


def cmd_sample(pipe: Pipeline, w: ReportWriter) -> None:
    if not pipe.cfg.seeds:
        raise ConfigError("sample requires --seeds")
    graphs = pipe.analysis_graphs()
    seeds = pipe.seeds
    raw = pipe.dictionary.raw
    w.emit_text("seeds.txt", [raw(int(x)) for x in seeds])
    header = ["label", "stage", "nodes", "edges", "triangles"]
    rows = []
    for full, tg in zip(pipe.loaded, graphs):
        rows.append([full.label, "full", full.node_count, full.edge_count, ""])
        rows.append([tg.label, "triangle-graph", tg.node_count, tg.edge_count,
                     len(triangle_set(tg))])
    w.emit("sample_overview", header, rows)


def cmd_transitions(pipe: Pipeline, w: ReportWriter) -> None:
    o, d = pipe.pair_indices()
    trajs = pipe.trajs()
    labels = (pipe.loaded[o].label, pipe.loaded[d].label)
    for include in ([True, False] if pipe.cfg.include_type0 else [False]):
        m = transition_matrix(trajs, o, d, include_type0=include, labels=labels)
        tag = "with_type0" if include else "without_type0"
        for view in ("counts", "overall_percent", "row_percent",
                     "column_percent"):
            header, rows = reports.transition_rows(m, view)
            w.emit(f"transitions_{tag}_{view}", header, rows)
        header, rows = reports.bubble_rows(m, threshold=pipe.cfg.bubble_threshold)
        w.emit(f"transitions_{tag}_bubble", header, rows)
    cs = change_summary(trajs, o, d, pipe.cfg.mapping)
    header, rows = reports.change_summary_rows(cs)
    w.emit("change_summary", header, rows,
           payload=reports.change_summary_payload(cs))


def cmd_geo(pipe: Pipeline, w: ReportWriter) -> None:
    if not pipe.profiles:
        raise GraphDataError("geo reports need a profile file in the manifest")
    triangles, idx = pipe.destination_triangles()
    snap = pipe.analysis_graphs()[idx]
    geo = triangle_geo_stats(snap, triangles, pipe.profiles)
    header, rows = reports.geo_rows(geo, pipe.cfg.mapping)
    w.emit("geo_distances", header, rows)
    for name, series in (("edges", geo.cdf_profiled_edges),
                         ("triangle_edges", geo.cdf_triangle_edges),
                         ("triangle_pairs", geo.cdf_triangle_pairs)):
        header, rows = reports.cdf_rows(series)
        w.emit(f"geo_cdf_{name}", header, rows)
    tz = timezone_spread(triangles, pipe.profiles,
                         windows=pipe.cfg.timezone_windows)
    header, rows = reports.timezone_rows(tz, pipe.cfg.mapping)
    w.emit("timezone_neighbors", header, rows)


def cmd_degrees(pipe: Pipeline, w: ReportWriter) -> None:
    idx = pipe.pair_indices()[1] if len(pipe.loaded) > 1 else 0
    full = pipe.loaded[idx]
    reductions: dict[str, Snapshot] = {}
    if pipe.profiles:
        reductions["locations-only"] = filter_by_location(full, pipe.profiles)
    analysis = pipe.analysis_graphs()
    if pipe.cfg.seeds:
        reductions["triangle-graph"] = analysis[idx]
    trajs = pipe.trajs() if len(pipe.loaded) > 1 else None
    o, d = pipe.pair_indices() if len(pipe.loaded) > 1 else (0, 0)
    report = degree_report(full, reductions, trajs, o, d,
                           origin_snapshot=analysis[o] if trajs else None,
                           mapping=pipe.cfg.mapping, top_n=pipe.cfg.top_n)
    header, rows = reports.degree_rows(report)
    w.emit("degree_distributions", header, rows)
    header, rows = reports.superstar_rows(report, raw_of=pipe.dictionary.raw)
    w.emit("superstars", header, rows)


COMMANDS = {
    "ingest": lambda pipe, w, args: cmd_ingest(pipe, w),
    "census": lambda pipe, w, args: cmd_census(pipe, w, args.snapshot),
    "sample": lambda pipe, w, args: cmd_sample(pipe, w),
    "transitions": lambda pipe, w, args: cmd_transitions(pipe, w),
    "geo": lambda pipe, w, args: cmd_geo(pipe, w),
    "degrees": lambda pipe, w, args: cmd_degrees(pipe, w),
}


def cmd_all(pipe: Pipeline, w: ReportWriter, args: argparse.Namespace) -> None:
    cmd_ingest(pipe, w)
    cmd_census(pipe, w, None)
    if pipe.cfg.seeds:
        cmd_sample(pipe, w)
    cmd_transitions(pipe, w)
    if pipe.profiles:
        cmd_geo(pipe, w)
    cmd_degrees(pipe, w)


COMMANDS["all"] = cmd_all


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trimotif",
        description="Directed triangle motif census and evolution analysis")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("ingest", "census", "sample", "transitions", "geo",
                 "degrees", "all"):
        p = sub.add_parser(name)
        p.add_argument("--manifest", required=True,
                       help="JSON manifest of snapshot paths and labels")
        p.add_argument("--out", default="reports", help="output directory")
        p.add_argument("--seeds", type=int, default=None,
                       help="sample this many random seed nodes")
        p.add_argument("--rng-seed", type=int, default=0)
        p.add_argument("--locations-only", action="store_true",
                       help="drop nodes without a geographic profile first")
        p.add_argument("--mapping", default=None,
                       help="type-mapping file overriding the built-in table")
        p.add_argument("--origin", type=int, default=None,
                       help="origin snapshot index (default: first)")
        p.add_argument("--destination", type=int, default=None,
                       help="destination snapshot index (default: last)")
        p.add_argument("--without-type0", action="store_true",
                       help="restrict transition reports to type >= 1 endpoints")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--bubble-threshold", type=float, default=0.5)
        p.add_argument("--timezone-window", default="1,3",
                       help="comma-separated window widths, e.g. 1,3")
        p.add_argument("--top-n", type=int, default=10,
                       help="superstar table size")
        if name == "census":
            p.add_argument("--snapshot", type=int, default=None,
                           help="restrict to one snapshot index")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("TRIMOTIF_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(args)
    except ConfigError as e:
        log.error("config error: %s", e)
        return EXIT_CONFIG

    pipe = Pipeline(config)
    writer = ReportWriter(config.out_dir, config.meta())
    try:
        COMMANDS[args.command](pipe, writer, args)
    except ConfigError as e:
        writer.rollback()
        log.error("stage %s: config error: %s", args.command, e)
        return EXIT_CONFIG
    except ResourceError as e:
        writer.rollback()
        log.error("stage %s: resource error: %s", args.command, e)
        return EXIT_RESOURCE
    except GraphDataError as e:
        writer.rollback()
        log.error("stage %s: data error: %s", args.command, e)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
