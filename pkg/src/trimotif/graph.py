"""Directed snapshot graphs, shared node dictionaries, and profile data.

Snapshots are immutable once loaded. All analysis modules work with dense
integer node ids assigned by a :class:`NodeDictionary` shared across every
snapshot of one run, so the same raw identifier always maps to the same id.
"""

from __future__ import annotations

import gzip
import io
import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import IO, Iterable, Iterator

import numpy as np

EARTH_RADIUS_KM = 6371.0088


class GraphDataError(Exception):
    """Malformed or inconsistent input data."""


class ResourceError(Exception):
    """An explicit resource budget was exceeded."""


class PairState(IntEnum):
    """Relationship between an ordered node pair (u, v)."""

    NONE = 0
    FORWARD = 1   # u -> v only
    BACKWARD = 2  # v -> u only
    MUTUAL = 3    # both directions

    def mirror(self) -> "PairState":
        """State of the same pair viewed as (v, u)."""
        if self is PairState.FORWARD:
            return PairState.BACKWARD
        if self is PairState.BACKWARD:
            return PairState.FORWARD
        return self


def utc_offset(longitude: float) -> int:
    """Integer timezone offset from a longitude, nearest-15-degrees rule.

    Rounds half away from zero; results lie in [-12, 12] for longitudes
    in (-180, 180] (+180 maps to +12).
    """
    x = longitude / 15.0
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


class NodeDictionary:
    """Bijective mapping between raw external identifiers and dense ids."""

    def __init__(self) -> None:
        self._to_id: dict[str, int] = {}
        self._to_raw: list[str] = []

    def __len__(self) -> int:
        return len(self._to_raw)

    def intern(self, raw: str) -> int:
        """Return the id for ``raw``, assigning the next dense id if new."""
        nid = self._to_id.get(raw)
        if nid is None:
            nid = len(self._to_raw)
            self._to_id[raw] = nid
            self._to_raw.append(raw)
        return nid

    def lookup(self, raw: str) -> int | None:
        return self._to_id.get(raw)

    def raw(self, nid: int) -> str:
        return self._to_raw[nid]


@dataclass(frozen=True)
class Profile:
    """Geographic profile of one node; coordinates in degrees."""

    node: int
    latitude: float
    longitude: float

    @property
    def timezone(self) -> int:
        return utc_offset(self.longitude)


def _csr_from_pairs(src: np.ndarray, dst: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Build a CSR adjacency (indptr, sorted indices) from edge arrays."""
    order = np.lexsort((dst, src))
    src = src[order]
    dst = dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst.astype(np.int64, copy=False)


class Snapshot:
    """Immutable directed graph at one observation time.

    Node ids refer to one shared :class:`NodeDictionary`; a snapshot may
    contain any subset of the dictionary's ids.
    """

    def __init__(self, label: str, n_ids: int, src: np.ndarray, dst: np.ndarray,
                 members: np.ndarray, self_loops: int = 0, duplicates: int = 0):
        self.label = label
        self.n_ids = n_ids  # id space size (shared dictionary extent)
        self.self_loops = self_loops
        self.duplicates = duplicates
        self.node_ids = np.asarray(members, dtype=np.int64)  # sorted, unique
        self._member_mask = np.zeros(n_ids, dtype=bool)
        self._member_mask[self.node_ids] = True
        self.out_indptr, self.out_indices = _csr_from_pairs(src, dst, n_ids)
        self.in_indptr, self.in_indices = _csr_from_pairs(dst, src, n_ids)
        self.edge_count = int(len(src))
        self._und: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, label: str, edges: Iterable[tuple[int, int]],
                   n_ids: int, extra_nodes: Iterable[int] = ()) -> "Snapshot":
        """Build from (src, dst) id pairs; drops self-loops and duplicates."""
        arr = np.array([(a, b) for a, b in edges], dtype=np.int64).reshape(-1, 2)
        return cls.from_arrays(label, arr[:, 0], arr[:, 1], n_ids,
                               extra_nodes=extra_nodes)

    @classmethod
    def from_arrays(cls, label: str, src: np.ndarray, dst: np.ndarray,
                    n_ids: int, extra_nodes: Iterable[int] = ()) -> "Snapshot":
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        loops = src == dst
        n_loops = int(loops.sum())
        loop_nodes = np.unique(src[loops])
        if n_loops:
            src, dst = src[~loops], dst[~loops]
        if len(src):
            packed = np.unique(np.stack([src, dst], axis=1), axis=0)
            dups = len(src) - len(packed)
            src, dst = packed[:, 0], packed[:, 1]
        else:
            dups = 0
        members = np.unique(np.concatenate([
            src, dst, loop_nodes, np.fromiter(extra_nodes, dtype=np.int64)
        ]))
        return cls(label, n_ids, src, dst, members,
                   self_loops=n_loops, duplicates=dups)

    # -- queries ----------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.node_ids)

    def has_node(self, v: int) -> bool:
        return 0 <= v < self.n_ids and bool(self._member_mask[v])

    def out_neighbors(self, v: int) -> np.ndarray:
        return self.out_indices[self.out_indptr[v]:self.out_indptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.in_indices[self.in_indptr[v]:self.in_indptr[v + 1]]

    def degrees(self, v: int) -> tuple[int, int]:
        """(in_degree, out_degree) of a member node."""
        if not self.has_node(v):
            raise GraphDataError(f"node {v} not in snapshot {self.label!r}")
        return (int(self.in_indptr[v + 1] - self.in_indptr[v]),
                int(self.out_indptr[v + 1] - self.out_indptr[v]))

    def has_edge(self, u: int, v: int) -> bool:
        row = self.out_neighbors(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def pair_state(self, u: int, v: int) -> PairState:
        if u == v:
            raise GraphDataError("pair_state requires two distinct nodes")
        fwd = self.has_edge(u, v)
        bwd = self.has_edge(v, u)
        return PairState(fwd + 2 * bwd)

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        for u in self.node_ids:
            for v in self.out_neighbors(u):
                yield int(u), int(v)

    # -- undirected view ---------------------------------------------------

    def undirected_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, indices, states) of the merged neighbor structure.

        ``states[k]`` is the :class:`PairState` of (u, indices[k]) viewed
        from the row node u. Built lazily, cached; the snapshot stays
        logically immutable.
        """
        if self._und is None:
            src = np.concatenate([self.out_indices, self.in_indices])
            row = np.empty(len(src), dtype=np.int64)
            out_deg = np.diff(self.out_indptr)
            in_deg = np.diff(self.in_indptr)
            row[:len(self.out_indices)] = np.repeat(
                np.arange(self.n_ids), out_deg)
            row[len(self.out_indices):] = np.repeat(
                np.arange(self.n_ids), in_deg)
            bits = np.empty(len(src), dtype=np.int64)
            bits[:len(self.out_indices)] = 1  # row -> neighbor
            bits[len(self.out_indices):] = 2  # neighbor -> row
            key = row * self.n_ids + src
            order = np.argsort(key, kind="stable")
            key, row, src, bits = key[order], row[order], src[order], bits[order]
            uniq, start = np.unique(key, return_index=True)
            states = np.bitwise_or.reduceat(bits, start) if len(bits) else bits
            row_u = row[start]
            nbr_u = src[start]
            indptr = np.zeros(self.n_ids + 1, dtype=np.int64)
            np.add.at(indptr, row_u + 1, 1)
            np.cumsum(indptr, out=indptr)
            self._und = (indptr, nbr_u, states)
        return self._und

    def undirected_neighbors(self, v: int) -> np.ndarray:
        indptr, indices, _ = self.undirected_csr()
        return indices[indptr[v]:indptr[v + 1]]


@dataclass
class SnapshotSequence:
    """Ordered snapshots over one shared node dictionary."""

    snapshots: list[Snapshot]
    dictionary: NodeDictionary

    def __post_init__(self) -> None:
        if len(self.snapshots) < 2:
            raise GraphDataError("a sequence needs at least 2 snapshots")
        labels = [s.label for s in self.snapshots]
        if len(set(labels)) != len(labels):
            raise GraphDataError("snapshot labels must be unique")

    def __len__(self) -> int:
        return len(self.snapshots)

    def __getitem__(self, i: int) -> Snapshot:
        return self.snapshots[i]


# -- ingestion -------------------------------------------------------------

def _open_text(source: str | IO[str]) -> IO[str]:
    if not isinstance(source, str):
        return source
    if source.endswith(".gz"):
        return io.TextIOWrapper(gzip.open(source, "rb"), encoding="utf-8")
    return open(source, encoding="utf-8")


def load_snapshot(source: str | IO[str], dictionary: NodeDictionary,
                  label: str = "") -> Snapshot:
    """Load one edge-list snapshot: lines of "src dst", '#' comments.

    Self-loops are dropped (counted on the snapshot), duplicate edges
    deduplicated. Raises :class:`GraphDataError` on malformed lines or
    empty input.
    """
    src: list[int] = []
    dst: list[int] = []
    stream = _open_text(source)
    close = isinstance(source, str)
    try:
        seen_any = False
        for lineno, line in enumerate(stream, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphDataError(
                    f"{label or 'edge list'}: malformed line {lineno}: {line!r}")
            seen_any = True
            src.append(dictionary.intern(parts[0]))
            dst.append(dictionary.intern(parts[1]))
        if not seen_any:
            raise GraphDataError(f"empty snapshot: {label or source!r}")
    finally:
        if close:
            stream.close()
    return Snapshot.from_arrays(
        label, np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64),
        n_ids=len(dictionary))


@dataclass
class ProfileLoadReport:
    loaded: int = 0
    rejected: int = 0
    unknown_ids: int = 0
    duplicates: int = 0
    diagnostics: list[str] = field(default_factory=list)


def load_profiles(source: str | IO[str], dictionary: NodeDictionary,
                  report: ProfileLoadReport | None = None) -> dict[int, Profile]:
    """Load "raw_id,lat,lon" rows into a node -> Profile map.

    Unknown ids and out-of-range coordinates are counted and skipped, not
    fatal. When a node has several rows, the first valid one wins.
    """
    if report is None:
        report = ProfileLoadReport()
    profiles: dict[int, Profile] = {}
    stream = _open_text(source)
    close = isinstance(source, str)
    try:
        for lineno, line in enumerate(stream, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                report.rejected += 1
                report.diagnostics.append(f"line {lineno}: malformed row")
                continue
            raw, lat_s, lon_s = parts
            try:
                lat, lon = float(lat_s), float(lon_s)
            except ValueError:
                if lineno == 1:
                    continue  # optional header
                report.rejected += 1
                report.diagnostics.append(f"line {lineno}: non-numeric coordinates")
                continue
            if not (-90.0 <= lat <= 90.0) or not (-180.0 < lon <= 180.0):
                report.rejected += 1
                report.diagnostics.append(f"line {lineno}: coordinates out of range")
                continue
            nid = dictionary.lookup(raw)
            if nid is None:
                report.unknown_ids += 1
                continue
            if nid in profiles:
                report.duplicates += 1
                continue
            profiles[nid] = Profile(nid, lat, lon)
            report.loaded += 1
    finally:
        if close:
            stream.close()
    return profiles
