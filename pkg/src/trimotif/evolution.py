"""Cross-snapshot triple tracking and transition statistics.

The tracked universe is every node triple that forms a triangle in at
least one snapshot. Snapshots where a tracked triple is not weakly
connected contribute type 0, so creation and dissolution show up as
transitions from and to type 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .census import triangle_set
from .graph import GraphDataError, Snapshot
from .triads import (TYPE0, TriadClass, TriadConfiguration, TypeMappingTable,
                     arc_delta, classify)

Triple = tuple[int, int, int]


def classify_triple(s: Snapshot, triple: Triple,
                    mapping: TypeMappingTable | None = None) -> TriadClass:
    """Class of a triple in one snapshot; TYPE0 if absent or unconnected."""
    if not all(s.has_node(v) for v in triple):
        return TYPE0
    return classify(TriadConfiguration.from_snapshot(s, triple), mapping)


def build_universe(snapshots: list[Snapshot],
                   max_triangles: int | None = None) -> set[Triple]:
    """Union of the per-snapshot triangle sets."""
    universe: set[Triple] = set()
    for s in snapshots:
        universe |= triangle_set(s, max_triangles=max_triangles)
    return universe


@dataclass(frozen=True)
class TripleTrajectory:
    """Per-snapshot type sequence of one tracked triple."""

    triple: Triple
    types: tuple[int, ...]

    @property
    def changed(self) -> bool:
        return len(set(self.types)) > 1


def trajectory(triple: Triple, snapshots: list[Snapshot],
               universe: set[Triple] | None = None,
               mapping: TypeMappingTable | None = None) -> TripleTrajectory:
    types = tuple(classify_triple(s, triple, mapping).motif_type
                  for s in snapshots)
    if universe is not None and triple not in universe:
        raise GraphDataError(f"triple {triple} is not in the tracked universe")
    if all(t == 0 for t in types):
        raise GraphDataError(f"triple {triple} is never a triangle")
    return TripleTrajectory(triple, types)


def trajectories(snapshots: list[Snapshot],
                 mapping: TypeMappingTable | None = None,
                 max_triangles: int | None = None
                 ) -> dict[Triple, TripleTrajectory]:
    """Trajectories of the whole tracked universe."""
    universe = build_universe(snapshots, max_triangles=max_triangles)
    return {t: trajectory(t, snapshots, mapping=mapping)
            for t in sorted(universe)}


@dataclass
class TransitionMatrix:
    """Counts of origin-type -> destination-type moves between snapshots.

    With type 0 included the matrix is 14x14 (index = type number);
    without it, 13x13 (index = type number - 1). The percent views are
    always derived from ``counts``.
    """

    origin_label: str
    destination_label: str
    include_type0: bool
    counts: np.ndarray

    @property
    def size(self) -> int:
        return 14 if self.include_type0 else 13

    @property
    def type_labels(self) -> list[int]:
        return list(range(0, 14)) if self.include_type0 else list(range(1, 14))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def overall_percent(self) -> np.ndarray:
        """Cells as percent of all tracked transitions; sums to 100."""
        total = self.counts.sum()
        if total == 0:
            return np.zeros_like(self.counts, dtype=float)
        return 100.0 * self.counts / total

    @property
    def row_percent(self) -> np.ndarray:
        """Destination distribution per origin type; each row sums to 100."""
        sums = self.counts.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(sums > 0, 100.0 * self.counts / sums, 0.0)
        return out

    @property
    def column_percent(self) -> np.ndarray:
        """Origin distribution per destination type; each column sums to 100."""
        sums = self.counts.sum(axis=0, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(sums > 0, 100.0 * self.counts / sums, 0.0)
        return out

    def without_type0(self) -> "TransitionMatrix":
        if not self.include_type0:
            return self
        return TransitionMatrix(self.origin_label, self.destination_label,
                                False, self.counts[1:, 1:].copy())

    def bubble_table(self, normalization: str = "overall",
                     threshold: float = 0.5
                     ) -> list[tuple[int, int, float]]:
        """(origin, destination, percent) cells above a display threshold."""
        views = {"overall": self.overall_percent, "row": self.row_percent,
                 "column": self.column_percent}
        view = views[normalization]
        base = 0 if self.include_type0 else 1
        out = []
        for i in range(self.size):
            for j in range(self.size):
                if view[i, j] > threshold:
                    out.append((i + base, j + base, float(view[i, j])))
        return out


def transition_matrix(trajs: dict[Triple, TripleTrajectory], origin: int,
                      destination: int, include_type0: bool = True,
                      labels: tuple[str, str] | None = None
                      ) -> TransitionMatrix:
    """Transition counts between two snapshot indices of the sequence."""
    if origin >= destination:
        raise GraphDataError("origin index must precede destination index")
    n = 14 if include_type0 else 13
    counts = np.zeros((n, n), dtype=np.int64)
    for tr in trajs.values():
        o, d = tr.types[origin], tr.types[destination]
        if include_type0:
            counts[o, d] += 1
        elif o >= 1 and d >= 1:
            counts[o - 1, d - 1] += 1
    if labels is None:
        labels = (f"S{origin + 1}", f"S{destination + 1}")
    return TransitionMatrix(labels[0], labels[1], include_type0, counts)


@dataclass
class ChangeSummary:
    """Aggregate change behavior over one origin/destination pair."""

    origin_index: int
    destination_index: int
    per_type_change_probability: dict[int, float]  # type 0..13 -> fraction
    changed_fraction: float        # non-constant trajectories / universe
    less_connected_fraction: float  # changed moves with negative arc delta
    dissolution_fraction: float    # changed moves landing on type 0
    most_frequent_predecessor: dict[int, int] = field(default_factory=dict)
    most_frequent_successor: dict[int, int] = field(default_factory=dict)


def change_summary(trajs: dict[Triple, TripleTrajectory], origin: int = 0,
                   destination: int = -1,
                   mapping: TypeMappingTable | None = None,
                   exclude_type0_partners: bool = True) -> ChangeSummary:
    """Summary statistics over trajectories and one transition pair.

    Per-type change probability comes from the type-0-inclusive matrix
    (1 - diagonal share per row). "Changed" transitions are those with
    origin type >= 1 moving to a different type (including dissolution
    to type 0); among them the less-connected share has a negative arc
    delta and the dissolution share lands on type 0.
    """
    if mapping is None:
        mapping = TypeMappingTable.default()
    some = next(iter(trajs.values()), None)
    n_snaps = len(some.types) if some else 2
    if destination < 0:
        destination += n_snaps
    m = transition_matrix(trajs, origin, destination, include_type0=True)

    per_type: dict[int, float] = {}
    for t in range(14):
        row = m.counts[t]
        total = row.sum()
        per_type[t] = float(1.0 - row[t] / total) if total else 0.0

    n_universe = len(trajs)
    changed_seq = sum(1 for tr in trajs.values() if tr.changed)

    arcs = [0] + [_arc_of_type(t, mapping) for t in range(1, 14)]
    n_changed = n_less = n_dissolved = 0
    for o in range(1, 14):
        for d in range(14):
            if d == o:
                continue
            c = int(m.counts[o, d])
            if not c:
                continue
            n_changed += c
            if arcs[d] - arcs[o] < 0:
                n_less += c
            if d == 0:
                n_dissolved += c

    pred: dict[int, int] = {}
    succ: dict[int, int] = {}
    lo = 1 if exclude_type0_partners else 0
    for t in range(1, 14):
        col = [(int(m.counts[o, t]), o) for o in range(lo, 14) if o != t]
        row = [(int(m.counts[t, d]), d) for d in range(lo, 14) if d != t]
        best_p = max(col)
        best_s = max(row)
        if best_p[0] > 0:
            pred[t] = best_p[1]
        if best_s[0] > 0:
            succ[t] = best_s[1]

    return ChangeSummary(
        origin_index=origin, destination_index=destination,
        per_type_change_probability=per_type,
        changed_fraction=changed_seq / n_universe if n_universe else 0.0,
        less_connected_fraction=n_less / n_changed if n_changed else 0.0,
        dissolution_fraction=n_dissolved / n_changed if n_changed else 0.0,
        most_frequent_predecessor=pred, most_frequent_successor=succ)


def _arc_of_type(motif_type: int, mapping: TypeMappingTable) -> int:
    from .triads import ARC_COUNT
    return ARC_COUNT[mapping.code_of(motif_type)]
