"""Isomorphism classes of directed three-node motifs.

A triple of nodes induces three pair states; the 64 labeled assignments
fall into 13 weakly-connected classes (named with MAN-style codes such as
021U or 030C) plus a not-connected bucket. A configurable mapping table
translates canonical codes into report type numbers 1..13; type 0 is
reserved for "not currently a triangle" in trajectory tracking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import IO, Sequence

from .graph import GraphDataError, PairState, Snapshot

NOT_CONNECTED = "NOT_CONNECTED"

#: The 13 weakly-connected class codes, ordered by (arcs, mutual links).
CODES = ("021D", "021U", "021C", "111D", "111U", "030T", "030C",
         "201", "120D", "120U", "120C", "210", "300")

ARC_COUNT = {
    "021D": 2, "021U": 2, "021C": 2,
    "111D": 3, "111U": 3, "030T": 3, "030C": 3,
    "201": 4, "120D": 4, "120U": 4, "120C": 4,
    "210": 5, "300": 6,
}

MUTUAL_COUNT = {
    "021D": 0, "021U": 0, "021C": 0, "030T": 0, "030C": 0,
    "111D": 1, "111U": 1, "120D": 1, "120U": 1, "120C": 1,
    "201": 2, "210": 2, "300": 3,
}

# Pair index layout for a sorted triple (n1 < n2 < n3).
PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class TriadConfiguration:
    """Pair states of one unordered node triple.

    ``states`` holds the states of pairs (n1,n2), (n1,n3), (n2,n3) where
    n1 < n2 < n3 is the sorted triple.
    """

    triple: tuple[int, int, int]
    states: tuple[PairState, PairState, PairState]

    def __post_init__(self) -> None:
        if len(set(self.triple)) != 3:
            raise GraphDataError("a triad needs 3 distinct nodes")
        if tuple(sorted(self.triple)) != self.triple:
            raise GraphDataError("triple must be sorted ascending")

    @classmethod
    def from_snapshot(cls, s: Snapshot, triple: Sequence[int]) -> "TriadConfiguration":
        a, b, c = sorted(int(v) for v in triple)
        return cls((a, b, c), (s.pair_state(a, b), s.pair_state(a, c),
                               s.pair_state(b, c)))


@dataclass(frozen=True)
class TriadClass:
    """One isomorphism class: canonical code plus report bookkeeping."""

    canonical_code: str
    motif_type: int
    arc_count: int
    mutual_count: int


#: Placeholder class for triples that are not weakly connected (type 0
#: by the trajectory convention; arc_count 0 by convention as well).
TYPE0 = TriadClass(NOT_CONNECTED, 0, 0, 0)


def _ordered_arcs(states: Sequence[PairState]) -> set[tuple[int, int]]:
    """Directed arcs among local nodes {0,1,2} implied by pair states."""
    arcs: set[tuple[int, int]] = set()
    for (i, j), st in zip(PAIRS, states):
        if st in (PairState.FORWARD, PairState.MUTUAL):
            arcs.add((i, j))
        if st in (PairState.BACKWARD, PairState.MUTUAL):
            arcs.add((j, i))
    return arcs


def _code_of_states(states: Sequence[PairState]) -> str:
    """Class code of a labeled configuration (label independent)."""
    nulls = sum(1 for s in states if s is PairState.NONE)
    if nulls >= 2:
        return NOT_CONNECTED
    mutual = sum(1 for s in states if s is PairState.MUTUAL)
    asym = 3 - nulls - mutual
    arcs = _ordered_arcs(states)
    outdeg = [sum(1 for a in arcs if a[0] == v) for v in range(3)]
    indeg = [sum(1 for a in arcs if a[1] == v) for v in range(3)]

    if (mutual, asym) == (0, 2):
        if 2 in outdeg:
            return "021D"  # one node circles both others
        if 2 in indeg:
            return "021U"  # both others circle one node
        return "021C"      # directed path
    if (mutual, asym) == (0, 3):
        return "030C" if outdeg == [1, 1, 1] else "030T"
    if (mutual, asym) == (1, 1):
        dyad = PAIRS[[i for i, s in enumerate(states) if s is PairState.MUTUAL][0]]
        third = 3 - dyad[0] - dyad[1]
        # 111U: the lone arc leaves the mutual dyad; 111D: it enters it.
        leaves_dyad = any(a for a in arcs
                          if a[0] in dyad and a[1] == third)
        return "111U" if leaves_dyad else "111D"
    if (mutual, asym) == (2, 0):
        return "201"
    if (mutual, asym) == (1, 2):
        dyad = PAIRS[[i for i, s in enumerate(states) if s is PairState.MUTUAL][0]]
        third = 3 - dyad[0] - dyad[1]
        from_third = sum(1 for a in arcs
                         if a[0] == third and a[1] in dyad and (a[1], a[0]) not in arcs)
        if from_third == 2:
            return "120D"  # the outside node circles a mutual pair
        if from_third == 0:
            return "120U"  # a mutual pair circles the outside node
        return "120C"
    if (mutual, asym) == (2, 1):
        return "210"
    return "300"


def mirror(state: PairState) -> PairState:
    return state.mirror()


def permute_states(states: Sequence[PairState],
                   perm: Sequence[int]) -> tuple[PairState, PairState, PairState]:
    """Pair states after relabeling node i as perm[i]."""
    out = []
    for i, j in PAIRS:
        a, b = perm[i], perm[j]
        if a < b:
            out.append(states[PAIRS.index((a, b))])
        else:
            out.append(states[PAIRS.index((b, a))].mirror())
    return tuple(out)


def canonicalize(config: TriadConfiguration | Sequence[PairState]) -> str:
    """Lexicographically minimal pair-state encoding over all 6 relabelings."""
    states = config.states if isinstance(config, TriadConfiguration) else tuple(config)
    best = None
    for perm in itertools.permutations(range(3)):
        enc = "".join(str(int(s)) for s in permute_states(states, perm))
        if best is None or enc < best:
            best = enc
    return best


def _build_tables() -> tuple[dict[int, str], dict[str, str]]:
    """64-entry state-index -> code table, plus canonical-string -> code."""
    by_index: dict[int, str] = {}
    by_canon: dict[str, str] = {}
    for idx in range(64):
        states = tuple(PairState((idx >> (2 * k)) & 3) for k in (2, 1, 0))
        code = _code_of_states(states)
        by_index[idx] = code
        if code != NOT_CONNECTED:
            by_canon.setdefault(canonicalize(states), code)
    return by_index, by_canon


_CODE_BY_INDEX, CANONICAL_TO_CODE = _build_tables()


def state_index(states: Sequence[PairState]) -> int:
    """Pack the 3 pair states of a sorted triple into a 0..63 index."""
    return (int(states[0]) << 4) | (int(states[1]) << 2) | int(states[2])


@dataclass(frozen=True)
class TypeMappingTable:
    """Bijection between the 13 canonical codes and type numbers 1..13."""

    mapping: dict[str, int]
    provenance: str = "default reconstruction"

    # Anchors the mapping must satisfy; the exact assignment inside the
    # ambiguous groups is a documented reconstruction, not ground truth.
    _FIXED = {"021U": 4, "030T": 5, "120U": 6, "030C": 9, "300": 13}
    _GROUPS = (({"021D", "021C"}, {1, 2}),
               ({"111D", "111U"}, {3, 7}),
               ({"201", "120D", "120C", "210"}, {8, 10, 11, 12}))

    def __post_init__(self) -> None:
        if set(self.mapping) != set(CODES):
            raise GraphDataError("type mapping must cover all 13 codes")
        if sorted(self.mapping.values()) != list(range(1, 14)):
            raise GraphDataError("type mapping must be a bijection onto 1..13")
        for code, num in self._FIXED.items():
            if self.mapping[code] != num:
                raise GraphDataError(f"type mapping must send {code} to {num}")
        for codes, nums in self._GROUPS:
            if {self.mapping[c] for c in codes} != nums:
                raise GraphDataError(
                    f"type mapping must send {sorted(codes)} onto {sorted(nums)}")

    def type_of(self, code: str) -> int:
        if code == NOT_CONNECTED:
            return 0
        return self.mapping[code]

    def code_of(self, motif_type: int) -> str:
        if motif_type == 0:
            return NOT_CONNECTED
        for code, num in self.mapping.items():
            if num == motif_type:
                return code
        raise GraphDataError(f"no code for type {motif_type}")

    @classmethod
    def default(cls) -> "TypeMappingTable":
        return _DEFAULT_MAPPING

    @classmethod
    def from_file(cls, source: str | IO[str]) -> "TypeMappingTable":
        """Parse "code = number" lines; '#' starts a comment."""
        close = isinstance(source, str)
        stream = open(source, encoding="utf-8") if close else source
        mapping: dict[str, int] = {}
        try:
            for lineno, line in enumerate(stream, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise GraphDataError(f"mapping line {lineno}: expected 'code = number'")
                code, num = (p.strip() for p in line.split("=", 1))
                try:
                    mapping[code] = int(num)
                except ValueError:
                    raise GraphDataError(f"mapping line {lineno}: bad number {num!r}")
        finally:
            if close:
                stream.close()
        name = source if isinstance(source, str) else "stream"
        return cls(mapping, provenance=f"loaded from {name}")


_DEFAULT_MAPPING = TypeMappingTable({
    "021D": 1, "021C": 2, "111U": 3, "021U": 4, "030T": 5, "120U": 6,
    "111D": 7, "201": 8, "030C": 9, "120C": 10, "120D": 11, "210": 12,
    "300": 13,
})


def classify(config: TriadConfiguration | Sequence[PairState],
             mapping: TypeMappingTable | None = None) -> TriadClass:
    """Isomorphism class of a triad configuration.

    Returns :data:`TYPE0` (type 0) when fewer than 2 of the 3
    pairs carry an edge, i.e. the triple is not weakly connected.
    """
    states = config.states if isinstance(config, TriadConfiguration) else tuple(config)
    code = _CODE_BY_INDEX[state_index(states)]
    if code == NOT_CONNECTED:
        return TYPE0
    if mapping is None:
        mapping = _DEFAULT_MAPPING
    return TriadClass(code, mapping.type_of(code), ARC_COUNT[code],
                      MUTUAL_COUNT[code])


def arc_delta(origin: TriadClass, destination: TriadClass) -> int:
    """Directed-edge count change; negative marks a degeneration."""
    return destination.arc_count - origin.arc_count


def class_index_table() -> "list[int]":
    """64-entry table mapping a state index to a dense class id.

    Class id 0 is NOT_CONNECTED; ids 1..13 follow the order of
    :data:`CODES`. Used by the vectorized census kernel.
    """
    table = []
    for idx in range(64):
        code = _CODE_BY_INDEX[idx]
        table.append(0 if code == NOT_CONNECTED else CODES.index(code) + 1)
    return table
