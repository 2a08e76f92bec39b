"""Exact triangle enumeration and per-type frequency census.

Every weakly-connected triple is visited exactly once via the
minimum-center rule: a center is a node adjacent (ignoring direction) to
both other members. An open triple has a unique center; a closed one has
three, and only the smallest-id center emits it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .graph import PairState, ResourceError, Snapshot
from .triads import (CODES, TriadClass, TriadConfiguration, TypeMappingTable,
                     class_index_table, classify)

try:
    import numba
    from numba import njit, prange
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    _HAVE_NUMBA = False

_CLASS_TABLE = np.array(class_index_table(), dtype=np.int64)


@dataclass
class CensusResult:
    """Per-type triangle counts of one snapshot."""

    snapshot_label: str
    counts: dict[str, int]
    total_triangles: int

    @property
    def frequencies(self) -> dict[str, float]:
        """Percent share per canonical code; zeros when the graph is empty."""
        if self.total_triangles == 0:
            return {code: 0.0 for code in CODES}
        return {code: 100.0 * n / self.total_triangles
                for code, n in self.counts.items()}


def _mirror_code(s: int) -> int:
    return 2 if s == 1 else 1 if s == 2 else s


def _sorted_state_index(v: int, u: int, w: int, s_vu: int, s_vw: int,
                        s_uw: int) -> int:
    """State index of triple {v,u,w} in sorted-node pair order; u < w."""
    if v < u:
        a, b, c = s_vu, s_vw, s_uw
    elif v < w:
        a, b, c = _mirror_code(s_vu), s_uw, s_vw
    else:
        a, b, c = s_uw, _mirror_code(s_vu), _mirror_code(s_vw)
    return (a << 4) | (b << 2) | c


def enumerate_triangles(s: Snapshot,
                        mapping: TypeMappingTable | None = None
                        ) -> Iterator[tuple[tuple[int, int, int], TriadClass]]:
    """Yield every weakly-connected triple with its class, exactly once."""
    indptr, indices, states = s.undirected_csr()
    for v in s.node_ids:
        lo, hi = indptr[v], indptr[v + 1]
        nbrs = indices[lo:hi]
        row_states = states[lo:hi]
        for i in range(len(nbrs)):
            u = int(nbrs[i])
            s_vu = int(row_states[i])
            u_row = indices[indptr[u]:indptr[u + 1]]
            u_states = states[indptr[u]:indptr[u + 1]]
            for j in range(i + 1, len(nbrs)):
                w = int(nbrs[j])
                k = np.searchsorted(u_row, w)
                if k < len(u_row) and u_row[k] == w:
                    if v > u:  # closed triple: only the min center emits
                        continue
                    s_uw = int(u_states[k])
                else:
                    s_uw = 0
                triple = tuple(sorted((int(v), u, w)))
                idx = _sorted_state_index(int(v), u, w, s_vu,
                                          int(row_states[j]), s_uw)
                cfg_states = tuple(PairState((idx >> sh) & 3) for sh in (4, 2, 0))
                yield triple, classify(cfg_states, mapping)


if _HAVE_NUMBA:
    @njit(cache=True, nogil=True)
    def _bsearch(arr, lo, hi, x):
        while lo < hi:
            mid = (lo + hi) // 2
            if arr[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        return lo

    @njit(parallel=True, cache=True)
    def _census_kernel(indptr, indices, states, class_table, n_chunks):
        n = len(indptr) - 1
        out = np.zeros((n_chunks, 14), dtype=np.int64)
        chunk = (n + n_chunks - 1) // n_chunks
        for c in prange(n_chunks):
            local = np.zeros(14, dtype=np.int64)
            v_lo = c * chunk
            v_hi = min(n, v_lo + chunk)
            for v in range(v_lo, v_hi):
                lo, hi = indptr[v], indptr[v + 1]
                for i in range(lo, hi):
                    u = indices[i]
                    s_vu = states[i]
                    ulo, uhi = indptr[u], indptr[u + 1]
                    for j in range(i + 1, hi):
                        w = indices[j]
                        k = _bsearch(indices, ulo, uhi, w)
                        if k < uhi and indices[k] == w:
                            if v > u:
                                continue
                            s_uw = states[k]
                        else:
                            s_uw = 0
                        s_vw = states[j]
                        if v < u:
                            a, b, cc = s_vu, s_vw, s_uw
                        elif v < w:
                            a = 3 - s_vu if s_vu == 1 or s_vu == 2 else s_vu
                            b, cc = s_uw, s_vw
                        else:
                            a = s_uw
                            b = 3 - s_vu if s_vu == 1 or s_vu == 2 else s_vu
                            cc = 3 - s_vw if s_vw == 1 or s_vw == 2 else s_vw
                        local[class_table[(a << 4) | (b << 2) | cc]] += 1
            out[c] = local
        return out


def census(s: Snapshot, mapping: TypeMappingTable | None = None,
           threads: int | None = None) -> CensusResult:
    """Per-type frequency distribution of all triangles in a snapshot.

    Deterministic for any thread count: per-chunk partial counts are
    merged by integer addition.
    """
    indptr, indices, states = s.undirected_csr()
    if _HAVE_NUMBA and len(indices):
        if threads is not None:
            numba.set_num_threads(
                min(max(1, threads), numba.config.NUMBA_NUM_THREADS))
        # Fixed chunk count: the center partition (and thus the partial
        # sums) never depends on how many threads execute it.
        parts = _census_kernel(indptr, indices, states, _CLASS_TABLE, 64)
        totals = parts.sum(axis=0)
    else:
        totals = np.zeros(14, dtype=np.int64)
        for _, cls in enumerate_triangles(s, mapping):
            totals[CODES.index(cls.canonical_code) + 1] += 1
    counts = {code: int(totals[i + 1]) for i, code in enumerate(CODES)}
    return CensusResult(s.label, counts, int(totals[1:].sum()))


def triangle_set(s: Snapshot, max_triangles: int | None = None
                 ) -> set[tuple[int, int, int]]:
    """All weakly-connected triples of a snapshot, materialized.

    ``max_triangles`` guards memory; exceeding it raises
    :class:`ResourceError` advising the sampling pipeline.
    """
    out: set[tuple[int, int, int]] = set()
    for triple, _ in enumerate_triangles(s):
        out.add(triple)
        if max_triangles is not None and len(out) > max_triangles:
            raise ResourceError(
                f"snapshot {s.label!r} has more than {max_triangles} "
                "triangles; reduce it with the sampling pipeline")
    return out
