"""Local clustering coefficients and their old/new decomposition.

The directed coefficient of v counts directed edges among v's in-neighbors
over C(deg^-, 2); the undirected variant treats all edges as undirected.
Edges among in-neighbors split exactly into "old" (target joined v's
neighborhood before v's degree crossed a threshold) and "new" (the rest),
giving c = c_old + c_new per vertex.

Vertices below degree 2 have an undefined coefficient and are excluded
from every average. All heavy computations are vectorized over the whole
graph; the per-vertex functions are straightforward loops meant for spot
checks and small graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, UsageError
from .generator import GrownGraph

VARIANTS = ("directed", "undirected", "old", "new")

_CHUNK = 200_000


def default_omega(n: int) -> float:
    """Slowly growing threshold scale used wherever one is required."""
    return math.log(math.log(n)) if n > 15 else 1.0


@dataclass(frozen=True)
class SplitPolicy:
    """How to pick the time that separates old from new neighbors.

    mode "log": first step where deg^-(v, t) exceeds omega * log(n)
    (omega defaults to log log n). mode "half": first step where it
    exceeds deg^-(v, n) / 2. In both modes the split time is n when the
    threshold is never crossed, making every neighbor old.
    """

    mode: str = "log"
    omega: float | None = None

    def __post_init__(self):
        if self.mode not in ("log", "half"):
            raise ParameterError(f"split mode must be 'log' or 'half', got {self.mode!r}")

    def thresholds(self, graph: GrownGraph) -> np.ndarray:
        """Per-vertex degree threshold (id-indexed, slot 0 unused)."""
        n = graph.n
        if self.mode == "log":
            omega = self.omega if self.omega is not None else default_omega(n)
            value = omega * math.log(n)
            return np.full(n + 1, value)
        return graph.in_degree / 2.0


def split_times(graph: GrownGraph, policy: SplitPolicy) -> np.ndarray:
    """T_hat per vertex: first step its in-degree exceeds the threshold.

    Degree j is reached exactly at the j-th in-neighbor's birth step, so
    the split time is the birth of neighbor floor(threshold)+1, or n when
    the final degree never exceeds the threshold.
    """
    n = graph.n
    thresholds = policy.thresholds(graph)
    needed = np.floor(thresholds).astype(np.int64) + 1
    out = np.full(n + 1, n, dtype=np.int64)
    reached = graph.in_degree >= needed
    idx = graph.in_ptr[:-1][reached] + needed[reached] - 1
    out[reached] = graph.in_sources[idx]
    return out


def split_time(graph: GrownGraph, v: int, policy: SplitPolicy) -> int:
    arrivals = graph.in_neighbors(v)
    threshold = policy.thresholds(graph)[v]
    needed = int(np.floor(threshold)) + 1
    if arrivals.size < needed:
        return graph.n
    return int(arrivals[needed - 1])


# -- per-vertex coefficients (loop implementations) -------------------------


def local_clustering_directed(graph: GrownGraph, v: int) -> float | None:
    """c^-(v): directed edges among in-neighbors / C(deg^-, 2); None if deg^- < 2.

    Iterates each in-neighbor's out-edges (out-degrees stay logarithmic)
    against a hash of the in-neighborhood.
    """
    neighbors = graph.in_neighbors(v)
    d = neighbors.size
    if d < 2:
        return None
    members = set(neighbors.tolist())
    count = sum(
        1 for u in members for w in graph.out_neighbors(u).tolist() if w in members
    )
    return count / math.comb(d, 2)


def local_clustering_undirected(graph: GrownGraph, v: int) -> float | None:
    """c(v) on the undirected view; None if total degree < 2."""
    neighbors = set(graph.in_neighbors(v).tolist()) | set(graph.out_neighbors(v).tolist())
    d = len(neighbors)
    if d < 2:
        return None
    count = sum(
        1 for u in neighbors for w in graph.out_neighbors(u).tolist() if w in neighbors
    )
    return count / math.comb(d, 2)


def old_new_split(
    graph: GrownGraph, v: int, policy: SplitPolicy
) -> tuple[float, float] | None:
    """(c_old, c_new) for v; their sum is c^-(v) exactly. None if deg^- < 2.

    An edge (u, w) among in-neighbors is old iff its target w joined the
    neighborhood by the split time, i.e. w's birth step <= T_hat.
    """
    neighbors = graph.in_neighbors(v)
    d = neighbors.size
    if d < 2:
        return None
    t_hat = split_time(graph, v, policy)
    members = set(neighbors.tolist())
    old = new = 0
    for u in members:
        for w in graph.out_neighbors(u).tolist():
            if w in members:
                if w <= t_hat:
                    old += 1
                else:
                    new += 1
    pairs = math.comb(d, 2)
    return old / pairs, new / pairs


# -- vectorized whole-graph computation --------------------------------------


def _edge_keys(graph: GrownGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(sources, targets, sorted src*(n+1)+tgt keys) over all edges."""
    n = graph.n
    srcs = np.repeat(np.arange(1, n + 1, dtype=np.int64), graph.out_degree[1:])
    keys = srcs * np.int64(n + 1) + graph.out_targets
    return srcs, graph.out_targets, keys


def _flatten_out_lists(graph, around):
    """Concatenate out-neighbor lists of `around`, with per-element owner index."""
    lengths = graph.out_degree[around]
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    owner = np.repeat(np.arange(around.size, dtype=np.int64), lengths)
    offsets = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    within = np.arange(total, dtype=np.int64) - np.repeat(offsets, lengths)
    flat = graph.out_targets[np.repeat(graph.out_ptr[around], lengths) + within]
    return flat, owner


def _member_of(keys, query_keys):
    pos = np.searchsorted(keys, query_keys)
    pos_clipped = np.minimum(pos, keys.size - 1)
    return (pos < keys.size) & (keys[pos_clipped] == query_keys)


def directed_pair_counts(
    graph: GrownGraph, t_hat: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray | None]:
    """Per-vertex count of directed edges among in-neighbors.

    When `t_hat` is given, also returns the count of those edges whose
    target is an old neighbor (birth step <= t_hat of the center vertex).
    Arrays are id-indexed with slot 0 unused.
    """
    n = graph.n
    srcs, tgts, keys = _edge_keys(graph)
    total = np.zeros(n + 1, dtype=np.int64)
    old = np.zeros(n + 1, dtype=np.int64) if t_hat is not None else None
    if keys.size == 0:
        return total, old
    for lo in range(0, srcs.size, _CHUNK):
        s = srcs[lo : lo + _CHUNK]
        v = tgts[lo : lo + _CHUNK]
        w, owner = _flatten_out_lists(graph, s)
        if w.size == 0:
            continue
        center = v[owner]
        hit = _member_of(keys, w * np.int64(n + 1) + center)
        total += np.bincount(center[hit], minlength=n + 1)
        if t_hat is not None:
            old_hit = hit & (w <= t_hat[center])
            old += np.bincount(center[old_hit], minlength=n + 1)
    return total, old


def undirected_pair_counts(graph: GrownGraph) -> np.ndarray:
    """Per-vertex count of edges among the undirected neighborhood."""
    n = graph.n
    srcs, tgts, keys = _edge_keys(graph)
    total = np.zeros(n + 1, dtype=np.int64)
    if keys.size == 0:
        return total
    # Each neighbor a of center v appears in exactly one orientation
    # (in-neighbors are younger, out-neighbors older), so iterating the
    # out-list of a counts every neighborhood edge once, at its source.
    centers = np.concatenate((tgts, srcs))
    around = np.concatenate((srcs, tgts))
    for lo in range(0, centers.size, _CHUNK):
        v = centers[lo : lo + _CHUNK]
        a = around[lo : lo + _CHUNK]
        w, owner = _flatten_out_lists(graph, a)
        if w.size == 0:
            continue
        center = v[owner]
        nk = np.int64(n + 1)
        hit = _member_of(keys, w * nk + center) | _member_of(keys, center * nk + w)
        total += np.bincount(center[hit], minlength=n + 1)
    return total


def _pair_denominator(degree: np.ndarray) -> np.ndarray:
    return degree * (degree - 1) // 2


@dataclass
class ClusteringReport:
    """Per-vertex coefficients for every eligible vertex, plus metadata."""

    split_mode: str
    omega: float | None
    ids_directed: np.ndarray       # vertices with deg^- >= 2
    in_degrees: np.ndarray
    c_directed: np.ndarray
    c_old: np.ndarray
    c_new: np.ndarray
    ids_undirected: np.ndarray     # vertices with total degree >= 2
    degrees_undirected: np.ndarray
    in_degrees_undirected: np.ndarray
    c_undirected: np.ndarray
    triangle_numerators_sum: int
    wedge_count: int

    @property
    def global_clustering(self) -> float:
        if self.wedge_count == 0:
            return 0.0
        return self.triangle_numerators_sum / self.wedge_count


def compute_report(
    graph: GrownGraph, policy: SplitPolicy = SplitPolicy()
) -> ClusteringReport:
    """All per-vertex coefficients in one vectorized pass over the graph."""
    t_hat = split_times(graph, policy)
    directed_num, old_num = directed_pair_counts(graph, t_hat)
    undirected_num = undirected_pair_counts(graph)

    in_deg = graph.in_degree
    tot_deg = in_deg + graph.out_degree

    dir_mask = in_deg >= 2
    dir_mask[0] = False
    ids_d = np.nonzero(dir_mask)[0]
    pairs_d = _pair_denominator(in_deg[ids_d]).astype(float)
    c_directed = directed_num[ids_d] / pairs_d
    c_old = old_num[ids_d] / pairs_d
    c_new = (directed_num[ids_d] - old_num[ids_d]) / pairs_d

    und_mask = tot_deg >= 2
    und_mask[0] = False
    ids_u = np.nonzero(und_mask)[0]
    pairs_u = _pair_denominator(tot_deg[ids_u]).astype(float)
    c_undirected = undirected_num[ids_u] / pairs_u

    wedges = int(_pair_denominator(tot_deg[1:]).sum())
    return ClusteringReport(
        split_mode=policy.mode,
        omega=policy.omega,
        ids_directed=ids_d,
        in_degrees=in_deg[ids_d],
        c_directed=c_directed,
        c_old=c_old,
        c_new=c_new,
        ids_undirected=ids_u,
        degrees_undirected=tot_deg[ids_u],
        in_degrees_undirected=in_deg[ids_u],
        c_undirected=c_undirected,
        triangle_numerators_sum=int(undirected_num.sum()),
        wedge_count=wedges,
    )


def _variant_values(report: ClusteringReport, variant: str):
    """(ids, degree used for exact binning, values) for one variant."""
    if variant == "directed":
        return report.ids_directed, report.in_degrees, report.c_directed
    if variant == "old":
        return report.ids_directed, report.in_degrees, report.c_old
    if variant == "new":
        return report.ids_directed, report.in_degrees, report.c_new
    if variant == "undirected":
        return report.ids_undirected, report.degrees_undirected, report.c_undirected
    raise UsageError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def curve_from_report(report: ClusteringReport, variant: str) -> dict[int, tuple[int, float]]:
    """Exact-degree curve: degree -> (vertex count, mean coefficient)."""
    _, degrees, values = _variant_values(report, variant)
    if degrees.size == 0:
        return {}
    counts = np.bincount(degrees)
    sums = np.bincount(degrees, weights=values)
    present = np.nonzero(counts)[0]
    return {int(d): (int(counts[d]), float(sums[d] / counts[d])) for d in present}


def band_grid(max_degree: int, ratio: float = 1.1, start: float = 2.0) -> np.ndarray:
    """Geometric grid of band centers covering [start, max_degree]."""
    if max_degree < start:
        return np.empty(0)
    count = int(math.floor(math.log(max_degree / start) / math.log(ratio))) + 1
    return start * ratio ** np.arange(count)


def banded_curve_from_report(
    report: ClusteringReport, variant: str, delta: float = 0.1
) -> dict[float, tuple[int, float]]:
    """Smoothed curve: band center d -> (|X_d|, mean over X_d).

    X_d is the set of eligible vertices whose in-degree lies within
    [(1-delta) d, (1+delta) d]; the same in-degree banding applies to
    every variant, undirected included. Centers run over a geometric
    grid; empty bands are omitted rather than reported as zero.
    """
    if not 0.0 < delta < 0.5:
        raise ParameterError(f"delta must be in (0, 1/2), got {delta}")
    ids, _, values = _variant_values(report, variant)
    if ids.size == 0:
        return {}
    in_degrees = (
        report.in_degrees_undirected if variant == "undirected" else report.in_degrees
    )
    order = np.argsort(in_degrees, kind="stable")
    sorted_deg = in_degrees[order]
    prefix = np.concatenate(([0.0], np.cumsum(values[order])))
    curve: dict[float, tuple[int, float]] = {}
    for d in band_grid(int(sorted_deg[-1])):
        lo = np.searchsorted(sorted_deg, (1.0 - delta) * d, side="left")
        hi = np.searchsorted(sorted_deg, (1.0 + delta) * d, side="right")
        if hi > lo:
            curve[float(d)] = (int(hi - lo), float((prefix[hi] - prefix[lo]) / (hi - lo)))
    return curve


def scatter_from_report(report: ClusteringReport, variant: str) -> np.ndarray:
    """(degree, coefficient) per eligible vertex, as a (k, 2) float array."""
    _, degrees, values = _variant_values(report, variant)
    return np.column_stack((degrees.astype(float), values))


# Convenience wrappers taking a graph directly.


def clustering_curve(
    graph: GrownGraph, variant: str, policy: SplitPolicy = SplitPolicy()
) -> dict[int, tuple[int, float]]:
    return curve_from_report(compute_report(graph, policy), variant)


def banded_curve(
    graph: GrownGraph,
    variant: str,
    delta: float = 0.1,
    policy: SplitPolicy = SplitPolicy(),
) -> dict[float, tuple[int, float]]:
    return banded_curve_from_report(compute_report(graph, policy), variant, delta)


def scatter_export(
    graph: GrownGraph, variant: str, policy: SplitPolicy = SplitPolicy()
) -> np.ndarray:
    return scatter_from_report(compute_report(graph, policy), variant)


def global_clustering(graph: GrownGraph) -> float:
    """3 * triangles / wedges on the undirected view (0 when no wedges)."""
    numerators = undirected_pair_counts(graph)
    tot_deg = graph.in_degree + graph.out_degree
    wedges = int(_pair_denominator(tot_deg[1:]).sum())
    if wedges == 0:
        return 0.0
    return float(numerators.sum() / wedges)
