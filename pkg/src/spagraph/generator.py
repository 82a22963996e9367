"""Growth of spatial preferential attachment graphs on the unit torus.

Each step places one vertex uniformly at random, then flips an independent
link coin for every existing vertex whose sphere of influence contains the
newcomer. Sphere volumes are min((a1 * in_degree + a2) / t, 1), so they
grow with in-degree and shrink with time.

Two generators are provided: `generate` uses the leveled grid index and
scales to n = 10^6 and beyond; `generate_naive` scans all prior vertices
every step and exists as an O(n^2) reference. Both consume randomness
through the same counter-based streams, so for equal parameters and seed
they produce bit-identical graphs; any disagreement is a bug.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UsageError
from .geometry import Norm, ball_contains
from .rng import CounterStream
from .spatial_index import SphereIndex

NAIVE_GUARD = 10_000


@dataclass(frozen=True)
class ModelParams:
    """All growth parameters plus the seed that pins the run."""

    n: int
    p: float
    a1: float
    a2: float
    dimension: int = 2
    norm: Norm = Norm.LINF
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"p must be in [0, 1], got {self.p}")
        if self.a1 <= 0:
            raise ParameterError(f"a1 must be > 0, got {self.a1}")
        if self.p * self.a1 >= 1.0:
            raise ParameterError(f"p*a1 must be < 1, got {self.p * self.a1}")
        if self.a2 <= 0:
            raise ParameterError(f"a2 must be > 0, got {self.a2}")
        if self.dimension < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.dimension}")
        if not isinstance(self.norm, Norm):
            raise ParameterError(f"norm must be a Norm, got {self.norm!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError(f"seed must be a 64-bit unsigned int, got {self.seed}")


def sphere_volume(in_degree: int, t: int, params: ModelParams) -> float:
    """Volume of a degree-`in_degree` vertex's sphere at time t, capped at 1."""
    return min((params.a1 * in_degree + params.a2) / t, 1.0)


@dataclass
class GrownGraph:
    """A finished run: positions, birth-ordered edges, and degree views.

    Vertices are identified by their birth step, 1..n. Every edge points
    from its (younger) source to an older target, and a vertex's out-edges
    are fixed at its birth step. Because of that, the in-neighbors of v
    arrive exactly at their own birth steps, so the full in-degree
    trajectory of any vertex is recoverable from its sorted in-neighbor
    list; nothing extra needs recording during growth.
    """

    params: ModelParams
    out_ptr: np.ndarray
    out_targets: np.ndarray
    positions: np.ndarray | None = None
    in_ptr: np.ndarray = field(init=False)
    in_sources: np.ndarray = field(init=False)
    in_degree: np.ndarray = field(init=False)   # indexed by vertex id, slot 0 unused
    out_degree: np.ndarray = field(init=False)

    def __post_init__(self):
        n = self.params.n
        counts = np.bincount(self.out_targets, minlength=n + 1)
        self.in_ptr = np.zeros(n + 2, dtype=np.int64)
        np.cumsum(counts, out=self.in_ptr[1:])
        srcs = np.repeat(
            np.arange(1, n + 1, dtype=np.int64), np.diff(self.out_ptr[1:])
        )
        order = np.argsort(self.out_targets, kind="stable")
        self.in_sources = srcs[order]
        self.in_degree = np.diff(self.in_ptr)
        self.out_degree = np.diff(self.out_ptr)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def num_edges(self) -> int:
        return int(self.out_targets.size)

    def out_neighbors(self, v: int) -> np.ndarray:
        return self.out_targets[self.out_ptr[v] : self.out_ptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        """Sources of v's in-edges, ascending by birth (= arrival order)."""
        return self.in_sources[self.in_ptr[v] : self.in_ptr[v + 1]]

    def in_degree_at(self, v: int, t: int) -> int:
        """deg^-(v, t): in-edges that existed by the end of step t."""
        return int(np.searchsorted(self.in_neighbors(v), t, side="right"))

    def trajectory(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """(arrival steps, in-degree values) for every degree change of v."""
        arrivals = self.in_neighbors(v)
        return arrivals, np.arange(1, arrivals.size + 1, dtype=np.int64)

    def iter_edges(self):
        """Yield (source, target) pairs in generation order."""
        for v in range(1, self.n + 1):
            for u in self.out_neighbors(v):
                yield v, int(u)

    @classmethod
    def from_edges(cls, params: ModelParams, edges, positions=None) -> "GrownGraph":
        """Build a graph from an explicit edge list (tests, file parsing).

        Edges must be given in generation order: grouped by ascending
        source, targets ascending within each source, each target smaller
        than its source.
        """
        n = params.n
        out_ptr = np.zeros(n + 2, dtype=np.int64)
        targets = np.empty(len(edges), dtype=np.int64)
        prev_src, prev_tgt = 0, 0
        for i, (s, u) in enumerate(edges):
            if not 1 <= s <= n or not 1 <= u < s:
                raise UsageError(f"edge ({s}, {u}) violates birth ordering")
            if s < prev_src or (s == prev_src and u <= prev_tgt):
                raise UsageError(f"edge ({s}, {u}) out of generation order")
            if s != prev_src:
                out_ptr[prev_src + 1 : s + 1] = i
            prev_src, prev_tgt = s, u
            targets[i] = u
        out_ptr[prev_src + 1 :] = len(edges)
        if positions is not None:
            positions = np.asarray(positions, dtype=float)
            if positions.shape != (n + 1, params.dimension):
                raise UsageError(
                    f"positions must have shape {(n + 1, params.dimension)}, "
                    f"got {positions.shape}"
                )
        return cls(params=params, out_ptr=out_ptr, out_targets=targets,
                   positions=positions)


def generate(params: ModelParams, index_factory=None) -> GrownGraph:
    """Run the growth process to n vertices using the grid index.

    Output is a pure function of (params, seed): positions are read from
    the position lane at each step, and one coin per covering vertex is
    read from the coin lane at counter = candidate birth index, in
    ascending birth order.

    `index_factory` (same signature as SphereIndex) exists so equivalence
    harnesses can inject a deliberately broken index.
    """
    factory = index_factory if index_factory is not None else SphereIndex
    index = factory(params.dimension, params.norm, params.n)
    return _grow(params, _indexed_candidates(index), index)


def generate_naive(params: ModelParams, force: bool = False) -> GrownGraph:
    """Reference generator: linear scan of all prior vertices per step.

    Semantically identical to `generate` (same streams, same membership
    predicate); costs O(n^2), hence the size guard.
    """
    if params.n > NAIVE_GUARD and not force:
        raise UsageError(
            f"n={params.n} exceeds the naive-generator guard {NAIVE_GUARD}; "
            "pass force=True if you really mean it"
        )
    return _grow(params, _scan_candidates(params), None)


def _indexed_candidates(index):
    def candidates(t, x, positions, weights):
        return index.covering_spheres(x, t - 1)

    return candidates


def _scan_candidates(params):
    norm = params.norm

    def candidates(t, x, positions, weights):
        volumes = np.minimum(weights[1:t] / float(t - 1), 1.0)
        mask = ball_contains(positions[1:t], volumes, x, norm)
        return np.nonzero(mask)[0] + 1

    return candidates


def _grow(params: ModelParams, candidate_fn, index) -> GrownGraph:
    n, m, p = params.n, params.dimension, params.p
    stream = CounterStream(params.seed)
    positions = np.full((n + 1, m), np.nan)
    weights = np.zeros(n + 1)
    in_degree = np.zeros(n + 1, dtype=np.int64)
    out_ptr = np.zeros(n + 2, dtype=np.int64)
    targets: list[int] = []

    for t in range(1, n + 1):
        x = stream.position(t, m)
        positions[t] = x
        if t > 1:
            candidates = candidate_fn(t, x, positions, weights)
            if candidates.size:
                coins = stream.coin_uniforms(t, candidates)
                for u in candidates[coins < p].tolist():
                    in_degree[u] += 1
                    w = params.a1 * in_degree[u] + params.a2
                    weights[u] = w
                    if index is not None:
                        index.update_weight(u, w)
                    targets.append(u)
        out_ptr[t + 1] = len(targets)
        weights[t] = params.a2
        if index is not None:
            index.insert(t, x, params.a2)

    return GrownGraph(
        params=params,
        out_ptr=out_ptr,
        out_targets=np.array(targets, dtype=np.int64),
        positions=positions,
    )
