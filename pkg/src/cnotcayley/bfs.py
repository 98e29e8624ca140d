"""Level-synchronous breadth-first exploration of the transvection
Cayley graph, reduced to one stored representative per isometry orbit.

The frontier at distance d is a sorted array of canonical keys.  Every
successor T*g of a frontier key is canonicalized; keys not seen in the
previous, current or accruing next level are new, enter the next level,
and contribute their full orbit size to the element count of sphere
d+1 exactly once.  Because the generators are involutions the graph is
undirected and an edge can only stay within a level or connect adjacent
levels, so checking three levels suffices and memory stays proportional
to the number of stored orbits.

Early termination keeps every recorded distance exact: a depth cap
stops *between* levels (everything recorded is complete), while an
orbit-budget cap may stop mid-level, in which case only the last sphere
size is a lower estimate and the result says so.

Worker threads split each canonicalization batch; partial results are
reassembled in input order and deduplicated by value, so distances,
sphere sizes and stored keys are identical for every thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .bounds import gl_order
from .errors import (
    ConsistencyError,
    DimensionError,
    HorizonError,
    OrderError,
)
from .gf2 import BitMatrix, Circuit, Transvection
from .isometry import IsometrySpec, canonicalize, canonicalize_batch

_U1 = np.uint64(1)


@dataclass
class SearchLimits:
    """Optional caps on the exploration; all values positive when set."""

    max_depth: int | None = None
    max_orbits: int | None = None
    threads: int = 1

    def __post_init__(self) -> None:
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive")
        if self.max_orbits is not None and self.max_orbits < 1:
            raise ValueError("max_orbits must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


@dataclass(eq=False)
class ExplorationResult:
    """Distances of all stored orbit keys plus exact sphere sizes.

    ``keys`` is sorted ascending; ``dists`` and ``orbit_sizes`` align
    with it (``orbit_sizes`` is None for results loaded from disk and is
    recomputable).  ``sphere_sizes[d]`` counts group elements at
    distance d; entries are exact except possibly the last one when
    ``last_level_complete`` is False.
    """

    n: int
    spec: IsometrySpec
    keys: np.ndarray
    dists: np.ndarray
    sphere_sizes: list[int]
    orbit_counts: list[int]
    complete: bool
    last_level_complete: bool
    orbit_sizes: np.ndarray | None = field(default=None, repr=False)

    @property
    def max_depth(self) -> int:
        return len(self.sphere_sizes) - 1

    @property
    def max_exact_depth(self) -> int:
        """Deepest level whose sphere size is exact."""
        return self.max_depth if self.last_level_complete else self.max_depth - 1

    def distance_of_key(self, key: int) -> int | None:
        idx = int(np.searchsorted(self.keys, np.uint64(key)))
        if idx < self.keys.size and int(self.keys[idx]) == key:
            return int(self.dists[idx])
        return None

    def total_elements(self) -> int:
        return sum(self.sphere_sizes)


def _in_sorted(values: np.ndarray, table: np.ndarray) -> np.ndarray:
    if table.size == 0:
        return np.zeros(values.shape, dtype=bool)
    idx = np.searchsorted(table, values)
    idx[idx == table.size] = table.size - 1
    return table[idx] == values


def _transvection_shifts(n: int) -> list[tuple[int, int]]:
    # (target-row shift, source-row shift) pairs in (i, j) lex order
    return [((t.i - 1) * n, (t.j - 1) * n) for t in gf2.all_transvections(n)]


def _successors(keys: np.ndarray, n: int) -> np.ndarray:
    """All T*g for g in keys, laid out generator-major: the slice
    [t*B:(t+1)*B] holds generator t applied to every key."""
    mask = np.uint64((1 << n) - 1)
    shifts = _transvection_shifts(n)
    out = np.empty((len(shifts), keys.size), dtype=np.uint64)
    for t, (ishift, jshift) in enumerate(shifts):
        rows = (keys >> np.uint64(jshift)) & mask
        out[t] = keys ^ (rows << np.uint64(ishift))
    return out.reshape(-1)


def isometry_bfs(n: int, spec: IsometrySpec = IsometrySpec.SYM,
                 limits: SearchLimits | None = None,
                 log=None, store_keys: bool = True) -> ExplorationResult:
    """Explore the Cayley graph of GL(n,2) from the identity.

    Returns exact distances for every stored canonical key and exact
    big-integer sphere sizes, stopping when the graph is exhausted or a
    limit trips.  With ``limits.threads > 1`` canonicalization batches
    run concurrently; the result is identical for any thread count.

    ``store_keys=False`` is the streaming mode: only the two working
    levels are kept in memory and the result carries sphere sizes and
    orbit counts but no key map (so no distance queries).
    """
    if not 1 <= n <= gf2.MAX_ORDER:
        raise OrderError(f"order must be in 1..{gf2.MAX_ORDER}, got {n}")
    limits = limits or SearchLimits()
    executor = ThreadPoolExecutor(limits.threads) if limits.threads > 1 else None
    try:
        return _bfs_loop(n, spec, limits, executor, log, store_keys)
    finally:
        if executor is not None:
            executor.shutdown()


def _bfs_loop(n, spec, limits, executor, log, store_keys) -> ExplorationResult:
    level_keys = [np.array([gf2.identity(n).bits], dtype=np.uint64)]
    level_sizes = [np.array([1], dtype=np.uint64)]
    sphere_sizes = [1]
    orbit_counts = [1]
    stored = 1
    complete = False
    last_level_complete = True
    prev = np.empty(0, dtype=np.uint64)
    curr = level_keys[0]
    depth = 0
    # cap the per-block successor array at ~2^20 entries
    block_rows = max(1, (1 << 20) // max(1, n * (n - 1)))

    while True:
        if limits.max_depth is not None and depth >= limits.max_depth:
            break
        parts_keys: list[np.ndarray] = []
        parts_sizes: list[np.ndarray] = []
        next_sorted = np.empty(0, dtype=np.uint64)
        truncated = False
        for start in range(0, curr.size, block_rows):
            block = curr[start:start + block_rows]
            succ = _successors(block, n)
            canon, sizes = canonicalize_batch(succ, n, spec, executor)
            uniq, first = np.unique(canon, return_index=True)
            usizes = sizes[first]
            keep = ~_in_sorted(uniq, prev)
            keep &= ~_in_sorted(uniq, curr)
            keep &= ~_in_sorted(uniq, next_sorted)
            new = uniq[keep]
            if new.size == 0:
                continue
            parts_keys.append(new)
            parts_sizes.append(usizes[keep])
            next_sorted = np.sort(np.concatenate([next_sorted, new]))
            stored += new.size
            if limits.max_orbits is not None and stored > limits.max_orbits:
                truncated = True
                break
        if parts_keys:
            allk = np.concatenate(parts_keys)
            order = np.argsort(allk)
            nxt_keys = allk[order]
            nxt_sizes = np.concatenate(parts_sizes)[order]
            if store_keys:
                level_keys.append(nxt_keys)
                level_sizes.append(nxt_sizes)
            sphere_sizes.append(int(sum(int(s) for s in nxt_sizes)))
            orbit_counts.append(int(nxt_keys.size))
            depth += 1
            if log is not None:
                print(f"level {depth}: orbits={orbit_counts[-1]} "
                      f"elements={sphere_sizes[-1]} stored={stored} "
                      f"mem~{stored * 17 / 1e6:.1f}MB", file=log, flush=True)
            prev, curr = curr, nxt_keys
        if truncated:
            last_level_complete = False
            break
        if not parts_keys:
            complete = True
            break

    # a truncated run may still have visited every element
    if not complete and sum(sphere_sizes) == gl_order(n):
        complete = True
        last_level_complete = True
    if not store_keys:
        return ExplorationResult(
            n=n, spec=spec,
            keys=np.empty(0, dtype=np.uint64), dists=np.empty(0, dtype=np.uint8),
            sphere_sizes=sphere_sizes, orbit_counts=orbit_counts,
            complete=complete, last_level_complete=last_level_complete,
            orbit_sizes=None,
        )
    keys = np.concatenate(level_keys)
    dists = np.concatenate([np.full(k.size, d, dtype=np.uint8)
                            for d, k in enumerate(level_keys)])
    osizes = np.concatenate(level_sizes)
    order = np.argsort(keys)
    return ExplorationResult(
        n=n, spec=spec,
        keys=keys[order], dists=dists[order],
        sphere_sizes=sphere_sizes, orbit_counts=orbit_counts,
        complete=complete, last_level_complete=last_level_complete,
        orbit_sizes=osizes[order],
    )


# ---------------------------------------------------------------------------
# queries over a result
# ---------------------------------------------------------------------------


def distance_of(res: ExplorationResult, m: BitMatrix) -> int:
    """Exact distance of m, i.e. its minimal CNOT count."""
    if m.n != res.n:
        raise DimensionError(f"matrix order {m.n} vs exploration order {res.n}")
    key = canonicalize(m, res.spec).key.bits
    d = res.distance_of_key(key)
    if d is None:
        raise HorizonError(
            f"element beyond the explored horizon (depth {res.max_depth})")
    return d


def _neighbor_distances(res: ExplorationResult, m: BitMatrix):
    """Distances of T*m for every generator T in lex order; None where the
    neighbor falls outside the stored ball."""
    trans = gf2.all_transvections(res.n)
    succ = np.array([gf2.apply_transvection(t, m).bits for t in trans],
                    dtype=np.uint64)
    canon, _ = canonicalize_batch(succ, res.n, res.spec)
    return trans, [res.distance_of_key(int(k)) for k in canon]


def synthesize(res: ExplorationResult, m: BitMatrix) -> Circuit:
    """A circuit of exactly distance_of(m) gates evaluating to m.

    Greedy descent: scan generators in (i, j) lexicographic order and
    take the first one that moves one level closer to the identity.
    """
    d = distance_of(res, m)
    found: list[Transvection] = []
    x = m
    while d > 0:
        trans, dists = _neighbor_distances(res, x)
        for t, nd in zip(trans, dists):
            if nd == d - 1:
                found.append(t)
                x = gf2.apply_transvection(t, x)
                d = nd
                break
        else:
            raise ConsistencyError("no descending neighbor found")
    # found = [t1, ..., td] with m = t1 * t2 * ... * td; gates apply
    # left-multiplicatively in list order, so emit in reverse
    return Circuit(res.n, tuple(reversed(found)))


# ---------------------------------------------------------------------------
# plain (unreduced) BFS and the bidirectional probe
# ---------------------------------------------------------------------------


def plain_bfs_levels(n: int, start: BitMatrix | None = None,
                     max_depth: int | None = None):
    """Unreduced BFS levels from ``start`` (default the identity), as a
    generator of (distance, sorted key array).  Memory is two levels."""
    if not 1 <= n <= gf2.MAX_ORDER:
        raise OrderError(f"order must be in 1..{gf2.MAX_ORDER}, got {n}")
    start_bits = gf2.identity(n).bits if start is None else start.bits
    prev = np.empty(0, dtype=np.uint64)
    curr = np.array([start_bits], dtype=np.uint64)
    d = 0
    while curr.size:
        yield d, curr
        if max_depth is not None and d >= max_depth:
            return
        succ = np.unique(_successors(curr, n))
        keep = ~_in_sorted(succ, prev)
        keep &= ~_in_sorted(succ, curr)
        prev, curr = curr, succ[keep]
        d += 1


@dataclass(frozen=True)
class BidirOutcome:
    """Either the exact distance or a certified lower bound on it."""

    value: int
    exact: bool


def bidirectional_distance(n: int, target: BitMatrix,
                           spec: IsometrySpec = IsometrySpec.SYM,
                           fwd_depth: int = 1, bwd_depth: int = 1,
                           limits: SearchLimits | None = None,
                           log=None) -> BidirOutcome:
    """Meet-in-the-middle distance probe.

    A reduced forward ball of radius ``fwd_depth`` around the identity
    is intersected with plain backward levels from ``target``.  The
    first backward level b containing an element of the forward ball
    yields the exact distance min(forward distance) + b; if the two
    horizons never meet, distance >= fwd_depth + bwd_depth + 1 is
    certified.  Distances are orbit-invariant, so looking up canonical
    keys of backward elements is sound.
    """
    if target.n != n:
        raise DimensionError(f"target order {target.n} vs {n}")
    threads = limits.threads if limits else 1
    fwd = isometry_bfs(n, spec, SearchLimits(max_depth=fwd_depth, threads=threads),
                       log=log)
    executor = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for b, level in plain_bfs_levels(n, start=target, max_depth=bwd_depth):
            canon, _ = canonicalize_batch(level, n, spec, executor)
            canon = np.unique(canon)
            idx = np.searchsorted(fwd.keys, canon)
            idx[idx == fwd.keys.size] = fwd.keys.size - 1 if fwd.keys.size else 0
            hit = fwd.keys[idx] == canon
            if hit.any():
                best = int(fwd.dists[idx[hit]].min())
                if log is not None:
                    print(f"backward level {b}: met forward ball at depth {best}",
                          file=log, flush=True)
                return BidirOutcome(best + b, exact=True)
            if log is not None:
                print(f"backward level {b}: {level.size} elements, no meet",
                      file=log, flush=True)
    finally:
        if executor is not None:
            executor.shutdown()
    return BidirOutcome(fwd_depth + bwd_depth + 1, exact=False)
