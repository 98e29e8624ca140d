"""Shared fixtures: cached explorations and an independent distance oracle.

Explorations are expensive enough to share across modules; the oracle
below is a deliberately naive dict-based BFS over the full group, kept
free of the package's vectorised machinery so it can vouch for it.
"""

import pytest

from cnotcayley import gf2
from cnotcayley.bfs import SearchLimits, isometry_bfs
from cnotcayley.isometry import IsometrySpec


@pytest.fixture(scope="session")
def explored():
    cache = {}

    def get(n, spec=IsometrySpec.SYM, max_depth=None):
        key = (n, spec, max_depth)
        if key not in cache:
            cache[key] = isometry_bfs(n, spec, SearchLimits(max_depth=max_depth))
        return cache[key]

    return get


def oracle_distances(n):
    """Plain BFS over every group element with scalar row operations."""
    start = gf2.identity(n).bits
    dist = {start: 0}
    frontier = [start]
    trans = gf2.all_transvections(n)
    d = 0
    while frontier:
        nxt = []
        for bits in frontier:
            m = gf2.BitMatrix(n, bits)
            for t in trans:
                s = gf2.apply_transvection(t, m).bits
                if s not in dist:
                    dist[s] = d + 1
                    nxt.append(s)
        frontier = nxt
        d += 1
    return dist


@pytest.fixture(scope="session")
def oracle_dist():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = oracle_distances(n)
        return cache[n]

    return get
