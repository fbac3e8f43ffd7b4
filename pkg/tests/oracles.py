"""Independent reference implementations used to cross-check the package.

Nothing in here imports from ``commscore``: betweenness is computed by
exhaustive shortest-path enumeration instead of dependency accumulation,
p-values come from mpmath's incomplete beta instead of scipy, and the survey
scores are written straight from their defining formulas.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath


# ---------------------------------------------------------------------------
# graph oracles


def enumeration_betweenness(
    nodes: Iterable[str], edges: Iterable[tuple[str, str]]
) -> dict[str, Fraction]:
    """Betweenness by brute-force enumeration of every shortest path.

    For each ordered pair (s, t) all shortest s→t paths are generated
    explicitly; interior vertices of each path earn sigma_st(v)/sigma_st.
    Normalization is by (N-1)(N-2); fewer than three nodes gives all zeros.
    """
    node_list = sorted(set(nodes))
    adj: dict[str, list[str]] = {v: [] for v in node_list}
    for src, dst in set(edges):
        adj[src].append(dst)
    for v in adj:
        adj[v].sort()

    score = {v: Fraction(0) for v in node_list}
    for s in node_list:
        dist = _bfs_levels(adj, s)
        for t in node_list:
            if t == s or t not in dist:
                continue
            paths = _all_shortest_paths(adj, dist, s, t)
            sigma = len(paths)
            for path in paths:
                for interior in path[1:-1]:
                    score[interior] += Fraction(1, sigma)
    n = len(node_list)
    if n < 3:
        return {v: Fraction(0) for v in node_list}
    denom = (n - 1) * (n - 2)
    return {v: s / denom for v, s in score.items()}


def _bfs_levels(adj: Mapping[str, list[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def _all_shortest_paths(adj: Mapping[str, list[str]], dist: Mapping[str, int],
                        s: str, t: str) -> list[list[str]]:
    """Every s→t path that only ever steps one BFS level deeper."""
    out: list[list[str]] = []

    def walk(v: str, trail: list[str]) -> None:
        if v == t:
            out.append(trail)
            return
        for w in adj[v]:
            if dist.get(w) == dist[v] + 1 and dist[w] <= dist[t]:
                walk(w, trail + [w])

    walk(s, [s])
    return out


def freeman_centralization(values: Mapping[str, Fraction], kind: str) -> Fraction:
    n = len(values)
    if n <= 2:
        return Fraction(0)
    c_max = max(values.values())
    spread = sum((c_max - v for v in values.values()), start=Fraction(0))
    return spread / (n - 1 if kind == "betweenness" else n - 2)


def degree_map(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> dict[str, Fraction]:
    node_list = sorted(set(nodes))
    neighbors: dict[str, set[str]] = {v: set() for v in node_list}
    for src, dst in edges:
        neighbors[src].add(dst)
        neighbors[dst].add(src)
    n = len(node_list)
    if n <= 1:
        return {v: Fraction(0) for v in node_list}
    return {v: Fraction(len(nb), n - 1) for v, nb in neighbors.items()}


# ---------------------------------------------------------------------------
# statistics oracles


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = sum((a - mx) ** 2 for a in x)
    vy = sum((b - my) ** 2 for b in y)
    return cov / (vx * vy) ** 0.5


def student_t_p(r: float, n: int) -> float:
    """Two-tailed p for a Pearson r via the t CDF, evaluated with mpmath."""
    if abs(r) == 1:
        return 0.0
    t = abs(r) * mpmath.sqrt((n - 2) / (1 - r * r))
    # survival of Student's t with n-2 dof, doubled
    x = (n - 2) / ((n - 2) + t * t)
    return float(mpmath.betainc((n - 2) / 2, mpmath.mpf(1) / 2,
                                0, x, regularized=True))


# ---------------------------------------------------------------------------
# survey / contribution oracles


def reichheld_nps(answers: Sequence[int]) -> Fraction:
    promoters = sum(1 for a in answers if a in (9, 10))
    detractors = sum(1 for a in answers if 0 <= a <= 6)
    return Fraction(100 * (promoters - detractors), len(answers))


def ci_formula(sent: int, received: int) -> Fraction:
    return Fraction(sent - received, sent + received)


def weighted_variance_mean(pairs: Sequence[tuple[Fraction, int]]) -> Fraction:
    """AWVCI from (daily variance, weight) pairs: Σ v·w / Σ w."""
    num = sum((v * w for v, w in pairs), start=Fraction(0))
    den = sum(w for _, w in pairs)
    return num / den


def population_variance(values: Sequence[Fraction]) -> Fraction:
    n = len(values)
    mean = sum(values, start=Fraction(0)) / n
    return sum(((v - mean) ** 2 for v in values), start=Fraction(0)) / n
