"""Disjointness (Kneser) graphs, exact clique counting, Turán densities, and blow-ups.

Adjacency is one int bit row per vertex; all counting is exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .errors import CapExceeded, FamilyFormatError, GensetError, WorkLimitExceeded
from .families import SetFamily, SubsetMask

DEFAULT_GRAPH_CAP = 1 << 16
DEFAULT_BLOWUP_CAP = 64
DEFAULT_CLIQUE_WORK_LIMIT = 200_000_000
DEFAULT_SUBSET_BUDGET = 2_000_000


@dataclass(frozen=True)
class Graph:
    """Undirected graph as per-vertex bit rows; labels carry family masks when relevant."""

    rows: tuple[int, ...]
    labels: Optional[tuple[SubsetMask, ...]] = None

    @property
    def m(self) -> int:
        return len(self.rows)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)


def graph_from_edges(m: int, edges) -> Graph:
    rows = [0] * m
    for u, v in edges:
        if not (0 <= u < m and 0 <= v < m) or u == v:
            raise GensetError(f"bad edge ({u}, {v}) for {m} vertices")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(tuple(rows))


def disjointness_graph(fam: SetFamily, graph_cap: int = DEFAULT_GRAPH_CAP) -> Graph:
    """Vertices are family members (family order); edges join disjoint pairs."""
    if fam.m > graph_cap:
        raise CapExceeded(f"family of size {fam.m} exceeds graph cap {graph_cap}")
    masks = fam.members
    m = len(masks)
    rows = [0] * m
    for u in range(m):
        mu = masks[u]
        row_u = rows[u]
        for v in range(u + 1, m):
            if mu & masks[v] == 0:
                row_u |= 1 << v
                rows[v] |= 1 << u
        rows[u] = row_u
    return Graph(tuple(rows), labels=masks)


def degeneracy_order(graph: Graph) -> list[int]:
    """Vertices by repeated minimum-degree removal."""
    m = graph.m
    alive = (1 << m) - 1
    order = []
    for _ in range(m):
        best, best_deg = -1, m + 1
        rest = alive
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            deg = (graph.rows[v] & alive).bit_count()
            if deg < best_deg:
                best, best_deg = v, deg
        order.append(best)
        alive &= ~(1 << best)
    return order


def count_cliques(
    graph: Graph, r: int, work_limit: int = DEFAULT_CLIQUE_WORK_LIMIT
) -> int:
    """Exact number of r-cliques, by forward-neighborhood intersection along a degeneracy order."""
    if r < 1:
        raise GensetError("r must be >= 1")
    m = graph.m
    if r == 1:
        return m
    if r == 2:
        return graph.edge_count()
    order = degeneracy_order(graph)
    pos = {v: i for i, v in enumerate(order)}
    # Rows relabeled to order positions, keeping only forward neighbors.
    fwd = [0] * m
    for v in range(m):
        i = pos[v]
        row = graph.rows[v]
        acc = 0
        while row:
            u = (row & -row).bit_length() - 1
            row &= row - 1
            j = pos[u]
            if j > i:
                acc |= 1 << j
        fwd[i] = acc
    work = 0

    def count(cand: int, need: int) -> int:
        nonlocal work
        if need == 1:
            return cand.bit_count()
        total = 0
        rest = cand
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            work += 1
            if work > work_limit:
                raise WorkLimitExceeded("clique counting exceeded its work limit")
            total += count(fwd[v] & rest, need - 1)
        return total

    return sum(count(fwd[v], r - 1) for v in range(m))


def clique_density(graph: Graph, r: int) -> Fraction:
    """count_cliques / C(m, r) as a reduced rational."""
    if graph.m < r:
        raise GensetError(f"graph has {graph.m} < r = {r} vertices")
    return Fraction(count_cliques(graph, r), comb(graph.m, r))


def turan_eta(r: int, s: int) -> Fraction:
    """Limiting r-clique density of the balanced complete s-partite graph: s(s-1)...(s-r+1)/s^r."""
    if not 1 <= r <= s:
        raise GensetError(f"need 1 <= r <= s, got r={r}, s={s}")
    num = 1
    for i in range(r):
        num *= s - i
    return Fraction(num, s**r)


def turan_blowup_graph(s: int, T: int, graph_cap: int = DEFAULT_GRAPH_CAP) -> Graph:
    """Complete s-partite graph with parts of size T, vertices part-major."""
    if s < 1 or T < 1:
        raise GensetError("need s >= 1 and T >= 1")
    m = s * T
    if m > graph_cap:
        raise CapExceeded(f"{m} vertices exceed graph cap {graph_cap}")
    all_mask = (1 << m) - 1
    rows = []
    for v in range(m):
        part = v // T
        part_mask = ((1 << T) - 1) << (part * T)
        rows.append(all_mask & ~part_mask)
    return Graph(tuple(rows))


def balanced_turan_graph(l: int, s: int) -> Graph:
    """Complete s-partite graph on l vertices with near-equal parts."""
    base, extra = divmod(l, s)
    sizes = [base + 1] * extra + [base] * (s - extra)
    all_mask = (1 << l) - 1
    rows = []
    start = 0
    for size in sizes:
        part_mask = ((1 << size) - 1) << start
        rows.extend([all_mask & ~part_mask] * size)
        start += size
    return Graph(tuple(rows))


def turan_clique_closed_form(s: int, T: int, r: int) -> int:
    """Number of r-cliques in the s-partite Turán graph with parts of size T: C(s, r) T^r."""
    if not 1 <= r <= s:
        raise GensetError(f"need 1 <= r <= s, got r={r}, s={s}")
    return comb(s, r) * T**r


def find_blowup(
    graph: Graph, a: int, t: int, vertex_cap: int = DEFAULT_BLOWUP_CAP
) -> Optional[list[tuple[int, ...]]]:
    """a disjoint vertex classes of size t with every cross-class pair an edge, or None.

    Edges inside a class are allowed and ignored: only the cross edges of the
    complete a-partite pattern are required. Exhaustive backtracking; classes
    are found in increasing order of their smallest vertex.
    """
    if a < 2 or t < 1:
        raise GensetError("need a >= 2 and t >= 1")
    m = graph.m
    if m > vertex_cap:
        raise CapExceeded(f"{m} vertices exceed blow-up cap {vertex_cap}")
    rows = graph.rows

    def extend(classes: list[tuple[int, ...]], common: int, min_start: int):
        if len(classes) == a:
            return list(classes)
        need = a - len(classes)
        if common.bit_count() < need * t:
            return None
        cands = [v for v in range(min_start, m) if (common >> v) & 1]
        for combo in itertools.combinations(cands, t):
            new_common = common
            for v in combo:
                new_common &= rows[v]
            for v in combo:
                new_common &= ~(1 << v)
            found = extend(classes + [combo], new_common, combo[0] + 1)
            if found is not None:
                return found
        return None

    return extend([], (1 << m) - 1, 0)


@dataclass(frozen=True)
class ErdosMaxReport:
    l: int
    s: int
    r: int
    max_count: int
    max_graph: Graph
    turan_count: int
    attained_by_turan: bool
    graphs_enumerated: int


def erdos_max_check(l: int, s: int, r: int, l_cap: int = 7) -> ErdosMaxReport:
    """Brute-force max of the r-clique count over all labeled K_{s+1}-free graphs on l vertices.

    Enumerates edge assignments pair by pair, pruning as soon as a K_{s+1}
    appears, and compares the maximum against the balanced s-partite Turán
    graph on l vertices.
    """
    if not 1 <= r <= s:
        raise GensetError(f"need 1 <= r <= s, got r={r}, s={s}")
    if l > l_cap:
        raise CapExceeded(f"l={l} exceeds enumeration cap {l_cap}")
    pairs = [(u, v) for u in range(l) for v in range(u + 1, l)]
    rows = [0] * l
    best = {"count": -1, "rows": tuple(rows), "leaves": 0}

    def creates_forbidden(u: int, v: int) -> bool:
        # Would edge (u, v) complete a K_{s+1}? Equivalent to a K_{s-1} inside
        # the common neighborhood of u and v.
        common = rows[u] & rows[v]
        if s == 1:
            return True
        if s == 2:
            return common != 0
        if s == 3:
            rest = common
            while rest:
                w = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if rows[w] & common & ~((1 << (w + 1)) - 1):
                    return True
            return False
        verts = _bits(common)
        if len(verts) < s - 1:
            return False
        return count_cliques(_induced(Graph(tuple(rows)), verts), s - 1) > 0

    def new_r_cliques(u: int, v: int) -> int:
        # r-cliques created by edge (u, v): (r-2)-cliques in N(u) & N(v).
        if r == 2:
            return 1
        common = rows[u] & rows[v]
        if r == 3:
            return common.bit_count()
        verts = _bits(common)
        if len(verts) < r - 2:
            return 0
        return count_cliques(_induced(Graph(tuple(rows)), verts), r - 2)

    def walk(idx: int, count: int):
        if idx == len(pairs):
            best["leaves"] += 1
            if count > best["count"]:
                best["count"] = count
                best["rows"] = tuple(rows)
            return
        u, v = pairs[idx]
        if not creates_forbidden(u, v):
            gained = new_r_cliques(u, v)
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            walk(idx + 1, count + gained)
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        walk(idx + 1, count)

    walk(0, 0)
    turan = balanced_turan_graph(l, s)
    turan_count = count_cliques(turan, r) if l >= r else 0
    return ErdosMaxReport(
        l, s, r, best["count"], Graph(best["rows"]), turan_count,
        best["count"] == turan_count, best["leaves"],
    )


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return out


def _induced(graph: Graph, vertices: Sequence[int]) -> Graph:
    index = {v: i for i, v in enumerate(vertices)}
    rows = []
    for v in vertices:
        acc = 0
        for u in vertices:
            if u != v and graph.has_edge(u, v):
                acc |= 1 << index[u]
        rows.append(acc)
    return Graph(tuple(rows))


@dataclass(frozen=True)
class DenseSubsetResult:
    fraction: Fraction | float
    exact: bool
    dense_count: Optional[int]  # exact mode only
    total: int  # subsets examined (C(m, l) or sample size)


def dense_subset_fraction(
    graph: Graph,
    l: int,
    r: int,
    threshold: Fraction,
    sample: Optional[int] = None,
    seed: Optional[int] = None,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> DenseSubsetResult:
    """Fraction of l-vertex subsets whose induced r-clique density reaches the threshold.

    Exact mode enumerates all C(m, l) subsets when that fits the budget;
    sampling mode draws the given number of subsets from a seeded RNG.
    """
    m = graph.m
    if l > m:
        raise GensetError(f"l={l} exceeds vertex count {m}")
    if l < r:
        raise GensetError(f"need l >= r, got l={l}, r={r}")

    def is_dense(verts) -> bool:
        sub = _induced(graph, verts)
        return Fraction(count_cliques(sub, r), comb(l, r)) >= threshold

    if sample is None:
        total = comb(m, l)
        if total > budget:
            raise CapExceeded(
                f"C({m},{l}) = {total} exceeds exact-mode budget {budget}; use sampling"
            )
        dense = sum(1 for combo in itertools.combinations(range(m), l) if is_dense(combo))
        return DenseSubsetResult(Fraction(dense, total), True, dense, total)
    if seed is None:
        raise GensetError("sampling mode requires a seed")
    rng = random.Random(seed)
    dense = sum(1 for _ in range(sample) if is_dense(sorted(rng.sample(range(m), l))))
    return DenseSubsetResult(dense / sample, False, None, sample)


def format_graph(graph: Graph) -> str:
    """Edge-list text format: 'vertices=<m>' then 'u v' pairs, 0-based."""
    lines = [f"vertices={graph.m}"]
    for u in range(graph.m):
        row = graph.rows[u] >> (u + 1) << (u + 1)
        for v in _bits(row):
            lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m is None:
            if not line.startswith("vertices="):
                raise FamilyFormatError(f"line {lineno}: expected 'vertices=<m>' header")
            m = int(line[len("vertices="):])
            continue
        toks = line.split()
        if len(toks) != 2:
            raise FamilyFormatError(f"line {lineno}: expected 'u v'")
        edges.append((int(toks[0]), int(toks[1])))
    if m is None:
        raise FamilyFormatError("missing 'vertices=<m>' header")
    try:
        return graph_from_edges(m, edges)
    except GensetError as exc:
        raise FamilyFormatError(str(exc))
