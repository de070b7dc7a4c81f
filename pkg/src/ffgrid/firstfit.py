"""The First-Fit coloring engine.

Plain greedy coloring, greedy coloring subject to pinned colors, the exact
worst-order color count for small graphs, and the explicit worst-order
construction for products of complete graphs. Colors are 1-based so grids
read exactly like the printed arrays.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .graphs import CapExceeded, Graph, ProductGraph, cartesian_product, complete_graph
from .orderings import ProductOrdering


def _scan_of(order, n: int) -> tuple[int, ...]:
    """Normalize an ordering argument to a scan tuple."""
    scan = getattr(order, "scan", None)
    if scan is None:
        scan = getattr(order, "order", None)
    if scan is None:
        scan = order
    scan = tuple(scan)
    if len(scan) != n or sorted(scan) != list(range(n)):
        raise ValueError("ordering must be a permutation of the graph's vertices")
    return scan


class Coloring:
    """A total 1-based vertex coloring with its color classes.

    ``contiguous=True`` additionally requires every color in ``1..k`` to be
    used; plain First-Fit outputs always are, pinned completions may not be.
    """

    __slots__ = ("graph", "colors", "k", "classes")

    def __init__(self, graph: Graph, colors: Sequence[int], contiguous: bool = True) -> None:
        colors = tuple(int(c) for c in colors)
        if len(colors) != graph.n:
            raise ValueError("coloring must assign every vertex a color")
        if graph.n and min(colors) < 1:
            raise ValueError("colors are 1-based positive integers")
        for u in range(graph.n):
            cu = colors[u]
            for v in graph.neighbors[u]:
                if v > u and colors[v] == cu:
                    raise ValueError(
                        f"improper coloring: adjacent vertices {u} and {v} share color {cu}"
                    )
        k = max(colors, default=0)
        classes = tuple(
            tuple(v for v in range(graph.n) if colors[v] == c) for c in range(1, k + 1)
        )
        if contiguous:
            for c, members in enumerate(classes, start=1):
                if not members:
                    raise ValueError(f"color {c} unused; colorings must use every color in 1..k")
        self.graph = graph
        self.colors = colors
        self.k = k
        self.classes = classes

    def grid(self) -> list[list[int]]:
        """The coloring as an n_G x n_H integer array (products only)."""
        if not isinstance(self.graph, ProductGraph):
            raise ValueError("grid view requires a product graph")
        ng, nh = self.graph.dims
        return [list(self.colors[a * nh:(a + 1) * nh]) for a in range(ng)]

    def serialize(self) -> str:
        return "colors: " + " ".join(str(c) for c in self.colors)

    def grid_csv(self) -> str:
        return "\n".join(",".join(str(c) for c in row) for row in self.grid()) + "\n"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Coloring)
            and self.graph == other.graph
            and self.colors == other.colors
        )

    def __hash__(self) -> int:
        return hash((self.graph, self.colors))

    def __repr__(self) -> str:
        return f"Coloring(k={self.k}, n={self.graph.n})"


class Precoloring:
    """Pinned colors on a vertex subset."""

    __slots__ = ("domain", "colors")

    def __init__(self, colors: Mapping[int, int]) -> None:
        colors = {int(v): int(c) for v, c in colors.items()}
        if any(c < 1 for c in colors.values()):
            raise ValueError("pinned colors are 1-based positive integers")
        self.domain = frozenset(colors)
        self.colors = colors

    @classmethod
    def from_coloring(cls, target: Coloring, domain) -> "Precoloring":
        return cls({v: target.colors[v] for v in domain})

    def validate_against(self, g: Graph) -> None:
        for v in self.domain:
            if not 0 <= v < g.n:
                raise ValueError(f"precoloring conflict: vertex {v} not in the graph")
        for v in self.domain:
            cv = self.colors[v]
            for u in g.neighbors[v]:
                if u > v and u in self.domain and self.colors[u] == cv:
                    raise ValueError(
                        f"precoloring conflict: pinned neighbors {v} and {u} share color {cv}"
                    )

    def __repr__(self) -> str:
        return f"Precoloring(size={len(self.domain)})"


def first_fit(g: Graph, order) -> Coloring:
    """Scan vertices in order, giving each the smallest color not already
    on a colored neighbor. Deterministic in (g, order)."""
    scan = _scan_of(order, g.n)
    colors = [0] * g.n
    nbrs = g.neighbors
    for v in scan:
        used = 0
        for u in nbrs[v]:
            used |= 1 << colors[u]
        c = 1
        while used >> c & 1:
            c += 1
        colors[v] = c
    return Coloring(g, colors)


def _completion_colors(g: Graph, scan: Sequence[int], pinned: Mapping[int, int]) -> list[int]:
    """Greedy completion of a pinned partial coloring; pins are visible as
    colored neighbors from the first scan step."""
    colors = [0] * g.n
    for v, c in pinned.items():
        colors[v] = c
    nbrs = g.neighbors
    for v in scan:
        if colors[v]:
            continue
        used = 0
        for u in nbrs[v]:
            used |= 1 << colors[u]
        c = 1
        while used >> c & 1:
            c += 1
        colors[v] = c
    return colors


def _completion_matches(g: Graph, scan: Sequence[int], domain, target: Sequence[int]) -> bool:
    """True iff the greedy completion pinned from target on domain reproduces
    target exactly. Early-exits on the first mismatch."""
    colors = [0] * g.n
    for v in domain:
        colors[v] = target[v]
    nbrs = g.neighbors
    for v in scan:
        if colors[v]:
            continue
        used = 0
        for u in nbrs[v]:
            used |= 1 << colors[u]
        c = 1
        while used >> c & 1:
            c += 1
        if c != target[v]:
            return False
        colors[v] = c
    return True


def first_fit_with_precoloring(g: Graph, order, pre: Precoloring) -> Coloring:
    """First-Fit that skips pinned vertices while scanning but sees their
    colors throughout. Pinned colors are never recolored."""
    pre.validate_against(g)
    scan = _scan_of(order, g.n)
    colors = _completion_colors(g, scan, pre.colors)
    for u in range(g.n):
        cu = colors[u]
        for v in g.neighbors[u]:
            if v > u and colors[v] == cu:
                raise ValueError(
                    f"greedy/pin collision: vertices {u} and {v} both ended with color {cu}"
                )
    return Coloring(g, colors, contiguous=False)


def _grundy_by_orderings(g: Graph) -> int:
    """Exact max greedy color count by DFS over all scan orders, sharing
    prefixes and pruning branches that cannot beat the incumbent."""
    n = g.n
    if n == 0:
        return 0
    nbrs = g.neighbors
    colors = [0] * n
    best = 0

    def rec(remaining: int, depth: int, kmax: int) -> None:
        nonlocal best
        if kmax + (n - depth) <= best:
            return
        if remaining == 0:
            best = kmax
            return
        m = remaining
        while m:
            bit = m & -m
            m ^= bit
            v = bit.bit_length() - 1
            used = 0
            for u in nbrs[v]:
                used |= 1 << colors[u]
            c = 1
            while used >> c & 1:
                c += 1
            colors[v] = c
            rec(remaining ^ bit, depth + 1, c if c > kmax else kmax)
            colors[v] = 0

    rec((1 << n) - 1, 0, 0)
    return best


def _maximal_independent_sets(rows: Sequence[int], mask: int) -> list[int]:
    """Maximal independent sets of the induced subgraph on mask, as bitmasks
    (Bron-Kerbosch with pivoting on the complement graph)."""
    comp = {}
    m = mask
    while m:
        bit = m & -m
        m ^= bit
        v = bit.bit_length() - 1
        comp[v] = mask & ~rows[v] & ~bit
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            out.append(r)
            return
        pool = p | x
        pivot, best_cover = -1, -1
        mm = pool
        while mm:
            bit = mm & -mm
            mm ^= bit
            u = bit.bit_length() - 1
            cover = (p & comp[u]).bit_count()
            if cover > best_cover:
                best_cover, pivot = cover, u
        mm = p & ~comp[pivot]
        while mm:
            bit = mm & -mm
            mm ^= bit
            v = bit.bit_length() - 1
            bk(r | bit, p & comp[v], x & comp[v])
            p ^= bit
            x |= bit

    bk(0, mask, 0)
    return out


def _grundy_by_colorings(g: Graph) -> int:
    """Exact max greedy color count via feasible greedy colorings: peel off
    maximal independent sets, memoized on the remaining vertex mask."""
    rows = g.rows
    memo: dict[int, int] = {0: 0}

    def best(mask: int) -> int:
        cached = memo.get(mask)
        if cached is not None:
            return cached
        top = 0
        for chosen in _maximal_independent_sets(rows, mask):
            sub = best(mask & ~chosen)
            if sub + 1 > top:
                top = sub + 1
        memo[mask] = top
        return top

    return best((1 << g.n) - 1)


def grundy_number(
    g: Graph,
    exhaustive_cap: int = 9,
    search_cap: int = 12,
    method: str = "auto",
) -> int:
    """Exact worst-order First-Fit color count.

    Up to exhaustive_cap vertices every scan order is tried; between that and
    search_cap a branch-and-bound over feasible greedy colorings runs instead.
    The two engines agree and are cross-checked in the test suite.
    """
    if method == "auto":
        method = "orderings" if g.n <= exhaustive_cap else "colorings"
    if method == "orderings":
        if g.n > exhaustive_cap:
            raise CapExceeded(
                f"instance too large: {g.n} vertices over exhaustive-ordering cap {exhaustive_cap}"
            )
        return _grundy_by_orderings(g)
    if method == "colorings":
        if g.n > search_cap:
            raise CapExceeded(
                f"instance too large: {g.n} vertices over coloring-search cap {search_cap}"
            )
        return _grundy_by_colorings(g)
    raise ValueError(f"unknown grundy method {method!r}")


def grundy_witness_km_kn(m: int, n: int) -> tuple[ProductOrdering, Coloring]:
    """A scan order of K_m x K_n (m < n) whose First-Fit uses m+n-1 colors.

    The first n-1 columns are scanned by increasing value of the wrap-around
    pattern ((i+j) mod (n-1)) + 1, which greedy then reproduces; the last
    column is scanned top-down and climbs through m fresh colors.
    """
    if not 1 <= m < n:
        raise ValueError("construction needs 1 <= m < n")
    product = cartesian_product(complete_graph(m), complete_graph(n))
    block = sorted(
        ((i + j) % (n - 1) + 1, i, j) for i in range(m) for j in range(n - 1)
    )
    scan = [i * n + j for _, i, j in block]
    scan += [i * n + (n - 1) for i in range(m)]
    ordering = ProductOrdering(product, scan, kind="arbitrary")
    return ordering, first_fit(product, ordering)
