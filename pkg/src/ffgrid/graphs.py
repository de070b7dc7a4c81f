"""Finite simple graphs with packed-bitset adjacency and small exact oracles.

Vertices are dense integer indices ``0..n-1`` and orderings are explicit
permutations, so rank comparison is a plain integer compare. Graphs are
immutable after construction and safe to share across workers; the oracles
here (independence number, chromatic number) are exact with hard instance
caps and fail loudly instead of approximating.
"""

from __future__ import annotations

from typing import Iterable, Sequence

MAX_VERTICES = 4096


class CapExceeded(ValueError):
    """An exact oracle was asked for an instance above its configured cap."""


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Adjacency is stored both as packed bit rows (``rows[v]`` has bit ``u``
    set iff ``u ~ v``) and as sorted neighbor tuples for scan loops.
    """

    __slots__ = ("n", "rows", "neighbors")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0 or n > MAX_VERTICES:
            raise ValueError(f"vertex count {n} outside 0..{MAX_VERTICES}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self.n = n
        self.rows = tuple(rows)
        self.neighbors = tuple(_bits(r) for r in rows)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.neighbors), default=0)

    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.neighbors[u] if u < v]

    def complement(self) -> "Graph":
        antiedges = [
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if not self.rows[u] >> v & 1
        ]
        return Graph(self.n, antiedges)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = 1
        stack = [0]
        count = 1
        while stack:
            v = stack.pop()
            for u in self.neighbors[v]:
                if not seen >> u & 1:
                    seen |= 1 << u
                    count += 1
                    stack.append(u)
        return count == self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


class ProductGraph(Graph):
    """Cartesian product of two graphs, laid out row-major.

    Vertex ``(a, b)`` of the product gets index ``a * n_H + b``; with identity
    factor orderings the row-major rank therefore equals the vertex index.
    """

    __slots__ = ("dims",)

    def __init__(self, g: Graph, h: Graph) -> None:
        if g.n == 0 or h.n == 0:
            raise ValueError("empty factor")
        nh = h.n
        edges: list[tuple[int, int]] = []
        for a in range(g.n):
            base = a * nh
            for u, v in h.edges():
                edges.append((base + u, base + v))
        for a, b in g.edges():
            for u in range(nh):
                edges.append((a * nh + u, b * nh + u))
        super().__init__(g.n * nh, edges)
        self.dims = (g.n, h.n)

    def index(self, a: int, b: int) -> int:
        return a * self.dims[1] + b

    def coords(self, v: int) -> tuple[int, int]:
        return divmod(v, self.dims[1])

    def __repr__(self) -> str:
        return f"ProductGraph(dims={self.dims})"


def cartesian_product(g: Graph, h: Graph) -> ProductGraph:
    """Cartesian product graph: pairs adjacent iff equal in one coordinate
    and adjacent in the other."""
    return ProductGraph(g, h)


class OrderedGraph:
    """A graph together with a total scan order (``order[i]`` is scanned i-th)."""

    __slots__ = ("graph", "order", "rank")

    def __init__(self, graph: Graph, order: Sequence[int] | None = None) -> None:
        if order is None:
            order = range(graph.n)
        order = tuple(order)
        if sorted(order) != list(range(graph.n)):
            raise ValueError("ordering must be a permutation of the vertex indices")
        rank = [0] * graph.n
        for i, v in enumerate(order):
            rank[v] = i
        self.graph = graph
        self.order = order
        self.rank = tuple(rank)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OrderedGraph)
            and self.graph == other.graph
            and self.order == other.order
        )

    def __hash__(self) -> int:
        return hash((self.graph, self.order))

    def __repr__(self) -> str:
        return f"OrderedGraph({self.graph!r}, order={self.order})"


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs at least one vertex")
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("path graph needs at least one vertex")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle graph needs at least three vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def random_graph(rng, n: int, p: float = 0.5) -> Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def max_independent_set(g: Graph, cap: int = 20) -> frozenset[int]:
    """An independence-number witness, by branch and bound over bitsets."""
    if g.n > cap:
        raise CapExceeded(f"instance too large: {g.n} vertices over independence cap {cap}")
    rows = g.rows
    best = [0, 0]  # size, chosen mask

    def grow(avail: int, chosen: int, size: int) -> None:
        if size + avail.bit_count() <= best[0]:
            return
        if avail == 0:
            best[0] = size
            best[1] = chosen
            return
        # branch on a highest-degree vertex of the remaining candidates
        v = max(_bits(avail), key=lambda u: (rows[u] & avail).bit_count())
        bit = 1 << v
        grow(avail & ~(rows[v] | bit), chosen | bit, size + 1)
        grow(avail & ~bit, chosen, size)

    grow((1 << g.n) - 1, 0, 0)
    return frozenset(_bits(best[1]))


def independence_number(g: Graph, cap: int = 20) -> int:
    """Exact independence number for graphs within the cap."""
    return len(max_independent_set(g, cap=cap))


def _k_colorable(g: Graph, k: int) -> bool:
    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    colors = [0] * g.n

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        banned = 0
        for u in g.neighbors[v]:
            banned |= 1 << colors[u]
        limit = min(k, used + 1)
        for c in range(1, limit + 1):
            if not banned >> c & 1:
                colors[v] = c
                if place(i + 1, used if c <= used else c):
                    return True
        colors[v] = 0
        return False

    return place(0, 0)


def chromatic_number(g: Graph, cap: int = 16) -> int:
    """Exact chromatic number for graphs within the cap.

    Starts from the clique number (computed exactly via the complement's
    independence number) and grows k until a proper coloring exists.
    """
    if g.n > cap:
        raise CapExceeded(f"instance too large: {g.n} vertices over chromatic cap {cap}")
    if g.n == 0:
        return 0
    if g.edge_count() == 0:
        return 1
    omega = independence_number(g.complement(), cap=max(cap, g.n))
    for k in range(omega, g.n + 1):
        if _k_colorable(g, k):
            return k
    return g.n


# Edge-list text format: first line "n m", then m lines "u v" (0-based),
# optional trailing line "order: p0 p1 ... p_{n-1}".

def parse_edge_list(text: str) -> tuple[Graph, tuple[int, ...] | None]:
    entries = [
        (lineno, line.strip())
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    if not entries:
        raise ValueError("line 1: expected header 'n m'")
    lineno, head = entries[0]
    parts = head.split()
    if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
        raise ValueError(f"line {lineno}: expected header 'n m'")
    n, m = int(parts[0]), int(parts[1])
    order: tuple[int, ...] | None = None
    body = entries[1:]
    if body and body[-1][1].startswith("order:"):
        lineno_o, line_o = body[-1]
        body = body[:-1]
        tokens = line_o[len("order:"):].split()
        try:
            order = tuple(int(t) for t in tokens)
        except ValueError:
            raise ValueError(f"line {lineno_o}: malformed order line") from None
        if sorted(order) != list(range(n)):
            raise ValueError(f"line {lineno_o}: order is not a permutation of 0..{n - 1}")
    if len(body) != m:
        raise ValueError(f"expected {m} edge lines, found {len(body)}")
    edges = []
    for lineno_e, line_e in body:
        parts = line_e.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"line {lineno_e}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValueError(f"line {lineno_e}: invalid edge ({u}, {v})")
        edges.append((u, v))
    return Graph(n, edges), order


def format_edge_list(g: Graph, order: Sequence[int] | None = None) -> str:
    lines = [f"{g.n} {g.edge_count()}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    if order is not None:
        lines.append("order: " + " ".join(str(v) for v in order))
    return "\n".join(lines) + "\n"
