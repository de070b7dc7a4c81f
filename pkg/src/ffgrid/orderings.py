"""Scan orders for product graphs.

The row-major (lexicographic) order scans the product array left to right,
top to bottom. An arbitrary order tau is compatible with the factor orders
when tau(a) < tau(b) forces a to precede b in at least one coordinate;
these are exactly the linear extensions of the coordinatewise dominance
order on ranks, which is what the enumerator walks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graphs import CapExceeded, OrderedGraph, ProductGraph, cartesian_product


class ProductOrdering:
    """A total scan order over a product graph's vertices."""

    __slots__ = ("product", "scan", "rank", "kind")

    def __init__(self, product: ProductGraph, scan: Sequence[int], kind: str = "arbitrary") -> None:
        scan = tuple(scan)
        if sorted(scan) != list(range(product.n)):
            raise ValueError("scan must be a permutation of the product's vertices")
        if kind not in ("lex", "quasi-lex", "arbitrary"):
            raise ValueError(f"unknown ordering kind {kind!r}")
        rank = [0] * product.n
        for i, v in enumerate(scan):
            rank[v] = i
        self.product = product
        self.scan = scan
        self.rank = tuple(rank)
        self.kind = kind

    def serialize(self) -> str:
        return "order: " + " ".join(str(v) for v in self.scan)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ProductOrdering)
            and self.product.dims == other.product.dims
            and self.scan == other.scan
        )

    def __hash__(self) -> int:
        return hash((self.product.dims, self.scan))

    def __repr__(self) -> str:
        return f"ProductOrdering(dims={self.product.dims}, kind={self.kind!r})"


def lex_ordering(
    gs: OrderedGraph, hs: OrderedGraph, product: ProductGraph | None = None
) -> ProductOrdering:
    """Row-major scan order: rows by the first factor's ranks, each row by
    the second factor's ranks."""
    if product is None:
        product = cartesian_product(gs.graph, hs.graph)
    elif product.dims != (gs.graph.n, hs.graph.n):
        raise ValueError("product dimensions do not match the factors")
    nh = hs.graph.n
    scan = [g * nh + h for g in gs.order for h in hs.order]
    return ProductOrdering(product, scan, kind="lex")


def is_quasi_lex(tau, gs: OrderedGraph, hs: OrderedGraph) -> bool:
    """True iff earlier-in-tau implies strictly earlier in some coordinate.

    Pairwise O(n^2) check; equivalently tau is a linear extension of the
    coordinatewise dominance order on factor ranks.
    """
    ng, nh = gs.graph.n, hs.graph.n
    scan = tau.scan if isinstance(tau, ProductOrdering) else tuple(tau)
    if len(scan) != ng * nh or sorted(scan) != list(range(ng * nh)):
        raise ValueError("ordering does not match the product dimensions")
    rg, rh = gs.rank, hs.rank
    keys = [(rg[v // nh], rh[v % nh]) for v in scan]
    for i in range(len(keys)):
        ri, ci = keys[i]
        for j in range(i + 1, len(keys)):
            rj, cj = keys[j]
            if ri >= rj and ci >= cj:
                return False
    return True


@dataclass(frozen=True)
class QuasiLexEnumeration:
    orderings: tuple[ProductOrdering, ...]
    total: int
    truncated: bool


def enumerate_quasi_lex(
    gs: OrderedGraph,
    hs: OrderedGraph,
    cap: int | None = None,
    cell_cap: int = 16,
) -> QuasiLexEnumeration:
    """Every compatible scan order, exactly once, plus the exact count.

    Backtracks over linear extensions of the rank-space dominance grid: a
    cell (i, j) may be emitted once cells (i-1, j) and (i, j-1) are. With a
    cap the collected stream truncates but the count stays exact.
    """
    ng, nh = gs.graph.n, hs.graph.n
    if ng * nh > cell_cap:
        raise CapExceeded(f"enumeration too large: {ng * nh} cells over cap {cell_cap}")
    product = cartesian_product(gs.graph, hs.graph)
    collected: list[ProductOrdering] = []
    total = 0
    fill = [0] * ng  # cells emitted per rank-row; valid iff non-increasing
    seq: list[tuple[int, int]] = []

    def rec() -> None:
        nonlocal total
        if len(seq) == ng * nh:
            total += 1
            if cap is None or len(collected) < cap:
                scan = [gs.order[i] * nh + hs.order[j] for i, j in seq]
                collected.append(ProductOrdering(product, scan, kind="quasi-lex"))
            return
        for i in range(ng):
            if fill[i] < nh and (i == 0 or fill[i - 1] > fill[i]):
                seq.append((i, fill[i]))
                fill[i] += 1
                rec()
                fill[i] -= 1
                seq.pop()

    rec()
    truncated = cap is not None and total > cap
    return QuasiLexEnumeration(tuple(collected), total, truncated)
