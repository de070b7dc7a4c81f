"""Cross-cutting evaluators connecting factor colorings to product results.

The load-bearing identity: under the row-major order, the product's greedy
color count depends on the factors only through their greedy counts p and q,
so FF(G x H) equals FF(K_p x K_q). Both sides are computed by independent
engine runs here, never by a closed form, and every equality is asserted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .firstfit import Coloring, first_fit, grundy_number
from .gds import GdsCertificate, _certificate, is_descent_free, verify_gds
from .graphs import (
    CapExceeded,
    Graph,
    OrderedGraph,
    cartesian_product,
    chromatic_number,
    complete_graph,
    independence_number,
)
from .latin import LatinRectangle, rectangle_gds_via_cover, thm8_bound
from .orderings import lex_ordering

_COMPLETE_FF_CACHE: dict[tuple[int, int], int] = {}


def _ff_complete(p: int, q: int) -> int:
    """FF(K_p x K_q) under the row-major order, by direct engine replay."""
    key = (p, q)
    cached = _COMPLETE_FF_CACHE.get(key)
    if cached is None:
        gs = OrderedGraph(complete_graph(p))
        hs = OrderedGraph(complete_graph(q))
        ordering = lex_ordering(gs, hs)
        cached = first_fit(ordering.product, ordering).k
        _COMPLETE_FF_CACHE[key] = cached
    return cached


def _ceil_pow2(p: int) -> int:
    return 1 << max(0, (p - 1).bit_length())


@dataclass(frozen=True)
class ReductionReport:
    p: int
    q: int
    ff_product: int
    ff_complete: int
    grundy_g: int | None
    grundy_h: int | None
    sum_bound: int | None
    square_bound: int | None
    power_formula: int | None
    same_graph: bool
    same_ordered: bool

    def record(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "ff_product": self.ff_product,
            "ff_complete": self.ff_complete,
            "grundy_g": self.grundy_g,
            "grundy_h": self.grundy_h,
            "bounds": {"sum": self.sum_bound, "square": self.square_bound},
            "power_formula": self.power_formula,
        }


def reduction_report(
    gs: OrderedGraph, hs: OrderedGraph, grundy_cap: int = 9
) -> ReductionReport:
    """Compute FF on the full product and on the complete-graph product
    independently and assert they agree; attach worst-order bounds when the
    factor oracles are in range and the power-of-two value on square pairs."""
    p = first_fit(gs.graph, gs.order).k
    q = first_fit(hs.graph, hs.order).k
    ordering = lex_ordering(gs, hs)
    ff_product = first_fit(ordering.product, ordering).k
    ff_complete = _ff_complete(p, q)
    if ff_product != ff_complete:
        raise AssertionError(
            f"product greedy count {ff_product} differs from complete-product "
            f"count {ff_complete} (p={p}, q={q})"
        )
    grundy_g = grundy_h = None
    sum_bound = square_bound = None
    if gs.graph.n <= grundy_cap and hs.graph.n <= grundy_cap:
        grundy_g = grundy_number(gs.graph, exhaustive_cap=grundy_cap)
        grundy_h = grundy_number(hs.graph, exhaustive_cap=grundy_cap)
        sum_bound = grundy_g + grundy_h - 1
        if ff_product > sum_bound:
            raise AssertionError(
                f"greedy count {ff_product} exceeds worst-order bound {sum_bound}"
            )
    same_graph = gs.graph == hs.graph
    if same_graph and grundy_g is not None:
        square_bound = 2 * grundy_g - 2
        if ff_product > square_bound:
            raise AssertionError(
                f"greedy count {ff_product} exceeds square bound {square_bound}"
            )
    same_ordered = same_graph and gs.order == hs.order
    power_formula = None
    if same_ordered:
        power_formula = _ceil_pow2(p)
        if ff_product != power_formula:
            raise AssertionError(
                f"square product count {ff_product} is not 2^ceil(log2 {p}) = {power_formula}"
            )
    return ReductionReport(
        p=p,
        q=q,
        ff_product=ff_product,
        ff_complete=ff_complete,
        grundy_g=grundy_g,
        grundy_h=grundy_h,
        sum_bound=sum_bound,
        square_bound=square_bound,
        power_formula=power_formula,
        same_graph=same_graph,
        same_ordered=same_ordered,
    )


def lift_latin_gds(
    gs: OrderedGraph, hs: OrderedGraph, r: LatinRectangle, s
) -> GdsCertificate:
    """Lift a rectangle defining set to the product.

    Color classes C_1..C_p and D_1..D_q come from the factor greedy
    colorings; every vertex of C_i x D_j is colored with the rectangle's
    (i, j) entry, and the lifted pin set is the union of the blocks named
    by s. The replay must reproduce the lifted coloring with exactly q
    colors."""
    ff_g = first_fit(gs.graph, gs.order)
    ff_h = first_fit(hs.graph, hs.order)
    p, q = ff_g.k, ff_h.k
    if (p, q) != (r.p, r.q):
        raise ValueError(
            f"rectangle shape {r.p}x{r.q} does not match factor color counts ({p}, {q})"
        )
    cells = {(int(i), int(j)) for i, j in s}
    for i, j in cells:
        if not (0 <= i < p and 0 <= j < q):
            raise ValueError(f"cell ({i}, {j}) outside the rectangle")
    rect_product, rect_order, rect_target = r.as_product_coloring()
    rect_domain = [i * q + j for i, j in cells]
    if not verify_gds(rect_product, rect_order, rect_target, rect_domain):
        raise ValueError("the given cells are not a greedy defining set of the rectangle")
    ordering = lex_ordering(gs, hs)
    product = ordering.product
    nh = hs.graph.n
    colors = [0] * product.n
    lifted = []
    for a in range(gs.graph.n):
        ci = ff_g.colors[a] - 1
        for b in range(nh):
            dj = ff_h.colors[b] - 1
            v = a * nh + b
            colors[v] = r.cells[ci][dj]
            if (ci, dj) in cells:
                lifted.append(v)
    target = Coloring(product, colors)
    cert = _certificate(
        product,
        ordering,
        target,
        frozenset(lifted),
        "lift",
        {"rectangle_cells": len(cells), "classes": [p, q]},
    )
    if not cert.verified:
        raise AssertionError("lifted defining set failed replay verification")
    if cert.k != q:
        raise AssertionError(f"lifted coloring uses {cert.k} colors, expected {q}")
    return cert


def thm9_bound(
    gs: OrderedGraph, hs: OrderedGraph, independence_cap: int = 20
) -> float:
    """Product defining-set size bound: alpha(G) * alpha(H) times the
    rectangle cover bound at the factor greedy counts."""
    p = first_fit(gs.graph, gs.order).k
    q = first_fit(hs.graph, hs.order).k
    if p > q:
        gs, hs = hs, gs
        p, q = q, p
    if p < 2:
        raise ValueError("bound needs factor greedy counts of at least 2")
    alpha_g = independence_number(gs.graph, cap=independence_cap)
    alpha_h = independence_number(hs.graph, cap=independence_cap)
    return alpha_g * alpha_h * thm8_bound(p, q)


def cyclic_rectangle(p: int, q: int) -> LatinRectangle:
    """The canonical p x q rectangle with cell (i, j) = ((i + j) mod q) + 1."""
    return LatinRectangle([[(i + j) % q + 1 for j in range(q)] for i in range(p)])


def thm9_witness(gs: OrderedGraph, hs: OrderedGraph) -> dict:
    """Constructive side of the product bound: lift the cover-based defining
    set of the canonical rectangle and compare its size with the bound."""
    p = first_fit(gs.graph, gs.order).k
    q = first_fit(hs.graph, hs.order).k
    if p > q:
        gs, hs = hs, gs
        p, q = q, p
    bound = thm9_bound(gs, hs)
    rect = cyclic_rectangle(p, q)
    cover_cert = rectangle_gds_via_cover(rect)
    cells = [divmod(v, q) for v in cover_cert.domain]
    lifted = lift_latin_gds(gs, hs, rect, cells)
    return {
        "p": p,
        "q": q,
        "bound": bound,
        "rectangle_gds_size": cover_cert.size,
        "lifted_size": lifted.size,
        "verified": lifted.verified,
        "holds": lifted.size <= bound,
    }


def _proper_colorings(g: Graph, k: int):
    """Yield every proper coloring of g with colors 1..k, as tuples."""
    colors = [0] * g.n

    def rec(v: int):
        if v == g.n:
            yield tuple(colors)
            return
        banned = 0
        for u in g.neighbors[v]:
            banned |= 1 << colors[u]
        for c in range(1, k + 1):
            if not banned >> c & 1:
                colors[v] = c
                yield from rec(v + 1)
        colors[v] = 0

    yield from rec(0)


def _random_proper_coloring(g: Graph, k: int, rng: random.Random):
    colors = [0] * g.n

    def rec(v: int):
        if v == g.n:
            return True
        banned = 0
        for u in g.neighbors[v]:
            banned |= 1 << colors[u]
        options = [c for c in range(1, k + 1) if not banned >> c & 1]
        rng.shuffle(options)
        for c in options:
            colors[v] = c
            if rec(v + 1):
                return True
        colors[v] = 0
        return False

    if rec(0):
        return tuple(colors)
    return None


def corollary_check(
    gs: OrderedGraph,
    chromatic_cap: int = 16,
    exhaustive_cells: int = 16,
    trials: int = 500,
    seed: int = 0,
) -> dict:
    """Search optimum proper colorings of G x G for a descent-free one; when
    one exists the greedy count must equal the chromatic number and be a
    power of two."""
    ordering = lex_ordering(gs, gs)
    product = ordering.product
    chi = chromatic_number(product, cap=chromatic_cap)
    ff = first_fit(product, ordering)
    found = None
    checked = 0
    if product.n <= exhaustive_cells:
        mode = "exhaustive"
        for colors in _proper_colorings(product, chi):
            if len(set(colors)) != chi:
                continue
            checked += 1
            if is_descent_free(product, ordering, Coloring(product, colors)):
                found = colors
                break
    else:
        mode = "randomized"
        rng = random.Random(seed)
        for _ in range(trials):
            colors = _random_proper_coloring(product, chi, rng)
            if colors is None or len(set(colors)) != chi:
                continue
            checked += 1
            if is_descent_free(product, ordering, Coloring(product, colors)):
                found = colors
                break
    verdict = {
        "chi": chi,
        "ff": ff.k,
        "mode": mode,
        "colorings_checked": checked,
        "found_descent_free": found is not None,
        "power_of_two": None,
        "passed": True,
    }
    if found is not None:
        power = (chi & (chi - 1) == 0) and chi > 0
        verdict["power_of_two"] = power
        equal = ff.k == chi and ff.colors == found
        verdict["passed"] = bool(power and equal)
    return verdict
