"""The unoriented Q polynomial by memoised skein recursion.

    Q(U) = 1,    Q(L+) + Q(L-) = z (Q(L0) + Q(Linf))

Each step simplifies by Reidemeister I/II moves, splits off disjoint pieces
and connected summands (Q is multiplicative under both, with a factor
mu = 2/z - 1 per extra split piece), then applies the skein relation at one
crossing.  The crossing is chosen so that switching it either creates a
removable bigon or moves the diagram one step closer to a descending
diagram, which is an unlink.  The measure (crossings, non-descending
crossings) therefore strictly decreases along every branch.
"""

from __future__ import annotations

from ..algebra import LaurentPoly
from ..diagram import (
    PlanarDiagram,
    _step,
    bigons,
    canonical_code,
    component_count,
    pieces,
    simplify,
    smooth,
    sub_diagram,
    switch,
)

Z = LaurentPoly.monomial(1, var="z")
MU = LaurentPoly({-1: 2, 0: -1}, var="z")
ONE = LaurentPoly.const(1, var="z")


class QBudgetExceeded(RuntimeError):
    """The skein recursion went deeper than the configured cap."""


def _descending_walk(d: PlanarDiagram) -> list[tuple[int, int]]:
    """Visit order of (crossing, slot) entries along a projection-only walk.

    Components are taken in order of their smallest arc label, each started
    on that arc and heading toward the smaller neighbouring label.  Nothing
    here depends on which strand is over, so switching crossings keeps the
    walk fixed.
    """
    seen_arcs: set[int] = set()
    visits = []
    for a in d.arcs():
        if a in seen_arcs:
            continue
        d1, d2 = d.darts_of(a)
        head = min((d1, d2), key=lambda h: (_step(d, h)[0], h[0]))
        arc = a
        while arc not in seen_arcs:
            seen_arcs.add(arc)
            visits.append(head)
            arc, head = _step(d, head)
    return visits


def bad_crossings(d: PlanarDiagram) -> list[int]:
    """Crossings first reached along the under-strand, in walk order."""
    first: dict[int, int] = {}
    order = []
    for i, s in _descending_walk(d):
        if i not in first:
            first[i] = s
            order.append(i)
    return [i for i in order if first[i] % 2 == 0]


def _r2_enabling_crossing(d: PlanarDiagram) -> int | None:
    for (i, s), (j, t) in bigons(d):
        if s % 2 != t % 2:
            return min(i, j)
    return None


def _two_edge_cut(d: PlanarDiagram) -> tuple[list[int], list[int], int, int] | None:
    """Find arcs e, f whose removal disconnects the projection.

    Returns the two crossing sets and the two arcs.
    """
    arcs = d.arcs()
    ends = {a: (d.darts_of(a)[0][0], d.darts_of(a)[1][0]) for a in arcs}
    for e in arcs:
        adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(d.n)}
        for a in arcs:
            if a == e:
                continue
            u, v = ends[a]
            if u != v:
                adj[u].append((v, a))
                adj[v].append((u, a))
        bridge = _first_bridge(adj, d.n)
        if bridge is not None:
            side = _reach(adj, ends[bridge][0], skip=bridge)
            if len(side) in (0, d.n):
                continue
            rest = [i for i in range(d.n) if i not in side]
            return sorted(side), rest, e, bridge
    return None


def _reach(adj, start: int, skip: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y, a in adj[x]:
            if a != skip and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _first_bridge(adj, n: int) -> int | None:
    disc = [-1] * n
    low = [0] * n
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, None, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, a in it:
                if a == via:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, a, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] > disc[p]:
                    return via
    return None


def _close_summand(d: PlanarDiagram, idx: list[int], e: int, f: int) -> PlanarDiagram:
    sub = [tuple(e if a == f else a for a in d.crossings[i]) for i in idx]
    return PlanarDiagram(tuple(sub), 0)


class QEvaluator:
    """Memoised Q evaluation; one instance may be reused across diagrams."""

    def __init__(self, max_depth: int = 64):
        self.max_depth = max_depth
        self.memo: dict[bytes, LaurentPoly] = {}

    def __call__(self, d: PlanarDiagram) -> LaurentPoly:
        return self._q(d, 0)

    def _q(self, d: PlanarDiagram, depth: int) -> LaurentPoly:
        d = simplify(d)
        if not d.n:
            return MU ** (d.free_loops - 1)
        parts = pieces(d)
        if len(parts) > 1 or d.free_loops:
            out = MU ** (len(parts) + d.free_loops - 1)
            for idx in parts:
                out = out * self._q(sub_diagram(d, idx), depth)
            return out
        key = canonical_code(d)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if depth > self.max_depth:
            raise QBudgetExceeded(f"skein recursion deeper than {self.max_depth} at {d.n} crossings")
        value = self._connected(d, depth)
        self.memo[key] = value
        return value

    def _connected(self, d: PlanarDiagram, depth: int) -> LaurentPoly:
        cut = _two_edge_cut(d)
        if cut is not None:
            left, right, e, f = cut
            return self._q(_close_summand(d, left, e, f), depth) * self._q(_close_summand(d, right, e, f), depth)
        c = _r2_enabling_crossing(d)
        if c is None:
            bad = bad_crossings(d)
            if not bad:
                return MU ** (component_count(d) - 1)  # descending: an unlink
            c = bad[0]
        nxt = depth + 1
        smoothings = self._q(smooth(d, c, "A"), nxt) + self._q(smooth(d, c, "B"), nxt)
        return Z * smoothings - self._q(switch(d, c), nxt)


_DEFAULT = QEvaluator()


def q_polynomial(d: PlanarDiagram, evaluator: QEvaluator | None = None) -> LaurentPoly:
    return (evaluator or _DEFAULT)(d)
