"""Combinatorial planar diagrams.

A diagram is a tuple of crossings, each a 4-tuple of arc labels listed
counterclockwise.  Slots 0 and 2 carry the under-strand, slots 1 and 3 the
over-strand.  ``X(a,b,c,d)`` and ``X(c,d,a,b)`` describe the same crossing
(a half turn), and equality of diagrams ignores that distinction.  Published
PD codes additionally start each crossing at the incoming under-strand;
:func:`standardize` restores that convention after rewrites.

A *dart* is a ``(crossing index, slot)`` pair, i.e. one end of an arc.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterator, Literal, Sequence

Crossing = tuple[int, int, int, int]
Dart = tuple[int, int]


class DiagramError(ValueError):
    """Structurally invalid planar diagram."""


@dataclass(frozen=True, eq=False)
class PlanarDiagram:
    crossings: tuple[Crossing, ...] = ()
    free_loops: int = 0
    _occ: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        crossings = tuple(tuple(int(a) for a in c) for c in self.crossings)
        object.__setattr__(self, "crossings", crossings)
        occ: dict[int, list[Dart]] = {}
        for i, c in enumerate(crossings):
            if len(c) != 4:
                raise DiagramError(f"crossing {i} does not have four slots")
            for s, a in enumerate(c):
                occ.setdefault(a, []).append((i, s))
        for a, ds in occ.items():
            if len(ds) != 2:
                raise DiagramError(f"arc {a} appears {len(ds)} times")
        if self.free_loops < 0:
            raise DiagramError("negative free-loop count")
        if not crossings and self.free_loops == 0:
            raise DiagramError("empty diagram has no components")
        object.__setattr__(self, "_occ", occ)
        if crossings:
            k = len(pieces(self))
            f = len(_face_orbits(self))
            if f - len(crossings) != 2 * k:
                raise DiagramError(
                    f"Euler check failed: V-E+F = {f - len(crossings)} over {k} piece(s) (non-planar PD code)"
                )

    # -- basic queries -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    def arcs(self) -> list[int]:
        return sorted(self._occ)

    def darts_of(self, arc: int) -> list[Dart]:
        return self._occ[arc]

    def label(self, dart: Dart) -> int:
        return self.crossings[dart[0]][dart[1]]

    def other_end(self, dart: Dart) -> Dart:
        a, b = self._occ[self.label(dart)]
        return b if a == dart else a

    def _key(self):
        return tuple(min(c, (c[2], c[3], c[0], c[1])) for c in self.crossings), self.free_loops

    def __eq__(self, other):
        if not isinstance(other, PlanarDiagram):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"PlanarDiagram({render_pd(self)})"


def unknot() -> PlanarDiagram:
    return PlanarDiagram((), 1)


def unlink(k: int) -> PlanarDiagram:
    return PlanarDiagram((), k)


def render_pd(d: PlanarDiagram) -> str:
    """Render as ``PD[X(a,b,c,d), ..., O, ...]`` (``O`` is a crossingless loop)."""
    if not d.crossings and d.free_loops == 1:
        return "PD[]"
    items = [f"X({','.join(map(str, c))})" for c in d.crossings]
    items += ["O"] * d.free_loops
    return "PD[" + ",".join(items) + "]"


# ---------------------------------------------------------------------------
# traversal and orientation


@dataclass(frozen=True)
class Orientation:
    """Direction of travel along every arc, as the dart each arc runs into."""

    heads: dict[int, Dart]

    def tail(self, d: PlanarDiagram, arc: int) -> Dart:
        a, b = d.darts_of(arc)
        return b if self.heads[arc] == a else a


def _step(d: PlanarDiagram, head: Dart) -> tuple[int, Dart]:
    """From an arc entering ``head`` pass straight through; return next arc and its head."""
    i, s = head
    out = (i, (s + 2) % 4)
    nxt = d.label(out)
    return nxt, d.other_end(out)


def _walk(d: PlanarDiagram, arc: int, head: Dart) -> list[tuple[int, Dart]]:
    path = []
    start = arc
    while True:
        path.append((arc, head))
        arc, head = _step(d, head)
        if arc == start:
            return path


def _component_start(d: PlanarDiagram, arc: int) -> Dart:
    """Head dart for traversing a component from its lowest arc.

    Goes toward the smaller neighbouring label; ties prefer the PD convention
    (entering at slot 0) and then the lower crossing index.
    """
    d1, d2 = sorted(d.darts_of(arc))

    def rank(h: Dart):
        nxt, _ = _step(d, h)
        return (nxt, 0 if h[1] == 0 else 1, h)

    return min((d1, d2), key=rank)


def components(d: PlanarDiagram, orientation: Orientation | None = None) -> list[list[tuple[int, Dart]]]:
    """Strand components as lists of (arc, head dart), excluding free loops."""
    seen: set[int] = set()
    comps = []
    for a in d.arcs():
        if a in seen:
            continue
        head = orientation.heads[a] if orientation else _component_start(d, a)
        path = _walk(d, a, head)
        seen.update(x for x, _ in path)
        comps.append(path)
    return comps


def component_count(d: PlanarDiagram) -> int:
    return len(components(d)) + d.free_loops


def default_orientation(d: PlanarDiagram) -> Orientation:
    heads = {}
    for comp in components(d):
        for arc, head in comp:
            heads[arc] = head
    return Orientation(heads)


def orientation_from_components(d: PlanarDiagram, reverse: Sequence[bool]) -> Orientation:
    """Default orientation with selected components (by order) reversed."""
    heads = {}
    for k, comp in enumerate(components(d)):
        flip = k < len(reverse) and reverse[k]
        for arc, head in comp:
            heads[arc] = head
        if flip:
            for arc, head in comp:
                a, b = d.darts_of(arc)
                heads[arc] = b if head == a else a
    return Orientation(heads)


def crossing_sign(d: PlanarDiagram, o: Orientation, i: int) -> int:
    """+1 for a positive (right-handed) crossing."""
    c = d.crossings[i]
    under_in = 0 if o.heads[c[0]] == (i, 0) else 2
    over_in = 1 if o.heads[c[1]] == (i, 1) else 3
    return 1 if (under_in, over_in) in ((0, 3), (2, 1)) else -1


def writhe(d: PlanarDiagram, o: Orientation | None = None) -> int:
    o = o or default_orientation(d)
    return sum(crossing_sign(d, o, i) for i in range(d.n))


def linking_matrix_components(d: PlanarDiagram) -> dict[int, int]:
    """Map arc -> index of its strand component (in :func:`components` order)."""
    out = {}
    for k, comp in enumerate(components(d)):
        for arc, _ in comp:
            out[arc] = k
    return out


# ---------------------------------------------------------------------------
# rewrites


def _rewire(d: PlanarDiagram, removed: set[int], joins: list[tuple[int, int]], loops_delta: int = 0) -> PlanarDiagram:
    """Delete crossings and splice arc labels according to ``joins``."""
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in joins:
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra
    kept = [c for k, c in enumerate(d.crossings) if k not in removed]
    remaining: dict[int, int] = {}
    for c in kept:
        for a in c:
            if a in parent:
                r = find(a)
                remaining[r] = remaining.get(r, 0) + 1
    roots = {find(a) for a in parent}
    new_loops = sum(1 for r in roots if remaining.get(r, 0) == 0)
    rep = {a: find(a) for a in parent}
    new = tuple(tuple(rep.get(a, a) for a in c) for c in kept)
    loops = d.free_loops + new_loops + loops_delta
    if not new and loops == 0:
        loops = 1
    return PlanarDiagram(new, loops)


SmoothMode = Literal["A", "B"]


def smooth(d: PlanarDiagram, c: int, mode: SmoothMode) -> PlanarDiagram:
    """Resolve crossing ``c``: mode A joins slots (0,1),(2,3); B joins (0,3),(1,2)."""
    if not 0 <= c < d.n:
        raise IndexError(f"crossing index {c} out of range")
    x = d.crossings[c]
    if mode == "A":
        joins = [(x[0], x[1]), (x[2], x[3])]
    elif mode == "B":
        joins = [(x[0], x[3]), (x[1], x[2])]
    else:
        raise ValueError(f"unknown smoothing mode {mode!r}")
    return _rewire(d, {c}, joins)


def _switched(x: Crossing) -> Crossing:
    return (x[1], x[2], x[3], x[0])


def switch(d: PlanarDiagram, c: int) -> PlanarDiagram:
    """Exchange over and under at crossing ``c``."""
    if not 0 <= c < d.n:
        raise IndexError(f"crossing index {c} out of range")
    cs = list(d.crossings)
    cs[c] = _switched(cs[c])
    return _orient_slots(PlanarDiagram(tuple(cs), d.free_loops), [c])


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    """Switch every crossing."""
    new = PlanarDiagram(tuple(_switched(x) for x in d.crossings), d.free_loops)
    return _orient_slots(new, range(new.n))


def _orient_slots(d: PlanarDiagram, which) -> PlanarDiagram:
    """Rotate the given crossings by a half turn where needed so slot 0 is incoming."""
    if not d.n:
        return d
    o = default_orientation(d)
    cs = list(d.crossings)
    for i in which:
        x = cs[i]
        if o.heads[x[0]] != (i, 0) and o.heads[x[2]] == (i, 2):
            cs[i] = (x[2], x[3], x[0], x[1])
    return PlanarDiagram(tuple(cs), d.free_loops)


def standardize(d: PlanarDiagram) -> PlanarDiagram:
    """Relabel arcs 1..2n along the default orientation, slot 0 incoming under."""
    if not d.n:
        return d
    o = default_orientation(d)
    newlab = {}
    k = 1
    for comp in components(d, o):
        for arc, _ in comp:
            newlab[arc] = k
            k += 1
    cs = []
    for i, x in enumerate(d.crossings):
        if o.heads[x[0]] != (i, 0):
            x = (x[2], x[3], x[0], x[1])
        cs.append(tuple(newlab[a] for a in x))
    return PlanarDiagram(tuple(cs), d.free_loops)


def relabel(d: PlanarDiagram, mapping: dict[int, int]) -> PlanarDiagram:
    return PlanarDiagram(tuple(tuple(mapping[a] for a in c) for c in d.crossings), d.free_loops)


# ---------------------------------------------------------------------------
# faces


def _face_orbits(d: PlanarDiagram) -> list[list[Dart]]:
    """Orbits of dart -> (rotate ccw after crossing the arc); each orbit is a face.

    The face of an orbit contains the corner between slots s and s+1 at every
    dart (i, s+1) in it.
    """
    seen: set[Dart] = set()
    orbits = []
    for i in range(d.n):
        for s in range(4):
            if (i, s) in seen:
                continue
            orbit = []
            cur = (i, s)
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                j, t = d.other_end(cur)
                cur = (j, (t + 1) % 4)
            orbits.append(orbit)
    return orbits


def pieces(d: PlanarDiagram) -> list[list[int]]:
    """Crossing index sets of the connected (non-split) pieces of the projection."""
    parent = list(range(d.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in d.arcs():
        (i, _), (j, _) = d.darts_of(a)
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(d.n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def sub_diagram(d: PlanarDiagram, idx: Sequence[int]) -> PlanarDiagram:
    """Diagram made of the given crossings (which must be closed under arcs)."""
    return PlanarDiagram(tuple(d.crossings[i] for i in idx), 0)


def split_pieces(d: PlanarDiagram) -> list[PlanarDiagram]:
    """Split a diagram into its connected pieces plus one diagram per free loop."""
    out = [sub_diagram(d, p) for p in pieces(d)] if d.n else []
    out += [unknot() for _ in range(d.free_loops)]
    return out


@dataclass(frozen=True)
class FaceData:
    """Faces of a connected diagram with a checkerboard colouring.

    ``corner_face[(i, k)]`` is the face index holding the corner between
    slots k and k+1 of crossing i; ``colour[f]`` is 0 or 1.
    """

    faces: list[list[Dart]]
    corner_face: dict[tuple[int, int], int]
    colour: list[int]


def faces(d: PlanarDiagram) -> FaceData:
    if d.n == 0:
        raise DiagramError("crossingless diagram has no faces to colour")
    if len(pieces(d)) != 1:
        raise DiagramError("diagram is split; colour each piece separately")
    orbits = _face_orbits(d)
    v, e, f = d.n, 2 * d.n, len(orbits)
    if v - e + f != 2:
        raise DiagramError(f"Euler check failed: V-E+F = {v - e + f} (non-planar or corrupt PD code)")
    corner_face = {}
    for fi, orbit in enumerate(orbits):
        for i, s in orbit:
            corner_face[(i, (s - 1) % 4)] = fi
    colour = [-1] * f
    colour[corner_face[(0, 0)]] = 0
    stack = [corner_face[(0, 0)]]
    # faces sharing an arc are across it: corner (i, s) and corner (i, s-1) flank slot s
    adj: dict[int, set[int]] = {k: set() for k in range(f)}
    for i in range(d.n):
        for s in range(4):
            a, b = corner_face[(i, s)], corner_face[(i, (s - 1) % 4)]
            adj[a].add(b)
            adj[b].add(a)
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if colour[y] == -1:
                colour[y] = 1 - colour[x]
                stack.append(y)
            elif colour[y] == colour[x]:
                raise DiagramError("checkerboard colouring failed")
    return FaceData(orbits, corner_face, colour)


# ---------------------------------------------------------------------------
# Reidemeister I / II simplification


def _find_r1(d: PlanarDiagram) -> tuple[int, int] | None:
    for i, x in enumerate(d.crossings):
        for s in range(4):
            if x[s] == x[(s + 1) % 4] and d.other_end((i, s)) == (i, (s + 1) % 4):
                return i, s
    return None


def _apply_r1(d: PlanarDiagram, i: int, s: int) -> PlanarDiagram:
    x = d.crossings[i]
    # loop arc joins slots s, s+1; the through-strand joins slots s+2, s+3
    joins = [(x[s], x[(s + 1) % 4]), (x[(s + 2) % 4], x[(s + 3) % 4])]
    return _rewire(d, {i}, joins, loops_delta=-1)


def bigons(d: PlanarDiagram) -> Iterator[tuple[Dart, Dart]]:
    """Yield bigon faces as (dart (i,s), dart (j,t)) where arc x runs (i,s)-(j,t)
    and arc y runs (j,t+1)-(i,s-1)."""
    for i in range(d.n):
        for s in range(4):
            j, t = d.other_end((i, s))
            if j == i:
                continue
            back = d.other_end((j, (t + 1) % 4))
            if back == (i, (s - 1) % 4):
                yield (i, s), (j, t)


def _r2_joins(d: PlanarDiagram, bigon) -> tuple[set[int], list[tuple[int, int]]] | None:
    (i, s), (j, t) = bigon
    if s % 2 != t % 2:
        return None
    ci, cj = d.crossings[i], d.crossings[j]
    x, y = ci[s], cj[(t + 1) % 4]
    joins = [
        (ci[(s + 2) % 4], x), (x, cj[(t + 2) % 4]),
        (cj[(t + 3) % 4], y), (y, ci[(s + 1) % 4]),
    ]
    return {i, j}, joins


def r2_reducible_bigons(d: PlanarDiagram) -> Iterator[tuple[Dart, Dart]]:
    for b in bigons(d):
        if b[0][1] % 2 == b[1][1] % 2:
            yield b


def simplify(d: PlanarDiagram) -> PlanarDiagram:
    """Greedy Reidemeister I and II reductions until neither applies."""
    while d.n:
        r1 = _find_r1(d)
        if r1 is not None:
            d = _apply_r1(d, *r1)
            continue
        b = next(r2_reducible_bigons(d), None)
        if b is not None:
            removed, joins = _r2_joins(d, b)
            d = _rewire(d, removed, joins)
            continue
        break
    return d


# ---------------------------------------------------------------------------
# canonical codes

_CODE_MAGIC = b"KBC1"


def _canonical_tuple(d: PlanarDiagram):
    if not d.n:
        return (d.free_loops, 0, ())
    comps = components(d)
    starts = []
    for comp in comps:
        for arc, head in comp:
            starts.append((arc, head))
            tail = d.other_end(head)
            starts.append((arc, tail))
    best = None
    n_arcs = 2 * d.n
    for arc, head in starts:
        for code in _label_branches(d, {}, [arc, head], n_arcs):
            if best is None or code < best:
                best = code
    return (d.free_loops, d.n, best)


def _label_branches(d: PlanarDiagram, newlab: dict, start, n_arcs: int):
    """Yield serialized crossing lists for every canonical continuation."""
    newlab = dict(newlab)
    order: list[int] = []
    seen_cross = set()
    # replay visit order of already-labelled arcs is not needed: we rebuild it
    arc, head = start
    label = len(newlab) + 1
    while arc not in newlab:
        newlab[arc] = label
        label += 1
        arc, head = _step(d, head)
    if len(newlab) == n_arcs:
        cs = []
        for x in d.crossings:
            y = tuple(newlab[a] for a in x)
            cs.append(min(y, (y[2], y[3], y[0], y[1])))
        yield tuple(sorted(cs))
        return
    # next component: first crossing (by smallest new label on it) with unlabelled slots
    best_i, best_key = None, None
    for i, x in enumerate(d.crossings):
        labs = [newlab[a] for a in x if a in newlab]
        if labs and len(labs) < 4:
            key = min(labs)
            if best_key is None or key < best_key:
                best_i, best_key = i, key
    if best_i is None:
        for a in d.arcs():
            if a in newlab:
                continue
            for h in d.darts_of(a):
                yield from _label_branches(d, newlab, [a, h], n_arcs)
        return
    x = d.crossings[best_i]
    for s in range(4):
        if x[s] not in newlab:
            # leave crossing best_i through slot s
            yield from _label_branches(d, newlab, [x[s], d.other_end((best_i, s))], n_arcs)


def canonical_code(d: PlanarDiagram) -> bytes:
    """Relabeling-invariant byte encoding.

    Layout: ``b"KBC1"``, free-loop count and crossing count as big-endian
    uint32, then four big-endian uint32 labels per crossing.  Crossings are
    written with canonical labels (minimum over starting arc, direction and
    later component starts), each in the smaller of its two half-turn forms,
    sorted.
    """
    loops, n, cs = _canonical_tuple(d)
    out = bytearray(_CODE_MAGIC)
    out += struct.pack(">II", loops, n)
    for c in cs:
        out += struct.pack(">IIII", *c)
    return bytes(out)
