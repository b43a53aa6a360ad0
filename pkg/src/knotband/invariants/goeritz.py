"""Goeritz forms: signature, determinant and double-cover homology.

For a connected diagram the white regions of a checkerboard colouring span
a surface.  Its Goeritz matrix G has, for white regions i != j, entry
-sum(eta) over crossings where i and j meet, with eta = +1 when the white
corners of the crossing are the ones merged by the A-smoothing.  Diagonal
entries make the rows sum to zero and one region is deleted.

Gordon-Litherland: sigma = sign(G) - mu with mu the sum of eta over the
crossings of type II (positive crossings whose white corners are the
B-corners, negative crossings whose white corners are the A-corners).  The
global sign is then flipped so that right-handed crossings push the
signature negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ..algebra import determinant, smith_normal_form, symmetric_signature
from ..diagram import (
    DiagramError,
    Orientation,
    PlanarDiagram,
    crossing_sign,
    default_orientation,
    faces,
    pieces,
    sub_diagram,
)

# corners k (between slots k and k+1) merged by the A-smoothing
A_CORNERS = (1, 3)


@dataclass(frozen=True)
class GoeritzForm:
    matrix: list[list[int]]
    mu: int
    white: int
    regions: list[int]          # face indices of the retained white regions
    deleted_region: int
    deleted_column: list[int]   # column of the deleted region, for the row-sum check

    def check(self) -> None:
        m = self.matrix
        for i, row in enumerate(m):
            for j, v in enumerate(row):
                if v != m[j][i]:
                    raise ArithmeticError("Goeritz matrix not symmetric")
            if sum(row) + self.deleted_column[i] != 0:
                raise ArithmeticError("Goeritz row sums do not cancel the deleted column")


def goeritz(d: PlanarDiagram, o: Orientation | None = None, white: int = 0) -> GoeritzForm:
    """Goeritz form of a connected diagram for the regions of colour ``white``."""
    fd = faces(d)
    o = o or default_orientation(d)
    whites = [f for f, c in enumerate(fd.colour) if c == white]
    index = {f: k for k, f in enumerate(whites)}
    size = len(whites)
    full = [[0] * size for _ in range(size)]
    mu = 0
    for i in range(d.n):
        w1, w2 = (fd.corner_face[(i, k)] for k in A_CORNERS)
        if fd.colour[w1] == white:
            eta = 1
        else:
            eta = -1
            w1, w2 = (fd.corner_face[(i, k - 1)] for k in A_CORNERS)
        if w1 != w2:
            a, b = index[w1], index[w2]
            full[a][b] -= eta
            full[b][a] -= eta
        sign = crossing_sign(d, o, i)
        if (sign > 0 and eta < 0) or (sign < 0 and eta > 0):
            mu += eta
    for k in range(size):
        full[k][k] = -sum(full[k][j] for j in range(size) if j != k)
    keep = list(range(size - 1))
    matrix = [[full[a][b] for b in keep] for a in keep]
    col = [full[a][size - 1] for a in keep]
    form = GoeritzForm(matrix, mu, white, whites[:-1], whites[-1], col)
    form.check()
    return form


def _signature_connected(d: PlanarDiagram, o: Orientation) -> int:
    values = []
    for white in (0, 1):
        g = goeritz(d, o, white)
        values.append(-(symmetric_signature(g.matrix) - g.mu))
    if values[0] != values[1]:
        raise ArithmeticError(f"signature depends on the colouring: {values}")
    return values[0]


def _restrict(o: Orientation, sub: PlanarDiagram) -> Orientation:
    return Orientation({a: o.heads[a] for a in sub.arcs()})


def _pieces_with_orientation(d: PlanarDiagram, o: Orientation):
    for idx in pieces(d):
        sub = sub_diagram(d, idx)
        # crossing indices change inside the sub-diagram; remap dart heads
        remap = {old: new for new, old in enumerate(idx)}
        heads = {}
        for a in sub.arcs():
            ci, s = o.heads[a]
            heads[a] = (remap[ci], s)
        yield sub, Orientation(heads)


def signature(d: PlanarDiagram, o: Orientation | None = None) -> int:
    """Link signature; split pieces add and free loops contribute zero."""
    if not d.n:
        return 0
    o = o or default_orientation(d)
    return sum(_signature_connected(sub, so) for sub, so in _pieces_with_orientation(d, o))


@dataclass(frozen=True)
class CoverHomology:
    """Invariant factors of H1 of the double branched cover (0 = free summand)."""

    factors: list[int]

    @property
    def e2(self) -> int:
        return len(self.factors)

    def count_divisible(self, p: int) -> int:
        return sum(1 for f in self.factors if f % p == 0)

    @property
    def delta(self) -> int:
        return self.count_divisible(3)

    @property
    def r(self) -> int:
        return self.count_divisible(5)

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out


def _piece_count(d: PlanarDiagram) -> int:
    return (len(pieces(d)) if d.n else 0) + d.free_loops


def double_cover_homology(d: PlanarDiagram) -> CoverHomology:
    factors: list[int] = []
    if d.n:
        for idx in pieces(d):
            g = goeritz(sub_diagram(d, idx))
            if g.matrix:
                factors += smith_normal_form(g.matrix).nontrivial()
    factors += [0] * (_piece_count(d) - 1)
    return CoverHomology(sorted(factors, key=lambda f: (f == 0, f)))


def link_determinant(d: PlanarDiagram) -> int:
    if _piece_count(d) > 1:
        return 0
    if not d.n:
        return 1
    g = goeritz(d)
    return abs(determinant(g.matrix)) if g.matrix else 1


def _rational_inverse(m: list[list[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class LinkingForm:
    """Linking form on a cyclic group Z/order: lk(g, g) = value/order for a generator g."""

    order: int
    value: int

    def represents_unit(self) -> bool:
        """True if some generator h has lk(h, h) = +-1/order."""
        n = self.order
        return any(gcd(x, n) == 1 and (self.value * x * x) % n in (1 % n, (-1) % n) for x in range(1, n + 1))


def _linking_form_of(matrix: list[list[int]]) -> LinkingForm | None:
    snf = smith_normal_form(matrix)
    big = [k for k, f in enumerate(snf.factors) if f != 1]
    if len(big) != 1 or snf.factors[big[0]] == 0:
        return None
    k = big[0]
    order = snf.factors[k]
    # left @ G @ right = diag, so left^-1 e_k generates coker G
    gen = [row[k] for row in _rational_inverse([list(r) for r in snf.left])]
    inv = _rational_inverse(matrix)
    n = len(matrix)
    v = sum(gen[i] * inv[i][j] * gen[j] for i in range(n) for j in range(n)) * order
    if v.denominator != 1:
        raise ArithmeticError("linking form value is not in (1/order)Z")
    return LinkingForm(order, int(v) % order)


def cyclic_linking_form(d: PlanarDiagram) -> LinkingForm | None:
    """Linking form of the double branched cover of a connected diagram with nontrivial cyclic H1.

    The two checkerboard colourings give forms differing by sign; whether
    +-1/order is represented must agree between them.
    """
    if not d.n or len(pieces(d)) != 1:
        return None
    forms = []
    for white in (0, 1):
        g = goeritz(d, white=white)
        forms.append(_linking_form_of(g.matrix) if g.matrix else None)
    if (forms[0] is None) != (forms[1] is None):
        raise ArithmeticError("colourings disagree on whether H1 is cyclic")
    if forms[0] is not None and forms[0].represents_unit() != forms[1].represents_unit():
        raise ArithmeticError("colourings disagree on the linking form")
    return forms[0]
