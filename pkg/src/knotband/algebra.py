"""Exact algebra: Laurent polynomials, two small quotient rings, Smith normal form.

All arithmetic is over the integers.  The quotient rings house special values
of knot polynomials:

* :class:`Cyclo12` is Z[x]/(x^4 - x^2 + 1) with x = exp(i*pi/6).  Jones
  polynomials written in q = t^(1/2) land here under q -> x, so that
  t = x^2 = omega and i = x^3.
* :class:`GoldenValue` is Z[x]/(x^2 + x - 1) with x = (sqrt5 - 1)/2, the
  evaluation point of the Q polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class LaurentPoly:
    """Sparse integer Laurent polynomial in one formal variable.

    ``var`` only affects rendering; arithmetic between polynomials in
    different variables is not checked.
    """

    __slots__ = ("_terms", "var")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = (), var: str = "q"):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[e] = acc.get(e, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self.var = var

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1, var: str = "q") -> "LaurentPoly":
        return cls({exp: coeff}, var)

    @classmethod
    def const(cls, c: int, var: str = "q") -> "LaurentPoly":
        return cls({0: c}, var)

    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        return self._terms[0][0]

    def max_exp(self) -> int:
        return self._terms[-1][0]

    def coeff(self, e: int) -> int:
        return dict(self._terms).get(e, 0)

    def with_var(self, var: str) -> "LaurentPoly":
        return LaurentPoly(self._terms, var)

    # ring operations -------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(self._terms + other._terms, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(((e, -c) for e, c in self._terms), self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) == 1 and abs(self._terms[0][1]) == 1:
                e, c = self._terms[0]
                return LaurentPoly({-e * (-n): c if n % 2 else 1}, self.var)
            raise ValueError("only monomial units can be raised to negative powers")
        result = LaurentPoly.const(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by var^k."""
        return LaurentPoly(((e + k, c) for e, c in self._terms), self.var)

    def invert_variable(self) -> "LaurentPoly":
        """Substitute var -> var^-1."""
        return LaurentPoly(((-e, c) for e, c in self._terms), self.var)

    def scale_exponents(self, k: int) -> "LaurentPoly":
        return LaurentPoly(((e * k, c) for e, c in self._terms), self.var)

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ValueError when ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly({}, self.var)
        a, b = self.min_exp(), other.min_exp()
        num = {e - a: c for e, c in self._terms}
        den = [(e - b, c) for e, c in other._terms]
        top_d, lead = den[-1]
        quot: dict[int, int] = {}
        while num:
            top = max(num)
            if top < top_d:
                raise ValueError("inexact division")
            c = num[top]
            if c % lead:
                raise ValueError("inexact division")
            qe, qc = top - top_d, c // lead
            quot[qe] = qc
            for e, dc in den:
                k = e + qe
                v = num.get(k, 0) - qc * dc
                if v:
                    num[k] = v
                else:
                    num.pop(k, None)
        return LaurentPoly({e + a - b: c for e, c in quot.items()}, self.var)

    def evaluate(self, ring_x, ring_x_inv):
        """Evaluate at a ring element given its inverse (both supplied)."""
        result = ring_x * 0
        for e, c in self._terms:
            base = ring_x if e >= 0 else ring_x_inv
            result = result + base ** abs(e) * c
        return result

    # comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"LaurentPoly({dict(self._terms)!r}, var={self.var!r})"

    def __str__(self):
        return self.render()

    def render(self, var: str | None = None, exponent_scale: Fraction | int = 1) -> str:
        """Human-readable form; ``exponent_scale`` rescales exponents (q -> t uses 1/2)."""
        var = var or self.var
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            exp = Fraction(e) * exponent_scale
            if exp == 0:
                mono = ""
            elif exp == 1:
                mono = var
            else:
                exp_s = str(exp) if exp.denominator == 1 else f"({exp})"
                mono = f"{var}^{exp_s}" if exp > 0 else f"{var}^({exp})"
            if mono == "":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# ---------------------------------------------------------------------------
# quotient rings Z[x]/(monic f)


class _QuotientElement:
    """Element of Z[x]/(f) for a fixed monic f, stored in the power basis."""

    # x^n = sum(REDUCTION[k] * x^k)
    REDUCTION: tuple[int, ...] = ()
    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[int]):
        coords = tuple(int(c) for c in coords)
        n = len(self.REDUCTION)
        if len(coords) > n:
            coords = self._reduce(list(coords))
        self.coords = coords + (0,) * (n - len(coords))

    @classmethod
    def _reduce(cls, poly: list[int]) -> tuple[int, ...]:
        n = len(cls.REDUCTION)
        poly = list(poly)
        for deg in range(len(poly) - 1, n - 1, -1):
            c = poly[deg]
            if c:
                poly[deg] = 0
                for k, r in enumerate(cls.REDUCTION):
                    poly[deg - n + k] += c * r
        return tuple(poly[:n])

    @classmethod
    def from_int(cls, c: int):
        return cls((c,))

    @classmethod
    def gen(cls):
        return cls((0, 1))

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, int):
            return type(self).from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(a + b for a, b in zip(self.coords, other.coords))

    __radd__ = __add__

    def __neg__(self):
        return type(self)(-a for a in self.coords)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = len(self.coords)
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    prod[i + j] += a * b
        return type(self)(self._reduce(prod))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = type(self).from_int(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self):
        raise NotImplementedError

    def is_integer(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def __eq__(self, other):
        if isinstance(other, int):
            other = type(self).from_int(other)
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash((type(self).__name__, self.coords))

    def __repr__(self):
        return f"{type(self).__name__}{self.coords}"


class Cyclo12(_QuotientElement):
    """Z[x]/(x^4 - x^2 + 1); x is a primitive 12th root of unity."""

    REDUCTION = (-1, 0, 1, 0)
    __slots__ = ()

    @classmethod
    def x_inverse(cls) -> "Cyclo12":
        return cls((0, 1, 0, -1))  # x^11 = x - x^3

    @classmethod
    def i(cls) -> "Cyclo12":
        return cls((0, 0, 0, 1))

    @classmethod
    def omega(cls) -> "Cyclo12":
        return cls((0, 0, 1, 0))

    @classmethod
    def sqrt3(cls) -> "Cyclo12":
        return cls((0, 2, 0, -1))

    def conjugate(self) -> "Cyclo12":
        """Complex conjugation x -> x^-1."""
        a, b, c, d = self.coords
        # 1 -> 1, x -> x - x^3, x^2 -> 1 - x^2, x^3 -> -x^3
        return Cyclo12((a + c, b, -c, -b - d))

    def inverse(self) -> "Cyclo12":
        if self.coords in _CYCLO_UNITS:
            return _CYCLO_UNITS[self.coords]
        raise ValueError(f"{self!r} is not a root of unity")

    def norm_squared(self) -> int:
        """|v|^2, which always lies in Z[sqrt3]; returns it when it is an integer."""
        w = self * self.conjugate()
        if not w.is_integer():
            raise ValueError(f"|{self!r}|^2 is not rational")
        return w.coords[0]

    def render(self) -> str:
        """Symbolic form for the values that occur as V(L; omega)."""
        if self.is_integer():
            return str(self.coords[0])
        for delta in range(0, 40):
            base = (Cyclo12.i() * Cyclo12.sqrt3()) ** delta
            for k in range(4):
                for eps in (1, -1):
                    if Cyclo12.i() ** k * base * eps == self:
                        return _render_cyclo(eps, k, delta)
            if abs(self.coords[0]) + sum(map(abs, self.coords)) < 3 ** (delta // 2):
                break
        return " + ".join(f"{c}*x^{k}" for k, c in enumerate(self.coords) if c) or "0"


def _render_cyclo(eps: int, i_power: int, delta: int) -> str:
    # value = eps * i^i_power * (i*sqrt3)^delta = eps * i^(i_power+delta) * sqrt3^delta
    k = (i_power + delta) % 4
    sign = eps * (-1 if k >= 2 else 1)
    imag = k % 2 == 1
    mag_int, has_sqrt = 3 ** (delta // 2), delta % 2 == 1
    parts = []
    if mag_int != 1 or (not imag and not has_sqrt):
        parts.append(str(mag_int))
    if imag:
        parts.append("i")
    if has_sqrt:
        parts.append("sqrt3")
    return ("-" if sign < 0 else "") + "*".join(parts)


def _cyclo_units() -> dict[tuple[int, ...], Cyclo12]:
    x = Cyclo12.gen()
    powers = [x ** k for k in range(12)]
    return {powers[k].coords: powers[(12 - k) % 12] for k in range(12)}


_CYCLO_UNITS = _cyclo_units()
_CYCLO_POWERS = [(Cyclo12.gen() ** k).coords for k in range(12)]


class GoldenValue(_QuotientElement):
    """Z[x]/(x^2 + x - 1); x = (sqrt5 - 1)/2 and x^-1 = x + 1."""

    REDUCTION = (1, -1)
    __slots__ = ()

    @classmethod
    def x_inverse(cls) -> "GoldenValue":
        return cls((1, 1))

    @classmethod
    def sqrt5(cls) -> "GoldenValue":
        return cls((1, 2))

    def conjugate(self) -> "GoldenValue":
        """Galois conjugation x -> -x - 1."""
        a, b = self.coords
        return GoldenValue((a - b, -b))

    def norm(self) -> int:
        w = self * self.conjugate()
        assert w.is_integer()
        return w.coords[0]

    def inverse(self) -> "GoldenValue":
        n = self.norm()
        if abs(n) != 1:
            raise ValueError(f"{self!r} is not a unit")
        return self.conjugate() * n

    def render(self) -> str:
        c = classify_golden(self)
        if c is None:
            a, b = self.coords
            return f"{a} + {b}*x"
        sign, r = c
        s = "-" if sign < 0 else ""
        if r == 0:
            return f"{s}1"
        return f"{s}sqrt5^{r}" if r > 1 else f"{s}sqrt5"


# ---------------------------------------------------------------------------
# evaluation and classification


def eval_cyclo12(p: LaurentPoly) -> Cyclo12:
    """Substitute q -> exp(i*pi/6) in a polynomial in q = t^(1/2)."""
    acc = [0, 0, 0, 0]
    for e, c in p.items():
        v = _CYCLO_POWERS[e % 12]
        for k in range(4):
            acc[k] += c * v[k]
    return Cyclo12(acc)


def eval_t_minus_one(p: LaurentPoly) -> tuple[int, int]:
    """Value at q = i (t = -1) as a Gaussian integer (re, im)."""
    re = im = 0
    for e, c in p.items():
        k = e % 4
        re += c * (1, 0, -1, 0)[k]
        im += c * (0, 1, 0, -1)[k]
    return re, im


def eval_t_i(p: LaurentPoly) -> tuple[int, int]:
    """Value at t = i for a polynomial in q = t^(1/2) with even exponents only."""
    re = im = 0
    for e, c in p.items():
        if e % 2:
            raise ValueError("odd power of t^(1/2): value at t = i is not a Gaussian integer")
        k = (e // 2) % 4
        re += c * (1, 0, -1, 0)[k]
        im += c * (0, 1, 0, -1)[k]
    return re, im


@dataclass(frozen=True)
class CycloClass:
    sign: int
    delta: int


def classify_cyclo(v: Cyclo12, components: int) -> CycloClass | None:
    """Match v = sign * i^(c-1) * (i*sqrt3)^delta; None when v is not of that form."""
    try:
        n2 = v.norm_squared()
    except ValueError:
        return None
    if n2 <= 0:
        return None
    delta = 0
    while n2 % 3 == 0:
        n2 //= 3
        delta += 1
    if n2 != 1:
        return None
    base = Cyclo12.i() ** ((components - 1) % 4) * (Cyclo12.i() * Cyclo12.sqrt3()) ** delta
    if v == base:
        return CycloClass(1, delta)
    if v == -base:
        return CycloClass(-1, delta)
    return None


def eval_golden(p: LaurentPoly) -> GoldenValue:
    """Substitute z -> (sqrt5 - 1)/2."""
    return p.evaluate(GoldenValue.gen(), GoldenValue.x_inverse())


def classify_golden(v: GoldenValue) -> tuple[int, int] | None:
    """Return (sign, r) with v = sign * sqrt5^r, or None."""
    n = v.norm()
    if n == 0:
        return None
    r, m = 0, abs(n)
    while m % 5 == 0:
        m //= 5
        r += 1
    if m != 1:
        return None
    base = GoldenValue.sqrt5() ** r
    if v == base:
        return 1, r
    if v == -base:
        return -1, r
    return None


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    """``left @ M @ right == diag(factors)`` padded with zeros."""

    factors: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    def nontrivial(self) -> list[int]:
        """Invariant factors other than 1 (0 stands for a free Z summand)."""
        return [d for d in self.factors if d != 1]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def smith_normal_form(m: list[list[int]]) -> SnfResult:
    """Integer Smith normal form with unimodular transforms.

    Returned factors d_1 | d_2 | ... are nonnegative; their count is
    min(rows, cols), with zeros for the rank deficiency.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    clean &= a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    clean &= a[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    factors = tuple(a[i][i] for i in range(min(rows, cols)))
    result = SnfResult(factors, tuple(map(tuple, u)), tuple(map(tuple, v)))
    check = matmul(matmul(u, m), v) if rows and cols else []
    for i in range(rows):
        for j in range(cols):
            expect = factors[i] if i == j else 0
            if check[i][j] != expect:
                raise ArithmeticError("Smith normal form self-check failed")
    return result


def determinant(m: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def symmetric_signature(m: list[list[int]]) -> int:
    """Signature of a symmetric rational matrix by exact congruence diagonalization."""
    n = len(m)
    a = [[Fraction(x) for x in r] for r in m]
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if a[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes a[i][i] = 2 a[i][j] != 0
            for r in range(n):
                a[i][r] += a[j][r]
            for r in range(n):
                a[r][i] += a[r][j]
            k = i
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            f = a[i][k] / p
            if f:
                for j in range(n):
                    a[i][j] -= f * a[k][j]
                for j in range(n):
                    a[j][i] -= f * a[j][k]
    return pos - neg
