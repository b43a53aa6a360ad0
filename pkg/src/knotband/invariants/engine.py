"""All invariants of a diagram, computed together and cross-checked."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..algebra import (
    CycloClass,
    Cyclo12,
    GoldenValue,
    LaurentPoly,
    classify_cyclo,
    classify_golden,
    eval_cyclo12,
    eval_golden,
    eval_t_i,
    eval_t_minus_one,
)
from ..diagram import Orientation, PlanarDiagram, component_count, default_orientation
from .goeritz import LinkingForm, cyclic_linking_form, double_cover_homology, link_determinant, signature
from .jones import jones
from .qpoly import QBudgetExceeded, QEvaluator, q_polynomial


class ConsistencyError(ArithmeticError):
    """Two independently computed invariants disagree."""


@dataclass(frozen=True)
class SpecialValues:
    v_omega: Cyclo12
    v_i: int | None          # +1/-1, knots only
    v_minus1: tuple[int, int]  # Gaussian integer (re, im); real for knots


def special_values(v: LaurentPoly, components: int) -> SpecialValues:
    v_i = None
    if components == 1:
        re, im = eval_t_i(v)
        if im or re not in (1, -1):
            raise ConsistencyError(f"V(i) = {re}+{im}i is not a sign")
        v_i = re
    return SpecialValues(eval_cyclo12(v), v_i, eval_t_minus_one(v))


def arf_from_jones(v: LaurentPoly) -> int:
    """Arf invariant of a knot, read off V(i) = (-1)^Arf."""
    vi = special_values(v, 1).v_i
    return 0 if vi == 1 else 1


@dataclass(frozen=True)
class InvariantSet:
    components: int
    jones: LaurentPoly
    v_omega: Cyclo12
    omega_class: CycloClass
    v_minus1: tuple[int, int]
    arf: int | None
    det: int
    signature: int
    h1_factors: tuple[int, ...]
    q_poly: LaurentPoly | None
    lam: GoldenValue | None
    lambda_class: tuple[int, int] | None
    linking_form: LinkingForm | None = None

    @property
    def e2(self) -> int:
        return len(self.h1_factors)

    @property
    def delta(self) -> int:
        return sum(1 for f in self.h1_factors if f % 3 == 0)

    @property
    def r(self) -> int:
        return sum(1 for f in self.h1_factors if f % 5 == 0)

    def to_json(self) -> dict:
        out = {
            "components": self.components,
            "jones": self.jones.render("t", exponent_scale=_HALF),
            "v_omega": self.v_omega.render(),
            "omega_sign": self.omega_class.sign,
            "delta": self.delta,
            "v_minus1": _render_gaussian(self.v_minus1),
            "arf": self.arf,
            "det": self.det,
            "sigma": self.signature,
            "h1_factors": list(self.h1_factors),
            "e2": self.e2,
            "r": self.r,
            "q_poly": self.q_poly.render("z") if self.q_poly is not None else None,
            "lambda": self.lam.render() if self.lam is not None else None,
            "linking_form": None if self.linking_form is None else
            {"order": self.linking_form.order, "value": self.linking_form.value},
        }
        return out


_HALF = Fraction(1, 2)


def _render_gaussian(z: tuple[int, int]) -> str:
    re, im = z
    if not im:
        return str(re)
    if not re:
        return f"{im}*i" if abs(im) != 1 else ("i" if im > 0 else "-i")
    return f"{re}{'+' if im > 0 else '-'}{abs(im)}*i"


def invariants(d: PlanarDiagram, o: Orientation | None = None, q_evaluator: QEvaluator | None = None,
               with_q: bool = True) -> InvariantSet:
    """Compute everything and verify the identities linking the invariants.

    ``with_q=False`` or an exhausted Q budget leaves ``q_poly``/``lam`` unset.
    """
    c = component_count(d)
    o = o or (default_orientation(d) if d.n else None)
    v = jones(d, o)
    sv = special_values(v, c)
    cls = classify_cyclo(sv.v_omega, c)
    if cls is None:
        raise ConsistencyError(f"V(omega) = {sv.v_omega.render()} is not +-i^(c-1)(i*sqrt3)^delta")
    hom = double_cover_homology(d)
    det = link_determinant(d)
    sig = signature(d, o) if d.n else 0

    if cls.delta != hom.delta:
        raise ConsistencyError(f"|V(omega)| = sqrt3^{cls.delta} but H1 has {hom.delta} factors divisible by 3")
    order = 1
    for f in hom.factors:
        order *= f
    if abs(order) != det:
        raise ConsistencyError(f"det {det} differs from |H1| = {order}")
    re, im = sv.v_minus1
    if re * re + im * im != det * det:
        raise ConsistencyError(f"|V(-1)| = |{_render_gaussian(sv.v_minus1)}| differs from det {det}")
    arf = None
    if c == 1:
        if sig % 2:
            raise ConsistencyError(f"odd knot signature {sig}")
        sign_v = 1 if re > 0 else -1
        if (-1) ** (sig // 2 % 2) != sign_v:
            raise ConsistencyError(f"(-1)^(sigma/2) with sigma={sig} disagrees with sign V(-1) = {re}")
        arf = 0 if sv.v_i == 1 else 1
        if (det % 8 in (1, 7)) != (arf == 0):
            raise ConsistencyError(f"Arf {arf} inconsistent with det {det} mod 8")

    q = lam = lam_cls = None
    if with_q:
        try:
            q = q_polynomial(d, q_evaluator)
        except QBudgetExceeded:
            q = None
    if q is not None:
        lam = eval_golden(q)
        lam_cls = classify_golden(lam)
        if lam_cls is None:
            raise ConsistencyError(f"lambda = {lam.render()} is not +-sqrt5^r")
        if lam_cls[1] != hom.r:
            raise ConsistencyError(f"lambda = +-sqrt5^{lam_cls[1]} but H1 has {hom.r} factors divisible by 5")

    lk = cyclic_linking_form(d) if c == 1 and len(hom.factors) == 1 and hom.factors[0] else None
    if lk is not None and lk.order != det:
        raise ConsistencyError(f"linking form order {lk.order} differs from det {det}")

    return InvariantSet(
        components=c, jones=v, v_omega=sv.v_omega, omega_class=cls, v_minus1=sv.v_minus1, arf=arf, det=det,
        signature=sig, h1_factors=tuple(hom.factors), q_poly=q, lam=lam, lambda_class=lam_cls, linking_form=lk,
    )


def identity_checks(inv: InvariantSet) -> dict[str, bool | None]:
    """Pass/fail for each identity linking the invariants (None: not applicable)."""
    re, im = inv.v_minus1
    knot = inv.components == 1
    return {
        "omega_delta": inv.v_omega.norm_squared() == 3 ** inv.delta,
        "det_v_minus1": re * re + im * im == inv.det * inv.det,
        "signature_sign": ((-1) ** (inv.signature // 2 % 2) == (1 if re > 0 else -1)) if knot else None,
        "arf_det": ((inv.det % 8 in (1, 7)) == (inv.arf == 0)) if knot else None,
        "lambda_r": (inv.lambda_class is not None and inv.lambda_class[1] == inv.r) if inv.q_poly is not None
        else None,
    }
