"""Coefficient C(A) of a Catalan state by several independent routes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from . import oracle, plucking, poset
from .catalan import CatalanState, floor_returns, from_partner, is_realizable, reflect_x, split_at
from .errors import (
    FloorReturnPresent,
    NoCrossSection,
    NotRealizable,
    ShapeMismatch,
    ValidationError,
)
from .laurent import LaurentPoly, QPoly, SeqReport, q_multinomial, seq_predicates

ROUTES = ("auto", "tree", "fiber", "factored", "oracle", "restricted")

Z = LaurentPoly({2: 1, -2: 1})  # A^2 + A^-2


def _require_cat_f(c: CatalanState) -> None:
    if floor_returns(c):
        raise FloorReturnPresent(f"{c} has a floor return")
    if not is_realizable(c):
        raise NotRealizable(f"{c} is not realizable")


def _b_max(c: CatalanState) -> tuple[int, ...]:
    return max(poset.fiber(c, "peel"))


def _from_q(q: QPoly, top_exponent: int) -> LaurentPoly:
    """Substitute q = A^-4 and shift so that q^(mindeg) lands on ``top_exponent``."""
    lo = q.mindeg()
    return LaurentPoly({top_exponent - 4 * (k - lo): v for k, v in enumerate(q.coeffs) if v})


def coefficient_tree(c: CatalanState) -> LaurentPoly:
    """A^(2|b_M| - mn) times Q(T(C)) at q = A^-4, aligned on the lowest q-power."""
    _require_cat_f(c)
    q = plucking.plucking(plucking.tree_of(c))
    if q.is_zero():
        return LaurentPoly()
    return _from_q(q, 2 * sum(_b_max(c)) - c.m * c.n)


def coefficient_fiber(c: CatalanState) -> LaurentPoly:
    _require_cat_f(c)
    return poset.coeff_from_fiber(c, poset.fiber(c, "peel"))


def coefficient_ceiling_closed(c: CatalanState) -> LaurentPoly:
    """Closed form for states whose tree is a wedge of paths at the root with
    every delay equal to 1: a single q-multinomial of the path lengths."""
    _require_cat_f(c)
    lengths = plucking.is_wedge_of_paths(plucking.tree_of(c))
    if lengths is None:
        raise ShapeMismatch(f"tree of {c} is not a wedge of undelayed paths")
    q = q_multinomial(lengths) if lengths else QPoly((1,))
    return _from_q(q, 2 * sum(_b_max(c)) - c.m * c.n)


def cross_sections(c: CatalanState) -> list[int]:
    """Rows k (1 <= k < m) whose lower grid line meets exactly n arcs."""
    _, horizontal = c.cut_counts()
    return [k for k, cut in enumerate(horizontal, start=1) if cut == c.n]


def bar(p: LaurentPoly) -> LaurentPoly:
    """A -> A^-1."""
    return LaurentPoly({-e: v for e, v in p.items()})


def factor(c: CatalanState) -> list[tuple[CatalanState, bool]]:
    """Cut at every cross-section, top to bottom.

    Returns ``(piece, mirrored)`` pairs.  Gluing along a line met by n arcs
    creates no loops, so C(A) is the product of the pieces' coefficients.
    Only the last piece can have floor returns; it is then replaced by its
    mirror image, which is floor-return free.  Mirroring swaps the two
    smoothings at every crossing, so a mirrored piece contributes its
    coefficient at A^-1.
    """
    if not is_realizable(c):
        raise NotRealizable(f"{c} is not realizable")
    if not cross_sections(c):
        raise NoCrossSection(f"{c} has no horizontal line meeting exactly {c.n} arcs")
    pieces = []
    gaps = cross_sections(c)
    while gaps:
        top, c = split_at(c, gaps[0])
        pieces.append((top, False))
        gaps = cross_sections(c)
    pieces.append((reflect_x(c), True) if floor_returns(c) else (c, False))
    return pieces


def coefficient_factored(c: CatalanState) -> LaurentPoly:
    out = LaurentPoly.const(1)
    for piece, mirrored in factor(c):
        val = coefficient_tree(piece)
        out = out * (bar(val) if mirrored else val)
    return out


@lru_cache(maxsize=16)
def _full(m: int, n: int, budget: int, flip: bool) -> dict[CatalanState, LaurentPoly]:
    return oracle.full_expansion(m, n, budget=budget, flip=flip)


@lru_cache(maxsize=16)
def _restricted(m: int, n: int, budget: int, flip: bool) -> dict[CatalanState, LaurentPoly]:
    return oracle.restricted_expansion(m, n, budget=budget, flip=flip)


def coefficient_oracle(c: CatalanState, budget: int = oracle.DEFAULT_FULL_BUDGET) -> LaurentPoly:
    return _full(c.m, c.n, budget, oracle.FLIP_CONVENTION).get(c, LaurentPoly())


def coefficient_restricted(c: CatalanState, budget: int = oracle.DEFAULT_RESTRICTED_BUDGET) -> LaurentPoly:
    """Restricted-state bucket; equals C(A) only without floor returns."""
    if floor_returns(c):
        raise FloorReturnPresent(f"{c} has a floor return")
    return _restricted(c.m, c.n, budget, oracle.FLIP_CONVENTION).get(c, LaurentPoly())


def coefficient(c: CatalanState, route: str = "auto") -> tuple[LaurentPoly, str]:
    """Returns ``(C(A), route used)``.  ``auto`` prefers tree, then factored,
    then the full oracle."""
    if route == "auto":
        if not floor_returns(c) and is_realizable(c):
            return coefficient_tree(c), "tree"
        if not is_realizable(c):
            return LaurentPoly(), "oracle"
        if cross_sections(c):
            return coefficient_factored(c), "factored"
        return coefficient_oracle(c), "oracle"
    fn = {
        "tree": coefficient_tree,
        "fiber": coefficient_fiber,
        "factored": coefficient_factored,
        "oracle": coefficient_oracle,
        "restricted": coefficient_restricted,
    }.get(route)
    if fn is None:
        raise ValidationError(f"unknown route {route!r}; choose from {', '.join(ROUTES)}")
    return fn(c), route


# --- the zig-zag family and the concatenation block --------------------------


def family_Cm(m: int) -> LaurentPoly:
    """C^(2k+1) = A(1 + z C^(2k)), C^(2k) = A^-1 z C^(2k-1), z = A^2 + A^-2."""
    if m < 1:
        raise ValidationError("m >= 1")
    c = LaurentPoly()
    a = LaurentPoly.monomial(1)
    for k in range(1, m + 1):
        c = a * (1 + Z * c) if k % 2 else Z * c.shift(-1)
    return c


def family_Cm_state(m: int) -> CatalanState:
    """State of L(m, 3) whose arcs all join neighbouring boundary points,
    starting with x1-x2."""
    return from_partner(m, 3, [k ^ 1 for k in range(2 * (m + 3))])


def concatenation_block() -> CatalanState:
    from .catalan import validate

    return validate(3, 3, [("x1", "y1"), ("x2", "y2"), ("x3", "yp1"),
                           ("yp2", "xp2"), ("yp3", "xp3"), ("xp1", "y3")])


def stack_power(c: CatalanState, k: int) -> CatalanState:
    from .catalan import stack_v

    out = c
    for _ in range(k - 1):
        out = stack_v(out, c)
    return out


# --- reports -----------------------------------------------------------------


def _sequence(p: LaurentPoly) -> QPoly:
    """Coefficients of p read in steps of A^4 from the bottom."""
    _, q = p.to_qpoly(4)
    return q


@dataclass
class CoeffReport:
    state: CatalanState
    coefficient: LaurentPoly
    route: str
    properties: SeqReport | None
    b_min: tuple[int, ...] | None = None
    b_max: tuple[int, ...] | None = None
    q_mindeg: int | None = None
    claims: dict[str, bool] = field(default_factory=dict)

    def extremes_one(self) -> bool:
        p = self.coefficient
        return bool(p) and p.coeff(p.mindeg()) == 1 and p.coeff(p.maxdeg()) == 1

    @property
    def ok(self) -> bool:
        return all(self.claims.values())

    def to_json(self) -> dict:
        return {
            "state": self.state.to_json(),
            "coefficient": str(self.coefficient),
            "route": self.route,
            "properties": self.properties.as_dict() if self.properties else None,
            "extremes_one": self.extremes_one(),
            "b_min": poset.format_bseq(self.b_min) if self.b_min else None,
            "b_max": poset.format_bseq(self.b_max) if self.b_max else None,
            "q_mindeg": self.q_mindeg,
            "claims": self.claims,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def property_report(c: CatalanState, route: str = "auto") -> CoeffReport:
    """Coefficient plus the sequence predicates and the claims that apply.

    ``claims`` maps a claim name to whether it holds here.  Which claims are
    checked depends on where the returns of ``c`` sit:

    * no floor returns: positive, extremes_one, no_gaps
    * returns on ceiling or left side only: q_mindeg_zero
    * returns on the ceiling only: palindromic, unimodal
    * n = 3: no_gaps, extremes_one
    """
    if not is_realizable(c):
        raise NotRealizable(f"{c} is not realizable")
    poly, used = coefficient(c, route)
    props = seq_predicates(_sequence(poly)) if poly else None
    rep = CoeffReport(c, poly, used, props)
    if not floor_returns(c):
        fib = poset.fiber(c, "peel")
        rep.b_min, rep.b_max = poset.extremal(c, fib)
        rep.q_mindeg = plucking.plucking(plucking.tree_of(c)).mindeg()
        rep.claims["positive"] = props.positive
        rep.claims["extremes_one"] = rep.extremes_one()
        rep.claims["no_gaps"] = props.no_gaps
        if c.returns() <= {"x", "y"}:
            rep.claims["q_mindeg_zero"] = rep.q_mindeg == 0
        if c.returns() <= {"x"}:
            rep.claims["palindromic"] = props.palindromic
            rep.claims["unimodal"] = props.unimodal
    if c.n == 3:
        rep.claims["no_gaps"] = props is not None and props.no_gaps
        rep.claims["extremes_one"] = rep.extremes_one()
    return rep
