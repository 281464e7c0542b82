"""Exact polynomial arithmetic: Laurent polynomials in A, polynomials in q.

Coefficients are Python ints, so nothing ever overflows.  Both types are
immutable and hashable.

    >>> p = LaurentPoly.parse("1 + A^4")
    >>> str(p * p.shift(-4))
    'A^-4 + 2 + A^4'
    >>> str(q_multinomial([2, 2]))
    '1 + q + 2q^2 + q^3 + q^4'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping

from .errors import ArithmeticBug

__all__ = [
    "LaurentPoly",
    "QPoly",
    "SeqReport",
    "q_int",
    "q_factorial",
    "q_multinomial",
    "q_binomial",
    "cyclotomic",
    "subst_q_to_Ainv4",
    "seq_predicates",
]


def _render(items: Iterable[tuple[int, int]], var: str) -> str:
    parts: list[str] = []
    for e, c in items:
        if e == 0:
            mono = str(abs(c))
        else:
            power = var if e == 1 else f"{var}^{e}"
            mono = power if abs(c) == 1 else f"{abs(c)}{power}"
        if not parts:
            parts.append(mono if c > 0 else "-" + mono)
        else:
            parts.append(("+ " if c > 0 else "- ") + mono)
    return " ".join(parts) if parts else "0"


def _parse(text: str, var: str) -> dict[int, int]:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return {}
    if s[0] not in "+-":
        s = "+" + s
    term = re.compile(
        r"([+-])(\d*)(?:\*?(" + re.escape(var) + r")(?:\^\(?(-?\d+)\)?)?)?"
    )
    out: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        mt = term.match(s, pos)
        if mt is None or mt.end() == pos or (not mt.group(2) and not mt.group(3)):
            raise ValueError(f"cannot parse {text!r} at offset {pos}")
        sign, digits, v, power = mt.groups()
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = 0 if v is None else (int(power) if power is not None else 1)
        out[e] = out.get(e, 0) + c
        pos = mt.end()
    return {e: c for e, c in out.items() if c}


class LaurentPoly:
    """Integer Laurent polynomial in A, stored as ``{exponent: coeff}``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        t = {int(e): int(c) for e, c in (terms or {}).items() if c}
        self._terms = dict(sorted(t.items()))
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls({exp: coeff})

    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    @classmethod
    def parse(cls, text: str) -> LaurentPoly:
        return cls(_parse(text, "A"))

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def mindeg(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return next(iter(self._terms))

    def maxdeg(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return next(reversed(self._terms))

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by A^k."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def evaluate(self, a):
        """Value at A = a; exact (a Fraction) when a is an int or Fraction."""
        a = Fraction(a) if isinstance(a, int) else a
        out = sum(c * a**e for e, c in self._terms.items())
        if isinstance(out, Fraction) and out.denominator == 1:
            return int(out)
        return out

    def to_qpoly(self, step: int = 4) -> tuple[int, QPoly]:
        """Write self as ``A^mindeg * P(A^step)`` and return ``(mindeg, P)``."""
        lo = self.mindeg()
        coeffs: dict[int, int] = {}
        for e, c in self._terms.items():
            d, r = divmod(e - lo, step)
            if r:
                raise ValueError(f"exponent gaps of {self} are not multiples of {step}")
            coeffs[d] = c
        top = max(coeffs)
        return lo, QPoly([coeffs.get(i, 0) for i in range(top + 1)])

    @staticmethod
    def _coerce(other) -> LaurentPoly | None:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            if abs(c) != 1:
                raise ValueError("monomial with non-unit coefficient is not invertible")
            return LaurentPoly({e * k: c if k % 2 else 1})
        out = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("A", tuple(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        return _render(self._terms.items(), "A")

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


class QPoly:
    """Integer polynomial in q as a coefficient tuple ``(a_0, ..., a_N)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def parse(cls, text: str) -> QPoly:
        terms = _parse(text, "q")
        if any(e < 0 for e in terms):
            raise ValueError("negative power of q")
        top = max(terms, default=-1)
        return cls(terms.get(i, 0) for i in range(top + 1))

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> QPoly:
        return cls([0] * exp + [coeff])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return len(self.coeffs) - 1

    maxdeg = degree

    def mindeg(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def shift(self, k: int) -> QPoly:
        """Multiply by q^k (k >= 0)."""
        if k < 0:
            raise ValueError("QPoly cannot hold negative powers")
        return QPoly((0,) * k + self.coeffs) if self.coeffs else self

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    @staticmethod
    def _coerce(other) -> QPoly | None:
        if isinstance(other, QPoly):
            return other
        if isinstance(other, int):
            return QPoly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return QPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return QPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = QPoly((1,))
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        lead = o.coeffs[-1]
        dq = len(o.coeffs) - 1
        if len(rem) <= dq:
            return QPoly(), self
        quot = [0] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if not c:
                continue
            k, r = divmod(c, lead)
            if r:
                # not divisible over Z; leave the rest as remainder
                return QPoly(quot), QPoly(rem)
            quot[i - dq] = k
            for j, y in enumerate(o.coeffs):
                rem[i - dq + j] -= k * y
        return QPoly(quot), QPoly(rem)

    def exact_div(self, other) -> QPoly:
        quot, rem = divmod(self, other)
        if rem.coeffs:
            raise ArithmeticBug(f"({self}) / ({other}) leaves remainder {rem}")
        return quot

    def divides(self, other: QPoly) -> bool:
        """True when ``other`` is an exact multiple of self over Z[q]."""
        return not divmod(other, self)[1].coeffs

    def __floordiv__(self, other):
        return self.exact_div(other)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(("q", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        return _render(((i, c) for i, c in enumerate(self.coeffs) if c), "q")

    def __repr__(self):
        return f"QPoly({str(self)!r})"


ONE = QPoly((1,))


@lru_cache(maxsize=None)
def q_int(m: int) -> QPoly:
    """[m]_q = 1 + q + ... + q^(m-1); [0]_q is zero."""
    if m < 0:
        raise ValueError("q_int needs m >= 0")
    return QPoly((1,) * m)


@lru_cache(maxsize=None)
def q_factorial(m: int) -> QPoly:
    if m < 0:
        raise ValueError("q_factorial needs m >= 0")
    out = ONE
    for j in range(2, m + 1):
        out = out * q_int(j)
    return out


def q_multinomial(parts) -> QPoly:
    """[sum parts]_q! / prod [a_i]_q!, by exact division of q-factorials."""
    parts = [int(a) for a in parts]
    if not parts:
        raise ValueError("q_multinomial needs at least one part")
    if any(a < 0 for a in parts):
        raise ValueError("parts must be nonnegative")
    return _q_multinomial(tuple(sorted(parts)))


@lru_cache(maxsize=4096)
def _q_multinomial(parts: tuple[int, ...]) -> QPoly:
    out = q_factorial(sum(parts))
    for a in parts:
        out = out.exact_div(q_factorial(a))
    return out


def q_binomial(n: int, k: int) -> QPoly:
    if not 0 <= k <= n:
        return QPoly()
    return q_multinomial([k, n - k])


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> QPoly:
    """The k-th cyclotomic polynomial, from q^k - 1 by exact division."""
    if k < 1:
        raise ValueError("cyclotomic index must be >= 1")
    out = QPoly([-1] + [0] * (k - 1) + [1])
    for d in range(1, k):
        if k % d == 0:
            out = out.exact_div(cyclotomic(d))
    return out


def subst_q_to_Ainv4(p: QPoly) -> LaurentPoly:
    """q^i -> A^(-4i)."""
    return LaurentPoly({-4 * i: c for i, c in enumerate(p.coeffs) if c})


@dataclass(frozen=True)
class SeqReport:
    palindromic: bool
    unimodal: bool
    positive: bool
    no_gaps: bool

    def as_dict(self) -> dict[str, bool]:
        return {
            "palindromic": self.palindromic,
            "unimodal": self.unimodal,
            "positive": self.positive,
            "no_gaps": self.no_gaps,
        }


def seq_predicates(p: QPoly) -> SeqReport:
    """Shape predicates on the coefficient run between mindeg and maxdeg."""
    if p.is_zero():
        raise ValueError("predicates are undefined for the zero polynomial")
    a = p.coeffs[p.mindeg():]
    n = len(a)
    palindromic = all(a[i] == a[n - 1 - i] for i in range(n))
    i = 0
    while i + 1 < n and a[i] <= a[i + 1]:
        i += 1
    while i + 1 < n and a[i] >= a[i + 1]:
        i += 1
    unimodal = i == n - 1
    return SeqReport(
        palindromic=palindromic,
        unimodal=unimodal,
        positive=all(c > 0 for c in a),
        no_gaps=all(c != 0 for c in a),
    )


def multinomial(parts) -> int:
    """Ordinary multinomial coefficient."""
    out = factorial(sum(parts))
    for a in parts:
        out //= factorial(a)
    return out
