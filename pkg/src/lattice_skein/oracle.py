"""Kauffman state sums over the lattice crossing L(m, n).

Crossing (i, j) is where vertical strand j passes over horizontal strand i.
Marker convention: +1 joins the north end to the east end (and south to
west), -1 joins north to west (and south to east).  With this choice the row
pattern (+1)^b (-1)^(n-b) produces the innermost upper cup e_b.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import kernel
from .catalan import CatalanState, from_partner
from .errors import BudgetExceeded, ValidationError
from .laurent import LaurentPoly

DEFAULT_FULL_BUDGET = 20  # log2 of the number of full Kauffman states
DEFAULT_RESTRICTED_BUDGET = 10**6

# Flipping this swaps the meaning of the two markers everywhere; verify()
# uses it to prove the calibration tests actually pin the convention.
FLIP_CONVENTION = False

LOOP = LaurentPoly({2: -1, -2: -1})


@dataclass(frozen=True)
class KauffmanState:
    """m x n matrix of +1/-1 markers, packed row-major into ``code``."""

    m: int
    n: int
    code: int

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> KauffmanState:
        m = len(rows)
        n = len(rows[0]) if m else 0
        code = 0
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValidationError("marker matrix is ragged")
            for j, s in enumerate(row):
                if s not in (1, -1):
                    raise ValidationError(f"marker {s!r} at ({i + 1},{j + 1}) is not +1/-1")
                if s == 1:
                    code |= 1 << (i * n + j)
        return cls(m, n, code)

    @classmethod
    def from_b(cls, b: Sequence[int], n: int) -> KauffmanState:
        code = 0
        for i, bi in enumerate(b):
            if not 0 <= bi <= n:
                raise ValidationError(f"b_{i + 1}={bi} outside 0..{n}")
            code |= ((1 << bi) - 1) << (i * n)
        return cls(len(b), n, code)

    def matrix(self) -> list[list[int]]:
        return [
            [1 if (self.code >> (i * self.n + j)) & 1 else -1 for j in range(self.n)]
            for i in range(self.m)
        ]

    @property
    def positive(self) -> int:
        return bin(self.code).count("1")

    @property
    def negative(self) -> int:
        return self.m * self.n - self.positive


@dataclass(frozen=True)
class SmoothedDiagram:
    state: CatalanState
    loops: int


def smooth(m: int, n: int, s: KauffmanState | Sequence[Sequence[int]], flip: bool | None = None) -> SmoothedDiagram:
    if not isinstance(s, KauffmanState):
        s = KauffmanState.from_matrix(s) if len(s) else KauffmanState(0, n, 0)
    if (s.m, s.n) != (m, n) and s.m * s.n != 0:
        raise ValidationError(f"marker matrix is {s.m}x{s.n}, expected {m}x{n}")
    if flip is None:
        flip = FLIP_CONVENTION
    partner, loops = kernel.smooth(m, n, s.code, flip)
    return SmoothedDiagram(from_partner(m, n, partner, check=False), loops)


def _histogram_to_polys(m: int, n: int, hist: dict) -> dict[CatalanState, LaurentPoly]:
    loop_powers: dict[int, LaurentPoly] = {}
    out = {}
    for key, bucket in hist.items():
        terms: dict[int, int] = {}
        poly = LaurentPoly()
        for (pn, loops), count in bucket.items():
            if loops == 0:
                terms[pn] = terms.get(pn, 0) + count
            else:
                if loops not in loop_powers:
                    loop_powers[loops] = LOOP**loops
                poly = poly + loop_powers[loops].shift(pn) * count
        poly = poly + LaurentPoly(terms)
        if poly:
            out[from_partner(m, n, tuple(key), check=False)] = poly
    return dict(sorted(out.items(), key=lambda kv: kv[0].partner))


def merge_histograms(parts) -> dict:
    """Pointwise sum of partial histograms; associative and commutative."""
    out: dict = {}
    for part in parts:
        for key, bucket in part.items():
            acc = out.setdefault(key, {})
            for k, v in bucket.items():
                acc[k] = acc.get(k, 0) + v
    return out


def default_workers() -> int:
    env = os.environ.get("SKEIN_THREADS")
    if env:
        return max(1, int(env))
    return 1


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    pieces = max(1, min(total, workers * 4))
    step = -(-total // pieces)
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def _run(fn_name: str, m: int, n: int, total: int, workers: int, flip: bool) -> dict:
    fn = getattr(kernel, fn_name)
    if workers <= 1 or total < 4096:
        return fn(m, n, 0, total, flip)
    ranges = _chunks(total, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, m, n, lo, hi, flip) for lo, hi in ranges]
        return merge_histograms(f.result() for f in futures)


def full_expansion(
    m: int,
    n: int,
    budget: int = DEFAULT_FULL_BUDGET,
    workers: int | None = None,
    flip: bool | None = None,
) -> dict[CatalanState, LaurentPoly]:
    """All 2^(mn) Kauffman states, bucketed by Catalan state."""
    if m * n > budget:
        raise BudgetExceeded(f"full expansion of L({m},{n}) needs 2^{m * n}", 2 ** (m * n), 2**budget)
    flip = FLIP_CONVENTION if flip is None else flip
    workers = default_workers() if workers is None else workers
    hist = _run("accumulate_full", m, n, 2 ** (m * n), workers, flip)
    return _histogram_to_polys(m, n, hist)


def restricted_histogram(m: int, n: int, budget: int = DEFAULT_RESTRICTED_BUDGET,
                         workers: int | None = None, flip: bool | None = None) -> dict:
    total = (n + 1) ** m
    if total > budget:
        raise BudgetExceeded(f"restricted expansion of L({m},{n}) needs (n+1)^m", total, budget)
    flip = FLIP_CONVENTION if flip is None else flip
    workers = default_workers() if workers is None else workers
    return _run("accumulate_restricted", m, n, total, workers, flip)


def restricted_expansion(
    m: int,
    n: int,
    budget: int = DEFAULT_RESTRICTED_BUDGET,
    workers: int | None = None,
    flip: bool | None = None,
) -> dict[CatalanState, LaurentPoly]:
    """Only the (n+1)^m states whose rows read (+1)^b (-1)^(n-b), no loop factor."""
    hist = restricted_histogram(m, n, budget, workers, flip)
    flat = {}
    for key, bucket in hist.items():
        terms: dict[int, int] = {}
        for (pn, _loops), count in bucket.items():
            terms[pn] = terms.get(pn, 0) + count
        flat[key] = {(pn, 0): c for pn, c in terms.items()}
    return _histogram_to_polys(m, n, flat)


def max_restricted_loops(m: int, n: int) -> int:
    hist = restricted_histogram(m, n)
    return max(loops for bucket in hist.values() for (_pn, loops) in bucket)


def loop_sum_identity(m: int, n: int) -> tuple[int, int]:
    """Both sides of: sum of buckets at A=1 == sum over states of (-2)^loops."""
    hist = kernel.accumulate_full(m, n, 0, 2 ** (m * n), FLIP_CONVENTION)
    rhs = sum(c * (-2) ** loops for b in hist.values() for (_pn, loops), c in b.items())
    lhs = sum(p.evaluate(1) for p in _histogram_to_polys(m, n, hist).values())
    return lhs, rhs
