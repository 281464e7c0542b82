"""b-sequences, their fibers over Catalan states, and the P-move poset.

A b-sequence ``(b_1, ..., b_m)`` with ``0 <= b_i <= n`` names the restricted
Kauffman state whose row i reads (+1)^(b_i) (-1)^(n - b_i).  The fiber of a
floor-return-free state C is the set of sequences that smooth to C.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from . import kernel, oracle
from .catalan import CatalanState, floor_returns, index_label, is_realizable, label_index
from .errors import EmptyFiber, FloorReturnPresent, PreconditionFailed, ValidationError
from .laurent import LaurentPoly

BSeq = tuple[int, ...]


def weight(b: Sequence[int]) -> int:
    return sum(b)


def format_bseq(b: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in b) + ")"


def parse_bseq(text: str) -> BSeq:
    body = text.strip()
    if not re.fullmatch(r"\(?\s*\d+(\s*,\s*\d+)*\s*,?\s*\)?", body):
        raise ValidationError(f"bad b-sequence {text!r}")
    return tuple(int(x) for x in re.findall(r"\d+", body))


def check_bseq(b: Sequence[int], n: int) -> BSeq:
    b = tuple(int(x) for x in b)
    if not b:
        raise ValidationError("b-sequence must be nonempty")
    if any(not 0 <= x <= n for x in b):
        raise ValidationError(f"{format_bseq(b)} has an entry outside 0..{n}")
    return b


def state_of(b: Sequence[int], n: int) -> CatalanState:
    """The Catalan state C(b) realized by the restricted state s(b)."""
    b = check_bseq(b, n)
    d = oracle.smooth(len(b), n, oracle.KauffmanState.from_b(b, n))
    if d.loops:
        raise AssertionError(f"restricted state {format_bseq(b)} produced a closed loop")
    return d.state


def p_move(b: Sequence[int], i: int, n: int) -> BSeq:
    """P_i (1-based): (.., b_i, b_i+1, ..) -> (.., b_(i+1)+1, b_i+1, ..)."""
    b = tuple(b)
    if not 1 <= i < len(b) or not b[i - 1] < b[i] < n:
        raise PreconditionFailed(f"P_{i} needs b_i < b_(i+1) < {n} in {format_bseq(b)}")
    return b[: i - 1] + (b[i] + 1, b[i - 1] + 1) + b[i + 1 :]


def p_move_inv(b: Sequence[int], i: int, n: int) -> BSeq:
    b = tuple(b)
    if not 1 <= i < len(b):
        raise PreconditionFailed(f"no position {i} in {format_bseq(b)}")
    prev = b[: i - 1] + (b[i] - 1, b[i - 1] - 1) + b[i + 1 :]
    if not (0 <= prev[i - 1] < prev[i] < n):
        raise PreconditionFailed(f"{format_bseq(b)} is not in the image of P_{i}")
    return prev


def _decode(index: int, m: int, n: int) -> BSeq:
    out = []
    for _ in range(m):
        index, bi = divmod(index, n + 1)
        out.append(bi)
    return tuple(out)


def _fiber_brute(c: CatalanState) -> set[BSeq]:
    m, n = c.m, c.n
    hits = kernel.scan_restricted(m, n, bytes(c.partner), 0, (n + 1) ** m, oracle.FLIP_CONVENTION)
    return {_decode(i, m, n) for i in hits}


def _upper_points(m: int, n: int) -> list[int]:
    """y_1, x_1, .., x_n, y'_1 : the points the top row can cap off."""
    return [label_index(m, n, ("y", 1))] + list(range(n)) + [label_index(m, n, ("yp", 1))]


def peel(partner: tuple[int, ...], m: int, n: int, b: int) -> tuple[int, ...] | None:
    """Remove a top row whose innermost cup is e_b; None if C lacks e_b.

    The result is the partner table of the remaining (m-1) x n state.
    """
    up = _upper_points(m, n)
    if partner[up[b]] != up[b + 1]:
        return None
    rest = up[:b] + up[b + 2 :]
    m2 = m - 1
    size2 = 2 * (m2 + n)
    to_old = [0] * size2
    for k in range(size2):
        kind, i = index_label(m2, n, k)
        if kind == "x":
            to_old[k] = rest[i - 1]
        elif kind in ("y", "yp"):
            to_old[k] = label_index(m, n, (kind, i + 1))
        else:
            to_old[k] = label_index(m, n, ("xp", i))
    to_new = {old: k for k, old in enumerate(to_old)}
    return tuple(to_new[partner[to_old[k]]] for k in range(size2))


@lru_cache(maxsize=65536)
def _fiber_peel(partner: tuple[int, ...], m: int, n: int) -> frozenset[BSeq]:
    if m == 0:
        identity = all(partner[j] == 2 * n - 1 - j for j in range(n))
        return frozenset({()}) if identity else frozenset()
    out = set()
    for b in range(n + 1):
        rest = peel(partner, m, n, b)
        if rest is None:
            continue
        for tail in _fiber_peel(rest, m - 1, n):
            out.add((b,) + tail)
    return frozenset(out)


def fiber(c: CatalanState, mode: str = "brute") -> frozenset[BSeq]:
    """All b with C(b) = c.

    ``mode="brute"`` filters every sequence through the smoothing kernel;
    ``mode="peel"`` grows sequences by repeatedly stripping an innermost upper
    cup off the top row, i.e. by enumerating leaf-removal orders.
    """
    if floor_returns(c):
        raise FloorReturnPresent(f"{c} has a floor return")
    if mode == "brute":
        out = frozenset(_fiber_brute(c))
    elif mode == "peel":
        out = _fiber_peel(c.partner, c.m, c.n)
    else:
        raise ValueError(f"unknown fiber mode {mode!r}")
    if not out:
        why = "not realizable" if not is_realizable(c) else "not reached by any b"
        raise EmptyFiber(f"{c} has an empty fiber ({why})")
    return out


@dataclass(frozen=True)
class FiberPoset:
    n: int
    vertices: frozenset[BSeq]
    edges: frozenset[tuple[BSeq, BSeq]] = field(default_factory=frozenset)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj: dict[BSeq, set[BSeq]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        start = next(iter(self.vertices))
        seen = {start}
        todo = [start]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        out: dict[BSeq, list[BSeq]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            out[a].append(b)
            indeg[b] += 1
        ready = [v for v, d in indeg.items() if d == 0]
        done = 0
        while ready:
            v = ready.pop()
            done += 1
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        return done == len(self.vertices)

    def covers_raise_weight_by_two(self) -> bool:
        return all(weight(b) == weight(a) + 2 for a, b in self.edges)

    def to_dot(self, name: str = "fiber") -> str:
        order = sorted(self.vertices, key=lambda v: (weight(v), v))
        ids = {v: f"b{k}" for k, v in enumerate(order)}
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
        for v in order:
            lines.append(f'  {ids[v]} [label="{format_bseq(v)}\\n|b|={weight(v)}"];')
        for a, b in sorted(self.edges):
            lines.append(f"  {ids[a]} -> {ids[b]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse(c: CatalanState, mode: str = "brute") -> FiberPoset:
    verts = fiber(c, mode)
    edges = set()
    for b in verts:
        for i in range(1, len(b)):
            try:
                nb = p_move(b, i, c.n)
            except PreconditionFailed:
                continue
            if nb not in verts:
                raise AssertionError(f"P_{i}{format_bseq(b)} = {format_bseq(nb)} left the fiber")
            edges.add((b, nb))
    poset = FiberPoset(c.n, verts, frozenset(edges))
    if not poset.covers_raise_weight_by_two():
        raise AssertionError("a cover does not raise weight by 2")
    if not poset.is_acyclic():
        raise AssertionError("Hasse diagram has a directed cycle")
    if not poset.is_connected():
        raise AssertionError(f"fiber graph of {c} is disconnected")
    return poset


def extremal(c: CatalanState, fib: Iterable[BSeq] | None = None) -> tuple[BSeq, BSeq]:
    """Lexicographic min and max of the fiber, checked to be the unique
    weight minimizer and maximizer."""
    verts = sorted(fiber(c) if fib is None else fib)
    lo, hi = verts[0], verts[-1]
    weights = [weight(v) for v in verts]
    if weights.count(weight(lo)) != 1 or weight(lo) != min(weights):
        raise AssertionError(f"{format_bseq(lo)} is not the unique lightest sequence")
    if weights.count(weight(hi)) != 1 or weight(hi) != max(weights):
        raise AssertionError(f"{format_bseq(hi)} is not the unique heaviest sequence")
    return lo, hi


def coeff_from_fiber(c: CatalanState, fib: Iterable[BSeq] | None = None) -> LaurentPoly:
    """C(A) = sum over the fiber of A^(2|b| - mn)."""
    terms: dict[int, int] = {}
    mn = c.m * c.n
    for b in fiber(c) if fib is None else fib:
        e = 2 * weight(b) - mn
        terms[e] = terms.get(e, 0) + 1
    return LaurentPoly(terms)


def singleton_fiber_form(b: Sequence[int], n: int) -> bool:
    """Whether b has the form listed for one-element fibers:
    (n-1,..,n-1,n,..,n) or (1,..,1,0,..,0) with at least one leading entry."""
    b = tuple(b)
    for lead, tail in ((n - 1, n), (1, 0)):
        k = 0
        while k < len(b) and b[k] == lead:
            k += 1
        if k >= 1 and all(x == tail for x in b[k:]):
            return True
    return False
