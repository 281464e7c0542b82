"""Catalan states of the m x n lattice crossing.

Boundary points are numbered by a fixed circular index that walks the
rectangle clockwise from x_1::

    x_1 .. x_n | y'_1 .. y'_m | x'_n .. x'_1 | y_m .. y_1
    0 .. n-1     n .. n+m-1     n+m .. 2n+m-1  2n+m .. 2n+2m-1

Rows are numbered top to bottom, columns left to right.  ``x`` is the
ceiling, ``xp`` the floor, ``y`` the left side and ``yp`` the right side.
A state is stored as its partner table on that index: ``partner[i]`` is the
point joined to ``i``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import Crossing, InterfaceMismatch, NotAMatching, ValidationError

Label = tuple[str, int]

SIDES = ("x", "yp", "xp", "y")
_LABEL_RE = re.compile(r"^\s*(xp|yp|x|y)(\d+)\s*$")


def label_index(m: int, n: int, label: Label | str) -> int:
    kind, i = parse_label(label) if isinstance(label, str) else label
    if kind in ("x", "xp"):
        if not 1 <= i <= n:
            raise ValidationError(f"{kind}{i} out of range for n={n}")
        return i - 1 if kind == "x" else n + m + (n - i)
    if kind in ("y", "yp"):
        if not 1 <= i <= m:
            raise ValidationError(f"{kind}{i} out of range for m={m}")
        return n + i - 1 if kind == "yp" else 2 * n + m + (m - i)
    raise ValidationError(f"unknown side {kind!r}")


def index_label(m: int, n: int, k: int) -> Label:
    if not 0 <= k < 2 * (m + n):
        raise ValidationError(f"index {k} out of range")
    if k < n:
        return ("x", k + 1)
    if k < n + m:
        return ("yp", k - n + 1)
    if k < 2 * n + m:
        return ("xp", 2 * n + m - k)
    return ("y", 2 * n + 2 * m - k)


def parse_label(text: str) -> Label:
    mt = _LABEL_RE.match(text)
    if mt is None:
        raise ValidationError(f"bad boundary label {text!r}")
    return mt.group(1), int(mt.group(2))


def format_label(label: Label) -> str:
    return f"{label[0]}{label[1]}"


def _interleave(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (p, q), (r, s) = a, b
    return p < r < q < s or r < p < s < q


def _is_noncrossing(partner: tuple[int, ...]) -> bool:
    stack: list[int] = []
    for i, j in enumerate(partner):
        if i < j:
            stack.append(j)
        elif not stack or stack.pop() != i:
            return False
    return True


@dataclass(frozen=True)
class CatalanState:
    """A non-crossing perfect matching of the 2(m+n) boundary points."""

    m: int
    n: int
    partner: tuple[int, ...]

    @cached_property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j in enumerate(self.partner) if i < j)

    def label(self, k: int) -> Label:
        return index_label(self.m, self.n, k)

    def index(self, label: Label | str) -> int:
        return label_index(self.m, self.n, label)

    def side(self, k: int) -> str:
        return index_label(self.m, self.n, k)[0]

    def labeled_arcs(self) -> list[tuple[str, str]]:
        return [(format_label(self.label(a)), format_label(self.label(b))) for a, b in self.arcs]

    def has_return(self, side: str) -> bool:
        """True if some arc has both ends on ``side`` (x, xp, y or yp)."""
        return any(self.side(a) == side and self.side(b) == side for a, b in self.arcs)

    def returns(self) -> set[str]:
        return {self.side(a) for a, b in self.arcs if self.side(a) == self.side(b)}

    def cut_counts(self) -> tuple[list[int], list[int]]:
        """Arcs separated by each inter-column and each inter-row grid line.

        Returns ``(vertical, horizontal)``; ``vertical[j-1]`` is the line
        between columns j and j+1, ``horizontal[i-1]`` between rows i and i+1.
        """
        m, n = self.m, self.n
        vertical = []
        for j in range(1, n):
            left = _side_set(m, n, "left", j)
            vertical.append(sum((a in left) != (b in left) for a, b in self.arcs))
        horizontal = []
        for i in range(1, m):
            top = _side_set(m, n, "top", i)
            horizontal.append(sum((a in top) != (b in top) for a, b in self.arcs))
        return vertical, horizontal

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "arcs": [list(p) for p in self.labeled_arcs()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(", ", ": "))

    def key(self) -> str:
        """Short canonical text form used for sorting and bucket names."""
        return " ".join(f"{a}-{b}" for a, b in self.labeled_arcs())

    def __str__(self) -> str:
        return f"L({self.m},{self.n}) {{{self.key()}}}"


def _side_set(m: int, n: int, kind: str, k: int) -> frozenset[int]:
    if kind == "left":
        labels = [("x", i) for i in range(1, k + 1)] + [("xp", i) for i in range(1, k + 1)]
        labels += [("y", i) for i in range(1, m + 1)]
    else:
        labels = [("y", i) for i in range(1, k + 1)] + [("yp", i) for i in range(1, k + 1)]
        labels += [("x", i) for i in range(1, n + 1)]
    return frozenset(label_index(m, n, lab) for lab in labels)


def from_partner(m: int, n: int, partner: Iterable[int], check: bool = True) -> CatalanState:
    partner = tuple(partner)
    if check:
        size = 2 * (m + n)
        if len(partner) != size or sorted(partner) != list(range(size)):
            raise NotAMatching("partner table is not a permutation of the boundary")
        if any(partner[partner[i]] != i or partner[i] == i for i in range(size)):
            raise NotAMatching("partner table is not a fixed-point-free involution")
        if not _is_noncrossing(partner):
            raise _find_crossing(partner)
    return CatalanState(m, n, partner)


def _find_crossing(partner: tuple[int, ...]) -> Crossing:
    arcs = [(i, j) for i, j in enumerate(partner) if i < j]
    for x, a in enumerate(arcs):
        for b in arcs[x + 1:]:
            if _interleave(a, b):
                return Crossing(a, b)
    raise AssertionError("no interleaving pair in a crossing matching")


def validate(m: int, n: int, arcs: Iterable) -> CatalanState:
    """Build a state from label or index pairs, rejecting bad matchings."""
    if m < 1 or n < 0:
        raise ValidationError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    size = 2 * (m + n)
    partner = [-1] * size
    arcs = list(arcs)
    if len(arcs) != m + n:
        raise NotAMatching(f"expected {m + n} arcs, got {len(arcs)}")
    for arc in arcs:
        if len(arc) != 2:
            raise NotAMatching(f"arc {arc!r} does not have two endpoints")
        a, b = (p if isinstance(p, int) else label_index(m, n, p) for p in arc)
        if not (0 <= a < size and 0 <= b < size):
            raise NotAMatching(f"arc {arc!r} leaves the boundary")
        if a == b or partner[a] != -1 or partner[b] != -1:
            raise NotAMatching(f"point reused in arc {arc!r}")
        partner[a], partner[b] = b, a
    try:
        return from_partner(m, n, partner)
    except Crossing as exc:
        a, b = exc.arcs
        raise Crossing(
            tuple(format_label(index_label(m, n, k)) for k in a),
            tuple(format_label(index_label(m, n, k)) for k in b),
        ) from None


def from_json(data: dict | str) -> CatalanState:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        m, n, arcs = int(data["m"]), int(data["n"]), data["arcs"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"state JSON needs m, n and arcs: {exc}") from None
    return validate(m, n, [tuple(p) for p in arcs])


def load(path) -> CatalanState:
    with open(path) as fh:
        return from_json(json.load(fh))


def floor_returns(c: CatalanState) -> bool:
    return c.has_return("xp")


def in_cat_f(c: CatalanState) -> bool:
    """Realizable with no returns on the floor."""
    return not floor_returns(c) and is_realizable(c)


def is_realizable(c: CatalanState) -> bool:
    vertical, horizontal = c.cut_counts()
    return all(k <= c.m for k in vertical) and all(k <= c.n for k in horizontal)


def reflect_map(m: int, n: int) -> list[int]:
    """Index permutation of the mirror across the horizontal midline."""
    swap = {"x": "xp", "xp": "x", "y": "y", "yp": "yp"}
    out = []
    for k in range(2 * (m + n)):
        kind, i = index_label(m, n, k)
        j = i if kind in ("x", "xp") else m + 1 - i
        out.append(label_index(m, n, (swap[kind], j)))
    return out


def reflect_x(c: CatalanState) -> CatalanState:
    mp = reflect_map(c.m, c.n)
    partner = [0] * len(c.partner)
    for a, b in enumerate(c.partner):
        partner[mp[a]] = mp[b]
    return from_partner(c.m, c.n, partner, check=False)


def _compose_paths(m: int, n: int, pieces) -> list[int]:
    """Partner table of the diagram obtained by gluing arcs at interface
    nodes ``("mid", i)``; boundary nodes are plain ints."""
    adj: dict = {}
    for a, b in pieces:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    partner = [-1] * (2 * (m + n))
    for start in range(2 * (m + n)):
        if partner[start] != -1:
            continue
        prev, cur = start, adj[start][0]
        while not isinstance(cur, int):
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        partner[start], partner[cur] = cur, start
    return partner


def stack_v(top: CatalanState, bottom: CatalanState) -> CatalanState:
    """Glue the floor of ``top`` onto the ceiling of ``bottom``."""
    if top.n != bottom.n:
        raise InterfaceMismatch(f"column counts differ: {top.n} vs {bottom.n}")
    if floor_returns(top):
        raise InterfaceMismatch("top state has a floor return")
    if bottom.has_return("x"):
        raise InterfaceMismatch("bottom state has a ceiling return")
    n, m1, m2 = top.n, top.m, bottom.m
    m = m1 + m2

    def top_node(k: int):
        kind, i = top.label(k)
        if kind == "xp":
            return ("mid", i)
        return label_index(m, n, (kind, i))

    def bottom_node(k: int):
        kind, i = bottom.label(k)
        if kind == "x":
            return ("mid", i)
        if kind in ("y", "yp"):
            return label_index(m, n, (kind, i + m1))
        return label_index(m, n, (kind, i))

    pieces = [(top_node(a), top_node(b)) for a, b in top.arcs]
    pieces += [(bottom_node(a), bottom_node(b)) for a, b in bottom.arcs]
    return from_partner(m, n, _compose_paths(m, n, pieces))


def split_at(c: CatalanState, k: int) -> tuple[CatalanState, CatalanState]:
    """Cut ``c`` along the line under row k, which must meet exactly n arcs.

    Returns ``(top, bottom)`` with ``stack_v(top, bottom) == c``.
    """
    m, n = c.m, c.n
    if not 1 <= k < m:
        raise InterfaceMismatch(f"no horizontal line below row {k} in L({m},{n})")
    top_set = _side_set(m, n, "top", k)
    crossing = [(a, b) if a in top_set else (b, a) for a, b in c.arcs if (a in top_set) != (b in top_set)]
    if len(crossing) != n:
        raise InterfaceMismatch(f"line below row {k} meets {len(crossing)} arcs, not {n}")

    # left-to-right order along the cut line, read from each side
    def top_order(k_: int) -> int:
        kind, i = c.label(k_)
        return {"y": -i, "x": m + i, "yp": m + n + i}[kind]

    def bottom_order(k_: int) -> int:
        kind, i = c.label(k_)
        return {"y": i, "xp": m + i, "yp": 2 * m + n + 1 - i}[kind]

    by_top = sorted(crossing, key=lambda ab: top_order(ab[0]))
    by_bottom = sorted(crossing, key=lambda ab: bottom_order(ab[1]))
    if by_top != by_bottom:
        raise AssertionError("crossing arcs disagree on their order along the cut")

    m1, m2 = k, m - k
    top_pairs, bottom_pairs = [], []
    for slot, (a, b) in enumerate(by_top, start=1):
        top_pairs.append((c.label(a), ("xp", slot)))
        kind, i = c.label(b)
        bottom_pairs.append((("x", slot), (kind, i - m1) if kind in ("y", "yp") else (kind, i)))
    for a, b in c.arcs:
        if a in top_set and b in top_set:
            top_pairs.append((c.label(a), c.label(b)))
        elif a not in top_set and b not in top_set:
            la, lb = c.label(a), c.label(b)
            la = (la[0], la[1] - m1) if la[0] in ("y", "yp") else la
            lb = (lb[0], lb[1] - m1) if lb[0] in ("y", "yp") else lb
            bottom_pairs.append((la, lb))
    return validate(m1, n, top_pairs), validate(m2, n, bottom_pairs)


def noncrossing_matchings(size: int) -> Iterator[tuple[int, ...]]:
    """All non-crossing perfect matchings of ``size`` points on a circle."""
    if size % 2:
        return
    partner = [-1] * size

    def place(lo: int, hi: int):
        if lo >= hi:
            yield
            return
        for j in range(lo + 1, hi, 2):
            partner[lo], partner[j] = j, lo
            for _ in place(lo + 1, j):
                yield from place(j + 1, hi)

    for _ in place(0, size):
        yield tuple(partner)


def all_states(m: int, n: int) -> Iterator[CatalanState]:
    for p in noncrossing_matchings(2 * (m + n)):
        yield CatalanState(m, n, p)
