"""Plane rooted trees with delays and their plucking polynomial.

A tree is a ``PlaneTree`` node whose children are ordered left to right.
Every node carries a ``delay``; it is only read on leaves (internal nodes
keep 1).  A leaf may be plucked once its delay is 1, and each pluck lowers
the delay of every other leaf by one.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .catalan import CatalanState, floor_returns
from .errors import FloorReturnPresent, NotALeaf, ValidationError
from .laurent import QPoly, cyclotomic, q_factorial, q_int, q_multinomial

Path = tuple[int, ...]


@dataclass(frozen=True)
class PlaneTree:
    children: tuple[PlaneTree, ...] = ()
    delay: int = 1

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def size(self) -> int:
        """Vertex count."""
        return _size(self)

    @property
    def edges(self) -> int:
        return self.size - 1

    def __str__(self) -> str:
        return to_text(self)


@lru_cache(maxsize=None)
def _size(t: PlaneTree) -> int:
    return 1 + sum(_size(c) for c in t.children)


def node(*children: PlaneTree) -> PlaneTree:
    return PlaneTree(tuple(children))


def leaf(delay: int = 1) -> PlaneTree:
    if delay < 1:
        raise ValidationError("delays are positive")
    return PlaneTree((), delay)


def star(k: int) -> PlaneTree:
    return node(*[leaf() for _ in range(k)])


def path(k: int, top_delay: int = 1) -> PlaneTree:
    t = leaf(top_delay) if k else PlaneTree()
    for _ in range(k - 1):
        t = node(t)
    return node(t) if k else t


def wedge(*trees: PlaneTree) -> PlaneTree:
    """Identify the roots of ``trees``."""
    return PlaneTree(tuple(c for t in trees for c in t.children))


def to_text(t: PlaneTree) -> str:
    """Parenthesization, e.g. ``(()(()))``; leaves with delay d > 1 get ``@d``."""
    if t.is_leaf:
        return "()" + (f"@{t.delay}" if t.delay != 1 else "")
    return "(" + "".join(to_text(c) for c in t.children) + ")"


def from_text(text: str) -> PlaneTree:
    s = re.sub(r"\s+", "", text)
    pos = 0

    def parse() -> PlaneTree:
        nonlocal pos
        if pos >= len(s) or s[pos] != "(":
            raise ValidationError(f"expected '(' at {pos} in {text!r}")
        pos += 1
        kids = []
        while pos < len(s) and s[pos] == "(":
            kids.append(parse())
        if pos >= len(s) or s[pos] != ")":
            raise ValidationError(f"expected ')' at {pos} in {text!r}")
        pos += 1
        delay = 1
        mt = re.match(r"@(\d+)", s[pos:])
        if mt:
            if kids:
                raise ValidationError("only leaves carry delays")
            delay = int(mt.group(1))
            pos += mt.end()
        return PlaneTree(tuple(kids), delay)

    t = parse()
    if pos != len(s):
        raise ValidationError(f"trailing input in {text!r}")
    if t.is_leaf and t.delay != 1:
        raise ValidationError("the root is not a leaf")
    return t


def leaf_paths(t: PlaneTree) -> Iterator[Path]:
    """Child-index paths from the root to every leaf, left to right."""
    for i, c in enumerate(t.children):
        if c.is_leaf:
            yield (i,)
        else:
            for p in leaf_paths(c):
                yield (i,) + p


def subtree(t: PlaneTree, p: Path) -> PlaneTree:
    for i in p:
        t = t.children[i]
    return t


def delays(t: PlaneTree) -> dict[Path, int]:
    return {p: subtree(t, p).delay for p in leaf_paths(t)}


def r_count(t: PlaneTree, p: Path) -> int:
    """Vertices strictly to the right of the path from leaf ``p`` to the root."""
    if not p or not subtree(t, p).is_leaf:
        raise NotALeaf(f"path {p} does not end at a leaf")
    total = 0
    cur = t
    for i in p:
        total += sum(_size(c) for c in cur.children[i + 1 :])
        cur = cur.children[i]
    return total


def _age(t: PlaneTree) -> PlaneTree:
    if t.is_leaf:
        return t if t.delay <= 1 else PlaneTree((), t.delay - 1)
    return PlaneTree(tuple(_age(c) for c in t.children))


def pluck(t: PlaneTree, p: Path) -> PlaneTree:
    """T - v with the delay update: surviving leaves lose one step of delay,
    a newly exposed leaf starts at 1."""

    def cut(cur: PlaneTree, rest: Path) -> PlaneTree:
        i = rest[0]
        if len(rest) == 1:
            kids = cur.children[:i] + cur.children[i + 1 :]
            return PlaneTree(tuple(_age(c) for c in kids), 1)
        kids = list(cur.children)
        for j in range(len(kids)):
            kids[j] = cut(kids[j], rest[1:]) if j == i else _age(kids[j])
        return PlaneTree(tuple(kids), 1)

    if not subtree(t, p).is_leaf:
        raise NotALeaf(f"path {p} does not end at a leaf")
    return cut(t, p)


def removable(t: PlaneTree) -> list[Path]:
    return [p for p in leaf_paths(t) if subtree(t, p).delay == 1]


@lru_cache(maxsize=200_000)
def plucking(t: PlaneTree) -> QPoly:
    """Q(T, f) by the leaf-removal recursion; 1 on the one-vertex tree."""
    if t.is_leaf:
        return QPoly((1,))
    out = QPoly()
    for p in removable(t):
        out = out + plucking(pluck(t, p)).shift(r_count(t, p))
    return out


def removal_orders(t: PlaneTree) -> Iterator[tuple[Path, ...]]:
    """Every admissible sequence of plucks, each pluck named by its path in
    the tree current at that step."""
    if t.is_leaf:
        yield ()
        return
    for p in removable(t):
        for rest in removal_orders(pluck(t, p)):
            yield (p,) + rest


def undelayed(t: PlaneTree) -> PlaneTree:
    return PlaneTree(tuple(undelayed(c) for c in t.children))


def branch_sizes(t: PlaneTree) -> list[int]:
    """Edge counts of the branches hanging from the root."""
    return [_size(c) for c in t.children]


def plucking_closed(t: PlaneTree) -> QPoly:
    """Product over vertices of the q-multinomial of branch edge counts."""
    if any(subtree(t, p).delay != 1 for p in leaf_paths(t)):
        raise ValidationError("the product formula needs all delays equal to 1")
    out = QPoly((1,))
    stack = [t]
    while stack:
        v = stack.pop()
        if len(v.children) > 1:
            out = out * q_multinomial(branch_sizes(v))
        stack.extend(v.children)
    return out


def q_degree(t: PlaneTree) -> int:
    total = 0
    stack = [t]
    while stack:
        v = stack.pop()
        sizes = branch_sizes(v)
        total += sum(a * b for a, b in itertools.combinations(sizes, 2))
        stack.extend(v.children)
    return total


def canonical_unordered(t: PlaneTree) -> str:
    """Embedding-independent form (children sorted)."""
    if t.is_leaf:
        return "()"
    return "(" + "".join(sorted(canonical_unordered(c) for c in t.children)) + ")"


def random_tree(edges: int, rng: random.Random) -> PlaneTree:
    """Random plane tree: each new vertex hangs off a uniform existing one at a
    uniform child slot."""
    kids: list[list[int]] = [[]]
    for v in range(1, edges + 1):
        parent = rng.randrange(v)
        kids[parent].insert(rng.randint(0, len(kids[parent])), v)
        kids.append([])

    def build(v: int) -> PlaneTree:
        return PlaneTree(tuple(build(c) for c in kids[v]))

    return build(0)


def shuffle_embedding(t: PlaneTree, rng: random.Random) -> PlaneTree:
    kids = [shuffle_embedding(c, rng) for c in t.children]
    rng.shuffle(kids)
    return PlaneTree(tuple(kids), t.delay)


def random_delays(t: PlaneTree, rng: random.Random, top: int) -> PlaneTree:
    if t.is_leaf:
        return PlaneTree((), rng.randint(1, top))
    return PlaneTree(tuple(random_delays(c, rng, top) for c in t.children))


@lru_cache(maxsize=None)
def unordered_trees(edges: int) -> tuple[PlaneTree, ...]:
    """One representative of every rooted unordered tree with ``edges`` edges."""
    if edges == 0:
        return (PlaneTree(),)
    out = {}
    # root children as a multiset of branches, branch = edge + subtree
    for parts in _partitions(edges):
        choices = [unordered_trees(p - 1) for p in parts]
        for combo in itertools.product(*choices):
            t = PlaneTree(tuple(combo))
            out.setdefault(canonical_unordered(t), t)
    return tuple(out[k] for k in sorted(out))


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


# --- dual tree of a Catalan state -------------------------------------------


def _linear_position(c: CatalanState, k: int) -> int:
    """Position after cutting the boundary circle inside the floor:
    y_m .. y_1, x_1 .. x_n, y'_1 .. y'_m."""
    kind, i = c.label(k)
    m, n = c.m, c.n
    if kind == "y":
        return m - i
    if kind == "x":
        return m + i - 1
    if kind == "yp":
        return m + n + i - 1
    raise ValueError("floor points have no position")


def arc_height(c: CatalanState, a: int, b: int) -> int:
    """0 for an arc with both ends on the ceiling, else the largest row index
    of a side endpoint."""
    rows = [i for kind, i in (c.label(a), c.label(b)) if kind in ("y", "yp")]
    return max(rows, default=0)


def tree_of(c: CatalanState) -> PlaneTree:
    """Dual tree of the arcs that avoid the floor, rooted at the floor region.

    Each such arc is an edge; the arcs nested directly inside it are its
    children, ordered left to right along the boundary.
    """
    if floor_returns(c):
        raise FloorReturnPresent(f"{c} has a floor return")
    chords = []
    for a, b in c.arcs:
        if c.side(a) == "xp" or c.side(b) == "xp":
            continue
        pa, pb = sorted((_linear_position(c, a), _linear_position(c, b)))
        chords.append((pa, pb, max(1, arc_height(c, a, b))))
    chords.sort()

    def build(lo: int, hi: int, start: int) -> tuple[list[PlaneTree], int]:
        kids = []
        k = start
        while k < len(chords) and chords[k][1] < hi and chords[k][0] > lo:
            pa, pb, f = chords[k]
            inner, k = build(pa, pb, k + 1)
            kids.append(PlaneTree(tuple(inner), f if not inner else 1))
        return kids, k

    kids, used = build(-1, 10**9, 0)
    if used != len(chords):
        raise AssertionError("floor-free arcs are not properly nested")
    return PlaneTree(tuple(kids))


def is_wedge_of_paths(t: PlaneTree) -> list[int] | None:
    """Branch lengths if every root branch is a path and all delays are 1."""
    lengths = []
    for c in t.children:
        k = 1
        while c.children:
            if len(c.children) != 1:
                return None
            c = c.children[0]
            k += 1
        if c.delay != 1:
            return None
        lengths.append(k)
    return lengths


# --- realizability of a polynomial as a plucking polynomial -----------------


@dataclass(frozen=True)
class Verdict:
    """``status`` is "yes" (witness found), "no" (condition (ii) fails for
    every N and no witness turned up) or "unknown"."""

    status: str
    reason: str
    witness: PlaneTree | None = None
    condition_ii: bool | None = None
    n_factorial: int | None = None
    divisors: tuple[int, ...] = ()
    gaussian_factors: tuple[tuple[int, int], ...] | None = None

    def __str__(self) -> str:
        out = f"{self.status}: {self.reason}"
        if self.witness is not None:
            out += f" (witness {to_text(self.witness)})"
        return out


def _factor_q_ints(r: QPoly, top: int) -> tuple[int, ...] | None:
    """Write r as a product of [b]_q with 2 <= b <= top (non-increasing)."""
    if r == QPoly((1,)):
        return ()
    for b in range(top, 1, -1):
        quot, rem = divmod(r, q_int(b))
        if not rem.coeffs:
            rest = _factor_q_ints(quot, b)
            if rest is not None:
                return (b,) + rest
    return None


def gaussian_factorization(p: QPoly) -> tuple[tuple[int, int], ...] | None:
    """Some way of writing ``p`` as a product of Gaussian binomials
    [a+b choose a]_q (1 <= a <= b), or None if there is none."""

    @lru_cache(maxsize=None)
    def go(coeffs: tuple[int, ...], a_min: int, b_min: int):
        cur = QPoly(coeffs)
        if cur == QPoly((1,)):
            return ()
        deg = cur.degree()
        for a in range(a_min, deg + 1):
            for b in range(max(a, b_min if a == a_min else a), deg // a + 1):
                g = q_multinomial([a, b])
                quot, rem = divmod(cur, g)
                if rem.coeffs:
                    continue
                rest = go(quot.coeffs, a, b)
                if rest is not None:
                    return ((a, b),) + rest
        return None

    if p.is_zero() or p.coeffs[0] != 1:
        return None
    return go(p.coeffs, 1, 1)


def _phi(k: int) -> int:
    out = k
    x = k
    d = 2
    while d * d <= x:
        if x % d == 0:
            while x % d == 0:
                x //= d
            out -= out // d
        d += 1
    if x > 1:
        out -= out // x
    return out


def _witness(p: QPoly, max_edges: int) -> PlaneTree | None:
    for e in range(max_edges + 1):
        for t in unordered_trees(e):
            if plucking_closed(t) == p:
                return t
    return None


def condition_ii(p: QPoly, search_bound: int) -> tuple[bool | None, int | None, tuple[int, ...], list[int]]:
    """Look for p = [N]!/([b_1]..[b_k]) with 2 <= b_i < N.

    Any such N has the N-th cyclotomic polynomial dividing p exactly once
    (it divides [N] but no smaller [b]), so phi(N) <= deg p; that bounds the
    candidates completely.  Returns (holds, N, divisors, candidates), with
    holds None when only candidates above ``search_bound`` remain.
    """
    deg = p.degree()
    cap = 2 * deg * deg + 2  # phi(N) >= sqrt(N/2)
    candidates = [k for k in range(2, cap + 1) if _phi(k) <= deg and cyclotomic(k).divides(p)]
    for big_n in candidates:
        if big_n > search_bound:
            break
        quot, rem = divmod(q_factorial(big_n), p)
        if rem.coeffs:
            continue
        divs = _factor_q_ints(quot, big_n - 1)
        if divs is not None:
            return True, big_n, tuple(sorted(divs)), candidates
    if any(k > search_bound for k in candidates):
        return None, None, (), candidates
    return False, None, (), candidates


def is_plucking_realizable(p: QPoly, search_bound: int = 12, tree_search_edges: int = 10) -> Verdict:
    """Test the sufficient criterion (Gaussian product plus condition (ii))
    and search unordered trees with at most ``tree_search_edges`` edges."""
    if p.is_zero() or p.coeffs[0] != 1 or p.coeffs[-1] != 1:
        return Verdict("no", "extreme coefficients are not 1, which every plucking polynomial has")
    if p.degree() == 0:
        return Verdict("yes", "constant 1", witness=PlaneTree(), condition_ii=True, n_factorial=1)
    holds, big_n, divs, candidates = condition_ii(p, search_bound)
    gauss = gaussian_factorization(p)
    witness = _witness(p, max(tree_search_edges, big_n or 0))
    if witness is not None:
        if holds:
            why = f"[{big_n}]_q!/" + ("".join(f"[{b}]_q" for b in divs) or "1")
        else:
            why = "tree search"
        return Verdict("yes", why, witness, holds, big_n, divs, gauss)
    if holds is False:
        return Verdict("no", f"condition (ii) fails for every N (cyclotomic candidates: {candidates or 'none'}); "
                       f"no tree with <= {tree_search_edges} edges matches", None, False, None, (), gauss)
    if holds is None:
        return Verdict("unknown", f"condition (ii) undecided: candidates above N={search_bound} not searched",
                       gaussian_factors=gauss)
    return Verdict("unknown", f"condition (ii) holds with N={big_n} but "
                   + ("p is not a product of Gaussian polynomials" if gauss is None else "no witness tree found"),
                   None, True, big_n, divs, gauss)


# --- export -----------------------------------------------------------------


def to_dot(t: PlaneTree, name: str = "tree") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  v0 [label="root", shape=doublecircle];']
    counter = itertools.count(1)

    def walk(cur: PlaneTree, ident: str) -> None:
        for c in cur.children:
            cid = f"v{next(counter)}"
            label = f"@{c.delay}" if c.is_leaf else ""
            shape = "box" if c.is_leaf else "circle"
            lines.append(f'  {cid} [label="{label}", shape={shape}];')
            lines.append(f"  {ident} -> {cid};")
            walk(c, cid)

    walk(t, "v0")
    lines.append("}")
    return "\n".join(lines) + "\n"
