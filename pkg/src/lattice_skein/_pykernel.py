"""Pure-Python smoothing kernel (fallback for ``_ckernel``).

A Kauffman state is packed into an int ``code``: bit ``i*n + j`` is set when
crossing (i, j) carries a +1 marker.  Crossing ports are numbered
``4*(i*n + j) + d`` with d = 0 (N), 1 (E), 2 (S), 3 (W); boundary point k of
the circular index is node ``4*m*n + k``.

+1 joins N-E and S-W, -1 joins N-W and S-E.
"""

from __future__ import annotations

from functools import lru_cache

PLUS_PAIRS = (1, 0, 3, 2)
MINUS_PAIRS = (3, 2, 1, 0)


@lru_cache(maxsize=None)
def wiring(m: int, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(ext, entry)``: external neighbour of every port, and the port each
    boundary point enters."""
    base = 4 * m * n
    ext = [0] * base
    entry = [0] * (2 * (m + n))
    for i in range(m):
        for j in range(n):
            c = 4 * (i * n + j)
            if i == 0:
                ext[c] = base + j
                entry[j] = c
            else:
                ext[c] = 4 * ((i - 1) * n + j) + 2
            if i == m - 1:
                k = n + m + (n - j - 1)
                ext[c + 2] = base + k
                entry[k] = c + 2
            else:
                ext[c + 2] = 4 * ((i + 1) * n + j)
            if j == 0:
                k = 2 * n + m + (m - i - 1)
                ext[c + 3] = base + k
                entry[k] = c + 3
            else:
                ext[c + 3] = 4 * (i * n + j - 1) + 1
            if j == n - 1:
                k = n + i
                ext[c + 1] = base + k
                entry[k] = c + 1
            else:
                ext[c + 1] = 4 * (i * n + j + 1) + 3
    if n == 0:
        for i in range(m):
            # no crossings in the row: y_i is wired straight to y'_i
            a, b = 2 * n + m + (m - i - 1), n + i
            entry[a], entry[b] = -1 - b, -1 - a
    if m == 0:
        for j in range(n):
            a, b = j, n + m + (n - j - 1)
            entry[a], entry[b] = -1 - b, -1 - a
    return tuple(ext), tuple(entry)


def smooth(m: int, n: int, code: int, flip: bool = False) -> tuple[tuple[int, ...], int]:
    """Resolve every crossing; return ``(partner table, closed loops)``."""
    ext, entry = wiring(m, n)
    base = 4 * m * n
    size = 2 * (m + n)
    plus, minus = (MINUS_PAIRS, PLUS_PAIRS) if flip else (PLUS_PAIRS, MINUS_PAIRS)
    inner = [0] * base
    for c in range(m * n):
        pairs = plus if (code >> c) & 1 else minus
        o = 4 * c
        inner[o] = o + pairs[0]
        inner[o + 1] = o + pairs[1]
        inner[o + 2] = o + pairs[2]
        inner[o + 3] = o + pairs[3]
    seen = [False] * base
    partner = [-1] * size
    for k in range(size):
        if partner[k] != -1:
            continue
        p = entry[k]
        if p < 0:
            other = -1 - p
        else:
            while True:
                seen[p] = True
                p = inner[p]
                seen[p] = True
                p = ext[p]
                if p >= base:
                    other = p - base
                    break
        partner[k] = other
        partner[other] = k
    loops = 0
    for start in range(base):
        if seen[start]:
            continue
        loops += 1
        p = start
        while not seen[p]:
            seen[p] = True
            p = inner[p]
            seen[p] = True
            p = ext[p]
    return tuple(partner), loops


def accumulate_full(m: int, n: int, start: int, stop: int, flip: bool = False) -> dict:
    """Histogram ``{partner bytes: {(p - n, loops): count}}`` over codes in
    ``[start, stop)``."""
    out: dict[bytes, dict[tuple[int, int], int]] = {}
    mn = m * n
    for code in range(start, stop):
        partner, loops = smooth(m, n, code, flip)
        key = bytes(partner)
        pn = 2 * bin(code).count("1") - mn
        bucket = out.setdefault(key, {})
        bucket[(pn, loops)] = bucket.get((pn, loops), 0) + 1
    return out


def restricted_code(m: int, n: int, index: int) -> tuple[int, int]:
    """Mixed-radix ``index`` -> ``(code, |b|)`` for the row pattern +^b -^(n-b)."""
    code = 0
    weight = 0
    for i in range(m):
        index, b = divmod(index, n + 1)
        weight += b
        code |= ((1 << b) - 1) << (i * n)
    return code, weight


def accumulate_restricted(m: int, n: int, start: int, stop: int, flip: bool = False) -> dict:
    out: dict[bytes, dict[tuple[int, int], int]] = {}
    mn = m * n
    for index in range(start, stop):
        code, weight = restricted_code(m, n, index)
        partner, loops = smooth(m, n, code, flip)
        key = bytes(partner)
        pn = 2 * weight - mn
        bucket = out.setdefault(key, {})
        bucket[(pn, loops)] = bucket.get((pn, loops), 0) + 1
    return out


def scan_restricted(m: int, n: int, target: bytes, start: int, stop: int, flip: bool = False) -> list[int]:
    """Mixed-radix indices in ``[start, stop)`` whose smoothing is ``target``."""
    hits = []
    for index in range(start, stop):
        code, _ = restricted_code(m, n, index)
        partner, _ = smooth(m, n, code, flip)
        if bytes(partner) == target:
            hits.append(index)
    return hits
