"""Exact counting primitives.

Everything here works on Python ints, so values never overflow. Floats only
appear in :func:`ln_big`, which is the bridge to the risk bound.
"""
import functools
import math
import threading

__all__ = [
    "binomial",
    "stirling2",
    "falling_factorial",
    "wedderburn_etherington",
    "ln_big",
]

_LN2 = math.log(2.0)


def binomial(n, k):
    """Binomial coefficient C(n, k); 0 when k > n."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


class _StirlingTable:
    """Rows of S(m, c) built by the recurrence S(m,c) = c S(m-1,c) + S(m-1,c-1).

    Rows are truncated to ``width`` columns. Asking for a larger c widens every
    row; asking for a larger m appends rows. Concurrent writers may race but
    always store identical values.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._width = 8
        self._rows = [[1] + [0] * (self._width - 1)]

    def _widen(self, width):
        rows = [[1] + [0] * (width - 1)]
        for m in range(1, len(self._rows)):
            rows.append(self._next_row(rows[-1], width))
        self._rows = rows
        self._width = width

    @staticmethod
    def _next_row(prev, width):
        row = [0] * width
        for c in range(1, width):
            row[c] = c * prev[c] + prev[c - 1]
        return row

    def get(self, m, c):
        if c > m or c < 0:
            return 0
        if c == 0:
            return 1 if m == 0 else 0
        rows = self._rows
        if m < len(rows) and c < self._width:
            return rows[m][c]
        with self._lock:
            if c >= self._width:
                self._widen(max(c + 1, 2 * self._width))
            while len(self._rows) <= m:
                self._rows.append(self._next_row(self._rows[-1], self._width))
            return self._rows[m][c]


_STIRLING = _StirlingTable()
_TABLE_MAX_M = 512


@functools.lru_cache(maxsize=4096)
def _stirling2_explicit(m, c):
    # inclusion-exclusion over empty blocks; c big-int powers instead of m rows
    total = sum((-1) ** (c - j) * math.comb(c, j) * j ** m for j in range(1, c + 1))
    return total // math.factorial(c)


def stirling2(m, c):
    """Stirling number of the second kind: number of c-partitions of an m-set."""
    if m > _TABLE_MAX_M and 0 < c <= m:
        return _stirling2_explicit(m, c)
    return _STIRLING.get(m, c)


def falling_factorial(n, a):
    """n (n-1) ... (n-a+1). Empty product for a = 0, zero when a > n."""
    if a > n:
        return 0
    out = 1
    for i in range(n - a + 1, n + 1):
        out *= i
    return out


_WE = [0, 1]
_WE_LOCK = threading.Lock()


def wedderburn_etherington(n_leaves):
    """Number of binary tree shapes with `n_leaves` leaves, up to mirroring."""
    if n_leaves < 1:
        raise ValueError(f"n_leaves must be >= 1, got {n_leaves}")
    if n_leaves < len(_WE):
        return _WE[n_leaves]
    with _WE_LOCK:
        while len(_WE) <= n_leaves:
            n = len(_WE)
            half = n // 2
            total = sum(_WE[i] * _WE[n - i] for i in range(1, (n + 1) // 2))
            if n % 2 == 0:
                total += _WE[half] * (_WE[half] + 1) // 2
            _WE.append(total)
    return _WE[n_leaves]


def ln_big(x):
    """Natural log of a positive integer of any size.

    Only the top 64 bits go through ``math.log``; the rest is a power of two.
    """
    if x <= 0:
        raise ValueError(f"ln_big needs a positive integer, got {x}")
    x = int(x)
    shift = max(0, x.bit_length() - 64)
    return math.log(x >> shift) + shift * _LN2
