"""Upper bounds on the partitioning functions, growth function and VC dimension
of binary decision tree classes on real-valued features.

All values are exact Python ints. Bounds for a tree class are memoized in a
:class:`PartitionTable` keyed by the canonical shape, so mirror-equivalent
shapes share entries.
"""
from bisect import bisect_right as _bisect_right
import logging
import threading
from math import factorial

from .combinatorics import binomial, falling_factorial, stirling2
from .tree_structure import canonical_form

__all__ = [
    "PartitionTable",
    "stump_pi2_bound",
    "stump_vcdim_exact",
    "partition_bound",
    "partition_bound_fast",
    "growth_bound",
    "vcdim_upper_bound",
]

log = logging.getLogger(__name__)

EXACT = "exact"
FAST = "fast"


class PartitionTable:
    """Memo of partitioning-function bounds.

    Args:
        fast (bool): if True, the table stores the looser bound where the sum
            over the left-subtree size is replaced by its largest term.

    Lookups and inserts are plain dict operations; two threads computing the
    same entry store the same value.
    """

    def __init__(self, fast=False):
        self.fast = fast
        self._values = {}
        self._write_lock = threading.Lock()

    @property
    def mode(self):
        return FAST if self.fast else EXACT

    def __len__(self):
        return len(self._values)

    def __contains__(self, key):
        return key in self._values

    def get(self, key):
        return self._values.get(key)

    def put(self, key, value):
        with self._write_lock:
            self._values.setdefault(key, value)

    def bound(self, t, c, m, n_features):
        """Dispatch to the exact or fast bound according to the table mode."""
        if self.fast:
            return partition_bound_fast(t, c, m, n_features, self)
        return partition_bound(t, c, m, n_features, self)

    def save(self, path):
        """Write the table as ``structurekey,c,m,l,value`` lines."""
        with open(path, "w") as f:
            f.write(f"# mode={self.mode}\n")
            for (key, c, m, n_features), value in sorted(self._values.items()):
                f.write(f"{key},{c},{m},{n_features},{value}\n")

    def load(self, path):
        """Best-effort load; malformed lines are skipped with a warning.

        Returns:
            int: number of entries loaded.
        """
        loaded = 0
        with open(path) as f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    if line.startswith("# mode=") and line[7:] != self.mode:
                        log.warning("%s holds %s-mode bounds, table is %s; nothing loaded",
                                    path, line[7:], self.mode)
                        return 0
                    continue
                try:
                    key, c, m, n_features, value = line.split(",")
                    entry = (key, int(c), int(m), int(n_features))
                    value = int(value)
                    if value < 0:
                        raise ValueError("negative value")
                except ValueError as err:
                    log.warning("%s:%d skipped (%s)", path, lineno, err)
                    continue
                self.put(entry, value)
                loaded += 1
        return loaded


_DEFAULT_TABLES = {EXACT: PartitionTable(fast=False), FAST: PartitionTable(fast=True)}


def default_table(fast=False):
    return _DEFAULT_TABLES[FAST if fast else EXACT]


def _check_features(n_features):
    if n_features < 1:
        raise ValueError(f"number of features must be >= 1, got {n_features}")


def stump_pi2_bound(m, n_features):
    """Bound on the number of 2-partitions a decision stump realizes on m points."""
    _check_features(n_features)
    if m <= 1:
        return 0
    total = sum(min(2 * n_features, binomial(m, k)) for k in range(1, m))
    # k and m-k contribute equal terms, so total is even
    return total // 2


_CENTRAL = [1]  # C(d, d // 2)


def stump_vcdim_exact(n_features):
    """Exact VC dimension of decision stumps: largest d with 2l >= C(d, d//2)."""
    target = 2 * n_features
    if not 2 <= target < _CENTRAL[-1]:
        _check_features(n_features)
        while _CENTRAL[-1] <= target:
            d = len(_CENTRAL)
            _CENTRAL.append(binomial(d, d // 2))
    # C(d, d//2) is nondecreasing in d: last d with value <= target
    return _bisect_right(_CENTRAL, target) - 1


def _merge_coefficients(c):
    """(a, b, C(a, c-b) C(b, c-a) (a+b-c)!) for 1 <= a, b <= c, a + b >= c."""
    out = []
    for a in range(1, c + 1):
        for b in range(max(1, c - a), c + 1):
            coef = binomial(a, c - b) * binomial(b, c - a) * factorial(a + b - c)
            if coef:
                out.append((a, b, coef))
    return out


_COEFS = {}


def _coefficients(c):
    coefs = _COEFS.get(c)
    if coefs is None:
        coefs = _COEFS[c] = _merge_coefficients(c)
    return coefs


def _base_case(t, c, m):
    n_leaves = t.leaf_count
    if c < 1 or c > m or c > n_leaves:
        return 0
    if c == m or c == 1 or m == 1:
        return 1
    if m <= n_leaves:
        return stirling2(m, c)
    return None


def _clamp(total, m, c):
    """min(total, S(m, c)) without building S when it obviously exceeds total."""
    # S(m, c) >= c^(m-c) >= 2^((m-c)(bitlen(c)-1))
    if total.bit_length() <= (m - c) * (c.bit_length() - 1):
        return total
    return min(total, stirling2(m, c))


def _halve(total, t, c, m):
    if total % 2:
        log.warning("odd pre-halving sum for %s c=%d m=%d; rounding up", t.key, c, m)
        return (total + 1) // 2
    return total // 2


def _exact(t, c, m, n_features, table):
    value = _base_case(t, c, m)
    if value is not None:
        return value
    entry = (t.key, c, m, n_features)
    value = table.get(entry)
    if value is not None:
        return value

    left, right = t.left, t.right
    two_l = 2 * n_features
    coefs = _coefficients(c)
    total = 0
    for k in range(left.leaf_count, m - right.leaf_count + 1):
        inner = 0
        for a, b, coef in coefs:
            pl = _exact(left, a, k, n_features, table)
            if not pl:
                continue
            pr = _exact(right, b, m - k, n_features, table)
            inner += coef * pl * pr
        if inner:
            total += min(two_l, binomial(m, k)) * inner
    if left.key == right.key:
        total = _halve(total, t, c, m)
    value = _clamp(total, m, c)
    table.put(entry, value)
    return value


def _fast(t, c, m, n_features, table):
    value = _base_case(t, c, m)
    if value is not None:
        return value
    entry = (t.key, c, m, n_features)
    value = table.get(entry)
    if value is not None:
        return value

    left, right = t.left, t.right
    m_left = m - right.leaf_count
    m_right = m - left.leaf_count
    inner = 0
    for a, b, coef in _coefficients(c):
        pl = _fast(left, a, m_left, n_features, table)
        if not pl:
            continue
        inner += coef * pl * _fast(right, b, m_right, n_features, table)
    # the sum over k it replaces has m - L_T + 1 terms
    total = (m - t.leaf_count + 1) * 2 * n_features * inner
    if left.key == right.key:
        total = _halve(total, t, c, m)
    value = _clamp(total, m, c)
    table.put(entry, value)
    return value


def partition_bound(t, c, m, n_features, table=None):
    """Upper bound on the c-partitioning function of tree class `t` at m points.

    Args:
        t (TreeStructure): the tree class; any orientation.
        c (int): number of parts.
        m (int): number of examples.
        n_features (int): number of real-valued features.
        table (PartitionTable): exact-mode memo; the module default if None.
    """
    _check_features(n_features)
    if table is None:
        table = default_table(fast=False)
    elif table.fast:
        raise ValueError("partition_bound needs an exact-mode PartitionTable")
    return _exact(canonical_form(t), c, m, n_features, table)


def partition_bound_fast(t, c, m, n_features, table=None):
    """Looser, cheaper version of :func:`partition_bound` that never goes below it
    before clamping."""
    _check_features(n_features)
    if table is None:
        table = default_table(fast=True)
    elif not table.fast:
        raise ValueError("partition_bound_fast needs a fast-mode PartitionTable")
    return _fast(canonical_form(t), c, m, n_features, table)


def growth_bound(t, m, n_classes, n_features, table=None):
    """Upper bound on the growth function: sum over a of (n)_a * pi^a(m)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if n_classes < 2:
        raise ValueError(f"n_classes must be >= 2, got {n_classes}")
    if table is None:
        table = default_table(fast=False)
    total = 0
    for a in range(1, min(t.leaf_count, n_classes) + 1):
        total += falling_factorial(n_classes, a) * table.bound(t, a, m, n_features)
    return total


def vcdim_upper_bound(t, n_features, table=None):
    """Upper bound on the VC dimension of tree class `t`.

    Scans m upward from L_T + 1 while the 2-partition bound still reaches
    2^(m-1) - 1, i.e. while shattering m points is not ruled out.
    """
    _check_features(n_features)
    if t.is_leaf:
        return 1
    if table is None:
        table = default_table(fast=False)
    n_nodes = t.node_count
    cap = 10 * (n_nodes + 1) * (64 + (n_nodes * n_features).bit_length())
    m = t.leaf_count + 1
    for _ in range(cap):
        if table.bound(t, 2, m, n_features) < 2 ** (m - 1) - 1:
            return m - 1
        m += 1
    raise RuntimeError(f"VC dimension scan for {t.key} exceeded {cap} iterations")
