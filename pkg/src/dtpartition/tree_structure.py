"""Unlabeled binary tree shapes.

A shape is either ``LEAF`` or a :class:`TreeStructure` node with two children.
Shapes serialize as ``L`` for a leaf and ``(<left><right>)`` for a node, so a
stump is ``(LL)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

__all__ = [
    "TreeStructure",
    "LEAF",
    "STUMP",
    "node",
    "canonical_form",
    "structurally_equal",
    "enumerate_structures",
    "parse_structure",
    "complete_tree",
    "structures_up_to_height",
    "FIGURE2_KEYS",
    "figure2_structures",
]


@dataclass(frozen=True, eq=False)
class TreeStructure:
    """A binary tree shape. ``left`` and ``right`` are both None for a leaf."""

    left: TreeStructure | None = None
    right: TreeStructure | None = None
    leaf_count: int = field(init=False)
    height: int = field(init=False)

    def __post_init__(self):
        if (self.left is None) != (self.right is None):
            raise ValueError("a node needs exactly two children")
        if self.is_leaf:
            leaves, height = 1, 0
        else:
            leaves = self.left.leaf_count + self.right.leaf_count
            height = 1 + max(self.left.height, self.right.height)
        object.__setattr__(self, "leaf_count", leaves)
        object.__setattr__(self, "height", height)

    @property
    def is_leaf(self):
        return self.left is None

    @property
    def node_count(self):
        return self.leaf_count - 1

    @cached_property
    def key(self):
        """Serialization of this exact orientation."""
        if self.is_leaf:
            return "L"
        return "(" + self.left.key + self.right.key + ")"

    @cached_property
    def canonical(self):
        return canonical_form(self)

    @cached_property
    def canonical_key(self):
        return self.canonical.key

    def __eq__(self, other):
        if not isinstance(other, TreeStructure):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"TreeStructure({self.key!r})"

    def __str__(self):
        return self.key


LEAF = TreeStructure()


def node(left, right):
    return TreeStructure(left, right)


STUMP = node(LEAF, LEAF)


def _order_key(t):
    # leaf count first, then the canonical serialization breaks ties
    return (t.leaf_count, t.key)


def canonical_form(t):
    """Mirror-class representative: smaller child (by leaf count, then
    recursively) on the left at every node."""
    if t.is_leaf:
        return LEAF
    a = canonical_form(t.left)
    b = canonical_form(t.right)
    if _order_key(b) < _order_key(a):
        a, b = b, a
    if a is t.left and b is t.right:
        return t
    return TreeStructure(a, b)


def structurally_equal(a, b):
    return canonical_form(a).key == canonical_form(b).key


@lru_cache(maxsize=None)
def _canonical_by_leaves(n_leaves):
    if n_leaves == 1:
        return (LEAF,)
    out = {}
    for left_leaves in range(1, n_leaves // 2 + 1):
        for a in _canonical_by_leaves(left_leaves):
            for b in _canonical_by_leaves(n_leaves - left_leaves):
                t = canonical_form(TreeStructure(a, b))
                out[t.key] = t
    return tuple(out.values())


def enumerate_structures(n_leaves):
    """All canonical shapes with `n_leaves` leaves, by height then serialization."""
    if n_leaves < 1:
        raise ValueError(f"n_leaves must be >= 1, got {n_leaves}")
    return sorted(_canonical_by_leaves(n_leaves), key=lambda t: (t.height, t.key))


def parse_structure(text):
    """Inverse of ``TreeStructure.key``. Whitespace is ignored."""
    s = "".join(text.split())
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(s):
            raise ValueError(f"unexpected end of structure {text!r}")
        ch = s[pos]
        if ch == "L":
            pos += 1
            return LEAF
        if ch == "(":
            pos += 1
            left = parse()
            right = parse()
            if pos >= len(s) or s[pos] != ")":
                raise ValueError(f"expected ')' at position {pos} in {text!r}")
            pos += 1
            return TreeStructure(left, right)
        raise ValueError(f"unexpected character {ch!r} at position {pos} in {text!r}")

    t = parse()
    if pos != len(s):
        raise ValueError(f"trailing characters at position {pos} in {text!r}")
    return t


def complete_tree(height):
    t = LEAF
    for _ in range(height):
        t = TreeStructure(t, t)
    return t


def structures_up_to_height(max_height):
    """All canonical shapes of height <= max_height."""
    shapes = [LEAF]
    for _ in range(max_height):
        found = {t.key: t for t in shapes}
        for i, a in enumerate(shapes):
            for b in shapes[i:]:
                t = canonical_form(TreeStructure(a, b))
                found.setdefault(t.key, t)
        shapes = sorted(found.values(), key=lambda t: (t.height, t.leaf_count, t.key))
    return shapes


# The eleven shapes of height <= 3 in the order they are usually tabulated
# (by height, then leaf count; the two ties are ordered as in the published table).
FIGURE2_KEYS = (
    "L",
    "(LL)",
    "(L(LL))",
    "((LL)(LL))",
    "(L(L(LL)))",
    "(L((LL)(LL)))",
    "((LL)(L(LL)))",
    "((L(LL))(L(LL)))",
    "((LL)((LL)(LL)))",
    "((L(LL))((LL)(LL)))",
    "(((LL)(LL))((LL)(LL)))",
)


def figure2_structures():
    return [parse_structure(k) for k in FIGURE2_KEYS]
