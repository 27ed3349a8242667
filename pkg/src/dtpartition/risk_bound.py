"""Structural risk bound for a tree with k training errors on m examples.

    eps = (2k + 4 ln(4 tau(2m) / (delta q_k p_d))) / m

tau is replaced by the growth-function bound of the tree's shape, q_k is a
geometric prior over error counts and p_d a prior over shapes that depends on
the leaf count only.
"""
import math
from dataclasses import dataclass

from .bound_engine import PartitionTable, growth_bound
from .combinatorics import ln_big, wedderburn_etherington

__all__ = ["BoundConfig", "prior_pd", "prior_qk", "ln_prior_pd", "ln_prior_qk", "epsilon"]

DEFAULT_R = 2.0 ** -13.7


@dataclass(frozen=True)
class BoundConfig:
    delta: float = 0.05
    r: float = DEFAULT_R
    fast: bool = True

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not 0 < self.r < 1:
            raise ValueError(f"r must lie in (0, 1), got {self.r}")

    @property
    def bound_mode(self):
        return "fast" if self.fast else "exact"

    def make_table(self):
        return PartitionTable(fast=self.fast)


def ln_prior_pd(t):
    n_leaves = t.leaf_count
    return (math.log(6 / math.pi ** 2) - 2 * math.log(n_leaves)
            - ln_big(wedderburn_etherington(n_leaves)))


def prior_pd(t):
    """6 / (pi^2 L^2 WE(L)) for a shape with L leaves."""
    return math.exp(ln_prior_pd(t))


def ln_prior_qk(k, r):
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return math.log1p(-r) + k * math.log(r)


def prior_qk(k, r):
    """(1 - r) r^k."""
    return math.exp(ln_prior_qk(k, r))


def epsilon(m, k, t, n_classes, n_features, cfg=None, table=None):
    """Risk bound for a tree of shape `t` making `k` errors on `m` examples.

    Args:
        table (PartitionTable): memo whose mode must match ``cfg.fast``; a fresh
            one is created if None.
    """
    if cfg is None:
        cfg = BoundConfig()
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0 <= k <= m:
        raise ValueError(f"k must lie in [0, m], got k={k}, m={m}")
    if table is None:
        table = cfg.make_table()
    elif table.fast != cfg.fast:
        raise ValueError(f"table mode {table.mode} does not match config mode {cfg.bound_mode}")
    # a 1-class problem still has to be bounded as if two labels were possible
    tau = growth_bound(t, 2 * m, max(n_classes, 2), n_features, table)
    log_term = (math.log(4) + ln_big(tau) - math.log(cfg.delta)
                - ln_prior_qk(k, cfg.r) - ln_prior_pd(t))
    return (2 * k + 4 * log_term) / m
