"""Banzhaf and Shapley-Shubik voting power, exact and by Monte Carlo.

Exact routines enumerate subset sums on rescaled integer weights, doubling a
numpy array once per player, so a full Banzhaf computation is O(n * 2^n) with
no floating-point comparisons anywhere near the quota. The Monte Carlo
estimators draw in fixed-size chunks with one counter-based substream per
chunk, which makes results independent of how the chunks are scheduled: a
serial run and any parallel split of the same trial budget return identical
numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ._rand import CHUNK, chunk_rng, chunk_sizes
from .errors import CapacityError
from .model import VotingGame, integer_form

#: Largest n accepted by the exact enumerations.
BANZHAF_EXACT_MAX = 24
SHAPLEY_EXACT_MAX = 20


@dataclass(frozen=True)
class PowerReport:
    """Result of a power computation.

    ``raw`` holds absolute swing counts (Banzhaf) or pivot counts
    (Shapley-Shubik) for exact methods, and estimated expectations for Monte
    Carlo. ``normalized`` always sums to 1 unless the game has no swings at
    all. ``stderr`` is populated by Monte Carlo methods only and refers to the
    normalized index.
    """

    kind: str
    method: str
    raw: tuple[float, ...]
    normalized: tuple[float, ...]
    stderr: Optional[tuple[float, ...]] = None


def _subset_sums(weights: np.ndarray) -> np.ndarray:
    """All 2^k subset sums of ``weights``; bit i of the position selects weight i."""
    sums = np.zeros(1, dtype=np.int64)
    for w in weights:
        sums = np.concatenate([sums, sums + w])
    return sums


def _subset_sums_sized(weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Subset sums together with subset cardinalities."""
    sums = np.zeros(1, dtype=np.int64)
    sizes = np.zeros(1, dtype=np.int8)
    for w in weights:
        sums = np.concatenate([sums, sums + w])
        sizes = np.concatenate([sizes, sizes + np.int8(1)])
    return sums, sizes


def _swing_counts(weights: np.ndarray, quota: int) -> list[int]:
    """Number of coalitions (not containing i) that i turns from losing to winning."""
    counts = []
    for i in range(len(weights)):
        others = np.delete(weights, i)
        sums = _subset_sums(others)
        # S loses, S+{i} wins  <=>  quota - w_i < sum(S) <= quota
        counts.append(int(np.count_nonzero((sums > quota - weights[i]) & (sums <= quota))))
    return counts


def banzhaf_exact(game: VotingGame) -> PowerReport:
    """Exact Banzhaf power: raw swing counts and their normalization.

    Raw values count, for each player, the coalitions of the other players
    that the player's joining turns from losing to winning. A dummy scores 0;
    a dictator is the only player with a positive count.
    """
    if game.n > BANZHAF_EXACT_MAX:
        raise CapacityError(
            f"exact Banzhaf enumerates 2^n coalitions and is capped at n={BANZHAF_EXACT_MAX}; "
            f"got n={game.n}. Use power_monte_carlo(game, kind='banzhaf') instead."
        )
    ws, quota = integer_form(game)
    raw = _swing_counts(ws, quota)
    total = sum(raw)
    if total:
        normalized = tuple(float(Fraction(r, total)) for r in raw)
    else:
        normalized = (0.0,) * game.n
    return PowerReport("banzhaf", "exact", tuple(raw), normalized)


def shapley_shubik_exact(game: VotingGame) -> PowerReport:
    """Exact Shapley-Shubik power: pivot counts over all n! player orderings.

    Instead of walking orderings, each player's pivot count is assembled from
    subset sums of the other players grouped by subset size k, weighting each
    qualifying subset by k!(n-1-k)!. Raw counts sum to n! whenever the grand
    coalition wins.
    """
    if game.n > SHAPLEY_EXACT_MAX:
        raise CapacityError(
            f"exact Shapley-Shubik enumerates 2^n coalitions and is capped at "
            f"n={SHAPLEY_EXACT_MAX}; got n={game.n}. "
            f"Use power_monte_carlo(game, kind='shapley') instead."
        )
    n = game.n
    ws, quota = integer_form(game)
    fact = [math.factorial(k) for k in range(n + 1)]
    raw: list[int] = []
    for i in range(n):
        others = np.delete(ws, i)
        sums, sizes = _subset_sums_sized(others)
        hit = (sums > quota - ws[i]) & (sums <= quota)
        by_size = np.bincount(sizes[hit], minlength=n)
        raw.append(sum(int(by_size[k]) * fact[k] * fact[n - 1 - k] for k in range(n)))
    total = sum(raw)
    if total:
        normalized = tuple(float(Fraction(r, fact[n])) for r in raw)
    else:
        normalized = (0.0,) * n
    return PowerReport("shapley", "exact", tuple(raw), normalized)


def _banzhaf_mc(ws: np.ndarray, quota: int, n: int, trials: int, seed: int) -> PowerReport:
    wf = ws.astype(np.float64)
    sum_x = np.zeros(n)
    sum_xx = np.zeros((n, n))
    for chunk_index, size in enumerate(chunk_sizes(trials)):
        rng = chunk_rng(seed, chunk_index)
        member = rng.integers(0, 2, size=(size, n)).astype(np.float64)
        totals = member @ wf
        # per player: sum over the *others*, shared across all players of one draw
        others = totals[:, None] - member * wf[None, :]
        swing = (others > quota - wf[None, :]) & (others <= quota)
        x = swing.astype(np.float64)
        sum_x += x.sum(axis=0)
        sum_xx += x.T @ x
    t = trials
    p = sum_x / t
    raw = tuple(float(x) * 2.0 ** (n - 1) for x in p)
    s = p.sum()
    if s == 0.0:
        return PowerReport("banzhaf", "monte-carlo", raw, (0.0,) * n, (0.0,) * n)
    normalized = p / s
    # delta method: variance of p/s propagated through the normalization
    cov_mean = (sum_xx / t - np.outer(p, p)) / max(t - 1, 1)
    jac = (np.eye(n) * s - np.outer(p, np.ones(n))) / (s * s)
    var = np.einsum("ij,jk,ik->i", jac, cov_mean, jac)
    stderr = np.sqrt(np.clip(var, 0.0, None))
    return PowerReport(
        "banzhaf",
        "monte-carlo",
        raw,
        tuple(float(x) for x in normalized),
        tuple(float(x) for x in stderr),
    )


def _shapley_mc(ws: np.ndarray, quota: int, n: int, trials: int, seed: int) -> PowerReport:
    counts = np.zeros(n, dtype=np.int64)
    grand_wins = int(ws.sum()) > quota
    if grand_wins:
        base = np.broadcast_to(np.arange(n), (CHUNK, n))
        for chunk_index, size in enumerate(chunk_sizes(trials)):
            rng = chunk_rng(seed, chunk_index)
            perms = rng.permuted(base[:size].copy(), axis=1)
            cum = np.cumsum(ws[perms], axis=1)
            pivot_pos = np.argmax(cum > quota, axis=1)
            pivots = perms[np.arange(size), pivot_pos]
            counts += np.bincount(pivots, minlength=n)
    t = trials
    p = counts / t
    stderr = np.sqrt(p * (1.0 - p) / t)
    est = tuple(float(x) for x in p)
    return PowerReport(
        "shapley", "monte-carlo", est, est, tuple(float(x) for x in stderr)
    )


def power_monte_carlo(
    game: VotingGame, kind: str = "banzhaf", trials: int = 100_000, seed: int = 0
) -> PowerReport:
    """Estimate a power index by simulation, deterministically for a given seed.

    Banzhaf trials draw one random coalition per trial and test every player's
    swing against that shared draw; the reported stderr is for the normalized
    index (delta method across the correlated per-player estimates).
    Shapley-Shubik trials draw random orderings and record the pivot, so the
    normalized estimate is a plain multinomial proportion.

    Trials are processed in fixed 2^16-trial chunks, each with its own seeded
    substream, so any serial or parallel execution of the same budget yields
    bit-identical results.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if kind not in ("banzhaf", "shapley"):
        raise ValueError(f"kind must be 'banzhaf' or 'shapley', got {kind!r}")
    ws, quota = integer_form(game)
    if kind == "banzhaf":
        return _banzhaf_mc(ws, quota, game.n, trials, seed)
    return _shapley_mc(ws, quota, game.n, trials, seed)
