"""Collective competence of weighted votes, direct and through team tiers.

A group of n judges votes between two alternatives, one of which is correct.
Judge i votes correctly with probability p_i, independently; the group
answer is taken by a weighted rule: correct iff sum_i w_i v_i > bias, where
v_i is +1 for a correct vote and -1 otherwise. Exact routines enumerate all
2^n vote patterns by array doubling; a stalemate (the sum hits the bias
exactly) counts as an incorrect group answer under the default policy, or as
a fair coin flip under ``nd_policy="coin-flip"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._rand import chunk_rng, chunk_sizes
from .errors import CapacityError, DimensionError
from .model import SkillsLike, as_skills

JURY_EXACT_MAX = 24
INDIRECT_DISTINCT_MAX = 20

_ND_CREDIT = {"incorrect": 0.0, "coin-flip": 0.5}


def _nd_credit(nd_policy: str) -> float:
    try:
        return _ND_CREDIT[nd_policy]
    except KeyError:
        raise ValueError(
            f"nd_policy must be one of {sorted(_ND_CREDIT)}, got {nd_policy!r}"
        ) from None


def _check_lengths(weights, skills) -> tuple[np.ndarray, np.ndarray]:
    w = np.asarray(list(weights), dtype=np.float64)
    p = np.asarray(as_skills(skills).p, dtype=np.float64)
    if w.size != p.size:
        raise DimensionError(f"{w.size} weights for {p.size} skills")
    if w.size == 0:
        raise DimensionError("at least one judge is required")
    return w, p


def _signed_sums_and_probs(w: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Signed weight sums and probabilities over all 2^n correct/incorrect patterns."""
    sums = np.zeros(1)
    probs = np.ones(1)
    for wi, pi in zip(w, p):
        sums = np.concatenate([sums - wi, sums + wi])
        probs = np.concatenate([probs * (1.0 - pi), probs * pi])
    return sums, probs


def group_competence(
    weights: Sequence[float], bias: float, skills: SkillsLike, nd_policy: str = "incorrect"
) -> float:
    """Exact probability that the weighted group vote is correct.

    Stalemates (signed sum equal to the bias, detected exactly for
    integer-valued weights and bias) contribute nothing under the default
    policy and half their probability under ``"coin-flip"``.
    """
    nd = _nd_credit(nd_policy)
    w, p = _check_lengths(weights, skills)
    if w.size > JURY_EXACT_MAX:
        raise CapacityError(
            f"exact competence enumerates 2^n vote patterns and is capped at "
            f"n={JURY_EXACT_MAX}; got n={w.size}. Use competence_monte_carlo instead."
        )
    sums, probs = _signed_sums_and_probs(w, p)
    value = float(probs[sums > bias].sum())
    if nd:
        value += nd * float(probs[sums == bias].sum())
    return value


def decisiveness_probability(
    weights: Sequence[float],
    bias: float,
    skills: SkillsLike,
    player: int,
    nd_policy: str = "incorrect",
) -> float:
    """How much one judge's vote matters: P(correct | i right) - P(correct | i wrong).

    This equals the partial derivative of :func:`group_competence` with
    respect to p_i. With all skills at 1/2 and zero bias it reduces to the
    probability that i is a swing voter, i.e. the raw Banzhaf count divided
    by 2^(n-1) in the game with quota (total + bias)/2.
    """
    nd = _nd_credit(nd_policy)
    w, p = _check_lengths(weights, skills)
    if not 0 <= player < w.size:
        raise DimensionError(f"player {player} out of range for n={w.size}")
    if w.size > JURY_EXACT_MAX:
        raise CapacityError(
            f"exact decisiveness enumerates 2^(n-1) vote patterns and is capped at "
            f"n={JURY_EXACT_MAX}; got n={w.size}."
        )
    others = np.delete(np.arange(w.size), player)
    sums, probs = _signed_sums_and_probs(w[others], p[others])
    wi = w[player]

    def answer(shift: float) -> float:
        value = float(probs[sums + shift > bias].sum())
        if nd:
            value += nd * float(probs[sums + shift == bias].sum())
        return value

    return answer(wi) - answer(-wi)


@dataclass(frozen=True)
class CompetenceEstimate:
    value: float
    stderr: float
    trials: int
    seed: int


def competence_monte_carlo(
    weights: Sequence[float],
    bias: float,
    skills: SkillsLike,
    trials: int = 100_000,
    seed: int = 0,
    nd_policy: str = "incorrect",
) -> CompetenceEstimate:
    """Estimate group competence by simulation; deterministic for a given seed.

    Fixed-size chunks with per-chunk substreams make the estimate independent
    of scheduling. If every skill is 1 the estimate is exactly 1.0, not
    merely close.
    """
    nd = _nd_credit(nd_policy)
    w, p = _check_lengths(weights, skills)
    total = 0.0
    total_sq = 0.0
    for chunk_index, size in enumerate(chunk_sizes(trials)):
        rng = chunk_rng(seed, chunk_index)
        correct = rng.random((size, w.size)) < p
        sums = np.where(correct, w, -w).sum(axis=1)
        vals = (sums > bias).astype(np.float64)
        if nd:
            vals += nd * (sums == bias)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0) * trials / max(trials - 1, 1)
    return CompetenceEstimate(mean, float(np.sqrt(var / trials)), trials, seed)


def optimal_weights(
    skills: SkillsLike, clip: float = 1e-6, nonnegative: bool = False
) -> np.ndarray:
    """Log-odds weights ln(p / (1-p)), the competence-maximizing assignment.

    Skills are clamped to [clip, 1-clip] before taking logs so certain judges
    get large finite weights. A judge below 1/2 receives a negative weight
    (the rule bets against them); ``nonnegative=True`` clamps such skills to
    1/2 instead, zeroing their weight.
    """
    if not 0.0 < clip < 0.5:
        raise ValueError(f"clip must be in (0, 0.5), got {clip}")
    p = np.asarray(as_skills(skills).p, dtype=np.float64)
    lo = 0.5 if nonnegative else clip
    p = np.clip(p, lo, 1.0 - clip)
    return np.log(p / (1.0 - p))


@dataclass(frozen=True)
class TeamStructure:
    """A two-tier voting arrangement: teams vote internally, then across teams.

    ``teams`` lists the player indices of each team; a player may sit on
    several teams, but not twice on the same one. Member weights, team
    biases, and top-level weights default to the simple-majority choice
    (all ones, zero biases).
    """

    teams: tuple[tuple[int, ...], ...]
    member_weights: Optional[tuple[tuple[float, ...], ...]] = None
    team_biases: Optional[tuple[float, ...]] = None
    top_weights: Optional[tuple[float, ...]] = None
    top_bias: float = 0.0

    def __post_init__(self):
        teams = tuple(tuple(int(i) for i in team) for team in self.teams)
        if not teams:
            raise DimensionError("at least one team is required")
        for t, team in enumerate(teams):
            if not team:
                raise DimensionError(f"team {t} is empty")
            if len(set(team)) != len(team):
                raise ValueError(f"team {t} lists a player twice")
            if min(team) < 0:
                raise ValueError(f"team {t} has a negative player index")
        k = len(teams)
        mw = self.member_weights
        mw = tuple(tuple(1.0 for _ in team) for team in teams) if mw is None else tuple(
            tuple(float(x) for x in row) for row in mw
        )
        if tuple(len(r) for r in mw) != tuple(len(t) for t in teams):
            raise DimensionError("member_weights shape does not match teams")
        tb = (0.0,) * k if self.team_biases is None else tuple(float(x) for x in self.team_biases)
        tw = (1.0,) * k if self.top_weights is None else tuple(float(x) for x in self.top_weights)
        if len(tb) != k or len(tw) != k:
            raise DimensionError("team_biases and top_weights must have one entry per team")
        object.__setattr__(self, "teams", teams)
        object.__setattr__(self, "member_weights", mw)
        object.__setattr__(self, "team_biases", tb)
        object.__setattr__(self, "top_weights", tw)
        object.__setattr__(self, "top_bias", float(self.top_bias))

    @property
    def distinct_players(self) -> tuple[int, ...]:
        return tuple(sorted({i for team in self.teams for i in team}))


def indirect_competence(
    structure: TeamStructure, skills: SkillsLike, nd_policy: str = "incorrect"
) -> float:
    """Exact probability that the top-level vote over team outcomes is correct.

    Players appearing on several teams cast a single correct-or-not draw that
    all their teams see, so team outcomes are dependent; the computation
    enumerates the 2^d patterns of the d distinct players. Under the default
    policy a tied team casts an incorrect vote and a tied top level is an
    incorrect answer; under ``"coin-flip"`` tied teams flip independent fair
    coins (enumerated exactly) and a tied top level earns half credit.
    """
    nd = _nd_credit(nd_policy)
    p_all = np.asarray(as_skills(skills).p, dtype=np.float64)
    players = structure.distinct_players
    if players and players[-1] >= p_all.size:
        raise DimensionError(
            f"structure names player {players[-1]} but only {p_all.size} skills were given"
        )
    d = len(players)
    if d > INDIRECT_DISTINCT_MAX:
        raise CapacityError(
            f"indirect competence enumerates 2^d patterns over the d distinct players "
            f"and is capped at d={INDIRECT_DISTINCT_MAX}; got d={d}."
        )
    pos = {player: b for b, player in enumerate(players)}
    k = len(structure.teams)
    # per-team signed sums over every pattern of the distinct players
    team_w = np.zeros((k, d))
    for t, (team, wrow) in enumerate(zip(structure.teams, structure.member_weights)):
        for i, wi in zip(team, wrow):
            team_w[t, pos[i]] += wi
    sums = np.zeros((k, 1))
    probs = np.ones(1)
    for b in range(d):
        col = team_w[:, b : b + 1]
        sums = np.concatenate([sums - col, sums + col], axis=1)
        pb = p_all[players[b]]
        probs = np.concatenate([probs * (1.0 - pb), probs * pb])
    biases = np.asarray(structure.team_biases)[:, None]
    top_w = np.asarray(structure.top_weights)
    fixed = np.where(sums > biases, 1.0, -1.0)
    tied = sums == biases
    if nd == 0.0:
        top = top_w @ np.where(tied, -1.0, fixed)
        return float(probs[top > structure.top_bias].sum())
    # coin-flip: every team that can tie gets an independent fair coin,
    # enumerated exactly; a tied top level earns half credit
    coin_teams = np.nonzero(tied.any(axis=1))[0]
    kc = coin_teams.size
    if kc > 16:
        raise CapacityError(
            f"coin-flip stalemate handling enumerates 2^k coin patterns and is capped "
            f"at k=16 tieable teams; got k={kc}."
        )
    fixed = np.where(tied, 0.0, fixed)
    value = 0.0
    for assignment in range(1 << kc):
        coins = np.zeros(k)
        for j, t in enumerate(coin_teams):
            coins[t] = 1.0 if assignment >> j & 1 else -1.0
        u = fixed + tied * coins[:, None]
        top = top_w @ u
        credit = (top > structure.top_bias) + nd * (top == structure.top_bias)
        value += float(probs @ credit)
    return value / (1 << kc)
