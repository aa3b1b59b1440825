"""Positional scoring rules, pairwise majorities, and Condorcet efficiency.

Condorcet efficiency of a scoring rule is the probability, conditional on a
strict pairwise-majority winner existing, that the rule elects that winner
when every voter draws a ranking independently and uniformly (the impartial
culture). The exact routine enumerates profiles as ranking-count multisets
weighted by multinomial coefficients, entirely in integer arithmetic, and
returns the efficiency as a Fraction; the Monte Carlo routine samples whole
profiles in deterministic chunks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from ._rand import chunk_rng, chunk_sizes
from .errors import (
    BallotError,
    CapacityError,
    DimensionError,
    EvidenceError,
)
from .model import as_fraction

#: Exact efficiency enumerates up to (m!)^n_voters equally likely profiles
#: (collapsed into multisets); refuse beyond this many.
EFFICIENCY_EXACT_MAX = 10_000_000

_TIE_POLICIES = ("fail", "split-credit")


@dataclass(frozen=True)
class RankedBallot:
    """One voter's strict ranking, most preferred label first."""

    ranking: tuple[str, ...]

    def __post_init__(self):
        r = tuple(str(x) for x in self.ranking)
        if not r:
            raise BallotError("a ballot must rank at least one label")
        if len(set(r)) != len(r):
            raise BallotError(f"ballot repeats a label: {r}")
        object.__setattr__(self, "ranking", r)

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self.ranking)


@dataclass(frozen=True)
class ScoringVector:
    """Points awarded per rank position, held exactly as Fractions.

    Entries must be non-increasing and not all equal. The induced ranking is
    unchanged by positive affine rescaling of the entries.
    """

    s: tuple[Fraction, ...]

    def __post_init__(self):
        s = tuple(as_fraction(x) for x in self.s)
        if len(s) < 2:
            raise DimensionError("a scoring vector needs at least two positions")
        if any(a < b for a, b in zip(s, s[1:])):
            raise ValueError(f"scoring vector must be non-increasing: {s}")
        if s[0] == s[-1]:
            raise ValueError("scoring vector must not be constant")
        object.__setattr__(self, "s", s)

    @property
    def m(self) -> int:
        return len(self.s)

    @classmethod
    def borda(cls, m: int) -> "ScoringVector":
        return cls(tuple(Fraction(m - 1 - k) for k in range(m)))

    @classmethod
    def plurality(cls, m: int) -> "ScoringVector":
        return cls((Fraction(1),) + (Fraction(0),) * (m - 1))

    def integer_form(self) -> tuple[int, ...]:
        """The entries rescaled by their common denominator, for exact int totals."""
        scale = math.lcm(*(x.denominator for x in self.s))
        return tuple(int(x * scale) for x in self.s)


def _checked_profile(
    ballots: Sequence[RankedBallot], voter_weights
) -> tuple[tuple[str, ...], list[RankedBallot], np.ndarray]:
    bs = list(ballots)
    if not bs:
        raise BallotError("empty profile")
    label_set = bs[0].labels
    for b in bs:
        if b.labels != label_set:
            raise BallotError(
                f"ballots rank different label sets: {sorted(label_set)} vs {sorted(b.labels)}"
            )
    if voter_weights is None:
        w = np.ones(len(bs))
    else:
        w = np.asarray(list(voter_weights), dtype=np.float64)
        if w.size != len(bs):
            raise DimensionError(f"{w.size} voter weights for {len(bs)} ballots")
        if (w < 0).any():
            raise ValueError("voter weights must be non-negative")
    return tuple(sorted(label_set)), bs, w


@dataclass(frozen=True)
class ScoreResult:
    """Scoring-rule totals with the lexicographic tie-break already applied."""

    labels: tuple[str, ...]
    totals: dict[str, float]
    ranking: tuple[str, ...]
    tied_top: bool

    @property
    def winner(self) -> str:
        return self.ranking[0]


def score_profile(
    ballots: Sequence[RankedBallot],
    scoring: ScoringVector,
    voter_weights: Optional[Sequence[float]] = None,
) -> ScoreResult:
    """Apply a positional scoring rule to a profile of ranked ballots.

    Ties anywhere in the ranking are broken label-lexicographically;
    ``tied_top`` reports whether the winning score was shared.
    """
    labels, bs, w = _checked_profile(ballots, voter_weights)
    if scoring.m != len(labels):
        raise DimensionError(
            f"scoring vector has {scoring.m} positions for {len(labels)} labels"
        )
    points = [float(x) for x in scoring.s]
    totals = {lab: 0.0 for lab in labels}
    for b, wv in zip(bs, w.tolist()):
        for pos, lab in enumerate(b.ranking):
            totals[lab] += wv * points[pos]
    ranking = tuple(sorted(labels, key=lambda lab: (-totals[lab], lab)))
    top = totals[ranking[0]]
    tied_top = len([lab for lab in labels if totals[lab] == top]) > 1
    return ScoreResult(labels, totals, ranking, tied_top)


@dataclass(frozen=True)
class PairwiseResult:
    """Entry (i, j) is the total voter weight preferring labels[i] to labels[j]."""

    labels: tuple[str, ...]
    matrix: np.ndarray


def pairwise_matrix(
    ballots: Sequence[RankedBallot],
    voter_weights: Optional[Sequence[float]] = None,
) -> PairwiseResult:
    labels, bs, w = _checked_profile(ballots, voter_weights)
    index = {lab: i for i, lab in enumerate(labels)}
    m = len(labels)
    matrix = np.zeros((m, m))
    for b, wv in zip(bs, w):
        order = [index[lab] for lab in b.ranking]
        for hi in range(m):
            for lo in range(hi + 1, m):
                matrix[order[hi], order[lo]] += wv
    return PairwiseResult(labels, matrix)


def condorcet_winner(
    ballots: Sequence[RankedBallot],
    voter_weights: Optional[Sequence[float]] = None,
) -> Optional[str]:
    """The label beating every other in strict pairwise majority, if one exists."""
    pw = pairwise_matrix(ballots, voter_weights)
    m = len(pw.labels)
    for i in range(m):
        if all(pw.matrix[i, j] > pw.matrix[j, i] for j in range(m) if j != i):
            return pw.labels[i]
    return None


@dataclass(frozen=True)
class EfficiencyResult:
    """Condorcet efficiency, exact or estimated.

    ``profiles_with_winner`` counts profiles having a pairwise-majority
    winner: out of (m!)^n for the exact method, out of ``trials`` for Monte
    Carlo. ``exact`` carries the Fraction for the exact method; ``stderr``
    and ``ci95`` are conditional on a winner existing, for Monte Carlo.
    """

    value: float
    method: str
    tie_policy: str
    exact: Optional[Fraction] = None
    profiles_with_winner: int = 0
    stderr: Optional[float] = None
    ci95: Optional[tuple[float, float]] = None
    trials: Optional[int] = None
    seed: Optional[int] = None


def _ranking_tables(m: int, scoring: ScoringVector) -> tuple[np.ndarray, np.ndarray]:
    """Per-ranking integer score rows and upper-pair preference tensors."""
    rankings = list(permutations(range(m)))
    s_int = scoring.integer_form()
    score_rows = np.zeros((len(rankings), m), dtype=np.int64)
    pair_rows = np.zeros((len(rankings), m, m), dtype=np.int64)
    for r, perm in enumerate(rankings):
        for pos, cand in enumerate(perm):
            score_rows[r, cand] = s_int[pos]
        for hi in range(m):
            for lo in range(hi + 1, m):
                pair_rows[r, perm[hi], perm[lo]] = 1
    return score_rows, pair_rows


def _leaf_credit(
    totals: np.ndarray, pairs: np.ndarray, n: int, m: int, tie_policy: str
) -> tuple[bool, Fraction]:
    """Whether the profile has a pairwise winner, and the scoring rule's credit."""
    cw = -1
    for a in range(m):
        if all(2 * pairs[a, b] > n for b in range(m) if b != a):
            cw = a
            break
    if cw < 0:
        return False, Fraction(0)
    top = totals.max()
    tied = np.nonzero(totals == top)[0]
    if tie_policy == "fail":
        hit = tied.size == 1 and tied[0] == cw
        return True, Fraction(1) if hit else Fraction(0)
    if cw in tied:
        return True, Fraction(1, tied.size)
    return True, Fraction(0)


def _efficiency_exact(
    scoring: ScoringVector, m: int, n_voters: int, tie_policy: str
) -> EfficiencyResult:
    score_rows, pair_rows = _ranking_tables(m, scoring)
    r_count = score_rows.shape[0]
    hits = Fraction(0)
    with_winner = 0

    def descend(r: int, remaining: int, coeff: int, totals: np.ndarray, pairs: np.ndarray):
        nonlocal hits, with_winner
        if r == r_count - 1:
            leaf_totals = totals + remaining * score_rows[r]
            leaf_pairs = pairs + remaining * pair_rows[r]
            has_cw, credit = _leaf_credit(leaf_totals, leaf_pairs, n_voters, m, tie_policy)
            if has_cw:
                with_winner += coeff
                hits += coeff * credit
            return
        for c in range(remaining + 1):
            descend(
                r + 1,
                remaining - c,
                coeff * math.comb(remaining, c),
                totals + c * score_rows[r],
                pairs + c * pair_rows[r],
            )

    descend(0, n_voters, 1, np.zeros(m, dtype=np.int64), np.zeros((m, m), dtype=np.int64))
    if with_winner == 0:
        raise EvidenceError("no profile has a pairwise-majority winner")
    exact = hits / with_winner
    return EfficiencyResult(
        value=float(exact),
        method="exact",
        tie_policy=tie_policy,
        exact=exact,
        profiles_with_winner=with_winner,
    )


def _efficiency_mc(
    scoring: ScoringVector, m: int, n_voters: int, tie_policy: str, trials: int, seed: int
) -> EfficiencyResult:
    score_rows, pair_rows = _ranking_tables(m, scoring)
    r_count = score_rows.shape[0]
    with_winner = 0
    credit_sum = 0.0
    credit_sq = 0.0
    for chunk_index, size in enumerate(chunk_sizes(trials)):
        rng = chunk_rng(seed, chunk_index)
        draws = rng.integers(0, r_count, size=(size, n_voters))
        totals = score_rows[draws].sum(axis=1)
        pairs = pair_rows[draws].sum(axis=1)
        beats = 2 * pairs > n_voters
        is_cw = beats.sum(axis=2) == m - 1  # row a beats all others
        has_cw = is_cw.any(axis=1)
        cw = np.argmax(is_cw, axis=1)
        top = totals.max(axis=1, keepdims=True)
        at_top = totals == top
        tied_count = at_top.sum(axis=1)
        cw_at_top = np.take_along_axis(at_top, cw[:, None], axis=1)[:, 0]
        if tie_policy == "fail":
            credit = (cw_at_top & (tied_count == 1)).astype(np.float64)
        else:
            credit = np.where(cw_at_top, 1.0 / tied_count, 0.0)
        credit = np.where(has_cw, credit, 0.0)
        with_winner += int(has_cw.sum())
        credit_sum += float(credit.sum())
        credit_sq += float((credit * credit).sum())
    if with_winner == 0:
        raise EvidenceError("no sampled profile had a pairwise-majority winner")
    value = credit_sum / with_winner
    var = max(credit_sq / with_winner - value * value, 0.0)
    var *= with_winner / max(with_winner - 1, 1)
    stderr = math.sqrt(var / with_winner)
    return EfficiencyResult(
        value=value,
        method="monte-carlo",
        tie_policy=tie_policy,
        profiles_with_winner=with_winner,
        stderr=stderr,
        ci95=(value - 1.96 * stderr, value + 1.96 * stderr),
        trials=trials,
        seed=seed,
    )


def condorcet_efficiency(
    scoring: ScoringVector,
    m: int,
    n_voters: int,
    method: str = "exact",
    tie_policy: str = "fail",
    trials: int = 100_000,
    seed: int = 0,
) -> EfficiencyResult:
    """Probability the scoring rule elects the pairwise-majority winner.

    Voters draw rankings of m candidates independently and uniformly; the
    result conditions on profiles where a strict pairwise winner exists.
    Under ``tie_policy="fail"`` a shared top score never counts as electing
    the winner; ``"split-credit"`` awards 1/k when the winner is among k
    tied leaders.
    """
    if m < 2:
        raise DimensionError("at least two candidates are required")
    if n_voters < 1:
        raise DimensionError("at least one voter is required")
    if scoring.m != m:
        raise DimensionError(f"scoring vector has {scoring.m} positions for m={m}")
    if tie_policy not in _TIE_POLICIES:
        raise ValueError(f"tie_policy must be one of {_TIE_POLICIES}, got {tie_policy!r}")
    if method == "exact":
        if math.factorial(m) ** n_voters > EFFICIENCY_EXACT_MAX:
            raise CapacityError(
                f"exact efficiency covers (m!)^n_voters profiles, capped at "
                f"{EFFICIENCY_EXACT_MAX:.0e}; got ({m}!)^{n_voters}. "
                f"Use method='monte-carlo' instead."
            )
        return _efficiency_exact(scoring, m, n_voters, tie_policy)
    if method == "monte-carlo":
        return _efficiency_mc(scoring, m, n_voters, tie_policy, trials, seed)
    raise ValueError(f"method must be 'exact' or 'monte-carlo', got {method!r}")
