"""Weighted majority rules as explicit decision functions.

A rule is represented extensionally: a table with one entry per vote profile,
holding +1 (alternative A wins), -1 (B wins), or 0 (no decision). Two
weight/bias presentations induce the same rule exactly when their tables are
equal, which turns questions like "how many distinct decisive rules exist for
n voters?" into plain table deduplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Optional, Sequence, Union

import numpy as np

from .errors import CapacityError, DimensionError
from .model import (
    Coalition,
    DecisionProfile,
    VotingGame,
    _coerce_coalition,
    as_fraction,
    integer_form,
)

OUTCOME_A = 1
OUTCOME_B = -1
OUTCOME_ND = 0

#: Table construction materializes 2^n entries.
RULE_TABLE_MAX = 24

#: Enumeration of all distinct decisive rules is only tractable for small n;
#: these search bounds are the smallest that make the counts stable under
#: raising the bound by one.
DEFAULT_MAX_WEIGHT = {1: 1, 2: 1, 3: 2, 4: 2, 5: 3, 6: 5, 7: 9}

TRADE_ROBUST_MAX = 12


def _sign_matrix(n: int) -> np.ndarray:
    """(2^n, n) matrix of votes: row m, column i holds +1 iff bit i of m is set."""
    bits = (np.arange(1 << n, dtype=np.int64)[:, None] >> np.arange(n)) & 1
    return (2 * bits - 1).astype(np.int64)


class DecisionRule:
    """A rule over n binary votes, given by its full outcome table.

    ``table[m]`` is the outcome for the profile whose index is ``m`` (player i
    votes for A exactly when bit i of m is set): +1 for A, -1 for B, 0 for no
    decision.
    """

    __slots__ = ("n", "table")

    def __init__(self, n: int, table):
        t = np.asarray(table, dtype=np.int8).copy()
        if t.shape != (1 << n,):
            raise DimensionError(f"table must have 2^{n} = {1 << n} entries, got {t.shape}")
        if not np.isin(t, (-1, 0, 1)).all():
            raise ValueError("table entries must be -1, 0, or +1")
        t.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "table", t)

    def evaluate(self, profile: Union[DecisionProfile, int]) -> int:
        if isinstance(profile, DecisionProfile):
            if profile.n != self.n:
                raise DimensionError(f"profile has {profile.n} votes, rule expects {self.n}")
            m = profile.index
        else:
            m = int(profile)
        if not 0 <= m < 1 << self.n:
            raise ValueError(f"profile index {m} out of range for n={self.n}")
        return int(self.table[m])

    def is_decisive(self) -> bool:
        """True iff the rule never returns the no-decision outcome."""
        return not bool((self.table == 0).any())

    def is_monotone(self) -> bool:
        """True iff flipping any single vote from B to A never moves the outcome toward B."""
        for i in range(self.n):
            half = 1 << i
            paired = self.table.reshape(-1, 2 * half)
            if not (paired[:, half:] >= paired[:, :half]).all():
                return False
        return True

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DecisionRule)
            and self.n == other.n
            and np.array_equal(self.table, other.table)
        )

    __hash__ = None  # type: ignore[assignment]

    def __setattr__(self, name, value):
        raise AttributeError("DecisionRule is immutable")

    def __repr__(self) -> str:
        if self.n <= 6:
            body = "".join({1: "A", -1: "B", 0: "."}[int(v)] for v in self.table)
            return f"DecisionRule(n={self.n}, table={body})"
        return f"DecisionRule(n={self.n}, 2^{self.n} entries)"


def rule_from_game(game: VotingGame, bias=0) -> DecisionRule:
    """The decision rule induced by weighted voting with a bias toward B.

    The signed weight sum S = sum_i w_i v_i (votes v_i in {+1, -1}) is
    compared against the bias: S > bias elects A, S < bias elects B, and
    S = bias is no decision. All comparisons are exact; weights, and the
    bias, may be rational.
    """
    n = game.n
    if n > RULE_TABLE_MAX:
        raise CapacityError(
            f"a rule table holds 2^n outcomes and is capped at n={RULE_TABLE_MAX}; got n={n}"
        )
    b = as_fraction(bias)
    if abs(b) > game.total_weight:
        raise ValueError(f"bias {b} exceeds the total weight {game.total_weight}")
    # rescale so weights and bias are integers, then S - bias is exact int64
    scaled = VotingGame(game.weights + (abs(b),), quota=0)
    ws_all, _ = integer_form(scaled)
    ws, b_scaled = ws_all[:-1], int(np.sign(float(b))) * int(ws_all[-1])
    s = _sign_matrix(n) @ ws
    return DecisionRule(n, np.sign(s - b_scaled).astype(np.int8))


def _rule_table_int(weights: Sequence[int]) -> np.ndarray:
    s = _sign_matrix(len(weights)) @ np.asarray(weights, dtype=np.int64)
    return np.sign(s).astype(np.int8)


def rule_distance(a: "RuleLike", b: "RuleLike") -> int:
    """Number of vote profiles on which two rules disagree."""
    ra, rb = _coerce_rule(a), _coerce_rule(b)
    if ra.n != rb.n:
        raise DimensionError(f"rules are over different voter counts: {ra.n} vs {rb.n}")
    return int(np.count_nonzero(ra.table != rb.table))


def rules_equivalent(a: "RuleLike", b: "RuleLike") -> bool:
    """True iff the two rules decide every profile identically."""
    return rule_distance(a, b) == 0


@dataclass(frozen=True)
class CanonicalWMR:
    """A decisive weighted majority rule named by its canonical integer weights.

    The canonical representative is the first weight vector reaching the
    rule's table in the enumeration order: non-increasing integer vectors,
    odd total weight before even, lexicographic within each parity class.
    """

    weights: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.weights)

    def rule(self) -> DecisionRule:
        return DecisionRule(self.n, _rule_table_int(self.weights))


RuleLike = Union[DecisionRule, CanonicalWMR]


def _coerce_rule(r: RuleLike) -> DecisionRule:
    return r.rule() if isinstance(r, CanonicalWMR) else r


def enumerate_unique_wmr(n: int, max_weight: Optional[int] = None) -> list[CanonicalWMR]:
    """All distinct decisive weighted majority rules on n voters.

    Scans every non-increasing integer weight vector with entries up to
    ``max_weight``, discards vectors whose rule can tie (only odd total
    weights survive), and deduplicates by decision table. The default bound
    per n is the smallest one whose rule count does not change when the bound
    is raised; see :func:`enumeration_is_bound_stable` to re-check this for a
    custom bound.

    The result is sorted by weight vector. Up to symmetry (rules for the
    remaining orderings follow by permuting players), this is the complete
    list of decisive weighted rules for n <= 7.
    """
    if not 1 <= n <= 7:
        raise CapacityError(
            f"exhaustive rule enumeration is capped at n=7 (got n={n}); "
            f"weight vectors beyond that are out of reach of a full scan"
        )
    mw = DEFAULT_MAX_WEIGHT[n] if max_weight is None else int(max_weight)
    if mw < 1:
        raise ValueError("max_weight must be >= 1")
    vectors = sorted(
        combinations_with_replacement(range(mw, -1, -1), n),
        key=lambda v: (sum(v) % 2 == 0, v),
    )
    signs = _sign_matrix(n)
    tables = np.sign(signs @ np.array(vectors, dtype=np.int64).T).astype(np.int8)
    decisive = ~(tables == 0).any(axis=0)
    seen: dict[bytes, tuple[int, ...]] = {}
    for j, vec in enumerate(vectors):
        if not decisive[j]:
            continue
        key = tables[:, j].tobytes()
        if key not in seen:
            seen[key] = vec
    return [CanonicalWMR(w) for w in sorted(seen.values())]


def enumeration_is_bound_stable(n: int, max_weight: Optional[int] = None) -> bool:
    """True iff raising the enumeration weight bound by one finds no new rules."""
    mw = DEFAULT_MAX_WEIGHT[n] if max_weight is None else int(max_weight)
    return len(enumerate_unique_wmr(n, mw)) == len(enumerate_unique_wmr(n, mw + 1))


def wmr_network(rules: Sequence[RuleLike]) -> np.ndarray:
    """Pairwise disagreement counts between rules, as a symmetric matrix.

    Entry (i, j) is the number of vote profiles on which rule i and rule j
    decide differently; the diagonal is zero.
    """
    coerced = [_coerce_rule(r) for r in rules]
    if not coerced:
        return np.zeros((0, 0), dtype=np.int64)
    n = coerced[0].n
    if any(r.n != n for r in coerced):
        raise DimensionError("all rules in a network must share the same voter count")
    stack = np.stack([r.table for r in coerced])
    diff = stack[:, None, :] != stack[None, :, :]
    return diff.sum(axis=2).astype(np.int64)


@dataclass(frozen=True)
class NearestRuleResult:
    candidate: CanonicalWMR
    disagreements: int
    competence: float


def nearest_simple_rule(
    target_weights: Sequence[float],
    candidates: Optional[Sequence[CanonicalWMR]] = None,
    skills=None,
    bias: float = 0.0,
) -> NearestRuleResult:
    """The candidate rule disagreeing with a real-weighted rule on fewest profiles.

    The target rule uses the given real weights (which may be negative, e.g.
    log-odds of a poor judge) with the given bias. Ties in disagreement count
    are broken by higher group competence under ``skills``; if no skills are
    given, by candidate order. ``candidates`` defaults to all distinct
    decisive rules for the target's voter count.
    """
    from .jury import group_competence

    w = np.asarray(list(target_weights), dtype=np.float64)
    n = w.size
    if candidates is None:
        candidates = enumerate_unique_wmr(n)
    cands = list(candidates)
    if not cands:
        raise ValueError("candidate list is empty")
    if any(c.n != n for c in cands):
        raise DimensionError("candidate rules must match the target's voter count")
    target_table = np.sign(_sign_matrix(n).astype(np.float64) @ w - float(bias)).astype(np.int8)
    target = DecisionRule(n, target_table)
    best = None
    for cand in cands:
        d = rule_distance(target, cand)
        comp = group_competence(cand.weights, 0.0, skills) if skills is not None else 0.0
        key = (d, -comp)
        if best is None or key < best[0]:
            best = (key, cand, d, comp)
    _, cand, d, comp = best
    return NearestRuleResult(cand, d, comp)


@dataclass(frozen=True)
class WinningFamily:
    """A monotone simple game given extensionally by its winning coalitions.

    ``winning`` holds bit masks. Families must be closed upward: every
    superset of a winning coalition wins. Use :meth:`from_minimal` to build
    the closure from a list of minimal winning coalitions, or
    :meth:`from_game` to extract the family of a weighted game.
    """

    n: int
    winning: frozenset[int]

    def __post_init__(self):
        if not 1 <= self.n <= TRADE_ROBUST_MAX:
            raise CapacityError(
                f"explicit winning families are capped at n={TRADE_ROBUST_MAX}; got n={self.n}"
            )
        full = (1 << self.n) - 1
        for m in self.winning:
            if m & ~full:
                raise ValueError(f"winning mask {m} has members outside 0..{self.n - 1}")
            for i in range(self.n):
                if not m >> i & 1 and (m | 1 << i) not in self.winning:
                    raise ValueError("family is not monotone: a superset of a winning coalition loses")

    @classmethod
    def from_minimal(cls, n: int, coalitions) -> "WinningFamily":
        seeds = []
        for c in coalitions:
            seeds.append(c.mask if isinstance(c, Coalition) else Coalition(c).mask)
        winning = {m for m in range(1 << n) if any(m & s == s for s in seeds)}
        return cls(n, frozenset(winning))

    @classmethod
    def from_game(cls, game: VotingGame) -> "WinningFamily":
        if game.n > TRADE_ROBUST_MAX:
            raise CapacityError(
                f"explicit winning families are capped at n={TRADE_ROBUST_MAX}; got n={game.n}"
            )
        ws, quota = integer_form(game)
        member = (np.arange(1 << game.n, dtype=np.int64)[:, None] >> np.arange(game.n)) & 1
        sums = member @ ws
        winning = frozenset(int(m) for m in np.nonzero(sums > quota)[0])
        return cls(game.n, winning)

    def is_winning(self, coalition) -> bool:
        mask = coalition if isinstance(coalition, int) else _coerce_coalition(coalition).mask
        return mask in self.winning

    def minimal_winning(self) -> list[int]:
        out = []
        for m in sorted(self.winning):
            if all(not m >> i & 1 or (m & ~(1 << i)) not in self.winning for i in range(self.n)):
                out.append(m)
        return out


@dataclass(frozen=True)
class TradeWitness:
    """A trade sequence turning two winning coalitions into two losing ones.

    Each trade ``(x, y)`` moves player x from the first coalition to the
    second and player y the other way; coalition sizes are preserved.
    """

    start: tuple[Coalition, Coalition]
    trades: tuple[tuple[int, int], ...]
    end: tuple[Coalition, Coalition]


@dataclass(frozen=True)
class TradeRobustness:
    robust: bool
    witness: Optional[TradeWitness] = None


def is_trade_robust(
    game: Union[VotingGame, WinningFamily], trade_size_cap: int = 3
) -> TradeRobustness:
    """Search for a pair of winning coalitions that member trades turn losing.

    Starting from every pair of minimal winning coalitions, a breadth-first
    search applies up to ``trade_size_cap`` single-member swaps and reports the
    first pair found where both coalitions lose, together with the trade
    sequence. Weighted games can never yield a witness (each swap conserves
    the combined weight, so both coalitions cannot drop to the losing side),
    and the search confirms this; a returned witness is always verified
    against the family before being reported.

    The search is bounded: only pair trades from minimal winning starting
    points are explored, so ``robust=True`` means no witness exists within
    those bounds.
    """
    family = WinningFamily.from_game(game) if isinstance(game, VotingGame) else game
    if trade_size_cap < 1:
        raise ValueError("trade_size_cap must be >= 1")
    mins = family.minimal_winning()
    frontier: list[tuple[int, int]] = []
    parents: dict[frozenset[int] | tuple[int, int], object] = {}
    for ai in range(len(mins)):
        for bi in range(ai + 1, len(mins)):
            state = (mins[ai], mins[bi])
            key = frozenset(state)
            if key not in parents:
                parents[key] = (None, None, state)
                frontier.append(state)
    for _depth in range(trade_size_cap):
        next_frontier: list[tuple[int, int]] = []
        for a, b in frontier:
            only_a = a & ~b
            only_b = b & ~a
            for x in _bits(only_a):
                for y in _bits(only_b):
                    na = a & ~(1 << x) | 1 << y
                    nb = b & ~(1 << y) | 1 << x
                    key = frozenset((na, nb))
                    if key in parents:
                        continue
                    parents[key] = ((a, b), (x, y), (na, nb))
                    if not family.is_winning(na) and not family.is_winning(nb):
                        return TradeRobustness(False, _reconstruct(parents, (na, nb), family))
                    next_frontier.append((na, nb))
        frontier = next_frontier
    return TradeRobustness(True, None)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _reconstruct(parents, end_state, family: WinningFamily) -> TradeWitness:
    trades = []
    state = end_state
    while True:
        prev, trade, ordered = parents[frozenset(state)]
        if prev is None:
            start = ordered
            break
        trades.append(trade)
        state = prev
    trades.reverse()
    end = end_state
    assert not family.is_winning(end[0]) and not family.is_winning(end[1])
    return TradeWitness(
        (Coalition.from_mask(start[0]), Coalition.from_mask(start[1])),
        tuple(trades),
        (Coalition.from_mask(end[0]), Coalition.from_mask(end[1])),
    )
