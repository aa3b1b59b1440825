"""Voting power, weighted majority rules, jury competence, classifier fusion.

The package connects three views of the same mathematical object, a weighted
majority vote: cooperative power indices over coalitions (:mod:`.power`),
explicit decision rules over vote profiles (:mod:`.wmr`), and the probability
that the group answer is correct when voters are noisy experts (:mod:`.jury`).
:mod:`.scoring` treats multi-candidate elections and Condorcet efficiency;
:mod:`.fusion` applies the machinery to combining classifier outputs.
"""

from .errors import (
    BallotError,
    CapacityError,
    ConfigurationWarning,
    DataError,
    DimensionError,
    EvidenceError,
    InvalidCoalitionError,
    ParseError,
    VotefuseError,
)
from .fusion import (
    ClassifierOutput,
    ConfusionMatrix,
    CostMatrix,
    PredictionSet,
    ValidationIndex,
    binary_accuracies,
    confidence_transform,
    confusion_from_predictions,
    expected_risk,
    fuse_adaptive_wmr,
    fuse_dataset,
    fuse_fixed,
    fuse_wmr,
    fuse_wmr_one_vs_rest,
    local_skill,
)
from .jury import (
    TeamStructure,
    competence_monte_carlo,
    decisiveness_probability,
    group_competence,
    indirect_competence,
    optimal_weights,
)
from .model import (
    Coalition,
    DecisionProfile,
    SkillProfile,
    VotingGame,
    coalition_weight,
    is_winning,
)
from .power import (
    PowerReport,
    banzhaf_exact,
    power_monte_carlo,
    shapley_shubik_exact,
)
from .scoring import (
    EfficiencyResult,
    RankedBallot,
    ScoringVector,
    condorcet_efficiency,
    condorcet_winner,
    pairwise_matrix,
    score_profile,
)
from .wmr import (
    CanonicalWMR,
    DecisionRule,
    TradeRobustness,
    WinningFamily,
    enumerate_unique_wmr,
    enumeration_is_bound_stable,
    is_trade_robust,
    nearest_simple_rule,
    rule_from_game,
    rules_equivalent,
    wmr_network,
)

__version__ = "0.1.0"

__all__ = [
    "BallotError",
    "CanonicalWMR",
    "CapacityError",
    "ClassifierOutput",
    "Coalition",
    "ConfigurationWarning",
    "ConfusionMatrix",
    "CostMatrix",
    "DataError",
    "DecisionProfile",
    "DecisionRule",
    "DimensionError",
    "EfficiencyResult",
    "EvidenceError",
    "InvalidCoalitionError",
    "ParseError",
    "PowerReport",
    "PredictionSet",
    "RankedBallot",
    "ScoringVector",
    "SkillProfile",
    "TeamStructure",
    "TradeRobustness",
    "ValidationIndex",
    "VotefuseError",
    "VotingGame",
    "WinningFamily",
    "banzhaf_exact",
    "binary_accuracies",
    "coalition_weight",
    "competence_monte_carlo",
    "condorcet_efficiency",
    "condorcet_winner",
    "confidence_transform",
    "confusion_from_predictions",
    "decisiveness_probability",
    "enumerate_unique_wmr",
    "enumeration_is_bound_stable",
    "expected_risk",
    "fuse_adaptive_wmr",
    "fuse_dataset",
    "fuse_fixed",
    "fuse_wmr",
    "fuse_wmr_one_vs_rest",
    "group_competence",
    "indirect_competence",
    "is_trade_robust",
    "is_winning",
    "local_skill",
    "nearest_simple_rule",
    "optimal_weights",
    "pairwise_matrix",
    "power_monte_carlo",
    "rule_from_game",
    "rules_equivalent",
    "score_profile",
    "shapley_shubik_exact",
    "wmr_network",
]
