"""Command-line front end.

Every subcommand writes one CSV report: ``#`` comment lines carrying the
command, the seed (always echoed, used or not), and key parameters, then a
header row and data rows. Output is deterministic byte for byte under the
default ``--reproducible`` flag, which suppresses the version and timestamp
comments. Exit codes: 0 success, 2 usage, 3 bad input data, 4 an exact
computation over its capacity cap.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .errors import CapacityError, EvidenceError, VotefuseError
from .fusion import (
    FIXED_RULES,
    ConfusionMatrix,
    confusion_from_predictions,
    expected_risk,
)
from .io import (
    Report,
    load_cost_matrix,
    load_game,
    load_predictions,
    load_team_structure,
)
from .jury import (
    competence_monte_carlo,
    decisiveness_probability,
    group_competence,
    indirect_competence,
    optimal_weights,
)
from .power import banzhaf_exact, power_monte_carlo, shapley_shubik_exact
from .scoring import ScoringVector, condorcet_efficiency
from .wmr import DEFAULT_MAX_WEIGHT, enumerate_unique_wmr, enumeration_is_bound_stable

USAGE_EXIT = 2
DATA_EXIT = 3
CAPACITY_EXIT = 4


def _float_list(text: str) -> list[float]:
    parts = [p for chunk in text.split(",") for p in chunk.split()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a comma- or space-separated list of numbers")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="random seed (echoed in the report)")
    sub.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")
    sub.add_argument(
        "--reproducible",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="omit version/timestamp comments so equal inputs give equal bytes",
    )


def _comments(args, command: str, extra: list[str]) -> list[str]:
    lines = [f"command={command}", f"seed={args.seed}"] + extra
    if not args.reproducible:
        lines.append(f"version={__version__}")
        lines.append(f"generated={datetime.now(timezone.utc).isoformat()}")
    return lines


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _cmd_power(args) -> str:
    game = load_game(args.game)
    kinds = ("banzhaf", "shapley") if args.kind == "both" else (args.kind,)
    extra = [f"game={Path(args.game).name}", f"method={args.method}"]
    if args.method == "monte-carlo":
        extra.append(f"trials={args.trials}")
    rows = []
    for kind in kinds:
        if args.method == "exact":
            rep = banzhaf_exact(game) if kind == "banzhaf" else shapley_shubik_exact(game)
        else:
            rep = power_monte_carlo(game, kind, trials=args.trials, seed=args.seed)
        for i in range(game.n):
            rows.append(
                (
                    kind,
                    str(i),
                    _fmt(rep.raw[i]),
                    repr(rep.normalized[i]),
                    "" if rep.stderr is None else repr(rep.stderr[i]),
                )
            )
    report = Report(
        tuple(_comments(args, "power", extra)),
        ("kind", "player", "raw", "normalized", "stderr"),
        tuple(rows),
    )
    return report.to_text()


def _cmd_wmr_enum(args) -> str:
    rules = enumerate_unique_wmr(args.n, args.max_weight)
    stable = enumeration_is_bound_stable(args.n, args.max_weight)
    bound = DEFAULT_MAX_WEIGHT[args.n] if args.max_weight is None else args.max_weight
    extra = [
        f"n={args.n}",
        f"max_weight={bound}",
        f"count={len(rules)}",
        f"bound_stable={'true' if stable else 'false'}",
    ]
    rows = []
    for c in rules:
        table = "".join("A" if v == 1 else "B" for v in c.rule().table)
        rows.append((" ".join(map(str, c.weights)), table))
    report = Report(
        tuple(_comments(args, "wmr enum", extra)), ("weights", "table"), tuple(rows)
    )
    return report.to_text()


def _cmd_jury(args) -> str:
    skills = args.skills
    n = len(skills)
    weights = args.weights if args.weights is not None else [1.0] * n
    extra = [
        f"n={n}",
        f"bias={_fmt(args.bias)}",
        f"nd_policy={args.nd_policy}",
        f"method={args.method}",
    ]
    if args.method == "monte-carlo":
        extra.append(f"trials={args.trials}")
    rows = []
    if args.method == "exact":
        comp = group_competence(weights, args.bias, skills, nd_policy=args.nd_policy)
        rows.append(("competence", "", repr(comp), ""))
        for i in range(n):
            d = decisiveness_probability(weights, args.bias, skills, i, nd_policy=args.nd_policy)
            rows.append(("decisiveness", str(i), repr(d), ""))
    else:
        est = competence_monte_carlo(
            weights, args.bias, skills, trials=args.trials, seed=args.seed,
            nd_policy=args.nd_policy,
        )
        rows.append(("competence", "", repr(est.value), repr(est.stderr)))
    for i, w in enumerate(optimal_weights(skills, clip=args.clip)):
        rows.append(("optimal_weight", str(i), repr(float(w)), ""))
    if args.teams:
        structure = load_team_structure(args.teams)
        ind = indirect_competence(structure, skills, nd_policy=args.nd_policy)
        rows.append(("indirect_competence", "", repr(ind), ""))
    report = Report(
        tuple(_comments(args, "jury", extra)),
        ("metric", "player", "value", "stderr"),
        tuple(rows),
    )
    return report.to_text()


def _scoring_vector(text: str, m: int) -> ScoringVector:
    if text == "borda":
        return ScoringVector.borda(m)
    if text == "plurality":
        return ScoringVector.plurality(m)
    return ScoringVector(tuple(_float_list(text)))


def _cmd_efficiency(args) -> str:
    scoring = _scoring_vector(args.scoring, args.candidates)
    res = condorcet_efficiency(
        scoring,
        args.candidates,
        args.voters,
        method=args.method,
        tie_policy=args.tie_policy,
        trials=args.trials,
        seed=args.seed,
    )
    extra = [
        f"candidates={args.candidates}",
        f"voters={args.voters}",
        f"scoring={args.scoring}",
        f"tie_policy={args.tie_policy}",
        f"method={args.method}",
    ]
    if args.method == "monte-carlo":
        extra.append(f"trials={args.trials}")
    row = (
        repr(res.value),
        "" if res.exact is None else str(res.exact),
        str(res.profiles_with_winner),
        "" if res.stderr is None else repr(res.stderr),
        "" if res.ci95 is None else repr(res.ci95[0]),
        "" if res.ci95 is None else repr(res.ci95[1]),
        "" if res.trials is None else str(res.trials),
        res.method,
    )
    report = Report(
        tuple(_comments(args, "efficiency", extra)),
        ("value", "exact", "profiles_with_winner", "stderr", "ci_low", "ci_high", "trials", "method"),
        (row,),
    )
    return report.to_text()


def _fused_confusion(pred, decisions) -> Optional[ConfusionMatrix]:
    """Confusion of fused decisions over samples that are labelled and decided."""
    index = {lab: i for i, lab in enumerate(pred.labels)}
    m = len(pred.labels)
    counts = np.zeros((m, m), dtype=np.int64)
    for i in pred.labelled_indices():
        if decisions[i] is None:
            continue
        counts[index[pred.true_labels[i]], index[decisions[i]]] += 1
    if counts.sum() == 0:
        return None
    return ConfusionMatrix(pred.labels, counts)


def _fuse_decisions(pred, validation, rule, args) -> list:
    from .fusion import fuse_dataset

    return fuse_dataset(
        pred,
        rule,
        validation=validation,
        classifier_weights=args.weights if rule in ("sum", "majority") else None,
        trim=args.trim,
        k=args.k,
        bias=args.bias,
        clip=args.clip,
    )


def _cmd_fuse(args) -> str:
    pred = load_predictions(args.predictions)
    validation = load_predictions(args.validation) if args.validation else None
    decisions = _fuse_decisions(pred, validation, args.rule, args)
    extra = [
        f"predictions={Path(args.predictions).name}",
        f"rule={args.rule}",
        f"k={args.k}" if args.rule == "adaptive-wmr" else f"trim={_fmt(args.trim)}",
    ]
    labelled = pred.labelled_indices()
    if labelled:
        hits = sum(1 for i in labelled if decisions[i] == pred.true_labels[i])
        extra.append(f"fused_accuracy={hits / len(labelled)!r}")
        undecided = sum(1 for i in labelled if decisions[i] is None)
        if undecided:
            extra.append(f"undecided={undecided}")
    if args.cost:
        cost = load_cost_matrix(args.cost)
        cm = _fused_confusion(pred, decisions)
        if cm is None:
            raise EvidenceError("cannot score risk: no labelled, decided samples")
        extra.append(f"expected_risk={expected_risk(cm, cost)!r}")
    rows = [
        (sid, "ND" if d is None else d) for sid, d in zip(pred.sample_ids, decisions)
    ]
    report = Report(
        tuple(_comments(args, "fuse", extra)), ("sample_id", "decision"), tuple(rows)
    )
    return report.to_text()


def _cmd_report(args) -> str:
    pred = load_predictions(args.predictions)
    validation = load_predictions(args.validation) if args.validation else None
    source = validation if validation is not None else pred
    if not pred.labelled_indices():
        raise EvidenceError("the report needs true labels on the prediction set")
    k = source.n_classifiers
    accuracies = [source.accuracy(j) for j in range(k)]
    rows = []
    for name, acc in zip(source.classifier_names, accuracies):
        rows.append(("classifier_accuracy", name, repr(acc)))
    for name, w in zip(source.classifier_names, optimal_weights(accuracies, clip=args.clip)):
        rows.append(("optimal_weight", name, repr(float(w))))
    cost = load_cost_matrix(args.cost) if args.cost else None
    if cost is not None:
        for j, name in enumerate(source.classifier_names):
            cm = confusion_from_predictions(source, j)
            rows.append(("classifier_risk", name, repr(expected_risk(cm, cost))))
    rules = list(FIXED_RULES) + ["wmr"]
    if (
        len(pred.labels) == 2
        and pred.features is not None
        and source.features is not None
        and source.labelled_indices()
    ):
        rules.append("adaptive-wmr")
    labelled = pred.labelled_indices()
    for rule in rules:
        decisions = _fuse_decisions(pred, validation, rule, args)
        hits = sum(1 for i in labelled if decisions[i] == pred.true_labels[i])
        rows.append(("fused_accuracy", rule, repr(hits / len(labelled))))
        if cost is not None:
            cm = _fused_confusion(pred, decisions)
            if cm is not None:
                rows.append(("fused_risk", rule, repr(expected_risk(cm, cost))))
    extra = [f"predictions={Path(args.predictions).name}", f"k={args.k}"]
    report = Report(
        tuple(_comments(args, "report", extra)), ("section", "key", "value"), tuple(rows)
    )
    return report.to_text()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="votefuse",
        description="Voting power, weighted majority rules, jury competence, "
        "Condorcet efficiency, and classifier fusion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("power", help="Banzhaf and Shapley-Shubik power of a weighted game")
    p.add_argument("--game", required=True, help="game file (weights/quota key = value lines)")
    p.add_argument("--kind", choices=("banzhaf", "shapley", "both"), default="both")
    p.add_argument("--method", choices=("exact", "monte-carlo"), default="exact")
    p.add_argument("--trials", type=int, default=100_000)
    _common_options(p)
    p.set_defaults(func=_cmd_power)

    p = sub.add_parser("wmr", help="weighted majority rule tools")
    wsub = p.add_subparsers(dest="wmr_command", required=True)
    pe = wsub.add_parser("enum", help="enumerate all distinct decisive rules for n voters")
    pe.add_argument("--n", type=int, required=True)
    pe.add_argument("--max-weight", type=int, default=None)
    _common_options(pe)
    pe.set_defaults(func=_cmd_wmr_enum)

    p = sub.add_parser("jury", help="collective competence of a weighted group vote")
    p.add_argument("--skills", type=_float_list, required=True, help="per-judge correctness probabilities")
    p.add_argument("--weights", type=_float_list, default=None, help="per-judge weights (default equal)")
    p.add_argument("--bias", type=float, default=0.0)
    p.add_argument("--nd-policy", choices=("incorrect", "coin-flip"), default="incorrect")
    p.add_argument("--method", choices=("exact", "monte-carlo"), default="exact")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--clip", type=float, default=1e-6)
    p.add_argument("--teams", default=None, help="team file for indirect competence")
    _common_options(p)
    p.set_defaults(func=_cmd_jury)

    p = sub.add_parser("efficiency", help="Condorcet efficiency of a positional scoring rule")
    p.add_argument("--candidates", "-m", type=int, required=True)
    p.add_argument("--voters", type=int, required=True)
    p.add_argument("--scoring", required=True, help="'borda', 'plurality', or a score list like '2,1,0'")
    p.add_argument("--method", choices=("exact", "monte-carlo"), default="exact")
    p.add_argument("--tie-policy", choices=("fail", "split-credit"), default="fail")
    p.add_argument("--trials", type=int, default=100_000)
    _common_options(p)
    p.set_defaults(func=_cmd_efficiency)

    p = sub.add_parser("fuse", help="fuse a predictions CSV with a chosen rule")
    p.add_argument("--predictions", required=True)
    p.add_argument("--validation", default=None, help="predictions CSV used to estimate accuracies")
    p.add_argument("--rule", required=True, choices=tuple(FIXED_RULES) + ("wmr", "adaptive-wmr"))
    p.add_argument("--weights", type=_float_list, default=None, help="classifier weights (sum/majority)")
    p.add_argument("--trim", type=float, default=0.1)
    p.add_argument("--k", type=int, default=5, help="neighborhood size for adaptive-wmr")
    p.add_argument("--bias", type=float, default=0.0)
    p.add_argument("--clip", type=float, default=1e-6)
    p.add_argument("--cost", default=None, help="cost matrix CSV for expected risk")
    _common_options(p)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("report", help="per-classifier and fused summary of a predictions CSV")
    p.add_argument("--predictions", required=True)
    p.add_argument("--validation", default=None)
    p.add_argument("--cost", default=None)
    p.add_argument("--weights", type=_float_list, default=None)
    p.add_argument("--trim", type=float, default=0.1)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--bias", type=float, default=0.0)
    p.add_argument("--clip", type=float, default=1e-6)
    _common_options(p)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAPACITY_EXIT
    except (VotefuseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
