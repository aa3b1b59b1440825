"""File formats: game files, team files, ballot/prediction/cost CSV, reports.

All parsers attach file, line, and column to their errors. All writers are
deterministic: given equal inputs they emit byte-identical text, floats are
rendered with ``repr`` (shortest round-tripping form), and rows keep a fixed
order. Lines starting with ``#`` carry metadata in every CSV dialect here and
are preserved by :func:`read_report`.
"""

from __future__ import annotations

import csv
import io as _io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ParseError
from .fusion import ClassifierOutput, CostMatrix, PredictionSet
from .jury import TeamStructure
from .model import VotingGame, as_fraction
from .scoring import RankedBallot

PathLike = Union[str, Path]


def _read_text(path: PathLike) -> str:
    return Path(path).read_text(encoding="utf-8")


def _fraction_token(token: str, path: str, line: int, col: int) -> Fraction:
    try:
        return as_fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {token!r}", path=path, line=line, column=col) from None


def _split_tokens(value: str) -> list[tuple[str, int]]:
    """Tokens of a value string with 1-based column offsets (commas or spaces)."""
    out = []
    token = ""
    start = 0
    for i, ch in enumerate(value):
        if ch in ", \t":
            if token:
                out.append((token, start + 1))
                token = ""
        else:
            if not token:
                start = i
            token += ch
    if token:
        out.append((token, start + 1))
    return out


def _key_value_lines(text: str, path: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", path=path, line=lineno, column=1)
        key, _, value = raw.partition("=")
        yield lineno, key.strip(), value, len(key) + 2


def parse_game(text: str, source: str = "<string>") -> VotingGame:
    """Parse a game file: ``weights = ...`` and an optional ``quota = ...`` line.

    Weights are integers or fractions like ``3/2``, separated by spaces or
    commas. The quota may be a number or the word ``majority`` (half the
    total weight, which is also the default when the line is absent).
    """
    weights = None
    quota = None
    for lineno, key, value, offset in _key_value_lines(text, source):
        if key == "weights":
            if weights is not None:
                raise ParseError("duplicate weights line", path=source, line=lineno, column=1)
            tokens = _split_tokens(value)
            if not tokens:
                raise ParseError("weights line is empty", path=source, line=lineno, column=offset)
            weights = [
                _fraction_token(tok, source, lineno, offset + col - 1) for tok, col in tokens
            ]
        elif key == "quota":
            if quota is not None:
                raise ParseError("duplicate quota line", path=source, line=lineno, column=1)
            tokens = _split_tokens(value)
            if len(tokens) != 1:
                raise ParseError(
                    "quota must be a single value", path=source, line=lineno, column=offset
                )
            tok, col = tokens[0]
            if tok == "majority":
                quota = "majority"
            else:
                quota = _fraction_token(tok, source, lineno, offset + col - 1)
        else:
            raise ParseError(f"unknown key {key!r}", path=source, line=lineno, column=1)
    if weights is None:
        raise ParseError("missing weights line", path=source, line=1, column=1)
    try:
        if quota is None or quota == "majority":
            return VotingGame(tuple(weights))
        return VotingGame(tuple(weights), quota)
    except ValueError as exc:
        raise ParseError(str(exc), path=source, line=1, column=1) from None


def load_game(path: PathLike) -> VotingGame:
    return parse_game(_read_text(path), source=str(path))


def dump_game(game: VotingGame) -> str:
    lines = [
        "weights = " + " ".join(str(w) for w in game.weights),
        f"quota = {game.quota}",
    ]
    return "\n".join(lines) + "\n"


def save_game(game: VotingGame, path: PathLike) -> None:
    Path(path).write_text(dump_game(game), encoding="utf-8")


def parse_team_structure(text: str, source: str = "<string>") -> TeamStructure:
    """Parse a team file: one ``team = i j k`` line per team, optional ``top_bias``.

    Member weights and biases take their simple defaults; richer structures
    are built through the API.
    """
    teams: list[tuple[int, ...]] = []
    top_bias = 0.0
    for lineno, key, value, offset in _key_value_lines(text, source):
        if key == "team":
            tokens = _split_tokens(value)
            if not tokens:
                raise ParseError("team line is empty", path=source, line=lineno, column=offset)
            members = []
            for tok, col in tokens:
                try:
                    members.append(int(tok))
                except ValueError:
                    raise ParseError(
                        f"not a player index: {tok!r}",
                        path=source,
                        line=lineno,
                        column=offset + col - 1,
                    ) from None
            teams.append(tuple(members))
        elif key == "top_bias":
            tokens = _split_tokens(value)
            if len(tokens) != 1:
                raise ParseError(
                    "top_bias must be a single value", path=source, line=lineno, column=offset
                )
            tok, col = tokens[0]
            top_bias = float(_fraction_token(tok, source, lineno, offset + col - 1))
        else:
            raise ParseError(f"unknown key {key!r}", path=source, line=lineno, column=1)
    if not teams:
        raise ParseError("no team lines found", path=source, line=1, column=1)
    try:
        return TeamStructure(teams=tuple(teams), top_bias=top_bias)
    except ValueError as exc:
        raise ParseError(str(exc), path=source, line=1, column=1) from None


def load_team_structure(path: PathLike) -> TeamStructure:
    return parse_team_structure(_read_text(path), source=str(path))


def _csv_rows(text: str, path: str) -> tuple[list[str], list[tuple[int, list[str]]]]:
    """Comment lines (without '# ') and (lineno, cells) rows of a CSV body."""
    comments = []
    numbered = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith("#"):
            comments.append(raw[1:].lstrip())
            continue
        if not raw.strip():
            continue
        numbered.append((lineno, raw))
    rows = []
    for lineno, raw in numbered:
        try:
            cells = next(csv.reader([raw]))
        except csv.Error as exc:
            raise ParseError(f"bad CSV row: {exc}", path=path, line=lineno, column=1) from None
        rows.append((lineno, cells))
    return comments, rows


def parse_ballots(text: str, source: str = "<string>") -> list[RankedBallot]:
    """Parse a ballot CSV: one voter per row, labels in preference order."""
    _, rows = _csv_rows(text, source)
    if not rows:
        raise ParseError("no ballots found", path=source, line=1, column=1)
    ballots = []
    for lineno, cells in rows:
        labels = [c.strip() for c in cells if c.strip()]
        if not labels:
            raise ParseError("empty ballot row", path=source, line=lineno, column=1)
        try:
            ballots.append(RankedBallot(tuple(labels)))
        except Exception as exc:
            raise ParseError(str(exc), path=source, line=lineno, column=1) from None
    return ballots


def load_ballots(path: PathLike) -> list[RankedBallot]:
    return parse_ballots(_read_text(path), source=str(path))


def _column_kind(name: str) -> str:
    if name == "sample_id":
        return "id"
    if name == "true_label":
        return "truth"
    if name.startswith("feat_"):
        return "feature"
    if ":" in name:
        return "proba"
    return "vote"


def parse_predictions(text: str, source: str = "<string>") -> PredictionSet:
    """Parse a predictions CSV into a :class:`PredictionSet`.

    The header starts with ``sample_id``, optionally followed by
    ``true_label`` and ``feat_*`` columns, then one column per classifier.
    A classifier column holds either plain labels, rankings written
    ``A>B>C``, or splits into a group of ``name:label`` probability columns
    (one per label). The label universe is the sorted set of all labels
    seen; probability groups must cover it exactly.
    """
    _, rows = _csv_rows(text, source)
    if not rows:
        raise ParseError("empty predictions file", path=source, line=1, column=1)
    header_line, header = rows[0]
    header = [h.strip() for h in header]
    if not header or header[0] != "sample_id":
        raise ParseError(
            "first header column must be sample_id", path=source, line=header_line, column=1
        )
    body = rows[1:]
    if not body:
        raise ParseError("no data rows", path=source, line=header_line, column=1)
    for lineno, cells in body:
        if len(cells) != len(header):
            raise ParseError(
                f"row has {len(cells)} cells, header has {len(header)}",
                path=source,
                line=lineno,
                column=1,
            )

    truth_cols = [i for i, h in enumerate(header) if _column_kind(h) == "truth"]
    feat_cols = [i for i, h in enumerate(header) if _column_kind(h) == "feature"]
    vote_cols = [i for i, h in enumerate(header) if _column_kind(h) == "vote" and i > 0]
    proba_cols = [i for i, h in enumerate(header) if _column_kind(h) == "proba"]

    # classifiers in first-appearance order; proba columns group by name prefix
    classifiers: list[tuple[str, str, list[int]]] = []  # (name, form, columns)
    seen: dict[str, int] = {}
    for i in sorted(vote_cols + proba_cols):
        name = header[i].split(":", 1)[0] if ":" in header[i] else header[i]
        if name in seen:
            spot = classifiers[seen[name]]
            if ":" not in header[i] or spot[1] != "proba":
                raise ParseError(
                    f"duplicate classifier column {header[i]!r}",
                    path=source,
                    line=header_line,
                    column=1,
                )
            spot[2].append(i)
        else:
            seen[name] = len(classifiers)
            form = "proba" if ":" in header[i] else "vote"
            classifiers.append((name, form, [i]))
    if not classifiers:
        raise ParseError("no classifier columns found", path=source, line=header_line, column=1)

    sample_ids = tuple(cells[0].strip() for _, cells in body)
    for lineno, cells in body:
        if not cells[0].strip():
            raise ParseError("empty sample_id", path=source, line=lineno, column=1)

    truth: Optional[tuple[Optional[str], ...]] = None
    if truth_cols:
        ti = truth_cols[0]
        truth = tuple((cells[ti].strip() or None) for _, cells in body)

    features = None
    if feat_cols:
        try:
            features = np.array(
                [[float(cells[i]) for i in feat_cols] for _, cells in body], dtype=np.float64
            )
        except ValueError:
            for lineno, cells in body:
                for i in feat_cols:
                    try:
                        float(cells[i])
                    except ValueError:
                        raise ParseError(
                            f"not a number: {cells[i]!r}", path=source, line=lineno, column=i + 1
                        ) from None
            raise

    # collect the label universe
    labels_seen: set[str] = set()
    if truth:
        labels_seen.update(t for t in truth if t is not None)
    for name, form, cols in classifiers:
        if form == "proba":
            labels_seen.update(header[i].split(":", 1)[1] for i in cols)
        else:
            for lineno, cells in body:
                v = cells[cols[0]].strip()
                if ">" in v:
                    labels_seen.update(part.strip() for part in v.split(">"))
                else:
                    labels_seen.add(v)
    labels_seen.discard("")
    labels = tuple(sorted(labels_seen))
    if len(labels) < 2:
        raise ParseError(
            f"found {len(labels)} distinct labels, need at least 2",
            path=source,
            line=header_line,
            column=1,
        )

    outputs = []
    names = []
    for name, form, cols in classifiers:
        names.append(name)
        if form == "proba":
            suffix = {header[i].split(":", 1)[1]: i for i in cols}
            if tuple(sorted(suffix)) != labels:
                raise ParseError(
                    f"probability group {name!r} covers {sorted(suffix)}, expected {list(labels)}",
                    path=source,
                    line=header_line,
                    column=1,
                )
            ordered = [suffix[lab] for lab in labels]
            try:
                matrix = np.array(
                    [[float(cells[i]) for i in ordered] for _, cells in body], dtype=np.float64
                )
            except ValueError:
                for lineno, cells in body:
                    for i in ordered:
                        try:
                            float(cells[i])
                        except ValueError:
                            raise ParseError(
                                f"not a number: {cells[i]!r}",
                                path=source,
                                line=lineno,
                                column=i + 1,
                            ) from None
                raise
            outputs.append(ClassifierOutput.from_proba(matrix))
        else:
            values = [(lineno, cells[cols[0]].strip()) for lineno, cells in body]
            ranked = [">" in v for _, v in values]
            if all(ranked):
                ranks = []
                for lineno, v in values:
                    parts = tuple(p.strip() for p in v.split(">"))
                    ranks.append(parts)
                outputs.append(ClassifierOutput.from_ranks(ranks))
            elif any(ranked):
                lineno = values[ranked.index(True)][0]
                raise ParseError(
                    f"column {name!r} mixes plain labels and rankings",
                    path=source,
                    line=lineno,
                    column=cols[0] + 1,
                )
            else:
                for lineno, v in values:
                    if not v:
                        raise ParseError(
                            f"empty vote in column {name!r}",
                            path=source,
                            line=lineno,
                            column=cols[0] + 1,
                        )
                outputs.append(ClassifierOutput.from_hard([v for _, v in values]))

    try:
        return PredictionSet(
            labels=labels,
            sample_ids=sample_ids,
            outputs=tuple(outputs),
            classifier_names=tuple(names),
            true_labels=truth,
            features=features,
        )
    except Exception as exc:
        raise ParseError(str(exc), path=source, line=header_line, column=1) from None


def load_predictions(path: PathLike) -> PredictionSet:
    return parse_predictions(_read_text(path), source=str(path))


def dump_predictions(pred: PredictionSet) -> str:
    """Serialize a prediction set to CSV text that parses back equal."""
    header = ["sample_id"]
    if pred.true_labels is not None:
        header.append("true_label")
    n_feat = 0 if pred.features is None else pred.features.shape[1]
    header += [f"feat_{j}" for j in range(n_feat)]
    for name, out in zip(pred.classifier_names, pred.outputs):
        if out.kind == "proba":
            header += [f"{name}:{lab}" for lab in pred.labels]
        else:
            header.append(name)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for s in range(pred.n_samples):
        row = [pred.sample_ids[s]]
        if pred.true_labels is not None:
            t = pred.true_labels[s]
            row.append("" if t is None else t)
        row += [repr(float(x)) for x in (pred.features[s] if n_feat else ())]
        for out in pred.outputs:
            if out.kind == "proba":
                row += [repr(float(x)) for x in out.proba[s]]
            elif out.kind == "rank":
                row.append(">".join(out.ranks[s]))
            else:
                row.append(out.hard[s])
        writer.writerow(row)
    return buf.getvalue()


def save_predictions(pred: PredictionSet, path: PathLike) -> None:
    Path(path).write_text(dump_predictions(pred), encoding="utf-8")


def parse_cost_matrix(text: str, source: str = "<string>") -> CostMatrix:
    """Parse a cost CSV with labelled rows and columns.

    The header is an empty cell followed by the predicted labels; each row
    starts with a true label. Labels are reordered to sorted order so the
    matrix aligns with confusion matrices built from predictions.
    """
    _, rows = _csv_rows(text, source)
    if len(rows) < 2:
        raise ParseError("cost matrix needs a header and one row per label", path=source, line=1, column=1)
    header_line, header = rows[0]
    cols = [h.strip() for h in header[1:]]
    if not cols or any(not c for c in cols):
        raise ParseError("header must list predicted labels", path=source, line=header_line, column=1)
    body = rows[1:]
    if len(body) != len(cols):
        raise ParseError(
            f"{len(body)} rows for {len(cols)} labels", path=source, line=header_line, column=1
        )
    raw: dict[str, dict[str, float]] = {}
    for lineno, cells in body:
        if len(cells) != len(cols) + 1:
            raise ParseError(
                f"row has {len(cells)} cells, expected {len(cols) + 1}",
                path=source,
                line=lineno,
                column=1,
            )
        rlab = cells[0].strip()
        if rlab in raw:
            raise ParseError(f"duplicate row label {rlab!r}", path=source, line=lineno, column=1)
        entry = {}
        for j, cell in enumerate(cells[1:]):
            try:
                entry[cols[j]] = float(cell)
            except ValueError:
                raise ParseError(
                    f"not a number: {cell!r}", path=source, line=lineno, column=j + 2
                ) from None
        raw[rlab] = entry
    if sorted(raw) != sorted(cols):
        raise ParseError(
            f"row labels {sorted(raw)} do not match column labels {sorted(cols)}",
            path=source,
            line=header_line,
            column=1,
        )
    labels = tuple(sorted(cols))
    gains = np.array([[raw[t][p] for p in labels] for t in labels], dtype=np.float64)
    return CostMatrix(labels, gains)


def load_cost_matrix(path: PathLike) -> CostMatrix:
    return parse_cost_matrix(_read_text(path), source=str(path))


def dump_cost_matrix(cost: CostMatrix) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(cost.labels))
    for t, lab in enumerate(cost.labels):
        writer.writerow([lab] + [repr(float(x)) for x in cost.gains[t]])
    return buf.getvalue()


@dataclass(frozen=True)
class Report:
    """A CSV report: leading ``#`` comment lines, a header, and string rows."""

    comments: tuple[str, ...]
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def to_text(self) -> str:
        buf = _io.StringIO()
        for c in self.comments:
            buf.write(f"# {c}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow(row)
        return buf.getvalue()


def parse_report(text: str, source: str = "<string>") -> Report:
    comments, rows = _csv_rows(text, source)
    if not rows:
        raise ParseError("report has no header row", path=source, line=1, column=1)
    header = tuple(rows[0][1])
    body = tuple(tuple(cells) for _, cells in rows[1:])
    for lineno, cells in rows[1:]:
        if len(cells) != len(header):
            raise ParseError(
                f"row has {len(cells)} cells, header has {len(header)}",
                path=source,
                line=lineno,
                column=1,
            )
    return Report(tuple(comments), header, body)


def read_report(path: PathLike) -> Report:
    return parse_report(_read_text(path), source=str(path))
