"""Path QA ranking (MQ, P@10) and classification protocols."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import KnowledgeGraph, PathQuery, answer_set, candidate_set, path_holds
from .models import Model

log = logging.getLogger(__name__)


class ProtocolError(ValueError):
    pass


class _Excluded:
    """Marker for queries whose incorrect-answer set is empty."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Excluded"

    def __bool__(self) -> bool:
        return False


Excluded = _Excluded()


def mean_quantile(scores: dict, true_object: int, answers: Iterable[int]):
    """Fraction of incorrect candidates scored ``<=`` the true object.

    ``scores`` maps every candidate in T(r_k) to its score.  Ties count in
    the numerator.  Returns ``Excluded`` when every candidate is correct.
    """
    if true_object not in scores:
        raise ProtocolError(f"true object {true_object} is not among the scored candidates")
    answers = set(answers)
    target = scores[true_object]
    wrong = [v for e, v in scores.items() if e not in answers]
    if not wrong:
        return Excluded
    return sum(1 for v in wrong if v <= target) / len(wrong)


def rank_of(scores: dict, true_object: int) -> int:
    """1-based rank by descending score; ties go to the smaller entity id."""
    if true_object not in scores:
        raise ProtocolError(f"true object {true_object} is not among the scored candidates")
    target = scores[true_object]
    return 1 + sum(1 for e, v in scores.items() if v > target or (v == target and e < true_object))


def p_at_10(scores: dict, true_object: int, answers: Iterable[int] = ()) -> bool:
    return rank_of(scores, true_object) <= 10


@dataclass
class RankingReport:
    quantiles: list = field(default_factory=list)
    hits: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.quantiles)

    @property
    def included(self) -> int:
        return sum(1 for q in self.quantiles if q is not Excluded)

    @property
    def excluded(self) -> int:
        return self.total - self.included

    @property
    def mq(self) -> float:
        vals = [q for q in self.quantiles if q is not Excluded]
        return float(np.mean(vals)) if vals else float("nan")

    @property
    def p10(self) -> float:
        vals = [h for q, h in zip(self.quantiles, self.hits) if q is not Excluded]
        return 100.0 * float(np.mean(vals)) if vals else float("nan")

    def summary(self, prefix: str = "") -> dict:
        return {
            f"{prefix}mq": self.mq,
            f"{prefix}p10": self.p10,
            f"{prefix}queries": self.total,
            f"{prefix}included": self.included,
            f"{prefix}excluded": self.excluded,
        }


Scorer = Callable[[int, Sequence[int], np.ndarray], np.ndarray]


def model_scorer(model: Model) -> Scorer:
    return model.score_objects


def evaluate_ranking(scorer, queries: Sequence[PathQuery], truth: KnowledgeGraph) -> RankingReport:
    """Rank T(r_k) from the ground-truth graph for every query.

    ``scorer`` is a Model or a callable ``(s, path, objects) -> scores``.
    P@10 is aggregated over the same included queries as MQ.
    """
    if isinstance(scorer, Model):
        scorer = model_scorer(scorer)
    report = RankingReport()
    for q in queries:
        cands = candidate_set(truth, q.path[-1])
        answers = answer_set(truth, q.subject, q.path)
        if q.object not in answers:
            raise ProtocolError(f"query {q} does not hold in the ground-truth graph")
        values = scorer(q.subject, q.path, np.asarray(cands, dtype=np.int64))
        scores = dict(zip(cands, (float(v) for v in values)))
        report.quantiles.append(mean_quantile(scores, q.object, answers))
        report.hits.append(p_at_10(scores, q.object, answers))
    return report


def make_reverse_negatives(positives: Iterable[PathQuery], truth: KnowledgeGraph) -> list[PathQuery]:
    """Reverse each path; keep the reversal as a negative iff it does not hold."""
    out = []
    for q in positives:
        if q.length < 2:
            raise ProtocolError("reverse negatives need paths of length >= 2")
        rev = q.reversed(label=False)
        if not path_holds(truth, rev):
            out.append(rev)
    return out


@dataclass
class ClassReport:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        return 100.0 * (self.tp + self.tn) / self.total if self.total else float("nan")

    @property
    def positive_accuracy(self) -> float:
        n = self.tp + self.fn
        return 100.0 * self.tp / n if n else float("nan")

    @property
    def negative_accuracy(self) -> float:
        n = self.tn + self.fp
        return 100.0 * self.tn / n if n else float("nan")

    def summary(self, prefix: str = "") -> dict:
        return {
            f"{prefix}accuracy": self.accuracy,
            f"{prefix}pos_accuracy": self.positive_accuracy,
            f"{prefix}neg_accuracy": self.negative_accuracy,
            f"{prefix}tp": self.tp,
            f"{prefix}fp": self.fp,
            f"{prefix}tn": self.tn,
            f"{prefix}fn": self.fn,
        }


def evaluate_classification(scorer, queries: Sequence[PathQuery], threshold: float = 0.0) -> ClassReport:
    """Predict true iff ``score >= threshold``."""
    if isinstance(scorer, Model):
        scorer = model_scorer(scorer)
    report = ClassReport()
    for q in queries:
        if q.label is None:
            raise ProtocolError(f"query {q} has no label")
        pred = float(scorer(q.subject, q.path, np.asarray([q.object]))[0]) >= threshold
        if q.label:
            if pred:
                report.tp += 1
            else:
                report.fn += 1
        elif pred:
            report.fp += 1
        else:
            report.tn += 1
    return report


def check_split(queries: Sequence[PathQuery], observed: KnowledgeGraph, kind: str) -> int:
    """Count queries inconsistent with a deduction/induction split.

    Deduction queries should have a witness path in the observed graph,
    induction queries should not.  Mismatches are logged, not raised.
    """
    if kind not in ("deduction", "induction"):
        raise ValueError(f"unknown split kind {kind!r}")
    want = kind == "deduction"
    bad = sum(1 for q in queries if path_holds(observed, q) != want)
    if bad:
        log.warning("%d of %d %s queries do not match the split definition", bad, len(queries), kind)
    return bad
