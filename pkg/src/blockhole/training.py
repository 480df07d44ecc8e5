"""Logistic-loss training with negative sampling and AdaGrad."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .graph import PathQuery
from .models import Gradient, Model, init_model

log = logging.getLogger(__name__)


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    model: str = "blockhole"
    dims: dict = field(default_factory=lambda: {"b": 2, "m": 25})
    lam: float = 0.0001
    eta: float = 0.025
    epochs: int = 500
    negatives: int = 5
    seed: int = 0
    init_scale: float = 0.1
    optimizer: str = "adagrad"
    adagrad_eps: float = 1e-8
    patience: int = 10
    min_improvement: float = 1e-6

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.eta < 0:
            raise ValueError("eta must be >= 0")
        if self.epochs < 1:
            raise ValueError("epochs must be positive")
        if self.negatives < 0:
            raise ValueError("negatives must be >= 0")
        if self.optimizer not in ("adagrad", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")


@dataclass
class TrainReport:
    epoch_loss: list = field(default_factory=list)
    epoch_seconds: list = field(default_factory=list)
    stopped_early: bool = False

    @property
    def epochs(self) -> int:
        return len(self.epoch_loss)


def logistic_loss(score: float, y: int) -> float:
    """``log(1 + exp(-y * score))`` in a form that never overflows."""
    if y not in (1, -1):
        raise ValueError("label must be +1 or -1")
    z = -y * score
    return max(z, 0.0) + math.log1p(math.exp(-abs(z)))


def _softplus(z: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, z)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def sample_negatives(q: PathQuery, num_entities: int, k: int, rng: np.random.Generator) -> list[PathQuery]:
    """``k`` corruptions of ``q``'s object, uniform over all other entities.

    Corruptions are not filtered against the ground truth.
    """
    return [q.with_object(int(o), False) for o in _corrupt(q.object, num_entities, k, rng)]


def _corrupt(o: int, num_entities: int, k: int, rng: np.random.Generator) -> np.ndarray:
    if num_entities < 2:
        raise TrainingError("negative sampling needs at least two entities")
    draws = rng.integers(0, num_entities - 1, size=k)
    return draws + (draws >= o)


class AdaGrad:
    """Per-coordinate AdaGrad (or plain SGD) over sparse row gradients.

    Complex tables are updated through float64 views, so real and imaginary
    parts keep separate accumulators.
    """

    def __init__(self, model: Model, eta: float, eps: float = 1e-8, plain_sgd: bool = False):
        self.model = model
        self.eta = eta
        self.eps = eps
        self.plain_sgd = plain_sgd
        self._ent = _real_view(model.entity)
        self._rel = _real_view(model.relation)
        self._ent_acc = np.zeros_like(self._ent)
        self._rel_acc = np.zeros_like(self._rel)

    def _step(self, table, acc, idx, g):
        g = _real_view(np.ascontiguousarray(g))
        row = table[idx]
        if self.plain_sgd:
            row -= self.eta * g
            return
        a = acc[idx]
        a += g * g
        row -= self.eta * g / np.sqrt(a + self.eps)

    def apply(self, grad: Gradient) -> None:
        for i, g in grad.entity.items():
            self._step(self._ent, self._ent_acc, i, g)
        for r, g in grad.relation.items():
            self._step(self._rel, self._rel_acc, r, g)


def _real_view(x: np.ndarray) -> np.ndarray:
    return x.view(np.float64) if np.iscomplexobj(x) else x


def add_l2(grad: Gradient, model: Model, lam: float) -> None:
    """Add ``2 * lam * theta`` on the slots already present in ``grad``."""
    if lam == 0:
        return
    for i in grad.entity:
        grad.entity[i] = grad.entity[i] + 2.0 * lam * model.entity[i]
    for r in grad.relation:
        grad.relation[r] = grad.relation[r] + 2.0 * lam * model.relation[r]


def example_step(model: Model, q: PathQuery, negatives: np.ndarray, lam: float, checked: bool = False):
    """Loss and gradient for one labeled query plus its corrupted objects.

    A positive query is grouped with its negatives so the shared subject and
    path are traversed once; an explicitly negative query has no negatives.
    """
    y0 = 1.0 if q.label is None or q.label else -1.0
    objects = np.empty(1 + len(negatives), dtype=np.int64)
    objects[0] = q.object
    objects[1:] = negatives
    ys = np.full(objects.shape, -1.0)
    ys[0] = y0
    if checked:
        scores = model._score_objects(q.subject, q.path, objects)
    else:
        scores = model.score_objects(q.subject, q.path, objects)
    losses = _softplus(-ys * scores)
    coefs = -ys * _sigmoid(-ys * scores)
    grad = model._weighted_grad(q.subject, q.path, objects, coefs)
    add_l2(grad, model, lam)
    return float(np.sum(losses)), grad


def fit(
    model: Model,
    queries: Sequence[PathQuery],
    config: TrainConfig,
    on_epoch: Callable[[int, float], None] | None = None,
) -> TrainReport:
    """Minimize summed logistic loss with lazy L2 on touched slots.

    Positive queries (label True or None) each draw ``config.negatives``
    corrupted objects per epoch; queries labeled False train as given.
    Updates are applied once per positive together with its negatives.
    """
    queries = list(queries)
    if not queries:
        raise TrainingError("no training queries")
    for q in queries:
        model._check(q.subject, q.path, [q.object])
    rng = np.random.default_rng(config.seed)
    opt = AdaGrad(model, config.eta, config.adagrad_eps, plain_sgd=config.optimizer == "sgd")
    report = TrainReport()
    best = math.inf
    stall = 0
    n_ent = model.num_entities
    k = config.negatives
    positive = np.array([q.label is None or bool(q.label) for q in queries])
    objects = np.array([q.object for q in queries], dtype=np.int64)
    no_negs = np.empty(0, dtype=np.int64)
    for epoch in range(config.epochs):
        t0 = time.perf_counter()
        order = rng.permutation(len(queries))
        negs = _corrupt(objects[order][:, None], n_ent, (len(queries), k), rng)
        total = 0.0
        count = 0
        for row, qi in enumerate(order):
            q = queries[qi]
            nq = negs[row] if positive[qi] else no_negs
            loss, grad = example_step(model, q, nq, config.lam, checked=True)
            if not math.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch + 1} on query {q}")
            opt.apply(grad)
            total += loss
            count += 1 + len(nq)
        mean = total / count
        report.epoch_loss.append(mean)
        report.epoch_seconds.append(time.perf_counter() - t0)
        log.debug("epoch %d loss %.6f", epoch + 1, mean)
        if on_epoch is not None:
            on_epoch(epoch + 1, mean)
        if best - mean < config.min_improvement:
            stall += 1
            if stall >= config.patience:
                report.stopped_early = True
                break
        else:
            stall = 0
        best = min(best, mean)
    return report


def train_model(
    num_entities: int,
    num_relations: int,
    queries: Sequence[PathQuery],
    config: TrainConfig,
) -> tuple[Model, TrainReport]:
    model = init_model(config.model, num_entities, num_relations, config.dims, config.init_scale, config.seed)
    report = fit(model, queries, config)
    return model, report


# default hyperparameter search grid
GRID_BLOCK_DIMS = ((2, 25), (2, 50), (2, 100), (4, 25), (4, 50), (8, 25))
GRID_N = (50, 100, 150, 200)
GRID_LAMBDA = (0.0001, 0.0)
GRID_ETA = (0.005, 0.01, 0.025, 0.05)


def expand_grid(base: TrainConfig, dims: Sequence[dict], lams: Sequence[float], etas: Sequence[float]) -> list[TrainConfig]:
    """Cartesian product in (dims, lambda, eta) order."""
    return [replace(base, dims=dict(d), lam=lam, eta=eta) for d in dims for lam in lams for eta in etas]


def default_grid(base: TrainConfig) -> list[TrainConfig]:
    if base.model == "blockhole":
        dims = [{"b": b, "m": m} for b, m in GRID_BLOCK_DIMS]
    else:
        dims = [{"n": n} for n in GRID_N]
    return expand_grid(base, dims, GRID_LAMBDA, GRID_ETA)


@dataclass
class GridResult:
    config: TrainConfig
    model: Model
    score: float
    report: TrainReport
    trials: list = field(default_factory=list)


def grid_search(
    grid: Sequence[TrainConfig],
    num_entities: int,
    num_relations: int,
    train: Sequence[PathQuery],
    evaluate: Callable[[Model], float],
) -> GridResult:
    """Train one model per grid point; keep the first best by ``evaluate``.

    ``evaluate`` maps a trained model to a validation metric where larger is
    better (MQ or accuracy).  Failing points are logged and skipped.
    """
    if not grid:
        raise ValueError("empty grid")
    best: GridResult | None = None
    trials = []
    for cfg in grid:
        try:
            model, report = train_model(num_entities, num_relations, train, cfg)
            value = float(evaluate(model))
        except (TrainingError, FloatingPointError, ValueError) as exc:
            log.warning("grid point %s failed: %s", cfg, exc)
            trials.append((cfg, None))
            continue
        trials.append((cfg, value))
        log.info("grid point %s -> %.6f", cfg, value)
        if best is None or value > best.score:
            best = GridResult(cfg, model, value, report)
    if best is None:
        raise TrainingError("every grid point failed")
    best.trials = trials
    return best
