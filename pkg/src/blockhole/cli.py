"""Command-line entry point.

Subcommands: ``train``, ``eval-rank``, ``eval-class``, ``answer``,
``bench`` and ``gen-bench``.  Exit status is 0 on success, 2 for bad input
(missing files, malformed data, unknown names, bad flags) and 1 for
anything else.

Settings resolve as built-in defaults, then the ``[train]`` section of an
INI file given by ``--config``, then explicit flags.  Recognized keys::

    [train]
    model = blockhole          ; blockhole rescal distmult complex hole transe
    b = 2
    m = 25
    n = 50                     ; used by every model except blockhole
    lambda = 0.0001
    eta = 0.025
    epochs = 500
    negatives = 5
    seed = 0
    init_scale = 0.1
    optimizer = adagrad        ; or sgd
    patience = 10
    compose = both             ; base, path or both
    inverses = true
    grid_dims = 2x25 4x25      ; BxM for blockhole, N otherwise
    grid_lambda = 0.0001 0
    grid_eta = 0.005 0.01 0.025 0.05

Reports and summaries contain no timings, so repeated runs with the same
seed give identical files.  Training is always single-threaded;
``--threads`` only splits read-only evaluation across worker threads and
does not change any reported number.
"""

from __future__ import annotations

import argparse
import configparser
import difflib
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import (
    SPLIT_FILES,
    CheckpointError,
    DatasetBundle,
    ParseError,
    gen_order_benchmark,
    load_bundle,
    load_checkpoint,
    load_paths,
    load_triples,
    parse_path,
    save_bundle,
    save_checkpoint,
    to_queries,
    triple_queries,
)
from .evaluation import ProtocolError, RankingReport, evaluate_classification, evaluate_ranking
from .graph import PATH_SEP, GraphError, KnowledgeGraph, candidate_set
from .models import MODEL_KINDS, Model, from_arrays, init_model
from .timing import BENCH_NS, ratio, scaling_table
from .training import (
    GRID_BLOCK_DIMS,
    GRID_ETA,
    GRID_LAMBDA,
    GRID_N,
    TrainConfig,
    TrainingError,
    expand_grid,
    fit,
    grid_search,
)

log = logging.getLogger("blockhole")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

DEFAULTS = {
    "model": "blockhole",
    "b": "2",
    "m": "25",
    "n": "50",
    "lambda": "0.0001",
    "eta": "0.025",
    "epochs": "500",
    "negatives": "5",
    "seed": "0",
    "init_scale": "0.1",
    "optimizer": "adagrad",
    "patience": "10",
    "compose": "both",
    "inverses": "true",
    "grid_dims": "",
    "grid_lambda": " ".join(str(x) for x in GRID_LAMBDA),
    "grid_eta": " ".join(str(x) for x in GRID_ETA),
}

# flag dest -> config key
_FLAG_KEYS = {
    "model": "model",
    "b": "b",
    "m": "m",
    "n": "n",
    "lam": "lambda",
    "eta": "eta",
    "epochs": "epochs",
    "negatives": "negatives",
    "seed": "seed",
    "init_scale": "init_scale",
    "optimizer": "optimizer",
    "patience": "patience",
    "compose": "compose",
}


class UsageError(Exception):
    """Bad input; reported without a traceback and exit status 2."""


@dataclass
class RunManifest:
    """Everything a run used, echoed at the top of every summary file."""

    command: str
    settings: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def items(self) -> list[tuple[str, str]]:
        out = [("command", self.command)]
        out += [(f"config.{k}", str(v)) for k, v in self.settings.items()]
        out += [(f"data.{k}", str(v)) for k, v in self.data.items()]
        out += [(f"output.{k}", str(v)) for k, v in self.outputs.items()]
        return out


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_summary(path, manifest: RunManifest, metrics: dict) -> None:
    lines = [f"{k}={v}" for k, v in manifest.items()]
    lines += [f"{k}={_fmt(v)}" for k, v in metrics.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_summary(path) -> dict:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line:
            k, _, v = line.partition("=")
            out[k] = v
    return out


# settings ---------------------------------------------------------------------


def resolve_settings(args) -> dict:
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        p = Path(args.config)
        if not p.is_file():
            raise UsageError(f"config file not found: {p}")
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        try:
            parser.read(p, encoding="utf-8")
        except configparser.Error as exc:
            raise UsageError(f"{p}: {exc}") from None
        if parser.has_section("train"):
            for key, value in parser.items("train"):
                if key not in DEFAULTS:
                    raise UsageError(f"{p}: unknown key {key!r} in [train]")
                settings[key] = value.strip()
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            settings[key] = str(value)
    if getattr(args, "no_inverses", False):
        settings["inverses"] = "false"
    return settings


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def _dims(settings: dict) -> dict:
    if settings["model"] == "blockhole":
        return {"b": int(settings["b"]), "m": int(settings["m"])}
    return {"n": int(settings["n"])}


def train_config(settings: dict) -> TrainConfig:
    if settings["model"] not in MODEL_KINDS:
        raise UsageError(f"unknown model {settings['model']!r}; choose from {', '.join(MODEL_KINDS)}")
    if settings["compose"] not in ("base", "path", "both"):
        raise UsageError(f"compose must be base, path or both, got {settings['compose']!r}")
    try:
        return TrainConfig(
            model=settings["model"],
            dims=_dims(settings),
            lam=float(settings["lambda"]),
            eta=float(settings["eta"]),
            epochs=int(settings["epochs"]),
            negatives=int(settings["negatives"]),
            seed=int(settings["seed"]),
            init_scale=float(settings["init_scale"]),
            optimizer=settings["optimizer"],
            patience=int(settings["patience"]),
        )
    except ValueError as exc:
        raise UsageError(f"invalid training settings: {exc}") from None


def grid_configs(base: TrainConfig, settings: dict) -> list[TrainConfig]:
    items = settings["grid_dims"].replace(",", " ").split()
    try:
        if base.model == "blockhole":
            if items:
                dims = []
                for item in items:
                    b, _, m = item.lower().partition("x")
                    dims.append({"b": int(b), "m": int(m)})
            else:
                dims = [{"b": b, "m": m} for b, m in GRID_BLOCK_DIMS]
        else:
            dims = [{"n": int(x)} for x in items] if items else [{"n": n} for n in GRID_N]
        lams = [float(x) for x in settings["grid_lambda"].replace(",", " ").split()]
        etas = [float(x) for x in settings["grid_eta"].replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad grid specification: {exc}") from None
    if not lams or not etas:
        raise UsageError("grid_lambda and grid_eta must not be empty")
    try:
        return expand_grid(base, dims, lams, etas)
    except ValueError as exc:
        raise UsageError(f"bad grid point: {exc}") from None


# data -------------------------------------------------------------------------


def _split_flag(name: str) -> str:
    return name.replace("_", "-")


def load_data(args) -> tuple[DatasetBundle, dict]:
    """Bundle from ``--data`` with per-split file flags taking precedence."""
    sources = {}
    if args.data:
        bundle = load_bundle(args.data)
        for name, fname in SPLIT_FILES.items():
            p = Path(args.data) / fname
            if p.exists():
                sources[name] = str(p)
    else:
        bundle = DatasetBundle(base_train=[])
    for name in SPLIT_FILES:
        value = getattr(args, name, None)
        if value is None:
            continue
        p = Path(value)
        if not p.is_file():
            raise FileNotFoundError(f"dataset file not found: {p}")
        setattr(bundle, name, load_triples(p) if name.startswith("base") else load_paths(p))
        sources[name] = str(p)
    if not bundle.base_train:
        raise UsageError("no base_train triples: pass --data DIR or --base-train FILE")
    return bundle, sources


def _truth(bundle: DatasetBundle, inverses: bool) -> KnowledgeGraph:
    return bundle.truth_graph(inverses=inverses)


def aligned_model(path, truth: KnowledgeGraph, kind: str | None = None) -> Model:
    """Load a checkpoint and reorder its rows to ``truth``'s vocabulary ids."""
    ck = load_checkpoint(path, kind)
    missing = [n for n in truth.entities if n not in ck.entities]
    missing += [n for n in truth.relations if n not in ck.relations]
    if missing:
        raise UsageError(f"{path}: {len(missing)} names from the data are not in the checkpoint, e.g. {missing[0]!r}")
    ei = np.array([ck.entities.id(n) for n in truth.entities], dtype=np.int64)
    ri = np.array([ck.relations.id(n) for n in truth.relations], dtype=np.int64)
    m = ck.model
    return from_arrays(m.kind, m.entity[ei], m.relation[ri], m.dims)


def _labeled_path_name(q, truth: KnowledgeGraph) -> str:
    return PATH_SEP.join(truth.relations.name(r) for r in q.path)


# evaluation helpers -------------------------------------------------------------


def _chunks(items: list, parts: int) -> list[list]:
    size = max(1, -(-len(items) // parts))
    return [items[i : i + size] for i in range(0, len(items), size)]


def rank_queries(model: Model, queries: list, truth: KnowledgeGraph, threads: int = 1) -> RankingReport:
    if threads <= 1 or len(queries) < 2:
        return evaluate_ranking(model, queries, truth)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda qs: evaluate_ranking(model, qs, truth), _chunks(queries, threads)))
    merged = RankingReport()
    for part in parts:
        merged.quantiles += part.quantiles
        merged.hits += part.hits
    return merged


def validation_metric(metric: str, bundle: DatasetBundle, truth: KnowledgeGraph, compose: str):
    """``model -> float`` on the validation split, larger is better."""
    if compose == "base" or not bundle.path_valid:
        records = [(s, (r,), o, True) for s, r, o in bundle.base_valid]
    else:
        records = bundle.path_valid
    queries = to_queries(records, truth)
    if not queries:
        raise UsageError("grid search needs a validation split (path_valid or base_valid)")
    if metric == "mq":
        positives = [q for q in queries if q.label is not False]
        return lambda model: evaluate_ranking(model, positives, truth).mq
    if all(q.label is not False for q in queries):
        log.warning("validation split has no negatives; accuracy only measures recall")
    return lambda model: evaluate_classification(model, queries).accuracy


# commands -----------------------------------------------------------------------


def cmd_train(args) -> int:
    settings = resolve_settings(args)
    config = train_config(settings)
    bundle, sources = load_data(args)
    truth = _truth(bundle, _bool(settings["inverses"]))
    compose = settings["compose"]
    queries = []
    if compose in ("base", "both"):
        queries += triple_queries(bundle.base_train, truth)
    if compose in ("path", "both"):
        queries += to_queries(bundle.path_train, truth)
    if not queries:
        raise UsageError(f"no training queries for compose={compose}")
    ne, nr = truth.num_entities, truth.num_relations
    metrics: dict = {}
    if args.grid:
        evaluate = validation_metric(args.metric, bundle, truth, compose)
        result = grid_search(grid_configs(config, settings), ne, nr, queries, evaluate)
        config, model, report = result.config, result.model, result.report
        settings.update(
            {
                "b": str(config.dims.get("b", settings["b"])),
                "m": str(config.dims.get("m", settings["m"])),
                "n": str(config.dims.get("n", settings["n"])),
                "lambda": repr(config.lam),
                "eta": repr(config.eta),
            }
        )
        metrics["grid.metric"] = args.metric
        metrics["grid.best"] = result.score
        for i, (cfg, value) in enumerate(result.trials):
            dims = "x".join(str(v) for _, v in sorted(cfg.dims.items()))
            metrics[f"grid.{i}"] = f"dims={dims} lambda={cfg.lam!r} eta={cfg.eta!r} score={value!r}"
    else:
        model = init_model(config.model, ne, nr, config.dims, config.init_scale, config.seed)

        def on_epoch(epoch, loss):
            print(f"epoch {epoch} loss {loss:.6f}", file=sys.stderr)

        report = fit(model, queries, config, on_epoch=on_epoch)
    save_checkpoint(args.out, model, truth.entities, truth.relations)
    summary = args.report or f"{args.out}.report"
    metrics.update({"train.queries": len(queries), "train.epochs": report.epochs, "train.stopped_early": report.stopped_early})
    for i, loss in enumerate(report.epoch_loss, 1):
        metrics[f"train.loss.{i}"] = loss
    manifest = RunManifest("train", settings, sources, {"checkpoint": args.out, "report": summary})
    write_summary(summary, manifest, metrics)
    final = report.epoch_loss[-1] if report.epoch_loss else float("nan")
    print(f"trained {config.model} for {report.epochs} epochs, final loss {final:.6f}; wrote {args.out}")
    return EXIT_OK


def _rank_sections(args, bundle: DatasetBundle, truth: KnowledgeGraph) -> list[tuple[str, list]]:
    sections = []
    if args.test:
        for p in args.test:
            if not Path(p).is_file():
                raise FileNotFoundError(f"test file not found: {p}")
            sections.append((Path(p).stem, to_queries(load_paths(p), truth)))
        return sections
    if bundle.base_test:
        sections.append(("base", triple_queries(bundle.base_test, truth)))
    for name in ("deduction", "induction"):
        records = getattr(bundle, f"path_test_{name}")
        if records:
            sections.append((name, to_queries(records, truth)))
    return sections


def cmd_eval_rank(args) -> int:
    bundle, sources = load_data(args)
    truth = _truth(bundle, not args.no_inverses)
    model = aligned_model(args.checkpoint, truth, args.model)
    sections = _rank_sections(args, bundle, truth)
    if not sections:
        raise UsageError("no test queries to rank")
    metrics = {}
    lines = [f"{'section':<14}{'queries':>9}{'excluded':>10}{'MQ':>9}{'P@10':>9}"]
    for name, queries in sections:
        positives = [q for q in queries if q.label is not False]
        if not positives:
            raise UsageError(f"section {name} has no positive queries")
        rep = rank_queries(model, positives, truth, args.threads)
        metrics.update(rep.summary(f"{name}."))
        lines.append(f"{name:<14}{rep.total:>9}{rep.excluded:>10}{rep.mq:>9.4f}{rep.p10:>9.2f}")
    print("\n".join(lines))
    if args.out:
        settings = {"model": model.kind, "dims": _dims_text(model), "checkpoint": args.checkpoint, "inverses": _fmt(not args.no_inverses), "threads": args.threads}
        write_summary(args.out, RunManifest("eval-rank", settings, sources, {"summary": args.out}), metrics)
    return EXIT_OK


def _dims_text(model: Model) -> str:
    return ",".join(f"{k}={v}" for k, v in sorted(model.dims.items()))


def cmd_eval_class(args) -> int:
    bundle, sources = load_data(args)
    truth = _truth(bundle, not args.no_inverses)
    model = aligned_model(args.checkpoint, truth, args.model)
    if args.queries:
        records = []
        for p in args.queries:
            if not Path(p).is_file():
                raise FileNotFoundError(f"query file not found: {p}")
            records += load_paths(p)
            sources[f"queries.{len(sources)}"] = p
    else:
        records = bundle.path_test_deduction + bundle.path_test_induction
    queries = to_queries(records, truth)
    if not queries:
        raise UsageError("no labeled queries to classify")
    unlabeled = sum(q.label is None for q in queries)
    if unlabeled:
        raise UsageError(f"{unlabeled} queries have no 0/1 label")
    rep = evaluate_classification(model, queries, args.threshold)
    metrics = rep.summary("all.")
    print(f"accuracy {rep.accuracy:.2f}  tp {rep.tp}  fp {rep.fp}  tn {rep.tn}  fn {rep.fn}")
    groups: dict = {}
    for q in queries:
        groups.setdefault((_labeled_path_name(q, truth), bool(q.label)), []).append(q)
    print(f"{'query':<36}{'label':>7}{'count':>7}{'accuracy':>10}")
    for (path, label), qs in sorted(groups.items(), key=lambda kv: (not kv[0][1], kv[0][0])):
        sub = evaluate_classification(model, qs, args.threshold)
        name = f"*/{path}/*"
        print(f"{name:<36}{'true' if label else 'false':>7}{len(qs):>7}{sub.accuracy:>10.1f}")
        metrics[f"{name}.{'true' if label else 'false'}.accuracy"] = sub.accuracy
        metrics[f"{name}.{'true' if label else 'false'}.count"] = len(qs)
    if args.out:
        settings = {"model": model.kind, "dims": _dims_text(model), "checkpoint": args.checkpoint, "threshold": repr(args.threshold)}
        write_summary(args.out, RunManifest("eval-class", settings, sources, {"summary": args.out}), metrics)
    return EXIT_OK


def _lookup(vocab, name: str, what: str) -> int:
    if name in vocab:
        return vocab.id(name)
    near = difflib.get_close_matches(name, list(vocab.names), n=5, cutoff=0.5)
    hint = f"; nearest: {', '.join(near)}" if near else ""
    raise UsageError(f"unknown {what} {name!r}{hint}")


def cmd_answer(args) -> int:
    if args.top_k < 1:
        raise UsageError("--top-k must be at least 1")
    if args.data or args.base_train:
        bundle, _ = load_data(args)
        truth = _truth(bundle, not args.no_inverses)
        model = aligned_model(args.checkpoint, truth, args.model)
        entities, relations = truth.entities, truth.relations
    else:
        ck = load_checkpoint(args.checkpoint, args.model)
        model, entities, relations, truth = ck.model, ck.entities, ck.relations, None
    try:
        names = parse_path(args.path)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    s = _lookup(entities, args.subject, "entity")
    path = tuple(_lookup(relations, r, "relation") for r in names)
    if truth is not None:
        cands = np.array(sorted(candidate_set(truth, path[-1])), dtype=np.int64)
    else:
        cands = np.arange(model.num_entities, dtype=np.int64)
    scores = model.score_objects(s, path, cands)
    order = np.lexsort((cands, -scores))[: args.top_k]
    print(f"query {args.subject} {PATH_SEP.join(names)} ? ({len(names)} hops, {len(cands)} candidates)")
    for rank, i in enumerate(order, 1):
        print(f"{rank}\t{entities.name(int(cands[i]))}\t{scores[i]:.6f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        ns = [int(x) for x in args.ns.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad --ns {args.ns!r}") from None
    kinds = [k.strip() for k in args.models.split(",") if k.strip()]
    for k in kinds:
        if k not in MODEL_KINDS:
            raise UsageError(f"unknown model {k!r}")
    if args.calls < 10_000:
        log.warning("fewer than 10000 scores per row; timings will be noisy")
    try:
        rows = scaling_table(kinds, ns, args.b, args.calls, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"{'model':<10}{'n':>6}  {'dims':<12}{'scores':>8}{'ns/score':>12}")
    for row in rows:
        print(f"{row.model:<10}{row.n:>6}  {row.dims:<12}{row.scores:>8}{row.ns_per_score:>12.1f}")
    metrics = {f"{r.model}.{r.n}.ns_per_score": r.ns_per_score for r in rows}
    if 100 in ns and 200 in ns:
        for k in kinds:
            q = ratio(rows, k)
            metrics[f"{k}.ratio_200_100"] = q
            print(f"{k} ratio n=200/n=100: {q:.2f}")
    if args.out:
        settings = {"models": ",".join(kinds), "ns": ",".join(map(str, ns)), "b": args.b, "calls": args.calls, "seed": args.seed}
        write_summary(args.out, RunManifest("bench", settings, {}, {"summary": args.out}), metrics)
    return EXIT_OK


def cmd_gen_bench(args) -> int:
    if args.families < 1:
        raise UsageError("--families must be at least 1")
    bundle = gen_order_benchmark(args.families, args.seed, train_negative_fraction=args.negative_fraction)
    save_bundle(args.out, bundle)
    sizes = ", ".join(f"{name} {len(getattr(bundle, name))}" for name in SPLIT_FILES)
    print(f"wrote {args.out}: {sizes}")
    return EXIT_OK


# parser -------------------------------------------------------------------------------


def _add_data_flags(p) -> None:
    p.add_argument("--data", help="dataset directory with the standard split files")
    for name in SPLIT_FILES:
        p.add_argument(f"--{_split_flag(name)}", dest=name, metavar="FILE", help=f"override the {name} file")
    p.add_argument("--no-inverses", action="store_true", help="do not add r_inv relations to the graph")
    p.add_argument("--threads", type=int, default=1, help="evaluation worker threads (training stays single-threaded)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockhole", description="Knowledge-graph embeddings with block-circulant relations.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model and write a checkpoint")
    p.add_argument("--config", help="INI file with a [train] section")
    p.add_argument("--model", choices=MODEL_KINDS)
    p.add_argument("--b", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--negatives", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--init-scale", dest="init_scale", type=float)
    p.add_argument("--optimizer", choices=("adagrad", "sgd"))
    p.add_argument("--patience", type=int)
    p.add_argument("--compose", choices=("base", "path", "both"), help="which training splits to use")
    p.add_argument("--grid", action="store_true", help="grid search, selecting on validation --metric")
    p.add_argument("--metric", choices=("mq", "acc"), default="mq")
    p.add_argument("--out", required=True, help="checkpoint path")
    p.add_argument("--report", help="summary path (default: OUT.report)")
    _add_data_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval-rank", help="mean quantile and P@10 on test path queries")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--model", choices=MODEL_KINDS, help="refuse checkpoints of another kind")
    p.add_argument("--test", action="append", help="test paths file; repeat for several sections")
    p.add_argument("--out", help="summary file")
    _add_data_flags(p)
    p.set_defaults(func=cmd_eval_rank)

    p = sub.add_parser("eval-class", help="accuracy on labeled path queries")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--model", choices=MODEL_KINDS)
    p.add_argument("--queries", action="append", help="labeled paths file")
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--out", help="summary file")
    _add_data_flags(p)
    p.set_defaults(func=cmd_eval_class)

    p = sub.add_parser("answer", help="rank answers to one path query")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--model", choices=MODEL_KINDS)
    p.add_argument("--subject", required=True)
    p.add_argument("--path", required=True, help="relations joined by '/'")
    p.add_argument("--top-k", dest="top_k", type=int, default=10)
    _add_data_flags(p)
    p.set_defaults(func=cmd_answer)

    p = sub.add_parser("bench", help="per-score time versus embedding size")
    p.add_argument("--models", default="blockhole,rescal")
    p.add_argument("--ns", default=",".join(map(str, BENCH_NS)))
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--calls", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="summary file")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen-bench", help="write the synthetic relation-order benchmark")
    p.add_argument("--families", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--negative-fraction", dest="negative_fraction", type=float, default=0.25)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen_bench)
    return parser


USER_ERRORS = (UsageError, FileNotFoundError, IsADirectoryError, ParseError, GraphError, CheckpointError, ProtocolError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - last-resort report
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
