"""Text formats, checkpoints, dataset bundles and the synthetic order benchmark.

Triples file: ``subject<TAB>relation<TAB>object`` per line.
Paths file:   ``subject<TAB>r1/r2/.../rk<TAB>object[<TAB>1|0]``.
Both are UTF-8 without header; blank lines and lines starting with ``#``
are ignored.

Checkpoint (little-endian)::

    8 bytes   magic b"BHKGECKP"
    uint32    format version (1)
    uint32    header length H
    H bytes   UTF-8 JSON header: kind, dims, complex, entity_shape,
              relation_shape, entities, relations
    float64[] entity table, row-major over (entity, block..., component[, re/im])
    float64[] relation table, same convention

Complex entries are stored as interleaved (re, im) pairs.
"""

from __future__ import annotations

import json
import random
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph import (
    INVERSE_SUFFIX,
    PATH_SEP,
    GraphError,
    KnowledgeGraph,
    PathQuery,
    Vocab,
    add_inverses,
    build_graph,
    path_holds,
    restrict,
)
from .models import Model, from_arrays

CHECKPOINT_MAGIC = b"BHKGECKP"
CHECKPOINT_VERSION = 1

NamedTriple = tuple  # (subject, relation, object)
NamedPath = tuple  # (subject, (r1, ..., rk), object, label or None)


class ParseError(ValueError):
    def __init__(self, path, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno


class CheckpointError(ValueError):
    pass


def _lines(path):
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line


def load_triples(path) -> list[NamedTriple]:
    out = []
    for lineno, line in _lines(path):
        parts = line.split("\t")
        if len(parts) != 3 or not all(parts):
            raise ParseError(path, lineno, f"expected 3 tab-separated fields, got {line!r}")
        out.append(tuple(parts))
    return out


def parse_path(text: str) -> tuple[str, ...]:
    rels = tuple(text.split(PATH_SEP))
    if not all(rels):
        raise ValueError(f"empty relation segment in {text!r}")
    return rels


def load_paths(path) -> list[NamedPath]:
    out = []
    for lineno, line in _lines(path):
        parts = line.split("\t")
        if len(parts) not in (3, 4) or not all(parts[:3]):
            raise ParseError(path, lineno, f"expected 3 or 4 tab-separated fields, got {line!r}")
        try:
            rels = parse_path(parts[1])
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
        label = None
        if len(parts) == 4:
            if parts[3] not in ("0", "1"):
                raise ParseError(path, lineno, f"label must be 0 or 1, got {parts[3]!r}")
            label = parts[3] == "1"
        out.append((parts[0], rels, parts[2], label))
    return out


def write_triples(path, triples: Iterable[NamedTriple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s, r, o in triples:
            fh.write(f"{s}\t{r}\t{o}\n")


def write_paths(path, records: Iterable[NamedPath]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s, rels, o, label in records:
            line = f"{s}\t{PATH_SEP.join(rels)}\t{o}"
            if label is not None:
                line += "\t1" if label else "\t0"
            fh.write(line + "\n")


def to_queries(records: Iterable[NamedPath], g: KnowledgeGraph) -> list[PathQuery]:
    ent, rel = g.entities, g.relations
    out = []
    for s, rels, o, label in records:
        try:
            out.append(PathQuery(ent.id(s), tuple(rel.id(r) for r in rels), ent.id(o), label))
        except GraphError as exc:
            raise GraphError(f"path query {(s, PATH_SEP.join(rels), o)!r}: {exc}") from None
    return out


def to_records(queries: Iterable[PathQuery], g: KnowledgeGraph) -> list[NamedPath]:
    ent, rel = g.entities.name, g.relations.name
    return [(ent(q.subject), tuple(rel(r) for r in q.path), ent(q.object), q.label) for q in queries]


def triple_queries(triples: Iterable[NamedTriple], g: KnowledgeGraph, label: bool | None = True) -> list[PathQuery]:
    return [PathQuery(g.entities.id(s), (g.relations.id(r),), g.entities.id(o), label) for s, r, o in triples]


# checkpoints ---------------------------------------------------------------


@dataclass
class Checkpoint:
    model: Model
    entities: Vocab
    relations: Vocab


def checkpoint_bytes(model: Model, entities: Vocab, relations: Vocab) -> bytes:
    if len(entities) != model.num_entities or len(relations) != model.num_relations:
        raise CheckpointError("vocabulary sizes do not match the parameter tables")
    header = {
        "kind": model.kind,
        "dims": model.dims,
        "complex": model.is_complex,
        "entity_shape": list(model.entity.shape),
        "relation_shape": list(model.relation.shape),
        "entities": list(entities.names),
        "relations": list(relations.names),
    }
    raw = json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
    dtype = "<c16" if model.is_complex else "<f8"
    return b"".join(
        [
            CHECKPOINT_MAGIC,
            struct.pack("<II", CHECKPOINT_VERSION, len(raw)),
            raw,
            np.ascontiguousarray(model.entity, dtype=dtype).tobytes(),
            np.ascontiguousarray(model.relation, dtype=dtype).tobytes(),
        ]
    )


def save_checkpoint(path, model: Model, entities: Vocab, relations: Vocab) -> None:
    data = checkpoint_bytes(model, entities, relations)
    with open(path, "wb") as fh:
        fh.write(data)


def load_checkpoint(path, kind: str | None = None) -> Checkpoint:
    data = Path(path).read_bytes()
    if data[:8] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint file")
    if len(data) < 16:
        raise CheckpointError(f"{path}: truncated header")
    version, hlen = struct.unpack("<II", data[8:16])
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
    if len(data) < 16 + hlen:
        raise CheckpointError(f"{path}: truncated header")
    header = json.loads(data[16 : 16 + hlen].decode("utf-8"))
    if kind is not None and header["kind"] != kind:
        raise CheckpointError(f"{path}: checkpoint holds a {header['kind']} model, expected {kind}")
    dtype = np.dtype("<c16" if header["complex"] else "<f8")
    eshape = tuple(header["entity_shape"])
    rshape = tuple(header["relation_shape"])
    esize = int(np.prod(eshape)) * dtype.itemsize
    rsize = int(np.prod(rshape)) * dtype.itemsize
    body = data[16 + hlen :]
    if len(body) != esize + rsize:
        raise CheckpointError(f"{path}: expected {esize + rsize} payload bytes, found {len(body)}")
    entity = np.frombuffer(body[:esize], dtype=dtype).reshape(eshape).astype(dtype.newbyteorder("="))
    relation = np.frombuffer(body[esize:], dtype=dtype).reshape(rshape).astype(dtype.newbyteorder("="))
    model = from_arrays(header["kind"], entity, relation, header["dims"])
    return Checkpoint(model, Vocab(header["entities"]), Vocab(header["relations"]))


# bundles ---------------------------------------------------------------------

SPLIT_FILES = {
    "base_train": "base_train.txt",
    "base_valid": "base_valid.txt",
    "base_test": "base_test.txt",
    "path_train": "path_train.txt",
    "path_valid": "path_valid.txt",
    "path_test_deduction": "path_test_deduction.txt",
    "path_test_induction": "path_test_induction.txt",
}


@dataclass
class DatasetBundle:
    """Named triples and path records for the Base and Path parts."""

    base_train: list
    base_valid: list = field(default_factory=list)
    base_test: list = field(default_factory=list)
    path_train: list = field(default_factory=list)
    path_valid: list = field(default_factory=list)
    path_test_deduction: list = field(default_factory=list)
    path_test_induction: list = field(default_factory=list)

    def truth_graph(self, inverses: bool = True) -> KnowledgeGraph:
        """G(F*) over all Base splits; relation paths are checked against it."""
        if not self.base_train:
            raise GraphError("base_train is empty")
        g = build_graph(self.base_train + self.base_valid + self.base_test)
        if inverses:
            g = add_inverses(g)
        for split in ("path_train", "path_valid", "path_test_deduction", "path_test_induction"):
            to_queries(getattr(self, split), g)
        return g

    def observed_graph(self, truth: KnowledgeGraph) -> KnowledgeGraph:
        """G(F) from base_train, using the truth graph's ids."""
        ids = set()
        for s, r, o in self.base_train:
            si, ri, oi = truth.entities.id(s), truth.relations.id(r), truth.entities.id(o)
            ids.add((si, ri, oi))
            inv = truth.relations.get(r + INVERSE_SUFFIX)
            if inv is not None:
                ids.add((oi, inv, si))
        return restrict(truth, ids)


def save_bundle(directory, bundle: DatasetBundle) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name, fname in SPLIT_FILES.items():
        recs = getattr(bundle, name)
        if name.startswith("base"):
            write_triples(d / fname, recs)
        else:
            write_paths(d / fname, recs)


def load_bundle(directory) -> DatasetBundle:
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"dataset directory not found: {d}")
    kw = {}
    for name, fname in SPLIT_FILES.items():
        p = d / fname
        if not p.exists():
            if name == "base_train":
                raise FileNotFoundError(f"missing required file: {p}")
            kw[name] = []
            continue
        kw[name] = load_triples(p) if name.startswith("base") else load_paths(p)
    return DatasetBundle(**kw)


# synthetic order-discrimination benchmark -------------------------------------------


def gen_order_benchmark(
    n_families: int,
    rng_seed: int = 0,
    n_faiths: int = 8,
    n_nations: int = 10,
    children: tuple[int, int] = (2, 3),
    heldout: float = 0.1,
    train_negative_fraction: float = 0.25,
) -> DatasetBundle:
    """Families whose children inherit the parents' faith.

    Entities: two parents and 2-3 children per family, plus shared faith and
    nation entities.  Relations: ``parents`` (child -> parent), ``religion``
    (person -> faith) and padding ``spouse``, ``sibling`` and
    ``nationality``.  A fraction ``heldout`` of the ``religion`` triples and of
    the children's ``nationality`` triples is kept out of ``base_train``.

    Positives are ``(child, parents/religion, faith)``; negatives are the
    reversed ``(child, religion/parents, faith)``, which never holds because
    faiths have no parents.  Positive/negative pairs are split 80/10/10 by
    child.  Only the first ``train_negative_fraction`` of the training pairs
    keep their negative in ``path_train``.
    The test pairs are written to ``path_test_deduction`` or
    ``path_test_induction`` depending on whether a witness exists in
    ``base_train``.
    """
    if n_families < 1:
        raise ValueError("n_families must be >= 1")
    rng = random.Random(rng_seed)
    faiths = [f"faith{i}" for i in range(n_faiths)]
    nations = [f"nation{i}" for i in range(n_nations)]
    fixed: list[NamedTriple] = []
    soft: list[NamedTriple] = []
    kids: list[tuple[str, str]] = []
    for f in range(n_families):
        faith = rng.choice(faiths)
        nation = rng.choice(nations)
        pa, pb = f"f{f}_pa", f"f{f}_pb"
        fixed += [(pa, "spouse", pb), (pb, "spouse", pa), (pa, "nationality", nation), (pb, "nationality", nation)]
        soft += [(pa, "religion", faith), (pb, "religion", faith)]
        names = [f"f{f}_c{c}" for c in range(rng.randint(*children))]
        for c in names:
            fixed += [(c, "parents", pa), (c, "parents", pb)]
            soft += [(c, "religion", faith), (c, "nationality", nation)]
            for other in names:
                if other != c:
                    fixed.append((c, "sibling", other))
            kids.append((c, faith))
    n_held = int(round(heldout * len(soft)))
    held_idx = set(rng.sample(range(len(soft)), n_held))
    base_train = fixed + [t for i, t in enumerate(soft) if i not in held_idx]
    held = [t for i, t in enumerate(soft) if i in held_idx]
    rng.shuffle(base_train)
    base_valid, base_test = held[: len(held) // 2], held[len(held) // 2 :]

    pos_path, neg_path = ("parents", "religion"), ("religion", "parents")
    pairs = [((c, pos_path, faith, True), (c, neg_path, faith, False)) for c, faith in kids]
    rng.shuffle(pairs)
    n = len(pairs)
    n_train, n_valid = int(0.8 * n), int(0.1 * n)
    splits = {
        "train": pairs[:n_train],
        "valid": pairs[n_train : n_train + n_valid],
        "test": pairs[n_train + n_valid :],
    }

    def flat(ps, neg_fraction=1.0):
        out = []
        n_neg = int(round(neg_fraction * len(ps)))
        for i, (p, q) in enumerate(ps):
            out.append(p)
            if i < n_neg:
                out.append(q)
        return out

    bundle = DatasetBundle(
        base_train=base_train,
        base_valid=base_valid,
        base_test=base_test,
        path_train=flat(splits["train"], train_negative_fraction),
        path_valid=flat(splits["valid"]),
    )
    truth = bundle.truth_graph()
    observed = bundle.observed_graph(truth)
    for rec in flat(splits["test"]):
        q = to_queries([rec], truth)[0]
        # negatives hold nowhere, so they follow their positive's split
        pos = to_queries([(rec[0], pos_path, rec[2], True)], truth)[0]
        target = bundle.path_test_deduction if path_holds(observed, pos) else bundle.path_test_induction
        target.append(rec)
        if path_holds(truth, q) != rec[3]:
            raise GraphError(f"generated query {rec!r} has the wrong label")
    return bundle
