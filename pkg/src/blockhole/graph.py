"""In-memory knowledge graph: vocabularies, adjacency, path traversal."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

INVERSE_SUFFIX = "_inv"
PATH_SEP = "/"


class GraphError(ValueError):
    """Invalid graph construction or lookup."""


class Vocab:
    """Bidirectional name <-> dense id mapping, ids assigned in insertion order."""

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._ids: dict[str, int] = {}
        for name in names:
            self.add(name)

    def add(self, name: str) -> int:
        idx = self._ids.get(name)
        if idx is None:
            idx = len(self._names)
            self._ids[name] = idx
            self._names.append(name)
        return idx

    def id(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise GraphError(f"unknown name {name!r}") from None

    def name(self, idx: int) -> str:
        if not 0 <= idx < len(self._names):
            raise GraphError(f"unknown id {idx}")
        return self._names[idx]

    def get(self, name: str) -> int | None:
        return self._ids.get(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._ids

    def __len__(self) -> int:
        return len(self._names)

    def __iter__(self):
        return iter(self._names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocab) and self._names == other._names

    def __repr__(self) -> str:
        return f"Vocab({len(self)} names)"


@dataclass(frozen=True)
class PathQuery:
    subject: int
    path: tuple[int, ...]
    object: int
    label: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        if len(self.path) == 0:
            raise GraphError("path query needs at least one relation")

    @property
    def length(self) -> int:
        return len(self.path)

    def with_object(self, o: int, label: bool | None = None) -> "PathQuery":
        return PathQuery(self.subject, self.path, o, label)

    def reversed(self, label: bool | None = None) -> "PathQuery":
        return PathQuery(self.subject, self.path[::-1], self.object, label)


@dataclass(frozen=True, eq=False)
class KnowledgeGraph:
    """Labeled multigraph over dense ids.  Treat as immutable after build."""

    entities: Vocab
    relations: Vocab
    triples: frozenset
    fwd: dict = field(repr=False)
    candidates_by_rel: dict = field(repr=False)
    out_edges: dict = field(repr=False)

    @property
    def num_entities(self) -> int:
        return len(self.entities)

    @property
    def num_relations(self) -> int:
        return len(self.relations)

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, triple) -> bool:
        return tuple(triple) in self.triples

    def has_inverses(self) -> bool:
        return any(name.endswith(INVERSE_SUFFIX) for name in self.relations)

    def sorted_triples(self) -> list[tuple[int, int, int]]:
        return sorted(self.triples)

    def named_triples(self) -> list[tuple[str, str, str]]:
        ent, rel = self.entities.name, self.relations.name
        return [(ent(s), rel(r), ent(o)) for s, r, o in self.sorted_triples()]

    def _check_entity(self, e: int) -> None:
        if not 0 <= e < len(self.entities):
            raise GraphError(f"unknown entity id {e}")

    def _check_relation(self, r: int) -> None:
        if not 0 <= r < len(self.relations):
            raise GraphError(f"unknown relation id {r}")

    def objects(self, s: int, r: int) -> tuple[int, ...]:
        return self.fwd.get(r, {}).get(s, ())


def _index(entities: Vocab, relations: Vocab, triples: frozenset) -> KnowledgeGraph:
    fwd: dict[int, dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
    cands: dict[int, set[int]] = defaultdict(set)
    out: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for s, r, o in sorted(triples):
        fwd[r][s].append(o)
        cands[r].add(o)
        out[s].append((r, o))
    return KnowledgeGraph(
        entities=entities,
        relations=relations,
        triples=triples,
        fwd={r: {s: tuple(os) for s, os in by_s.items()} for r, by_s in fwd.items()},
        candidates_by_rel={r: tuple(sorted(c)) for r, c in cands.items()},
        out_edges={s: tuple(edges) for s, edges in out.items()},
    )


def build_graph(
    triples: Sequence[tuple[str, str, str]],
    entities: Vocab | None = None,
    relations: Vocab | None = None,
) -> KnowledgeGraph:
    """Build a graph from named triples.

    Without vocabularies, ids are assigned in first-seen order (subject,
    relation, object per line).  With vocabularies, every name must already
    be present; this lets an observed graph share ids with its ground truth.
    """
    if len(triples) == 0:
        raise GraphError("cannot build a graph from zero triples")
    fixed = entities is not None or relations is not None
    entities = Vocab(entities or ())
    relations = Vocab(relations or ())
    ids = set()
    for s, r, o in triples:
        if PATH_SEP in r:
            raise GraphError(f"relation name {r!r} contains reserved separator {PATH_SEP!r}")
        if fixed:
            if s not in entities or o not in entities or r not in relations:
                raise GraphError(f"triple {(s, r, o)!r} uses names outside the supplied vocabulary")
        ids.add((entities.add(s), relations.add(r), entities.add(o)))
    return _index(entities, relations, frozenset(ids))


def add_inverses(g: KnowledgeGraph) -> KnowledgeGraph:
    """Add ``r_inv`` for every relation and ``(o, r_inv, s)`` for every ``(s, r, o)``."""
    for name in g.relations:
        if name.endswith(INVERSE_SUFFIX):
            raise GraphError(f"relation {name!r} already ends with {INVERSE_SUFFIX!r}")
    relations = Vocab(g.relations)
    inv = {r: relations.add(name + INVERSE_SUFFIX) for r, name in enumerate(g.relations)}
    triples = set(g.triples)
    triples.update((o, inv[r], s) for s, r, o in g.triples)
    return _index(Vocab(g.entities), relations, frozenset(triples))


def restrict(g: KnowledgeGraph, triples: Iterable[tuple[int, int, int]]) -> KnowledgeGraph:
    """Subgraph over id-triples, sharing ``g``'s vocabularies (ids unchanged)."""
    triples = frozenset(tuple(t) for t in triples)
    if not triples:
        raise GraphError("cannot build a graph from zero triples")
    for s, r, o in triples:
        g._check_entity(s)
        g._check_entity(o)
        g._check_relation(r)
    return _index(g.entities, g.relations, triples)


def answer_set(g: KnowledgeGraph, s: int, path: Sequence[int]) -> frozenset:
    """Entities reachable from ``s`` by following ``path`` (set semantics per hop)."""
    if len(path) == 0:
        raise GraphError("path must be nonempty")
    g._check_entity(s)
    frontier = {s}
    for r in path:
        g._check_relation(r)
        by_s = g.fwd.get(r, {})
        nxt: set[int] = set()
        for h in frontier:
            nxt.update(by_s.get(h, ()))
        frontier = nxt
        if not frontier:
            break
    return frozenset(frontier)


def path_holds(g: KnowledgeGraph, q: PathQuery) -> bool:
    """True iff a witness chain ``s -r1-> e1 ... -rk-> o`` exists in ``g``.

    Depth-first search with early exit; (entity, hop) pairs are visited once.
    """
    g._check_entity(q.subject)
    g._check_entity(q.object)
    for r in q.path:
        g._check_relation(r)
    k = len(q.path)
    seen: set[tuple[int, int]] = set()
    stack = [(q.subject, 0)]
    while stack:
        e, hop = stack.pop()
        if hop == k:
            if e == q.object:
                return True
            continue
        if (e, hop) in seen:
            continue
        seen.add((e, hop))
        for t in g.fwd.get(q.path[hop], {}).get(e, ()):
            if (t, hop + 1) not in seen:
                stack.append((t, hop + 1))
    return False


def candidate_set(g: KnowledgeGraph, r: int) -> tuple[int, ...]:
    """Sorted entity ids that occur as object of ``r`` at least once."""
    g._check_relation(r)
    return g.candidates_by_rel.get(r, ())


def sample_paths(
    g: KnowledgeGraph,
    min_len: int,
    max_len: int,
    count: int,
    rng_seed: int,
    allow_inverse: bool = True,
    max_retries: int = 1000,
) -> list[PathQuery]:
    """Random-walk path queries, all labeled true.

    Each walk picks a uniform start entity, a uniform length in
    ``[min_len, max_len]`` and a uniform outgoing edge at every hop.  Walks
    that hit a dead end are restarted from scratch.
    """
    if not (2 <= min_len <= max_len):
        raise GraphError("need 2 <= min_len <= max_len")
    if not g.has_inverses():
        raise GraphError("sample_paths expects a graph with inverse relations added")
    rng = random.Random(rng_seed)
    if allow_inverse:
        out = g.out_edges
    else:
        out = {}
        for s, edges in g.out_edges.items():
            kept = tuple(e for e in edges if not g.relations.name(e[0]).endswith(INVERSE_SUFFIX))
            if kept:
                out[s] = kept
    starts = sorted(out)
    if count > 0 and not starts:
        raise GraphError("graph has no usable edges")
    queries = []
    for _ in range(count):
        for _attempt in range(max_retries):
            length = rng.randint(min_len, max_len)
            e = start = rng.choice(starts)
            rels = []
            for _hop in range(length):
                edges = out.get(e)
                if not edges:
                    break
                r, e = edges[rng.randrange(len(edges))]
                rels.append(r)
            if len(rels) == length:
                queries.append(PathQuery(start, tuple(rels), e, True))
                break
        else:
            raise GraphError(f"random walk failed {max_retries} times in a row")
    return queries
