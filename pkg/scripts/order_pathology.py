#!/usr/bin/env python3
"""Show that a diagonal model scores a path and its reversal identically.

Uses a three-generation family graph: William's uncle's children are reached
by fatherOf_inv/brotherOf/fatherOf, while the reversed order leads nowhere.
"""

from blockhole.evaluation import make_reverse_negatives
from blockhole.graph import PathQuery, add_inverses, build_graph, path_holds
from blockhole.models import init_model

TRIPLES = [
    ("Elizabeth", "motherOf", "Charles"),
    ("Elizabeth", "motherOf", "Andrew"),
    ("Charles", "fatherOf", "William"),
    ("Charles", "fatherOf", "Harry"),
    ("Andrew", "fatherOf", "Beatrice"),
    ("Andrew", "fatherOf", "Eugenie"),
    ("Charles", "brotherOf", "Andrew"),
    ("William", "brotherOf", "Harry"),
]


def main():
    g = add_inverses(build_graph(TRIPLES))
    e, r = g.entities.id, g.relations.id
    pos = PathQuery(e("William"), (r("fatherOf_inv"), r("brotherOf"), r("fatherOf")), e("Beatrice"), True)
    (neg,) = make_reverse_negatives([pos], g)
    print("holds:", path_holds(g, pos), "reversed holds:", path_holds(g, neg))
    for kind, dims in (("distmult", {"n": 8}), ("complex", {"n": 8}), ("transe", {"n": 8}), ("rescal", {"n": 8}), ("blockhole", {"b": 2, "m": 4})):
        m = init_model(kind, g.num_entities, g.num_relations, dims, 0.5, 0)
        a = m.score_path(pos.subject, pos.path, pos.object)
        b = m.score_path(neg.subject, neg.path, neg.object)
        print(f"{kind:<10} forward {a:+.6f}  reversed {b:+.6f}  |diff| {abs(a - b):.2e}")


if __name__ == "__main__":
    main()
