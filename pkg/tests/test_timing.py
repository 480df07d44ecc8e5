import math

import pytest

from blockhole.models import init_model
from blockhole.timing import bench_dims, ratio, scaling_table, time_scores


def test_bench_dims_keep_n_coordinates():
    assert bench_dims("blockhole", 200, 2) == {"b": 2, "m": 100}
    assert bench_dims("rescal", 150) == {"n": 150}
    with pytest.raises(ValueError):
        bench_dims("blockhole", 75, 2)


def test_time_scores_is_positive_and_finite():
    m = init_model("complex", 20, 3, {"n": 8})
    t = time_scores(m, calls=300, batch=64, warmup=64, rounds=2)
    assert t > 0 and math.isfinite(t)


def test_time_scores_rejects_bad_counts():
    m = init_model("complex", 20, 3, {"n": 8})
    with pytest.raises(ValueError):
        time_scores(m, calls=0)


def test_table_rows_and_ratio():
    rows = scaling_table(("blockhole", "distmult"), (10, 20), calls=256, num_entities=30, num_relations=2)
    assert [(r.model, r.n) for r in rows] == [("blockhole", 10), ("blockhole", 20), ("distmult", 10), ("distmult", 20)]
    assert rows[0].dims == "b=2,m=5"
    assert ratio(rows, "distmult", 20, 10) == rows[3].ns_per_score / rows[2].ns_per_score
