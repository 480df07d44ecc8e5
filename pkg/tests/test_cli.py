import numpy as np
import pytest

from blockhole.cli import EXIT_OK, EXIT_USAGE, main, read_summary
from blockhole.data import load_checkpoint, save_checkpoint, write_paths, write_triples
from blockhole.graph import Vocab
from blockhole.models import from_arrays, init_model

from conftest import ROYAL_TRIPLES


@pytest.fixture(scope="module")
def bench_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("bench")
    assert main(["gen-bench", "--families", "30", "--seed", "1", "--out", str(d)]) == EXIT_OK
    return d


@pytest.fixture(scope="module")
def trained(bench_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("run") / "bh.ckpt"
    argv = ["train", "--data", str(bench_dir), "--model", "blockhole", "--b", "2", "--m", "6"]
    argv += ["--epochs", "30", "--lambda", "0.001", "--eta", "0.05", "--out", str(out)]
    assert main(argv) == EXIT_OK
    return out


def test_train_writes_checkpoint_and_report(trained, capsys):
    ck = load_checkpoint(trained, "blockhole")
    assert ck.model.dims == {"b": 2, "m": 6}
    rep = read_summary(f"{trained}.report")
    assert rep["command"] == "train"
    assert rep["config.model"] == "blockhole" and rep["config.lambda"] == "0.001"
    assert rep["train.epochs"] == "30"
    assert float(rep["train.loss.30"]) < float(rep["train.loss.1"])


def test_train_logs_loss_per_epoch(bench_dir, tmp_path, capsys):
    argv = ["train", "--data", str(bench_dir), "--model", "distmult", "--n", "4", "--epochs", "3", "--out", str(tmp_path / "d.ckpt")]
    assert main(argv) == EXIT_OK
    err = capsys.readouterr().err
    assert err.count("loss") == 3


def test_missing_dataset_file_names_the_path(tmp_path, capsys):
    missing = tmp_path / "missing.txt"
    assert main(["train", "--base-train", str(missing), "--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert str(missing) in capsys.readouterr().err
    assert main(["train", "--data", str(tmp_path / "nodir"), "--out", str(tmp_path / "x")]) == EXIT_USAGE


def test_unknown_flag_is_usage_error(capsys):
    assert main(["train", "--bogus"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_config_file_and_flag_precedence(bench_dir, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[train]\nmodel = complex\nn = 6\nepochs = 2 ; short\neta = 0.01\n")
    out = tmp_path / "c.ckpt"
    assert main(["train", "--config", str(cfg), "--data", str(bench_dir), "--eta", "0.02", "--out", str(out)]) == EXIT_OK
    rep = read_summary(f"{out}.report")
    assert rep["config.model"] == "complex" and rep["config.n"] == "6"
    assert rep["config.eta"] == "0.02" and rep["train.epochs"] == "2"


def test_bad_config_key(bench_dir, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[train]\nlearning_rate = 3\n")
    assert main(["train", "--config", str(cfg), "--data", str(bench_dir), "--out", str(tmp_path / "x")]) == EXIT_USAGE


def test_compositions(bench_dir, tmp_path):
    sizes = {}
    for comp in ("base", "path", "both"):
        out = tmp_path / f"{comp}.ckpt"
        argv = ["train", "--data", str(bench_dir), "--model", "distmult", "--n", "3", "--epochs", "1", "--compose", comp, "--out", str(out)]
        assert main(argv) == EXIT_OK
        sizes[comp] = int(read_summary(f"{out}.report")["train.queries"])
    assert sizes["both"] == sizes["base"] + sizes["path"]


def test_grid_search_records_trials(bench_dir, tmp_path):
    cfg = tmp_path / "g.ini"
    cfg.write_text("[train]\nmodel = complex\nepochs = 2\ngrid_dims = 2 4\ngrid_lambda = 0\ngrid_eta = 0.01 0.05\n")
    out = tmp_path / "g.ckpt"
    for metric in ("mq", "acc"):
        argv = ["train", "--config", str(cfg), "--data", str(bench_dir), "--grid", "--metric", metric, "--out", str(out)]
        assert main(argv) == EXIT_OK
        rep = read_summary(f"{out}.report")
        assert rep["grid.metric"] == metric
        assert sum(1 for k in rep if k.startswith("grid.") and k[5:].isdigit()) == 4
        assert load_checkpoint(out).model.dims["n"] in (2, 4)


def test_eval_rank_sections_and_summary(trained, bench_dir, tmp_path, capsys):
    out = tmp_path / "rank.txt"
    assert main(["eval-rank", "--checkpoint", str(trained), "--data", str(bench_dir), "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "base" in text and "deduction" in text
    rep = read_summary(out)
    assert rep["command"] == "eval-rank" and rep["config.model"] == "blockhole"
    assert 0.0 <= float(rep["deduction.mq"]) <= 1.0
    assert int(rep["deduction.included"]) + int(rep["deduction.excluded"]) == int(rep["deduction.queries"])


def test_eval_rank_threads_do_not_change_numbers(trained, bench_dir, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["eval-rank", "--checkpoint", str(trained), "--data", str(bench_dir), "--out", str(a)]) == EXIT_OK
    assert main(["eval-rank", "--checkpoint", str(trained), "--data", str(bench_dir), "--threads", "3", "--out", str(b)]) == EXIT_OK
    ra, rb = read_summary(a), read_summary(b)
    assert rb["config.threads"] == "3"
    assert {k: v for k, v in ra.items() if "." in k and k.split(".")[0] in ("base", "deduction")} == {
        k: v for k, v in rb.items() if "." in k and k.split(".")[0] in ("base", "deduction")
    }


def test_eval_rank_kind_mismatch(trained, bench_dir):
    assert main(["eval-rank", "--checkpoint", str(trained), "--data", str(bench_dir), "--model", "distmult"]) == EXIT_USAGE


def royal_files(tmp_path):
    base = tmp_path / "base.txt"
    write_triples(base, ROYAL_TRIPLES)
    return base


def ideal_checkpoint(tmp_path, entities, relations, answers):
    """A DistMult model that scores exactly the listed (s, r, o) triples positive."""
    # one coordinate per (subject, relation) pair keeps triples independent
    pairs = sorted({(s, r) for s, r, _ in answers})
    ne, nr, n = len(entities), len(relations), len(pairs)
    e = np.zeros((ne, 2 * n))
    w = np.zeros((nr, 2 * n))
    for k, (s, r) in enumerate(pairs):
        e[entities.id(s), k] = 1.0
        w[relations.id(r), k] = 1.0
    for s, r, o in answers:
        e[entities.id(o), pairs.index((s, r))] = 1.0
    model = from_arrays("distmult", e, w, {"n": 2 * n})
    p = tmp_path / "ideal.ckpt"
    save_checkpoint(p, model, entities, relations)
    return p


def test_eval_rank_ideal_scorer(tmp_path, capsys):
    base = royal_files(tmp_path)
    # fatherOf has four candidates; the two queries below each rank their answer first
    test = tmp_path / "test.txt"
    write_paths(test, [("Charles", ("fatherOf",), "William", True), ("Andrew", ("fatherOf",), "Beatrice", True)])
    from blockhole.data import DatasetBundle

    truth = DatasetBundle(base_train=list(ROYAL_TRIPLES)).truth_graph()
    ck = ideal_checkpoint(tmp_path, truth.entities, truth.relations, [("Charles", "fatherOf", "William"), ("Andrew", "fatherOf", "Beatrice")])
    out = tmp_path / "r.txt"
    assert main(["eval-rank", "--checkpoint", str(ck), "--base-train", str(base), "--test", str(test), "--out", str(out)]) == EXIT_OK
    rep = read_summary(out)
    assert float(rep["test.mq"]) == 1.0 and float(rep["test.p10"]) == 100.0


def test_eval_class_breakdown(trained, bench_dir, tmp_path, capsys):
    out = tmp_path / "c.txt"
    assert main(["eval-class", "--checkpoint", str(trained), "--data", str(bench_dir), "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "*/parents/religion/*" in text and "*/religion/parents/*" in text
    rep = read_summary(out)
    total = sum(int(rep[f"all.{k}"]) for k in ("tp", "fp", "tn", "fn"))
    assert total == int(rep["*/parents/religion/*.true.count"]) + int(rep["*/religion/parents/*.false.count"])


def test_eval_class_constant_positive_scorer(tmp_path):
    base = royal_files(tmp_path)
    from blockhole.data import DatasetBundle

    truth = DatasetBundle(base_train=list(ROYAL_TRIPLES)).truth_graph()
    ne, nr = truth.num_entities, truth.num_relations
    # TransE with all-zero parameters scores 0 everywhere, and 0 counts as true
    model = from_arrays("transe", np.zeros((ne, 2)), np.zeros((nr, 2)), {"n": 2})
    ck = tmp_path / "z.ckpt"
    save_checkpoint(ck, model, truth.entities, truth.relations)
    queries = tmp_path / "q.txt"
    write_paths(queries, [(s, (r,), o, True) for s, r, o in ROYAL_TRIPLES])
    out = tmp_path / "c.txt"
    assert main(["eval-class", "--checkpoint", str(ck), "--base-train", str(base), "--queries", str(queries), "--out", str(out)]) == EXIT_OK
    assert float(read_summary(out)["all.accuracy"]) == 100.0


def test_eval_class_empty_file(trained, bench_dir, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    assert main(["eval-class", "--checkpoint", str(trained), "--data", str(bench_dir), "--queries", str(empty)]) == EXIT_USAGE


def test_answer_parses_three_hops(tmp_path, capsys):
    base = royal_files(tmp_path)
    from blockhole.data import DatasetBundle

    truth = DatasetBundle(base_train=list(ROYAL_TRIPLES)).truth_graph()
    m = init_model("blockhole", truth.num_entities, truth.num_relations, {"b": 2, "m": 2}, 0.5, 0)
    ck = tmp_path / "a.ckpt"
    save_checkpoint(ck, m, truth.entities, truth.relations)
    argv = ["answer", "--checkpoint", str(ck), "--base-train", str(base), "--subject", "William", "--path", "fatherOf_inv/brotherOf/fatherOf", "--top-k", "50"]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert "3 hops" in out[0] and "4 candidates" in out[0]
    # top_k beyond |T(r_k)| lists every candidate
    assert len(out) == 5
    scores = [float(line.split("\t")[2]) for line in out[1:]]
    assert scores == sorted(scores, reverse=True)


def test_answer_tie_break_by_id(tmp_path, capsys):
    ents, rels = Vocab(["a", "x", "y", "z"]), Vocab(["r"])
    m = from_arrays("distmult", np.zeros((4, 2)), np.zeros((1, 2)), {"n": 2})
    ck = tmp_path / "t.ckpt"
    save_checkpoint(ck, m, ents, rels)
    assert main(["answer", "--checkpoint", str(ck), "--subject", "a", "--path", "r", "--top-k", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()[1:]
    assert [line.split("\t")[1] for line in lines] == ["a", "x", "y"]


def test_answer_unknown_names_suggest_matches(trained, capsys):
    assert main(["answer", "--checkpoint", str(trained), "--subject", "f1_c0", "--path", "parents/relgion"]) == EXIT_USAGE
    assert "religion" in capsys.readouterr().err
    assert main(["answer", "--checkpoint", str(trained), "--subject", "f1_cX", "--path", "parents"]) == EXIT_USAGE
    assert "nearest" in capsys.readouterr().err


def test_answer_trained_fixture_ranks_true_object_high(trained, bench_dir, capsys):
    from blockhole.data import load_bundle

    s, r, o = next(t for t in load_bundle(bench_dir).base_train if t[1] == "religion")
    argv = ["answer", "--checkpoint", str(trained), "--data", str(bench_dir), "--subject", s, "--path", r, "--top-k", "3"]
    assert main(argv) == EXIT_OK
    top = [line.split("\t")[1] for line in capsys.readouterr().out.splitlines()[1:]]
    assert o in top


def test_bench_table(tmp_path, capsys):
    out = tmp_path / "b.txt"
    assert main(["bench", "--ns", "20,40", "--calls", "256", "--out", str(out)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1 + 4
    rep = read_summary(out)
    assert {k for k in rep if k.endswith("ns_per_score")} == {f"{k}.{n}.ns_per_score" for k in ("blockhole", "rescal") for n in (20, 40)}


def test_bench_reports_ratios(capsys):
    assert main(["bench", "--ns", "100,200", "--calls", "256"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "blockhole ratio n=200/n=100" in out and "rescal ratio" in out


def test_bench_rejects_odd_block_split():
    assert main(["bench", "--ns", "51", "--calls", "10"]) == EXIT_USAGE


def test_train_eval_is_deterministic(bench_dir, tmp_path, monkeypatch):
    outs = []
    for run in ("a", "b"):
        # identical relative paths so the echoed manifests match too
        (tmp_path / run).mkdir()
        monkeypatch.chdir(tmp_path / run)
        argv = ["train", "--data", str(bench_dir), "--model", "complex", "--n", "4", "--epochs", "3", "--out", "m.ckpt"]
        assert main(argv) == EXIT_OK
        assert main(["eval-rank", "--checkpoint", "m.ckpt", "--data", str(bench_dir), "--out", "rank.txt"]) == EXIT_OK
        assert main(["eval-class", "--checkpoint", "m.ckpt", "--data", str(bench_dir), "--out", "class.txt"]) == EXIT_OK
        outs.append([(tmp_path / run / f).read_bytes() for f in ("m.ckpt", "m.ckpt.report", "rank.txt", "class.txt")])
    assert outs[0] == outs[1]
