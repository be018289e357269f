import csv

import numpy as np
import pytest

from fastce import GrayImage, bench, write_image
from fastce.bench import BenchRecord, SweepConfig


@pytest.fixture
def tiny_corpus():
    return bench.synthetic_corpus(2, 64, 48, seed=1)


def test_run_algorithm_dispatch(rng):
    x = GrayImage(rng.integers(0, 256, (32, 32)))
    assert bench.run_algorithm("fhe", x, 1, 256) == bench.run_algorithm("he", x)
    with pytest.raises(ValueError):
        bench.run_algorithm("clahe", x)


def test_median_time_counts_calls():
    calls = []
    t = bench.median_time(lambda: calls.append(1), repetitions=3, warmup=2)
    assert len(calls) == 5 and t >= 0


def test_synthetic_corpus_ids():
    ids = [i for i, _ in bench.synthetic_corpus(5, 8, 8, seed=10)]
    assert ids == ["uniform-noise-10", "two-peak-11", "smooth-gradient-12", "hdr-peaky-13",
                   "uniform-noise-14"]


def test_load_corpus(tmp_path, rng):
    write_image(GrayImage(rng.integers(0, 256, (4, 4))), tmp_path / "b.pgm")
    from fastce import ColorImage

    write_image(ColorImage(rng.integers(0, 256, (4, 4, 3))), tmp_path / "a.ppm")
    corpus = bench.load_corpus(tmp_path)
    assert [name for name, _ in corpus] == ["a.ppm", "b.pgm"]
    assert all(isinstance(img, GrayImage) for _, img in corpus)


def test_load_corpus_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        bench.load_corpus(tmp_path / "nope")
    with pytest.raises(ValueError):
        bench.load_corpus(tmp_path)


class TestSweepConfig:
    def test_adds_naive_counterparts(self):
        cfg = SweepConfig(algorithms=["fsmirank"])
        assert cfg.algorithms == ["smirank", "fsmirank"]

    @pytest.mark.parametrize(
        "kwargs",
        [{"repetitions": 2}, {"s_values": [0]}, {"n_g_values": [100]}, {"algorithms": ["x"]},
         {"warmup": -1}],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            SweepConfig(**kwargs)


def test_sweep_cardinality_and_pairing(tiny_corpus, tmp_path):
    cfg = SweepConfig(s_values=[1, 4], n_g_values=[256, 64], repetitions=3, warmup=0,
                      grid=(4, 4))
    records = bench.run_sweep(cfg, tiny_corpus)
    assert len(records) == 2 * 2 * 4 * 2
    keys = {(r.algorithm, r.s, r.n_g, r.image_id) for r in records}
    for r in records:
        if r.algorithm in bench.NAIVE_OF:
            assert (bench.NAIVE_OF[r.algorithm], r.s, r.n_g, r.image_id) in keys
        assert r.wall_time_us > 0
        assert r.max_abs_diff >= int(r.mean_abs_diff)
    exact = [r for r in records if r.algorithm in ("fhe", "fsmirank") and (r.s, r.n_g) == (1, 256)]
    assert exact and all(r.max_abs_diff == 0 for r in exact)

    path = tmp_path / "out.csv"
    bench.write_csv(records, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == bench.CSV_HEADER
    assert len(rows) == len(records) + 1

    summary = {(c.algorithm, c.s, c.n_g): c for c in bench.summarize(records)}
    fast = summary["fhe", 4, 64]
    assert fast.speedup is not None and fast.speedup > 0
    assert summary["he", 4, 64].speedup is None


def _rec(name, s, n_g, t, w=1024, h=768):
    return BenchRecord(name, s, n_g, 0.9, "img", w, h, t, 0.0, 0)


def test_summary_speedup_definition():
    recs = [_rec("he", 8, 64, 300.0), _rec("fhe", 8, 64, 100.0)]
    row = {c.algorithm: c for c in bench.summarize(recs)}["fhe"]
    assert row.speedup == pytest.approx(3.0)
    assert row.median_speedup == pytest.approx(3.0)


def test_trend_warnings():
    recs = [_rec("fsmirank", 1, 256, 100), _rec("fsmirank", 1, 64, 150),
            _rec("fsmirank", 1, 32, 120, w=10, h=10)]
    warnings = bench.trend_warnings(recs)
    assert len(warnings) == 1 and "ng=64" in warnings[0]
    assert bench.trend_warnings([_rec("fsmirank", 1, 256, 100), _rec("fsmirank", 1, 64, 90)]) == []


def test_verification_all_pass():
    images = bench.synthetic_corpus(4, 96, 80, seed=2)
    images.append(("constant", GrayImage(np.full((40, 40), 17, np.uint8))))
    results = bench.run_verification(images)
    assert all(r.passed for r in results), [r for r in results if not r.passed]
    names = {r.name for r in results}
    assert {"fhe-he-equivalence", "fsmirank-smirank-equivalence", "histogram-mass",
            "calibration-monotone", "rank-residual", "rank-sum"} <= names
