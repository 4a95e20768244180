"""Acceptance suite. One test per criterion; each prints a PASS line (visible
with ``pytest -s`` or ``-rP``) after its assertions hold."""

import json
import math
import time
import xml.etree.ElementTree as ET
from itertools import combinations

import numpy as np
import pytest

from sweatkit import (
    Lexicon,
    PermutationConfig,
    PoleWordsets,
    TopicWordset,
    cumulative_data,
    detail_data,
    effect_size,
    permutation_test,
    procrustes_align,
    refine,
    render_cumulative,
    render_detail,
    run_sweat,
    save_word2vec_text,
    sweat_score,
)
from sweatkit.cli import main
from sweatkit.embeddings import EmbeddingSpace, cosine

from conftest import make_space, polarized_fixture, random_space


def ok(n, detail=""):
    print(f"ACCEPTANCE {n}: PASS {detail}")


def exact_p_oracle(values_1, values_2):
    """Independent full enumeration of equal-size partitions."""
    pool = list(values_1) + list(values_2)
    n = len(values_1)
    s_obs = sum(values_1) - sum(values_2)
    count = total = 0
    for idx in combinations(range(len(pool)), n):
        s = 2 * sum(pool[i] for i in idx) - sum(pool)
        total += 1
        if (s >= s_obs - 1e-12) if s_obs >= 0 else (s <= s_obs + 1e-12):
            count += 1
    return count / total, total


def random_association_fixture(rng, n_topic=4, n_pole=3, dim=6):
    words = (
        [f"w{i}" for i in range(n_topic)]
        + [f"a{i}" for i in range(n_pole)]
        + [f"b{i}" for i in range(n_pole)]
    )
    space1 = random_space(rng, "s1", words, dim)
    space2 = random_space(rng, "s2", words, dim)
    topic = TopicWordset("t", [f"w{i}" for i in range(n_topic)])
    poles = PoleWordsets(
        "A", "B", [f"a{i}" for i in range(n_pole)], [f"b{i}" for i in range(n_pole)]
    )
    return space1, space2, topic, poles


def test_criterion_01_synthetic_polarization():
    start = time.perf_counter()
    space1, space2, topic, control, poles = polarized_fixture(seed=12345)
    cfg = PermutationConfig(mode="montecarlo", samples=10_000, seed=12345)
    res = run_sweat(topic, space1, space2, poles, cfg)
    assert res.score > 0
    assert abs(res.effect_size) > 1
    assert res.p_value < 0.01
    ctrl = run_sweat(control, space1, space2, poles, cfg)
    assert ctrl.p_value > 0.05
    elapsed = time.perf_counter() - start
    assert elapsed < 10
    ok(1, f"(score={res.score:.4f}, d={res.effect_size:.4f}, "
          f"p={res.p_value:.4f}, control p={ctrl.p_value:.4f}, "
          f"{elapsed:.1f}s)")


def test_criterion_02_montecarlo_matches_exact_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(20)
    for trial in range(20):
        v1 = rng.normal(size=6).tolist()
        v2 = (rng.normal(size=6) + rng.normal()).tolist()
        p_exact, total = exact_p_oracle(v1, v2)
        assert total == 924
        p_mc, n, method, _ = permutation_test(
            v1, v2, PermutationConfig(mode="montecarlo", samples=100_000,
                                      seed=1000 + trial)
        )
        assert method == "montecarlo" and n == 100_000
        tol = 3 * math.sqrt(p_exact * (1 - p_exact) / 100_000)
        assert abs(p_mc - p_exact) <= tol, (trial, p_mc, p_exact, tol)
    elapsed = time.perf_counter() - start
    assert elapsed < 30
    ok(2, f"(20 fixtures, {elapsed:.1f}s)")


def test_criterion_03_antisymmetry_suite():
    rng = np.random.default_rng(30)
    for _ in range(100):
        space1, space2, topic, poles = random_association_fixture(rng)
        swapped = PoleWordsets(poles.label_b, poles.label_a,
                               poles.words_b, poles.words_a)
        s = sweat_score(topic, space1, space2, poles)
        assert abs(s + sweat_score(topic, space2, space1, poles)) <= 1e-12
        assert abs(s + sweat_score(topic, space1, space2, swapped)) <= 1e-12
        if s != 0:
            cfg = PermutationConfig(mode="exact")
            res = run_sweat(topic, space1, space2, poles, cfg)
            res_swap = run_sweat(topic, space2, space1, poles, cfg)
            assert res.associations[0].endswith(
                res_swap.associations[1].split(" ~ ")[1]
            )
    ok(3, "(100 fixtures)")


def test_criterion_04_identity_suite():
    rng = np.random.default_rng(40)
    space1, _, topic, poles = random_association_fixture(rng)
    clone = EmbeddingSpace.from_rows("s2", space1.words, space1.matrix)
    assert sweat_score(topic, space1, clone, poles) == 0.0

    from sweatkit import single_word_association

    same_pole = PoleWordsets("A", "B", ["a0", "a1"], ["b0", "b1"])
    # A = B as vectors: point b-words at the a-words' vectors.
    vectors = {w: space1.vector(w) for w in space1.words}
    vectors["b0"] = vectors["a0"]
    vectors["b1"] = vectors["a1"]
    equal_space = make_space("eq", vectors)
    for w in topic.words:
        assert single_word_association(w, equal_space, same_pole) == 0.0
    ok(4)


def test_criterion_05_effect_size_oracle():
    def brute(values_1, values_2):
        m1 = sum(values_1) / len(values_1)
        m2 = sum(values_2) / len(values_2)
        pooled = list(values_1) + list(values_2)
        mean = sum(pooled) / len(pooled)
        var = sum((v - mean) ** 2 for v in pooled) / len(pooled)
        return (m1 - m2) / math.sqrt(var)

    rng = np.random.default_rng(50)
    for _ in range(100):
        v1 = rng.normal(size=int(rng.integers(2, 10))).tolist()
        v2 = rng.normal(size=int(rng.integers(2, 10))).tolist()
        assert abs(effect_size(v1, v2) - brute(v1, v2)) <= 1e-12
    assert effect_size([1.0], [-1.0]) == 2.0
    ok(5, "(100 fixtures)")


def test_criterion_06_procrustes_recovery():
    start = time.perf_counter()
    rng = np.random.default_rng(60)
    words = [f"w{i}" for i in range(200)]
    source = random_space(rng, "src", words, 50)
    q, r = np.linalg.qr(rng.normal(size=(50, 50)))
    rot = q * np.sign(np.diag(r))
    target = EmbeddingSpace.from_rows("tgt", words, source.matrix @ rot)
    aligned, report = procrustes_align(source, target, words)
    assert report.residual < 1e-8
    before = source._unit @ source._unit.T
    after = aligned._unit @ aligned._unit.T
    assert np.abs(before - after).max() <= 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 5
    ok(6, f"(residual={report.residual:.2e}, {elapsed:.2f}s)")


def test_criterion_07_refinement_filters():
    base = {
        "p": (1.0, 0.0, 0.0),
        "q": (0.0, 1.0, 0.0),
        "x": (0.0, 0.0, 1.0),
        "y": (0.7, 0.7, 0.0),
    }
    swapped = dict(base)
    swapped["x"], swapped["y"] = base["y"], base["x"]
    space1, space2 = make_space("s1", base), make_space("s2", swapped)
    from sweatkit import FrequencyTable

    total = 10**6
    counts = {w: 1000 for w in base}  # zipf 6
    t1 = FrequencyTable(dict(counts), total)
    t2 = FrequencyTable(dict(counts), total)
    report = refine(
        Lexicon(PoleWordsets("A", "B", ["p", "x"], ["q", "y"])),
        space1, space2, t1, t2,
    )
    assert sorted(report.rejected) == [
        ("x", "unstable_roundtrip"), ("y", "unstable_roundtrip")
    ]

    t1.counts["p"] = 100  # zipf exactly 5.0
    t2.counts["p"] = 100
    unswapped = make_space("s2", base)
    report = refine(
        Lexicon(PoleWordsets("A", "B", ["p"], ["q"])),
        space1, unswapped, t1, t2, zipf_threshold=5.0,
    )
    assert report.rejected == [("p", "low_zipf_1")]

    rng = np.random.default_rng(70)
    words = [f"w{i}" for i in range(12)]
    vectors = {w: rng.normal(size=4) for w in words}
    s1, s2 = make_space("s1", vectors), make_space("s2", dict(vectors))
    ta = FrequencyTable({w: int(rng.integers(1, 10**6)) for w in words}, 10**7)
    tb = FrequencyTable({w: int(rng.integers(1, 10**6)) for w in words}, 10**7)
    lex = Lexicon(PoleWordsets("A", "B", words[:6], words[6:]))
    previous = None
    for threshold in np.linspace(2.0, 8.0, 13):
        report = refine(lex, s1, s2, ta, tb, float(threshold))
        kept = set(report.kept_a) | set(report.kept_b)
        if previous is not None:
            assert kept <= previous
        previous = kept
    ok(7)


def test_criterion_08_visualization_identities(tmp_path):
    rng = np.random.default_rng(80)
    fixtures = [random_association_fixture(rng) for _ in range(10)]
    fixtures.append(polarized_fixture(seed=81)[:2] + polarized_fixture(seed=81)[2:3]
                    + polarized_fixture(seed=81)[4:5])
    for i, (space1, space2, topic, poles) in enumerate(fixtures):
        data = cumulative_data(topic, space1, space2, poles)
        for bar in data.bars:
            assert abs(bar.cumulate - (bar.beta_a - bar.beta_b)) <= 1e-9
        score = sweat_score(topic, space1, space2, poles)
        assert abs((data.bars[0].cumulate - data.bars[1].cumulate) - score) <= 1e-9
        detail = detail_data(topic, space1, space2, poles)
        c1, c2 = tmp_path / f"c{i}a.svg", tmp_path / f"c{i}b.svg"
        d1, d2 = tmp_path / f"d{i}a.svg", tmp_path / f"d{i}b.svg"
        render_cumulative(data, str(c1))
        render_cumulative(data, str(c2))
        render_detail(detail, str(d1))
        render_detail(detail, str(d2))
        ET.parse(str(c1))
        ET.parse(str(d1))
        assert c1.read_bytes() == c2.read_bytes()
        assert d1.read_bytes() == d2.read_bytes()
    ok(8, f"({len(fixtures)} fixtures)")


def _fixture_files(tmp_path, seed=12345):
    space1, space2, topic, control, poles = polarized_fixture(seed=seed)
    p1, p2 = tmp_path / "s1.txt", tmp_path / "s2.txt"
    save_word2vec_text(space1, str(p1))
    save_word2vec_text(space2, str(p2))
    config = {
        "embeddings": [
            {"label": "S1", "path": str(p1)},
            {"label": "S2", "path": str(p2)},
        ],
        "topic": {"label": topic.label, "words": topic.words},
        "poles": {
            "label_a": poles.label_a, "label_b": poles.label_b,
            "words_a": poles.words_a, "words_b": poles.words_b,
        },
        "permutations": {"mode": "montecarlo", "samples": 5000, "seed": 5},
        "outputs": {"report": str(tmp_path / "report.json")},
    }
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(config), encoding="utf-8")
    return cfg_path


def test_criterion_09_report_determinism(tmp_path, capsys):
    cfg_path = _fixture_files(tmp_path)
    assert main(["sweat", "--config", str(cfg_path)]) == 0
    first = json.loads((tmp_path / "report.json").read_text())
    assert main(["sweat", "--config", str(cfg_path)]) == 0
    second = json.loads((tmp_path / "report.json").read_text())
    first.pop("meta")
    second.pop("meta")
    assert first == second
    ok(9)


@pytest.mark.slow
def test_criterion_10_performance_envelope(tmp_path, capsys):
    rng = np.random.default_rng(100)
    vocab, dim = 50_000, 100
    n_topic, n_pole = 12, 10

    words = (
        [f"t{i}" for i in range(n_topic)]
        + [f"a{i}" for i in range(n_pole)]
        + [f"b{i}" for i in range(n_pole)]
        + [f"v{i}" for i in range(vocab - n_topic - 2 * n_pole)]
    )
    mat1 = rng.normal(size=(vocab, dim))
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    rot = q * np.sign(np.diag(r))
    mat2 = mat1 @ rot  # exact rotation so alignment recovers identity

    def write_space(path, mat):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{vocab} {dim}\n")
            for w, row in zip(words, mat):
                fh.write(w + " " + " ".join(f"{x:.5f}" for x in row) + "\n")

    p1, p2 = tmp_path / "big1.txt", tmp_path / "big2.txt"
    write_space(p1, mat1)
    write_space(p2, mat2)
    for name in ("f1.tsv", "f2.tsv"):
        with open(tmp_path / name, "w", encoding="utf-8") as fh:
            fh.write("#total\t1000000\n")
            for w in words:
                fh.write(f"{w}\t1000\n")  # zipf 6

    config = {
        "embeddings": [
            {"label": "S1", "path": str(p1),
             "frequency_table": str(tmp_path / "f1.tsv")},
            {"label": "S2", "path": str(p2),
             "frequency_table": str(tmp_path / "f2.tsv")},
        ],
        "alignment": {"mode": "procrustes", "anchors": "auto"},
        "refinement": {"enabled": True, "zipf_threshold": 5.0},
        "topic": {"label": "perf", "words": [f"t{i}" for i in range(n_topic)]},
        "poles": {
            "label_a": "A", "label_b": "B",
            "words_a": [f"a{i}" for i in range(n_pole)],
            "words_b": [f"b{i}" for i in range(n_pole)],
        },
        "permutations": {"mode": "montecarlo", "samples": 10_000, "seed": 1},
        "outputs": {
            "report": str(tmp_path / "report.json"),
            "cumulative_svg": str(tmp_path / "cum.svg"),
            "detail_svg": str(tmp_path / "det.svg"),
        },
    }
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(config), encoding="utf-8")

    start = time.perf_counter()
    assert main(["sweat", "--config", str(cfg_path)]) == 0
    elapsed = time.perf_counter() - start
    assert elapsed < 120
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["result"]["n_permutations"] == 10_000
    ok(10, f"({elapsed:.1f}s for vocab {vocab} x dim {dim})")
