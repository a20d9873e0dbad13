"""Acceptance suite: one test per exit criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS lines and
the measured margins.
"""

import json
import math
import os
import resource
import subprocess
import sys
import time

import numpy as np
import pytest

import hyperlp as hl
from hyperlp.cli import run as cli_run
from hyperlp.synth import planted_community_hypergraph, random_hypergraph, two_uniform_hypergraph

from oracles import naive_incidence_score, pairwise_auc


def _verdict(criterion: str, ok: bool, detail: str) -> None:
    print(f"[acceptance] {criterion}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    assert ok, f"{criterion}: {detail}"


def _non_adjacent_pairs(graph, limit, rng):
    pairs = [
        (u, v)
        for u in range(graph.n_vertices)
        for v in range(u + 1, graph.n_vertices)
        if not graph.has_edge(u, v)
    ]
    if len(pairs) > limit:
        picked = rng.choice(len(pairs), size=limit, replace=False)
        pairs = [pairs[i] for i in picked]
    return pairs


def test_criterion_1_two_uniform_equivalences():
    """CN incidence scores on 2-vertex hyperedges collapse to graph CN forms."""
    master = np.random.default_rng(1001)
    hyper_reps = [hl.Representation.HM, hl.Representation.HA, hl.Representation.H1, hl.Representation.H2]
    start = time.perf_counter()
    max_err = 0.0
    checked = 0
    for _ in range(200):
        n = int(master.integers(5, 51))
        p = float(master.uniform(0.1, 0.5))
        h = two_uniform_hypergraph(n, p, seed=int(master.integers(2**31)))
        graph = hl.clique_expand(h)
        extractor = hl.PairFeatureExtractor(
            predictors=[hl.BasePredictor.CN], representations=hyper_reps
        ).fit(h)
        pairs = _non_adjacent_pairs(graph, 30, master)
        if not pairs:
            continue
        got = extractor.transform(np.asarray(pairs))
        deg = graph.degrees
        for row, (u, v) in enumerate(pairs):
            cn = hl.adjacency_score(hl.BasePredictor.CN, graph, u, v)
            hm, ha, h1, h2 = got[row]
            max_err = max(max_err, abs(h1 - cn))
            max_err = max(max_err, abs(hm - (1.0 if cn > 0 else 0.0)))
            max_err = max(max_err, abs(h2 - math.sqrt(cn)))
            if deg[u] > 0 and deg[v] > 0:
                max_err = max(max_err, abs(ha - cn / (deg[u] * deg[v])))
            checked += 1
    elapsed = time.perf_counter() - start
    _verdict(
        "criterion 1 (two-uniform equivalence suite)",
        max_err <= 1e-9 and elapsed < 5.0 and checked > 3000,
        f"max err {max_err:.2e}, {checked} pairs, {elapsed:.2f}s",
    )


def test_criterion_2_brute_force_oracle():
    """All predictors and norms match an independent naive double loop."""
    master = np.random.default_rng(2002)
    start = time.perf_counter()
    max_err = 0.0
    checked = 0
    for i in range(50):
        n = int(master.integers(8, 31))
        m = int(master.integers(10, 61))
        h = random_hypergraph(n, m, size_range=(1, 6), seed=int(master.integers(2**31)))
        sets = [set(f.vertices) for f in h.hyperedges]
        for _ in range(12):
            u, v = (int(x) for x in master.choice(n, size=2, replace=False))
            for pred in hl.BasePredictor:
                for norm in hl.NormKind:
                    want = naive_incidence_score(sets, n, pred.value, norm.value, u, v)
                    got = hl.incidence_score(pred, norm, h, u, v)
                    max_err = max(max_err, abs(got - want))
                    checked += 1
    elapsed = time.perf_counter() - start
    _verdict(
        "criterion 2 (brute-force oracle equivalence)",
        max_err <= 1e-12 and elapsed < 30.0,
        f"max err {max_err:.2e}, {checked} scores, {elapsed:.2f}s",
    )


def test_criterion_3_split_soundness():
    """No leaked test edge in train hyperedges; temporal purity holds."""
    leaks = 0
    trivializations = 0
    for seed in range(100):
        h = random_hypergraph(20, 40, size_range=(2, 5), seed=seed)
        f_tr, _, e_te = hl.structural_split(h, 0.2, seed=seed)
        for f in f_tr:
            for e in e_te:
                if set(e) <= f.vertices:
                    leaks += 1
        train_h = hl.Hypergraph(h.n_vertices, f_tr)
        for e in e_te:
            if hl.edge_hyperneighbors(train_h, e):
                trivializations += 1

    temporal_impure = 0
    for seed in range(30):
        h = random_hypergraph(20, 40, size_range=(2, 5), seed=seed, timed=True)
        f_tr, _, _ = hl.temporal_split(h, 0.3)
        threshold = hl.split.temporal_threshold(h, 0.3)
        temporal_impure += sum(1 for f in f_tr if f.time > threshold)

    _verdict(
        "criterion 3 (split soundness)",
        leaks == 0 and trivializations == 0 and temporal_impure == 0,
        f"{leaks} leaks, {trivializations} trivializations, {temporal_impure} impure train hyperedges",
    )


GOLDEN_AE = {
    "cn_g": 2.0,
    "cn_w": 2.0,
    "cn_hm": 2.0,
    "cn_ha": 1.0,
    "cn_h1": 2.0,
    "cn_h2": 2.0,
    "pa_g": 6.0,
    "pa_w": 8.0,
    "aa_g": 2.0 / math.log(4.0),
    "jc_h1": 0.4,
    "jc_ha": 0.2,
}


def test_criterion_4_toy_golden_run(tmp_path):
    """End-to-end pipeline on the toy reproduces hand-derived feature values.

    A probe group {A, E} at a later timestamp makes the toy splittable while
    keeping all three original groups in training: the temporal cut at
    rho=0.25 yields exactly E_te={AE}, nonlinks={AD}.
    """
    data = tmp_path / "data"
    data.mkdir()
    (data / "nverts.txt").write_text("3\n4\n2\n2\n")
    (data / "simplices.txt").write_text("0\n1\n2\n1\n2\n3\n4\n3\n4\n0\n4\n")
    (data / "times.txt").write_text("1\n2\n3\n4\n")
    out = tmp_path / "out"
    config = {
        "dataset": {
            "nverts": str(data / "nverts.txt"),
            "simplices": str(data / "simplices.txt"),
            "times": str(data / "times.txt"),
        },
        "output_dir": str(out),
        "split": {"mode": "temporal", "rho": 0.25, "p": 5, "seed": 3},
    }
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))

    assert cli_run(["split", "--config", str(cfg)]) == 0
    assert cli_run(["features", "--config", str(cfg)]) == 0
    snapshot = {
        p.name: p.read_bytes()
        for p in [out / "features.csv", *sorted((out / "split").glob("*"))]
    }
    assert cli_run(["split", "--config", str(cfg)]) == 0
    assert cli_run(["features", "--config", str(cfg)]) == 0
    stable = all(
        p.read_bytes() == snapshot[p.name]
        for p in [out / "features.csv", *sorted((out / "split").glob("*"))]
    )

    train_lines = (out / "split" / "train_hyperedges.txt").read_text().splitlines()
    table = hl.FeatureTable.read_csv(out / "features.csv")
    errors = {
        name: abs(table.score_for(0, 4, name) - want)
        for name, want in GOLDEN_AE.items()
    }
    max_err = max(errors.values())
    ok = (
        stable
        and train_lines == ["0 1 2", "1 2 3 4", "3 4"]
        and table.pairs.tolist() == [[0, 4], [0, 3]]
        and table.labels.tolist() == [1, 0]
        and max_err == 0.0
    )
    _verdict(
        "criterion 4 (toy golden run)",
        ok,
        f"byte-stable={stable}, max |err| {max_err:.1e} over {len(GOLDEN_AE)} hand values",
    )


def test_criterion_5_mi_sanity():
    n = 10_000
    labels = [0, 1] * (n // 2)

    identical = hl.mutual_information(
        hl.log_bin(np.asarray(labels, dtype=float)).tolist(), labels
    )
    part1 = abs(identical - 1.0) <= 1e-9

    rng = np.random.default_rng(505)
    independent = rng.integers(1, 21, size=n).astype(float)
    mi_indep = hl.mutual_information(hl.log_bin(independent).tolist(), labels)
    part2 = mi_indep <= 0.01

    strengths = [0.0, 0.6, 1.2, 2.0, 3.0]
    lab = rng.integers(0, 2, size=4000)
    columns = {f"c{i}": np.exp(rng.normal(loc=s * lab, scale=1.0)) for i, s in enumerate(strengths)}
    rankings = []
    for n_bins in (1000, 2000, 4000):
        mis = {
            name: hl.mutual_information(hl.log_bin(vals, hl.BinningSpec(n_bins)).tolist(), lab.tolist())
            for name, vals in columns.items()
        }
        rankings.append(sorted(mis, key=mis.get, reverse=True))
    part3 = rankings[0] == rankings[1] == rankings[2]

    _verdict(
        "criterion 5 (MI sanity)",
        part1 and part2 and part3,
        f"identical {identical:.12f} bits, independent {mi_indep:.5f} bits, "
        f"rank-stable over bins {part3}",
    )


def test_criterion_6_auc_against_pair_counting():
    rng = np.random.default_rng(606)
    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(2, 51))
        labels = rng.integers(0, 2, size=n)
        if labels.min() == labels.max():
            labels[0] = 1 - labels[0]
        if rng.random() < 0.5:
            scores = rng.integers(0, 5, size=n).astype(float)
        else:
            scores = rng.normal(size=n)
        if hl.roc_auc(scores, labels) != pairwise_auc(scores.tolist(), labels.tolist()):
            mismatches += 1
    full_tie = hl.roc_auc([2.0] * 10, [0, 1] * 5)
    _verdict(
        "criterion 6 (AUC correctness)",
        mismatches == 0 and full_tie == 0.5,
        f"{mismatches} mismatches over 1000 instances, full-tie {full_tie}",
    )


def test_criterion_7_hypergraph_features_help():
    """mac-GH beats or ties mac-G on held-out AUC for most seeds."""
    wins = 0
    details = []
    for seed in range(5):
        start = time.perf_counter()
        h = planted_community_hypergraph(seed=seed)
        prepared = hl.prepare(h, hl.SplitSpec("structural", 0.2, 5, seed=seed))
        table = hl.compute_features(prepared)
        cfg = hl.ClassifierConfig(seed=seed)
        auc_g = hl.evaluate_combination(table, hl.ComboSpec("macro", "G"), cfg, split_seed=seed).auc
        auc_gh = hl.evaluate_combination(table, hl.ComboSpec("macro", "GH"), cfg, split_seed=seed).auc
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"seed {seed} took {elapsed:.1f}s"
        wins += auc_gh >= auc_g
        details.append(f"seed {seed}: G={auc_g:.3f} GH={auc_gh:.3f} ({elapsed:.1f}s)")
    _verdict(
        "criterion 7 (hypergraph features help, mac-GH >= mac-G)",
        wins >= 4,
        f"{wins}/5 seeds; " + "; ".join(details),
    )


def test_criterion_8_scale_smoke(tmp_path):
    """Full pipeline at contact-high-school scale in one single-threaded child."""
    h = random_hypergraph(330, 8000, size_range=(2, 5), seed=99)
    data = tmp_path / "data"
    data.mkdir()
    hl.write_benson(h, data / "nverts.txt", data / "simplices.txt")
    config = {
        "dataset": {
            "nverts": str(data / "nverts.txt"),
            "simplices": str(data / "simplices.txt"),
            "times": None,
        },
        "output_dir": str(tmp_path / "out"),
        "split": {"mode": "structural", "rho": 0.2, "p": 5, "seed": 7},
    }
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))

    driver = (
        "from hyperlp.cli import run\n"
        f"cfg = {str(cfg)!r}\n"
        "stages = [['split'], ['features'], ['mi'],\n"
        "          ['predict', '--mode', 'standalone'],\n"
        "          ['predict', '--mode', 'macro'],\n"
        "          ['predict', '--mode', 'micro', '--base', 'AA'],\n"
        "          ['report']]\n"
        "for stage in stages:\n"
        "    rc = run(stage + ['--config', cfg])\n"
        "    assert rc == 0, (stage, rc)\n"
    )
    env = dict(os.environ)
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        env[var] = "1"
    before = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-c", driver], env=env, capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    peak_mib = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss / 1024
    assert proc.returncode == 0, proc.stderr[-2000:]

    rows = (tmp_path / "out" / "features.csv").read_text().count("\n") - 1
    _verdict(
        "criterion 8 (scale smoke test)",
        elapsed < 120.0 and peak_mib < 1024.0,
        f"{elapsed:.1f}s wall, {peak_mib:.0f} MiB peak, {rows} scored pairs "
        f"(prior children peak {before / 1024:.0f} MiB)",
    )
