"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line (printed in the terminal summary
by ``conftest.py``) and then asserts. The desk benchmark runs once per
session through the command line and is shared by the end-to-end,
invariance and determinism checks; expect the module to take about 20
minutes on one core.

Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

import json
import os
import time

import numpy as np
import pytest

from leafmatch.alignment import fit_affine, frechet_distance
from leafmatch.cli import main
from leafmatch.dce import FeatureGraph, extract_features
from leafmatch.energy import AdjacencyBundle, build_bundle
from leafmatch.evaluation import make_query
from leafmatch.geometry import Contour, OpenCurve, arc_positions, curvature_profile, global_curvature_profile
from leafmatch.geometry import normalize, occlude, resample_uniform, transform
from leafmatch.gnccp import f_zeta, gnccp_optimize, zeta_gradient
from leafmatch.io import read_curve
from leafmatch.pipeline import load_database, query
from leafmatch.spline import SplineConfig, SplineCurve, beta_blend, eval_spline
from leafmatch.subgraph import MatchConfig, subgraph_match
from leafmatch.synthetic import generate

RESULTS = []


def report(name, ok, detail):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    print(RESULTS[-1])
    assert ok, detail


def rotation(deg):
    a = np.deg2rad(deg)
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


def test_beta_spline_suite():
    rng = np.random.default_rng(0)
    t0 = time.perf_counter()
    tau = rng.uniform(0, 1, 10_000)
    pou = max(float(np.max(np.abs(sum(beta_blend(tau + k, t) for k in (-2, -1, 0, 1)) - 1.0)))
              for t in (0.0, 10.0))
    cubic = max(abs(beta_blend(0.0, 0.0) - 2 / 3), abs(beta_blend(1.0, 0.0) - 1 / 6), abs(beta_blend(-1.0, 0.0) - 1 / 6))
    equi = 0.0
    u = rng.uniform(0, 1, 500)
    for closed in (True, False):
        pts = rng.normal(size=(12, 2))
        A, t = rng.normal(size=(2, 2)), rng.normal(size=2)
        cfg = SplineConfig(tension=10.0)
        a = eval_spline(SplineCurve(pts @ A.T + t, cfg, closed), u)
        b = eval_spline(SplineCurve(pts, cfg, closed), u) @ A.T + t
        equi = max(equi, float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b)))))
    dt = time.perf_counter() - t0
    ok = pou <= 1e-9 and cubic <= 1e-12 and equi <= 1e-9 and dt < 1.0
    report("beta-spline suite", ok,
           f"partition of unity err {pou:.1e}, cubic basis err {cubic:.1e}, affine err {equi:.1e}, {dt:.2f}s")


def _couplings(m, n):
    stack = [((0, 0), ((0, 0),))]
    while stack:
        (i, j), path = stack.pop()
        if (i, j) == (m - 1, n - 1):
            yield path
            continue
        for a, b in ((i + 1, j), (i, j + 1), (i + 1, j + 1)):
            if a < m and b < n:
                stack.append(((a, b), path + ((a, b),)))


def test_frechet_oracle():
    rng = np.random.default_rng(1)
    pairs = [(rng.normal(size=(rng.integers(1, 9), 2)), rng.normal(size=(rng.integers(1, 9), 2))) for _ in range(200)]
    t0 = time.perf_counter()
    got = [frechet_distance(p, q).distance for p, q in pairs]
    dt = time.perf_counter() - t0
    bad = 0
    for (p, q), g in zip(pairs, got):
        d = np.hypot(p[:, None, 0] - q[None, :, 0], p[:, None, 1] - q[None, :, 1])
        brute = min(max(d[i, j] for i, j in path) for path in _couplings(len(p), len(q)))
        bad += g != brute
    report("Frechet oracle", bad == 0 and dt < 10.0, f"{200 - bad}/200 exact matches, {dt:.2f}s")


def test_affine_round_trip():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        s = rng.uniform(0.2, 5.0)
        shear = np.array([[1.0, rng.uniform(-1, 1)], [0.0, 1.0]])
        A = s * rotation(rng.uniform(0, 360)) @ shear
        if rng.random() < 0.5:
            A = A @ np.diag([1.0, -1.0])
        t = rng.uniform(-100, 100, 2)
        p = rng.normal(size=(30, 2)) * 10
        xf = fit_affine(p, p @ A.T + t)
        err = max(np.linalg.norm(xf.A - A) / np.linalg.norm(A), np.linalg.norm(xf.t_vec - t) / max(np.linalg.norm(t), 1.0))
        worst = max(worst, float(err))
    report("affine round trip", worst <= 1e-9, f"worst relative parameter error {worst:.1e} over 100 transforms")


def test_curvature_sanity():
    errs = []
    for r in (1.0, 2.0, 10.0):
        t = np.arange(500) * 2 * np.pi / 500
        c = Contour(np.column_stack([r * np.cos(t), r * np.sin(t)]))
        loc = float(np.max(np.abs(curvature_profile(c) * r - 1)))
        glo = float(np.max(np.abs(global_curvature_profile(c) * r - 1)))
        errs.append((r, loc, glo))
    x = np.linspace(0, 5, 500)
    line = OpenCurve(np.column_stack([x, 0.3 * x - 2]))
    flat = max(float(np.max(np.abs(curvature_profile(line)))), float(np.max(np.abs(global_curvature_profile(line)))))
    ok = all(loc <= 0.02 and glo <= 0.05 for _, loc, glo in errs) and flat <= 1e-9
    detail = ", ".join(f"r={r:g} local {loc:.2%} global {glo:.2%}" for r, loc, glo in errs)
    report("curvature sanity", ok, f"{detail}; line max |k| {flat:.1e}")


def _random_bundle(rng, n):
    mats = []
    for _ in range(4):
        m = rng.uniform(0, 1, (n, n))
        m = m + m.T
        np.fill_diagonal(m, 0)
        mats.append(m)
    return AdjacencyBundle(*mats)


def _curve_bundle(rng, n):
    t = np.sort(rng.uniform(0, 2 * np.pi, n))
    r = 1 + 0.3 * rng.uniform(-1, 1, n)
    return build_bundle(OpenCurve(np.column_stack([r * np.cos(t), r * np.sin(t)]) * 100))


def _is_partial_permutation(X):
    return bool(np.all((X == 0) | (X == 1)) and np.all(X.sum(axis=1) == 1) and np.all(X.sum(axis=0) <= 1))


def test_gnccp_planted_permutation():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    solved = valid = 0
    for k in range(20):
        n = int(rng.integers(4, 9))
        # curvature windows need at least 5 points on a curve
        a = _random_bundle(rng, n) if k % 2 == 0 else _curve_bundle(rng, max(n, 5))
        state, e = gnccp_optimize(a, a.permuted(rng.permutation(a.size)))
        solved += e <= 1e-6
        valid += _is_partial_permutation(state.X)
    grad_err = 0.0
    for _ in range(5):
        A = rng.normal(size=(4, 4, 4))
        A = A + np.swapaxes(A, 1, 2)
        B = rng.normal(size=(4, 4, 4))
        B = B + np.swapaxes(B, 1, 2)
        w = rng.uniform(0.1, 1, 4)
        X = rng.dirichlet(np.ones(4), size=4)
        zeta = float(rng.uniform(-1, 1))

        def f(Z):
            R = A - Z @ B @ Z.T
            return f_zeta(Z, zeta, float(np.einsum("k,kij,kij->", w, R, R)))

        G = zeta_gradient(X, zeta, A, B, w)
        num = np.zeros_like(X)
        h = 1e-5
        for i in range(4):
            for j in range(4):
                E = np.zeros_like(X)
                E[i, j] = h
                num[i, j] = (f(X + E) - f(X - E)) / (2 * h)
        grad_err = max(grad_err, float(np.max(np.abs(G - num)) / max(1.0, np.max(np.abs(num)))))
    dt = time.perf_counter() - t0
    ok = solved >= 18 and valid == 20 and grad_err <= 1e-4 and dt < 60
    report("GNCCP planted permutation", ok,
           f"{solved}/20 at energy <= 1e-6, {valid}/20 valid partial permutations, "
           f"gradient rel err {grad_err:.1e}, {dt:.1f}s")


def _blob(seed, n=1000):
    r = np.random.default_rng(seed)
    t = np.arange(n) * 2 * np.pi / n
    rad = 1 + sum(r.uniform(0.05, 0.15) * np.cos(k * t + r.uniform(0, 6)) for k in (2, 3, 5))
    return normalize(Contour(np.column_stack([rad * np.cos(t), rad * np.sin(t)])))


def test_subgraph_planted_instances():
    exact = 0
    for seed in range(50):
        r = np.random.default_rng(1000 + seed)
        full = _blob(1000 + seed)
        g2 = extract_features(full, 12)
        start = int(r.integers(0, 12 - 5 + 1))
        nodes = np.arange(start, start + 5)
        lo, hi = g2.indices[nodes[0]], g2.indices[nodes[-1]]
        moved = full.points[lo:hi + 1] @ rotation(r.uniform(0, 360)).T * r.uniform(0.5, 2.0) + r.normal(size=2)
        cum, total = arc_positions(moved, False)
        idx = g2.indices[nodes] - lo
        g1 = FeatureGraph(idx, moved[idx], total, False, arc=cum[idx], source=OpenCurve(moved))
        m = subgraph_match(g1, g2, MatchConfig(lambda_=500.0))
        exact += m.cost <= 1e-9 * g2.length and np.array_equal(m.assign, nodes)
    report("subgraph planted instances", exact == 50, f"{exact}/50 recovered with cost 0")


# ---------------------------------------------------------------------------
# desk benchmark (shared)


@pytest.fixture(scope="module")
def desk(tmp_path_factory):
    root = tmp_path_factory.mktemp("desk")
    t0 = time.perf_counter()
    assert main(["--threads", "1", "gen-synthetic", "--classes", "10", "--per-class", "5", "--seed", "0",
                 "--out", str(root / "corpus")]) == 0
    os.makedirs(root / "db_in")
    os.makedirs(root / "queries")
    for f in sorted(os.listdir(root / "corpus")):
        if not f.endswith(".txt"):
            continue
        k = int(f[:-4].split("_")[1])
        os.link(root / "corpus" / f, root / ("db_in" if k < 3 else "queries") / f)
    assert main(["--threads", "1", "build-db", "--input", str(root / "db_in"), "--labels",
                 str(root / "corpus" / "labels.csv"), "--out", str(root / "db")]) == 0
    runs = {}
    for frac in ("0.25", "0.50"):
        out = root / f"eval_{frac}.csv"
        det = root / f"eval_{frac}.json"
        assert main(["--threads", "1", "evaluate", "--db", str(root / "db"), "--queries", str(root / "queries"),
                     "--truth", str(root / "corpus" / "labels.csv"), "--occlusion-range", f"{frac}:{frac}",
                     "--seed", "0", "--out", str(out), "--details", str(det)]) == 0
        runs[frac] = (out, json.loads(det.read_text()))
    return root, runs, time.perf_counter() - t0


def _accuracy(csv_path):
    last = csv_path.read_text().splitlines()[-1].split(",")
    assert last[0] == "summary"
    return float(last[2])


def test_end_to_end_desk_benchmark(desk):
    _, runs, dt = desk
    a25, a50 = _accuracy(runs["0.25"][0]), _accuracy(runs["0.50"][0])
    ok = a25 >= 0.8 and a50 >= 0.6 and a50 >= a25 - 0.3 and dt < 600
    report("end-to-end desk benchmark", ok,
           f"rank-1 accuracy {a25:.0%} at 25% occlusion, {a50:.0%} at 50%; {dt:.0f}s for build + both runs")


def test_invariance_composition(desk):
    root, runs, _ = desk
    db = load_database(root / "db")
    details = runs["0.25"][1]["queries"]
    files = sorted(f for f in os.listdir(root / "queries") if f.endswith(".txt"))
    changed, total = [], 0
    # the first query of every class, under each transform
    for i, f in enumerate(files):
        if not f.endswith("_03.txt"):
            continue
        occ, _ = make_query(read_curve(root / "queries" / f), 0, i, 0.25, 0.25)
        base = details[i]["best_id"]
        for deg, s in ((90, 1.0), (37, 1.0), (0, 0.5), (0, 2.0)):
            total += 1
            got = query(db, transform(occ, s * rotation(deg), [12.0, -30.0])).best_id
            if got != base:
                changed.append(f"{f[:-4]} rot {deg} x{s}: {base} -> {got}")
    report("invariance composition", not changed,
           f"{total - len(changed)}/{total} transformed queries kept best_id" + (f" ({'; '.join(changed)})" if changed else ""))


def test_complexity_check():
    items = generate(2, 1, 0)
    times = {}
    for n in (25, 50, 100):
        a = build_bundle(resample_uniform(occlude(normalize(items[0][2]), 0.25, 1), n))
        b = build_bundle(resample_uniform(occlude(normalize(items[1][2]), 0.25, 2), n))
        gnccp_optimize(a, b)  # warm-up
        best = np.inf
        for _ in range(2):
            t0 = time.perf_counter()
            gnccp_optimize(a, b)
            best = min(best, time.perf_counter() - t0)
        times[n] = best
    ns = np.array(sorted(times))
    slope = float(np.polyfit(np.log(ns), np.log([times[n] for n in ns]), 1)[0])
    detail = ", ".join(f"N={n} {times[n]:.2f}s" for n in ns)
    report("complexity check", 2.5 <= slope <= 3.5, f"log-log slope {slope:.2f} ({detail})")


def test_determinism(desk):
    root, runs, _ = desk
    out = root / "eval_again.csv"
    assert main(["--threads", "1", "evaluate", "--db", str(root / "db"), "--queries", str(root / "queries"),
                 "--truth", str(root / "corpus" / "labels.csv"), "--occlusion-range", "0.25:0.25",
                 "--seed", "0", "--out", str(out)]) == 0
    same = out.read_bytes() == runs["0.25"][0].read_bytes()
    report("determinism", same, "repeat evaluate run " + ("byte-identical" if same else "differs"))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
