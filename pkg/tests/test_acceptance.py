"""Headline checks at their stated scales.

Each test records its outcome through the ``criterion`` fixture so that the
run ends with one PASS/FAIL line per criterion.  Thresholds are fixed; a
criterion that is not met fails.
"""
import json

import numpy as np
import pytest
from scipy import special

from tailstats import cli
from tailstats import densities as dn
from tailstats.config import make_config
from tailstats.ensembles import sample_stable_gue, trial_rng
from tailstats.experiments import run_experiment
from tailstats.stats import ks_two_sample

pytestmark = pytest.mark.slow

# per-criterion partial results for parametrized checks
_PARTIAL: dict = {}

FIG_SCALE = dict(n=100, l=[1, 2, 3, 4], trials=10000, seed=0)


@pytest.fixture(scope="module")
def fig_out(tmp_path_factory):
    """Output directory shared by the three figure runs on the common spectra."""
    return tmp_path_factory.mktemp("acceptance")


def _figure(name, out, **over):
    cfg = make_config(name, overrides=dict(FIG_SCALE, out=str(out), **over))
    assert cfg.stream == "sum-configurations"
    return cfg


@pytest.fixture(scope="module")
def macro_run(fig_out):
    # first run generates the shared spectra single-process and caches them
    assert cli.main(["figure", "macro", "--out", str(fig_out)]) == 0
    return json.loads((fig_out / "macro" / "summary.json").read_text())


def test_criterion_1_macroscopic(macro_run, criterion):
    comps = macro_run["comparisons"]
    devs = {tag: comps[tag]["max_bin_dev"] for tag in ("L1", "L2", "L3", "L4")}
    ok = all(d < 0.05 for d in devs.values()) and all(comps[t]["bins_checked"] > 0 for t in devs)
    criterion(1, ok, "max per-bin rel dev " + ", ".join(f"{t}={d:.4f}" for t, d in devs.items()) + " (< 0.05)")
    assert ok


def test_criterion_2_soft_edge(macro_run, fig_out, criterion):
    summary = run_experiment(_figure("softedge", fig_out)).summary
    ks = {tag: summary["comparisons"][tag]["ks"] for tag in ("L1", "L2", "L3", "L4")}
    ok = all(v < 0.05 for v in ks.values())
    criterion(2, ok, "KS vs Airy edge " + ", ".join(f"{t}={v:.4f}" for t, v in ks.items()) + " (< 0.05)")
    assert ok


def test_criterion_3_tail(macro_run, fig_out, criterion):
    summary = run_experiment(_figure("tail", fig_out)).summary
    comps = summary["comparisons"]
    devs = {tag: comps[tag]["max_bin_dev"] for tag in ("L1", "L2", "L3", "L4")}
    ok = all(d is not None and d < 0.10 for d in devs.values())
    criterion(3, ok, "max per-bin rel dev " + ", ".join(f"{t}={d:.4f}" for t, d in devs.items()) + " (< 0.10)")
    assert ok


def test_criterion_4_direct_sum(tmp_path, criterion):
    cfg = make_config("spacing-sum-vs-direct",
                      overrides=dict(n=200, m=1, l=[2, 3], trials=10000, seed=0, out=str(tmp_path), cache=False))
    comps = run_experiment(cfg).summary["comparisons"]
    parts, ok = [], True
    for L in (2, 3):
        for k in (1, 2, 3):
            c = comps[f"L{L}_k{k}"]
            ok &= c["ks"] < 0.05
            parts.append(f"L{L}k{k}={c['ks']:.4f}")
            if c["within_cluster"]:
                w = comps[f"L{L}_k{k}_wigner"]["ks"]
                ok &= c["ks"] < w
                parts.append(f"(wigner {w:.3f})")
    criterion(4, ok, "KS(sum, direct) " + " ".join(parts) + " (< 0.05 and < wigner)")
    assert ok


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_criterion_5_stability(alpha, criterion):
    n, draws = 50, 2000  # 10^5 pooled eigenvalues per side
    stream = f"acceptance-stability-a{alpha:g}"
    lhs, rhs = [], []
    for t in range(draws):
        rng = trial_rng(0, stream, t)
        h1 = sample_stable_gue(n, alpha, rng).entries
        h2 = sample_stable_gue(n, alpha, rng).entries
        lhs.append(np.linalg.eigvalsh((h1 + h2) / 2 ** (1 / alpha)))
        rhs.append(np.linalg.eigvalsh(sample_stable_gue(n, alpha, rng).entries))
    ks = ks_two_sample(np.concatenate(lhs), np.concatenate(rhs))
    prev = _PARTIAL.setdefault(5, {})
    prev[alpha] = ks
    ok = all(v < 0.01 for v in prev.values())
    criterion(5, ok, "pooled two-sample KS " + ", ".join(f"a={a:g}:{v:.4f}" for a, v in sorted(prev.items()))
              + " (< 0.01)")
    assert ks < 0.01


def test_criterion_6_unfolding(tmp_path, criterion):
    cfg = make_config("stable-density", overrides=dict(n=500, trials=1000, seed=0, out=str(tmp_path), cache=False))
    comps = run_experiment(cfg).summary["comparisons"]
    ks = {a: comps[f"a{a:g}_unfolded"]["ks"] for a in (0.5, 1.0, 1.5, 1.8)}
    ok = all(v < 0.02 for v in ks.values())
    criterion(6, ok, "KS vs uniform " + ", ".join(f"a={a:g}:{v:.4f}" for a, v in ks.items()) + " (< 0.02)")
    assert ok


def test_criterion_7_calibration(criterion):
    pts = np.array([0.25, 0.5, 1.0, 2.0])
    kern = np.array([dn.meijer_kernel_density(x, 1) for x in pts], dtype=float).ravel()
    d_kernel = np.max(np.abs(kern - dn.bessel_hard_edge_density(pts)))
    grid = np.linspace(0.05, 3.95, 40)
    d_fc = np.max(np.abs(dn.fuss_catalan_density(grid, 1) - dn.mp_density(grid)))
    # moment index n counts from one: the (n-1)-th moment is the Fuss-Catalan number of n-1
    fc = lambda j, M: special.comb((M + 1) * j, j) / (M * j + 1)  # noqa: E731
    d_mom = max(max(abs(dn.fuss_catalan_moment_numeric(n, M) / fc(n - 1, M) - 1),
                    abs(dn.fuss_catalan_moment(n, M) / fc(n - 1, M) - 1))
                for n in range(1, 5) for M in (1, 2))
    ok = d_kernel < 1e-6 and d_fc < 1e-6 and d_mom < 1e-4
    criterion(7, ok, f"kernel {d_kernel:.1e}, FC density {d_fc:.1e} (< 1e-6); moments rel {d_mom:.1e} (< 1e-4)")
    assert ok


def test_criterion_8_fixed_point(tmp_path, criterion):
    cfg = make_config("freeprob-check",
                      overrides=dict(n=200, m=[1, 2], l=[1, 2, 4], trials=1000, seed=0, out=str(tmp_path),
                                     cache=False))
    fixed = run_experiment(cfg).summary["report"]["r_fixed_point"]
    ok = len(fixed) == 6 and all(v < 0.05 for v in fixed.values())
    criterion(8, ok, "max rel dev " + ", ".join(f"{t}={v:.4f}" for t, v in fixed.items()) + " (< 0.05)")
    assert ok


def test_criterion_9_poisson_limit(tmp_path, criterion):
    cfg = make_config("poisson-probe", overrides=dict(n=200, l=[2, 4, 8, 16], trials=2000, seed=0,
                                                      out=str(tmp_path), cache=False))
    probe = run_experiment(cfg).summary["probe"]
    within = [e["within"]["ks_poisson"] for e in probe]
    direct = [e["direct_sum"]["within"]["ks_poisson"] for e in probe]
    ok = all(a > b for a, b in zip(within, within[1:])) and within[-1] < 0.1
    criterion(9, ok, "within-cluster KS to Poisson L=2,4,8,16: " + ", ".join(f"{v:.4f}" for v in within)
              + " (strictly decreasing, last < 0.1); direct-sum reference " + ", ".join(f"{v:.4f}" for v in direct))
    assert ok


def test_criterion_10_worker_invariance(macro_run, fig_out, tmp_path, criterion):
    # the worker-1 output is the criterion-1 run, generated fresh before caching
    ref = {p.name: p.read_bytes() for p in sorted((fig_out / "macro").iterdir())}
    same = {}
    for w in (4, 8):
        out = tmp_path / f"w{w}"
        assert cli.main(["figure", "macro", "--workers", str(w), "--out", str(out), "--no-cache"]) == 0
        got = {p.name: p.read_bytes() for p in sorted((out / "macro").iterdir())}
        same[w] = got == ref
    ok = all(same.values()) and len(ref) >= 5
    criterion(10, ok, "macro outputs byte-identical to workers=1: " + ", ".join(f"w{w}={s}" for w, s in same.items()))
    assert ok
