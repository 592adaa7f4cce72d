"""Figure-level experiments and probes, with parallel, cached, reproducible sampling.

Trial t of a stream uses ``trial_rng(master_seed, stream, t)`` where the
stream name is ``"<group>:<kind>:n=..:m=..:l=..:alpha=..:sigma=.."`` and the
group is the experiment name unless the config sets ``stream``.  The
macroscopic, soft-edge and tail experiments share the group
``sum-configurations`` so they analyse the same draws.
Trials are cut into contiguous chunks, computed in worker processes with
single-threaded BLAS and reassembled in trial order, so every output is
the same for any worker count.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import json
import multiprocessing
from pathlib import Path
from typing import Callable

import numpy as np
from threadpoolctl import threadpool_limits

from . import densities as dn
from . import freeprob as fp
from .cache import EigenCache
from .config import RunConfig
from .ensembles import EnsembleSpec, sample, sample_gue, trial_rng
from .stats import (
    bin_edges,
    direct_sum_fast_eigenvalues,
    eigenvalues,
    gue_tridiagonal_eigenvalues,
    histogram,
    ks_against_density,
    ks_two_sample,
    ks_uniform,
    spacing_distribution,
    soft_edge_transform,
    stable_gue_tridiagonal_eigenvalues,
    tail_transform,
    within_cluster_indices,
    wigner_surmise_sample,
)

__all__ = [
    "RunResult",
    "stream_name",
    "record_length",
    "spectrum_of_trial",
    "generate_spectra",
    "bin_average",
    "run_experiment",
    "write_result",
    "reference_csv",
    "RUNNERS",
]


@dataclass
class RunResult:
    experiment: str
    summary: dict
    csv: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# sampling


def stream_name(experiment: str, spec: EnsembleSpec) -> str:
    return (f"{experiment}:{spec.kind}:n={spec.n}:m={spec.m}:l={spec.l}"
            f":alpha={spec.alpha!r}:sigma={spec.sigma!r}")


def record_length(spec: EnsembleSpec) -> int:
    return spec.n * spec.l if spec.kind == "inverse_ginibre_direct_sum" else spec.n


def spectrum_of_trial(spec: EnsembleSpec, rng: np.random.Generator, method: str = "dense") -> np.ndarray:
    """Sorted spectrum of one draw.

    ``method="fast"`` uses the tridiagonal GUE model for (stable) GUE and the
    bidiagonal model for M = 1 direct sums; other ensembles are always dense.
    """
    if method == "fast":
        if spec.kind == "gue":
            return gue_tridiagonal_eigenvalues(spec.n, spec.sigma, rng)
        if spec.kind == "stable_gue":
            return stable_gue_tridiagonal_eigenvalues(spec.n, spec.alpha, rng)
        if spec.kind == "inverse_ginibre_direct_sum" and spec.m == 1:
            return direct_sum_fast_eigenvalues(spec, rng)
    return eigenvalues(sample(spec, rng))


def _chunk(args):
    spec_dict, method, seed, stream, lo, hi = args
    spec = EnsembleSpec(**spec_dict)
    with threadpool_limits(limits=1):
        return np.stack([spectrum_of_trial(spec, trial_rng(seed, stream, t), method) for t in range(lo, hi)])


def generate_spectra(spec: EnsembleSpec, trials: int, seed: int, stream: str, workers: int = 1,
                     method: str = "dense", cache_dir=None) -> np.ndarray:
    """(trials, record_length) array of sorted spectra, trial order fixed."""
    cache = None
    if cache_dir is not None:
        cache = EigenCache(cache_dir, spec, seed, trials, record_length(spec), stream, method)
        hit = cache.load()
        if hit is not None:
            return hit
    spec_dict = spec.as_dict()
    if workers <= 1:
        out = _chunk((spec_dict, method, seed, stream, 0, trials))
    else:
        size = max(1, -(-trials // (4 * workers)))
        jobs = [(spec_dict, method, seed, stream, lo, min(lo + size, trials)) for lo in range(0, trials, size)]
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            out = np.concatenate(list(pool.map(_chunk, jobs)))
    if cache is not None:
        cache.store(out)
    return out


def _spectra(cfg: RunConfig, spec: EnsembleSpec, method: str | None = None) -> np.ndarray:
    cache_dir = cfg.output_dir / "cache" if cfg.params.get("cache", True) else None
    stream = stream_name(cfg.params.get("stream", cfg.experiment), spec)
    return generate_spectra(spec, cfg.trials, cfg.master_seed, stream,
                            cfg.workers, method or cfg.params["eigensolver"], cache_dir)


# ---------------------------------------------------------------------------
# binned comparison helpers

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def bin_average(f: Callable, edges) -> np.ndarray:
    """Average of f over each bin (8-point Gauss-Legendre)."""
    edges = np.asarray(edges, dtype=float)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return 0.5 * (vals * _GL_W[None, :]).sum(axis=1)


def _max_bin_dev(est, analytic, min_expected: float, mask=None):
    expected = analytic * est.total_weight * est.bin_width
    sel = expected >= min_expected
    if mask is not None:
        sel &= mask
    if not np.any(sel):
        return None, 0
    dev = np.abs(est.normalized_height[sel] / analytic[sel] - 1.0)
    return float(np.max(dev)), int(sel.sum())


def _fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return repr(x) if np.isfinite(x) else ("nan" if np.isnan(x) else ("inf" if x > 0 else "-inf"))


def density_csv(est, analytic=None) -> str:
    lines = [f"# normalization={est.normalization}; bin_left is the left bin edge",
             "variable_tag,bin_left,bin_width,count,normalized_height,analytic_value"]
    h = est.normalized_height
    for i in range(est.counts.size):
        a = None if analytic is None else analytic[i]
        lines.append(",".join([est.variable_tag, _fmt(est.bin_edges[i]), _fmt(est.bin_width[i]),
                               str(int(est.counts[i])), _fmt(h[i]), _fmt(a)]))
    return "\n".join(lines) + "\n"


def spacing_csv(series_list, width: float, hi: float) -> str:
    edges = bin_edges(0.0, hi, width)
    pois = bin_average(dn.poisson_spacing, edges)
    wig = bin_average(dn.wigner_surmise, edges)
    lines = ["# normalization=probability, spacings divided by their mean at each k; "
             "s_bin_left is the left bin edge",
             "k,s_bin_left,bin_width,normalized_height,poisson_ref,wigner_ref"]
    for ser in series_list:
        counts, _ = np.histogram(ser.values, bins=edges)
        h = counts / (max(ser.values.size, 1) * width)
        for i in range(counts.size):
            lines.append(",".join([str(ser.k), _fmt(edges[i]), _fmt(width), _fmt(h[i]), _fmt(pois[i]),
                                   _fmt(wig[i])]))
    return "\n".join(lines) + "\n"


def _comparison(ks, max_bin_dev, n_eff, **extra) -> dict:
    d = {"ks": None if ks is None else float(ks),
         "max_bin_dev": None if max_bin_dev is None else float(max_bin_dev),
         "n_eff": int(n_eff)}
    d.update(extra)
    return d


def _summary(cfg: RunConfig, comparisons: dict, **extra) -> dict:
    d = {"experiment": cfg.experiment, "config": cfg.echo(), "comparisons": comparisons}
    d.update(extra)
    return d


def _sum_specs(cfg: RunConfig):
    return [cfg.ensemble(m=m, l=l) for m in cfg.listed("m") for l in cfg.listed("l")]


def _tag(spec: EnsembleSpec) -> str:
    if spec.kind == "stable_gue":
        return f"a{spec.alpha:g}"
    return f"M{spec.m}_L{spec.l}" if spec.m != 1 else f"L{spec.l}"


# ---------------------------------------------------------------------------
# figure experiments


def _macro_density(m: int) -> dn.AnalyticDensity:
    return dn.get_density("inv-mp") if m == 1 else dn.get_density("inv-fuss-catalan", M=m)


def run_macro(cfg: RunConfig) -> RunResult:
    comps, csvs = {}, {}
    edges = bin_edges(cfg.range_lo, cfg.range_hi, cfg.bin_macro)
    for spec in _sum_specs(cfg):
        x = (_spectra(cfg, spec) * float(spec.n) ** spec.m).ravel()
        est = histogram(x, edges, "macroscopic", x.size, "probability")
        dens = _macro_density(spec.m)
        ana = bin_average(dens, edges)
        dev, nb = _max_bin_dev(est, ana, cfg.min_expected)
        comps[_tag(spec)] = _comparison(ks_against_density(x, dens), dev, x.size, bins_checked=nb)
        csvs[f"macro_{_tag(spec)}"] = density_csv(est, ana)
    return RunResult(cfg.experiment, _summary(cfg, comps), csvs)


def run_softedge(cfg: RunConfig) -> RunResult:
    comps, csvs = {}, {}
    edges = bin_edges(cfg.range_lo, cfg.range_hi, cfg.bin_micro)
    airy = dn.get_density("airy")
    ana = bin_average(airy, edges)
    for spec in _sum_specs(cfg):
        spectra = _spectra(cfg, spec)
        s = soft_edge_transform(spectra[:, :cfg.n_smallest], n=spec.n).ravel()
        est = histogram(s, edges, "soft_edge", cfg.trials, "per-draw")
        window = (cfg.window_lo, np.inf)
        dev, nb = _max_bin_dev(est, ana, 500.0, mask=edges[:-1] >= cfg.window_lo)
        n_in = int(np.sum(s >= cfg.window_lo))
        ks = ks_against_density(s, airy, window=window) if n_in else None
        n_eff = int(np.sum(s >= cfg.window_lo))
        comps[_tag(spec)] = _comparison(ks, dev, n_eff, bins_checked=nb, window_lo=cfg.window_lo)
        csvs[f"softedge_{_tag(spec)}"] = density_csv(est, ana)
    return RunResult(cfg.experiment, _summary(cfg, comps), csvs)


def _tail_reference(spec: EnsembleSpec) -> dn.AnalyticDensity:
    L, M = spec.l, spec.m
    if M == 1:
        f = lambda v: dn.tail_density_L(v, L)  # noqa: E731
    else:
        f = lambda v: L**2 * dn.inverse_meijer_density(L * np.asarray(v), M)  # noqa: E731
    return dn.AnalyticDensity(f"tail-M{M}-L{L}", f, (0.0, np.inf), "per-eigenvalue")


def _tail_values(spectra, spec, k):
    """Inverted tail variable of the k largest eigenvalues, largest first."""
    top = spectra[:, ::-1][:, :k]
    return tail_transform(top, spec.m, spec.n, inverted=True)


def run_tail(cfg: RunConfig) -> RunResult:
    comps, csvs = {}, {}
    k = cfg.n_largest
    edges = bin_edges(cfg.range_lo, cfg.range_hi, cfg.bin_micro)
    for spec in _sum_specs(cfg):
        spectra = _spectra(cfg, spec)
        v_all = _tail_values(spectra, spec, k + 1)
        v, v_next = v_all[:, :k].ravel(), v_all[:, k]
        est = histogram(v, edges, "inverted_tail", cfg.trials, "per-draw")
        ref = _tail_reference(spec)
        ana = bin_average(ref, edges)
        # a bin is complete when the (k+1)st eigenvalue almost never reaches it
        trunc = np.array([np.mean(v_next >= lo) for lo in edges[:-1]])
        complete = trunc <= cfg.truncation
        dev, nb = _max_bin_dev(est, ana, cfg.min_expected, mask=complete)
        lo = float(edges[:-1][complete][0]) if np.any(complete) else float(edges[-1])
        sel = v[(v >= lo) & (v <= edges[-1])]
        ks = ks_against_density(sel, ref, window=(lo, float(edges[-1]))) if sel.size else None
        comps[_tag(spec)] = _comparison(ks, dev, sel.size, bins_checked=nb, complete_from=lo)
        csvs[f"tail_{_tag(spec)}"] = density_csv(est, ana)
    return RunResult(cfg.experiment, _summary(cfg, comps), csvs)


def run_tail_individual(cfg: RunConfig) -> RunResult:
    comps, csvs = {}, {}
    k = cfg.n_largest
    fine = bin_edges(cfg.range_lo, cfg.range_hi, cfg.bin_macro)
    coarse = bin_edges(cfg.range_lo, cfg.range_hi, cfg.bin_micro)
    for spec in _sum_specs(cfg):
        v = _tail_values(_spectra(cfg, spec), spec, k)
        ref = _tail_reference(spec)
        for j in range(k):
            est = histogram(v[:, j], fine, "inverted_tail", cfg.trials, "per-draw")
            csvs[f"tail-individual_{_tag(spec)}_k{j + 1}"] = density_csv(est)
        # rank-run clusters of L consecutive eigenvalues from the top
        for c in range(k // spec.l):
            members = v[:, c * spec.l:(c + 1) * spec.l].ravel()
            est = histogram(members, fine, "inverted_tail", cfg.trials, "per-draw")
            csvs[f"tail-individual_{_tag(spec)}_cluster{c + 1}"] = density_csv(est)
            comps[f"{_tag(spec)}_cluster{c + 1}"] = _comparison(
                None, None, members.size, mean=float(members.mean()))
        est = histogram(v.ravel(), coarse, "inverted_tail", cfg.trials, "per-draw")
        csvs[f"tail-individual_{_tag(spec)}_all"] = density_csv(est, bin_average(ref, coarse))
    return RunResult(cfg.experiment, _summary(cfg, comps), csvs)


def tail_spacings(spectra, spec: EnsembleSpec, ks) -> dict:
    """SpacingSeries for each k, counted from the largest eigenvalue, in the z variable."""
    kmax = max(ks)
    z = tail_transform(spectra[:, ::-1][:, :kmax + 1], spec.m, spec.n)
    return {k: spacing_distribution(z, k, from_end="low") for k in ks}


def run_spacing_sum_vs_direct(cfg: RunConfig) -> RunResult:
    comps, csvs = {}, {}
    ks = list(range(1, cfg.k_max + 1))
    for spec in _sum_specs(cfg):
        direct = cfg.ensemble(kind="inverse_ginibre_direct_sum", m=spec.m, l=spec.l)
        s_sum = tail_spacings(_spectra(cfg, spec), spec, ks)
        s_dir = tail_spacings(_spectra(cfg, direct, cfg.eigensolver_direct), direct, ks)
        within = [k for k in within_cluster_indices(spec.l, len(ks)) if k in ks]
        for k in ks:
            comps[f"{_tag(spec)}_k{k}"] = _comparison(ks_two_sample(s_sum[k].values, s_dir[k].values), None,
                                                      s_sum[k].values.size, within_cluster=k in within)
            if k in within:
                rng = trial_rng(cfg.master_seed, stream_name(cfg.experiment, spec) + ":wigner", k)
                w = wigner_surmise_sample(s_sum[k].values.size, rng)
                comps[f"{_tag(spec)}_k{k}_wigner"] = _comparison(ks_two_sample(s_sum[k].values, w), None, w.size)
        csvs[f"spacing-sum_{_tag(spec)}"] = spacing_csv(s_sum.values(), cfg.bin_spacing, cfg.range_hi)
        csvs[f"spacing-direct_{_tag(spec)}"] = spacing_csv(s_dir.values(), cfg.bin_spacing, cfg.range_hi)
    return RunResult(cfg.experiment, _summary(cfg, comps), csvs)


def _stable_specs(cfg: RunConfig):
    return [cfg.ensemble(alpha=a) for a in cfg.listed("alpha")]


def run_cauchy_compare(cfg: RunConfig) -> RunResult:
    comps, csvs = {}, {}
    edges = bin_edges(cfg.range_lo, cfg.range_hi, cfg.bin_macro)
    spec = cfg.ensemble(alpha=1.0)
    x = (_spectra(cfg, spec) / np.sqrt(spec.n)).ravel()
    est = histogram(x, edges, "macroscopic", x.size, "probability")
    rho1 = dn.get_density("stable-semicircle", alpha=1.0)
    c = float(np.pi * dn.averaged_semicircle_at_zero(1.0))
    lor = dn.get_density("cauchy", c=c)
    a1, a2 = bin_average(rho1, edges), bin_average(lor, edges)
    comps["stable"] = _comparison(ks_against_density(x, rho1), _max_bin_dev(est, a1, 500.0)[0], x.size)
    comps["lorentz"] = _comparison(ks_against_density(x, lor), _max_bin_dev(est, a2, 500.0)[0], x.size)
    grid = np.linspace(0.0, 10.0, 101)
    rel = dn.averaged_semicircle(grid, 1.0) / dn.cauchy_density(grid, c) - 1.0
    csvs["cauchy-compare_stable"] = density_csv(est, a1)
    csvs["cauchy-compare_lorentz"] = density_csv(est, a2)
    extra = {"c": c, "relative_difference_at_2": float(rel[20]), "max_relative_difference": float(np.max(np.abs(rel)))}
    return RunResult(cfg.experiment, _summary(cfg, comps, curves=extra), csvs)


def run_stable_density(cfg: RunConfig) -> RunResult:
    comps, csvs = {}, {}
    edges = bin_edges(cfg.range_lo, cfg.range_hi, cfg.bin_macro)
    uedges = bin_edges(-0.5, 0.5, cfg.bin_unfolded)
    for spec in _stable_specs(cfg):
        raw = _spectra(cfg, spec) / np.sqrt(spec.n)
        x = raw.ravel()
        rho = dn.get_density("stable-semicircle", alpha=spec.alpha)
        ana = bin_average(rho, edges)
        est = histogram(x, edges, "macroscopic", x.size, "probability")
        dev, nb = _max_bin_dev(est, ana, 500.0)
        comps[f"{_tag(spec)}_macro"] = _comparison(ks_against_density(x, rho), dev, x.size, bins_checked=nb)
        mu = dn.unfolding_map(raw, spec.alpha)
        uest = histogram(mu.ravel(), uedges, "unfolded", mu.size, "probability")
        udev, unb = _max_bin_dev(uest, np.ones(uedges.size - 1), 500.0)
        comps[f"{_tag(spec)}_unfolded"] = _comparison(
            ks_uniform(mu.ravel()), udev, mu.size, bins_checked=unb,
            mean_largest=float(mu[:, -1].mean()), mean_smallest=float(mu[:, 0].mean()))
        csvs[f"stable-density_{_tag(spec)}_macro"] = density_csv(est, ana)
        csvs[f"stable-density_{_tag(spec)}_unfolded"] = density_csv(uest, np.ones(uedges.size - 1))
    return RunResult(cfg.experiment, _summary(cfg, comps), csvs)


def run_stable_spacing(cfg: RunConfig) -> RunResult:
    comps, csvs = {}, {}
    poisson, wigner = dn.get_density("poisson"), dn.get_density("wigner")
    for spec in _stable_specs(cfg):
        mu = dn.unfolding_map(_spectra(cfg, spec) / np.sqrt(spec.n), spec.alpha)
        ks_list = [k for k in cfg.listed("k") if 1 <= k < spec.n]
        low = [spacing_distribution(mu, k, "low") for k in ks_list]
        high = [spacing_distribution(mu, k, "high") for k in ks_list]
        for a, b in zip(low, high):
            comps[f"{_tag(spec)}_k{a.k}"] = _comparison(
                ks_two_sample(a.values, b.values), None, a.values.size,
                ks_poisson=ks_against_density(a.values, poisson), ks_wigner=ks_against_density(a.values, wigner))
        csvs[f"stable-spacing_{_tag(spec)}_low"] = spacing_csv(low, cfg.bin_spacing, cfg.range_hi)
        csvs[f"stable-spacing_{_tag(spec)}_high"] = spacing_csv(high, cfg.bin_spacing, cfg.range_hi)
    return RunResult(cfg.experiment, _summary(cfg, comps), csvs)


# ---------------------------------------------------------------------------
# probes


def _pooled_spacings(series) -> np.ndarray:
    vals = [s.values for s in series if s.values.size]
    return np.concatenate(vals) if vals else np.empty(0)


def run_transition_scan(cfg: RunConfig) -> RunResult:
    """Spacing statistics around lambda = N^gamma, from the tail into the bulk."""
    poisson, wigner = dn.get_density("poisson"), dn.get_density("wigner")
    spec = cfg.ensemble()
    spectra = _spectra(cfg, spec)
    z = tail_transform(spectra[:, ::-1], spec.m, spec.n)  # ascending in z
    scan = []
    for g in cfg.listed("gamma"):
        base = float(spec.n) ** g
        above = np.sum(spectra > base, axis=1)
        k0 = int(max(1, np.median(above)))
        ks_idx = [k for k in range(k0, k0 + cfg.window) if k < spec.n]
        pooled = _pooled_spacings(spacing_distribution(z, k, "low") for k in ks_idx)
        scan.append({"gamma": float(g), "base_lambda": base, "k_first": k0,
                     "ks_poisson": ks_against_density(pooled, poisson) if pooled.size else None,
                     "ks_wigner": ks_against_density(pooled, wigner) if pooled.size else None,
                     "n_eff": int(pooled.size)})
    summary = _summary(cfg, {}, scan=scan, critical_gamma=float(1 - spec.m))
    return RunResult(cfg.experiment, summary)


def poisson_probe_entry(spectra, spec: EnsembleSpec) -> dict:
    """Within- and between-cluster spacing statistics of the first clusters."""
    L = spec.l
    if L == 1:
        return {"L": 1, "within": None, "between": None, "empty": True}
    poisson, wigner = dn.get_density("poisson"), dn.get_density("wigner")
    series = tail_spacings(spectra, spec, list(range(1, L + 1)))
    within = _pooled_spacings(series[k] for k in within_cluster_indices(L, 1))
    between = series[L].values
    return {"L": L, "empty": False,
            "within": {"ks_poisson": ks_against_density(within, poisson),
                       "ks_wigner": ks_against_density(within, wigner), "n_eff": int(within.size)},
            "between": {"ks_poisson": ks_against_density(between, poisson),
                        "ks_wigner": ks_against_density(between, wigner), "n_eff": int(between.size)}}


def run_poisson_probe(cfg: RunConfig) -> RunResult:
    """Within-cluster statistics of the sum, with the direct sum of the same L as a reference."""
    entries = []
    for spec in _sum_specs(cfg):
        entry = poisson_probe_entry(_spectra(cfg, spec) if spec.l > 1 else None, spec)
        if spec.l > 1:
            direct = cfg.ensemble(kind="inverse_ginibre_direct_sum", m=spec.m, l=spec.l)
            method = cfg.params.get("eigensolver_direct", cfg.eigensolver)
            ref = poisson_probe_entry(_spectra(cfg, direct, method), direct)
            entry["direct_sum"] = {"within": ref["within"], "between": ref["between"]}
        entries.append(entry)
    return RunResult(cfg.experiment, _summary(cfg, {}, probe=entries))


def run_saturation_probe(cfg: RunConfig) -> RunResult:
    report = []
    for a in cfg.listed("alpha"):
        rows = []
        for n in cfg.listed("n"):
            spec = cfg.ensemble(n=n, alpha=a)
            mu = dn.unfolding_map(_spectra(cfg, spec) / np.sqrt(n), a)
            hi, lo = mu[:, -1], mu[:, 0]
            rows.append({"n": int(n), "mean_largest": float(hi.mean()), "mean_smallest": float(lo.mean()),
                         "se_largest": float(hi.std(ddof=1) / np.sqrt(hi.size)) if hi.size > 1 else None,
                         "mirror_gap": float(hi.mean() + lo.mean())})
        incs = [rows[i + 1]["mean_largest"] - rows[i]["mean_largest"] for i in range(len(rows) - 1)]
        report.append({"alpha": float(a), "rows": rows, "increments": incs})
    return RunResult(cfg.experiment, _summary(cfg, {}, probe=report))


def _gue_sampler(n):
    return lambda rng: sample_gue(n, 1.0, rng).entries


def run_freeprob_check(cfg: RunConfig) -> RunResult:
    n = cfg.listed("n")[0]
    report = {}
    gue = cfg.ensemble(kind="gue", m=1, l=1)
    g = fp.EmpiricalGreen((_spectra(cfg, gue) / np.sqrt(n)).ravel(), cfg.trials, n)
    est = g.estimate([2j, 1 + 0.5j, 100.0 + 1j])
    oracle = (2j - np.sqrt(-8 + 0j)) / 2
    y = fp.DEFAULT_Y_GRID
    report["semicircle"] = {
        "green_2i_rel_dev": float(abs(est.values[0] - oracle) / abs(oracle)),
        "herglotz": est.herglotz(),
        "r_rel_dev": fp.max_relative_deviation(fp.r_transform_curve(g, y), y),
        "scaling_mu2_rel_dev": fp.check_r_scaling(g, 2.0, 0.5 * y, r_of_a=lambda yy: yy),
    }
    report["additivity_gue"] = fp.check_r_additivity(_gue_sampler(n), _gue_sampler(n), y,
                                                     trials=min(cfg.trials, 1000), scale=1 / np.sqrt(n),
                                                     seed=cfg.master_seed, r_guess=lambda yy: yy)
    fixed = {}
    s_checks = {}
    for spec in _sum_specs(cfg):
        pool = fp.EmpiricalGreen((_spectra(cfg, spec) * float(n) ** spec.m).ravel(), cfg.trials, n)
        fixed[_tag(spec)] = fp.r_fixed_point_deviation(pool, spec.m)
        if spec.l == 1:
            chis = cfg.listed("chi")
            vals = [fp.s_transform_numeric(lambda yy: fp.r_transform_numeric(pool, yy), c) for c in chis]
            ref = [(-c) ** spec.m for c in chis]
            s_checks[f"M{spec.m}"] = {"chi": chis, "S": vals,
                                      "rel_dev": float(np.max(np.abs(np.array(vals) / ref - 1.0)))}
    report["r_fixed_point"] = fixed
    report["s_transform"] = s_checks
    ident = fp.EmpiricalGreen(np.ones(n), 1, n)
    report["s_identity"] = fp.s_transform_numeric(lambda yy: fp.r_transform_numeric(ident, yy), -0.5)
    return RunResult(cfg.experiment, _summary(cfg, {}, report=report))


RUNNERS = {
    "macro": run_macro,
    "softedge": run_softedge,
    "tail": run_tail,
    "tail-individual": run_tail_individual,
    "spacing-sum-vs-direct": run_spacing_sum_vs_direct,
    "cauchy-compare": run_cauchy_compare,
    "stable-density": run_stable_density,
    "stable-spacing": run_stable_spacing,
    "transition-scan": run_transition_scan,
    "poisson-probe": run_poisson_probe,
    "saturation-probe": run_saturation_probe,
    "freeprob-check": run_freeprob_check,
}


def run_experiment(cfg: RunConfig) -> RunResult:
    return RUNNERS[cfg.experiment](cfg)


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serialisable: {type(o)}")


def write_result(result: RunResult, out_dir) -> list[Path]:
    """Write CSVs and summary.json under out_dir/<experiment>/ (single-threaded)."""
    d = Path(out_dir) / result.experiment
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in sorted(result.csv.items()):
        p = d / f"{name}.csv"
        p.write_text(text)
        written.append(p)
    p = d / "summary.json"
    p.write_text(json.dumps(result.summary, indent=2, sort_keys=True, default=_jsonable, allow_nan=True) + "\n")
    written.append(p)
    return written


def reference_csv(name: str, lo: float, hi: float, points: int, **params) -> str:
    """(lambda, rho) pairs of a registered density on a uniform grid."""
    d = dn.get_density(name, **params)
    x = np.linspace(lo, hi, points)
    y = np.asarray(d(x), dtype=float)
    lines = [f"# density={d.name}; normalization={d.normalization}", "lambda,rho"]
    lines += [f"{_fmt(a)},{_fmt(b)}" for a, b in zip(x, y)]
    return "\n".join(lines) + "\n"
