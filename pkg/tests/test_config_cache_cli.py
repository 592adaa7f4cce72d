import csv
import json
import warnings

import numpy as np
import pytest

from tailstats import cli
from tailstats.cache import CacheMismatch, EigenCache
from tailstats.config import InvalidConfig, make_config, parse_config_text
from tailstats.ensembles import EnsembleSpec
from tailstats.experiments import generate_spectra, reference_csv, stream_name
from tailstats.special import NonConvergence

DENSITY_HEADER = ["variable_tag", "bin_left", "bin_width", "count", "normalized_height", "analytic_value"]
SPACING_HEADER = ["k", "s_bin_left", "bin_width", "normalized_height", "poisson_ref", "wigner_ref"]


def test_parse_flat_config():
    text = """
    # a comment
    experiment = macro
    n = 50            ; inline comment
    l = 1, 2
    trials = 12
    bin_macro = 0.2
    cache = off
    out = some/dir
    """
    d = parse_config_text(text)
    assert d == {"experiment": "macro", "n": [50], "l": [1, 2], "trials": 12, "bin_macro": 0.2,
                 "cache": False, "out": "some/dir"}


def test_bad_values_rejected():
    with pytest.raises(InvalidConfig):
        parse_config_text("trials = many")
    with pytest.raises(InvalidConfig):
        parse_config_text("cache = perhaps")
    with pytest.raises(InvalidConfig):
        parse_config_text("no equals sign here")


def test_flag_wins_over_file():
    cfg = make_config("macro", {"trials": 50, "seed": 3}, {"trials": 7, "seed": None})
    assert cfg.trials == 7 and cfg.master_seed == 3
    assert cfg.listed("l") == [1, 2, 3, 4]
    assert cfg.ensemble(l=2) == EnsembleSpec("inverse_ginibre_sum", 100, m=1, l=2)


@pytest.mark.parametrize("bad", [{"trials": 0}, {"workers": 0}, {"bin_macro": -0.1}, {"seed": -1},
                                 {"eigensolver": "magic"}, {"experiment": "tail"}, {"l": [0]}])
def test_invalid_configs(bad):
    with pytest.raises(InvalidConfig):
        make_config("macro", bad)


def test_unknown_experiment():
    with pytest.raises(InvalidConfig):
        make_config("fig99")


def test_cli_config_errors_exit_2(tmp_path, capsys):
    cfgfile = tmp_path / "c.cfg"
    cfgfile.write_text("trials = 0\n")
    assert cli.main(["figure", "macro", "--config", str(cfgfile)]) == 2
    assert cli.main(["figure", "macro", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert cli.main(["figure", "macro", "--n", "ten"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["figure", "not-a-figure"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["figure", "macro", "--trials", "x"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cli_nonconvergence_exit_3(monkeypatch, tmp_path, capsys):
    def boom(cfg):
        raise NonConvergence("contour did not close")

    monkeypatch.setattr(cli, "run_experiment", boom)
    assert cli.main(["figure", "macro", "--trials", "1", "--out", str(tmp_path)]) == 3
    assert "non-convergence" in capsys.readouterr().err


def test_reference_csv(tmp_path):
    out = tmp_path / "mp.csv"
    assert cli.main(["reference", "mp", "--lo", "0", "--hi", "4", "--points", "5", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#") and lines[1] == "lambda,rho"
    rows = [tuple(map(float, l.split(","))) for l in lines[2:]]
    assert len(rows) == 5 and rows[2][0] == 2.0
    assert rows[2][1] == pytest.approx(1 / (2 * np.pi))
    text = reference_csv("tail", 0.5, 0.5 + 1e-9, 2, L=2)
    assert float(text.splitlines()[2].split(",")[1]) == pytest.approx(3.4261, abs=1e-4)
    assert cli.main(["reference", "tail", "--param", "Q=2"]) == 2
    assert cli.main(["reference", "mp", "--lo", "3", "--hi", "1"]) == 2


def test_cache_round_trip_is_bit_exact(tmp_path):
    spec = EnsembleSpec("inverse_ginibre_sum", 12, l=2)
    stream = stream_name("cache-test", spec)
    fresh = generate_spectra(spec, 6, 5, stream)
    first = generate_spectra(spec, 6, 5, stream, cache_dir=tmp_path)
    files = list(tmp_path.glob("*.eig"))
    assert len(files) == 1
    raw = files[0].read_bytes()
    assert raw[:8] == b"TSEIGCAC"
    with warnings.catch_warnings():
        warnings.simplefilter("error", CacheMismatch)
        again = generate_spectra(spec, 6, 5, stream, cache_dir=tmp_path)
    assert np.array_equal(fresh, first) and np.array_equal(first, again)
    assert fresh.tobytes() == again.tobytes()


def test_cache_mismatch_warns_and_regenerates(tmp_path):
    spec = EnsembleSpec("gue", 5)
    stream = stream_name("cache-test", spec)
    generate_spectra(spec, 4, 0, stream, cache_dir=tmp_path)
    with pytest.warns(CacheMismatch):
        other = generate_spectra(spec, 4, 1, stream, cache_dir=tmp_path)
    assert np.array_equal(other, generate_spectra(spec, 4, 1, stream))
    # the file now holds the seed-1 request
    cache = EigenCache(tmp_path, spec, 1, 4, 5, stream)
    assert np.array_equal(cache.load(), other)
    path = cache.path
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.warns(CacheMismatch, match="truncated"):
        assert cache.load() is None
    with pytest.raises(ValueError):
        cache.store(np.zeros((3, 5)))


def _check_density_csv(path):
    with open(path) as fh:
        first = fh.readline()
        assert first.startswith("# normalization=")
        rows = list(csv.reader(fh))
    assert rows[0] == DENSITY_HEADER
    for r in rows[1:]:
        assert len(r) == 6 and int(r[3]) >= 0 and float(r[2]) > 0


def _check_spacing_csv(path):
    with open(path) as fh:
        assert fh.readline().startswith("# normalization=")
        rows = list(csv.reader(fh))
    assert rows[0] == SPACING_HEADER
    assert all(len(r) == 6 for r in rows[1:])


@pytest.mark.parametrize("name", cli.FIGURES + cli.PROBES)
def test_smoke_one_trial(name, tmp_path, capsys):
    args = ([name] if name in cli.PROBES else ["figure", name]) + ["--trials", "1", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    d = tmp_path / name
    summary = json.loads((d / "summary.json").read_text())
    assert summary["experiment"] == name
    assert summary["config"]["trials"] == 1
    for comp in summary["comparisons"].values():
        assert set(comp) >= {"ks", "max_bin_dev", "n_eff"}
    for f in d.glob("*.csv"):
        (_check_spacing_csv if "spacing" in f.name else _check_density_csv)(f)
    capsys.readouterr()


def test_outputs_identical_across_worker_counts(tmp_path):
    cfgfile = tmp_path / "small.cfg"
    cfgfile.write_text("n = 20\nl = 1, 2\ntrials = 24\n")
    outs = []
    for w in (1, 3):
        out = tmp_path / f"w{w}"
        assert cli.main(["figure", "macro", "--config", str(cfgfile), "--workers", str(w), "--out", str(out),
                         "--no-cache"]) == 0
        outs.append({p.name: p.read_bytes() for p in sorted((out / "macro").iterdir())})
    assert outs[0] == outs[1] and len(outs[0]) >= 3
