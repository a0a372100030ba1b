"""End-to-end runs of the command-line program on small instances."""

import time

import numpy as np
import pytest

from sparsespectra import DiscreteMeasure, OnePlusExponential, parse_family
from sparsespectra.cli import main, parse_measure_spec


def read_rows(path, header):
    """Data rows of a CSV written by the CLI, past '#' metadata lines."""
    lines = path.read_text().splitlines()
    meta = {}
    k = 0
    while lines[k].startswith("#"):
        key, _, value = lines[k][1:].strip().partition("=")
        meta[key] = value
        k += 1
    assert lines[k] == header
    return meta, [line.split(",") for line in lines[k + 1:]]


# -- measure spec grammar ---------------------------------------------------


def test_spec_point_mass():
    m = parse_measure_spec("delta:1")
    assert m == DiscreteMeasure.point_mass(1.0)


def test_spec_atoms():
    m = parse_measure_spec("atoms:0.5=0.75,2.5=0.25")
    assert m.locations == (0.5, 2.5)
    assert m.weights == (0.75, 0.25)


def test_spec_two_atom():
    m = parse_measure_spec("two-atom:alpha=7,beta=0.5")
    assert m.locations == (0.5, 7.0)
    assert m.mean() == pytest.approx(1.0, abs=1e-12)


def test_spec_families():
    law = parse_measure_spec("one-plus-exponential:rate=2")
    assert law == parse_family("one-plus-exponential(rate=2)")
    assert isinstance(parse_measure_spec("uniform:low=0,high=2"), type(parse_family("uniform(low=0,high=2)")))


def test_spec_groups():
    groups = parse_measure_spec(
        "groups:sqrt@one-plus-exponential(rate=1)@sqrt;rest@uniform(low=0,high=2)@log")
    assert len(groups) == 2
    assert groups[0].count == "sqrt"
    assert groups[1].count == "rest"


def test_spec_file(tmp_path):
    f = tmp_path / "law.txt"
    f.write_text("# comment\n0.5 0.25\n1.5 0.75\n")
    m = parse_measure_spec(str(f))
    assert m.locations == (0.5, 1.5)
    assert m.weights == (0.25, 0.75)


def test_spec_rejects_unknown_family():
    with pytest.raises(ValueError):
        parse_measure_spec("zipf:s=2")


# -- sample ------------------------------------------------------------------


def test_sample_regular_graph_edge_count(tmp_path):
    rc = main(["sample", "--measure", "delta:1", "--n", "100", "--omega", "10",
               "--seed", "0", "--out", str(tmp_path)])
    assert rc == 0
    edges = tmp_path / "sample_edges.txt"
    meta_lines = [l for l in edges.read_text().splitlines() if l.startswith("#")]
    assert any(l.endswith("edge_total=500") for l in meta_lines)
    assert (tmp_path / "sample_degrees.txt").exists()


def test_sample_seed_repetition_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        rc = main(["sample", "--measure", "one-plus-exponential:rate=1",
                   "--n", "64", "--seed", "7", "--out", str(out)])
        assert rc == 0
    assert (a / "sample_edges.txt").read_bytes() == (b / "sample_edges.txt").read_bytes()
    assert (a / "sample_degrees.txt").read_bytes() == (b / "sample_degrees.txt").read_bytes()


def test_sample_different_seeds_differ(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for seed, out in (("1", a), ("2", b)):
        main(["sample", "--measure", "one-plus-exponential:rate=1",
              "--n", "64", "--seed", seed, "--out", str(out)])
    assert (a / "sample_edges.txt").read_bytes() != (b / "sample_edges.txt").read_bytes()


def test_sample_poissonized_runs(tmp_path):
    rc = main(["sample", "--measure", "delta:1", "--n", "50", "--seed", "3",
               "--poissonized", "--out", str(tmp_path)])
    assert rc == 0


# -- esd ----------------------------------------------------------------------


def test_esd_writes_spectrum_and_histogram(tmp_path):
    rc = main(["esd", "--measure", "one-plus-exponential:rate=1", "--n", "80",
               "--seed", "1", "--out", str(tmp_path)])
    assert rc == 0
    meta, rows = read_rows(tmp_path / "spectrum.csv", "eigenvalue")
    assert len(rows) == 80
    eigs = [float(r[0]) for r in rows]
    assert eigs == sorted(eigs, reverse=True)
    assert meta["command"] == "esd"
    _, hist_rows = read_rows(tmp_path / "histogram.csv", "bin_left,bin_right,density")
    assert hist_rows


# -- density --------------------------------------------------------------------


def test_density_unit_mass_and_metadata(tmp_path):
    rc = main(["density", "--measure", "delta:1", "--grid", "2.5:201",
               "--out", str(tmp_path)])
    assert rc == 0
    meta, rows = read_rows(tmp_path / "density.csv", "x,rho")
    assert len(rows) == 201
    assert 0.99 <= float(meta["mass"]) <= 1.01
    xs = np.array([float(r[0]) for r in rows])
    rho = np.array([float(r[1]) for r in rows])
    assert np.array_equal(xs, -xs[::-1])
    assert np.array_equal(rho, rho[::-1])


def test_density_quantized_family(tmp_path):
    rc = main(["density", "--measure", "one-plus-exponential:rate=1",
               "--grid", "3.0:101", "--quantize", "256", "--out", str(tmp_path)])
    assert rc == 0
    meta, _ = read_rows(tmp_path / "density.csv", "x,rho")
    assert meta["nu_atoms"] == "256"
    assert 0.99 <= float(meta["mass"]) <= 1.01


def test_density_rejects_groups_spec(tmp_path):
    rc = main(["density", "--measure",
               "groups:4@uniform(low=0,high=2)@sqrt;rest@uniform(low=0,high=2)@log",
               "--out", str(tmp_path)])
    assert rc == 2


# -- support -----------------------------------------------------------------------


def test_support_two_atom_files(tmp_path):
    rc = main(["support", "--measure", "two-atom:alpha=7,beta=0.5",
               "--out", str(tmp_path)])
    assert rc == 0
    _, sq = read_rows(tmp_path / "support_square_law.csv", "left,right")
    assert len(sq) == 2
    assert float(sq[1][0]) == pytest.approx(0.81885532072214, abs=1e-8)
    _, sym = read_rows(tmp_path / "support_symmetric.csv", "left,right")
    assert len(sym) == 3
    _, trace = read_rows(tmp_path / "xi_trace.csv", "gap,v,xi,xi_prime")
    assert {r[0] for r in trace} == {"0", "1", "2"}
    assert len(trace) == 3 * 400


def test_support_min_gap_flag(tmp_path):
    rc = main(["support", "--measure", "two-atom:alpha=7,beta=0.5",
               "--min-gap", "0.01", "--out", str(tmp_path)])
    assert rc == 0
    _, sq = read_rows(tmp_path / "support_square_law.csv", "left,right")
    assert len(sq) == 1


# -- phase diagram --------------------------------------------------------------------


def test_phase_diagram_default_grid_is_fast(tmp_path):
    t0 = time.monotonic()
    rc = main(["phase-diagram", "--out", str(tmp_path)])
    elapsed = time.monotonic() - t0
    assert rc == 0
    assert elapsed < 5.0
    meta, rows = read_rows(tmp_path / "phase_diagram.csv", "alpha,beta,has_hole,discriminant")
    assert len(rows) == 200 * 200


def test_phase_diagram_row_flips_once_near_threshold(tmp_path):
    rc = main(["phase-diagram", "--alpha-range", "2:12:101",
               "--beta-range", "0.5:0.5:1", "--out", str(tmp_path)])
    assert rc == 0
    _, rows = read_rows(tmp_path / "phase_diagram.csv", "alpha,beta,has_hole,discriminant")
    flags = [int(r[2]) for r in rows]
    alphas = [float(r[0]) for r in rows]
    flips = [k for k in range(1, len(flags)) if flags[k] != flags[k - 1]]
    assert len(flips) == 1
    assert alphas[flips[0] - 1] < 6.770983152794611 < alphas[flips[0]]


# -- compare ---------------------------------------------------------------------------


def test_compare_small_regular_graph(tmp_path):
    rc = main(["compare", "--measure", "delta:1", "--n", "400", "--seed", "2",
               "--single-adjacency", "--out", str(tmp_path)])
    assert rc == 0
    meta, rows = read_rows(tmp_path / "compare_spectrum.csv", "eigenvalue")
    assert len(rows) == 400
    assert float(meta["kolmogorov"]) < 0.2
    meta2, _ = read_rows(tmp_path / "compare_density.csv", "x,rho")
    assert meta2["kolmogorov"] == meta["kolmogorov"]


# -- couple ----------------------------------------------------------------------------


def test_couple_outputs_and_metric_relations(tmp_path):
    rc = main(["couple", "--measure", "two-atom:alpha=4,beta=0.5", "--n", "300",
               "--seed", "5", "--out", str(tmp_path)])
    assert rc == 0
    _, rows = read_rows(tmp_path / "couple_summary.csv", "metric,value")
    metrics = {r[0]: float(r[1]) for r in rows}
    assert set(metrics) == {"kolmogorov", "wasserstein1", "hoffman_wielandt_bound"}
    assert 0 <= metrics["wasserstein1"] <= metrics["hoffman_wielandt_bound"]
    assert 0 <= metrics["kolmogorov"] <= 1
    _, conf = read_rows(tmp_path / "couple_configuration.csv", "eigenvalue")
    _, pois = read_rows(tmp_path / "couple_poissonized.csv", "eigenvalue")
    assert len(conf) == len(pois) == 300


# -- config files ------------------------------------------------------------------------


def test_config_file_supplies_and_flags_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# demo config\nmeasure=delta:1\nn=60\nseed=9\nomega=6\n")
    out1 = tmp_path / "o1"
    rc = main(["sample", "--config", str(cfg), "--out", str(out1)])
    assert rc == 0
    meta_lines = (out1 / "sample_edges.txt").read_text().splitlines()
    assert any(l == "# edge_total=180" for l in meta_lines if l.startswith("#"))

    out2 = tmp_path / "o2"
    rc = main(["sample", "--config", str(cfg), "--n", "40", "--out", str(out2)])
    assert rc == 0
    body = (out2 / "sample_edges.txt").read_text()
    assert "# edge_total=120" in body  # flag --n beat the config's 60


def test_missing_required_parameter_exits(tmp_path):
    with pytest.raises(SystemExit):
        main(["sample", "--measure", "delta:1", "--out", str(tmp_path)])


def test_bad_measure_returns_error_code(tmp_path):
    rc = main(["density", "--measure", "atoms:not-a-number=1", "--out", str(tmp_path)])
    assert rc == 2
