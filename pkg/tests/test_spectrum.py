"""Eigenvalue extraction, empirical spectral measures, matrix-distance bounds."""

import math

import numpy as np
import pytest

from sparsespectra import (
    DegreeSequence,
    Multigraph,
    SymmetricMatrix,
    eigenvalues_symmetric,
    esd,
    freedman_diaconis_histogram,
    sample_configuration,
    scaled_adjacency,
    trace_distance_bound,
    wasserstein1,
    write_histogram_csv,
    write_spectrum_csv,
)


def path_graph(n):
    i = np.arange(n - 1)
    return Multigraph(n, i, i + 1, np.ones(n - 1, dtype=np.int64),
                      np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))


def test_path_three_eigenvalues():
    eigs = eigenvalues_symmetric(path_graph(3).adjacency())
    assert np.allclose(eigs, [math.sqrt(2), 0.0, -math.sqrt(2)], atol=1e-12)


def test_single_edge_with_isolated_vertex():
    g = Multigraph(3, np.array([0]), np.array([1]), np.array([1]),
                   np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    eigs = eigenvalues_symmetric(g.adjacency())
    assert np.allclose(eigs, [1.0, 0.0, -1.0], atol=1e-12)


def test_zero_matrix():
    eigs = eigenvalues_symmetric(np.zeros((4, 4)))
    assert np.array_equal(eigs, np.zeros(4))


def test_descending_order_and_moment_identities():
    rng = np.random.default_rng(0)
    for _ in range(5):
        raw = rng.normal(size=(40, 40))
        a = 0.5 * (raw + raw.T)
        eigs = eigenvalues_symmetric(a)
        assert np.all(np.diff(eigs) <= 0)
        assert math.isclose(eigs.sum(), np.trace(a), abs_tol=1e-8 * 40)
        assert math.isclose((eigs ** 2).sum(), np.sum(a * a), rel_tol=1e-10)


def test_esd_of_zero_matrix_is_point_mass_at_zero():
    m = esd(np.zeros((6, 6)))
    assert m.locations == (0.0,)
    assert m.weights == (1.0,)


def test_esd_accepts_raw_eigenvalues():
    m = esd([1.0, 1.0, -1.0, 3.0])
    assert m.locations == (-1.0, 1.0, 3.0)
    assert m.weights == (0.25, 0.5, 0.25)


def test_esd_second_moment_exact_on_simple_graph():
    # simple loopless graph: second moment of the scaled ESD equals 1 exactly
    g = path_graph(8)
    seq = g.degree_sequence()
    eigs = eigenvalues_symmetric(scaled_adjacency(g, seq.omega))
    second = float((eigs ** 2).sum()) / g.n
    assert math.isclose(second, 1.0, rel_tol=1e-12)


def test_esd_second_moment_near_one_for_sampled_graph():
    # loops and multi-edges perturb the identity; stays within 5% at this size
    seq = DegreeSequence.from_degrees([12] * 400)
    g = sample_configuration(seq, seed=1)
    eigs = eigenvalues_symmetric(scaled_adjacency(g, seq.omega))
    second = float((eigs ** 2).sum()) / g.n
    assert abs(second - 1.0) < 0.05


def test_trace_bound_of_identical_matrices_is_zero():
    a = SymmetricMatrix(np.eye(3))
    assert trace_distance_bound(a, a) == 0.0


def test_trace_bound_of_shifted_matrix():
    rng = np.random.default_rng(7)
    raw = rng.normal(size=(10, 10))
    a = SymmetricMatrix(0.5 * (raw + raw.T))
    eps = 0.125
    b = SymmetricMatrix(a.data + eps * np.eye(10))
    assert math.isclose(trace_distance_bound(a, b), eps, rel_tol=1e-12)


def test_trace_bound_rejects_mismatched_orders():
    with pytest.raises(ValueError):
        trace_distance_bound(SymmetricMatrix(np.eye(2)), SymmetricMatrix(np.eye(3)))


def test_trace_bound_invariant_under_joint_permutation():
    rng = np.random.default_rng(3)
    raw = rng.normal(size=(12, 12))
    a = 0.5 * (raw + raw.T)
    raw = rng.normal(size=(12, 12))
    b = 0.5 * (raw + raw.T)
    perm = rng.permutation(12)
    val = trace_distance_bound(SymmetricMatrix(a), SymmetricMatrix(b))
    val_p = trace_distance_bound(SymmetricMatrix(a[np.ix_(perm, perm)]),
                                 SymmetricMatrix(b[np.ix_(perm, perm)]))
    assert math.isclose(val, val_p, rel_tol=1e-12)


def test_trace_bound_dominates_wasserstein():
    # over random pairs, sqrt(tr((A-B)^2)/n) >= W1(esd(A), esd(B))
    rng = np.random.default_rng(11)
    n = 50
    for _ in range(100):
        raw = rng.normal(size=(n, n))
        a = 0.5 * (raw + raw.T)
        b = a + 0.3 * rng.normal() * np.eye(n) + 0.1 * np.diag(rng.normal(size=n))
        b = 0.5 * (b + b.T)
        bound = trace_distance_bound(SymmetricMatrix(a), SymmetricMatrix(b))
        w1 = wasserstein1(esd(a), esd(b))
        assert bound >= w1 - 1e-12


def test_histogram_density_integrates_to_one():
    rng = np.random.default_rng(2)
    vals = rng.normal(size=2000)
    left, right, density = freedman_diaconis_histogram(vals)
    assert math.isclose(float(((right - left) * density).sum()), 1.0, rel_tol=1e-12)
    assert len(left) > 10  # FD rule picks a reasonable bin count at this size


def test_histogram_explicit_bins_and_empty_rejection():
    left, right, density = freedman_diaconis_histogram([0.0, 1.0, 2.0], bins=2)
    assert len(left) == 2
    with pytest.raises(ValueError):
        freedman_diaconis_histogram([])


def test_histogram_constant_sample():
    left, right, density = freedman_diaconis_histogram([1.0, 1.0, 1.0])
    assert len(left) == 1


def test_spectrum_csv_round_trip(tmp_path):
    path = tmp_path / "spec.csv"
    eigs = np.array([2.5, 0.0, -1.25])
    write_spectrum_csv(path, eigs, metadata={"n": 3, "seed": 0})
    lines = path.read_text().splitlines()
    assert lines[0] == "# n=3"
    assert lines[1] == "# seed=0"
    assert lines[2] == "eigenvalue"
    assert [float(x) for x in lines[3:]] == [2.5, 0.0, -1.25]


def test_histogram_csv_header(tmp_path):
    path = tmp_path / "hist.csv"
    write_histogram_csv(path, [0.0, 0.5, 1.0, 1.5], bins=2)
    lines = path.read_text().splitlines()
    assert lines[0] == "bin_left,bin_right,density"
    assert len(lines) == 3
