import math
from fractions import Fraction

import numpy as np
import pytest

import coprime_spectra as cs
from coprime_spectra.simulate import _law_values

from conftest import monte_carlo_se


def test_generation_is_deterministic():
    spec = cs.EnsembleSpec(n=50, mask="visible", seed=123, replicas=3)
    first = cs.generate_matrix(spec, 1)
    again = cs.generate_matrix(spec, 1)
    assert np.array_equal(first, again)
    assert not np.array_equal(first, cs.generate_matrix(spec, 2))


def test_masks_partition_the_matrix():
    for seed in (0, 9):
        base = dict(n=40, entry_law="rademacher", seed=seed, replicas=1)
        visible = cs.generate_matrix(cs.EnsembleSpec(mask="visible", **base), 0)
        invisible = cs.generate_matrix(cs.EnsembleSpec(mask="invisible", **base), 0)
        plain = cs.generate_matrix(cs.EnsembleSpec(mask="none", **base), 0)
        assert np.array_equal(visible + invisible, plain)


def test_mask_zero_patterns():
    spec = cs.EnsembleSpec(n=12, mask="visible", seed=4)
    visible = cs.generate_matrix(spec, 0)
    assert visible[1, 3] == 0.0  # indices (2, 4): common factor 2
    assert visible[1, 2] != 0.0  # indices (2, 3): coprime
    invisible = cs.generate_matrix(cs.EnsembleSpec(n=12, mask="invisible", seed=4), 0)
    assert np.all(invisible[0, :] == 0.0)  # gcd(1, j) is always 1
    assert np.all(invisible[:, 0] == 0.0)


def test_matrices_are_symmetric():
    mat = cs.generate_matrix(cs.EnsembleSpec(n=31, seed=8), 0)
    assert np.array_equal(mat, mat.T)


def test_mask_density_values():
    assert cs.mask_density(1, "visible") == 1
    assert cs.mask_density(10, "visible") == Fraction(63, 100)
    assert cs.mask_density(10, "invisible") == Fraction(37, 100)
    assert cs.mask_density(10, "none") == 1
    n = 10**5
    assert abs(float(cs.mask_density(n, "visible")) - 6 / math.pi**2) <= 10 * math.log(n) / n


def test_entry_law_moments():
    u = cs.entry_uniforms(3, 0, 400_000)
    for law, var in (("gaussian", 1.0), ("rademacher", 1.0), ("uniform", 1.0)):
        values = _law_values(u, law)
        se = monte_carlo_se(values)
        assert abs(values.mean()) <= 3 * se
        assert values.var() == pytest.approx(var, abs=0.01)
    assert np.all(np.abs(_law_values(u, "rademacher")) == 1.0)
    assert np.all(np.abs(_law_values(u, "uniform")) <= math.sqrt(3))


def test_eigenvalues_golden():
    w = cs.eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert w == pytest.approx([-1.0, 1.0])
    diag = np.diag([3.0, -1.0, 2.0])
    assert cs.eigenvalues(diag) == pytest.approx([-1.0, 2.0, 3.0])


def test_eigenvalues_trace_identity():
    rng = np.random.default_rng(0)
    mat = rng.standard_normal((50, 50))
    mat = mat + mat.T
    w = cs.eigenvalues(mat, check_residuals=True)
    assert w.sum() == pytest.approx(np.trace(mat), abs=1e-9)
    assert np.all(np.diff(w) >= 0)


def test_eigenvalues_rejects_asymmetric():
    with pytest.raises(ValueError):
        cs.eigenvalues(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_trace_consistency_per_matrix():
    spec = cs.EnsembleSpec(n=80, mask="visible", seed=5)
    mat = cs.generate_matrix(spec, 0)
    w = cs.eigenvalues(mat)
    assert np.mean(w**2) == pytest.approx(np.sum(mat**2) / spec.n, abs=1e-8)


def test_second_moment_matches_mask_density():
    # E[m2] equals the retained fraction exactly; check within 3 s.e.
    n, replicas = 64, 200
    spec = cs.EnsembleSpec(n=n, mask="visible", seed=17, replicas=replicas)
    m2 = []
    for r in range(replicas):
        mat = cs.generate_matrix(spec, r)
        m2.append(np.sum(mat**2) / n)
    target = float(cs.mask_density(n, "visible"))
    assert abs(np.mean(m2) - target) <= 3 * monte_carlo_se(m2)


def test_odd_moments_vanish_in_distribution():
    spec = cs.EnsembleSpec(n=100, mask="visible", seed=23, replicas=60)
    summary = cs.summarize(cs.sample_spectra(spec, workers=2))
    for h in (1, 3):
        se = monte_carlo_se(summary.moments[:, h - 1])
        assert abs(summary.pooled_moments[h - 1]) <= 3 * se


def test_summarize_contents():
    spec = cs.EnsembleSpec(n=60, mask="invisible", seed=3, replicas=5)
    samples = cs.sample_spectra(spec)
    summary = cs.summarize(samples, bins=40, center=1.5, kde=True)
    assert summary.moments.shape == (5, 8)
    assert summary.hist_counts.sum() == 5 * 60  # default range covers everything
    assert summary.lambda_max == pytest.approx([s.eigenvalues[-1] for s in samples])
    expected_fluct = 60 ** (2 / 3) * (summary.lambda_max - 1.5)
    assert summary.max_fluctuations == pytest.approx(expected_fluct)
    assert summary.kde_density is not None and np.all(summary.kde_density >= 0)
    width = summary.hist_edges[1] - summary.hist_edges[0]
    assert summary.hist_density.sum() * width == pytest.approx(1.0)


def test_summarize_rescaling():
    spec = cs.EnsembleSpec(n=60, mask="visible", seed=3, replicas=4)
    samples = cs.sample_spectra(spec)
    plain = cs.summarize(samples)
    scaled = cs.summarize(samples, rescale=True)
    factor = cs.rescale_factor("visible")
    assert factor == pytest.approx(1 / math.sqrt(6 / math.pi**2))
    assert scaled.pooled_moments[1] == pytest.approx(
        plain.pooled_moments[1] * factor**2, rel=1e-12
    )
    # lambda_max stays on the natural scale
    assert scaled.lambda_max_mean == plain.lambda_max_mean


def test_summarize_order_insensitive():
    spec = cs.EnsembleSpec(n=40, mask="none", seed=1, replicas=6)
    samples = cs.sample_spectra(spec)
    shuffled = [samples[i] for i in (3, 0, 5, 1, 4, 2)]
    a = cs.summarize(samples)
    b = cs.summarize(shuffled)
    assert np.array_equal(a.pooled_moments, b.pooled_moments)
    assert np.array_equal(a.lambda_max, b.lambda_max)


def test_workers_do_not_change_results():
    spec = cs.EnsembleSpec(n=40, mask="visible", seed=2, replicas=8)
    serial = cs.sample_spectra(spec, workers=1)
    threaded = cs.sample_spectra(spec, workers=4)
    for a, b in zip(serial, threaded):
        assert a.replica_index == b.replica_index
        assert np.array_equal(a.eigenvalues, b.eigenvalues)


def test_summarize_rejects_empty():
    with pytest.raises(ValueError):
        cs.summarize([])


def test_spec_validation():
    with pytest.raises(ValueError):
        cs.EnsembleSpec(n=1)
    with pytest.raises(ValueError):
        cs.EnsembleSpec(n=10, mask="sparse")
    with pytest.raises(ValueError):
        cs.EnsembleSpec(n=10, entry_law="cauchy")
    with pytest.raises(ValueError):
        cs.EnsembleSpec(n=10, replicas=0)
