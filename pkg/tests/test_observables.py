import numpy as np
import pytest

from xiladder import (
    ConvergenceFailureError,
    InvalidStateError,
    build_sector,
    diagonalize,
    double_resonance,
    enumerate_basis,
    expectations,
    mirror_pairs,
    photon_distribution,
    photon_distribution_limit,
)

SQRT2 = np.sqrt(2)


def spectrum_of(na, m, mu12, mu23):
    p = double_resonance(omega=1.0, na=na).with_couplings(mu12, mu23)
    return diagonalize(build_sector(p, enumerate_basis(na, m)))


def test_m0_state_populations():
    rows = expectations(spectrum_of(3, 0, 1.0, 1.0))
    assert len(rows) == 1
    r = rows[0]
    assert (r.a11, r.a22, r.a33, r.nphot) == (3.0, 0.0, 0.0, 0.0)


def test_conservation_sums():
    rng = np.random.default_rng(5)
    for _ in range(10):
        na = int(rng.integers(1, 6))
        m = int(rng.integers(0, 8))
        mu12, mu23 = rng.uniform(0.0, 2.5, size=2)
        s = spectrum_of(na, m, mu12, mu23)
        for row in expectations(s):
            assert row.a11 + row.a22 + row.a33 == pytest.approx(na, abs=1e-10)
            assert row.nphot + row.a22 + 2 * row.a33 == pytest.approx(m, abs=1e-10)


def test_mirror_pairs_share_observables():
    s = spectrum_of(5, 7, 1.0, SQRT2)
    rows = expectations(s)
    e = s.eigenvalues
    for pair in mirror_pairs(s):
        k, km = pair.k, pair.k_mirror
        if k == km:
            continue
        gaps = [e[k + 1] - e[k], e[km] - e[km - 1]]
        if k > 0:
            gaps.append(e[k] - e[k - 1])
        if km < s.dimension - 1:
            gaps.append(e[km + 1] - e[km])
        if min(gaps) <= 1e-8:
            continue  # degenerate cluster: partner observables not comparable
        for attr in ("a11", "a22", "a33", "nphot"):
            assert getattr(rows[k], attr) == pytest.approx(getattr(rows[km], attr), abs=1e-8)


def test_distribution_m0_point_mass():
    s = spectrum_of(2, 0, 1.0, 1.0)
    dist = photon_distribution(s.eigenvectors[:, 0], s.basis)
    assert dist.nu0 == 0
    np.testing.assert_allclose(dist.probs, [1.0])


def test_distribution_support_and_nu0():
    s = spectrum_of(4, 8, 1.0, SQRT2)
    dist = photon_distribution(s.eigenvectors[:, 0], s.basis)
    assert dist.nu0 == 0
    assert len(dist.probs) == 9
    assert np.all(dist.probs >= 0.0)
    assert float(dist.probs.sum()) == pytest.approx(1.0, abs=1e-10)
    assert dist.nu_values.tolist() == list(range(0, 9))

    s = spectrum_of(2, 10, 1.0, SQRT2)
    dist = photon_distribution(s.eigenvectors[:, 0], s.basis)
    assert dist.nu0 == 6  # m - 2*na
    assert len(dist.probs) == 5


def test_distribution_uniform_synthetic_state():
    # two of the four M=2 basis states share nu = 0
    basis = enumerate_basis(2, 2)
    vec = np.full(4, 0.5)
    dist = photon_distribution(vec, basis)
    np.testing.assert_allclose(dist.probs, [0.5, 0.25, 0.25], atol=1e-15)
    assert dist.nu_values.tolist() == [0, 1, 2]


def test_distribution_rejects_unnormalized():
    basis = enumerate_basis(2, 2)
    with pytest.raises(InvalidStateError):
        photon_distribution(np.ones(4), basis)


def test_distribution_normalization_all_eigenstates():
    s = spectrum_of(3, 6, 1.0, SQRT2)
    for k in range(s.dimension):
        dist = photon_distribution(s.eigenvectors[:, k], s.basis)
        assert float(dist.probs.sum()) == pytest.approx(1.0, abs=1e-10)


def test_limit_converges_na4():
    p = double_resonance(omega=1.0, na=4).with_couplings(1.0, SQRT2)
    dist = photon_distribution_limit(p, tol=1e-6)
    assert dist.m >= 16
    assert len(dist.probs) == 9
    assert float(dist.probs.sum()) == pytest.approx(1.0, abs=1e-10)


def test_limit_zero_coupling_point_mass():
    # no coupling: the sector ground state is a bare occupation state
    p = double_resonance(omega=1.0, na=2).with_couplings(0.0, 0.0)
    dist = photon_distribution_limit(p, tol=1e-6)
    assert float(dist.probs.max()) == pytest.approx(1.0, abs=1e-12)


def test_limit_nonconvergence_error():
    p = double_resonance(omega=1.0, na=4).with_couplings(1.0, SQRT2)
    with pytest.raises(ConvergenceFailureError) as err:
        photon_distribution_limit(p, tol=1e-13, max_doublings=3)
    assert err.value.last_distance is not None
