"""Cross-check of the sector machinery against a full tensor-space build.

The oracle Hamiltonian lives on Fock(0..nu_cut) x (symmetric atomic irrep),
assembled independently with np.kron.  It must commute with the
excitation-number matrix exactly, and every complete M block (all sector
states have nu <= nu_cut, i.e. m <= nu_cut) must reproduce the sector
spectrum.
"""

import numpy as np
import pytest

from helpers import fullspace_hamiltonian
from xiladder import build_sector, diagonalize, double_resonance, enumerate_basis

NU_CUT = 12


@pytest.mark.parametrize("na", [1, 2, 3])
def test_commutes_with_excitation_number(na):
    params = double_resonance(omega=1.0, na=na).with_couplings(0.9, 1.4)
    h, m_op, _ = fullspace_hamiltonian(params, NU_CUT)
    comm = h @ m_op - m_op @ h
    assert np.max(np.abs(comm)) < 1e-12


@pytest.mark.parametrize("na", [1, 2, 3])
def test_block_spectra_match_sectors(na):
    params = double_resonance(omega=1.0, na=na).with_couplings(1.0, np.sqrt(2))
    h, m_op, product_states = fullspace_hamiltonian(params, NU_CUT)
    m_diag = np.rint(np.diag(m_op)).astype(int)
    for m in range(0, NU_CUT - 2 * na + 1):
        block = np.flatnonzero(m_diag == m)
        basis = enumerate_basis(na, m)
        assert len(block) == basis.dimension
        block_states = {
            (product_states[k][0], product_states[k][1], product_states[k][2])
            for k in block
        }  # (nu, n1, n2): n3 implied
        sector_states = {(s.nu, s.r, s.q - s.r) for s in basis.states}
        assert block_states == sector_states
        full_eigs = np.sort(np.linalg.eigvalsh(h[np.ix_(block, block)]))
        sector_eigs = diagonalize(build_sector(params, basis)).eigenvalues
        np.testing.assert_allclose(full_eigs, sector_eigs, rtol=0, atol=1e-10)


def test_block_spectra_match_up_to_cutoff():
    # complete blocks actually extend to m = nu_cut (max nu in a sector is M)
    params = double_resonance(omega=1.0, na=2).with_couplings(1.2, 0.4)
    h, m_op, _ = fullspace_hamiltonian(params, NU_CUT)
    m_diag = np.rint(np.diag(m_op)).astype(int)
    for m in range(NU_CUT + 1):
        block = np.flatnonzero(m_diag == m)
        full_eigs = np.sort(np.linalg.eigvalsh(h[np.ix_(block, block)]))
        sector_eigs = diagonalize(
            build_sector(params, enumerate_basis(2, m))
        ).eigenvalues
        np.testing.assert_allclose(full_eigs, sector_eigs, rtol=0, atol=1e-10)


def test_detuned_blocks_match():
    from xiladder import ModelParams

    params = ModelParams(omega=1.0, omega1=0.1, omega2=1.3, omega3=2.2, mu12=0.8, mu23=1.1, na=2)
    h, m_op, _ = fullspace_hamiltonian(params, 8)
    m_diag = np.rint(np.diag(m_op)).astype(int)
    for m in range(0, 5):
        block = np.flatnonzero(m_diag == m)
        full_eigs = np.sort(np.linalg.eigvalsh(h[np.ix_(block, block)]))
        sector_eigs = diagonalize(
            build_sector(params, enumerate_basis(2, m))
        ).eigenvalues
        np.testing.assert_allclose(full_eigs, sector_eigs, rtol=0, atol=1e-10)
