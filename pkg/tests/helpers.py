"""Independent oracles used across the test suite.

Everything here is built from scratch (tensor products of explicit operator
matrices, exhaustive enumeration) rather than through the package's sector
machinery, so agreement is a real cross-check and not a tautology.
"""

import numpy as np


def exhaustive_states(na, m):
    """All (nu, q, r) of a sector by brute loop over 0 <= r <= q <= na."""
    out = []
    for q in range(na + 1):
        for r in range(q + 1):
            nu = m - (q - r) - 2 * (na - q)
            if nu >= 0:
                out.append((nu, q, r))
    return out


def atomic_simplex(na):
    """All symmetric-irrep occupation triples (n1, n2, n3) with n1+n2+n3 = na."""
    return [
        (n1, n2, na - n1 - n2)
        for n1 in range(na + 1)
        for n2 in range(na + 1 - n1)
    ]


def atomic_operator(na, i, j):
    """Matrix of the collective operator A_ij on the symmetric irrep.

    A_ij moves one atom from level j to level i with bosonic amplitude
    sqrt(n_j (n_i + 1)); A_ii is the level-i population.
    """
    states = atomic_simplex(na)
    index = {s: k for k, s in enumerate(states)}
    dim = len(states)
    op = np.zeros((dim, dim))
    for col, s in enumerate(states):
        if i == j:
            op[col, col] = s[i - 1]
            continue
        if s[j - 1] == 0:
            continue
        target = list(s)
        target[j - 1] -= 1
        target[i - 1] += 1
        row = index[tuple(target)]
        op[row, col] = np.sqrt(s[j - 1] * (s[i - 1] + 1))
    return op, states


def fullspace_hamiltonian(params, nu_cut):
    """Hamiltonian on Fock(0..nu_cut) x symmetric atomic space, via np.kron.

    Returns (h, m_op, product_states) where product_states[k] = (nu, n1, n2, n3)
    and m_op is the excitation-number matrix (diagonal in this basis).
    """
    na = params.na
    nph = nu_cut + 1
    a = np.diag(np.sqrt(np.arange(1, nph)), 1)
    number = a.T @ a
    eye_ph = np.eye(nph)

    ops = {}
    for i in range(1, 4):
        for j in range(1, 4):
            ops[(i, j)], atom_states = atomic_operator(na, i, j)
    eye_at = np.eye(len(atom_states))

    h = params.omega * np.kron(number, eye_at)
    h += np.kron(eye_ph, params.omega1 * ops[(1, 1)] + params.omega2 * ops[(2, 2)] + params.omega3 * ops[(3, 3)])
    coupling = params.mu12 * (np.kron(a, ops[(2, 1)]) + np.kron(a.T, ops[(1, 2)]))
    coupling += params.mu23 * (np.kron(a, ops[(3, 2)]) + np.kron(a.T, ops[(2, 3)]))
    h -= coupling / np.sqrt(na)

    m_op = np.kron(number, eye_at) + np.kron(eye_ph, ops[(2, 2)] + 2.0 * ops[(3, 3)])
    product_states = [
        (nu, s[0], s[1], s[2]) for nu in range(nph) for s in atom_states
    ]
    return h, m_op, product_states


def star_ground_energy(na, mu12, mu23):
    """Closed-form E0 of the double-resonance M=2 sector (star graph)."""
    weight_sq = 2 * mu12**2 + 2 * mu12**2 * (na - 1) / na + mu23**2 / na
    return 2.0 - np.sqrt(weight_sq)


def two_level_ground(omega, omega2_minus_omega1, mu12):
    """Ground eigenpair of the 2x2 M=1 block [[omega, -mu12], [-mu12, d]]."""
    h = np.array([[omega, -mu12], [-mu12, omega2_minus_omega1]])
    w, v = np.linalg.eigh(h)
    return w[0], v[:, 0]
