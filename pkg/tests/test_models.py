import itertools
import math

import numpy as np
import pytest

from tracedist.models import (
    ISING_ENERGY_WINDOW,
    IsingSpec,
    SykSpec,
    band_center_eigenstates,
    build_ising_hamiltonian,
    build_syk_hamiltonian,
    eigenstate_pair_distances,
    even_parity_indices,
    even_parity_sector,
    gaussian_dos_fit,
    majorana_operators,
    momentum_sectors,
    parity_diagonal,
    sector_hamiltonian,
    syk_couplings,
    translation_operator,
)
from tracedist.models.ising import MAX_SPINS
from tracedist.models.syk import majorana_strings
from tracedist.quantum import RngStream

from oracles import PAULI, kron_all


def dense(h):
    return h.toarray() if hasattr(h, "toarray") else np.asarray(h)


# ---------------------------------------------------------------- SYK


def test_majorana_clifford_algebra():
    chis = majorana_operators(8)
    eye = np.eye(16)
    for i, a in enumerate(chis):
        for j, b in enumerate(chis):
            assert np.abs(a @ b + b @ a - 2 * (i == j) * eye).max() < 1e-12
        assert np.allclose(a, a.conj().T)


def test_majorana_strings_against_kronecker_products():
    n = 3
    chis = majorana_operators(2 * n)
    for j in range(n):
        prefix = ["Z"] * j
        rest = ["I"] * (n - j - 1)
        assert np.allclose(chis[2 * j], kron_all([PAULI[c] for c in prefix + ["X"] + rest]))
        assert np.allclose(chis[2 * j + 1], kron_all([PAULI[c] for c in prefix + ["Y"] + rest]))


def test_parity_is_product_of_mode_parities():
    chis = majorana_operators(6)
    p = np.eye(8, dtype=complex)
    for j in range(3):
        p = p @ (-1j * chis[2 * j] @ chis[2 * j + 1])
    assert np.allclose(p, np.diag(parity_diagonal(3)))


def test_syk_hamiltonian_against_dense_sum():
    spec = SykSpec(8, RngStream(4))
    j = syk_couplings(spec)
    chis = majorana_operators(8)
    ref = sum(c * chis[a] @ chis[b] @ chis[e] @ chis[d] for c, (a, b, e, d) in zip(j, itertools.combinations(range(8), 4)))
    h = dense(build_syk_hamiltonian(spec))
    assert np.abs(h - ref).max() < 1e-12
    assert np.abs(h - h.conj().T).max() < 1e-12


def test_syk_commutes_with_parity():
    h = dense(build_syk_hamiltonian(SykSpec(12, RngStream(2))))
    p = np.diag(parity_diagonal(6))
    assert np.abs(h @ p - p @ h).max() < 1e-12


def test_syk_variance_sum_rule():
    n = 10
    vals = []
    for r in range(150):
        h = build_syk_hamiltonian(SykSpec(n, RngStream(8, r)))
        vals.append((h.multiply(h.conj()).sum()).real / 2 ** (n // 2))
    expected = math.comb(n, 4) * SykSpec(n).coupling_variance
    assert abs(np.mean(vals) - expected) < 3 * np.std(vals, ddof=1) / np.sqrt(len(vals))


def test_syk_spec_and_guard():
    s = SykSpec(14)
    assert s.coupling_scale == pytest.approx(2 / math.sqrt(14))
    assert s.coupling_variance == pytest.approx(6 * s.coupling_scale**2 / 14**3)
    with pytest.raises(ValueError):
        SykSpec(7)
    with pytest.raises(ValueError):
        build_syk_hamiltonian(SykSpec(30))


def test_even_sector_dimension_and_spectrum():
    h = build_syk_hamiltonian(SykSpec(14, RngStream(1)))
    assert even_parity_sector(h).shape == (64, 64)
    h10 = build_syk_hamiltonian(SykSpec(10, RngStream(3)))
    sector = np.linalg.eigvalsh(even_parity_sector(h10))
    full = np.linalg.eigvalsh(dense(h10))
    assert max(np.abs(full - e).min() for e in sector) < 1e-10
    idx = even_parity_indices(5)
    assert np.all(parity_diagonal(5)[idx] == 1) and len(set(idx)) == 16


def test_even_sector_rejects_parity_mixing():
    h = dense(build_syk_hamiltonian(SykSpec(8, RngStream(0))))
    h[0, 1] = h[1, 0] = 0.1  # states 0 and 1 differ in parity
    with pytest.raises(ValueError):
        even_parity_sector(h)


# ---------------------------------------------------------------- Ising


def ising_reference(n, g, h, j):
    out = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        ops = ["I"] * n
        ops[i] = "X"
        out += g * kron_all([PAULI[c] for c in ops])
        ops[i] = "Z"
        out += h * kron_all([PAULI[c] for c in ops])
        ops = ["I"] * n
        ops[i] = "Z"
        ops[(i + 1) % n] = "Z"
        out += j * kron_all([PAULI[c] for c in ops])
    return out


def test_ising_two_sites_by_hand():
    g, h, j = 0.3, 0.7, 1.1
    # basis |00>, |01>, |10>, |11> with Z = +1 on 0; the periodic sum counts the bond twice
    by_hand = np.array(
        [
            [2 * h + 2 * j, g, g, 0],
            [g, -2 * j, 0, g],
            [g, 0, -2 * j, g],
            [0, g, g, -2 * h + 2 * j],
        ]
    )
    assert np.allclose(dense(build_ising_hamiltonian(IsingSpec(2, g, h, j))), by_hand)


@pytest.mark.parametrize("n", [3, 5, 6])
def test_ising_against_kronecker_sum(n):
    spec = IsingSpec(n)
    assert np.allclose(dense(build_ising_hamiltonian(spec)), ising_reference(n, spec.g, spec.h, spec.j), atol=1e-12)


def test_ising_classical_limit():
    n = 5
    h = dense(build_ising_hamiltonian(IsingSpec(n, g=0.0, h=0.4, j=1.0)))
    assert np.allclose(h, np.diag(np.diag(h)))
    spins = 1 - 2 * ((np.arange(32)[:, None] >> (n - 1 - np.arange(n))) & 1)
    energy = 0.4 * spins.sum(1) + (spins * np.roll(spins, -1, axis=1)).sum(1)
    assert np.allclose(np.diag(h).real, energy)


@pytest.mark.parametrize("n", [4, 7, 10])
def test_ising_translation_invariance(n):
    h = build_ising_hamiltonian(IsingSpec(n))
    t = translation_operator(n)
    assert abs(h @ t - t @ h).max() < 1e-12
    assert abs(h - h.conj().T).max() < 1e-12


def test_ising_guard():
    with pytest.raises(ValueError):
        build_ising_hamiltonian(IsingSpec(MAX_SPINS + 1))
    with pytest.raises(ValueError):
        IsingSpec(1)


def test_two_site_sectors():
    secs = momentum_sectors(2)
    assert [(s.k, s.dim) for s in secs] == [(0, 3), (1, 1)]


@pytest.mark.parametrize("n", range(2, 11))
def test_sectors_partition_the_space(n):
    secs = momentum_sectors(n)
    assert sum(s.dim for s in secs) == 2**n
    t = translation_operator(n)
    for s in secs:
        v = s.basis.toarray()
        assert np.abs(v.conj().T @ v - np.eye(s.dim)).max() < 1e-12
        assert np.abs(t @ v - np.exp(2j * np.pi * s.k / n) * v).max() < 1e-12
    full = np.hstack([s.basis.toarray() for s in secs])
    assert np.abs(full.conj().T @ full - np.eye(2**n)).max() < 1e-12


def test_projected_hamiltonian_is_block_diagonal():
    n = 6
    h = build_ising_hamiltonian(IsingSpec(n))
    secs = momentum_sectors(n)
    for a, b in itertools.combinations(secs, 2):
        cross = (a.basis.conj().T @ (h @ b.basis)).toarray()
        assert np.abs(cross).max() < 1e-10
    blocks = np.concatenate([np.linalg.eigvalsh(sector_hamiltonian(h, s)) for s in secs])
    assert np.allclose(np.sort(blocks), np.linalg.eigvalsh(dense(h)))


# ---------------------------------------------------------------- eigenstates


def test_dos_fit_recovers_parameters():
    x = np.random.default_rng(0).normal(-0.4, 0.3, size=4000)
    mean, width = gaussian_dos_fit(x)
    assert abs(mean + 0.4) < 3 * 0.3 / math.sqrt(4000)
    assert abs(width - 0.3) < 3 * 0.3 / math.sqrt(2 * 4000)


def test_dos_fit_errors():
    with pytest.raises(ValueError):
        gaussian_dos_fit(np.ones(20))
    with pytest.raises(ValueError):
        gaussian_dos_fit(np.arange(5.0))


def test_ising_zero_momentum_spectrum_scale():
    n = 10
    h = build_ising_hamiltonian(IsingSpec(n))
    s0 = momentum_sectors(n)[0]
    mean, width = gaussian_dos_fit(np.linalg.eigvalsh(sector_hamiltonian(h, s0)))
    # the spectrum is traceless up to the sector restriction; its width per site is O(1/2)
    assert abs(mean / n) < 0.05
    assert 0.4 < width / n < 0.7


def test_band_center_selection_lifted_states():
    n = 8
    h = build_ising_hamiltonian(IsingSpec(n))
    s0 = momentum_sectors(n)[0]
    block = sector_hamiltonian(h, s0)
    sel = band_center_eigenstates(block, 7, basis=s0.basis)
    evals = np.linalg.eigvalsh(block)
    mean = evals.mean()
    assert np.all(np.diff(np.abs(sel.energies - mean)) >= 0)
    assert np.sort(np.abs(evals - mean))[6] == pytest.approx(np.abs(sel.energies - mean).max())
    t = translation_operator(n)
    for psi, e in zip(sel.states, sel.energies):
        assert np.linalg.norm(psi) == pytest.approx(1, abs=1e-12)
        assert np.abs(t @ psi - psi).max() < 1e-10
        assert np.abs(h @ psi - e * psi).max() < 1e-8
    gram = sel.states.conj() @ sel.states.T
    assert np.abs(gram - np.eye(7)).max() < 1e-10
    one = band_center_eigenstates(block, 1)
    assert one.energies[0] == sel.energies[0]


def test_band_center_window():
    n = 10
    h = build_ising_hamiltonian(IsingSpec(n))
    s0 = momentum_sectors(n)[0]
    block = sector_hamiltonian(h, s0)
    sel = band_center_eigenstates(block, 5, window=ISING_ENERGY_WINDOW, basis=s0.basis, energy_scale=n)
    assert np.all((sel.energies / n >= -0.8) & (sel.energies / n <= 0.0))
    with pytest.raises(ValueError):
        band_center_eigenstates(block, 1, window=(50.0, 60.0), energy_scale=n)
    with pytest.raises(ValueError):
        band_center_eigenstates(block, 0)


def test_eigendecomposition_reconstructs_block():
    h = even_parity_sector(build_syk_hamiltonian(SykSpec(12, RngStream(6))))
    w, v = np.linalg.eigh(h)
    assert np.abs(v @ np.diag(w) @ v.conj().T - h).max() < 1e-8
    assert np.abs(v.conj().T @ v - np.eye(len(w))).max() < 1e-10


def test_pair_distances():
    gen = np.random.default_rng(0)
    psi = gen.normal(size=16) + 1j * gen.normal(size=16)
    psi /= np.linalg.norm(psi)
    rows = eigenstate_pair_distances(np.stack([psi, psi]), [1, 2, 3, 4])
    assert all(abs(m) < 1e-12 for _, _, m, _ in rows)
    phi = np.zeros(16)
    phi[0] = 1
    chi = np.zeros(16)
    chi[15] = 1
    rows = eigenstate_pair_distances(np.stack([phi, chi]), [1, 3])
    # orthogonal product states stay perfectly distinguishable on any kept qubit
    assert rows[0][2] == pytest.approx(1.0) and rows[1][2] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        eigenstate_pair_distances(phi[None, :], [1])
