"""Periodic Ising chain in transverse and longitudinal fields, with momentum sectors.

``H = sum_i (g X_i + h Z_i + J Z_i Z_{i+1})`` with ``Z_{N+1} = Z_1``.  The bond
sum runs over all ``N`` sites literally, so for ``N = 2`` the single bond
appears twice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

MAX_SPINS = 14


@dataclass(frozen=True)
class IsingSpec:
    n_spins: int
    g: float = 0.9045
    h: float = 0.8090
    j: float = 1.0

    def __post_init__(self):
        if self.n_spins < 2:
            raise ValueError(f"need at least 2 spins, got {self.n_spins}")


def _check_size(n):
    if n > MAX_SPINS:
        raise ValueError(f"n_spins={n} exceeds {MAX_SPINS}")
    if n < 2:
        raise ValueError(f"need at least 2 spins, got {n}")


def _spin_z(n):
    """``z[b, i]`` = eigenvalue of ``Z_i`` on basis state ``b`` (qubit 0 = top bit)."""
    b = np.arange(1 << n)
    return 1 - 2 * ((b[:, None] >> (n - 1 - np.arange(n))) & 1)


def build_ising_hamiltonian(spec: IsingSpec) -> sp.csr_matrix:
    n = spec.n_spins
    _check_size(n)
    d = 1 << n
    z = _spin_z(n)
    diag = spec.h * z.sum(axis=1) + spec.j * (z * np.roll(z, -1, axis=1)).sum(axis=1)
    b = np.arange(d)
    rows = [b] + [b ^ (1 << (n - 1 - i)) for i in range(n)]
    cols = [b] * (n + 1)
    vals = [diag.astype(float)] + [np.full(d, spec.g)] * n
    return sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(d, d)).tocsr()


def translate_index(b, n):
    """Basis index after moving the spin on site ``i`` to site ``i + 1`` (mod ``n``)."""
    b = np.asarray(b)
    return (b >> 1) | ((b & 1) << (n - 1))


def translation_operator(n_spins: int) -> sp.csr_matrix:
    _check_size(n_spins)
    d = 1 << n_spins
    b = np.arange(d)
    return sp.csr_matrix((np.ones(d), (translate_index(b, n_spins), b)), shape=(d, d))


@dataclass(frozen=True)
class MomentumSector:
    """Orthonormal eigenbasis of translation with eigenvalue ``exp(2 pi i k / N)``.

    ``basis`` is a sparse ``2^N x dim`` matrix whose columns are the basis vectors.
    """

    k: int
    n_spins: int
    basis: sp.csr_matrix

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def momentum_sectors(n_spins: int) -> list[MomentumSector]:
    """Momentum-resolved bases built from translation orbits.

    An orbit of length ``R`` through representative ``r`` contributes
    ``sum_j exp(-2 pi i k j / N) T^j |r> / sqrt(R)`` to every ``k`` with
    ``k R = 0 mod N``.
    """
    _check_size(n_spins)
    n = n_spins
    d = 1 << n
    seen = np.zeros(d, dtype=bool)
    entries = [([], [], []) for _ in range(n)]
    counts = [0] * n
    for r in range(d):
        if seen[r]:
            continue
        orbit = [r]
        nxt = int(translate_index(r, n))
        while nxt != r:
            orbit.append(nxt)
            nxt = int(translate_index(nxt, n))
        seen[orbit] = True
        size = len(orbit)
        phases_j = np.arange(size)
        for k in range(n):
            if (k * size) % n:
                continue
            rows, cols, vals = entries[k]
            rows.extend(orbit)
            cols.extend([counts[k]] * size)
            vals.extend(np.exp(-2j * np.pi * k * phases_j / n) / np.sqrt(size))
            counts[k] += 1
    out = []
    for k in range(n):
        rows, cols, vals = entries[k]
        vals = np.asarray(vals, dtype=complex)
        if k == 0:
            vals = vals.real
        basis = sp.csr_matrix((vals, (rows, cols)), shape=(d, counts[k]))
        out.append(MomentumSector(k, n, basis))
    return out


def sector_hamiltonian(h, sector: MomentumSector) -> np.ndarray:
    """Dense ``V^dagger H V`` on a momentum sector."""
    v = sector.basis
    return (v.conj().T @ (h @ v)).toarray()
