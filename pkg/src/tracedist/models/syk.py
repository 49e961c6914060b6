"""Majorana SYK model with quartic all-to-all couplings.

Majoranas are Pauli strings on ``n = N_M / 2`` qubits (qubit 0 = most
significant index bit)::

    chi_{2j}   = Z_0 ... Z_{j-1} X_j
    chi_{2j+1} = Z_0 ... Z_{j-1} Y_j

so that ``{chi_a, chi_b} = 2 delta_ab`` and the fermion parity
``prod_j (-i chi_{2j} chi_{2j+1}) = prod_j Z_j`` is diagonal.  Qubit ``j`` is the
occupation of the mode built from ``(chi_{2j}, chi_{2j+1})``.

The even-parity sector is labelled by the first ``n - 1`` occupations (the
last one is fixed by parity), which gives the ``n - 1`` qubit register whose
bipartitions are studied.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..quantum import RngStream

MAX_MAJORANAS = 28


@dataclass(frozen=True)
class PauliString:
    """``i^phase X^x Z^z`` with bit masks ``x``, ``z`` over the index bits."""

    phase: int
    x: int
    z: int

    def __matmul__(self, other: "PauliString") -> "PauliString":
        # Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
        flips = bin(self.z & other.x).count("1")
        return PauliString((self.phase + other.phase + 2 * flips) % 4, self.x ^ other.x, self.z ^ other.z)

    def to_dense(self, n_qubits: int) -> np.ndarray:
        d = 1 << n_qubits
        b = np.arange(d)
        signs = 1 - 2 * (_popcount(b & self.z) & 1)
        out = np.zeros((d, d), dtype=complex)
        out[b ^ self.x, b] = (1j**self.phase) * signs
        return out


def _popcount(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    return np.bitwise_count(a).astype(np.int64) if hasattr(np, "bitwise_count") else np.array(
        [bin(int(v)).count("1") for v in a.ravel()]
    ).reshape(a.shape)


def majorana_strings(n_majorana: int) -> list[PauliString]:
    if n_majorana < 2 or n_majorana % 2:
        raise ValueError(f"need an even number of Majoranas, got {n_majorana}")
    n = n_majorana // 2
    out = []
    for j in range(n):
        bit = 1 << (n - 1 - j)
        prefix = sum(1 << (n - 1 - i) for i in range(j))
        out.append(PauliString(0, bit, prefix))
        out.append(PauliString(1, bit, prefix | bit))
    return out


def majorana_operators(n_majorana: int) -> list[np.ndarray]:
    """Dense Majorana matrices, for checks on small systems."""
    n = n_majorana // 2
    return [s.to_dense(n) for s in majorana_strings(n_majorana)]


def parity_diagonal(n_qubits: int) -> np.ndarray:
    """Eigenvalues ``(-1)^{occupation}`` of the fermion parity on the basis states."""
    return 1 - 2 * (_popcount(np.arange(1 << n_qubits)) & 1)


@dataclass(frozen=True)
class SykSpec:
    n_majorana: int
    rng: RngStream = field(default_factory=lambda: RngStream(0))

    def __post_init__(self):
        if self.n_majorana < 4 or self.n_majorana % 2:
            raise ValueError(f"n_majorana must be even and >= 4, got {self.n_majorana}")

    @property
    def coupling_scale(self) -> float:
        return 2.0 / math.sqrt(self.n_majorana)

    @property
    def coupling_variance(self) -> float:
        """``<J_ijkl^2> = 6 J^2 / N_M^3``."""
        return 6.0 * self.coupling_scale**2 / self.n_majorana**3

    @property
    def n_qubits(self) -> int:
        return self.n_majorana // 2


def syk_couplings(spec: SykSpec) -> np.ndarray:
    """Gaussian couplings for ``i<j<k<l`` in ``itertools.combinations`` order."""
    count = math.comb(spec.n_majorana, 4)
    return spec.rng.generator().normal(scale=math.sqrt(spec.coupling_variance), size=count)


def build_syk_hamiltonian(spec: SykSpec, couplings: np.ndarray | None = None) -> sp.csr_matrix:
    """``H = sum_{i<j<k<l} J_ijkl chi_i chi_j chi_k chi_l`` as a sparse matrix."""
    if spec.n_majorana > MAX_MAJORANAS:
        raise ValueError(f"n_majorana={spec.n_majorana} exceeds {MAX_MAJORANAS}")
    if couplings is None:
        couplings = syk_couplings(spec)
    chis = majorana_strings(spec.n_majorana)
    n = spec.n_qubits
    d = 1 << n
    groups: dict[int, list[tuple[complex, int]]] = {}
    for coef, (i, j, k, l) in zip(couplings, itertools.combinations(range(spec.n_majorana), 4)):
        p = chis[i] @ chis[j] @ chis[k] @ chis[l]
        groups.setdefault(p.x, []).append((coef * 1j**p.phase, p.z))
    basis = np.arange(d, dtype=np.uint64)
    rows, cols, vals = [], [], []
    for x, terms in groups.items():
        coefs = np.array([t[0] for t in terms])
        zs = np.array([t[1] for t in terms], dtype=np.uint64)
        diag = np.zeros(d, dtype=complex)
        step = max(1, 2**22 // d)
        for start in range(0, len(zs), step):
            signs = 1 - 2 * (_popcount(basis[:, None] & zs[None, start:start + step]) & 1)
            diag += signs @ coefs[start:start + step]
        rows.append((basis ^ np.uint64(x)).astype(np.int64))
        cols.append(basis.astype(np.int64))
        vals.append(diag)
    h = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(d, d)
    ).tocsr()
    h.sum_duplicates()
    return h


def even_parity_indices(n_qubits: int) -> np.ndarray:
    """Full-space index of each even-parity state, ordered by its first ``n-1`` bits."""
    s = np.arange(1 << (n_qubits - 1))
    return (s << 1) | (_popcount(s) & 1)


def even_parity_sector(h, tol: float = 1e-10) -> np.ndarray:
    """Dense restriction of a parity-conserving Hamiltonian to the even sector.

    Row/column ``s`` of the result is the even state whose first ``n-1``
    occupations are the bits of ``s``.
    """
    d = h.shape[0]
    n = d.bit_length() - 1
    par = parity_diagonal(n)
    hc = sp.coo_matrix(h)
    mixing = par[hc.row] != par[hc.col]
    if mixing.any() and np.abs(hc.data[mixing]).max() > tol:
        raise ValueError("Hamiltonian mixes parity sectors")
    idx = even_parity_indices(n)
    return sp.csr_matrix(h)[idx][:, idx].toarray()
