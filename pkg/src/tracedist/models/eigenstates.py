"""Band-center eigenstate selection and pairwise subsystem distances."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..quantum import n_qubits_of, subsystem_trace_distance

# default energy window for 10-spin zero-momentum eigenstates, in per-site units
ISING_ENERGY_WINDOW = (-0.8, 0.0)


def gaussian_dos_fit(eigenvalues) -> tuple[float, float]:
    """Maximum-likelihood Gaussian ``(mean, width)`` of a spectrum."""
    e = np.asarray(eigenvalues, dtype=float).ravel()
    if e.size < 10:
        raise ValueError(f"need at least 10 eigenvalues, got {e.size}")
    width = float(e.std())
    if width == 0 or not np.isfinite(width):
        raise ValueError("degenerate spectrum: zero width")
    return float(e.mean()), width


@dataclass(frozen=True)
class BandCenterSelection:
    energies: np.ndarray
    states: np.ndarray  # (count, D), unit norm
    dos_mean: float
    dos_width: float


def band_center_eigenstates(
    h_block,
    count: int,
    window: tuple[float, float] | None = None,
    basis=None,
    energy_scale: float = 1.0,
) -> BandCenterSelection:
    """Eigenstates nearest the fitted density-of-states peak.

    ``window`` (optional) restricts candidates to ``lo <= E / energy_scale <= hi``,
    e.g. per-site energies with ``energy_scale = N``.  With ``basis`` the
    eigenvectors are lifted to the full space as ``basis @ v``.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    h = np.asarray(h_block.toarray() if hasattr(h_block, "toarray") else h_block)
    evals, evecs = np.linalg.eigh(h)
    mean, width = gaussian_dos_fit(evals)
    candidates = np.arange(len(evals))
    if window is not None:
        lo, hi = window
        scaled = evals / energy_scale
        candidates = candidates[(scaled >= lo) & (scaled <= hi)]
        if candidates.size == 0:
            raise ValueError(f"energy window {window} contains no eigenvalues")
    if candidates.size < count:
        raise ValueError(f"only {candidates.size} eigenvalues available, {count} requested")
    order = candidates[np.argsort(np.abs(evals[candidates] - mean), kind="stable")][:count]
    vecs = evecs[:, order]
    if basis is not None:
        vecs = basis @ vecs
        vecs = np.asarray(vecs)
    states = (vecs / np.linalg.norm(vecs, axis=0)).T
    return BandCenterSelection(evals[order], np.ascontiguousarray(states), mean, width)


def pair_distance_samples(states: np.ndarray, n_b: int) -> np.ndarray:
    """Trace distances of all unordered pairs of states at the given ``N_B``."""
    states = np.asarray(states)
    if states.shape[0] < 2:
        raise ValueError("need at least two states")
    n = n_qubits_of(states)
    pairs = list(itertools.combinations(range(states.shape[0]), 2))
    i, j = (np.array(v) for v in zip(*pairs))
    if n_b == n:
        return np.zeros(len(pairs))
    return np.atleast_1d(subsystem_trace_distance(states[i], states[j], n - n_b))


def eigenstate_pair_distances(states: np.ndarray, nb_grid) -> list[tuple[int, float, float, float]]:
    """``(N_B, f, mean D1, std)`` over all unordered pairs, per bipartition."""
    n = n_qubits_of(np.asarray(states))
    out = []
    for nb in nb_grid:
        d = pair_distance_samples(states, nb)
        std = float(d.std(ddof=1)) if d.size > 1 else 0.0
        out.append((nb, nb / n, float(d.mean()), std))
    return out
