"""Random pure states, partial traces, Schatten distances and Monte Carlo estimators.

State vectors are plain complex ``ndarray``s of length ``2^N``.  Qubit 0 is
the most significant bit of the basis index, and subsystem A is always the
leading ``n_a`` qubits, so the partial trace is a reshape to
``(D_A, D_B)`` followed by ``M M^dagger``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .predictions import Bipartition

MAX_QUBITS = 24


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream addressed by ``(seed, stream_id)``.

    Draws depend only on the pair, never on which worker consumes it.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, index: int) -> "RngStream":
        # pack (stream_id, index) into one id; both stay well below 2^32
        return RngStream(self.seed, (self.stream_id << 32) | index)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def n_qubits_of(state: np.ndarray) -> int:
    d = state.shape[-1]
    n = d.bit_length() - 1
    if d != 1 << n:
        raise ValueError(f"state length {d} is not a power of two")
    return n


def _complex_gaussian(gen, shape, var):
    scale = np.sqrt(var / 2)
    return gen.normal(scale=scale, size=shape) + 1j * gen.normal(scale=scale, size=shape)


def sample_page_state(n_qubits: int, rng, max_qubits: int = MAX_QUBITS, size: int | None = None) -> np.ndarray:
    """I.i.d. complex Gaussian amplitudes with ``<|psi_i|^2> = 1/D``.

    Not normalized per realization.  With ``size`` a stack of independent
    states of shape ``(size, D)`` is returned.
    """
    if not 0 <= n_qubits <= max_qubits:
        raise ValueError(f"n_qubits={n_qubits} outside 0..{max_qubits}")
    d = 1 << n_qubits
    shape = (d,) if size is None else (size, d)
    return _complex_gaussian(_as_generator(rng), shape, 1.0 / d)


@dataclass(frozen=True)
class ChargeAssignment:
    """Per-qubit charges ``q_i``; the charge of a basis state is the sum over set bits."""

    charges: tuple[float, ...]

    @classmethod
    def hamming(cls, n_qubits: int) -> "ChargeAssignment":
        return cls((1,) * n_qubits)

    @property
    def n_qubits(self) -> int:
        return len(self.charges)

    def basis_charges(self, qubits=None) -> np.ndarray:
        """Charge of every basis state of the given contiguous qubit block (all by default)."""
        charges = np.asarray(self.charges if qubits is None else [self.charges[i] for i in qubits], dtype=float)
        n = len(charges)
        idx = np.arange(1 << n)
        bits = (idx[:, None] >> (n - 1 - np.arange(n))) & 1
        return bits @ charges

    def sector_indices(self, q_total: float) -> np.ndarray:
        return np.nonzero(np.isclose(self.basis_charges(), q_total))[0]

    def sector_size(self, q_total: float) -> int:
        return len(self.sector_indices(q_total))


def sample_charge_eigenstate(n_qubits: int, ca: ChargeAssignment, q_total: float, rng, size: int | None = None) -> np.ndarray:
    """Gaussian random state supported on the basis states of charge ``q_total``.

    Amplitudes in the sector have variance ``1/F(Q)``; all others are exactly 0.
    """
    if ca.n_qubits != n_qubits:
        raise ValueError(f"charge assignment covers {ca.n_qubits} qubits, expected {n_qubits}")
    if n_qubits > MAX_QUBITS:
        raise ValueError(f"n_qubits={n_qubits} exceeds {MAX_QUBITS}")
    support = ca.sector_indices(q_total)
    if len(support) == 0:
        raise ValueError(f"charge sector Q={q_total} is empty")
    d = 1 << n_qubits
    shape = (d,) if size is None else (size, d)
    out = np.zeros(shape, dtype=complex)
    out[..., support] = _complex_gaussian(_as_generator(rng), out[..., support].shape, 1.0 / len(support))
    return out


def normalize(state: np.ndarray) -> np.ndarray:
    return state / np.linalg.norm(state, axis=-1, keepdims=True)


def reduced_density_matrix(state: np.ndarray, n_a: int, normalize_trace: bool = False) -> np.ndarray:
    """``(rho_A)_{a a'} = sum_b psi_{ab} conj(psi_{a'b})``; works on stacks of states."""
    n = n_qubits_of(state)
    if not 0 < n_a <= n:
        raise ValueError(f"n_a={n_a} outside 1..{n}")
    m = state.reshape(state.shape[:-1] + (1 << n_a, 1 << (n - n_a)))
    rho = m @ np.conj(np.swapaxes(m, -1, -2))
    if normalize_trace:
        rho = rho / np.trace(rho, axis1=-2, axis2=-1).real[..., None, None]
    return rho


def _check_pair(rho, sigma):
    if rho.shape != sigma.shape or rho.shape[-1] != rho.shape[-2]:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float | np.ndarray:
    """Half the sum of absolute eigenvalues of the Hermitian difference."""
    _check_pair(rho, sigma)
    w = np.linalg.eigvalsh(rho - sigma)
    return 0.5 * np.abs(w).sum(axis=-1)


def schatten_distance(rho: np.ndarray, sigma: np.ndarray, n: int = 1) -> float | np.ndarray:
    """``2^(-1/n) ||rho - sigma||_n`` from the eigenvalues of the difference."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_pair(rho, sigma)
    w = np.abs(np.linalg.eigvalsh(rho - sigma))
    return 2.0 ** (-1.0 / n) * (w**n).sum(axis=-1) ** (1.0 / n)


def subsystem_trace_distance(psi: np.ndarray, phi: np.ndarray, n_a: int) -> float | np.ndarray:
    """Trace distance of the reduced states of two pure states (stacks allowed).

    When ``D_A > 2 D_B`` the difference ``W S W^dagger`` (``W = [M, K]``,
    ``S = diag(1, -1)``) is reduced with a thin QR factorization ``W = Q R``:
    its nonzero spectrum is that of the ``2 D_B``-dimensional ``R S R^dagger``.
    """
    if psi.shape != phi.shape:
        raise ValueError(f"dimension mismatch: {psi.shape} vs {phi.shape}")
    n = n_qubits_of(psi)
    if not 0 < n_a <= n:
        raise ValueError(f"n_a={n_a} outside 1..{n}")
    da, db = 1 << n_a, 1 << (n - n_a)
    if da <= 2 * db:
        return trace_distance(reduced_density_matrix(psi, n_a), reduced_density_matrix(phi, n_a))
    lead = psi.shape[:-1]
    w = np.concatenate([psi.reshape(lead + (da, db)), phi.reshape(lead + (da, db))], axis=-1)
    r = np.linalg.qr(w, mode="r")
    sign = np.concatenate([np.ones(db), -np.ones(db)])
    core = (r * sign) @ np.conj(np.swapaxes(r, -1, -2))
    return 0.5 * np.abs(np.linalg.eigvalsh(core)).sum(axis=-1)


def _mean_stderr(values: np.ndarray) -> tuple[float, float, float]:
    values = np.asarray(values, dtype=float)
    m = len(values)
    std = float(values.std(ddof=1)) if m > 1 else 0.0
    return float(values.mean()), std / float(np.sqrt(m)), std


def moment_estimator(n: int, part: Bipartition, samples: int, rng, normalize_states: bool = False) -> tuple[float, float]:
    """Monte Carlo ``<tr (rho_A - sigma_A)^n>`` over independent state pairs.

    Defaults to the unnormalized Gaussian ensemble, which is the one the
    combinatorial moment formulas describe.  Returns ``(mean, stderr)``.
    """
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if part.n_b == part.n_total:
        raise ValueError("n_a must be at least 1")
    gen = _as_generator(rng)
    values = np.empty(samples)
    batch = max(1, min(samples, 2**22 // part.d))
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        psi = sample_page_state(part.n_total, gen, size=m)
        phi = sample_page_state(part.n_total, gen, size=m)
        if normalize_states:
            psi, phi = normalize(psi), normalize(phi)
        w = np.linalg.eigvalsh(reduced_density_matrix(psi, part.n_a) - reduced_density_matrix(phi, part.n_a))
        values[done:done + m] = (w**n).sum(axis=-1)
        done += m
    mean, se, _ = _mean_stderr(values)
    return mean, se


def trace_distance_samples(
    part: Bipartition,
    samples: int,
    rng,
    ensemble: str = "page",
    charge: ChargeAssignment | None = None,
    q_total: float | None = None,
    normalize_states: bool = True,
) -> np.ndarray:
    """Subsystem trace distances of ``samples`` independent state pairs.

    ``ensemble`` is ``"page"`` or ``"charge"``; the latter needs ``charge`` and
    ``q_total`` (raw charge, i.e. the sum of per-qubit charges).  States are
    normalized per realization unless ``normalize_states`` is False.
    """
    gen = _as_generator(rng)
    n = part.n_total
    if ensemble == "page":
        draw = lambda m: sample_page_state(n, gen, size=m)  # noqa: E731
    elif ensemble == "charge":
        if charge is None or q_total is None:
            raise ValueError("charge ensemble needs a ChargeAssignment and q_total")
        draw = lambda m: sample_charge_eigenstate(n, charge, q_total, gen, size=m)  # noqa: E731
    else:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    out = np.empty(samples)
    batch = max(1, min(samples, 2**22 // part.d))
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        psi, phi = draw(m), draw(m)
        if normalize_states:
            psi, phi = normalize(psi), normalize(phi)
        if part.n_a == 0:
            # nothing kept: the reduced states are the squared norms
            out[done:done + m] = 0.5 * np.abs(
                np.sum(np.abs(psi) ** 2, axis=-1) - np.sum(np.abs(phi) ** 2, axis=-1)
            )
        else:
            out[done:done + m] = subsystem_trace_distance(psi, phi, part.n_a)
        done += m
    return out


def trace_distance_estimator(part: Bipartition, samples: int, rng, **kwargs) -> tuple[float, float, float]:
    """``(mean, stderr, stddev)`` of the subsystem trace distance."""
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    return _mean_stderr(trace_distance_samples(part, samples, rng, **kwargs))
