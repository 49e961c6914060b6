"""Closed-form averages of subsystem distances between two random pure states.

Two ensembles are covered: structureless Gaussian states over the full
``2^N``-dimensional space, and eigenstates of a conserved, subsystem-additive
scalar charge whose sector sizes are modelled by Gaussians of width
``gamma * sqrt(N)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import even_narayana, narayana
from .special import (
    DEFAULT_CONTROL,
    SeriesControl,
    SeriesConvergenceError,
    cal_f,
    cal_g,
    exp_erfc,
    half_binomial_products,
)

__all__ = [
    "Bipartition",
    "ChargeModel",
    "spectral_density",
    "log_spectral_weight",
    "page_trace_distance",
    "page_trace_distance_from_ratio",
    "schatten_n_page_average",
    "schatten_n_distance_page_average",
    "page_moment_trace_rho_n",
    "charge_q0_trace_distance",
    "charge_q0_branches",
    "charge_general_trace_distance",
    "charge_half_partition_closed",
    "charge_half_partition_q0_limit",
    "discrimination_probability",
]


@dataclass(frozen=True)
class Bipartition:
    """``N`` qubits split into a kept block A and a traced block B of ``n_b`` qubits."""

    n_total: int
    n_b: int

    def __post_init__(self):
        if self.n_total < 1:
            raise ValueError(f"need at least one qubit, got N={self.n_total}")
        if not 0 <= self.n_b <= self.n_total:
            raise ValueError(f"N_B={self.n_b} outside 0..{self.n_total}")

    @property
    def n_a(self) -> int:
        return self.n_total - self.n_b

    @property
    def d_a(self) -> int:
        return 2**self.n_a

    @property
    def d_b(self) -> int:
        return 2**self.n_b

    @property
    def d(self) -> int:
        return 2**self.n_total

    @property
    def f(self) -> float:
        """Fraction of traced qubits."""
        return self.n_b / self.n_total

    @property
    def x(self) -> float:
        """``D_A / (2 D_B)``."""
        return math.ldexp(1.0, self.n_a - self.n_b - 1)


@dataclass(frozen=True)
class ChargeModel:
    """Gaussian charge spectrum of width ``gamma * sqrt(N)`` and total charge ``q_total``.

    ``q_total`` is measured from the peak of the spectrum.
    """

    gamma: float
    q_total: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    @property
    def c(self) -> float:
        return self.gamma**2 * math.log(2)


def spectral_density(q, n_s: int, gamma: float):
    """Unit-normalized Gaussian density of charge ``q`` on ``n_s`` qubits."""
    var = gamma**2 * n_s
    return np.exp(-np.square(q) / (2 * var)) / np.sqrt(2 * np.pi * var)


def log_spectral_weight(q, n_s: int, gamma: float):
    """``log F_S(q) = log(2^n_s * Omega(q, n_s))``."""
    var = gamma**2 * n_s
    return n_s * math.log(2) - np.square(q) / (2 * var) - 0.5 * np.log(2 * np.pi * var)


# ---------------------------------------------------------------------------
# structureless random states
# ---------------------------------------------------------------------------


def page_trace_distance_from_ratio(x: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Average trace distance as a function of ``x = D_A / (2 D_B)`` alone."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    if x >= 1:
        value = 1.0 - 1.0 / (4.0 * x)
    else:
        value = 8.0 * math.sqrt(x) / (3.0 * math.pi) * cal_f(x, ctrl)
    return min(1.0, max(0.0, value))


def page_trace_distance(part: Bipartition, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Average trace distance of the reduced states of two random pure states.

    Valid up to ``O(1/D)``; at ``N_B = N`` it returns the ``O(1/sqrt(D))``
    value of the unnormalized ensemble rather than the trivial zero.
    """
    return page_trace_distance_from_ratio(part.x, ctrl)


def _page_moment_fraction(n: int, part: Bipartition, even_only: bool) -> Fraction:
    da, db = part.d_a, part.d_b
    total = 0
    if even_only:
        for k in range(1, n // 2 + 1):
            total += 2**k * even_narayana(n, k) * da ** (n - k + 1) * db**k
    else:
        for k in range(1, n + 1):
            total += narayana(n, k) * da ** (n - k + 1) * db**k
    return Fraction(total, part.d**n)


def schatten_n_page_average(n: int, part: Bipartition) -> float:
    """Leading-order ``<tr (rho_A - sigma_A)^n>`` for even ``n``.

    Counts only non-crossing Wick contractions, so it is exact for ``n = 2``
    and carries ``O(1/D_A^2, 1/D_B^2)`` relative corrections beyond.
    """
    if n < 1 or n % 2:
        raise ValueError(f"n must be a positive even integer (odd moments vanish), got {n}")
    return float(_page_moment_fraction(n, part, even_only=True))


def schatten_n_distance_page_average(n: int, part: Bipartition) -> float:
    """``<D_n^n>`` with ``D_n = 2^(-1/n) ||rho - sigma||_n``."""
    return schatten_n_page_average(n, part) / 2


def page_moment_trace_rho_n(n: int, part: Bipartition) -> float:
    """Leading-order ``<tr rho_A^n>`` for a single random state."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return float(_page_moment_fraction(n, part, even_only=False))


# ---------------------------------------------------------------------------
# charge eigenstates
# ---------------------------------------------------------------------------


def charge_q0_branches(x: float, f: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> tuple[float | None, float | None]:
    """Both branches of the peak-charge result at continuous ``(x, f)``.

    Returns ``(large_x, small_x)``; a branch whose series is undefined at
    this point comes back as ``None``.
    """
    large = 1.0 - 1.0 / (4.0 * x * math.sqrt(2.0 * f)) if f > 0 else None
    small = None
    if 0.5 <= f < 1:
        xf = x * math.sqrt(f / (1.0 - f))
        if xf <= 1:
            small = 8.0 * math.sqrt(xf) / (3.0 * math.pi) * cal_g(xf, f, ctrl)
    return large, small


def charge_q0_trace_distance(part: Bipartition, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Average trace distance of two eigenstates at the peak charge.

    For integer qubit counts ``x < 1`` forces ``N_A <= N_B`` and hence
    ``f >= 1/2``, so the small-``x`` series is always well defined here.
    """
    if part.n_b in (0, part.n_total):
        raise ValueError("charge formula is singular for N_B in {0, N}")
    large, small = charge_q0_branches(part.x, part.f, ctrl)
    value = large if part.x >= 1 else small
    if value is None:
        raise ValueError(f"no valid branch at x={part.x}, f={part.f}")
    return min(1.0, max(0.0, value))


def charge_general_trace_distance(
    part: Bipartition,
    cm: ChargeModel,
    offset: float = 0.0,
    width: float = 8.0,
    spacing: float = 1.0,
    ctrl: SeriesControl = DEFAULT_CONTROL,
) -> float:
    """Sector-resolved average at total charge ``cm.q_total``.

    The reduced state is block diagonal in the subsystem charge ``Q_A``.
    Each block is a Gaussian random matrix problem of dimensions
    ``F_A(Q_A) x F_B(Q - Q_A)`` carrying weight ``F_A F_B / F(Q)``, and the
    block averages are summed over ``Q_A in offset + spacing * Z`` within
    ``width`` standard deviations of both Gaussian peaks.  The default unit
    spacing is the physical charge lattice; a fine spacing approaches the
    continuum integral, which matters when ``N_A`` or ``N_B`` is a single
    qubit and its Gaussian is narrower than the lattice.

    On a unit lattice the physical totals are those for which ``Q - Q_A`` is
    also on a lattice, e.g. integer ``Q`` for Hamming-weight charge at even
    ``N_A``, ``N_B``.  Off those values the sum still runs but samples the
    sharp ``x ~ 1`` crossover of the block averages unevenly.
    """
    if part.n_b in (0, part.n_total):
        raise ValueError("charge formula is singular for N_B in {0, N}")
    g = cm.gamma
    q = cm.q_total
    n, na, nb = part.n_total, part.n_a, part.n_b
    reach = width * g * math.sqrt(n)
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    lo = math.floor((min(0.0, q) - reach - offset) / spacing)
    hi = math.ceil((max(0.0, q) + reach - offset) / spacing)
    qa = np.arange(lo, hi + 1, dtype=float) * spacing + offset
    log_fa = log_spectral_weight(qa, na, g)
    log_fb = log_spectral_weight(q - qa, nb, g)
    log_f = log_spectral_weight(q, n, g)
    log_w = log_fa + log_fb - log_f + math.log(spacing)
    log_x = log_fa - math.log(2) - log_fb
    total = 0.0
    for lw, lx in zip(log_w, log_x):
        if lw < -745:
            continue
        if lx >= 0:
            # 1 - 1/(4x), written to stay finite for huge x
            block = 1.0 - 0.25 * math.exp(-lx)
        elif lx < -700:
            block = 0.0
        else:
            block = page_trace_distance_from_ratio(math.exp(lx), ctrl)
        total += math.exp(lw) * block
    return min(1.0, max(0.0, total))


def charge_half_partition_closed(n_total: int, cm: ChargeModel, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Continuum closed form at ``N_A = N_B`` for nonzero total charge."""
    if n_total < 2 or n_total % 2:
        raise ValueError(f"half partition needs even N, got {n_total}")
    q = abs(cm.q_total)
    if q == 0:
        raise ValueError("closed form is singular at Q = 0; use charge_half_partition_q0_limit")
    g, c, n = cm.gamma, cm.c, n_total
    s = math.sqrt(2 * g * g * n)
    out = 0.5 * math.erfc(math.sqrt(n / (2 * g * g)) * c / q)
    out -= 0.25 * exp_erfc(q * q / (2 * g * g * n), (n * c + q * q) / (q * s))
    series = 0.0
    coeffs = half_binomial_products()
    for k in range(ctrl.max_terms):
        u = k + 0.5
        a = u * u * q * q / (2 * g * g * n) - u * math.log(2)
        z = ((1 + 2 * k) * q * q - 2 * n * c) / (2 * q * s)
        term = next(coeffs) * exp_erfc(a, z)
        series += term
        # a - z^2 = -N C^2 / (2 gamma^2 Q^2) for every k, so the terms never
        # regrow; (k + 1) bounds their algebraic tail
        if abs(term) * (k + 1) <= ctrl.rel_tol * abs(out + series):
            return out + series
    raise SeriesConvergenceError(f"half-partition series not converged after {ctrl.max_terms} terms")


def charge_half_partition_q0_limit(ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """``Q -> 0`` limit of the half-partition closed form (the ``x = 1/2`` Page value)."""
    return page_trace_distance_from_ratio(0.5, ctrl)


def discrimination_probability(d1: float) -> float:
    """Optimal success probability for telling two equiprobable states apart."""
    if not 0 <= d1 <= 1:
        raise ValueError(f"trace distance {d1} outside [0, 1]")
    return 0.5 * (1.0 + d1)
