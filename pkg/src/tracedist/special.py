"""Real special functions used by the closed-form predictions."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _sp

__all__ = [
    "SeriesControl",
    "SeriesConvergenceError",
    "generalized_binomial",
    "hyp2f1",
    "erfc",
    "exp_erfc",
    "cal_f",
    "cal_g",
    "half_binomial_product",
    "half_binomial_products",
]


class SeriesConvergenceError(ArithmeticError):
    """A truncated series hit ``max_terms`` before reaching its tolerance."""


@dataclass(frozen=True)
class SeriesControl:
    rel_tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


def _is_nonpositive_integer(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def _gamma_sign(v: float) -> int:
    if v > 0:
        return 1
    return -1 if math.ceil(-v) % 2 else 1


def generalized_binomial(a: float, k: float) -> float:
    """Binomial coefficient ``C(a, k)`` for real ``a``.

    Integer ``k`` uses the falling-factorial product.  Non-integer ``k`` goes
    through ``Gamma(a+1) / (Gamma(k+1) Gamma(a-k+1))`` evaluated in log space;
    a pole of either denominator gamma gives an exact zero.
    """
    if float(k).is_integer():
        k = int(k)
        if k < 0:
            return 0.0
        out = 1.0
        for j in range(k):
            out *= (a - j) / (j + 1)
        return out
    if _is_nonpositive_integer(a + 1):
        raise ValueError(f"C({a}, {k}) has a pole in the numerator")
    if _is_nonpositive_integer(k + 1) or _is_nonpositive_integer(a - k + 1):
        return 0.0
    sign = _gamma_sign(a + 1) * _gamma_sign(k + 1) * _gamma_sign(a - k + 1)
    log_mag = math.lgamma(a + 1) - math.lgamma(k + 1) - math.lgamma(a - k + 1)
    return sign * math.exp(log_mag)


def hyp2f1(a: float, b: float, c: float, x: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Gauss hypergeometric series on ``0 <= |x| <= 1``.

    Summation stops when a term drops below ``rel_tol`` times the partial
    sum; the remaining tail, modelled as ``x^k k^-(c-a-b+1)``, is then added in
    closed form.  This keeps ``x`` at or near 1 accurate, where the terms
    decay only algebraically.
    """
    if _is_nonpositive_integer(c):
        raise ValueError(f"c={c} is a non-positive integer")
    if abs(x) > 1:
        raise ValueError(f"|x|={abs(x)} outside the convergent disc")
    s = c - a - b
    if abs(x) == 1 and s <= 0:
        raise ValueError(f"series diverges at |x|=1 when c-a-b={s} <= 0")
    total = 1.0
    term = 1.0
    for k in range(ctrl.max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
        if term == 0.0:
            return total
        if k > 0 and abs(term) <= ctrl.rel_tol * abs(total):
            return total + term * _tail_factor(k + 1, s + 1, x)
    raise SeriesConvergenceError(
        f"2F1({a}, {b}; {c}; {x}) not converged after {ctrl.max_terms} terms"
    )


def _expint_p(p: float, z: float) -> float:
    """Generalized exponential integral ``E_p(z) = int_1^inf exp(-z u) u^-p du`` for ``p > 1``."""
    if z == 0:
        return 1.0 / (p - 1)
    m = math.ceil(p) - 1
    q = p - m  # in (0, 1]
    if q == 1:
        e = float(_sp.exp1(z))
    else:
        e = z ** (q - 1) * math.gamma(1 - q) * float(_sp.gammaincc(1 - q, z))
    for j in range(m):
        e = (math.exp(-z) - z * e) / (q + j)
    return e


def _tail_factor(n: int, p: float, x: float) -> float:
    """``sum_{m>n} t_m / t_n`` for terms ``t_m ~ x^m m^-p`` (Euler-Maclaurin)."""
    if x <= 0:
        return 0.0
    z = -n * math.log(x)
    if z > 30 or p <= 1:
        # geometric regime: the algebraic factor barely changes over the tail
        return x / (1 - x) if x < 1 else 0.0
    return n * math.exp(z) * _expint_p(p, z) - 0.5


def erfc(x: float) -> float:
    """Complementary error function ``(2/sqrt(pi)) int_x^inf exp(-t^2) dt``."""
    return float(_sp.erfc(x))


def exp_erfc(a: float, z: float) -> float:
    """``exp(a) * erfc(z)`` without overflow when both factors are extreme."""
    if z > 0:
        return math.exp(a - z * z) * float(_sp.erfcx(z))
    return math.exp(a) * float(_sp.erfc(z))


def half_binomial_product(k: int) -> float:
    """``C(1/2, k) * C(1, k + 3/2)`` in closed form.

    ``C(1, k + 3/2) = 1 / (Gamma(k + 5/2) Gamma(1/2 - k))
    = (-1)^k 4 / (pi (2k+1)(2k+3))``.
    """
    c_half = generalized_binomial(0.5, k)
    sign = -1.0 if k % 2 else 1.0
    return c_half * sign * 4.0 / (math.pi * (2 * k + 1) * (2 * k + 3))


def half_binomial_products():
    """Yield ``C(1/2, k) C(1, k + 3/2)`` for ``k = 0, 1, ...`` by recurrence."""
    c_half = 1.0
    k = 0
    while True:
        sign = -1.0 if k % 2 else 1.0
        yield c_half * sign * 4.0 / (math.pi * (2 * k + 1) * (2 * k + 3))
        c_half *= (0.5 - k) / (k + 1)
        k += 1


def cal_f(x: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """``2F1(1/2, -1/2; 5/2; x)`` for ``x`` in ``[0, 1]``."""
    if not 0 <= x <= 1:
        raise ValueError(f"x={x} outside [0, 1]")
    return hyp2f1(0.5, -0.5, 2.5, x, ctrl)


def cal_g(x: float, f: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Charge-refined series ``(3 pi / 4) sum_k c_k x^k C(1/2,k) C(1,k+3/2)``.

    ``c_k = ((1 + 2k) f + 1/2 - k)^(-1/2)``; every radicand is positive only
    for ``f >= 1/2``, which is therefore required.
    """
    if not 0 <= x <= 1:
        raise ValueError(f"x={x} outside [0, 1]")
    if f < 0.5 or f > 1:
        raise ValueError(f"f={f} outside [1/2, 1]: series radicands turn negative")
    total = 0.0
    xk = 1.0
    prev = 0.0
    for k, b in enumerate(half_binomial_products()):
        if k >= ctrl.max_terms:
            raise SeriesConvergenceError(f"G({x}, {f}) not converged after {ctrl.max_terms} terms")
        radicand = (1 + 2 * k) * f + 0.5 - k
        term = b * xk / math.sqrt(radicand)
        total += term
        if term == 0.0:
            break
        if k > 1 and abs(term) <= ctrl.rel_tol * abs(total):
            # algebraic decay k^-p, p between 7/2 and 4; read p off the last two terms
            p = math.log(prev * x / term) / math.log(k / (k - 1))
            total += term * _tail_factor(k, p, x)
            break
        prev = term
        xk *= x
    return 0.75 * math.pi * total
