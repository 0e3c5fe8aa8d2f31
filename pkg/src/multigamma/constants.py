"""Arbitrary-precision Hurwitz zeta, its s-derivative, and zeta'(-j).

The evaluators and oracles in this package consume three things from here:
zeta(s, a) off the pole, the partial derivative d/ds zeta(s, a) (needed at
non-positive integer s, where finite differencing would be both slow and
inaccurate), and the derived constants zeta'(-j).

The algorithm is Euler-Maclaurin continuation,

    zeta(s, a) = sum_{n<M} (n+a)^-s  +  (M+a)^(1-s)/(s-1)  +  (M+a)^-s / 2
                 + sum_{k=1..K} B_{2k}/(2k)! * poch(s, 2k-1) * (M+a)^(-s-2k+1),

with the cutoff M and correction order K chosen from the size of the first
omitted term (both overridable).  The s-derivative differentiates every term
of the same formula; the Pochhammer derivative is accumulated by the product
rule, which stays finite at negative integer s where a logarithmic-derivative
shortcut would divide by zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exact_poly import bernoulli_numbers

__all__ = ["Precision", "hurwitz_zeta", "hurwitz_zeta_sderiv", "zeta_prime_neg"]


@dataclass(frozen=True)
class Precision:
    """Requested decimal digits plus guard digits; work at digits + guard."""

    digits: int = 15
    guard: int = 10

    def __post_init__(self) -> None:
        if self.digits < 10:
            raise ValueError("digits must be >= 10")
        if self.guard < 10:
            raise ValueError("guard digits must be >= 10")

    @property
    def working_dps(self) -> int:
        return self.digits + self.guard


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _check_finite(value, what: str):
    if mpmath.isnan(value) or mpmath.isinf(value):
        raise ArithmeticError(f"{what} produced a non-finite value")
    return value


def _poch_and_derivative(s, m: int):
    """(poch(s, m), d/ds poch(s, m)) by the product rule; exact at integer s."""
    p = mpmath.mpf(1)
    dp = mpmath.mpf(0)
    for i in range(m):
        dp = dp * (s + i) + p
        p = p * (s + i)
    return p, dp


def _euler_maclaurin(s, a, cutoff: int, order_cap: int, target, want_deriv: bool):
    """One Euler-Maclaurin evaluation at fixed cutoff.

    Returns (value, deriv, converged) where converged means the correction
    terms dropped below target before the asymptotic tail started growing.
    """
    base = cutoff + a
    log_base = mpmath.log(base)

    total = mpmath.mpf(0)
    dtotal = mpmath.mpf(0)
    for n in range(cutoff):
        t = (n + a) ** (-s)
        total += t
        if want_deriv:
            dtotal -= mpmath.log(n + a) * t

    tail = base ** (1 - s) / (s - 1)
    half = base ** (-s) / 2
    total += tail + half
    if want_deriv:
        dtotal += base ** (1 - s) * (-log_base / (s - 1) - (s - 1) ** -2)
        dtotal -= log_base * half

    nums = bernoulli_numbers(2 * order_cap)
    scale = base ** (-s + 1)
    converged = False
    prev_size = mpmath.inf
    grew = 0
    for k in range(1, order_cap + 1):
        b2k = mpmath.mpf(nums[2 * k].numerator) / nums[2 * k].denominator
        coeff = b2k / math.factorial(2 * k)
        p, dp = _poch_and_derivative(s, 2 * k - 1)
        scale = scale / (base * base)  # base**(-s - 2k + 1)
        term = coeff * p * scale
        total += term
        size = abs(term)
        if want_deriv:
            # at non-positive integer s the value terms vanish (poch hits 0)
            # while the derivative terms do not; convergence must watch both
            dterm = coeff * (dp - p * log_base) * scale
            dtotal += dterm
            size = max(size, abs(dterm))
        if size < target:
            converged = True
            break
        if size > prev_size:
            grew += 1
            if grew >= 2:
                break  # asymptotic tail diverging; caller enlarges the cutoff
        else:
            grew = 0
        prev_size = size
    return total, dtotal, converged


def _hurwitz_core(s, a, prec: Precision, cutoff, order, want_deriv: bool):
    with mpmath.workdps(prec.working_dps):
        s = _to_mpf(s)
        a = _to_mpf(a)
        if a <= 0:
            raise ValueError("hurwitz zeta requires a > 0")
        if s == 1:
            raise ValueError("hurwitz zeta has a pole at s = 1")
        target = mpmath.mpf(10) ** -(prec.digits + prec.guard // 2)

        if order is not None:
            order_cap = int(order)
            if order_cap < 0:
                raise ValueError("order must be >= 0")
        else:
            order_cap = max(20, prec.working_dps)

        if cutoff is not None:
            m = int(cutoff)
            if m < 0:
                raise ValueError("cutoff must be >= 0")
            value, deriv, converged = _euler_maclaurin(s, a, m, order_cap, target, want_deriv)
            if order is None and not converged:
                raise ArithmeticError("Euler-Maclaurin failed to converge at the requested cutoff")
        else:
            # First omitted term decays like ((|s|+2k)/(2*pi*(M+a)))^(2k):
            # M+a modestly above dps*ln(10)/(2*pi) makes the series reach the target.
            m = max(1, math.ceil(0.40 * prec.working_dps + 0.5 * abs(s) + 2 - a))
            for _ in range(12):
                value, deriv, converged = _euler_maclaurin(s, a, m, order_cap, target, want_deriv)
                if converged:
                    break
                m *= 2
            else:
                raise ArithmeticError("Euler-Maclaurin failed to converge")

        _check_finite(value, "hurwitz_zeta")
        if want_deriv:
            _check_finite(deriv, "hurwitz_zeta_sderiv")
        return +value, +deriv


def hurwitz_zeta(s, a, prec: Precision = Precision(), *, cutoff: int | None = None,
                 order: int | None = None):
    """zeta(s, a) = sum_{n>=0} (n+a)^-s, continued to all real s != 1.

    a must be positive real.  Absolute error target 10^-digits; cutoff and
    correction order are chosen adaptively unless given.
    """
    value, _ = _hurwitz_core(s, a, prec, cutoff, order, want_deriv=False)
    return value


def hurwitz_zeta_sderiv(s, a, prec: Precision = Precision(), *, cutoff: int | None = None,
                        order: int | None = None):
    """d/ds zeta(s, a) by term-wise differentiation of Euler-Maclaurin.

    Never finite differencing — this stays accurate at s = 0, -1, -2, ...
    where the zeta'(-j) constants live.
    """
    _, deriv = _hurwitz_core(s, a, prec, cutoff, order, want_deriv=True)
    return deriv


_ZETA_PRIME_CACHE: dict[tuple[int, int, int], object] = {}


def zeta_prime_neg(j: int, prec: Precision = Precision()):
    """zeta'(-j) for integer j >= 0; memoized per (j, precision)."""
    if j < 0:
        raise ValueError("j must be >= 0")
    key = (j, prec.digits, prec.guard)
    if key not in _ZETA_PRIME_CACHE:
        _ZETA_PRIME_CACHE[key] = hurwitz_zeta_sderiv(-j, 1, prec)
    return _ZETA_PRIME_CACHE[key]
