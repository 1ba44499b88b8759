"""The measure family mu_alpha: kernel, cylinder masses, consistency checks.

Masses are never stored as bare floats.  A cylinder mass is kept as its
depth plus the list of integer step descriptors, and is (re-)evaluated at
any requested precision; deep cylinders would underflow double precision
around depth 500 otherwise, and the dimension analytics need log-masses
directly from the same structure.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .coding import AdmissibleWord

DEFAULT_PRECISION = 256

_ZETA_CACHE: dict[tuple[str, int], mp.mpf] = {}
_ZETA_LOCK = threading.Lock()


class ZetaDomainError(ValueError):
    """s is too close to 1 for the requested evaluation."""


def _to_mpf(s):
    if isinstance(s, Fraction):
        return mp.mpf(s.numerator) / s.denominator
    return mp.mpf(s)


def zeta(s, precision: int = DEFAULT_PRECISION):
    """Riemann zeta at real s > 1 with |error| < 2^-precision.

    Euler-Maclaurin summation with an explicit remainder bound: for real s
    the remainder after the B_{2M} term is at most the magnitude of the
    first omitted term.  N and M are chosen from the precision; if the
    Bernoulli terms stop shrinking before the target is met, N is doubled.
    """
    key = (str(s), precision)
    hit = _ZETA_CACHE.get(key)
    if hit is not None:
        return hit
    guard = 30
    with mp.workprec(precision + guard):
        s_mp = _to_mpf(s)
        if s_mp <= mp.mpf("1.01"):
            raise ZetaDomainError(f"zeta: s={s} too close to 1 (require s > 1.01)")
        target = mp.mpf(2) ** (-(precision + 5))
        n = max(16, precision // 2)
        for _ in range(20):
            acc = mp.mpf(0)
            for k in range(1, n):
                acc += mp.mpf(k) ** (-s_mp)
            acc += mp.mpf(n) ** (1 - s_mp) / (s_mp - 1)
            acc += mp.mpf(n) ** (-s_mp) / 2
            # Bernoulli correction terms
            poch = s_mp  # s(s+1)...(s+2j-2), built incrementally
            npow = mp.mpf(n) ** (-s_mp - 1)
            term = None
            prev_abs = mp.inf
            ok = False
            j = 1
            while True:
                term = mp.bernoulli(2 * j) / mp.factorial(2 * j) * poch * npow
                if abs(term) < target:
                    ok = True
                    break
                if abs(term) >= prev_abs:
                    break  # diverging: need larger N
                acc += term
                prev_abs = abs(term)
                poch *= (s_mp + 2 * j - 1) * (s_mp + 2 * j)
                npow /= n * n
                j += 1
            if ok:
                result = acc
                break
            n *= 2
        else:
            raise ArithmeticError("zeta: Euler-Maclaurin did not converge")
    with _ZETA_LOCK:
        _ZETA_CACHE[key] = result
    return result


def zeta_bracket(s, precision: int = DEFAULT_PRECISION):
    """(lo, hi) rigorously enclosing zeta(s)."""
    with mp.workprec(precision + 10):
        v = zeta(s, precision)
        eps = mp.mpf(2) ** (-precision)
        return v - eps, v + eps


@dataclass(frozen=True)
class MeasureParams:
    """Exponent and working precision for the measure family."""

    alpha: Fraction
    precision: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        a = Fraction(self.alpha)
        object.__setattr__(self, "alpha", a)
        if not (Fraction(1, 2) < a <= 1):
            raise ValueError(f"alpha must lie in (1/2, 1], got {a}")

    @property
    def beta(self) -> Fraction:
        return 2 * self.alpha


def _beta_mpf(params: MeasureParams):
    b = params.beta
    return mp.mpf(b.numerator) / b.denominator


def transition_prob(m: int, l: int, params: MeasureParams):
    """Kernel value P(next = l | state = m) of the walk on the non-negative
    integers; exactly 0 for m = l = 0."""
    m, l = int(m), int(l)
    if m < 0 or l < 0:
        raise ValueError("states must be non-negative")
    if m == 0 and l == 0:
        return mp.mpf(0)
    with mp.workprec(params.precision):
        beta = _beta_mpf(params)
        z = zeta(params.beta, params.precision)
        if l == 0:
            val = mp.mpf(m) ** (-beta)
        elif l == m:
            val = mp.mpf(2 * m) ** (-beta)
        else:
            val = mp.mpf(abs(l - m)) ** (-beta) + mp.mpf(l + m) ** (-beta)
        return val / (2 * z)


@dataclass(frozen=True)
class CylinderMass:
    """Structural mass of a cylinder: depth plus integer step descriptors.

    Each factor is ("pair", d, s), ("diag", m) or ("zero", m) and evaluates
    to d^-2a + s^-2a, (2m)^-2a or m^-2a; the mass is (2 zeta(2a))^-n times
    the product of the factors.
    """

    word: AdmissibleWord
    params: MeasureParams
    factors: tuple[tuple, ...]

    @property
    def depth(self) -> int:
        return len(self.factors)

    def _factor_values(self, precision: int):
        beta = _beta_mpf(self.params)
        for f in self.factors:
            if f[0] == "pair":
                yield mp.mpf(f[1]) ** (-beta) + mp.mpf(f[2]) ** (-beta)
            elif f[0] == "diag":
                yield mp.mpf(2 * f[1]) ** (-beta)
            else:
                yield mp.mpf(f[1]) ** (-beta)

    def value(self, precision: int | None = None):
        precision = precision or self.params.precision
        with mp.workprec(precision):
            z = zeta(self.params.beta, precision)
            acc = mp.mpf(1)
            for v in self._factor_values(precision):
                acc *= v / (2 * z)
            return acc

    def log_value(self, precision: int | None = None):
        """Natural log of the mass, computed in the log domain; safe at any
        depth."""
        precision = precision or self.params.precision
        with mp.workprec(precision):
            z = zeta(self.params.beta, precision)
            acc = -self.depth * mp.log(2 * z)
            for v in self._factor_values(precision):
                acc += mp.log(v)
            return acc

    def to_json(self) -> list[list]:
        return [list(f) for f in self.factors]


def cylinder_mass(word: AdmissibleWord, params: MeasureParams) -> CylinderMass:
    """Structural mass of I_word; the root has mass exactly 1."""
    factors = []
    for prev, nxt in word.transitions():
        if nxt == 0:
            factors.append(("zero", prev))
        elif nxt == prev:
            factors.append(("diag", prev))
        else:
            factors.append(("pair", abs(nxt - prev), nxt + prev))
    return CylinderMass(word=word, params=params, factors=tuple(factors))


def power_tail_bracket(beta, start: int, precision: int = DEFAULT_PRECISION):
    """Rigorous (lo, hi) for sum_{j >= start} j^-beta, start >= 2.

    Integral bounds: int_start^inf x^-beta dx <= sum <= int_{start-1}^inf.
    """
    if start < 2:
        raise ValueError("start must be >= 2")
    with mp.workprec(precision):
        b = _to_mpf(beta)
        if b <= 1:
            raise ValueError("tail diverges for beta <= 1")
        lo = mp.mpf(start) ** (1 - b) / (b - 1)
        hi = mp.mpf(start - 1) ** (1 - b) / (b - 1)
        return lo, hi


@dataclass(frozen=True)
class ConsistencyResult:
    word: AdmissibleWord
    partial_sum: mp.mpf          # sum of child masses with symbol <= K
    tail_lo: mp.mpf
    tail_hi: mp.mpf
    parent_mass: mp.mpf

    @property
    def contains_parent(self) -> bool:
        return bool(self.partial_sum + self.tail_lo <= self.parent_mass
                    <= self.partial_sum + self.tail_hi)


def consistency_defect(word: AdmissibleWord, params: MeasureParams,
                       truncation: int) -> ConsistencyResult:
    """Check mu(parent) = sum over children, with a rigorous tail bracket.

    The children with symbol <= truncation are summed directly (float64,
    with the accumulated rounding folded into the bracket as an explicit
    slack term); the tail is bracketed by integral bounds on the remaining
    inverse-power sums, which are all left-block steps once
    truncation >= last+2.  The zeta enclosure widens the bracket as well.
    """
    k = word.last
    if truncation < k + 2:
        raise ValueError("truncation must be >= last symbol + 2")
    prec = params.precision
    beta = float(_beta_mpf(params))
    z_lo, z_hi = (float(v) for v in zeta_bracket(params.beta, prec))
    parent = float(cylinder_mass(word, params).value(max(prec, 64)))
    l = np.arange(1, truncation + 1, dtype=np.float64)
    if k == 0:
        row = float(np.sum(l ** -beta))  # each child kernel is 2 l^-b / (2z)
        t_lo, t_hi = power_tail_bracket(params.beta, truncation + 1, prec)
        tail_lo = parent * float(t_lo) / z_hi
        tail_hi = parent * float(t_hi) / z_lo
        p_lo = parent * row / z_hi
        p_hi = parent * row / z_lo
    else:
        with np.errstate(divide="ignore"):
            terms = np.abs(l - k) ** -beta + (l + k) ** -beta
        terms[k - 1] = (2 * k) ** -beta  # the diagonal child l = k
        row = float(np.sum(terms)) + float(k) ** -beta  # plus l = 0
        lo1, hi1 = power_tail_bracket(params.beta, truncation + 1 - k, prec)
        lo2, hi2 = power_tail_bracket(params.beta, truncation + 1 + k, prec)
        tail_lo = parent * (float(lo1) + float(lo2)) / (2 * z_hi)
        tail_hi = parent * (float(hi1) + float(hi2)) / (2 * z_lo)
        p_lo = parent * row / (2 * z_hi)
        p_hi = parent * row / (2 * z_lo)
    # float64 summation slack plus the zeta-enclosure width of the partial sum
    slack = 8 * truncation * np.finfo(float).eps * max(p_hi, parent)
    partial = (p_lo + p_hi) / 2
    tail_lo = tail_lo - (partial - p_lo) - slack
    tail_hi = tail_hi + (p_hi - partial) + slack
    return ConsistencyResult(word=word, partial_sum=partial,
                             tail_lo=tail_lo, tail_hi=tail_hi,
                             parent_mass=parent)
