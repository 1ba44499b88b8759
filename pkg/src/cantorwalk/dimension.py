"""Dimension analytics along random paths and finite-state pressure solving.

The per-depth log-length and log-mass of a path prefix come from the same
integer step data as the exact geometry and measure (the length product
uses the step denominators, the mass product the kernel numerators), so
they are evaluated directly in the log domain at any depth.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import measure
from .geometry import step_denominator
from .walks import WalkPath


def _log_q(precision: int = 80) -> float:
    with mp.workprec(precision):
        return float(mp.log(3 / mp.pi ** 2))


@dataclass
class DimSeries:
    """Per-depth log-length, log-mass and their ratio along one prefix.

    ``furstenberg`` holds log r_{n+1} / log r_n with r_n the cylinder
    length; it has one entry fewer than the depth arrays.
    """

    alpha: Fraction
    symbols: np.ndarray
    n: np.ndarray
    log_len: np.ndarray
    log_mass: np.ndarray
    ratio: np.ndarray
    furstenberg: np.ndarray


def dim_series(path_or_symbols, alpha, precision: int = 80) -> DimSeries:
    """Dimension series for a dissipative path (or raw symbol sequence).

    Repetition steps use the doubled denominator 2k and renewal steps use
    k, exactly as in the geometry; both product formulas extend verbatim
    to these cases.
    """
    if isinstance(path_or_symbols, WalkPath):
        if path_or_symbols.params.kind != "dissipative":
            raise ValueError("dim_series expects a dissipative path")
        symbols = np.asarray(path_or_symbols.states[1:], dtype=np.float64)
    else:
        symbols = np.asarray(path_or_symbols, dtype=np.float64)
    if symbols.size == 0:
        raise ValueError("empty prefix")
    alpha = Fraction(alpha)
    beta = float(2 * alpha)
    prev = np.concatenate(([0.0], symbols[:-1]))
    nxt = symbols
    diff = np.abs(nxt - prev)
    ssum = nxt + prev
    with np.errstate(divide="ignore"):
        d = np.where(nxt == 0, prev, np.where(nxt == prev, 2 * prev, diff))
        # kernel numerator f_i per step; discarded branches may hit 0**-beta
        f = np.where(
            nxt == 0, prev ** -beta,
            np.where(nxt == prev, (2 * prev) ** -beta,
                     diff ** -beta + ssum ** -beta))
    if np.any(d <= 0):
        raise ValueError("prefix is not admissible")
    with mp.workprec(precision):
        log_q = float(mp.log(3 / mp.pi ** 2))
        log_2zb = float(mp.log(2 * measure.zeta(2 * alpha, precision)))
    nn = np.arange(1, symbols.size + 1, dtype=np.float64)
    log_len = nn * log_q - 2 * np.cumsum(np.log(d))
    log_mass = -nn * log_2zb + np.cumsum(np.log(f))
    ratio = log_mass / log_len
    furst = log_len[1:] / log_len[:-1]
    return DimSeries(alpha=alpha, symbols=symbols.copy(), n=nn,
                     log_len=log_len, log_mass=log_mass, ratio=ratio,
                     furstenberg=furst)


def furstenberg_ratio_check(series: DimSeries, n0: int) -> float:
    """Max |log r_{n+1}/log r_n - 1| over n >= n0."""
    if series.furstenberg.size <= n0 - 1:
        raise ValueError("series too short for n0")
    return float(np.max(np.abs(series.furstenberg[n0 - 1:] - 1.0)))


@dataclass
class PressureEstimate:
    """Root s* of spectral-radius(T_s) = 1 for the truncated system."""

    state_cutoff: int
    s_star: float
    tolerance: float
    lambda_trace: list[tuple[float, float]]  # (s, lambda(s)) evaluations


def _legal_transitions(state_cutoff: int):
    """Yield (m, l, d) over legal one-step transitions with symbols <= cutoff."""
    for m in range(state_cutoff + 1):
        for l in range(0 if m else 1, state_cutoff + 1):
            yield m, l, step_denominator(m, l)


def _log_weight_matrix(state_cutoff: int) -> np.ndarray:
    """Matrix of log(q/d^2) over legal transitions, -inf where illegal."""
    k = state_cutoff
    log_q = _log_q()
    lw = np.full((k + 1, k + 1), -np.inf)
    for m, l, d in _legal_transitions(k):
        lw[m, l] = log_q - 2 * np.log(d)
    return lw


def _spectral_radius(weights: np.ndarray, tol: float = 1e-12,
                     max_iter: int = 100000) -> float:
    """Dominant eigenvalue of a non-negative matrix by power iteration."""
    n = weights.shape[0]
    v = np.full(n, 1.0 / np.sqrt(n))
    lam = 0.0
    for _ in range(max_iter):
        w = weights @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        lam_new = float(v @ w)
        v = w / norm
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    raise ArithmeticError("power iteration did not converge")


def pressure_lambda(state_cutoff: int, s: float,
                    power_tol: float = 1e-12) -> float:
    """Spectral radius of the length-transfer matrix at exponent s."""
    lw = _log_weight_matrix(state_cutoff)
    return _spectral_radius(np.exp(s * lw), tol=power_tol)


def pressure_dimension(state_cutoff: int, tolerance: float = 1e-6,
                       power_tol: float = 1e-12) -> PressureEstimate:
    """Solve spectral-radius(T_s) = 1 by bisection.

    T_s[m, l] = (q / d(m, l)^2)^s over legal transitions with symbols
    <= state_cutoff.  lambda(s) is strictly decreasing in s, and at s = 1
    the hole deficit forces lambda < 1, so s* lower-bounds the dimension
    of the full construction.
    """
    if state_cutoff < 1:
        raise ValueError("state_cutoff must be >= 1")
    lw = _log_weight_matrix(state_cutoff)
    trace: list[tuple[float, float]] = []

    def lam(s: float) -> float:
        val = _spectral_radius(np.exp(s * lw), tol=power_tol)
        trace.append((s, val))
        return val

    hi = 1.0
    if lam(hi) >= 1.0:
        raise ArithmeticError("lambda(1) >= 1: transfer matrix malformed")
    lo = 0.5
    while lam(lo) < 1.0:
        lo /= 2
        if lo < 1e-6:
            raise ArithmeticError("no bracket: state_cutoff too small")
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if lam(mid) < 1.0:
            hi = mid
        else:
            lo = mid
    return PressureEstimate(state_cutoff=state_cutoff,
                            s_star=(lo + hi) / 2, tolerance=tolerance,
                            lambda_trace=trace)


@dataclass
class LebesgueDecay:
    """Per-level total length of the truncated construction tree."""

    depth: int
    state_cutoff: int
    level_mass: list[float]        # truncated lower value per level
    overcount_bound: list[float]   # rigorous bound on the truncated-away mass


def lebesgue_mass_decay(depth: int, state_cutoff: int) -> LebesgueDecay:
    """Total interval length per level under symbol truncation.

    v[k] tracks the total length of level-n cylinders with last symbol k;
    one transfer step multiplies by q/d^2 over legal transitions.  Children
    with symbol > state_cutoff are dropped; the dropped mass per step is
    bounded by q*v[k]*tail(state_cutoff - k) with tail(t) <= 1/t (and
    <= zeta(2) for t = 0), and a dropped cylinder's whole subtree carries
    at most the cylinder's own length per level, so the cumulative drop
    bounds the per-level overcount.
    """
    if depth < 1 or state_cutoff < 2:
        raise ValueError("need depth >= 1 and state_cutoff >= 2")
    kmax = state_cutoff
    with mp.workprec(80):
        q = float(3 / mp.pi ** 2)
        zeta2 = float(mp.pi ** 2 / 6)
    w = np.zeros((kmax + 1, kmax + 1))
    for m, l, d in _legal_transitions(kmax):
        w[m, l] = q / (d * d)
    # tail bound for dropped left-block children of state k
    tail = np.array([zeta2 if kmax - k == 0 else 1.0 / (kmax - k)
                     for k in range(kmax + 1)])
    v = np.zeros(kmax + 1)
    for l in range(1, kmax + 1):
        v[l] = q / l ** 2
    dropped = q * 1.0 / kmax  # root children with symbol > cutoff
    levels = [float(v.sum())]
    bounds = [dropped]
    for _ in range(1, depth):
        dropped += float(np.sum(q * v * tail))
        v = v @ w
        levels.append(float(v.sum()))
        bounds.append(dropped)
    return LebesgueDecay(depth=depth, state_cutoff=state_cutoff,
                         level_mass=levels, overcount_bound=bounds)
