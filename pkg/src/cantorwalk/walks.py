"""Seeded simulation of the three walks and their diagnostics.

Walk kinds:

* ``cauchy_Z``    is the symmetric zeta-jump walk on the integers,
* ``folded``      is its absolute value,
* ``dissipative`` is the walk on the non-negative integers whose kernel
  matches the cylinder measure (exponent beta = 2*alpha).

The folded and dissipative walks are both realized as the absolute value of
a signed zeta-jump walk: the folded walk is defined that way, and the
absolute value of the signed walk is a Markov chain whose one-step kernel
is exactly the dissipative kernel, so this sampler is exact in law.

Reproducibility: numpy's PCG64 via default_rng, with per-path generators
derived from SeedSequence(seed).spawn-style keys, so path i is replayable
on its own.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import measure
from .measure import MeasureParams

TABLE_SIZE = 1 << 16  # inverse-CDF table covers |jump| <= 2^16

_SAMPLER_CACHE: dict[tuple[str, int], "ZetaJumpSampler"] = {}


def path_rng(seed: int, path_id: int) -> np.random.Generator:
    """Independent, replayable generator for one path."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(int(path_id),)))


class ZetaJumpSampler:
    """Draws jump magnitudes with P(|l| = j) = j^-beta / zeta(beta).

    Inverse-CDF table up to TABLE_SIZE; beyond it, inversion of the
    continuous x^-beta tail with an exact accept/reject correction, so the
    discrete tail law is exact (up to float64 rounding of the table).
    """

    def __init__(self, beta, table_size: int = TABLE_SIZE):
        beta = Fraction(beta)
        if not (1 < beta < 2):
            raise ValueError(f"beta must lie in (1, 2), got {beta}")
        self.beta = beta
        self.beta_f = float(beta)
        self.zeta_beta = float(measure.zeta(beta, 80))
        j = np.arange(1, table_size + 1, dtype=np.float64)
        pmf = j ** (-self.beta_f) / self.zeta_beta
        self.cum = np.cumsum(pmf)
        self.table_size = table_size

    @classmethod
    def cached(cls, beta) -> "ZetaJumpSampler":
        key = (str(Fraction(beta)), TABLE_SIZE)
        s = _SAMPLER_CACHE.get(key)
        if s is None:
            s = cls(beta)
            _SAMPLER_CACHE[key] = s
        return s

    def _sample_tail(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Magnitudes > table_size, exact accept/reject on the integer law."""
        b = self.beta_f
        j0 = float(self.table_size)
        out = np.empty(size)
        need = np.arange(size)
        while need.size:
            u = rng.random(need.size)
            x = j0 * (1.0 - u) ** (-1.0 / (b - 1.0))
            j = np.floor(x) + 1.0  # proposal pmf prop. to int_{j-1}^{j} x^-b
            # (j-1)^(1-b) - j^(1-b), in a cancellation-safe form
            envelope = j ** (1.0 - b) * np.expm1(
                (1.0 - b) * np.log1p(-1.0 / j)) / (b - 1.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = j ** (-b) / envelope
            accept = rng.random(need.size) < np.nan_to_num(ratio, nan=0.0)
            out[need[accept]] = j[accept]
            need = need[~accept]
        return out

    def sample_abs(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Vector of jump magnitudes (float64 holding exact integers)."""
        u = rng.random(size)
        idx = np.searchsorted(self.cum, u)
        out = (idx + 1).astype(np.float64)
        tail = idx >= self.table_size
        ntail = int(tail.sum())
        if ntail:
            out[tail] = self._sample_tail(rng, ntail)
        return out

    def sample_signed(self, rng: np.random.Generator, size: int) -> np.ndarray:
        mag = self.sample_abs(rng, size)
        sign = rng.integers(0, 2, size=size) * 2 - 1
        return mag * sign


def sample_zeta_jump(beta, rng: np.random.Generator) -> int:
    """One signed zeta jump (nonzero integer, sign uniform)."""
    return int(ZetaJumpSampler.cached(beta).sample_signed(rng, 1)[0])


@dataclass(frozen=True)
class WalkParams:
    """Configuration of one simulated walk."""

    kind: str                       # cauchy_Z | folded | dissipative
    steps: int
    seed: int
    beta: Fraction | None = None    # cauchy_Z / folded
    alpha: Fraction | None = None   # dissipative

    def __post_init__(self) -> None:
        if self.kind not in ("cauchy_Z", "folded", "dissipative"):
            raise ValueError(f"unknown walk kind {self.kind!r}")
        if self.kind == "dissipative":
            if self.alpha is None:
                raise ValueError("dissipative walk needs alpha")
            a = Fraction(self.alpha)
            object.__setattr__(self, "alpha", a)
            if not (Fraction(1, 2) < a <= 1):
                raise ValueError("alpha must lie in (1/2, 1]")
            object.__setattr__(self, "beta", 2 * a)
        else:
            if self.beta is None:
                raise ValueError(f"{self.kind} walk needs beta")
            b = Fraction(self.beta)
            object.__setattr__(self, "beta", b)
            if not (1 < b <= 2):
                raise ValueError("beta must lie in (1, 2]")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")

    @property
    def jump_beta(self) -> Fraction:
        return self.beta


@dataclass
class WalkPath:
    """One realization: states[0] = 0 and len(states) = steps + 1.

    ``jumps`` is the signed jump stream that drove the path (folded and
    dissipative paths audit their construction through it).  States are
    float64 holding exact integers; heavy-tailed jumps can exceed int64.
    """

    params: WalkParams
    path_id: int
    states: np.ndarray
    jumps: np.ndarray

    def increments(self) -> np.ndarray:
        return np.abs(np.diff(self.states))


def _signed_states(params: WalkParams, rng: np.random.Generator):
    b = params.jump_beta
    if b == 2:
        raise ValueError("beta = 2 has no zeta-jump sampler (boundary case)")
    sampler = ZetaJumpSampler.cached(b)
    jumps = sampler.sample_signed(rng, params.steps)
    states = np.concatenate(([0.0], np.cumsum(jumps)))
    return states, jumps


def simulate_path(params: WalkParams, path_id: int = 0) -> WalkPath:
    """Simulate one path, reproducible from (params.seed, path_id)."""
    rng = path_rng(params.seed, path_id)
    signed, jumps = _signed_states(params, rng)
    if params.kind == "cauchy_Z":
        states = signed
    else:
        states = np.abs(signed)
    return WalkPath(params=params, path_id=path_id, states=states, jumps=jumps)


def step(kind: str, state: int, beta, rng: np.random.Generator) -> int:
    """One transition of the given walk kind from ``state``.

    For the folded and dissipative kinds this samples |state + l| with l a
    signed zeta jump, which realizes the kernel exactly (for the
    dissipative kind beta is the doubled exponent 2*alpha).
    """
    l = sample_zeta_jump(beta, rng)
    if kind == "cauchy_Z":
        return state + l
    if state < 0:
        raise ValueError("folded/dissipative state must be >= 0")
    return abs(state + l)


def folded_kernel_identity(beta, m_max: int, precision: int = 256) -> float:
    """Max |folded kernel - dissipative kernel| over states m, l <= m_max.

    The folded-walk conditionals are computed directly from zeta(beta); the
    dissipative kernel comes from the measure module at alpha = beta/2.
    Analytically the difference is zero, so only rounding remains.
    """
    beta = Fraction(beta)
    if not (1 < beta < 2):
        raise ValueError("beta must lie in (1, 2)")
    if m_max < 2:
        raise ValueError("m_max must be >= 2")
    params = MeasureParams(alpha=beta / 2, precision=precision)
    with mp.workprec(precision):
        b = mp.mpf(beta.numerator) / beta.denominator
        z = measure.zeta(beta, precision)
        worst = mp.mpf(0)
        for m in range(m_max + 1):
            for l in range(m_max + 1):
                if m == 0 and l == 0:
                    folded = mp.mpf(0)
                elif l == 0:
                    folded = mp.mpf(m) ** (-b) / (2 * z)
                elif l == m:
                    folded = mp.mpf(2 * m) ** (-b) / (2 * z)
                else:
                    folded = (mp.mpf(abs(m - l)) ** (-b)
                              + mp.mpf(m + l) ** (-b)) / (2 * z)
                diff = abs(folded - measure.transition_prob(m, l, params))
                if diff > worst:
                    worst = diff
        return float(worst)


@dataclass
class TransienceReport:
    params: WalkParams
    n_paths: int
    checkpoints: list[int]
    thresholds: list[int]
    return_fraction: dict[int, float]       # paths visiting 0 in [t, steps]
    escape_fraction: dict[int, dict[int, float]]  # min over [t,steps] >= thr
    state_quantiles: dict[int, dict[str, float]]
    seeds: dict


def transience_stats(params: WalkParams, n_paths: int,
                     checkpoints: list[int],
                     thresholds: tuple[int, ...] = (1, 10, 100)
                     ) -> TransienceReport:
    """Monte Carlo transience diagnostics for the dissipative walk."""
    if params.kind != "dissipative":
        raise ValueError("transience_stats expects a dissipative walk")
    checkpoints = sorted(int(t) for t in checkpoints)
    if checkpoints and checkpoints[-1] >= params.steps:
        raise ValueError("checkpoints must be < steps")
    returns = {t: 0 for t in checkpoints}
    escapes = {t: {thr: 0 for thr in thresholds} for t in checkpoints}
    states_at = {t: np.empty(n_paths) for t in checkpoints}
    for i in range(n_paths):
        path = simulate_path(params, path_id=i)
        s = path.states
        # suffix minima, computed once right-to-left
        for t in checkpoints:
            tail = s[t:]
            m = tail.min()
            if m == 0:
                returns[t] += 1
            for thr in thresholds:
                if m >= thr:
                    escapes[t][thr] += 1
            states_at[t][i] = s[t]
    quant = {
        t: {p: float(np.quantile(states_at[t], float(p[1:]) / 100))
            for p in ("q05", "q25", "q50", "q75", "q95")}
        for t in checkpoints
    }
    return TransienceReport(
        params=params, n_paths=n_paths, checkpoints=checkpoints,
        thresholds=list(thresholds),
        return_fraction={t: returns[t] / n_paths for t in checkpoints},
        escape_fraction={t: {thr: escapes[t][thr] / n_paths
                             for thr in thresholds} for t in checkpoints},
        state_quantiles=quant,
        seeds={"seed": params.seed, "path_ids": [0, n_paths - 1]},
    )


def increment_tail_prob(beta, gamma, n: int, precision: int = 256):
    """Rigorous bracket of P(|jump at step n| >= n^gamma), plus verdict.

    Returns ((lo, hi), summable) where summable reports whether the series
    over n converges, i.e. gamma*(beta-1) > 1 (harmonic comparison at the
    boundary).
    """
    beta = Fraction(beta)
    if not (1 < beta < 2):
        raise ValueError("beta must lie in (1, 2)")
    if n < 1:
        raise ValueError("n must be >= 1")
    with mp.workprec(precision):
        g = measure._to_mpf(Fraction(gamma))
        threshold = int(mp.ceil(mp.mpf(n) ** g))
        z_lo, z_hi = measure.zeta_bracket(beta, precision)
        if threshold <= 1:
            return (mp.mpf(1), mp.mpf(1)), _summable(beta, gamma)
        t_lo, t_hi = measure.power_tail_bracket(beta, threshold, precision)
        lo = t_lo / z_hi
        hi = min(mp.mpf(1), t_hi / z_lo)
        return (lo, hi), _summable(beta, gamma)


def _summable(beta, gamma) -> bool:
    return Fraction(gamma) * (Fraction(beta) - 1) > 1


def gamma_envelope_violations(path: WalkPath, gamma, n0: int) -> int:
    """Count of n >= n0 with |k_{n+1} - k_n| > n^gamma along the path."""
    g = float(Fraction(gamma))
    inc = path.increments()  # inc[n-1] = |k_n - k_{n-1}| ... index shift below
    n = np.arange(len(path.states) - 1, dtype=np.float64)  # n = 0..steps-1
    mask = n >= n0
    return int(np.count_nonzero(inc[mask] > n[mask] ** g))
