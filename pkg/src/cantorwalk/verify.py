"""The full claims-verification suite.

Each criterion function runs one check end to end and returns a
CriterionResult; the CLI `verify` subcommand and the acceptance tests both
drive these.  All Monte Carlo checks use the frozen seeds below, so every
number here is reproducible bit for bit.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import dimension, geometry, measure, walks
from .coding import AdmissibleWord, random_word
from .measure import MeasureParams

SEED_PARTITION = 1001
SEED_CONSISTENCY = 1002
SEED_KERNEL = 1003
SEED_PATHLAW = 4004
SEED_TRANSIENCE = 1005
SEED_DIMENSION = 1008


@dataclass
class CriterionResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs) -> CriterionResult:
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    return wrapper


@_timed
def criterion_partition(n_words: int = 1000, max_depth: int = 30,
                        truncation: int = 10 ** 5) -> CriterionResult:
    """Left-block child lengths bracket exactly half the parent."""
    rng = np.random.default_rng(SEED_PARTITION)
    worst_width = 0.0
    ok = True
    for _ in range(n_words):
        depth = int(rng.integers(1, max_depth + 1))
        w = random_word(rng, depth)
        lo, hi, half = geometry.left_block_partition_bracket(
            w, truncation, precision=80)
        length = 2 * half
        if not (lo <= half <= hi):
            ok = False
        width = float((hi - lo) / length)
        worst_width = max(worst_width, width)
        if width >= 1e-4:
            ok = False
    return CriterionResult("partition identity", ok,
                           {"words": n_words, "worst_rel_width": worst_width})


@_timed
def criterion_consistency(n_words: int = 100, truncation: int = 10 ** 4
                          ) -> CriterionResult:
    """Parent mass lies in the child-sum bracket for three alphas."""
    rng = np.random.default_rng(SEED_CONSISTENCY)
    alphas = [Fraction(3, 5), Fraction(3, 4), Fraction(9, 10)]
    words = [random_word(rng, int(rng.integers(1, 16)))
             for _ in range(n_words)]
    failures = []
    for a in alphas:
        params = MeasureParams(alpha=a, precision=64)
        for w in words:
            res = measure.consistency_defect(w, params, truncation)
            if not res.contains_parent:
                failures.append((str(a), str(w)))
    return CriterionResult("measure consistency", not failures,
                           {"alphas": [str(a) for a in alphas],
                            "words": n_words, "failures": failures[:5]})


@_timed
def criterion_folded_kernel(m_max: int = 100,
                            precision: int = 256) -> CriterionResult:
    """Folded-walk kernel equals the dissipative kernel to rounding."""
    defects = {}
    ok = True
    for b in (Fraction(6, 5), Fraction(3, 2), Fraction(9, 5)):
        d = walks.folded_kernel_identity(b, m_max, precision)
        defects[str(b)] = d
        if not d < 1e-50:
            ok = False
    return CriterionResult("folded kernel identity", ok, {"defects": defects})


def _empirical_kernel_cells(m: int, alpha: Fraction, n_samples: int,
                            rng: np.random.Generator):
    """One-step empirical frequencies from state m vs the analytic kernel."""
    sampler = walks.ZetaJumpSampler.cached(2 * alpha)
    jumps = sampler.sample_signed(rng, n_samples)
    nxt = np.abs(m + jumps)
    params = MeasureParams(alpha=alpha, precision=64)
    cells = sorted({0, 1, 2, 3, 4, 5} | {max(m - 1, 0), m, m + 1})
    out = []
    for l in cells:
        if m == 0 and l == 0:
            continue
        p = float(measure.transition_prob(m, l, params))
        obs = int(np.count_nonzero(nxt == l))
        sigma = np.sqrt(n_samples * p * (1 - p))
        out.append((l, p, obs, abs(obs - n_samples * p) / sigma))
    return out


@_timed
def criterion_kernel_empirical(n_samples: int = 10 ** 6) -> CriterionResult:
    """Empirical one-step frequencies match the kernel within 3 sigma."""
    rng = np.random.default_rng(SEED_KERNEL)
    alpha = Fraction(3, 4)
    worst = 0.0
    ok = True
    per_state = {}
    for m in (0, 1, 2, 5, 20):
        cells = _empirical_kernel_cells(m, alpha, n_samples, rng)
        zmax = max(z for _, _, _, z in cells)
        per_state[m] = zmax
        worst = max(worst, zmax)
        if zmax >= 3.0:
            ok = False
    return CriterionResult("kernel/empirical agreement", ok,
                           {"worst_z": worst, "per_state": per_state})


@_timed
def criterion_path_law(n_paths: int = 10 ** 6, depth: int = 3,
                       mass_floor: float = 1e-3) -> CriterionResult:
    """Depth-3 prefix frequencies match cylinder masses within 3 sigma."""
    alpha = Fraction(3, 4)
    params = MeasureParams(alpha=alpha, precision=64)
    rng = np.random.default_rng(SEED_PATHLAW)
    sampler = walks.ZetaJumpSampler.cached(2 * alpha)
    jumps = sampler.sample_signed(rng, n_paths * depth).reshape(n_paths, depth)
    states = np.abs(np.cumsum(jumps, axis=1)).astype(np.int64)
    # enumerate the heavy cells: small symbols are enough at mass >= 1e-3
    cap = 30
    heavy = []
    for k1 in range(1, cap):
        for k2 in range(0, cap):
            if k2 == 0 and k1 == 0:
                continue
            for k3 in range(0, cap):
                if k2 == 0 and k3 == 0:
                    continue
                try:
                    wrd = AdmissibleWord((k1, k2, k3))
                except ValueError:
                    continue
                mass = float(measure.cylinder_mass(wrd, params).value(64))
                if mass >= mass_floor:
                    heavy.append((wrd, mass))
    code = (states[:, 0] * (cap * cap)
            + states[:, 1] * cap + states[:, 2])
    code[np.any(states >= cap, axis=1)] = -1
    counts = {}
    vals, cnts = np.unique(code, return_counts=True)
    counts = dict(zip(vals.tolist(), cnts.tolist()))
    worst = 0.0
    ok = True
    for wrd, mass in heavy:
        k1, k2, k3 = wrd.symbols
        obs = counts.get(k1 * cap * cap + k2 * cap + k3, 0)
        sigma = np.sqrt(n_paths * mass * (1 - mass))
        z = abs(obs - n_paths * mass) / sigma
        worst = max(worst, z)
        if z >= 3.0:
            ok = False
    return CriterionResult("path law = cylinder mass", ok,
                           {"cells": len(heavy), "worst_z": worst})


@_timed
def criterion_transience(n_paths: int = 1000, steps: int = 10 ** 5
                         ) -> CriterionResult:
    """Return fractions decay for alpha = 3/4 and dominate at alpha ~ 1."""
    checkpoints = [100, 1000, 10000]
    rep = walks.transience_stats(
        walks.WalkParams(kind="dissipative", steps=steps,
                         seed=SEED_TRANSIENCE, alpha=Fraction(3, 4)),
        n_paths, checkpoints)
    rep_boundary = walks.transience_stats(
        walks.WalkParams(kind="dissipative", steps=steps,
                         seed=SEED_TRANSIENCE, alpha=Fraction(999, 1000)),
        n_paths, checkpoints)
    f = [rep.return_fraction[t] for t in checkpoints]
    g = [rep_boundary.return_fraction[t] for t in checkpoints]
    ok = all(f[i + 1] <= f[i] for i in range(len(f) - 1))
    ok = ok and f[-1] < 0.2
    ok = ok and all(gb > fa for gb, fa in zip(g, f))
    return CriterionResult("transience trend", ok,
                           {"return_fraction": dict(zip(checkpoints, f)),
                            "boundary_fraction": dict(zip(checkpoints, g))})


def _tail_prob_brackets(beta: float, gamma: float, ns: np.ndarray,
                        zeta_lo: float, zeta_hi: float):
    """Vectorized integral brackets of P(|jump| >= n^gamma)."""
    thresholds = np.ceil(ns.astype(np.float64) ** gamma)
    lo = thresholds ** (1.0 - beta) / (beta - 1.0) / zeta_hi
    hi = (thresholds - 1.0) ** (1.0 - beta) / (beta - 1.0) / zeta_lo
    return lo, np.minimum(hi, 1.0)


@_timed
def criterion_borel_cantelli(n_paths: int = 1000, steps: int = 10 ** 5,
                             gamma: float = 3.0, n0: int = 100
                             ) -> CriterionResult:
    """Envelope-violation counts fall in the band predicted by the tails."""
    beta = Fraction(3, 2)
    # bracket monotonicity via the rigorous scalar evaluator
    his = []
    los = []
    for n in range(2, 30):
        (lo, hi), summable = walks.increment_tail_prob(beta, 3, n)
        los.append(float(lo))
        his.append(float(hi))
    mono = all(his[i + 1] <= his[i] for i in range(len(his) - 1))
    mono = mono and all(los[i + 1] <= los[i] for i in range(len(los) - 1))
    mono = mono and summable  # gamma=3 > 1/(beta-1) = 2
    _, not_summable = walks.increment_tail_prob(beta, 2, 10)
    mono = mono and not not_summable  # gamma*(beta-1) = 1 boundary diverges

    z_lo, z_hi = (float(v) for v in measure.zeta_bracket(beta, 64))
    ns = np.arange(n0, steps)
    p_lo, p_hi = _tail_prob_brackets(float(beta), gamma, ns, z_lo, z_hi)
    mean_lo = n_paths * float(p_lo.sum())
    mean_hi = n_paths * float(p_hi.sum())
    sigma = float(np.sqrt(n_paths * p_hi.sum()))

    total = 0
    for i in range(n_paths):
        path = walks.simulate_path(
            walks.WalkParams(kind="dissipative", steps=steps,
                             seed=SEED_TRANSIENCE, alpha=Fraction(3, 4)),
            path_id=i)
        total += walks.gamma_envelope_violations(path, gamma, n0)
    ok = mono and (mean_lo - 3 * sigma <= total <= mean_hi + 3 * sigma)
    return CriterionResult("Borel-Cantelli tails", ok,
                           {"observed": total, "band":
                            [mean_lo - 3 * sigma, mean_hi + 3 * sigma],
                            "bracket_monotone": mono})


def _dimension_paths(n_paths: int = 100, depth: int = 10 ** 4,
                     alpha: Fraction = Fraction(9, 10)):
    series = []
    for i in range(n_paths):
        path = walks.simulate_path(
            walks.WalkParams(kind="dissipative", steps=depth,
                             seed=SEED_DIMENSION, alpha=alpha), path_id=i)
        series.append(dimension.dim_series(path, alpha))
    return series


@_timed
def criterion_pointwise_dimension(n_paths: int = 100, depth: int = 10 ** 4
                                  ) -> CriterionResult:
    """Terminal ratio quantile and running-infimum monotonicity."""
    series = _dimension_paths(n_paths, depth)
    final = np.array([s.ratio[-1] for s in series])
    q05 = float(np.quantile(final, 0.05))
    ok = q05 > 0.75
    # suffix minimum of the ratio beyond n = 1000 must be non-decreasing
    good = 0
    for s in series:
        tail = s.ratio[999:]
        suffix_min = np.minimum.accumulate(tail[::-1])[::-1]
        if np.all(np.diff(suffix_min) >= -1e-12):
            good += 1
    frac_monotone = good / n_paths
    ok = ok and frac_monotone >= 0.9
    return CriterionResult("pointwise dimension", ok,
                           {"q05_final_ratio": q05,
                            "monotone_fraction": frac_monotone})


@_timed
def criterion_furstenberg(n_paths: int = 100, depth: int = 10 ** 4,
                          n0: int = 1000) -> CriterionResult:
    """log r_{n+1}/log r_n stays within 0.05 of 1 beyond n0."""
    series = _dimension_paths(n_paths, depth)
    devs = [dimension.furstenberg_ratio_check(s, n0) for s in series]
    worst = max(devs)
    return CriterionResult("Furstenberg ratio", worst < 0.05,
                           {"worst_deviation": worst})


@_timed
def criterion_pressure() -> CriterionResult:
    """s*(K) increases toward 1 and stays below it."""
    cutoffs = [2, 5, 10, 50, 100, 500]
    stars = [dimension.pressure_dimension(k).s_star for k in cutoffs]
    ok = all(b > a for a, b in zip(stars, stars[1:]))
    ok = ok and all(s < 1 for s in stars)
    ok = ok and stars[-1] > stars[0] + 0.1
    return CriterionResult("pressure monotonicity", ok,
                           {"cutoffs": cutoffs, "s_star": stars})


def _brute_force_level_masses(depth: int, cutoff: int) -> list[float]:
    """Direct enumeration oracle for small depth and cutoff."""
    from .coding import children
    from .geometry import cylinder_length

    with mp.workprec(80):
        q = float(3 / mp.pi ** 2)
    level = [AdmissibleWord()]
    out = []
    for _ in range(depth):
        nxt = []
        for w in level:
            nxt.extend(children(w, cutoff))
        total = 0.0
        for w in nxt:
            r, n = cylinder_length(w)
            total += r.numerator / r.denominator * q ** n
        out.append(total)
        level = nxt
    return out


@_timed
def criterion_lebesgue(deep_depth: int = 50,
                       deep_cutoff: int = 1000) -> CriterionResult:
    """Transfer recursion matches enumeration; level masses decay."""
    ok = True
    worst_rel = 0.0
    for cutoff in (5, 12, 20):
        brute = _brute_force_level_masses(3, cutoff)
        fast = dimension.lebesgue_mass_decay(3, cutoff).level_mass
        for a, b in zip(brute, fast):
            rel = abs(a - b) / a
            worst_rel = max(worst_rel, rel)
            if rel >= 1e-12:
                ok = False
    deep = dimension.lebesgue_mass_decay(deep_depth, deep_cutoff).level_mass
    decreasing = all(b < a for a, b in zip(deep, deep[1:]))
    ok = ok and decreasing
    return CriterionResult("Lebesgue level-mass decay", ok,
                           {"worst_enumeration_rel": worst_rel,
                            "strictly_decreasing": decreasing,
                            "first_levels": deep[:5]})


ALL_CRITERIA = [
    criterion_partition,
    criterion_consistency,
    criterion_folded_kernel,
    criterion_kernel_empirical,
    criterion_path_law,
    criterion_transience,
    criterion_borel_cantelli,
    criterion_pointwise_dimension,
    criterion_furstenberg,
    criterion_pressure,
    criterion_lebesgue,
]


def run_all(quick: bool = False) -> list[CriterionResult]:
    """Run the verification suite; quick mode shrinks the Monte Carlo sizes."""
    if not quick:
        return [fn() for fn in ALL_CRITERIA]
    return [
        criterion_partition(n_words=50, truncation=10 ** 4),
        criterion_consistency(n_words=10, truncation=2000),
        criterion_folded_kernel(m_max=30),
        criterion_kernel_empirical(n_samples=10 ** 5),
        criterion_pressure(),
    ]
