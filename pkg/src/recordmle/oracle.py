"""Independent ground truth for the series formulas and estimators.

Both estimators reduce to the same sufficient statistic T (the sum of
A-transformed observations, or A of the top record), and T follows a gamma
law with shape equal to the count and rate B(theta). Every quantity the
series module approximates is therefore an expectation of some h(T), which
this module evaluates two independent ways:

* adaptive quadrature of h against the gamma density, exact up to a stated
  tolerance (:func:`expect_over_gamma` and the ``exact_*`` wrappers);
* a deterministic, replayable Monte Carlo engine that simulates the actual
  estimators (:func:`mc_estimate`).

Neither route shares code with the series evaluation, so agreement between
the three is evidence, not tautology. Targets whose exact expectation does
not exist (the power-function MSE with base above 1) come back from the
quadrature as a divergence signal; wrappers for quantities that must
converge escalate that signal to :class:`DivergenceError`.

Monte Carlo replications are partitioned into contiguous blocks of 4096;
block index is the rng stream id, partial results are assembled in block
order, and the y-arrays are reduced with pairwise summation over a fixed
ordering. Results are therefore bit-identical across runs and across
worker counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import closedform, family as fam
from ._quadrature import QuadResult, integrate_unit_interval
from ._streams import make_generator
from .errors import (
    ArgumentError,
    DivergenceError,
    DomainError,
    ReplicationFailureError,
)
from .records import sample_records_sequential

__all__ = [
    "TARGETS",
    "SOURCES",
    "ExperimentConfig",
    "MomentReport",
    "expect_over_gamma",
    "exact_expected_cdf_hat",
    "exact_expected_pdf_hat",
    "exact_mse_cdf_hat",
    "exact_mse_pdf_hat",
    "exact_mse_theta_hat",
    "exact_mse_g_power",
    "mc_estimate",
    "ks_two_sample",
    "consistency_curve",
]

TARGETS = (
    "E_cdf_hat",
    "E_pdf_hat",
    "MSE_cdf_hat",
    "MSE_pdf_hat",
    "MSE_theta_hat",
    "MSE_g_hat",
)
_MSE_TARGETS = frozenset(t for t in TARGETS if t.startswith("MSE"))
_POINT_TARGETS = frozenset(("E_cdf_hat", "E_pdf_hat", "MSE_cdf_hat", "MSE_pdf_hat"))

SOURCES = ("sample", "records_direct", "records")

_BLOCK = 4096
_MAX_FAILURE_FRACTION = 0.01


# ---------------------------------------------------------------------------
# quadrature against the gamma law of T


def expect_over_gamma(
    h: Callable[[float], float], size: int, rate: float, tol: float = 1e-10
) -> QuadResult:
    """E[h(T)] for T gamma with integer shape ``size`` and rate ``rate``.

    The half line is mapped onto s in (0, 1) by t = (size/rate) s / (1-s):
    scaling by the gamma mean parks the bulk of the mass around s = 0.5 at
    every shape, so the density spike (relative width 1/sqrt(size)) always
    spans several panels and cannot slip between quadrature nodes. The
    density and Jacobian are evaluated in log space so large shapes neither
    overflow nor lose the tails. An ``OverflowError`` from ``h`` is treated
    as an infinite integrand value, which the adaptive rule converts into a
    divergence signal rather than an exception.
    """
    size = int(size)
    if size < 1:
        raise ArgumentError("expect_over_gamma: size must be at least 1")
    rate = float(rate)
    if not (rate > 0.0) or math.isnan(rate):
        raise ArgumentError("expect_over_gamma: rate must be positive")
    log_rate = math.log(rate)
    lg_size = math.lgamma(size)
    scale = size / rate
    log_scale = math.log(scale)

    def integrand(s: float) -> float:
        u = s / (1.0 - s)
        t = scale * u
        log_weight = (
            size * log_rate - rate * t - lg_size + log_scale + 2.0 * math.log1p(u)
        )
        if size != 1:
            log_weight += (size - 1) * math.log(t)
        weight = math.exp(log_weight)
        try:
            hv = h(t)
        except OverflowError:
            hv = math.inf
        return hv * weight

    return integrate_unit_interval(integrand, tol=tol)


def _require_convergent(result: QuadResult, what: str) -> float:
    if result.diverged:
        raise DivergenceError(
            f"{what}: quadrature diverged (last totals {result.last_totals!r})"
        )
    return result.value


def _point_constants(
    spec: fam.FamilySpec, theta: float, x: float
) -> tuple[float, float, float]:
    theta = float(theta)
    lo, hi = spec.theta_domain
    if math.isnan(theta) or not (lo < theta < hi):
        raise DomainError(f"theta={theta!r} outside parameter domain ({lo}, {hi})")
    x = float(x)
    if math.isnan(x) or not (spec.support_lo <= x < spec.support_hi):
        raise DomainError(
            f"x={x!r} outside support [{spec.support_lo}, {spec.support_hi})"
        )
    return float(spec.B(theta)), float(spec.A(x)), float(spec.A_prime(x))


def exact_expected_cdf_hat(
    spec: fam.FamilySpec, theta: float, x: float, size: int, tol: float = 1e-10
) -> float:
    """Exact mean of the plug-in CDF estimate: 1 - E[exp(-size A(x)/T)].

    The integrand is bounded, so this target always converges; the result
    is clamped to [0, 1] against quadrature roundoff at the scale of tol.
    """
    b_val, a_val, _ = _point_constants(spec, theta, x)
    c = int(size) * a_val

    def h(t: float) -> float:
        return math.exp(-c / t) if t > 0.0 else 0.0

    value = _require_convergent(
        expect_over_gamma(h, size, b_val, tol), "exact_expected_cdf_hat"
    )
    return min(1.0, max(0.0, 1.0 - value))


def exact_expected_pdf_hat(
    spec: fam.FamilySpec, theta: float, x: float, size: int, tol: float = 1e-10
) -> float:
    """Exact mean of the plug-in density estimate.

    E[A'(x) (size/T) exp(-size A(x)/T)]; converges whenever A(x) > 0 (the
    essential decay of exp(-c/t) wins at t -> 0) and at A(x) = 0 for size
    of at least 2. A genuinely divergent configuration raises
    :class:`DivergenceError`.
    """
    b_val, a_val, ap_val = _point_constants(spec, theta, x)
    c = int(size) * a_val

    def h(t: float) -> float:
        return ap_val * (int(size) / t) * math.exp(-c / t)

    value = _require_convergent(
        expect_over_gamma(h, size, b_val, tol), "exact_expected_pdf_hat"
    )
    return max(0.0, value)


def exact_mse_cdf_hat(
    spec: fam.FamilySpec, theta: float, x: float, size: int, tol: float = 1e-10
) -> float:
    """Exact MSE of the plug-in CDF estimate.

    Assembled from the two exact exponential moments,
    E[e^{-2cA/T}] - 2 e^{-BA} E[e^{-cA/T}] + e^{-2BA} with c = size; the
    assembly can dip a rounding error below zero, which is floored at 0.
    """
    b_val, a_val, _ = _point_constants(spec, theta, x)
    c = int(size) * a_val

    def h1(t: float) -> float:
        return math.exp(-c / t)

    def h2(t: float) -> float:
        return math.exp(-2.0 * c / t)

    e1 = _require_convergent(expect_over_gamma(h1, size, b_val, tol), "exact_mse_cdf_hat")
    e2 = _require_convergent(expect_over_gamma(h2, size, b_val, tol), "exact_mse_cdf_hat")
    ba = b_val * a_val
    return max(0.0, e2 - 2.0 * math.exp(-ba) * e1 + math.exp(-2.0 * ba))


def exact_mse_pdf_hat(
    spec: fam.FamilySpec, theta: float, x: float, size: int, tol: float = 1e-10
) -> float:
    """Exact MSE of the plug-in density estimate.

    Single quadrature of the nonnegative integrand
    (A'(x) (size/t) e^{-size A(x)/t} - f(x; theta))^2, so no cancellation
    enters before the integral.
    """
    b_val, a_val, ap_val = _point_constants(spec, theta, x)
    c = int(size) * a_val
    f_true = ap_val * b_val * math.exp(-b_val * a_val)

    def h(t: float) -> float:
        return (ap_val * (int(size) / t) * math.exp(-c / t) - f_true) ** 2

    value = _require_convergent(
        expect_over_gamma(h, size, b_val, tol), "exact_mse_pdf_hat"
    )
    return max(0.0, value)


def exact_mse_theta_hat(
    spec: fam.FamilySpec, theta: float, size: int, tol: float = 1e-10
) -> float:
    """Exact MSE of the parameter MLE: E[(B_inv(size/T) - theta)^2]."""
    theta = float(theta)
    lo, hi = spec.theta_domain
    if math.isnan(theta) or not (lo < theta < hi):
        raise DomainError(f"theta={theta!r} outside parameter domain ({lo}, {hi})")
    b_val = float(spec.B(theta))

    def h(t: float) -> float:
        return (float(fam.b_inverse(spec, int(size) / t)) - theta) ** 2

    value = _require_convergent(
        expect_over_gamma(h, size, b_val, tol), "exact_mse_theta_hat"
    )
    return max(0.0, value)


def exact_mse_g_power(
    theta: float, n: int, k: float, tol: float = 1e-10
) -> QuadResult:
    """Quadrature MSE of k**theta_hat in the rate parametrization B = theta.

    Returns the raw :class:`QuadResult`: for k > 1 the integrand grows like
    exp(c/t) at t -> 0, the expectation does not exist, and the result
    reports divergence with the growing refinement totals. Counterpart of
    :func:`recordmle.closedform.mse_g_power_series`.
    """
    n = int(n)
    if n < 1:
        raise ArgumentError("exact_mse_g_power: n must be at least 1")
    k = float(k)
    if not (k > 0.0) or k == 1.0 or math.isnan(k):
        raise ArgumentError("exact_mse_g_power: k must be positive and not 1")
    theta = float(theta)
    if not (theta > 0.0):
        raise DomainError("exact_mse_g_power: theta must be positive")
    log_k = math.log(k)
    g_true = k**theta

    def h(t: float) -> float:
        z = n * log_k / t
        if z > 700.0:
            return math.inf
        return (math.exp(z) - g_true) ** 2

    return expect_over_gamma(h, n, theta, tol)


# ---------------------------------------------------------------------------
# experiment configuration and report types


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    """One reproducible experiment: family, parameter, design, seed.

    ``family`` is a registry string (``name[:key=value,...]``). ``g_k`` is
    the base of the power function target and only read for MSE_g_hat.
    """

    family: str
    theta: float
    sizes: tuple[int, ...]
    x_grid: tuple[float, ...] = ()
    reps: int = 1000
    seed: int = 0
    quad_tol: float = 1e-10
    g_k: float = math.e

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "x_grid", tuple(float(x) for x in self.x_grid))
        if not self.sizes:
            raise ArgumentError("ExperimentConfig: sizes must be nonempty")
        if any(s < 1 for s in self.sizes):
            raise ArgumentError("ExperimentConfig: sizes must be positive")
        if int(self.reps) < 100:
            raise ArgumentError("ExperimentConfig: reps must be at least 100")
        object.__setattr__(self, "reps", int(self.reps))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "quad_tol", float(self.quad_tol))
        if not (0.0 < self.quad_tol <= 1e-4):
            raise ArgumentError("ExperimentConfig: quad_tol must be in (0, 1e-4]")
        object.__setattr__(self, "g_k", float(self.g_k))

    def resolve(self) -> fam.FamilySpec:
        return fam.resolve_family(self.family)


@dataclass(frozen=True, slots=True)
class MomentReport:
    """Three-way view of one moment target under one configuration.

    ``series_value`` is None when the target has no closed series for the
    configuration; ``quad_value`` and ``quad_error_bound`` are None when
    the exact integral diverges (then ``quad_divergent`` is True).
    """

    target: str
    mc_value: float
    mc_stderr: float
    reps: int
    failures: int
    config: ExperimentConfig
    series_value: Optional[closedform.SeriesValue] = None
    quad_value: Optional[float] = None
    quad_error_bound: Optional[float] = None
    quad_divergent: bool = False

    def to_json_dict(self) -> dict:
        sv = self.series_value
        return {
            "target": self.target,
            "series_value": None
            if sv is None
            else {
                "value": sv.value,
                "terms_used": sv.terms_used,
                "in_natural_bounds": sv.in_natural_bounds,
                "regime_note": sv.regime_note,
            },
            "quad_value": self.quad_value,
            "quad_error_bound": self.quad_error_bound,
            "quad_divergent": self.quad_divergent,
            "mc_value": self.mc_value,
            "mc_stderr": self.mc_stderr,
            "reps": self.reps,
            "failures": self.failures,
            "config": asdict(self.config),
        }


# ---------------------------------------------------------------------------
# Monte Carlo engine


def _block_sufficient_stats(
    spec: fam.FamilySpec,
    theta: float,
    size: int,
    seed: int,
    block_index: int,
    count: int,
    source: str,
) -> np.ndarray:
    """T values for one contiguous block of replications.

    The block index is the rng stream id, so the draw sequence of a block
    never depends on how blocks are distributed over workers.
    """
    rng = make_generator(seed, block_index)
    b_val = float(spec.B(theta))
    if source == "sample":
        u = rng.random((count, size))
        xs = fam.quantile(spec, theta, u)
        return np.sum(np.asarray(spec.A(xs), dtype=float), axis=1)
    if source == "records_direct":
        # records enter the statistic only through A(R_m); reproduce the
        # simulator's roundtrip through A_inv rather than shortcutting
        u = rng.random((count, size))
        gaps = -np.log1p(-u) / b_val
        r_m = fam.a_inverse(spec, np.sum(gaps, axis=1))
        return np.asarray(spec.A(r_m), dtype=float)
    if source == "records":
        out = np.empty(count, dtype=float)
        for j in range(count):
            try:
                rs = sample_records_sequential(spec, theta, size, rng)
                out[j] = float(spec.A(rs.values[-1]))
            except Exception:
                out[j] = math.nan
        return out
    raise ArgumentError(f"unknown estimator source {source!r}; known: {SOURCES}")


def _mc_stat_array(
    spec: fam.FamilySpec,
    theta: float,
    size: int,
    reps: int,
    seed: int,
    source: str,
    transform: Callable[[np.ndarray], np.ndarray],
    workers: int = 1,
) -> np.ndarray:
    """Per-replication statistic array, deterministic in (seed, reps).

    ``transform`` maps the block's T array to the statistic of interest.
    Blocks are computed possibly in parallel but concatenated in block
    order, so the output never depends on the worker count.
    """
    if reps < 1:
        raise ArgumentError("reps must be positive")
    workers = max(1, int(workers))
    blocks = [
        (i, min(_BLOCK, reps - i * _BLOCK)) for i in range((reps + _BLOCK - 1) // _BLOCK)
    ]

    def run_block(args: tuple[int, int]) -> np.ndarray:
        idx, count = args
        t_vals = _block_sufficient_stats(spec, theta, size, seed, idx, count, source)
        with np.errstate(all="ignore"):
            return np.asarray(transform(t_vals), dtype=float)

    if workers == 1 or len(blocks) == 1:
        parts = [run_block(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_block, blocks))
    return np.concatenate(parts)


def _theta_hat_transform(spec: fam.FamilySpec, size: int) -> Callable:
    b_inv = spec.B_inv

    def transform(t_vals: np.ndarray) -> np.ndarray:
        rate_hat = size / t_vals
        if b_inv is not None:
            return np.asarray(b_inv(rate_hat), dtype=float)
        return np.array([float(fam.b_inverse(spec, r)) for r in rate_hat])

    return transform


def _target_transform(
    spec: fam.FamilySpec, config: ExperimentConfig, target: str, size: int
) -> tuple[Callable, str]:
    """(per-replication transform of T, accumulation kind 'mean'|'mse').

    For 'mse' targets the transform already returns the signed error, so
    the MC value is the mean of its square.
    """
    theta = config.theta
    if target in _POINT_TARGETS:
        if len(config.x_grid) != 1:
            raise ArgumentError(
                f"target {target!r} needs exactly one evaluation point in x_grid"
            )
        x = config.x_grid[0]
        b_val, a_val, ap_val = _point_constants(spec, theta, x)
        if target == "E_cdf_hat":
            return (lambda t: -np.expm1(-(size / t) * a_val)), "mean"
        if target == "E_pdf_hat":
            return (lambda t: ap_val * (size / t) * np.exp(-(size / t) * a_val)), "mean"
        if target == "MSE_cdf_hat":
            truth = -math.expm1(-b_val * a_val)
            return (lambda t: -np.expm1(-(size / t) * a_val) - truth), "mse"
        truth = ap_val * b_val * math.exp(-b_val * a_val)
        return (
            lambda t: ap_val * (size / t) * np.exp(-(size / t) * a_val) - truth
        ), "mse"
    if target == "MSE_theta_hat":
        th = _theta_hat_transform(spec, size)
        return (lambda t: th(t) - theta), "mse"
    if target == "MSE_g_hat":
        k = config.g_k
        if not (k > 0.0) or k == 1.0:
            raise ArgumentError("MSE_g_hat needs g_k positive and not 1")
        th = _theta_hat_transform(spec, size)
        g_true = k**theta
        return (lambda t: k ** th(t) - g_true), "mse"
    raise ArgumentError(f"unknown target {target!r}; known: {TARGETS}")


def _series_for_target(
    spec: fam.FamilySpec, config: ExperimentConfig, target: str, size: int
) -> Optional[closedform.SeriesValue]:
    theta = config.theta
    x = config.x_grid[0] if config.x_grid else None
    try:
        if target == "E_cdf_hat":
            return closedform.expected_cdf_hat_series(spec, theta, x, size)
        if target == "E_pdf_hat":
            return closedform.expected_pdf_hat_series(spec, theta, x, size)
        if target == "MSE_cdf_hat":
            return closedform.mse_cdf_hat_series(spec, theta, x, size)
        if target == "MSE_pdf_hat":
            return closedform.mse_pdf_hat_series(spec, theta, x, size)
        if target == "MSE_g_hat":
            return closedform.mse_g_power_series(theta, size, config.g_k)
    except ArgumentError:
        return None
    return None  # MSE_theta_hat: closed form exists only family by family


def _quad_for_target(
    spec: fam.FamilySpec, config: ExperimentConfig, target: str, size: int
) -> tuple[Optional[float], Optional[float], bool]:
    theta, tol = config.theta, config.quad_tol
    x = config.x_grid[0] if config.x_grid else None
    try:
        if target == "E_cdf_hat":
            return exact_expected_cdf_hat(spec, theta, x, size, tol), tol, False
        if target == "E_pdf_hat":
            return exact_expected_pdf_hat(spec, theta, x, size, tol), tol, False
        if target == "MSE_cdf_hat":
            return exact_mse_cdf_hat(spec, theta, x, size, tol), tol, False
        if target == "MSE_pdf_hat":
            return exact_mse_pdf_hat(spec, theta, x, size, tol), tol, False
        if target == "MSE_theta_hat":
            return exact_mse_theta_hat(spec, theta, size, tol), tol, False
        result = exact_mse_g_power(theta, size, config.g_k, tol)
        if result.diverged:
            return None, None, True
        return result.value, result.error_bound, False
    except DivergenceError:
        return None, None, True


def mc_estimate(
    config: ExperimentConfig, target: str, source: str, workers: int = 1
) -> MomentReport:
    """Monte Carlo estimate of one moment target, with the series and
    quadrature values alongside for comparison.

    The configuration must carry exactly one size (callers sweep sizes by
    looping; keeping one size per report keeps the provenance of every
    number unambiguous). Replications with non-finite statistics are
    counted as failures; more than 1% failing aborts the run.
    """
    if target not in TARGETS:
        raise ArgumentError(f"unknown target {target!r}; known: {TARGETS}")
    if source not in SOURCES:
        raise ArgumentError(f"unknown estimator source {source!r}; known: {SOURCES}")
    if len(config.sizes) != 1:
        raise ArgumentError(
            "mc_estimate: config.sizes must hold exactly one size per call"
        )
    spec = config.resolve()
    size = config.sizes[0]
    transform, kind = _target_transform(spec, config, target, size)
    ys = _mc_stat_array(
        spec, config.theta, size, config.reps, config.seed, source, transform, workers
    )
    finite = np.isfinite(ys)
    failures = int(config.reps - int(finite.sum()))
    if failures > _MAX_FAILURE_FRACTION * config.reps:
        raise ReplicationFailureError(
            f"{failures} of {config.reps} replications failed (>1%)"
        )
    ok = ys[finite]
    n_ok = ok.size
    if kind == "mse":
        sq = ok * ok
        mc_value = float(np.sum(sq) / n_ok)
        # stderr of a mean of squares needs the fourth moment of the error
        var_sq = float(np.sum(sq * sq) / n_ok) - mc_value * mc_value
        mc_stderr = math.sqrt(max(0.0, var_sq) / (n_ok - 1)) if n_ok > 1 else 0.0
    else:
        mc_value = float(np.sum(ok) / n_ok)
        var = float(np.sum(ok * ok) / n_ok) - mc_value * mc_value
        mc_stderr = math.sqrt(max(0.0, var) / (n_ok - 1)) if n_ok > 1 else 0.0
    quad_value, quad_bound, diverged = _quad_for_target(spec, config, target, size)
    return MomentReport(
        target=target,
        mc_value=mc_value,
        mc_stderr=mc_stderr,
        reps=config.reps,
        failures=failures,
        config=config,
        series_value=_series_for_target(spec, config, target, size),
        quad_value=quad_value,
        quad_error_bound=quad_bound,
        quad_divergent=diverged,
    )


# ---------------------------------------------------------------------------
# distribution comparison and consistency


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.

    Evaluated over the pooled points with right-continuous empirical CDFs;
    exact, symmetric, and invariant under any common strictly increasing
    transform of both samples.
    """
    a_arr = np.sort(np.asarray(a, dtype=float))
    b_arr = np.sort(np.asarray(b, dtype=float))
    if a_arr.size == 0 or b_arr.size == 0:
        raise ArgumentError("ks_two_sample: both samples must be nonempty")
    if np.isnan(a_arr).any() or np.isnan(b_arr).any():
        raise ArgumentError("ks_two_sample: NaN in input")
    pooled = np.concatenate([a_arr, b_arr])
    cdf_a = np.searchsorted(a_arr, pooled, side="right") / a_arr.size
    cdf_b = np.searchsorted(b_arr, pooled, side="right") / b_arr.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def mc_statistic_array(
    config: ExperimentConfig,
    source: str,
    statistic: str = "theta_hat",
    workers: int = 1,
) -> np.ndarray:
    """Raw per-replication estimator values (no aggregation).

    ``statistic`` is ``"theta_hat"`` or ``"cdf_hat"``; the latter needs one
    evaluation point in ``x_grid``. Used by the distributional-identity and
    consistency checks, which need whole empirical laws rather than
    moments.
    """
    if source not in SOURCES:
        raise ArgumentError(f"unknown estimator source {source!r}; known: {SOURCES}")
    if len(config.sizes) != 1:
        raise ArgumentError("mc_statistic_array: exactly one size per call")
    spec = config.resolve()
    size = config.sizes[0]
    if statistic == "theta_hat":
        transform = _theta_hat_transform(spec, size)
    elif statistic == "cdf_hat":
        if len(config.x_grid) != 1:
            raise ArgumentError("cdf_hat statistic needs one evaluation point")
        _, a_val, _ = _point_constants(spec, config.theta, config.x_grid[0])
        transform = lambda t: -np.expm1(-(size / t) * a_val)
    else:
        raise ArgumentError(f"unknown statistic {statistic!r}")
    return _mc_stat_array(
        spec, config.theta, size, config.reps, config.seed, source, transform, workers
    )


def consistency_curve(
    spec: fam.FamilySpec,
    theta: float,
    eps: float,
    sizes: Sequence[int],
    reps: int,
    seed: int,
    source: str = "records_direct",
    workers: int = 1,
) -> list[tuple[int, float]]:
    """Empirical P(|theta_hat - theta| > eps) for each record count.

    Each size gets its own derived stream family (size index folded into
    the seed), so adding sizes never perturbs earlier entries.
    """
    eps = float(eps)
    if not (eps > 0.0):
        raise ArgumentError("consistency_curve: eps must be positive")
    sizes = [int(s) for s in sizes]
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ArgumentError("consistency_curve: sizes must be strictly increasing")
    out: list[tuple[int, float]] = []
    for idx, size in enumerate(sizes):
        transform = _theta_hat_transform(spec, size)
        theta_hats = _mc_stat_array(
            spec,
            theta,
            size,
            int(reps),
            int(seed) + (idx << 32),
            source,
            transform,
            workers,
        )
        good = theta_hats[np.isfinite(theta_hats)]
        p = float(np.mean(np.abs(good - float(theta)) > eps))
        out.append((size, p))
    return out
