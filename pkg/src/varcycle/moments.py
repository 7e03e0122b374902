"""Second moments: exact cross-covariances in transformed coordinates,
the nonstationarity diagnostic, limiting moments, and the Monte Carlo
estimators that back them.

With G the covariance of z_0 and Sigma0 the (diagonal) covariance of
the stacked shock, the transformed cross-covariance for t >= 2 is

    Gamma~(t + tau', t) = J^(t+tau') G~ J^t + sum_{i=0..t-1} J^(tau'+i) Sigma0~ J^i

where X~ = Q^-1 X Q^-T.  The sum includes the i = 0 innovation term of
the most recent shock, as the moving-average expansion of the explicit
solution requires; both the symbolic expansion and the Monte Carlo
estimator pin this down.  J is diagonal in the supported regime, so
each J^a X J^b is an entrywise scaling.

The lag-0 covariance depends on t whenever Sigma0 != 0 and some
eigenvalue is nonzero, which is the nonstationarity certificate the
diagnostic reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditionViolated, DimensionMismatch, RangeError, WrongRegime
from .model import ModelParams, NoiseSpec, build_transition_matrix
from .simulate import mix_seed, sample_noise_path
from .spectral import Regime, SpectralDecomposition


@dataclass(frozen=True)
class MomentInputs:
    """First/second-moment ingredients: covariance G of z_0, diagonal
    shock covariance Sigma0, and shock mean mu_gamma."""

    G: np.ndarray
    Sigma0: np.ndarray
    mu_gamma: np.ndarray
    n: int


@dataclass(frozen=True)
class CrossCovariance:
    """One cross-covariance matrix in both coordinate systems."""

    gamma_tilde: np.ndarray
    gamma: np.ndarray


@dataclass(frozen=True)
class MonteCarloSpec:
    """Replication settings for the optional sample-covariance grid."""

    params: ModelParams
    noise_spec: NoiseSpec
    reps: int
    seed: int


@dataclass(frozen=True)
class CovarianceReport:
    """Cross-covariance grids over (t, tau') plus the stationarity gap.

    The gap is the largest max-norm difference between same-lag
    covariances at different times, reported in transformed and original
    coordinates (either is nonzero exactly when the other is, since the
    basis is nonsingular).  ``mc_estimate`` maps (t, tau') to a
    (sample cross-covariance, standard error) pair when requested.
    """

    gamma_tilde: dict[tuple[int, int], np.ndarray]
    gamma: dict[tuple[int, int], np.ndarray]
    stationarity_gap: float
    stationarity_gap_original: float
    mc_estimate: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] | None


@dataclass(frozen=True)
class LimitReport:
    """Limiting moments under the spectral-radius condition.

    ``resolvent_limit_cov`` applies the resolvent-style map
    Q diag{1/(1-lam)} Q^-1 to the shock on both sides;
    ``ma_infinity_cov`` sums the moving-average series
    sum_i (Q J^i Q^-1) Sigma0 (Q J^i Q^-1)^T to the tail tolerance.
    The two differ in general; both are reported with their gap, and the
    long-run Monte Carlo oracle matches the moving-average form.
    """

    lambda_tilde: np.ndarray
    spectral_radius_ok: bool
    limiting_mean: np.ndarray | None
    resolvent_limit_cov: np.ndarray | None
    ma_infinity_cov: np.ndarray | None
    truncation_terms: int | None
    tail_bound: float | None
    covariance_discrepancy: float | None


@dataclass(frozen=True)
class LongRunEstimate:
    """Tail-averaged Monte Carlo mean and covariance with standard errors."""

    mean: np.ndarray
    mean_se: np.ndarray
    cov: np.ndarray
    cov_se: np.ndarray


def moment_inputs(
    params: ModelParams, spec: NoiseSpec, G: np.ndarray | None = None
) -> MomentInputs:
    """Assemble moment ingredients from validated parameters and noise.

    Sigma0 = diag(alpha^2 sigma_1^2 .. alpha^2 sigma_n^2,
    beta^2 sigma_{n+1}^2 .. beta^2 sigma_{2n}^2) and
    mu_gamma = (alpha mu_1 .. alpha mu_n, -beta mu_{n+1} .. -beta mu_{2n}).
    G defaults to zero (deterministic z_0) and must be symmetric PSD.
    """
    n, alpha, beta = params.n, params.alpha, params.beta
    var = np.concatenate([alpha**2 * spec.sigma[:n] ** 2, beta**2 * spec.sigma[n:] ** 2])
    mu_gamma = np.concatenate([alpha * spec.mu[:n], -beta * spec.mu[n:]])
    if G is None:
        G = np.zeros((2 * n, 2 * n))
    else:
        G = np.asarray(G, dtype=float)
        if G.shape != (2 * n, 2 * n):
            raise DimensionMismatch(f"G must be 2n x 2n = {2*n} x {2*n}, got {G.shape}")
        scale = max(1.0, float(np.max(np.abs(G))))
        if np.max(np.abs(G - G.T)) > 1e-12 * scale:
            raise ValueError("G must be symmetric")
        if np.min(np.linalg.eigvalsh((G + G.T) / 2.0)) < -1e-12 * scale:
            raise ValueError("G must be positive semidefinite")
    return MomentInputs(G=G, Sigma0=np.diag(var), mu_gamma=mu_gamma, n=n)


def _require_diagonal(decomposition: SpectralDecomposition) -> np.ndarray:
    # Guards the Jordan boundary regime out: these products assume J is
    # diagonal, so J^a X J^b reduces to an entrywise scaling.
    if decomposition.regime is not Regime.DIAGONALIZABLE_REAL or decomposition.Qinv is None:
        raise WrongRegime("moment formulas require the diagonalizable regime with a basis")
    return decomposition.diag


def transformed_inputs(
    inputs: MomentInputs, decomposition: SpectralDecomposition
) -> tuple[np.ndarray, np.ndarray]:
    """G and Sigma0 mapped to transformed coordinates: X~ = Q^-1 X Q^-T."""
    _require_diagonal(decomposition)
    Qinv = decomposition.Qinv
    return Qinv @ inputs.G @ Qinv.T, Qinv @ inputs.Sigma0 @ Qinv.T


def cross_covariance(
    inputs: MomentInputs,
    decomposition: SpectralDecomposition,
    t: int,
    tau_prime: int,
) -> CrossCovariance:
    """Cross-covariance of the states at times t + tau' and t, for t >= 2.

    Returned in transformed coordinates together with the original-
    coordinate matrix Q Gamma~ Q^T.
    """
    if t < 2:
        raise RangeError(f"cross-covariance formula holds for t >= 2, got t={t}")
    if tau_prime < 0:
        raise RangeError(f"tau_prime must be >= 0, got {tau_prime}")
    d = _require_diagonal(decomposition)
    Gt, S0t = transformed_inputs(inputs, decomposition)
    out = np.outer(d ** (t + tau_prime), d**t) * Gt
    for i in range(t):
        out = out + np.outer(d ** (tau_prime + i), d**i) * S0t
    Q = decomposition.Q
    return CrossCovariance(gamma_tilde=out, gamma=Q @ out @ Q.T)


def stationarity_diagnostic(
    inputs: MomentInputs,
    decomposition: SpectralDecomposition,
    t_grid: list[int],
    tau_grid: list[int],
    mc: MonteCarloSpec | None = None,
) -> CovarianceReport:
    """Evaluate the covariance grid and certify time dependence.

    For every lag in ``tau_grid`` the gap compares covariances across
    all pairs of times in ``t_grid``; a positive gap exhibits the
    dependence on t that rules out second-order stationarity.
    """
    if not t_grid or not tau_grid:
        raise RangeError("t_grid and tau_grid must be nonempty")
    grid_t: dict[tuple[int, int], np.ndarray] = {}
    grid_o: dict[tuple[int, int], np.ndarray] = {}
    for t in t_grid:
        for tau in tau_grid:
            cc = cross_covariance(inputs, decomposition, t, tau)
            grid_t[(t, tau)] = cc.gamma_tilde
            grid_o[(t, tau)] = cc.gamma

    gap_t = 0.0
    gap_o = 0.0
    for tau in tau_grid:
        ts = sorted(t_grid)
        for i in range(len(ts)):
            for j in range(i + 1, len(ts)):
                gap_t = max(gap_t, float(np.max(np.abs(grid_t[(ts[i], tau)] - grid_t[(ts[j], tau)]))))
                gap_o = max(gap_o, float(np.max(np.abs(grid_o[(ts[i], tau)] - grid_o[(ts[j], tau)]))))

    mc_estimate = None
    if mc is not None:
        mc_estimate = {}
        for key_index, (t, tau) in enumerate(sorted(grid_t)):
            est, se = mc_cross_covariance(
                mc.params, mc.noise_spec, inputs.G, t, tau,
                reps=mc.reps, seed=mix_seed(mc.seed, key_index),
            )
            mc_estimate[(t, tau)] = (est, se)

    return CovarianceReport(
        gamma_tilde=grid_t,
        gamma=grid_o,
        stationarity_gap=gap_t,
        stationarity_gap_original=gap_o,
        mc_estimate=mc_estimate,
    )


def limiting_moments(
    inputs: MomentInputs,
    decomposition: SpectralDecomposition,
    tail_tol: float = 1e-12,
    allow_skip: bool = True,
) -> LimitReport:
    """Limiting mean and the two limit-covariance candidates.

    Requires 0 < max|lambda| < 1.  When the condition fails the report
    carries ``spectral_radius_ok=False`` with the limits skipped, or raises
    ``ConditionViolated`` when ``allow_skip`` is false.

    The moving-average covariance is truncated after
    K = ceil(log(tail_tol) / log(max|lambda|)) terms; the dropped tail
    is bounded by the geometric series and reported.
    """
    d = _require_diagonal(decomposition)
    eig = decomposition.eig
    lams = np.array([eig.lambda1, eig.lambda2, np.real(eig.lambda3), np.real(eig.lambda4)])
    rho = float(np.max(np.abs(d)))
    condition = bool(0.0 < rho < 1.0)
    if not condition:
        if allow_skip:
            return LimitReport(
                lambda_tilde=1.0 / (1.0 - lams) if np.all(lams != 1.0) else np.full(4, np.nan),
                spectral_radius_ok=False,
                limiting_mean=None,
                resolvent_limit_cov=None,
                ma_infinity_cov=None,
                truncation_terms=None,
                tail_bound=None,
                covariance_discrepancy=None,
            )
        raise ConditionViolated(f"max |lambda| = {rho} is not inside (0, 1)")

    lam_tilde = 1.0 / (1.0 - lams)
    Q, Qinv = decomposition.Q, decomposition.Qinv
    dtilde = 1.0 / (1.0 - d)
    resolvent = Q @ (dtilde[:, None] * Qinv)

    mean = resolvent @ inputs.mu_gamma
    claimed = resolvent @ inputs.Sigma0 @ resolvent.T

    _, S0t = transformed_inputs(inputs, decomposition)
    K = int(np.ceil(np.log(tail_tol) / np.log(rho)))
    acc = np.zeros_like(S0t)
    for i in range(K + 1):
        acc = acc + np.outer(d**i, d**i) * S0t
    ma_cov = Q @ acc @ Q.T
    lead = max(float(np.max(np.abs(ma_cov))), 1e-300)
    tail_bound = float(np.max(np.abs(S0t))) * rho ** (2 * (K + 1)) / (1.0 - rho**2) / lead

    return LimitReport(
        lambda_tilde=lam_tilde,
        spectral_radius_ok=True,
        limiting_mean=mean,
        resolvent_limit_cov=claimed,
        ma_infinity_cov=ma_cov,
        truncation_terms=K,
        tail_bound=tail_bound,
        covariance_discrepancy=float(np.max(np.abs(claimed - ma_cov))),
    )


def _batched_recursion(
    M: np.ndarray, z0: np.ndarray, gamma: np.ndarray, snapshots: list[int]
) -> dict[int, np.ndarray]:
    """Run z <- M z + gamma_t across a replication batch.

    z0 has shape (R, 2n), gamma (R, T, 2n); returns the state at each
    requested time as (R, 2n) arrays.  Semantically one recursive
    simulation per replication, vectorized across replications.
    """
    want = set(snapshots)
    out: dict[int, np.ndarray] = {}
    z = z0.copy()
    if 0 in want:
        out[0] = z.copy()
    T = gamma.shape[1]
    for t in range(T):
        z = z @ M.T + gamma[:, t, :]
        if (t + 1) in want:
            out[t + 1] = z.copy()
    return out


def _replication_noise(
    params: ModelParams, spec: NoiseSpec, steps: int, reps: int, seed: int, rep_offset: int = 0
) -> np.ndarray:
    """Stacked gamma paths, one independent stream per replication.

    Replication r draws from the generator seeded mix_seed(seed, r), so
    any single replication can be reproduced in isolation.
    """
    gamma = np.empty((reps, steps, 2 * params.n))
    for r in range(reps):
        path = sample_noise_path(spec, params, steps, seed=mix_seed(seed, rep_offset + r))
        gamma[r] = path.gamma
    return gamma


def mc_cross_covariance(
    params: ModelParams,
    spec: NoiseSpec,
    G: np.ndarray,
    t: int,
    tau_prime: int,
    reps: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample cross-covariance of (z_{t+tau'}, z_t) over independent
    replications, with entrywise standard errors from the replication
    scatter.  z_0 is drawn as N(0, G) per replication (deterministic
    zero when G = 0)."""
    M = build_transition_matrix(params).entries
    steps = t + tau_prime
    gamma = _replication_noise(params, spec, steps, reps, seed)
    if np.any(G):
        L = np.linalg.cholesky(G + 1e-15 * np.trace(G) * np.eye(G.shape[0]))
        z0 = np.random.default_rng(mix_seed(seed, reps)).standard_normal((reps, G.shape[0])) @ L.T
    else:
        z0 = np.zeros((reps, 2 * params.n))
    snap = _batched_recursion(M, z0, gamma, [t, t + tau_prime])
    u = snap[t + tau_prime] - snap[t + tau_prime].mean(axis=0)
    v = snap[t] - snap[t].mean(axis=0)
    prod = u[:, :, None] * v[:, None, :]
    est = prod.sum(axis=0) / (reps - 1)
    se = prod.std(axis=0, ddof=1) / np.sqrt(reps)
    return est, se


def mc_long_run(
    params: ModelParams,
    spec: NoiseSpec,
    reps: int,
    t_burn: int,
    t_final: int,
    seed: int,
    chunk: int = 64,
) -> LongRunEstimate:
    """Long-run mean and covariance from tail time-averages.

    Each replication contributes the time-average of z_t and of the
    centered outer products over t in (t_burn, t_final]; replications
    are i.i.d., so standard errors follow from their scatter.
    """
    if not 0 < t_burn < t_final:
        raise RangeError(f"need 0 < t_burn < t_final, got {t_burn}, {t_final}")
    M = build_transition_matrix(params).entries
    dim = 2 * params.n
    tail = t_final - t_burn
    means = np.empty((reps, dim))
    covs = np.empty((reps, dim, dim))
    done = 0
    while done < reps:
        r = min(chunk, reps - done)
        gamma = _replication_noise(params, spec, t_final, r, seed, rep_offset=done)
        z = np.zeros((r, dim))
        sum_z = np.zeros((r, dim))
        sum_zz = np.zeros((r, dim, dim))
        for t in range(t_final):
            z = z @ M.T + gamma[:, t, :]
            if t + 1 > t_burn:
                sum_z += z
                sum_zz += z[:, :, None] * z[:, None, :]
        m = sum_z / tail
        means[done:done + r] = m
        covs[done:done + r] = sum_zz / tail - m[:, :, None] * m[:, None, :]
        done += r
    return LongRunEstimate(
        mean=means.mean(axis=0),
        mean_se=means.std(axis=0, ddof=1) / np.sqrt(reps),
        cov=covs.mean(axis=0),
        cov_se=covs.std(axis=0, ddof=1) / np.sqrt(reps),
    )
