"""Stochastic simulation: noise paths, the step recursion, and the
explicit solution evaluated in transformed coordinates.

Both trajectory generators consume the same pre-drawn noise path, so a
recursive run and an explicit run with a shared seed are directly
comparable; their agreement is the main correctness oracle for the
spectral decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionMismatch, NonFiniteState, WrongRegime
from .model import ModelParams, NoiseSpec, TransitionMatrix
from .spectral import Regime, SpectralDecomposition

METHOD_RECURSIVE = "recursive"
METHOD_EXPLICIT = "explicit"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix_seed(seed: int, r: int) -> int:
    """Derive the seed for replication ``r`` from a base seed.

    Splitmix-style avalanche: add (r + 1) Weyl increments of the golden
    ratio to the base, then apply the two xor-multiply finalizer rounds.
    Documented so reports can state exactly how replication streams were
    derived.
    """
    z = (seed + (r + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class NoiseDraw:
    """Shocks for one step: epsilon and eta per agent, plus the stacked
    gamma = (alpha * epsilon, -beta * eta) that enters the recursion."""

    t: int
    epsilon: np.ndarray
    eta: np.ndarray
    gamma: np.ndarray


class NoisePath(Sequence[NoiseDraw]):
    """A full noise path stored as arrays, viewable as a sequence of
    per-step :class:`NoiseDraw` records.

    ``epsilon`` and ``eta`` have shape (T, n) and ``gamma`` shape
    (T, 2n).  ``seed`` is None when the path was assembled from raw
    arrays rather than drawn.
    """

    def __init__(
        self,
        epsilon: np.ndarray,
        eta: np.ndarray,
        alpha: float,
        beta: float,
        seed: int | None = None,
    ):
        epsilon = np.asarray(epsilon, dtype=float)
        eta = np.asarray(eta, dtype=float)
        if epsilon.shape != eta.shape or epsilon.ndim != 2:
            raise DimensionMismatch(
                f"epsilon and eta must both be (T, n), got {epsilon.shape} and {eta.shape}"
            )
        self.epsilon = epsilon
        self.eta = eta
        self.gamma = np.hstack([alpha * epsilon, -beta * eta])
        self.seed = seed

    def __len__(self) -> int:
        return self.epsilon.shape[0]

    def __getitem__(self, t):  # type: ignore[override]
        if isinstance(t, slice):
            return [self[i] for i in range(*t.indices(len(self)))]
        if t < 0:
            t += len(self)
        if not 0 <= t < len(self):
            raise IndexError(t)
        return NoiseDraw(t=t, epsilon=self.epsilon[t], eta=self.eta[t], gamma=self.gamma[t])

    def __iter__(self) -> Iterator[NoiseDraw]:
        return (self[t] for t in range(len(self)))


@dataclass(frozen=True)
class Trajectory:
    """States z_0..z_T (rows) with the noise that produced them."""

    z: np.ndarray
    noises: NoisePath
    seed: int | None
    method: str


@dataclass(frozen=True)
class AggregateSeries:
    """Weighted aggregates xbar(t) = b . x_t and ybar(t) = a . y_t."""

    xbar: np.ndarray
    ybar: np.ndarray


def _draw_noise(
    rng: np.random.Generator, spec: NoiseSpec, params: ModelParams, T: int
) -> tuple[np.ndarray, np.ndarray]:
    n = params.n
    eps = rng.normal(spec.mu[:n], spec.sigma[:n], size=(T, n))
    eta = rng.normal(spec.mu[n:], spec.sigma[n:], size=(T, n))
    return eps, eta


def sample_noise_path(
    spec: NoiseSpec,
    params: ModelParams,
    T: int,
    seed: int,
    zero_noise: bool = False,
) -> NoisePath:
    """Draw T i.i.d. Gaussian noise steps, deterministic in ``seed``.

    Coordinate i of epsilon uses (mu_i, sigma_i) and coordinate i of eta
    uses (mu_{n+i}, sigma_{n+i}).  With ``zero_noise`` every draw equals
    its mean (degenerate paths are requested explicitly, never by
    sigma = 0, which the spec validation rejects).
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    n = params.n
    if zero_noise:
        eps = np.tile(spec.mu[:n], (T, 1))
        eta = np.tile(spec.mu[n:], (T, 1))
    else:
        rng = np.random.default_rng(seed)
        eps, eta = _draw_noise(rng, spec, params, T)
    return NoisePath(eps, eta, params.alpha, params.beta, seed=seed)


def _gamma_array(noises: NoisePath | Sequence[NoiseDraw]) -> np.ndarray:
    if isinstance(noises, NoisePath):
        return noises.gamma
    return np.array([d.gamma for d in noises], dtype=float)


def _noise_seed(noises: NoisePath | Sequence[NoiseDraw]) -> int | None:
    return noises.seed if isinstance(noises, NoisePath) else None


def simulate_recursive(
    params: ModelParams,
    M: TransitionMatrix,
    z0: np.ndarray,
    noises: NoisePath | Sequence[NoiseDraw],
) -> Trajectory:
    """Iterate z_{t+1} = M z_t + gamma_t literally.

    Raises
    ------
    NonFiniteState
        If any state entry overflows to a non-finite value; the error
        carries the first bad time index so explosive parameter sets
        fail loudly instead of saturating silently.
    """
    gamma = _gamma_array(noises)
    T = gamma.shape[0]
    mat = M.entries
    z0 = np.asarray(z0, dtype=float)
    if z0.shape != (2 * params.n,):
        raise DimensionMismatch(f"z0 must have length 2n={2*params.n}, got shape {z0.shape}")
    z = np.empty((T + 1, 2 * params.n))
    z[0] = z0
    # overflow is reported through NonFiniteState, not a numpy warning
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(T):
            z[t + 1] = mat @ z[t] + gamma[t]
            if not np.all(np.isfinite(z[t + 1])):
                raise NonFiniteState(t + 1)
    return Trajectory(z=z, noises=noises, seed=_noise_seed(noises), method=METHOD_RECURSIVE)


def simulate_explicit(
    params: ModelParams,
    decomposition: SpectralDecomposition,
    z0: np.ndarray,
    noises: NoisePath | Sequence[NoiseDraw],
) -> Trajectory:
    """Evaluate the closed-form solution

        z_{t+1} = Q J^{t+1} Q^-1 z_0 + sum_{i=0..t} Q J^i Q^-1 gamma_{t-i}

    in transformed coordinates: ztilde accumulates blockwise through
    scalar eigenvalue multiplications (the running form of the moving-
    average sum), and the basis maps every requested step back at the
    end.  Requires the diagonalizable regime.
    """
    if decomposition.regime is not Regime.DIAGONALIZABLE_REAL or decomposition.Q is None:
        raise WrongRegime("explicit solution requires the diagonalizable regime with a basis")
    gamma = _gamma_array(noises)
    T = gamma.shape[0]
    Q, Qinv = decomposition.Q, decomposition.Qinv
    d = decomposition.diag
    z0 = np.asarray(z0, dtype=float)
    if z0.shape != (2 * params.n,):
        raise DimensionMismatch(f"z0 must have length 2n={2*params.n}, got shape {z0.shape}")

    gtilde = gamma @ Qinv.T
    ztilde = np.empty((T + 1, 2 * params.n))
    ztilde[0] = Qinv @ z0
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(T):
            ztilde[t + 1] = d * ztilde[t] + gtilde[t]
        z = ztilde @ Q.T
    bad = np.flatnonzero(~np.all(np.isfinite(z), axis=1))
    if bad.size:
        raise NonFiniteState(int(bad[0]))
    return Trajectory(z=z, noises=noises, seed=_noise_seed(noises), method=METHOD_EXPLICIT)


def aggregates(trajectory: Trajectory, params: ModelParams) -> AggregateSeries:
    """Weighted aggregate series of a trajectory."""
    n = params.n
    if trajectory.z.shape[1] != 2 * n:
        raise DimensionMismatch(
            f"trajectory state width {trajectory.z.shape[1]} does not match 2n={2*n}"
        )
    return AggregateSeries(
        xbar=trajectory.z[:, :n] @ params.b,
        ybar=trajectory.z[:, n:] @ params.a,
    )
