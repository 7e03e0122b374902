"""Model parameters, noise specification, and the transition matrix.

The model couples n agents: each output growth rate adjusts toward the
weighted mean sentiment with speed alpha, each sentiment adjusts against
the weighted mean output with speed beta.  Stacked as z = (x, y), one step
is z_{t+1} = M z_t + gamma_t with the block matrix M built here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import DimensionMismatch, ForbiddenPair, ParameterError, WeightViolation

#: Tolerance on |sum(weights) - 1| before a weight vector is rejected.
WEIGHT_SUM_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ModelParams:
    """Validated model parameters.

    n agents, adjustment constants alpha/beta, and the two strictly
    positive weight vectors a (sentiment) and b (output), each summing
    to one.  Construct through :func:`validate_params`.
    """

    n: int
    alpha: float
    beta: float
    a: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian noise law: coordinate i of the stacked shock vector is
    N(mu[i], sigma[i]^2); the first n entries drive epsilon, the last n
    drive eta."""

    mu: np.ndarray
    sigma: np.ndarray


@dataclass(frozen=True)
class TransitionMatrix:
    """The 2n x 2n one-step map. Diagonal blocks are (1-alpha)I and
    (1-beta)I; every row of the top-right block is alpha*a, every row of
    the bottom-left block is -beta*b."""

    entries: np.ndarray
    n: int


def validate_params(raw: Mapping[str, Any] | ModelParams) -> ModelParams:
    """Validate a raw parameter record and return frozen ``ModelParams``.

    Weights are renormalized to sum exactly to one only when the raw sum
    is already within ``WEIGHT_SUM_TOL`` of one; a looser sum is rejected
    because it usually signals a modelling error rather than decimal
    truncation.  Idempotent: validating a validated record returns an
    equal record.

    Raises
    ------
    WeightViolation
        Nonpositive weight entry, or weight sum off by more than the
        tolerance.
    ForbiddenPair
        (alpha, beta) equal to (0, 0) or (1, 1).
    DimensionMismatch
        a or b does not have length n, or n < 1.
    """
    if isinstance(raw, ModelParams):
        record: Mapping[str, Any] = {
            "n": raw.n, "alpha": raw.alpha, "beta": raw.beta, "a": raw.a, "b": raw.b,
        }
    else:
        record = raw
    missing = [k for k in ("n", "alpha", "beta", "a", "b") if k not in record]
    if missing:
        raise ParameterError(f"missing parameter keys: {', '.join(missing)}")

    n = int(record["n"])
    if n < 1:
        raise DimensionMismatch(f"n must be a positive integer, got {n}")
    alpha = float(record["alpha"])
    beta = float(record["beta"])
    if (alpha, beta) in ((0.0, 0.0), (1.0, 1.0)):
        raise ForbiddenPair(f"(alpha, beta) = ({alpha}, {beta}) is excluded")

    weights = {}
    for name in ("a", "b"):
        w = np.asarray(record[name], dtype=float)
        if w.shape != (n,):
            raise DimensionMismatch(f"{name} must have length n={n}, got shape {w.shape}")
        if not np.all(w > 0):
            raise WeightViolation(f"{name} must be strictly positive, got {w.tolist()}")
        s = float(w.sum())
        if abs(s - 1.0) > WEIGHT_SUM_TOL:
            raise WeightViolation(f"{name} must sum to 1 within {WEIGHT_SUM_TOL}, got sum {s!r}")
        weights[name] = _frozen(w / s)

    return ModelParams(n=n, alpha=alpha, beta=beta, a=weights["a"], b=weights["b"])


def validate_noise(raw: Mapping[str, Any] | NoiseSpec, n: int) -> NoiseSpec:
    """Validate a noise record against agent count ``n``.

    Requires mu and sigma of length exactly 2n with every sigma > 0.
    """
    if isinstance(raw, NoiseSpec):
        record: Mapping[str, Any] = {"mu": raw.mu, "sigma": raw.sigma}
    else:
        record = raw
    missing = [k for k in ("mu", "sigma") if k not in record]
    if missing:
        raise ParameterError(f"missing noise keys: {', '.join(missing)}")
    mu = np.asarray(record["mu"], dtype=float)
    sigma = np.asarray(record["sigma"], dtype=float)
    if mu.shape != (2 * n,):
        raise DimensionMismatch(f"noise mu must have length 2n={2*n}, got shape {mu.shape}")
    if sigma.shape != (2 * n,):
        raise DimensionMismatch(f"noise sigma must have length 2n={2*n}, got shape {sigma.shape}")
    if not np.all(sigma > 0):
        raise ParameterError("noise sigma entries must all be > 0")
    return NoiseSpec(mu=_frozen(mu), sigma=_frozen(sigma))


def build_transition_matrix(params: ModelParams) -> TransitionMatrix:
    """Assemble the 2n x 2n transition matrix from validated parameters.

    Every entry is a plain product of inputs, so the block invariants
    hold exactly in floating point.
    """
    n, alpha, beta = params.n, params.alpha, params.beta
    ones = np.ones(n)
    top = np.hstack([(1.0 - alpha) * np.eye(n), alpha * np.outer(ones, params.a)])
    bottom = np.hstack([-beta * np.outer(ones, params.b), (1.0 - beta) * np.eye(n)])
    return TransitionMatrix(entries=_frozen(np.vstack([top, bottom])), n=n)


def lint_params(params: ModelParams) -> list[str]:
    """Non-fatal warnings about unusual but admissible parameter choices."""
    notes = []
    for name, value in (("alpha", params.alpha), ("beta", params.beta)):
        if not 0.0 < value < 1.0:
            notes.append(
                f"{name}={value} lies outside (0, 1); the model admits it but "
                "eigenvalues may leave the unit circle"
            )
    return notes
