"""Spectral analysis of the transition matrix.

The characteristic polynomial factors as

    f(lam) = (lam - 1 + beta)^(n-1) (lam - 1 + alpha)^(n-1) g(lam),
    g(lam) = (lam - 1)^2 + (lam - 1)(alpha + beta) + 2 alpha beta,

so lam1 = 1 - alpha and lam2 = 1 - beta are always eigenvalues with
geometric multiplicity n - 1.  The discriminant of g,

    Delta = alpha^2 + beta^2 - 6 alpha beta,

vanishes exactly at alpha = d1 = (3 - 2*sqrt(2)) beta and
alpha = d2 = (3 + 2*sqrt(2)) beta, splitting the parameter plane into
three regimes:

* Delta < 0 — g has a complex-conjugate root pair; M cannot be
  diagonalized over the reals.
* Delta > 0 — two further real roots lam3, lam4; M is diagonalizable
  with an explicit basis Q and structured inverse built here.
* Delta = 0 — lam3 is a double root carrying a single 2 x 2 Jordan
  block; only the block structure is reported (no explicit basis).

The basis column for a simple root lam of g is (1_n, c * 1_n) with
c = (lam - lam1) / alpha, which solves both block rows of the eigen
equation because g(lam) = 0.  The inverse of Q never goes through a
generic dense solver: Q reduces to block-diagonal form by two column
operations, the two n x n blocks invert in closed form, and the same
two operations applied as row operations finish the job in O(n^2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateScale, DimensionMismatch, WrongRegime
from .model import ModelParams

#: Default scale-relative tolerance for detecting the repeated-root boundary.
BOUNDARY_TOL = 1e-10


class Regime(enum.Enum):
    COMPLEX_CONJUGATE = "complex_conjugate"
    DIAGONALIZABLE_REAL = "diagonalizable_real"
    REPEATED_ROOT_JORDAN = "repeated_root_jordan"


@dataclass(frozen=True)
class RegimeBoundaries:
    """Boundary values of alpha at which the discriminant vanishes."""

    d1: float
    d2: float
    delta: float


@dataclass(frozen=True)
class EigenStructure:
    """Eigenvalues of the transition matrix.

    lambda1 and lambda2 each have multiplicity n - 1; lambda3 and
    lambda4 are the roots of the quadratic factor (floats in the real
    regimes, a conjugate complex pair otherwise, coincident on the
    repeated-root boundary).
    """

    n: int
    lambda1: float
    lambda2: float
    lambda3: float | complex
    lambda4: float | complex

    def eigenvalues_with_multiplicity(self) -> list[tuple[float | complex, int]]:
        return [
            (self.lambda1, self.n - 1),
            (self.lambda2, self.n - 1),
            (self.lambda3, 1),
            (self.lambda4, 1),
        ]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Regime, eigenvalues, Jordan block layout, and (when the matrix is
    diagonalizable with alpha*beta != 0) the explicit basis Q and its
    structured inverse.

    ``blocks`` lists (eigenvalue, block size) pairs in basis-column
    order; ``None`` in the complex regime where no real normal form is
    constructed.  tau_minus, tau_plus, and tau_tilde are the reported
    inverse-gap scalars 2/(beta - alpha -+ sqrt(Delta)) and
    alpha*(tau_minus - tau_plus); they are populated whenever Delta > 0
    and both denominators are nonzero.
    """

    regime: Regime
    boundaries: RegimeBoundaries
    eig: EigenStructure
    blocks: tuple[tuple[float, int], ...] | None
    Q: np.ndarray | None
    Qinv: np.ndarray | None
    tau_minus: float | None
    tau_plus: float | None
    tau_tilde: float | None
    boundary_tol: float

    @property
    def n(self) -> int:
        return self.eig.n

    @property
    def diag(self) -> np.ndarray:
        """Diagonal of the normal form as a vector (diagonalizable regime only)."""
        if self.regime is not Regime.DIAGONALIZABLE_REAL:
            raise WrongRegime("normal form is diagonal only in the diagonalizable regime")
        return jordan_diag(self.eig)


def _trichotomy(delta: float, alpha: float, beta: float, boundary_tol: float) -> int:
    """Sign of the discriminant under the scale-relative boundary tolerance:
    -1 complex pair, 0 repeated root, +1 distinct real pair."""
    scale = max(1.0, alpha * alpha + beta * beta)
    if abs(delta) <= boundary_tol * scale:
        return 0
    return -1 if delta < 0 else 1


def classify_regime(
    alpha: float, beta: float, boundary_tol: float = BOUNDARY_TOL
) -> tuple[RegimeBoundaries, Regime]:
    """Locate (alpha, beta) relative to the discriminant boundaries.

    The repeated-root regime is detected by |Delta| <= boundary_tol *
    max(1, alpha^2 + beta^2); the scale-relative comparison avoids false
    boundary hits for large parameters.
    """
    delta = alpha * alpha + beta * beta - 6.0 * alpha * beta
    sq8 = 2.0 * np.sqrt(2.0)
    boundaries = RegimeBoundaries(d1=(3.0 - sq8) * beta, d2=(3.0 + sq8) * beta, delta=delta)
    sign = _trichotomy(delta, alpha, beta, boundary_tol)
    regime = {
        -1: Regime.COMPLEX_CONJUGATE,
        0: Regime.REPEATED_ROOT_JORDAN,
        1: Regime.DIAGONALIZABLE_REAL,
    }[sign]
    return boundaries, regime


def characteristic_polynomial_eval(params: ModelParams, lam: float) -> float:
    """Evaluate the factored characteristic polynomial at ``lam``."""
    alpha, beta, n = params.alpha, params.beta, params.n
    g = (lam - 1.0) ** 2 + (lam - 1.0) * (alpha + beta) + 2.0 * alpha * beta
    return (lam - 1.0 + beta) ** (n - 1) * (lam - 1.0 + alpha) ** (n - 1) * g


def eigen_structure(
    params: ModelParams, boundaries: RegimeBoundaries, regime: Regime
) -> EigenStructure:
    """Eigenvalues in the given regime.

    The quadratic-factor roots are 1 - (alpha + beta)/2 +- sqrt(Delta)/2,
    real when Delta >= 0 and a conjugate pair with imaginary part
    sqrt(|Delta|)/2 otherwise; on the boundary they coincide at
    1 - (alpha + beta)/2.
    """
    alpha, beta = params.alpha, params.beta
    lam1, lam2 = 1.0 - alpha, 1.0 - beta
    mid = 1.0 - (alpha + beta) / 2.0
    if regime is Regime.COMPLEX_CONJUGATE:
        half = np.sqrt(abs(boundaries.delta)) / 2.0
        lam3: float | complex = complex(mid, half)
        lam4: float | complex = complex(mid, -half)
    elif regime is Regime.REPEATED_ROOT_JORDAN:
        lam3 = lam4 = mid
    else:
        half = np.sqrt(boundaries.delta) / 2.0
        lam3, lam4 = mid + half, mid - half
    return EigenStructure(n=params.n, lambda1=lam1, lambda2=lam2, lambda3=lam3, lambda4=lam4)


def jordan_blocks(eig: EigenStructure, regime: Regime) -> tuple[tuple[float, int], ...] | None:
    """Block layout of the real normal form, or None in the complex regime.

    Diagonalizable: (n-1) 1-blocks of lambda1, one of lambda3, (n-1) of
    lambda2, one of lambda4 — matching the basis column order.  On the
    boundary: the lambda1 and lambda2 blocks followed by a single
    2-block at the double root.
    """
    if regime is Regime.COMPLEX_CONJUGATE:
        return None
    n = eig.n
    if regime is Regime.REPEATED_ROOT_JORDAN:
        blocks = [(eig.lambda1, 1)] * (n - 1) + [(eig.lambda2, 1)] * (n - 1)
        blocks.append((float(np.real(eig.lambda3)), 2))
        return tuple(blocks)
    blocks = [(eig.lambda1, 1)] * (n - 1) + [(float(np.real(eig.lambda3)), 1)]
    blocks += [(eig.lambda2, 1)] * (n - 1) + [(float(np.real(eig.lambda4)), 1)]
    return tuple(blocks)


def jordan_diag(eig: EigenStructure) -> np.ndarray:
    """Diagonal vector of the normal form in the diagonalizable regime."""
    n = eig.n
    return np.concatenate([
        np.full(n - 1, eig.lambda1),
        [float(np.real(eig.lambda3))],
        np.full(n - 1, eig.lambda2),
        [float(np.real(eig.lambda4))],
    ])


def blocks_to_matrix(blocks: tuple[tuple[float, int], ...]) -> np.ndarray:
    """Dense normal form from a block description."""
    size = sum(s for _, s in blocks)
    J = np.zeros((size, size))
    pos = 0
    for value, s in blocks:
        J[pos:pos + s, pos:pos + s] = jordan_block_power(value, s, 1)
        pos += s
    return J


def jordan_block_power(theta: float, size: int, t: int) -> np.ndarray:
    """t-th power of an elementary Jordan block, computed blockwise.

    For size 1 this is theta^t; for size 2 it is
    [[theta^t, t*theta^(t-1)], [0, theta^t]].
    """
    if size == 1:
        return np.array([[theta ** t]])
    if size == 2:
        off = float(t) * theta ** (t - 1) if t >= 1 else 0.0
        return np.array([[theta ** t, off], [0.0, theta ** t]])
    raise ValueError(f"blocks of size {size} do not occur in this model")


def _column_scales(params: ModelParams, eig: EigenStructure) -> tuple[float, float]:
    """Bottom-half scales of the two quadratic-root basis columns.

    The column for root lam is (1_n, c*1_n) with c = (lam - lambda1)/alpha,
    the unique scalar solving the top block row (1-alpha) + alpha*c = lam;
    g(lam) = 0 makes the bottom row hold as well.  Requires alpha != 0 and
    beta != 0 (otherwise the quadratic roots collide with lambda1/lambda2
    and the four-block basis degenerates).
    """
    alpha, beta = params.alpha, params.beta
    if alpha == 0.0 or beta == 0.0:
        raise DegenerateScale(
            f"basis scalars undefined for alpha={alpha}, beta={beta} (alpha*beta == 0)"
        )
    lam3 = float(np.real(eig.lambda3))
    lam4 = float(np.real(eig.lambda4))
    return (lam3 - eig.lambda1) / alpha, (lam4 - eig.lambda1) / alpha


def _require_basis_regime(params: ModelParams, regime: Regime) -> None:
    if params.n < 2:
        raise DimensionMismatch("explicit basis requires n >= 2")
    if regime is not Regime.DIAGONALIZABLE_REAL:
        raise WrongRegime(f"explicit basis exists only in the diagonalizable regime, got {regime}")


def build_basis(params: ModelParams, eig: EigenStructure, regime: Regime) -> np.ndarray:
    """Assemble the diagonalizing basis Q column-block-wise.

    Columns 1..n-1 span the lambda1 eigenspace: (-b_{i+1}/b_1, e_i, 0_n).
    Column n is the lambda3 eigenvector (1_n, c3*1_n).  Columns
    n+1..2n-1 span the lambda2 eigenspace: (0_n, -a_{i+1}/a_1, e_i), and
    column 2n is the lambda4 eigenvector (1_n, c4*1_n).
    """
    _require_basis_regime(params, regime)
    c3, c4 = _column_scales(params, eig)
    n = params.n
    a, b = params.a, params.b
    Q = np.zeros((2 * n, 2 * n))
    for i in range(n - 1):
        Q[0, i] = -b[i + 1] / b[0]
        Q[i + 1, i] = 1.0
    Q[:n, n - 1] = 1.0
    Q[n:, n - 1] = c3
    for i in range(n - 1):
        Q[n, n + i] = -a[i + 1] / a[0]
        Q[n + 1 + i, n + i] = 1.0
    Q[:n, 2 * n - 1] = 1.0
    Q[n:, 2 * n - 1] = c4
    return Q


def _inverse_blocks(
    params: ModelParams, eig: EigenStructure
) -> tuple[np.ndarray, np.ndarray, float]:
    """Closed-form inverses of the two n x n blocks Q reduces to, plus
    the shear scalar of the reducing column operation.

    Two column operations take Q to diag{Q21, Q22}: subtract column n
    from column 2n (merged bottom scale mix = c4 - c3), then add
    shear = -c3/mix times column 2n to column n.  Both blocks invert in
    closed form from the weights alone.
    """
    c3, c4 = _column_scales(params, eig)
    n = params.n
    a, b = params.a, params.b
    mix = c4 - c3  # -sqrt(Delta)/alpha
    if mix == 0.0:
        raise DegenerateScale("coincident quadratic roots leave the merged column zero")

    ones = np.ones(n - 1)
    q21 = np.zeros((n, n))
    q21[: n - 1, 0] = -b[0]
    q21[: n - 1, 1:] = np.eye(n - 1) - np.outer(ones, b[1:])
    q21[n - 1, 0] = b[0]
    q21[n - 1, 1:] = b[1:]

    q22 = np.zeros((n, n))
    q22[: n - 1, 0] = -a[0]
    q22[: n - 1, 1:] = np.eye(n - 1) - np.outer(ones, a[1:])
    q22[n - 1, 0] = a[0] / mix
    q22[n - 1, 1:] = a[1:] / mix
    return q21, q22, -c3 / mix


def build_basis_inverse(params: ModelParams, eig: EigenStructure, regime: Regime) -> np.ndarray:
    """Invert Q by the structured O(n^2) recipe, never a dense solver.

    The two column operations that reduce Q to diag{Q21, Q22} are
    applied as row operations on the left of diag{Q21^-1, Q22^-1}.
    """
    _require_basis_regime(params, regime)
    q21, q22, shear = _inverse_blocks(params, eig)
    n = params.n
    qinv = np.zeros((2 * n, 2 * n))
    qinv[:n, :n] = q21
    qinv[n:, n:] = q22
    # row operations mirroring the two column operations on Q
    qinv[2 * n - 1, :] += shear * qinv[n - 1, :]
    qinv[n - 1, :] -= qinv[2 * n - 1, :]
    return qinv


def decompose(params: ModelParams, boundary_tol: float = BOUNDARY_TOL) -> SpectralDecomposition:
    """Classify the regime and build every artifact available in it.

    Q and its inverse are populated only in the diagonalizable regime
    with n >= 2 and alpha*beta != 0; elsewhere they are None and the
    eigenvalue report still stands.
    """
    boundaries, regime = classify_regime(params.alpha, params.beta, boundary_tol)
    eig = eigen_structure(params, boundaries, regime)
    blocks = jordan_blocks(eig, regime)

    Q = Qinv = None
    tau_minus = tau_plus = tau_tilde = None
    if regime is Regime.DIAGONALIZABLE_REAL:
        gap = np.sqrt(boundaries.delta)
        den_minus = params.beta - params.alpha - gap
        den_plus = params.beta - params.alpha + gap
        if den_minus != 0.0 and den_plus != 0.0:
            tau_minus = 2.0 / den_minus
            tau_plus = 2.0 / den_plus
            tau_tilde = params.alpha * (tau_minus - tau_plus)
        if params.n >= 2 and params.alpha != 0.0 and params.beta != 0.0:
            Q = build_basis(params, eig, regime)
            Qinv = build_basis_inverse(params, eig, regime)

    return SpectralDecomposition(
        regime=regime,
        boundaries=boundaries,
        eig=eig,
        blocks=blocks,
        Q=Q,
        Qinv=Qinv,
        tau_minus=tau_minus,
        tau_plus=tau_plus,
        tau_tilde=tau_tilde,
        boundary_tol=boundary_tol,
    )


@dataclass(frozen=True)
class DecompositionCheck:
    """Max-norm residuals of the three decomposition identities.

    Failures are data, not exceptions: ``passed`` is False when any
    residual exceeds its threshold.
    """

    residual_mq_qj: float
    residual_qqinv: float
    residual_similarity: float
    threshold_mq_qj: float
    threshold_qqinv: float
    passed: bool


def verify_decomposition(
    M: np.ndarray,
    blocks: tuple[tuple[float, int], ...],
    Q: np.ndarray,
    Qinv: np.ndarray,
    tol: float = 1e-10,
) -> DecompositionCheck:
    """Measure ||MQ - QJ||, ||QQ^-1 - I||, and ||Q^-1 M Q - J|| in max norm.

    The MQ - QJ and similarity residuals are compared against
    tol * ||M||_max, the inverse residual against tol directly.
    """
    if M.shape[0] < 4:
        raise DimensionMismatch("decomposition checks require n >= 2 (matrix at least 4 x 4)")
    J = blocks_to_matrix(blocks)
    m_scale = float(np.max(np.abs(M)))
    r1 = float(np.max(np.abs(M @ Q - Q @ J)))
    r2 = float(np.max(np.abs(Q @ Qinv - np.eye(M.shape[0]))))
    r3 = float(np.max(np.abs(Qinv @ M @ Q - J)))
    passed = (r1 < tol * m_scale) and (r2 < tol) and (r3 < tol * m_scale)
    return DecompositionCheck(
        residual_mq_qj=r1,
        residual_qqinv=r2,
        residual_similarity=r3,
        threshold_mq_qj=tol * m_scale,
        threshold_qqinv=tol,
        passed=passed,
    )
