"""Closed-form accuracy bounds for the Cholesky-QR family.

Each stage of the (preconditioned) algorithm contributes one normwise
relative perturbation; the evaluators below combine them into bounds on the
deviation from orthonormality, the relative residual, and the conditioning
of the computed triangular factor.  A first-order simplification and the
specialization to the unpreconditioned algorithm are also provided, along
with the probabilistic sampling-amount lower bound and the empirical
orthogonality estimate 4*u*kappa(A1).

The bounds are evaluated in plain double precision; the test suite guards
the transcription with an extended-precision oracle.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

#: Unit roundoff of 64-bit IEEE arithmetic.
U = 2.220446049250313e-16

from .errors import DomainError


@dataclass(frozen=True)
class PerturbationSet:
    """Normwise relative perturbations of the algorithm's stages.

    eps_input    -- perturbation of the input matrix A
    eps_precond  -- residual of the preconditioner solve A1 = A R_s^{-1}
    eps_gram     -- forward error of the Gram matrix product
    eps_cholesky -- backward error of the Cholesky factorization
    eps_solve    -- residual of the final triangular solve for Q
    eps_recover  -- forward error of the product R = R2 R_s
    kappa_precond -- condition number of the preconditioner R_s (>= 1)
    """

    eps_input: float = 0.0
    eps_precond: float = 0.0
    eps_gram: float = 0.0
    eps_cholesky: float = 0.0
    eps_solve: float = 0.0
    eps_recover: float = 0.0
    kappa_precond: float = 1.0

    def __post_init__(self):
        vals = (
            self.eps_input,
            self.eps_precond,
            self.eps_gram,
            self.eps_cholesky,
            self.eps_solve,
            self.eps_recover,
        )
        if any(not math.isfinite(v) or v < 0.0 for v in vals):
            raise DomainError("perturbations must be finite and nonnegative")
        if not math.isfinite(self.kappa_precond) or self.kappa_precond < 1.0:
            raise DomainError("kappa_precond must be finite and >= 1")

    @classmethod
    def roundoff(cls, kappa_precond=1.0):
        """All stage perturbations set to unit roundoff."""
        return cls(
            eps_input=U,
            eps_precond=U,
            eps_gram=U,
            eps_cholesky=U,
            eps_solve=U,
            eps_recover=U,
            kappa_precond=kappa_precond,
        )


@dataclass(frozen=True)
class GrowthFactors:
    """Combined second-order growth terms built from a PerturbationSet.

    eps_combined       -- front-end error passed through the preconditioner:
                          (eps_input + eps_precond) * kappa_precond
    growth_ortho       -- multiplies kappa(A1)^2 in the orthogonality bound
    growth_definiteness -- controls the positive-definiteness assumption
                          kappa(A1)^2 * growth_definiteness < 1
    growth_recover     -- contribution of the triangular-factor recovery
    """

    eps_combined: float
    growth_ortho: float
    growth_definiteness: float
    growth_recover: float


@dataclass(frozen=True)
class BoundSet:
    """Evaluated bounds.

    ``cond_factor`` is the multiplier of kappa(R2) bounding the conditioning
    of the computed triangular factor.  The bound fields are ``None`` when
    the positive-definiteness assumption fails (``assumption_ok`` False).
    """

    cond_factor: Optional[float]
    ortho_bound: Optional[float]
    residual_bound: Optional[float]
    assumption_ok: bool
    eta: float
    kappa_preconditioned: float


def growth_factors(p):
    """Evaluate the combined growth terms exactly as defined."""
    ef = (p.eps_input + p.eps_precond) * p.kappa_precond
    e1, e2, e3, e4 = p.eps_gram, p.eps_cholesky, p.eps_solve, p.eps_recover
    g1 = (1.0 + ef) ** 2 * (e1 + (1.0 + e1) * e2 + 2.0 * e3 + e3 * e3)
    g2 = 2.0 * ef + ef * ef + (1.0 + ef) ** 2 * (e1 + (1.0 + e1) * e2)
    g3 = e4 * (1.0 + ef) * (1.0 + e3)
    return GrowthFactors(
        eps_combined=ef,
        growth_ortho=g1,
        growth_definiteness=g2,
        growth_recover=g3,
    )


def preconditioned_bounds(g, p, kappa_preconditioned, eta):
    """Full bounds for preconditioned Cholesky-QR.

    ``kappa_preconditioned`` is the condition number of A1 = A R_s^{-1};
    ``eta`` is the conditioning of the product A1 R_s, in [1, kappa(A1)].
    """
    k = float(kappa_preconditioned)
    if not math.isfinite(k) or k < 1.0:
        raise DomainError("kappa_preconditioned must be finite and >= 1")
    denom = 1.0 - k * k * g.growth_definiteness
    if denom <= 0.0:
        return BoundSet(
            cond_factor=None,
            ortho_bound=None,
            residual_bound=None,
            assumption_ok=False,
            eta=float(eta),
            kappa_preconditioned=k,
        )
    cond_factor = math.sqrt((1.0 + g.growth_definiteness) / denom)
    ortho = k * k * g.growth_ortho / denom
    residual = (
        p.eps_input
        + (p.eps_precond + (1.0 + g.eps_combined) * p.eps_solve) * eta
        + g.growth_recover * cond_factor * eta * k
    )
    return BoundSet(
        cond_factor=cond_factor,
        ortho_bound=ortho,
        residual_bound=residual,
        assumption_ok=True,
        eta=float(eta),
        kappa_preconditioned=k,
    )


def first_order_bounds(p, kappa_preconditioned, eta):
    """First-order versions of the preconditioned bounds (no assumption)."""
    k = float(kappa_preconditioned)
    if not math.isfinite(k) or k < 1.0:
        raise DomainError("kappa_preconditioned must be finite and >= 1")
    g1 = p.eps_gram + p.eps_cholesky + 2.0 * p.eps_solve
    g2 = (
        2.0 * (p.eps_input + p.eps_precond) * p.kappa_precond
        + p.eps_gram
        + p.eps_cholesky
    )
    cond_factor = math.sqrt(1.0 + g2 * (1.0 + k * k))
    ortho = g1 * k * k
    residual = p.eps_input + (
        p.eps_precond + p.eps_solve + p.eps_recover * k
    ) * eta
    return BoundSet(
        cond_factor=cond_factor,
        ortho_bound=ortho,
        residual_bound=residual,
        assumption_ok=True,
        eta=float(eta),
        kappa_preconditioned=k,
    )


def basic_bounds(p, kappa):
    """Bounds for the unpreconditioned algorithm.

    Exactly the preconditioned bounds specialized to a trivial
    preconditioner: no preconditioner solve, no recovery product, eta = 1.
    """
    p0 = replace(p, eps_precond=0.0, eps_recover=0.0, kappa_precond=1.0)
    return preconditioned_bounds(growth_factors(p0), p0, kappa, eta=1.0)


@dataclass(frozen=True)
class SamplingBound:
    """Sampling amount guaranteeing a well-conditioned preconditioned matrix.

    With c >= c_min sampled rows, the preconditioned matrix has full rank
    and condition number at most ``kappa_bound``, with probability at least
    1 - delta.
    """

    c_min: int
    kappa_bound: float


def sampling_lower_bound(m, n, mu, eps, delta):
    """c_min = ceil(2 m mu (1 + eps/3) ln(n/delta) / eps^2)."""
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must be in (0, 1)")
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must be in (0, 1)")
    if not n / m <= mu <= 1.0:
        raise DomainError("mu must be in [n/m, 1]")
    c = 2.0 * m * mu * (1.0 + eps / 3.0) * math.log(n / delta) / (eps * eps)
    return SamplingBound(
        c_min=math.ceil(c),
        kappa_bound=math.sqrt((1.0 + eps) / (1.0 - eps)),
    )


def ortho_estimate(kappa_preconditioned):
    """Empirical orthogonality estimate 4 * u * kappa(A1).

    Observed to track the measured deviation from orthonormality within a
    couple of orders of magnitude; the guaranteed bound carries kappa(A1)^2
    instead.
    """
    k = float(kappa_preconditioned)
    if not math.isfinite(k) or k < 1.0:
        raise DomainError("kappa_preconditioned must be finite and >= 1")
    return 4.0 * U * k
