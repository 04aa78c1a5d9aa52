"""Hopf verification for a simple critical eigenvalue pair.

At a crossing (lam0, kappa0) of the nonsymmetric model the mode-1 matrix has
a simple eigenvalue i kappa0 on the imaginary axis.  This module computes the
two quantities a Hopf theorem needs beyond the spectral pictures:

* the crossing speed z'(lam0), the derivative of the critical eigenvalue
  with respect to the domain-length parameter (transversality), and
* the curvature coefficient Phi of the bifurcating branch, built from the
  quadratic interaction of the critical mode with its second harmonic and
  its mass-zero mean correction.

Conventions: the critical eigenvector v0 has unit norm and the adjoint
vector w0 is scaled so that <v0, w0> = 1.  With these choices the truncated
amplitude equation reads

    dr/dt = g r - (Re Phi / 2) r^3,

where g is the linear growth rate of mode 1 at the run parameter, so the
branch is supercritical iff Re Phi > 0, the parameter curvature of the
branch is lambda''(0) = Re Phi / Re z'(lam0), and the saturated amplitude at
growth rate g is sqrt(2 g / Re Phi) (in units of the mode-1 Fourier
coefficient norm).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import symbol_matrix, symbol_matrix_mode
from .model import Model, eval_DQ
from .spectral import CriticalEigenData, mass_zero_solve, mode_eigensystem

__all__ = [
    "CrossingSpeed",
    "crossing_speed",
    "BifurcationData",
    "bifurcation_coefficient",
    "HopfSingleReport",
    "classify_branch",
    "verify_hopf_single",
]


def _tracked_eig(mat: np.ndarray, target: complex) -> complex:
    eigs = np.linalg.eigvals(mat)
    return complex(eigs[np.argmin(np.abs(eigs - target))])


@dataclass(frozen=True)
class CrossingSpeed:
    """Derivative of the critical eigenvalue at the crossing.

    Two parameterizations of the same branch: ``z_prime_lambda`` is the
    derivative with respect to the domain length lam, ``z_prime_k`` with
    respect to the wavenumber k = 2 pi / lam; they are related by the chain
    factor dk/dlam = -2 pi / lam0^2.  Both come with central finite
    difference cross-checks of the eigenvalue-perturbation formula.
    """

    z_prime_lambda: complex
    z_prime_k: complex
    dk_dlambda: float
    fd_lambda: complex
    fd_k: complex

    @property
    def rel_err_lambda(self) -> float:
        return abs(self.fd_lambda - self.z_prime_lambda) / abs(self.z_prime_lambda)

    @property
    def rel_err_k(self) -> float:
        return abs(self.fd_k - self.z_prime_k) / abs(self.z_prime_k)

    @property
    def transversal(self) -> bool:
        return abs(self.z_prime_lambda.real) > 1e-8


def crossing_speed(model: Model, crit: CriticalEigenData,
                   fd_step: float = 1e-6) -> CrossingSpeed:
    """Crossing speed via first-order eigenvalue perturbation.

    With <v0, w0> = 1 the derivative of the mode-1 eigenvalue z(lam) of
    M~(1, lam) is <(d/dlam M~) v0, w0> where

        d/dlam M~(1, lam) = (8 pi^2 eps / lam^3) I + i (2 pi / lam^2) U,

    and of z(k) of M(k) is <(-i U - 2 eps k) v0, w0>.  Both are verified
    against central finite differences with step ``fd_step``.
    """
    lam0, kappa0 = crit.lam0, crit.kappa0
    v0, w0 = crit.v0, crit.w0
    eps = model.epsilon0
    k0 = 2.0 * np.pi / lam0

    d_lam = ((8.0 * np.pi**2 * eps / lam0**3) * np.eye(4)
             + (2.0 * np.pi / lam0**2) * 1j * model.U)
    zp_lam = complex(np.vdot(w0, d_lam @ v0))

    d_k = -1j * model.U - (2.0 * eps * k0) * np.eye(4)
    zp_k = complex(np.vdot(w0, d_k @ v0))

    h = fd_step
    target = 1j * kappa0
    fd_lam = (_tracked_eig(symbol_matrix_mode(model, 1, lam0 + h), target)
              - _tracked_eig(symbol_matrix_mode(model, 1, lam0 - h), target)) / (2 * h)
    fd_k = (_tracked_eig(symbol_matrix(model, k0 + h), target)
            - _tracked_eig(symbol_matrix(model, k0 - h), target)) / (2 * h)

    return CrossingSpeed(z_prime_lambda=zp_lam, z_prime_k=zp_k,
                         dk_dlambda=-2.0 * np.pi / lam0**2,
                         fd_lambda=complex(fd_lam), fd_k=complex(fd_k))


@dataclass(frozen=True)
class BifurcationData:
    """Curvature coefficient Phi of the bifurcating periodic branch.

    ``term_second_harmonic`` couples the critical mode to its frequency- and
    wavenumber-doubled response, ``term_mean`` to the stationary mass-zero
    mean-flow correction; ``phi`` is their sum.
    """

    phi: complex
    term_second_harmonic: complex
    term_mean: complex


def bifurcation_coefficient(model: Model,
                            crit: CriticalEigenData) -> BifurcationData:
    """Second-order amplitude coefficient of the periodic branch.

    With DQ the Jacobian of the collision term,

        Phi = -<DQ(conj v0) (2 i kappa0 - M~(2, lam0))^{-1} DQ(v0) v0, w0>
              + 2 <DQ(v0) g, w0>,   g = mass-zero solve of -D A g = DQ(v0) conj v0.

    The mode-2 solve exists by nonresonance; the mode-0 right-hand side has
    zero component sum by the structure of Q, so the mass-zero solve exists.
    """
    lam0, kappa0 = crit.lam0, crit.kappa0
    v0, w0 = crit.v0, crit.w0
    c = model.c
    M2 = symbol_matrix_mode(model, 2, lam0)
    rhs2 = eval_DQ(v0, c) @ v0
    h2 = np.linalg.solve(2j * kappa0 * np.eye(4) - M2, rhs2)
    t1 = -complex(np.vdot(w0, eval_DQ(np.conj(v0), c) @ h2))

    g = mass_zero_solve(-model.DA, eval_DQ(v0, c) @ np.conj(v0))
    t2 = 2.0 * complex(np.vdot(w0, eval_DQ(v0, c) @ g))
    return BifurcationData(phi=t1 + t2, term_second_harmonic=t1,
                           term_mean=t2)


@dataclass(frozen=True)
class HopfSingleReport:
    """Classification of the simple-eigenvalue Hopf point."""

    lam0: float
    kappa0: float
    speed: CrossingSpeed
    bifurcation: BifurcationData
    lambda_curvature: float
    branch_type: str         # "supercritical" | "subcritical" | "degenerate"
    unstable_side: str       # side of lam0 where mode 1 grows
    amplitude_coefficient: float   # r_sat = sqrt(coefficient * growth)


def classify_branch(speed: CrossingSpeed, bif: BifurcationData,
                    lam0: float, kappa0: float) -> HopfSingleReport:
    """Combine crossing speed and curvature into a branch classification.

    The periodic branch satisfies lam(r) = lam0 + (lambda''(0)/2) r^2 + ...
    with lambda''(0) = Re Phi / Re z'(lam0).  It is supercritical (stable
    oscillations emerging into the unstable parameter side) iff Re Phi > 0,
    independent of the sign of the crossing speed.
    """
    re_phi = bif.phi.real
    re_zp = speed.z_prime_lambda.real
    if abs(re_phi) < 1e-10 * (1.0 + abs(bif.phi)):
        btype = "degenerate"
    elif re_phi > 0:
        btype = "supercritical"
    else:
        btype = "subcritical"
    side = "lambda_below_lam0" if re_zp < 0 else "lambda_above_lam0"
    curv = re_phi / re_zp if re_zp != 0 else float("inf")
    amp = 2.0 / re_phi if re_phi != 0 else float("inf")
    return HopfSingleReport(lam0=lam0, kappa0=kappa0, speed=speed,
                            bifurcation=bif, lambda_curvature=curv,
                            branch_type=btype, unstable_side=side,
                            amplitude_coefficient=amp)


def verify_hopf_single(model: Model, lam0: float,
                       kappa0: float) -> HopfSingleReport:
    """Run the full simple-eigenvalue pipeline at a known crossing."""
    crit = mode_eigensystem(model, lam0, kappa0, normalization="pairing")
    speed = crossing_speed(model, crit)
    bif = bifurcation_coefficient(model, crit)
    return classify_branch(speed, bif, lam0, kappa0)
