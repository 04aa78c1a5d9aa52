"""Dispersion relation of the linearization around the uniform state.

For wavenumber parameter k the Fourier symbol of the linear part is

    M(k) = -i k U - D A - eps k**2 I,

a complex 4x4 matrix whose eigenvalues z_1(k), ..., z_4(k) are the growth
exponents of plane-wave perturbations.  On a domain of length parameter lam
the admissible wavenumbers are k = 2 pi n / lam with integer n, giving the
mode matrices M~(n, lam) = M(2 pi n / lam).

This module scans the symbol over a k grid, tracks the four eigenvalue
branches continuously, classifies the instability (none, stationary, or
oscillatory), and locates neutral crossings Re z = 0 used as Hopf points.
A small helper for the classical two-species stationary (Turing) instability
criterion is included for contrast with the oscillatory mechanism here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .model import Model

__all__ = [
    "symbol_matrix",
    "symbol_matrix_mode",
    "mode_matrix",
    "DispersionScan",
    "eigen_branches",
    "StabilityReport",
    "growth_rate_and_classify",
    "Crossing",
    "CrossingResult",
    "find_crossing",
    "TuringResult",
    "turing_stationary_check",
    "DEFAULT_SCAN_RANGE",
]

#: Default (k_min, k_max, step) per model kind.  The symmetric model loses
#: stability at |k| well below 1, so it gets a finer small-k window.
DEFAULT_SCAN_RANGE = {
    "nonsymmetric": (-12.0, 12.0, 0.01),
    "symmetric": (-1.5, 1.5, 0.002),
}


def symbol_matrix(model: Model, k: float,
                  eps: Optional[float] = None) -> np.ndarray:
    """Fourier symbol M(k) = -i k U - D A - eps k^2 I of the linear part."""
    eps = model.epsilon0 if eps is None else float(eps)
    return (-1j * k) * model.U - model.DA - (eps * k * k) * np.eye(4)


def symbol_matrix_mode(model: Model, n: int, lam: float) -> np.ndarray:
    """Mode matrix M~(n, lam) = M(2 pi n / lam) on a domain of length lam."""
    if lam == 0.0:
        raise ValueError("lam must be nonzero")
    return symbol_matrix(model, 2.0 * np.pi * n / lam)


def mode_matrix(model: Model, n: int, lam: float,
                lam0: Optional[float] = None) -> np.ndarray:
    """Mode matrix with the diffusion scaling used near a reference length.

    For the symmetric model the diffusion coefficient is slaved to the domain
    length, eps(lam) = eps0 * lam^2 / lam0^2, which freezes the diffusive
    decay rate of each mode at its reference value eps0 n^2 (2 pi / lam0)^2.
    When ``lam0`` is None (or for the nonsymmetric model) this reduces to
    :func:`symbol_matrix_mode` with constant eps0.
    """
    if lam0 is None or model.kind != "symmetric":
        return symbol_matrix_mode(model, n, lam)
    k = 2.0 * np.pi * n / lam
    k0 = 2.0 * np.pi * n / lam0
    return (-1j * k) * model.U - model.DA - (model.epsilon0 * k0 * k0) * np.eye(4)


@dataclass(frozen=True)
class DispersionScan:
    """Eigenvalue branches z_j(k) tracked along a wavenumber grid.

    ``branches`` has shape (4, len(k_grid)); ``tie_indices`` lists grid
    positions where the branch matching was ambiguous at 1e-12 resolution
    (typically eigenvalue collisions).
    """

    k_grid: np.ndarray
    branches: np.ndarray
    tie_indices: Tuple[int, ...]


def eigen_branches(model: Model, k_grid: np.ndarray) -> DispersionScan:
    """Track the four symbol eigenvalues continuously along ``k_grid``.

    At each grid point the permutation of the freshly computed eigenvalues
    minimizing the total distance to the previous column is selected (all 24
    permutations are tried).  The first column is sorted by (Re, Im).
    """
    k_grid = np.asarray(k_grid, dtype=float)
    if k_grid.ndim != 1 or k_grid.size == 0:
        raise ValueError("k_grid must be a nonempty 1-d array")
    branches = np.empty((4, k_grid.size), dtype=complex)
    ties: List[int] = []

    first = np.linalg.eigvals(symbol_matrix(model, k_grid[0]))
    order = np.lexsort((first.imag, first.real))
    branches[:, 0] = first[order]

    perms = list(itertools.permutations(range(4)))
    for i in range(1, k_grid.size):
        eigs = np.linalg.eigvals(symbol_matrix(model, k_grid[i]))
        prev = branches[:, i - 1]
        costs = [np.abs(eigs[list(p)] - prev).sum() for p in perms]
        best = int(np.argmin(costs))
        second = min(c for j, c in enumerate(costs) if j != best)
        if second - costs[best] < 1e-12:
            ties.append(i)
        branches[:, i] = eigs[list(perms[best])]
    return DispersionScan(k_grid=k_grid, branches=branches,
                          tie_indices=tuple(ties))


@dataclass(frozen=True)
class StabilityReport:
    """Classification of the dispersion scan.

    ``classification`` is one of ``"no_patterns"``,
    ``"stationary_patterns"``, or ``"oscillatory_patterns"``; the latter two
    distinguish Im z = 0 from Im z != 0 at the most unstable wavenumber.
    """

    classification: str
    max_growth: float
    k_at_max: float
    z_at_max: complex
    branch_at_max: int
    boundary_hit: bool
    scan: DispersionScan


def growth_rate_and_classify(model: Model,
                             scan: Optional[DispersionScan] = None,
                             zero_tol: float = 1e-10) -> StabilityReport:
    """Locate the most unstable wavenumber and classify the instability."""
    if scan is None:
        k_min, k_max, step = DEFAULT_SCAN_RANGE[model.kind]
        scan = eigen_branches(model, np.arange(k_min, k_max + step / 2, step))
    re = scan.branches.real
    flat = int(np.argmax(re))
    j, i = np.unravel_index(flat, re.shape)
    z = complex(scan.branches[j, i])
    growth = float(re[j, i])
    boundary = i in (0, scan.k_grid.size - 1)
    if growth < zero_tol:
        cls = "no_patterns"
    elif abs(z.imag) < 1e-8:
        cls = "stationary_patterns"
    else:
        cls = "oscillatory_patterns"
    return StabilityReport(classification=cls, max_growth=growth,
                           k_at_max=float(scan.k_grid[i]), z_at_max=z,
                           branch_at_max=int(j), boundary_hit=boundary,
                           scan=scan)


@dataclass(frozen=True)
class Crossing:
    """A neutral point: Re z_j(k) = 0 with frequency kappa = Im z_j(k)."""

    k: float
    kappa: float
    branch_index: int
    residual: float


@dataclass(frozen=True)
class CrossingResult:
    """Selected critical wavenumber plus the full list of neutral points.

    Selection rule among all detected crossings: largest |kappa| first, then
    kappa < 0, then k > 0.  ``lam0 = 2 pi / k0`` is the domain length at
    which mode n = 1 sits exactly at the crossing (negative k0 gives a
    negative length parameter; only lam0^2 and the combination 2 pi / lam0
    enter downstream formulas).
    """

    k0: float
    kappa0: float
    lam0: float
    branch_index: int
    crossings: Tuple[Crossing, ...]


def _nearest_eig(model: Model, k: float, z_ref: complex) -> complex:
    eigs = np.linalg.eigvals(symbol_matrix(model, k))
    return complex(eigs[np.argmin(np.abs(eigs - z_ref))])


def find_crossing(model: Model,
                  k_min: Optional[float] = None,
                  k_max: Optional[float] = None,
                  step: Optional[float] = None,
                  exclude_radius: Optional[float] = None) -> CrossingResult:
    """Locate all neutral crossings Re z = 0 and select the critical one.

    The symbol eigenvalues are tracked on a uniform grid (defaults per model
    kind, see ``DEFAULT_SCAN_RANGE``), sign changes of Re z_j are refined by
    bisection on the eigenvalue nearest to the tracked branch, and crossings
    are deduplicated.  A neighborhood of k = 0 (radius 10 * step by default)
    is excluded: the conserved-mass branch passes through zero there without
    producing a finite-wavelength instability.

    Raises
    ------
    RuntimeError
        If no crossing is found in the scanned range.
    """
    d_min, d_max, d_step = DEFAULT_SCAN_RANGE[model.kind]
    k_min = d_min if k_min is None else float(k_min)
    k_max = d_max if k_max is None else float(k_max)
    step = d_step if step is None else float(step)
    if not (k_min < k_max and step > 0):
        raise ValueError("need k_min < k_max and step > 0")
    excl = 10.0 * step if exclude_radius is None else float(exclude_radius)

    grid = np.arange(k_min, k_max + step / 2, step)
    found: List[Crossing] = []
    for side in (grid[grid <= -excl], grid[grid >= excl]):
        if side.size < 2:
            continue
        scan = eigen_branches(model, side)
        for j in range(4):
            re = scan.branches[j].real
            for i in range(side.size - 1):
                a, b = re[i], re[i + 1]
                if a == 0.0:
                    k_star = float(side[i])
                elif a * b < 0.0:
                    z_ref = scan.branches[j, i]
                    f = lambda k: _nearest_eig(model, k, z_ref).real
                    k_star = float(brentq(f, side[i], side[i + 1],
                                          xtol=1e-13, rtol=1e-15))
                else:
                    continue
                z_star = _nearest_eig(model, k_star, scan.branches[j, i])
                found.append(Crossing(k=k_star, kappa=float(z_star.imag),
                                      branch_index=j,
                                      residual=float(abs(z_star.real))))

    uniq: List[Crossing] = []
    for c in sorted(found, key=lambda c: (c.k, c.kappa)):
        if not any(abs(c.k - u.k) < 1e-9 and abs(c.kappa - u.kappa) < 1e-9
                   for u in uniq):
            uniq.append(c)
    if not uniq:
        raise RuntimeError("no neutral crossing found in the scanned range")

    sel = sorted(uniq, key=lambda c: (-round(abs(c.kappa), 9),
                                      0 if c.kappa < 0 else 1,
                                      0 if c.k > 0 else 1,
                                      c.k))[0]
    return CrossingResult(k0=sel.k, kappa0=sel.kappa,
                          lam0=2.0 * np.pi / sel.k,
                          branch_index=sel.branch_index,
                          crossings=tuple(uniq))


@dataclass(frozen=True)
class TuringResult:
    """Outcome of the two-species stationary instability criterion."""

    satisfied: bool
    trace: float
    det: float
    threshold_lhs: float   # a11 D2 + a22 D1
    threshold_rhs: float   # 2 sqrt(D1 D2 det A)


def turing_stationary_check(A2: np.ndarray, D1: float,
                            D2: float) -> TuringResult:
    """Classical diffusion-driven instability test for a 2x2 reaction matrix.

    Requires a stable reaction part (tr A < 0, det A > 0) that diffusion
    destabilizes: a11 D2 + a22 D1 > 2 sqrt(D1 D2 det A) > 0.
    """
    A2 = np.asarray(A2, dtype=float)
    if A2.shape != (2, 2):
        raise ValueError("A2 must be a 2x2 matrix")
    if not (D1 > 0 and D2 > 0):
        raise ValueError("diffusion coefficients must be positive")
    tr = float(A2[0, 0] + A2[1, 1])
    det = float(np.linalg.det(A2))
    lhs = float(A2[0, 0] * D2 + A2[1, 1] * D1)
    rhs = float(2.0 * np.sqrt(max(D1 * D2 * det, 0.0)))
    ok = (tr < 0.0) and (det > 0.0) and (lhs > rhs > 0.0)
    return TuringResult(satisfied=bool(ok), trace=tr, det=det,
                        threshold_lhs=lhs, threshold_rhs=rhs)
