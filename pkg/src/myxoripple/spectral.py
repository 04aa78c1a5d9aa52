"""Mode-level spectral checks at a critical point.

Everything here works with the mode matrices M~(n, lam0) of the linear part
at a crossing (lam0, kappa0) located by :func:`myxoripple.dispersion.
find_crossing`: extraction of the critical eigenvector pair, solvability of
singular mass-zero systems, nonresonance of the higher modes, the uniform
resolvent decay that controls the infinite tail of modes, and the
semisimplicity of the doubled eigenvalue in the reflection-symmetric case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .dispersion import symbol_matrix_mode
from .model import MASS_VECTOR, Model

__all__ = [
    "CriticalEigenData",
    "mode_eigensystem",
    "mass_zero_solve",
    "NonresonanceReport",
    "nonresonance_report",
    "ResolventDecayReport",
    "resolvent_decay_check",
    "SemisimplicityReport",
    "semisimplicity_check",
]


def _kernel_pair(M0: np.ndarray):
    """Unit right and left kernel vectors of a near-singular matrix.

    Returns (v, w, sigma_min, sigma_next) from the SVD of M0, with phases
    pinned so that the largest-magnitude component of each vector is real
    and positive.  M0 v ~ 0 and M0^H w ~ 0.
    """
    u_mat, sigma, vh = np.linalg.svd(M0)
    v = vh[-1].conj().copy()
    w = u_mat[:, -1].copy()
    for vec in (v, w):
        piv = vec[np.argmax(np.abs(vec))]
        vec *= np.conj(piv) / abs(piv)
    return v, w, float(sigma[-1]), float(sigma[-2])


@dataclass(frozen=True)
class CriticalEigenData:
    """Eigendata of the critical mode-1 matrix at a crossing.

    ``M0 = -M~(1, lam0) + i kappa0 I`` is singular at the crossing; ``v0``
    spans its kernel and ``w0`` the kernel of its adjoint.  The pairing is
    <v0, w0> = sum conj(w0) v0.  ``eigenvalues`` are those of M0 sorted by
    ascending real part (one of them is ~0).
    """

    lam0: float
    kappa0: float
    M0: np.ndarray
    v0: np.ndarray
    w0: np.ndarray
    pairing: complex
    eigenvalues: np.ndarray
    sigma_min: float
    sigma_gap: float

    @property
    def residual_v(self) -> float:
        return float(np.linalg.norm(self.M0 @ self.v0))

    @property
    def residual_w(self) -> float:
        return float(np.linalg.norm(self.M0.conj().T @ self.w0))


def mode_eigensystem(model: Model, lam0: float, kappa0: float,
                     normalization: str = "pairing") -> CriticalEigenData:
    """Kernel pair of M0 = -M~(1, lam0) + i kappa0 I via SVD.

    Parameters
    ----------
    normalization : str
        ``"pairing"`` keeps ``v0`` at unit norm and rescales ``w0`` so that
        <v0, w0> = 1 (the convention entering the crossing-speed and
        curvature formulas).  ``"unit"`` keeps both vectors at unit norm.

    Raises
    ------
    ValueError
        If M0 is far from singular (no crossing at the supplied data) or the
        kernel pairing degenerates (non-semisimple eigenvalue).
    """
    M0 = -symbol_matrix_mode(model, 1, lam0) + 1j * kappa0 * np.eye(4)
    v0, w0, s_min, s_next = _kernel_pair(M0)
    scale = float(np.linalg.norm(M0))
    if s_min > 1e-8 * scale:
        raise ValueError(f"mode-1 matrix is not singular at these "
                         f"parameters (sigma_min={s_min:.3e})")
    pairing = complex(np.vdot(w0, v0))
    if abs(pairing) < 1e-8:
        raise ValueError("kernel pairing is degenerate; eigenvalue is not "
                         "semisimple")
    if normalization == "pairing":
        w0 = w0 / np.conj(pairing)
        pairing = complex(np.vdot(w0, v0))
    elif normalization != "unit":
        raise ValueError("normalization must be 'pairing' or 'unit'")
    eigs = np.linalg.eigvals(M0)
    eigs = eigs[np.argsort(eigs.real)]
    return CriticalEigenData(lam0=lam0, kappa0=kappa0, M0=M0, v0=v0, w0=w0,
                             pairing=pairing, eigenvalues=eigs,
                             sigma_min=s_min, sigma_gap=s_next)


def mass_zero_solve(B4: np.ndarray, f: np.ndarray,
                    rtol: float = 1e-9) -> np.ndarray:
    """Solve B4 x = f, selecting the mass-zero solution when B4 is singular.

    The exchange-type matrices appearing here (D A and its shifts) have
    (1,1,1,1) as a left null vector, so the singular system is consistent
    only for mass-zero right-hand sides; the solution is then pinned by
    requiring sum(x) = 0.  Implemented with the bordered system
    [[B4, b], [b^T, 0]] whose extra multiplier vanishes identically for
    consistent data.  Invertible matrices are solved directly.

    Raises
    ------
    ValueError
        If B4 is singular but f has nonzero component sum, or the bordered
        matrix is itself singular (kernel not transversal to mass zero).
    """
    B4 = np.asarray(B4)
    f = np.asarray(f)
    if B4.shape != (4, 4) or f.shape != (4,):
        raise ValueError("expected a 4x4 matrix and a 4-vector")
    sigma = np.linalg.svd(B4, compute_uv=False)
    fnorm = float(np.linalg.norm(f))
    if sigma[-1] > 1e-10 * max(sigma[0], 1.0):
        x = np.linalg.solve(B4, f)
    else:
        mass = complex(np.sum(f))
        if abs(mass) > rtol * max(fnorm, 1.0):
            raise ValueError(f"singular system is inconsistent: "
                             f"component sum of f is {mass:.3e}")
        dtype = np.result_type(B4.dtype, f.dtype, float)
        bordered = np.zeros((5, 5), dtype=dtype)
        bordered[:4, :4] = B4
        bordered[:4, 4] = MASS_VECTOR
        bordered[4, :4] = MASS_VECTOR
        rhs = np.zeros(5, dtype=dtype)
        rhs[:4] = f
        try:
            sol = np.linalg.solve(bordered, rhs)
        except np.linalg.LinAlgError as exc:
            raise ValueError("bordered system singular: kernel of B4 is "
                             "not transversal to the mass-zero plane") from exc
        x = sol[:4]
    res = float(np.linalg.norm(B4 @ x - f))
    if res > rtol * max(fnorm, float(np.linalg.norm(x)), 1.0):
        raise ValueError(f"solve residual {res:.3e} exceeds tolerance")
    return x


@dataclass(frozen=True)
class NonresonanceReport:
    """Distances from the higher-mode spectra to the resonant points.

    For each mode n with |n| > 1 the report records
    min_j |z_j(M~(n, lam0)) - i n kappa0|.  The n = 0 mode is handled
    separately: the only solution of D A v = c (1,1,1,1)^T with sum(v) = 0
    must be v = 0, c = 0, which holds iff ``zero_mode_det`` is nonzero.
    ``quadratic_floor`` is min over |n| >= 10 of distance / n^2; the
    distances must grow at that rate for the tail of modes to stay
    uniformly nonresonant.
    """

    n_max: int
    distances: Dict[int, float]
    min_distance: float
    argmin_n: int
    zero_mode_det: float
    quadratic_floor: float

    @property
    def passed(self) -> bool:
        return (self.min_distance > 1e-8
                and self.zero_mode_det > 1e-10
                and self.quadratic_floor > 0.0)


def nonresonance_report(model: Model, lam0: float, kappa0: float,
                        n_max: int = 64) -> NonresonanceReport:
    """Check that no higher mode resonates with the critical frequency."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    distances: Dict[int, float] = {}
    for n in range(-n_max, n_max + 1):
        if n in (-1, 0, 1):
            continue
        eigs = np.linalg.eigvals(symbol_matrix_mode(model, n, lam0))
        distances[n] = float(np.min(np.abs(eigs - 1j * n * kappa0)))
    argmin_n = min(distances, key=distances.get)
    bordered = np.zeros((5, 5))
    bordered[:4, :4] = model.DA
    bordered[:4, 4] = -MASS_VECTOR
    bordered[4, :4] = MASS_VECTOR
    det0 = float(abs(np.linalg.det(bordered)))
    tail = [distances[n] / n**2 for n in distances if abs(n) >= 10]
    floor = float(min(tail)) if tail else float("nan")
    return NonresonanceReport(n_max=n_max, distances=distances,
                              min_distance=float(distances[argmin_n]),
                              argmin_n=argmin_n, zero_mode_det=det0,
                              quadratic_floor=floor)


@dataclass(frozen=True)
class ResolventDecayReport:
    """Uniform bound on the shifted resolvents of the high modes.

    ``m0`` is the smallest integer such that for all |m| > m0 a Neumann
    series argument applies:

        |lam0| |U|_inf / (eps 2 pi |m|)
          + lam0^2 (|kappa0| + |D A|_inf) / (eps 4 pi^2 m^2)  <=  1/2,

    which yields |(-M~(m, lam0) + i kappa0)^{-1}|_inf <= 3 lam0^2 /
    (4 pi^2 eps m^2).  ``max_ratio`` is the largest verified quotient of the
    actual inf-norm over that bound for m0 < |m| <= m_max (must be <= 1).
    ``crossing_sigma_min`` records the smallest singular value at m = 1,
    which vanishes at the crossing (the resolvent does not exist there).
    """

    m0: int
    m_max: int
    max_ratio: float
    crossing_sigma_min: float

    @property
    def passed(self) -> bool:
        return self.max_ratio <= 1.0


def resolvent_decay_check(model: Model, lam0: float, kappa0: float,
                          m_max: Optional[int] = None) -> ResolventDecayReport:
    """Verify the quadratic decay of the shifted high-mode resolvents.

    ``m_max = None`` checks a window of 64 modes past the threshold m0
    (at least up to 200).  Small diffusion pushes m0 up like 1/eps, so a
    fixed window would miss it entirely.
    """
    eps = model.epsilon0
    norm_U = float(np.abs(model.U).sum(axis=1).max())
    norm_DA = float(np.abs(model.DA).sum(axis=1).max())
    lam2 = lam0 * lam0

    def neumann_bound(m: int) -> float:
        return (abs(lam0) * norm_U / (eps * 2.0 * np.pi * m)
                + lam2 * (abs(kappa0) + norm_DA) / (eps * 4.0 * np.pi**2 * m**2))

    # neumann_bound(m) <= 1/2 is the quadratic m^2 - 2 c1 m - 2 c2 >= 0
    c1 = abs(lam0) * norm_U / (eps * 2.0 * np.pi)
    c2 = lam2 * (abs(kappa0) + norm_DA) / (eps * 4.0 * np.pi**2)
    m0 = max(1, int(np.ceil(c1 + np.sqrt(c1 * c1 + 2.0 * c2))) - 1)
    while neumann_bound(m0 + 1) > 0.5:
        m0 += 1
    if m_max is None:
        m_max = max(200, m0 + 64)
    if m_max <= m0:
        raise ValueError(f"m_max must exceed m0 = {m0}")

    eye = np.eye(4)
    max_ratio = 0.0
    for m_abs in range(m0 + 1, m_max + 1):
        for m in (m_abs, -m_abs):
            mat = -symbol_matrix_mode(model, m, lam0) + 1j * kappa0 * eye
            inv = np.linalg.inv(mat)
            norm_inv = float(np.abs(inv).sum(axis=1).max())
            bound = 3.0 * lam2 / (4.0 * np.pi**2 * eps * m * m)
            max_ratio = max(max_ratio, norm_inv / bound)
    mat1 = -symbol_matrix_mode(model, 1, lam0) + 1j * kappa0 * eye
    sig1 = float(np.linalg.svd(mat1, compute_uv=False)[-1])
    return ResolventDecayReport(m0=m0, m_max=m_max, max_ratio=max_ratio,
                                crossing_sigma_min=sig1)


@dataclass(frozen=True)
class SemisimplicityReport:
    """Structure of the doubled critical eigenvalue (reflection case).

    At the crossing of the symmetric model the eigenvalue i mu0 of the
    mode-1 operator L_1 = eps0 k0^2 + i k0 U + D A is simple per mode but
    doubled overall, the reflection mapping the mode 1 kernel vector v0 to
    the mode -1 kernel vector P v0.  Nonzero ``pairing_abs`` (the kernel /
    adjoint-kernel pairing) certifies the absence of a Jordan block.
    """

    eigenvalue_gap: float        # min pairwise gap among eigenvalues of L_1
    kernel_sigma: float          # smallest singular value of L_1 - i mu0
    kernel_gap: float            # next singular value (1-d kernel per mode)
    pairing_abs: float           # |<v0_hat, w0_hat>|
    reflection_residual: float   # |(L_{-1} - i mu0) P v0|

    @property
    def passed(self) -> bool:
        return (self.eigenvalue_gap > 1e-6
                and self.kernel_sigma < 1e-10
                and self.kernel_gap > 1e-6
                and self.pairing_abs > 1e-3
                and self.reflection_residual < 1e-10)


def semisimplicity_check(model: Model, lam0: float,
                         kappa0: float) -> SemisimplicityReport:
    """Certify that the doubled crossing eigenvalue is semisimple."""
    from .model import P_SWAP

    mu0 = -kappa0
    L1 = -symbol_matrix_mode(model, 1, lam0)
    Lm1 = -symbol_matrix_mode(model, -1, lam0)
    eigs = np.linalg.eigvals(L1)
    gaps = [abs(a - b) for i, a in enumerate(eigs)
            for b in eigs[i + 1:]]
    v0, w0, s_min, s_next = _kernel_pair(L1 - 1j * mu0 * np.eye(4))
    pairing = abs(np.vdot(w0, v0))
    refl = float(np.linalg.norm((Lm1 - 1j * mu0 * np.eye(4)) @ (P_SWAP @ v0)))
    return SemisimplicityReport(eigenvalue_gap=float(min(gaps)),
                                kernel_sigma=s_min, kernel_gap=s_next,
                                pairing_abs=float(pairing),
                                reflection_residual=refl)
