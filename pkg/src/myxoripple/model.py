"""Model data for four-species transport-reaction systems on the unit circle.

The state y(t, x) in R^4 collects four agent densities on the periodic
interval x in [0, 1]: two species drift right (speeds 2 and 1) and two drift
left (speeds -2 and -1).  The governing equation is

    dy/dt = -(1/lam) U dy/dx - D A y + (eps / lam**2) d2y/dxx + Q(y)

where lam > 0 is the domain-length parameter, U is the diagonal velocity
matrix, D A is the linear exchange operator (D a cyclic difference matrix, A
an interaction matrix A0 + delta * M), eps > 0 a small diffusion, and Q a
quadratic collision term.  All dynamics preserve the total mass
sum_j integral y_j dx, and the models are posed on the mass-zero subspace.

Two named parameter sets are provided:

* ``"nonsymmetric"``: delta = 1, eps = 0.1, c = (1, 1, 1, 1), perturbation
  matrix without reflection symmetry.  Its primary instability is a single
  simple pair of imaginary eigenvalues.
* ``"symmetric"``: delta = eps = 0.001, c = (1, 0, 1, 0), perturbation matrix
  compatible with the reflection x -> 1 - x.  Its primary instability is a
  doubled (two-fold semisimple) pair.

The reflection operator W acts by (W y)(x) = P y(1 - x) with P the
permutation that swaps right- and left-movers.  When the interaction matrix
and the collision coefficients are reflection compatible, W commutes with the
full right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "D_MATRIX",
    "U_MATRIX",
    "A0_MATRIX",
    "M_NONSYMMETRIC",
    "M_SYMMETRIC",
    "P_SWAP",
    "MASS_VECTOR",
    "Model",
    "build_model",
    "eval_Q",
    "eval_DQ",
    "eval_G2",
    "MassStructureReport",
    "check_mass_structure",
    "ReflectionReport",
    "check_reflection",
    "apply_W",
]


def _frozen(a) -> np.ndarray:
    """Return a read-only float array copy."""
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


#: Cyclic difference matrix of the exchange operator D A.
D_MATRIX = _frozen([
    [1.0, 0.0, 0.0, -1.0],
    [-1.0, 1.0, 0.0, 0.0],
    [0.0, -1.0, 1.0, 0.0],
    [0.0, 0.0, -1.0, 1.0],
])

#: Diagonal drift velocities (two right-movers, two left-movers).
U_MATRIX = _frozen(np.diag([2.0, 1.0, -2.0, -1.0]))

#: Base interaction matrix.
A0_MATRIX = _frozen([
    [0.0, -1.0, 0.0, 0.0],
    [0.0, -0.5, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 0.0, -0.5],
])

#: Perturbation matrix of the nonsymmetric model (breaks reflection symmetry).
M_NONSYMMETRIC = _frozen([
    [0.0, 1.0, 1.0, 0.0],
    [0.0, 0.5, 0.0, 0.0],
    [1.0, 0.0, 0.0, 2.0],
    [0.0, 0.0, 0.0, -0.5],
])

#: Perturbation matrix of the symmetric model (reflection compatible).
M_SYMMETRIC = _frozen([
    [1.0, 0.0, 1.1, 1.0],
    [0.0, 0.0, 0.0, 0.0],
    [1.1, 1.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
])

#: Permutation swapping right- and left-moving species (1<->3, 2<->4).
P_SWAP = _frozen([
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
])

#: Left null vector of D A; mass is measured against this vector.
MASS_VECTOR = _frozen([1.0, 1.0, 1.0, 1.0])

_DEFAULTS = {
    "nonsymmetric": dict(delta=1.0, epsilon0=0.1, c=(1.0, 1.0, 1.0, 1.0),
                         M=M_NONSYMMETRIC),
    "symmetric": dict(delta=0.001, epsilon0=0.001, c=(1.0, 0.0, 1.0, 0.0),
                      M=M_SYMMETRIC),
}


@dataclass(frozen=True)
class Model:
    """Immutable bundle of matrices and coefficients defining one model.

    Attributes
    ----------
    kind : str
        ``"nonsymmetric"`` or ``"symmetric"``.
    delta : float
        Strength of the perturbation matrix M in A = A0 + delta * M.
    epsilon0 : float
        Reference diffusion coefficient.
    c : tuple of float
        Collision coefficients (c1, c2, c3, c4) of the quadratic term.
    D, U, A0, M : ndarray
        The defining 4x4 matrices (read-only copies).
    A, DA : ndarray
        Derived matrices A = A0 + delta * M and D @ A.
    """

    kind: str
    delta: float
    epsilon0: float
    c: tuple
    D: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    A0: np.ndarray = field(repr=False)
    M: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    DA: np.ndarray = field(repr=False)


def build_model(kind: str = "nonsymmetric",
                *,
                delta: Optional[float] = None,
                epsilon0: Optional[float] = None,
                c: Optional[Sequence[float]] = None,
                D: Optional[np.ndarray] = None,
                U: Optional[np.ndarray] = None,
                A0: Optional[np.ndarray] = None,
                M: Optional[np.ndarray] = None) -> Model:
    """Construct a :class:`Model`, filling unspecified entries with defaults.

    Parameters
    ----------
    kind : str
        ``"nonsymmetric"`` or ``"symmetric"``; selects the default
        perturbation matrix and coefficient set.
    delta, epsilon0, c :
        Override the scalar parameters of the chosen kind.
    D, U, A0, M : array_like, optional
        Override individual matrices (mainly for degenerate test cases).

    Raises
    ------
    ValueError
        For unknown kinds, non-finite parameters, nonpositive diffusion, or
        badly shaped matrix overrides.
    """
    if kind not in _DEFAULTS:
        raise ValueError(f"unknown model kind {kind!r}; "
                         f"expected one of {sorted(_DEFAULTS)}")
    base = _DEFAULTS[kind]
    delta = base["delta"] if delta is None else float(delta)
    epsilon0 = base["epsilon0"] if epsilon0 is None else float(epsilon0)
    c = base["c"] if c is None else tuple(float(ci) for ci in c)
    if not np.isfinite(delta):
        raise ValueError("delta must be finite")
    if not (np.isfinite(epsilon0) and epsilon0 > 0.0):
        raise ValueError("epsilon0 must be positive and finite")
    if len(c) != 4 or not all(np.isfinite(ci) for ci in c):
        raise ValueError("c must contain four finite coefficients")

    mats = {}
    for name, override, default in (("D", D, D_MATRIX), ("U", U, U_MATRIX),
                                    ("A0", A0, A0_MATRIX), ("M", M, base["M"])):
        arr = _frozen(default if override is None else override)
        if arr.shape != (4, 4):
            raise ValueError(f"{name} must be a 4x4 matrix")
        mats[name] = arr

    A = _frozen(mats["A0"] + delta * mats["M"])
    DA = _frozen(mats["D"] @ A)
    return Model(kind=kind, delta=delta, epsilon0=epsilon0, c=c,
                 D=mats["D"], U=mats["U"], A0=mats["A0"], M=mats["M"],
                 A=A, DA=DA)


def eval_Q(y: np.ndarray, c: Sequence[float]) -> np.ndarray:
    """Quadratic collision term.

    Q(y) = (c4 y4^2 - c1 y1^2,
            c1 y1^2 - c2 y2^2,
            c2 y2^2 - c3 y3^2,
            c3 y3^2 - c4 y4^2)

    The species axis is the first one, so ``y`` may be a single 4-vector or a
    (4, ...) array of grid values.  The component sum vanishes identically.
    """
    y = np.asarray(y)
    c1, c2, c3, c4 = c
    t1 = c1 * y[0] * y[0]
    t2 = c2 * y[1] * y[1]
    t3 = c3 * y[2] * y[2]
    t4 = c4 * y[3] * y[3]
    return np.stack([t4 - t1, t1 - t2, t2 - t3, t3 - t4])


def eval_DQ(y: np.ndarray, c: Sequence[float]) -> np.ndarray:
    """Jacobian of :func:`eval_Q` at a single state vector ``y``."""
    y = np.asarray(y)
    if y.shape != (4,):
        raise ValueError("eval_DQ expects a single 4-vector")
    c1, c2, c3, c4 = c
    d1 = 2.0 * c1 * y[0]
    d2 = 2.0 * c2 * y[1]
    d3 = 2.0 * c3 * y[2]
    d4 = 2.0 * c4 * y[3]
    zero = np.zeros_like(d1)
    return np.array([
        [-d1, zero, zero, d4],
        [d1, -d2, zero, zero],
        [zero, d2, -d3, zero],
        [zero, zero, d3, -d4],
    ])


def eval_G2(u: np.ndarray, v: np.ndarray, c: Sequence[float]) -> np.ndarray:
    """Symmetric bilinear (polar) form of Q.

    G2(u, v) = (Q(u + v) - Q(u) - Q(v)) / 2, evaluated directly as

        (c4 u4 v4 - c1 u1 v1,
         c1 u1 v1 - c2 u2 v2,
         c2 u2 v2 - c3 u3 v3,
         c3 u3 v3 - c4 u4 v4).

    Bilinear without conjugation, so complex mode amplitudes may be passed.
    G2(y, y) equals Q(y) and the component sum vanishes identically.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    c1, c2, c3, c4 = c
    p1 = c1 * u[0] * v[0]
    p2 = c2 * u[1] * v[1]
    p3 = c3 * u[2] * v[2]
    p4 = c4 * u[3] * v[3]
    return np.stack([p4 - p1, p1 - p2, p2 - p3, p3 - p4])


@dataclass(frozen=True)
class MassStructureReport:
    """Residuals of the algebraic identities behind mass conservation."""

    residual_left_null: float    # max |(1,1,1,1) D A|
    residual_det: float          # |det(D A)|
    residual_Q_sum: float        # max |sum_j Q_j(y)| over random samples
    n_samples: int

    @property
    def ok(self) -> bool:
        return (self.residual_left_null < 1e-12
                and self.residual_det < 1e-12
                and self.residual_Q_sum < 1e-12)


def check_mass_structure(model: Model, n_samples: int = 64,
                         seed: int = 0) -> MassStructureReport:
    """Verify the structure that makes total mass a conserved quantity.

    Checks that (1,1,1,1) is a left null vector of D A (hence det D A = 0)
    and that the components of Q sum to zero on random states.
    """
    res_null = float(np.max(np.abs(MASS_VECTOR @ model.DA)))
    res_det = float(abs(np.linalg.det(model.DA)))
    rng = np.random.default_rng(seed)
    ys = rng.standard_normal((4, n_samples)) * 3.0
    res_q = float(np.max(np.abs(eval_Q(ys, model.c).sum(axis=0))))
    return MassStructureReport(residual_left_null=res_null,
                               residual_det=res_det,
                               residual_Q_sum=res_q,
                               n_samples=n_samples)


@dataclass(frozen=True)
class ReflectionReport:
    """Residuals of the reflection-compatibility conditions.

    ``residual_A`` measures P A P - A (eight scalar conditions on the
    interaction matrix), ``residual_c`` measures c1 - c3 and c2 - c4, and
    ``residual_U``/``residual_DA`` record the induced operator identities
    P U P + U and P (D A) P - D A.  When all conditions hold,
    ``functional_residual`` reports max |W F(W y) - F(y)| for the full
    right-hand side F applied to random band-limited states.
    """

    residual_A: float
    residual_c: float
    residual_U: float
    residual_DA: float
    conditions_met: bool
    functional_residual: Optional[float]

    @property
    def ok(self) -> bool:
        if not self.conditions_met:
            return False
        return (self.functional_residual is None
                or self.functional_residual < 1e-10)


def check_reflection(model: Model, lam: float = 1.5, n_samples: int = 4,
                     seed: int = 1) -> ReflectionReport:
    """Test whether the reflection W commutes with the dynamics.

    The matrix conditions P A P = A (with P U P = -U, automatic for the
    drift term) and c1 = c3, c2 = c4 are checked first.  If they hold, the
    commutation W F W = F is additionally verified on random band-limited
    grid functions, evaluating F pseudo-spectrally with a dealiased grid.
    """
    P = P_SWAP
    res_A = float(np.max(np.abs(P @ model.A @ P - model.A)))
    res_U = float(np.max(np.abs(P @ model.U @ P + model.U)))
    res_DA = float(np.max(np.abs(P @ model.DA @ P - model.DA)))
    c1, c2, c3, c4 = model.c
    res_c = float(max(abs(c1 - c3), abs(c2 - c4)))
    met = max(res_A, res_U, res_DA, res_c) < 1e-12

    functional = None
    if met:
        n_band = 8
        grid = 4 * n_band  # > 3*n_band, so the quadratic term is alias-free
        rng = np.random.default_rng(seed)
        worst = 0.0
        eps = model.epsilon0
        for _ in range(n_samples):
            modes = np.zeros((4, grid), dtype=complex)
            raw = (rng.standard_normal((4, n_band))
                   + 1j * rng.standard_normal((4, n_band)))
            for n in range(1, n_band + 1):
                modes[:, n] = raw[:, n - 1]
                modes[:, -n] = np.conj(raw[:, n - 1])

            def rhs(m):
                k = 2.0 * np.pi * np.fft.fftfreq(grid, d=1.0 / grid) / lam
                lin = ((-1j * k)[None, :] * (model.U @ m)
                       - model.DA @ m
                       - eps * (k**2)[None, :] * m)
                y = np.fft.ifft(m, axis=1) * grid
                qhat = np.fft.fft(eval_Q(y.real, model.c), axis=1) / grid
                return lin + qhat

            def reflect(m):
                idx = (-np.arange(grid)) % grid
                return P @ m[:, idx]

            diff = reflect(rhs(reflect(modes))) - rhs(modes)
            worst = max(worst, float(np.max(np.abs(diff))))
        functional = worst

    return ReflectionReport(residual_A=res_A, residual_c=res_c,
                            residual_U=res_U, residual_DA=res_DA,
                            conditions_met=met,
                            functional_residual=functional)


def apply_W(y: np.ndarray, representation: str = "grid") -> np.ndarray:
    """Apply the reflection operator (W y)(x) = P y(1 - x).

    Parameters
    ----------
    y : ndarray
        Shape (4, G).  For ``representation="grid"`` the columns are values
        at x_j = j / G; for ``"modes"`` they are Fourier coefficients in FFT
        frequency order.  In mode space W sends mode n to mode -n with P
        applied componentwise (integer modes pick up no phase).
    """
    y = np.asarray(y)
    if y.ndim != 2 or y.shape[0] != 4:
        raise ValueError("expected an array of shape (4, G)")
    G = y.shape[1]
    idx = (-np.arange(G)) % G
    if representation not in ("grid", "modes"):
        raise ValueError("representation must be 'grid' or 'modes'")
    # On the uniform grid, x -> 1 - x is the index map j -> (G - j) mod G,
    # which is the same reversal that negates FFT frequencies.
    return P_SWAP @ y[:, idx]
