"""Hopf verification for the doubled eigenvalue of the reflection model.

At the crossing of the symmetric model the eigenvalue i mu0 of the mode-1
operator

    L_n = eps0 n^2 k0^2 I + i n k0 U + D A,        k0 = 2 pi / lam0,

is doubled: the reflection W maps the mode 1 kernel vector v0 to the mode -1
kernel vector P v0.  The reduced bifurcation equations live on the
two-complex-dimensional kernel, parameterized by amplitudes (h1, h2) of the
two kernel directions, and read (after rescaling time and amplitude)

    -i h_l + rho a h_l = E_l(h1, h2, conj h1, conj h2),     l = 1, 2,

with a the linear coefficient, rho the reduced parameter, and E_l a cubic
whose coefficients aggregate the third-order interaction tensor a^l_{ijk}.
This module computes all of these, solves the real root system (gauge
Im h2 = 0), and evaluates the determinant certifying that reduced roots
persist as solutions of the full system.

Normalization: with s = <v0_hat, w0_hat> the pairing of the unit kernel and
adjoint-kernel vectors, the kernel vector is scaled to v0 = v0_hat / (2 pi s)
and the dual w0 = w0_hat is kept at unit norm, so that <v0, w0> = 1/(2 pi).
Every tensor entry is twice linear and once antilinear in the kernel vector,
so this convention is invariant under the arbitrary phases of the
numerically computed vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.optimize import fsolve

from .model import Model, P_SWAP, eval_G2
from .spectral import _kernel_pair, mass_zero_solve

__all__ = [
    "ResonanceError",
    "KernelBases",
    "kernel_bases",
    "linear_coefficient_a",
    "resolvent_apply",
    "MONOMIALS",
    "ZERO_MONOMIALS",
    "TensorResult",
    "third_order_tensor",
    "RealSystem",
    "assemble_real_system",
    "reference_real_system",
    "BranchRoot",
    "BranchSolution",
    "solve_branch",
    "DeterminantResult",
    "existence_determinant",
    "MultipleHopfReport",
    "verify_hopf_multiple",
]


class ResonanceError(RuntimeError):
    """A mode solve hit a (near-)singular operator."""


def _csum(parts) -> complex:
    """Compensated complex summation of a list of terms."""
    parts = list(parts)
    return complex(math.fsum(p.real for p in parts),
                   math.fsum(p.imag for p in parts))


def _mode_operator(model: Model, k0: float, n: int) -> np.ndarray:
    return ((model.epsilon0 * n * n * k0 * k0) * np.eye(4)
            + (1j * n * k0) * model.U + model.DA)


@dataclass(frozen=True)
class KernelBases:
    """Kernel data of the doubled eigenvalue i mu0.

    ``v0`` spans the mode 1 kernel of (L_1 - i mu0), scaled so that
    <v0, w0> = 1 / (2 pi) against the unit adjoint vector ``w0``; the mode
    -1 pair is (P v0, P w0).  ``s`` is the unit-vector pairing used in the
    scaling.  Pairings across different modes vanish identically (the
    underlying functions are orthogonal Fourier modes), which is what makes
    the mode bookkeeping in the interaction tensor exact.
    """

    lam0: float
    kappa0: float
    k0: float
    mu0: float
    v0: np.ndarray
    w0: np.ndarray
    Pv0: np.ndarray = field(repr=False)
    Pw0: np.ndarray = field(repr=False)
    s: complex
    sigma_min: float

    def phi(self, i: int) -> Tuple[int, np.ndarray]:
        """Kernel basis element i in (1, 2) as a (mode, vector) pair."""
        if i == 1:
            return (1, self.v0)
        if i == 2:
            return (-1, self.Pv0)
        raise ValueError("kernel index must be 1 or 2")

    def dual(self, l: int) -> Tuple[int, np.ndarray]:
        """Dual basis element l in (1, 2) as a (mode, vector) pair."""
        if l == 1:
            return (1, self.w0)
        if l == 2:
            return (-1, self.Pw0)
        raise ValueError("dual index must be 1 or 2")

    @property
    def pairing(self) -> complex:
        return complex(np.vdot(self.w0, self.v0))


def kernel_bases(model: Model, lam0: float, kappa0: float) -> KernelBases:
    """Kernel and adjoint-kernel bases of the doubled crossing eigenvalue.

    Raises
    ------
    ValueError
        If kappa0 is not negative (the convention mu0 = -kappa0 > 0 is
        assumed throughout), the mode-1 operator is not singular at i mu0,
        or the kernel pairing degenerates.
    """
    if kappa0 >= 0:
        raise ValueError("expected the crossing branch with kappa0 < 0")
    k0 = 2.0 * np.pi / lam0
    mu0 = -kappa0
    L1 = _mode_operator(model, k0, 1)
    v_hat, w_hat, s_min, _ = _kernel_pair(L1 - 1j * mu0 * np.eye(4))
    if s_min > 1e-8 * float(np.linalg.norm(L1)):
        raise ValueError(f"mode-1 operator not singular at i mu0 "
                         f"(sigma_min={s_min:.3e})")
    s = complex(np.vdot(w_hat, v_hat))
    if abs(s) < 1e-8:
        raise ValueError("kernel pairing degenerates; eigenvalue not "
                         "semisimple")
    v0 = v_hat / (2.0 * np.pi * s)
    w0 = w_hat
    return KernelBases(lam0=lam0, kappa0=kappa0, k0=k0, mu0=mu0,
                       v0=v0, w0=w0, Pv0=P_SWAP @ v0, Pw0=P_SWAP @ w0,
                       s=s, sigma_min=s_min)


def linear_coefficient_a(model: Model, bases: KernelBases) -> complex:
    """Linear coefficient a = -i k0^2 <U v0, w0> of the reduced equations.

    The same coefficient governs both kernel directions: the mode -1 value
    +i k0^2 <U P v0, P w0> equals a exactly because U anticommutes with the
    reflection permutation.  Both are computed and their agreement enforced.
    """
    k0 = bases.k0
    a1 = -1j * k0 * k0 * complex(np.vdot(bases.w0, model.U @ bases.v0))
    a2 = 1j * k0 * k0 * complex(np.vdot(bases.Pw0, model.U @ bases.Pv0))
    if abs(a1 - a2) > 1e-12 * max(abs(a1), 1e-30):
        raise ResonanceError(f"reflection symmetry violated in linear "
                             f"coefficient: {a1} vs {a2}")
    return a1


def resolvent_apply(model: Model, lam0: float, n: int, shift: complex,
                    f: np.ndarray) -> np.ndarray:
    """Solve (L_n - shift) x = f for one Fourier mode.

    For n = 0 with zero shift the operator is D A, singular with left null
    vector (1,1,1,1); the mass-zero solution is returned (the right-hand
    sides arising from the collision term always have zero component sum).
    All other combinations occurring in the tensor are invertible by
    nonresonance.

    Raises
    ------
    ResonanceError
        If the shifted operator is close to singular.
    """
    k0 = 2.0 * np.pi / lam0
    f = np.asarray(f, dtype=complex)
    if n == 0 and shift == 0:
        return mass_zero_solve(model.DA.astype(complex), f)
    mat = _mode_operator(model, k0, n) - shift * np.eye(4)
    sigma = np.linalg.svd(mat, compute_uv=False)
    if sigma[-1] < 1e-10 * sigma[0]:
        raise ResonanceError(f"mode {n} operator with shift {shift} is "
                             f"singular (sigma_min={sigma[-1]:.3e})")
    x = np.linalg.solve(mat, f)
    res = float(np.linalg.norm(mat @ x - f))
    if res > 1e-10 * max(1.0, float(np.linalg.norm(f))):
        raise ResonanceError(f"mode {n} solve residual {res:.3e}")
    return x


#: Cubic monomials appearing in the reduced equations, in display order.
MONOMIALS = ("h1h1_hb1", "h1h2_hb1", "h1h2_hb2", "h2h2_hb2")

#: Monomials whose total Fourier mode cannot match the dual mode; their
#: aggregated coefficients vanish identically and are kept only for audit.
ZERO_MONOMIALS = ("h1h1_hb2", "h2h2_hb1")


@dataclass(frozen=True)
class TensorResult:
    """Raw third-order tensor and its aggregation into cubic coefficients.

    ``entries[(l, i, j, k)]`` is the coefficient a^l_{ijk} multiplying the
    monomial h_i h_j conj(h_k) in reduced component l.  ``monomials[l]``
    aggregates entries over each distinct monomial.  Coefficients of the
    mode-incompatible monomials in ``ZERO_MONOMIALS`` are exact zeros by
    Fourier orthogonality and are reported for auditing.
    """

    entries: Dict[Tuple[int, int, int, int], complex]
    monomials: Dict[int, Dict[str, complex]]

    def coefficient_vector(self, l: int) -> np.ndarray:
        """The four cubic coefficients of component l in display order."""
        return np.array([self.monomials[l][name] for name in MONOMIALS])

    def rows(self):
        """Rows (l, i, j, k, re, im) of the raw tensor for tabular output."""
        for (l, i, j, k), val in sorted(self.entries.items()):
            yield (l, i, j, k, val.real, val.imag)


def third_order_tensor(model: Model, bases: KernelBases) -> TensorResult:
    """Third-order interaction tensor of the reduced equations.

    Each entry combines two quadratic interactions through one intermediate
    mode solve:

        a^l_{ijk} = 4 pi (G2(L_{mj-mk}^{-1} G2(phi_j, conj phi_k), phi_i),
                          phi_l*)
                  + 2 pi (G2((L_{mj+mi} - 2 i kappa0)^{-1} G2(phi_j, phi_i),
                          conj phi_k), phi_l*)

    where m denotes the Fourier mode carried by each kernel direction.  The
    first solve hits mode 0 when j = k and is then the mass-zero inverse of
    D A; the second carries the doubled frequency shift 2 i kappa0.  A
    pairing against phi_l* contributes only when the Fourier modes agree;
    cross-mode pairings are exactly zero and never accumulated.
    """
    c = model.c
    shift2 = 2j * bases.kappa0
    entries: Dict[Tuple[int, int, int, int], complex] = {}
    for l in (1, 2):
        dual_mode, dual_vec = bases.dual(l)
        for i in (1, 2):
            mi, vi = bases.phi(i)
            for j in (1, 2):
                mj, vj = bases.phi(j)
                for k in (1, 2):
                    mk, vk = bases.phi(k)
                    parts = []
                    n1 = mj - mk
                    if n1 + mi == dual_mode:
                        g1 = resolvent_apply(model, bases.lam0, n1, 0.0,
                                             eval_G2(vj, np.conj(vk), c))
                        out1 = eval_G2(g1, vi, c)
                        parts.append(4.0 * np.pi * np.vdot(dual_vec, out1))
                    n2 = mj + mi
                    if n2 - mk == dual_mode:
                        g2 = resolvent_apply(model, bases.lam0, n2, shift2,
                                             eval_G2(vj, vi, c))
                        out2 = eval_G2(g2, np.conj(vk), c)
                        parts.append(2.0 * np.pi * np.vdot(dual_vec, out2))
                    entries[(l, i, j, k)] = _csum(parts) if parts else 0j

    def agg(l: int) -> Dict[str, complex]:
        e = entries
        return {
            "h1h1_hb1": e[(l, 1, 1, 1)],
            "h1h2_hb1": _csum([e[(l, 1, 2, 1)], e[(l, 2, 1, 1)]]),
            "h1h2_hb2": _csum([e[(l, 1, 2, 2)], e[(l, 2, 1, 2)]]),
            "h2h2_hb2": e[(l, 2, 2, 2)],
            "h1h1_hb2": e[(l, 1, 1, 2)],
            "h2h2_hb1": e[(l, 2, 2, 1)],
        }

    return TensorResult(entries=entries, monomials={1: agg(1), 2: agg(2)})


@dataclass(frozen=True)
class RealSystem:
    """The reduced bifurcation equations in real coordinates.

    State vector v = (x1, y1, x2, y2) for h1 = x1 + i y1, h2 = x2 + i y2;
    the gauge y2 = 0 removes the rotational degeneracy, leaving unknowns
    (x1, y1, x2, rho).  ``coeffs[l - 1]`` holds the four cubic coefficients
    of component l in the order ``MONOMIALS``; the cubic fields are
    E_l = 2 sum_m C^l_m mono_m.  The reflection symmetry makes coeffs[1]
    the reversal of coeffs[0].

    Two conventions for the real linear blocks are kept: the full rotation
    blocks (``p0b_full``, ``upsilon_full``) and the reduced variant
    (``p0b_reported``, ``upsilon_reported``) that drops the columns and
    entries multiplying the imaginary parts y1, y2.  Both act identically
    on vectors with y1 = y2 = 0.
    """

    a: complex
    coeffs: np.ndarray   # shape (2, 4) complex

    def _monos(self, h1: complex, h2: complex) -> np.ndarray:
        hb1, hb2 = np.conj(h1), np.conj(h2)
        return np.array([h1 * h1 * hb1, h1 * h2 * hb1,
                         h1 * h2 * hb2, h2 * h2 * hb2])

    def e_complex(self, h1: complex, h2: complex) -> Tuple[complex, complex]:
        """Cubic fields (E1, E2) at complex amplitudes."""
        monos = self._monos(h1, h2)
        return (2.0 * complex(self.coeffs[0] @ monos),
                2.0 * complex(self.coeffs[1] @ monos))

    def residual(self, x1: float, y1: float, x2: float,
                 rho: float) -> np.ndarray:
        """Real residual of -i h_l + rho a h_l = E_l with gauge y2 = 0."""
        h1 = x1 + 1j * y1
        h2 = x2 + 0j
        e1, e2 = self.e_complex(h1, h2)
        r1 = (-1j + rho * self.a) * h1 - e1
        r2 = (-1j + rho * self.a) * h2 - e2
        return np.array([r1.real, r1.imag, r2.real, r2.imag])

    def e_real(self, v: np.ndarray) -> np.ndarray:
        """(Re E1, Im E1, Re E2, Im E2) at v = (x1, y1, x2) with y2 = 0."""
        e1, e2 = self.e_complex(v[0] + 1j * v[1], v[2] + 0j)
        return np.array([e1.real, e1.imag, e2.real, e2.imag])

    def e_jacobian(self, v: np.ndarray) -> np.ndarray:
        """Analytic 4x3 Jacobian of :meth:`e_real` at v = (x1, y1, x2).

        Built from the Wirtinger derivatives of the cubic monomials:
        d/dx1 = d/dh1 + d/dhb1, d/dy1 = i (d/dh1 - d/dhb1), and
        d/dx2 = d/dh2 + d/dhb2 with y2 frozen at zero.
        """
        h1 = v[0] + 1j * v[1]
        h2 = v[2] + 0j
        hb1, hb2 = np.conj(h1), np.conj(h2)
        # rows: Wirtinger derivative of each monomial in MONOMIALS order
        d_dh1 = np.array([2 * h1 * hb1, h2 * hb1, h2 * hb2, 0.0])
        d_dhb1 = np.array([h1 * h1, h1 * h2, 0.0, 0.0])
        d_dh2 = np.array([0.0, h1 * hb1, h1 * hb2, 2 * h2 * hb2])
        d_dhb2 = np.array([0.0, 0.0, h1 * h2, h2 * h2])
        jac = np.zeros((4, 3))
        for l in (1, 2):
            cs = self.coeffs[l - 1]
            de_dh1 = 2.0 * complex(cs @ d_dh1)
            de_dhb1 = 2.0 * complex(cs @ d_dhb1)
            de_dh2 = 2.0 * complex(cs @ d_dh2)
            de_dhb2 = 2.0 * complex(cs @ d_dhb2)
            cols = (de_dh1 + de_dhb1,
                    1j * (de_dh1 - de_dhb1),
                    de_dh2 + de_dhb2)
            row = 2 * (l - 1)
            for col, d in enumerate(cols):
                jac[row, col] = d.real
                jac[row + 1, col] = d.imag
        return jac

    @property
    def p0b_full(self) -> np.ndarray:
        """Linear block diag(rotation by a) acting on (x1, y1, x2, y2)."""
        re_a, im_a = self.a.real, self.a.imag
        blk = np.array([[re_a, -im_a], [im_a, re_a]])
        out = np.zeros((4, 4))
        out[:2, :2] = blk
        out[2:, 2:] = blk
        return out

    @property
    def p0b_reported(self) -> np.ndarray:
        """Linear block with the imaginary-part columns dropped."""
        out = self.p0b_full
        out[:, 1] = 0.0
        out[:, 3] = 0.0
        return out

    @property
    def upsilon_full(self) -> np.ndarray:
        """Multiplication by -i as a real 4x4 block matrix."""
        blk = np.array([[0.0, 1.0], [-1.0, 0.0]])
        out = np.zeros((4, 4))
        out[:2, :2] = blk
        out[2:, 2:] = blk
        return out

    @property
    def upsilon_reported(self) -> np.ndarray:
        """Multiplication block with the y-row couplings dropped."""
        out = self.upsilon_full
        out[0, 1] = 0.0
        out[2, 3] = 0.0
        return out


def assemble_real_system(a: complex, tensor: TensorResult) -> RealSystem:
    """Bundle the linear coefficient and cubic coefficients for root solving."""
    coeffs = np.vstack([tensor.coefficient_vector(1),
                        tensor.coefficient_vector(2)])
    return RealSystem(a=complex(a), coeffs=coeffs)


def reference_real_system(a: complex, coeffs1, coeffs2=None) -> RealSystem:
    """Real system from externally supplied cubic coefficients.

    ``coeffs1`` are the four component-1 coefficients in ``MONOMIALS``
    order; component 2 defaults to the mirrored (reversed) copy required by
    the reflection symmetry.
    """
    c1 = np.asarray(coeffs1, dtype=complex)
    c2 = c1[::-1] if coeffs2 is None else np.asarray(coeffs2, dtype=complex)
    if c1.shape != (4,) or c2.shape != (4,):
        raise ValueError("expected four cubic coefficients per component")
    return RealSystem(a=complex(a), coeffs=np.vstack([c1, c2]))


@dataclass(frozen=True)
class BranchRoot:
    """One nontrivial root of the reduced equations (gauge y2 = 0)."""

    x1: float
    y1: float
    x2: float
    rho: float
    residual: float

    @property
    def amplitudes(self) -> Tuple[complex, complex]:
        return (self.x1 + 1j * self.y1, self.x2 + 0j)

    @property
    def symmetric(self) -> bool:
        """Equal real amplitudes in both kernel directions."""
        scale = max(abs(self.x1), abs(self.x2), 1e-30)
        return (abs(self.x1 - self.x2) < 1e-6 * scale
                and abs(self.y1) < 1e-6 * scale)

    @property
    def profile(self) -> str:
        h1, h2 = self.amplitudes
        scale = max(abs(h1), abs(h2))
        if self.symmetric:
            return "two_mode_symmetric"
        if min(abs(h1), abs(h2)) < 1e-6 * scale:
            return "single_mode"
        return "asymmetric"


@dataclass(frozen=True)
class BranchSolution:
    """All nontrivial roots found by the multi-start Newton search."""

    roots: Tuple[BranchRoot, ...]
    symmetric_found: bool

    @property
    def selected(self) -> Optional[BranchRoot]:
        """The symmetric root if one exists, else the largest-amplitude root."""
        if not self.roots:
            return None
        sym = [r for r in self.roots if r.symmetric]
        pool = sym if sym else list(self.roots)
        return max(pool, key=lambda r: max(abs(r.x1), abs(r.x2)))


def solve_branch(system: RealSystem,
                 x_starts=(-0.2, -0.1, -0.05, -0.02, 0.02, 0.05, 0.1, 0.2),
                 y_starts=(-0.05, 0.0, 0.05),
                 rho_starts=(-30.0, -10.0, -1.0, 1.0, 10.0, 30.0),
                 residual_tol: float = 1e-12) -> BranchSolution:
    """Multi-start Newton search for nontrivial roots.

    Every combination of the start grids is polished with
    ``scipy.optimize.fsolve``; converged roots with residual below
    ``residual_tol`` are kept, trivial roots (all amplitudes ~ 0) dropped,
    and the sign degeneracy (h -> -h is always a root) removed by
    normalizing the first significant coordinate to be positive.
    """
    func = lambda v: system.residual(*v)
    seen = []
    for x1 in x_starts:
        for x2 in x_starts:
            for y1 in y_starts:
                for rho in rho_starts:
                    sol, _, ier, _ = fsolve(func, (x1, y1, x2, rho),
                                            full_output=True, xtol=1e-13)
                    if ier != 1:
                        continue
                    res = float(np.linalg.norm(system.residual(*sol)))
                    if res > residual_tol:
                        continue
                    v = sol.copy()
                    amp = float(np.linalg.norm(v[:3]))
                    if amp < 1e-5:
                        continue  # converged back to the trivial solution
                    lead = next((comp for comp in v[:3]
                                 if abs(comp) > 1e-8 * amp), 0.0)
                    if lead < 0:
                        v[:3] = -v[:3]
                    if not any(np.allclose(v, u, rtol=0, atol=1e-7)
                               for u in seen):
                        seen.append(v)
    roots = tuple(sorted(
        (BranchRoot(x1=float(v[0]), y1=float(v[1]), x2=float(v[2]),
                    rho=float(v[3]),
                    residual=float(np.linalg.norm(system.residual(*v))))
         for v in seen),
        key=lambda r: (-max(abs(r.x1), abs(r.x2)), r.rho, r.x1)))
    return BranchSolution(roots=roots,
                          symmetric_found=any(r.symmetric for r in roots))


@dataclass(frozen=True)
class DeterminantResult:
    """Determinant certifying persistence of a reduced root.

    The 4x4 matrix is [P0B v0 | Upsilon_hat - D E(v0)] where v0 is the root
    in real coordinates (x1, y1, x2, 0), the hat drops the gauge-fixed y2
    column, and D E is the analytic Jacobian of the cubic fields.
    ``value_reported`` uses the reduced linear blocks, ``value_full`` the
    complete rotation blocks; the first columns coincide whenever y1 = 0 at
    the root.
    """

    value_reported: float
    value_full: float
    matrix_reported: np.ndarray
    matrix_full: np.ndarray


def existence_determinant(system: RealSystem,
                          root: BranchRoot) -> DeterminantResult:
    """Evaluate the root-persistence determinant in both block conventions."""
    v3 = np.array([root.x1, root.y1, root.x2])
    v4 = np.array([root.x1, root.y1, root.x2, 0.0])
    jac = system.e_jacobian(v3)
    mats = {}
    for name, p0b, ups in (("reported", system.p0b_reported,
                            system.upsilon_reported),
                           ("full", system.p0b_full, system.upsilon_full)):
        col = p0b @ v4
        mats[name] = np.column_stack([col, ups[:, :3] - jac])
    return DeterminantResult(
        value_reported=float(np.linalg.det(mats["reported"])),
        value_full=float(np.linalg.det(mats["full"])),
        matrix_reported=mats["reported"],
        matrix_full=mats["full"])


@dataclass(frozen=True)
class MultipleHopfReport:
    """End-to-end result of the doubled-eigenvalue analysis."""

    bases: KernelBases
    a: complex
    tensor: TensorResult
    system: RealSystem
    branch: BranchSolution
    determinant: Optional[DeterminantResult]


def verify_hopf_multiple(model: Model, lam0: float,
                         kappa0: float) -> MultipleHopfReport:
    """Run the full doubled-eigenvalue pipeline at a known crossing."""
    bases = kernel_bases(model, lam0, kappa0)
    a = linear_coefficient_a(model, bases)
    tensor = third_order_tensor(model, bases)
    system = assemble_real_system(a, tensor)
    branch = solve_branch(system)
    det = (existence_determinant(system, branch.selected)
           if branch.selected is not None else None)
    return MultipleHopfReport(bases=bases, a=a, tensor=tensor, system=system,
                              branch=branch, determinant=det)
