"""Tests for the doubled-eigenvalue Hopf pipeline (symmetric model)."""

import numpy as np
import pytest

from myxoripple import (
    assemble_real_system,
    existence_determinant,
    kernel_bases,
    linear_coefficient_a,
    reference_real_system,
    solve_branch,
)
from myxoripple.hopf_multiple import (
    MONOMIALS,
    ZERO_MONOMIALS,
    ResonanceError,
    resolvent_apply,
)
from myxoripple.model import P_SWAP
from myxoripple.reference import (
    DERIVED_A_SYM,
    DERIVED_ABS_S_SYM,
    DERIVED_C1_SYM,
    DERIVED_C3_SYM,
    DERIVED_DET_REFERENCE,
    DERIVED_DET_REFERENCE_FULL,
    DERIVED_ROOT_FAITHFUL_AMPLITUDE,
    DERIVED_ROOT_FAITHFUL_RHO,
    DERIVED_ROOT_REFERENCE,
    REPORTED_A_SYM,
    REPORTED_E3,
)


# ---------------------------------------------------------------------------
# kernel bases and linear coefficient
# ---------------------------------------------------------------------------

def test_kernel_bases_scaling(sym_hopf):
    bases = sym_hopf.bases
    assert abs(bases.s) == pytest.approx(DERIVED_ABS_S_SYM, rel=1e-9)
    assert bases.pairing == pytest.approx(1.0 / (2.0 * np.pi), rel=1e-12)
    assert bases.sigma_min < 1e-10
    assert bases.mu0 == -bases.kappa0 > 0
    assert np.allclose(bases.Pv0, P_SWAP @ bases.v0, rtol=0, atol=0)
    assert np.allclose(bases.Pw0, P_SWAP @ bases.w0, rtol=0, atol=0)


def test_kernel_basis_indexing(sym_hopf):
    bases = sym_hopf.bases
    mode1, vec1 = bases.phi(1)
    mode2, vec2 = bases.phi(2)
    assert (mode1, mode2) == (1, -1)
    assert np.array_equal(vec2, bases.Pv0)
    dmode, dvec = bases.dual(2)
    assert dmode == -1 and np.array_equal(dvec, bases.Pw0)
    with pytest.raises(ValueError):
        bases.phi(3)
    with pytest.raises(ValueError):
        bases.dual(0)


def test_kernel_bases_rejects_bad_input(sym, sym_crossing):
    with pytest.raises(ValueError):
        kernel_bases(sym, sym_crossing.lam0, +0.5)   # needs kappa0 < 0
    with pytest.raises(ValueError):
        kernel_bases(sym, 3.0, sym_crossing.kappa0)  # not a crossing


def test_linear_coefficient(sym_hopf):
    assert sym_hopf.a == pytest.approx(DERIVED_A_SYM, rel=1e-9)
    assert sym_hopf.a == pytest.approx(REPORTED_A_SYM, rel=1e-3)
    assert sym_hopf.a.imag < 0


def test_linear_coefficient_reflection_agreement(sym, sym_hopf):
    # the mode -1 evaluation inside linear_coefficient_a must agree with the
    # mode +1 value; recompute both sides explicitly
    bases = sym_hopf.bases
    k2 = bases.k0 * bases.k0
    a1 = -1j * k2 * complex(np.vdot(bases.w0, sym.U @ bases.v0))
    a2 = +1j * k2 * complex(np.vdot(bases.Pw0, sym.U @ bases.Pv0))
    assert a1 == pytest.approx(a2, rel=1e-12)
    assert linear_coefficient_a(sym, bases) == pytest.approx(a1, rel=1e-12)


# ---------------------------------------------------------------------------
# third-order tensor
# ---------------------------------------------------------------------------

def test_cubic_coefficients(sym_hopf):
    vec1 = sym_hopf.tensor.coefficient_vector(1)
    assert vec1[0] == pytest.approx(DERIVED_C1_SYM, rel=1e-9)
    assert vec1[2] == pytest.approx(DERIVED_C3_SYM, rel=1e-9)
    # slots 2 and 4 aggregate mode-incompatible monomials: exact zeros
    assert vec1[1] == 0j
    assert vec1[3] == 0j


def test_component_two_is_mirror(sym_hopf):
    vec1 = sym_hopf.tensor.coefficient_vector(1)
    vec2 = sym_hopf.tensor.coefficient_vector(2)
    assert np.allclose(vec2, vec1[::-1], rtol=1e-10, atol=1e-12)


def test_audited_monomials_vanish(sym_hopf):
    for l in (1, 2):
        for name in ZERO_MONOMIALS:
            assert sym_hopf.tensor.monomials[l][name] == 0j


def test_tensor_rows_shape(sym_hopf):
    rows = list(sym_hopf.tensor.rows())
    assert len(rows) == 16
    for row in rows:
        assert len(row) == 6
        l, i, j, k, re, im = row
        assert {l, i, j, k} <= {1, 2}
        assert np.isfinite(re) and np.isfinite(im)


def test_resolvent_apply_roundtrip(sym, sym_crossing):
    rng = np.random.default_rng(3)
    f = rng.normal(size=4) + 1j * rng.normal(size=4)
    shift = 2j * sym_crossing.kappa0
    x = resolvent_apply(sym, sym_crossing.lam0, 2, shift, f)
    k0 = 2.0 * np.pi / sym_crossing.lam0
    op = ((sym.epsilon0 * 4 * k0 * k0) * np.eye(4)
          + (2j * k0) * sym.U + sym.DA - shift * np.eye(4))
    assert np.linalg.norm(op @ x - f) < 1e-10


def test_resolvent_apply_detects_resonance(sym, sym_crossing):
    mu0 = -sym_crossing.kappa0
    f = np.ones(4, dtype=complex)
    with pytest.raises(ResonanceError):
        resolvent_apply(sym, sym_crossing.lam0, 1, 1j * mu0, f)


# ---------------------------------------------------------------------------
# real system algebra
# ---------------------------------------------------------------------------

def test_residual_definition(sym_hopf):
    system = sym_hopf.system
    x1, y1, x2, rho = 0.03, -0.01, 0.05, -7.0
    h1, h2 = x1 + 1j * y1, x2 + 0j
    e1, e2 = system.e_complex(h1, h2)
    r1 = (-1j + rho * system.a) * h1 - e1
    r2 = (-1j + rho * system.a) * h2 - e2
    manual = np.array([r1.real, r1.imag, r2.real, r2.imag])
    assert np.allclose(system.residual(x1, y1, x2, rho), manual,
                       rtol=0, atol=0)


def test_cubic_jacobian_matches_finite_differences(sym_hopf):
    system = sym_hopf.system
    v = np.array([0.04, -0.02, 0.07])
    jac = system.e_jacobian(v)
    h = 1e-7
    fd = np.zeros((4, 3))
    for col in range(3):
        vp, vm = v.copy(), v.copy()
        vp[col] += h
        vm[col] -= h
        fd[:, col] = (system.e_real(vp) - system.e_real(vm)) / (2 * h)
    assert np.allclose(jac, fd, rtol=1e-6, atol=1e-9)


def test_reference_system_mirrors_by_default():
    c1 = np.array([1 + 2j, 3j, -1.0, 0.5 - 1j])
    system = reference_real_system(0.1 - 0.2j, c1)
    assert np.array_equal(system.coeffs[1], c1[::-1])
    with pytest.raises(ValueError):
        reference_real_system(0.1j, np.ones(3))


def test_monomial_ordering_is_stable():
    assert MONOMIALS == ("h1h1_hb1", "h1h2_hb1", "h1h2_hb2", "h2h2_hb2")


# ---------------------------------------------------------------------------
# branch roots and determinant
# ---------------------------------------------------------------------------

def test_reference_coefficients_give_reported_root():
    system = reference_real_system(REPORTED_A_SYM, REPORTED_E3)
    branch = solve_branch(system)
    assert branch.symmetric_found
    root = branch.selected
    x_ref, y_ref, _, rho_ref = DERIVED_ROOT_REFERENCE
    assert root.symmetric
    assert root.x1 == pytest.approx(x_ref, rel=1e-6)
    assert root.x2 == pytest.approx(x_ref, rel=1e-6)
    assert abs(root.y1) < 1e-9
    assert root.rho == pytest.approx(rho_ref, rel=1e-6)
    assert root.residual < 1e-12
    assert root.profile == "two_mode_symmetric"

    det = existence_determinant(system, root)
    assert det.value_reported == pytest.approx(DERIVED_DET_REFERENCE,
                                               rel=1e-5)
    assert det.value_full == pytest.approx(DERIVED_DET_REFERENCE_FULL,
                                           rel=1e-5)
    # with y1 = 0 at the root the two conventions share the first column
    assert np.allclose(det.matrix_reported[:, 0], det.matrix_full[:, 0],
                       rtol=0, atol=1e-12)


def test_faithful_coefficients_give_single_mode_root(sym_hopf):
    branch = sym_hopf.branch
    assert branch.roots, "no nontrivial root found"
    assert not branch.symmetric_found
    root = branch.selected
    assert root.profile == "single_mode"
    amp = max(abs(root.x1), abs(root.x2))
    assert amp == pytest.approx(DERIVED_ROOT_FAITHFUL_AMPLITUDE, rel=1e-4)
    assert root.rho == pytest.approx(DERIVED_ROOT_FAITHFUL_RHO, rel=1e-4)
    assert sym_hopf.determinant is not None


def test_roots_are_sign_normalized(sym_hopf):
    for root in sym_hopf.branch.roots:
        v = np.array([root.x1, root.y1, root.x2])
        amp = np.linalg.norm(v)
        lead = next(comp for comp in v if abs(comp) > 1e-8 * amp)
        assert lead > 0


def test_assemble_real_system_matches_report(sym_hopf):
    system = assemble_real_system(sym_hopf.a, sym_hopf.tensor)
    assert np.array_equal(system.coeffs, sym_hopf.system.coeffs)
    assert system.a == sym_hopf.system.a
