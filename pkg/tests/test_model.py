"""Model constants, quadratic terms, and structural checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from myxoripple import (
    apply_W,
    build_model,
    check_mass_structure,
    check_reflection,
    eval_DQ,
    eval_G2,
    eval_Q,
)
from myxoripple.model import (
    A0_MATRIX,
    D_MATRIX,
    M_NONSYMMETRIC,
    M_SYMMETRIC,
    MASS_VECTOR,
    P_SWAP,
    U_MATRIX,
)

finite4 = arrays(np.float64, (4,),
                 elements=st.floats(-5, 5, allow_nan=False))


def test_matrix_constants():
    assert np.array_equal(D_MATRIX, [[1, 0, 0, -1], [-1, 1, 0, 0],
                                     [0, -1, 1, 0], [0, 0, -1, 1]])
    assert np.array_equal(U_MATRIX, np.diag([2.0, 1.0, -2.0, -1.0]))
    assert np.array_equal(A0_MATRIX, [[0, -1, 0, 0], [0, -0.5, 0, 0],
                                      [0, 0, 0, -1], [0, 0, 0, -0.5]])
    assert np.array_equal(M_NONSYMMETRIC, [[0, 1, 1, 0], [0, 0.5, 0, 0],
                                           [1, 0, 0, 2], [0, 0, 0, -0.5]])
    assert np.array_equal(M_SYMMETRIC, [[1, 0, 1.1, 1], [0, 0, 0, 0],
                                        [1.1, 1, 1, 0], [0, 0, 0, 0]])
    assert np.array_equal(P_SWAP, np.eye(4)[[2, 3, 0, 1]])
    assert np.array_equal(MASS_VECTOR, np.ones(4))


def test_matrix_constants_read_only():
    with pytest.raises(ValueError):
        D_MATRIX[0, 0] = 7.0


def test_build_model_defaults():
    m_ns = build_model("nonsymmetric")
    assert m_ns.delta == 1.0 and m_ns.epsilon0 == 0.1
    assert m_ns.c == (1.0, 1.0, 1.0, 1.0)
    assert np.array_equal(m_ns.A, A0_MATRIX + M_NONSYMMETRIC)
    m_s = build_model("symmetric")
    assert m_s.delta == 0.001 and m_s.epsilon0 == 0.001
    assert m_s.c == (1.0, 0.0, 1.0, 0.0)
    assert np.array_equal(m_s.A, A0_MATRIX + 0.001 * M_SYMMETRIC)


def test_build_model_rejects_bad_input():
    with pytest.raises(ValueError):
        build_model("other")
    with pytest.raises(ValueError):
        build_model("symmetric", epsilon0=0.0)
    with pytest.raises(ValueError):
        build_model("symmetric", c=(1.0, 2.0))
    with pytest.raises(ValueError):
        build_model("symmetric", D=np.eye(3))


@pytest.mark.parametrize("kind", ["nonsymmetric", "symmetric"])
@pytest.mark.parametrize("delta", [0.0, 0.001, 0.37, 1.0, 2.0])
def test_mass_vector_annihilates_DA(kind, delta):
    m = build_model(kind, delta=delta)
    assert np.max(np.abs(MASS_VECTOR @ m.DA)) < 1e-12
    assert abs(np.linalg.det(m.DA)) < 1e-12


def test_eval_Q_hand_value():
    q = eval_Q(np.array([1.0, 2.0, 3.0, 4.0]), (1.0, 1.0, 1.0, 1.0))
    assert np.array_equal(q, [15.0, -3.0, -5.0, -7.0])


def test_eval_Q_broadcasts_over_samples():
    ys = np.arange(12.0).reshape(4, 3)
    q = eval_Q(ys, (1.0, 0.5, 2.0, 1.0))
    for j in range(3):
        assert np.allclose(q[:, j], eval_Q(ys[:, j], (1.0, 0.5, 2.0, 1.0)))


@given(y=finite4, c=finite4)
def test_eval_Q_components_sum_to_zero(y, c):
    assert abs(eval_Q(y, c).sum()) < 1e-9


@given(u=finite4, v=finite4, c=finite4)
def test_polarization_identity(u, v, c):
    lhs = eval_Q(u + v, c) - eval_Q(u, c) - eval_Q(v, c)
    resid = np.abs(lhs - 2.0 * eval_G2(u, v, c))
    scale = 1.0 + np.abs(lhs).max()
    assert resid.max() <= 1e-12 * scale


@given(u=finite4, c=finite4)
def test_G2_diagonal_recovers_Q(u, c):
    assert np.array_equal(eval_G2(u, u, c), eval_Q(u, c))


@given(u=finite4, v=finite4, c=finite4)
def test_DQ_is_twice_G2(u, v, c):
    assert np.allclose(eval_DQ(u, c) @ v, 2.0 * eval_G2(u, v, c),
                       atol=1e-10)


@settings(max_examples=25)
@given(u=finite4, c=finite4)
def test_DQ_matches_finite_differences(u, c):
    h = 1e-6
    fd = np.empty((4, 4))
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        fd[:, j] = (eval_Q(u + e, c) - eval_Q(u - e, c)) / (2 * h)
    assert np.allclose(eval_DQ(u, c), fd, atol=1e-4)


def test_mass_structure_reports_ok(nonsym, sym):
    for m in (nonsym, sym):
        rep = check_mass_structure(m)
        assert rep.ok
        assert rep.residual_left_null < 1e-12
        assert rep.residual_det < 1e-12
        assert rep.residual_Q_sum < 1e-12


def test_reflection_holds_for_symmetric(sym):
    rep = check_reflection(sym)
    assert rep.conditions_met
    assert rep.residual_A < 1e-14
    assert rep.residual_U < 1e-14
    assert rep.residual_DA < 1e-14
    assert rep.functional_residual is not None
    assert rep.functional_residual < 1e-10
    assert rep.ok


def test_reflection_fails_for_nonsymmetric(nonsym):
    rep = check_reflection(nonsym)
    assert not rep.conditions_met
    assert rep.residual_A > 0.1
    assert rep.functional_residual is None
    assert not rep.ok


def test_reflection_conditions_are_on_A_and_c():
    # same matrices as the symmetric default but asymmetric quadratic
    m = build_model("symmetric", c=(1.0, 0.0, 2.0, 0.0))
    assert not check_reflection(m).conditions_met


def test_apply_W_involution_on_grid():
    rng = np.random.default_rng(7)
    y = rng.standard_normal((4, 32))
    assert np.allclose(apply_W(apply_W(y)), y, atol=1e-14)


def test_apply_W_constant_field_applies_P():
    y = np.tile(np.array([[1.0], [2.0], [3.0], [4.0]]), (1, 16))
    w = apply_W(y)
    assert np.allclose(w, np.tile([[3.0], [4.0], [1.0], [2.0]], (1, 16)))


def test_apply_W_modes_maps_n_to_minus_n():
    L = 9
    modes = np.zeros((4, L), dtype=complex)
    v = np.array([1.0, 2.0, 3.0, 4.0]) + 1j * np.array([0.5, 0, -0.5, 1.0])
    modes[:, 1] = v  # e^{2 pi i x} v
    out = apply_W(modes, representation="modes")
    assert np.allclose(out[:, -1 % L], P_SWAP @ v)
    assert np.max(np.abs(out[:, 1])) == 0.0


def test_apply_W_grid_and_mode_forms_agree():
    rng = np.random.default_rng(11)
    L = 17
    modes = rng.standard_normal((4, L)) + 1j * rng.standard_normal((4, L))
    # make the field real
    idx = (-np.arange(L)) % L
    modes = 0.5 * (modes + np.conj(modes[:, idx]))
    grid = np.real(np.fft.ifft(modes, axis=1) * L)
    w_modes = apply_W(modes, representation="modes")
    w_grid_from_modes = np.real(np.fft.ifft(w_modes, axis=1) * L)
    assert np.allclose(w_grid_from_modes, apply_W(grid), atol=1e-12)
