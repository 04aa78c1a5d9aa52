"""Reference values and the end-to-end reproduction report.

Two families of constants live here:

* ``REPORTED_*``: the externally reported reference values for the two
  models (critical wavenumbers, spectra, bifurcation coefficients, branch
  data).  The reproduction pipeline recomputes each from scratch and
  compares at a stated tolerance.
* ``DERIVED_*``: high-precision anchors established with independent
  cross-checks (finite differences, alternative discretizations, grid
  refinement).  They pin down regression tests much tighter than the
  reported six-digit values.

Two of the reported cubic coefficients (``h1h2_hb1``, ``h2h2_hb2``) multiply
monomials whose Fourier modes cannot pair against the corresponding dual
mode; the exact coefficients are zero and the small reported values are
quadrature residue of the original computation (about 2e-4 relative to the
dominant coefficients).  Coefficient comparisons are therefore made relative
to the overall coefficient scale.  A further consequence: with the exact
(zero) values the reduced equations have no symmetric two-mode root; the
reported symmetric root is reproduced from the reported coefficients, while
the faithful tensor produces a single-mode root with the same rho.  Both
paths are reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from . import dispersion, hopf_multiple, hopf_single, model, spectral

__all__ = [
    "ReproRow",
    "ReproReport",
    "reproduce_report",
    "format_value",
]

# ----------------------------------------------------------------------
# Reported reference values (six significant digits)
# ----------------------------------------------------------------------

REPORTED_K0_NONSYM = -4.47675
REPORTED_KAPPA0_NONSYM = -4.54605
#: Eigenvalues of M0 = -M~(1, lam0) + i kappa0 I, ascending real part.
REPORTED_M0_EIGS = (0.0 + 0.0j,
                    1.99739 - 13.5171j,
                    2.00414 - 9.02281j,
                    2.01502 + 4.35574j)
REPORTED_RE_ZPRIME_K = 0.896648

REPORTED_A_SYM = -0.0000324659 - 0.0406768j
#: Cubic coefficients of reduced component 1, MONOMIALS order.
REPORTED_E3 = (316.127 + 912.071j,
               0.0660957 + 0.175946j,
               -316.128 - 912.074j,
               0.00475099 + 0.0576605j)
REPORTED_BRANCH_X = 0.0756877
REPORTED_BRANCH_RHO = -24.64899
REPORTED_DETERMINANT = 6.28814e-7

# ----------------------------------------------------------------------
# High-precision derived anchors (regression values)
# ----------------------------------------------------------------------

DERIVED_K0_NONSYM = -4.476757889478132
DERIVED_KAPPA0_NONSYM = -4.5460543196549015
DERIVED_LAM0_NONSYM = -1.403512421778975
DERIVED_M0_EIGS = (0.0 + 0.0j,
                   1.9973897544042405 - 13.517143813686788j,
                   2.00413612010047 - 9.022812209133033j,
                   2.015018605897168 + 4.3557387442002j)
DERIVED_ZPRIME_LAMBDA = -2.860023062478775 - 3.1468695256989188j
DERIVED_ZPRIME_K = 0.8966484214385867 + 0.9865779159996092j
DERIVED_PHI = 6.825459696368985 - 0.48392909032557924j
DERIVED_LAMBDA_CURVATURE = -2.386505125
DERIVED_ZERO_MODE_DET = 4.0
DERIVED_NEUMANN_M0 = 9

DERIVED_K0_SYM = 0.357621889694033
DERIVED_KAPPA0_SYM = -0.7147198278738655
DERIVED_LAM0_SYM = 17.569353242205693
DERIVED_K_SECOND_SYM = 0.062306524
DERIVED_ABS_S_SYM = 0.5117519937705322
DERIVED_A_SYM = -3.2465854469952776e-05 - 0.04067675221594165j
DERIVED_C1_SYM = 316.032240888 + 911.891156140j
DERIVED_C3_SYM = -316.192679652 - 912.261045660j
DERIVED_ROOT_REFERENCE = (0.0756877147, 0.0, 0.0756877147, -24.6489920)
DERIVED_DET_REFERENCE = 6.288137e-7
DERIVED_DET_REFERENCE_FULL = -2.097106e-4
DERIVED_ROOT_FAITHFUL_AMPLITUDE = 0.00112502
DERIVED_ROOT_FAITHFUL_RHO = -24.6408145


# ----------------------------------------------------------------------
# Reproduction report
# ----------------------------------------------------------------------

Number = Union[float, complex, bool]


def format_value(x: Number) -> str:
    """Format a number with nine significant digits."""
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, complex):
        re = f"{x.real:.9g}"
        im = f"{abs(x.imag):.9g}"
        sign = "+" if x.imag >= 0 else "-"
        return f"{re}{sign}{im}i"
    return f"{float(x):.9g}"


@dataclass(frozen=True)
class ReproRow:
    """One expected-vs-computed comparison of the reproduction table."""

    name: str
    expected: Number
    computed: Number
    tol_kind: str   # "rel" | "abs" | "scale_rel" | "factor" | "bool" | "leq"
    tol: float
    passed: bool
    note: str = ""

    def describe_tolerance(self) -> str:
        return {
            "rel": f"rel {self.tol:g}",
            "abs": f"abs {self.tol:g}",
            "scale_rel": f"scale-rel {self.tol:g}",
            "factor": f"within x{self.tol:g}",
            "bool": "exact",
            "leq": f"<= {self.tol:g}",
        }[self.tol_kind]


@dataclass(frozen=True)
class ReproReport:
    rows: List[ReproRow] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def _rel_row(name: str, expected: Number, computed: Number,
             tol: float, note: str = "") -> ReproRow:
    err = abs(computed - expected) / abs(expected)
    return ReproRow(name, expected, computed, "rel", tol, bool(err <= tol),
                    note)


def _abs_row(name: str, expected: Number, computed: Number,
             tol: float, note: str = "") -> ReproRow:
    return ReproRow(name, expected, computed, "abs", tol,
                    bool(abs(computed - expected) <= tol), note)


def _scale_row(name: str, expected: Number, computed: Number,
               tol: float, scale: float, note: str = "") -> ReproRow:
    return ReproRow(name, expected, computed, "scale_rel", tol,
                    bool(abs(computed - expected) <= tol * scale), note)


def _factor_row(name: str, expected: float, computed: float,
                factor: float, note: str = "") -> ReproRow:
    ratio = computed / expected if expected != 0 else float("inf")
    ok = (1.0 / factor) <= abs(ratio) <= factor and ratio > 0
    return ReproRow(name, expected, computed, "factor", factor, bool(ok),
                    note)


def _bool_row(name: str, expected: bool, computed: bool,
              note: str = "") -> ReproRow:
    return ReproRow(name, expected, computed, "bool", 0.0,
                    bool(expected == computed), note)


def _leq_row(name: str, computed: float, tol: float,
             note: str = "") -> ReproRow:
    return ReproRow(name, 0.0, computed, "leq", tol,
                    bool(computed <= tol), note)


def reproduce_report() -> ReproReport:
    """Recompute every reported value from scratch and compare.

    Returns a table with one row per reported number (plus the structural
    verification verdicts) and explanatory notes for the two documented
    discrepancies of the cubic-coefficient data.
    """
    rows: List[ReproRow] = []
    notes: List[str] = []

    # ---------------- nonsymmetric model ----------------
    m_ns = model.build_model("nonsymmetric")
    crossing = dispersion.find_crossing(m_ns)
    rows.append(_rel_row("nonsym.crossing.k0", REPORTED_K0_NONSYM,
                         crossing.k0, 1e-3))
    rows.append(_rel_row("nonsym.crossing.kappa0", REPORTED_KAPPA0_NONSYM,
                         crossing.kappa0, 1e-3))

    crit = spectral.mode_eigensystem(m_ns, crossing.lam0, crossing.kappa0)
    eigs = crit.eigenvalues
    rows.append(_abs_row("nonsym.M0.eig1", REPORTED_M0_EIGS[0], eigs[0],
                         1e-6, note="kernel eigenvalue"))
    for idx in (1, 2, 3):
        rows.append(_rel_row(f"nonsym.M0.eig{idx + 1}",
                             REPORTED_M0_EIGS[idx], complex(eigs[idx]), 1e-3))

    speed = hopf_single.crossing_speed(m_ns, crit)
    rows.append(_rel_row("nonsym.crossing_speed.re_z_k",
                         REPORTED_RE_ZPRIME_K, speed.z_prime_k.real, 1e-3))
    rows.append(_leq_row("nonsym.crossing_speed.fd_rel_err",
                         max(speed.rel_err_lambda, speed.rel_err_k), 1e-5))

    bif = hopf_single.bifurcation_coefficient(m_ns, crit)
    report_ns = hopf_single.classify_branch(speed, bif, crossing.lam0,
                                            crossing.kappa0)
    rows.append(_bool_row("nonsym.branch.supercritical", True,
                          report_ns.branch_type == "supercritical"))
    rows.append(_bool_row("nonsym.branch.unstable_side_below", True,
                          report_ns.unstable_side == "lambda_below_lam0"))

    rows.append(_bool_row("nonsym.verify.mass_structure", True,
                          model.check_mass_structure(m_ns).ok))
    rows.append(_bool_row("nonsym.verify.reflection_broken", True,
                          not model.check_reflection(m_ns).conditions_met,
                          note="perturbation must break the symmetry"))
    rows.append(_bool_row("nonsym.verify.nonresonance", True,
                          spectral.nonresonance_report(
                              m_ns, crossing.lam0, crossing.kappa0).passed))
    rows.append(_bool_row("nonsym.verify.resolvent_decay", True,
                          spectral.resolvent_decay_check(
                              m_ns, crossing.lam0, crossing.kappa0).passed))

    # ---------------- symmetric model ----------------
    m_s = model.build_model("symmetric")
    crossing_s = dispersion.find_crossing(m_s)
    analysis = hopf_multiple.verify_hopf_multiple(m_s, crossing_s.lam0,
                                                  crossing_s.kappa0)
    a = analysis.a
    rows.append(_rel_row("sym.a.re", REPORTED_A_SYM.real, a.real, 1e-3))
    rows.append(_rel_row("sym.a.im", REPORTED_A_SYM.imag, a.imag, 1e-3))

    computed_coeffs = analysis.tensor.coefficient_vector(1)
    scale = float(np.max(np.abs(np.array(REPORTED_E3))))
    for name, exp_c, comp_c in zip(hopf_multiple.MONOMIALS, REPORTED_E3,
                                   computed_coeffs):
        note = ""
        if name in ("h1h2_hb1", "h2h2_hb2"):
            note = "exact coefficient is 0; reported value is residue"
        rows.append(_scale_row(f"sym.E3.{name}", exp_c, complex(comp_c),
                               1e-2, scale, note))

    # branch and determinant from the reported coefficient values
    ref_system = hopf_multiple.reference_real_system(REPORTED_A_SYM,
                                                     REPORTED_E3)
    ref_branch = hopf_multiple.solve_branch(ref_system)
    sym_roots = [r for r in ref_branch.roots if r.symmetric]
    if sym_roots:
        root = max(sym_roots, key=lambda r: abs(r.x1))
        rows.append(_rel_row("sym.branch.x1", REPORTED_BRANCH_X, root.x1,
                             1e-2, note="root of reported-coefficient system"))
        rows.append(_abs_row("sym.branch.y1", 0.0, root.y1, 1e-6))
        rows.append(_rel_row("sym.branch.x2", REPORTED_BRANCH_X, root.x2,
                             1e-2))
        rows.append(_rel_row("sym.branch.rho", REPORTED_BRANCH_RHO, root.rho,
                             1e-2))
        det = hopf_multiple.existence_determinant(ref_system, root)
        rows.append(_factor_row("sym.determinant", REPORTED_DETERMINANT,
                                det.value_reported, 10.0,
                                note="reduced linear-block convention"))
    else:
        rows.append(_bool_row("sym.branch.symmetric_root", True, False,
                              note="no symmetric root of reported system"))

    # the faithful tensor has exact zero cross coefficients; its reduced
    # equations admit a single-mode root with the same rho
    faithful = analysis.branch
    if faithful.selected is not None:
        rows.append(_rel_row("sym.branch.rho_faithful_tensor",
                             REPORTED_BRANCH_RHO, faithful.selected.rho,
                             1e-2, note="root of computed-tensor system"))
        notes.append(
            "computed-tensor system: symmetric two-mode root "
            f"{'found' if faithful.symmetric_found else 'absent'}; "
            f"selected root profile {faithful.selected.profile} with "
            f"amplitudes ({format_value(faithful.selected.x1)}, "
            f"{format_value(faithful.selected.x2)}), "
            f"rho = {format_value(faithful.selected.rho)}")
    notes.append(
        "reported coefficients of h1h2_hb1 and h2h2_hb2 sit in mode-"
        "incompatible slots; the exact values are 0 and the symmetric "
        "two-mode root exists only for the reported (residue-bearing) "
        "coefficient values")

    rows.append(_bool_row("sym.verify.mass_structure", True,
                          model.check_mass_structure(m_s).ok))
    rows.append(_bool_row("sym.verify.reflection", True,
                          model.check_reflection(m_s).ok))
    rows.append(_bool_row("sym.verify.nonresonance", True,
                          spectral.nonresonance_report(
                              m_s, crossing_s.lam0, crossing_s.kappa0).passed))
    rows.append(_bool_row("sym.verify.resolvent_decay", True,
                          spectral.resolvent_decay_check(
                              m_s, crossing_s.lam0, crossing_s.kappa0).passed))
    rows.append(_bool_row("sym.verify.semisimple", True,
                          spectral.semisimplicity_check(
                              m_s, crossing_s.lam0, crossing_s.kappa0).passed))

    return ReproReport(rows=rows, notes=notes)
