"""Numerical toolkit for a four-species transport model of rippling patterns.

The package analyses the periodic reaction-transport system

    dy/dt = -(1/lam) U dy/dx - D A y + (eps / lam^2) d2y/dx2 + Q(y)

for two parameter families (a reflection-symmetric one and a perturbed,
nonsymmetric one): dispersion relations and critical wavenumbers, kernel
and dual-kernel data at the crossing, transversality and cubic bifurcation
coefficients for simple and double critical eigenvalues, the reduced
bifurcation equations and their branches, spectral nonresonance and
resolvent-decay certificates, and direct time integration of the nonlinear
system.
"""

import os as _os
from importlib import metadata as _metadata

if "MYXORIPPLE_THREADS" in _os.environ:
    # honored only if numpy has not been imported yet in this process
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                 "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _os.environ["MYXORIPPLE_THREADS"])

from .model import (
    Model,
    build_model,
    eval_Q,
    eval_DQ,
    eval_G2,
    check_mass_structure,
    check_reflection,
    apply_W,
)
from .dispersion import (
    symbol_matrix,
    symbol_matrix_mode,
    mode_matrix,
    eigen_branches,
    growth_rate_and_classify,
    find_crossing,
    turing_stationary_check,
)
from .spectral import (
    mode_eigensystem,
    mass_zero_solve,
    nonresonance_report,
    resolvent_decay_check,
    semisimplicity_check,
)
from .hopf_single import (
    crossing_speed,
    bifurcation_coefficient,
    classify_branch,
    verify_hopf_single,
)
from .hopf_multiple import (
    kernel_bases,
    linear_coefficient_a,
    third_order_tensor,
    assemble_real_system,
    reference_real_system,
    solve_branch,
    existence_determinant,
    verify_hopf_multiple,
)
from .simulate import (
    init_state,
    Integrator,
    run,
    run_diagnostics,
    field_on_grid,
    BlowupDetected,
)
from .reference import reproduce_report

try:
    __version__ = _metadata.version("artifact")
except _metadata.PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

__all__ = [
    "Model",
    "build_model",
    "eval_Q",
    "eval_DQ",
    "eval_G2",
    "check_mass_structure",
    "check_reflection",
    "apply_W",
    "symbol_matrix",
    "symbol_matrix_mode",
    "mode_matrix",
    "eigen_branches",
    "growth_rate_and_classify",
    "find_crossing",
    "turing_stationary_check",
    "mode_eigensystem",
    "mass_zero_solve",
    "nonresonance_report",
    "resolvent_decay_check",
    "semisimplicity_check",
    "crossing_speed",
    "bifurcation_coefficient",
    "classify_branch",
    "verify_hopf_single",
    "kernel_bases",
    "linear_coefficient_a",
    "third_order_tensor",
    "assemble_real_system",
    "reference_real_system",
    "solve_branch",
    "existence_determinant",
    "verify_hopf_multiple",
    "init_state",
    "Integrator",
    "run",
    "run_diagnostics",
    "field_on_grid",
    "BlowupDetected",
    "reproduce_report",
    "__version__",
]
