"""Command-line surface of the rippling-model toolkit.

Subcommands
-----------
model          parameters, matrices, and structural checks as JSON
dispersion     eigenvalue branches over a wavenumber grid (CSV) plus the
               growth-rate classification (JSON)
crossing       critical wavenumber, frequency, and length (JSON)
verify         every hypothesis check for one model (JSON; exit 1 on failure)
hopf-single    transversality and cubic coefficient at the simple crossing
hopf-multiple  reduced equations at the double crossing (JSON + tensor CSV)
simulate       nonlinear time integration with diagnostics (CSV + JSON)
reproduce      recompute all reference values and print the comparison table

A single JSON config document can set model parameters and run options
(sections "model", "scan", "verify", "simulate"); command-line flags
override file values; unknown keys are rejected with exit code 2.  Failed
numerical checks exit 1.  All floating-point output carries nine
significant digits, and identical configs produce bit-identical files.

``--report DIR`` makes the data-producing subcommands render PNG figures
next to the delimited output inside DIR.  The environment variable
``MYXORIPPLE_THREADS`` caps the linear-algebra thread count.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Dict, Optional

import click
import numpy as np

from . import dispersion as _dispersion
from . import hopf_multiple as _hm
from . import hopf_single as _hs
from . import model as _model
from . import reference as _reference
from . import simulate as _simulate
from . import spectral as _spectral

__all__ = ["main"]


# ----------------------------------------------------------------------
# formatting and output helpers
# ----------------------------------------------------------------------

def _f9(x) -> Optional[float]:
    """Round a float to nine significant digits (None for non-finite)."""
    x = float(x)
    if not np.isfinite(x):
        return None
    return float(f"{x:.9g}")


def _c9(z) -> Dict[str, Optional[float]]:
    z = complex(z)
    return {"re": _f9(z.real), "im": _f9(z.imag)}


def _emit_json(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    click.echo(text, nl=False)


def _write_csv(path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    Path(path).write_text(buf.getvalue())


def _fmt_cell(x) -> str:
    return f"{float(x):.9g}"


def _figure_axes():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


# ----------------------------------------------------------------------
# config handling
# ----------------------------------------------------------------------

_MODEL_KEYS = {"kind", "delta", "epsilon0", "c"}
_SCAN_KEYS = {"k_min", "k_max", "step"}
_VERIFY_KEYS = {"n_max", "m_max"}
_SIM_KEYS = {"lam", "offset", "T", "dt", "N", "amplitude", "zero_mode",
             "record_every", "snapshots", "grid"}
_SECTIONS = {"model": _MODEL_KEYS, "scan": _SCAN_KEYS,
             "verify": _VERIFY_KEYS, "simulate": _SIM_KEYS}


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"config: {exc}")
    if not isinstance(doc, dict):
        raise click.UsageError("config: top level must be a JSON object")
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        raise click.UsageError(f"config: unknown sections {sorted(unknown)}")
    for name, allowed in _SECTIONS.items():
        section = doc.get(name, {})
        if not isinstance(section, dict):
            raise click.UsageError(f"config: section {name!r} must be an object")
        bad = set(section) - allowed
        if bad:
            raise click.UsageError(
                f"config: unknown keys in {name!r}: {sorted(bad)}")
    return doc


def _section(config: dict, name: str, **overrides) -> dict:
    merged = dict(config.get(name, {}))
    for key, val in overrides.items():
        if val is not None:
            merged[key] = val
    return merged


def _build(config: dict, kind: Optional[str], delta: Optional[float],
           epsilon0: Optional[float]) -> _model.Model:
    sec = _section(config, "model", kind=kind, delta=delta, epsilon0=epsilon0)
    model_kind = sec.pop("kind", "nonsymmetric")
    if "c" in sec:
        sec["c"] = tuple(sec["c"])
    try:
        return _model.build_model(model_kind, **sec)
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc))


def _model_options(f):
    f = click.option("--epsilon0", type=float, default=None,
                     help="Diffusion coefficient override.")(f)
    f = click.option("--delta", type=float, default=None,
                     help="Interaction perturbation strength override.")(f)
    f = click.option("--config", "config_path",
                     type=click.Path(exists=True, dir_okay=False),
                     default=None, help="JSON config document.")(f)
    f = click.option("--model", "kind",
                     type=click.Choice(["nonsymmetric", "symmetric"]),
                     default=None, help="Model family (default nonsymmetric).")(f)
    return f


# ----------------------------------------------------------------------
# serializers
# ----------------------------------------------------------------------

def _matrix(a: np.ndarray):
    return [[_f9(x) for x in row] for row in np.asarray(a, dtype=float)]


def _crossing_doc(cr) -> dict:
    return {
        "k0": _f9(cr.k0),
        "kappa0": _f9(cr.kappa0),
        "lam0": _f9(cr.lam0),
        "branch_index": int(cr.branch_index),
        "crossings": [
            {"k": _f9(c.k), "kappa": _f9(c.kappa),
             "branch_index": int(c.branch_index)}
            for c in cr.crossings
        ],
    }


def _verify_doc(m: _model.Model, n_max: int, m_max: Optional[int]) -> dict:
    cr = _dispersion.find_crossing(m)
    mass = _model.check_mass_structure(m)
    refl = _model.check_reflection(m)
    nonres = _spectral.nonresonance_report(m, cr.lam0, cr.kappa0, n_max=n_max)
    resolvent = _spectral.resolvent_decay_check(m, cr.lam0, cr.kappa0,
                                                m_max=m_max)
    reflection_expected = m.kind == "symmetric"
    checks = {
        "mass_structure": {
            "passed": bool(mass.ok),
            "residual_left_null": _f9(mass.residual_left_null),
            "residual_det": _f9(mass.residual_det),
            "residual_Q_sum": _f9(mass.residual_Q_sum),
        },
        "reflection": {
            "passed": bool(refl.conditions_met == reflection_expected
                           and (not reflection_expected or refl.ok)),
            "conditions_met": bool(refl.conditions_met),
            "expected_symmetric": reflection_expected,
            "residual_A": _f9(refl.residual_A),
            "residual_U": _f9(refl.residual_U),
            "residual_DA": _f9(refl.residual_DA),
            "functional_residual": (None if refl.functional_residual is None
                                    else _f9(refl.functional_residual)),
        },
        "nonresonance": {
            "passed": bool(nonres.passed),
            "n_max": int(nonres.n_max),
            "min_distance": _f9(nonres.min_distance),
            "argmin_n": int(nonres.argmin_n),
            "zero_mode_det": _f9(nonres.zero_mode_det),
            "quadratic_floor": _f9(nonres.quadratic_floor),
        },
        "resolvent_decay": {
            "passed": bool(resolvent.passed),
            "m0": int(resolvent.m0),
            "m_max": int(resolvent.m_max),
            "max_ratio": _f9(resolvent.max_ratio),
        },
    }
    if m.kind == "symmetric":
        semi = _spectral.semisimplicity_check(m, cr.lam0, cr.kappa0)
        checks["semisimplicity"] = {
            "passed": bool(semi.passed),
            "eigenvalue_gap": _f9(semi.eigenvalue_gap),
            "kernel_sigma": _f9(semi.kernel_sigma),
            "kernel_gap": _f9(semi.kernel_gap),
            "pairing_abs": _f9(semi.pairing_abs),
            "reflection_residual": _f9(semi.reflection_residual),
        }
    return {
        "model": m.kind,
        "lam0": _f9(cr.lam0),
        "kappa0": _f9(cr.kappa0),
        "checks": checks,
        "passed": all(entry["passed"] for entry in checks.values()),
    }


def _hopf_single_doc(m: _model.Model) -> dict:
    cr = _dispersion.find_crossing(m)
    report = _hs.verify_hopf_single(m, cr.lam0, cr.kappa0)
    crit = _spectral.mode_eigensystem(m, cr.lam0, cr.kappa0)
    speed, bif = report.speed, report.bifurcation
    return {
        "model": m.kind,
        "k0": _f9(cr.k0),
        "kappa0": _f9(cr.kappa0),
        "lam0": _f9(cr.lam0),
        "eigenvalues_M0": [_c9(z) for z in crit.eigenvalues],
        "crossing_speed": {
            "z_prime_lambda": _c9(speed.z_prime_lambda),
            "z_prime_k": _c9(speed.z_prime_k),
            "dk_dlambda": _f9(speed.dk_dlambda),
            "fd_rel_err_lambda": _f9(speed.rel_err_lambda),
            "fd_rel_err_k": _f9(speed.rel_err_k),
            "transversal": bool(speed.transversal),
        },
        "bifurcation": {
            "phi": _c9(bif.phi),
            "term_second_harmonic": _c9(bif.term_second_harmonic),
            "term_mean": _c9(bif.term_mean),
        },
        "lambda_curvature": _f9(report.lambda_curvature),
        "branch_type": report.branch_type,
        "unstable_side": report.unstable_side,
        "amplitude_coefficient": _f9(report.amplitude_coefficient),
    }


def _branch_root_doc(root) -> dict:
    return {
        "x1": _f9(root.x1), "y1": _f9(root.y1), "x2": _f9(root.x2),
        "rho": _f9(root.rho), "residual": _f9(root.residual),
        "profile": root.profile,
    }


def _hopf_multiple_doc(m: _model.Model, cr, report) -> dict:
    bases, branch = report.bases, report.branch
    doc = {
        "model": m.kind,
        "k0": _f9(cr.k0),
        "kappa0": _f9(cr.kappa0),
        "lam0": _f9(cr.lam0),
        "mu0": _f9(bases.mu0),
        "kernel": {
            "pairing_s": _c9(bases.s),
            "abs_s": _f9(abs(bases.s)),
            "sigma_min": _f9(bases.sigma_min),
            "v0": [_c9(z) for z in bases.v0],
            "w0": [_c9(z) for z in bases.w0],
        },
        "a": _c9(report.a),
        "monomials": list(_hm.MONOMIALS),
        "cubic_coefficients": {
            "component_1": [_c9(z) for z in report.tensor.coefficient_vector(1)],
            "component_2": [_c9(z) for z in report.tensor.coefficient_vector(2)],
        },
        "zero_monomials": list(_hm.ZERO_MONOMIALS),
        "branch": {
            "symmetric_found": bool(branch.symmetric_found),
            "selected": (None if branch.selected is None
                         else _branch_root_doc(branch.selected)),
            "roots": [_branch_root_doc(r) for r in branch.roots],
        },
        "determinant": (None if report.determinant is None else {
            "reported_blocks": _f9(report.determinant.value_reported),
            "full_blocks": _f9(report.determinant.value_full),
        }),
    }
    return doc


def _tensor_rows(tensor):
    for l, i, j, k, re, im in tensor.rows():
        yield (l, i, j, k, _fmt_cell(re), _fmt_cell(im))


def _diagnostics_doc(diag) -> dict:
    return {
        "growth_rate": _f9(diag.growth_rate),
        "growth_window": [_f9(diag.growth_window[0]),
                          _f9(diag.growth_window[1])],
        "angular_frequency": _f9(diag.angular_frequency),
        "period": None if diag.period is None else _f9(diag.period),
        "autocorrelation": _f9(diag.autocorrelation),
        "amplitude": _f9(diag.amplitude),
        "amplitude_rel_std": _f9(diag.amplitude_rel_std),
        "saturated": bool(diag.saturated),
        "limit_cycle": bool(diag.limit_cycle),
    }


# ----------------------------------------------------------------------
# figures
# ----------------------------------------------------------------------

def _render_dispersion_figures(scan, report, outdir: Path, prefix: str) -> list:
    plt = _figure_axes()
    written = []

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for j in range(4):
        ax.plot(scan.k_grid, scan.branches[j].real, lw=1.2,
                label=f"Re z_{j + 1}")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("k")
    ax.set_ylabel("Re z(k)")
    ax.legend(loc="best", fontsize=8)
    ax.set_title(f"{prefix}: eigenvalue branches")
    path = outdir / f"{prefix}_branches.png"
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    omega = np.max(np.stack([b.real for b in scan.branches]), axis=0)
    ax.plot(scan.k_grid, omega, lw=1.4, color="tab:red")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.plot([report.k_at_max], [report.max_growth], "o", ms=5,
            color="tab:blue")
    ax.set_xlabel("k")
    ax.set_ylabel("max_j Re z_j(k)")
    ax.set_title(f"{prefix}: growth rate ({report.classification})")
    path = outdir / f"{prefix}_growth_rate.png"
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    written.append(path)
    return written


def _render_simulation_figures(result, diag, outdir: Path) -> list:
    plt = _figure_axes()
    written = []

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.semilogy(result.times, result.mode1_amplitude, lw=1.2)
    if np.isfinite(diag.growth_window[0]):
        ax.axvspan(*diag.growth_window, color="tab:orange", alpha=0.15,
                   label="growth fit window")
        ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("t")
    ax.set_ylabel("|mode 1|")
    ax.set_title("mode-1 amplitude")
    path = outdir / "amplitude.png"
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    written.append(path)

    if result.snapshots:
        grid_n = 128
        fields = np.stack([
            _simulate.field_on_grid(snap, grid_n)[0] for snap in
            result.snapshots
        ])
        fig, ax = plt.subplots(figsize=(7, 4.5))
        extent = (0.0, 1.0, float(result.snapshot_times[0]),
                  float(result.snapshot_times[-1]))
        im = ax.imshow(fields, origin="lower", aspect="auto", extent=extent,
                       cmap="RdBu_r")
        fig.colorbar(im, ax=ax, label="y1")
        ax.set_xlabel("x")
        ax.set_ylabel("t")
        ax.set_title("species-1 space-time field")
        path = outdir / "spacetime.png"
        fig.tight_layout()
        fig.savefig(path, dpi=130)
        plt.close(fig)
        written.append(path)
    return written


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

@click.group()
@click.version_option(package_name="artifact", prog_name="myxoripple")
def main() -> None:
    """Numerical toolkit for the four-species rippling models."""


@main.command("model")
@_model_options
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the JSON document here as well.")
def model_cmd(kind, config_path, delta, epsilon0, out):
    """Dump parameters, matrices, and structural checks."""
    config = _load_config(config_path)
    m = _build(config, kind, delta, epsilon0)
    mass = _model.check_mass_structure(m)
    refl = _model.check_reflection(m)
    doc = {
        "kind": m.kind,
        "delta": _f9(m.delta),
        "epsilon0": _f9(m.epsilon0),
        "c": [_f9(x) for x in m.c],
        "matrices": {
            "D": _matrix(m.D), "U": _matrix(m.U), "A0": _matrix(m.A0),
            "M": _matrix(m.M), "A": _matrix(m.A), "DA": _matrix(m.DA),
        },
        "mass_structure_ok": bool(mass.ok),
        "reflection_conditions_met": bool(refl.conditions_met),
    }
    _emit_json(doc, out)


@main.command("dispersion")
@_model_options
@click.option("--k-min", type=float, default=None)
@click.option("--k-max", type=float, default=None)
@click.option("--step", type=float, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV path (k, re_z1..re_z4, im_z1..im_z4, omega).")
@click.option("--report", "report_dir", type=click.Path(file_okay=False),
              default=None, help="Directory for CSV plus rendered figures.")
def dispersion_cmd(kind, config_path, delta, epsilon0, k_min, k_max, step,
                   out, report_dir):
    """Scan eigenvalue branches over k and classify the instability."""
    config = _load_config(config_path)
    m = _build(config, kind, delta, epsilon0)
    scan_cfg = _section(config, "scan", k_min=k_min, k_max=k_max, step=step)
    defaults = _dispersion.DEFAULT_SCAN_RANGE[m.kind]
    lo = scan_cfg.get("k_min", defaults[0])
    hi = scan_cfg.get("k_max", defaults[1])
    h = scan_cfg.get("step", defaults[2])
    if not (hi > lo and h > 0):
        raise click.UsageError("scan requires k_max > k_min and step > 0")
    k_grid = np.arange(lo, hi + 0.5 * h, h)
    scan = _dispersion.eigen_branches(m, k_grid)
    report = _dispersion.growth_rate_and_classify(m, scan)

    omega = np.max(np.stack([b.real for b in scan.branches]), axis=0)
    rows = (
        [_fmt_cell(k)]
        + [_fmt_cell(scan.branches[j][i].real) for j in range(4)]
        + [_fmt_cell(scan.branches[j][i].imag) for j in range(4)]
        + [_fmt_cell(omega[i])]
        for i, k in enumerate(scan.k_grid)
    )
    header = (["k"] + [f"re_z{j}" for j in (1, 2, 3, 4)]
              + [f"im_z{j}" for j in (1, 2, 3, 4)] + ["omega"])

    written = []
    if report_dir:
        outdir = Path(report_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        csv_path = outdir / "dispersion.csv"
        _write_csv(csv_path, header, rows)
        written.append(csv_path)
        written += _render_dispersion_figures(scan, report, outdir, m.kind)
    elif out:
        _write_csv(out, header, rows)
        written.append(Path(out))

    doc = {
        "model": m.kind,
        "k_range": [_f9(lo), _f9(hi), _f9(h)],
        "classification": report.classification,
        "max_growth": _f9(report.max_growth),
        "k_at_max": _f9(report.k_at_max),
        "z_at_max": _c9(report.z_at_max),
        "boundary_hit": bool(report.boundary_hit),
        "files": [str(p) for p in written],
    }
    _emit_json(doc, None)


@main.command("crossing")
@_model_options
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def crossing_cmd(kind, config_path, delta, epsilon0, out):
    """Locate the critical wavenumber k0 and frequency kappa0."""
    config = _load_config(config_path)
    m = _build(config, kind, delta, epsilon0)
    cr = _dispersion.find_crossing(m)
    doc = {"model": m.kind}
    doc.update(_crossing_doc(cr))
    _emit_json(doc, out)


@main.command("verify")
@_model_options
@click.option("--n-max", type=int, default=None,
              help="Nonresonance mode bound (default 64).")
@click.option("--m-max", type=int, default=None,
              help="Resolvent-decay verification bound (default adaptive).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def verify_cmd(ctx, kind, config_path, delta, epsilon0, n_max, m_max, out):
    """Run every computable hypothesis check for one model."""
    config = _load_config(config_path)
    m = _build(config, kind, delta, epsilon0)
    ver_cfg = _section(config, "verify", n_max=n_max, m_max=m_max)
    doc = _verify_doc(m, int(ver_cfg.get("n_max", 64)), ver_cfg.get("m_max"))
    _emit_json(doc, out)
    if not doc["passed"]:
        ctx.exit(1)


@main.command("hopf-single")
@_model_options
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def hopf_single_cmd(ctx, kind, config_path, delta, epsilon0, out):
    """Single-eigenvalue pipeline: crossing speed and cubic coefficient."""
    config = _load_config(config_path)
    m = _build(config, kind, delta, epsilon0)
    doc = _hopf_single_doc(m)
    _emit_json(doc, out)
    if not doc["crossing_speed"]["transversal"]:
        ctx.exit(1)


@main.command("hopf-multiple")
@_model_options
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--tensor-csv", type=click.Path(dir_okay=False), default=None,
              help="Raw interaction tensor as CSV (l,i,j,k,re,im).")
@click.pass_context
def hopf_multiple_cmd(ctx, kind, config_path, delta, epsilon0, out,
                      tensor_csv):
    """Double-eigenvalue pipeline: reduced equations, branch, determinant."""
    config = _load_config(config_path)
    if kind is None and "model" not in config:
        kind = "symmetric"
    m = _build(config, kind, delta, epsilon0)
    cr = _dispersion.find_crossing(m)
    try:
        report = _hm.verify_hopf_multiple(m, cr.lam0, cr.kappa0)
    except _hm.ResonanceError as exc:
        raise click.ClickException(str(exc))
    doc = _hopf_multiple_doc(m, cr, report)
    if tensor_csv:
        _write_csv(tensor_csv, ("l", "i", "j", "k", "re", "im"),
                   _tensor_rows(report.tensor))
        doc["files"] = [tensor_csv]
    _emit_json(doc, out)
    if doc["branch"]["selected"] is None:
        ctx.exit(1)


@main.command("simulate")
@_model_options
@click.option("--lam", type=float, default=None,
              help="Domain length parameter (absolute).")
@click.option("--offset", type=float, default=None,
              help="Run at lam0 + offset (default -0.015 when --lam unset).")
@click.option("-T", "--duration", "duration", type=float, default=None,
              help="Integration time (default 40).")
@click.option("--dt", type=float, default=None, help="Time step (default 1e-3).")
@click.option("-N", "--n-modes", type=int, default=None,
              help="Spectral resolution (default 64).")
@click.option("--amplitude", type=float, default=None,
              help="Seed amplitude of mode 1 (default 1e-4).")
@click.option("--zero-mode", type=click.Choice(["free", "slaved"]),
              default=None,
              help="Uniform-mode handling: faithful dynamics or adiabatic "
                   "slaving (default free).")
@click.option("--record-every", type=int, default=None,
              help="Diagnostic sampling stride in steps (default 10).")
@click.option("--snapshots", type=int, default=None,
              help="Number of space-time snapshots (default 200).")
@click.option("--grid", type=int, default=None,
              help="Spatial points per snapshot row (default 128).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Diagnostics JSON path.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False),
              default=None, help="Space-time CSV path (t, x, y1..y4).")
@click.option("--report", "report_dir", type=click.Path(file_okay=False),
              default=None, help="Directory for CSV, JSON, and figures.")
@click.pass_context
def simulate_cmd(ctx, kind, config_path, delta, epsilon0, lam, offset,
                 duration, dt, n_modes, amplitude, zero_mode, record_every,
                 snapshots, grid, out, csv_path, report_dir):
    """Integrate the nonlinear system and report growth/saturation data."""
    config = _load_config(config_path)
    m = _build(config, kind, delta, epsilon0)
    sim = _section(config, "simulate", lam=lam, offset=offset, T=duration,
                   dt=dt, N=n_modes, amplitude=amplitude,
                   zero_mode=zero_mode, record_every=record_every,
                   snapshots=snapshots, grid=grid)
    if "lam" in sim and "offset" in sim:
        raise click.UsageError("give either lam or offset, not both")
    if "lam" in sim:
        run_lam = float(sim["lam"])
    else:
        cr = _dispersion.find_crossing(m)
        run_lam = cr.lam0 + float(sim.get("offset", -0.015))
    T = float(sim.get("T", 40.0))
    n_snapshots = int(sim.get("snapshots", 200))
    grid_n = int(sim.get("grid", 128))
    n_res = int(sim.get("N", 64))
    if grid_n < 2 * n_res + 1:
        raise click.UsageError(
            f"grid must be at least 2 N + 1 = {2 * n_res + 1} points")
    want_spacetime = bool(csv_path or report_dir)

    try:
        result = _simulate.run(
            m, run_lam, T,
            dt=float(sim.get("dt", 1e-3)),
            N=n_res,
            amplitude=float(sim.get("amplitude", 1e-4)),
            record_every=int(sim.get("record_every", 10)),
            n_snapshots=n_snapshots if want_spacetime else 0,
            zero_mode=str(sim.get("zero_mode", "free")),
        )
    except _simulate.BlowupDetected as exc:
        doc = {
            "model": m.kind, "lam": _f9(run_lam),
            "blowup": {"time": _f9(exc.time), "norm": _f9(exc.norm)},
        }
        _emit_json(doc, out)
        ctx.exit(1)
    except ValueError as exc:
        raise click.UsageError(str(exc))

    diag = _simulate.run_diagnostics(result)
    doc = {
        "model": m.kind,
        "lam": _f9(run_lam),
        "T": _f9(T),
        "dt": _f9(result.dt),
        "zero_mode": str(sim.get("zero_mode", "free")),
        "blowup": None,
        "diagnostics": _diagnostics_doc(diag),
    }

    def spacetime_rows():
        xs = np.arange(grid_n) / grid_n
        for t_snap, modes in zip(result.snapshot_times, result.snapshots):
            fields = _simulate.field_on_grid(modes, grid_n)
            for ix in range(grid_n):
                yield ([_fmt_cell(t_snap), _fmt_cell(xs[ix])]
                       + [_fmt_cell(fields[sp, ix]) for sp in range(4)])

    header = ["t", "x", "y1", "y2", "y3", "y4"]
    written = []
    if report_dir:
        outdir = Path(report_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        st_path = outdir / "spacetime.csv"
        _write_csv(st_path, header, spacetime_rows())
        written.append(st_path)
        diag_path = outdir / "diagnostics.json"
        diag_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        written.append(diag_path)
        written += _render_simulation_figures(result, diag, outdir)
    elif csv_path:
        _write_csv(csv_path, header, spacetime_rows())
        written.append(Path(csv_path))
    doc["files"] = [str(p) for p in written]
    _emit_json(doc, out)


@main.command("reproduce")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Full report as JSON.")
@click.option("--report", "report_dir", type=click.Path(file_okay=False),
              default=None,
              help="Directory for the CSV table and growth-rate figures.")
@click.pass_context
def reproduce_cmd(ctx, out, report_dir):
    """Recompute every reference value and print the comparison table."""
    rep = _reference.reproduce_report()
    width = max(len(r.name) for r in rep.rows)
    for r in rep.rows:
        mark = "PASS" if r.passed else "FAIL"
        click.echo(f"{mark}  {r.name:<{width}}  expected "
                   f"{_reference.format_value(r.expected):>28}  computed "
                   f"{_reference.format_value(r.computed):>28}  "
                   f"[{r.describe_tolerance()}]")
    for note in rep.notes:
        click.echo(f"note: {note}")
    click.echo("ALL CHECKS PASSED" if rep.passed else "CHECK FAILURES PRESENT")

    def _raw(v):
        if isinstance(v, bool):
            return v
        if isinstance(v, complex):
            return _c9(v)
        return _f9(v)

    doc = {
        "rows": [
            {"name": r.name, "expected": _raw(r.expected),
             "computed": _raw(r.computed), "tolerance": r.describe_tolerance(),
             "passed": r.passed, "note": r.note}
            for r in rep.rows
        ],
        "notes": list(rep.notes),
        "passed": rep.passed,
    }
    if out:
        Path(out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if report_dir:
        outdir = Path(report_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        _write_csv(
            outdir / "reproduction.csv",
            ("name", "expected", "computed", "tolerance", "passed", "note"),
            ((r.name, _reference.format_value(r.expected),
              _reference.format_value(r.computed), r.describe_tolerance(),
              "pass" if r.passed else "fail", r.note) for r in rep.rows),
        )
        for kind in ("nonsymmetric", "symmetric"):
            m = _model.build_model(kind)
            report = _dispersion.growth_rate_and_classify(m)
            _render_dispersion_figures(report.scan, report, outdir, kind)
    if not rep.passed:
        ctx.exit(1)


if __name__ == "__main__":
    main()
