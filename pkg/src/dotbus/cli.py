"""Command-line front end.

Subcommands:
  device    derived circuit quantities from the configured geometry
  epr       entangled-pair generation under the configured noise
  sweep     error-probability grid over (gamma, gamma_phi), written as CSV
  validate  full-model vs effective-model consistency checks

Exit codes: 0 success, 2 configuration error, 3 numerical-diagnostic or
threshold failure, 4 I/O error.  All outputs are deterministic for a fixed
config; CSV files are byte-stable across runs and thread counts.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .algebra import expm_propagator
from .config import ConfigError, RunConfig, parse_config
from .device import (
    bare_frequency,
    coupling_g,
    decay_kappa,
    mixing_angle,
    phase_shift,
    renormalized_frequency,
)
from .dynamics import DiagnosticError
from .hamiltonians import analytic_u, h_reduced_two_qubit
from .protocols import (
    decoherence_sweep,
    dispersive_validity,
    epr_generation,
    epr_target,
    gate_time_t0,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIAGNOSTIC = 3
EXIT_IO = 4

REFERENCE_POINT_MHZ = (0.2, 0.5)
REFERENCE_CLAIM = "reference claim: below 1%"


def _fmt_freq(omega: float) -> str:
    """Angular value plus the f = omega/2pi reading in sensible units."""
    f = omega / (2.0 * math.pi)
    for unit, scale in (("GHz", 1e9), ("MHz", 1e6), ("kHz", 1e3), ("Hz", 1.0)):
        if abs(f) >= scale or unit == "Hz":
            return f"{omega:.6e} rad/s  ({f / scale:.6g} {unit})"
    return f"{omega:.6e} rad/s"


def _write_resolved(cfg: RunConfig, out_path: str) -> None:
    with open(out_path + ".resolved.json", "w") as fh:
        fh.write(cfg.dump_json())


def cmd_device(cfg: RunConfig, out, args) -> int:
    tlr, dot, coupler = cfg.tlr, cfg.dot, cfg.coupler
    w0 = bare_frequency(tlr)
    w = renormalized_frequency(tlr)
    delta = phase_shift(tlr)
    kappa = decay_kappa(tlr)
    g = cfg.model.couplings_g[0]
    tau = cfg.model.detunings_tau[0]
    lam = cfg.model.lam
    lines = [
        f"bare mode frequency     omega0 = {_fmt_freq(w0)}",
        f"renormalized frequency  omega  = {_fmt_freq(w)}",
        f"mode phase shift        delta  = {delta:.6e} rad",
        f"cavity decay factor     kappa  = {_fmt_freq(kappa)}",
        f"device coupling         g(x)   = {_fmt_freq(coupling_g(tlr, dot, coupler))}",
        f"model coupling          g      = {_fmt_freq(g)}",
        f"detuning                tau    = {_fmt_freq(tau)}  (tau/g = {tau / g:.6g})",
        f"effective exchange      lambda = {_fmt_freq(lam)}",
        f"entangling time         t0     = {gate_time_t0(lam):.6e} s",
        f"qubit mixing angle      theta  = {mixing_angle(dot):.6f} rad",
    ]
    print("\n".join(lines))
    if out:
        with open(out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        _write_resolved(cfg, out)
    return EXIT_OK


def cmd_epr(cfg: RunConfig, out, args) -> int:
    record_every = 1 if (out or cfg.timeseries) else None
    report = epr_generation(cfg.model, cfg.noise, record_every=record_every)
    gamma_mhz = cfg.noise.relaxation[0] / (2e6 * math.pi)
    gamma_phi_mhz = cfg.noise.dephasing[0] / (2e6 * math.pi)
    print(f"entangling time t0      = {report.t0:.6e} s")
    print(f"rates: gamma/2pi = {gamma_mhz:.6g} MHz, gamma_phi/2pi = {gamma_phi_mhz:.6g} MHz")
    print(f"fidelity to target      = {report.fidelity:.10f}")
    print(f"error probability D     = {report.error_d:.10f}")
    print(f"concurrence             = {report.concurrence:.10f}")
    print(
        f"reference operating point gamma/2pi = {REFERENCE_POINT_MHZ[0]} MHz, "
        f"gamma_phi/2pi = {REFERENCE_POINT_MHZ[1]} MHz ({REFERENCE_CLAIM}); "
        f"this run: D = {report.error_d:.4%}"
    )
    if out:
        target = epr_target()
        result = report.result
        with open(out, "w") as fh:
            fh.write("t,fidelity,trace,min_eig\n")
            for t, rho, tr_dev, min_eig in zip(
                result.times,
                result.states,
                result.diagnostics["trace_dev"],
                result.diagnostics["min_eig"],
            ):
                fid = float(np.real(target.amplitudes.conj() @ rho @ target.amplitudes))
                fh.write(f"{t:.10e},{fid:.10e},{1.0 + tr_dev:.10e},{min_eig:.10e}\n")
        _write_resolved(cfg, out)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, out, args) -> int:
    out = out or "sweep.csv"
    sweep = decoherence_sweep(
        cfg.model, cfg.sweep_gamma_axis, cfg.sweep_gamma_phi_axis, threads=args.threads
    )
    rows = []
    for i, gamma in enumerate(sweep.gamma_axis):
        for j, gamma_phi in enumerate(sweep.gamma_phi_axis):
            rows.append(
                "%.10e,%.10e,%.10e"
                % (gamma / (2e6 * math.pi), gamma_phi / (2e6 * math.pi), sweep.error_grid[i, j])
            )
    with open(out, "w") as fh:
        fh.write("gamma_over_2pi_MHz,gamma_phi_over_2pi_MHz,error_D\n")
        fh.write("\n".join(rows) + "\n")
    _write_resolved(cfg, out)
    print(f"wrote {len(rows)} sweep rows to {out}")
    print(
        f"reference operating point gamma/2pi = {REFERENCE_POINT_MHZ[0]} MHz, "
        f"gamma_phi/2pi = {REFERENCE_POINT_MHZ[1]} MHz ({REFERENCE_CLAIM})"
    )
    return EXIT_OK


def cmd_validate(cfg: RunConfig, out, args) -> int:
    report = dispersive_validity(cfg.model)
    lam = cfg.model.lam
    rng = np.random.default_rng(20260824)
    h20 = h_reduced_two_qubit(lam)
    unitary_dev = 0.0
    for t in rng.uniform(0.0, 4.0 * gate_time_t0(lam), size=50):
        dev = np.max(np.abs(analytic_u(lam, t) - expm_propagator(h20, t)))
        unitary_dev = max(unitary_dev, float(dev))

    checks = [
        ("full_vs_effective_fidelity",
         report.fidelity_full_vs_effective >= 0.95,
         f"{report.fidelity_full_vs_effective:.8f} (threshold >= 0.95)"),
        ("max_cavity_occupation",
         report.max_cavity_occupation < report.cavity_bound,
         f"{report.max_cavity_occupation:.3e} (bound {report.cavity_bound:.3e})"),
        ("photon_cutoff_convergence",
         report.cutoff_shift < 1e-6,
         f"{report.cutoff_shift:.3e} (threshold < 1e-6)"),
        ("closed_form_unitary_deviation",
         unitary_dev < 1e-10,
         f"{unitary_dev:.3e} (threshold < 1e-10)"),
    ]
    lines = [f"tau/g = {report.tau_over_g:.6g}"]
    ok = True
    for name, passed, detail in checks:
        lines.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
        ok = ok and passed
    print("\n".join(lines))
    if out:
        with open(out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        _write_resolved(cfg, out)
    if not ok:
        failing = ", ".join(name for name, passed, _ in checks if not passed)
        print(f"validation failed: {failing}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    return EXIT_OK


_COMMANDS = {
    "device": cmd_device,
    "epr": cmd_epr,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dotbus",
        description="Dispersively coupled double-dot qubits on a resonator bus",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to JSON run configuration")
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--threads", type=int, default=None,
                       help="sweep parallelism (output is independent of this)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        return _COMMANDS[args.command](cfg, args.out, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DiagnosticError as exc:
        print(f"numerical diagnostics failed: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
