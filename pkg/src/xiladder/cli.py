"""Command-line front-end: every computation as a subcommand with CSV/JSON output.

Range syntax: grids take ``lo:hi:count``, sweeps take ``lo:hi`` plus
``--delta``, integer sector ranges take ``lo:hi`` (or a single value).  Each
run prints one machine-parsable ``key=value`` summary line on success.  The
default output directory is the XILADDER_OUTDIR environment variable, or the
working directory.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io
from .basis import enumerate_basis
from .criticality import (
    GridSpec,
    find_triple_points,
    mu12_line,
    mu23_line,
    offset_path,
    phase_diagram,
    sweep_line,
)
from .errors import XiLadderError
from .hamiltonian import build_sector
from .observables import expectations, photon_distribution, photon_distribution_limit
from .params import ModelParams, double_resonance, read_config
from .spectra import diagonalize, global_ground
from .thermo import thermo_fan


def _parse_grid(text: str):
    try:
        lo, hi, count = text.split(":")
        return float(lo), float(hi), int(count)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi:count, got {text!r}") from exc


def _parse_span(text: str):
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from exc


def _parse_int_range(text: str):
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return int(lo), int(hi)
        value = int(text)
        return value, value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer or lo:hi, got {text!r}") from exc


def _parse_mu12_axis(text: str):
    """Either lo:hi:count or a single value (a one-point axis)."""
    if ":" in text:
        lo, hi, count = _parse_grid(text)
        return np.linspace(lo, hi, count)
    try:
        return np.array([float(text)])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a float or lo:hi:count, got {text!r}") from exc


def _add_param_options(parser: argparse.ArgumentParser, couplings: bool = True) -> None:
    group = parser.add_argument_group("model parameters")
    group.add_argument("--na", type=int, default=None, help="number of atoms")
    if couplings:
        group.add_argument("--mu12", type=float, default=None, help="coupling of the 1-2 transition")
        group.add_argument("--mu23", type=float, default=None, help="coupling of the 2-3 transition")
    group.add_argument(
        "--resonance",
        choices=("double", "custom"),
        default="double",
        help="double: level frequencies (0, omega, 2*omega); custom: use --omega1..3",
    )
    group.add_argument("--omega", type=float, default=None, help="field frequency (default 1)")
    group.add_argument("--omega1", type=float, default=None)
    group.add_argument("--omega2", type=float, default=None)
    group.add_argument("--omega3", type=float, default=None)
    group.add_argument("--config", default=None, help="flat key=value parameter file")


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("output")
    group.add_argument("--outdir", default=None, help="output directory (env XILADDER_OUTDIR)")
    group.add_argument("--format", choices=("csv", "json"), default="csv")
    group.add_argument("--threads", type=int, default=1, help="worker thread cap")


def _build_params(args, parser: argparse.ArgumentParser) -> ModelParams:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    for key in ("na", "mu12", "mu23", "omega", "omega1", "omega2", "omega3"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    omega = values.get("omega", 1.0)
    na = int(values.get("na", 1))
    if args.resonance == "double":
        base = double_resonance(omega=omega, na=na)
        expected = {"omega1": base.omega1, "omega2": base.omega2, "omega3": base.omega3}
        for key, want in expected.items():
            if key in values and values[key] != want:
                parser.error(
                    f"{key}={values[key]} contradicts --resonance double "
                    f"(expected {want}); use --resonance custom"
                )
        return base.with_couplings(values.get("mu12", 0.0), values.get("mu23", 0.0))
    return ModelParams(
        omega=omega,
        omega1=values.get("omega1", 0.0),
        omega2=values.get("omega2", omega),
        omega3=values.get("omega3", 2.0 * omega),
        mu12=values.get("mu12", 0.0),
        mu23=values.get("mu23", 0.0),
        na=na,
    )


def _outpath(args, name: str) -> str:
    outdir = args.outdir or os.environ.get("XILADDER_OUTDIR") or "."
    ext = "json" if args.format == "json" else "csv"
    return os.path.join(outdir, f"{name}.{ext}")


def _sweep_rows(trace):
    for s in trace.samples:
        yield (s.lam, s.mu12, s.mu23, s.winning_m, s.energy, s.fidelity_to_next, s.chi)


_SWEEP_HEADER = ["lambda", "mu12", "mu23", "M", "E", "F", "chi"]


def _cmd_basis(args, parser) -> str:
    basis = enumerate_basis(args.na, args.m)
    path = io.write_table(
        _outpath(args, "basis"),
        ["nu", "q", "r"],
        [(s.nu, s.q, s.r) for s in basis.states],
        args.format,
    )
    return f"na={basis.na} m={basis.m} dim={basis.dimension} file={path}"


def _cmd_dump_h(args, parser) -> str:
    params = _build_params(args, parser)
    matrix = build_sector(params, enumerate_basis(params.na, args.m))
    header = [f"nu{s.nu}_q{s.q}_r{s.r}" for s in matrix.basis.states]
    path = io.write_table(
        _outpath(args, "hmatrix"), header, matrix.entries.tolist(), args.format
    )
    return f"na={params.na} m={args.m} dim={matrix.basis.dimension} file={path}"


def _cmd_spectrum(args, parser) -> str:
    params = _build_params(args, parser)
    m_lo, m_hi = args.m
    rows = []
    for m in range(m_lo, m_hi + 1):
        spectrum = diagonalize(build_sector(params, enumerate_basis(params.na, m)))
        rows.extend((m, k, float(e)) for k, e in enumerate(spectrum.eigenvalues))
    path = io.write_table(_outpath(args, "spectrum"), ["M", "k", "E"], rows, args.format)
    return f"na={params.na} m={m_lo}:{m_hi} rows={len(rows)} file={path}"


def _cmd_ground(args, parser) -> str:
    params = _build_params(args, parser)
    record = global_ground(params)
    return f"M={record.winning_m} E={io.fmt(record.energy)}"


def _cmd_sweep(args, parser) -> str:
    params = _build_params(args, parser)
    lo, hi = args.range
    if args.other_offset is not None and args.other is not None:
        parser.error("--other and --other-offset are mutually exclusive")
    if args.var == "mu23":
        if args.other_offset is not None:
            path_fn = offset_path(args.other_offset)
            desc = f"mu12 = mu23 + {args.other_offset}"
        else:
            path_fn = mu23_line(args.other or 0.0)
            desc = f"mu12 = {args.other or 0.0}"
    else:
        if args.other_offset is not None:
            path_fn = lambda lam: (lam, lam + args.other_offset)  # noqa: E731
            desc = f"mu23 = mu12 + {args.other_offset}"
        else:
            path_fn = mu12_line(args.other or 0.0)
            desc = f"mu23 = {args.other or 0.0}"
    trace = sweep_line(
        params, path_fn, lo, hi, args.delta, description=desc, threads=args.threads
    )
    path = io.write_table(_outpath(args, "sweep"), _SWEEP_HEADER, _sweep_rows(trace), args.format)
    changes = sum(
        1
        for a, b in zip(trace.samples, trace.samples[1:])
        if a.winning_m != b.winning_m
    )
    return f"samples={len(trace.samples)} label_changes={changes} file={path}"


def _cmd_cut(args, parser) -> str:
    params = _build_params(args, parser)
    lo, hi = args.range
    mu23 = params.mu23
    trace = sweep_line(
        params,
        mu12_line(mu23),
        lo,
        hi,
        args.delta,
        description=f"mu23 = {mu23}",
        threads=args.threads,
    )
    path = io.write_table(_outpath(args, "cut"), _SWEEP_HEADER, _sweep_rows(trace), args.format)
    changes = sum(
        1
        for a, b in zip(trace.samples, trace.samples[1:])
        if a.winning_m != b.winning_m
    )
    return f"samples={len(trace.samples)} label_changes={changes} file={path}"


def _cmd_phase_diagram(args, parser) -> str:
    params = _build_params(args, parser)
    (x_lo, x_hi, x_n) = args.mu12_grid
    (y_lo, y_hi, y_n) = args.mu23_grid
    grid = GridSpec(x_lo, x_hi, x_n, y_lo, y_hi, y_n)
    diagram = phase_diagram(params, grid, threads=args.threads)
    xs = grid.mu12_values
    ys = grid.mu23_values
    rows = []
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            rows.append((float(x), float(y), int(diagram.labels[i, j])))
    path = io.write_table(_outpath(args, "phase"), ["mu12", "mu23", "M"], rows, args.format)
    triples = find_triple_points(diagram)
    tri_rows = [
        (tp.mu12, tp.mu23, "|".join(str(l) for l in tp.labels)) for tp in triples
    ]
    tri_path = io.write_table(
        _outpath(args, "triple"), ["mu12", "mu23", "labels"], tri_rows, args.format
    )
    return (
        f"nodes={len(rows)} triple_points={len(triples)} "
        f"file={path} triple_file={tri_path}"
    )


def _cmd_observables(args, parser) -> str:
    params = _build_params(args, parser)
    spectrum = diagonalize(build_sector(params, enumerate_basis(params.na, args.m)))
    rows = [
        (row.k, row.energy, row.a11, row.a22, row.a33, row.nphot)
        for row in expectations(spectrum)
    ]
    path = io.write_table(
        _outpath(args, "expect"), ["k", "E", "A11", "A22", "A33", "nphot"], rows, args.format
    )
    return f"na={params.na} m={args.m} states={len(rows)} file={path}"


def _cmd_photons(args, parser) -> str:
    params = _build_params(args, parser)
    if args.limit:
        dist = photon_distribution_limit(params, tol=args.tol)
    else:
        if args.m is None:
            parser.error("photons needs --m or --limit")
        spectrum = diagonalize(build_sector(params, enumerate_basis(params.na, args.m)))
        dist = photon_distribution(
            spectrum.eigenvectors[:, args.eigenstate],
            spectrum.basis,
            params=params,
            eigenstate_index=args.eigenstate,
        )
    rows = list(zip((int(n) for n in dist.nu_values), (float(p) for p in dist.probs)))
    path = io.write_table(_outpath(args, "photons"), ["nu", "P"], rows, args.format)
    return f"na={dist.na} m={dist.m} nu0={dist.nu0} support={len(dist.probs)} file={path}"


def _cmd_thermo(args, parser) -> str:
    mu12_values = args.mu12_axis
    rows = thermo_fan(mu12_values, args.mmax)
    path = io.write_table(_outpath(args, "thermo"), ["mu12", "M", "E"], rows, args.format)
    return f"mu12_points={len(mu12_values)} mmax={args.mmax} rows={len(rows)} file={path}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xiladder",
        description=(
            "Exact diagonalization of ladder-type three-level atoms coupled to a "
            "single cavity mode: sector spectra, ground-state phase diagrams, "
            "fidelity sweeps, observables, and photon statistics."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="dump the ordered sector basis")
    p.add_argument("--na", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_output_options(p)
    p.set_defaults(run=_cmd_basis)

    p = sub.add_parser("dump-h", help="dump one sector Hamiltonian matrix")
    p.add_argument("--m", type=int, required=True)
    _add_param_options(p)
    _add_output_options(p)
    p.set_defaults(run=_cmd_dump_h)

    p = sub.add_parser("spectrum", help="eigenvalues of a range of sectors")
    p.add_argument("--m", type=_parse_int_range, required=True, metavar="LO:HI")
    _add_param_options(p)
    _add_output_options(p)
    p.set_defaults(run=_cmd_spectrum)

    p = sub.add_parser("ground", help="global ground state across sectors")
    _add_param_options(p)
    _add_output_options(p)
    p.set_defaults(run=_cmd_ground)

    p = sub.add_parser("sweep", help="fidelity/susceptibility sweep along a coupling line")
    p.add_argument("--var", choices=("mu12", "mu23"), default="mu23", help="sweep variable")
    p.add_argument("--range", type=_parse_span, required=True, metavar="LO:HI")
    p.add_argument("--delta", type=float, default=1e-3, help="parameter step")
    p.add_argument("--other", type=float, default=None, help="fixed value of the other coupling")
    p.add_argument(
        "--other-offset",
        type=float,
        default=None,
        help="other coupling follows the swept one plus this offset",
    )
    _add_param_options(p)
    _add_output_options(p)
    p.set_defaults(run=_cmd_sweep)

    p = sub.add_parser("cut", help="ground-energy cut along mu12 at fixed mu23")
    p.add_argument("--range", type=_parse_span, required=True, metavar="LO:HI")
    p.add_argument("--delta", type=float, default=1e-2)
    _add_param_options(p)
    _add_output_options(p)
    p.set_defaults(run=_cmd_cut)

    p = sub.add_parser("phase-diagram", help="label a coupling grid and refine junctions")
    p.add_argument("--mu12", dest="mu12_grid", type=_parse_grid, required=True, metavar="LO:HI:N")
    p.add_argument("--mu23", dest="mu23_grid", type=_parse_grid, required=True, metavar="LO:HI:N")
    _add_param_options(p, couplings=False)
    _add_output_options(p)
    p.set_defaults(run=_cmd_phase_diagram)

    p = sub.add_parser("observables", help="populations and photon number per eigenstate")
    p.add_argument("--m", type=int, required=True)
    _add_param_options(p)
    _add_output_options(p)
    p.set_defaults(run=_cmd_observables)

    p = sub.add_parser("photons", help="photon-number distribution of a sector ground state")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--eigenstate", type=int, default=0)
    p.add_argument("--limit", action="store_true", help="converge the M -> infinity limit")
    p.add_argument("--tol", type=float, default=1e-6, help="L1 tolerance for --limit")
    _add_param_options(p)
    _add_output_options(p)
    p.set_defaults(run=_cmd_photons)

    p = sub.add_parser("thermo", help="infinite-atom-number spectral fan")
    p.add_argument(
        "--mu12",
        dest="mu12_axis",
        type=_parse_mu12_axis,
        required=True,
        metavar="LO:HI:N|VALUE",
    )
    p.add_argument("--mmax", type=int, required=True)
    _add_output_options(p)
    p.set_defaults(run=_cmd_thermo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        summary = args.run(args, parser)
    except XiLadderError as exc:
        chain = [str(exc)]
        cause = exc.__cause__
        while cause is not None:
            chain.append(str(cause))
            cause = cause.__cause__
        print("error: " + " <- ".join(chain), file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
