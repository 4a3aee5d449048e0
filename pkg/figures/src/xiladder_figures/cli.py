"""Figure drivers: one subcommand per figure id, plus make-all and generate-inputs.

``generate-inputs`` shells out to the ``xiladder`` CLI to produce every input
table under the conventional names that ``make-all`` consumes:

    phase.csv, triple.csv          (fig2a)
    cut_na3.csv, cut_na8.csv       (fig2b)
    sweep.csv                      (fig3a, fig3b)
    spectrum.csv                   (fig5a, fig5b)
    thermo_fan.csv, thermo_m.csv   (fig6a, fig6b)
    expect.csv                     (fig7)
    photons_finite.csv, photons_limit.csv  (fig8)
"""

from __future__ import annotations

import argparse
import os
import shutil
import subprocess
import sys

from .render import FigureSpec, render
from .tables import SchemaError

SQRT2 = "1.4142135623730951"

MAKE_ALL_INPUTS = {
    "fig2a": ("phase.csv", "triple.csv"),
    "fig2b": ("cut_na3.csv", "cut_na8.csv"),
    "fig3a": ("sweep.csv",),
    "fig3b": ("sweep.csv",),
    "fig5a": ("spectrum.csv",),
    "fig5b": ("spectrum.csv",),
    "fig6a": ("thermo_fan.csv",),
    "fig6b": ("thermo_m.csv",),
    "fig7": ("expect.csv",),
    "fig8": ("photons_finite.csv", "photons_limit.csv"),
}

_INPUT_FLAGS = {
    "fig2a": (("--phase", "phase table"), ("--triple", "triple-points table")),
    "fig2b": (("--cut", "ground-energy cut table (repeatable)"),),
    "fig3a": (("--sweep", "fidelity sweep table"),),
    "fig3b": (("--sweep", "fidelity sweep table"),),
    "fig5a": (("--spectrum", "sector spectrum table"),),
    "fig5b": (("--spectrum", "sector spectrum table"),),
    "fig6a": (("--thermo", "spectral fan table"),),
    "fig6b": (("--thermo", "spectral fan table"),),
    "fig7": (("--expect", "expectation values table"),),
    "fig8": (("--finite", "finite-M photon table"), ("--limit", "limit photon table")),
}


def _figure_command(args) -> str:
    fid = args.figure_id
    if fid == "fig2b":
        inputs = tuple(args.cut)
    else:
        inputs = tuple(getattr(args, flag.lstrip("-").replace("-", "_")) for flag, _ in _INPUT_FLAGS[fid])
    path = render(FigureSpec(figure_id=fid, inputs=inputs, output=args.out))
    return f"figure={fid} file={path}"


def _make_all(args) -> str:
    rendered = []
    for fid, names in MAKE_ALL_INPUTS.items():
        inputs = tuple(os.path.join(args.indir, name) for name in names)
        for path in inputs:
            if not os.path.exists(path):
                raise SchemaError(f"{fid}: missing input table {path} (run generate-inputs)")
        out = os.path.join(args.outdir, f"{fid}.png")
        rendered.append(render(FigureSpec(figure_id=fid, inputs=inputs, output=out)))
    return f"figures={len(rendered)} outdir={args.outdir}"


def _run_primary(outdir: str, cli_args: list, rename: dict) -> None:
    exe = shutil.which("xiladder")
    if exe is None:
        raise SchemaError("the 'xiladder' CLI is not on PATH; install the primary package")
    subprocess.run([exe, *cli_args, "--outdir", outdir], check=True, capture_output=True, text=True)
    for src, dst in rename.items():
        os.replace(os.path.join(outdir, src), os.path.join(outdir, dst))


def _generate_inputs(args) -> str:
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    grid = f"0:3:{args.grid_nodes}"
    jobs = [
        (["phase-diagram", "--na", "2", "--mu12", grid, "--mu23", grid], {}),
        (["cut", "--na", "3", "--mu23", "0", "--range", "0:3", "--delta", "0.01"],
         {"cut.csv": "cut_na3.csv"}),
        (["cut", "--na", "8", "--mu23", "0", "--range", "0:3", "--delta", "0.01"],
         {"cut.csv": "cut_na8.csv"}),
        (["sweep", "--na", "2", "--var", "mu23", "--range", "0.2:3", "--delta",
          str(args.sweep_delta), "--other-offset", "-0.2"], {}),
        (["spectrum", "--na", "10", "--m", "0:30", "--mu12", "1", "--mu23", SQRT2], {}),
        (["thermo", "--mu12", "0:2:201", "--mmax", "7"], {"thermo.csv": "thermo_fan.csv"}),
        (["thermo", "--mu12", "1", "--mmax", "30"], {"thermo.csv": "thermo_m.csv"}),
        (["observables", "--na", "5", "--m", "7", "--mu12", "1", "--mu23", SQRT2], {}),
        (["photons", "--na", "4", "--m", "8", "--mu12", "1", "--mu23", SQRT2],
         {"photons.csv": "photons_finite.csv"}),
        (["photons", "--na", "4", "--limit", "--tol", "1e-6", "--mu12", "1", "--mu23", SQRT2],
         {"photons.csv": "photons_limit.csv"}),
    ]
    for cli_args, rename in jobs:
        _run_primary(outdir, cli_args, rename)
    return f"inputs={len(jobs)} outdir={outdir}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xiladder-figures",
        description="Render xiladder CSV tables into the standard figure set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for fid, flags in _INPUT_FLAGS.items():
        p = sub.add_parser(fid, help=f"render {fid}")
        for flag, help_text in flags:
            if fid == "fig2b":
                p.add_argument(flag, action="append", required=True, help=help_text)
            else:
                p.add_argument(flag, required=True, help=help_text)
        p.add_argument("--out", default=f"{fid}.png", help="output image path")
        p.set_defaults(run=_figure_command, figure_id=fid)

    p = sub.add_parser("make-all", help="render every figure from a directory of tables")
    p.add_argument("--indir", required=True, help="directory holding the conventional tables")
    p.add_argument("--outdir", default=".", help="directory for the images")
    p.set_defaults(run=_make_all)

    p = sub.add_parser("generate-inputs", help="produce all input tables via the xiladder CLI")
    p.add_argument("--outdir", required=True)
    p.add_argument("--grid-nodes", type=int, default=301, help="phase-diagram nodes per axis")
    p.add_argument("--sweep-delta", type=float, default=1e-3, help="fidelity sweep step")
    p.set_defaults(run=_generate_inputs)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        summary = args.run(args)
    except (SchemaError, OSError, subprocess.CalledProcessError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
