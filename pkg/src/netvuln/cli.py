"""Command-line driver.

Exit codes: 0 ok, 1 bad config or arguments, 2 unstable model,
3 infeasible synthesis, 4 ``verify`` found no instability.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, load_config
from .netmodel import LinearModel, validate_model
from .perturb import CREATED, EXISTING, InfeasiblePerturbation, PerturbationError
from .pipeline import (
    PipelineConfig,
    analysis_dict,
    analyze,
    destabilize,
    exact_vulnerability,
    report_dict,
    sig,
)
from .realize import RealizationError
from .simulate import SimulationError, simulate
from .svgplot import line_plot

EXIT_CONFIG, EXIT_UNSTABLE, EXIT_INFEASIBLE, EXIT_NOT_UNSTABLE = 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a value > 0, got {text}")
    return v


def _nonnegative(text: str) -> str:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a value >= 0, got {text}")
    return text


def _link(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i,j (1-based), got {text!r}") from None
    return i, j


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netvuln", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, perturbation: bool):
        p.add_argument("config", help="JSON config path, or example:<name> for a bundled one")
        p.add_argument("--mode", choices=[EXISTING, CREATED], default=EXISTING)
        if perturbation:
            p.add_argument("--link", type=_link, help="i,j (1-based): perturb the influence of i on j")
            p.add_argument("--epsilon", type=_nonnegative, default="0.001")
            p.add_argument("--allpass-pole", type=_positive, default=1.0)
            p.add_argument("--constant", action="store_true", help="synthesize a constant Delta (no all-pass factor)")

    p = sub.add_parser("analyze", help="rank link vulnerabilities")
    common(p, False)
    p.add_argument("--format", choices=["table", "json"], default="table")

    p = sub.add_parser("destabilize", help="synthesize and realize a minimal destabilizing perturbation")
    common(p, True)
    p.add_argument("--out", default="netvuln_out", help="output directory for report.json and CSVs")

    p = sub.add_parser("verify", help="check that the perturbed realization is unstable")
    common(p, True)

    p = sub.add_parser("simulate", help="integrate the original or perturbed system")
    common(p, True)
    p.add_argument("--perturbed", action="store_true")
    p.add_argument("--x0", type=_floats, help="initial agent states, comma separated")
    p.add_argument("--t-final", type=_positive)
    p.add_argument("--dt", type=_positive, default=0.01)
    p.add_argument("--every", type=int, default=0, help="write every k-th step (0: at most ~5000 rows)")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "svg", "json"])
    return parser


def _load(path) -> LinearModel:
    try:
        return load_config(path)
    except ConfigError as exc:
        raise CliError(f"config error: {exc}", EXIT_CONFIG) from None


def _require_stable(model: LinearModel) -> None:
    diag = validate_model(model)
    if not diag.stable:
        top = max(diag.eigenvalues, key=lambda z: z.real)
        raise CliError(f"model is {diag.message} (max Re eigenvalue {top.real:.6g})", EXIT_UNSTABLE)


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        mode=args.mode,
        link=args.link,
        epsilon=args.epsilon,
        allpass_pole=str(args.allpass_pole),
        shape="constant" if args.constant else "allpass",
    )


def _destabilize(args, model):
    _require_stable(model)
    try:
        return destabilize(model, _pipeline_config(args))
    except InfeasiblePerturbation as exc:
        raise CliError(f"infeasible perturbation: {exc}", EXIT_INFEASIBLE) from None
    except (PerturbationError, RealizationError) as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None


def _fmt_matrix(M) -> str:
    return "\n".join("  [" + ", ".join(f"{sig(x):>9g}" for x in row) + "]" for row in M)


def cmd_analyze(args, out) -> int:
    model = _load(args.config)
    _require_stable(model)
    a = analyze(model, args.mode)
    if args.format == "json":
        out.write(json.dumps(analysis_dict(a), indent=2) + "\n")
    else:
        out.write(f"states: {', '.join(model.labels)}  exposed: {', '.join(model.labels[k] for k in model.exposed)}\n")
        out.write(f"stability: {a.diagnostics.message}\n")
        out.write(f"{args.mode}-link vulnerabilities (V = ||H_ij||_inf, i influences j):\n")
        out.write(f"{'i':>3} {'j':>3} {'existing':>8} {'V':>10} {'exact':>12} {'omega*':>8}\n")
        for c in a.candidates:
            exact = exact_vulnerability(a, c) or "-"
            w = "inf" if c.worst_frequency == float("inf") else f"{sig(c.worst_frequency):g}"
            out.write(f"{c.source + 1:>3} {c.target + 1:>3} {str(c.existing).lower():>8} "
                      f"{sig(c.vulnerability):>10g} {exact:>12} {w:>8}\n")
    if not a.candidates:
        print(f"warning: no {args.mode} links found; nothing to rank", file=sys.stderr)
    return 0


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{float(x):.12g}" for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_destabilize(args, out) -> int:
    model = _load(args.config)
    d = _destabilize(args, model)
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(json.dumps(report_dict(d), indent=2) + "\n", encoding="utf-8")
        labels = list(d.realization.labels)
        _write_csv(outdir / "a_tilde.csv", labels, d.realization.A_tilde)
        _write_csv(outdir / "b_tilde.csv", ["b"], d.realization.b_tilde.reshape(-1, 1))
    except OSError as exc:
        raise CliError(f"cannot write outputs to {outdir}: {exc}", EXIT_CONFIG) from None
    p = d.perturbation
    out.write(f"link {p.source + 1},{p.target + 1}: V = {sig(d.candidate.vulnerability):g}\n")
    out.write(f"Delta[{p.target + 1},{p.source + 1}](s) = {p.nominal_entry}\n")
    out.write(f"inflated by (1 + {p.epsilon}): {p.entry}\n")
    out.write(f"A_tilde ({', '.join(d.realization.labels)}):\n{_fmt_matrix(d.realization.A_tilde)}\n")
    lam = d.instability.lambda_eps
    out.write(f"lambda_eps = {sig(lam.real):g}{'' if lam.imag == 0 else f' {sig(lam.imag):+g}i'}\n")
    out.write(f"verdict: {d.instability.verdict}\n")
    out.write(f"wrote {outdir / 'report.json'}, {outdir / 'a_tilde.csv'}, {outdir / 'b_tilde.csv'}\n")
    return 0


def cmd_verify(args, out) -> int:
    model = _load(args.config)
    d = _destabilize(args, model)
    inst = d.instability
    out.write("spectrum of A_tilde:\n")
    for z in inst.spectrum:
        out.write(f"  {sig(z.real):g}{'' if z.imag == 0 else f' {sig(z.imag):+g}i'}\n")
    out.write(f"lambda_eps = {inst.lambda_eps.real:.6g}\n")
    out.write(f"verdict: {inst.verdict}\n")
    return 0 if inst.unstable else EXIT_NOT_UNSTABLE


def cmd_simulate(args, out) -> int:
    model = _load(args.config)
    fmt = args.format or Path(args.out).suffix.lstrip(".").lower() or "csv"
    if fmt not in ("csv", "svg", "json"):
        raise CliError(f"unknown output format {fmt!r}", EXIT_CONFIG)
    n = model.n
    x0 = args.x0 if args.x0 is not None else [0.0] * n
    if len(x0) != n:
        raise CliError(f"--x0 has {len(x0)} entries but the model has {n} states", EXIT_CONFIG)
    if args.perturbed:
        d = _destabilize(args, model)
        A, b, labels = d.realization.A_tilde, d.realization.b_tilde, d.realization.labels
        x0 = list(x0) + [0.0] * d.realization.aux_count
        t_final = args.t_final or 2000.0
        title = f"perturbed ({args.mode} link {d.perturbation.source + 1},{d.perturbation.target + 1})"
    else:
        A, b, labels = model.A_float, model.b_float, model.labels
        t_final = args.t_final or 100.0
        title = "unperturbed"
    try:
        traj = simulate(A, b, np.array(x0), t_final, args.dt, labels)
    except SimulationError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None
    every = args.every if args.every > 0 else max(1, (len(traj.times) - 1) // 5000)
    idx = np.arange(0, len(traj.times), every)
    if idx[-1] != len(traj.times) - 1:
        idx = np.append(idx, len(traj.times) - 1)
    if fmt == "svg":
        text = line_plot(traj.times, [traj.states[:, k] for k in range(n)], labels[:n],
                         title=title, ylabel="sentiment")
    elif fmt == "csv":
        rows = ["t," + ",".join(labels)]
        for k in idx:
            rows.append(f"{traj.times[k]:.6g}," + ",".join(f"{v:.10g}" for v in traj.states[k]))
        text = "\n".join(rows) + "\n"
    else:
        text = json.dumps({
            "labels": list(labels),
            "t": [float(f"{traj.times[k]:.6g}") for k in idx],
            "x": [[float(f"{v:.10g}") for v in traj.states[k]] for k in idx],
            "truncated": traj.truncated,
        }) + "\n"
    try:
        Path(args.out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_CONFIG) from None
    if traj.truncated:
        print(f"warning: trajectory overflowed and was truncated at t={traj.times[-1]:g}", file=sys.stderr)
    out.write(f"wrote {args.out} ({len(idx)} samples, t_final={traj.times[-1]:g})\n")
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "destabilize": cmd_destabilize,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        print(f"netvuln: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
