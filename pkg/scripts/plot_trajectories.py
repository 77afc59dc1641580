"""Write SVG trajectory plots: unperturbed, existing-link and created-link runs."""
import argparse
from pathlib import Path

import numpy as np

from netvuln.config import load_config
from netvuln.pipeline import PipelineConfig, destabilize
from netvuln.simulate import simulate
from netvuln.svgplot import line_plot

X0 = [0.5, 0.5, 0.0, -0.5, -0.5]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="example:case_study")
    ap.add_argument("--out", default="figures")
    ap.add_argument("--t-final", type=float, default=2000.0)
    ap.add_argument("--epsilon", default="0.001")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    model = load_config(args.config)
    n = model.n

    runs = [("unperturbed", model.A_float, model.b_float, X0, 100.0)]
    for mode in ("existing", "created"):
        aug = destabilize(model, PipelineConfig(mode=mode, epsilon=args.epsilon)).realization
        runs.append((f"{mode}-link", aug.A_tilde, aug.b_tilde, X0 + [0.0] * aug.aux_count, args.t_final))

    for name, A, b, x0, T in runs:
        tr = simulate(A, b, np.array(x0), T, 0.01)
        svg = line_plot(tr.times, [tr.states[:, k] for k in range(n)], model.labels, title=name, ylabel="sentiment")
        (out / f"{name}.svg").write_text(svg, encoding="utf-8")
        print(f"{name}: |x(T)| = {np.linalg.norm(tr.states[-1, :n]):.4g} at T = {tr.times[-1]:g}")


if __name__ == "__main__":
    main()
