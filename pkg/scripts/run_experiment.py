"""Run the random or purposive sampling experiment and print the NIWA series
with its chart verdicts. Optionally save SVG charts.

    python scripts/run_experiment.py uniform --seed 1
    python scripts/run_experiment.py drift --seed 3 --svg out/
"""
import argparse
from pathlib import Path

from dostab.charts import EwmaConfig, render_svg
from dostab.sim import DriftingSamplerConfig, UniformSamplerConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("sampler", choices=["uniform", "drift"])
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--voters", type=int, default=8)
    ap.add_argument("--intervals", type=int, default=30)
    ap.add_argument("--lam", type=float, default=0.2)
    ap.add_argument("--svg", type=Path, help="directory for I/MR/EWMA charts")
    args = ap.parse_args()

    if args.sampler == "uniform":
        cfg = UniformSamplerConfig(args.voters, args.intervals, args.seed)
    else:
        cfg = DriftingSamplerConfig(voters=args.voters, intervals=args.intervals, seed=args.seed)
    r = run_experiment(cfg, EwmaConfig(args.lam))

    for t, v in zip(r.tallies, r.niwa):
        print(f"interval {t.interval + 1:3d}  T={t.counts}  NIWA={v:.4f}")
    if r.chart_error:
        print(f"charts skipped: {r.chart_error}")
        return
    print(f"I chart: center {r.i_chart.center:.4f}, limits "
          f"[{r.i_chart.lcl[0]:.4f}, {r.i_chart.ucl[0]:.4f}]")
    for name, found in r.violations.items():
        pts = ", ".join(f"{k + 1}:{side.value}" for k, side in found) or "none"
        print(f"{name:10s} out of control at intervals: {pts}")

    if args.svg:
        args.svg.mkdir(parents=True, exist_ok=True)
        for name in ("i_chart", "mr_chart", "ewma_chart"):
            render_svg(getattr(r, name), args.svg / f"{name}.svg",
                       title=f"{args.sampler} sampling, seed {args.seed}: {name}")
        print(f"charts written to {args.svg}")


if __name__ == "__main__":
    main()
