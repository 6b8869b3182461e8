"""Monte Carlo calibration of the experiment acceptance thresholds.

Runs many seeds (disjoint from the 0..199 used by the acceptance tests) and
reports the rates the acceptance thresholds are compared against, with a
binomial standard error.

    python scripts/calibrate.py --runs 5000
"""
import argparse
import math
import time

from dostab.charts import Side
from dostab.sim import DriftingSamplerConfig, UniformSamplerConfig, run_experiment

SEED_BASE = 100_000


def rate(hits, n):
    p = hits / n
    return f"{p:.4f} (+/- {math.sqrt(p * (1 - p) / n):.4f}, {hits}/{n})"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--runs", type=int, default=5000)
    ap.add_argument("--voters", type=int, default=8)
    ap.add_argument("--intervals", type=int, default=30)
    args = ap.parse_args()
    n, m = args.runs, args.intervals
    t0 = time.time()

    in_band = no_i_viol = 0
    means = []
    for s in range(SEED_BASE, SEED_BASE + n):
        r = run_experiment(UniformSamplerConfig(args.voters, m, s))
        mean = sum(r.niwa) / m
        means.append(mean)
        in_band += 0.43 <= mean <= 0.57
        no_i_viol += not r.i_chart.violations
    mu = sum(means) / n
    sd = math.sqrt(sum((x - mu) ** 2 for x in means) / (n - 1))
    # one vote's NIWA contribution is (c-1)/4 with c uniform on 1..5: variance 1/8
    sd_theory = math.sqrt(0.125 / (args.voters * m))
    print("uniform sampler")
    print(f"  mean of run means {mu:.4f}, sd {sd:.4f} (theory {sd_theory:.4f})")
    print(f"  run mean in [0.43, 0.57]: {rate(in_band, n)}")
    print(f"  zero I-chart violations:  {rate(no_i_viol, n)}")

    down = ewma_low_tail = i_low_last = 0
    third = m - m // 3
    for s in range(SEED_BASE, SEED_BASE + n):
        r = run_experiment(DriftingSamplerConfig(voters=args.voters, intervals=m, seed=s))
        x = r.niwa
        down += sum(x[-5:]) / 5 < sum(x[:5]) / 5
        ewma = r.violations["ewma_chart"]
        ewma_low_tail += any(side is Side.LOW and k >= third for k, side in ewma)
        i_low_last += (m - 1, Side.LOW) in r.violations["i_chart"]
    print("drifting sampler (defaults)")
    print(f"  last-5 mean < first-5 mean:       {rate(down, n)}")
    print(f"  EWMA Low violation in final third: {rate(ewma_low_tail, n)}")
    print(f"  I-chart Low violation at last:     {rate(i_low_last, n)}")
    print(f"({time.time() - t0:.1f} s)")


if __name__ == "__main__":
    main()
