"""Time the Darboux normalization against the truncation order.

For each (n, q, T) a few random closed perturbations of omega_0 are
normalized; we record wall time, number of steps and whether the pullback
is standard modulo degree T.
"""

import argparse
import csv
import random
import sys
import time
from dataclasses import dataclass, field

from weylforge.darboux import darboux_normalize, omega0, random_closed_perturbation


@dataclass
class ScalingConfig:
    shapes: list[tuple[int, int]] = field(default_factory=lambda: [(1, 0), (2, 0), (2, 1)])
    orders: list[int] = field(default_factory=lambda: [3, 4, 5, 6])
    samples: int = 3
    seed: int = 0


def run(cfg: ScalingConfig):
    rng = random.Random(cfg.seed)
    for n, q in cfg.shapes:
        for T in cfg.orders:
            times, steps, ok = [], [], True
            for _ in range(cfg.samples):
                alpha = random_closed_perturbation(rng, n, q, T)
                t0 = time.perf_counter()
                phi = darboux_normalize(alpha, q, T)
                times.append(time.perf_counter() - t0)
                steps.append(len(phi.steps))
                ok &= phi.pullback(alpha).with_trunc(T) == omega0(n).with_trunc(T)
            yield {"n": n, "q": q, "T": T, "mean_s": sum(times) / len(times), "max_steps": max(steps), "ok": ok}


def main(argv=None):
    ap = argparse.ArgumentParser(description="Darboux normalization timings")
    ap.add_argument("--orders", nargs="*", type=int, default=[3, 4, 5, 6])
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args(argv)
    cfg = ScalingConfig(orders=a.orders, samples=a.samples, seed=a.seed)
    w = csv.DictWriter(sys.stdout, ["n", "q", "T", "mean_s", "max_steps", "ok"])
    w.writeheader()
    for row in run(cfg):
        row["mean_s"] = f"{row['mean_s']:.3f}"
        w.writerow(row)


if __name__ == "__main__":
    main()
