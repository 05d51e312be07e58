"""Run the property suites over several seeds and write a JSON summary.

    python3 scripts/run_suites.py --seeds 0 1 2 --out suites.json
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from weylforge.suites import SUITES, SuiteParams, run_suite


@dataclass
class SweepConfig:
    suites: list[str] = field(default_factory=lambda: sorted(SUITES))
    seeds: list[int] = field(default_factory=lambda: [0])
    n: int | None = None
    degree: int | None = None
    count: int | None = None
    out: str | None = None


def sweep(cfg: SweepConfig) -> dict:
    rows = []
    for name in cfg.suites:
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            (res,) = run_suite(name, SuiteParams(n=cfg.n, degree=cfg.degree, seed=seed, count=cfg.count))
            rows.append({
                "suite": name,
                "seed": seed,
                "pass": res.passed,
                "cases": sum(p.cases for p in res.properties),
                "seconds": round(time.perf_counter() - t0, 3),
                "failed": [p.name for p in res.properties if not p.passed],
            })
            print(f"{name:20s} seed={seed:<4d} {'ok' if res.passed else 'FAIL'}  {rows[-1]['seconds']:.2f}s")
    return {"config": asdict(cfg), "runs": rows, "pass": all(r["pass"] for r in rows)}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suites", nargs="*", default=sorted(SUITES))
    ap.add_argument("--seeds", nargs="*", type=int, default=[0])
    ap.add_argument("--n", type=int)
    ap.add_argument("--degree", type=int)
    ap.add_argument("--count", type=int)
    ap.add_argument("--out")
    cfg = SweepConfig(**vars(ap.parse_args(argv)))
    summary = sweep(cfg)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump(summary, fh, indent=2)
    return 0 if summary["pass"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
