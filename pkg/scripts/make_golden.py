"""Regenerate the CLI golden corpus under tests/golden.

Each case is ``<name>.json`` holding ``{"argv": [...], "input": {...}}`` and
``<name>.out.json`` holding the exact stdout the CLI must reproduce.
"""

from __future__ import annotations

import argparse
import json
import random
from dataclasses import dataclass
from pathlib import Path

from weylforge import darboux, io, liecoh, suites
from weylforge.cli import CommandConfig, run
from weylforge.cyclic import ChainTensor, FinAlgebra
from weylforge.weyl import GElement, ModuleElement, WeylElement


@dataclass
class GoldenConfig:
    out_dir: Path = Path(__file__).resolve().parent.parent / "tests" / "golden"
    seed: int = 7


def _w(n, terms, wtrunc=None):
    return WeylElement(n, terms, wtrunc).to_json()


def _first(rng, draw, value, tries=500):
    """First draw whose value is nonzero, so golden outputs are not trivially 0."""
    for _ in range(tries):
        x = draw()
        if not value(x).is_zero():
            return x
    raise RuntimeError("no nonzero case found")


def cases(cfg: GoldenConfig) -> dict[str, tuple[list[str], object]]:
    rng = random.Random(cfg.seed)
    x1 = {((1,), (0,), 0): 1}
    y1 = {((0,), (1,), 0): 1}
    out: dict[str, tuple[list[str], object]] = {}
    out["weyl_mul_y1x1"] = (["weyl-mul"], {"a": _w(1, y1), "b": _w(1, x1)})
    out["weyl_bracket_y1x1"] = (["weyl-bracket"], {"a": _w(1, y1), "b": _w(1, x1)})
    a, b = suites.random_weyl(rng, 2, 8), suites.random_weyl(rng, 2, 8)
    out["weyl_mul_random_n2"] = (["weyl-mul"], {"a": a.to_json(), "b": b.to_json()})
    out["weyl_bracket_random_n2"] = (["weyl-bracket"], {"a": a.to_json(), "b": b.to_json()})

    m = ModuleElement([WeylElement(2, {((1, 0), (0, 1), 0): 1, ((0, 0), (0, 0), 0): 2}, 8)] * 2, 1)
    d = WeylElement(2, {((0, 0), (1, 1), 0): 1, ((1, 0), (0, 0), 0): -1}, 8)
    out["module_act_q1"] = (["module-act"], {"d": d.to_json(), "m": m.to_json()})

    alpha = darboux.random_closed_perturbation(rng, 2, 1, 4)
    out["darboux_n2_q1"] = (["darboux"], {"alpha": alpha.to_json(), "q": 1, "T": 4})
    for i, pres in enumerate(suites.module_lift_cases(rng)):
        out[f"module_lift_{i}"] = (["module-lift"], pres.to_json())

    sl2 = liecoh.LieAlgebra.sl2()
    out["lie_d_sl2_H"] = (["lie-d"], {"algebra": "sl2", "cochain": liecoh.Cochain.dual(sl2, 0).to_json()})
    g6 = liecoh.LieAlgebra.solvable6()
    out["lie_d_solvable6"] = (["lie-d"], {"algebra": g6.to_json(), "cochain": liecoh.Cochain.random(g6, 2, rng).to_json()})
    out["chern_weil_sl2"] = (["chern-weil"], {"algebra": "sl2", "poly": {"linear": {"0": "1"}}})
    out["chern_weil_solvable6_z2"] = (["chern-weil"], {"algebra": "solvable6", "poly": {"linear": {"5": "1"}, "power": 2},
                                                       "images": {"1": ["0", "0", "0", "0", "0", "3"]}})

    alg = liecoh.WeylLieAlgebra(2, 1, 2)
    g1, g2 = _first(rng, lambda: [alg.random_element(rng) for _ in range(2)],
                    lambda a: liecoh.extension_cocycle_c0(a[0], a[1], 2, 2, 1))
    out["c0_eval_q1_e2"] = (["c0-eval"], {"n": 2, "q": 1, "e": 2, "args": [g1.to_json(), g2.to_json()]})
    alg0 = liecoh.WeylLieAlgebra(1, 0, 2)
    args = _first(rng, lambda: [alg0.random_element(rng) for _ in range(2)],
                  lambda a: liecoh.tau_dp_component(a, 1, 2, 1))
    out["tau_dp_eval_k1"] = (["tau-dp-eval"], {"p": 1, "e": 2, "k": 1, "args": [g.to_json() for g in args]})
    out["tau_dp_eval_k0"] = (["tau-dp-eval"], {"p": 1, "e": 3, "k": 0, "args": []})

    mat = {"example": "matrix", "size": 2}
    out["cyclic_b_E12_E21"] = (["cyclic-b"], {"algebra": mat, "chain": ChainTensor.word(1, 2).to_json()})
    poly3 = FinAlgebra.truncated_poly(3)
    ch = ChainTensor.random(poly3, rng) + ChainTensor.word(1, 1, 2)
    out["cyclic_b_poly3"] = (["cyclic-b"], {"algebra": poly3.to_json(), "chain": ch.to_json()})
    out["cyclic_bB_poly3"] = (["cyclic-b", "--variant", "negative"], {"algebra": poly3.to_json(), "chain": ch.to_json()})
    out["cyclic_B_x"] = (["cyclic-B"], {"algebra": {"example": "truncated_poly", "size": 3}, "chain": ChainTensor.word(1).to_json()})

    out["genus_ahat_6"] = (["genus", "--series", "ahat", "--degree", "6"], None)
    out["genus_todd_rank2"] = (["genus", "--series", "todd", "--degree", "3", "--rank", "2"], None)
    out["tau_y_small"] = (["tau-y", "--degree", "3"], {"Q": ["Q", 2], "N": ["N", 1], "E": ["E", 1], "quant_class": [["w", 1]]})
    out["verify_hodge_sl2"] = (["verify", "--suite", "hodge-sl2", "--n", "2", "--degree", "4"], None)
    out["verify_cyclic"] = (["verify", "--suite", "cyclic-identities", "--count", "20"], None)
    return out


def run_case(argv: list[str], data) -> tuple[int, str]:
    from weylforge.cli import build_parser

    extra = [] if data is None else ["--json", json.dumps(data, sort_keys=True)]
    ns = build_parser().parse_args(argv + extra)
    cfg = CommandConfig(**{k: v for k, v in vars(ns).items() if k in CommandConfig.__dataclass_fields__})
    status, report = run(cfg)
    return status, io.dumps(report)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", type=Path, default=GoldenConfig.out_dir)
    ns = ap.parse_args()
    cfg = GoldenConfig(out_dir=ns.out_dir)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name, (argv, data) in sorted(cases(cfg).items()):
        status, text = run_case(argv, data)
        if status != 0:
            raise SystemExit(f"{name}: exit {status}\n{text}")
        (cfg.out_dir / f"{name}.json").write_text(io.dumps({"argv": argv, "input": data}))
        (cfg.out_dir / f"{name}.out.json").write_text(text)
        print(f"{name}: {len(text)} bytes")


if __name__ == "__main__":
    main()
