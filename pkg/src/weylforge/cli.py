"""``weylforge`` command line: JSON in, JSON out.

Exit codes: 0 success, 1 a verify suite failed, 2 malformed input,
3 internal invariant violation (including the WEYLFORGE_MAX_TERMS cap).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from typing import Any, Callable

from . import cyclic, darboux, genus, io, liecoh
from .scalars import HUSeries
from .weyl import module_act, act_presented, weyl_commutator, weyl_mul

log = logging.getLogger("weylforge")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InternalError(RuntimeError):
    pass


@dataclass
class CommandConfig:
    subcommand: str
    input_path: str | None = None
    inline: str | None = None
    out: str | None = None
    trunc: int | None = None
    utrunc: int | None = None
    degree: int | None = None
    series: str | None = None
    rank: int | None = None
    variant: str | None = None
    suite: str | None = None
    n: int | None = None
    seed: int = 0
    count: int | None = None
    verbose: int = 0


# ---------------------------------------------------------------------------
# commands; each maps (decoded input, config) to a JSON-ready object


def _fields(x, required, optional=()):
    return io.obj_(x, "$", required, optional)


def cmd_weyl_mul(x, cfg):
    _fields(x, ["a", "b"])
    a, b = io.weyl(x["a"], "$.a", cfg.trunc), io.weyl(x["b"], "$.b", cfg.trunc)
    _same_n(a, b)
    return weyl_mul(a, b).to_json()


def cmd_weyl_bracket(x, cfg):
    _fields(x, ["a", "b"])
    a, b = io.weyl(x["a"], "$.a", cfg.trunc), io.weyl(x["b"], "$.b", cfg.trunc)
    _same_n(a, b)
    return weyl_commutator(a, b).to_json()


def _same_n(a, b):
    if a.n != b.n:
        raise io.InputError("$.b.n", f"expected n = {a.n}")


def cmd_module_act(x, cfg):
    _fields(x, ["d", "m"], ["pres"])
    d = io.weyl(x["d"], "$.d", cfg.trunc)
    m = io.module_element(x["m"], "$.m", cfg.trunc)
    if d.n != m.n:
        raise io.InputError("$.m.n", f"expected n = {d.n}")
    if "pres" in x:
        pres = io.presentation(x["pres"], "$.pres", cfg.trunc)
        return act_presented(d, m, pres.phi).to_json()
    return module_act(d, m).to_json()


def cmd_darboux(x, cfg):
    _fields(x, ["alpha", "q", "T"])
    alpha = io.formal_form(x["alpha"], "$.alpha")
    q = io.int_(x["q"], "$.q", 0)
    T = cfg.degree if cfg.degree is not None else io.int_(x["T"], "$.T", 1)
    return darboux.darboux_normalize(alpha, q, T).to_json()


def cmd_module_lift(x, cfg):
    pres = io.presentation(x, "$", cfg.trunc)
    return darboux.quantize_module_generators(pres).to_json()


def cmd_lie_d(x, cfg):
    _fields(x, ["algebra", "cochain"])
    g = io.lie_algebra(x["algebra"], "$.algebra")
    c = io.cochain(x["cochain"], "$.cochain")
    if c.dimV != g.dimV:
        raise io.InputError("$.cochain.dimV", f"expected {g.dimV}")
    return liecoh.d_lie(c, g).to_json()


def _poly(x, g, path):
    """``{"linear": {"i": c}, "power": k}`` or ``{"product": [..]}``."""
    if isinstance(x, dict) and "product" in x:
        io.obj_(x, path, ["product"])
        parts = [_poly(p, g, f"{path}.product[{i}]") for i, p in enumerate(io.list_(x["product"], path + ".product"))]
        if not parts:
            raise io.InputError(path + ".product", "empty product")
        out = parts[0]
        for p in parts[1:]:
            out = liecoh.product_poly(out, p)
        return out
    io.obj_(x, path, ["linear"], ["power"])
    lin = x["linear"]
    if not isinstance(lin, dict):
        raise io.InputError(path + ".linear", "expected an object index -> coefficient")
    coeffs = {}
    for k, v in lin.items():
        try:
            i = int(k)
        except ValueError:
            raise io.InputError(f"{path}.linear", f"bad index {k!r}") from None
        if not 0 <= i < g.dim:
            raise io.InputError(f"{path}.linear", f"index {i} out of range")
        coeffs[i] = io.frac_(v, f"{path}.linear[{k!r}]")
    return liecoh.power_poly(liecoh.linear_poly_from(g, coeffs), io.int_(x.get("power", 1), path + ".power", 1))


def cmd_chern_weil(x, cfg):
    _fields(x, ["algebra", "poly"], ["images"])
    g = io.lie_algebra(x["algebra"], "$.algebra")
    S = _poly(x["poly"], g, "$.poly")
    images = None
    if "images" in x:
        if not isinstance(x["images"], dict):
            raise io.InputError("$.images", "expected an object index -> vector")
        images = {}
        for k, v in x["images"].items():
            p = f"$.images[{k!r}]"
            vec = [io.frac_(c, f"{p}[{j}]") for j, c in enumerate(io.list_(v, p))]
            if len(vec) != g.dim:
                raise io.InputError(p, f"expected a vector of length {g.dim}")
            images[int(k)] = tuple(vec)
    pr = io._guard("$.images", liecoh.projection_matrix, g, images)
    return liecoh.chern_weil(S, g, pr).to_json()


def _g_args(x, path, count=None):
    args = [io.g_element(a, f"{path}[{i}]") for i, a in enumerate(io.list_(x, path))]
    if count is not None and len(args) != count:
        raise io.InputError(path, f"expected {count} arguments, got {len(args)}")
    return args


def _check_shape(args, n, e, path):
    for i, a in enumerate(args):
        if a.n != n or a.e != e:
            raise io.InputError(f"{path}[{i}]", f"expected n = {n}, e = {e}")


def cmd_c0_eval(x, cfg):
    _fields(x, ["n", "e", "args"], ["q"])
    n, e = io.int_(x["n"], "$.n", 1), io.int_(x["e"], "$.e", 1)
    q = io.int_(x.get("q", 0), "$.q", 0)
    args = _g_args(x["args"], "$.args", 2)
    _check_shape(args, n, e, "$.args")
    return liecoh.extension_cocycle_c0(args[0], args[1], n, e, q).to_json()


def cmd_tau_dp_eval(x, cfg):
    _fields(x, ["p", "e", "k", "args"], ["q"])
    p, e = io.int_(x["p"], "$.p", 1), io.int_(x["e"], "$.e", 1)
    q = io.int_(x.get("q", 0), "$.q", 0)
    k = io.int_(x["k"], "$.k", 0)
    args = _g_args(x["args"], "$.args", 2 * k)
    _check_shape(args, p + q, e, "$.args")
    return liecoh.tau_dp_component(args, k, e, p, q).to_json()


def _cyclic_input(x, cfg):
    _fields(x, ["algebra", "chain"])
    A = io.fin_algebra(x["algebra"], "$.algebra")
    c = io.chain(x["chain"], "$.chain")
    for w in c.terms:
        if any(i >= A.dim for i in w):
            raise io.InputError("$.chain", f"word {list(w)} uses an index >= dim {A.dim}")
    return A, c


def _u_truncate(c: cyclic.ChainTensor, utrunc):
    if utrunc is None:
        return c
    out = {}
    for w, s in c.terms.items():
        kept = {k: v for k, v in s.items() if k[1] < utrunc}
        out[w] = HUSeries(kept, h_trunc=s.h_trunc)
    return cyclic.ChainTensor(out)


def cmd_cyclic_b(x, cfg):
    A, c = _cyclic_input(x, cfg)
    if cfg.variant:
        res = cyclic.cyclic_differential(c, A, cfg.variant)
    else:
        res = cyclic.hochschild_b(c, A)
    return _u_truncate(res, cfg.utrunc).to_json()


def cmd_cyclic_B(x, cfg):
    A, c = _cyclic_input(x, cfg)
    return _u_truncate(cyclic.connes_B(c, A), cfg.utrunc).to_json()


_SERIES = {"ahat": genus.ahat_series, "todd": genus.todd_series, "exp": genus.exp_series}


def cmd_genus(x, cfg):
    if x is not None:
        _fields(x, [], ["series", "degree", "rank"])
    x = x or {}
    name = cfg.series or x.get("series", "ahat")
    if name not in _SERIES:
        raise io.InputError("$.series", f"expected one of {sorted(_SERIES)}")
    d = cfg.degree if cfg.degree is not None else io.int_(x.get("degree", 6), "$.degree", 0)
    coeffs = _SERIES[name](d)
    out: dict[str, Any] = {"series": name, "degree": d, "coefficients": [io_frac(c) for c in coeffs]}
    rank = cfg.rank if cfg.rank is not None else io.opt_int(x.get("rank"), "$.rank", 1)
    if rank is not None:
        if name == "exp":
            expr = genus.chern_character("E", rank, d)
        else:
            expr = genus.genus_from_series(coeffs, "E", rank, d)
        out["class"] = expr.to_json()
    return out


def io_frac(c) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _bundle(v, path):
    if not (isinstance(v, list) and len(v) == 2 and isinstance(v[0], str)):
        raise io.InputError(path, "expected [name, rank]")
    return v[0], io.int_(v[1], path + "[1]", 1)


def cmd_tau_y(x, cfg):
    _fields(x, ["Q", "N", "E"], ["quant_class", "degree"])
    Q, N, E = (_bundle(x[k], f"$.{k}") for k in ("Q", "N", "E"))
    names = [Q[0], N[0], E[0]]
    if len(set(names)) != 3:
        raise io.InputError("$", "bundle names must be distinct")
    qc = []
    for i, v in enumerate(io.list_(x.get("quant_class", []), "$.quant_class")):
        name, k = _bundle(v, f"$.quant_class[{i}]")
        if name in names:
            raise io.InputError(f"$.quant_class[{i}]", "generator name clashes with a bundle")
        qc.append((name, k))
    d = cfg.degree if cfg.degree is not None else io.int_(x.get("degree", 4), "$.degree", 0)
    return genus.tau_Y_assemble(Q, N, E, qc, d).to_json()


def cmd_verify(x, cfg):
    from . import suites

    name = cfg.suite or "all"
    if name != "all" and name not in suites.SUITES:
        raise io.InputError("--suite", f"unknown suite {name!r}; choose from {['all'] + sorted(suites.SUITES)}")
    params = suites.SuiteParams(n=cfg.n, degree=cfg.degree, seed=cfg.seed, count=cfg.count)
    results = suites.run_suite(name, params)
    for r in results:
        log.info("%s: %s", r.suite, "pass" if r.passed else "FAIL")
    return {"pass": all(r.passed for r in results), "suites": [r.to_json() for r in results]}


COMMANDS: dict[str, tuple[Callable, bool]] = {
    # name -> (handler, needs input)
    "weyl-mul": (cmd_weyl_mul, True),
    "weyl-bracket": (cmd_weyl_bracket, True),
    "module-act": (cmd_module_act, True),
    "darboux": (cmd_darboux, True),
    "module-lift": (cmd_module_lift, True),
    "lie-d": (cmd_lie_d, True),
    "chern-weil": (cmd_chern_weil, True),
    "c0-eval": (cmd_c0_eval, True),
    "tau-dp-eval": (cmd_tau_dp_eval, True),
    "cyclic-b": (cmd_cyclic_b, True),
    "cyclic-B": (cmd_cyclic_B, True),
    "genus": (cmd_genus, False),
    "tau-y": (cmd_tau_y, True),
    "verify": (cmd_verify, False),
}


# ---------------------------------------------------------------------------


def _count_terms(obj) -> int:
    if isinstance(obj, dict):
        return sum(_count_terms(v) for v in obj.values()) + len(obj.get("terms", ()) if isinstance(obj.get("terms"), list) else ())
    if isinstance(obj, list):
        return sum(_count_terms(v) for v in obj)
    return 0


def max_terms() -> int:
    raw = os.environ.get("WEYLFORGE_MAX_TERMS", "1000000")
    try:
        v = int(raw)
    except ValueError:
        raise io.InputError("WEYLFORGE_MAX_TERMS", f"not an integer: {raw!r}") from None
    if v <= 0:
        raise io.InputError("WEYLFORGE_MAX_TERMS", "must be positive")
    return v


def _read_input(cfg: CommandConfig, needed: bool):
    if cfg.inline is not None:
        return io.loads(cfg.inline)
    if cfg.input_path is not None:
        try:
            with open(cfg.input_path, encoding="utf-8") as fh:
                return io.loads(fh.read())
        except OSError as ex:
            raise io.InputError(cfg.input_path, ex.strerror or str(ex)) from None
    if needed:
        return io.loads(sys.stdin.read())
    return None


def run(cfg: CommandConfig) -> tuple[int, Any]:
    """Execute one command; returns ``(exit status, JSON report)``."""
    for flag in ("trunc", "utrunc", "degree"):
        v = getattr(cfg, flag)
        if v is not None and v <= 0:
            return EXIT_INPUT, {"error": "input", "message": f"--{flag} must be positive"}
    if cfg.subcommand not in COMMANDS:
        return EXIT_INPUT, {"error": "input", "message": f"unknown subcommand {cfg.subcommand!r}"}
    handler, needed = COMMANDS[cfg.subcommand]
    try:
        cap = max_terms()
        data = _read_input(cfg, needed)
        result = handler(data, cfg)
        if _count_terms(result) > cap:
            raise InternalError(f"result exceeds WEYLFORGE_MAX_TERMS = {cap} terms")
    except io.InputError as ex:
        return EXIT_INPUT, {"error": "input", "message": str(ex), "position": ex.path}
    except InternalError as ex:
        return EXIT_INTERNAL, {"error": "internal", "message": str(ex)}
    except (ValueError, ArithmeticError, TypeError) as ex:
        # precondition failures raised by the library on well-formed but unusable input
        return EXIT_INPUT, {"error": "input", "message": f"{type(ex).__name__}: {ex}"}
    except Exception as ex:  # invariant violations and everything unexpected
        log.debug("internal failure", exc_info=True)
        return EXIT_INTERNAL, {"error": "internal", "message": f"{type(ex).__name__}: {ex}"}
    if cfg.subcommand == "verify" and not result["pass"]:
        return EXIT_FAIL, result
    return EXIT_OK, result


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weylforge", description="Exact Weyl-algebra and characteristic-class computations.")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--in", dest="input_path", help="input JSON file (default: stdin)")
        src.add_argument("--json", dest="inline", help="inline input JSON")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--trunc", type=int, help="weight truncation for Weyl inputs")
        p.add_argument("--utrunc", type=int, help="drop u-powers >= this in cyclic outputs")
        p.add_argument("--degree", type=int, help="degree / order bound")
        p.add_argument("-v", "--verbose", action="count", default=0)
        if name == "genus":
            p.add_argument("--series", choices=sorted(_SERIES))
            p.add_argument("--rank", type=int, help="also expand the genus of a rank-r bundle in Chern classes")
        if name == "cyclic-b":
            p.add_argument("--variant", choices=["negative", "periodic"], help="apply b + uB instead of b")
        if name == "verify":
            p.add_argument("--suite", default="all")
            p.add_argument("--n", type=int)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--count", type=int)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as ex:
        return EXIT_INPUT if ex.code else EXIT_OK
    cfg = CommandConfig(**{k: v for k, v in vars(ns).items() if k in CommandConfig.__dataclass_fields__})
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbose, 2), format="%(name)s: %(message)s")
    status, report = run(cfg)
    text = io.dumps(report)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == EXIT_INPUT:
        sys.stderr.write(f"weylforge: {report['message']}\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
