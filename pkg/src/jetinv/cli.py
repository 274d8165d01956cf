"""Command line front end.

Verbs: classify, reproduce, straighten, census, dfinite-probe, derive.
Exit codes: 0 ok, 1 assertion or validation failure, 2 configuration error,
3 unsupported family or size.
"""

from __future__ import annotations

import argparse
import configparser
import difflib
import itertools
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import action
from .diffring import JetRing, JetVariable, Monomial, Polynomial, iter_derive, parse, render, to_divided
from .errors import JetinvError, NotInvariantError, UnsupportedError
from .quotient import (
    census,
    classical_generators,
    classify_grid,
    classify_piece,
    codim_formula,
    dfinite_probe,
    finite_rep,
    gl_std,
    invariant_span,
    noninjectivity_probe,
    pullback_image_piece,
    reports_document,
    sl_std,
    so_std,
    sp_std,
    torus_rep,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_UNSUPPORTED = 0, 1, 2, 3
CAPS = {"dmax": 10, "wmax": 6}
GOLDEN_DIR = Path(__file__).with_name("goldens")
EXAMPLES = ("ex3.9", "ex3.10", "ex3.11", "ex6.7", "census", "codim")


class ConfigError(Exception):
    pass


# -- configuration --------------------------------------------------------------

def _load_config(path) -> dict:
    """Flatten an INI file into ``{key: text}``; section names are ignored."""
    if not path:
        return {}
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for section in cp.sections():
        for key, value in cp.items(section):
            out[key.replace("-", "_")] = value
    return out


def _settings(args, keys) -> dict:
    cfg = _load_config(getattr(args, "config", None))
    out = {}
    for key in keys:
        flag = getattr(args, key, None)
        out[key] = flag if flag is not None else cfg.get(key)
    return out


def _int(value, name, default=None):
    if value is None:
        if default is None:
            raise ConfigError(f"missing required setting {name}")
        return default
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from exc


def _check_caps(dmax, wmax):
    if dmax < 0 or wmax < 0:
        raise ConfigError("bounds must be nonnegative")
    if os.environ.get("JETINV_CAP_OVERRIDE", "") not in ("", "0"):
        return
    if dmax > CAPS["dmax"] or wmax > CAPS["wmax"]:
        raise ConfigError(
            f"bounds exceed the desk-scale caps dmax<={CAPS['dmax']}, wmax<={CAPS['wmax']}; "
            "set JETINV_CAP_OVERRIDE=1 to lift them"
        )


def _representation(s: dict):
    fam = s.get("family")
    if not fam:
        raise ConfigError("missing required setting family")
    fam = fam.strip().lower()
    if fam == "finite-pm1":
        return finite_rep([[[-1]]])
    if fam == "finite":
        try:
            mats = json.loads(s.get("matrices") or "")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"matrices must be JSON: {exc}") from exc
        return finite_rep(mats)
    if fam == "torus":
        try:
            weights = [int(x) for x in str(s.get("weights") or "").split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigError("weights must be comma separated integers") from exc
        if not weights:
            raise ConfigError("torus needs --weights")
        return torus_rep(weights)
    n = _int(s.get("n"), "n")
    k = _int(s.get("k"), "k", 0)
    l = _int(s.get("l"), "l", 0)
    makers = {"sl": lambda: sl_std(n, k, l), "gl": lambda: gl_std(n, k, l),
              "so": lambda: so_std(n, k), "sp": lambda: sp_std(n, k)}
    if fam not in makers:
        raise UnsupportedError(f"unknown family {fam!r}")
    try:
        return makers[fam]()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _write(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- verbs ------------------------------------------------------------------------

REP_KEYS = ("family", "n", "k", "l", "weights", "matrices")


def cmd_classify(args) -> int:
    s = _settings(args, REP_KEYS + ("m", "dmax", "wmax", "out", "jobs"))
    rep = _representation(s)
    m, dmax, wmax = _int(s["m"], "m"), _int(s["dmax"], "dmax"), _int(s["wmax"], "wmax")
    if m < 0:
        raise ConfigError("m must be nonnegative")
    _check_caps(dmax, wmax)
    jobs = _int(s["jobs"], "jobs", os.cpu_count() or 1)
    pres = classical_generators(rep)
    reports = classify_grid(rep, pres, m, dmax, wmax, jobs=jobs)
    _write(reports_document(rep, reports), s["out"])
    return EXIT_OK


def cmd_census(args) -> int:
    s = _settings(args, ("family", "n", "k", "l", "out"))
    fam = (s["family"] or "").lower()
    if not fam:
        raise ConfigError("missing required setting family")
    n, k, l = _int(s["n"], "n"), _int(s["k"], "k"), _int(s["l"], "l", 0)
    res = census(fam, n, k, l)
    doc = {"schema_version": 1, "family": fam, "n": n, "k": k, "l": l, **res}
    if fam in ("sl", "sp", "gl", "so"):
        try:
            cf = codim_formula(fam, n)
            doc["codim"] = {"value": str(cf["value"]), "bound": cf["bound"]}
        except (UnsupportedError, ValueError):
            pass
    _write(json.dumps(doc, sort_keys=True, indent=2) + "\n", s["out"])
    return EXIT_OK


def cmd_derive(args) -> int:
    try:
        f = parse(args.poly)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    nb = max((v.base for mo in f.terms for v, _ in mo.factors), default=0) + 1
    ring = JetRing(nb, args.m, divided=args.divided)
    if not ring.contains(f):
        raise ConfigError("polynomial uses orders above the truncation")
    sys.stdout.write(render(iter_derive(ring, f, args.times)) + "\n")
    return EXIT_OK


def cmd_straighten(args) -> int:
    s = _settings(args, REP_KEYS + ("input", "poly", "out"))
    rep = _representation(s)
    text = s["poly"]
    if text is None:
        if not s["input"]:
            raise ConfigError("need --input or --poly")
        try:
            text = Path(s["input"]).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {s['input']}: {exc}") from exc
    try:
        h = parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    lines = []
    try:
        if rep.family == "torus":
            from .smt.cstar import pstar, straighten_cstar

            w = rep.weights
            n = len(w) // 2
            if len(w) % 2 or list(w) != [1] * n + [-1] * n:
                raise UnsupportedError("straightening needs weights 1,..,1,-1,..,-1")
            res = straighten_cstar(h, n)
            total = sum((pstar(fm, n) * c for fm, c in res), Polynomial())
            for fm, c in res:
                lines.append(f"{fm.render()} coeff {c}")
            ok = total == h
        elif rep.family == "sl" and rep.l == 0:
            from .smt.sln import express_as_pullback_sln

            hd = to_divided(h)
            res = express_as_pullback_sln(hd, rep.n, rep.k)
            total = sum((p.polynomial(rep.n) * c for p, c in res), Polynomial())
            for p, c in res:
                lines.append(f"{p.render()} coeff {c}")
            ok = total == hd
        else:
            raise UnsupportedError(f"no straightening algorithm for {rep.label()}")
    except NotInvariantError as exc:
        sys.stderr.write(f"not invariant: violated constraint (generator, r) = {exc.constraint}\n")
        return EXIT_FAIL
    lines.append(f"re-expansion: {'ok' if ok else 'FAILED'}")
    _write("\n".join(lines) + "\n", s["out"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dfinite(args) -> int:
    s = _settings(args, REP_KEYS + ("candidates", "dmax", "wmax", "out"))
    rep = _representation(s)
    dmax, wmax = _int(s["dmax"], "dmax"), _int(s["wmax"], "wmax")
    _check_caps(dmax, wmax)
    if not s["candidates"]:
        raise ConfigError("need --candidates")
    try:
        cands = [parse(c) for c in s["candidates"].split(";") if c.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        rows = dfinite_probe(rep, cands, dmax, wmax)
    except NotInvariantError as exc:
        sys.stderr.write(f"candidate not invariant: violated constraint {exc.constraint}\n")
        return EXIT_FAIL
    doc = {"schema_version": 1, "representation": rep.label(), "pieces": rows}
    _write(json.dumps(doc, sort_keys=True, indent=2) + "\n", s["out"])
    return EXIT_OK


# -- reproductions ------------------------------------------------------------------

def scenario_sign_group() -> dict:
    rep = finite_rep([[[-1]]])
    pres = classical_generators(rep)
    m1 = [classify_piece(rep, pres, 1, 2, w) for w in range(3)]
    r2 = classify_piece(rep, pres, 2, 2, 2)
    img2 = pullback_image_piece(rep, pres, 2, 2, 2)
    gen = iter_derive(JetRing(1, 2), parse("x[1]^2"), 2)
    from .linalg import LinearSpan

    return {
        "m1_inv_dims": [r.inv_dim for r in m1],
        "m1_img_dims": [r.img_dim for r in m1],
        "m1_verdict_2_2": m1[2].verdict,
        "m1_witness": render(m1[2].witness),
        "m2_image_generator": render(gen),
        "m2_image_is_generator_span": img2 == LinearSpan.from_polynomials([gen]),
        "m2_inv_dim_2_2": r2.inv_dim,
        "m2_img_dim_2_2": r2.img_dim,
        "m2_strictly_worse": r2.inv_dim > r2.img_dim,
    }


def scenario_torus_2_3() -> dict:
    rep = torus_rep([2, -3])
    spec = rep.action()
    pres = classical_generators(rep)
    gens = [render(v) for d in range(1, 6) for v in invariant_span(rep, 0, d, 0).vectors]
    ring1 = JetRing(2, 1)
    z = parse("x[1]^3*x[2]^2")
    dz = iter_derive(ring1, z, 1)
    w = (dz * dz).exact_divide(z)
    img = pullback_image_piece(rep, pres, 1, 5, 2)
    return {
        "invariant_monomials_w0_upto_d5": gens,
        "presentation_generators": pres.names(),
        "w": render(w),
        "w_expected": render(parse("x[1]") * parse("3*x[2]*x[1]^(1) + 2*x[1]*x[2]^(1)") ** 2),
        "w_invariant": action.check_invariant(ring1, spec, w) is None,
        "w_in_image_m1": img.contains(w),
        "verdicts_5_2": [classify_piece(rep, pres, m, 5, 2).verdict for m in (1, 2, 3)],
    }


def alternating_polynomial() -> Polynomial:
    """The alternating sum over S_6 in raw variables (orders 0 and 1)."""
    from .smt.sln import _perm_sign

    terms = {}
    for p in itertools.permutations(range(6)):
        vs = [JetVariable(p[t] * 3 + t % 3, t // 3) for t in range(6)]
        mono = Monomial((v, 1) for v in vs)
        terms[mono] = terms.get(mono, 0) + _perm_sign(p)
    return Polynomial(terms)


def alternating_det_sum() -> Polynomial:
    """``sum sgn(s) [s1 s2 s3] D^3 [s4 s5 s6]`` in raw variables."""
    from .smt.sln import _perm_sign, det_symbol

    arc = JetRing(18)
    out = Polynomial()
    for abc in itertools.combinations(range(6), 3):
        rest = tuple(j for j in range(6) if j not in abc)
        s = _perm_sign(abc + rest) * 36
        a = det_symbol(3, tuple((j + 1, 0) for j in abc))
        b = iter_derive(arc, det_symbol(3, tuple((j + 1, 0) for j in rest)), 3)
        out = out + a * b * s
    return out


def scenario_sl3_alternating() -> dict:
    rep = sl_std(3, 6)
    spec = rep.action()
    f = alternating_polynomial()
    ring1 = JetRing(18, 1)
    violations = [(xi, r) for xi in range(len(spec.matrices)) for r in (0, 1)
                  if action.act(ring1, spec, xi, r, f)]
    img = pullback_image_piece(rep, classical_generators(rep), 1, 6, 3)
    rhs = alternating_det_sum()
    mono = min(f.terms, key=lambda mo: mo.factors)
    c = Fraction(f.terms[mono]) / rhs.terms[mono]
    return {
        "num_terms": len(f.terms),
        "num_lie_generators": len(spec.matrices),
        "annihilated_r0_r1": not violations,
        "image_rank_6_3_m1": img.dim,
        "constant": str(c),
        "matched_monomial": render(Polynomial.monomial(mono)),
        "identity_holds": f == rhs * c,
    }


def scenario_sl3_kernel() -> dict:
    res = noninjectivity_probe()
    return {
        "nonstandard_count": res["nonstandard_count"],
        "relation_span_dim": res["relation_span_dim"],
        "kernel_dim": res["kernel_dim"],
        "kernel_exceeds_relations": res["kernel_dim"] > res["relation_span_dim"],
    }


def scenario_census(nmax: int = 8) -> dict:
    checks = {}
    for n in range(2, nmax + 1):
        a = census("sl", n, n + 1, n - 1)
        checks[f"sl_n{n}_k{n + 1}_l{n - 1}"] = [a["dim_Z"], a["num_generators"] - a["num_relations"],
                                                  a["dim_V"] - a["dim_G"], a["classification"]]
        b = census("sl", n, n + 2, 0)
        checks[f"sl_n{n}_k{n + 2}"] = [b["num_generators"], b["num_relations"], b["classification"]]
    for n in range(1, nmax + 1):
        c = census("sp", n, 2 * n + 2)
        checks[f"sp_n{n}_k{2 * n + 2}"] = [c["dim_Z"], c["dim_V"] - c["dim_G"], c["classification"]]
        g = census("gl", n, n + 1, n + 1)
        checks[f"gl_n{n}_k{n + 1}_l{n + 1}"] = [g["dim_Z"], g["dim_V"] - g["dim_G"], g["classification"]]
    for n in range(2, nmax + 1):
        o = census("so", n, n)
        checks[f"so_n{n}_k{n}"] = [o["dim_Z"], o["dim_V"] - o["dim_G"], o["classification"]]
    return checks


def scenario_codim(nmax: int = 8) -> dict:
    out = {}
    for fam in ("sl", "sp", "gl", "so"):
        lo = 2 if fam in ("sl", "so") else 1
        for n in range(lo, nmax + 1):
            cf = codim_formula(fam, n)
            out[f"{fam}_n{n}"] = [str(cf["value"]), str(cf["lhs"]), cf["bound"], cf["value"] >= cf["bound"]]
    return out


SCENARIOS = {
    "ex3.9": scenario_sign_group,
    "ex3.10": scenario_torus_2_3,
    "ex3.11": scenario_sl3_alternating,
    "ex6.7": scenario_sl3_kernel,
    "census": scenario_census,
    "codim": scenario_codim,
}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def cmd_reproduce(args) -> int:
    golden_dir = Path(args.golden_dir) if args.golden_dir else GOLDEN_DIR
    names = EXAMPLES if args.example == "all" else (args.example,)
    status = EXIT_OK
    for name in names:
        got = _dump(SCENARIOS[name]())
        path = golden_dir / f"{name}.json"
        if args.regenerate:
            golden_dir.mkdir(parents=True, exist_ok=True)
            path.write_text(got)
        try:
            want = path.read_text()
        except OSError:
            sys.stdout.write(f"FAIL {name}: missing golden {path}\n")
            status = EXIT_FAIL
            continue
        if got == want:
            sys.stdout.write(f"PASS {name}\n")
        else:
            status = EXIT_FAIL
            sys.stdout.write(f"FAIL {name}\n")
            sys.stdout.writelines(difflib.unified_diff(want.splitlines(True), got.splitlines(True),
                                                       "golden", "computed"))
    return status


# -- parser ------------------------------------------------------------------------

def _add_rep(p):
    p.add_argument("--config", help="INI file; command line flags take precedence")
    p.add_argument("--family", help="sl, gl, so, sp, torus, finite, finite-pm1")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--weights", help="comma separated torus weights")
    p.add_argument("--matrices", help="JSON list of finite-group generator matrices")
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jetinv", description="Invariants of jet schemes of representations.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("classify", help="good/bad report over a (degree, weight) grid")
    _add_rep(p)
    p.add_argument("--m", type=int)
    p.add_argument("--dmax", type=int)
    p.add_argument("--wmax", type=int)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reproduce", help="check a pinned example against its golden file")
    p.add_argument("example", choices=EXAMPLES + ("all",))
    p.add_argument("--golden-dir")
    p.add_argument("--regenerate", action="store_true", help="rewrite the golden file first")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("straighten", help="express an invariant through generators")
    _add_rep(p)
    p.add_argument("--input", help="file holding the polynomial")
    p.add_argument("--poly", help="polynomial text")
    p.set_defaults(func=cmd_straighten)

    p = sub.add_parser("census", help="generator and relation counts")
    p.add_argument("--config")
    p.add_argument("--family")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("dfinite-probe", help="compare invariants with derivatives of candidates")
    _add_rep(p)
    p.add_argument("--candidates", help="polynomials separated by ';'")
    p.add_argument("--dmax", type=int)
    p.add_argument("--wmax", type=int)
    p.set_defaults(func=cmd_dfinite)

    p = sub.add_parser("derive", help="apply D to a polynomial")
    p.add_argument("poly")
    p.add_argument("--m", type=int, default=None, help="truncation (default infinite)")
    p.add_argument("--times", type=int, default=1)
    p.add_argument("--divided", action="store_true")
    p.set_defaults(func=cmd_derive)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except UnsupportedError as exc:
        sys.stderr.write(f"unsupported: {exc}\n")
        return EXIT_UNSUPPORTED
    except JetinvError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
