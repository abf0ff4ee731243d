"""Command line front-end: twistor4p {integrals,derive,verify,geometry,identities}."""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys

import numpy as np

from . import geometry as geo
from .deformation import MAX_ORDER, constraint_residual, derive, first_order
from .errors import Twistor4pError
from .iterints import (anchor_residuals, omega_closed, omega_depth1_exact, omega_tables,
                       shuffle_residual)
from .monodromy import lambda_grid, reality_residual, sweep
from .potential import ModuliConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA = "twistor4p/1"
SYMMETRIC_P = cmath.exp(0.25j * math.pi)

DEFAULTS = {
    "p": SYMMETRIC_P,
    "u": 1.0 + 0j,
    "v": 0.3 + 0.2j,
    "order": 3,
    "depth": 3,
    "t_list": [0.02, 0.04, 0.08],
    "lambda_grid": 8,
    "fd_step": 1e-3,
    "tol": None,
    "seed": 0,
    "count": 10,
    "out": None,
}

# residual tolerances per subcommand when --tol is not given
DEFAULT_TOL = {"integrals": 1e-9, "derive": 1e-8, "verify": 1e-6, "geometry": 1e-5,
               "identities": 1e-7}
MIN_SLOPE = 3.7


class UsageError(Exception):
    pass


def parse_complex(s) -> complex:
    if isinstance(s, (int, float, complex)):
        return complex(s)
    if isinstance(s, (list, tuple)):
        if len(s) != 2:
            raise UsageError(f"expected [re, im], got {s!r}")
        return complex(float(s[0]), float(s[1]))
    parts = str(s).split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse complex number {s!r}; use re,im")


def parse_floats(s) -> list:
    if isinstance(s, (list, tuple)):
        return [float(x) for x in s]
    try:
        return [float(x) for x in str(s).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {s!r}") from None


def _cnum(z: complex) -> list:
    return [z.real, z.imag]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", help="puncture parameter re,im (open first quadrant)")
    common.add_argument("--u", help="Higgs coordinate u as re,im")
    common.add_argument("--v", help="Higgs coordinate v as re,im")
    common.add_argument("--order", type=int, help="series order N")
    common.add_argument("--depth", type=int, help="iterated integral depth")
    common.add_argument("--t-list", dest="t_list", help="comma separated t values")
    common.add_argument("--lambda-grid", dest="lambda_grid", type=int,
                        help="number of points on |lambda| = 1")
    common.add_argument("--fd-step", dest="fd_step", type=float, help="finite difference step")
    common.add_argument("--tol", type=float, help="residual tolerance for the exit status")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--count", type=int, help="number of sampled points")
    common.add_argument("--out", help="output file (.json report or .csv table)")
    common.add_argument("--config", help="TOML file with defaults for the flags")
    parser = argparse.ArgumentParser(prog="twistor4p", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("integrals", "iterated integral tables with closed-form and shuffle checks"),
        ("derive", "t-derivatives of the parameters"),
        ("verify", "monodromy reality and Fricke residual sweep"),
        ("geometry", "metric, twisted symplectic form and energy checks"),
        ("identities", "Omega-value identities at random p"),
    ]:
        sub.add_parser(name, parents=[common], help=text)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, the TOML file and flags (flags win)."""
    conf = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        for k, val in data.items():
            key = k.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"unknown config key {k!r}")
            conf[key] = val
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            conf[key] = val
    for key in ("p", "u", "v"):
        conf[key] = parse_complex(conf[key])
    conf["t_list"] = parse_floats(conf["t_list"])
    for key in ("order", "depth", "lambda_grid", "seed", "count"):
        conf[key] = int(conf[key])
    conf["fd_step"] = float(conf["fd_step"])
    if conf["tol"] is not None:
        conf["tol"] = float(conf["tol"])
    if not 0 <= conf["order"] <= MAX_ORDER:
        raise UsageError(f"order must be in 0..{MAX_ORDER}")
    if conf["count"] < 1:
        raise UsageError("count must be positive")
    try:
        conf["cfg"] = ModuliConfig(conf["p"], conf["u"], conf["v"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return conf


def _tol(conf: dict, command: str) -> float:
    return conf["tol"] if conf["tol"] is not None else DEFAULT_TOL[command]


# ---------------------------------------------------------------- subcommands

def cmd_integrals(conf: dict):
    cfg, depth = conf["cfg"], conf["depth"]
    omega, theta = omega_tables(cfg, depth)
    checks = {}
    exact = [omega_depth1_exact(cfg, 1.0), omega_depth1_exact(cfg, 1j)]
    checks["depth1_log"] = max(abs(tab[j] - exact[i][j - 1])
                               for i, tab in enumerate((omega, theta)) for j in (1, 2, 3))
    checks.update(anchor_residuals(omega, theta))
    if depth >= 2:
        checks["Omega21(1) closed"] = abs(omega["21"] - omega_closed(cfg, "21"))
        checks["Theta31(i) closed"] = abs(theta["31"] - omega_closed(cfg, "31"))
        checks["shuffle Omega"] = shuffle_residual(omega)
        checks["shuffle Theta"] = shuffle_residual(theta)
    tol = _tol(conf, "integrals")
    report = {"schema": SCHEMA, "command": "integrals", "config": cfg.to_dict(), "depth": depth,
              "tables": {"1": omega.to_json()["entries"], "i": theta.to_json()["entries"]},
              "residuals": checks, "tol": tol}
    rows = [{"endpoint": ep, "word": e["word"], "re": e["re"], "im": e["im"], "err": e["err"]}
            for ep, tab in (("1", omega), ("i", theta)) for e in tab.to_json()["entries"]]
    return report, rows, all(r < tol for r in checks.values())


def cmd_derive(conf: dict):
    cfg, N = conf["cfg"], conf["order"]
    tables = omega_tables(cfg, max(N + 1, 2))
    series = derive(cfg, N, tables)
    tol = _tol(conf, "derive")
    summary = []
    ok = True
    for n in range(1, N + 1):
        degs = [xj.hi for xj in series.x[n]]
        lows = [xj.lo for xj in series.x[n]]
        cres = constraint_residual(series, n)
        good = max(degs) <= n + 1 and min(lows) >= 0 and cres < tol
        ok &= good
        summary.append({"n": n, "degree": degs, "low": lows, "constraint_residual": cres,
                        "route": series.diagnostics[n - 1]["route"], "ok": good})
    report = {"schema": SCHEMA, "command": "derive", "series": series.to_json(),
              "summary": summary, "tol": tol}
    if N >= 1:
        closed = first_order(series.cv, tables)
        diff = max((series.x[1][j] - closed[j]).norm() for j in range(3))
        report["first_order"] = {"difference": diff, "match": bool(diff < 1e-9)}
        ok &= diff < 1e-9
    rows = []
    for n in range(N + 1):
        for j, xj in enumerate(series.x[n]):
            for k in range(xj.lo, xj.hi + 1):
                c = xj.coeff(k)
                rows.append({"n": n, "j": j + 1, "power": k, "re": c.real, "im": c.imag})
    return report, rows, ok


def cmd_verify(conf: dict):
    cfg, N = conf["cfg"], conf["order"]
    ts = conf["t_list"]
    if any(t < 0 for t in ts):
        raise UsageError("t values must be nonnegative")
    tol = _tol(conf, "verify")
    series = derive(cfg, N)
    lams = lambda_grid(conf["lambda_grid"])
    pos = sorted({t for t in ts if t > 0})
    rows = []
    if 0.0 in ts:
        rep0 = reality_residual(cfg, series, 0.0, lams)
        rows.append({"t": 0.0, **rep0.max_residuals()})
    sw = sweep(cfg, series, pos, lams) if pos else {"rows": [], "reports": [], "slopes": {}}
    for rep, row in zip(sw["reports"], sw["rows"]):
        rows.append({"t": rep.t, **row})
    keys = ["p", "q", "r", "K", "fricke_Q2"]
    ok = True
    if len(pos) >= 2:
        ok &= all(sw["slopes"][k] >= MIN_SLOPE for k in keys)
    if pos:
        first = sw["rows"][0]
        ok &= all(first[k] < tol for k in keys)
        ok &= all(row["fricke_Q1_min"] > 1e-3 for row in sw["rows"])
    report = {"schema": SCHEMA, "command": "verify", "config": cfg.to_dict(), "N": N,
              "lambda": [_cnum(z) for z in lams], "rows": rows,
              "slopes": sw["slopes"], "min_slope": MIN_SLOPE, "tol": tol}
    return report, rows, ok


def cmd_geometry(conf: dict):
    cfg, N = conf["cfg"], max(conf["order"], 1)
    tol = _tol(conf, "geometry")
    u, v, p = cfg.u, cfg.v, cfg.p
    m = geo.eh_metric(u, v)
    forms = geo.varpi_t0(u, v)
    algebra = geo.quaternion_residuals(m)
    gram = {
        "normal_form": float(np.max(np.abs(m["g"] - 32 * math.pi * geo.eh_normal_form(u, v)))),
        "kahler_I": float(np.max(np.abs(geo.metric_from_forms(forms, m, "I") - m["g"]))),
        "min_eigenvalue": float(np.min(np.linalg.eigvalsh(geo.real_gram(m["g"]).real))),
    }
    checks = dict(algebra)
    checks["gram_normal_form"] = gram["normal_form"] / np.max(np.abs(m["g"]))
    if abs(u * v) > 1e-6:
        checks["varpi0_central"] = float(np.max(np.abs(geo.varpi0_central(u, v) - forms["varpi_0"]))
                                         / np.max(np.abs(forms["varpi_0"])))
    tables = omega_tables(cfg, N + 1)
    report = {"schema": SCHEMA, "command": "geometry", "config": cfg.to_dict(), "N": N,
              "algebra": algebra, "gram": gram}
    rows = []
    if abs(u * v) > 1e-6:
        series = derive(cfg, N, tables)
        E = geo.energy_series(series)
        checks_e = {"E0": abs(E[0] - geo.energy_t0(u, v)) / abs(E[0]),
                    "E1": abs(E[1] - geo.energy_first_closed(cfg, tables))
                    / max(1.0, abs(E[1]))}
        symmetric = abs(p - SYMMETRIC_P) < 1e-12
        if symmetric and N >= 2:
            sym = geo.energy_symmetric(u, v)
            checks_e["E2_symmetric"] = abs(E[2] - sym["E2"]) / max(1.0, abs(sym["E2"]))
        on_cone = symmetric and abs(v - p * u) < 1e-12
        if on_cone and N >= 3:
            checks_e["E2_cone"] = abs(E[2])
            checks_e["E3_cone"] = abs(E[3] - geo.energy_cone_third(u)) / geo.energy_cone_third(u)
        for n, e in enumerate(E):
            rows.append({"n": n, "E": e, **{k: val for k, val in checks_e.items()
                                            if k.startswith(f"E{n}")}})
        W = geo.varpi_series(cfg, N, conf["fd_step"], tables=tables)
        scale = max(float(np.max(np.abs(W[(n, 0)]))) for n in range(N + 1))
        checks_v = {"varpi_t0": max(float(np.max(np.abs(W[(0, k)] - forms[f"varpi_{k}"])))
                                    for k in (-1, 0, 1)) / scale}
        if N >= 2:
            checks_v["varpi2_k>=1"] = max(float(np.max(np.abs(W[(2, k)]))) for k in (1, 2)) / scale
            checks_v["varpi2_0_uv"] = max(abs(W[(2, 0)][0, 2]), abs(W[(2, 0)][1, 3])) / scale
        if on_cone and N >= 3:
            want = geo.varpi_cone_third(u)
            checks_v["varpi3_cone"] = abs(geo.cone_coefficient(W[(3, 0)], p) - want) / want
        report["energy"] = E
        report["energy_checks"] = checks_e
        report["varpi_checks"] = checks_v
        checks.update(checks_e)
        checks.update(checks_v)
    else:
        report["energy"] = None
        report["note"] = "energy and twisted form expansions need u v != 0"
    report["tol"] = tol
    report["residuals"] = checks
    ok = gram["min_eigenvalue"] > 0 and all(r < tol for r in checks.values())
    return report, rows, ok


def sample_p(seed: int, count: int) -> list:
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.3, 2.0, size=(count, 2))
    return [complex(a, b) for a, b in pts]


def cmd_identities(conf: dict):
    tol = _tol(conf, "identities")
    rows = []
    ok = True
    for i, p in enumerate(sample_p(conf["seed"], conf["count"])):
        cfg = ModuliConfig(p, 1.0, 0.0)
        res = geo.identity_suite(omega_tables(cfg, 3))
        ok &= all(r < tol for r in res.values())
        rows.append({"index": i, "p_re": p.real, "p_im": p.imag, **res})
    report = {"schema": SCHEMA, "command": "identities", "seed": conf["seed"],
              "count": conf["count"], "rows": rows, "tol": tol,
              "max": {k: max(r[k] for r in rows) for k in rows[0] if k not in
                      ("index", "p_re", "p_im")}}
    return report, rows, ok


COMMANDS = {"integrals": cmd_integrals, "derive": cmd_derive, "verify": cmd_verify,
            "geometry": cmd_geometry, "identities": cmd_identities}


def _to_csv(rows: list) -> str:
    buf = io.StringIO()
    if rows:
        keys = list(rows[0])
        for r in rows[1:]:
            keys += [k for k in r if k not in keys]
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        conf = resolve(args)
        report, rows, ok = COMMANDS[args.command](conf)
    except UsageError as exc:
        print(f"twistor4p: error: {exc}", file=sys.stderr)
        return 2
    except (Twistor4pError, ValueError) as exc:
        print(f"twistor4p: error: {exc}", file=sys.stderr)
        return 2
    report["pass"] = bool(ok)
    out = conf["out"]
    text = _to_csv(rows) if out and out.endswith(".csv") else json.dumps(report, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
