"""Scenario runner: parse a config, execute the named check, emit reports.

Configs are ini-style key = value files with a [scenario] section naming
the kind and seed plus a [params] section.  Reports are JSON (sorted
keys, deterministic for a fixed config/seed/version apart from the
wall_time_s field); tabular probes land in CSV side files.

Exit codes: 0 pass verdict, 1 fail/witness verdict (still a successful
run), 2 malformed config or runtime error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, covers, envelope, fixtures, geometry, sheeted, tube
from .errors import ConfigError, TubecheckError

KINDS = ("bochner", "psh-check", "abe", "gentube", "cover", "monodromy", "jp-check")
SEEDED_KINDS = ("bochner", "psh-check", "abe", "gentube", "cover", "jp-check")

CLAIMS = {
    "bochner": "tube-envelope-is-the-hull-tube",
    "psh-check": "neg-log-boundary-distance-is-psh",
    "abe": "tube-base-univalent-and-convex",
    "gentube": "floored-neg-log-distance-convex-on-base",
    "cover": "sheeted-branch-identities-and-blowup",
    "monodromy": "sheet-count-by-loop-continuation",
    "jp-check": "shell-ball-envelope-formula",
}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _point_payload(p) -> dict:
    if isinstance(p, complex):
        return {"u": {"re": p.real, "im": p.imag}}
    return {"coords": np.asarray(p, dtype=float).tolist()}


class Params:
    """Typed access over the [params] section with error reporting."""

    def __init__(self, section):
        self._s = dict(section)

    def get(self, key, default=None):
        return self._s.get(key, default)

    def str(self, key, default=None):
        v = self._s.get(key, default)
        if v is None:
            raise ConfigError(f"missing parameter {key!r}")
        return v

    def int(self, key, default=None):
        return int(self.str(key, None if default is None else str(default)))

    def float(self, key, default=None):
        return float(self.str(key, None if default is None else str(default)))

    def floats(self, key, default=None):
        return [float(t) for t in self.str(key, default).split()]


def _base_from_spec(spec: str):
    """Base domain from a fixture name or an inline description.

    Inline forms: `ball cx .. r`, `shell cx .. r1 r2` (r2 may be inf),
    `box lo.. hi..`.
    """
    tokens = spec.split()
    if len(tokens) == 1:
        fx = fixtures.FIXTURES.get(tokens[0])
        if fx is None or fx.kind != "base":
            raise ConfigError(f"unknown base fixture {tokens[0]!r}")
        return fx.factory()
    kind, args = tokens[0], tokens[1:]
    try:
        vals = [math.inf if t == "inf" else float(t) for t in args]
        if kind == "ball":
            return geometry.Ball(np.array(vals[:-1]), vals[-1])
        if kind == "shell":
            return geometry.Shell(np.array(vals[:-2]), vals[-2], vals[-1])
        if kind == "box":
            n = len(vals) // 2
            if len(vals) != 2 * n:
                raise ConfigError("box needs lo and hi corners of equal length")
            return geometry.box_polytope(vals[:n], vals[n:])
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"malformed domain spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown inline domain kind {kind!r}")


def _sheet_from_spec(spec: str) -> sheeted.SheetedRealDomain:
    if len(spec.split()) == 1 and spec in fixtures.FIXTURES:
        return fixtures.sheet_domain(spec)
    return sheeted.Univalent(_base_from_spec(spec))


def _tube_from_params(params: Params) -> tube.TubeDomain:
    name = params.get("tube")
    if name is not None:
        fx = fixtures.FIXTURES.get(name)
        if fx is None or fx.kind != "tube":
            raise ConfigError(f"unknown tube fixture {name!r}")
        return fx.factory()
    base = _base_from_spec(params.str("base"))
    fiber_spec = params.str("fiber", "full")
    if fiber_spec == "full":
        return tube.tube(base)
    tokens = fiber_spec.split()
    if tokens[0] != "ball":
        raise ConfigError(f"unknown fiber spec {fiber_spec!r}")
    vals = [float(t) for t in tokens[1:]]
    return tube.TubeDomain(base, geometry.Ball(np.array(vals[:-1]), vals[-1]))


def _run_bochner(params: Params, seed: int):
    base = _base_from_spec(params.str("base"))
    budget = params.int("budget", 10_000)
    result = envelope.bochner_envelope(base, budget, seed)
    hull = result.hull
    payload = {
        "exact": result.exact,
        "hausdorff_defect": result.hausdorff_defect,
    }
    if isinstance(hull, geometry.HalfspacePolytope):
        payload["hull_vertices"] = hull.vertices
        payload["hull_normals"] = hull.normals
        payload["hull_offsets"] = hull.offsets
    else:
        payload["hull_ball"] = {"center": hull.center, "radius": hull.radius}
    return "pass", payload, {}


def _run_psh(params: Params, seed: int):
    dom = _tube_from_params(params)
    oracle = tube.BoundaryDistanceOracle(dom)
    tol = params.float("tol", 1e-3)
    directions = params.int("directions", 64)
    samples = params.int("samples", 500)
    which = params.str("sampler", "random")
    if which == "grid":
        sampler = tube.GridTubeSampler(dom, per_axis=params.int("grid-per-axis", 100),
                                       margin=params.float("margin", 0.05))
    elif which == "random":
        sampler = tube.RandomTubeSampler(dom, seed, margin=params.float("margin", 0.05))
    else:
        raise ConfigError(f"unknown sampler {which!r}")
    report = tube.psh_check(oracle, sampler, samples, tol=tol, directions=directions)
    return report.verdict, report.to_payload(), {}


def _certificate_payload(cert: envelope.ConvexityCertificate) -> dict:
    payload = {
        "convex": cert.convex,
        "univalent": cert.univalent,
        "midpoint_trials": cert.midpoint_trials,
        "tol": cert.tol,
        "vacuous": cert.vacuous,
    }
    if cert.univalence_pair is not None:
        p, q = cert.univalence_pair
        payload["univalence_pair"] = [_point_payload(p), _point_payload(q)]
    if cert.witness is not None:
        payload["witness"] = {
            "p": _point_payload(cert.witness.p),
            "q": _point_payload(cert.witness.q),
            "midpoint_violation": cert.witness.midpoint_violation,
            "reason": cert.witness.reason,
        }
    return payload


def _run_abe(params: Params, seed: int):
    base = _sheet_from_spec(params.str("base"))
    cert = envelope.abe_check(base, params.int("trials", 200), seed)
    return ("pass" if cert.passes else "fail"), _certificate_payload(cert), {}


def _run_gentube(params: Params, seed: int):
    a1 = _sheet_from_spec(params.str("a1"))
    a2 = _sheet_from_spec(params.str("a2"))
    gen = envelope.GeneralizedTube(a1, a2)
    y0 = np.array(params.floats("y0"))
    psi = envelope.psi_build(gen, y0, params.float("rho0"))
    cert = envelope.psi_convexity_check(psi, params.int("trials", 1000), seed)
    payload = _certificate_payload(cert)
    payload["rho0"] = psi.rho0
    payload["floor"] = psi.floor
    return ("pass" if cert.convex else "fail"), payload, {}


def _run_cover(params: Params, seed: int):
    cfg = fixtures.get(params.str("cover"))
    if not isinstance(cfg, covers.CoverConfig):
        raise ConfigError("cover scenario needs a cover fixture")
    rng = np.random.default_rng(seed)
    fuzz = params.int("fuzz", 1000)
    worst = 0.0
    for _ in range(fuzz):
        p = _random_cover_point(cfg, rng)
        bv = covers.eval_branch(cfg, p)
        f = covers.eval_f(cfg, covers.project(cfg, p))
        if cfg.infinite:
            err = abs((np.exp(bv.value) - f) / f)
        else:
            err = abs((bv.value ** int(cfg.nu) - f) / f)
        worst = max(worst, err)
    identities_ok = worst <= covers.BRANCH_IDENTITY_TOL

    if cfg.infinite:
        p = covers.CoverPoint(complex(0.0, 0.0), np.zeros(2))
        q = covers.CoverPoint(complex(0.0, 2.0 * math.pi), np.zeros(2))
    else:
        ru = (cfg.inner_radius * cfg.outer_radius) ** (0.5 / cfg.nu)
        p = covers.CoverPoint(complex(ru, 0.0), np.zeros(2))
        q = covers.CoverPoint(ru * np.exp(2j * math.pi / cfg.nu), np.zeros(2))
    wit = covers.separability_witness(cfg, p, q)

    eps = params.floats("epsilons", "1e-2 1e-4 1e-6")
    rows = covers.blowup_probe(cfg, eps)
    blowup_ok = all(r.sup_abs_g >= 1.0 / (2.0 * r.epsilon) - 1e-9 for r in rows)

    payload = {
        "branch_identity_max_rel_err": worst,
        "branch_identity_ok": identities_ok,
        "separability_gap": None if wit is None else wit.gap,
        "blowup_ok": blowup_ok,
        "blowup": [{"epsilon": r.epsilon, "sup_abs_g": r.sup_abs_g,
                    "theta_at_sup": r.theta_at_sup} for r in rows],
    }
    ok = identities_ok and wit is not None and wit.gap > 0.0 and blowup_ok
    csv_files = {"blowup": (("epsilon", "sup_abs_g", "theta_at_sup"),
                            [(r.epsilon, r.sup_abs_g, r.theta_at_sup) for r in rows])}
    return ("pass" if ok else "fail"), payload, csv_files


def _random_cover_point(cfg: covers.CoverConfig, rng) -> covers.CoverPoint:
    while True:
        if cfg.infinite:
            u = complex(rng.uniform(math.log(cfg.inner_radius), math.log(cfg.outer_radius)),
                        rng.uniform(-math.pi, math.pi))
        else:
            nu = int(cfg.nu)
            hi = cfg.outer_radius ** (1.0 / nu)
            u = complex(*rng.uniform(-hi, hi, size=2))
        y = rng.uniform(-cfg.fiber_radius, cfg.fiber_radius, size=2)
        p = covers.CoverPoint(u, y)
        if covers.valid_point(cfg, p):
            return p


def _germ_from_params(params: Params):
    from . import continuation

    name = params.str("germ")
    if name != "data":
        key = name if name.startswith("germ-") else f"germ-{name}"
        fx = fixtures.FIXTURES.get(key)
        if fx is None or fx.kind != "germ":
            raise ConfigError(f"unknown germ fixture {name!r}")
        return fx.factory()
    center = params.floats("center")
    c = complex(center[0], center[1] if len(center) > 1 else 0.0)
    coeffs = params.floats("coefficients")
    return continuation.Germ(c, np.array(coeffs, dtype=complex))


def _run_monodromy(params: Params, seed: int):
    from . import continuation

    turns = params.int("turns", 20)
    if params.get("cover") is not None:
        cfg = fixtures.get(params.str("cover"))
        if not isinstance(cfg, covers.CoverConfig):
            raise ConfigError("monodromy scenario needs a cover fixture")
        radius = params.float("radius", 1.5)
        result = covers.monodromy_sheets(cfg, radius, turns)
        sheets, gaps, offsets = result.sheets, result.gaps, result.constant_offsets
        expected = "never-returns" if cfg.infinite else int(cfg.nu)
    else:
        germ = _germ_from_params(params)
        lc = params.floats("loop-center", "0 0")
        loop_center = complex(lc[0], lc[1] if len(lc) > 1 else 0.0)
        radius = abs(germ.center - loop_center)
        if radius <= 0.0:
            raise ConfigError("loop center must differ from the germ center")
        loop = continuation.circle_loop(radius, 16, loop_center)
        order, gaps, offsets = continuation.monodromy_scan(germ, loop, turns)
        sheets = order
        raw = params.str("expect")
        expected = "never-returns" if raw == "never" else int(raw)
    got = sheets if sheets is not None else "never-returns"
    ok = got == expected
    payload = {
        "sheets": got,
        "expected": expected,
        "turn_gaps": list(gaps),
        "constant_offsets": [{"re": o.real, "im": o.imag} for o in offsets],
    }
    csv_files = {"monodromy": (("turn", "gap"),
                               [(k + 1, g) for k, g in enumerate(gaps)])}
    return ("pass" if ok else "fail"), payload, csv_files


def _run_jp(params: Params, seed: int):
    cfg = envelope.JpShellConfig(params.float("r1"), params.float("r2"))
    report = envelope.jp_consistency_suite(cfg, params.int("samples", 10_000), seed)
    return ("pass" if report.passes else "fail"), report.to_payload(), {}


HANDLERS = {
    "bochner": _run_bochner,
    "psh-check": _run_psh,
    "abe": _run_abe,
    "gentube": _run_gentube,
    "cover": _run_cover,
    "monodromy": _run_monodromy,
    "jp-check": _run_jp,
}


def run_scenario(config_path: str, out_dir: str = ".", seed_override: int | None = None) -> int:
    cp = configparser.ConfigParser()
    try:
        read = cp.read(config_path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if not read:
        raise ConfigError(f"cannot read config file {config_path!r}")
    if "scenario" not in cp:
        raise ConfigError("config needs a [scenario] section")
    kind = cp["scenario"].get("kind")
    if kind not in KINDS:
        raise ConfigError(f"unknown scenario kind {kind!r} (one of {', '.join(KINDS)})")
    seed = seed_override
    if seed is None:
        raw = cp["scenario"].get("seed")
        if raw is not None:
            try:
                seed = int(raw)
            except ValueError as exc:
                raise ConfigError(f"seed must be an integer, got {raw!r}") from exc
    if seed is None:
        if kind in SEEDED_KINDS:
            raise ConfigError(f"sampled scenario {kind!r} requires a seed")
        seed = 0
    params = Params(cp["params"] if "params" in cp else {})

    start = time.perf_counter()
    verdict, payload, csv_files = HANDLERS[kind](params, seed)
    wall = time.perf_counter() - start

    stem = Path(config_path).stem
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "claim": CLAIMS[kind],
        "kind": kind,
        "params": {k: v for k, v in params._s.items()},
        "payload": _jsonable(payload),
        "seed": seed,
        "tool": "tubecheck",
        "verdict": verdict,
        "version": __version__,
        "wall_time_s": wall,
    }
    report_path = out / f"{stem}.report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                           encoding="utf-8")
    for name, (header, rows) in csv_files.items():
        with (out / f"{stem}.{name}.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    print(f"{kind}: {verdict} -> {report_path}")
    return 0 if verdict == "pass" else 1


def list_fixtures() -> int:
    for name, kind, description in fixtures.catalog():
        print(f"{name:24s} [{kind:5s}] {description}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tubecheck",
                                     description="tube-domain verification scenarios")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a scenario config")
    run_p.add_argument("config")
    run_p.add_argument("--out", default=".", help="report output directory")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    sub.add_parser("fixtures", help="list built-in fixtures")
    args = parser.parse_args(argv)
    if args.command == "fixtures":
        return list_fixtures()
    try:
        return run_scenario(args.config, args.out, args.seed)
    except TubecheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
