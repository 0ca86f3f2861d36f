"""Command-line driver: ``beurling-lab {build,scan,profile,verify,list}``.

Every command writes CSV series and JSON reports into ``--out``.  Runs are
deterministic: identical configurations give byte-identical files.

Exit codes: 0 pass, 1 failed check, 2 usage or specification error,
3 resource guard, 4 numerical precondition.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import gallery, zeta
from .errors import (
    BeurlingError,
    DivergenceError,
    DomainError,
    FitError,
    NoDensityError,
    ParameterError,
    PreconditionError,
    ProfileError,
    RangeError,
    SizeError,
)
from .measures import (
    DEFAULT_BINS,
    TIE_RTOL,
    GeneralizedNumberSystem,
    HalfLineMeasure,
    TailModel,
    exp_star,
)
from .primedist import chebyshev_gap_check, pi_from_riemann_pi, riemann_pi_measure
from .semigroup import PrimeSequence, enumerate_integers, load_primes_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD, EXIT_NUMERIC = 0, 1, 2, 3, 4
SUITES = ("core", "zeta", "tauber", "cesaro", "gallery")
THREADS_ENV = "BEURLING_LAB_THREADS"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Every knob of a run; round-trips through JSON unchanged."""

    system: str = "ordinary"
    xmax: float | None = None
    bins: int = DEFAULT_BINS
    tmin: float | None = None
    tmax: float | None = None
    tcount: int = 40
    sigma: float = 1.0
    nlist: list = field(default_factory=lambda: [0, 1, 2])
    m: int = asy.DEFAULT_M
    alpha_target: float | None = None
    target: str | None = None
    per_decade: int = asy.PER_DECADE
    suite: str = "core"
    out: str = "out"

    def to_json(self):
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# ------------------------------------------------------------------ io
def _clean(obj):
    # JSON-safe copy: non-finite floats become strings, numpy scalars become Python
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


def _write_json(path, obj):
    Path(path).write_text(json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n", encoding="ascii")


def _write_text(path, text):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def _threads():
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer") from None
    return min(4, os.cpu_count() or 1)


def _pmap(fn, items):
    # bounded pool; results come back in input order
    items = list(items)
    if len(items) <= 1 or _threads() == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(fn, items))


def _tail_dict(t):
    if t is None:
        return None
    d = {f.name: getattr(t, f.name) for f in dataclasses.fields(t) if f.name != "exact"}
    d["exact"] = t.exact is not None
    return d


def _tail_from(d, exact=None):
    if d is None:
        return None
    d = dict(d)
    d.pop("exact", None)
    return TailModel(**d, exact=exact)


# -------------------------------------------------------------- systems
def _looks_like_path(target):
    return os.sep in target or target.endswith((".csv", ".json")) or Path(target).exists()


def load_system(path):
    """Rebuild a system from a directory written by ``build``."""
    path = Path(path)
    meta_file = path / "meta.json"
    if not meta_file.is_file():
        raise UsageError(f"no built system at {str(path)!r} (meta.json missing)")
    meta = json.loads(meta_file.read_text(encoding="ascii"))
    dN = HalfLineMeasure.load_csv(path / "dN.csv")
    dPi = HalfLineMeasure.load_csv(path / "dPi.csv")
    primes = None
    if meta.get("primes"):
        p = meta["primes"]
        bound = float(p["bound"])
        vals = load_primes_csv(path / "primes.csv").values
        primes = PrimeSequence(vals, bound=bound, kind=p["kind"], params=p.get("params"))
    name = meta.get("gallery") or ""
    exact = None
    if name.startswith("continuous-alpha"):
        exact = gallery.alpha_pi_tail(float(meta["alpha"]))
    sysmeta = {k: meta[k] for k in ("scan_window", "alpha", "x_max", "gallery", "density_a_error")
               if k in meta}
    if "scan_window" in sysmeta:
        sysmeta["scan_window"] = tuple(sysmeta["scan_window"])
    return GeneralizedNumberSystem(
        dN, dPi, primes, density_a=meta.get("density_a"), label=meta.get("label", ""),
        n_tail=_tail_from(meta.get("n_tail")), pi_tail=_tail_from(meta.get("pi_tail"), exact),
        pi_main=meta.get("pi_main", "none"),
        comparators=gallery.comparators_for(name, dN.x_max) if name else {}, meta=sysmeta)


def resolve_system(cfg):
    """A gallery name, a directory written by ``build``, or a CSV list of primes."""
    target = cfg.system
    if _looks_like_path(target):
        p = Path(target)
        if p.is_dir():
            return load_system(p)
        if p.is_file() and p.suffix == ".csv":
            if cfg.xmax is None:
                raise UsageError("a primes file needs --xmax")
            primes = load_primes_csv(p, bound=cfg.xmax)
            primes = PrimeSequence(primes.values, bound=cfg.xmax, kind="custom")
            dN = enumerate_integers(primes, cfg.xmax)
            dPi = riemann_pi_measure(primes, cfg.xmax)
            return GeneralizedNumberSystem(dN, dPi, primes, label=p.stem,
                                           n_tail=zeta.envelope_tail(dN))
        raise UsageError(f"system file {target!r} not found")
    return gallery.build_system(target, cfg.xmax, cfg.bins)


# ------------------------------------------------------------- commands
def cmd_build(cfg):
    S = resolve_system(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    S.dN.dump_csv(out / "dN.csv")
    S.dPi.dump_csv(out / "dPi.csv")
    meta = {"label": S.label, "system": cfg.system, "x_max": S.x_max, "density_a": S.density_a,
            "pi_main": S.pi_main, "n_tail": _tail_dict(S.n_tail), "pi_tail": _tail_dict(S.pi_tail),
            "atoms": {"dN": int(S.dN.x.size), "dPi": int(S.dPi.x.size),
                      "dN_bins": int(S.dN.bins.count) if S.dN.bins is not None else 0,
                      "dPi_bins": int(S.dPi.bins.count) if S.dPi.bins is not None else 0}}
    meta.update({k: v for k, v in S.meta.items() if k != "x_max"})
    meta["tie_rtol"] = TIE_RTOL  # relative log-space tolerance under which atoms merge
    if S.primes is not None:
        _write_text(out / "primes.csv", "".join(f"{v!r}\n" for v in S.primes.values.tolist()))
        meta["primes"] = {"kind": S.primes.kind, "bound": S.primes.bound, "params": S.primes.params,
                          "count": len(S.primes)}
    try:
        est = asy.estimate_density_a(S, "ratio_fit")
        meta["a_estimate"] = {"method": est.method, "value": est.a, "error": est.error,
                              "slope": est.slope, "other": est.other}
    except NoDensityError as exc:
        meta["a_estimate"] = {"method": "ratio_fit", "value": None, "verdict": "no-density",
                              "slope": exc.slope}
    _write_json(out / "meta.json", meta)
    print(f"built {S.label}: {meta['atoms']} -> {out}")
    return EXIT_OK


def _t_grid(cfg, S):
    lo, hi = S.meta.get("scan_window", (2.0, 200.0))
    lo = cfg.tmin if cfg.tmin is not None else lo
    hi = cfg.tmax if cfg.tmax is not None else hi
    if not 0 < lo < hi or cfg.tcount < 2:
        raise UsageError("need 0 < tmin < tmax and tcount >= 2")
    return np.geomspace(lo, hi, cfg.tcount)


def cmd_scan(cfg):
    S = resolve_system(cfg)
    grid = _t_grid(cfg, S)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    scans = _pmap(lambda n: zeta.boundary_scan(S, int(n), cfg.sigma, grid), cfg.nlist)
    for sc in scans:
        _write_text(out / f"scan_n{sc.n}.csv", sc.to_csv())
    cls = zeta.classify_scans(scans)
    report = {"system": S.label, "sigma": cfg.sigma, "classification": cls,
              "threshold": zeta.CLASS_THRESHOLD,
              "scans": [dict(sc.summary(), max_error=float(np.max(sc.errors)),
                             max_rel_error=float(np.max(sc.errors / np.abs(sc.values))))
                        for sc in scans]}
    _write_json(out / "scan.json", report)
    for sc in scans:
        print(f"n={sc.n} beta_hat={sc.beta_hat:.4f} residual={sc.residual:.3g}")
    print(f"classification: {cls}")
    return EXIT_OK


def cmd_profile(cfg):
    S = resolve_system(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    targets = [cfg.target] if cfg.target else list(asy.TARGETS)
    for t in targets:
        if t not in asy.TARGETS:
            raise UsageError(f"target must be one of {asy.TARGETS}")
    grid = asy.default_grid(S.x_max, per_decade=cfg.per_decade)
    ccfg = asy.CesaroConfig(m=cfg.m, alpha=cfg.alpha_target)
    jobs = [(t, int(n), kind) for t in targets for n in cfg.nlist for kind in ("raw", "cesaro")]

    def run(job):
        t, n, kind = job
        if kind == "raw":
            return job, asy.remainder_profile(S, t, n, grid=grid)
        return job, asy.cesaro_remainder_profile(S, t, n, ccfg, grid=grid)

    verdicts = []
    for (t, n, kind), prof in _pmap(run, jobs):
        name = f"profile_{t}_n{n}_raw.csv" if kind == "raw" else f"profile_{t}_n{n}_cesaro_m{cfg.m}.csv"
        _write_text(out / name, prof.to_csv())
        v = prof.verdict_dict()
        v.update({"kind": kind, "a": prof.a, "raw_slope": prof.slope, "file": name,
                  "alpha_target": cfg.alpha_target})
        verdicts.append(v)
        print(f"{t} n={n} {kind}{'' if kind == 'raw' else f' m={cfg.m}'}: {prof.verdict} "
              f"(sup {prof.sup_norm:.4g}, trend slope {prof.trend_slope:.3g})")
    _write_json(out / "verdicts.json", {"system": S.label, "profiles": verdicts})
    return EXIT_OK


# --------------------------------------------------------------- verify
def _check(name, ok, margin=None, **detail):
    return {"name": name, "ok": bool(ok), "margin": margin, **detail}


def _skip(name, reason):
    return {"name": name, "ok": None, "skipped": reason}


def _suite_core(S, cfg):
    out = []
    dN = S.dN
    neg = int(np.sum(dN.m < 0)) + (int(np.sum(dN.bins.masses < 0)) if dN.bins is not None else 0)
    out.append(_check("dN_nonnegative", neg == 0, negative_masses=neg))
    X = S.x_max
    xs = np.unique(np.concatenate([np.geomspace(1.0, X, 500), dN.x[dN.x <= X][:: max(1, dN.x.size // 500)]]))
    if S.primes is not None and dN.is_atomic:
        ref = enumerate_integers(S.primes, X)
        name = "dN_matches_semigroup"
    else:
        ref = exp_star(S.dPi, X)
        name = "dN_matches_exp_star"
    got, want = dN.cumulative(xs), ref.cumulative(xs)
    gap = float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1.0)))
    out.append(_check(name, gap <= 1e-9, margin=1e-9 - gap, max_rel_gap=gap))
    if S.primes is not None:
        pts = np.geomspace(S.primes.p1, X, 60)
        # relative to max(1, pi(x)): Pi accumulates the masses 1/j in floating point
        worst = max(abs(pi_from_riemann_pi(S.Pi, S.primes.p1, x) - S.primes.count(x))
                    / max(1.0, S.primes.count(x)) for x in pts)
        out.append(_check("mobius_roundtrip", worst <= 1e-12, margin=1e-12 - worst, max_rel_gap=worst))
        rep = chebyshev_gap_check(S.primes, pts)
        out.append(_check("chebyshev_gap", rep.ok, margin=rep.worst_slack, violations=len(rep.violations)))
        if S.primes.kind in ("rational", "sparse2k"):
            bad = int(np.sum(dN.m != 1.0))
            out.append(_check("unit_integer_masses", bad == 0, atoms_not_one=bad))
    return out


ZETA_POINTS = (2.0, 3.0, complex(2, 5))
ETAS = (1.05, 1.1, 1.5, 2.0)
TS_341 = (0.1, 1.0, 5.0, 10.0, 50.0)


def _suite_zeta(S, cfg):
    out = []
    for s in ZETA_POINTS:
        vals = {"dirichlet": zeta.zeta_dirichlet(S, s)}
        if S.primes is not None:
            vals["euler"] = zeta.zeta_euler(S, s, S.x_max)
        try:
            vals["exp_pi"] = zeta.zeta_exp_pi(S, s, S.x_max)
        except PreconditionError:
            pass
        names = sorted(vals)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                gap = abs(vals[a].value - vals[b].value)
                tol = vals[a].error + vals[b].error
                out.append(_check(f"zeta_{a}_vs_{b}_s={s}", gap <= tol, margin=tol - gap, gap=gap,
                                  rel_errors=[vals[a].rel_error, vals[b].rel_error]))
        zc = zeta.zeta_dirichlet(S, complex(s).conjugate())
        sym = abs(zc.value - vals["dirichlet"].value.conjugate()) / abs(zc.value)
        out.append(_check(f"conjugate_symmetry_s={s}", sym <= 1e-12, margin=1e-12 - sym))
    bad, worst = 0, math.inf
    for eta in ETAS:
        for t in TS_341:
            r = zeta.inequality_341(S, eta, t)
            worst = min(worst, r.margin)
            bad += not r.ok
    out.append(_check("inequality_341_grid", bad == 0, margin=worst, violations=bad,
                      grid={"eta": list(ETAS), "t": list(TS_341)}))
    return out


def _suite_tauber(S, cfg):
    if S.density_a is None:
        return [_skip("laplace_delta", "system has no density a")]
    out = []
    for s in (0.5, 1.0, complex(1, 2)):
        r = asy.laplace_delta_check(S, S.density_a, s)
        tol = max(r.left_error + r.right_error, 1e-4)
        out.append(_check(f"laplace_delta_s={s}", r.gap <= tol, margin=tol - r.gap, **r.as_dict()))
    try:
        est = asy.estimate_density_a(S, "ratio_fit")
        if est.other is not None:
            out.append(_check("density_methods_agree", est.discrepancy <= 1e-3,
                              margin=1e-3 - est.discrepancy, ratio_fit=est.a, g1_exp=est.other))
    except NoDensityError as exc:
        out.append(_skip("density_methods_agree", f"no-density (slope {exc.slope:.3g})"))
    return out


def _suite_cesaro(S, cfg):
    out = []
    for m in asy.M_SEARCH:
        E = asy.PiecewiseLinear([1e-300, 1e7], [0.0], [1.0])
        worst = max(abs(asy.cesaro_mean(E, m, x) / (x / (m + 1)) - 1) for x in (10.0, 1e3, 1e6))
        out.append(_check(f"cesaro_identity_m={m}", worst <= 1e-10, margin=1e-10 - worst))
    a = S.density_a if S.density_a is not None else float(S.N(S.x_max) / S.x_max)
    E = asy.Remainder(S.dN, "linear", a).piecewise()
    xs = np.geomspace(10, S.x_max, 40)
    lhs = np.abs(E.cesaro_means(xs, cfg.m))
    rhs = E.abs().cesaro_means(xs, cfg.m)
    slack = float(np.min(rhs - lhs + 1e-9 * rhs))
    out.append(_check(f"monotone_majorant_m={cfg.m}", slack >= 0, margin=slack))
    for n in cfg.nlist:
        raw = asy.remainder_profile(S, "Pi_minus_Li", int(n))
        ces = asy.cesaro_remainder_profile(S, "Pi_minus_Li", int(n), asy.CesaroConfig(m=cfg.m))
        out.append({"name": f"observe_Pi_minus_Li_n={n}", "ok": None,
                    "raw": raw.verdict_dict(), "cesaro": ces.verdict_dict()})
    return out


def _suite_gallery(S, cfg):
    name = S.meta.get("gallery", "")
    base = name.partition(":")[0]
    out = []
    if base == "ordinary":
        xs = np.arange(1.0, min(S.x_max, 1e4) + 1)
        bad = int(np.sum(S.N(xs) != xs))
        out.append(_check("N_equals_floor", bad == 0, mismatches=bad))
        out.append(_check("pi_100", S.primes.count(100) == 25, value=S.primes.count(100)))
    elif base == "powers2":
        table = S.comparators["N_at_powers"]
        bad = sum(S.N(x) != v for x, v in table.items() if x <= S.x_max)
        out.append(_check("N_at_powers_equals_partition_sums", bad == 0, mismatches=bad))
        out.append(_check("pi_100", S.primes.count(100) == 6, value=S.primes.count(100)))
        p = gallery.partition_numbers(100)
        r = p[100] / gallery.hardy_ramanujan(100)
        out.append(_check("hardy_ramanujan_ratio_100", 0.9 < r < 1.0, margin=min(r - 0.9, 1.0 - r), ratio=r))
    elif base == "sparse2k":
        first = S.primes.values[:5].tolist()
        out.append(_check("first_five_primes", first == [2, 3, 7, 19, 53], values=first))
        xs = np.geomspace(1e3, S.x_max, 200)
        res = np.array([S.primes.count(x) for x in xs]) - S.comparators["pi"](xs)
        slope = float(np.polyfit(np.log(xs), np.log(np.abs(res)), 1)[0])
        out.append(_check("pi_residual_flat", abs(slope) < 0.05, margin=0.05 - abs(slope), slope=slope))
    elif base == "continuous-alpha":
        alpha = float(S.meta["alpha"])
        neg = int(np.sum(S.dPi.bins.masses < 0))
        out.append(_check("density_nonnegative", neg == 0, negative_bins=neg))
        xs = np.geomspace(1.0, S.x_max, 400)
        dec = float(np.min(np.diff(S.N(xs))))
        out.append(_check("N_nondecreasing", dec >= -1e-12, margin=dec))
        ref = gallery.pi_alpha_at(alpha, math.e)
        gap = abs(S.Pi(math.e) - ref)
        out.append(_check("Pi_at_e_vs_quadrature", gap <= 1e-6 * max(1, ref), margin=1e-6 - gap, gap=gap))
    else:
        out.append(_skip("gallery", "not a gallery system"))
    return out


SUITE_FNS = {"core": _suite_core, "zeta": _suite_zeta, "tauber": _suite_tauber,
             "cesaro": _suite_cesaro, "gallery": _suite_gallery}


def cmd_verify(cfg):
    if cfg.suite not in SUITES:
        raise UsageError(f"suite must be one of {SUITES}")
    S = resolve_system(cfg)
    checks = SUITE_FNS[cfg.suite](S, cfg)
    failed = [c["name"] for c in checks if c.get("ok") is False]
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / f"verify_{cfg.suite}.json",
                {"system": S.label, "suite": cfg.suite, "passed": not failed, "failed": failed,
                 "checks": checks})
    for c in checks:
        if c.get("ok") is None:
            state = "skip" if "skipped" in c else "info"
        else:
            state = "PASS" if c["ok"] else "FAIL"
        print(f"{state} {c['name']}")
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_list(cfg):
    for name in gallery.gallery_names():
        print(name)
    return EXIT_OK


COMMANDS = {"build": cmd_build, "scan": cmd_scan, "profile": cmd_profile, "verify": cmd_verify,
            "list": cmd_list}


# ----------------------------------------------------------------- parser
def _nlist(text):
    try:
        vals = [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError("nlist must be comma-separated integers") from None
    if not vals or min(vals) < 0:
        raise argparse.ArgumentTypeError("nlist needs non-negative integers")
    return vals


def build_parser():
    S = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=S, help="JSON RunConfig; flags override it")
    common.add_argument("--system", default=S, help="gallery name, build directory or primes CSV")
    common.add_argument("--xmax", type=float, default=S)
    common.add_argument("--bins", type=int, default=S)
    common.add_argument("--tmin", type=float, default=S)
    common.add_argument("--tmax", type=float, default=S)
    common.add_argument("--tcount", type=int, default=S)
    common.add_argument("--sigma", type=float, default=S)
    common.add_argument("--nlist", type=_nlist, default=S, help="e.g. 0,1,2,3")
    common.add_argument("--m", type=int, default=S, help="Riesz order of the Cesaro mean")
    common.add_argument("--alpha-target", dest="alpha_target", type=float, default=S)
    common.add_argument("--target", choices=asy.TARGETS, default=S)
    common.add_argument("--out", default=S)
    p = argparse.ArgumentParser(prog="beurling-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="build a system and dump dN, dPi, meta.json")
    sub.add_parser("scan", parents=[common], help="boundary scans of G^(n) on Re s = sigma")
    sub.add_parser("profile", parents=[common], help="raw and Cesaro remainder profiles")
    v = sub.add_parser("verify", parents=[common], help="run a check suite")
    v.add_argument("--suite", choices=SUITES, default=S)
    sub.add_parser("list", parents=[common], help="list gallery systems")
    return p


def config_from_args(ns):
    base = {}
    if getattr(ns, "config", None):
        try:
            base = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise UsageError(f"config file {ns.config!r} not found") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from None
    over = {k: v for k, v in vars(ns).items() if k not in ("config", "command")}
    cfg = RunConfig.from_dict({**base, **over})
    if cfg.m < 0:
        raise UsageError("--m must be >= 0")
    return cfg


def main(argv=None):
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[ns.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SizeError, MemoryError) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (PreconditionError, DivergenceError, FitError, ProfileError, RangeError, NoDensityError) as exc:
        print(f"numerical precondition: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParameterError, DomainError, BeurlingError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
