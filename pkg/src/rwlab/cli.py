"""Command-line entry point: ``rwlab <subcommand> [--config run.toml] [--set key=value ...]``.

Exit codes: 0 success, 1 usage or config error, 2 certification (or
validation) failure, 3 blow-up detected.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import bounds, characteristics, diagnostics, oracles, output, solver, wavespeed
from .config import RunConfig, build_data, build_grid, build_solver_config, build_speed
from .errors import ConfigError, NonFiniteState, RWLError, SolverError

EXIT_OK, EXIT_USAGE, EXIT_CERT_FAIL, EXIT_BLOWUP = 0, 1, 2, 3

log = logging.getLogger("rwlab")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--config", help="TOML config file with dotted keys")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config key (repeatable)")
    p.add_argument("--output-dir", help="output directory (beats RWL_OUTPUT_DIR and output_dir)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    p = _Parser(prog="rwlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = {}
    for name, help_ in [
        ("simulate", "run one simulation and write frames + summary"),
        ("certify", "simulate and certify the a priori bounds on R and S"),
        ("trace", "trace characteristics and check weighted monotonicity"),
        ("convergence", "constant-speed refinement study against d'Alembert"),
        ("sweep", "run the same data for several lambda values"),
        ("energy-check", "energy drift of a run (conserved for lambda = 1)"),
        ("validate-speed", "sample the wave speed and check its assumptions"),
    ]:
        sp[name] = sub.add_parser(name, help=help_)
        _common(sp[name])
    sp["certify"].add_argument("--tol", type=float, help="certification tolerance (default 10 dx)")
    t = sp["trace"]
    t.add_argument("--anchor-t", type=float)
    t.add_argument("--anchor-x", type=float)
    t.add_argument("--direction", choices=["minus", "plus"])
    t.add_argument("--n-anchors-random", type=int)
    sp["sweep"].add_argument("--lambdas", help="comma-separated lambda values, e.g. 0,1")
    sp["sweep"].add_argument("--workers", type=int)
    sp["convergence"].add_argument("--n-list", help="comma-separated grid sizes")
    sp["convergence"].add_argument("--workers", type=int)
    sp["energy-check"].add_argument("--refine", action="store_true",
                                    help="also run at 2n and report the drift ratio")
    v = sp["validate-speed"]
    v.add_argument("--theta-min", type=float)
    v.add_argument("--theta-max", type=float)
    v.add_argument("--n-samples", type=int, default=10_000)
    return p


def _load_config(args) -> RunConfig:
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v.strip()
    cfg = RunConfig.load(args.config, overrides)
    flag_keys = {
        "tol": "certify.tol", "anchor_t": "trace.anchor_t", "anchor_x": "trace.anchor_x",
        "direction": "trace.direction", "n_anchors_random": "trace.n_anchors_random",
        "lambdas": "sweep.lambdas", "n_list": "convergence.n_list", "workers": "workers",
    }
    for attr, key in flag_keys.items():
        val = getattr(args, attr, None)
        if val is not None:
            cfg.set(key, val)
    if args.output_dir:
        cfg.set("output_dir", args.output_dir)
    return cfg


def _outdir(cfg, args) -> Path:
    d = Path(args.output_dir or cfg.output_dir())
    d.mkdir(parents=True, exist_ok=True)
    return d


def _setup(cfg):
    ws = build_speed(cfg)
    grid = build_grid(cfg)
    data = build_data(cfg, grid, ws)
    return ws, grid, data


def _run(cfg, **solver_overrides):
    ws, grid, data = _setup(cfg)
    scfg = build_solver_config(cfg, **solver_overrides)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            traj = solver.simulate(data, grid, ws, scfg)
        except NonFiniteState as err:
            # NaN/inf is a blow-up as far as exit codes are concerned
            traj = err.trajectory
            traj.frames.append(err.state)
            traj.blowup = diagnostics.BlowUpReport(True, float("inf"), float(err.state.t), None)
    return traj


def _blowup(traj, cfg):
    rep = diagnostics.detect_blowup(traj, cfg["diagnostics.blowup_threshold"])
    if traj.blowup is not None and traj.blowup.detected and not rep.detected:
        rep = traj.blowup
    return rep


def _run_summary(traj, cfg, rep):
    hist = rep.peak_history
    return {
        "config": cfg.resolved(),
        "speed": traj.ws.describe(),
        "grid": {"x_min": traj.grid.x_min, "x_max": traj.grid.x_max, "n": traj.grid.n, "dx": traj.grid.dx},
        "lambda": traj.lam,
        "t_final": traj.final.t,
        "completed": traj.blowup is None,
        "n_frames": len(traj.frames),
        "dt": solver.dt_summary(traj),
        "warnings": traj.metadata.get("warnings", []),
        "sup_norm_series": hist.tolist(),
        "energy_series": diagnostics.energy_series(traj).tolist(),
        "energy_conserved_by_pde": traj.lam == 1,
        "blowup": rep.to_dict(),
    }


def cmd_simulate(cfg, args):
    out = _outdir(cfg, args)
    traj = _run(cfg)
    rep = _blowup(traj, cfg)
    output.write_frames(out, traj, cfg["output.frames"])
    output.write_json(out / "summary.json", _run_summary(traj, cfg, rep))
    print(f"simulate: t={traj.final.t:.6g}, {len(traj.frames)} frames, blow-up {'DETECTED' if rep.detected else 'no'}")
    return EXIT_BLOWUP if rep.detected else EXIT_OK


def _certify_traj(traj, cfg):
    R0, S0 = traj.frames[0].R, traj.frames[0].S
    consts = bounds.bound_constants(R0, S0, traj.ws)
    return bounds.certify(traj, consts, cfg["certify.tol"])


def cmd_certify(cfg, args):
    out = _outdir(cfg, args)
    traj = _run(cfg)
    rep = _blowup(traj, cfg)
    cert = _certify_traj(traj, cfg)
    summary = cert.to_dict()
    summary["config"] = cfg.resolved()
    summary["blowup"] = rep.to_dict()
    output.write_json(out / "certificate.json", summary)
    output.write_frames(out, traj, cfg["output.frames"])
    print(f"certify: verdict {cert.verdict}; P={cert.constants.P:.6g}, m0={cert.constants.m0:.6g}, "
          f"A={cert.constants.A:.6g}, tol={cert.tol:.3g}")
    if rep.detected:
        return EXIT_BLOWUP
    if cert.applicable and not cert.passed:
        return EXIT_CERT_FAIL
    return EXIT_OK


def cmd_trace(cfg, args):
    out = _outdir(cfg, args)
    traj = _run(cfg)
    direction = cfg["trace.direction"]
    anchors = []
    if cfg["trace.anchor_t"] is not None or cfg["trace.anchor_x"] is not None:
        if cfg["trace.anchor_t"] is None or cfg["trace.anchor_x"] is None:
            raise ConfigError("trace needs both --anchor-t and --anchor-x", "trace.anchor_t")
        anchors.append((cfg["trace.anchor_t"], cfg["trace.anchor_x"]))
    rng = np.random.default_rng(cfg["seed"])
    anchors += characteristics.random_anchors(traj, direction, cfg["trace.n_anchors_random"], rng)
    if not anchors:
        raise ConfigError("trace needs an anchor or --n-anchors-random > 0", "trace.n_anchors_random")
    tdir = out / "traces"
    tdir.mkdir(exist_ok=True)
    reports = []
    for i, a in enumerate(anchors):
        curve = characteristics.trace(traj, a, direction)
        output.write_curve(tdir / f"trace_{i:03d}.csv", curve)
        r = characteristics.weighted_monotonicity_report(curve, cfg["trace.kappa"])
        reports.append({"anchor": list(a), "file": f"traces/trace_{i:03d}.csv", **r.to_dict(),
                        "speed_sandwich": characteristics.speed_sandwich_ok(curve, traj.ws.c_star, traj.ws.c_sup)})
    ok = all(r["passed"] for r in reports)
    output.write_json(out / "trace_summary.json",
                      {"config": cfg.resolved(), "direction": direction, "all_passed": ok, "curves": reports})
    print(f"trace: {len(reports)} {direction} curve(s), {'all pass' if ok else 'FAILURES'}")
    return EXIT_CERT_FAIL if (traj.lam == 0 and not ok) else EXIT_OK


def _convergence_job(job):
    values, order, n = job
    cfg = RunConfig(dict(values))
    cfg.set("grid.n", n)
    grid = build_grid(cfg)
    ws = wavespeed.constant_speed(cfg["speed.value"])
    from .initial_data import gaussian_bump

    data = gaussian_bump(cfg["data.amplitude"], cfg["data.center"], cfg["data.width"], 0.0, grid.x)
    scfg = build_solver_config(cfg, order=order, t_end=cfg["convergence.t"], output_every=10**9)
    traj = solver.simulate(data, grid, ws, scfg)
    oracle = oracles.LinearWaveOracle.from_data(data, ws.c_star)
    exact = oracles.dalembert_periodic(oracle, traj.final.t, grid.x, grid.length)
    return (order, n), grid.dx * float(np.sum(np.abs(traj.final.u - exact)))


def _fan_out(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


EXPECTED_RATIO = {"upwind1": (1.7, 2.3), "muscl2": (3.2, 4.8)}


def cmd_convergence(cfg, args):
    out = _outdir(cfg, args)
    orders = cfg["convergence.orders"]
    for o in orders:
        if o not in EXPECTED_RATIO:
            raise ConfigError(f"convergence.orders: unknown order {o!r}", "convergence.orders")
    ns = sorted(cfg["convergence.n_list"])
    jobs = [(cfg.values, o, n) for o in orders for n in ns]
    results = dict(sorted(_fan_out(_convergence_job, jobs, cfg["workers"])))
    studies = {}
    for o in orders:
        errs = [results[(o, n)] for n in ns]
        ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
        lo, hi = EXPECTED_RATIO[o]
        studies[o] = {"n": ns, "l1_error": errs, "ratios": ratios, "expected_ratio": [lo, hi],
                      "within_expected": all(lo <= r <= hi for r in ratios)}
        print(f"convergence {o}: errors {['%.3e' % e for e in errs]}, ratios {['%.3f' % r for r in ratios]}")
    output.write_json(out / "convergence.json", {"config": cfg.resolved(), "studies": studies})
    return EXIT_OK


def _sweep_job(job):
    values, lam = job
    cfg = RunConfig(dict(values))
    cfg.set("solver.lambda", lam)
    traj = _run(cfg)
    rep = _blowup(traj, cfg)
    cert = _certify_traj(traj, cfg)
    code = EXIT_BLOWUP if rep.detected else (EXIT_CERT_FAIL if cert.applicable and not cert.passed else EXIT_OK)
    hist = rep.peak_history
    return lam, {
        "lambda": lam,
        "exit_code": code,
        "t_final": traj.final.t,
        "blowup": rep.to_dict(),
        "max_sup_sum": float(np.max(hist[:, 1] + hist[:, 2])),
        "certificate": {"verdict": cert.verdict, "applicable": cert.applicable,
                        "first_failure": cert.first_failure, **cert.constants.to_dict()},
        "energy_drift": diagnostics.relative_energy_drift(traj),
    }


def cmd_sweep(cfg, args):
    out = _outdir(cfg, args)
    lams = sorted(set(cfg["sweep.lambdas"]))
    for lam in lams:
        if not 0 <= lam <= 2:
            raise ConfigError(f"sweep.lambdas: {lam} outside [0, 2]", "sweep.lambdas")
    jobs = [(cfg.values, lam) for lam in lams]
    results = [r for _, r in sorted(_fan_out(_sweep_job, jobs, cfg["workers"]), key=lambda kv: kv[0])]
    for r in results:
        print(f"sweep lambda={r['lambda']:g}: exit {r['exit_code']}, max(sup|u_t|+sup|u_x|)={r['max_sup_sum']:.4g}")
    output.write_json(out / "sweep.json", {"config": cfg.resolved(), "jobs": results})
    return max(r["exit_code"] for r in results)


def cmd_energy_check(cfg, args):
    out = _outdir(cfg, args)
    if cfg["solver.lambda"] != 1:
        print(f"energy-check: lambda = {cfg['solver.lambda']:g}; energy is only conserved for lambda = 1")
    traj = _run(cfg)
    drift = diagnostics.relative_energy_drift(traj)
    summary = {"config": cfg.resolved(), "lambda": traj.lam, "relative_drift": drift,
               "energy_series": diagnostics.energy_series(traj).tolist()}
    msg = f"energy-check: n={cfg['grid.n']}, relative drift {drift:.3e}"
    if args.refine:
        fine = _run(cfg.copy(**{"grid.n": 2 * cfg["grid.n"]}))
        d2 = diagnostics.relative_energy_drift(fine)
        summary["refined"] = {"n": 2 * cfg["grid.n"], "relative_drift": d2,
                              "ratio": drift / d2 if d2 > 0 else None}
        msg += f"; at 2n {d2:.3e}"
    output.write_json(out / "energy.json", summary)
    print(msg)
    return EXIT_BLOWUP if _blowup(traj, cfg).detected else EXIT_OK


def cmd_validate_speed(cfg, args):
    out = _outdir(cfg, args)
    ws = build_speed(cfg)
    lo = args.theta_min if args.theta_min is not None else ws.sample_window[0]
    hi = args.theta_max if args.theta_max is not None else ws.sample_window[1]
    rep = wavespeed.validate(ws, (lo, hi), args.n_samples)
    output.write_json(out / "speed_validation.json", {"speed": ws.describe(), **rep.to_dict()})
    print(rep.summary())
    return EXIT_OK if rep.passed else EXIT_CERT_FAIL


COMMANDS = {
    "simulate": cmd_simulate,
    "certify": cmd_certify,
    "trace": cmd_trace,
    "convergence": cmd_convergence,
    "sweep": cmd_sweep,
    "energy-check": cmd_energy_check,
    "validate-speed": cmd_validate_speed,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _load_config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as err:
        print(f"rwlab: config error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, RWLError, ValueError, OSError) as err:
        print(f"rwlab: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
