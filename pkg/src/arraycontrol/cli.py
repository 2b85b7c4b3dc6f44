"""Command-line entry point: ``arraycontrol {pattern,control,synthesize,verify}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import plotting, records
from .array import array_from_dict, load_array, steering_vector
from .equivalence import equivalence_report, t_map
from .oracles import GridSpec, best_beta_on_circle, best_feasible_weight, fit_circle, level_locus
from .response import Algorithm, ResponseControlError, control_update, db_to_lin, wng_of
from .scenarios import SCENARIOS, ControlScenario, SynthesisScenario, control_scenario
from .synthesis import (
    PatternMask,
    SynthesisConfig,
    angle_grid,
    evaluate_pattern,
    mainlobe_ripple,
    max_sidelobe_violation,
    synthesize,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


class ConfigError(ValueError):
    pass


def _algorithms(name: str | None, default: str) -> list[Algorithm]:
    name = (name or default).lower()
    if name == "all":
        return list(Algorithm)
    try:
        return [Algorithm.parse(name)]
    except ValueError:
        raise ConfigError(f"unknown algorithm {name!r}; expected one of c2word, word, a2rc, all") from None


def _load_config(path: Path) -> dict:
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return doc


def _array_from(doc: dict, base: Path):
    src = doc.get("array")
    if src is None:
        raise ConfigError("config needs an 'array' section")
    if isinstance(src, str):
        p = Path(src)
        return load_array(p if p.is_absolute() else base / p)
    return array_from_dict(src, base)


def _steps_from(doc: dict) -> tuple[tuple[float, float], ...]:
    raw = doc.get("control_steps")
    if not raw:
        raise ConfigError("control mode needs a non-empty 'control_steps' list")
    steps = []
    for item in raw:
        if isinstance(item, dict):
            steps.append((float(item["theta_deg"]), float(item["rho_db"])))
        else:
            theta, rho = item
            steps.append((float(theta), float(rho)))
    return tuple(steps)


def _theta0(doc: dict) -> float:
    for key in ("theta0_deg", "theta0"):
        if key in doc:
            return float(doc[key])
    if "synthesis" in doc and "theta0_deg" in doc["synthesis"]:
        return float(doc["synthesis"]["theta0_deg"])
    raise ConfigError("config needs 'theta0_deg'")


def _output(doc: dict, out_dir: Path, key: str, default: str) -> Path:
    name = doc.get("output", {}).get(key, default)
    p = Path(name)
    return p if p.is_absolute() else out_dir / p


def _emit(line_items) -> None:
    print("\t".join(str(x) for x in line_items))


def _fmt(z: complex) -> str:
    return f"{z.real:.4f}{z.imag:+.4f}j"


# ---- control ----------------------------------------------------------------


def run_control(scn: ControlScenario, algorithms: list[Algorithm], out_dir: Path, doc: dict, grid_step: float) -> int:
    a0 = steering_vector(scn.array, scn.theta0)
    weights = {alg: a0.copy() for alg in algorithms}
    table: dict[str, list] = {}
    steps_out = []
    for k, (theta, rho_db) in enumerate(scn.steps, start=1):
        a_k = steering_vector(scn.array, theta)
        rho = db_to_lin(rho_db)
        item: dict = {"k": k, "theta_deg": theta, "rho_db": rho_db}
        for alg in algorithms:
            w_prev = weights[alg]
            res = control_update(alg, w_prev, a_k, a0, rho)
            entry = {"wng_db": res.wng_db, "achieved_db": res.achieved_level_db}
            if alg is Algorithm.A2RC:
                entry["mu"] = records.complex_to_json(res.coefficient)
                table.setdefault("mu_star", []).append(records.complex_to_json(res.coefficient))
                table.setdefault("G_triangle_db", []).append(res.wng_db)
            else:
                tb = t_map(res.coefficient, w_prev, a_k)
                entry["beta"] = records.complex_to_json(res.coefficient)
                entry["t_of_beta"] = records.complex_to_json(tb)
                tag = "star" if alg is Algorithm.C2WORD else "times"
                table.setdefault(f"beta_{tag}", []).append(records.complex_to_json(res.coefficient))
                table.setdefault(f"T_beta_{tag}", []).append(records.complex_to_json(tb))
                table.setdefault(f"G_{tag}_db", []).append(res.wng_db)
            if alg is Algorithm.C2WORD:
                item["equivalence"] = equivalence_report(w_prev, a_k, a0, rho).to_dict()
            item[alg.value] = entry
            weights[alg] = res.weight
            _emit([k, theta, rho_db, alg.value, _fmt(res.coefficient), f"{res.wng_db:.4f}"])
        steps_out.append(item)

    doc_out = {
        "theta0_deg": scn.theta0,
        "algorithms": [a.value for a in algorithms],
        "steps": steps_out,
        "table": table,
        "final_weights": {a.value: records.vector_to_json(w) for a, w in weights.items()},
        "final_weights_display": {a.value: records.display_weight(w) for a, w in weights.items()},
    }
    records.write_json(_output(doc, out_dir, "json", "control.json"), doc_out)
    grid = angle_grid(grid_step)
    series = {a.value: evaluate_pattern(w, scn.array, scn.theta0, grid).level_db for a, w in weights.items()}
    records.write_pattern_csv(_output(doc, out_dir, "csv", "control_patterns.csv"), grid, series)
    plotting.plot_patterns(
        _output(doc, out_dir, "figure", "control.svg"),
        {name: (grid, lv) for name, lv in series.items()},
        title="response control",
    )
    return EXIT_OK


# ---- synthesize -------------------------------------------------------------


def run_synthesize(scn: SynthesisScenario, algorithms: list[Algorithm], out_dir: Path, doc: dict) -> int:
    results = {}
    for alg in algorithms:
        cfg = SynthesisConfig.from_dict({**scn.config.to_dict(), "algorithm": alg.value})
        trace = synthesize(scn.array, scn.mask, cfg)
        grid = angle_grid(cfg.grid_step_deg)
        pat = evaluate_pattern(trace.final_weight, scn.array, cfg.theta0, grid)
        ripple = mainlobe_ripple(pat, scn.mask)
        viol = max_sidelobe_violation(pat, scn.mask, cfg.theta0, cfg.transition_deg)
        results[alg] = (trace, pat, ripple, viol)
        _emit(
            [
                alg.value,
                "converged" if trace.converged else "not-converged",
                f"steps={len(trace.steps)}",
                f"dk_db={trace.dk_sequence[-1]:.4f}",
                f"ripple_db={ripple:.4f}",
                f"max_violation_db={viol:.4f}",
                f"wng_db={10 * math.log10(wng_of(trace.final_weight, steering_vector(scn.array, cfg.theta0))):.4f}",
            ]
        )

    doc_out = {
        "mask": scn.mask.to_dict(),
        "config": scn.config.to_dict(),
        "runs": {
            alg.value: {
                **records.trace_to_dict(trace),
                "mainlobe_ripple_db": ripple,
                "max_sidelobe_violation_db": viol,
            }
            for alg, (trace, _, ripple, viol) in results.items()
        },
    }
    records.write_json(_output(doc, out_dir, "json", "trace.json"), doc_out)
    grid = next(iter(results.values()))[1].theta_deg
    series = {alg.value: pat.level_db for alg, (_, pat, _, _) in results.items()}
    records.write_pattern_csv(_output(doc, out_dir, "csv", "pattern.csv"), grid, series)
    plotting.plot_patterns(
        _output(doc, out_dir, "figure", "pattern.svg"),
        {name: (grid, lv) for name, lv in series.items()},
        mask=scn.mask,
        title="synthesized pattern",
    )
    first = next(iter(results.values()))[0]
    plotting.plot_dk(_output(doc, out_dir, "dk_figure", "dk.svg"), first.dk_sequence, title="maximum sidelobe excess")
    if all(trace.converged for trace, *_ in results.values()):
        return EXIT_OK
    for alg, (trace, *_) in results.items():
        if not trace.converged:
            print(f"{alg.value}: {trace.message}", file=sys.stderr)
    return EXIT_NOT_CONVERGED


# ---- pattern ----------------------------------------------------------------


def run_pattern(array, theta0: float, weight, out_dir: Path, doc: dict, grid_step: float, mask=None) -> int:
    grid = angle_grid(grid_step)
    w = steering_vector(array, theta0) if weight is None else weight
    pat = evaluate_pattern(w, array, theta0, grid)
    records.write_pattern_csv(_output(doc, out_dir, "csv", "pattern.csv"), grid, {"level_db": pat.level_db})
    plotting.plot_patterns(_output(doc, out_dir, "figure", "pattern.svg"), {"pattern": (grid, pat.level_db)}, mask=mask)
    _emit(["pattern", f"samples={grid.size}", f"wng_db={10 * math.log10(wng_of(w, steering_vector(array, theta0))):.4f}"])
    return EXIT_OK


# ---- verify -----------------------------------------------------------------


def run_verify(array, theta0: float, theta_k: float, rho_db: float, out_dir: Path, doc: dict, seed: int) -> int:
    """Closed forms against the brute-force oracles for one demand from ``a(theta0)``."""
    opts = doc.get("verify", {})
    a0 = steering_vector(array, theta0)
    a_k = steering_vector(array, theta_k)
    rho = db_to_lin(rho_db)
    res = control_update(Algorithm.C2WORD, a0, a_k, a0, rho)
    circle = res.circle
    locus = level_locus(
        a0, a_k, a0, rho, GridSpec.around(circle.center_complex, circle.radius, int(opts.get("samples_per_axis", 400)))
    )
    report: dict = {
        "theta0_deg": theta0,
        "theta_k_deg": theta_k,
        "rho_db": rho_db,
        "seed": seed,
        "closed_form": {
            "center": records.complex_to_json(circle.center_complex),
            "radius": circle.radius,
            "beta_star": records.complex_to_json(res.coefficient),
            "wng_db": res.wng_db,
        },
        "locus_points": int(locus.points.size),
        "grid_pitch": locus.pitch,
    }
    ok = not locus.empty
    if ok:
        center, radius = fit_circle(locus.points)
        report["locus_fit"] = {"center": records.complex_to_json(center), "radius": radius}
        ok &= abs(center - circle.center_complex) <= locus.pitch and abs(radius - circle.radius) <= locus.pitch
    beta_s = best_beta_on_circle(circle, a0, a_k, a0, int(opts.get("circle_samples", 100_000)))
    w_best = best_feasible_weight(a0, a_k, rho, int(opts.get("trials", 100_000)), seed)
    g_best = wng_of(w_best, a0)
    report["oracle"] = {
        "beta_sampled": records.complex_to_json(beta_s),
        "best_feasible_wng_db": 10 * math.log10(g_best),
    }
    ok &= g_best <= res.wng * (1 + 1e-6)
    report["agree"] = bool(ok)
    records.write_json(_output(doc, out_dir, "json", "verify.json"), report)
    _emit(["verify", "agree" if ok else "disagree", f"locus_points={locus.points.size}", f"wng_gap_db={res.wng_db - 10 * math.log10(g_best):.3e}"])
    if not ok:
        print("oracle and closed form disagree; see verify.json", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


# ---- argument handling ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arraycontrol", description="Single-point array response control and pattern synthesis.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("pattern", "evaluate and plot a beampattern"),
        ("control", "run a list of response-control steps with each algorithm"),
        ("synthesize", "iterative pattern synthesis against a mask"),
        ("verify", "check closed forms against brute-force oracles"),
    ):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--config", type=Path, help="JSON run configuration")
        src.add_argument("--scenario", choices=sorted(SCENARIOS), help="built-in experiment")
        p.add_argument("--algorithm", help="c2word, word, a2rc or all")
        p.add_argument("--grid-step", type=float, help="angle grid step in degrees")
        p.add_argument("--out-dir", type=Path, default=Path("."), help="directory for output files")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized oracles")
        if name == "synthesize":
            p.add_argument("--max-steps", type=int, help="override the step cap")
    return parser


def _builtin(name: str | None, command: str):
    if name is None:
        return None
    scn = SCENARIOS[name]()
    if command == "synthesize" and not isinstance(scn, SynthesisScenario):
        raise ConfigError(f"scenario {name!r} is not a synthesis scenario")
    if command == "control" and not isinstance(scn, ControlScenario):
        raise ConfigError(f"scenario {name!r} is not a control scenario")
    return scn


def _dispatch(args) -> int:
    if args.config is None and args.scenario is None:
        raise ConfigError("give --config or --scenario")
    if args.grid_step is not None and not args.grid_step > 0:
        raise ConfigError("--grid-step must be positive")
    scn = _builtin(args.scenario, args.command)
    doc: dict = {}
    base = Path.cwd()
    if args.config is not None:
        doc = _load_config(args.config)
        base = args.config.resolve().parent
    out_dir = args.out_dir

    if args.command == "control":
        algorithms = _algorithms(args.algorithm, "all")
        if scn is None:
            scn = ControlScenario(_array_from(doc, base), _theta0(doc), _steps_from(doc))
        return run_control(scn, algorithms, out_dir, doc, args.grid_step or 0.1)

    if args.command == "synthesize":
        if scn is None:
            if "mask" not in doc:
                raise ConfigError("synthesize mode needs a 'mask' section")
            syn = dict(doc.get("synthesis", {}))
            syn.setdefault("theta0_deg", _theta0(doc))
            scn = SynthesisScenario(_array_from(doc, base), PatternMask.from_dict(doc["mask"]), SynthesisConfig.from_dict(syn))
        overrides = {}
        if args.grid_step is not None:
            overrides["grid_step_deg"] = args.grid_step
        if getattr(args, "max_steps", None) is not None:
            overrides["max_steps"] = args.max_steps
        if overrides:
            scn = SynthesisScenario(scn.array, scn.mask, SynthesisConfig.from_dict({**scn.config.to_dict(), **overrides}))
        algorithms = _algorithms(args.algorithm, scn.config.algorithm.value)
        return run_synthesize(scn, algorithms, out_dir, doc)

    if args.command == "pattern":
        mask = None
        if isinstance(scn, SynthesisScenario):
            array, theta0, mask = scn.array, scn.config.theta0, scn.mask
        elif isinstance(scn, ControlScenario):
            array, theta0 = scn.array, scn.theta0
        else:
            array, theta0 = _array_from(doc, base), _theta0(doc)
            if "mask" in doc:
                mask = PatternMask.from_dict(doc["mask"])
        weight = records.vector_from_json(doc["weight"]) if "weight" in doc else None
        if weight is not None and weight.size != array.n:
            raise ConfigError(f"weight has {weight.size} entries, array has {array.n}")
        return run_pattern(array, theta0, weight, out_dir, doc, args.grid_step or 0.1, mask)

    # verify
    if isinstance(scn, ControlScenario) or scn is None and args.config is None:
        scn = scn or control_scenario()
        array, theta0 = scn.array, scn.theta0
        theta_k, rho_db = scn.steps[0]
    elif isinstance(scn, SynthesisScenario):
        raise ConfigError("verify needs a control scenario or a config")
    else:
        array, theta0 = _array_from(doc, base), _theta0(doc)
        v = doc.get("verify", {})
        if "theta_k_deg" in v:
            theta_k, rho_db = float(v["theta_k_deg"]), float(v["rho_db"])
        else:
            theta_k, rho_db = _steps_from(doc)[0]
    return run_verify(array, theta0, theta_k, rho_db, out_dir, doc, args.seed)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except KeyError as exc:
        print(f"error: missing config key {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, TypeError, ResponseControlError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
