"""Command-line front end.

    pentamotion <command> --config run.json [--out DIR] [--tol TOL]

Every command prints a JSON report (sorted keys, config echo, library
version) and, with ``--out``, writes it to ``DIR/<command>.json`` together
with the command's CSV/OBJ artifacts.  Exit status: 0 success, 1 invalid
configuration or input, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .design import classify, leg_params, p5_from_r1, r1_from_p5
from .errors import Degenerate, NumericalError, PreconditionError, ValidationError
from .geometry import center_point
from .kinematics import rotation_translation
from .reality import reality_interval, workspace_free
from .selfmotion import LEG_COLUMNS, SelfMotion, h_from_p5, p5_from_h
from .surface import generators_from_poses, quintic_residual, sample_generators
from .tolerance import get_tolerance, reset_tolerance, set_tolerance
from .verification import (
    WORKED_DESIGN,
    WORKED_H,
    appendix_cubics_check,
    ellipsoid_membership,
    fit_sphere,
    krames_check,
    motion_residual_report,
    trajectory,
)

COMMANDS = ("classify", "trace", "surface", "reality", "workspace", "krames", "verify", "scan")

_num = {"type": "number"}
CONFIG_SCHEMA = {
    "type": "object",
    "required": ["design"],
    "additionalProperties": False,
    "properties": {
        "design": {
            "type": "object",
            "required": ["A", "C", "a_r", "a_c", "a4"],
            "additionalProperties": False,
            "properties": {k: _num for k in ("A", "C", "a_r", "a_c", "a4")},
        },
        "h": {"type": "array", "items": _num, "minItems": 3, "maxItems": 3},
        "p5": _num,
        "R1": {"type": "number", "exclusiveMinimum": 0},
        "t": _num,
        "leg_range": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 2, "maxItems": 2},
        "sampling": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "count": {"type": "integer", "minimum": 1},
                "gamma_range": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
                "n_gamma": {"type": "integer", "minimum": 2},
                "grid": {"type": "integer", "minimum": 1},
                "pose_index": {"type": "integer", "minimum": 0},
                "t_samples": {"type": "array", "items": _num, "minItems": 1},
                "ellipsoid_t": {"type": "array", "items": _num},
            },
        },
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
    },
}

DEFAULT_SAMPLING = {
    "count": 200,
    "gamma_range": [-10.0, 10.0],
    "n_gamma": 20,
    "grid": 20,
    "pose_index": 17,
    "t_samples": [float(x) for x in np.linspace(-3.0, 9.0, 10)],
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------- io


def fmt(x) -> str:
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex) or isinstance(obj, np.complexfloating):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dump_json(data) -> str:
    return json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def write_obj(path: Path, points: np.ndarray) -> None:
    """Grid ``points[j, k]`` as vertices with quad faces between neighbouring rows."""
    rows, cols = points.shape[:2]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in points.reshape(-1, 3):
            fh.write(f"v {fmt(p[0])} {fmt(p[1])} {fmt(p[2])}\n")
        for j in range(rows - 1):
            for k in range(cols - 1):
                a = j * cols + k + 1
                fh.write(f"f {a} {a + 1} {a + cols + 1} {a + cols}\n")


# ----------------------------------------------------------------------- config


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", 1) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"config is not valid JSON: {exc}", 1) from exc
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise CliError(f"config schema violation: {exc.message}", 1) from exc
    return cfg


def resolve_tolerance(cli_tol: float | None, cfg: dict) -> float:
    """Flag beats ``PENTAMOTION_TOL`` beats the config file beats the default."""
    reset_tolerance()
    if cli_tol is not None:
        set_tolerance(cli_tol)
    elif os.environ.get("PENTAMOTION_TOL") is None and "tolerance" in cfg:
        set_tolerance(cfg["tolerance"])
    return get_tolerance()


def sampling(cfg: dict) -> dict:
    out = dict(DEFAULT_SAMPLING)
    out.update(cfg.get("sampling", {}))
    return out


def design_of(cfg: dict):
    d = cfg["design"]
    return classify(d["A"], d["C"], d["a_r"], d["a_c"], d["a4"])


def _h_for_p5(design, p5: float, n_rays: int = 90):
    """First direction on a fixed fan of polar rays that realizes ``p5``."""
    for k in range(n_rays):
        theta = (k + 0.5) * math.pi / n_rays
        for h in h_from_p5(design, p5, (math.cos(theta), math.sin(theta))):
            try:
                if abs(p5_from_h(design, h) - p5) <= 1e-6 * max(1.0, abs(p5)):
                    return h
            except NumericalError:
                continue
    raise CliError(f"no real direction h found for p5 = {p5}", 2)


def resolve_motion(cfg: dict, design):
    """The self-motion fixed by the config; returns ``(motion, h, notes)``."""
    notes = {}
    has_h = "h" in cfg
    has_p = "p5" in cfg or "R1" in cfg
    if design.v_is_zero:
        if not has_h:
            raise CliError("v = 0 designs need an explicit h (any direction works)", 1)
        R1 = cfg.get("R1")
        if R1 is None:
            iv = reality_interval(design, 0.0)
            R1 = 0.5 * (iv.lower + iv.upper)
            notes["R1_source"] = "midpoint of the leg-1 reality interval"
        motion = SelfMotion.special_v0(design, cfg["h"], R1, cfg.get("p5"))
        return motion, np.asarray(cfg["h"], dtype=float), notes
    if has_h == has_p:
        raise CliError("give exactly one of h or p5 (R1 counts as p5)", 1)
    if has_h:
        h = np.asarray(cfg["h"], dtype=float)
    else:
        if "p5" in cfg and "R1" in cfg:
            raise CliError("give p5 or R1, not both", 1)
        p5 = cfg["p5"] if "p5" in cfg else p5_from_r1(design, cfg["R1"])
        h = _h_for_p5(design, p5)
        notes["h_source"] = "derived from p5 by a polar-ray scan"
    return SelfMotion.from_h(design, h), h, notes


def motion_summary(motion: SelfMotion, h) -> dict:
    legs = motion.legs
    return {
        "h": h,
        "d": motion.frame.d,
        "n": motion.frame.n,
        "p5": legs.p5,
        "R1_sq": legs.r1_sq,
        "special_v0": motion.is_special_v0,
    }


def is_worked_example(design, h) -> bool:
    if h is None:
        return False
    d = np.array([design.A, design.C, design.a_r, design.a_c, design.a4])
    if not np.allclose(d, WORKED_DESIGN, rtol=0, atol=1e-12):
        return False
    h = np.asarray(h, dtype=float)
    ref = np.asarray(WORKED_H)
    return abs(abs(h @ ref) - np.linalg.norm(h) * np.linalg.norm(ref)) <= 1e-12 * np.linalg.norm(h) * np.linalg.norm(ref)


# --------------------------------------------------------------------- commands


def cmd_classify(cfg, out):
    design = design_of(cfg)
    p2, p3, p4 = leg_params(design)
    rep = {"design": design.as_dict(), "ptype": design.ptype.value, "v": design.v, "w": design.w,
           "p2": p2, "p3": p3, "p4": p4}
    if design.v_is_zero and ("p5" in cfg or "R1" in cfg):
        rep["special_v0"] = {"p5": design.a4, "R1": "free"}
    elif "p5" in cfg:
        rep["R1_sq"] = r1_from_p5(design, cfg["p5"])
    elif "R1" in cfg:
        rep["p5"] = p5_from_r1(design, cfg["R1"])
    return rep


def _pose_rows(poses, legs):
    E = np.array([p.e for p in poses])
    F = np.array([p.f for p in poses])
    R, s = rotation_translation(E, F)
    for i, (e, f, r, t, lv) in enumerate(zip(E, F, R, s, legs)):
        yield [i, *e[1:], *f[1:], *r.ravel(), *t, *lv]


TRACE_HEADER = (
    ["index", "e1", "e2", "e3", "f1", "f2", "f3"]
    + [f"r{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    + ["s1", "s2", "s3"]
    + list(LEG_COLUMNS)
)


def cmd_trace(cfg, out):
    design = design_of(cfg)
    motion, h, notes = resolve_motion(cfg, design)
    poses = motion.trace(sampling(cfg)["count"])
    report = motion_residual_report(design, h, poses, legs=motion.legs)
    if out is not None:
        write_csv(out / "motion.csv", TRACE_HEADER, _pose_rows(poses, motion.leg_values(poses)))
    return {"motion": motion_summary(motion, h), "notes": notes, "residuals": report.as_dict()}


def cmd_surface(cfg, out):
    design = design_of(cfg)
    motion, h, notes = resolve_motion(cfg, design)
    smp = sampling(cfg)
    poses = motion.trace(smp["count"])
    gens = generators_from_poses(poses)
    patch = sample_generators(gens, smp["gamma_range"], smp["n_gamma"])
    rep = {"motion": motion_summary(motion, h), "notes": notes, "generators": len(gens),
           "grid": list(patch.shape)}
    if is_worked_example(design, h):
        _, stats = quintic_residual(patch.points)
        rep["quintic"] = stats.__dict__
    if out is not None:
        write_obj(out / "surface.obj", patch.points)
        rows = ([i, *g.line.e, *g.line.f, *g.pedal] for i, g in enumerate(gens))
        write_csv(out / "generators.csv", ["index", "e1", "e2", "e3", "f1", "f2", "f3", "G1", "G2", "G3"], rows)
    return rep


def _need_t(cfg):
    if "t" not in cfg:
        raise CliError("this command needs 't'", 1)
    return float(cfg["t"])


def _interval_dict(iv):
    d = {"t": iv.t, "lower": iv.lower, "upper": iv.upper, "degenerate": iv.degenerate,
         "xi_t": iv.xi_t, "zeta_t": iv.zeta_t}
    if iv.pedal is not None:
        d["pedal_points"] = iv.pedal.pedal_points
        d["pedal_distances"] = iv.pedal.distances
    return d


def cmd_reality(cfg, out):
    design = design_of(cfg)
    iv = reality_interval(design, _need_t(cfg))
    rep = {"interval": _interval_dict(iv)}
    if "R1" in cfg:
        rep["R1_in_interval"] = iv.contains(cfg["R1"])
    return rep


def cmd_workspace(cfg, out):
    design = design_of(cfg)
    t = _need_t(cfg)
    if "leg_range" not in cfg:
        raise CliError("workspace needs 'leg_range'", 1)
    lo, hi = cfg["leg_range"]
    if lo > hi:
        raise CliError("leg_range must be [Lmin, Lmax] with Lmin <= Lmax", 1)
    iv = reality_interval(design, t)
    return {"free": workspace_free(design, t, lo, hi), "interval": _interval_dict(iv), "range": [lo, hi]}


def cmd_krames(cfg, out):
    design = design_of(cfg)
    motion, h, notes = resolve_motion(cfg, design)
    smp = sampling(cfg)
    poses = motion.trace(smp["count"])
    if not 0 <= smp["pose_index"] < len(poses):
        raise CliError(f"pose_index must be below {len(poses)}", 1)
    rep = krames_check(motion, h, smp["pose_index"], smp["t_samples"], poses)
    cfg_r = rep.config
    if out is not None:
        header = ["kind", "index", "t", "x", "y", "z", "cx", "cy", "cz", "radius", "rms", "offset"]
        blank = [""] * 6
        rows = [["p_bar", i, "", *cfg_r.p_bar.point(g), *blank] for i, g in enumerate((0.0, 1.0))]
        for i, (t, x, fit, off) in enumerate(zip(cfg_r.t_samples, cfg_r.P_bar_samples, rep.fits, rep.center_offsets)):
            rows.append(["P_bar", i, t, *x, *fit.center, math.sqrt(max(fit.radius_sq, 0.0)), fit.rms_residual, off])
        write_csv(out / "krames.csv", header, rows)
    return {
        "motion": motion_summary(motion, h),
        "notes": notes,
        "pose_index": rep.pose_index,
        "special_borel": rep.special_borel,
        "p_bar": {"e": cfg_r.p_bar.e, "f": cfg_r.p_bar.f},
        "max_rms": rep.max_rms,
        "max_center_offset": rep.max_center_offset,
        "max_predicted_center_error": float(np.max(rep.predicted_center_errors)),
    }


def cmd_verify(cfg, out):
    design = design_of(cfg)
    motion, h, notes = resolve_motion(cfg, design)
    smp = sampling(cfg)
    poses = motion.trace(smp["count"])
    report = motion_residual_report(design, h, poses, legs=motion.legs)
    c, _ = center_point(design)
    ts = smp.get("ellipsoid_t") or [t for t in (0.0, 1.0, c, design.a4) if math.isfinite(t)]
    ell = [ellipsoid_membership(design, t, smp["grid"]).__dict__ for t in ts]
    rep = {"motion": motion_summary(motion, h), "notes": notes, "residuals": report.as_dict(), "ellipsoids": ell}
    passed = report.passed and all(e["max_residual"] <= 1e-8 for e in ell)
    if is_worked_example(design, h):
        gens = generators_from_poses(poses)
        _, stats = quintic_residual(sample_generators(gens, smp["gamma_range"], smp["n_gamma"]).points)
        cub = appendix_cubics_check(poses=poses)
        rep["quintic"] = stats.__dict__
        rep["appendix_cubics"] = cub.as_dict()
        passed = passed and stats.max <= 1e-6 and cub.passed
    rep["passed"] = passed
    return rep


def cmd_scan(cfg, out):
    """Grid search for moving points whose trajectories fit spheres.

    An experiment hook only: points of the platform line and the reflected
    curve are expected hits; anything else is reported as found.
    """
    design = design_of(cfg)
    motion, h, notes = resolve_motion(cfg, design)
    smp = sampling(cfg)
    poses = motion.trace(max(smp["count"], 25))
    g = smp["grid"]
    axis = np.linspace(-10.0, 10.0, g)
    hits = []
    tol = get_tolerance()
    for x in axis:
        for y in axis:
            for z in axis:
                p = np.array([x, y, z])
                try:
                    fit = fit_sphere(trajectory(poses, p))
                except Degenerate:
                    hits.append({"point": p, "kind": "planar"})
                    continue
                if fit.relative_rms <= tol:
                    hits.append({"point": p, "kind": "sphere", "center": fit.center,
                                 "relative_rms": fit.relative_rms})
    return {"motion": motion_summary(motion, h), "notes": notes, "grid": g, "hits": hits}


HANDLERS = {
    "classify": cmd_classify,
    "trace": cmd_trace,
    "surface": cmd_surface,
    "reality": cmd_reality,
    "workspace": cmd_workspace,
    "krames": cmd_krames,
    "verify": cmd_verify,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pentamotion", description="Line-symmetric self-motions of linear pentapods.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="directory for the JSON report and CSV/OBJ artifacts")
    ap.add_argument("--tol", type=float, help="residual tolerance (overrides PENTAMOTION_TOL)")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.tol is not None and not args.tol > 0:
            raise CliError("--tol must be positive", 1)
        cfg = load_config(args.config)
        tol = resolve_tolerance(args.tol, cfg)
        out = None
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
        result = HANDLERS[args.command](cfg, out)
        doc = {"command": args.command, "config": cfg, "tolerance": tol, "version": __version__, "result": result}
        text = dump_json(doc)
        if out is not None:
            (out / f"{args.command}.json").write_text(text, encoding="utf-8")
        sys.stdout.write(text)
        return 0
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValidationError, PreconditionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except np.linalg.LinAlgError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
