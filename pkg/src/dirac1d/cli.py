"""Command-line interface: ``spectrum``, ``wavefunction``, ``verify``, ``sweep``.

Exit codes
----------
0  success (``verify``: every check passed)
1  a ``verify`` check failed
2  usage error (bad flag, malformed range, unreadable config)
3  domain error (index out of range, no bound states where one is needed)

Floats are written with ``repr``, i.e. the shortest decimal string that
round-trips, so files are byte-identical across runs and thread counts.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, oracle
from .core import PhysicalParams, PotentialParams, Regime, classify_case, effective_params
from .errors import Dirac1DError, DomainError, TruncationWarning

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

THREADS_ENV = "DIRAC1D_THREADS"
RESIDUAL_TOL = 1e-8
WRONSKIAN_TOL = 1e-8
ORTHO_TOL = 1e-9
NORM_TOL = 1e-10
NR_TOL = 1e-5
NR_COUPLING = 1e-3
NEGATIVE_CONTROL_TOL = 1e-4

SPECTRUM_COLUMNS = ("case", "q", "V0", "n", "E_plus", "E_minus", "E_eff", "s_plus", "s_minus", "B", "kappa", "lambda_c_eff")
WAVE_COLUMNS = ("x", "re_psi_plus", "im_psi_plus", "re_psi_minus", "im_psi_minus", "density")
SWEEP_COLUMNS = ("q", "V0", "case", "E_plus", "gap_to_meff", "delta_x", "lambda_c_eff")

DEFAULTS = {
    "q": 1.0,
    "v0": 1.0,
    "mass": 1.0,
    "c": 1.0,
    "hbar": 1.0,
    "levels": 3,
    "n": None,
    "sign": 1,
    "xmin": -20.0,
    "xmax": 20.0,
    "points": 2001,
    "grid_npts": 4000,
    "length_mult": 12.0,
    "tol": oracle.DEFAULT_MATCH_TOL,
    "format": "csv",
    "out": None,
    "threads": None,
    "q_range": None,
    "v0_range": None,
    "level": 1,
    "inject_energy_error": 0.0,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved settings for one CLI invocation."""

    phys: PhysicalParams
    pot: PotentialParams
    levels: int = 3
    n: int | None = None
    sign: int = 1
    xmin: float = -20.0
    xmax: float = 20.0
    points: int = 2001
    grid_npts: int = 4000
    length_mult: float = 12.0
    tol: float = oracle.DEFAULT_MATCH_TOL
    fmt: str = "csv"
    out: str | None = None
    threads: int = 1
    q_range: tuple | None = None
    v0_range: tuple | None = None
    level: int = 1
    inject_energy_error: float = 0.0

    def __post_init__(self):
        if self.levels < 1:
            raise UsageError("--levels must be >= 1")
        if not self.tol > 0:
            raise UsageError("--tol must be > 0")
        if self.fmt not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if self.threads < 1:
            raise UsageError("thread count must be >= 1")
        if self.points < 2:
            raise UsageError("--points must be >= 2")
        if self.grid_npts < oracle.MIN_NPTS:
            raise UsageError(f"--grid-npts must be >= {oracle.MIN_NPTS}")


# -- formatting --------------------------------------------------------------


def case_label(case) -> str:
    return {Regime.CASE_A: "A", Regime.CASE_B: "B"}.get(case.variant, "Unbound")


def _csv(columns, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_cell(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=True) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def parse_range(text: str) -> tuple[float, float, int]:
    """``start:stop:count`` with ``count >= 2``."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} is not start:stop:count")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"range {text!r}: {exc}") from None
    if count < 2 or not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError(f"range {text!r} needs finite ends and count >= 2")
    return start, stop, count


def range_values(rng) -> list[float]:
    start, stop, count = rng
    return [float(v) for v in np.linspace(start, stop, count)]


# -- spectrum ----------------------------------------------------------------


def spectrum_rows(cfg: RunConfig):
    case = classify_case(cfg.pot)
    if not case.bound:
        return case, []
    eff = effective_params(cfg.phys, cfg.pot)
    n_max = case.min_index + cfg.levels - 1
    rows = []
    for st in analytic.spectrum(cfg.phys, cfg.pot, n_max):
        rows.append(
            {
                "case": case_label(case),
                "q": float(cfg.pot.q),
                "V0": float(cfg.pot.V0),
                "n": st.n,
                "E_plus": st.E_abs,
                "E_minus": -st.E_abs,
                "E_eff": st.E_eff,
                "s_plus": float(st.s_plus),
                "s_minus": float(st.s_minus),
                "B": float(st.B),
                "kappa": st.kappa,
                "lambda_c_eff": eff.lambda_c_eff,
            }
        )
    return case, rows


def cmd_spectrum(cfg: RunConfig) -> int:
    case, rows = spectrum_rows(cfg)
    reason = None if case.bound else case.reason.value
    if cfg.fmt == "json":
        _emit(_json({"case": case_label(case), "reason": reason, "rows": rows}), cfg.out)
    else:
        comments = [f"reason={reason}"] if reason else []
        _emit(_csv(SPECTRUM_COLUMNS, rows, comments), cfg.out)
    return EXIT_OK


# -- wavefunction ------------------------------------------------------------


def wavefunction_samples(cfg: RunConfig):
    case = classify_case(cfg.pot)
    if not case.bound:
        raise DomainError(f"no bound states: {case}")
    if not cfg.xmin < 0 < cfg.xmax:
        raise UsageError("need xmin < 0 < xmax")
    n = case.min_index if cfg.n is None else cfg.n
    st = analytic.bound_state(cfg.phys, cfg.pot, n)
    st = analytic.normalize(st, cfg.phys, cfg.pot, cfg.sign)
    xs = np.linspace(cfg.xmin, cfg.xmax, cfg.points)
    xs = xs[xs != 0.0]
    return analytic.assemble_spinor(st, cfg.phys, cfg.pot, xs)


def cmd_wavefunction(cfg: RunConfig) -> int:
    sample = wavefunction_samples(cfg)
    cols = {
        "x": sample.xs,
        "re_psi_plus": sample.psi_plus.real,
        "im_psi_plus": sample.psi_plus.imag,
        "re_psi_minus": sample.psi_minus.real,
        "im_psi_minus": sample.psi_minus.imag,
        "density": sample.density,
    }
    if cfg.fmt == "json":
        _emit(_json({k: [float(v) for v in cols[k]] for k in WAVE_COLUMNS}), cfg.out)
    else:
        rows = [{k: float(cols[k][i]) for k in WAVE_COLUMNS} for i in range(sample.xs.shape[0])]
        _emit(_csv(WAVE_COLUMNS, rows), cfg.out)
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def _fd_channels(cfg: RunConfig, k: int):
    out = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for name, ch in oracle.channels(cfg.phys, cfg.pot).items():
            grid = oracle.default_grid(ch, k, npts=cfg.grid_npts, length_mult=cfg.length_mult)
            out[name] = oracle.fd_effective_levels(ch, grid, k)
    return out


def _match_payload(rep: oracle.MatchReport, tol: float) -> dict:
    return {
        "tol": tol,
        "matched": [[i, j, g] for i, j, g in rep.matched],
        "unmatched_upper": rep.unmatched_upper,
        "unmatched_lower": rep.unmatched_lower,
        "offsets": rep.offsets(),
        "max_rel_err": rep.max_rel_err,
    }


def _expected_offset(case) -> int:
    """Lower-minus-upper FD index offset of matched pairs on x > 0."""
    return 1 if case.variant is Regime.CASE_A else -1


def _verify_unbound(cfg: RunConfig, case) -> dict:
    # negative control: no common FD levels at a tight tolerance
    try:
        fd = _fd_channels(cfg, cfg.levels)
    except Dirac1DError:
        fd = {name: [] for name in oracle.CHANNEL_NAMES}
    matches = {
        "right": oracle.match_common_levels(fd["upper_right"], fd["lower_right"], NEGATIVE_CONTROL_TOL),
        "left": oracle.match_common_levels(fd["upper_left"], fd["lower_left"], NEGATIVE_CONTROL_TOL),
    }
    ok = all(not m.matched for m in matches.values())
    return {
        "case": case_label(case),
        "reason": case.reason.value,
        "analytic_levels": [],
        "fd_levels_per_channel": fd,
        "match_report": {side: _match_payload(m, NEGATIVE_CONTROL_TOL) for side, m in matches.items()},
        "dirac_residual_max": None,
        "wronskian_limit": None,
        "orthogonality_max": None,
        "norm_errors": [],
        "nr_limit_check": None,
        "checks": {"no_common_levels": ok},
        "pass": ok,
    }


def _nr_check(cfg: RunConfig, n_max: int) -> dict:
    phys = cfg.phys
    if phys.m == 0:
        return {"skipped": "massless", "pass": True}
    mc2 = phys.m * phys.c**2
    pot = PotentialParams(cfg.pot.q, math.copysign(NR_COUPLING * mc2, cfg.pot.V0))
    nr = oracle.nr_kratzer_levels(phys, pot, n_max)
    exact = [st.E_abs - mc2 for st in analytic.spectrum(phys, pot, n_max)]
    errs = [abs(a - b) / abs(b) if b != 0 else abs(a - b) for a, b in zip(exact, nr)]
    return {"V0": pot.V0, "rel_errors": errs, "pass": max(errs, default=0.0) <= NR_TOL}


def verify_report(cfg: RunConfig) -> dict:
    phys, pot = cfg.phys, cfg.pot
    case = classify_case(pot)
    if not case.bound:
        return _verify_unbound(cfg, case)
    n_max = case.min_index + cfg.levels - 1
    states = analytic.spectrum(phys, pot, n_max)
    ref = [st.E_eff for st in states]

    fd = _fd_channels(cfg, cfg.levels)
    chs = oracle.channels(phys, pot)
    side_tol = {
        side: max(oracle.channel_tolerance(chs[f"upper_{side}"], cfg.tol), oracle.channel_tolerance(chs[f"lower_{side}"], cfg.tol))
        for side in ("right", "left")
    }
    matches = {
        side: oracle.match_common_levels(fd[f"upper_{side}"], fd[f"lower_{side}"], side_tol[side], ref)
        for side in ("right", "left")
    }
    want = _expected_offset(case)
    offsets_ok = all(o == want for o in matches["right"].offsets()) and all(
        o == -want for o in matches["left"].offsets()
    )
    enough = all(len(m.matched) >= cfg.levels - 1 for m in matches.values())
    fd_ok = all(matches[side].max_rel_err <= side_tol[side] for side in matches) and offsets_ok and enough

    residuals, norm_errors, normed = [], [], []
    for st in states:
        for sign in (1, -1):
            ns = analytic.normalize(st, phys, pot, sign)
            norm_errors.append(abs(analytic.norm(ns, phys, pot) - 1.0))
            probe = ns
            if cfg.inject_energy_error:
                probe = analytic.perturbed(ns, phys, pot, cfg.inject_energy_error * ns.E_abs)
            residuals.append(analytic.dirac_residual(probe, phys, pot))
            if sign > 0:
                normed.append(ns)
    res_max = max(residuals)

    wr_max, ortho_max = 0.0, 0.0
    for i in range(len(normed)):
        for j in range(i + 1, len(normed)):
            a, b = normed[i], normed[j]
            xs = np.geomspace(1e-2, 1e-7, 11) / max(a.kappa, b.kappa)
            for comp in ("upper", "lower"):
                wr = oracle.hermiticity_wronskian(a, b, phys, pot, xs, comp, WRONSKIAN_TOL)
                wr_max = max(wr_max, wr.relative_limit)
            ov, scale = analytic.upper_overlap_right(a, b)
            ortho_max = max(ortho_max, abs(ov) / scale)

    nr = _nr_check(cfg, n_max)
    checks = {
        "fd_agreement": bool(fd_ok),
        "dirac_residual": res_max <= RESIDUAL_TOL,
        "wronskian": wr_max <= WRONSKIAN_TOL,
        "orthogonality": ortho_max <= ORTHO_TOL,
        "normalization": max(norm_errors) <= NORM_TOL,
        "nr_limit": bool(nr["pass"]),
    }
    return {
        "case": case_label(case),
        "reason": None,
        "analytic_levels": [
            {"n": st.n, "E_plus": st.E_abs, "E_minus": -st.E_abs, "E_eff": st.E_eff, "B": float(st.B)} for st in states
        ],
        "fd_levels_per_channel": fd,
        "match_report": {side: _match_payload(m, side_tol[side]) for side, m in matches.items()},
        "dirac_residual_max": res_max,
        "wronskian_limit": wr_max,
        "orthogonality_max": ortho_max,
        "norm_errors": norm_errors,
        "nr_limit_check": nr,
        "checks": checks,
        "pass": all(checks.values()),
    }


def cmd_verify(cfg: RunConfig) -> int:
    report = verify_report(cfg)
    _emit(_json(report), cfg.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


# -- sweep -------------------------------------------------------------------


def sweep_point(phys: PhysicalParams, q: float, V0: float, level: int) -> dict:
    pot = PotentialParams(q, V0)
    case = classify_case(pot)
    row = {"q": float(q), "V0": float(V0), "case": case_label(case),
           "E_plus": None, "gap_to_meff": None, "delta_x": None, "lambda_c_eff": None}
    try:
        eff = effective_params(phys, pot)
    except Dirac1DError:
        return row
    row["lambda_c_eff"] = eff.lambda_c_eff
    if not case.bound or level < case.min_index:
        return row
    st = analytic.normalize(analytic.bound_state(phys, pot, level), phys, pot, 1)
    row["E_plus"] = st.E_abs
    row["gap_to_meff"] = eff.threshold - st.E_abs
    row["delta_x"] = analytic.position_uncertainty(st, phys, pot)
    return row


def sweep_rows(cfg: RunConfig) -> list[dict]:
    qs = range_values(cfg.q_range) if cfg.q_range else [float(cfg.pot.q)]
    vs = range_values(cfg.v0_range) if cfg.v0_range else [float(cfg.pot.V0)]
    points = [(q, v) for q in qs for v in vs]  # q-major
    if cfg.threads == 1:
        return [sweep_point(cfg.phys, q, v, cfg.level) for q, v in points]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        # map keeps input order, so the buffer is pre-indexed by point
        return list(pool.map(lambda p: sweep_point(cfg.phys, p[0], p[1], cfg.level), points))


def cmd_sweep(cfg: RunConfig) -> int:
    rows = sweep_rows(cfg)
    if cfg.fmt == "json":
        _emit(_json({"columns": list(SWEEP_COLUMNS), "rows": rows}), cfg.out)
    else:
        _emit(_csv(SWEEP_COLUMNS, rows), cfg.out)
    return EXIT_OK


# -- argument handling -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--q", type=float, help="coupling q (default 1)")
    g.add_argument("--v0", type=float, help="uniform background V0 (default 1)")
    g.add_argument("--mass", type=float, help="rest mass m (default 1)")
    g.add_argument("--c", type=float, help="speed of light (default 1)")
    g.add_argument("--hbar", type=float, help="reduced Planck constant (default 1)")
    g.add_argument("--levels", type=int, help="number of levels (default 3)")
    g.add_argument("--grid-npts", dest="grid_npts", type=int, help="FD interior points (default 4000)")
    g.add_argument("--tol", type=float, help="FD match tolerance (default 1e-3)")
    g.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--threads", type=int, help=f"worker threads; overrides ${THREADS_ENV}")
    g.add_argument("--config", help="JSON file with defaults for any of these options")

    p = _Parser(prog="dirac1d", description="Bound states of a 1+1 D Dirac fermion in a pseudoscalar Coulomb potential.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common], help="closed-form energy table")
    w = sub.add_parser("wavefunction", parents=[common], help="sample a normalized spinor")
    w.add_argument("--n", type=int, help="principal index (default: lowest for the case)")
    w.add_argument("--sign", type=int, choices=(1, -1), help="energy branch (default +1)")
    w.add_argument("--xmin", type=float, help="left end (default -20)")
    w.add_argument("--xmax", type=float, help="right end (default 20)")
    w.add_argument("--points", type=int, help="grid points before removing x=0 (default 2001)")
    v = sub.add_parser("verify", parents=[common], help="run the cross-check battery, JSON report")
    v.add_argument("--inject-energy-error", dest="inject_energy_error", type=float,
                   help="test hook: relative energy shift applied before the residual check")
    s = sub.add_parser("sweep", parents=[common], help="scan q and/or V0")
    s.add_argument("--q-range", dest="q_range", help="start:stop:count")
    s.add_argument("--v0-range", dest="v0_range", help="start:stop:count")
    s.add_argument("--level", type=int, help="principal index reported per point (default 1)")
    return p


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def _env_threads():
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return None
    try:
        val = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer >= 1, got {raw!r}") from None
    if val < 1:
        raise UsageError(f"{THREADS_ENV} must be >= 1")
    return val


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over config file over defaults.  Thread count also reads
    the environment: flag > env > config > 1."""
    file_cfg = _load_config(getattr(args, "config", None))
    merged = dict(DEFAULTS)
    merged.update(file_cfg)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    threads = getattr(args, "threads", None)
    if threads is None:
        threads = _env_threads()
    if threads is None:
        threads = file_cfg.get("threads", 1)
    try:
        phys = PhysicalParams(float(merged["mass"]), float(merged["c"]), float(merged["hbar"]))
        pot = PotentialParams(float(merged["q"]), float(merged["v0"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    q_range = parse_range(merged["q_range"]) if merged["q_range"] is not None else None
    v0_range = parse_range(merged["v0_range"]) if merged["v0_range"] is not None else None
    return RunConfig(
        phys=phys,
        pot=pot,
        levels=int(merged["levels"]),
        n=None if merged["n"] is None else int(merged["n"]),
        sign=int(merged["sign"]),
        xmin=float(merged["xmin"]),
        xmax=float(merged["xmax"]),
        points=int(merged["points"]),
        grid_npts=int(merged["grid_npts"]),
        length_mult=float(merged["length_mult"]),
        tol=float(merged["tol"]),
        fmt=str(merged["format"]),
        out=merged["out"],
        threads=int(threads),
        q_range=q_range,
        v0_range=v0_range,
        level=int(merged["level"]),
        inject_energy_error=float(merged["inject_energy_error"]),
    )


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
    except UsageError as exc:
        print(f"dirac1d: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.verb](cfg)
    except UsageError as exc:
        print(f"dirac1d: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Dirac1DError, ValueError) as exc:
        print(f"dirac1d: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
