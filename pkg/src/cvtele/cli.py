"""Command-line front end: reproducible experiments and plot-ready data files.

Four subcommands are exposed:

* ``diagram``  - CSV grid of average fidelity and region tags over the
  ``(tau, y)`` channel plane, plus a companion JSON with boundary curves,
  special points and the two scheme-family curves;
* ``optimize`` - optimal channel, fidelity and resource for given ``(r, lam)``
  with the squeezed-vacuum and classical comparisons;
* ``simulate`` - induced channel and oracle residual for a chosen resource;
* ``verify``   - seeded self-verification suites with a JSON report.

Every run appends a record (command, parameters, outputs, version, UTC
timestamp) to a JSON-lines ledger, ``./runs.jsonl`` by default.  Data files
contain no timestamps and all numbers are written in shortest round-trip
decimal form, so repeated runs are byte-identical.  ``CVTELE_THREADS`` caps
the number of worker threads used for grid generation.
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
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, verify
from .errors import CVTeleError, DomainError
from .channels import PhaseInsensitiveChannel, min_noise_for_entanglement
from .fidelity_opt import (
    OptimizationResult,
    ResourceDivergence,
    _fidelity_formula,
    classical_benchmark,
    optimal_fidelity,
    optimal_tau,
    tmss_fidelity,
    tmss_optimal_gain,
)
from .gaussian_core import log_negativity, mean_energy, standard_form_to_cm, tmss
from .teleportation import (
    bk_output,
    heisenberg_oracle,
    induced_pi_channel,
    optimal_resource,
    tmss_squeezing_for_channel,
)
from .verify import random_single_mode_state, random_standard_form

DEFAULT_LEDGER = "runs.jsonl"
CSV_SCHEMA = "tau,y,fidelity,region#v1"

REGION_UNPHYSICAL = "unphysical"
REGION_INACCESSIBLE = "inaccessible"
REGION_EB = "EB"
REGION_ACCESSIBLE = "accessible"


def worker_count() -> int:
    """Worker threads for grid generation; capped by ``CVTELE_THREADS``."""
    env = os.environ.get("CVTELE_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"CVTELE_THREADS must be a positive integer, got {env!r}")
        if n < 1:
            raise DomainError(f"CVTELE_THREADS must be a positive integer, got {env!r}")
        return n
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class DiagramGridSpec:
    """Window and resolution of the channel-plane diagram."""

    r: float
    lam: float
    tau_range: tuple[float, float] = (0.0, 3.0)
    y_range: tuple[float, float] = (0.0, 3.0)
    resolution: int = 300

    def __post_init__(self):
        if self.r < 0.0:
            raise DomainError(f"entanglement parameter must be nonnegative, got {self.r}")
        if self.lam <= 0.0:
            raise DomainError(f"inverse variance must be strictly positive, got {self.lam}")
        for lo, hi in (self.tau_range, self.y_range):
            if not lo < hi:
                raise DomainError(f"invalid axis range [{lo}, {hi}]")
        if self.tau_range[0] < 0.0 or self.y_range[0] < 0.0:
            raise DomainError("tau and y windows must be nonnegative")
        if self.resolution < 2:
            raise DomainError(f"resolution must be >= 2, got {self.resolution}")


@dataclass
class RunRecord:
    """Reproducibility record appended to the run ledger."""

    command: str
    parameters: dict
    outputs: list[str] = field(default_factory=list)
    library_version: str = __version__
    timestamp: str = ""

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat()


def _append_ledger(record: RunRecord, ledger_path) -> None:
    if ledger_path is None:
        return
    path = Path(ledger_path)
    with path.open("a", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(dataclasses.asdict(record)) + "\n")


def _fmt(x) -> str:
    """Shortest decimal representation that parses back to the same float."""
    return repr(float(x))


def _write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def region_tags(tau, y, r: float, tol: float = 1e-9):
    """Vectorized region classification for diagram grids."""
    tau_arr, y_arr = np.broadcast_arrays(
        np.asarray(tau, dtype=float), np.asarray(y, dtype=float)
    )
    t = tau_arr.ravel()
    yy = y_arr.ravel()
    bound = math.exp(-2.0 * r) * (1.0 + t)
    out = np.full(t.shape, REGION_ACCESSIBLE, dtype=object)
    out[yy >= 1.0 + t - tol] = REGION_EB
    out[yy < bound - tol] = REGION_INACCESSIBLE
    out[yy < np.abs(1.0 - t) - tol] = REGION_UNPHYSICAL
    return out.reshape(tau_arr.shape)


def _special_points(r: float, lam: float, tol: float) -> dict:
    def as_point(tau, y, fid):
        return {
            "tau": tau,
            "y": y,
            "fidelity": fid,
            "region": str(region_tags(tau, y, r, tol)[()]),
        }

    diamond = classical_benchmark(lam)
    triangle = optimal_fidelity(r, lam)
    g = tmss_optimal_gain(r, lam)
    circle_ch = induced_pi_channel(tmss(r), g)
    return {
        "classical_diamond": as_point(diamond.tau_opt, diamond.y_opt, diamond.fidelity),
        "optimal_triangle": as_point(triangle.tau_opt, triangle.y_opt, triangle.fidelity),
        "tmss_circle": as_point(circle_ch.tau, circle_ch.y, tmss_fidelity(r, lam)),
    }


def _family_curves(lam: float, n: int = 201, r_max: float = 5.0) -> dict:
    ss = np.linspace(0.0, r_max, n)
    opt_tau, opt_y, tm_tau, tm_y = [], [], [], []
    for s in ss:
        t = optimal_tau(s, lam)
        opt_tau.append(t)
        opt_y.append(min_noise_for_entanglement(t, s))
        g = tmss_optimal_gain(s, lam)
        ch = induced_pi_channel(tmss(s), g)
        tm_tau.append(ch.tau)
        tm_y.append(ch.y)
    return {
        "entanglement_parameter": ss.tolist(),
        "optimal_scheme": {"tau": opt_tau, "y": opt_y},
        "tmss_scheme": {"tau": tm_tau, "y": tm_y},
    }


def _diagram_rows(spec: DiagramGridSpec, taus, ys, tol: float, threads: int):
    """Fidelity and region arrays per tau row, assembled in index order."""

    def eval_chunk(i0: int, i1: int):
        t = taus[i0:i1, None]
        yy = ys[None, :]
        cp = yy >= np.abs(1.0 - t) - 1e-12
        with np.errstate(invalid="ignore"):
            F = np.where(cp, _fidelity_formula(t, yy, spec.lam), np.nan)
        tags = region_tags(np.broadcast_to(t, F.shape), np.broadcast_to(yy, F.shape), spec.r, tol)
        return F, tags

    n = taus.size
    chunks = max(1, min(threads * 4, n))
    edges = np.linspace(0, n, chunks + 1, dtype=int)
    jobs = [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda ab: eval_chunk(*ab), jobs))
    else:
        results = [eval_chunk(a, b) for a, b in jobs]
    F = np.vstack([res[0] for res in results])
    tags = np.vstack([res[1] for res in results])
    return F, tags


def cmd_diagram(
    spec: DiagramGridSpec,
    out_path,
    *,
    tol: float = 1e-9,
    ledger_path=DEFAULT_LEDGER,
) -> RunRecord:
    """Write the channel-plane CSV grid and its companion JSON."""
    out_path = Path(out_path)
    taus = np.linspace(spec.tau_range[0], spec.tau_range[1], spec.resolution)
    ys = np.linspace(spec.y_range[0], spec.y_range[1], spec.resolution)
    threads = worker_count()
    F, tags = _diagram_rows(spec, taus, ys, tol, threads)

    lines = ["tau,y,fidelity,region"]
    for i, t in enumerate(taus):
        for j, yy in enumerate(ys):
            f = F[i, j]
            f_txt = "nan" if math.isnan(f) else _fmt(f)
            lines.append(f"{_fmt(t)},{_fmt(yy)},{f_txt},{tags[i, j]}")
    _write_text(out_path, "\n".join(lines) + "\n")

    companion = {
        "csv_schema": CSV_SCHEMA,
        "r": spec.r,
        "lambda": spec.lam,
        "tau_range": list(spec.tau_range),
        "y_range": list(spec.y_range),
        "resolution": spec.resolution,
        "boundaries": {
            "completely_positive": {"tau": taus.tolist(), "y": np.abs(1.0 - taus).tolist()},
            "entanglement_breaking": {"tau": taus.tolist(), "y": (1.0 + taus).tolist()},
            "accessible": {
                "tau": taus.tolist(),
                "y": (math.exp(-2.0 * spec.r) * (1.0 + taus)).tolist(),
            },
        },
        "special_points": _special_points(spec.r, spec.lam, tol),
        "family_curves": _family_curves(spec.lam),
    }
    companion_path = out_path.with_suffix(".json")
    _write_text(companion_path, _dump_json(companion))

    record = RunRecord(
        command="diagram",
        parameters={
            "r": spec.r,
            "lambda": spec.lam,
            "tau_range": list(spec.tau_range),
            "y_range": list(spec.y_range),
            "resolution": spec.resolution,
            "tol": tol,
            "threads": threads,
            "csv_schema": CSV_SCHEMA,
        },
        outputs=[str(out_path), str(companion_path)],
    )
    _append_ledger(record, ledger_path)
    return record


def _resource_payload(resource) -> dict:
    if isinstance(resource, ResourceDivergence):
        return {"diverges": True, "reason": resource.reason}
    if resource is None:
        return {"diverges": False}
    return {
        "diverges": False,
        "a": resource.sf.a,
        "b": resource.sf.b,
        "c": resource.sf.c,
        "entanglement": resource.entanglement,
        "energy": resource.energy,
    }


def _optimize_payload(r: float, lam: float) -> dict:
    opt = optimal_fidelity(r, lam)
    bench = classical_benchmark(lam)
    g = tmss_optimal_gain(r, lam)
    ch = induced_pi_channel(tmss(r), g)
    return {
        "r": r,
        "lambda": lam,
        "optimal": {
            "tau": opt.tau_opt,
            "y": opt.y_opt,
            "fidelity": opt.fidelity,
            "branch": opt.branch,
            "resource": _resource_payload(opt.resource),
        },
        "tmss": {"g": g, "tau": ch.tau, "y": ch.y, "fidelity": tmss_fidelity(r, lam)},
        "classical": {"tau": bench.tau_opt, "y": bench.y_opt, "fidelity": bench.fidelity},
    }


_OPTIMIZE_CSV_FIELDS = (
    "r,lambda,tau_opt,y_opt,fidelity,branch,resource_a,resource_b,resource_c,"
    "resource_entanglement,resource_energy,resource_diverges,"
    "tmss_g,tmss_tau,tmss_y,tmss_fidelity,classical_tau,classical_y,classical_fidelity"
)


def _optimize_csv(payload: dict) -> str:
    res = payload["optimal"]["resource"]
    res_cols = (
        ["", "", "", "", "", "true"]
        if res["diverges"]
        else [_fmt(res["a"]), _fmt(res["b"]), _fmt(res["c"]), _fmt(res["entanglement"]), _fmt(res["energy"]), "false"]
    )
    row = [
        _fmt(payload["r"]),
        _fmt(payload["lambda"]),
        _fmt(payload["optimal"]["tau"]),
        _fmt(payload["optimal"]["y"]),
        _fmt(payload["optimal"]["fidelity"]),
        payload["optimal"]["branch"],
        *res_cols,
        _fmt(payload["tmss"]["g"]),
        _fmt(payload["tmss"]["tau"]),
        _fmt(payload["tmss"]["y"]),
        _fmt(payload["tmss"]["fidelity"]),
        _fmt(payload["classical"]["tau"]),
        _fmt(payload["classical"]["y"]),
        _fmt(payload["classical"]["fidelity"]),
    ]
    return _OPTIMIZE_CSV_FIELDS + "\n" + ",".join(row) + "\n"


def cmd_optimize(
    r: float,
    lam: float,
    fmt: str = "json",
    out_path=None,
    *,
    ledger_path=DEFAULT_LEDGER,
    stream=None,
) -> RunRecord:
    """Emit the optimal/suboptimal/classical comparison for ``(r, lam)``."""
    payload = _optimize_payload(float(r), float(lam))
    text = _dump_json(payload) if fmt == "json" else _optimize_csv(payload)
    outputs = []
    if out_path is not None:
        _write_text(out_path, text)
        outputs.append(str(out_path))
    else:
        print(text, end="", file=stream or sys.stdout)
    record = RunRecord(
        command="optimize",
        parameters={"r": float(r), "lambda": float(lam), "format": fmt},
        outputs=outputs,
    )
    _append_ledger(record, ledger_path)
    return record


def _oracle_residual(sf, g: float, seed: int, probes: int = 32) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(probes):
        state = random_single_mode_state(rng)
        a = bk_output(sf, g, state)
        b = heisenberg_oracle(sf, g, state)
        worst = max(worst, np.abs(a.d - b.d).max(), np.abs(a.V - b.V).max())
    return worst


def _simulate_payload(resource: str, *, r=None, tau=None, y=None, g=None, seed: int = 0) -> dict:
    if resource == "tmss":
        if r is None:
            if tau is None or y is None:
                raise DomainError("simulate with a squeezed-vacuum resource needs --r or both --tau and --y")
            ch_target = PhaseInsensitiveChannel(float(tau), float(y))
            r_eff = tmss_squeezing_for_channel(ch_target)
            gain = math.sqrt(ch_target.tau)
        else:
            r_eff = float(r)
            gain = 1.0 if g is None else float(g)
        sf = tmss(r_eff)
    elif resource == "optimal":
        if r is None or tau is None:
            raise DomainError("simulate with the optimal resource needs --tau and --r")
        opt = optimal_resource(float(tau), float(r))
        sf = opt.sf
        gain = math.sqrt(float(tau)) if g is None else float(g)
    else:
        raise DomainError(f"unknown resource kind {resource!r}")

    ch = induced_pi_channel(sf, gain)
    V = standard_form_to_cm(sf)
    return {
        "resource_kind": resource,
        "resource": {"a": sf.a, "b": sf.b, "c": sf.c},
        "entanglement": log_negativity(V),
        "energy": mean_energy(V),
        "gain": gain,
        "channel": {"tau": ch.tau, "y": ch.y},
        "seed": int(seed),
        "oracle_probes": 32,
        "oracle_residual": _oracle_residual(sf, gain, int(seed)),
    }


def cmd_simulate(
    resource: str,
    *,
    r=None,
    tau=None,
    y=None,
    g=None,
    seed: int = 0,
    fmt: str = "json",
    out_path=None,
    ledger_path=DEFAULT_LEDGER,
    stream=None,
) -> RunRecord:
    """Emit the induced channel and oracle residual for a teleportation resource."""
    payload = _simulate_payload(resource, r=r, tau=tau, y=y, g=g, seed=seed)
    if fmt == "json":
        text = _dump_json(payload)
    else:
        keys = (
            "resource_kind,resource_a,resource_b,resource_c,entanglement,energy,"
            "gain,tau,y,seed,oracle_residual"
        )
        row = [
            payload["resource_kind"],
            _fmt(payload["resource"]["a"]),
            _fmt(payload["resource"]["b"]),
            _fmt(payload["resource"]["c"]),
            _fmt(payload["entanglement"]),
            _fmt(payload["energy"]),
            _fmt(payload["gain"]),
            _fmt(payload["channel"]["tau"]),
            _fmt(payload["channel"]["y"]),
            str(payload["seed"]),
            _fmt(payload["oracle_residual"]),
        ]
        text = keys + "\n" + ",".join(row) + "\n"
    outputs = []
    if out_path is not None:
        _write_text(out_path, text)
        outputs.append(str(out_path))
    else:
        print(text, end="", file=stream or sys.stdout)
    record = RunRecord(
        command="simulate",
        parameters={
            "resource": resource,
            "r": None if r is None else float(r),
            "tau": None if tau is None else float(tau),
            "y": None if y is None else float(y),
            "g": None if g is None else float(g),
            "seed": int(seed),
            "format": fmt,
        },
        outputs=outputs,
    )
    _append_ledger(record, ledger_path)
    return record


def cmd_verify(
    suite: str = "all",
    seed: int = 0,
    *,
    out_path=None,
    ledger_path=DEFAULT_LEDGER,
    stream=None,
) -> tuple[RunRecord, dict]:
    """Run the self-verification suites; report per-check residuals."""
    report = verify.run_suite(suite, int(seed))
    text = _dump_json(report)
    outputs = []
    if out_path is not None:
        _write_text(out_path, text)
        outputs.append(str(out_path))
    else:
        print(text, end="", file=stream or sys.stdout)
    record = RunRecord(
        command="verify",
        parameters={"suite": suite, "seed": int(seed)},
        outputs=outputs,
    )
    _append_ledger(record, ledger_path)
    return record, report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvtele",
        description="Teleportation of Gaussian states as channel simulation: "
        "diagrams, optima and self-verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_diag = sub.add_parser("diagram", help="fidelity/region grid over the channel plane")
    p_diag.add_argument("--r", type=float, default=0.5, help="entanglement parameter (E_N = 2r)")
    p_diag.add_argument("--lambda", dest="lam", type=float, default=0.5, help="inverse input variance")
    p_diag.add_argument("--tau-range", type=float, nargs=2, default=(0.0, 3.0), metavar=("LO", "HI"))
    p_diag.add_argument("--y-range", type=float, nargs=2, default=(0.0, 3.0), metavar=("LO", "HI"))
    p_diag.add_argument("--resolution", type=int, default=300)
    p_diag.add_argument("--out", type=Path, default=Path("diagram.csv"))
    p_diag.add_argument("--tol", type=float, default=1e-9, help="region classification tolerance")

    p_opt = sub.add_parser("optimize", help="optimal fidelity and resources for (r, lambda)")
    p_opt.add_argument("--r", type=float, required=True)
    p_opt.add_argument("--lambda", dest="lam", type=float, required=True)
    p_opt.add_argument("--format", choices=("json", "csv"), default="json")
    p_opt.add_argument("--out", type=Path, default=None)

    p_sim = sub.add_parser("simulate", help="induced channel for a teleportation resource")
    p_sim.add_argument("--resource", choices=("tmss", "optimal"), required=True)
    p_sim.add_argument("--r", type=float, default=None)
    p_sim.add_argument("--tau", type=float, default=None)
    p_sim.add_argument("--y", type=float, default=None)
    p_sim.add_argument("--g", type=float, default=None)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--format", choices=("json", "csv"), default="json")
    p_sim.add_argument("--out", type=Path, default=None)

    p_ver = sub.add_parser("verify", help="run the seeded self-verification suites")
    p_ver.add_argument("--suite", choices=verify.SUITES, default="all")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", type=Path, default=None)

    for p in (p_diag, p_opt, p_sim, p_ver):
        p.add_argument("--ledger", type=Path, default=Path(DEFAULT_LEDGER), help="run-record JSON-lines file")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "diagram":
            spec = DiagramGridSpec(
                r=args.r,
                lam=args.lam,
                tau_range=tuple(args.tau_range),
                y_range=tuple(args.y_range),
                resolution=args.resolution,
            )
            cmd_diagram(spec, args.out, tol=args.tol, ledger_path=args.ledger)
        elif args.command == "optimize":
            cmd_optimize(args.r, args.lam, fmt=args.format, out_path=args.out, ledger_path=args.ledger)
        elif args.command == "simulate":
            cmd_simulate(
                args.resource,
                r=args.r,
                tau=args.tau,
                y=args.y,
                g=args.g,
                seed=args.seed,
                fmt=args.format,
                out_path=args.out,
                ledger_path=args.ledger,
            )
        elif args.command == "verify":
            _, report = cmd_verify(args.suite, args.seed, out_path=args.out, ledger_path=args.ledger)
            if not report["passed"]:
                return 1
    except CVTeleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
