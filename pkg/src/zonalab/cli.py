"""Command-line front end: reproducible experiments with CSV/JSON reports.

Every run resolves one ExperimentConfig (config file < flags), executes a
single command and writes its data products plus a manifest.json into the
output directory.  Data products are byte-identical for identical config and
seed; the manifest additionally records wall time and library versions.

Exit codes: 0 success, 2 usage, 3 domain/precondition, 4 resource.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .counterexample import divergence_scan
from .errors import DomainError, PreconditionError, ResourceError
from .geometry import Family, eigenvalue_sq, make_space
from .jacobi import build_zonal_table
from .maximal import MaximalReport, lp_norm_on_space, maximal_function, strichartz_l6_torus, uniform_grid
from .numtheory import (
    build_EN,
    counting_table_to_csv,
    divisor_count,
    gauss_sum_direct,
    gauss_sum_phase_ratio,
    mobius,
    r2,
    strichartz_table,
    totient,
    zeta_odd_euler,
    zeta_odd_mobius,
)
from .spectral import (
    SphericalSeries,
    comparable_oscillation_bound,
    evaluate,
    parse_phase,
    propagate,
    sobolev_norm,
    transfer_residual,
)

COMMANDS = ("propagate", "maximal-scan", "counterexample", "strichartz", "nt", "transfer")


@dataclass
class ExperimentConfig:
    command: str
    family: str = "Sphere"
    dim: int = 2
    N: int = 32
    N_list: list[int] = field(default_factory=lambda: [256, 512, 1024, 2048, 4096])
    phases: list[str] = field(default_factory=lambda: ["schrodinger"])
    alphas: list[float] = field(default_factory=lambda: [0.0, 0.25, 0.5])
    p_norms: list[str] = field(default_factory=lambda: ["1", "2", "6", "inf"])
    epsilon: float = 0.1
    t_grid: int = 1024
    theta_nodes: int = 0  # 0: resolution rule 10*N
    samples_per_interval: int = 1
    times: list[float] = field(default_factory=lambda: [0.0])
    s: int = 1
    ell: int = 1
    limit: int = 20
    q_max: int = 25
    m_min: int = 2
    m_max: int = 7
    eps_gap: float = 1.0
    seed: int = 0
    out_dir: str = "out"
    format: str = "csv"


_LIST_FIELDS = {
    "N_list": int,
    "alphas": float,
    "times": float,
    "p_norms": str,
}


def _parse_list(text: str, cast):
    return [cast(tok) for tok in str(text).split(",") if tok != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zonalab",
        description="Radial dispersive-flow experiments on compact rank-one symmetric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="|".join(COMMANDS))
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file; explicit flags win over it")
        p.add_argument("--space", dest="family", choices=[f.value for f in Family])
        p.add_argument("--dim", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--N-list", dest="N_list", help="comma-separated, e.g. 256,512,1024")
        p.add_argument(
            "--phase",
            dest="phases",
            action="append",
            help="schrodinger | fractional:a | boussinesq | beam | custom:path (repeatable)",
        )
        p.add_argument("--alpha", dest="alphas", help="comma-separated Sobolev orders")
        p.add_argument("--p-norms", dest="p_norms", help="comma-separated p values, inf allowed")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--t-grid", dest="t_grid", type=int)
        p.add_argument("--theta-nodes", dest="theta_nodes", type=int)
        p.add_argument("--samples-per-interval", dest="samples_per_interval", type=int)
        p.add_argument("--times", help="comma-separated times in [0, 2*pi)")
        p.add_argument("--s", type=int, help="metric scaling of the torus frequencies")
        p.add_argument("--ell", type=int, help="linear coefficient of the torus frequencies")
        p.add_argument("--limit", type=int, help="table size for the nt command")
        p.add_argument("--q-max", dest="q_max", type=int, help="largest odd modulus for the nt oracle table")
        p.add_argument("--m-min", dest="m_min", type=int)
        p.add_argument("--m-max", dest="m_max", type=int)
        p.add_argument("--eps-gap", dest="eps_gap", type=float, help="Sobolev gap of the transfer experiment")
        p.add_argument("--seed", type=int)
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--format", choices=["csv", "json"])
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig(command=args.command)
    file_values: dict = {}
    if args.config:
        file_values = json.loads(Path(args.config).read_text())
    for source in (file_values, {k: v for k, v in vars(args).items() if v is not None}):
        for key, value in source.items():
            if key in ("config", "command") or not hasattr(cfg, key):
                continue
            if key in _LIST_FIELDS and isinstance(value, str):
                value = _parse_list(value, _LIST_FIELDS[key])
            setattr(cfg, key, value)
    if cfg.command not in ("strichartz", "nt") and not cfg.phases:
        cfg.phases = ["schrodinger"]
    return cfg


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])


def _write_table(cfg: ExperimentConfig, out: Path, stem: str, header: list[str], rows) -> str:
    rows = list(rows)
    if cfg.format == "json":
        name = f"{stem}.json"
        _write_json(out / name, [dict(zip(header, row)) for row in rows])
    else:
        name = f"{stem}.csv"
        _write_csv(out / name, header, rows)
    return name


def _series_rows(series: SphericalSeries):
    for n, c in enumerate(series.coeffs):
        yield n, float(c.real), float(c.imag)


def _random_unit_series(space, N: int, rng: np.random.Generator) -> SphericalSeries:
    coeffs = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    return SphericalSeries(space, coeffs / np.linalg.norm(coeffs))


def _resolve_nodes(cfg: ExperimentConfig, N: int) -> int:
    return cfg.theta_nodes if cfg.theta_nodes else 10 * N


def cmd_propagate(cfg: ExperimentConfig, out: Path) -> dict:
    space = make_space(cfg.family, cfg.dim)
    phases = [parse_phase(p) for p in cfg.phases]
    rng = np.random.default_rng(cfg.seed)
    table = build_zonal_table(space, cfg.N, _resolve_nodes(cfg, cfg.N))
    f = _random_unit_series(space, cfg.N, rng)
    files = [_write_table(cfg, out, "input_series", ["n", "re", "im"], _series_rows(f))]
    norms = {}
    for phase in phases:
        for k, t in enumerate(cfg.times):
            g = propagate(f, phase, t)
            stem = f"series_{phase.label.replace(':', '_')}_t{k}"
            files.append(_write_table(cfg, out, stem, ["n", "re", "im"], _series_rows(g)))
            vals = evaluate(g, table)
            files.append(
                _write_table(
                    cfg,
                    out,
                    f"values_{phase.label.replace(':', '_')}_t{k}",
                    ["theta", "re", "im", "abs"],
                    (
                        (float(th), float(v.real), float(v.imag), float(abs(v)))
                        for th, v in zip(table.theta, vals)
                    ),
                )
            )
            norms[f"{phase.label}:t{k}"] = g.l2_norm()
    gaps = {}
    for i in range(len(phases)):
        for j in range(i + 1, len(phases)):
            key = f"{phases[i].label}|{phases[j].label}"
            gaps[key] = comparable_oscillation_bound(phases[i], phases[j], 1.0, 1e6)
    report = {
        "input_l2_norm": f.l2_norm(),
        "propagated_l2_norms": norms,
        "pairwise_phase_gaps": gaps,
        "times": list(cfg.times),
    }
    _write_json(out / "report.json", report)
    files.append("report.json")
    return {"files": files, "summary": report}


def cmd_maximal_scan(cfg: ExperimentConfig, out: Path) -> dict:
    space = make_space(cfg.family, cfg.dim)
    phase = parse_phase(cfg.phases[0])
    rng = np.random.default_rng(cfg.seed)
    table = build_zonal_table(space, cfg.N, _resolve_nodes(cfg, cfg.N))
    f = _random_unit_series(space, cfg.N, rng)
    tgrid = uniform_grid(cfg.t_grid)
    sup = maximal_function(f, phase, table, tgrid)
    report = MaximalReport(
        space=space.to_json_dict(),
        N=cfg.N,
        phase=phase.label,
        sup_values=sup,
        lp_norms={p: lp_norm_on_space(sup, space, table, math.inf if p == "inf" else float(p)) for p in cfg.p_norms},
        sobolev_norms={f"{a:g}": sobolev_norm(f, a) for a in cfg.alphas},
        t_grid_size=cfg.t_grid,
        theta_node_count=int(table.theta.shape[0]),
    )
    report.to_json(out / "maximal_report.json")
    files = ["maximal_report.json"]
    files.append(
        _write_table(
            cfg, out, "sup", ["theta", "sup"], zip(map(float, table.theta), map(float, sup))
        )
    )
    return {"files": files, "summary": report.to_json_dict()}


def cmd_counterexample(cfg: ExperimentConfig, out: Path) -> dict:
    space = make_space(cfg.family, cfg.dim)
    report = divergence_scan(
        space,
        cfg.N_list,
        cfg.epsilon,
        samples_per_interval=cfg.samples_per_interval,
        alphas=tuple(cfg.alphas),
    )
    report.to_json(out / "divergence_report.json")
    files = ["divergence_report.json"]
    files.append(
        _write_table(cfg, out, "scan_rows", ["N", "q", "p", "theta", "supval"], report.rows)
    )
    print(f"fitted log-log slope: {report.slope}")
    return {"files": files, "summary": {"slope": report.slope}}


def cmd_strichartz(cfg: ExperimentConfig, out: Path) -> dict:
    rng = np.random.default_rng(cfg.seed)
    table = strichartz_table(cfg.N, cfg.s, cfg.ell)
    files = []
    if cfg.format == "json":
        _write_json(out / "counting_table.json", [[u, v, c] for (u, v), c in sorted(table.items())])
        files.append("counting_table.json")
    else:
        counting_table_to_csv(table, out / "counting_table.csv")
        files.append("counting_table.csv")
    agree = None
    l6c = l6q = None
    if cfg.N <= 16:
        a = rng.standard_normal(cfg.N) + 1j * rng.standard_normal(cfg.N)
        a /= np.linalg.norm(a)
        l6c = strichartz_l6_torus(a, cfg.s, cfg.ell, "counting")
        l6q = strichartz_l6_torus(a, cfg.s, cfg.ell, "quadrature")
        agree = abs(l6c - l6q) / l6c <= 1e-6
    report = {
        "N": cfg.N,
        "s": cfg.s,
        "ell": cfg.ell,
        "max_count": max(table.values()),
        "l6_counting": l6c,
        "l6_quadrature": l6q,
        "modes_agree": agree,
    }
    _write_json(out / "l6_report.json", report)
    files.append("l6_report.json")
    return {"files": files, "summary": report}


def cmd_nt(cfg: ExperimentConfig, out: Path) -> dict:
    files = []
    rows = [(n, mobius(n), totient(n), divisor_count(n), r2(n)) for n in range(1, cfg.limit + 1)]
    files.append(_write_table(cfg, out, "arithmetic", ["n", "mu", "phi", "d", "r2"], rows))
    cs = build_EN(cfg.N, cfg.epsilon) if cfg.N else None
    if cs is not None:
        files.append(
            _write_table(
                cfg,
                out,
                "congruence_set",
                ["p", "q", "lo", "hi"],
                ((iv.p, iv.q, iv.lo, iv.hi) for iv in cs.intervals),
            )
        )
    gauss_rows = []
    worst_mod = worst_ratio = 0.0
    for q in range(3, cfg.q_max + 1, 2):
        ps = [p for p in range(2, q, 2) if math.gcd(p, q) == 1]
        if not ps:
            continue
        for ell in (1, 2, 11):
            sums = {p: gauss_sum_direct(q, ell, p) for p in ps}
            for p in ps:
                mod_err = abs(abs(sums[p]) - math.sqrt(q))
                ratio_err = abs(
                    gauss_sum_phase_ratio(q, ell, ps[0], p) - sums[ps[0]] / sums[p]
                )
                worst_mod = max(worst_mod, mod_err)
                worst_ratio = max(worst_ratio, ratio_err)
                gauss_rows.append((q, ell, p, mod_err, ratio_err))
    files.append(
        _write_table(cfg, out, "gauss_oracle", ["q", "ell", "p", "abs_err", "ratio_err"], gauss_rows)
    )
    report = {
        "limit": cfg.limit,
        "zeta_partial_1e6": zeta_odd_mobius(10**6),
        "zeta_euler_1e5": zeta_odd_euler(10**5),
        "EN_measure": cs.measure() if cs is not None else None,
        "EN_intervals": len(cs.intervals) if cs is not None else None,
        "gauss_worst_modulus_error": worst_mod,
        "gauss_worst_ratio_error": worst_ratio,
    }
    _write_json(out / "nt_report.json", report)
    files.append("nt_report.json")
    return {"files": files, "summary": report}


def cmd_transfer(cfg: ExperimentConfig, out: Path) -> dict:
    space = make_space(cfg.family, cfg.dim)
    if len(cfg.phases) < 2:
        raise PreconditionError("transfer needs two --phase arguments (candidate and reference)")
    psi1, psi2 = parse_phase(cfg.phases[0]), parse_phase(cfg.phases[1])
    n_max = 2 ** (cfg.m_max + 1)
    table = build_zonal_table(space, n_max, _resolve_nodes(cfg, n_max))
    alpha2 = space.d / 2 + cfg.eps_gap
    rows = []
    for m in range(cfg.m_min, cfg.m_max + 1):
        lo, hi = 2**m, 2 ** (m + 1)
        coeffs = np.zeros(n_max, dtype=np.complex128)
        lam2 = eigenvalue_sq(space, np.arange(lo, hi))
        coeffs[lo:hi] = (1.0 + lam2) ** (-alpha2 / 2.0)
        f = SphericalSeries(space, coeffs)
        h2 = sobolev_norm(f, alpha2)
        f = SphericalSeries(space, coeffs / h2)
        res = transfer_residual(f, psi1, psi2, table, uniform_grid(cfg.t_grid), theta_indices=slice(None, None, 8))
        rows.append((m, res, 1.0))
    slope = float(np.polyfit([r[0] for r in rows], np.log2([r[1] for r in rows]), 1)[0])
    files = [_write_table(cfg, out, "residuals", ["m", "residual", "h_alpha2"], rows)]
    report = {
        "pair": [psi1.label, psi2.label],
        "alpha2": alpha2,
        "eps_gap": cfg.eps_gap,
        "log2_slope": slope,
        "slope_budget": -cfg.eps_gap / 2.0,
    }
    _write_json(out / "transfer_report.json", report)
    files.append("transfer_report.json")
    print(f"residual log2 slope: {slope} (budget {-cfg.eps_gap / 2.0})")
    return {"files": files, "summary": report}


_RUNNERS = {
    "propagate": cmd_propagate,
    "maximal-scan": cmd_maximal_scan,
    "counterexample": cmd_counterexample,
    "strichartz": cmd_strichartz,
    "nt": cmd_nt,
    "transfer": cmd_transfer,
}


def _manifest(cfg: ExperimentConfig, result: dict, wall: float) -> dict:
    space_info = None
    if cfg.command in ("propagate", "maximal-scan", "counterexample", "transfer"):
        space_info = make_space(cfg.family, cfg.dim).to_json_dict()
    return {
        "command": cfg.command,
        "config": asdict(cfg),
        "space": space_info,
        "grid": {"t_grid": cfg.t_grid, "theta_nodes": cfg.theta_nodes},
        "epsilon": cfg.epsilon,
        "seed": cfg.seed,
        "tolerances": {"l6_modes_rel": 1e-6, "gauss_oracle_abs": 1e-9},
        "versions": {
            "zonalab": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "files": result.get("files", []),
        "wall_time_s": wall,
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        result = _RUNNERS[cfg.command](cfg, out)
        wall = time.perf_counter() - t0
        _write_json(out / "manifest.json", _manifest(cfg, result, wall))
    except (DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
