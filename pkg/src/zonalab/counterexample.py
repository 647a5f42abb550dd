"""Rational-time divergence construction for the flat-spectrum series.

The series f_N = sum_{n<N} Ztilde_n / c_n is propagated under the quadratic
phase at times t = 2*pi/q for odd q near sqrt(N).  At angles just to the
right of rationals 2*pi*p/q the rational-time sum collapses to a geometric
factor times a complete quadratic exponential sum of modulus sqrt(q), which
makes |u| grow like N^(3/4) on the congruence-interval family.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, PreconditionError
from .geometry import Family, SpaceParams
from .jacobi import ZonalTable, lead_coeffs, zonal_l2norms, zonal_matrix
from .numtheory import CongruenceSet, build_EN, gauss_sum_direct
from .spectral import SphericalSeries, propagate, schrodinger, sobolev_norm

__all__ = [
    "build_fN",
    "flat_series_coeffs",
    "kappa",
    "oscillatory_sum_S",
    "oscillatory_sum_S_plus",
    "gauss_block_prediction",
    "divergence_scan",
    "DivergenceReport",
    "SCAN_FAMILIES",
]

# Families covered by the divergence claim: the rational-time collapse needs
# the s = 1 eigenvalue form, which excludes the real projective family.
SCAN_FAMILIES = frozenset(
    {
        Family.SPHERE,
        Family.COMPLEX_PROJECTIVE,
        Family.QUATERNIONIC_PROJECTIVE,
        Family.CAYLEY_PLANE,
    }
)

REAL_PROJECTIVE_MESSAGE = (
    "divergence_scan excludes RealProjective: its metric scaling is s = 2, so the "
    "propagator phases are not q-periodic in the degree and the rational-time "
    "collapse used by the scan does not apply"
)


def flat_series_coeffs(c: np.ndarray, N: int) -> np.ndarray:
    """Coefficients a_n = 1/c_n, n < N, of the flat-spectrum series."""
    if N < 1:
        raise DomainError("N must be positive")
    if c.shape[0] < N:
        raise PreconditionError("lead-coefficient array shorter than N")
    return (1.0 / c[:N]).astype(np.complex128)


def build_fN(space: SpaceParams, table: ZonalTable, N: int) -> SphericalSeries:
    """The flat-spectrum series sum_{n<N} Ztilde_n / c_n on the table's space."""
    if table.space != space:
        raise PreconditionError("table belongs to a different space")
    if table.max_degree < N:
        raise PreconditionError(f"table covers degree {table.max_degree} < N = {N}")
    return SphericalSeries(space, flat_series_coeffs(table.lead_coeffs, N))


def kappa(space: SpaceParams, theta) -> np.ndarray | float:
    """Affine phase (sigma+tau+1)*theta/2 - (sigma+1/2)*pi/2."""
    arr = np.asarray(theta, dtype=float)
    out = 0.5 * space.ell_f * arr - 0.5 * (space.sigma_f + 0.5) * math.pi
    return out if arr.ndim else float(out)


def oscillatory_sum_S(space: SpaceParams, N: int, t: float, theta) -> np.ndarray | complex:
    """Direct N-term sum of exp(-i*t*n*(n+sigma+tau+1)) * cos(n*theta + kappa)."""
    if N < 1:
        raise DomainError("N must be positive")
    arr = np.asarray(theta, dtype=float)
    n = np.arange(N, dtype=float)
    mult = np.exp(-1j * t * n * (n + space.ell_f))
    phases = np.cos(np.atleast_1d(arr)[:, None] * n[None, :] + np.asarray(kappa(space, np.atleast_1d(arr)))[:, None])
    out = phases.astype(np.complex128) @ mult
    return out if arr.ndim else complex(out[0])


def oscillatory_sum_S_plus(space: SpaceParams, N: int, t: float, theta) -> np.ndarray | complex:
    """One-sided exponential variant: sum_n exp(-i*t*n*(n+sigma+tau+1)) * exp(i*n*theta)."""
    if N < 1:
        raise DomainError("N must be positive")
    arr = np.asarray(theta, dtype=float)
    n = np.arange(N, dtype=float)
    mult = np.exp(-1j * t * n * (n + space.ell_f))
    out = np.exp(1j * np.atleast_1d(arr)[:, None] * n[None, :]) @ mult
    return out if arr.ndim else complex(out[0])


def gauss_block_prediction(space: SpaceParams, N: int, q: int, p: int, xi: float) -> complex:
    """Geometric-sum times complete-sum main term for the one-sided sum at
    t = 2*pi/q and theta = 2*pi*p/q + xi."""
    if space.ell.denominator != 1:
        raise DomainError("the rational-time collapse needs integer sigma+tau+1")
    if q < 1 or q % 2 == 0:
        raise DomainError("q must be odd and positive")
    if p % 2 != 0:
        raise DomainError("p must be even")
    if math.gcd(p, q) != 1:
        raise DomainError("p and q must be coprime")
    if N < 1:
        raise DomainError("N must be positive")
    if abs(xi) > math.pi / (8 * N) + 1e-15:
        raise DomainError("|xi| must be at most pi/(8N)")
    blocks = N // q
    j = np.arange(blocks)
    geometric = complex(np.exp(1j * j * q * xi).sum()) if blocks else 0.0
    return geometric * gauss_sum_direct(q, int(space.ell), p)


@dataclass(frozen=True)
class DivergenceReport:
    """Per-N records of the best rational-time sup and the fitted growth rate."""

    space: dict
    epsilon: float
    samples_per_interval: int
    n_values: tuple[int, ...]
    best: tuple[dict, ...]  # one per N with data: N, sup, q, p, theta, t
    sobolev_norms: dict[str, dict[str, float]]  # alpha -> {str(N): norm}
    slope: float | None
    rows: tuple[tuple[int, int, int, float, float], ...]  # (N, q, p, theta, sup)

    def to_json_dict(self) -> dict:
        return {
            "space": self.space,
            "epsilon": self.epsilon,
            "samples_per_interval": self.samples_per_interval,
            "N_values": list(self.n_values),
            "best": list(self.best),
            "sobolev_norms": self.sobolev_norms,
            "slope": self.slope,
        }

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n")

    def rows_to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "q", "p", "theta", "supval"])
            for N, q, p, theta, sup in self.rows:
                w.writerow([N, q, p, repr(theta), repr(sup)])


def _interval_samples(cs: CongruenceSet, k: int) -> np.ndarray:
    """k interior sample angles per interval; k = 1 is the midpoint and the
    k = 1 sample set is contained in every odd-k refinement."""
    lo = np.array([iv.lo for iv in cs.intervals])
    length = math.pi / (16 * cs.N)
    offs = (2.0 * np.arange(k) + 1.0) / (2.0 * k) * length
    return (lo[:, None] + offs[None, :]).ravel()


def fit_loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def divergence_scan(
    space: SpaceParams,
    n_list,
    epsilon: float = 0.1,
    *,
    samples_per_interval: int = 1,
    norms: np.ndarray | None = None,
    alphas=(0.0, 0.25, 0.5),
) -> DivergenceReport:
    """Scan the rational-time witness family and fit the growth of the sup.

    For each N the congruence set is enumerated; each stored (p, q) is tested
    at t = 2*pi/q and at samples_per_interval angles inside its interval, the
    flat-spectrum series is propagated and evaluated there, and the largest
    modulus is recorded.  The slope of log(sup) against log(N) is fitted by
    least squares over the N values that produced data.
    """
    if space.family not in SCAN_FAMILIES:
        if space.family is Family.REAL_PROJECTIVE:
            raise DomainError(REAL_PROJECTIVE_MESSAGE)
        raise DomainError(f"family {space.family.value} is outside the scan scope")
    n_list = sorted(int(N) for N in n_list)
    if not n_list or n_list[0] < 1:
        raise DomainError("n_list must contain positive integers")
    if samples_per_interval < 1:
        raise DomainError("samples_per_interval must be >= 1")
    n_max = n_list[-1]
    if norms is None:
        norms = zonal_l2norms(space, n_max)
    if norms.shape[0] < n_max:
        raise PreconditionError("norm array shorter than max(n_list)")
    c_all = lead_coeffs(norms)

    phase = schrodinger()
    best: list[dict] = []
    rows: list[tuple[int, int, int, float, float]] = []
    sob: dict[str, dict[str, float]] = {f"{a:g}": {} for a in alphas}
    fitted_n: list[int] = []
    fitted_sup: list[float] = []

    for N in n_list:
        series = SphericalSeries(space, flat_series_coeffs(c_all, N))
        for a in alphas:
            sob[f"{a:g}"][str(N)] = sobolev_norm(series, a)
        cs = build_EN(N, epsilon)
        if not cs.intervals:
            best.append({"N": N, "sup": None, "q": None, "p": None, "theta": None, "t": None})
            continue
        thetas = _interval_samples(cs, samples_per_interval)
        zmat = zonal_matrix(space, thetas, norms[:N])
        record = None
        # Deterministic reduction order: intervals sorted by (q, p).
        order = sorted(range(len(cs.intervals)), key=lambda i: (cs.intervals[i].q, cs.intervals[i].p))
        for i in order:
            iv = cs.intervals[i]
            t = 2.0 * math.pi / iv.q
            cols = slice(i * samples_per_interval, (i + 1) * samples_per_interval)
            prop = propagate(series, phase, t)
            vals = np.abs(prop.coeffs @ zmat[:, cols])
            j = int(np.argmax(vals))
            supval = float(vals[j])
            theta_at = float(thetas[i * samples_per_interval + j])
            rows.append((N, iv.q, iv.p, theta_at, supval))
            if record is None or supval > record["sup"]:
                record = {"N": N, "sup": supval, "q": iv.q, "p": iv.p, "theta": theta_at, "t": t}
        best.append(record)
        fitted_n.append(N)
        fitted_sup.append(record["sup"])

    slope = fit_loglog_slope(fitted_n, fitted_sup) if len(fitted_n) >= 2 else None
    return DivergenceReport(
        space=space.to_json_dict(),
        epsilon=epsilon,
        samples_per_interval=samples_per_interval,
        n_values=tuple(n_list),
        best=tuple(best),
        sobolev_norms=sob,
        slope=slope,
        rows=tuple(rows),
    )
