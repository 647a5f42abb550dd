"""Maximal functions over time grids and the sixth-power torus machinery.

The torus L6 norm of sum_n a_n e^{-i t e(n)} e^{i n theta} with integer
frequencies e(n) = s*n*(s*n + ell) admits two independent routes: an exact
combinatorial expansion of |F|^6 over triple-collision cells (u, v), and
plain product-grid quadrature.  The pair is the module's main correctness
oracle at small N.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, PreconditionError, ResourceError
from .geometry import SpaceParams, density, eigenvalue_sq
from .jacobi import ZonalTable
from .spectral import PhaseFunction, SphericalSeries

__all__ = [
    "maximal_function",
    "lp_norm_on_space",
    "strichartz_l6_torus",
    "circle_maximal_l6",
    "uniform_grid",
    "MaximalReport",
]

_L6_COUNTING_CAP = 64


def uniform_grid(size: int) -> np.ndarray:
    """size equispaced points on [0, 2*pi); refining by doubling nests grids."""
    if size < 1:
        raise DomainError("grid size must be positive")
    return np.arange(size) * (2.0 * math.pi / size)


def maximal_function(
    f: SphericalSeries,
    psi: PhaseFunction,
    table: ZonalTable,
    tgrid,
    theta_indices=None,
    t_chunk: int = 2048,
) -> np.ndarray:
    """Per-node sup over the t-grid of |propagated f| at the table nodes."""
    if f.space != table.space:
        raise PreconditionError("series and table live on different spaces")
    if len(f) > table.max_degree:
        raise PreconditionError("series degree exceeds table degree")
    rows = table.values[: len(f)]
    if theta_indices is not None:
        rows = rows[:, theta_indices]
    weighted = f.coeffs[:, None] * rows
    lam = np.sqrt(eigenvalue_sq(f.space, np.arange(len(f))))
    ph = np.asarray(psi(lam))
    tgrid = np.asarray(tgrid, dtype=float)
    sup = np.zeros(rows.shape[1])
    for k in range(0, tgrid.shape[0], t_chunk):
        mult = np.exp(-1j * tgrid[k : k + t_chunk, None] * ph[None, :])
        np.maximum(sup, np.abs(mult @ weighted).max(axis=0), out=sup)
    return sup


def lp_norm_on_space(values, space: SpaceParams, table: ZonalTable, p) -> float:
    """Lp norm of per-node values against the radial measure of the space.

    p = inf is a genuine max over nodes and ignores the density weights.
    """
    vals = np.asarray(values, dtype=float)
    if vals.shape != table.theta.shape:
        raise PreconditionError("values must be given per table node")
    if p == math.inf or p == "inf":
        return float(np.abs(vals).max())
    p = float(p)
    if p < 1.0:
        raise DomainError("p must be >= 1 or inf")
    w = table.weights * density(space, table.theta)
    return float((w @ np.abs(vals) ** p) ** (1.0 / p))


def _torus_frequencies(N: int, s: int, ell: int) -> np.ndarray:
    if s not in (1, 2):
        raise DomainError("the metric scaling s must be 1 or 2")
    if ell < 0:
        raise DomainError("ell must be non-negative")
    n = np.arange(N, dtype=np.int64)
    return s * n * (s * n + ell)


def _l6_counting(a: np.ndarray, e: np.ndarray) -> float:
    """Exact sixth-power expansion: sum over cells (u, v) of |c_{u,v}|^2 with
    c_{u,v} the triple-product coefficient of e^{-i(v t + u theta)} in F^3."""
    N = a.shape[0]
    span = 3 * int(e[-1]) + 1 if N > 1 else 1
    k = np.arange(N, dtype=np.int64) * span + e
    key3 = (k[:, None, None] + k[None, :, None] + k[None, None, :]).ravel()
    a3 = (a[:, None, None] * a[None, :, None] * a[None, None, :]).ravel()
    _, inverse = np.unique(key3, return_inverse=True)
    cre = np.bincount(inverse, weights=a3.real)
    cim = np.bincount(inverse, weights=a3.imag)
    return float((cre * cre + cim * cim).sum()) ** (1.0 / 6.0)


def _l6_quadrature(
    a: np.ndarray, e: np.ndarray, theta_nodes: int, t_nodes: int, t_chunk: int = 512
) -> float:
    theta = uniform_grid(theta_nodes)
    ts = uniform_grid(t_nodes)
    n = np.arange(a.shape[0])
    basis = np.exp(1j * n[:, None] * theta[None, :])
    acc = 0.0
    for k in range(0, t_nodes, t_chunk):
        mult = a[None, :] * np.exp(-1j * ts[k : k + t_chunk, None] * e[None, :])
        acc += float((np.abs(mult @ basis) ** 6).sum())
    return (acc / (theta_nodes * t_nodes)) ** (1.0 / 6.0)


def strichartz_l6_torus(
    a,
    s: int,
    ell: int,
    mode: str = "counting",
    theta_nodes: int | None = None,
    t_nodes: int | None = None,
) -> float:
    """L6(T x T) norm of the quadratic exponential sum with coefficients a.

    counting mode is exact integer/float combinatorics (O(N^3) cells);
    quadrature mode integrates on a product grid whose default size makes
    the trigonometric integrand exactly resolved (error at rounding level).
    """
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DomainError("coefficients must form a non-empty 1-d array")
    N = arr.shape[0]
    e = _torus_frequencies(N, s, ell)
    if mode == "counting":
        if N > _L6_COUNTING_CAP:
            raise ResourceError(
                f"counting mode enumerates O(N^3) triples and is capped at N = {_L6_COUNTING_CAP}; "
                "use mode='quadrature' for larger N"
            )
        return _l6_counting(arr, e)
    if mode == "quadrature":
        # |F|^6 has theta-frequencies up to 3(N-1) and t-frequencies up to
        # 3*e_max, so these uniform grids integrate it exactly.
        mtheta = theta_nodes if theta_nodes is not None else 6 * (N - 1) + 1
        mt = t_nodes if t_nodes is not None else 6 * int(e[-1]) + 1
        if mtheta < 6 * (N - 1) + 1 or mt < 6 * int(e[-1]) + 1:
            raise PreconditionError("quadrature grid is below the exactness threshold")
        return _l6_quadrature(arr, e, mtheta, mt)
    raise DomainError("mode must be 'counting' or 'quadrature'")


def circle_maximal_l6(a, s: int, ell: int, theta_grid, t_grid, t_chunk: int = 2048) -> float:
    """L6(T) norm over the theta grid of the per-point sup over the t grid.

    The theta grid carries normalized counting measure, so refining t never
    decreases the result and a single unimodular mode gives exactly one.
    """
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DomainError("coefficients must form a non-empty 1-d array")
    e = _torus_frequencies(arr.shape[0], s, ell)
    theta = np.asarray(theta_grid, dtype=float)
    ts = np.asarray(t_grid, dtype=float)
    n = np.arange(arr.shape[0])
    basis = np.exp(1j * n[:, None] * theta[None, :])
    sup = np.zeros(theta.shape[0])
    for k in range(0, ts.shape[0], t_chunk):
        mult = arr[None, :] * np.exp(-1j * ts[k : k + t_chunk, None] * e[None, :])
        np.maximum(sup, np.abs(mult @ basis).max(axis=0), out=sup)
    return float(((sup**6).mean()) ** (1.0 / 6.0))


@dataclass(frozen=True)
class MaximalReport:
    """Gridded maximal-function scan of one series on one space."""

    space: dict
    N: int
    phase: str
    sup_values: np.ndarray
    lp_norms: dict[str, float]
    sobolev_norms: dict[str, float]
    t_grid_size: int
    theta_node_count: int

    def to_json_dict(self) -> dict:
        return {
            "space": self.space,
            "N": self.N,
            "phase": self.phase,
            "lp_norms": self.lp_norms,
            "sobolev_norms": self.sobolev_norms,
            "grid": {"t_grid_size": self.t_grid_size, "theta_nodes": self.theta_node_count},
            "sup_max": float(np.max(self.sup_values)),
        }

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n")

    def sup_to_csv(self, path: str | Path, theta: np.ndarray) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "sup"])
            for t, v in zip(theta, self.sup_values):
                w.writerow([repr(float(t)), repr(float(v))])
