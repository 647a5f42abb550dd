"""Jacobi polynomials, normalized zonal function tables and their main term.

Evaluation uses the degree recurrence at fixed argument, which is the stable
direction on [-1, 1].  Zonal rows are L2-normalized against the radial
density of the space by composite Gauss-Legendre quadrature; the per-degree
lead coefficients c_n tie the normalized rows to the oscillatory main term

    (pi*n)**(-1/2) * sin(theta/2)**(-sigma-1/2) * cos(theta/2)**(-tau-1/2)
        * cos((n + (sigma+tau+1)/2)*theta - (sigma+1/2)*pi/2),

valid for c/n <= theta <= pi - c/n.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import DomainError, PreconditionError
from .geometry import SpaceParams, density

__all__ = [
    "jacobi_eval",
    "jacobi_at_one",
    "theta_quadrature",
    "ZonalTable",
    "build_zonal_table",
    "zonal_l2norms",
    "zonal_matrix",
    "lead_coeffs",
    "asymptotic_main_term",
]

_PANEL = 64
_PANEL_X, _PANEL_W = np.polynomial.legendre.leggauss(_PANEL)

# Resolution rule for zonal tables: at least this many quadrature nodes per
# polynomial degree, i.e. ten nodes per oscillation of the highest row.
NODES_PER_DEGREE = 10


def _check_params(sigma: float, tau: float) -> None:
    if sigma <= -1.0 or tau <= -1.0:
        raise DomainError("Jacobi parameters must satisfy sigma > -1 and tau > -1")


def _jacobi_rows(sigma: float, tau: float, x: np.ndarray, count: int) -> Iterator[np.ndarray]:
    """Yield P_n^{(sigma,tau)}(x) for n = 0 .. count-1 by the degree recurrence."""
    p_prev = np.ones_like(x)
    yield p_prev
    if count == 1:
        return
    p_cur = 0.5 * ((sigma - tau) + (sigma + tau + 2.0) * x)
    yield p_cur
    ab = sigma + tau
    for n in range(2, count):
        a1 = 2.0 * n * (n + ab) * (2.0 * n + ab - 2.0)
        a2 = (2.0 * n + ab - 1.0) * (sigma * sigma - tau * tau)
        a3 = (2.0 * n + ab - 2.0) * (2.0 * n + ab - 1.0) * (2.0 * n + ab)
        a4 = 2.0 * (n + sigma - 1.0) * (n + tau - 1.0) * (2.0 * n + ab)
        p_prev, p_cur = p_cur, ((a2 + a3 * x) * p_cur - a4 * p_prev) / a1
        yield p_cur


def _zonal_rows(space: SpaceParams, x: np.ndarray, count: int) -> Iterator[np.ndarray]:
    """Yield the raw degree-n zonal rows of the space at x = cos(theta/s).

    For s = 1 the row is P_n^{(sigma,tau)}(x).  For s = 2 the degree-n
    eigenfunction on the half-angle variable is the even polynomial of
    degree 2n (odd degrees are odd about the equator of the double cover and
    do not descend), so every other recurrence row is emitted; this also
    matches the eigenvalues s*n*(s*n + sigma + tau + 1).
    """
    it = _jacobi_rows(space.sigma_f, space.tau_f, x, space.s * (count - 1) + 1)
    for k, row in enumerate(it):
        if k % space.s == 0:
            yield row


def jacobi_eval(sigma: float, tau: float, n: int, x) -> np.ndarray | float:
    """Value of the degree-n Jacobi polynomial at x in [-1, 1]."""
    _check_params(sigma, tau)
    if n < 0:
        raise DomainError("degree n must be non-negative")
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError("argument x must lie in [-1, 1]")
    work = np.atleast_1d(arr)
    for row in _jacobi_rows(float(sigma), float(tau), work, n + 1):
        out = row
    return out.reshape(arr.shape) if arr.ndim else float(out[0])


def jacobi_at_one(sigma: float, tau: float, n: int) -> float:
    """P_n^{(sigma,tau)}(1) = binomial(n + sigma, n), as a stable product."""
    _check_params(sigma, tau)
    if n < 0:
        raise DomainError("degree n must be non-negative")
    out = 1.0
    for k in range(1, n + 1):
        out *= (sigma + k) / k
    return out


def theta_quadrature(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite 64-point Gauss-Legendre rule on [0, pi] with >= nodes points."""
    if nodes < 1:
        raise DomainError("node count must be positive")
    panels = -(-nodes // _PANEL)
    edges = np.linspace(0.0, math.pi, panels + 1)
    half = (edges[1] - edges[0]) / 2.0
    mids = (edges[:-1] + edges[1:]) / 2.0
    theta = (mids[:, None] + half * _PANEL_X[None, :]).ravel()
    weights = np.broadcast_to(half * _PANEL_W, (panels, _PANEL)).ravel().copy()
    return theta, weights


@dataclass(frozen=True)
class ZonalTable:
    """Normalized zonal rows of one space sampled on a quadrature grid.

    values[n, i] is the degree-n zonal row at theta[i]; each row has unit
    weighted L2 norm.  l2norms[n] is the norm of the raw Jacobi row of the
    space; lead_coeffs[n] is the main-term amplitude c_n with c_0 = 1 and
    c_n = 1 / (l2norms[n] * sqrt(pi * n)) for n >= 1.
    """

    space: SpaceParams
    max_degree: int
    theta: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    l2norms: np.ndarray
    lead_coeffs: np.ndarray

    def to_csv_dir(self, path: str | Path) -> None:
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        with open(path / "nodes.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "weight"])
            for t, wt in zip(self.theta, self.weights):
                w.writerow([repr(float(t)), repr(float(wt))])
        with open(path / "values.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "i", "value"])
            for n in range(self.max_degree):
                row = self.values[n]
                for i in range(row.shape[0]):
                    w.writerow([n, i, repr(float(row[i]))])
        with open(path / "norms.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "l2norm", "c_n"])
            for n in range(self.max_degree):
                w.writerow([n, repr(float(self.l2norms[n])), repr(float(self.lead_coeffs[n]))])
        (path / "space.json").write_text(self.space.to_json())

    @staticmethod
    def from_csv_dir(path: str | Path) -> "ZonalTable":
        path = Path(path)
        space = SpaceParams.from_json_dict(json.loads((path / "space.json").read_text()))
        nodes = np.loadtxt(path / "nodes.csv", delimiter=",", skiprows=1, ndmin=2)
        norms = np.loadtxt(path / "norms.csv", delimiter=",", skiprows=1, ndmin=2)
        raw = np.loadtxt(path / "values.csv", delimiter=",", skiprows=1, ndmin=2)
        max_degree = norms.shape[0]
        values = np.zeros((max_degree, nodes.shape[0]))
        values[raw[:, 0].astype(int), raw[:, 1].astype(int)] = raw[:, 2]
        return ZonalTable(
            space=space,
            max_degree=max_degree,
            theta=nodes[:, 0].copy(),
            weights=nodes[:, 1].copy(),
            values=values,
            l2norms=norms[:, 1].copy(),
            lead_coeffs=norms[:, 2].copy(),
        )


def lead_coeffs(l2norms: np.ndarray) -> np.ndarray:
    """Main-term amplitudes c_n from the raw-row L2 norms (c_0 = 1)."""
    out = np.empty_like(l2norms)
    out[0] = 1.0
    n = np.arange(1, l2norms.shape[0])
    out[1:] = 1.0 / (l2norms[1:] * np.sqrt(math.pi * n))
    return out


def build_zonal_table(space: SpaceParams, N: int, nodes: int) -> ZonalTable:
    """Zonal rows of degree n < N on a quadrature grid of >= nodes points."""
    if N < 1:
        raise DomainError("N must be positive")
    if nodes < NODES_PER_DEGREE * N:
        raise PreconditionError(
            f"nodes={nodes} is below the resolution rule nodes >= {NODES_PER_DEGREE}*N={NODES_PER_DEGREE * N}"
        )
    theta, weights = theta_quadrature(nodes)
    x = np.cos(theta / space.s)
    values = np.empty((N, theta.shape[0]))
    for n, row in enumerate(_zonal_rows(space, x, N)):
        values[n] = row
    wdens = weights * density(space, theta)
    l2norms = np.sqrt((values * values) @ wdens)
    values /= l2norms[:, None]
    return ZonalTable(
        space=space,
        max_degree=N,
        theta=theta,
        weights=weights,
        values=values,
        l2norms=l2norms,
        lead_coeffs=lead_coeffs(l2norms),
    )


def zonal_l2norms(space: SpaceParams, N: int, nodes: int | None = None) -> np.ndarray:
    """L2 norms of the raw zonal rows of degree n < N, without storing them.

    Streaming variant of build_zonal_table for degree counts where the full
    (N x nodes) matrix would be too large to keep.
    """
    if N < 1:
        raise DomainError("N must be positive")
    if nodes is None:
        nodes = NODES_PER_DEGREE * N
    if nodes < NODES_PER_DEGREE * N:
        raise PreconditionError(
            f"nodes={nodes} is below the resolution rule nodes >= {NODES_PER_DEGREE}*N={NODES_PER_DEGREE * N}"
        )
    theta, weights = theta_quadrature(nodes)
    x = np.cos(theta / space.s)
    wdens = weights * density(space, theta)
    out = np.empty(N)
    for n, row in enumerate(_zonal_rows(space, x, N)):
        out[n] = (row * row) @ wdens
    return np.sqrt(out)


def zonal_matrix(space: SpaceParams, thetas: np.ndarray, l2norms: np.ndarray) -> np.ndarray:
    """Matrix of normalized zonal rows at arbitrary angles.

    Entry (n, j) is P_n(cos(thetas[j]/s)) / l2norms[n] for n < len(l2norms).
    """
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas < 0.0) or np.any(thetas > math.pi):
        raise DomainError("theta must lie in [0, pi]")
    N = l2norms.shape[0]
    x = np.cos(thetas / space.s)
    out = np.empty((N, thetas.shape[0]))
    for n, row in enumerate(_zonal_rows(space, x, N)):
        out[n] = row
    out /= l2norms[:, None]
    return out


def asymptotic_main_term(space: SpaceParams, n: int, theta, window_c: float = 1.0):
    """Oscillatory main term of P_n^{(sigma,tau)}(cos theta) for n >= 1.

    Valid on the window window_c/n <= theta <= pi - window_c/n; the caller is
    responsible for the theta/s substitution on s = 2 families.
    """
    if n < 1:
        raise DomainError("the main term requires degree n >= 1")
    arr = np.asarray(theta, dtype=float)
    lo = window_c / n
    if np.any(arr < lo) or np.any(arr > math.pi - lo):
        raise DomainError(
            f"theta outside the admissible window [{window_c}/n, pi - {window_c}/n]"
        )
    sg, tg = space.sigma_f, space.tau_f
    amp = (math.pi * n) ** -0.5 * np.sin(arr / 2.0) ** (-sg - 0.5) * np.cos(arr / 2.0) ** (-tg - 0.5)
    phase = (n + (sg + tg + 1.0) / 2.0) * arr - (sg + 0.5) * math.pi / 2.0
    out = amp * np.cos(phase)
    return out if arr.ndim else float(out)


def main_term_error_envelope(space: SpaceParams, n: int, theta) -> np.ndarray | float:
    """Size of one error unit in the main-term expansion: amplitude/(n*sin theta)."""
    arr = np.asarray(theta, dtype=float)
    sg, tg = space.sigma_f, space.tau_f
    amp = (math.pi * n) ** -0.5 * np.sin(arr / 2.0) ** (-sg - 0.5) * np.cos(arr / 2.0) ** (-tg - 0.5)
    out = amp / (n * np.sin(arr))
    return out if arr.ndim else float(out)
