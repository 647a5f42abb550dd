"""Radial spectral data: spherical Fourier series, Sobolev norms, dispersive
propagators, dyadic blocks and the phase-comparison machinery.

A series carries finitely many coefficients a_n against the L2-normalized
zonal rows, so the plain l2 norm of the coefficients is the L2 norm of the
function and the propagator for a phase psi multiplies a_n by
exp(-i*t*psi(lam_n)).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, PreconditionError
from .geometry import SpaceParams, eigenvalue_sq
from .jacobi import ZonalTable, zonal_matrix

__all__ = [
    "PhaseFunction",
    "schrodinger",
    "fractional",
    "boussinesq",
    "beam",
    "custom_phase",
    "parse_phase",
    "SphericalSeries",
    "sobolev_norm",
    "propagate",
    "evaluate",
    "evaluate_at",
    "dyadic_decompose",
    "sobolev_compare_check",
    "comparable_oscillation_bound",
    "transfer_residual",
    "time_grid",
]

PHASE_CATALOG = ("schrodinger", "fractional", "boussinesq", "beam")


@dataclass(frozen=True)
class PhaseFunction:
    """Real-valued dispersive symbol psi on [0, infinity).

    Catalog: schrodinger r^2, fractional r^a (a > 1), boussinesq
    r*sqrt(1+r^2), beam sqrt(1+r^4).  Custom phases interpolate a sampled
    table piecewise-linearly and refuse to extrapolate.
    """

    kind: str
    a: float = 0.0
    grid: np.ndarray | None = field(default=None, repr=False)
    table: np.ndarray | None = field(default=None, repr=False)

    def __call__(self, r) -> np.ndarray | float:
        arr = np.asarray(r, dtype=float)
        if np.any(arr < 0.0):
            raise DomainError("the phase is defined on r >= 0")
        if self.kind == "schrodinger":
            out = arr * arr
        elif self.kind == "fractional":
            out = arr**self.a
        elif self.kind == "boussinesq":
            out = arr * np.sqrt(1.0 + arr * arr)
        elif self.kind == "beam":
            out = np.sqrt(1.0 + arr**4)
        elif self.kind == "custom":
            if np.any(arr < self.grid[0]) or np.any(arr > self.grid[-1]):
                raise DomainError("custom phase queried outside its sampled range")
            out = np.interp(arr, self.grid, self.table)
        else:
            raise DomainError(f"unknown phase kind {self.kind!r}")
        return out if arr.ndim else float(out)

    @property
    def label(self) -> str:
        if self.kind == "fractional":
            return f"fractional:{self.a:g}"
        return self.kind


def schrodinger() -> PhaseFunction:
    return PhaseFunction("schrodinger")


def fractional(a: float) -> PhaseFunction:
    if not a > 1.0:
        raise DomainError("fractional phase requires exponent a > 1")
    return PhaseFunction("fractional", a=a)


def boussinesq() -> PhaseFunction:
    return PhaseFunction("boussinesq")


def beam() -> PhaseFunction:
    return PhaseFunction("beam")


def custom_phase(grid, values) -> PhaseFunction:
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.ndim != 1 or grid.shape != values.shape or grid.shape[0] < 2:
        raise DomainError("custom phase needs matching 1-d sample arrays of length >= 2")
    if np.any(np.diff(grid) <= 0.0) or grid[0] < 0.0:
        raise DomainError("custom phase grid must be strictly increasing and non-negative")
    return PhaseFunction("custom", grid=grid, table=values)


def parse_phase(text: str) -> PhaseFunction:
    """Phase from a CLI string: schrodinger, fractional:a, boussinesq, beam, custom:path."""
    name, _, arg = text.partition(":")
    if name == "schrodinger":
        return schrodinger()
    if name == "boussinesq":
        return boussinesq()
    if name == "beam":
        return beam()
    if name == "fractional":
        try:
            return fractional(float(arg))
        except ValueError as exc:
            raise DomainError(f"bad fractional exponent {arg!r}") from exc
    if name == "custom":
        data = np.loadtxt(arg, delimiter=",", ndmin=2)
        return custom_phase(data[:, 0], data[:, 1])
    raise DomainError(f"unknown phase {text!r}; catalog: {', '.join(PHASE_CATALOG)}, custom:path")


@dataclass(frozen=True)
class SphericalSeries:
    """Finite spherical Fourier series sum_n a_n * Ztilde_n on one space."""

    space: SpaceParams
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=np.complex128))

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    def __add__(self, other: "SphericalSeries") -> "SphericalSeries":
        self._check_same_space(other)
        n = max(len(self), len(other))
        out = np.zeros(n, dtype=np.complex128)
        out[: len(self)] += self.coeffs
        out[: len(other)] += other.coeffs
        return SphericalSeries(self.space, out)

    def __sub__(self, other: "SphericalSeries") -> "SphericalSeries":
        return self + SphericalSeries(other.space, -other.coeffs)

    def _check_same_space(self, other: "SphericalSeries") -> None:
        if self.space != other.space:
            raise PreconditionError("series live on different spaces")

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "re", "im"])
            for n, c in enumerate(self.coeffs):
                w.writerow([n, repr(float(c.real)), repr(float(c.imag))])

    @staticmethod
    def from_csv(space: SpaceParams, path: str | Path) -> "SphericalSeries":
        raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        coeffs = np.zeros(int(raw[:, 0].max()) + 1, dtype=np.complex128)
        coeffs[raw[:, 0].astype(int)] = raw[:, 1] + 1j * raw[:, 2]
        return SphericalSeries(space, coeffs)


def _lambdas(f: SphericalSeries) -> np.ndarray:
    return np.sqrt(eigenvalue_sq(f.space, np.arange(len(f))))


def sobolev_norm(f: SphericalSeries, alpha: float) -> float:
    """Weighted l2 norm (sum (1 + lam2_n)^alpha |a_n|^2)^(1/2)."""
    if alpha < 0.0:
        raise DomainError("alpha must be non-negative")
    lam2 = eigenvalue_sq(f.space, np.arange(len(f)))
    return float(np.sqrt(((1.0 + lam2) ** alpha * np.abs(f.coeffs) ** 2).sum()))


def propagate(f: SphericalSeries, psi: PhaseFunction, t: float) -> SphericalSeries:
    """Apply the unitary multiplier a_n -> exp(-i*t*psi(lam_n)) * a_n."""
    return SphericalSeries(f.space, f.coeffs * np.exp(-1j * t * psi(_lambdas(f))))


def evaluate(f: SphericalSeries, table: ZonalTable, theta_indices=None) -> np.ndarray:
    """Pointwise values sum_n a_n * Ztilde_n(theta_i) on table nodes."""
    if f.space != table.space:
        raise PreconditionError("series and table live on different spaces")
    if len(f) > table.max_degree:
        raise PreconditionError(
            f"series degree {len(f)} exceeds table degree {table.max_degree}"
        )
    rows = table.values[: len(f)]
    if theta_indices is not None:
        rows = rows[:, theta_indices]
    return f.coeffs @ rows


def evaluate_at(f: SphericalSeries, thetas, l2norms: np.ndarray) -> np.ndarray:
    """Pointwise values at arbitrary angles, normalizing rows by l2norms."""
    if len(f) > l2norms.shape[0]:
        raise PreconditionError("series degree exceeds the supplied norm array")
    mat = zonal_matrix(f.space, np.asarray(thetas, dtype=float), l2norms[: len(f)])
    return f.coeffs @ mat


def dyadic_decompose(f: SphericalSeries) -> list[SphericalSeries]:
    """Coefficient-disjoint dyadic blocks whose sum is f.

    Block m >= 1 covers degrees [2^m, 2^(m+1)); the head block m = 0 covers
    {0, 1} so that degree zero is included.  Blocks beyond the support are
    dropped.
    """
    blocks: list[SphericalSeries] = []
    n = len(f)
    m = 0
    while True:
        lo = 0 if m == 0 else 2**m
        hi = 2 ** (m + 1)
        if lo >= n:
            break
        out = np.zeros(n, dtype=np.complex128)
        out[lo : min(hi, n)] = f.coeffs[lo : min(hi, n)]
        blocks.append(SphericalSeries(f.space, out))
        m += 1
    if not blocks:
        blocks.append(SphericalSeries(f.space, np.zeros(n, dtype=np.complex128)))
    return blocks


def sobolev_compare_check(
    f: SphericalSeries, beta1: float, beta2: float, n_min: int | None = None
) -> float:
    """Ratio ||f||_{H^beta1} * n_min^(beta2-beta1) / ||f||_{H^beta2}.

    For series supported on degrees >= n_min the ratio is bounded by a
    constant of the space; with the eigenvalue growth lam2_n >= n^2 it is in
    fact <= 1.
    """
    if not 0.0 <= beta1 <= beta2:
        raise DomainError("need 0 <= beta1 <= beta2")
    support = np.nonzero(f.coeffs)[0]
    if support.shape[0] == 0:
        raise PreconditionError("zero series has no comparison ratio")
    first = int(support[0])
    if n_min is None:
        n_min = first
    if first < n_min or n_min < 1:
        raise PreconditionError(f"series must be supported on degrees >= n_min >= 1 (first={first})")
    return sobolev_norm(f, beta1) * n_min ** (beta2 - beta1) / sobolev_norm(f, beta2)


# Stable residuals psi(r) - r^2 of the quadratic-main-term phases.  Direct
# subtraction of psi values loses ~ulp(r^2) absolute accuracy at large r,
# which swamps the O(1) gap; these forms carry no cancellation.
_QUADRATIC_RESIDUALS = {
    "schrodinger": lambda r: np.zeros_like(r),
    "boussinesq": lambda r: r / (np.sqrt(1.0 + r * r) + r),
    "beam": lambda r: 1.0 / (np.sqrt(1.0 + r**4) + r * r),
}


def phase_difference(psi1: PhaseFunction, psi2: PhaseFunction, r) -> np.ndarray:
    """psi1(r) - psi2(r), through stable residuals when both phases share the
    quadratic main term."""
    arr = np.asarray(r, dtype=float)
    if psi1.kind in _QUADRATIC_RESIDUALS and psi2.kind in _QUADRATIC_RESIDUALS:
        return _QUADRATIC_RESIDUALS[psi1.kind](arr) - _QUADRATIC_RESIDUALS[psi2.kind](arr)
    return np.asarray(psi1(arr)) - np.asarray(psi2(arr))


def comparable_oscillation_bound(
    psi1: PhaseFunction, psi2: PhaseFunction, R: float, r_max: float, samples: int = 4096
) -> float:
    """Sup over sampled r in (R, r_max] of |psi1(r) - psi2(r)|."""
    if not 0.0 <= R < r_max:
        raise DomainError("need 0 <= R < r_max")
    if samples < 2:
        raise DomainError("need at least two samples")
    if R > 0:
        r = np.geomspace(R, r_max, samples + 1)[1:]
    else:
        r = np.linspace(R, r_max, samples + 1)[1:]
    return float(np.max(np.abs(phase_difference(psi1, psi2, r))))


def transfer_residual(
    f_m: SphericalSeries,
    psi1: PhaseFunction,
    psi2: PhaseFunction,
    table: ZonalTable,
    tgrid,
    theta_indices=None,
    t_chunk: int = 1024,
) -> float:
    """Max over the t-grid and theta nodes of |psi1-flow minus psi2-flow| of f_m.

    The input need not be a dyadic block; any series is accepted.
    """
    if f_m.space != table.space:
        raise PreconditionError("series and table live on different spaces")
    if len(f_m) > table.max_degree:
        raise PreconditionError("series degree exceeds table degree")
    support = np.nonzero(f_m.coeffs)[0]
    if support.shape[0] == 0:
        return 0.0
    rows = table.values[support]
    if theta_indices is not None:
        rows = rows[:, theta_indices]
    weighted = f_m.coeffs[support, None] * rows
    lam = np.sqrt(eigenvalue_sq(f_m.space, support))
    ph1, ph2 = np.asarray(psi1(lam)), np.asarray(psi2(lam))
    tgrid = np.asarray(tgrid, dtype=float)
    best = 0.0
    for k in range(0, tgrid.shape[0], t_chunk):
        ts = tgrid[k : k + t_chunk, None]
        mult = np.exp(-1j * ts * ph1[None, :]) - np.exp(-1j * ts * ph2[None, :])
        best = max(best, float(np.abs(mult @ weighted).max()))
    return best


def time_grid(space: SpaceParams, N: int, size: int | None = None) -> np.ndarray:
    """Uniform grid on [0, 2*pi); default size max(1024, 8*lam2_{N-1}).

    The fastest multiplier of a degree-N series oscillates at rate about
    lam2_{N-1}, so the default resolves it with 8 samples per period.
    """
    if size is None:
        size = max(1024, int(math.ceil(8.0 * eigenvalue_sq(space, N - 1))))
    if size < 1:
        raise DomainError("grid size must be positive")
    return np.arange(size) * (2.0 * math.pi / size)
