"""Catalog of compact rank-one symmetric spaces and rank-2 eigenvalue bounds.

Each space is determined by its family and real dimension d.  From those two
data everything else follows: the dimension M1 of the antipodal manifold, the
complementary integer M2 with M1 + M2 + 1 = d, the Jacobi parameters
(sigma, tau), the metric scaling s and the radial surface-measure density

    A(theta) = C * sin(theta/2)**M1 * sin(theta)**M2,   theta in [0, pi],

normalized so that the total measure is one.  The Laplace-Beltrami
eigenvalues on the degree-n radial eigenspace are

    lam2(n) = s*n * (s*n + sigma + tau + 1).

The rank-2 helpers bound eigenvalues lam2(mu) = <mu,mu> + 2<mu,rho> from
below through the Gram matrix of the two simple restricted roots.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = [
    "Family",
    "SpaceParams",
    "RootData2",
    "make_space",
    "density",
    "eigenvalue_sq",
    "rank2_norm_sq",
    "rank2_eigen_lower",
    "spectral_tail_sum",
]


class Family(str, Enum):
    """The five families of compact rank-one symmetric spaces."""

    SPHERE = "Sphere"
    REAL_PROJECTIVE = "RealProjective"
    COMPLEX_PROJECTIVE = "ComplexProjective"
    QUATERNIONIC_PROJECTIVE = "QuaternionicProjective"
    CAYLEY_PLANE = "CayleyPlane"


@dataclass(frozen=True)
class SpaceParams:
    """Immutable parameter bundle for one rank-one space."""

    family: Family
    d: int
    M1: int
    M2: int
    sigma: Fraction
    tau: Fraction
    s: int
    ell: Fraction  # sigma + tau + 1
    norm_const: float

    @property
    def sigma_f(self) -> float:
        return float(self.sigma)

    @property
    def tau_f(self) -> float:
        return float(self.tau)

    @property
    def ell_f(self) -> float:
        return float(self.ell)

    @property
    def label(self) -> str:
        return f"{self.family.value}-d{self.d}"

    def to_json_dict(self) -> dict:
        return {
            "family": self.family.value,
            "d": self.d,
            "M1": self.M1,
            "M2": self.M2,
            "sigma": [self.sigma.numerator, self.sigma.denominator],
            "tau": [self.tau.numerator, self.tau.denominator],
            "s": self.s,
            "normConst": self.norm_const,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json_dict(obj: dict) -> "SpaceParams":
        space = make_space(Family(obj["family"]), int(obj["d"]))
        # Sanity: the serialized derived fields must match the rebuilt ones.
        if (obj["M1"], obj["M2"], obj["s"]) != (space.M1, space.M2, space.s):
            raise DomainError("serialized space parameters are inconsistent")
        return space


def _family_tables(family: Family, d: int) -> tuple[int, int, Fraction, Fraction, int]:
    """(M1, M2, sigma, tau, s) for an admissible (family, d) pair."""
    half = Fraction(d - 2, 2)
    if family is Family.SPHERE:
        if d < 1:
            raise DomainError("Sphere requires dimension d >= 1")
        return 0, d - 1, half, half, 1
    if family is Family.REAL_PROJECTIVE:
        if d < 2:
            raise DomainError("RealProjective requires dimension d >= 2")
        return d - 1, 0, half, half, 2
    if family is Family.COMPLEX_PROJECTIVE:
        if d < 4 or d % 2 != 0:
            raise DomainError("ComplexProjective requires even dimension d >= 4")
        return d - 2, 1, half, Fraction(0), 1
    if family is Family.QUATERNIONIC_PROJECTIVE:
        if d < 8 or d % 4 != 0:
            raise DomainError("QuaternionicProjective requires dimension d in {8, 12, 16, ...}")
        return d - 4, 3, half, Fraction(1), 1
    if family is Family.CAYLEY_PLANE:
        if d != 16:
            raise DomainError("CayleyPlane exists only in dimension d = 16")
        return 8, 7, Fraction(7), Fraction(3), 1
    raise DomainError(f"unknown family {family!r}")


def _density_raw(theta: np.ndarray, M1: int, M2: int) -> np.ndarray:
    return np.sin(theta / 2.0) ** M1 * np.sin(theta) ** M2


def _norm_const(M1: int, M2: int) -> float:
    """Constant C with integral_0^pi C*sin(theta/2)^M1*sin(theta)^M2 dtheta = 1.

    Composite Simpson rule; the node count is doubled until the integral
    changes by less than 1e-12 in relative terms.
    """
    n = 64
    prev = None
    for _ in range(24):
        theta = np.linspace(0.0, math.pi, n + 1)
        vals = _density_raw(theta, M1, M2)
        h = math.pi / n
        integral = (h / 3.0) * (vals[0] + vals[-1] + 4.0 * vals[1::2].sum() + 2.0 * vals[2:-1:2].sum())
        if prev is not None and abs(integral - prev) <= 1e-12 * abs(integral):
            return 1.0 / integral
        prev = integral
        n *= 2
    raise RuntimeError("density normalization did not converge")


def make_space(family: Family | str, d: int) -> SpaceParams:
    """Build the parameter bundle for an admissible (family, d) pair."""
    family = Family(family)
    if d != int(d):
        raise DomainError("dimension d must be an integer")
    d = int(d)
    M1, M2, sigma, tau, s = _family_tables(family, d)
    if M1 + M2 + 1 != d:
        raise RuntimeError("internal table error: M1 + M2 + 1 != d")
    return SpaceParams(
        family=family,
        d=d,
        M1=M1,
        M2=M2,
        sigma=sigma,
        tau=tau,
        s=s,
        ell=sigma + tau + 1,
        norm_const=_norm_const(M1, M2),
    )


def density(space: SpaceParams, theta) -> np.ndarray | float:
    """Radial surface-measure density at geodesic distance theta in [0, pi]."""
    arr = np.asarray(theta, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > math.pi):
        raise DomainError("theta must lie in [0, pi]")
    out = space.norm_const * _density_raw(arr, space.M1, space.M2)
    return out if arr.ndim else float(out)


def eigenvalue_sq(space: SpaceParams, n) -> np.ndarray | float:
    """Square of the degree-n eigenvalue: s*n*(s*n + sigma + tau + 1)."""
    arr = np.asarray(n)
    if np.any(arr < 0):
        raise DomainError("degree n must be non-negative")
    sn = space.s * arr.astype(float)
    out = sn * (sn + space.ell_f)
    return out if arr.ndim else float(out)


@dataclass(frozen=True)
class RootData2:
    """Gram data for a rank-2 restricted root basis.

    g11, g22, g12 are the pairwise inner products of the two simple roots
    (g12 <= 0); rho1, rho2 are the precomputed pairings of each simple root
    with the half-sum of positive roots, so that for mu = n1*b1 + n2*b2 the
    linear part of the eigenvalue is 2*(n1*rho1 + n2*rho2).
    """

    g11: float
    g22: float
    g12: float
    rho1: float = 0.0
    rho2: float = 0.0

    def __post_init__(self) -> None:
        if self.g11 <= 0.0 or self.g22 <= 0.0:
            raise DomainError("diagonal Gram entries must be positive")
        if self.g12 > 0.0:
            raise DomainError("the simple-root pairing g12 must be <= 0")
        if self.det() <= 0.0:
            raise DomainError("Gram matrix must be positive definite (g11*g22 - g12^2 > 0)")
        if self.rho1 < 0.0 or self.rho2 < 0.0:
            raise DomainError("rho pairings must be non-negative")

    def det(self) -> float:
        return self.g11 * self.g22 - self.g12 * self.g12


def rank2_norm_sq(root: RootData2, xi1, xi2) -> np.ndarray | float:
    """<v, v> reconstructed from the two normalized pairings xi_j = <v,b_j>/<b_j,b_j>.

    Closed form of the 2x2 basis-solve: with D = g11*g22 - g12^2,

        <v,v> = (xi1^2*g11^2*g22 + xi2^2*g22^2*g11 - 2*xi1*xi2*g11*g12*g22) / D.
    """
    x1 = np.asarray(xi1, dtype=float)
    x2 = np.asarray(xi2, dtype=float)
    g11, g22, g12 = root.g11, root.g22, root.g12
    out = (
        x1 * x1 * g11 * g11 * g22
        + x2 * x2 * g22 * g22 * g11
        - 2.0 * x1 * x2 * g11 * g12 * g22
    ) / root.det()
    return out if (x1.ndim or x2.ndim) else float(out)


def rank2_eigen_lower(root: RootData2, n1, n2) -> np.ndarray | float:
    """Two-term lower bound n1^2*g11^2*g22/D + n2^2*g22^2*g11/D.

    Dropping the cross term of rank2_norm_sq is valid because g12 <= 0, so
    the bound never exceeds the quadratic form at non-negative (n1, n2).
    """
    x1 = np.asarray(n1, dtype=float)
    x2 = np.asarray(n2, dtype=float)
    if np.any(x1 < 0) or np.any(x2 < 0):
        raise DomainError("lattice coefficients must be non-negative")
    det = root.det()
    out = x1 * x1 * root.g11 * root.g11 * root.g22 / det + x2 * x2 * root.g22 * root.g22 * root.g11 / det
    return out if (x1.ndim or x2.ndim) else float(out)


def spectral_tail_sum(source: SpaceParams | RootData2, alpha: float, cutoff: int) -> float:
    """Partial sum of (1 + lam2)^(-alpha) over the truncated spectrum.

    Rank one (SpaceParams source): degrees n = 0..cutoff.
    Rank two (RootData2 source): lattice points (n1, n2) in [0, cutoff]^2 with
    lam2 = <mu,mu> + 2*(n1*rho1 + n2*rho2).
    """
    if alpha <= 0.0:
        raise DomainError("alpha must be positive")
    if cutoff < 0:
        raise DomainError("cutoff must be non-negative")
    if isinstance(source, SpaceParams):
        lam2 = eigenvalue_sq(source, np.arange(cutoff + 1))
        return float(((1.0 + lam2) ** (-alpha)).sum())
    if isinstance(source, RootData2):
        n = np.arange(cutoff + 1, dtype=float)
        n1, n2 = np.meshgrid(n, n, indexing="ij")
        lam2 = rank2_norm_sq(source, n1, n2) + 2.0 * (n1 * source.rho1 + n2 * source.rho2)
        return float(((1.0 + lam2) ** (-alpha)).sum())
    raise DomainError("source must be SpaceParams (rank 1) or RootData2 (rank 2)")
