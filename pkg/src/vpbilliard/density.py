"""Source densities: the smooth compactly supported bump and grid-sampled fields."""

from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline


def bump_profile(u):
    """exp(-1/(1-u^2)) for |u| < 1, zero outside; smooth with flat cutoff."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


@lru_cache(maxsize=1)
def _bump_radial_moment():
    """I1 = int_0^1 u exp(-1/(1-u^2)) du, computed once by adaptive quadrature."""
    val, err = quad(lambda u: u * np.exp(-1.0 / (1.0 - u * u)), 0.0, 1.0,
                    epsabs=1e-15, epsrel=1e-14)
    return val


def bump_norm_const(radius, mass=1.0):
    """Normalization making the bump of given radius integrate to ``mass``."""
    return mass / (2.0 * np.pi * radius**2 * _bump_radial_moment())


def bump_value(x, center, radius, norm_const):
    """Bump density value at x; exactly zero at and beyond ``radius`` from center."""
    x = np.asarray(x, dtype=float)
    s = np.linalg.norm(x - np.asarray(center, dtype=float), axis=-1)
    return norm_const * bump_profile(s / radius)


@lru_cache(maxsize=8)
def _bump_mass_spline(knots=4001):
    """Cubic-spline antiderivative of u*exp(-1/(1-u^2)) on [0, 1]."""
    u = np.linspace(0.0, 1.0, knots)
    return CubicSpline(u, u * bump_profile(u)).antiderivative()


class BumpDensity:
    """Radial bump C exp(-1/(1-(|x-x0|/R)^2)) supported on |x-x0| < R.

    The constant C is calibrated so the total mass equals ``mass`` unless an
    explicit ``norm_const`` is supplied.
    """

    source = "bump"

    def __init__(self, center=(0.5, 0.0), radius=0.5, mass=1.0, norm_const=None):
        if radius <= 0:
            raise ValueError("bump radius must be positive")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        if norm_const is None:
            norm_const = bump_norm_const(radius, mass)
        self.norm_const = float(norm_const)
        self.normalization = 2.0 * np.pi * self.radius**2 * _bump_radial_moment() * self.norm_const

    def __call__(self, x):
        return bump_value(x, self.center, self.radius, self.norm_const)

    def radial_value(self, s):
        return self.norm_const * bump_profile(np.asarray(s, dtype=float) / self.radius)

    def enclosed_mass(self, s):
        """Mass within distance s of the center (vectorized)."""
        s = np.asarray(s, dtype=float)
        t = np.clip(s / self.radius, 0.0, 1.0)
        J = _bump_mass_spline()
        return 2.0 * np.pi * self.radius**2 * self.norm_const * J(t)

    def sup_norm(self):
        return self.norm_const * np.exp(-1.0)

    def lp_norm(self, p):
        val = quad(lambda u: u * bump_profile(u) ** p, 0.0, 1.0,
                   epsabs=1e-14, epsrel=1e-12)[0]
        return (2.0 * np.pi * self.radius**2 * self.norm_const**p * val) ** (1.0 / p)


class GridDensity:
    """Density sampled on a polar grid (either prescribed or particle-deposited)."""

    def __init__(self, grid, values, source="grid"):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n_nodes,):
            raise ValueError("values must be a flat per-node array")
        self.grid = grid
        self.values = values
        self.source = source
        self.normalization = float(np.dot(grid.areas, values))

    @classmethod
    def from_function(cls, grid, func):
        return cls(grid, np.asarray(func(grid.node_xy), dtype=float), source="grid")

    def __call__(self, x):
        return self.grid.interpolate(self.values, x)

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def lp_norm(self, p):
        return float(np.dot(self.grid.areas, np.abs(self.values) ** p) ** (1.0 / p))


def density_mass(rho, domain, n_r=512, n_theta=512):
    """Quadrature of a pointwise density over the unit disk (midpoint in polar cells)."""
    if domain.kind != "unit_disk":
        raise NotImplementedError("mass quadrature is implemented on the unit disk")
    r_edges = np.linspace(0.0, 1.0, n_r + 1)
    rm = 0.5 * (r_edges[:-1] + r_edges[1:])
    tm = (np.arange(n_theta) + 0.5) * (2.0 * np.pi / n_theta)
    Rm, Tm = np.meshgrid(rm, tm, indexing="ij")
    pts = np.stack([Rm * np.cos(Tm), Rm * np.sin(Tm)], axis=-1)
    vals = rho(pts.reshape(-1, 2)).reshape(Rm.shape)
    w = (r_edges[1:] ** 2 - r_edges[:-1] ** 2)[:, None] * (np.pi / n_theta)
    return float(np.sum(vals * w))
