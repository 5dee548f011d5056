"""Bounded uniformly convex domains described by a level set.

A domain is the sublevel set {xi < 0} of a scalar function whose Hessian is
uniformly positive definite.  All queries are pure and reentrant, so a domain
value can be shared freely across workers.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.stats import qmc

from .errors import NoConvergence, NotOnBoundary, NotUniformlyConvex

BOUNDARY_TOL = 1e-12
PROJECTION_MAX_STEPS = 50
_CONVEXITY_SAMPLES = 10_000


@dataclass(frozen=True)
class ConvexDomain:
    """Uniformly convex domain {xi < 0} with level-set derivative access.

    ``xi``, ``grad`` and ``hess`` accept arrays of points with shape (..., d)
    and return values of shape (...,), (..., d) and (..., d, d).
    """

    kind: str
    dimension: int
    xi: Callable[[np.ndarray], np.ndarray]
    grad: Callable[[np.ndarray], np.ndarray]
    hess: Callable[[np.ndarray], np.ndarray]
    bounding_box: Tuple[Tuple[float, float], ...]
    convexity_constant: float
    gradient_floor: float
    collar_width: float = 0.1
    hess_norm_bound: float = 1.0       # sup operator norm of the Hessian
    hess_lipschitz: float = 0.0        # Lipschitz constant of the Hessian
    params: dict = field(default_factory=dict)

    # -- queries ---------------------------------------------------------

    def level_set(self, x):
        """Return (xi, grad, hess) at one point or an array of points."""
        x = np.asarray(x, dtype=float)
        return self.xi(x), self.grad(x), self.hess(x)

    def outward_normal(self, x):
        """Unit outward normal at a boundary point; xi increases along it."""
        x = np.asarray(x, dtype=float)
        val = self.xi(x)
        if np.any(np.abs(val) > BOUNDARY_TOL):
            worst = float(np.max(np.abs(val)))
            raise NotOnBoundary(f"|xi(x)| = {worst:.3e} exceeds {BOUNDARY_TOL:.0e}")
        g = self.grad(x)
        return g / np.linalg.norm(g, axis=-1, keepdims=True)

    def project_to_boundary(self, x):
        """Nearest boundary point along the gradient direction (Newton on xi)."""
        p = np.array(x, dtype=float, copy=True)
        scalar = p.ndim == 1
        pts = np.atleast_2d(p)
        for _ in range(PROJECTION_MAX_STEPS):
            val = np.atleast_1d(self.xi(pts))
            if np.all(np.abs(val) <= BOUNDARY_TOL):
                return pts[0] if scalar else pts
            g = np.atleast_2d(self.grad(pts))
            g2 = np.einsum("...k,...k->...", g, g)
            if np.any(g2 < 1e-30):
                raise NoConvergence("gradient vanished during boundary projection")
            pts = pts - (val / g2)[..., None] * g
        raise NoConvergence(
            f"boundary projection did not reach |xi| <= {BOUNDARY_TOL:.0e} "
            f"in {PROJECTION_MAX_STEPS} steps"
        )

    def boundary_distance(self, x):
        """First-order distance to the boundary, -xi/|grad xi| (exact enough in the collar)."""
        x = np.asarray(x, dtype=float)
        g = self.grad(x)
        gn = np.linalg.norm(g, axis=-1)
        return -self.xi(x) / np.maximum(gn, 1e-300)

    def in_collar(self, x):
        return self.boundary_distance(x) < self.collar_width

    def boundary_points(self, n):
        """n points on the boundary (uniform parameter for built-ins, projected otherwise)."""
        t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        if self.kind == "unit_disk":
            return np.stack([np.cos(t), np.sin(t)], axis=-1)
        if self.kind == "ellipse":
            a, b = self.params["a"], self.params["b"]
            return np.stack([a * np.cos(t), b * np.sin(t)], axis=-1)
        # custom 2-d: project a surrounding circle of interior-leaning points
        if self.dimension != 2:
            raise NotImplementedError("boundary sampling is built in for d = 2 only")
        (x0, x1), (y0, y1) = self.bounding_box[:2]
        c = np.array([0.5 * (x0 + x1), 0.5 * (y0 + y1)])
        r = 0.25 * min(x1 - x0, y1 - y0)
        ring = c + r * np.stack([np.cos(t), np.sin(t)], axis=-1)
        return self.project_to_boundary(ring)


def _sample_closure(domain_xi, bbox, n, seed=0):
    """Quasi-random points of the bounding box lying in the closure {xi <= 0}."""
    d = len(bbox)
    lo = np.array([b[0] for b in bbox])
    hi = np.array([b[1] for b in bbox])
    eng = qmc.Halton(d=d, scramble=True, seed=seed)
    pts = lo + eng.random(4 * n) * (hi - lo)
    keep = np.atleast_1d(domain_xi(pts)) <= 0.0
    return pts[keep][:n]


def sampled_convexity_constant(xi, hess, bbox, n=_CONVEXITY_SAMPLES, seed=0):
    """Smallest Hessian eigenvalue over a quasi-random sample of the closure."""
    pts = _sample_closure(xi, bbox, n, seed=seed)
    if len(pts) == 0:
        raise NotUniformlyConvex("no closure points found in the bounding box")
    eigs = np.linalg.eigvalsh(np.atleast_3d(hess(pts)).reshape(len(pts), len(bbox), len(bbox)))
    c = float(np.min(eigs))
    if c <= 0.0:
        raise NotUniformlyConvex(f"minimum sampled Hessian eigenvalue {c:.3e} <= 0")
    return c


def _sampled_hess_stats(xi, hess, bbox, seed=1):
    pts = _sample_closure(xi, bbox, 2000, seed=seed)
    H = hess(pts)
    eigs = np.linalg.eigvalsh(H)
    norm_bound = float(np.max(np.abs(eigs)))
    # Hessian Lipschitz constant by finite differences over random pairs
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(pts), size=(min(1000, len(pts)), 2))
    a, b = pts[idx[:, 0]], pts[idx[:, 1]]
    dist = np.linalg.norm(a - b, axis=-1)
    ok = dist > 1e-8
    dH = np.linalg.norm(hess(a[ok]) - hess(b[ok]), axis=(-2, -1))
    lip = float(np.max(dH / dist[ok])) if np.any(ok) else 0.0
    return norm_bound, lip


def unit_disk(collar_width=0.1):
    """Unit disk via xi(x) = (|x|^2 - 1)/2; Hessian is the identity."""

    def xi(x):
        x = np.asarray(x, dtype=float)
        return 0.5 * (np.einsum("...k,...k->...", x, x) - 1.0)

    def grad(x):
        return np.array(x, dtype=float, copy=True)

    def hess(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.eye(2), x.shape + (2,)).copy()

    return ConvexDomain(
        kind="unit_disk",
        dimension=2,
        xi=xi,
        grad=grad,
        hess=hess,
        bounding_box=((-1.0, 1.0), (-1.0, 1.0)),
        convexity_constant=1.0,
        gradient_floor=1.0 - collar_width,
        collar_width=collar_width,
        hess_norm_bound=1.0,
        hess_lipschitz=0.0,
    )


def ellipse(a, b, collar_width=0.1):
    """Axis-aligned ellipse via xi(x) = (x^2/a^2 + y^2/b^2 - 1)/2."""
    if a <= 0 or b <= 0:
        raise ValueError("ellipse semi-axes must be positive")
    inv = np.array([1.0 / a**2, 1.0 / b**2])

    def xi(x):
        x = np.asarray(x, dtype=float)
        return 0.5 * (np.einsum("...k,k,...k->...", x, inv, x) - 1.0)

    def grad(x):
        return np.asarray(x, dtype=float) * inv

    def hess(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.diag(inv), x.shape + (2,)).copy()

    cvx = float(np.min(inv))
    # |grad xi| on the collar is bounded below by the boundary minimum shrunk
    # proportionally; the boundary minimum is min(a,b)/max(a,b)^2.
    floor = (min(a, b) / max(a, b) ** 2) * (1.0 - collar_width / min(a, b))
    return ConvexDomain(
        kind="ellipse",
        dimension=2,
        xi=xi,
        grad=grad,
        hess=hess,
        bounding_box=((-a, a), (-b, b)),
        convexity_constant=cvx,
        gradient_floor=floor,
        collar_width=collar_width,
        hess_norm_bound=float(np.max(inv)),
        hess_lipschitz=0.0,
        params={"a": float(a), "b": float(b)},
    )


def custom_domain(
    xi,
    grad,
    hess,
    bounding_box,
    dimension=2,
    collar_width=0.1,
    seed=0,
    hess_lipschitz: Optional[float] = None,
):
    """Domain from user callbacks (vectorized over trailing point axes).

    The convexity constant is estimated from a quasi-random sample of the
    closure and the call fails with NotUniformlyConvex when the sampled
    minimum eigenvalue is not positive.  Level-set smoothness (C^{2,1}) cannot
    be verified programmatically and remains the caller's obligation.
    """
    bbox = tuple((float(lo), float(hi)) for lo, hi in bounding_box)
    cvx = sampled_convexity_constant(xi, hess, bbox, seed=seed)
    norm_bound, lip = _sampled_hess_stats(xi, hess, bbox, seed=seed + 1)
    if hess_lipschitz is not None:
        lip = float(hess_lipschitz)
    pts = _sample_closure(xi, bbox, 4000, seed=seed + 2)
    g = np.linalg.norm(grad(pts), axis=-1)
    dist = -np.atleast_1d(xi(pts)) / np.maximum(g, 1e-300)
    collar = dist < collar_width
    floor = float(np.min(g[collar])) if np.any(collar) else float(np.min(g))
    return ConvexDomain(
        kind="custom",
        dimension=dimension,
        xi=xi,
        grad=grad,
        hess=hess,
        bounding_box=bbox,
        convexity_constant=cvx,
        gradient_floor=floor,
        collar_width=collar_width,
        hess_norm_bound=norm_bound,
        hess_lipschitz=lip,
    )
