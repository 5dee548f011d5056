"""Polar grid on the unit disk: conservative Laplacian, quadrature, deposition.

Nodes are the pole plus ``n_r`` rings of ``n_theta`` equally spaced angles; the
outermost ring lies on the boundary circle.  The Laplacian is assembled from
finite-volume edge fluxes, so the quadratic gradient energy built from the same
edge list is exactly the potential of the discrete operator (the nonlinear
solvers rely on this consistency).  The pole cell equation reduces to the
classic average-over-first-ring treatment.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp


@dataclass
class PolarGrid:
    n_r: int
    n_theta: int
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.n_r < 3 or self.n_theta < 4:
            raise ValueError("grid needs n_r >= 3 and n_theta >= 4")
        nr, nt = self.n_r, self.n_theta
        self.dr = 1.0 / nr
        self.dtheta = 2.0 * np.pi / nt
        self.r = self.dr * np.arange(nr + 1)          # ring radii, r[0] = 0 pole
        self.theta = self.dtheta * np.arange(nt)
        self.n_nodes = 1 + nr * nt
        self.n_interior = 1 + (nr - 1) * nt           # pole + rings 1..nr-1

        ring_idx = np.repeat(np.arange(1, nr + 1), nt)
        self.node_r = np.concatenate([[0.0], self.r[ring_idx]])
        self.node_theta = np.concatenate([[0.0], np.tile(self.theta, nr)])
        self.node_xy = np.stack(
            [self.node_r * np.cos(self.node_theta), self.node_r * np.sin(self.node_theta)],
            axis=-1,
        )
        # finite-volume cell areas (sum to pi exactly up to rounding)
        areas = np.empty(self.n_nodes)
        areas[0] = np.pi * (self.dr / 2.0) ** 2
        inner = np.maximum(self.r[ring_idx] - self.dr / 2.0, 0.0)
        outer = np.minimum(self.r[ring_idx] + self.dr / 2.0, 1.0)
        areas[1:] = 0.5 * (outer**2 - inner**2) * self.dtheta
        self.areas = areas

    # -- indexing ---------------------------------------------------------

    def index(self, i, k):
        """Flat node index of ring i >= 1, angle k (pole is node 0)."""
        return 1 + (i - 1) * self.n_theta + np.mod(k, self.n_theta)

    def ring(self, values, i):
        """View of a per-node array restricted to ring i >= 1."""
        start = 1 + (i - 1) * self.n_theta
        return values[start:start + self.n_theta]

    @property
    def boundary_slice(self):
        return slice(1 + (self.n_r - 1) * self.n_theta, self.n_nodes)

    # -- finite-volume edge structure --------------------------------------

    def edges(self):
        """(a, b, c) arrays: edge endpoints (node ids) and flux coefficients."""
        if "edges" in self._cache:
            return self._cache["edges"]
        nr, nt = self.n_r, self.n_theta
        dr, dth = self.dr, self.dtheta
        ks = np.arange(nt)

        a_list, b_list, c_list = [], [], []
        # pole -> ring 1
        a_list.append(np.zeros(nt, dtype=np.int64))
        b_list.append(self.index(1, ks))
        c_list.append(np.full(nt, (dr / 2.0) * dth / dr))
        # ring i -> ring i+1
        for i in range(1, nr):
            a_list.append(self.index(i, ks))
            b_list.append(self.index(i + 1, ks))
            c_list.append(np.full(nt, (self.r[i] + dr / 2.0) * dth / dr))
        # angular edges within each ring; the boundary ring is a half cell
        for i in range(1, nr + 1):
            a_list.append(self.index(i, ks))
            b_list.append(self.index(i, ks + 1))
            if i < nr:
                width, rmid = dr, self.r[i]
            else:
                width, rmid = dr / 2.0, 1.0 - dr / 4.0
            c_list.append(np.full(nt, width / (rmid * dth)))

        edges = (np.concatenate(a_list), np.concatenate(b_list), np.concatenate(c_list))
        self._cache["edges"] = edges
        return edges

    def _stiffness(self):
        """Symmetric negative-semidefinite S with (S u)_a = sum_e c_e (u_b - u_a)."""
        if "S" in self._cache:
            return self._cache["S"]
        a, b, c = self.edges()
        rows = np.concatenate([a, b, a, b])
        cols = np.concatenate([b, a, a, b])
        vals = np.concatenate([c, c, -c, -c])
        S = sp.csr_matrix((vals, (rows, cols)), shape=(self.n_nodes, self.n_nodes))
        self._cache["S"] = S
        return S

    def laplacian_dirichlet(self):
        """Sparse FV Laplacian on interior unknowns, boundary ring held at zero."""
        if "L_dir" not in self._cache:
            S = self._stiffness()
            ni = self.n_interior
            Sin = S[:ni, :ni]
            L = sp.csr_matrix(Sin.multiply(1.0 / self.areas[:ni, None]))
            self._cache["L_dir"] = L
        return self._cache["L_dir"]

    def laplacian_neumann(self):
        """(L, flux_coeff): full-node FV Laplacian and the per-boundary-node factor
        multiplying the prescribed normal derivative in the right-hand side."""
        if "L_neu" not in self._cache:
            S = self._stiffness()
            L = sp.csr_matrix(S.multiply(1.0 / self.areas[:, None]))
            flux_coeff = self.dtheta / self.areas[self.boundary_slice]
            self._cache["L_neu"] = (L, flux_coeff)
        return self._cache["L_neu"]

    def gradient_energy(self, u):
        """1/2 sum over edges of c_e (u_a - u_b)^2 for a full-node array."""
        a, b, c = self.edges()
        d = u[a] - u[b]
        return 0.5 * float(np.dot(c, d * d))

    # -- derived fields -----------------------------------------------------

    def minus_gradient(self, u):
        """E = -grad U at every node (Cartesian components)."""
        nr, nt, dr = self.n_r, self.n_theta, self.dr
        rings = u[1:].reshape(nr, nt)
        er = np.empty((nr, nt))
        er[0] = -(rings[1] - u[0]) / (2 * dr)
        er[1:nr - 1] = -(rings[2:nr] - rings[0:nr - 2]) / (2 * dr)
        er[nr - 1] = -(3 * rings[nr - 1] - 4 * rings[nr - 2] + rings[nr - 3]) / (2 * dr)
        et = -(np.roll(rings, -1, axis=1) - np.roll(rings, 1, axis=1)) / (
            2 * self.r[1:, None] * self.dtheta
        )
        ct, st = np.cos(self.theta), np.sin(self.theta)
        ex = er * ct[None, :] - et * st[None, :]
        ey = er * st[None, :] + et * ct[None, :]
        # pole: first-harmonic fit through rings 1 and 2 (odd powers of r)
        c1 = 2.0 * (rings[0] @ ct) / nt
        s1 = 2.0 * (rings[0] @ st) / nt
        c2 = 2.0 * (rings[1] @ ct) / nt
        s2 = 2.0 * (rings[1] @ st) / nt
        ax = (8.0 * c1 - c2) / (6.0 * dr)
        ay = (8.0 * s1 - s2) / (6.0 * dr)
        E = np.empty((self.n_nodes, 2))
        E[0] = (-ax, -ay)
        E[1:, 0] = ex.ravel()
        E[1:, 1] = ey.ravel()
        return E

    # -- node/point transfer -------------------------------------------------

    def _locate(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        r = np.linalg.norm(x, axis=-1)
        th = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2.0 * np.pi)
        tr = np.clip(r / self.dr, 0.0, self.n_r)
        i0 = np.minimum(tr.astype(np.int64), self.n_r - 1)
        fr = tr - i0
        tt = th / self.dtheta
        k0 = np.minimum(tt.astype(np.int64), self.n_theta - 1)
        ft = tt - k0
        return i0, fr, k0, ft

    def _node_of(self, i, k):
        """Node id for ring i >= 0 (0 means pole, angle ignored)."""
        return np.where(i == 0, 0, 1 + (np.maximum(i, 1) - 1) * self.n_theta + np.mod(k, self.n_theta))

    def interpolate(self, values, x):
        """Bilinear interpolation of a per-node array at points x (inside the disk)."""
        i0, fr, k0, ft = self._locate(x)
        v00 = values[self._node_of(i0, k0)]
        v01 = values[self._node_of(i0, k0 + 1)]
        v10 = values[self._node_of(i0 + 1, k0)]
        v11 = values[self._node_of(i0 + 1, k0 + 1)]
        out = (1 - fr) * ((1 - ft) * v00 + ft * v01) + fr * ((1 - ft) * v10 + ft * v11)
        return out if out.shape != (1,) else float(out[0])

    def deposit(self, points, weights):
        """Cloud-in-cell deposition; returns per-node accumulated mass.

        Bilinear weights in (r, theta) form a partition of unity, so the total
        deposited mass equals sum(weights) exactly (no boundary clipping: the
        outermost ring sits on the boundary circle itself).
        """
        i0, fr, k0, ft = self._locate(points)
        mass = np.zeros(self.n_nodes)
        w = np.asarray(weights, dtype=float)
        np.add.at(mass, self._node_of(i0, k0), w * (1 - fr) * (1 - ft))
        np.add.at(mass, self._node_of(i0, k0 + 1), w * (1 - fr) * ft)
        np.add.at(mass, self._node_of(i0 + 1, k0), w * fr * (1 - ft))
        np.add.at(mass, self._node_of(i0 + 1, k0 + 1), w * fr * ft)
        return mass

    def node_values(self, func):
        """Evaluate a pointwise density at every node."""
        return np.asarray(func(self.node_xy), dtype=float)
