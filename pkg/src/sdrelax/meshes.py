"""Rectilinear meshes of squares and cubes, optionally rigidly rotated.

A mesh is a tensor product of breakpoint arrays in its own frame; world
coordinates are obtained by applying the rotation ``frame``.  Column 0 of
``frame`` is the orientation vector, so the mesh coordinate ``xi[0]`` of a
point equals its world dot product with the orientation.  Uniform meshes of
the unit square / cube centered at the origin are produced by
:func:`build_mesh`; the competitor generators build non-uniform ones through
:func:`rectilinear_mesh`.

Edges (2D) and faces (3D) are stored as flat numpy arrays so that field
operations can run vectorized over the whole mesh.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import MeshError

UNIT_TOL = 1e-12


def frame_from_orientation(orientation: np.ndarray) -> np.ndarray:
    """Rotation whose first column is ``orientation``.

    The remaining columns are a deterministic orthonormal completion, so two
    sides of the meshed square/cube are perpendicular to the orientation.
    """
    v = np.asarray(orientation, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise MeshError(f"orientation must be a unit vector, got |v|={np.linalg.norm(v)!r}")
    if v.shape == (2,):
        return np.column_stack([v, [-v[1], v[0]]])
    if v.shape == (3,):
        k = int(np.argmin(np.abs(v)))
        e = np.zeros(3)
        e[k] = 1.0
        c1 = e - (e @ v) * v
        c1 /= np.linalg.norm(c1)
        c2 = np.cross(v, c1)
        return np.column_stack([v, c1, c2])
    raise MeshError(f"orientation must have 2 or 3 components, got shape {v.shape}")


class Mesh:
    """Product mesh with cells ``[breaks[a][i], breaks[a][i+1])`` per axis.

    Cells are indexed in C order over the per-axis indices, i.e. the last
    axis varies fastest; this is also the order used in field files.
    Immutable after construction and safe to share across threads.
    """

    def __init__(self, axis_breaks, frame=None, n=None):
        breaks = tuple(np.asarray(b, dtype=float) for b in axis_breaks)
        dim = len(breaks)
        if dim not in (2, 3):
            raise MeshError(f"dimension must be 2 or 3, got {dim}")
        for b in breaks:
            if b.ndim != 1 or b.size < 2 or np.any(np.diff(b) <= 0):
                raise MeshError("axis breakpoints must be strictly increasing with >= 2 entries")
        if frame is None:
            frame = np.eye(dim)
        frame = np.asarray(frame, dtype=float)
        if frame.shape != (dim, dim) or np.max(np.abs(frame.T @ frame - np.eye(dim))) > 1e-10:
            raise MeshError("frame must be an orthogonal matrix of the mesh dimension")
        self.dim = dim
        self.axis_breaks = breaks
        self.frame = frame
        self.shape = tuple(b.size - 1 for b in breaks)
        self.ncells = int(np.prod(self.shape))
        self.n = n if n is not None else max(self.shape)
        self._build_cells()
        self._build_edges()

    # -- construction ---------------------------------------------------

    def _build_cells(self):
        los = np.meshgrid(*[b[:-1] for b in self.axis_breaks], indexing="ij")
        his = np.meshgrid(*[b[1:] for b in self.axis_breaks], indexing="ij")
        self.cell_lo = np.stack([a.reshape(-1) for a in los], axis=1)
        self.cell_hi = np.stack([a.reshape(-1) for a in his], axis=1)
        self.cell_measures = np.prod(self.cell_hi - self.cell_lo, axis=1)

    def _cell_id(self, idx):
        return int(np.ravel_multi_index(idx, self.shape))

    def _edge_corners(self, axis, value, lo, hi):
        """Corners (mesh frame) of a face at ``xi[axis] == value``.

        ``lo``/``hi`` bound the remaining axes, in increasing axis order.
        2D: 2 endpoints; 3D: 4 corners in a fixed cyclic order.
        """
        if self.dim == 2:
            pts = np.empty((2, 2))
            other = 1 - axis
            pts[:, axis] = value
            pts[:, other] = (lo[0], hi[0])
            return pts
        others = [a for a in range(3) if a != axis]
        corners = np.empty((4, 3))
        corners[:, axis] = value
        corners[:, others[0]] = (lo[0], hi[0], hi[0], lo[0])
        corners[:, others[1]] = (lo[1], lo[1], hi[1], hi[1])
        return corners

    def _build_edges(self):
        dim, shape = self.dim, self.shape
        int_axis, int_minus, int_plus, int_meas, int_corners = [], [], [], [], []
        bnd_axis, bnd_side, bnd_cell, bnd_meas, bnd_corners = [], [], [], [], []
        for axis in range(dim):
            others = [a for a in range(dim) if a != axis]
            ranges = [range(shape[a]) for a in others]
            grids = np.meshgrid(*ranges, indexing="ij") if others else []
            other_idx = np.stack([g.reshape(-1) for g in grids], axis=1)
            for oi in other_idx:
                lo = [self.axis_breaks[a][oi[j]] for j, a in enumerate(others)]
                hi = [self.axis_breaks[a][oi[j] + 1] for j, a in enumerate(others)]
                measure = float(np.prod(np.asarray(hi) - np.asarray(lo)))

                def cell_at(i):
                    idx = [0] * dim
                    idx[axis] = i
                    for j, a in enumerate(others):
                        idx[a] = oi[j]
                    return self._cell_id(tuple(idx))

                for i in range(shape[axis] - 1):
                    value = self.axis_breaks[axis][i + 1]
                    int_axis.append(axis)
                    int_minus.append(cell_at(i))
                    int_plus.append(cell_at(i + 1))
                    int_meas.append(measure)
                    int_corners.append(self._edge_corners(axis, value, lo, hi))
                for side, i, bidx in ((-1, 0, 0), (1, shape[axis] - 1, shape[axis])):
                    bnd_axis.append(axis)
                    bnd_side.append(side)
                    bnd_cell.append(cell_at(i))
                    bnd_meas.append(measure)
                    bnd_corners.append(
                        self._edge_corners(axis, self.axis_breaks[axis][bidx], lo, hi)
                    )
        ncorn = 2 if dim == 2 else 4
        self.int_axis = np.asarray(int_axis, dtype=int)
        self.int_minus = np.asarray(int_minus, dtype=int)
        self.int_plus = np.asarray(int_plus, dtype=int)
        self.int_measure = np.asarray(int_meas, dtype=float)
        self.int_corners = (
            np.asarray(int_corners, dtype=float).reshape(-1, ncorn, dim)
            if int_corners
            else np.zeros((0, ncorn, dim))
        )
        self.bnd_axis = np.asarray(bnd_axis, dtype=int)
        self.bnd_side = np.asarray(bnd_side, dtype=int)
        self.bnd_cell = np.asarray(bnd_cell, dtype=int)
        self.bnd_measure = np.asarray(bnd_meas, dtype=float)
        self.bnd_corners = np.asarray(bnd_corners, dtype=float).reshape(-1, ncorn, dim)

    # -- geometry queries -----------------------------------------------

    @property
    def orientation(self) -> np.ndarray:
        return self.frame[:, 0].copy()

    @cached_property
    def vertices(self) -> np.ndarray:
        """World coordinates of all grid vertices, C order."""
        grids = np.meshgrid(*self.axis_breaks, indexing="ij")
        pts = np.stack([g.reshape(-1) for g in grids], axis=1)
        return pts @ self.frame.T

    def to_world(self, xi: np.ndarray) -> np.ndarray:
        return np.asarray(xi, dtype=float) @ self.frame.T

    def int_normals(self) -> np.ndarray:
        """World unit normals of interior edges, pointing minus -> plus."""
        return self.frame.T[self.int_axis]

    def bnd_normals(self) -> np.ndarray:
        """Outward world unit normals of boundary edges."""
        return self.frame.T[self.bnd_axis] * self.bnd_side[:, None]

    def cell_centers_world(self) -> np.ndarray:
        return self.to_world(0.5 * (self.cell_lo + self.cell_hi))

    @property
    def total_measure(self) -> float:
        return float(self.cell_measures.sum())

    def cell_vertex_indices(self, cell: int) -> list[int]:
        """Indices into :attr:`vertices` of the cell's corners (C order)."""
        idx = np.unravel_index(cell, self.shape)
        vshape = tuple(b.size for b in self.axis_breaks)
        corners = []
        for offset in np.ndindex(*(2,) * self.dim):
            corner = tuple(i + o for i, o in zip(idx, offset))
            corners.append(int(np.ravel_multi_index(corner, vshape)))
        return corners


def build_mesh(dimension: int, n: int, orientation) -> Mesh:
    """Uniform ``n x n`` (or ``n^3``) mesh of the unit square/cube centered at
    the origin, rotated so two sides are perpendicular to ``orientation``."""
    if dimension not in (2, 3):
        raise MeshError(f"dimension must be 2 or 3, got {dimension}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise MeshError(f"refinement must be a positive integer, got {n!r}")
    orientation = np.asarray(orientation, dtype=float)
    if orientation.shape != (dimension,):
        raise MeshError(
            f"orientation shape {orientation.shape} does not match dimension {dimension}"
        )
    frame = frame_from_orientation(orientation)
    breaks = np.linspace(-0.5, 0.5, n + 1)
    return Mesh([breaks] * dimension, frame=frame, n=n)


def rectilinear_mesh(axis_breaks, frame=None, n=None) -> Mesh:
    """Mesh from explicit per-axis breakpoints (used by competitor builders
    and for cross-section domains)."""
    return Mesh(axis_breaks, frame=frame, n=n)
