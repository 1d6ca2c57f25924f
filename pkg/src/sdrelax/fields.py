"""Discrete SBV fields: affine per cell with free offsets.

A field stores one gradient matrix (3 x mesh-dim) and one offset vector per
cell; on cell ``T`` it equals ``G_T x + b_T`` in world coordinates.  Jumps
live on mesh edges and are affine along each edge, so every integral used
here has an edge-wise closed form.  Absolute values of affine integrands are
integrated exactly by splitting at the sign change; Euclidean norms of affine
integrands have a closed form on segments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DatumError, FieldError, InputError
from .meshes import Mesh, build_mesh

UNIT_TOL = 1e-12


# ---------------------------------------------------------------------------
# exact integrals of affine integrands over segments and rectangles
# ---------------------------------------------------------------------------

def abs_affine_segment_exact(f0, f1, length):
    """Exact ``\\int |f|`` over a segment for the affine ``f`` with endpoint
    values ``f0``, ``f1``.  Splits at the sign change, no quadrature error.
    Vectorized over numpy arrays."""
    f0 = np.asarray(f0, dtype=float)
    f1 = np.asarray(f1, dtype=float)
    length = np.asarray(length, dtype=float)
    same = f0 * f1 >= 0
    trapezoid = 0.5 * (np.abs(f0) + np.abs(f1)) * length
    denom = np.where(same, 1.0, f0 - f1)
    t = f0 / denom
    split = 0.5 * length * (np.abs(f0) * t + np.abs(f1) * (1.0 - t))
    return np.where(same, trapezoid, split)


def abs_affine_segment_trapezoid(f0, f1, length):
    """Trapezoid rule for ``\\int |f|``; an overestimate by convexity."""
    return 0.5 * (np.abs(np.asarray(f0)) + np.abs(np.asarray(f1))) * np.asarray(length)


def _polygon_area(pts):
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def _clip_by_sign(pts, vals, keep_nonneg):
    """Clip a convex polygon (with per-vertex values of an affine function)
    against the half ``f >= 0`` or ``f <= 0``; interpolation is exact."""
    out_p, out_v = [], []
    m = len(pts)
    for i in range(m):
        p0, v0 = pts[i], vals[i]
        p1, v1 = pts[(i + 1) % m], vals[(i + 1) % m]
        in0 = v0 >= 0 if keep_nonneg else v0 <= 0
        in1 = v1 >= 0 if keep_nonneg else v1 <= 0
        if in0:
            out_p.append(p0)
            out_v.append(v0)
        if in0 != in1:
            t = v0 / (v0 - v1)
            out_p.append(p0 + t * (p1 - p0))
            out_v.append(0.0)
    return np.asarray(out_p), np.asarray(out_v)


def _polygon_affine_integral(pts, vals):
    """Exact ``\\int f`` of an affine ``f`` over a convex polygon, by fan
    triangulation (the mean of the vertex values is exact per triangle)."""
    total = 0.0
    for i in range(1, len(pts) - 1):
        tri = np.asarray([pts[0], pts[i], pts[i + 1]])
        area = abs(_polygon_area(tri))
        total += area * (vals[0] + vals[i] + vals[i + 1]) / 3.0
    return total


def abs_affine_polygon_exact(pts, vals):
    """Exact ``\\int |f|`` over a convex polygon with vertex values ``vals``."""
    pts = np.asarray(pts, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if np.all(vals >= 0) or np.all(vals <= 0):
        return abs(_polygon_affine_integral(pts, vals))
    total = 0.0
    for keep in (True, False):
        p, v = _clip_by_sign(pts, vals, keep)
        if len(p) >= 3:
            total += abs(_polygon_affine_integral(p, v))
    return total


def norm_affine_segment_exact(v0, v1, length):
    """Exact ``\\int ||v||`` over a segment for the affine vector ``v``.

    Antiderivative of ``sqrt(a t^2 + b t + c)``; degenerate cases (constant
    vector, vanishing discriminant) handled explicitly.
    """
    v0 = np.asarray(v0, dtype=float)
    w = np.asarray(v1, dtype=float) - v0
    alpha = float(w @ w)
    if alpha < 1e-30:
        return float(np.linalg.norm(v0)) * length
    h = float(v0 @ w) / alpha
    disc = float(v0 @ v0) / alpha - h * h
    disc = max(disc, 0.0)

    def antiderivative(s):
        if disc < 1e-30:
            return 0.5 * s * abs(s)
        r = np.sqrt(s * s + disc)
        return 0.5 * (s * r + disc * np.arcsinh(s / np.sqrt(disc)))

    return float(np.sqrt(alpha) * (antiderivative(1.0 + h) - antiderivative(h)) * length)


# ---------------------------------------------------------------------------
# boundary data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineDatum:
    """Datum ``x -> A x`` in world coordinates; ``A`` is 3 x mesh-dim."""

    matrix: np.ndarray

    def values(self, points_world: np.ndarray) -> np.ndarray:
        return points_world @ np.asarray(self.matrix, dtype=float).T


@dataclass(frozen=True)
class StepDatum:
    """Step datum: ``lam`` where ``x . orientation >= 0``, else ``0``."""

    lam: np.ndarray
    orientation: np.ndarray

    def values(self, points_world: np.ndarray) -> np.ndarray:
        lam = np.asarray(self.lam, dtype=float)
        s = points_world @ np.asarray(self.orientation, dtype=float)
        return np.where(s[..., None] >= 0, lam, np.zeros(3))

    def check_mesh(self, mesh: Mesh) -> None:
        if np.max(np.abs(mesh.orientation - np.asarray(self.orientation, dtype=float))) > UNIT_TOL:
            raise DatumError("step datum orientation does not match the mesh orientation")


def zero_datum(dim: int) -> AffineDatum:
    return AffineDatum(np.zeros((3, dim)))


def _edge_box(corners_mesh: np.ndarray, axis: int):
    """(fixed value, lo, hi over free axes) for an axis-aligned edge/face."""
    dim = corners_mesh.shape[1]
    value = corners_mesh[0, axis]
    others = [a for a in range(dim) if a != axis]
    lo = corners_mesh[:, others].min(axis=0)
    hi = corners_mesh[:, others].max(axis=0)
    return value, others, lo, hi


def split_edge_at_midline(mesh: Mesh, corners_mesh: np.ndarray, axis: int):
    """Split an edge/face at the mesh-frame plane ``xi[0] == 0``.

    Returns a list of corner arrays (same layout as the input).  Edges whose
    normal is the orientation axis have constant ``xi[0]`` and never split.
    """
    if axis == 0:
        return [corners_mesh]
    value, others, lo, hi = _edge_box(corners_mesh, axis)
    j = others.index(0)
    if not (lo[j] < 0.0 < hi[j]):
        return [corners_mesh]
    pieces = []
    for a, b in ((lo[j], 0.0), (0.0, hi[j])):
        lo2, hi2 = lo.copy(), hi.copy()
        lo2[j], hi2[j] = a, b
        pieces.append(_box_corners(mesh.dim, axis, value, others, lo2, hi2))
    return pieces


def _box_corners(dim, axis, value, others, lo, hi):
    if dim == 2:
        pts = np.empty((2, 2))
        pts[:, axis] = value
        pts[:, others[0]] = (lo[0], hi[0])
        return pts
    corners = np.empty((4, 3))
    corners[:, axis] = value
    corners[:, others[0]] = (lo[0], hi[0], hi[0], lo[0])
    corners[:, others[1]] = (lo[1], lo[1], hi[1], hi[1])
    return corners


def piece_measure(corners_mesh: np.ndarray, axis: int) -> float:
    _, _, lo, hi = _edge_box(corners_mesh, axis)
    return float(np.prod(hi - lo))


def datum_values_on_piece(datum, points_world: np.ndarray) -> np.ndarray:
    """Datum values on an edge piece that does not straddle a discontinuity.

    Step data are constant on each piece after the midline split, but their
    pointwise rule misassigns the measure-zero corner lying exactly on the
    discontinuity; evaluating at the piece centroid avoids that.
    """
    if isinstance(datum, StepDatum):
        mid = points_world.mean(axis=0, keepdims=True)
        return np.broadcast_to(datum.values(mid)[0], (len(points_world), 3))
    return datum.values(points_world)


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class SbvField:
    """Piecewise-affine field ``u(x) = G_T x + b_T`` with values in R^3."""

    target_dim = 3

    def __init__(self, mesh: Mesh, gradients, offsets):
        gradients = np.asarray(gradients, dtype=float)
        offsets = np.asarray(offsets, dtype=float)
        if gradients.shape != (mesh.ncells, 3, mesh.dim):
            raise FieldError(
                f"gradients must have shape {(mesh.ncells, 3, mesh.dim)}, got {gradients.shape}"
            )
        if offsets.shape != (mesh.ncells, 3):
            raise FieldError(
                f"offsets must have shape {(mesh.ncells, 3)}, got {offsets.shape}"
            )
        if not (np.all(np.isfinite(gradients)) and np.all(np.isfinite(offsets))):
            raise FieldError("field data must be finite")
        self.mesh = mesh
        self.gradients = gradients
        self.offsets = offsets

    @classmethod
    def affine(cls, mesh: Mesh, matrix, offset=None) -> "SbvField":
        matrix = np.asarray(matrix, dtype=float)
        offset = np.zeros(3) if offset is None else np.asarray(offset, dtype=float)
        grads = np.broadcast_to(matrix, (mesh.ncells, 3, mesh.dim)).copy()
        offs = np.broadcast_to(offset, (mesh.ncells, 3)).copy()
        return cls(mesh, grads, offs)

    def scale(self) -> float:
        """Magnitude proxy used in residual tolerances."""
        return float(np.max(np.abs(self.gradients), initial=0.0) + np.max(np.abs(self.offsets), initial=0.0))

    # -- traces and jumps -------------------------------------------------

    def interior_corner_values(self):
        """Traces of the two adjacent affine pieces at interior edge corners.

        Returns ``(minus_vals, plus_vals)`` with shape (E, corners, 3).
        """
        mesh = self.mesh
        pts = mesh.int_corners @ mesh.frame.T
        minus = np.einsum("eij,ekj->eki", self.gradients[mesh.int_minus], pts) + self.offsets[
            mesh.int_minus
        ][:, None, :]
        plus = np.einsum("eij,ekj->eki", self.gradients[mesh.int_plus], pts) + self.offsets[
            mesh.int_plus
        ][:, None, :]
        return minus, plus

    def boundary_corner_values(self):
        mesh = self.mesh
        pts = mesh.bnd_corners @ mesh.frame.T
        return np.einsum("eij,ekj->eki", self.gradients[mesh.bnd_cell], pts) + self.offsets[
            mesh.bnd_cell
        ][:, None, :]


@dataclass(frozen=True)
class JumpRecord:
    """Jump of a field across one interior edge: ``u_plus - u_minus`` at the
    edge corners, the unit normal (minus -> plus), and the edge measure."""

    edge_index: int
    values: np.ndarray
    normal: np.ndarray
    measure: float
    minus_cell: int
    plus_cell: int


def jumps(field: SbvField) -> list[JumpRecord]:
    """One record per interior edge with a not-identically-zero jump."""
    mesh = field.mesh
    minus, plus = field.interior_corner_values()
    delta = plus - minus
    normals = mesh.int_normals()
    records = []
    for e in range(len(mesh.int_axis)):
        if np.max(np.abs(delta[e])) == 0.0:
            continue
        records.append(
            JumpRecord(
                edge_index=e,
                values=delta[e].copy(),
                normal=normals[e].copy(),
                measure=float(mesh.int_measure[e]),
                minus_cell=int(mesh.int_minus[e]),
                plus_cell=int(mesh.int_plus[e]),
            )
        )
    return records


def average_gradient(field: SbvField) -> np.ndarray:
    """Measure-weighted sum of the per-cell gradients."""
    return np.einsum("t,tij->ij", field.mesh.cell_measures, field.gradients)


def gauss_green_residual(field: SbvField) -> np.ndarray:
    """Componentwise divergence-theorem residual, one entry per target
    component: jump integral + gradient integral - boundary integral, each
    contracted against the constant world vector (1, .., 1).  Exact for the
    affine-per-cell class; zero for every valid field up to rounding."""
    mesh = field.mesh
    w = np.ones(mesh.dim)
    minus, plus = field.interior_corner_values()
    delta_mean = (plus - minus).mean(axis=1)
    jump_term = ((mesh.int_normals() @ w) * mesh.int_measure) @ delta_mean
    bulk_term = np.einsum("t,tij,j->i", mesh.cell_measures, field.gradients, w)
    bnd_mean = field.boundary_corner_values().mean(axis=1)
    bnd_term = ((mesh.bnd_normals() @ w) * mesh.bnd_measure) @ bnd_mean
    return jump_term + bulk_term - bnd_term


def boundary_trace_gap(field: SbvField, datum) -> float:
    """Exact ``\\int ||u - datum||`` over the mesh boundary.

    Step data split each edge at the datum discontinuity, so the mismatch is
    affine on every piece; segments use the closed-form norm integral.  On 3D
    faces the affine-mismatch case falls back to a fixed high-order tensor
    Gauss rule (constant mismatches, the only case asserted exactly by the
    solver contracts, are integrated exactly).
    """
    mesh = field.mesh
    if isinstance(datum, StepDatum):
        datum.check_mesh(mesh)
    total = 0.0
    for e in range(len(mesh.bnd_axis)):
        cell = mesh.bnd_cell[e]
        axis = int(mesh.bnd_axis[e])
        pieces = (
            split_edge_at_midline(mesh, mesh.bnd_corners[e], axis)
            if isinstance(datum, StepDatum)
            else [mesh.bnd_corners[e]]
        )
        for corners in pieces:
            pts = corners @ mesh.frame.T
            uvals = pts @ field.gradients[cell].T + field.offsets[cell]
            mism = uvals - datum_values_on_piece(datum, pts)
            measure = piece_measure(corners, axis)
            if mesh.dim == 2:
                total += norm_affine_segment_exact(mism[0], mism[1], measure)
            elif np.max(np.abs(mism - mism[0])) < 1e-15:
                total += float(np.linalg.norm(mism[0])) * measure
            else:
                total += _face_norm_gauss(field, cell, datum, corners, mesh, measure)
    return float(total)


_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _face_norm_gauss(field, cell, datum, corners, mesh, measure):
    s = 0.5 * (_GAUSS_NODES + 1.0)
    w = 0.5 * _GAUSS_WEIGHTS
    p00, p10, p11 = corners[0], corners[1], corners[3]
    grid = (
        p00[None, None, :]
        + s[:, None, None] * (p10 - p00)[None, None, :]
        + s[None, :, None] * (p11 - p00)[None, None, :]
    )
    pts = grid.reshape(-1, mesh.dim) @ mesh.frame.T
    mism = pts @ field.gradients[cell].T + field.offsets[cell] - datum.values(pts)
    vals = np.linalg.norm(mism, axis=1).reshape(len(s), len(s))
    return float(measure * (w @ vals @ w))


# ---------------------------------------------------------------------------
# JSON round trip (uniform centered meshes only)
# ---------------------------------------------------------------------------

def field_to_json(field: SbvField) -> str:
    mesh = field.mesh
    payload = {
        "dimension": mesh.dim,
        "n": int(mesh.n),
        "orientation": mesh.orientation.tolist(),
        "cells": [
            {"gradient": field.gradients[t].tolist(), "offset": field.offsets[t].tolist()}
            for t in range(mesh.ncells)
        ],
    }
    return json.dumps(payload, indent=2)


def field_from_json(text: str) -> SbvField:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON for field file: {exc}") from exc
    try:
        dim = int(payload["dimension"])
        n = int(payload["n"])
        orientation = np.asarray(payload["orientation"], dtype=float)
        cells = payload["cells"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"field file is missing or has malformed keys: {exc}") from exc
    mesh = build_mesh(dim, n, orientation)
    if len(cells) != mesh.ncells:
        raise InputError(
            f"field file lists {len(cells)} cells but the mesh has {mesh.ncells}"
        )
    grads = np.asarray([c["gradient"] for c in cells], dtype=float)
    offs = np.asarray([c["offset"] for c in cells], dtype=float)
    return SbvField(mesh, grads, offs)
