"""Explicit competitor sequences and their energy-decay tables.

Three generators, each realizing an infimizing construction exactly as a
discrete SBV field on a mesh fitted to its geometry:

* ``GAMMA1_SPLIT``  -- the step datum everywhere, shifted by -(1/n) e3 on the
  inner shrunken square where ``x . eta <= 0`` and by +(1/n) e3 where
  ``x . eta >= 0``.  Under the out-of-plane-relaxed integrand only the
  midline segment inside the boundary frame is charged, so the energy decays
  like ``|lam| / n``.

* ``FRAME_W1`` -- the shrunken square is partitioned into ``n`` thin vertical
  rectangles of width ``(n-1)/n^2`` carrying ``M (x - c_k) + ((-1)^k/n^2) e3``;
  the boundary frame carries an anchored staircase ``M (x - p)`` whose
  anchors sit on a spacing-``1/n`` lattice along the outer boundary.  The
  alternating out-of-plane shifts make the rectangle-to-rectangle and
  rectangle-to-frame jumps free for the relaxed integrand, leaving only the
  staircase jump mass, which is O(1/n).

* ``STAIRCASE_TRACE`` -- gradient pinned to ``B`` with offsets ``(A - B)``
  times the cell center: a staircase whose trace tends to ``A x`` and whose
  jump energy tends to ``|A11 - B11| + |A22 - B22|`` as ``n`` grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .energy import surface_energy
from .errors import ProblemError
from .fields import AffineDatum, SbvField, StepDatum, zero_datum
from .meshes import frame_from_orientation, rectilinear_mesh


class SequenceKind(str, Enum):
    FRAME_W1 = "FRAME_W1"
    GAMMA1_SPLIT = "GAMMA1_SPLIT"
    STAIRCASE_TRACE = "STAIRCASE_TRACE"


@dataclass
class SequenceParams:
    """Parameters of one competitor; data slots depend on the kind."""

    kind: SequenceKind
    n: int
    M: np.ndarray | None = None
    lam: np.ndarray | None = None
    eta: np.ndarray | None = None
    A: np.ndarray | None = None
    B: np.ndarray | None = None

    def __post_init__(self):
        self.kind = SequenceKind(self.kind)
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ProblemError(f"scale index must be a positive integer, got {self.n!r}")
        for name in ("M", "lam", "eta", "A", "B"):
            v = getattr(self, name)
            if v is not None:
                setattr(self, name, np.asarray(v, dtype=float))
        if self.kind is SequenceKind.FRAME_W1:
            if self.M is None or self.M.shape != (3, 2):
                raise ProblemError("FRAME_W1 needs a 3x2 gradient matrix M")
            if self.n < 2:
                raise ProblemError("FRAME_W1 needs n >= 2 (the frame is empty otherwise)")
        elif self.kind is SequenceKind.GAMMA1_SPLIT:
            if self.lam is None or self.lam.shape != (3,):
                raise ProblemError("GAMMA1_SPLIT needs a jump vector lam in R^3")
            if self.eta is None or self.eta.shape != (2,):
                raise ProblemError("GAMMA1_SPLIT needs a unit 2-vector eta")
        else:
            if self.A is None or self.B is None:
                raise ProblemError("STAIRCASE_TRACE needs matrices A and B")
            self.A = _to_3x2(self.A)
            self.B = _to_3x2(self.B)

    def with_n(self, n: int) -> "SequenceParams":
        return SequenceParams(
            kind=self.kind, n=int(n), M=self.M, lam=self.lam, eta=self.eta, A=self.A, B=self.B
        )


def _to_3x2(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape == (2, 2):
        return np.vstack([M, np.zeros((1, 2))])
    if M.shape == (3, 2):
        return M
    raise ProblemError(f"trace data must be 2x2 or 3x2, got {M.shape}")


def _dedupe(values) -> np.ndarray:
    values = np.sort(np.asarray(values, dtype=float))
    keep = [values[0]]
    for v in values[1:]:
        if v - keep[-1] > 1e-12:
            keep.append(v)
    return np.asarray(keep)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build(params: SequenceParams) -> SbvField:
    if params.kind is SequenceKind.GAMMA1_SPLIT:
        return _build_gamma1_split(params)
    if params.kind is SequenceKind.FRAME_W1:
        return _build_frame_w1(params)
    return _build_staircase_trace(params)


def _build_gamma1_split(params: SequenceParams) -> SbvField:
    n = params.n
    lam, eta = params.lam, params.eta
    frame = frame_from_orientation(eta)
    a = (n - 1) / (2 * n)
    b0 = _dedupe([-0.5, -a, 0.0, a, 0.5])
    b1 = _dedupe([-0.5, -a, a, 0.5])
    mesh = rectilinear_mesh([b0, b1], frame=frame, n=n)

    offsets = np.zeros((mesh.ncells, 3))
    mids = 0.5 * (mesh.cell_lo + mesh.cell_hi)
    for t in range(mesh.ncells):
        xi1, xi2 = mids[t]
        if xi1 >= 0:
            offsets[t] = lam
        if abs(xi1) < a and abs(xi2) < a:
            offsets[t, 2] += (1.0 / n) if xi1 >= 0 else (-1.0 / n)
    return SbvField(mesh, np.zeros((mesh.ncells, 3, 2)), offsets)


def _frame_lattice(t: float, n: int) -> float:
    """Center of the spacing-1/n lattice cell containing coordinate t."""
    j = min(max(int(math.floor((t + 0.5) * n)), 0), n - 1)
    return (j + 0.5) / n - 0.5


def _build_frame_w1(params: SequenceParams) -> SbvField:
    n = params.n
    M = params.M
    a = (n - 1) / (2 * n)
    w = (n - 1) / (n * n)
    rect_breaks = [-a + k * w for k in range(n + 1)]
    lattice = [-0.5 + j / n for j in range(1, n)]
    b0 = _dedupe([-0.5, 0.5, a, -a] + rect_breaks + lattice)
    b1 = _dedupe([-0.5, 0.5, a, -a] + lattice)
    mesh = rectilinear_mesh([b0, b1], n=n)

    grads = np.broadcast_to(M, (mesh.ncells, 3, 2)).copy()
    offsets = np.zeros((mesh.ncells, 3))
    mids = 0.5 * (mesh.cell_lo + mesh.cell_hi)
    e3 = np.array([0.0, 0.0, 1.0])
    for t in range(mesh.ncells):
        cx, cy = mids[t]
        if abs(cx) < a and abs(cy) < a:
            k = min(max(int(math.floor((cx + a) / w)), 0), n - 1)
            ck = np.array([-a + (k + 0.5) * w, 0.0])
            offsets[t] = -M @ ck + ((-1.0) ** k / (n * n)) * e3
        else:
            if cx < -a:
                p = np.array([-0.5, _frame_lattice(cy, n)])
            elif cx > a:
                p = np.array([0.5, _frame_lattice(cy, n)])
            elif cy < -a:
                p = np.array([_frame_lattice(cx, n), -0.5])
            else:
                p = np.array([_frame_lattice(cx, n), 0.5])
            offsets[t] = -M @ p
    return SbvField(mesh, grads, offsets)


def _build_staircase_trace(params: SequenceParams) -> SbvField:
    n = params.n
    A, B = params.A, params.B
    breaks = np.linspace(-0.5, 0.5, n + 1)
    mesh = rectilinear_mesh([breaks, breaks], n=n)
    centers = mesh.cell_centers_world()
    grads = np.broadcast_to(B, (mesh.ncells, 3, 2)).copy()
    offsets = centers @ (A - B).T
    return SbvField(mesh, grads, offsets)


def datum_for(params: SequenceParams):
    """Boundary datum each construction competes against."""
    if params.kind is SequenceKind.GAMMA1_SPLIT:
        return StepDatum(params.lam, params.eta)
    if params.kind is SequenceKind.FRAME_W1:
        return zero_datum(2)
    return AffineDatum(params.A)


def energy(field: SbvField, surface_density, datum=None) -> float:
    """Exact edge-wise surface energy; with ``datum`` the boundary mismatch
    is charged as a jump against the datum."""
    return surface_energy(field, surface_density, datum=datum)


# ---------------------------------------------------------------------------
# decay tables
# ---------------------------------------------------------------------------

@dataclass
class DecayRow:
    n: int
    energy: float
    bound: float
    slope_so_far: float  # NaN until two positive-energy rows exist
    note: str = ""

    @property
    def within_bound(self) -> bool:
        return self.energy <= self.bound + 1e-12


def frame_threshold(M: np.ndarray) -> int:
    """Scale beyond which the alternating shifts certify that every
    rectangle-to-rectangle jump carries a nonzero third component.

    Across rectangles the third jump component is ``-w (M^T e3)_1 +- 2/n^2``
    with ``w = (n-1)/n^2``, so once ``(n-1) |M_31| > 2`` the two terms cannot
    cancel; with ``M_31 == 0`` the shift alone keeps it nonzero.
    """
    m1 = abs(float(M[2, 0]))
    if m1 == 0.0:
        return 2
    return int(math.ceil(2.0 / m1)) + 2


def _bound_for(params: SequenceParams) -> float:
    n = params.n
    if params.kind is SequenceKind.GAMMA1_SPLIT:
        return float(np.linalg.norm(params.lam)) / n
    if params.kind is SequenceKind.FRAME_W1:
        return 4.0 * float(np.linalg.norm(params.M)) / n
    D = params.A - params.B
    return abs(D[0, 0]) + abs(D[1, 1]) + (np.abs(D[:2, :2]).sum()) / n


def decay_table(params: SequenceParams, density, n_list) -> list[DecayRow]:
    """Exact energies of the family over ``n_list``, with per-row bounds and
    the running log-log least-squares slope."""
    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ProblemError("n_list must be strictly increasing")
    rows: list[DecayRow] = []
    log_n, log_e = [], []
    for n in n_list:
        p = params.with_n(n)
        field = build(p)
        val = energy(field, density, datum=datum_for(p))
        note = ""
        if p.kind is SequenceKind.FRAME_W1 and n < frame_threshold(p.M):
            note = "below-threshold"
        slope = float("nan")
        if val > 0:
            log_n.append(math.log(n))
            log_e.append(math.log(val))
            if len(log_n) >= 2:
                slope = float(np.polyfit(log_n, log_e, 1)[0])
        rows.append(DecayRow(n=n, energy=float(val), bound=_bound_for(p), slope_so_far=slope, note=note))
    return rows


__all__ = [
    "SequenceKind",
    "SequenceParams",
    "build",
    "energy",
    "datum_for",
    "decay_table",
    "DecayRow",
    "frame_threshold",
]
