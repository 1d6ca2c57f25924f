"""Numerical minimization of the relaxation cell formulas.

Every cell problem is posed over the discrete SBV class on a unit square or
cube mesh: affine per cell, with the per-cell gradient pinned to the value
forced by the problem's constraint set (the average-gradient datum, the
boundary-datum gradient, or zero for pure jump problems) and the offsets
free.  Boundary conditions are charged energetically as jumps against the
datum.  For the normal-form surface density the objective is then a sum of
absolute values of affine expressions in the offsets:

* interior jumps are constant along each edge (equal pinned gradients), so
  their terms are exact;
* affine boundary mismatches are overestimated by the trapezoid rule (corner
  average on faces), which keeps the program linear and preserves the
  certificate ``value >= continuum infimum`` coming from the Gauss-Green
  identity.

The objective splits by normal direction into independent scalar programs
(the normal form only sees the offset component along each edge normal), and
those split further into small connected components, each solved exactly by
the in-repo simplex.  Pure jump problems additionally re-solve each component
lexicographically so that, among minimizers, one matching the boundary datum
is returned.

Problems whose surface integrand relaxes the out-of-plane normal component
(the zero-boundary pinned-gradient problem and the step-datum problem with
that integrand) admit exact zero-cost discrete minimizers obtained by
staggering the out-of-plane offsets, and are solved in closed form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from . import densities as dens
from .energy import padded_normal, surface_energy
from .errors import InputError, ProblemError, UnsupportedProblemError
from .fields import AffineDatum, SbvField, StepDatum, boundary_trace_gap, zero_datum
from .meshes import Mesh, build_mesh
from .simplexlp import AbsTerm, minimize_weighted_abs
from .utils import ordered_map

UNIT_TOL = 1e-12


class Kind(str, Enum):
    H_3D2D = "H_3D2D"
    W_3D2D = "W_3D2D"
    W_3D2DSD = "W_3D2DSD"
    H_3D2DSD = "H_3D2DSD"
    W_3DSD = "W_3DSD"
    H_3DSD = "H_3DSD"
    W_3DSD2D = "W_3DSD2D"
    H_3DSD2D = "H_3DSD2D"
    W1 = "W1"
    GAMMA1 = "GAMMA1"
    TWO_D_TRACE = "TWO_D_TRACE"


JUMP_KINDS = {Kind.H_3D2D, Kind.H_3D2DSD, Kind.H_3DSD, Kind.H_3DSD2D}
PSI1_KINDS = {Kind.W1, Kind.GAMMA1}
Z_KINDS = {Kind.W_3D2D, Kind.W_3DSD2D}
THREE_D_KINDS = {Kind.W_3DSD, Kind.H_3DSD}


@dataclass
class CellProblem:
    """One cell formula instance.

    Data slots by kind (unused slots stay ``None``):

    ==============  =======================================================
    H_3D2D          lam (R3), orientation (S1)
    H_3D2DSD        lam, orientation (S1)
    H_3DSD          lam, orientation (S2)
    H_3DSD2D        lam, orientation (S1)
    GAMMA1          lam, orientation (S1); surface integrand is psi1
    W_3D2D          A (3x2), d (R3)
    W_3D2DSD        A (3x2), B (3x2)
    W_3DSD          A (3x3), B (3x2)
    W_3DSD2D        A (3x2), B (3x2), d (R3)
    W1              A (3x2, the pinned gradient); surface integrand is psi1
    TWO_D_TRACE     A (2x2 or 3x2), B (2x2 or 3x2); planar trace problem
    ==============  =======================================================
    """

    kind: Kind
    n: int
    A: np.ndarray | None = None
    B: np.ndarray | None = None
    d: np.ndarray | None = None
    lam: np.ndarray | None = None
    orientation: np.ndarray | None = None
    density: dens.DensityPair = dc_field(default_factory=dens.interfacial_normal_pair)

    def __post_init__(self):
        self.kind = Kind(self.kind)
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ProblemError(f"refinement must be a positive integer, got {self.n!r}")
        for name in ("A", "B", "d", "lam", "orientation"):
            v = getattr(self, name)
            if v is not None:
                setattr(self, name, np.asarray(v, dtype=float))
        if self.kind in PSI1_KINDS and self.density.surface_form == dens.SURFACE_NORMAL:
            self.density = dens.psi1_pair()
        self._validate()

    def _validate(self):
        k = self.kind
        need = {
            Kind.H_3D2D: ("lam", "orientation"),
            Kind.H_3D2DSD: ("lam", "orientation"),
            Kind.H_3DSD: ("lam", "orientation"),
            Kind.H_3DSD2D: ("lam", "orientation"),
            Kind.GAMMA1: ("lam", "orientation"),
            Kind.W_3D2D: ("A", "d"),
            Kind.W_3D2DSD: ("A", "B"),
            Kind.W_3DSD: ("A", "B"),
            Kind.W_3DSD2D: ("A", "B", "d"),
            Kind.W1: ("A",),
            Kind.TWO_D_TRACE: ("A", "B"),
        }[k]
        for name in need:
            if getattr(self, name) is None:
                raise ProblemError(f"kind {k.value} requires data slot '{name}'")
        if self.orientation is not None:
            want = 3 if k in THREE_D_KINDS else 2
            if self.orientation.shape != (want,):
                raise ProblemError(
                    f"kind {k.value} needs a {want}-vector orientation, got {self.orientation.shape}"
                )
            if abs(np.linalg.norm(self.orientation) - 1.0) > UNIT_TOL:
                raise ProblemError("orientation must be a unit vector")
        if self.lam is not None and self.lam.shape != (3,):
            raise ProblemError("lam must be a 3-vector")
        if k is Kind.TWO_D_TRACE:
            self.A = _embed_planar(self.A)
            self.B = _embed_planar(self.B)
        if k is Kind.W_3DSD:
            if self.A.shape != (3, 3):
                raise ProblemError("W_3DSD needs a 3x3 boundary matrix A")
            if self.B.shape != (3, 2):
                raise ProblemError("W_3DSD needs a 3x2 average constraint B")
        elif k in (Kind.W_3D2D, Kind.W_3D2DSD, Kind.W_3DSD2D, Kind.W1):
            if self.A is not None and self.A.shape != (3, 2):
                raise ProblemError(f"kind {k.value} needs a 3x2 matrix A")
            if self.B is not None and self.B.shape != (3, 2):
                raise ProblemError(f"kind {k.value} needs a 3x2 matrix B")

    @property
    def dim(self) -> int:
        return 3 if self.kind in THREE_D_KINDS else 2


def _embed_planar(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape == (3, 2):
        return M
    if M.shape == (2, 2):
        return np.vstack([M, np.zeros((1, 2))])
    raise ProblemError(f"planar trace data must be 2x2 or 3x2, got {M.shape}")


@dataclass
class SolveResult:
    """Outcome of one cell-problem minimization.

    ``value`` is the minimized objective (exact interior jump cost plus
    trapezoid-overestimated boundary mismatch), which upper-bounds the exact
    energy of the minimizer and, for certified problems, lower-bounds the
    continuum infimum.  ``value_exact`` re-evaluates the minimizer with exact
    sign-splitting everywhere (``value_exact <= value``).
    """

    kind: Kind
    value: float
    value_exact: float
    minimizer: SbvField
    n: int
    lower_bound_certified: bool
    z: np.ndarray | None = None
    bulk_value: float = 0.0

    def reevaluate(self, problem: "CellProblem") -> float:
        """Recompute the objective from the stored minimizer."""
        datum = _datum_for(problem, self.minimizer.mesh)
        surf = surface_energy(self.minimizer, problem.density, datum=datum, overestimate=True)
        return surf + self.bulk_value


def closed_form(problem: CellProblem) -> float | None:
    """Continuum value of the cell formula for the built-in density pair,
    where one exists; ``None`` for custom densities."""
    k, A, B = problem.kind, problem.A, problem.B
    if problem.density.surface_form == dens.SURFACE_PSI1 and k in PSI1_KINDS:
        return 0.0
    if problem.density.surface_form != dens.SURFACE_NORMAL:
        return None
    if problem.density.bulk_form != dens.BULK_ZERO:
        return None
    if k in (Kind.H_3D2D, Kind.H_3D2DSD, Kind.H_3DSD2D):
        return dens.h_3d2d(problem.lam, problem.orientation)
    if k is Kind.H_3DSD:
        return dens.h_pure(problem.lam, problem.orientation)
    if k is Kind.W_3D2D:
        return 0.0
    if k in (Kind.W_3D2DSD, Kind.W_3DSD2D, Kind.TWO_D_TRACE):
        return dens.w_3d2dsd(A, B)
    if k is Kind.W_3DSD:
        return dens.w_3dsd(A, B)
    return None


# ---------------------------------------------------------------------------
# problem geometry: mesh, pinned gradient, datum
# ---------------------------------------------------------------------------

def _mesh_for(problem: CellProblem) -> Mesh:
    if problem.kind in JUMP_KINDS or problem.kind is Kind.GAMMA1:
        return build_mesh(problem.dim, problem.n, problem.orientation)
    axis1 = np.zeros(problem.dim)
    axis1[0] = 1.0
    return build_mesh(problem.dim, problem.n, axis1)


def _pinned_gradient(problem: CellProblem) -> np.ndarray:
    k = problem.kind
    if k in JUMP_KINDS or k is Kind.GAMMA1:
        return np.zeros((3, problem.dim))
    if k is Kind.W_3D2DSD:
        return problem.B
    if k is Kind.W_3DSD:
        return np.column_stack([problem.B, problem.A[:, 2]])
    if k in (Kind.W_3D2D, Kind.W_3DSD2D):
        return problem.A
    if k is Kind.W1:
        return problem.A
    if k is Kind.TWO_D_TRACE:
        return problem.B
    raise ProblemError(f"no pinned gradient for kind {k}")


def _datum_for(problem: CellProblem, mesh: Mesh):
    k = problem.kind
    if k in JUMP_KINDS or k is Kind.GAMMA1:
        return StepDatum(problem.lam, mesh.orientation)
    if k is Kind.W1:
        return zero_datum(problem.dim)
    return AffineDatum(problem.A)


# ---------------------------------------------------------------------------
# LP assembly for the normal-form surface density
# ---------------------------------------------------------------------------

def _assemble_axis_terms(problem: CellProblem, mesh: Mesh, pin: np.ndarray, datum, side_terms: bool):
    """Per mesh axis: scalar absolute-value terms in the offset components
    along that axis' (padded) world normal, plus the boundary-term index set
    used for lexicographic tie-breaking.

    With ``side_terms`` (pure jump problems), boundary edges additionally
    emit energy-free datum-mismatch terms for the *other* axis directions;
    these enter only the tie-breaking pass, steering the returned minimizer
    to attain the boundary datum wherever the optimal face allows it.
    """
    from .fields import datum_values_on_piece, piece_measure, split_edge_at_midline

    dim = mesh.dim
    terms_by_axis = [[] for _ in range(dim)]
    boundary_sets: list[set[int]] = [set() for _ in range(dim)]
    side_by_axis = [[] for _ in range(dim)]
    dirs3 = padded_normal(mesh.frame.T)  # row a = padded world direction of axis a

    for e in range(len(mesh.int_axis)):
        a = int(mesh.int_axis[e])
        terms_by_axis[a].append(
            AbsTerm(
                weight=float(mesh.int_measure[e]),
                idx=(int(mesh.int_plus[e]), int(mesh.int_minus[e])),
                coef=(1.0, -1.0),
                const=0.0,
            )
        )

    step = isinstance(datum, StepDatum)
    for e in range(len(mesh.bnd_axis)):
        a = int(mesh.bnd_axis[e])
        cell = int(mesh.bnd_cell[e])
        pieces = (
            split_edge_at_midline(mesh, mesh.bnd_corners[e], a)
            if step
            else [mesh.bnd_corners[e]]
        )
        for piece in pieces:
            pts = piece @ mesh.frame.T
            gall = pts @ pin.T - datum_values_on_piece(datum, pts)
            measure = piece_measure(piece, a)
            gvals = gall @ dirs3[a]
            if np.max(np.abs(gvals - gvals[0])) == 0.0:
                boundary_sets[a].add(len(terms_by_axis[a]))
                terms_by_axis[a].append(
                    AbsTerm(weight=measure, idx=(cell,), coef=(1.0,), const=float(gvals[0]))
                )
            else:
                share = measure / len(gvals)
                for g in gvals:
                    boundary_sets[a].add(len(terms_by_axis[a]))
                    terms_by_axis[a].append(
                        AbsTerm(weight=share, idx=(cell,), coef=(1.0,), const=float(g))
                    )
            if side_terms:
                for b in range(dim):
                    if b == a:
                        continue
                    svals = gall @ dirs3[b]
                    if np.max(np.abs(svals - svals[0])) == 0.0:
                        side_by_axis[b].append(
                            AbsTerm(
                                weight=measure, idx=(cell,), coef=(1.0,), const=float(svals[0])
                            )
                        )
    return terms_by_axis, boundary_sets, side_by_axis


def _components(terms, nvars):
    """Connected components of the unknown-coupling graph of the terms."""
    parent = list(range(nvars))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for t in terms:
        for j in t.idx[1:]:
            union(t.idx[0], j)
    comp_vars: dict[int, list[int]] = {}
    for v in range(nvars):
        comp_vars.setdefault(find(v), []).append(v)
    comp_terms: dict[int, list[int]] = {r: [] for r in comp_vars}
    for k, t in enumerate(terms):
        comp_terms[find(t.idx[0])].append(k)
    return comp_vars, comp_terms


def _solve_axis(terms, nvars, boundary_set, side_terms, tie_break):
    """Solve one scalar program, component by component."""
    values = np.zeros(nvars)
    total = 0.0
    if not terms:
        return 0.0, values
    comp_vars, comp_terms = _components(terms, nvars)

    def _remap(term, remap):
        return AbsTerm(
            weight=term.weight,
            idx=tuple(remap[j] for j in term.idx),
            coef=term.coef,
            const=term.const,
        )

    for root, var_list in comp_vars.items():
        term_ids = comp_terms[root]
        if not term_ids:
            continue
        remap = {v: i for i, v in enumerate(var_list)}
        local = [_remap(terms[k], remap) for k in term_ids]
        secondary = None
        extra = None
        if tie_break:
            secondary = {i for i, k in enumerate(term_ids) if k in boundary_set}
            extra = [_remap(t, remap) for t in side_terms if t.idx[0] in remap]
        val, x = minimize_weighted_abs(
            local, len(var_list), secondary=secondary, secondary_terms=extra
        )
        total += val
        for v, i in remap.items():
            values[v] = x[i]
    return total, values


# ---------------------------------------------------------------------------
# bulk handling
# ---------------------------------------------------------------------------

def _bulk_value(problem: CellProblem, mesh: Mesh):
    """(bulk contribution to the objective, z field or None, certified)."""
    k = problem.kind
    density = problem.density
    ncells = mesh.ncells
    z = np.tile(problem.d, (ncells, 1)) if k in Z_KINDS else None

    if k in JUMP_KINDS or k in PSI1_KINDS or k is Kind.TWO_D_TRACE:
        return 0.0, z, True
    if density.bulk_form == dens.BULK_ZERO:
        if k is Kind.W_3DSD2D:
            # inner bulk density at the pinned gradient; the per-cell mean
            # field cancels inside the trace, hence no z dependence at all
            return float(dens.w_3d2dsd(problem.A, problem.B)), z, True
        return 0.0, z, True

    # custom bulk densities: exploratory, never certified
    if k in (Kind.W_3D2DSD, Kind.W_3DSD2D):
        raise UnsupportedProblemError(
            f"kind {k.value} integrates a once-relaxed bulk density, which has "
            "no closed form for custom initial densities"
        )
    if k is Kind.W_3DSD:
        pin = _pinned_gradient(problem)
        return float(density.bulk(pin)) * mesh.total_measure, None, False
    if k is Kind.W_3D2D:
        value, zopt = _minimize_mean_constrained_bulk(
            density.bulk, problem.A, problem.d, ncells
        )
        return value, zopt, False
    raise UnsupportedProblemError(f"unsupported bulk combination for kind {k.value}")


def _minimize_mean_constrained_bulk(bulk, A, d, ncells):
    """Minimize the cell average of ``bulk((A|z_T))`` subject to the mean of
    the per-cell values ``z_T`` being ``d``.

    Searches the constant field plus two-value laminates with cell-count
    weights (the natural discrete family; a laminate realizes the convex
    envelope direction by direction).  Exploratory feature: the result is an
    upper bound for the discrete class and is flagged uncertified.
    """
    from scipy.optimize import minimize

    d = np.asarray(d, dtype=float)

    def at(z):
        return float(bulk(np.column_stack([A, z])))

    best_val = at(d)
    best_z = np.tile(d, (ncells, 1))
    if ncells == 1:
        return best_val, best_z

    counts = sorted({max(1, round(f * ncells)) for f in (0.1, 0.25, 0.5)} | {1})
    for m in counts:
        if not 1 <= m < ncells:
            continue
        theta = m / ncells

        def objective(z1, theta=theta):
            z1 = np.asarray(z1)
            z2 = (d - theta * z1) / (1.0 - theta)
            return theta * at(z1) + (1.0 - theta) * at(z2)

        res = minimize(lambda z: objective(z), x0=d, method="Powell")
        if res.fun < best_val - 1e-12:
            best_val = float(res.fun)
            z1 = np.asarray(res.x)
            z2 = (d - theta * z1) / (1.0 - theta)
            best_z = np.vstack([np.tile(z1, (m, 1)), np.tile(z2, (ncells - m, 1))])
    return best_val, best_z


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def solve(problem: CellProblem) -> SolveResult:
    """Minimize the cell formula over the discrete class; see module docs."""
    k = problem.kind
    surface_form = problem.density.surface_form
    if k in PSI1_KINDS:
        if surface_form != dens.SURFACE_PSI1:
            raise UnsupportedProblemError(
                f"kind {k.value} is defined with the out-of-plane-relaxed "
                "surface integrand"
            )
        return _solve_psi1(problem)
    if surface_form != dens.SURFACE_NORMAL:
        raise UnsupportedProblemError(
            "only the normal-form surface density is linear-programmable; "
            f"got surface_form={surface_form!r}"
        )

    mesh = _mesh_for(problem)
    pin = _pinned_gradient(problem)
    datum = _datum_for(problem, mesh)
    if isinstance(datum, StepDatum):
        datum.check_mesh(mesh)

    bulk_value, z, certified = _bulk_value(problem, mesh)

    tie_break = k in JUMP_KINDS
    terms_by_axis, boundary_sets, side_by_axis = _assemble_axis_terms(
        problem, mesh, pin, datum, side_terms=tie_break
    )
    surf_value = 0.0
    offsets = np.zeros((mesh.ncells, 3))
    dirs3 = padded_normal(mesh.frame.T)
    for a in range(mesh.dim):
        val, p = _solve_axis(
            terms_by_axis[a], mesh.ncells, boundary_sets[a], side_by_axis[a], tie_break
        )
        surf_value += val
        offsets += p[:, None] * dirs3[a][None, :]

    if tie_break and mesh.dim == 2:
        # the out-of-plane offset component is costless under the normal
        # form; match the datum region so the returned trace is exact
        lam3 = float(problem.lam[2])
        mids = 0.5 * (mesh.cell_lo[:, 0] + mesh.cell_hi[:, 0])
        offsets[:, 2] += np.where(mids >= 0, lam3, 0.0)

    minimizer = SbvField(mesh, np.broadcast_to(pin, (mesh.ncells, 3, mesh.dim)).copy(), offsets)
    value = surf_value + bulk_value
    value_exact = surface_energy(minimizer, problem.density, datum=datum) + bulk_value
    return SolveResult(
        kind=k,
        value=float(value),
        value_exact=float(value_exact),
        minimizer=minimizer,
        n=problem.n,
        lower_bound_certified=certified,
        z=z,
        bulk_value=float(bulk_value),
    )


def _solve_psi1(problem: CellProblem) -> SolveResult:
    """Closed-form minimizers for the out-of-plane-relaxed integrand.

    Staggering the out-of-plane offsets makes every interior jump and every
    boundary mismatch carry a nonzero (or a.e. nonzero) third component,
    which the integrand does not charge; the discrete minimum is exactly 0.
    """
    mesh = _mesh_for(problem)
    pin = _pinned_gradient(problem)
    datum = _datum_for(problem, mesh)

    offsets = np.zeros((mesh.ncells, 3))
    if problem.kind is Kind.GAMMA1:
        lam = problem.lam
        mids = 0.5 * (mesh.cell_lo[:, 0] + mesh.cell_hi[:, 0])
        offsets[mids >= 0] = lam
        stagger = abs(lam[2]) + 1.0
    else:
        stagger = 2.0 * float(np.linalg.norm(problem.A)) + 1.0
    offsets[:, 2] += stagger * (1.0 + np.arange(mesh.ncells))

    minimizer = SbvField(mesh, np.broadcast_to(pin, (mesh.ncells, 3, mesh.dim)).copy(), offsets)
    value = surface_energy(minimizer, problem.density, datum=datum)
    return SolveResult(
        kind=problem.kind,
        value=float(value),
        value_exact=float(value),
        minimizer=minimizer,
        n=problem.n,
        lower_bound_certified=True,
        z=None,
        bulk_value=0.0,
    )


# ---------------------------------------------------------------------------
# studies and reports
# ---------------------------------------------------------------------------

@dataclass
class RefineRow:
    n: int
    value: float
    certified: bool


def refine_study(problem: CellProblem, n_list) -> list[RefineRow]:
    """Solve the same problem over a nested refinement ladder."""
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ProblemError("n_list must be nonempty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ProblemError("n_list must be strictly increasing")
    if any(b % a != 0 for a, b in zip(n_list, n_list[1:])):
        raise ProblemError("each refinement must divide the next (nested meshes)")

    def run(n):
        p = CellProblem(
            kind=problem.kind,
            n=n,
            A=problem.A,
            B=problem.B,
            d=problem.d,
            lam=problem.lam,
            orientation=problem.orientation,
            density=problem.density,
        )
        r = solve(p)
        return RefineRow(n=n, value=r.value, certified=r.lower_bound_certified)

    return ordered_map(run, n_list)


@dataclass
class PathCompareReport:
    left_bulk: float
    left_surface: float
    right_bulk: float
    right_surface: float

    @property
    def bulk_difference(self) -> float:
        return abs(self.left_bulk - self.right_bulk)

    @property
    def surface_difference(self) -> float:
        return abs(self.left_surface - self.right_surface)


def path_compare_numeric(A, B, d, lam, eta, n, density=None) -> PathCompareReport:
    """Solve both relaxation orders (reduce-then-relax vs relax-then-reduce)
    on the same data and report the value differences."""
    density = density or dens.interfacial_normal_pair()
    if density.bulk_form != dens.BULK_ZERO:
        raise ProblemError("path comparison requires a purely interfacial density")
    lb = solve(CellProblem(kind=Kind.W_3D2DSD, n=n, A=A, B=B, density=density))
    ls = solve(CellProblem(kind=Kind.H_3D2DSD, n=n, lam=lam, orientation=eta, density=density))
    rb = solve(CellProblem(kind=Kind.W_3DSD2D, n=n, A=A, B=B, d=d, density=density))
    rs = solve(CellProblem(kind=Kind.H_3DSD2D, n=n, lam=lam, orientation=eta, density=density))
    return PathCompareReport(
        left_bulk=lb.value, left_surface=ls.value, right_bulk=rb.value, right_surface=rs.value
    )


# ---------------------------------------------------------------------------
# problem JSON
# ---------------------------------------------------------------------------

def problem_from_json(text: str) -> CellProblem:
    """Problem spec file: {"kind", "A", "B", "d", "lambda", "eta", "n",
    "density"}; matrices row-major nested lists, density a built-in name."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON for problem file: {exc}") from exc
    if not isinstance(payload, dict) or "kind" not in payload or "n" not in payload:
        raise InputError("problem file must be an object with 'kind' and 'n'")
    try:
        kind = Kind(payload["kind"])
    except ValueError:
        raise InputError(f"unknown problem kind {payload['kind']!r}") from None
    density = dens.density_by_name(payload.get("density", "interfacial-normal"))
    if kind in PSI1_KINDS:
        density = dens.psi1_pair()

    def grab(key):
        return np.asarray(payload[key], dtype=float) if key in payload else None

    try:
        return CellProblem(
            kind=kind,
            n=int(payload["n"]),
            A=grab("A"),
            B=grab("B"),
            d=grab("d"),
            lam=grab("lambda"),
            orientation=grab("eta") if "eta" in payload else grab("nu"),
            density=density,
        )
    except ProblemError as exc:
        raise InputError(str(exc)) from exc


def result_to_json(result: SolveResult, minimizer_file: str | None = None) -> str:
    payload = {
        "kind": result.kind.value,
        "value": result.value,
        "value_exact": result.value_exact,
        "n": result.n,
        "certified": result.lower_bound_certified,
    }
    if minimizer_file is not None:
        payload["minimizer_file"] = minimizer_file
    return json.dumps(payload, indent=2)


__all__ = [
    "Kind",
    "CellProblem",
    "SolveResult",
    "solve",
    "closed_form",
    "refine_study",
    "RefineRow",
    "path_compare_numeric",
    "PathCompareReport",
    "problem_from_json",
    "result_to_json",
    "boundary_trace_gap",
]
