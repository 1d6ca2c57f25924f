import numpy as np
import pytest

from sdrelax.constructions import (
    SequenceKind,
    SequenceParams,
    build,
    datum_for,
    decay_table,
    energy,
    frame_threshold,
)
from sdrelax.densities import interfacial_normal_pair, psi1_pair
from sdrelax.errors import ProblemError
from sdrelax.fields import average_gradient, boundary_trace_gap, jumps, zero_datum
from sdrelax.meshes import build_mesh
from sdrelax.solver import CellProblem, Kind, solve

PSI1 = psi1_pair()
NORMAL = interfacial_normal_pair()


def gamma_params(lam, eta, n):
    return SequenceParams(kind="GAMMA1_SPLIT", n=n, lam=np.asarray(lam, float),
                          eta=np.asarray(eta, float))


# ---------------------------------------------------------------------------
# gamma split
# ---------------------------------------------------------------------------

def test_gamma_split_n2_jump_locations():
    params = gamma_params([1, 0, 0], [0, 1], 2)
    fld = build(params)
    mesh = fld.mesh
    inner = (2 - 1) / (2 * 2)  # half-width of the shrunken square
    for rec in jumps(fld):
        corners = mesh.int_corners[rec.edge_index]
        on_midline = np.max(np.abs(corners[:, 0])) <= inner + 1e-12 and np.all(
            np.abs(corners[:, 0]) <= 1e-12
        ) or np.all(corners[:, 0] == 0.0)
        on_inner_boundary = np.max(np.abs(corners)) <= inner + 1e-12 and (
            np.all(np.abs(corners[:, 0]) == inner) or np.all(np.abs(corners[:, 1]) == inner)
        )
        assert on_midline or on_inner_boundary, corners


def test_gamma_split_out_of_plane_shift_n2():
    fld = build(gamma_params([1, 0, 0], [0, 1], 2))
    thirds = {round(v, 12) for v in fld.offsets[:, 2]}
    assert thirds == {-0.5, 0.0, 0.5}


def test_gamma_split_paid_set_matches_midline_segment():
    # jump third components vanish exactly on the midline outside the
    # shrunken square, nowhere else, when the jump vector is planar
    lam = np.array([2.0, -1.0, 0.0])
    for n in (2, 3, 4, 8):
        fld = build(gamma_params(lam, [1, 0], n))
        mesh = fld.mesh
        a = (n - 1) / (2 * n)
        for rec in jumps(fld):
            corners = mesh.int_corners[rec.edge_index]
            third_zero = np.max(np.abs(rec.values[:, 2])) == 0.0
            mid = corners.mean(axis=0)
            on_outer_midline = np.all(corners[:, 0] == 0.0) and abs(mid[1]) >= a - 1e-12
            assert third_zero == on_outer_midline


def test_gamma_split_energy_decay_exact():
    lam = np.array([2.0, 1.0, 0.0])
    eta = np.array([1.0, 0.0])
    for n in (2, 4, 8, 16, 32, 64):
        p = gamma_params(lam, eta, n)
        e = energy(build(p), PSI1, datum=datum_for(p))
        assert e == pytest.approx(abs(lam[:2] @ eta) / n, abs=1e-13)
        assert e <= np.linalg.norm(lam) / n + 1e-13


def test_gamma_split_free_when_jump_has_out_of_plane_component():
    p = gamma_params([1.0, 0.5, 0.25], [1, 0], 4)
    assert energy(build(p), PSI1, datum=datum_for(p)) == 0.0


def test_gamma_split_trace_matches_datum():
    p = gamma_params([1.0, -2.0, 3.0], [0, 1], 4)
    assert boundary_trace_gap(build(p), datum_for(p)) <= 1e-12


def test_affine_field_energy_zero():
    from sdrelax.fields import SbvField

    mesh = build_mesh(2, 3, np.array([1.0, 0.0]))
    fld = SbvField.affine(mesh, np.arange(6.0).reshape(3, 2))
    assert energy(fld, NORMAL) == 0.0
    assert energy(fld, PSI1) == 0.0


# ---------------------------------------------------------------------------
# frame construction
# ---------------------------------------------------------------------------

def test_frame_m_zero_offsets_alternate():
    params = SequenceParams(kind="FRAME_W1", n=4, M=np.zeros((3, 2)))
    fld = build(params)
    assert np.max(np.abs(fld.gradients)) == 0.0
    inner = np.unique(np.round(fld.offsets[:, 2], 14))
    assert set(inner) == {-1.0 / 16, 0.0, 1.0 / 16}
    assert energy(fld, PSI1, datum=zero_datum(2)) == 0.0
    assert boundary_trace_gap(fld, zero_datum(2)) == 0.0


def test_frame_inter_rectangle_jumps_planar_m():
    # with a planar gradient matrix the out-of-plane jump across adjacent
    # rectangles comes from the alternating shifts alone: +-2/n^2
    n = 8
    M = np.array([[1.0, 2.0], [-0.5, 0.25], [0.0, 0.0]])
    params = SequenceParams(kind="FRAME_W1", n=n, M=M)
    fld = build(params)
    mesh = fld.mesh
    a = (n - 1) / (2 * n)
    w = (n - 1) / n**2
    found = 0
    for rec in jumps(fld):
        corners = mesh.int_corners[rec.edge_index]
        if np.max(np.abs(corners)) >= a - 1e-12:
            continue  # not strictly inside the shrunken square
        if int(mesh.int_axis[rec.edge_index]) != 0:
            continue
        mid = corners.mean(axis=0)
        k = (mid[0] + a) / w
        if abs(k - round(k)) > 1e-9:
            continue  # interior grid line of a single rectangle
        found += 1
        assert np.all(np.abs(np.abs(rec.values[:, 2]) - 2.0 / n**2) <= 1e-15)
    assert found > 0


def test_frame_average_gradient_and_trace_gap():
    rng = np.random.default_rng(12)
    M = rng.uniform(-2, 2, (3, 2))
    for n in (2, 4, 8):
        fld = build(SequenceParams(kind="FRAME_W1", n=n, M=M))
        assert np.allclose(average_gradient(fld), M, atol=1e-12)
        gap = boundary_trace_gap(fld, zero_datum(2))
        assert gap <= 1.5 * np.linalg.norm(M) / n


def test_frame_energy_bound_and_slope():
    rng = np.random.default_rng(4)
    M = np.vstack([rng.uniform(-3, 3, (2, 2)), np.zeros((1, 2))])
    rows = decay_table(SequenceParams(kind="FRAME_W1", n=4, M=M), PSI1, [4, 8, 16, 32])
    for row in rows:
        assert row.within_bound
    assert rows[-1].slope_so_far <= -0.8


def test_frame_generic_m_is_free():
    M = np.array([[1.0, 0.0], [0.0, 1.0], [0.7, -0.3]])
    rows = decay_table(SequenceParams(kind="FRAME_W1", n=4, M=M), PSI1, [4, 8, 16])
    assert all(r.energy == 0.0 for r in rows)
    assert frame_threshold(M) == int(np.ceil(2.0 / 0.7)) + 2
    notes = [r.note for r in rows]
    assert notes[0] == "below-threshold" and notes[-1] == ""


def test_frame_dominates_solver_value():
    # the solver's pinned-gradient minimum can only improve on the explicit
    # competitor's overestimated energy
    M = np.array([[1.5, -0.5], [0.25, 2.0], [0.0, 0.0]])
    for n in (4, 8):
        p = SequenceParams(kind="FRAME_W1", n=n, M=M)
        comp = energy(build(p), PSI1, datum=datum_for(p))
        r = solve(CellProblem(kind=Kind.W1, n=n, A=M))
        assert r.value <= comp + 1e-9


# ---------------------------------------------------------------------------
# staircase trace competitor
# ---------------------------------------------------------------------------

def test_staircase_energy_approaches_componentwise_trace():
    A = np.vstack([np.eye(2), np.zeros((1, 2))])
    B = np.zeros((3, 2))
    prev = None
    for n in (4, 8, 16, 32):
        p = SequenceParams(kind="STAIRCASE_TRACE", n=n, A=A, B=B)
        e = energy(build(p), NORMAL, datum=datum_for(p))
        assert e <= 2.0 + 2.0 / n + 1e-12
        if prev is not None:
            assert abs(e - 2.0) <= abs(prev - 2.0) + 1e-12
        prev = e


def test_staircase_decay_rows_within_bound():
    rng = np.random.default_rng(6)
    A = rng.uniform(-3, 3, (3, 2))
    B = rng.uniform(-3, 3, (3, 2))
    rows = decay_table(
        SequenceParams(kind="STAIRCASE_TRACE", n=2, A=A, B=B), NORMAL, [2, 4, 8, 16]
    )
    assert all(r.within_bound for r in rows)


# ---------------------------------------------------------------------------
# parameter validation
# ---------------------------------------------------------------------------

def test_sequence_params_validation():
    with pytest.raises(ProblemError):
        SequenceParams(kind="FRAME_W1", n=1, M=np.zeros((3, 2)))
    with pytest.raises(ProblemError):
        SequenceParams(kind="FRAME_W1", n=4, M=np.zeros((2, 3)))
    with pytest.raises(ProblemError):
        SequenceParams(kind="GAMMA1_SPLIT", n=2, lam=np.zeros(2), eta=np.array([1.0, 0]))
    with pytest.raises(ProblemError):
        SequenceParams(kind="STAIRCASE_TRACE", n=2, A=np.zeros((3, 2)), B=None)
    with pytest.raises(ProblemError):
        decay_table(gamma_params([1, 0, 0], [1, 0], 2), PSI1, [4, 2])
    assert SequenceKind("GAMMA1_SPLIT") is SequenceKind.GAMMA1_SPLIT
