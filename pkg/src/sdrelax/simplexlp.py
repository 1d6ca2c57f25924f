"""Dense two-phase simplex and the weighted-absolute-value reformulation.

The cell problems reduce to minimizing ``sum_k w_k |a_k . x + c_k|`` over a
handful of coupled scalar unknowns.  Each absolute value gets a slack bounded
below by the affine expression and its negative; free unknowns are split into
positive parts; the resulting standard-form program is solved by a tableau
simplex with Bland's rule (entering: lowest eligible index; leaving: ratio
test with lowest-index tie break), which cannot cycle and is deterministic.

Problems here are small (tens of variables), so a dense tableau is the
simplest correct choice; no external solver is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleProblemError

PIVOT_EPS = 1e-11


@dataclass(frozen=True)
class AbsTerm:
    """One objective term ``weight * |sum_j coef_j x_idx_j + const|``."""

    weight: float
    idx: tuple[int, ...]
    coef: tuple[float, ...]
    const: float


def _pivot(tableau, basis, row, col):
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    basis[row] = col


def _iterate(tableau, basis, ncols):
    """Run simplex pivots until optimality; Bland's rule throughout."""
    m = len(basis)
    while True:
        reduced = tableau[-1, :ncols]
        entering = -1
        for j in range(ncols):
            if reduced[j] < -PIVOT_EPS:
                entering = j
                break
        if entering < 0:
            return
        ratios = np.full(m, np.inf)
        col = tableau[:m, entering]
        positive = col > PIVOT_EPS
        ratios[positive] = tableau[:m, -1][positive] / col[positive]
        best = np.inf
        leaving = -1
        for i in range(m):
            if ratios[i] < best - PIVOT_EPS or (
                ratios[i] < best + PIVOT_EPS and (leaving < 0 or basis[i] < basis[leaving])
            ):
                if ratios[i] < np.inf:
                    best = min(best, ratios[i])
                    leaving = i
        if leaving < 0:
            raise InfeasibleProblemError("linear program is unbounded")
        _pivot(tableau, basis, leaving, entering)


def solve_standard_form(c, A, b):
    """Minimize ``c . z`` subject to ``A z = b`` and ``z >= 0``.

    Two-phase method with artificial variables.  Returns ``(value, z)``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    flip = b < 0
    A = A.copy()
    A[flip] *= -1
    b = b.copy()
    b[flip] *= -1

    # phase 1
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = A
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[-1, :n] = -A.sum(axis=0)
    tableau[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    _iterate(tableau, basis, n + m)
    if tableau[-1, -1] < -1e-8:
        raise InfeasibleProblemError("linear program is infeasible")
    # drive leftover artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if abs(tableau[i, j]) > PIVOT_EPS:
                    _pivot(tableau, basis, i, j)
                    break

    # phase 2
    keep = [i for i in range(m) if basis[i] < n]
    tableau2 = np.zeros((len(keep) + 1, n + 1))
    tableau2[:-1, :n] = tableau[keep, :n]
    tableau2[:-1, -1] = tableau[keep, -1]
    basis2 = [basis[i] for i in keep]
    tableau2[-1, :n] = c
    for i, bi in enumerate(basis2):
        tableau2[-1] -= c[bi] * tableau2[i]
    _iterate(tableau2, basis2, n)

    z = np.zeros(n)
    for i, bi in enumerate(basis2):
        z[bi] = tableau2[i, -1]
    return float(c @ z), z


def _build_standard_form(terms, nvars, extra_rows=None):
    """Standard form for the weighted-abs problem.

    Variables: ``x+ (nvars) | x- (nvars) | s (nterms) | slacks``.  For term k
    the rows are ``a.x - s_k <= -c_k`` and ``-a.x - s_k <= c_k``.
    ``extra_rows`` are additional ``(coeffs_on_s, rhs)`` budget inequalities.
    """
    nterms = len(terms)
    extra_rows = extra_rows or []
    nslack = 2 * nterms + len(extra_rows)
    n = 2 * nvars + nterms + nslack
    m = 2 * nterms + len(extra_rows)
    A = np.zeros((m, n))
    b = np.zeros(m)
    for k, t in enumerate(terms):
        for j, cf in zip(t.idx, t.coef):
            A[2 * k, j] = cf
            A[2 * k, nvars + j] = -cf
            A[2 * k + 1, j] = -cf
            A[2 * k + 1, nvars + j] = cf
        A[2 * k, 2 * nvars + k] = -1.0
        A[2 * k + 1, 2 * nvars + k] = -1.0
        A[2 * k, 2 * nvars + nterms + 2 * k] = 1.0
        A[2 * k + 1, 2 * nvars + nterms + 2 * k + 1] = 1.0
        b[2 * k] = -t.const
        b[2 * k + 1] = t.const
    for r, (s_coeffs, rhs) in enumerate(extra_rows):
        row = 2 * nterms + r
        for k, cf in s_coeffs:
            A[row, 2 * nvars + k] = cf
        A[row, 2 * nvars + nterms + 2 * nterms + r] = 1.0
        b[row] = rhs
    return A, b, n


def minimize_weighted_abs(terms, nvars, secondary=None, secondary_terms=None):
    """Exact minimum of ``sum_k w_k |a_k . x + c_k|`` over ``x`` in R^nvars.

    When ``secondary`` (a set of term indices) or ``secondary_terms`` (extra
    terms with no primary weight) is given, a second pass picks, among the
    near-optima of the primary objective (slack 1e-11), a point minimizing
    the weighted sum of those terms; this resolves ties deterministically
    toward e.g. boundary-matching minimizers.  The returned value is always
    the first-pass optimum; the returned point attains it up to the slack.

    Returns ``(value, x)``.
    """
    terms = list(terms)
    nterms = len(terms)
    if nterms == 0:
        return 0.0, np.zeros(nvars)

    def objective_at(x):
        return sum(
            t.weight * abs(sum(cf * x[j] for j, cf in zip(t.idx, t.coef)) + t.const)
            for t in terms
        )

    A, b, n = _build_standard_form(terms, nvars)
    c = np.zeros(n)
    for k, t in enumerate(terms):
        c[2 * nvars + k] = t.weight
    value, z = solve_standard_form(c, A, b)
    x = z[:nvars] - z[nvars : 2 * nvars]
    value = float(objective_at(x))

    if secondary or secondary_terms:
        budget = value + 1e-11 * (1.0 + abs(value))
        all_terms = terms + list(secondary_terms or [])
        A2, b2, n2 = _build_standard_form(
            all_terms, nvars, extra_rows=[([(k, t.weight) for k, t in enumerate(terms)], budget)]
        )
        c2 = np.zeros(n2)
        for k in secondary or ():
            c2[2 * nvars + k] = terms[k].weight
        for k in range(nterms, len(all_terms)):
            c2[2 * nvars + k] = all_terms[k].weight
        _, z2 = solve_standard_form(c2, A2, b2)
        x = z2[:nvars] - z2[nvars : 2 * nvars]

    return value, x
