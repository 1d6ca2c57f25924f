import numpy as np
import pytest
from scipy.optimize import linprog

from sdrelax.errors import InfeasibleProblemError
from sdrelax.simplexlp import AbsTerm, minimize_weighted_abs, solve_standard_form


def scipy_reference(terms, nvars):
    nterms = len(terms)
    n = nvars + nterms
    c = np.zeros(n)
    A, b = [], []
    for k, t in enumerate(terms):
        c[nvars + k] = t.weight
        r1, r2 = np.zeros(n), np.zeros(n)
        for j, cf in zip(t.idx, t.coef):
            r1[j] = cf
            r2[j] = -cf
        r1[nvars + k] = -1
        r2[nvars + k] = -1
        A += [r1, r2]
        b += [-t.const, t.const]
    res = linprog(
        c,
        A_ub=np.asarray(A),
        b_ub=np.asarray(b),
        bounds=[(None, None)] * nvars + [(0, None)] * nterms,
        method="highs",
    )
    assert res.status == 0
    return res.fun


def random_terms(rng):
    nvars = int(rng.integers(1, 7))
    nterms = int(rng.integers(1, 12))
    terms = []
    for _ in range(nterms):
        k = int(rng.integers(1, min(nvars, 3) + 1))
        idx = tuple(int(i) for i in rng.choice(nvars, size=k, replace=False))
        coef = tuple(float(c) for c in rng.uniform(-2, 2, size=k))
        terms.append(
            AbsTerm(float(rng.uniform(0.05, 3)), idx, coef, float(rng.uniform(-3, 3)))
        )
    return terms, nvars


def test_matches_scipy_on_random_instances():
    rng = np.random.default_rng(0)
    for _ in range(200):
        terms, nvars = random_terms(rng)
        value, x = minimize_weighted_abs(terms, nvars)
        ref = scipy_reference(terms, nvars)
        assert value == pytest.approx(ref, abs=1e-8 * (1 + abs(ref)))
        # returned point achieves the reported value
        check = sum(
            t.weight * abs(sum(cf * x[j] for j, cf in zip(t.idx, t.coef)) + t.const)
            for t in terms
        )
        assert check == pytest.approx(value, abs=1e-10 * (1 + abs(value)))


def test_secondary_phase_preserves_optimum_and_breaks_ties():
    w = 1.0
    terms = [
        AbsTerm(w, (0,), (1.0,), 0.0),
        AbsTerm(w, (1, 0), (1.0, -1.0), 0.0),
        AbsTerm(w, (2, 1), (1.0, -1.0), 0.0),
        AbsTerm(w, (2,), (1.0,), -1.0),
    ]
    v1, _ = minimize_weighted_abs(terms, 3)
    v2, x2 = minimize_weighted_abs(terms, 3, secondary={0, 3})
    assert v1 == pytest.approx(1.0, abs=1e-11)
    assert v2 == pytest.approx(v1, abs=1e-10)
    assert abs(x2[0]) <= 1e-10 and abs(x2[2] - 1.0) <= 1e-10


def test_secondary_extra_terms():
    # minimum is flat in x1; the extra term pins it
    terms = [AbsTerm(1.0, (0,), (1.0,), -2.0)]
    extra = [AbsTerm(1.0, (1, 0), (1.0, -1.0), 0.0)]
    value, x = minimize_weighted_abs(terms, 2, secondary=set(), secondary_terms=extra)
    assert value == pytest.approx(0.0, abs=1e-11)
    assert x[0] == pytest.approx(2.0, abs=1e-10)
    assert x[1] == pytest.approx(2.0, abs=1e-10)


def test_degenerate_inputs():
    assert minimize_weighted_abs([], 3) == (0.0, pytest.approx(np.zeros(3)))
    value, x = minimize_weighted_abs([AbsTerm(2.0, (0,), (1.0,), 5.0)], 1)
    assert value == pytest.approx(0.0, abs=1e-11)
    assert x[0] == pytest.approx(-5.0, abs=1e-10)


def test_standard_form_detects_infeasibility():
    # x >= 0 with x = -1
    with pytest.raises(InfeasibleProblemError):
        solve_standard_form(np.array([1.0]), np.array([[1.0]]), np.array([-1.0]))
