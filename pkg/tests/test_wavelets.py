"""Spline wavelet machinery against exact rational (sympy) oracles."""

import math

import numpy as np
import pytest
import sympy as sp

from halfcos.grids import CoefficientMap, GridFunction, UNIT
from halfcos.wavelets import (
    DualCoefficientSequence,
    PiecewiseLinear,
    biorthogonality_residual_1d,
    bspline_value,
    cw_analyze,
    cw_synthesize,
    dual_coefficients,
    dual_father_closed_form,
    dual_piecewise,
    father,
    gram_sequence,
    mother,
    mother_from_qcoeffs,
    product_integral,
    psi_eval,
    psi_piecewise,
    psi_support,
)

R = sp.Rational

# the mother wavelet with exact rational data, for sympy-side integrals
_MOTHER_BP_R = [R(i, 2) for i in range(7)]
_MOTHER_VAL_R = [0, R(1, 12), R(-1, 2), R(5, 6), R(-1, 2), R(1, 12), 0]
_FATHER_BP_R = [0, 1, 2]
_FATHER_VAL_R = [0, 1, 0]


def sympy_product_integral(bp1, v1, bp2, v2, shift=0):
    """Exact integral of two rational piecewise-linear functions."""
    x = sp.symbols("x")
    bp2 = [b + shift for b in bp2]
    cuts = sorted(set(bp1) | set(bp2))
    total = R(0)

    def seg_val(bp, v, a, b, t):
        for lo, hi, va, vb in zip(bp[:-1], bp[1:], v[:-1], v[1:]):
            if lo <= a and b <= hi:
                return va + (vb - va) * (t - lo) / (hi - lo)
        return R(0)

    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= max(bp1[0], bp2[0]) or a >= min(bp1[-1], bp2[-1]):
            continue
        f1 = seg_val(bp1, v1, a, b, x)
        f2 = seg_val(bp2, v2, a, b, x)
        total += sp.integrate(f1 * f2, (x, a, b))
    return total


def test_mother_equals_q_coefficient_assembly():
    a, b = mother(), mother_from_qcoeffs()
    assert a.breakpoints == b.breakpoints
    assert np.allclose(a.values, b.values, atol=1e-15)


def test_mother_breakpoint_values():
    w = mother()
    assert w.support == (0.0, 3.0)
    assert np.allclose(
        w(np.arange(7) / 2.0),
        [0.0, 1.0 / 12.0, -0.5, 5.0 / 6.0, -0.5, 1.0 / 12.0, 0.0],
    )


def test_vanishing_moments_exact():
    w = mother()
    assert abs(w.moment(0)) < 1e-15
    assert abs(w.moment(1)) < 1e-15
    assert abs(w.moment(2)) > 1e-3  # exactly two vanishing moments
    with pytest.raises(ValueError):
        w.moment(3)


def test_bspline_values():
    x = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    assert np.allclose(bspline_value(2, x), [0.0, 1.0, 0.0, 0.0, 0.0])
    n4 = bspline_value(4, x)
    assert np.allclose(n4, [0.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 0.0])


@pytest.mark.parametrize("eps", [-1, 0])
def test_gram_sequence_matches_sympy(eps):
    if eps == -1:
        bp, vals = _FATHER_BP_R, _FATHER_VAL_R
    else:
        bp, vals = _MOTHER_BP_R, _MOTHER_VAL_R
    got = gram_sequence(eps)
    width = int(bp[-1])
    for n in range(-width, width + 1):
        exact = sympy_product_integral(bp, vals, bp, vals, shift=n)
        assert abs(got.get(n, 0.0) - float(exact)) < 1e-15
    if eps == -1:
        assert got == pytest.approx({-1: 1 / 6, 0: 2 / 3, 1: 1 / 6})


def test_product_integral_matches_sympy_cross_pair():
    exact = sympy_product_integral(
        _FATHER_BP_R, _FATHER_VAL_R, _MOTHER_BP_R, _MOTHER_VAL_R, shift=0
    )
    got = product_integral(father(), mother())
    assert abs(got - float(exact)) < 1e-16


def test_dual_father_closed_form_agreement():
    seq = dual_coefficients(-1, n_max=40)
    for n in range(-20, 21):
        assert abs(seq.a(n) - dual_father_closed_form(n)) < 1e-9


def test_dual_decay_base():
    seq = dual_coefficients(-1, n_max=40)
    assert abs(seq.decay_base - (2.0 + math.sqrt(3.0))) < 1e-6
    assert seq.tail_bound < 1e-10


def test_dual_sequence_json_round_trip():
    seq = dual_coefficients(0, n_max=30, tol=1e-8)
    back = DualCoefficientSequence.from_json(seq.to_json())
    assert back.eps == seq.eps and back.n_max == seq.n_max
    assert np.array_equal(back.coefficients, seq.coefficients)
    assert back.decay_base == seq.decay_base


def test_psi_eval_levels():
    x = np.linspace(-1.0, 4.0, 41)
    assert np.allclose(psi_eval(-1, 0, x), father()(x))
    assert np.allclose(psi_eval(0, 0, x), mother()(x))
    assert np.allclose(psi_eval(-2, 0, x), 0.0)
    # dyadic compression: psi_{l,k}(x) = psi(2^l x - k)
    assert np.allclose(psi_eval(2, 3, x), mother()(4.0 * x - 3.0))


def test_psi_support_bounds():
    for l, k in [(-1, 2), (0, -1), (2, 5)]:
        lo, hi = psi_support(l, k)
        w = psi_piecewise(l, k)
        assert (lo, hi) == w.support
        eps = 1e-9
        assert w(np.array([lo - eps, hi + eps])).tolist() == [0.0, 0.0]


def test_biorthogonality_residual_small():
    res = biorthogonality_residual_1d(range(-1, 3), range(-3, 4), n_max=40)
    assert res < 1e-9


def test_biorthogonality_2d_generic_route():
    # dual analysis of a tensor primal wavelet through the generic 2-D
    # quadrature path returns a single unit coefficient
    jbar, kbar = (1, 0), (1, 0)

    def f(x, y):
        return psi_eval(jbar[0], kbar[0], x) * psi_eval(jbar[1], kbar[1], y)

    got = cw_analyze(
        f=f,
        J=2,
        box=((-2.0, 3.0), (-1.0, 4.0)),
        kind="dual",
        f_breaks=(psi_piecewise(*map(int, (jbar[0], kbar[0]))).breakpoints,
                  psi_piecewise(*map(int, (jbar[1], kbar[1]))).breakpoints),
        prune=1e-9,
    )
    assert abs(got.get((jbar, kbar)) - 1.0) < 1e-9
    others = [v for key, v in got.entries.items() if key != (jbar, kbar)]
    assert not others


def test_tensor_route_matches_generic_2d():
    f1 = lambda x: np.maximum(0.0, 1.0 - np.abs(4.0 * x - 2.0))
    f2 = lambda x: np.asarray(x, dtype=float)
    tens = cw_analyze(
        J=1,
        box=((0.0, 1.0), (0.0, 1.0)),
        kind="dual",
        tensor_factors=[f1, f2],
        f_breaks=[(0.25, 0.5, 0.75), ()],
    )
    gen = cw_analyze(
        f=lambda x, y: f1(x) * f2(y),
        J=1,
        box=((0.0, 1.0), (0.0, 1.0)),
        kind="dual",
        f_breaks=((0.25, 0.5, 0.75), ()),
    )
    keys = set(tens.entries) | set(gen.entries)
    worst = max(abs(tens.get(key) - gen.get(key)) for key in keys)
    assert worst < 1e-12


def test_dual_analysis_primal_synthesis_reconstructs_spline():
    # piecewise-linear f with knots on the level-2 grid lies in the span
    # of wavelets up to level 1; the expansion reproduces it exactly
    f = lambda x: np.maximum(0.0, 1.0 - np.abs(4.0 * x - 2.0))
    breaks = tuple(np.arange(-8, 13) / 4.0)
    lam = cw_analyze(
        J=1, box=((0.0, 1.0),), kind="dual", tensor_factors=[f], f_breaks=[breaks]
    )
    rec = cw_synthesize(lam, 6, using="primal")
    ref = GridFunction.from_callable(f, 1, 6, UNIT)
    assert np.max(np.abs(rec.values - ref.values)) < 1e-12


def test_lambda_scale_invariance():
    # lambda_{l+1,k}(f(2.)) = lambda_{l,k}(f): the 2^{l_+} factor in the
    # dual pairing absorbs dyadic refinement
    f = lambda x: np.maximum(0.0, 1.0 - np.abs(4.0 * x - 2.0))
    f2 = lambda x: f(2.0 * np.asarray(x, dtype=float))
    b1 = tuple(np.arange(0, 5) / 4.0)
    b2 = tuple(np.arange(0, 5) / 8.0)
    lam1 = cw_analyze(J=1, box=((0.0, 1.0),), kind="dual", tensor_factors=[f], f_breaks=[b1])
    lam2 = cw_analyze(J=2, box=((0.0, 0.5),), kind="dual", tensor_factors=[f2], f_breaks=[b2])
    for l in (0, 1):
        for k in range(-2, 8):
            a = lam1.get(((l,), (k,)))
            b = lam2.get(((l + 1,), (k,)))
            assert abs(a - b) < 1e-10


def test_dual_piecewise_father_integer_grid():
    w = dual_piecewise(-1, 0, n_max=30)
    # sum_n a_n N_2(x - n) interpolates a at the hat peaks x = n + 1
    for n in range(-5, 6):
        assert abs(w(np.array([n + 1.0]))[0] - dual_father_closed_form(n)) < 1e-8


def test_analyze_accepts_array_breakpoints():
    # f_breaks given as numpy arrays must behave like tuples in every branch
    f = lambda x: np.maximum(0.0, 1.0 - np.abs(4.0 * x - 2.0))
    breaks = np.arange(-8, 13) / 4.0
    lam_t = cw_analyze(
        J=1, box=((0.0, 1.0),), kind="dual", tensor_factors=[f], f_breaks=[breaks]
    )
    lam_f = cw_analyze(f=f, J=1, box=((0.0, 1.0),), kind="dual", f_breaks=breaks)
    keys = set(lam_t.entries) | set(lam_f.entries)
    assert max(abs(lam_t.get(k) - lam_f.get(k)) for k in keys) < 1e-10
    g = lambda x, y: f(x) * f(y)
    lam2 = cw_analyze(
        f=g,
        J=1,
        box=((0.0, 1.0), (0.0, 1.0)),
        kind="dual",
        f_breaks=(breaks, breaks),
    )
    for (l, k), v in lam_f.entries.items():
        for (l2, k2), v2 in lam_f.entries.items():
            got = lam2.get(((l[0], l2[0]), (k[0], k2[0])))
            assert abs(got - v * v2) < 1e-9
