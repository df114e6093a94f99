"""Lattice and net rules against exact node sets, counting properties, and
closed-form error rates."""

import math
from fractions import Fraction

import numpy as np
import pytest

from halfcos.cubature import (
    CubatureRule,
    convergence_experiment,
    digital_net,
    fibonacci_number,
    fibonacci_rule,
    integrate,
    random_shift,
    rank1_lattice,
    shifted_mean_error,
    tent_transform_rule,
)
from halfcos.errors import ConfigError
from halfcos.grids import tent


def test_fibonacci_numbers():
    got = [fibonacci_number(n) for n in range(1, 10)]
    assert got == [1, 1, 2, 3, 5, 8, 13, 21, 34]
    with pytest.raises(ConfigError):
        fibonacci_number(0)


def test_fibonacci_rule_nodes_exact():
    rule = fibonacci_rule(5)
    assert rule.n == 5 and rule.d == 2
    j = np.arange(5)
    assert np.array_equal(rule.nodes[:, 0], j / 5.0)
    assert np.array_equal(rule.nodes[:, 1], (3 * j % 5) / 5.0)
    assert rule.provenance == "fibonacci(5)"
    with pytest.raises(ConfigError):
        fibonacci_rule(1)


def test_fibonacci_is_the_rank1_lattice():
    assert np.array_equal(fibonacci_rule(6).nodes, rank1_lattice((1, 5), 8).nodes)


def test_character_exactness_brute_force():
    # rank-1 rule integrates exp(2 pi i k.x) to its exact value (one when
    # k.z = 0 mod n, zero otherwise); scan every pair with |k_i| <= 10
    rule = fibonacci_rule(7)  # n = 13, z = (1, 8)
    for k1 in range(-10, 11):
        for k2 in range(-10, 11):
            got = integrate(
                rule, lambda x, y: np.exp(2j * np.pi * (k1 * x + k2 * y))
            )
            want = 1.0 if (k1 + 8 * k2) % 13 == 0 else 0.0
            assert abs(got - want) < 1e-12


def test_radical_inverse_column():
    rule = digital_net(3, 1)
    want = [0.0, 0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]
    assert np.array_equal(rule.nodes[:, 0], np.array(want))


@pytest.mark.parametrize("m", [3, 4, 5])
def test_net_equidistribution_counting(m):
    # every dyadic box of volume 2^-m holds exactly one node, for all splits
    rule = digital_net(m, 2)
    for a in range(m + 1):
        b = m - a
        ix = np.floor(rule.nodes[:, 0] * 2**a).astype(int)
        iy = np.floor(rule.nodes[:, 1] * 2**b).astype(int)
        assert len(set(zip(ix.tolist(), iy.tolist()))) == 2**m


def test_interlaced_net_digits():
    # order-2 interlacing alternates the digits of an underlying 2d net
    base = digital_net(3, 2)
    z = digital_net(3, 1, alpha=2).nodes[:, 0]
    x, y = base.nodes[:, 0], base.nodes[:, 1]
    assert np.array_equal(np.floor(4 * z), 2 * np.floor(2 * x) + np.floor(2 * y))
    assert np.array_equal(
        np.floor(16 * z) % 4, 2 * (np.floor(4 * x) % 2) + (np.floor(4 * y) % 2)
    )
    assert np.all((0.0 <= z) & (z < 1.0))


def test_net_argument_guards():
    with pytest.raises(ConfigError):
        digital_net(21, 2)
    with pytest.raises(ConfigError):
        digital_net(4, 2, alpha=3)
    with pytest.raises(ConfigError):
        digital_net(4, 14)
    with pytest.raises(ConfigError):
        digital_net(4, 7, alpha=2)  # needs a 14-dimensional table


def test_weights_are_rational_and_uniform():
    for rule in (fibonacci_rule(7), digital_net(5, 3)):
        assert rule.weight_sum_exact() == Fraction(1)
        assert np.all(rule.weights == 1.0 / rule.n)
    with pytest.raises(ConfigError):
        CubatureRule(np.zeros((4, 2)), np.full(3, 0.25), "bad")


def test_tent_rule_is_composition():
    # transforming the nodes and periodizing the integrand are the same sum
    rule = digital_net(6, 2)
    f = lambda x, y: np.exp(x) * (y - 0.3) ** 2
    a = integrate(tent_transform_rule(rule), f)
    b = integrate(rule, lambda x, y: f(tent(x), tent(y)))
    assert a == b
    assert tent_transform_rule(rule).provenance.startswith("tent(")


def test_integrate_closed_forms():
    rule = rank1_lattice((1,), 64)
    assert integrate(rule, lambda x: np.ones_like(x)) == 1.0
    got = integrate(rule, lambda x: x)
    assert got == pytest.approx(63.0 / 128.0, rel=1e-15)
    cplx = integrate(digital_net(4, 1), lambda x: np.exp(2j * np.pi * 0 * x))
    assert isinstance(cplx, float) and cplx == 1.0


def test_random_shift_and_mean_error_are_seeded():
    rule = fibonacci_rule(8)
    a = random_shift(rule, np.random.default_rng(5))
    b = random_shift(rule, np.random.default_rng(5))
    assert np.array_equal(a.nodes, b.nodes)
    assert np.all((0.0 <= a.nodes) & (a.nodes < 1.0))
    assert a.weights is rule.weights
    f = lambda x, y: np.exp(x + y)
    exact = (math.e - 1.0) ** 2
    e1 = shifted_mean_error(rule, f, exact, shifts=4, seed=9)
    e2 = shifted_mean_error(rule, f, exact, shifts=4, seed=9)
    assert e1 == e2 and e1 > 0.0


def test_rate_fit_recovers_exact_rectangle_rate():
    # left rectangle rule on f(x) = x errs by exactly 1/(2n): slope -1
    fit = convergence_experiment(
        lambda i: rank1_lattice((1,), 2**i), lambda x: x, 0.5, range(2, 9)
    )
    assert fit.slope == pytest.approx(-1.0, abs=1e-9)
    assert fit.intercept == pytest.approx(-1.0, abs=1e-9)
    assert fit.residual < 1e-9
    assert fit.ns == [2**i for i in range(2, 9)]
    for n, e in zip(fit.ns, fit.errors):
        assert e == pytest.approx(0.5 / n, rel=1e-12)


def test_rate_fit_log_correction_steepens_slope():
    base = convergence_experiment(
        lambda i: rank1_lattice((1,), 2**i), lambda x: x, 0.5, range(2, 9)
    )
    corr = convergence_experiment(
        lambda i: rank1_lattice((1,), 2**i),
        lambda x: x,
        0.5,
        range(2, 9),
        log_exponent=1.0,
    )
    assert corr.slope < base.slope
    assert corr.log_exponent == 1.0


def test_rate_fit_rejects_exact_integrands():
    with pytest.raises(ConfigError):
        convergence_experiment(
            lambda i: digital_net(i, 1), lambda x: np.ones_like(x), 1.0, range(2, 7)
        )


def test_tent_gains_an_order_on_smooth_nonperiodic():
    f = lambda x, y: np.exp(x + y)
    exact = (math.e - 1.0) ** 2
    plain = convergence_experiment(fibonacci_rule, f, exact, range(6, 13))
    tented = convergence_experiment(
        fibonacci_rule, f, exact, range(6, 13), transform="tent"
    )
    assert -1.15 < plain.slope < -0.85
    assert tented.slope < plain.slope - 0.4


def test_shifted_experiment_path():
    f = lambda x, y: np.exp(x + y)
    exact = (math.e - 1.0) ** 2
    fit = convergence_experiment(
        fibonacci_rule, f, exact, range(5, 10), transform="tent", shifts=3, seed=2
    )
    again = convergence_experiment(
        fibonacci_rule, f, exact, range(5, 10), transform="tent", shifts=3, seed=2
    )
    assert fit.errors == again.errors
    assert all(e > 0.0 for e in fit.errors)


def test_rate_fit_csv():
    fit = convergence_experiment(
        lambda i: rank1_lattice((1,), 2**i), lambda x: x, 0.5, range(2, 6)
    )
    lines = fit.csv_rows().strip().split("\n")
    assert lines[0] == "n,error,log2n,log2err"
    assert len(lines) == 5
    n, err, l2n, l2e = lines[1].split(",")
    assert int(n) == 4 and float(err) == pytest.approx(0.125)
    assert float(l2n) == 2.0 and float(l2e) == -3.0
