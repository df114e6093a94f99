"""Equal-weight cubature rules on [0,1)^d: Fibonacci and general rank-1
lattices, base-2 digital nets with optional order-2 digit interlacing, tent
transformation of node sets, randomized shifts, and rate-fit experiments.

The tent-transformed rule applied to f is algebraically identical to the
plain rule applied to the tent-periodized f; tests exploit that identity,
and the rate experiments quantify the one-order gain it buys on
non-periodic integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError
from .grids import tent

__all__ = [
    "CubatureRule",
    "RateFit",
    "fibonacci_number",
    "fibonacci_rule",
    "rank1_lattice",
    "digital_net",
    "tent_transform_rule",
    "integrate",
    "random_shift",
    "shifted_mean_error",
    "convergence_experiment",
]


@dataclass(frozen=True)
class CubatureRule:
    nodes: np.ndarray  # (n, d), entries in [0, 1)
    weights: np.ndarray  # (n,), positive, sums to 1
    provenance: str

    def __post_init__(self):
        n, _ = self.nodes.shape
        if self.weights.shape != (n,):
            raise ConfigError("weights must match node count")

    @property
    def n(self) -> int:
        return self.nodes.shape[0]

    @property
    def d(self) -> int:
        return self.nodes.shape[1]

    def weight_sum_exact(self) -> Fraction:
        """Rational weight total for equal-weight rules (denominator n)."""
        return Fraction(1, self.n) * self.n

    def to_csv(self) -> str:
        rows = [",".join(f"{c!r}" for c in row) for row in self.nodes]
        return "\n".join(rows) + "\n"


def fibonacci_number(n: int) -> int:
    """b_1 = b_2 = 1, b_n = b_{n-1} + b_{n-2}."""
    if n < 1:
        raise ConfigError("Fibonacci index starts at 1")
    a, b = 1, 1
    for _ in range(n - 2):
        a, b = b, a + b
    return b


def rank1_lattice(z, n: int) -> CubatureRule:
    """Nodes {frac(j z / n) : j = 0..n-1}, weights 1/n."""
    z = np.asarray(z, dtype=np.int64)
    j = np.arange(n, dtype=np.int64)
    nodes = ((j[:, None] * z[None, :]) % n) / float(n)
    return CubatureRule(
        nodes=nodes,
        weights=np.full(n, 1.0 / n),
        provenance=f"rank1(z={tuple(int(t) for t in z)},n={n})",
    )


def fibonacci_rule(index: int) -> CubatureRule:
    """The d=2 lattice with b_index points and generator (1, b_{index-1})."""
    if index < 2:
        raise ConfigError("Fibonacci rule needs index >= 2")
    bn = fibonacci_number(index)
    bprev = fibonacci_number(index - 1)
    rule = rank1_lattice((1, bprev), bn)
    return CubatureRule(rule.nodes, rule.weights, provenance=f"fibonacci({index})")


# Direction-number table for the base-2 generator (degree, coefficient bits,
# initial odd values), standard published values for dimensions 2..13;
# dimension 1 is the radical-inverse column.
_NET_TABLE = [
    (1, 0, [1]),
    (2, 1, [1, 3]),
    (3, 1, [1, 3, 1]),
    (3, 2, [1, 1, 1]),
    (4, 1, [1, 1, 3, 3]),
    (4, 4, [1, 3, 5, 13]),
    (5, 2, [1, 1, 5, 5, 17]),
    (5, 4, [1, 1, 5, 5, 5]),
    (5, 7, [1, 1, 7, 11, 19]),
    (5, 11, [1, 1, 5, 1, 1]),
    (5, 13, [1, 1, 1, 3, 11]),
    (5, 14, [1, 3, 5, 5, 31]),
]

_NBITS = 32


def _direction_integers(dim: int, nbits: int = _NBITS) -> np.ndarray:
    """Direction integers v_k (as k-shifted nbits-bit values) for one axis."""
    if dim == 0:
        return np.array([1 << (nbits - 1 - k) for k in range(nbits)], dtype=np.uint64)
    s, a, m_init = _NET_TABLE[dim - 1]
    m = list(m_init)
    for k in range(s, nbits):
        new = m[k - s] ^ (m[k - s] << s)
        for i in range(1, s):
            if (a >> (s - 1 - i)) & 1:
                new ^= m[k - i] << i
        m.append(new)
    return np.array(
        [np.uint64(m[k]) << np.uint64(nbits - 1 - k) for k in range(nbits)],
        dtype=np.uint64,
    )


def _net_points_int(m: int, dims: int) -> np.ndarray:
    """First 2^m points of the base-2 sequence as nbits-bit integers, in
    direct binary (index-XOR) order; shape (2^m, dims)."""
    if dims > len(_NET_TABLE) + 1:
        raise ConfigError(
            f"direction-number table covers {len(_NET_TABLE) + 1} dimensions"
        )
    n = 2**m
    idx = np.arange(n, dtype=np.uint64)
    out = np.zeros((n, dims), dtype=np.uint64)
    for axis in range(dims):
        v = _direction_integers(axis)
        acc = np.zeros(n, dtype=np.uint64)
        for k in range(max(m, 1)):
            bit = (idx >> np.uint64(k)) & np.uint64(1)
            acc ^= bit * v[k]
        out[:, axis] = acc
    return out


def _interlace_pairs(ints: np.ndarray, nbits: int = _NBITS) -> np.ndarray:
    """Digit-interlace consecutive coordinate pairs: two nbits-bit inputs
    produce one 2*nbits-bit output whose digits alternate between them."""
    npts, two_d = ints.shape
    d = two_d // 2
    out = np.zeros((npts, d), dtype=np.uint64)
    for i in range(d):
        u = ints[:, 2 * i]
        v = ints[:, 2 * i + 1]
        acc = np.zeros(npts, dtype=np.uint64)
        for k in range(nbits):
            bu = (u >> np.uint64(nbits - 1 - k)) & np.uint64(1)
            bv = (v >> np.uint64(nbits - 1 - k)) & np.uint64(1)
            acc |= bu << np.uint64(2 * nbits - 1 - 2 * k)
            acc |= bv << np.uint64(2 * nbits - 2 - 2 * k)
        out[:, i] = acc
    return out


def digital_net(m: int, d: int, alpha: int = 1) -> CubatureRule:
    """Base-2 net with 2^m points; alpha=2 interlaces a 2d-dimensional net
    into d dimensions, the canonical order-2 construction."""
    if m < 0 or m > 20:
        raise ConfigError("m must lie in 0..20")
    if alpha not in (1, 2):
        raise ConfigError("interlacing factor must be 1 or 2")
    if alpha == 1:
        ints = _net_points_int(m, d)
        nodes = ints.astype(np.float64) * 2.0**-_NBITS
    else:
        ints = _net_points_int(m, 2 * d)
        nodes = _interlace_pairs(ints).astype(np.float64) * 2.0 ** (-2 * _NBITS)
    n = 2**m
    return CubatureRule(
        nodes=nodes,
        weights=np.full(n, 1.0 / n),
        provenance=f"net(m={m},d={d},alpha={alpha})",
    )


def tent_transform_rule(rule: CubatureRule) -> CubatureRule:
    """Map every node componentwise through t -> 1 - |2t - 1|."""
    return CubatureRule(
        nodes=tent(rule.nodes),
        weights=rule.weights,
        provenance=f"tent({rule.provenance})",
    )


def random_shift(rule: CubatureRule, rng) -> CubatureRule:
    shift = rng.random(rule.d)
    return CubatureRule(
        nodes=np.mod(rule.nodes + shift[None, :], 1.0),
        weights=rule.weights,
        provenance=f"shifted({rule.provenance})",
    )


def integrate(rule: CubatureRule, f) -> float:
    """Sum of w_j f(x_j); f must accept d coordinate arrays."""
    cols = [rule.nodes[:, i] for i in range(rule.d)]
    vals = np.asarray(f(*cols))
    return complex(np.sum(rule.weights * vals)).real if np.iscomplexobj(
        vals
    ) else float(np.sum(rule.weights * vals))


def shifted_mean_error(
    rule: CubatureRule, f, exact: float, shifts: int = 16, seed: int = 0
) -> float:
    """Mean absolute error over seeded random modular shifts of the rule."""
    rng = np.random.default_rng(seed)
    errs = [
        abs(integrate(random_shift(rule, rng), f) - exact) for _ in range(shifts)
    ]
    return float(np.mean(errs))


@dataclass
class RateFit:
    ns: list
    errors: list
    slope: float
    intercept: float
    residual: float
    log_exponent: float = 0.0
    skipped: int = 2
    rows: list = field(default_factory=list, repr=False)

    def csv_rows(self) -> str:
        lines = ["n,error,log2n,log2err"]
        for n, e in zip(self.ns, self.errors):
            l2e = math.log2(e) if e > 0 else float("-inf")
            lines.append(f"{n},{e:.12e},{math.log2(n):.10f},{l2e:.10f}")
        return "\n".join(lines) + "\n"


def convergence_experiment(
    rule_for_n,
    f,
    exact: float,
    n_indices,
    transform: str = "plain",
    shifts: int = 0,
    seed: int = 0,
    log_exponent: float = 0.0,
    skip_smallest: int = 2,
) -> RateFit:
    """Error table and least-squares slope of log2(err) against log2(n).

    rule_for_n maps an index to a CubatureRule; transform='tent' wraps each
    rule; shifts > 0 averages absolute errors over seeded random shifts
    (shift first, then tent, matching the shifted variant). A positive
    log_exponent divides errors by (log2 n)^exponent before fitting. The
    smallest points are excluded from the fit to suppress preasymptotics.
    """
    ns, errors = [], []
    for idx in n_indices:
        rule = rule_for_n(idx)
        if shifts > 0:
            rng = np.random.default_rng(seed)
            errs = []
            for _ in range(shifts):
                shifted = random_shift(rule, rng)
                used = tent_transform_rule(shifted) if transform == "tent" else shifted
                errs.append(abs(integrate(used, f) - exact))
            err = float(np.mean(errs))
        else:
            used = tent_transform_rule(rule) if transform == "tent" else rule
            err = abs(integrate(used, f) - exact)
        ns.append(rule.n)
        errors.append(err)

    xs, ys = [], []
    for n, e in zip(ns[skip_smallest:], errors[skip_smallest:]):
        if e <= 0.0:
            continue
        corrected = e / (math.log2(n) ** log_exponent if log_exponent else 1.0)
        xs.append(math.log2(n))
        ys.append(math.log2(corrected))
    if len(xs) < 2:
        raise ConfigError("not enough positive errors to fit a rate")
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(
        np.sqrt(np.mean((np.polyval([slope, intercept], xs) - np.asarray(ys)) ** 2))
    )
    return RateFit(
        ns=ns,
        errors=errors,
        slope=float(slope),
        intercept=float(intercept),
        residual=resid,
        log_exponent=log_exponent,
        skipped=skip_smallest,
    )
