"""Order-2 spline wavelets (piecewise-linear, two vanishing moments),
their exponential-decay duals, and analysis/synthesis over the index set
N_{-1}^d x Z^d.

Level -1 holds the integer shifts of the hat function N_2; level l >= 0
holds psi(2^l x - k) where psi is the mother wavelet supported on [0,3].
Levels below -1 are identically zero by convention. All inner products of
piecewise-linear functions are computed exactly: the product is piecewise
quadratic, so per-cell Simpson is exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import TruncationError
from .grids import UNIT, CoefficientMap, GridFunction
from .indexsets import plus_l1

__all__ = [
    "PiecewiseLinear",
    "DualCoefficientSequence",
    "mother",
    "father",
    "mother_from_qcoeffs",
    "bspline_value",
    "psi_eval",
    "psi_piecewise",
    "psi_support",
    "dual_coefficients",
    "dual_father_closed_form",
    "dual_piecewise",
    "dual_eval",
    "cw_analyze_1d",
    "cw_analyze",
    "cw_synthesize",
    "gram_sequence",
]

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function, zero outside its breakpoints."""

    breakpoints: tuple
    values: tuple

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.interp(x, self.breakpoints, self.values, left=0.0, right=0.0)

    @property
    def support(self):
        return (self.breakpoints[0], self.breakpoints[-1])

    def integral(self) -> float:
        b = np.asarray(self.breakpoints)
        v = np.asarray(self.values)
        return float(np.sum(0.5 * (v[1:] + v[:-1]) * np.diff(b)))

    def moment(self, s: int) -> float:
        """Exact integral of x^s f(x) for s <= 2 (Simpson per cell)."""
        if s > 2:
            raise ValueError("Simpson is exact only up to cubic integrands")
        b = np.asarray(self.breakpoints)
        v = np.asarray(self.values)
        mid = 0.5 * (b[1:] + b[:-1])
        vmid = 0.5 * (v[1:] + v[:-1])
        h = np.diff(b)
        term = b[:-1] ** s * v[:-1] + 4.0 * mid**s * vmid + b[1:] ** s * v[1:]
        return float(np.sum(h / 6.0 * term))


def product_integral(f: PiecewiseLinear, g: PiecewiseLinear) -> float:
    """Exact integral of f*g over the real line."""
    lo = max(f.breakpoints[0], g.breakpoints[0])
    hi = min(f.breakpoints[-1], g.breakpoints[-1])
    if hi <= lo:
        return 0.0
    pts = np.union1d(np.asarray(f.breakpoints), np.asarray(g.breakpoints))
    pts = pts[(pts >= lo) & (pts <= hi)]
    mid = 0.5 * (pts[1:] + pts[:-1])
    h = np.diff(pts)
    pa = f(pts[:-1]) * g(pts[:-1])
    pm = f(mid) * g(mid)
    pb = f(pts[1:]) * g(pts[1:])
    return float(np.sum(h / 6.0 * (pa + 4.0 * pm + pb)))


# Explicit mother wavelet: six linear pieces on [0,3] with half-integer
# breakpoints, antisymmetric pattern around x = 3/2.
_MOTHER_BP = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
_MOTHER_VAL = (0.0, 1.0 / 12.0, -0.5, 5.0 / 6.0, -0.5, 1.0 / 12.0, 0.0)


def mother() -> PiecewiseLinear:
    """The order-2 mother wavelet in explicit piecewise form."""
    return PiecewiseLinear(_MOTHER_BP, _MOTHER_VAL)


def father() -> PiecewiseLinear:
    """The hat function N_2 on [0,2]."""
    return PiecewiseLinear((0.0, 1.0, 2.0), (0.0, 1.0, 0.0))


def bspline_value(order: int, x) -> np.ndarray:
    """Cardinal B-spline N_order on [0, order] by Cox-de Boor recursion."""
    x = np.asarray(x, dtype=float)
    if order == 1:
        return np.where((x >= 0.0) & (x < 1.0), 1.0, 0.0)
    m = order
    return (x * bspline_value(m - 1, x) + (m - x) * bspline_value(m - 1, x - 1.0)) / (m - 1)


def mother_from_qcoeffs() -> PiecewiseLinear:
    """Assemble the mother wavelet as sum_l q_l N_2(2x - l) with
    q_l = (-1)^l / 2 * sum_i C(2,i) N_4(l - i + 1)."""
    q = []
    for l in range(5):
        s = sum(math.comb(2, i) * float(bspline_value(4, l - i + 1)) for i in range(3))
        q.append((-1.0) ** l / 2.0 * s)
    bp = np.arange(7) / 2.0
    hat = father()
    vals = np.zeros(7)
    for l, ql in enumerate(q):
        vals += ql * hat(2.0 * bp - l)
    return PiecewiseLinear(tuple(bp), tuple(vals))


def psi_support(l: int, k: int):
    """Support interval of the level-l, shift-k wavelet."""
    if l < -1:
        return (0.0, 0.0)
    if l == -1:
        return (float(k), float(k + 2))
    return (k / 2.0**l, (k + 3) / 2.0**l)


def psi_eval(l: int, k: int, x):
    """Pointwise wavelet value; levels below -1 are identically zero."""
    x = np.asarray(x, dtype=float)
    if l < -1:
        return np.zeros_like(x)
    if l == -1:
        return father()(x - k)
    return mother()(2.0**l * x - k)


def psi_piecewise(l: int, k: int) -> PiecewiseLinear:
    if l < -1:
        return PiecewiseLinear((0.0, 0.0), (0.0, 0.0))
    if l == -1:
        return PiecewiseLinear((k + 0.0, k + 1.0, k + 2.0), (0.0, 1.0, 0.0))
    bp = (k + np.arange(7) / 2.0) / 2.0**l
    return PiecewiseLinear(tuple(bp), _MOTHER_VAL)


def gram_sequence(eps: int) -> dict:
    """Exact shift Gram sequence n -> <psi_eps, psi_eps(. - n)>."""
    gen = father() if eps == -1 else mother()
    width = int(math.ceil(gen.support[1]))
    out = {}
    for n in range(-width, width + 1):
        shifted = PiecewiseLinear(
            tuple(np.asarray(gen.breakpoints) + n), gen.values
        )
        val = product_integral(gen, shifted)
        if val != 0.0:
            out[n] = val
    return out


@dataclass
class DualCoefficientSequence:
    """Two-sided coefficient sequence, a_n for |n| <= n_max, of a dual
    generator expanded in primal shifts, plus its fitted geometric decay."""

    eps: int
    n_max: int
    coefficients: np.ndarray  # index n + n_max
    decay_base: float
    tail_bound: float

    def a(self, n: int) -> float:
        if abs(n) > self.n_max:
            return 0.0
        return float(self.coefficients[n + self.n_max])

    def to_json(self) -> str:
        return json.dumps(
            {
                "eps": self.eps,
                "n_max": self.n_max,
                "decay_base": self.decay_base,
                "tail_bound": self.tail_bound,
                "coefficients": [
                    [int(n - self.n_max), float(c)]
                    for n, c in enumerate(self.coefficients)
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "DualCoefficientSequence":
        obj = json.loads(text)
        n_max = int(obj["n_max"])
        coeff = np.zeros(2 * n_max + 1)
        for n, c in obj["coefficients"]:
            coeff[int(n) + n_max] = float(c)
        return cls(
            eps=int(obj["eps"]),
            n_max=n_max,
            coefficients=coeff,
            decay_base=float(obj["decay_base"]),
            tail_bound=float(obj["tail_bound"]),
        )


def dual_coefficients(eps: int, n_max: int = 40, tol: float = 1e-10) -> DualCoefficientSequence:
    """Solve the truncated biorthogonality system sum_n a_n g_{m-n} = delta_{m,0}.

    The Gram sequence g is banded and symmetric positive definite, so the
    truncated Toeplitz solve converges geometrically in n_max; the fitted
    decay base yields the reported tail bound.
    """
    g = gram_sequence(eps)
    size = 2 * n_max + 1
    col = np.array([g.get(n, 0.0) for n in range(size)])
    rhs = np.zeros(size)
    rhs[n_max] = 1.0
    a = scipy.linalg.solve_toeplitz((col, col), rhs)
    ns = np.arange(-n_max, n_max + 1)
    window = (np.abs(ns) >= 2) & (np.abs(ns) <= n_max // 2) & (np.abs(a) > 0)
    slope, logc = np.polyfit(np.abs(ns[window]), np.log(np.abs(a[window])), 1)
    base = math.exp(-slope)
    amp = math.exp(logc)
    tail = amp * base ** (-(n_max + 1)) / (1.0 - 1.0 / base) if base > 1 else math.inf
    if tail >= tol:
        raise TruncationError(
            f"dual tail {tail:.3e} above tolerance {tol:.1e} at n_max={n_max}"
        )
    return DualCoefficientSequence(
        eps=eps, n_max=n_max, coefficients=a, decay_base=base, tail_bound=tail
    )


def dual_father_closed_form(n: int) -> float:
    """Independent closed form sqrt(3) (sqrt(3)-2)^|n| for the hat dual."""
    return SQRT3 * (SQRT3 - 2.0) ** abs(n)


_DUAL_CACHE: dict = {}


def _dual_seq(eps: int, n_max: int = 40) -> DualCoefficientSequence:
    key = (eps, n_max)
    if key not in _DUAL_CACHE:
        _DUAL_CACHE[key] = dual_coefficients(eps, n_max=n_max)
    return _DUAL_CACHE[key]


def dual_piecewise(l: int, k: int, n_max: int = 40) -> PiecewiseLinear:
    """Truncated dual wavelet as an exact piecewise-linear function."""
    seq = _dual_seq(min(l, 0), n_max)
    if l == -1:
        # Integer breakpoints; shifts of the hat enter with weights a_n.
        lo = k - n_max
        hi = k + n_max + 2
        bp = np.arange(lo, hi + 1, dtype=float)
        vals = np.zeros_like(bp)
        for n in range(-n_max, n_max + 1):
            vals += seq.a(n) * father()(bp - (k + n))
        return PiecewiseLinear(tuple(bp), tuple(vals))
    step = 0.5 / 2.0**l
    lo = (k - n_max) / 2.0**l
    ncells = 2 * (2 * n_max + 3)
    bp = lo + step * np.arange(ncells + 1)
    vals = np.zeros_like(bp)
    mom = mother()
    for n in range(-n_max, n_max + 1):
        vals += seq.a(n) * mom(2.0**l * bp - (k + n))
    return PiecewiseLinear(tuple(bp), tuple(vals))


def dual_eval(lbar, kbar, *axes, n_max: int = 40):
    """Tensor-product dual wavelet value at the given coordinate arrays."""
    out = None
    for l, k, x in zip(lbar, kbar, axes):
        t = dual_piecewise(int(l), int(k), n_max)(x)
        out = t if out is None else out * t
    return out


def _gauss_panels(panels, order: int):
    """Gauss-Legendre nodes and weights across a list of intervals."""
    xg, wg = np.polynomial.legendre.leggauss(order)
    a = np.asarray([p[0] for p in panels])
    b = np.asarray([p[1] for p in panels])
    half = 0.5 * (b - a)
    nodes = a[:, None] + half[:, None] * (xg[None, :] + 1.0)
    weights = half[:, None] * wg[None, :]
    return nodes.ravel(), weights.ravel()


def _shift_range(l: int, box):
    lo, hi = box
    if l == -1:
        return range(int(math.floor(lo)) - 1, int(math.ceil(hi)) + 1)
    return range(int(math.floor(2.0**l * lo)) - 2, int(math.ceil(2.0**l * hi)) + 1)


def cw_analyze_1d(
    f,
    J: int,
    box,
    kind: str = "primal",
    f_breaks=(),
    gauss_order: int = 8,
    n_max: int = 40,
) -> dict:
    """Univariate coefficient table (l, k) -> 2^{l_+} <f, psi_{l,k}>.

    f is a vectorized callable supported in box. Panels are split at all
    wavelet breakpoints and at the supplied breakpoints of f, so the
    quadrature is exact whenever f is piecewise polynomial of moderate
    degree.
    """
    table = {}
    fb = sorted(float(t) for t in f_breaks)
    for l in range(-1, J + 1):
        for k in _shift_range(l, box):
            w = psi_piecewise(l, k) if kind == "primal" else dual_piecewise(l, k, n_max)
            lo = max(w.support[0], box[0])
            hi = min(w.support[1], box[1])
            if hi <= lo:
                continue
            cuts = sorted(
                {lo, hi}
                | {b for b in w.breakpoints if lo < b < hi}
                | {b for b in fb if lo < b < hi}
            )
            panels = list(zip(cuts[:-1], cuts[1:]))
            nodes, weights = _gauss_panels(panels, gauss_order)
            val = float(np.sum(weights * np.asarray(f(nodes), dtype=float) * w(nodes)))
            lam = 2.0 ** max(l, 0) * val
            if lam != 0.0:
                table[(l, k)] = lam
    return table


def cw_analyze(
    f=None,
    J: int = 3,
    box=((0.0, 1.0),),
    kind: str = "primal",
    tensor_factors=None,
    f_breaks=None,
    gauss_order: int = 8,
    n_max: int = 40,
    prune: float = 0.0,
) -> CoefficientMap:
    """Coefficients lambda_{jbar,kbar}(f) = 2^{|jbar_+|} <f, psi_{jbar,kbar}>
    for all levels |jbar|_inf <= J whose wavelet meets the support box.

    Either pass a vectorized callable f (d = 1 or 2) or tensor_factors, a
    list of univariate callables whose product is f; tensor structure
    factorizes the coefficients exactly.
    """
    basis = "cw-primal" if kind == "primal" else "cw-dual"
    if tensor_factors is not None:
        d = len(tensor_factors)
        breaks = [()] * d if f_breaks is None or len(f_breaks) == 0 else f_breaks
        tables = [
            cw_analyze_1d(
                tensor_factors[i], J, box[i], kind, breaks[i], gauss_order, n_max
            )
            for i in range(d)
        ]
        entries = {((), ()): 1.0}
        for t in tables:
            entries = {
                (j + (lk[0],), k + (lk[1],)): v * tv
                for (j, k), v in entries.items()
                for lk, tv in t.items()
            }
        if prune > 0.0:
            entries = {key: v for key, v in entries.items() if abs(v) > prune}
        return CoefficientMap(basis=basis, d=d, entries=entries)

    d = len(box)
    if d == 1:
        breaks = () if f_breaks is None else f_breaks
        table = cw_analyze_1d(f, J, box[0], kind, breaks, gauss_order, n_max)
        entries = {
            ((l,), (k,)): v for (l, k), v in table.items() if abs(v) > prune
        }
        return CoefficientMap(basis=basis, d=1, entries=entries)
    if d != 2:
        raise ValueError("generic callables are supported for d <= 2; use tensor_factors")

    entries = {}
    fb = ((), ()) if f_breaks is None else f_breaks
    for l1 in range(-1, J + 1):
        for l2 in range(-1, J + 1):
            for k1 in _shift_range(l1, box[0]):
                w1 = psi_piecewise(l1, k1) if kind == "primal" else dual_piecewise(l1, k1, n_max)
                lo1, hi1 = max(w1.support[0], box[0][0]), min(w1.support[1], box[0][1])
                if hi1 <= lo1:
                    continue
                cuts1 = sorted({lo1, hi1} | {b for b in w1.breakpoints if lo1 < b < hi1}
                               | {b for b in fb[0] if lo1 < b < hi1})
                n1, wq1 = _gauss_panels(list(zip(cuts1[:-1], cuts1[1:])), gauss_order)
                psi1 = w1(n1)
                for k2 in _shift_range(l2, box[1]):
                    w2 = psi_piecewise(l2, k2) if kind == "primal" else dual_piecewise(l2, k2, n_max)
                    lo2, hi2 = max(w2.support[0], box[1][0]), min(w2.support[1], box[1][1])
                    if hi2 <= lo2:
                        continue
                    cuts2 = sorted({lo2, hi2} | {b for b in w2.breakpoints if lo2 < b < hi2}
                                   | {b for b in fb[1] if lo2 < b < hi2})
                    n2, wq2 = _gauss_panels(list(zip(cuts2[:-1], cuts2[1:])), gauss_order)
                    psi2 = w2(n2)
                    vals = np.asarray(f(n1[:, None], n2[None, :]), dtype=float)
                    ip = float(np.einsum("i,j,ij->", wq1 * psi1, wq2 * psi2, vals))
                    lam = 2.0 ** (max(l1, 0) + max(l2, 0)) * ip
                    if abs(lam) > prune:
                        entries[((l1, l2), (k1, k2))] = lam
    return CoefficientMap(basis="cw-primal" if kind == "primal" else "cw-dual", d=2, entries=entries)


def cw_synthesize(
    coeffs: CoefficientMap, m: int, using: str = "primal", n_max: int = 40
) -> GridFunction:
    """Evaluate sum of coeff * psi_{jbar,kbar} (or dual wavelets) on the
    closed unit-cube grid at level m."""
    d = coeffs.d
    n = 2**m + 1
    x = np.arange(n) * 2.0**-m
    out = np.zeros((n,) * d)
    cache: dict = {}

    def axis_vals(l, k):
        key = (l, k)
        if key not in cache:
            if using == "primal":
                cache[key] = psi_eval(l, k, x)
            else:
                cache[key] = dual_piecewise(l, k, n_max)(x)
        return cache[key]

    for (j, k), v in coeffs.items_sorted():
        piece = float(np.real(v))
        acc = None
        for ax in range(d):
            t = axis_vals(int(j[ax]), int(k[ax]))
            shape = [1] * d
            shape[ax] = -1
            t = t.reshape(shape)
            acc = t if acc is None else acc * t
        out += piece * acc
    return GridFunction(UNIT, m, out)


def biorthogonality_residual_1d(levels, shifts, n_max: int = 40) -> float:
    """Max deviation of exact pairings <psi_{j,k}, dual_{l,m}> from
    2^{-(j_+ + l_+)/2} delta_{j,l} delta_{k,m}."""
    worst = 0.0
    duals = {(l, mm): dual_piecewise(l, mm, n_max) for l in levels for mm in shifts}
    for j in levels:
        for k in shifts:
            pw = psi_piecewise(j, k)
            for (l, mm), dw in duals.items():
                val = product_integral(pw, dw)
                expect = (
                    2.0 ** (-(max(j, 0) + max(l, 0)) / 2.0)
                    if (j == l and k == mm)
                    else 0.0
                )
                worst = max(worst, abs(val - expect))
    return worst
