"""Dyadic decompositions of unity, frequency-block building blocks, and the
three (quasi-)norms used throughout: the cosine-block norm on the unit cube,
the weighted sequence norm over wavelet indices, and a difference-based
seminorm oracle.

The block norm truncates an infinite level sum. For cosine polynomials the
default level cap makes the truncation exact; otherwise the geometric
behaviour of the level terms is fitted and reported as a tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DivergentTailError
from .grids import (
    CoefficientMap,
    GridFunction,
    fourier_analyze_dense,
    fourier_synthesize_dense,
    hpc_synthesize_dense,
    periodize,
    signed_fft_freqs,
)
from .indexsets import plus_l1

__all__ = [
    "smooth_sigma",
    "phi0_eval",
    "DecompositionOfUnity",
    "BesovParams",
    "SeqNormSpec",
    "NormReport",
    "hpc_block",
    "hpc_besov_norm",
    "seq_norm",
    "holder_pairing_check",
    "lp_block_torus",
    "periodization_block_identity",
    "difference_seminorm",
    "rectangular_mean_1d",
]

INF = math.inf


def smooth_sigma(t, power: int = 1):
    """exp(-1/t^power) for t > 0, zero otherwise; C^inf on R."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0.0
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-1.0 / t[pos] ** power)
    return out


def phi0_eval(x, power: int = 1):
    """Even C^inf cutoff: 1 on [-1,1], 0 outside (-2,2), monotone between."""
    ax = np.abs(np.asarray(x, dtype=float))
    up = smooth_sigma(2.0 - ax, power)
    down = smooth_sigma(ax - 1.0, power)
    total = up + down
    return np.where(total > 0.0, up / np.where(total > 0.0, total, 1.0), 0.0)


class DecompositionOfUnity:
    """phi_0 plateau cutoff and its telescoped dyadic levels
    phi_j(x) = phi_0(2^{-j} x) - phi_0(2^{-j+1} x) for j >= 1."""

    def __init__(self, power: int = 1):
        self.power = power

    def phi0(self, x):
        return phi0_eval(x, self.power)

    def phi(self, j: int, x):
        x = np.asarray(x, dtype=float)
        if j == 0:
            return self.phi0(x)
        if j < 0:
            return np.zeros_like(x)
        return self.phi0(2.0**-j * x) - self.phi0(2.0 ** (-j + 1) * x)

    def symmetric(self, j: int, x):
        """psi_j(x) = phi_j(|x|); the even weights used on the torus."""
        return self.phi(j, np.abs(np.asarray(x, dtype=float)))

    def partition_sum(self, J: int, x):
        """sum_{j<=J} phi_j = phi_0(2^{-J} x) exactly, by telescoping."""
        acc = self.phi(0, x)
        for j in range(1, J + 1):
            acc = acc + self.phi(j, x)
        return acc


@dataclass(frozen=True)
class BesovParams:
    """Smoothness/integrability triple with the usual conjugation rules."""

    r: float
    p: float
    q: float

    def __post_init__(self):
        if not (0.0 < self.p <= INF) or not (0.0 < self.q <= INF):
            raise ConfigError("p and q must lie in (0, inf]")

    @property
    def sigma_p(self) -> float:
        return max(0.0, 1.0 / self.p - 1.0)

    @property
    def inv_p(self) -> float:
        return 0.0 if self.p == INF else 1.0 / self.p

    @property
    def inv_q(self) -> float:
        return 0.0 if self.q == INF else 1.0 / self.q

    def conjugate(self) -> "BesovParams":
        """(r', p', q') with r' = -r + sigma_p; exponents <= 1 conjugate to inf."""

        def conj(u: float) -> float:
            if u == INF:
                return 1.0
            if u <= 1.0:
                return INF
            return u / (u - 1.0)

        return BesovParams(r=-self.r + self.sigma_p, p=conj(self.p), q=conj(self.q))

    def in_cw_regime(self) -> bool:
        """Parameter window in which wavelet coefficients characterize the norm."""
        return 1.0 / self.p - 2.0 < self.r < min(1.0 / self.p + 1.0, 2.0)

    def in_hpc_regime(self) -> bool:
        return self.sigma_p < self.r < min(1.0 + 1.0 / self.p, 2.0)


@dataclass(frozen=True)
class SeqNormSpec:
    params: BesovParams
    shift: str = "standard"  # or "dual": conjugate parameters with r'+1

    def effective(self) -> BesovParams:
        if self.shift == "standard":
            return self.params
        c = self.params.conjugate()
        return BesovParams(r=c.r + 1.0, p=c.p, q=c.q)


@dataclass
class NormReport:
    norm_kind: str
    r: float
    p: float
    q: float
    J_max: int
    value: float
    tail_bound: float
    level_terms: dict = field(default_factory=dict, repr=False)

    def csv_row(self) -> str:
        return (
            f"{self.norm_kind},{self.r:g},{self.p:g},{self.q:g},"
            f"{self.J_max},{self.value:.12g},{self.tail_bound:.6g}"
        )

    @staticmethod
    def csv_header() -> str:
        return "norm_kind,r,p,q,J_max,value,tail_bound"


def _lp(values, p: float) -> float:
    a = np.abs(np.asarray(values, dtype=float))
    if a.size == 0:
        return 0.0
    if p == INF:
        return float(a.max())
    return float(np.sum(a**p) ** (1.0 / p))


def _hpc_dense(coeffs: CoefficientMap) -> np.ndarray:
    """Dense nonnegative-frequency tensor from a cosine coefficient map."""
    kmax = 0
    for k in coeffs.entries:
        kmax = max(kmax, max(int(t) for t in k))
    out = np.zeros((kmax + 1,) * coeffs.d)
    for k, v in coeffs.entries.items():
        out[tuple(int(t) for t in k)] = np.real(v)
    return out


def hpc_block(
    f_coeffs: CoefficientMap, jbar, decomp: DecompositionOfUnity, grid_level: int
) -> GridFunction:
    """Weighted cosine sum  sum_k phi_jbar(k) fhat(k) c_k  on the unit grid."""
    dense = _hpc_dense(f_coeffs)
    ks = np.arange(dense.shape[0], dtype=float)
    for ax, j in enumerate(jbar):
        shape = [1] * f_coeffs.d
        shape[ax] = -1
        dense = dense * decomp.phi(int(j), ks).reshape(shape)
    return hpc_synthesize_dense(dense, grid_level)


def default_level_cap(f_coeffs: CoefficientMap) -> int:
    """Smallest J with every retained frequency < 2^{J-1}: levels beyond J
    are exactly zero for this coefficient set."""
    kmax = 1
    for k in f_coeffs.entries:
        kmax = max(kmax, max(abs(int(t)) for t in k))
    return int(math.floor(math.log2(kmax))) + 2


def _tail_from_level_sums(level_sums: dict, q: float):
    """Geometric extrapolation of the per-|jbar|_1 contributions."""
    ls = [level_sums[L] for L in sorted(level_sums)]
    ls = [t for t in ls if t > 0.0]
    if len(ls) < 3:
        return 0.0, 0.0
    ratios = [b / a for a, b in zip(ls[-3:-1], ls[-2:]) if a > 0.0]
    rho = max(ratios) if ratios else 0.0
    last = ls[-1]
    if rho >= 1.0:
        return INF, rho
    if q == INF:
        return last * rho / (1.0 - rho), rho
    tail_q = last**q * rho**q / (1.0 - rho**q)
    return tail_q ** (1.0 / q), rho


def hpc_besov_norm(
    f_coeffs: CoefficientMap,
    params: BesovParams,
    J_max=None,
    grid_level=None,
    decomp: DecompositionOfUnity = None,
    strict: bool = True,
) -> NormReport:
    """Truncated quasi-norm  (sum_jbar 2^{r q |jbar|_1} ||f_jbar||_{L_p}^q)^{1/q}
    over blocks of half-period cosine coefficients.

    For inputs whose frequencies all lie below 2^{J_max - 1} the truncation
    is exact and the tail bound is zero. Otherwise the per-level sums are
    fitted geometrically; a non-decaying fit raises unless strict=False, in
    which case the value is the bare truncation and the tail bound is inf.
    """
    decomp = decomp or DecompositionOfUnity()
    d = f_coeffs.d
    exact_cap = default_level_cap(f_coeffs)
    J = exact_cap if J_max is None else int(J_max)
    exact = J >= exact_cap
    if grid_level is None:
        kmax_used = min(2 ** (J + 1), max(dense_kmax(f_coeffs), 1))
        grid_level = max(4, int(math.ceil(math.log2(4 * kmax_used))))

    base = _hpc_dense(f_coeffs)
    ks = np.arange(base.shape[0], dtype=float)
    axis_w = []
    for j in range(J + 1):
        w = decomp.phi(j, ks)
        axis_w.append(w if np.any(w != 0.0) else None)

    level_terms = {}
    level_sums: dict = {}
    q = params.q
    total_q = 0.0
    sup = 0.0
    for jbar in np.ndindex(*([J + 1] * d)):
        block = base
        dead = False
        for ax, j in enumerate(jbar):
            if axis_w[j] is None:
                dead = True
                break
            shape = [1] * d
            shape[ax] = -1
            block = block * axis_w[j].reshape(shape)
        if dead or not np.any(block):
            continue
        g = hpc_synthesize_dense(block, grid_level)
        term = 2.0 ** (params.r * sum(jbar)) * g.lp_norm(params.p)
        if term == 0.0:
            continue
        level_terms[tuple(int(t) for t in jbar)] = term
        L = int(sum(jbar))
        if q == INF:
            sup = max(sup, term)
            level_sums[L] = max(level_sums.get(L, 0.0), term)
        else:
            total_q += term**q
            level_sums[L] = level_sums.get(L, 0.0) + term**q

    if q == INF:
        value = sup
        sums_for_tail = dict(level_sums)
    else:
        value = total_q ** (1.0 / q)
        sums_for_tail = {L: s ** (1.0 / q) for L, s in level_sums.items()}

    if exact:
        tail = 0.0
    else:
        tail, rho = _tail_from_level_sums(sums_for_tail, q)
        if tail == INF and strict:
            raise DivergentTailError(
                f"level sums do not decay (ratio {rho:.3f}) at J_max={J}"
            )
    return NormReport(
        norm_kind="hpc",
        r=params.r,
        p=params.p,
        q=q,
        J_max=J,
        value=value,
        tail_bound=tail,
        level_terms=level_terms,
    )


def dense_kmax(f_coeffs: CoefficientMap) -> int:
    return max(
        (max(abs(int(t)) for t in k) for k in f_coeffs.entries), default=0
    )


def seq_norm(coeffs: CoefficientMap, spec) -> float:
    """Weighted ell_q(ell_p) norm of wavelet coefficients: level jbar carries
    2^{(sum_i max(j_i,0)) (r - 1/p)}; shift sums inside, level sum outside."""
    params = spec.effective() if isinstance(spec, SeqNormSpec) else spec
    groups: dict = {}
    for (j, k), v in coeffs.entries.items():
        groups.setdefault(tuple(int(t) for t in j), []).append(abs(v))
    terms = []
    for j, block in groups.items():
        w = 2.0 ** (plus_l1(j) * (params.r - params.inv_p))
        terms.append(w * _lp(block, params.p))
    return _lp(terms, params.q)


def seq_norm_report(coeffs: CoefficientMap, spec, strict: bool = True) -> NormReport:
    """seq_norm packaged with per-|jbar_+|_1 level sums and the same
    geometric tail extrapolation used for the cosine-block norm."""
    params = spec.effective() if isinstance(spec, SeqNormSpec) else spec
    q = params.q
    groups: dict = {}
    J = -1
    for (j, k), v in coeffs.entries.items():
        jt = tuple(int(t) for t in j)
        J = max(J, max(jt))
        groups.setdefault(jt, []).append(abs(v))
    level_terms: dict = {}
    sums_for_tail: dict = {}
    for j, block in groups.items():
        w = 2.0 ** (plus_l1(j) * (params.r - params.inv_p))
        term = w * _lp(block, params.p)
        level_terms[j] = term
        L = plus_l1(j)
        if q == INF:
            sums_for_tail[L] = max(sums_for_tail.get(L, 0.0), term)
        else:
            sums_for_tail[L] = sums_for_tail.get(L, 0.0) + term**q
    value = _lp(list(level_terms.values()), q)
    if q != INF:
        sums_for_tail = {L: s ** (1.0 / q) for L, s in sums_for_tail.items()}
    tail, rho = _tail_from_level_sums(sums_for_tail, q)
    if tail == INF and strict:
        raise DivergentTailError(
            f"wavelet level sums do not decay (ratio {rho:.3f}) at J={J}"
        )
    return NormReport(
        norm_kind="cw-seq",
        r=params.r,
        p=params.p,
        q=q,
        J_max=J,
        value=value,
        tail_bound=tail,
        level_terms=level_terms,
    )


def holder_pairing_check(lam: CoefficientMap, mu: CoefficientMap, params: BesovParams):
    """Both sides of  sum |lam mu| <= ||lam||_{r,p,q} ||mu||_{r'+1,p',q'}."""
    lhs = 0.0
    for key, v in lam.entries.items():
        w = mu.entries.get(key)
        if w is not None:
            lhs += abs(v) * abs(w)
    rhs = seq_norm(lam, SeqNormSpec(params, "standard")) * seq_norm(
        mu, SeqNormSpec(params, "dual")
    )
    return lhs, rhs


def lp_block_torus(
    f_coeffs: CoefficientMap, jbar, decomp: DecompositionOfUnity, grid_level: int
) -> GridFunction:
    """Weighted exponential sum  sum_k psi_jbar(k) ghat(k) exp_k  on the
    periodic grid, with even weights psi_j(x) = phi_j(|x|)."""
    d = f_coeffs.d
    n = 2 ** (grid_level + 1)
    dense = np.zeros((n,) * d, dtype=complex)
    for k, v in f_coeffs.entries.items():
        dense[tuple(int(t) % n for t in k)] = v
    freqs = signed_fft_freqs(n).astype(float)
    for ax, j in enumerate(jbar):
        shape = [1] * d
        shape[ax] = -1
        dense = dense * decomp.symmetric(int(j), freqs).reshape(shape)
    return fourier_synthesize_dense(dense, grid_level)


def periodization_block_identity(
    f_coeffs: CoefficientMap,
    jbar,
    p: float,
    grid_level: int = 7,
    decomp: DecompositionOfUnity = None,
):
    """Left: ||block of the periodization||^p over the torus, via sampling,
    FFT analysis, symmetric weights and FFT synthesis. Right:
    2^d ||cosine block||^p over the unit cube, via weighted DCT synthesis.
    The pipelines share no transform code; equality is the periodization
    principle for blocks. p = inf compares sup values (no 2^d factor)."""
    decomp = decomp or DecompositionOfUnity()
    d = f_coeffs.d

    g_unit = hpc_synthesize_dense(_hpc_dense(f_coeffs), grid_level)
    g_torus = periodize(g_unit)
    dense = fourier_analyze_dense(g_torus)
    n = dense.shape[0]
    freqs = signed_fft_freqs(n).astype(float)
    for ax, j in enumerate(jbar):
        shape = [1] * d
        shape[ax] = -1
        dense = dense * decomp.symmetric(int(j), freqs).reshape(shape)
    block_t = fourier_synthesize_dense(dense, grid_level)

    block_u = hpc_block(f_coeffs, jbar, decomp, grid_level)
    if p == INF:
        return block_t.lp_norm(INF), block_u.lp_norm(INF)
    return block_t.lp_norm(p) ** p, 2.0**d * block_u.lp_norm(p) ** p


def rectangular_mean_1d(f, m: int, t: float, x: np.ndarray, gauss: int = 8):
    """R_m(f,t,x) = int_{-1}^{1} |Delta^m_{h t} f(x)| dh by Gauss quadrature."""
    nodes, weights = np.polynomial.legendre.leggauss(gauss)
    signs = [(-1.0) ** (m - l) * math.comb(m, l) for l in range(m + 1)]
    out = np.zeros_like(x)
    for h, w in zip(nodes, weights):
        acc = np.zeros_like(x)
        for l in range(m + 1):
            acc += signs[l] * np.asarray(f(x + l * h * t), dtype=float)
        out += w * np.abs(acc)
    return out


def difference_seminorm(
    f=None,
    params: BesovParams = None,
    m: int = 2,
    J_max: int = 5,
    grid_level: int = 7,
    d: int = 1,
    tensor_factors=None,
    gauss: int = 8,
    mc_samples: int = 4096,
    seed: int = 0,
) -> NormReport:
    """Truncated (sum_jbar 2^{r q |jbar|_1} ||R^{e(jbar)}_m(f,2^{-jbar},.)||_p^q)^{1/q}
    for a continuous periodic f on the torus, with the difference applied
    only along the active axes e(jbar) = {i : j_i != 0}.

    L_p norms use the normalized torus measure, so for reflection-symmetric
    periodizations the values match unit-cube norms of the underlying
    function. tensor_factors (univariate periodic callables) factorize the
    computation exactly; otherwise d <= 2 uses tensor Gauss quadrature for
    the h-integral and d >= 3 falls back to Monte Carlo sampling.
    """
    if params is None:
        raise ConfigError("params required")
    if m <= params.r:
        raise ConfigError(f"difference order m={m} must exceed r={params.r}")
    p, q, r = params.p, params.q, params.r
    npts = 2 ** (grid_level + 1)
    x1 = -1.0 + np.arange(npts) * 2.0**-grid_level

    def grid_lp(values) -> float:
        a = np.abs(np.asarray(values, dtype=float))
        if p == INF:
            return float(a.max())
        return float(np.mean(a**p) ** (1.0 / p))

    level_terms = {}
    if tensor_factors is not None:
        d = len(tensor_factors)
        tables = []
        for fi in tensor_factors:
            col = {0: np.asarray(fi(x1), dtype=float)}
            for j in range(1, J_max + 1):
                col[j] = rectangular_mean_1d(fi, m, 2.0**-j, x1, gauss)
            tables.append({j: grid_lp(v) for j, v in col.items()})
        for jbar in np.ndindex(*([J_max + 1] * d)):
            val = 1.0
            for i, j in enumerate(jbar):
                val *= tables[i][j]
            term = 2.0 ** (r * sum(jbar)) * val
            if term > 0.0:
                level_terms[tuple(int(t) for t in jbar)] = term
    elif d <= 2:
        axes = [x1] * d
        nodes, weights = np.polynomial.legendre.leggauss(gauss)
        signs = [(-1.0) ** (m - l) * math.comb(m, l) for l in range(m + 1)]
        for jbar in np.ndindex(*([J_max + 1] * d)):
            e = [i for i in range(d) if jbar[i] != 0]
            if not e:
                mesh = np.meshgrid(*axes, indexing="ij") if d > 1 else [axes[0]]
                term = grid_lp(np.asarray(f(*mesh), dtype=float))
                if term > 0.0:
                    level_terms[tuple(int(t) for t in jbar)] = term
                continue
            acc = np.zeros((npts,) * d)
            for combo in np.ndindex(*([gauss] * len(e))):
                wq = 1.0
                diff = np.zeros((npts,) * d)
                for shifts in np.ndindex(*([m + 1] * len(e))):
                    coeff = 1.0
                    moved = list(axes)
                    for pos, ci, l in zip(e, combo, shifts):
                        coeff *= signs[l]
                        moved[pos] = axes[pos] + l * nodes[ci] * 2.0 ** (-jbar[pos])
                    mesh = (
                        np.meshgrid(*moved, indexing="ij") if d > 1 else [moved[0]]
                    )
                    diff += coeff * np.asarray(f(*mesh), dtype=float)
                for ci in combo:
                    wq *= weights[ci]
                acc += wq * np.abs(diff)
            term = 2.0 ** (r * sum(jbar)) * grid_lp(acc)
            if term > 0.0:
                level_terms[tuple(int(t) for t in jbar)] = term
    else:
        rng = np.random.default_rng(seed)
        xs = rng.uniform(-1.0, 1.0, size=(mc_samples, d))
        signs = [(-1.0) ** (m - l) * math.comb(m, l) for l in range(m + 1)]
        for jbar in np.ndindex(*([J_max + 1] * d)):
            e = [i for i in range(d) if jbar[i] != 0]
            if not e:
                vals = np.asarray(f(*[xs[:, i] for i in range(d)]), dtype=float)
                level_terms[tuple(int(t) for t in jbar)] = grid_lp(vals)
                continue
            hs = rng.uniform(-1.0, 1.0, size=(mc_samples, d))
            acc = np.zeros(mc_samples)
            for shifts in np.ndindex(*([m + 1] * len(e))):
                coeff = 1.0
                pts = xs.copy()
                for pos, l in zip(e, shifts):
                    coeff *= signs[l]
                    pts[:, pos] += l * hs[:, pos] * 2.0 ** (-jbar[pos])
                acc += coeff * np.asarray(f(*[pts[:, i] for i in range(d)]))
            # One h-sample per x-sample: unbiased for the (2^|e|-volume) integral.
            term = 2.0 ** (r * sum(jbar)) * grid_lp(2.0 ** len(e) * np.abs(acc))
            if term > 0.0:
                level_terms[tuple(int(t) for t in jbar)] = term

    value = _lp(list(level_terms.values()), q)
    level_sums: dict = {}
    for j, t in level_terms.items():
        L = sum(j)
        if q == INF:
            level_sums[L] = max(level_sums.get(L, 0.0), t)
        else:
            level_sums[L] = level_sums.get(L, 0.0) + t**q
    sums = (
        level_sums if q == INF else {L: s ** (1.0 / q) for L, s in level_sums.items()}
    )
    tail, _ = _tail_from_level_sums(sums, q)
    return NormReport(
        norm_kind="diff",
        r=r,
        p=p,
        q=q,
        J_max=J_max,
        value=value,
        tail_bound=tail,
        level_terms=level_terms,
    )
