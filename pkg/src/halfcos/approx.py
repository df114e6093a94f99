"""Hyperbolic-cross projection in the half-period cosine basis, the exact
transfer of its error to the periodic problem under tent composition, and
weighted least-squares recovery from point samples.

All projections are computed by aliasing-checked dense transforms; the
transfer identity is tested on matched grids where it holds to round-off
because mirrored sample values coincide node by node.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConditionError
from .grids import (
    SYM,
    UNIT,
    CoefficientMap,
    GridFunction,
    fourier_analyze_dense,
    fourier_synthesize_dense,
    hpc_analyze_dense,
    hpc_basis_1d,
    hpc_synthesize_dense,
    periodize,
    evenize,
    signed_fft_freqs,
)
from .indexsets import IndexSet, hyperbolic_cross

__all__ = [
    "hpc_project",
    "project_dense",
    "error_transfer_check",
    "evenization_check",
    "ls_recover",
    "ls_error_experiment",
    "projection_error_rate",
    "exact_projection_error",
]


def _cross_mask_nonneg(shape, N: int) -> np.ndarray:
    """Mask of the nonnegative hyperbolic cross on a dense DCT tensor."""
    d = len(shape)
    mask = np.ones(shape, dtype=bool)
    prod = np.ones(shape)
    for ax in range(d):
        ks = np.arange(shape[ax], dtype=float)
        sl = [1] * d
        sl[ax] = -1
        prod = prod * (1.0 + ks).reshape(sl)
    return prod <= N


def _cross_mask_signed(n: int, d: int, N: int) -> np.ndarray:
    """Mask of the signed hyperbolic cross in FFT layout."""
    ks = np.abs(signed_fft_freqs(n)).astype(float)
    prod = np.ones((n,) * d)
    for ax in range(d):
        sl = [1] * d
        sl[ax] = -1
        prod = prod * (1.0 + ks).reshape(sl)
    return prod <= N


def project_dense(f: GridFunction, N: int):
    """Dense-transform projection onto the cross of order N; returns the
    approximant on f's grid and the retained dense coefficient tensor."""
    dense = hpc_analyze_dense(f)
    dense = np.where(_cross_mask_nonneg(dense.shape, N), dense, 0.0)
    return hpc_synthesize_dense(dense, f.m), dense


def hpc_project(f: GridFunction, N: int):
    """Projection onto span{c_kbar : prod (1+k_i) <= N}.

    Returns (approximant GridFunction, CoefficientMap on the cross).
    Aliasing is checked through the index-set analysis path.
    """
    from .grids import hpc_analyze

    K = hyperbolic_cross(N, f.d, signed=False)
    coeffs = hpc_analyze(f, K)
    approx, _ = project_dense(f, N)
    return approx, coeffs


def error_transfer_check(f: GridFunction, N: int, p: float):
    """Left: ||f - (cross projection of f)||_{L_p} on the unit cube.
    Right: the same quantity computed entirely on the torus: periodize the
    samples, project onto the signed cross by FFT masking, and take the
    normalized-measure L_p error. Equal to round-off on matched grids."""
    approx, _ = project_dense(f, N)
    diff_unit = f - approx
    lhs = diff_unit.lp_norm(p)

    g = periodize(f)
    dense = fourier_analyze_dense(g)
    n = dense.shape[0]
    dense = np.where(_cross_mask_signed(n, f.d, N), dense, 0.0)
    proj_t = fourier_synthesize_dense(dense, f.m)
    diff_t = g - proj_t
    if p == math.inf:
        rhs = diff_t.lp_norm(p)
    else:
        rhs = 2.0 ** (-f.d / p) * diff_t.lp_norm(p)
    return lhs, rhs


def evenization_check(f: GridFunction, N: int):
    """L_2 errors of three routes that must agree for reflection-even data:
    the unit-cube cross projection, the torus cross projection of the
    periodization, and the explicitly evenized torus projection."""
    lhs, rhs = error_transfer_check(f, N, 2.0)
    g = periodize(f)
    dense = fourier_analyze_dense(g)
    n = dense.shape[0]
    dense = np.where(_cross_mask_signed(n, f.d, N), dense, 0.0)
    proj_even = evenize(fourier_synthesize_dense(dense, f.m))
    third = 2.0 ** (-f.d / 2.0) * (g - proj_even).lp_norm(2.0)
    return lhs, rhs, third


def _design_matrix(points: np.ndarray, K: IndexSet) -> np.ndarray:
    arr = K.as_array()
    n, d = points.shape
    cols = np.ones((n, len(arr)))
    for j, kbar in enumerate(arr):
        col = np.ones(n)
        for ax in range(d):
            col = col * hpc_basis_1d(int(kbar[ax]), points[:, ax])
        cols[:, j] = col
    return cols


def ls_recover(
    points: np.ndarray,
    values: np.ndarray,
    K: IndexSet,
    weights: np.ndarray = None,
    cond_threshold: float = 1e8,
):
    """Weighted least-squares fit of cosine coefficients on the index set.

    Solves min sum w_i |values_i - sum_k c_k c_kbar(x_i)|^2 by orthogonal
    factorization. Returns (CoefficientMap, info dict with condition number
    and the max normal-equation residual). A design matrix with condition
    above the threshold raises instead of silently regularizing.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.asarray(values, dtype=float)
    A = _design_matrix(points, K)
    sqw = np.ones(len(values)) if weights is None else np.sqrt(
        np.asarray(weights, dtype=float)
    )
    Aw = A * sqw[:, None]
    bw = values * sqw
    coef, _, rank, svals = np.linalg.lstsq(Aw, bw, rcond=None)
    cond = float(svals[0] / svals[-1]) if svals[-1] > 0 else math.inf
    if cond > cond_threshold or rank < A.shape[1]:
        raise ConditionError(
            f"design matrix condition {cond:.3e} exceeds {cond_threshold:.1e}"
        )
    normal_resid = float(np.max(np.abs(Aw.T @ (Aw @ coef - bw))))
    entries = {
        tuple(int(t) for t in kbar): float(c)
        for kbar, c in zip(K.as_array(), coef)
    }
    info = {"condition": cond, "normal_residual": normal_resid, "rank": int(rank)}
    return CoefficientMap(basis="hpc", d=points.shape[1], entries=entries), info


def _l2_error_on_grid(f, coeffs: CoefficientMap, m: int, d: int) -> float:
    from .grids import hpc_synthesize

    g = GridFunction.from_callable(f, d, m, UNIT)
    approx = hpc_synthesize(coeffs, m)
    return (g - approx).lp_norm(2.0)


def ls_error_experiment(
    member,
    N: int,
    oversample: float = 4.0,
    seed: int = 0,
    grid_level: int = 10,
    weights: str = "uniform",
):
    """Recovery error of iid-uniform sampling with logarithmic oversampling
    against the projection error of the same cross; returns a dict with both
    errors, the sample count, and the design condition number."""
    d = member.d
    K = hyperbolic_cross(N, d, signed=False)
    card = len(K.members)
    n_samples = int(math.ceil(oversample * card * (1.0 + math.log(card))))
    rng = np.random.default_rng(seed)
    pts = rng.random((n_samples, d))
    vals = member(*[pts[:, i] for i in range(d)])
    w = None if weights == "uniform" else np.ones(n_samples)
    coeffs, info = ls_recover(pts, vals, K, weights=w)
    ls_err = _l2_error_on_grid(member, coeffs, grid_level, d)

    g = GridFunction.from_callable(member, d, grid_level, UNIT)
    approx, _ = project_dense(g, N)
    proj_err = (g - approx).lp_norm(2.0)
    return {
        "N": N,
        "dim": card,
        "samples": n_samples,
        "ls_error": ls_err,
        "projection_error": proj_err,
        "condition": info["condition"],
        "normal_residual": info["normal_residual"],
    }


def exact_projection_error(member, N: int, kmax: int) -> float:
    """L_2 projection error from closed-form coefficients: the tail
    ell_2 norm over the complement of the cross, computed on a box large
    enough that the remainder beyond kmax is negligible for k^{-2} decay."""
    d = member.d
    total = 0.0
    for kbar in np.ndindex(*([kmax + 1] * d)):
        prod = 1.0
        for k in kbar:
            prod *= 1.0 + k
        if prod <= N:
            continue
        total += member.hpc_coefficient(kbar) ** 2
    return math.sqrt(total)


def projection_error_rate(
    member,
    N_list,
    p: float = 2.0,
    kmax: int = 512,
    log_exponent: float = 0.0,
    skip_smallest: int = 1,
):
    """Errors against dim(cross) with a least-squares slope fit in log2
    coordinates; a positive log_exponent divides (log2 n)^e out first."""
    from .cubature import RateFit

    dims, errors = [], []
    for N in N_list:
        K = hyperbolic_cross(N, member.d, signed=False)
        dims.append(len(K.members))
        errors.append(exact_projection_error(member, N, kmax))
    xs, ys = [], []
    for n, e in zip(dims[skip_smallest:], errors[skip_smallest:]):
        if e <= 0:
            continue
        corrected = e / (math.log2(n) ** log_exponent if log_exponent else 1.0)
        xs.append(math.log2(n))
        ys.append(math.log2(corrected))
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(
        np.sqrt(np.mean((np.polyval([slope, intercept], xs) - np.asarray(ys)) ** 2))
    )
    return RateFit(
        ns=dims,
        errors=errors,
        slope=float(slope),
        intercept=float(intercept),
        residual=resid,
        log_exponent=log_exponent,
        skipped=skip_smallest,
    )
