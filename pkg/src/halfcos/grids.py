"""Grid functions on the unit cube and the symmetric torus, and the
half-period cosine / torus Fourier transforms between samples and
coefficients.

Two grid conventions are used throughout:

* unit cube [0,1]^d: closed uniform tensor grid with 2^m + 1 points per
  axis (endpoints included, trapezoidal quadrature weights). Half-period
  cosines do not vanish at 0 and 1, so the endpoints carry information.
* symmetric torus [-1,1]^d: half-open periodic grid with 2^(m+1) points
  per axis at -1 + i 2^-m (equal quadrature weights, no duplicated
  endpoint).

Both grids share the spacing 2^-m. Every torus node maps under the
reflection rho onto a unit-cube node, with interior nodes covered exactly
twice; the discrete pairing identity <f,g> = 2^-d <Pf,Pg> therefore holds
to round-off, not just asymptotically.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import AliasingError, DomainError, ResolutionMismatchError
from .indexsets import IndexSet, count_nonzero


def fft_workers() -> int:
    """Thread cap for the transform backends, from HPC_BESOV_THREADS."""
    try:
        return max(1, int(os.environ.get("HPC_BESOV_THREADS", "1")))
    except ValueError:
        return 1

__all__ = [
    "UNIT",
    "SYM",
    "GridFunction",
    "CoefficientMap",
    "tent",
    "rho",
    "tau",
    "periodize",
    "restrict",
    "evenize",
    "hpc_basis_1d",
    "cos_basis",
    "exp_basis",
    "hpc_analyze",
    "hpc_analyze_dense",
    "hpc_synthesize",
    "hpc_synthesize_dense",
    "fourier_analyze",
    "fourier_analyze_dense",
    "fourier_synthesize",
    "fourier_synthesize_dense",
    "signed_fft_freqs",
    "coefficient_decay_report",
]

UNIT = "unit"
SYM = "sym"


def tent(x):
    """Componentwise tent map t -> 1 - |2t - 1| on [0,1]^d."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("tent expects points in [0,1]^d")
    return 1.0 - np.abs(2.0 * x - 1.0)


def rho(x):
    """2-periodic even reflection, min{x mod 2, (-x) mod 2}; equals |x| on [-1,1]."""
    x = np.asarray(x, dtype=float)
    return np.minimum(np.mod(x, 2.0), np.mod(-x, 2.0))


def tau(x):
    """Affine chart t -> 2t - 1 from [0,1] onto [-1,1]."""
    return 2.0 * np.asarray(x, dtype=float) - 1.0


@dataclass
class GridFunction:
    """Samples of a function on one of the two tensor grids.

    domain is 'unit' or 'sym'; m is the dyadic spacing level (grid step
    2^-m on both domains); values is the dense sample tensor.
    """

    domain: str
    m: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        n = self.axis_size
        if self.values.shape != (n,) * self.d:
            raise ResolutionMismatchError(
                f"expected shape {(n,) * self.d}, got {self.values.shape}"
            )

    @property
    def d(self) -> int:
        return self.values.ndim

    @property
    def axis_size(self) -> int:
        if self.domain == UNIT:
            return 2**self.m + 1
        if self.domain == SYM:
            return 2 ** (self.m + 1)
        raise DomainError(f"unknown domain {self.domain!r}")

    def axis_points(self) -> np.ndarray:
        h = 2.0**-self.m
        if self.domain == UNIT:
            return np.arange(2**self.m + 1) * h
        return -1.0 + np.arange(2 ** (self.m + 1)) * h

    def axis_weights(self) -> np.ndarray:
        h = 2.0**-self.m
        if self.domain == UNIT:
            w = np.full(2**self.m + 1, h)
            w[0] *= 0.5
            w[-1] *= 0.5
            return w
        return np.full(2 ** (self.m + 1), h)

    @classmethod
    def from_callable(cls, f, d: int, m: int, domain: str = UNIT) -> "GridFunction":
        """Sample a vectorized callable on the tensor grid."""
        h = 2.0**-m
        if domain == UNIT:
            ax = np.arange(2**m + 1) * h
        elif domain == SYM:
            ax = -1.0 + np.arange(2 ** (m + 1)) * h
        else:
            raise DomainError(f"unknown domain {domain!r}")
        grids = np.meshgrid(*([ax] * d), indexing="ij")
        vals = f(*grids) if d > 1 else f(grids[0])
        vals = np.broadcast_to(np.asarray(vals), grids[0].shape).copy()
        return cls(domain=domain, m=m, values=vals)

    def integrate(self) -> complex:
        w = self.axis_weights()
        out = self.values
        for _ in range(self.d):
            out = np.tensordot(out, w, axes=([-1], [0]))
        return complex(out) if np.iscomplexobj(self.values) else float(out)

    def inner(self, other: "GridFunction"):
        """Quadrature approximation of the integral of f times conj(g)."""
        if (self.domain, self.m) != (other.domain, other.m):
            raise ResolutionMismatchError("grids do not match")
        prod = GridFunction(self.domain, self.m, self.values * np.conj(other.values))
        return prod.integrate()

    def lp_norm(self, p) -> float:
        """L_p quadrature norm; p = inf is the grid maximum of |f|."""
        a = np.abs(self.values)
        if p == np.inf or p == "inf":
            return float(a.max())
        powed = GridFunction(self.domain, self.m, a ** float(p))
        return float(powed.integrate()) ** (1.0 / float(p))

    def __add__(self, other):
        if (self.domain, self.m) != (other.domain, other.m):
            raise ResolutionMismatchError("grids do not match")
        return GridFunction(self.domain, self.m, self.values + other.values)

    def __sub__(self, other):
        if (self.domain, self.m) != (other.domain, other.m):
            raise ResolutionMismatchError("grids do not match")
        return GridFunction(self.domain, self.m, self.values - other.values)

    def __mul__(self, scalar):
        return GridFunction(self.domain, self.m, self.values * scalar)

    __rmul__ = __mul__

    def to_bytes(self) -> bytes:
        """16-byte header (d, M, domain tag, value kind) + LE float64 payload."""
        kind = 1 if np.iscomplexobj(self.values) else 0
        tag = 0 if self.domain == UNIT else 1
        header = struct.pack("<4I", self.d, self.axis_size, tag, kind)
        dtype = "<c16" if kind else "<f8"
        return header + np.ascontiguousarray(self.values).astype(dtype).tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "GridFunction":
        d, M, tag, kind = struct.unpack("<4I", blob[:16])
        domain = UNIT if tag == 0 else SYM
        m = int(np.log2(M - 1)) if domain == UNIT else int(np.log2(M)) - 1
        dtype = "<c16" if kind else "<f8"
        vals = np.frombuffer(blob[16:], dtype=dtype).reshape((M,) * d)
        return cls(domain=domain, m=m, values=vals.copy())


def periodize(f: GridFunction) -> GridFunction:
    """Reflection periodization P: f -> f o rho restricted to [-1,1]^d.

    Exact index mirroring: the torus node -1 + i 2^-m reflects onto the
    unit node |i - 2^m| 2^-m.
    """
    if f.domain != UNIT:
        raise DomainError("periodize expects a unit-cube grid function")
    n = 2**f.m
    idx = np.abs(np.arange(2 * n) - n)
    vals = f.values
    for ax in range(f.d):
        vals = np.take(vals, idx, axis=ax)
    return GridFunction(SYM, f.m, vals)


def restrict(g: GridFunction) -> GridFunction:
    """Restriction R: g -> g on [0,1]^d (torus node x=1 identified with -1)."""
    if g.domain != SYM:
        raise DomainError("restrict expects a torus grid function")
    n = 2**g.m
    idx = (n + np.arange(n + 1)) % (2 * n)
    vals = g.values
    for ax in range(g.d):
        vals = np.take(vals, idx, axis=ax)
    return GridFunction(UNIT, g.m, vals)


def evenize(f: GridFunction) -> GridFunction:
    """Average of f over all componentwise reflections, exactly on indices:
    x_i -> 1 - x_i on the unit cube, x_i -> -x_i on the torus."""
    if f.domain == UNIT:
        flip = lambda v, ax: np.flip(v, axis=ax)
    else:
        n2 = f.axis_size
        idx = (n2 - np.arange(n2)) % n2
        flip = lambda v, ax: np.take(v, idx, axis=ax)
    out = np.zeros_like(np.asarray(f.values))
    for mask in range(2**f.d):
        v = f.values
        for ax in range(f.d):
            if (mask >> ax) & 1:
                v = flip(v, ax)
        out = out + v
    return GridFunction(f.domain, f.m, out / 2**f.d)


def hpc_basis_1d(k: int, x):
    """Half-period cosine c_k: 1 for k=0, sqrt(2) cos(pi k x) otherwise."""
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.ones_like(x)
    return np.sqrt(2.0) * np.cos(np.pi * k * x)


def cos_basis(kbar, *axes):
    """Tensor cosine 2^(-d/2) prod cos(pi k_i x_i) on the torus."""
    d = len(kbar)
    out = 2.0 ** (-d / 2.0)
    for k, x in zip(kbar, axes):
        out = out * np.cos(np.pi * k * np.asarray(x, dtype=float))
    return out


def exp_basis(kbar, *axes):
    """Tensor exponential 2^(-d/2) exp(i pi k . x) on the torus."""
    d = len(kbar)
    out = None
    for k, x in zip(kbar, axes):
        t = np.exp(1j * np.pi * k * np.asarray(x, dtype=float))
        out = t if out is None else out * t
    return 2.0 ** (-d / 2.0) * out


@dataclass
class CoefficientMap:
    """Sparse map from multi-index to coefficient.

    basis: 'hpc' (keys in N_0^d), 'torus-exp' (keys in Z^d), or
    'cw-primal'/'cw-dual' (keys are (jbar, kbar) pairs over
    N_{-1}^d x Z^d). Absent key means coefficient zero.
    """

    basis: str
    d: int
    entries: dict

    def get(self, key):
        return self.entries.get(self._norm_key(key), 0.0)

    def _norm_key(self, key):
        if self.basis in ("cw-primal", "cw-dual"):
            j, k = key
            return (tuple(int(x) for x in j), tuple(int(x) for x in k))
        return tuple(int(x) for x in key)

    def items_sorted(self):
        return sorted(self.entries.items())

    def support(self):
        return [k for k, _ in self.items_sorted()]

    def __len__(self):
        return len(self.entries)

    def scaled(self, alpha) -> "CoefficientMap":
        return CoefficientMap(
            self.basis, self.d, {k: alpha * v for k, v in self.entries.items()}
        )

    def to_csv(self) -> str:
        """Frequency bases: rows k_1,...,k_d,re,im. Wavelet bases:
        rows j_1,...,j_d,k_1,...,k_d,value."""
        rows = []
        if self.basis in ("cw-primal", "cw-dual"):
            head = ",".join(
                [f"j_{i+1}" for i in range(self.d)] + [f"k_{i+1}" for i in range(self.d)]
            ) + ",value"
            rows.append(head)
            for (j, k), v in self.items_sorted():
                rows.append(",".join(str(x) for x in j + k) + f",{float(np.real(v))!r}")
        else:
            head = ",".join(f"k_{i+1}" for i in range(self.d)) + ",re,im"
            rows.append(head)
            for k, v in self.items_sorted():
                v = complex(v)
                rows.append(",".join(str(x) for x in k) + f",{v.real!r},{v.imag!r}")
        return "\n".join(rows) + "\n"

    @classmethod
    def from_csv(cls, text: str, basis: str, d: int) -> "CoefficientMap":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        entries = {}
        for ln in lines[1:]:
            parts = ln.split(",")
            if basis in ("cw-primal", "cw-dual"):
                j = tuple(int(x) for x in parts[:d])
                k = tuple(int(x) for x in parts[d : 2 * d])
                entries[(j, k)] = float(parts[2 * d])
            else:
                k = tuple(int(x) for x in parts[:d])
                entries[k] = complex(float(parts[d]), float(parts[d + 1]))
        return cls(basis=basis, d=d, entries=entries)


def _check_aliasing(m: int, kmax: int):
    # Margin factor 4 guards quadrature of products of basis functions.
    if 2**m < 4 * max(kmax, 1):
        raise AliasingError(
            f"grid level m={m} too low for frequencies up to {kmax}; need 2^m >= {4 * kmax}"
        )


def hpc_analyze_dense(f: GridFunction) -> np.ndarray:
    """Full tensor of half-period cosine coefficients up to the grid cutoff.

    The closed-grid trapezoidal quadrature of f against c_kbar coincides
    with a type-I DCT, so the whole tensor costs O(M^d log M). Entry [kbar]
    approximates the integral of f times c_kbar; exact to round-off for
    cosine polynomials with per-axis frequency below 2^m.
    """
    if f.domain != UNIT:
        raise DomainError("hpc_analyze expects a unit-cube grid function")
    h = 2.0**-f.m
    coeff = scipy.fft.dctn(np.asarray(f.values, dtype=float), type=1, workers=fft_workers()) * (h / 2.0) ** f.d
    norm = np.ones(f.axis_size)
    norm[1:] = np.sqrt(2.0)
    for ax in range(f.d):
        shape = [1] * f.d
        shape[ax] = -1
        coeff = coeff * norm.reshape(shape)
    return coeff


def hpc_analyze(f: GridFunction, K: IndexSet) -> CoefficientMap:
    """Half-period cosine coefficients <f, c_kbar> for kbar in K.

    Raises AliasingError when the grid resolution violates the margin rule
    2^m >= 4 max_i k_i instead of silently degrading.
    """
    arr = K.as_array()
    kmax = int(arr.max()) if arr.size else 0
    if arr.size and arr.min() < 0:
        raise ValueError("half-period cosine frequencies must be nonnegative")
    _check_aliasing(f.m, kmax)
    dense = hpc_analyze_dense(f)
    entries = {tuple(k): dense[tuple(k)] for k in arr}
    return CoefficientMap(basis="hpc", d=f.d, entries=entries)


def hpc_synthesize(coeffs: CoefficientMap, m: int) -> GridFunction:
    """Evaluate the finite expansion sum of coeff * c_kbar on the closed grid."""
    if coeffs.basis != "hpc":
        raise ValueError("expected half-period cosine coefficients")
    d = coeffs.d
    n = 2**m + 1
    x = np.arange(n) * 2.0**-m
    out = np.zeros((n,) * d)
    for k, v in coeffs.items_sorted():
        term = np.real(v)
        piece = np.ones((n,) * d)
        for ax, ki in enumerate(k):
            shape = [1] * d
            shape[ax] = -1
            piece = piece * hpc_basis_1d(ki, x).reshape(shape)
        out += term * piece
    return GridFunction(UNIT, m, out)


def hpc_synthesize_dense(coeff: np.ndarray, m: int) -> GridFunction:
    """Inverse of hpc_analyze_dense for a full coefficient tensor (padded
    or truncated to the grid size); used by the block machinery.

    Sum_k z_k cos(pi k j / 2^m) equals an unnormalized DCT-I after halving
    the interior coefficients, so synthesis is again a single transform.
    """
    d = coeff.ndim
    n = 2**m + 1
    full = np.zeros((n,) * d)
    sl = tuple(slice(0, min(s, n)) for s in coeff.shape)
    full[sl] = coeff[sl]
    scale = np.full(n, 0.5)
    scale[0] = 1.0
    scale[-1] = 1.0
    norm = np.ones(n)
    norm[1:] = np.sqrt(2.0)
    for ax in range(d):
        shape = [1] * d
        shape[ax] = -1
        full = full * (norm * scale).reshape(shape)
    vals = scipy.fft.dctn(full, type=1, workers=fft_workers())
    return GridFunction(UNIT, m, vals)


def fourier_analyze_dense(g: GridFunction) -> np.ndarray:
    """Full tensor of torus Fourier coefficients, index k in FFT layout."""
    if g.domain != SYM:
        raise DomainError("fourier_analyze expects a torus grid function")
    n = g.axis_size
    h = 2.0**-g.m
    coeff = scipy.fft.fftn(np.asarray(g.values, dtype=complex), workers=fft_workers()) * h**g.d * 2.0 ** (-g.d / 2.0)
    # Node offset -1 per axis contributes the alternating sign (-1)^k.
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    for ax in range(g.d):
        shape = [1] * g.d
        shape[ax] = -1
        coeff = coeff * sign.reshape(shape)
    return coeff


def fourier_analyze(g: GridFunction, K: IndexSet) -> CoefficientMap:
    """Torus Fourier coefficients <g, exp_kbar> for signed kbar in K."""
    arr = K.as_array()
    kmax = int(np.abs(arr).max()) if arr.size else 0
    _check_aliasing(g.m, kmax)
    dense = fourier_analyze_dense(g)
    n = g.axis_size
    entries = {}
    for k in arr:
        entries[tuple(k)] = dense[tuple(int(ki) % n for ki in k)]
    return CoefficientMap(basis="torus-exp", d=g.d, entries=entries)


def fourier_synthesize(coeffs: CoefficientMap, m: int) -> GridFunction:
    """Evaluate the finite expansion sum of coeff * exp_kbar on the torus grid."""
    if coeffs.basis != "torus-exp":
        raise ValueError("expected torus Fourier coefficients")
    d = coeffs.d
    n = 2 ** (m + 1)
    x = -1.0 + np.arange(n) * 2.0**-m
    out = np.zeros((n,) * d, dtype=complex)
    for k, v in coeffs.items_sorted():
        piece = np.full((n,) * d, 2.0 ** (-d / 2.0), dtype=complex)
        for ax, ki in enumerate(k):
            shape = [1] * d
            shape[ax] = -1
            piece = piece * np.exp(1j * np.pi * ki * x).reshape(shape)
        out += complex(v) * piece
    return GridFunction(SYM, m, out)


def signed_fft_freqs(n: int) -> np.ndarray:
    """Signed frequency of each FFT-layout slot, centered on [-n/2, n/2)."""
    return (np.arange(n) + n // 2) % n - n // 2


def fourier_synthesize_dense(coeff: np.ndarray, m: int) -> GridFunction:
    """Inverse of fourier_analyze_dense for a full FFT-layout tensor."""
    d = coeff.ndim
    n = 2 ** (m + 1)
    if any(s != n for s in coeff.shape):
        raise ResolutionMismatchError(
            f"dense Fourier tensor must have {n} slots per axis"
        )
    h = 2.0**-m
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    work = np.asarray(coeff, dtype=complex)
    for ax in range(d):
        shape = [1] * d
        shape[ax] = -1
        work = work * sign.reshape(shape)
    vals = scipy.fft.ifftn(work, workers=fft_workers()) / (h**d * 2.0 ** (-d / 2.0))
    return GridFunction(SYM, m, vals)


def coefficient_decay_report(f: GridFunction, k_max: int):
    """Rows (kbar, |coef| * prod max(1,|k_i|)^2) over the box |kbar|_inf <= k_max.

    For restrictions of twice continuously differentiable functions the
    second column is bounded in terms of derivative sup-norms up to order
    2 per axis.
    """
    _check_aliasing(f.m, k_max)
    dense = hpc_analyze_dense(f)
    rows = []
    for k in np.ndindex(*([k_max + 1] * f.d)):
        weight = 1.0
        for ki in k:
            weight *= max(1, ki) ** 2
        rows.append((tuple(k), abs(float(dense[k])) * weight))
    return rows
