"""Quadrature, harmonic transforms and test fields on the unit two-sphere.

The grid tensors Gauss-Legendre nodes in x = cos(theta) with a uniform,
endpoint-free azimuthal grid, so there are no nodes at the poles and the
quadrature integrates band-limited integrands exactly.  All differential
operators are spectral: fields are analyzed into real orthonormal spherical
harmonics and derivatives are synthesized from precomputed Legendre-derivative
tables, which keeps every operation pole-free.

Real harmonic conventions: Y_{l,0} = Pbar_{l,0}(x), and for m > 0
Y_{l,+m} = sqrt(2) Pbar_{l,m}(x) cos(m phi), Y_{l,-m} = sqrt(2) Pbar_{l,m}(x)
sin(m phi), with Pbar normalized so the Y are orthonormal in L^2(S^2).
Coefficient vectors are flat with index l^2 + l + m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SphereGrid",
    "ScalarField",
    "build_grid",
    "integrate",
    "laplace_beltrami",
    "c2_norm",
    "random_c2_field",
    "coeff_index",
    "n_coeffs",
    "scalar_field_to_dict",
    "scalar_field_from_dict",
]


def coeff_index(l: int, m: int) -> int:
    """Flat index of the (l, m) real-harmonic coefficient."""
    if abs(m) > l:
        raise ValueError(f"|m| = {abs(m)} exceeds l = {l}")
    return l * l + l + m


def n_coeffs(lmax: int) -> int:
    return (lmax + 1) ** 2


def _tri(l: int, m: int) -> int:
    # triangular index into the (m >= 0) Legendre tables
    return l * (l + 1) // 2 + m


def _legendre_tables(lmax: int, x: np.ndarray):
    """Normalized associated Legendre functions Pbar_{l,m}(x) and their first
    and second x-derivatives, for 0 <= m <= l <= lmax.

    Returns three arrays of shape (n_pairs, len(x)) indexed by _tri(l, m).
    Normalization: int_{-1}^{1} Pbar_{l,m}^2 dx = 1/(2 pi); no Condon-Shortley
    phase.  Valid for |x| < 1 (interior nodes only).
    """
    x = np.asarray(x, dtype=float)
    s2 = 1.0 - x * x  # sin^2(theta), strictly positive at interior nodes
    npairs = (lmax + 1) * (lmax + 2) // 2
    P = np.zeros((npairs, x.size))
    D = np.zeros_like(P)
    D2 = np.zeros_like(P)

    P[0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, lmax + 1):
        c = math.sqrt((2.0 * m + 1.0) / (2.0 * m))
        prev = _tri(m - 1, m - 1)
        P[_tri(m, m)] = c * np.sqrt(s2) * P[prev]
    for m in range(0, lmax + 1):
        i = _tri(m, m)
        # d/dx and d2/dx2 of the diagonal seed c_m (1-x^2)^{m/2}
        D[i] = -m * x * P[i] / s2
        D2[i] = m * P[i] * ((m - 2.0) * x * x - s2) / (s2 * s2)
        if m + 1 <= lmax:
            d = math.sqrt(2.0 * m + 3.0)
            j = _tri(m + 1, m)
            P[j] = d * x * P[i]
            D[j] = d * (P[i] + x * D[i])
            D2[j] = d * (2.0 * D[i] + x * D2[i])
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = -math.sqrt(
                (2.0 * l + 1.0) / (2.0 * l - 3.0)
                * ((l - 1.0) ** 2 - m * m) / (l * l - m * m)
            )
            k, k1, k2 = _tri(l, m), _tri(l - 1, m), _tri(l - 2, m)
            P[k] = a * x * P[k1] + b * P[k2]
            D[k] = a * (P[k1] + x * D[k1]) + b * D[k2]
            D2[k] = a * (2.0 * D[k1] + x * D2[k1]) + b * D2[k2]
    return P, D, D2


class SphereGrid:
    """Gauss-Legendre x uniform-phi quadrature grid on the unit sphere.

    Nodes are ordered row-major, theta first (theta ascending, no poles),
    phi_j = 2 pi j / n_phi.  ``w_node`` sums to 4 pi.
    """

    def __init__(self, n_theta: int, n_phi: int):
        if n_theta < 8:
            raise ValueError("n_theta must be at least 8")
        if n_phi < max(16, 2 * n_theta):
            raise ValueError("n_phi must be at least max(16, 2 n_theta)")
        self.n_theta = int(n_theta)
        self.n_phi = int(n_phi)
        nodes, weights = np.polynomial.legendre.leggauss(self.n_theta)
        order = np.argsort(-nodes)  # theta ascending <=> x descending
        self.x = nodes[order]
        self.w_theta = weights[order]
        self.theta = np.arccos(self.x)
        self.sin_theta = np.sqrt(1.0 - self.x**2)
        self.phi = 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi
        self.w_node = np.outer(self.w_theta, np.full(self.n_phi, 2.0 * math.pi / self.n_phi))
        self.lmax = self.n_theta - 1  # full transform band
        self._tables = None

    # -- harmonic machinery ------------------------------------------------

    def tables(self):
        if self._tables is None:
            self._tables = _legendre_tables(self.lmax, self.x)
        return self._tables

    def analyze(self, values: np.ndarray, lmax: int | None = None) -> np.ndarray:
        """Forward transform: grid values -> real harmonic coefficients.

        Exact for fields band-limited at or below the grid band; higher
        content aliases.
        """
        lmax = self.lmax if lmax is None else int(lmax)
        if lmax > self.lmax:
            raise ValueError(f"lmax = {lmax} beyond grid band {self.lmax}")
        values = np.asarray(values, dtype=float)
        if values.shape != (self.n_theta, self.n_phi):
            raise ValueError("field shape does not match grid")
        P, _, _ = self.tables()
        G = np.fft.rfft(values, axis=1) * (2.0 * math.pi / self.n_phi)
        coeffs = np.zeros(n_coeffs(lmax))
        wc0 = self.w_theta * G[:, 0].real
        for l in range(lmax + 1):
            coeffs[coeff_index(l, 0)] = P[_tri(l, 0)] @ wc0
        for m in range(1, lmax + 1):
            wc = self.w_theta * G[:, m].real
            ws = self.w_theta * (-G[:, m].imag)
            for l in range(m, lmax + 1):
                row = P[_tri(l, m)]
                coeffs[coeff_index(l, m)] = math.sqrt(2.0) * (row @ wc)
                coeffs[coeff_index(l, -m)] = math.sqrt(2.0) * (row @ ws)
        return coeffs

    def _per_m_profiles(self, coeffs: np.ndarray, table: np.ndarray):
        """Zonal profiles (A_m, B_m)(x_i) of sum c_{lm} T_{lm}(x) trig(m phi)."""
        lmax = int(math.isqrt(coeffs.size)) - 1
        A = np.zeros((lmax + 1, self.n_theta))
        B = np.zeros((lmax + 1, self.n_theta))
        for l in range(lmax + 1):
            A[0] += coeffs[coeff_index(l, 0)] * table[_tri(l, 0)]
        for m in range(1, lmax + 1):
            for l in range(m, lmax + 1):
                row = table[_tri(l, m)]
                A[m] += math.sqrt(2.0) * coeffs[coeff_index(l, m)] * row
                B[m] += math.sqrt(2.0) * coeffs[coeff_index(l, -m)] * row
        return A, B

    def _assemble(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        H = np.zeros((self.n_theta, self.n_phi // 2 + 1), dtype=complex)
        H[:, 0] = A[0] * self.n_phi
        mmax = A.shape[0] - 1
        H[:, 1 : mmax + 1] = (A[1:] - 1j * B[1:]).T * (self.n_phi / 2.0)
        return np.fft.irfft(H, n=self.n_phi, axis=1)

    def synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        """Inverse transform: coefficients -> grid values."""
        P, _, _ = self.tables()
        A, B = self._per_m_profiles(coeffs, P)
        return self._assemble(A, B)

    def synth_derivs(self, coeffs: np.ndarray) -> dict:
        """Field and coordinate partials on the grid, all spectral.

        Returns a dict with keys f, ft, fp, ftt, ftp, fpp holding the field
        and its theta/phi partial derivatives up to second order.
        """
        P, D, D2 = self.tables()
        m = np.arange(int(math.isqrt(coeffs.size)))[:, None]
        A, B = self._per_m_profiles(coeffs, P)
        Ax, Bx = self._per_m_profiles(coeffs, D)
        Axx, Bxx = self._per_m_profiles(coeffs, D2)

        f = self._assemble(A, B)
        fx = self._assemble(Ax, Bx)
        fxx = self._assemble(Axx, Bxx)
        fp = self._assemble(m * B, -m * A)
        fpp = self._assemble(-(m**2) * A, -(m**2) * B)
        fxp = self._assemble(m * Bx, -m * Ax)

        s = self.sin_theta[:, None]
        x = self.x[:, None]
        return {
            "f": f,
            "ft": -s * fx,
            "fp": fp,
            "ftt": -x * fx + s * s * fxx,
            "ftp": -s * fxp,
            "fpp": fpp,
        }

    def evaluate_at(self, coeffs: np.ndarray, theta, phi, derivs: bool = False):
        """Evaluate a coefficient vector at arbitrary interior points.

        With ``derivs`` also returns the first partials (f_theta, f_phi).
        """
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        lmax = int(math.isqrt(coeffs.size)) - 1
        x = np.cos(theta)
        P, D, _ = _legendre_tables(lmax, x)
        f = np.zeros_like(x)
        fx = np.zeros_like(x)
        fp = np.zeros_like(x)
        for l in range(lmax + 1):
            c = coeffs[coeff_index(l, 0)]
            f += c * P[_tri(l, 0)]
            fx += c * D[_tri(l, 0)]
        for m_ in range(1, lmax + 1):
            cosm, sinm = np.cos(m_ * phi), np.sin(m_ * phi)
            for l in range(m_, lmax + 1):
                cc = math.sqrt(2.0) * coeffs[coeff_index(l, m_)]
                cs = math.sqrt(2.0) * coeffs[coeff_index(l, -m_)]
                Pm, Dm = P[_tri(l, m_)], D[_tri(l, m_)]
                f += (cc * cosm + cs * sinm) * Pm
                fx += (cc * cosm + cs * sinm) * Dm
                fp += m_ * (-cc * sinm + cs * cosm) * Pm
        if not derivs:
            return f
        ft = -np.sin(theta) * fx
        return f, ft, fp

    def basis_with_gradients(self, lmax: int):
        """Values and coordinate first partials of Y_{lm} up to lmax.

        Returns (Y, Yt, Yp), each of shape (n_coeffs, n_theta, n_phi).
        """
        if lmax > self.lmax:
            raise ValueError(f"lmax = {lmax} beyond grid band {self.lmax}")
        P, D, _ = self.tables()
        K = n_coeffs(lmax)
        Y = np.zeros((K, self.n_theta, self.n_phi))
        Yt = np.zeros_like(Y)
        Yp = np.zeros_like(Y)
        s = self.sin_theta[:, None]
        cosm = {m: np.cos(m * self.phi)[None, :] for m in range(lmax + 1)}
        sinm = {m: np.sin(m * self.phi)[None, :] for m in range(lmax + 1)}
        for l in range(lmax + 1):
            for m in range(0, l + 1):
                p = P[_tri(l, m)][:, None]
                d = D[_tri(l, m)][:, None]
                if m == 0:
                    Y[coeff_index(l, 0)] = np.broadcast_to(p, Y.shape[1:])
                    Yt[coeff_index(l, 0)] = -s * d
                else:
                    r2 = math.sqrt(2.0)
                    kc, ks = coeff_index(l, m), coeff_index(l, -m)
                    Y[kc] = r2 * p * cosm[m]
                    Y[ks] = r2 * p * sinm[m]
                    Yt[kc] = -r2 * s * d * cosm[m]
                    Yt[ks] = -r2 * s * d * sinm[m]
                    Yp[kc] = -r2 * m * p * sinm[m]
                    Yp[ks] = r2 * m * p * cosm[m]
        return Y, Yt, Yp


@dataclass(eq=False)
class ScalarField:
    """Scalar samples on a SphereGrid, stored row-major theta-then-phi."""

    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_theta, self.grid.n_phi):
            raise ValueError("field shape does not match grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")


def build_grid(n_theta: int, n_phi: int) -> SphereGrid:
    """Build the quadrature grid (Gauss-Legendre in cos theta x uniform phi)."""
    return SphereGrid(n_theta, n_phi)


def integrate(f: ScalarField) -> float:
    """Quadrature of f over the unit sphere (solid-angle measure)."""
    return float(np.sum(f.grid.w_node * f.values))


def laplace_beltrami(f: ScalarField) -> ScalarField:
    """Spectral Laplace-Beltrami operator on the unit sphere.

    Exact (to transform accuracy) on fields band-limited below the grid
    band; higher content aliases.
    """
    g = f.grid
    coeffs = g.analyze(f.values)
    l = np.floor(np.sqrt(np.arange(coeffs.size))).astype(int)
    return ScalarField(g, g.synthesize(-l * (l + 1.0) * coeffs))


def _c2_pointwise(grid: SphereGrid, coeffs: np.ndarray):
    d = grid.synth_derivs(coeffs)
    s = grid.sin_theta[:, None]
    x = grid.x[:, None]
    cot = x / s
    grad2 = d["ft"] ** 2 + (d["fp"] / s) ** 2
    # covariant Hessian in the orthonormal frame (e_theta, e_phi/sin)
    h11 = d["ftt"]
    h12 = (d["ftp"] - cot * d["fp"]) / s
    h22 = d["fpp"] / (s * s) + cot * d["ft"]
    hess2 = h11**2 + 2.0 * h12**2 + h22**2
    return np.abs(d["f"]), np.sqrt(grad2), np.sqrt(hess2)


def c2_norm(f: ScalarField) -> float:
    """Discrete C^2 norm: max over nodes of |f|, |grad f| and |Hess f|_F.

    Gradient and Hessian are covariant quantities of the round metric,
    evaluated spectrally; the result is a max over grid nodes (the poles
    carry no nodes, so pole suprema are approached but not sampled).
    """
    a, b, c = _c2_pointwise(f.grid, f.grid.analyze(f.values))
    return float(max(a.max(), b.max(), c.max()))


def random_c2_field(
    grid: SphereGrid, seed: int, lmax: int, amplitude: float
) -> ScalarField:
    """Deterministic random band-limited field with prescribed C^2 norm.

    Each coefficient (l, m) is a standard normal drawn from an independent
    PCG64 stream keyed by SeedSequence([seed, l, m + l]); the field is then
    rescaled so that c2_norm equals ``amplitude`` exactly.  The draw depends
    only on (seed, l, m), never on iteration order or thread count.
    """
    if lmax > grid.n_theta / 4:
        raise ValueError("lmax too large for this grid (need lmax <= n_theta/4)")
    if amplitude < 0:
        raise ValueError("amplitude must be nonnegative")
    coeffs = np.zeros(n_coeffs(lmax))
    for l in range(lmax + 1):
        for m in range(-l, l + 1):
            ss = np.random.SeedSequence([int(seed), l, m + l])
            coeffs[coeff_index(l, m)] = np.random.Generator(np.random.PCG64(ss)).standard_normal()
    if amplitude == 0.0:
        return ScalarField(grid, np.zeros((grid.n_theta, grid.n_phi)))
    values = grid.synthesize(coeffs)
    norm = c2_norm(ScalarField(grid, values))
    return ScalarField(grid, values * (amplitude / norm))


def scalar_field_to_dict(f: ScalarField) -> dict:
    """JSON-ready form: {"n_theta", "n_phi", "values" (row-major)}."""
    return {
        "n_theta": f.grid.n_theta,
        "n_phi": f.grid.n_phi,
        "values": [float(v) for v in f.values.ravel()],
    }


def scalar_field_from_dict(d: dict, grid: SphereGrid | None = None) -> ScalarField:
    nt, np_ = int(d["n_theta"]), int(d["n_phi"])
    if grid is None:
        grid = build_grid(nt, np_)
    elif (grid.n_theta, grid.n_phi) != (nt, np_):
        raise ValueError("grid sizes do not match serialized field")
    values = np.asarray(d["values"], dtype=float).reshape(nt, np_)
    return ScalarField(grid, values)
