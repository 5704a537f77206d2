"""Jacobi-operator spectra and the strict-stability window (Lambda = 1).

The Jacobi operator of a surface is L = Laplace + Ric(nu, nu) + |A|^2; its
first eigenvalue is taken in the quadratic-form convention

    lambda_1 = inf_phi [ int |grad phi|^2 - (Ric(nu,nu) + |A|^2) phi^2 ] / int phi^2,

so strict stability means lambda_1 > 0.  On a minimal slice of neck radius a
the potential is constant and lambda_1 = -1 + 1/a^2 - Q^2/a^4 in closed form;
the discrete path minimizes the same Rayleigh quotient over a spherical
harmonic trial space and must reproduce it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .profile import integrate_profile
from .sphere import ScalarField, build_grid
from .surfaces import GraphSurface, SurfaceGeometry, induced_geometry

__all__ = [
    "SpectralReport",
    "lambda1_analytic",
    "stability_window",
    "lambda1_discrete",
    "laplace_spectrum",
    "laplace_spectrum_discrete",
    "eigenvalue_area_charge_residual",
    "spectral_report",
]


@dataclass
class SpectralReport:
    """Spectral diagnostics of one neck (a, Q)."""

    lambda1_analytic: float
    lambda1_discrete: float
    laplace_eigenvalues: list[float]
    window: tuple[float, float] | None
    identity_residual: float


def lambda1_analytic(a: float, q: float) -> float:
    """First Jacobi eigenvalue of the minimal slice: -1 + 1/a^2 - Q^2/a^4.

    Constant-potential operator, so the minimizer is the constant function
    and lambda_1 = -Ric(nu, nu).  Lambda = 1 normalization.
    """
    if a <= 0.0:
        raise ValueError("lambda1_analytic requires a > 0")
    return -1.0 + 1.0 / a**2 - q**2 / a**4


def stability_window(q: float) -> tuple[float, float] | None:
    """Range of a^2 with strictly stable necks (Lambda = 1).

    Returns ((1 - sqrt(1 - 4 Q^2))/2, (1 + sqrt(1 - 4 Q^2))/2), collapsing to
    a point at Q^2 = 1/4 and ``None`` (empty) for Q^2 > 1/4.  Equivalent
    characterization: lambda1_analytic(a, Q) > 0 iff a^4 - a^2 + Q^2 < 0.
    """
    disc = 1.0 - 4.0 * q**2
    if disc < 0.0:
        return None
    d = math.sqrt(disc)
    return (1.0 - d) / 2.0, (1.0 + d) / 2.0


def _rayleigh_pencil(geom: SurfaceGeometry, lmax: int, potential: np.ndarray):
    """Stiffness/mass matrices of the Jacobi form in the harmonic basis."""
    grid = geom.grid
    Y, Yt, Yp = grid.basis_with_gradients(lmax)
    K = Y.shape[0]
    w = grid.w_node * geom.area_element
    # grad-grad part with the induced inverse metric
    Gtt = w * geom.hinv_tt
    Gtp = w * geom.hinv_tp
    Gpp = w * geom.hinv_pp
    Yt_f = Yt.reshape(K, -1)
    Yp_f = Yp.reshape(K, -1)
    Y_f = Y.reshape(K, -1)
    stiff = (
        Yt_f @ (Gtt.ravel()[:, None] * Yt_f.T)
        + Yt_f @ (Gtp.ravel()[:, None] * Yp_f.T)
        + Yp_f @ (Gtp.ravel()[:, None] * Yt_f.T)
        + Yp_f @ (Gpp.ravel()[:, None] * Yp_f.T)
    )
    pot = Y_f @ ((w * potential).ravel()[:, None] * Y_f.T)
    mass = Y_f @ (w.ravel()[:, None] * Y_f.T)
    return stiff - pot, mass


def lambda1_discrete(surface: GraphSurface, lmax: int = 8) -> float:
    """Discrete first Jacobi eigenvalue of a graph surface.

    Minimizes the Rayleigh quotient over spherical harmonics up to ``lmax``,
    with the potential Ric(nu, nu) + |A|^2 evaluated pointwise from the
    ambient closed forms.  Enlarging the trial space can only lower the
    result (variational bound from above).
    """
    geom = induced_geometry(surface)
    Kmat, Mmat = _rayleigh_pencil(geom, lmax, geom.ric_nn + geom.a_norm2)
    vals = scipy.linalg.eigh(Kmat, Mmat, eigvals_only=True)
    return float(vals[0])


def laplace_spectrum(a: float, k: int) -> list[float]:
    """First k Laplace eigenvalues of the radius-a round sphere.

    Closed form: l(l+1)/a^2 with multiplicity 2l+1.  The spectral gap
    2/a^2 equals 8 pi / |Sigma| with |Sigma| = 4 pi a^2.
    """
    if a <= 0.0:
        raise ValueError("laplace_spectrum requires a > 0")
    out: list[float] = []
    l = 0
    while len(out) < k:
        out.extend([l * (l + 1.0) / a**2] * (2 * l + 1))
        l += 1
    return out[:k]


def laplace_spectrum_discrete(
    grid, a: float, k: int, lmax: int = 8
) -> list[float]:
    """Quadrature-assembled Laplace eigenvalues on the radius-a sphere.

    Discrete oracle for :func:`laplace_spectrum`: Gram matrices of the
    Dirichlet form and the L^2 pairing are built by quadrature in the
    harmonic basis and the generalized eigenproblem is solved densely.
    """
    Y, Yt, Yp = grid.basis_with_gradients(lmax)
    K = Y.shape[0]
    if k > K:
        raise ValueError(f"requested {k} eigenvalues from a basis of size {K}")
    w = grid.w_node
    s2 = grid.sin_theta[:, None] ** 2
    Yt_f = Yt.reshape(K, -1)
    Yp_f = Yp.reshape(K, -1)
    Y_f = Y.reshape(K, -1)
    # |grad Y|^2 on radius-a sphere integrates a-independently; mass scales a^2
    stiff = Yt_f @ (w.ravel()[:, None] * Yt_f.T) + Yp_f @ ((w / s2).ravel()[:, None] * Yp_f.T)
    mass = (a**2) * (Y_f @ (w.ravel()[:, None] * Y_f.T))
    vals = scipy.linalg.eigh(stiff, mass, eigvals_only=True)
    return [float(v) for v in vals[:k]]


def eigenvalue_area_charge_residual(a: float, q: float) -> float:
    """Residual of (lambda_1 + 1)|Sigma| + 16 pi^2 Q^2/|Sigma| - 4 pi.

    Algebraically zero for every (a, Q) at Lambda = 1; the returned value
    measures floating-point cancellation only.
    """
    lam1 = lambda1_analytic(a, q)
    sigma = 4.0 * math.pi * a**2
    return (lam1 + 1.0) * sigma + 16.0 * math.pi**2 * q**2 / sigma - 4.0 * math.pi


def spectral_report(a: float, q: float, n_theta: int = 32, k: int = 9) -> SpectralReport:
    """Assemble the full spectral diagnostic package for one neck."""
    grid = build_grid(n_theta, 2 * n_theta)
    prof = integrate_profile(a, q, 1.0, s_max=1.0)
    surf = GraphSurface(prof, 0.0, ScalarField(grid, np.zeros((n_theta, 2 * n_theta))))
    return SpectralReport(
        lambda1_analytic=lambda1_analytic(a, q),
        lambda1_discrete=lambda1_discrete(surf),
        laplace_eigenvalues=laplace_spectrum_discrete(grid, a, k),
        window=stability_window(q),
        identity_residual=eigenvalue_area_charge_residual(a, q),
    )
