"""Tour of the model family: horizon quartic, mass windows, Nariai limit.

Walks the (m, Q, Lambda) parameter space: where the quartic has three
positive roots, how the window closes at the extremal charge, and how the
double-root (Nariai) family sits on its upper edge.
"""

import numpy as np

from chmass import (
    ModelParams,
    admissible_window,
    horizon_roots,
    nariai_from_alpha,
    params_from_neck,
    surface_gravity,
)


def main():
    print("=== admissible mass window at Lambda = 1 ===")
    for q in (0.1, 0.3, 0.45, 0.499):
        lo, hi = admissible_window(q, 1.0)
        print(f"  Q = {q:<6}  ->  m in ({lo:.6f}, {hi:.6f})   width {hi - lo:.2e}")
    print("  the window collapses as Q^2 -> 1/4 (ultracold point)\n")

    print("=== horizon structure across the window (Q = 0.3) ===")
    lo, hi = admissible_window(0.3, 1.0)
    for m in (lo, 0.5 * (lo + hi), hi):
        hs = horizon_roots(ModelParams(m, 0.3, 1.0))
        roots = ", ".join(f"{r:+.5f}x{k}" for r, k in hs.roots)
        print(f"  m = {m:.6f}:  [{roots}]  ->  {hs.classification}")
    print()

    print("=== neck-centered parameterization ===")
    p = params_from_neck(0.5, 0.3, 1.0)
    hs = horizon_roots(p)
    print(f"  neck a = 0.5, Q = 0.3  ->  m = {p.m:.7f}")
    print(f"  horizons: r- = {hs.r_minus:.6f}, r+ = {hs.r_plus:.6f}, rc = {hs.r_cosmo:.6f}")
    print(f"  surface gravity at r+ : {surface_gravity(hs.r_plus, p):.6f}")
    print(f"  surface gravity at rc : {surface_gravity(hs.r_cosmo, p):.6f}\n")

    print("=== charged Nariai family (double outer root) ===")
    for alpha in np.linspace(0.72, 0.98, 5):
        npar = nariai_from_alpha(float(alpha), 1.0)
        k = surface_gravity(npar.alpha, ModelParams(npar.m, npar.q, 1.0))
        print(
            f"  alpha = {alpha:.3f}:  m = {npar.m:.6f}  Q^2 = {npar.q2:.6f}"
            f"  r- = {npar.r_minus:.6f}  omega = {npar.omega:.6f}  k(alpha) = {k:.1e}"
        )
    print("  surface gravity vanishes on the degenerate horizon, as it must")


if __name__ == "__main__":
    main()
