"""Random graph surfaces: conserved charge and strict mass maximality.

Perturbs the neck slice by seeded random height fields, confirming that the
flux charge never moves (divergence theorem) while the charged Hawking mass
strictly drops -- the quantitative face of local maximality at a strictly
stable neck.
"""

import numpy as np

from chmass import (
    GraphSurface,
    build_grid,
    induced_geometry,
    integrate_profile,
    local_max_experiment,
    random_c2_field,
)


def main():
    a, q = 0.5, 0.3
    prof = integrate_profile(a, q, 1.0, s_max=1.0)
    grid = build_grid(32, 64)

    print("=== ten random graphs over the neck (amplitude 0.05) ===")
    print("  seed     area       charge          m_CH        excess")
    for seed in range(10):
        fld = random_c2_field(grid, seed, 4, 0.05)
        geom = induced_geometry(GraphSurface(prof, 0.0, fld))
        gb = geom.integral(geom.gauss_k) - 4 * np.pi
        print(
            f"  {seed:4d}  {geom.area:.6f}  {geom.charge:.12f}  {geom.mch:.10f}"
            f"  {geom.mch - prof.m:+.3e}   (Gauss-Bonnet gap {gb:+.1e})"
        )
    print(f"\n  slice values for reference: area = {np.pi:.6f}, charge = {q}, m = {prof.m:.10f}")
    print("  charge is pinned, the area element and mass respond at second order\n")

    print("=== local maximality experiment (200 seeded samples) ===")
    rep = local_max_experiment(a, q, 200, 0.02, 1)
    print(f"  amplitude {rep.amplitude}, base seed {rep.seed}")
    print(f"  max mass excess over {rep.n_samples} samples: {rep.max_excess:+.3e}")
    print(f"  samples within 1e-9 of equality: {rep.n_near_equality}")
    print(f"  every near-equality sample is a slice: {rep.all_near_equality_are_slices}")
    print("  (the strict inequality is the generic outcome; equality forces a slice)")


if __name__ == "__main__":
    main()
