"""The electrostatic system, a divergence identity, and area-charge bounds.

Both model families solve the static system exactly, so every residual is an
implementation meter.  The divergence (Robinson-Shen type) identity is
rebuilt from nested finite differences and converges at second order.  The
horizon area-charge bound holds across the admissible family even where its
sufficient hypothesis sup |E|^2 <= Lambda fails.
"""

import math


from chmass import (
    ModelParams,
    area_charge_report,
    nariai_from_alpha,
    params_from_neck,
    robinson_shen_residual,
    verify_einstein_maxwell_static,
)


def main():
    rnds = params_from_neck(0.5, 0.3, 1.0)
    desitter = ModelParams(0.0, 0.0, 1.0)
    nariai = nariai_from_alpha(0.8, 1.0)

    print("=== static system residuals (closed-form derivatives) ===")
    for label, model in (("RNdS neck family", rnds), ("de Sitter", desitter), ("Nariai", nariai)):
        rep = verify_einstein_maxwell_static(model, samples=32)
        worst = max(rep.residuals.values())
        fd = max(rep.fd_gaps.values())
        print(f"  {label:18s} max residual {worst:.1e}   FD double-entry gap {fd:.1e}")
    print()

    print("=== divergence identity, nested finite differences ===")
    print("      h        residual (RNdS at r = 0.8)")
    prev = None
    for h in (8e-3, 4e-3, 2e-3, 1e-3):
        res = robinson_shen_residual(rnds, 0.8, h=h)
        order = f"   order {math.log2(prev / res):.2f}" if prev else ""
        print(f"  {h:7.0e}   {res:.3e}{order}")
        prev = res
    print("  halving the step quarters the residual: clean second order\n")

    print("=== horizon area-charge bounds ===")
    for label, model in (("RNdS neck family", rnds), ("de Sitter", desitter), ("Nariai", nariai)):
        rep = area_charge_report(model)
        flag = "holds" if rep.hypothesis_sup_e2_le_lambda else "FAILS"
        print(f"  {label}: sup |E|^2 = {rep.sup_e2:.4f}  (hypothesis {flag})")
        for c in rep.components:
            print(
                f"    horizon r = {c.r:.6f}: k = {c.k:.3e},  "
                f"Lambda|dN| + 48 pi^2 Q^2/|dN| = {c.bound_lhs / math.pi:.4f} pi"
                f"  <= 12 pi: {c.satisfied}"
            )
        print(f"    weighted sum {rep.weighted_sum_lhs:.6f} <= {rep.weighted_sum_rhs:.6f}")
    print()
    print("the de Sitter horizon saturates the bound (12 pi) exactly; the")
    print("charged family sits strictly below it even at the inner horizon,")
    print("where the hypothesis itself is violated -- reported, never assumed")


if __name__ == "__main__":
    main()
