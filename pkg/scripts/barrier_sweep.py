#!/usr/bin/env python3
"""Mean-curvature lower barriers on every model family.

The flat-model barrier |H(t)|^2 >= 1/(1/|H_0|^2 - 2t/n) is attained by the
round sphere and holds strictly on the flat product; in a negatively curved
space form it fails (the 2n kbar |H|^2 term slows the blow-up down) and the
curvature-adjusted barrier is the one the geodesic sphere saturates.
"""

from pinchflow.flow import (
    CylinderFlow,
    HyperbolicSphereFlow,
    ProductSpheresFlow,
    SphereFlow,
    blowup_bound_check,
)

FAMILIES = [
    ("sphere S^8(2)", SphereFlow(8, 2, 2.0)),
    ("cylinder S^7(1) x R", CylinderFlow(8, 2, 1.0)),
    ("product S^7(1) x S^1(4)", ProductSpheresFlow(7, 1, 2, 1.0, 4.0)),
    ("hyperbolic sphere r0=0.5", HyperbolicSphereFlow(8, 2, 0.5, -1.0)),
    ("hyperbolic sphere r0=1.0", HyperbolicSphereFlow(8, 2, 1.0, -1.0)),
]


def main() -> None:
    print(f"{'family':<26} {'flat barrier':>13} {'equality':>9} "
          f"{'adjusted':>9} {'T<=n/2|H0|^2':>13}")
    for name, fam in FAMILIES:
        v = blowup_bound_check(fam)
        print(f"{name:<26} {str(v.barrier_ok):>13} {str(v.equality):>9} "
              f"{str(v.adjusted_ok):>9} {str(v.tmax_ok):>13}   "
              f"worst margin {v.worst_margin:+.2e}")


if __name__ == "__main__":
    main()
