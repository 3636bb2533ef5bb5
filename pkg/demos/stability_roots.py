"""Characteristic roots and the stability of a strongly coupled pair.

The retarded mutual coupling makes the normal-mode equation transcendental.
Its roots in the complex K plane decide whether the pair is stable: a root
with negative imaginary part is a growing mode.  Lowering Omega at fixed
coupling moves the pair inside its radius of instability.

Run:
  python3 demos/stability_roots.py
"""

import numpy as np

from udwent import stability as stab
from udwent.params import DetectorParams

BOX = (6.0, -1.0, 2.2)


def main():
    for omega in (0.9000202, 0.8, 0.3):
        p = DetectorParams.from_omega(0.25, omega)
        rep = stab.classify_stability(p, 1.0)
        print(f"Omega = {omega}: d_ins = {stab.d_ins(p):.4f}, pair at d = 1 is {rep.classification}")
        for r in stab.characteristic_roots(p, 1.0, "+", BOX):
            print(f"  K = {r.k.real:+.4f} {r.k.imag:+.4f}i  {r.kind:17s} residual {r.residual:.1e}")

    print("sweep at gamma = 0.05, Omega = 0.9")
    p = DetectorParams.from_omega(0.05, 0.9)
    for d in np.geomspace(0.7, 20, 6):
        rep = stab.classify_stability(p, d)
        slowest = min(r.k.imag for r in rep.roots)
        print(f"  d = {d:6.2f}: {rep.classification}, slowest decay rate {slowest:.4f}")


if __name__ == "__main__":
    main()
