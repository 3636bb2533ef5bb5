"""Disentanglement of a widely separated pair.

Two detectors share an initially entangled two-mode squeezed state and are
far apart.  Before the light cone (t < d) the detectors cannot signal to
each other, yet the shared vacuum already shifts their negativity relative
to an isolated pair.  Afterwards their mutual influence modulates when the
entanglement dies, so the disentanglement time depends on the separation.

Run:
  python3 demos/distant_pair.py
"""

import numpy as np

from udwent import dynamics as dy
from udwent.params import DetectorParams, InitialGaussianState, PairConfig


def main():
    p = DetectorParams.from_omega(1e-4, 2.3, lambda_cut_0=20.0, lambda_cut_1=20.0)

    print("relative negativity outside the light cone, d = 50")
    for ab in ((1.1, 4.5), (1.5, 0.2)):
        s = InitialGaussianState(*ab)
        a0, a1, a2, b = dy.en_rel_coefficients(0.0, 1.0, s, p)
        t = np.array([5.0, 20.0, 40.0, 49.0])
        e = dy.relative_negativity(t, PairConfig(p, 50.0), s, method="zeroth")
        print(f"  alpha, beta = {ab}: (a0, a1, a2)/b = ({a0 / b:.3f}, {a1 / b:.3f}, {a2 / b:.3f})")
        print("    E_rel(t) =", np.array2string(e, precision=3))

    s = InitialGaussianState(1.5, 0.2)
    z = dy.fit_z_params(p, s)
    t_plus = dy.t_de_estimates(s, p, z)[0]
    print("disentanglement time against separation, alpha, beta = (1.5, 0.2)")
    print(f"  isolated pair estimate t_dE = {t_plus:.1f}")
    for x in (4.4934, 6.0, 7.7253):
        d = x / p.omega
        r = dy.disentanglement_time(PairConfig(p, d), s)
        corr = dy.t_de_estimates(s, p, z, d)[2]
        print(f"  Omega d = {x:6.4f}: t_dE = {r.t_de:8.1f} (estimate {corr:8.1f}), "
              f"{len(r.revivals)} revivals in the next 200 periods")

    far = dy.disentanglement_time(PairConfig(p, 1e6), s, method="zeroth").t_de
    print(f"  d = 1e6 (no mutual influence): t_dE = {far:.1f}")


if __name__ == "__main__":
    main()
