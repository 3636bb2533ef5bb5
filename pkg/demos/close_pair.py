"""Entanglement of a closely spaced detector pair.

Two detectors start in their ground states, separated by d = 0.01 and weakly
coupled to a massless field (gamma = 1e-4, Omega = 2.3, Lambda = 25).  The
pair becomes entangled within a fraction of a period, settles onto a
transient plateau after the superradiant mode has decayed, and finally
relaxes to a small residual value set only by the field.

Run:
  python3 demos/close_pair.py [--plot close_pair.png]
"""

import argparse
import math

import numpy as np

from udwent import dynamics as dy
from udwent import late_time as lt
from udwent import stability as stab
from udwent.modes import reduced_params
from udwent.params import DetectorParams, InitialGaussianState, PairConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--plot", help="save a figure of Sigma(t) to this path")
    args = ap.parse_args()

    p = DetectorParams.from_omega(1e-4, 2.3, lambda_cut_0=25.0, lambda_cut_1=25.0)
    cfg = PairConfig(p, 0.01)
    ground = InitialGaussianState(1.0, 1.0)

    print("length scales")
    print(f"  radius of instability d_ins = {stab.d_ins(p):.4g}")
    print(f"  merge distance        d_min = {stab.d_min(p):.4g}")
    print(f"  entanglement distance d_ent = {lt.entanglement_distance(p).d_ent:.4g}")

    rp = reduced_params(cfg)
    beat = math.pi / (rp.omega_tilde_minus - rp.omega_tilde_plus)
    print("normal modes of the pair")
    print(f"  1/gamma_+ = {1 / rp.gamma_plus:.2f}   1/gamma_- = {1 / rp.gamma_minus:.4g}")
    print(f"  beat period = {beat:.3f}")

    onset = dy.entanglement_onset(cfg, ground, 1.0, method="short_distance", n=200)
    est = dy.entanglement_creation(cfg, ground)
    print("stage 1: creation")
    print(f"  Sigma first turns negative at t = {onset:.3f} (estimate {est.t_ent:.3f})")

    print("stage 2: transient plateau")
    print(f"  predicted Sigma = {dy.transient_sigma(cfg, ground):.4f}")
    for t in (1e3, 5e3, 2e4):
        s = dy.sigma_series(t + np.arange(0.0, beat, 0.1), cfg, ground, method="short_distance")
        print(f"  t = {t:7.0f}: Sigma in [{s.min():.4f}, {s.max():.4f}]")

    print("stage 3: residual entanglement")
    t_late = 20 / rp.gamma_minus
    for ab in ((1.0, 1.0), (1.1, 4.5), (1.5, 0.2)):
        s = dy.sigma_series(np.array([t_late]), cfg, InitialGaussianState(*ab), method="short_distance")[0]
        print(f"  alpha, beta = {ab}: Sigma({t_late:.3g}) = {s:.5e}")
    print(f"  steady state from the field modes: {lt.sigma_late(cfg):.5e}")

    if args.plot:
        import matplotlib.pyplot as plt

        t = np.concatenate([np.linspace(0, 3, 300), np.geomspace(3, 1e5, 4000)])
        s = dy.sigma_series(t, cfg, ground, method="short_distance")
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ax.semilogx(t[1:], s[1:], lw=0.6)
        ax.axhline(0, color="k", lw=0.5)
        ax.set_xlabel("t")
        ax.set_ylabel("Sigma")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"saved {args.plot}")


if __name__ == "__main__":
    main()
