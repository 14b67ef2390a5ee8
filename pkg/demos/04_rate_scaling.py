"""How the double-exponential rate scales with the model parameters.

Fits the inner growth rate lambda for a small grid of (eta, hbar) values
and plots lambda against eta (linear through the origin) and against
hbar (inverse).  This is the product's own reproduction of the rate
panels; run the `fig1b`/`fig1c` presets for the full-size version.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ngpmap import (
    ModelParams,
    fit_superexponential,
    make_gaussian,
    make_grid,
    run_pair_experiment,
    superexponential_window,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

EPSILON = 1e-5
grid = make_grid(4096)
state = make_gaussian(grid, sigma=10.0)


def fitted_rate(eta, hbar):
    params = ModelParams(g=1.0, eta=eta, hbar_eff=hbar)
    traj = run_pair_experiment(state, params, EPSILON, 150)
    t, y = traj.series("distance")
    scale = (EPSILON / hbar) ** 2
    window = superexponential_window(t, y, scale, exclude=traj.terminated_flags())
    return fit_superexponential(t, y, scale, window).rate


etas = np.array([0.01, 0.02, 0.03, 0.05])
rates_vs_eta = np.array([fitted_rate(e, 1.0) for e in etas])
slope = np.sum(rates_vs_eta * etas) / np.sum(etas**2)
print("lambda vs eta at hbar=1:", np.round(rates_vs_eta, 4).tolist())
print(f"through-origin slope = {slope:.2f} (proportional to eta)")

hbars = np.array([0.5, 0.7, 1.0])
rates_vs_hbar = np.array([fitted_rate(0.05, h) for h in hbars])
print("lambda vs hbar at eta=0.05:", np.round(rates_vs_hbar, 4).tolist())
print(f"lambda(0.5)/lambda(1.0) = {rates_vs_hbar[0] / rates_vs_hbar[-1]:.2f} "
      "(inverse-hbar scaling predicts 2)")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5), constrained_layout=True)
ax1.plot(etas, rates_vs_eta, "o")
ax1.plot([0, etas[-1]], [0, slope * etas[-1]], "-", lw=1)
ax1.set_xlabel("eta")
ax1.set_ylabel("lambda")
ax1.set_xlim(left=0)
ax1.set_ylim(bottom=0)

ax2.plot(hbars, rates_vs_hbar, "o")
hh = np.linspace(hbars[0], hbars[-1], 100)
ax2.plot(hh, rates_vs_hbar[-1] / hh, "-", lw=1)
ax2.set_xlabel("hbar_eff")
ax2.set_ylabel("lambda")

fig.savefig(OUT / "04_rate_scaling.png", dpi=150)
print(f"wrote {OUT / '04_rate_scaling.png'}")
