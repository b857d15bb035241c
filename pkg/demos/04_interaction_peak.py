"""Interaction-enhanced QFI and the optimum U-bar (three atoms, three sites).

Repulsion reshapes the spectrum of the driven chain: near U-bar a pair of
eigenstates with large Fock-state overlap becomes nearly degenerate and
beats slowly, building up N-particle correlations between the outermost
sites. The first peak of F/T^2, tracked over a (T, U) grid of the
stroboscopic chain, is highest at U-bar ~ 1.92 J. The end-to-end
correlator G rises in the same region of the grid.

Writes interaction_peak.png next to this script if matplotlib is available.
"""

import numpy as np

from latticeqfi import (
    ModelParams,
    build_basis,
    find_Ubar,
    fock_state,
    scan_TU,
    ubar_from_grid,
)

basis = build_basis(3, 3)
params = ModelParams(M=3, N=3)
psi0 = fock_state(basis, (3, 0, 0))

t_axis = np.linspace(0.0, 110.0, 221)[1:]
u_axis = np.linspace(0.0, 4.0, 81)
print(f"scanning {t_axis.size} x {u_axis.size} grid on the stroboscopic chain...")
grid = scan_TU(params, psi0, t_axis, u_axis, method="generator", model="floquet",
               include_correlator=True, workers=1)
peak = ubar_from_grid(grid)
print(f"U-bar = {peak.u_bar:.3f} J  (F_max = {peak.f_max:.2f}, tau = {peak.tau:.1f}/J)")

refined = find_Ubar(params, psi0, u_axis=np.linspace(1.6, 2.3, 36),
                    t_window=np.linspace(0.0, 110.0, 441)[1:],
                    method="generator", model="floquet")
print(f"refined around the optimum: U-bar = {refined.u_bar:.3f} J")

k_ubar = int(np.argmin(np.abs(u_axis - peak.u_bar)))
k_zero = 0
column = grid.values[:, k_ubar]
print(f"\npeak height at U = 0: {np.max(grid.values[:, k_zero]):.2f}; "
      f"at U-bar: {np.max(column):.2f} "
      f"(x{np.max(column) / np.max(grid.values[:, k_zero]):.1f} enhancement)")
print(f"correlator G at (tau, U-bar): "
      f"{grid.correlators[int(np.argmax(column)), k_ubar]:.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping the figure")
else:
    import os

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.6))
    extent = (u_axis[0], u_axis[-1], t_axis[0], t_axis[-1])
    im1 = ax1.imshow(grid.values, origin="lower", aspect="auto", extent=extent)
    ax1.set_xlabel("U (J)")
    ax1.set_ylabel("T (1/J)")
    ax1.set_title("F / T$^2$")
    fig.colorbar(im1, ax=ax1)
    im2 = ax2.imshow(grid.correlators, origin="lower", aspect="auto", extent=extent)
    ax2.set_xlabel("U (J)")
    ax2.set_title("end-to-end correlator G")
    fig.colorbar(im2, ax=ax2)
    fig.tight_layout()
    target = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                          "interaction_peak.png")
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")
