"""
From trajectory to recurrence plot
==================================

Thresholding the pairwise distance matrix of an embedded trajectory gives
a binary recurrence plot: cell (i, j) is black when the trajectory visits
nearly the same state at times i and j.  The threshold can be an absolute
distance, a multiple of the frame's standard deviation, or — the usual
choice here — whatever value realizes a target recurrence rate.
"""

import tempfile
from pathlib import Path

import numpy as np

import recurrex as rx

frame = rx.frame_signal(rx.gen_synthetic("sine", 320, period=64.0))[0]
params = rx.estimate_params(frame)
traj = rx.embed(frame, params)

# Distances under the three supported norms (q = 1, 2, inf).
for q in (1, 2, np.inf):
    dist = rx.pairwise_distances(traj, q=q)
    print(f"norm q={q}: mean distance {dist.d.mean():.3f}, "
          f"max {dist.d.max():.3f}")

dist = rx.pairwise_distances(traj, q=1)  # Manhattan from here on

# Three ways to pick epsilon.  fixed_rr solves for the threshold whose
# plot has (about) the requested fraction of black cells.
for crit in (rx.fixed_value(0.3), rx.sigma_ratio(0.5), rx.fixed_rr(0.15)):
    sigma = float(np.std(frame.samples))
    rp = rx.recurrence_plot(dist, crit, frame_sigma=sigma)
    print(f"{crit.kind}({crit.value}): epsilon={rp.epsilon:.4f}, "
          f"RR={rp.recurrence_rate():.4f}")

# The plot itself is a plain uint8 matrix; downsample it into ASCII to see
# the diagonal ridges a periodic signal produces.
rp = rx.recurrence_plot(dist, rx.fixed_rr(0.15))
step = max(1, rp.size // 48)
print(f"\n{rp.size}x{rp.size} plot, every {step}th cell "
      "('#' recurrent, '.' not):")
for row in rp.r[::step]:
    print("  " + "".join("#" if cell else "." for cell in row[::step]))

# write_pgm saves the full-resolution plot as a portable graymap that any
# image viewer opens; black cells are ink (gray value 0).
out = Path(tempfile.mkdtemp()) / "sine.pgm"
rx.write_pgm(out, rp)
print(f"\nfull plot written to {out}")
