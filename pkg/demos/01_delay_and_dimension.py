"""
Choosing the embedding delay and dimension
==========================================

A scalar frame is turned into phase-space points by sampling it at a fixed
delay: point j is (s(j), s(j+tau), ..., s(j+(m-1)*tau)).  Both knobs are
estimated from the frame itself — tau from the first minimum of the
average mutual information, m from the false-nearest-neighbor criterion.
"""

import numpy as np

import recurrex as rx

# A clean tone and a white-noise frame, both 20 ms at 16 kHz (320 samples).
sine = rx.frame_signal(rx.gen_synthetic("sine", 320, period=64.0))[0]
noise = rx.frame_signal(rx.gen_synthetic("white_noise", 320, seed=7))[0]

# The AMI curve measures (in nats) how much knowing s(i) tells you about
# s(i+lag).  For a periodic signal it dips near a quarter period.
for name, frame in (("sine", sine), ("noise", noise)):
    curve = rx.ami_curve(frame, max_lag=20)
    print(f"{name}: AMI(1..8) =", np.array2string(curve[:8], precision=3))

# estimate_tau_ami smooths the curve and takes its first local minimum.
tau_sine, _ = rx.estimate_tau_ami(sine)
tau_noise, _ = rx.estimate_tau_ami(noise)
print(f"\nselected tau: sine={tau_sine} (period 64 -> quarter is 16), "
      f"noise={tau_noise} (memoryless, so very small)")

# With tau fixed, the dimension m grows until false neighbors — points that
# look close only because the embedding is too flat — essentially vanish.
fractions = rx.fnn_fractions(sine, tau_sine)
print("\nsine false-neighbor fraction by dimension:")
for m, frac in enumerate(fractions, start=1):
    marker = " <- first below 1%" if frac < 0.01 and all(
        f >= 0.01 for f in fractions[:m - 1]) else ""
    print(f"  m={m}: {frac:.4f}{marker}")

# estimate_params runs both steps and records the evidence it used.
params = rx.estimate_params(sine)
print(f"\nestimate_params(sine): tau={params.tau}, m={params.m}")
print("meta keys:", sorted(params.method_meta))

# The embedded trajectory: one row per phase-space point.
traj = rx.embed(sine, params)
print(f"trajectory: {traj.points.shape[0]} points in R^{traj.points.shape[1]}")
