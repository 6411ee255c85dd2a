# %% [markdown]
# # Daubechies filters and the multilevel DWT
#
# Builds the db1..db8 lowpass filters, checks their defining identities,
# then splits a short test signal into sub-bands and puts it back together.

# %%
import numpy as np

from qrskit import Signal, daubechies_filter, dwt_decompose, reconstruct_detail, waverec

for order in range(1, 9):
    f = daubechies_filter(order)
    h = f.lowpass
    print(f"db{order}: {f.length:2d} taps  sum={h.sum():.12f}  energy={h @ h:.12f}")

# %% [markdown]
# Haar (db1) is the easiest one to read: averages go to the approximation
# band, pairwise differences to the detail band.

# %%
haar = daubechies_filter(1)
x = Signal(np.array([4.0, 2.0, 5.0, 5.0]), sample_rate_hz=1.0)
dec = dwt_decompose(x, haar, levels=1)
print("a1 =", dec.approximation(1))
print("d1 =", dec.detail(1))

# %% [markdown]
# A chirp sweeps through every band. Each detail level, projected back onto
# the input grid, carries roughly one octave; summing the bands and the
# coarsest approximation recovers the input to machine precision.

# %%
fs = 360.0
t = np.arange(2048) / fs
chirp = Signal(np.sin(2 * np.pi * (1 + 30 * t) * t), fs)
db6 = daubechies_filter(6)
dec = dwt_decompose(chirp, db6, levels=5)

for k in range(1, 6):
    band = reconstruct_detail(dec, k).samples
    lo, hi = fs / 2 ** (k + 1), fs / 2 ** k
    print(f"d{k} ({lo:6.1f}-{hi:6.1f} Hz): energy {band @ band:8.2f}")

err = np.max(np.abs(waverec(dec) - chirp.samples))
print(f"reconstruction error: {err:.2e}")
