# %% [markdown]
# # Finding P, Q, R, S and T on a synthetic recording
#
# The generator places Gaussian bumps at known sample indices, so the
# detector output can be scored exactly.

# %%
import numpy as np

from qrskit import DetectorConfig, SynthConfig, detect, generate

cfg = SynthConfig(n_beats=40, rr_s=0.8, rr_jitter=0.05, noise_std_mv=0.08, seed=4)
sig, truth = generate(cfg)
print(f"{len(sig)} samples at {sig.sample_rate_hz:g} Hz, {cfg.n_beats} beats")

# %% [markdown]
# `detect` returns the labelled peaks plus every intermediate stage, which
# is handy for seeing why a beat was or was not picked up.

# %%
peaks, trace = detect(sig)
for name, stage in trace.stages().items():
    print(f"{name:>10}: peak |x| = {np.max(np.abs(stage.samples)):.3g}")
print(f"threshold = {trace.threshold:.3f}, windows = {len(trace.windows)}")

# %%
tol = round(0.05 * sig.sample_rate_hz)
for label in "PQRST":
    found, want = peaks.indices(label), truth.indices[label]
    hits = sum(np.min(np.abs(found - w)) <= tol for w in want) if found.size else 0
    print(f"{label}: {found.size} found, {hits}/{want.size} within 50 ms")

# %% [markdown]
# Detection depends only on the waveform's shape: scaling the input leaves
# every index unchanged.

# %%
louder, _ = detect(sig.with_samples(sig.samples * 10))
print("same indices after x10:", [p.index for p in louder.peaks] == [p.index for p in peaks.peaks])

# %% [markdown]
# A wider integration window smooths more but starts to merge neighbouring
# lobes on fast rhythms. Count records with any missed or extra R peak over
# twenty noisy 0.6 s recordings.

# %%
records = [generate(SynthConfig(n_beats=60, rr_s=0.6, rr_jitter=0.05, noise_std_mv=0.1, seed=s)) for s in range(20)]
for window in (80.0, 100.0, 150.0):
    bad = 0
    for rec, rec_truth in records:
        r = detect(rec, DetectorConfig(window_ms=window))[0].indices("R")
        want = rec_truth.indices["R"]
        bad += r.size != want.size or not np.all(np.abs(r - want) <= tol)
    print(f"window {window:5.0f} ms: {bad}/20 records imperfect")
