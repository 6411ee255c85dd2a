# %% [markdown]
# # From peaks to findings
#
# Intervals and amplitudes are compared with normal-rhythm ranges. Here the
# beats come every 0.645 s, which is faster than the normal R-R band.

# %%
import json

from qrskit import RuleRow, SynthConfig, analyze, builtin_rules, detect, generate
from qrskit.signal_io import dumps, report_to_dict

sig, _ = generate(SynthConfig(n_beats=20, rr_s=0.645))
peaks, _ = detect(sig)
report = analyze(sig, peaks)

print("mean R-R:", report.intervals.RR.mean().round(4), "s")
for flag in report.flags:
    print(f"{flag.rule}: measured {flag.measured:.4f} vs bound {flag.bound:.4f} -> {flag.finding}")

# %% [markdown]
# The built-in table:

# %%
for row in builtin_rules():
    lo, hi = row.bounds({"R": 1.6})
    print(f"{row.measure:6} [{lo:.3f}, {hi:.3f}] {row.units:2}  below: {row.below_finding}  above: {row.above_finding}")

# %% [markdown]
# Tables are plain data, so a stricter custom band is one row away. The
# same rows can be saved to JSON and passed with `--rules` or `QRSKIT_RULES`.

# %%
strict = [RuleRow("RR_s", 0.60, 0.64, below_finding="fast", above_finding="slow-ish")]
print([f.finding for f in analyze(sig, peaks, rules=strict).flags])

# %% [markdown]
# The JSON report as the CLI writes it (truncated):

# %%
text = dumps(report_to_dict(report))
print(text[:400], "...")
print(sorted(json.loads(text)))
