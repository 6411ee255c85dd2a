# %% [markdown]
# # The `qrskit` command line
#
# Drives the same pipeline from a shell. Everything is written into a
# temporary directory.

# %%
import json
import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp(prefix="qrskit-demo-"))


def qrskit(*args):
    result = subprocess.run([sys.executable, "-m", "qrskit", *map(str, args)], capture_output=True, text=True)
    print(f"$ qrskit {' '.join(map(str, args))}  -> exit {result.returncode}")
    if result.stderr:
        print(result.stderr.strip())
    return result


# %%
qrskit("synth", "-o", work / "ecg.csv", "--beats", 20, "--rr-s", 0.645, "--seed", 1)
qrskit("analyze", work / "ecg.csv", "--rate", 360, "-o", work / "report.json")
report = json.loads((work / "report.json").read_text())
print([f["finding"] for f in report["flags"]])

# %% [markdown]
# `plot` writes an SVG with the labelled peaks plus one SVG per stage.

# %%
qrskit("plot", work / "ecg.csv", "--rate", 360, "-o", work / "plots")
print(sorted(p.name for p in (work / "plots").iterdir()))

# %% [markdown]
# Exit codes: 1 when the input holds no beats, 2 for bad usage.

# %%
(work / "flat.csv").write_text("0\n" * 4000)
qrskit("detect", work / "flat.csv", "--rate", 360)
qrskit("detect", work / "ecg.csv", "--rate", 360, "--window-ms", -1)
