"""Generate fractional Brownian log-prices of different roughness, save one, read it back.

The Hurst index H sets the roughness; the variation exponent estimated from
the sampled path should come out near 1/H.
"""
import tempfile
from pathlib import Path

from vexgame.analysis import vex_estimate
from vexgame.pathgen import PathSpec, generate, read_path, write_path

for hurst in (0.3, 0.5, 0.7):
    path = generate(PathSpec(kind="fbm", hurst=hurst, n_points=2**16 + 1, seed=1))
    report = vex_estimate(path)
    print(f"H={hurst}: vex ~ {report.vex:.2f} (1/H = {1 / hurst:.2f}), final log-price {path.log_prices[-1]:+.3f}")

# deterministic families are handy for checking things by hand
line = generate(PathSpec(kind="log_linear", slope=0.8, n_points=5))
print("log-linear prices:", line.prices.round(4).tolist())

# the text format keeps every double exactly
with tempfile.TemporaryDirectory() as tmp:
    f = Path(tmp) / "path.csv"
    path = generate(PathSpec(kind="fbm", hurst=0.5, n_points=1025, seed=2))
    write_path(path, f)
    print("first lines of the file:", f.read_text().splitlines()[:3])
    print("read back identical:", read_path(f) == path)
