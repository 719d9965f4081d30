"""Resolvent-norm grid sweep and epsilon-pseudospectra level data.

Sweeps ||(H_c - z)^{-1}|| over a rectangle via dense SVD at paired
truncation dimensions (N, 2N); every node carries a reliability flag.  The
exports (CSV for tables, JSON for contour plotters) land in demos_out/.
A coarse character map of the level sets is printed: higher levels hug the
spectral ray, and nothing of note happens outside the numerical range.
"""

import pathlib

from nsolab import Coupling, pseudospectra_grid
from nsolab.resolvent import contour_to_json, grid_to_csv

out = pathlib.Path("demos_out")
out.mkdir(exist_ok=True)

cp = Coupling(1j)
eps_levels = (10.0, 1.0, 0.5, 0.25)
grid = pseudospectra_grid(cp, (0.0, 6.0, 0.0, 6.0), (33, 33), eps_levels,
                          dim=64, workers=2)

reliable = sum(1 for s in grid.samples if s.reliable)
print(f"grid 33x33 over [0,6]^2 at dim 64: {reliable}/{len(grid.samples)} reliable")

nx, ny = grid.resolution
glyphs = " .:*#@"
print("\nlevel map (rows top to bottom are decreasing Im z):")
for j in reversed(range(ny)):
    row = ""
    for i in range(nx):
        norm = grid.samples[j * nx + i].norm
        level = sum(1 for e in eps_levels if norm >= 1.0 / e)
        row += glyphs[min(level + 1, len(glyphs) - 1)] if norm == norm else "?"
    print("  " + row)
print("  (darker = higher resolvent norm; the ridge is the spectral ray)")

grid_to_csv(grid, out / "pseudospectra_grid.csv")
contour_to_json(grid, out / "pseudospectra_contours.json")
print(f"\nwrote {out / 'pseudospectra_grid.csv'} and {out / 'pseudospectra_contours.json'}")
