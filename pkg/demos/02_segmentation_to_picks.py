"""From a segmentation mask to validated breakout picks.

Walks the core post-processing chain: each mask row is a circular binary
function of azimuth; contiguous intervals become candidate picks (left
edge, width, midpoint azimuth); the symmetry rule then keeps only depths
with a near-diametral pair.
"""

import numpy as np

from breakoutkit import GridGeometry, MaskGrid, picks_from_mask, validate

g = GridGeometry(n_depth=12, n_azimuth=360, depth_start=50.0, depth_step=0.1)
mask = np.zeros(g.shape(), dtype=np.uint8)

# a symmetric breakout pair over the first eight depths
mask[0:8, 120:165] = 1
mask[0:8, 300:345] = 1
# a one-sided (keyseat-like) interval below it
mask[9:12, 40:75] = 1
# narrow speckle that the 10-degree width floor should drop
mask[3, 200:205] = 1

picks = picks_from_mask(MaskGrid(g, mask), source="segnet")
print(f"candidate picks: {len(picks)}")
for p in list(picks)[:4]:
    print(
        f"  depth {p.depth:6.2f} m  left {p.left_deg:6.1f}  "
        f"width {p.width_deg:5.1f}  azimuth {p.azimuth_deg:6.1f}  {p.status}"
    )
print("  ...")

outcome = validate(picks, g.depth_step)
print(f"\nafter symmetry validation: {len(outcome.retained)} retained, "
      f"{len(outcome.rejected)} rejected")
reasons = {}
for p in outcome.rejected:
    reasons[p.status] = reasons.get(p.status, 0) + 1
for status, count in sorted(reasons.items()):
    print(f"  {status}: {count}")

# note the 5-column speckle at depth index 3 produced no pick at all:
depths_with_picks = {round(p.depth, 2) for p in picks}
print(f"\ndepths with picks: {sorted(depths_with_picks)}")
