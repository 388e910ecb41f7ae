"""Cylinder decompositions on the built-in L-shaped surfaces.

Run: python3 notebooks/01_cylinders.py
"""

from flatblock import decompose_direction, direction_scan, fixture, format_scalar, pure_periodicity_check

# Square-tiled L: every rational direction splits into cylinders of
# commensurable widths, so the flow in that direction is periodic.
L3 = fixture("L3")
for d in [(1, 0), (1, 1), (2, 1)]:
    dec = decompose_direction(L3, d)
    v = pure_periodicity_check(dec)
    widths = ", ".join(format_scalar(c.width) for c in dec.cylinders)
    print(f"L3 {d}: widths [{widths}] -> {v.kind}, period {format_scalar(v.period)}")

# Golden L: still decomposes in every saddle connection direction, but the
# horizontal widths are 1 and the golden ratio.
LG = fixture("LG")
v = pure_periodicity_check(decompose_direction(LG, (1, 0)))
print("LG horizontal:", v.kind, [format_scalar(w) for w in v.widths])

# A census: how often each verdict shows up among directions of short
# saddle connections.
for name in ("L3", "LG", "LQ2", "LX"):
    r = direction_scan(fixture(name), 4)
    print(f"{name:4s}", r.counts)
