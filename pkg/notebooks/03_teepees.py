"""Rectangles and teepees in the incomplete directions of LX.

Run: python3 notebooks/03_teepees.py   (about half a minute)
"""

from gmpy2 import mpq

from flatblock import blocked_fraction, build_teepee, clearance, direction_scan, fixture, format_scalar, normalize_for_teepee

LX = fixture("LX")
dirs = [dv for dv, st, _ in direction_scan(LX, 4).directions if st == "incomplete"]
print("incomplete directions:", [tuple(format_scalar(c) for c in dv.vector) for dv in dirs])

dv = dirs[0]
setup = normalize_for_teepee(LX, dv)
s = clearance(setup)
print(f"direction {tuple(map(format_scalar, dv.vector))}: gamma length {format_scalar(setup.length)}, clearance {format_scalar(s)}")
for k in range(6):
    tp = build_teepee(setup, s / 2**k)
    print(
        f"  eps=s/{2**k:<3d} wraps={tp.wraps} y={format_scalar(tp.y):>12} card={tp.card:4d} "
        f"bound={float(tp.bound):8.2f} members valid={not tp.validate()}"
    )

# a point of the cylinder on one member: how many members pass through it?
tp = build_teepee(setup, s / 8)
xA, yA = tp.A_dev
k = tp.ks[len(tp.ks) // 2]
h = mpq(1, 2)
B = tp.cylinder_point(k + (xA - k) * (1 - h) / (1 + yA), h)
fr = blocked_fraction(tp, B)
print(f"blocked {fr.count} of {fr.card} members; Thales ratio {format_scalar(fr.rho)}")
