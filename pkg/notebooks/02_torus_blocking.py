"""Blocking sets on the square torus and on an irrational L.

Run: python3 notebooks/02_torus_blocking.py   (about a minute)
"""

from gmpy2 import mpq

from flatblock import blocking_probe, fixture, format_scalar
from flatblock.blocking import polygon_coordinates


def show(report, S):
    T = report.triangulation
    for row in report.rows:
        pts = sorted(polygon_coordinates(T, S, b)[1] for b in row.blockers)
        shown = " ".join(f"({format_scalar(x)},{format_scalar(y)})" for x, y in pts[:6])
        more = "" if len(pts) <= 6 else f" ... {len(pts)} total"
        print(f"  L={format_scalar(row.L):>3} geodesics={row.geodesics:5d} size={row.size} {row.method}{' carried' if row.carried else ''}: {shown}{more}")


T1 = fixture("T1")
print("torus, O = A = 0")
show(blocking_probe(T1, (0, (0, 0)), (0, (0, 0)), 10, doublings=1), T1)
print("torus, O = 0, A = (1/2, 1/2)")
show(blocking_probe(T1, (0, (0, 0)), (0, (mpq(1, 2), mpq(1, 2))), 10, doublings=1), T1)

# On the irrational L the greedy blocking sets keep growing with the length.
LQ2 = fixture("LQ2")
print("LQ2, greedy")
show(blocking_probe(LQ2, (0, (mpq(1, 3), mpq(1, 2))), (1, (mpq(1, 2), mpq(3, 2))), 3, mode="greedy", doublings=2), LQ2)
