"""Independent reference computations used by the tests.

Nothing here imports flatblock: each oracle works from first principles
(integer lattices, permutations, floating point with generous margins).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath


def primitive_vectors(L):
    """Primitive integer vectors of Euclidean length <= L."""
    out = []
    R = int(math.floor(L))
    for p in range(-R, R + 1):
        for q in range(-R, R + 1):
            if (p, q) != (0, 0) and p * p + q * q <= L * L and math.gcd(p, q) == 1:
                out.append((p, q))
    return out


def torus_midpoints_same_point(L):
    """Midpoint classes of O -> O geodesics on the unit torus, O = (0,0)."""
    return {(Fraction(p, 2) % 1, Fraction(q, 2) % 1) for p, q in primitive_vectors(L)}


def torus_half_vectors(L):
    """Holonomies of geodesics (0,0) -> (1/2,1/2) on the unit torus.

    v = (a/2, b/2) with a, b odd; the open segment avoids both points
    exactly when gcd(a, b) = 1.
    """
    out = []
    R = int(math.floor(2 * L))
    for a in range(-R, R + 1, 1):
        for b in range(-R, R + 1, 1):
            if a % 2 and b % 2 and math.gcd(a, b) == 1 and a * a + b * b <= 4 * L * L:
                out.append((Fraction(a, 2), Fraction(b, 2)))
    return out


def torus_half_midpoints(L):
    return {(v[0] / 2 % 1, v[1] / 2 % 1) for v in torus_half_vectors(L)}


def brute_force_hitting_set(sets, n_elements):
    """Smallest family of candidate indices covering 0..n-1 (exhaustive)."""
    cands = list(range(len(sets)))
    for k in range(0, len(cands) + 1):
        for combo in itertools.combinations(cands, k):
            covered = set()
            for c in combo:
                covered |= sets[c]
            if len(covered) == n_elements:
                return k
    return None


def quad_sign(a: Fraction, b: Fraction, d: int) -> int:
    """Sign of a + b sqrt(d) by 200-digit floating point."""
    with mpmath.workdps(200):
        v = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(d)
        if abs(v) < mpmath.mpf(10) ** -150:
            return 0
        return 1 if v > 0 else -1


# three-square L as an origami: square 0 at (0,0), 1 at (1,0), 2 at (0,1)
L3_RIGHT = {0: 1, 1: 0, 2: 2}
L3_UP = {0: 2, 2: 0, 1: 1}


def origami_cycles(perm):
    seen, out = set(), []
    for s in sorted(perm):
        if s in seen:
            continue
        cyc = []
        x = s
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        out.append(cyc)
    return out


def l3_saddle_connection_count(L):
    """All corners of the three-square L are one cone point of angle 6 pi,
    so each primitive vector is the holonomy of exactly three saddle
    connections (one per sheet) and non-primitive vectors of none."""
    return 3 * len(primitive_vectors(L))


def torus_trace(start, d, length):
    """Endpoint of the straight segment on R^2/Z^2 (floats)."""
    n = math.hypot(*d)
    return ((start[0] + d[0] / n * length) % 1.0, (start[1] + d[1] / n * length) % 1.0)
