"""Independent oracle computations to freeze expected test values."""
from fractions import Fraction
from itertools import product
import math

import sympy as sp
import mpmath as mp

# --- hexagon = unit square + right triangle, brute force ---
sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
tr = [(0, 0), (1, 0), (0, 1)]
pts = sorted({(a + c, b + d) for (a, b) in sq for (c, d) in tr})
print("candidate sum points:", pts)

# 2D hull via full enumeration: p is a vertex iff p not in conv(others).
# conv membership by enumerating all triangles (Caratheodory in 2D).
def in_conv(p, S):
    S = [s for s in S if s != p]
    for a, b, c in product(S, repeat=3):
        # barycentric solve
        M = sp.Matrix([[a[0], b[0], c[0]], [a[1], b[1], c[1]], [1, 1, 1]])
        v = sp.Matrix([p[0], p[1], 1])
        if M.det() == 0:
            continue
        w = M.solve(v)
        if all(x >= 0 for x in w):
            return True
    return False

hull = [p for p in pts if not in_conv(p, pts)]
print("hexagon vertices:", hull)

def shoelace(ordered):
    s = 0
    for i in range(len(ordered)):
        x1, y1 = ordered[i]
        x2, y2 = ordered[(i + 1) % len(ordered)]
        s += x1 * y2 - x2 * y1
    return Fraction(abs(s), 2)

# order hull by angle around centroid
cx = Fraction(sum(p[0] for p in hull), len(hull))
cy = Fraction(sum(p[1] for p in hull), len(hull))
ordered = sorted(hull, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
print("area of square+triangle:", shoelace(ordered))

# volume at lambda=(2,1): dilate square by 2
sq2 = [(2 * a, 2 * b) for a, b in sq]
pts21 = sorted({(a + c, b + d) for (a, b) in sq2 for (c, d) in tr})
hull21 = [p for p in pts21 if not in_conv(p, pts21)]
cx = Fraction(sum(p[0] for p in hull21), len(hull21))
cy = Fraction(sum(p[1] for p in hull21), len(hull21))
ordered21 = sorted(hull21, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
print("area at (2,1):", shoelace(ordered21))

# interpolate coefficients from volumes at (1,1), (2,1), (1,2): c20 l1^2 + c11 l1 l2 + c02 l2^2
def area_at(l1, l2):
    s1 = [(l1 * a, l1 * b) for a, b in sq]
    t1 = [(l2 * a, l2 * b) for a, b in tr]
    ps = sorted({(a + c, b + d) for (a, b) in s1 for (c, d) in t1})
    h = [p for p in ps if not in_conv(p, ps)]
    cx = Fraction(sum(p[0] for p in h), len(h))
    cy = Fraction(sum(p[1] for p in h), len(h))
    o = sorted(h, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    return shoelace(o)

A = sp.Matrix([[1, 1, 1], [4, 2, 1], [1, 2, 4]])
b = sp.Matrix([area_at(1, 1), area_at(2, 1), area_at(1, 2)])
coeffs = A.solve(b)
print("coefficients (c20, c11, c02):", list(coeffs))

# --- capacity closed form ---
t = sp.symbols("t", positive=True)
expr = t + 2 + 1 / (2 * t)
cap = sp.minimum(expr, t, sp.Interval.open(0, sp.oo))
print("Cap square/triangle:", sp.nsimplify(cap), "=", float(cap))
print("2+sqrt2 =", float(2 + sp.sqrt(2)))

# integer lambda example
mp.mp.dps = 40
print("round(1024*sqrt(2)) =", int(mp.nint(1024 * mp.sqrt(2))))

# --- required_samples N = ceil(3 A e eps^-2 ln(4/delta)) ---
for Aval, eps, delta in [(4, "0.1", "0.05"), (1, "1", "0.5")]:
    val = 3 * Aval * mp.e * mp.mpf(eps) ** -2 * mp.log(4 / mp.mpf(delta))
    print(f"N(A={Aval}, eps={eps}, delta={delta}) = ceil({val}) =", int(mp.ceil(val)))

# --- a_upper for n=2,k=2: (e(n+k-1)/(k-1))^(k-1) = 3e ---
print("a_upper(2,2) = 3e =", float(3 * mp.e))

# --- cap_pair oracle: inf over t>0 of sum_{j=0}^{d} t^j / t^(d-a) ---
for d, a in [(2, 1), (1, 1), (0, 0), (3, 1), (3, 2), (4, 2), (5, 0), (2, 2)]:
    if d == 0:
        print(f"cap_pair(d={d},a={a}) = 1")
        continue
    f = sum(t**j for j in range(d + 1)) / t ** (d - a)
    inf = sp.minimum(f, t, sp.Interval.open(0, sp.oo))
    print(f"cap_pair(d={d},a={a}) =", sp.nsimplify(inf), "=", float(inf))

# --- Gurvits sandwich numbers for square/triangle ---
print("n!/n^n * Cap =", float(cap) * 2 / 4)

# --- chord extent on hexagon at z=(1,1), d=(0,1) ---
# hexagon facets by inspection of hull
print("hexagon hull:", sorted(hull))
